//! Bounded distance equivalence to a lattice: classification, geometric
//! representations, boundedness scans and the F_k prefix family.

mod fk;
mod representation;
mod scan;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::{eigen_classify, ModulusClass, SpectralReport};
use crate::substitution::Substitution;

pub use fk::{fk_build, fk_parikh, fk_word, FkFamily, FK_FUNCTIONAL};
pub use representation::{build_representation, Coord, GeometricRepresentation};
pub use scan::{
    block_maxima, factor_functional_bound_check, growth_verdict, scan_boundedness, scan_normal,
    scan_series, scan_word, FactorCheck, Normal, ScanOutcome, ScanReport, ScanReportJson, ScanScalar,
    ScanVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    /// Some eigenvalue has modulus `< 1`: a non-trivial representation exists.
    Guaranteed,
    /// Primitive and every eigenvalue has modulus `> 1`: no representation exists.
    Impossible,
    Open,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Guaranteed => "GUARANTEED",
            VerdictKind::Impossible => "IMPOSSIBLE",
            VerdictKind::Open => "OPEN",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BdlVerdict {
    pub kind: VerdictKind,
    pub min_modulus_class: ModulusClass,
    pub primitive: bool,
    /// Certainly some `|λ| < 1`.
    pub some_modulus_below_one: bool,
    /// Some `|λ| <= 1`; `None` when only uncertain eigenvalues could decide.
    pub some_modulus_at_most_one: Option<bool>,
    pub warnings: Vec<String>,
    pub spectrum: SpectralReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BdlVerdictJson {
    pub verdict: VerdictKind,
    pub min_modulus_class: ModulusClass,
    pub primitive: bool,
    pub some_modulus_below_one: bool,
    pub some_modulus_at_most_one: Option<bool>,
    pub warnings: Vec<String>,
    pub moduli: Vec<f64>,
}

impl BdlVerdict {
    pub fn to_json(&self) -> BdlVerdictJson {
        BdlVerdictJson {
            verdict: self.kind,
            min_modulus_class: self.min_modulus_class,
            primitive: self.primitive,
            some_modulus_below_one: self.some_modulus_below_one,
            some_modulus_at_most_one: self.some_modulus_at_most_one,
            warnings: self.warnings.clone(),
            moduli: self.spectrum.moduli(),
        }
    }
}

pub fn classify(s: &Substitution, tol: f64) -> Result<BdlVerdict> {
    let spectrum = eigen_classify(s.incidence(), tol)?;
    Ok(classify_spectrum(spectrum, s.is_primitive()))
}

pub fn classify_spectrum(spectrum: SpectralReport, primitive: bool) -> BdlVerdict {
    let mut warnings = Vec::new();
    let kind = if spectrum.has_modulus_below_one() {
        VerdictKind::Guaranteed
    } else if spectrum.all_gt1() {
        if primitive {
            VerdictKind::Impossible
        } else {
            warnings.push(
                "every eigenvalue has modulus > 1 but the substitution is not primitive; \
                 the non-existence criterion does not apply"
                    .to_string(),
            );
            VerdictKind::Open
        }
    } else {
        if spectrum.has_class(ModulusClass::BoundaryUncertain) {
            warnings.push(
                "some eigenvalue could not be separated from the unit circle".to_string(),
            );
        }
        VerdictKind::Open
    };
    BdlVerdict {
        kind,
        min_modulus_class: spectrum.min_modulus_class,
        primitive,
        some_modulus_below_one: spectrum.has_modulus_below_one(),
        some_modulus_at_most_one: spectrum.has_modulus_at_most_one(),
        warnings,
        spectrum,
    }
}
