//! Characteristic polynomials and eigenvalue moduli of integer matrices.
//!
//! Eigenvalues are split into three groups before anything numeric happens:
//! integer roots (found exactly), roots of cyclotomic factors (certified to lie
//! on the unit circle) and the rest, which are located numerically and carry
//! an inclusion radius. A modulus is only ever reported as exactly one for the
//! first two groups.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::IntMatrix;
use crate::poly::{cyclotomic, totient, IntPoly};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Monic characteristic polynomial `det(xI - M)`.
#[derive(Clone, PartialEq, Eq)]
pub struct CharPoly(IntPoly);

impl CharPoly {
    pub fn poly(&self) -> &IntPoly {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    /// Coefficients from the constant term up.
    pub fn coeffs(&self) -> &[BigInt] {
        self.0.coeffs()
    }

    pub fn cayley_hamilton_holds(&self, m: &IntMatrix) -> bool {
        self.0.eval_matrix(m).is_zero()
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({})", self.0)
    }
}

/// Faddeev–LeVerrier over ℤ. Every division by `k` is exact.
pub fn char_poly(m: &IntMatrix) -> Result<CharPoly> {
    let n = m.require_square()?;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut aux = IntMatrix::zeros(n, n);
    for k in 1..=n {
        aux = (m * &aux).add_scalar_identity(&coeffs[n - k + 1]);
        let t = (m * &aux).trace();
        let (q, r) = t.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev–LeVerrier division must be exact");
        coeffs[n - k] = -q;
    }
    Ok(CharPoly(IntPoly::new(coeffs)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModulusClass {
    #[serde(rename = "LT1")]
    Lt1,
    #[serde(rename = "EQ1_CERTIFIED")]
    Eq1Certified,
    #[serde(rename = "GT1")]
    Gt1,
    #[serde(rename = "BOUNDARY_UNCERTAIN")]
    BoundaryUncertain,
}

impl fmt::Display for ModulusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModulusClass::Lt1 => "LT1",
            ModulusClass::Eq1Certified => "EQ1_CERTIFIED",
            ModulusClass::Gt1 => "GT1",
            ModulusClass::BoundaryUncertain => "BOUNDARY_UNCERTAIN",
        })
    }
}

/// How an eigenvalue was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootOrigin {
    /// Integer root confirmed by exact evaluation.
    Integer(BigInt),
    /// `exp(2πi·k/order)`, a root of the cyclotomic factor `Φ_order`.
    RootOfUnity { order: usize, k: usize },
    /// Located numerically; only the inclusion radius is guaranteed.
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenClass {
    pub value: Complex64,
    pub error_radius: f64,
    pub modulus_class: ModulusClass,
    pub multiplicity: usize,
    pub origin: RootOrigin,
}

impl EigenClass {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.origin, RootOrigin::Numeric)
    }

    /// Treated as real for eigenvector purposes: exactly real, or a numeric
    /// root whose inclusion disk meets the real axis.
    pub fn is_real(&self) -> bool {
        match self.origin {
            RootOrigin::Integer(_) => true,
            RootOrigin::RootOfUnity { order, .. } => order <= 2,
            RootOrigin::Numeric => self.value.im.abs() <= self.error_radius,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub char_poly: CharPoly,
    /// Distinct eigenvalues sorted by decreasing modulus; multiplicities sum to `d`.
    pub eigen_classes: Vec<EigenClass>,
    pub min_modulus_class: ModulusClass,
    /// Exact: the radical of the characteristic polynomial annihilates `M`.
    pub diagonalizable: bool,
    pub tol: f64,
}

impl SpectralReport {
    pub fn dim(&self) -> usize {
        self.char_poly.degree()
    }

    pub fn has_class(&self, class: ModulusClass) -> bool {
        self.eigen_classes.iter().any(|e| e.modulus_class == class)
    }

    pub fn all_gt1(&self) -> bool {
        self.eigen_classes
            .iter()
            .all(|e| e.modulus_class == ModulusClass::Gt1)
    }

    /// Some eigenvalue certainly has modulus `< 1`.
    pub fn has_modulus_below_one(&self) -> bool {
        self.has_class(ModulusClass::Lt1)
    }

    /// Some eigenvalue has modulus `<= 1`: `Some(true)` / `Some(false)` when
    /// certain, `None` when only uncertain eigenvalues could decide it.
    pub fn has_modulus_at_most_one(&self) -> Option<bool> {
        if self.has_class(ModulusClass::Lt1) || self.has_class(ModulusClass::Eq1Certified) {
            Some(true)
        } else if self.has_class(ModulusClass::BoundaryUncertain) {
            None
        } else {
            Some(false)
        }
    }

    /// Eigenvalue moduli repeated by multiplicity, in decreasing order.
    pub fn moduli(&self) -> Vec<f64> {
        self.eigen_classes
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.modulus(), e.multiplicity))
            .collect()
    }

    pub fn to_json(&self) -> SpectralReportJson {
        SpectralReportJson {
            char_poly: self
                .char_poly
                .coeffs()
                .iter()
                .rev()
                .map(ToString::to_string)
                .collect(),
            char_poly_text: self.char_poly.to_string(),
            roots: self
                .eigen_classes
                .iter()
                .map(|e| RootJson {
                    re: e.value.re,
                    im: e.value.im,
                    radius: e.error_radius,
                    class: e.modulus_class,
                    modulus: e.modulus(),
                    multiplicity: e.multiplicity,
                    exact: match &e.origin {
                        RootOrigin::Integer(r) => Some(r.to_string()),
                        RootOrigin::RootOfUnity { order, k } => {
                            Some(format!("exp(2πi·{k}/{order})"))
                        }
                        RootOrigin::Numeric => None,
                    },
                })
                .collect(),
            min_modulus_class: self.min_modulus_class,
            diagonalizable: self.diagonalizable,
            tol: self.tol,
        }
    }
}

/// Serialized form: coefficients are decimal strings, highest degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReportJson {
    pub char_poly: Vec<String>,
    pub char_poly_text: String,
    pub roots: Vec<RootJson>,
    pub min_modulus_class: ModulusClass,
    pub diagonalizable: bool,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootJson {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub class: ModulusClass,
    pub modulus: f64,
    pub multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

fn classify_disk(value: Complex64, radius: f64, tol: f64) -> ModulusClass {
    let m = value.norm();
    if radius > tol || !radius.is_finite() || !m.is_finite() {
        ModulusClass::BoundaryUncertain
    } else if m + radius < 1.0 {
        ModulusClass::Lt1
    } else if m - radius > 1.0 {
        ModulusClass::Gt1
    } else {
        ModulusClass::BoundaryUncertain
    }
}

/// Locates and classifies every eigenvalue of `m` against the unit circle.
pub fn eigen_classify(m: &IntMatrix, tol: f64) -> Result<SpectralReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let d = m.require_square()?;
    let cp = char_poly(m)?;
    let mut classes = Vec::new();
    let mut rest = cp.poly().clone();

    for r in cp.poly().integer_roots() {
        let mult = rest.root_multiplicity(&r);
        let lin = IntPoly::linear_root(&r);
        for _ in 0..mult {
            rest = rest.div_exact(&lin).expect("root divides");
        }
        let class = match r.abs().cmp(&BigInt::one()) {
            std::cmp::Ordering::Less => ModulusClass::Lt1,
            std::cmp::Ordering::Equal => ModulusClass::Eq1Certified,
            std::cmp::Ordering::Greater => ModulusClass::Gt1,
        };
        classes.push(EigenClass {
            value: Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            error_radius: 0.0,
            modulus_class: class,
            multiplicity: mult,
            origin: RootOrigin::Integer(r),
        });
    }

    for (factor, mult) in rest.square_free_decomposition() {
        let mut remaining = factor;
        // unit-modulus roots of a real polynomial come with their inverses, so
        // they all divide gcd(p, reciprocal(p))
        let reciprocal_part = remaining.gcd(&remaining.reciprocal());
        if !reciprocal_part.is_constant() {
            let max_order = 2 * d * d;
            for order in 3..=max_order.max(3) {
                if totient(order) > reciprocal_part.degree() {
                    continue;
                }
                let phi = cyclotomic(order);
                if let Some(q) = remaining.div_exact(&phi) {
                    remaining = q;
                    for k in (1..order).filter(|k| k.gcd(&order) == 1) {
                        let angle = 2.0 * std::f64::consts::PI * k as f64 / order as f64;
                        classes.push(EigenClass {
                            value: Complex64::from_polar(1.0, angle),
                            error_radius: 0.0,
                            modulus_class: ModulusClass::Eq1Certified,
                            multiplicity: mult,
                            origin: RootOrigin::RootOfUnity { order, k },
                        });
                    }
                }
            }
        }
        if remaining.is_constant() {
            continue;
        }
        let roots = remaining.approx_roots();
        let radii = remaining.inclusion_radii(&roots);
        for (z, r) in roots.into_iter().zip(radii) {
            let value = if z.im.abs() <= r { Complex64::new(z.re, 0.0) } else { z };
            classes.push(EigenClass {
                value,
                error_radius: r,
                modulus_class: classify_disk(value, r, tol),
                multiplicity: mult,
                origin: RootOrigin::Numeric,
            });
        }
    }

    classes.sort_by(|a, b| {
        b.modulus()
            .total_cmp(&a.modulus())
            .then(b.value.im.total_cmp(&a.value.im))
    });
    debug_assert_eq!(classes.iter().map(|e| e.multiplicity).sum::<usize>(), d);

    let min_modulus_class = if classes.iter().any(|e| e.modulus_class == ModulusClass::Lt1) {
        ModulusClass::Lt1
    } else if classes
        .iter()
        .any(|e| e.modulus_class == ModulusClass::BoundaryUncertain)
    {
        ModulusClass::BoundaryUncertain
    } else if classes
        .iter()
        .any(|e| e.modulus_class == ModulusClass::Eq1Certified)
    {
        ModulusClass::Eq1Certified
    } else {
        ModulusClass::Gt1
    };
    let diagonalizable = cp.poly().radical().eval_matrix(m).is_zero();

    Ok(SpectralReport {
        char_poly: cp,
        eigen_classes: classes,
        min_modulus_class,
        diagonalizable,
        tol,
    })
}

fn complex_matrix(m: &IntMatrix) -> DMatrix<Complex64> {
    m.to_f64().map(|x| Complex64::new(x, 0.0))
}

fn shifted(m: &DMatrix<Complex64>, lambda: Complex64) -> DMatrix<Complex64> {
    let mut a = m.clone();
    for i in 0..a.nrows() {
        a[(i, i)] -= lambda;
    }
    a
}

/// Eigenvector of `m` for a simple eigenvalue, scaled so that its first
/// non-negligible component is 1.
pub fn eigenvector(m: &IntMatrix, eig: &EigenClass, tol: f64) -> Result<Vec<Complex64>> {
    m.require_square()?;
    if eig.multiplicity != 1 {
        return Err(Error::RepeatedEigenvalue(eig.multiplicity));
    }
    let a = complex_matrix(m);
    let (vecs, _) = linalg::smallest_right_singular_vectors(&shifted(&a, eig.value), 1);
    let v = &vecs[0];
    let biggest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .find(|z| z.norm() > 1e-8 * biggest)
        .copied()
        .expect("nonzero singular vector");
    let x: Vec<Complex64> = v.iter().map(|z| z / pivot).collect();
    let xv = nalgebra::DVector::from_column_slice(&x);
    let residual = (&a * &xv - &xv * eig.value).norm();
    let scale = xv.norm() * a.norm().max(1.0);
    let bound = 10.0 * tol * scale;
    if residual > bound {
        return Err(Error::EigenvectorResidual { residual, bound });
    }
    Ok(x)
}

/// Normals `f` that can make `f·Ψ_n` bounded: the real invariant subspace of
/// `Mᵀ` for eigenvalues of modulus at most one (uncertain ones included).
#[derive(Clone, Debug, PartialEq)]
pub struct NormalSpace {
    /// Orthonormal basis, computed numerically.
    pub basis: Vec<Vec<f64>>,
    /// Primitive integer basis, when every eigenvalue involved is exact.
    pub exact_basis: Option<Vec<Vec<BigInt>>>,
    /// Some eigenvalue could not be placed relative to the unit circle.
    pub uncertain: bool,
}

impl NormalSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Real basis of the `M`-invariant subspace belonging to eigenvalues of modulus `> 1`.
pub fn expanding_subspace(m: &IntMatrix, report: &SpectralReport) -> Vec<Vec<f64>> {
    let d = report.dim();
    let a = complex_matrix(m);
    let mut spanning = Vec::new();
    let mut expected = 0;
    for e in report
        .eigen_classes
        .iter()
        .filter(|e| e.modulus_class == ModulusClass::Gt1)
    {
        expected += e.multiplicity;
        let shifted = shifted(&a, e.value);
        let mut power = shifted.clone();
        for _ in 1..e.multiplicity {
            power = &power * &shifted;
        }
        let (vecs, _) = linalg::smallest_right_singular_vectors(&power, e.multiplicity);
        for v in vecs {
            spanning.push(v.iter().map(|z| z.re).collect::<Vec<f64>>());
            if !e.is_real() {
                spanning.push(v.iter().map(|z| z.im).collect::<Vec<f64>>());
            }
        }
    }
    linalg::orthonormal_span(&spanning, d, 1e-8, expected)
}

pub fn candidate_normal_space(m: &IntMatrix, tol: f64) -> Result<NormalSpace> {
    let report = eigen_classify(m, tol)?;
    Ok(candidate_normal_space_from(m, &report))
}

pub fn candidate_normal_space_from(m: &IntMatrix, report: &SpectralReport) -> NormalSpace {
    let d = report.dim();
    let expanding = expanding_subspace(m, report);
    let complement = linalg::lowest_index_completion(&expanding, d, d);
    let basis = complement[expanding.len()..].to_vec();

    let small: Vec<&EigenClass> = report
        .eigen_classes
        .iter()
        .filter(|e| e.modulus_class != ModulusClass::Gt1)
        .collect();
    let exact_basis = if small.iter().all(|e| e.is_exact()) {
        // product of the exact factors carrying the small eigenvalues
        let mut g = IntPoly::one();
        let mut seen_orders = Vec::new();
        for e in &small {
            match &e.origin {
                RootOrigin::Integer(r) => {
                    g = g.mul(&IntPoly::linear_root(r).pow(e.multiplicity));
                }
                RootOrigin::RootOfUnity { order, .. } => {
                    if !seen_orders.contains(order) {
                        seen_orders.push(*order);
                        g = g.mul(&cyclotomic(*order).pow(e.multiplicity));
                    }
                }
                RootOrigin::Numeric => unreachable!(),
            }
        }
        Some(linalg::integer_kernel(&g.eval_matrix(&m.transpose())))
    } else {
        None
    };

    NormalSpace {
        basis,
        exact_basis,
        uncertain: report.has_class(ModulusClass::BoundaryUncertain),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn m4() -> IntMatrix {
        fixtures::counterexample_substitution().incidence().clone()
    }

    fn m5() -> IntMatrix {
        fixtures::contracting_substitution().incidence().clone()
    }

    /// Cofactor expansion of `det(xI - M)` with polynomial entries; independent
    /// of the Faddeev–LeVerrier path.
    fn cofactor_char_poly(m: &IntMatrix) -> IntPoly {
        let d = m.rows();
        let entries: Vec<Vec<IntPoly>> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        let mut p = IntPoly::constant(-m.get(r, c).clone());
                        if r == c {
                            p = p.add(&IntPoly::from_i64s(&[0, 1]));
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        fn det(a: &[Vec<IntPoly>]) -> IntPoly {
            let n = a.len();
            if n == 1 {
                return a[0][0].clone();
            }
            let mut total = IntPoly::default();
            for c in 0..n {
                let minor: Vec<Vec<IntPoly>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = a[0][c].mul(&det(&minor));
                total = if c % 2 == 0 { total.add(&term) } else { total.sub(&term) };
            }
            total
        }
        det(&entries)
    }

    #[test]
    fn char_poly_examples() {
        let cp = char_poly(&m4()).unwrap();
        // (x + 1)(x² − 4x − 6)
        let expected = IntPoly::from_i64s(&[1, 1]).mul(&IntPoly::from_i64s(&[-6, -4, 1]));
        assert_eq!(*cp.poly(), expected);
        assert_eq!(*cp.poly(), IntPoly::from_i64s(&[-6, -10, -3, 1]));
        assert_eq!(cofactor_char_poly(&m4()), expected);
        assert!(cp.cayley_hamilton_holds(&m4()));

        let id = char_poly(&IntMatrix::identity(2)).unwrap();
        assert_eq!(*id.poly(), IntPoly::from_i64s(&[-1, 1]).pow(2));

        let report = eigen_classify(&m5(), DEFAULT_TOL).unwrap();
        let values: Vec<f64> = report.eigen_classes.iter().map(|e| e.value.re).collect();
        for (got, want) in values.iter().zip([5.0593, -2.6549, 0.5956]) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
    }

    #[test]
    fn char_poly_rejects_rectangular() {
        let phi = fixtures::erasing_projection().incidence_matrix();
        assert!(matches!(char_poly(&phi), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn classify_counterexample() {
        let r = eigen_classify(&m4(), DEFAULT_TOL).unwrap();
        let s = 10f64.sqrt();
        let classes: Vec<(f64, ModulusClass)> = r
            .eigen_classes
            .iter()
            .map(|e| (e.modulus(), e.modulus_class))
            .collect();
        assert_eq!(classes.len(), 3);
        assert!((classes[0].0 - (2.0 + s)).abs() < 1e-9);
        assert_eq!(classes[0].1, ModulusClass::Gt1);
        assert!((classes[1].0 - (s - 2.0)).abs() < 1e-9);
        assert_eq!(classes[1].1, ModulusClass::Gt1);
        assert_eq!(classes[2].0, 1.0);
        assert_eq!(classes[2].1, ModulusClass::Eq1Certified);
        assert_eq!(r.eigen_classes[2].origin, RootOrigin::Integer(BigInt::from(-1)));
        assert_eq!(r.min_modulus_class, ModulusClass::Eq1Certified);
        assert!(r.diagonalizable);
        assert_eq!(r.has_modulus_at_most_one(), Some(true));
        assert!(!r.has_modulus_below_one());
    }

    #[test]
    fn classify_identity_and_thue_morse() {
        let r = eigen_classify(&IntMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(r.eigen_classes.len(), 1);
        assert_eq!(r.eigen_classes[0].multiplicity, 3);
        assert_eq!(r.eigen_classes[0].modulus_class, ModulusClass::Eq1Certified);
        assert!(r.diagonalizable);

        let tm = eigen_classify(fixtures::thue_morse().incidence(), DEFAULT_TOL).unwrap();
        let got: Vec<_> = tm
            .eigen_classes
            .iter()
            .map(|e| (e.value.re, e.modulus_class))
            .collect();
        assert_eq!(got, vec![(2.0, ModulusClass::Gt1), (0.0, ModulusClass::Lt1)]);
    }

    #[test]
    fn cyclotomic_roots_are_certified() {
        // 3-cycle permutation: x³ − 1
        let m = IntMatrix::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let r = eigen_classify(&m, DEFAULT_TOL).unwrap();
        assert_eq!(r.eigen_classes.len(), 3);
        assert!(r
            .eigen_classes
            .iter()
            .all(|e| e.modulus_class == ModulusClass::Eq1Certified));
        assert!(r
            .eigen_classes
            .iter()
            .any(|e| e.origin == RootOrigin::RootOfUnity { order: 3, k: 1 }));
    }

    #[test]
    fn salem_conjugates_are_not_certified() {
        // companion matrix of Lehmer's polynomial x^10 + x^9 − x^7 − x^6 − x^5 − x^4 − x^3 + x + 1
        let c = [1i64, 1, 0, -1, -1, -1, -1, -1, 0, 1];
        let mut rows = vec![vec![0i64; 10]; 10];
        for i in 1..10 {
            rows[i][i - 1] = 1;
        }
        for i in 0..10 {
            rows[i][9] = -c[i];
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let r = eigen_classify(&IntMatrix::from_i64_rows(&refs), DEFAULT_TOL).unwrap();
        assert!(!r.has_class(ModulusClass::Eq1Certified));
        assert_eq!(
            r.eigen_classes
                .iter()
                .filter(|e| e.modulus_class == ModulusClass::BoundaryUncertain)
                .count(),
            8
        );
        assert_eq!(r.min_modulus_class, ModulusClass::Lt1);
    }

    #[test]
    fn jordan_block_is_not_diagonalizable() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1], &[0, 2]]);
        let r = eigen_classify(&m, DEFAULT_TOL).unwrap();
        assert!(!r.diagonalizable);
        assert_eq!(r.eigen_classes[0].multiplicity, 2);
        // repeated irrational roots: (x² − 2)² via block diagonal companions
        let m = IntMatrix::from_i64_rows(&[&[0, 2, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 1, 0]]);
        let r = eigen_classify(&m, DEFAULT_TOL).unwrap();
        assert!(r.diagonalizable);
        assert!(r.eigen_classes.iter().all(|e| e.multiplicity == 2));
        let m = IntMatrix::from_i64_rows(&[&[0, 2, 1, 0], &[1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 1, 0]]);
        assert!(!eigen_classify(&m, DEFAULT_TOL).unwrap().diagonalizable);
    }

    #[test]
    fn eigenvector_examples() {
        let m = m4();
        let r = eigen_classify(&m, DEFAULT_TOL).unwrap();
        let s = 10f64.sqrt();
        let x1 = eigenvector(&m, &r.eigen_classes[0], DEFAULT_TOL).unwrap();
        for (got, want) in x1.iter().zip([1.0, 3.0, s - 1.0]) {
            assert!((got.re - want).abs() < 1e-9 && got.im.abs() < 1e-9);
        }
        let x2 = eigenvector(&m, &r.eigen_classes[1], DEFAULT_TOL).unwrap();
        for (got, want) in x2.iter().zip([1.0, 3.0, -s - 1.0]) {
            assert!((got.re - want).abs() < 1e-9 && got.im.abs() < 1e-9);
        }

        let id = IntMatrix::identity(2);
        let eig = EigenClass {
            value: Complex64::new(1.0, 0.0),
            error_radius: 0.0,
            modulus_class: ModulusClass::Eq1Certified,
            multiplicity: 1,
            origin: RootOrigin::Integer(BigInt::one()),
        };
        let x = eigenvector(&id, &eig, DEFAULT_TOL).unwrap();
        assert!(x.iter().any(|z| z.norm() > 0.5));

        let repeated = eigen_classify(&id, DEFAULT_TOL).unwrap();
        assert_eq!(
            eigenvector(&id, &repeated.eigen_classes[0], DEFAULT_TOL),
            Err(Error::RepeatedEigenvalue(2))
        );
    }

    #[test]
    fn candidate_normal_space_examples() {
        let ns = candidate_normal_space(&m4(), DEFAULT_TOL).unwrap();
        assert_eq!(ns.dim(), 1);
        assert_eq!(
            ns.exact_basis,
            Some(vec![vec![BigInt::from(3), BigInt::from(-1), BigInt::zero()]])
        );
        assert_eq!(
            linalg::integer_form(&ns.basis[0], 1e-9, 100),
            Some(vec![BigInt::from(3), BigInt::from(-1), BigInt::zero()])
        );

        let ns = candidate_normal_space(&IntMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(ns.dim(), 3);

        let m = m5();
        let r = eigen_classify(&m, DEFAULT_TOL).unwrap();
        let ns = candidate_normal_space_from(&m, &r);
        assert_eq!(ns.dim(), 1);
        assert!(ns.exact_basis.is_none());
        let lambda3 = r.eigen_classes[2].value.re;
        let b = &ns.basis[0];
        let mt = m.transpose().to_f64();
        let bv = nalgebra::DVector::from_column_slice(b);
        let residual = (&mt * &bv - &bv * lambda3).norm();
        assert!(residual <= 10.0 * DEFAULT_TOL, "residual {residual}");
        assert!((linalg::norm(b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normals_are_orthogonal_to_expanding_eigenvectors() {
        for (_, s) in fixtures::all_substitutions() {
            let m = s.incidence().clone();
            let r = eigen_classify(&m, DEFAULT_TOL).unwrap();
            let ns = candidate_normal_space_from(&m, &r);
            for e in r.eigen_classes.iter().filter(|e| e.modulus_class == ModulusClass::Gt1) {
                let x = eigenvector(&m, e, DEFAULT_TOL).unwrap();
                for b in &ns.basis {
                    let ip: Complex64 = x.iter().zip(b).map(|(xi, bi)| xi * bi).sum();
                    let xn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    assert!(ip.norm() <= 10.0 * DEFAULT_TOL * xn);
                }
            }
        }
    }

    #[test]
    fn power_boundedness_link() {
        let m = m4();
        let f = vec![BigInt::from(3), BigInt::from(-1), BigInt::zero()];
        let mt = m.transpose();
        for n in 0..=8u32 {
            let v = mt.pow(n).mul_ints(&f);
            let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(v, vec![BigInt::from(3 * sign), BigInt::from(-sign), BigInt::zero()]);
        }
    }

    #[test]
    fn root_sum_and_product_match_trace_and_determinant() {
        for (_, s) in fixtures::all_substitutions() {
            let m = s.incidence();
            let d = m.rows();
            let r = eigen_classify(m, DEFAULT_TOL).unwrap();
            let mut sum = Complex64::new(0.0, 0.0);
            let mut prod = Complex64::new(1.0, 0.0);
            for e in &r.eigen_classes {
                for _ in 0..e.multiplicity {
                    sum += e.value;
                    prod *= e.value;
                }
            }
            let trace = m.trace().to_f64().unwrap();
            let det = r.char_poly.coeffs()[0].to_f64().unwrap() * if d % 2 == 0 { 1.0 } else { -1.0 };
            let scale = r.moduli().iter().fold(1.0, |a: f64, b| a.max(*b)).powi(d as i32);
            assert!((sum.re - trace).abs() <= d as f64 * DEFAULT_TOL * 10.0, "{sum} vs {trace}");
            assert!((prod.re - det).abs() <= d as f64 * DEFAULT_TOL * scale, "{prod} vs {det}");
        }
    }

    proptest! {
        #[test]
        fn cayley_hamilton_on_random_matrices(
            d in 1usize..=4,
            entries in prop::collection::vec(0i64..=5, 16),
        ) {
            let rows: Vec<Vec<BigInt>> = (0..d)
                .map(|r| (0..d).map(|c| BigInt::from(entries[r * 4 + c])).collect())
                .collect();
            let m = IntMatrix::from_rows(rows).unwrap();
            let cp = char_poly(&m).unwrap();
            prop_assert!(cp.cayley_hamilton_holds(&m));
            prop_assert_eq!(cp.poly().clone(), cofactor_char_poly(&m));
        }

        #[test]
        fn classification_accounts_for_every_root(
            d in 1usize..=4,
            entries in prop::collection::vec(0i64..=5, 16),
        ) {
            let rows: Vec<Vec<BigInt>> = (0..d)
                .map(|r| (0..d).map(|c| BigInt::from(entries[r * 4 + c])).collect())
                .collect();
            let m = IntMatrix::from_rows(rows).unwrap();
            let r = eigen_classify(&m, DEFAULT_TOL).unwrap();
            prop_assert_eq!(r.eigen_classes.iter().map(|e| e.multiplicity).sum::<usize>(), d);
            for e in &r.eigen_classes {
                match e.modulus_class {
                    ModulusClass::Lt1 => prop_assert!(e.modulus() + e.error_radius < 1.0),
                    ModulusClass::Gt1 => prop_assert!(e.modulus() - e.error_radius > 1.0),
                    ModulusClass::Eq1Certified => prop_assert!(e.is_exact()),
                    ModulusClass::BoundaryUncertain => {}
                }
            }
        }
    }
}
