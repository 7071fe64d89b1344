//! Parikh-vector analysis of fixed points of substitutions.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bdl;
pub mod error;
pub mod fixedpoint;
pub mod fixtures;
pub mod linalg;
pub mod matrix;
pub mod morphimage;
pub mod poly;
pub mod spectral;
pub mod substitution;
pub mod word;

pub use bdl::{
    build_representation, classify, fk_build, scan_boundedness, BdlVerdict, GeometricRepresentation,
    Normal, ScanOutcome, ScanVerdict, VerdictKind,
};
pub use error::{Error, Result};
pub use fixedpoint::{generate_window, parikh_path, DelimitedWord, FixedPointWindow, ParikhPath};
pub use matrix::IntMatrix;
pub use morphimage::{
    image_normal_constraints, image_window, transported_hyperplane, ImageWindow,
    NormalConstraintSystem,
};
pub use poly::IntPoly;
pub use spectral::{
    candidate_normal_space, char_poly, eigen_classify, eigenvector, CharPoly, EigenClass,
    ModulusClass, NormalSpace, SpectralReport,
};
pub use substitution::{compose, Morphism, SeedPair, Substitution};
pub use word::{concat, parikh, Alphabet, FiniteWord, Letter, ParikhVector};
