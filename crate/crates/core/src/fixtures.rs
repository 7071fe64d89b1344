//! Named substitutions and morphisms used throughout the tests, the CLI and the benches.

use crate::substitution::{Morphism, Substitution};
use crate::word::Alphabet;

fn abc() -> Alphabet {
    Alphabet::new("ABC".chars()).expect("static alphabet")
}

/// `A↦BBBCCC, B↦BACCB, C↦ABBBC`: primitive, eigenvalues `2±√10` and `-1`,
/// and no non-trivial bounded-distance representation.
pub fn counterexample_substitution() -> Substitution {
    Substitution::from_rules(&abc(), &[('A', "BBBCCC"), ('B', "BACCB"), ('C', "ABBBC")])
        .expect("static substitution")
}

/// `A↦A²B³C⁴, B↦A²B, C↦A²`: has an eigenvalue of modulus below one.
pub fn contracting_substitution() -> Substitution {
    Substitution::from_rules(&abc(), &[('A', "AABBBCCCC"), ('B', "AAB"), ('C', "AA")])
        .expect("static substitution")
}

/// `A↦A, B↦B, C↦ε` from `{A,B,C}` onto `{A,B}`.
pub fn erasing_projection() -> Morphism {
    let ab = Alphabet::new("AB".chars()).expect("static alphabet");
    Morphism::from_rules(&abc(), &ab, &[('A', "A"), ('B', "B"), ('C', "")])
        .expect("static morphism")
}

/// Letter-to-letter bijection `A↦B, B↦C, C↦A` on `{A,B,C}`.
pub fn cyclic_relabeling() -> Morphism {
    let abc = abc();
    Morphism::from_rules(&abc, &abc, &[('A', "B"), ('B', "C"), ('C', "A")])
        .expect("static morphism")
}

/// `a↦ab, b↦ba`.
pub fn thue_morse() -> Substitution {
    let ab = Alphabet::new("ab".chars()).expect("static alphabet");
    Substitution::from_rules(&ab, &[('a', "ab"), ('b', "ba")]).expect("static substitution")
}

/// `a↦ab, b↦a`.
pub fn fibonacci() -> Substitution {
    let ab = Alphabet::new("ab".chars()).expect("static alphabet");
    Substitution::from_rules(&ab, &[('a', "ab"), ('b', "a")]).expect("static substitution")
}

/// All substitution fixtures with a short name.
pub fn all_substitutions() -> Vec<(&'static str, Substitution)> {
    vec![
        ("counterexample", counterexample_substitution()),
        ("contracting", contracting_substitution()),
        ("thue-morse", thue_morse()),
        ("fibonacci", fibonacci()),
    ]
}
