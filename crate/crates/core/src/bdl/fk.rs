//! The prefixes `F_k = ψ^{2k}(BA)ψ^{2k-1}(ABB)⋯ψ²(BA)ψ(ABB)BAC` of the fixed point of
//! `A↦BBBCCC, B↦BACCB, C↦ABBBC`, on which `(3,-1,0)·Ψ` equals `k+2`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fixtures::counterexample_substitution;
use crate::substitution::EXPANSION_LIMIT;
use crate::word::{FiniteWord, Letter, ParikhVector};

pub const FK_FUNCTIONAL: [i64; 3] = [3, -1, 0];

const A: Letter = 0;
const B: Letter = 1;
const C: Letter = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct FkFamily {
    pub k: usize,
    /// Present when the word was expanded.
    pub word: Option<FiniteWord>,
    pub parikh: ParikhVector,
    /// `(3,-1,0)·Ψ(F_k)`.
    pub value: BigInt,
}

fn functional() -> Vec<BigInt> {
    FK_FUNCTIONAL.iter().map(|&x| BigInt::from(x)).collect()
}

/// `Ψ(F_k)` from powers of the incidence matrix.
pub fn fk_parikh(k: usize) -> ParikhVector {
    let s = counterexample_substitution();
    let m = s.incidence();
    let mut a = ParikhVector::unit(3, A);
    let mut b = ParikhVector::unit(3, B);
    let mut total = &(&a + &b) + &ParikhVector::unit(3, C);
    for i in 1..=2 * k {
        a = m.mul_vector(&a);
        b = m.mul_vector(&b);
        total = &(&total + &a) + &b;
        if i % 2 == 1 {
            total = &total + &b;
        }
    }
    total
}

/// Expands `F_k` letter by letter.
pub fn fk_word(k: usize) -> Result<FiniteWord> {
    let s = counterexample_substitution();
    let len = fk_parikh(k).total();
    if len > BigInt::from(EXPANSION_LIMIT) {
        return Err(Error::ExpansionTooLarge {
            limit: EXPANSION_LIMIT,
        });
    }
    let alphabet = s.alphabet().clone();
    let mut images = vec![(
        FiniteWord::new(alphabet.clone(), vec![A])?,
        FiniteWord::new(alphabet.clone(), vec![B])?,
    )];
    for i in 1..=2 * k {
        let (a, b) = &images[i - 1];
        images.push((s.apply(a)?, s.apply(b)?));
    }
    let mut out = Vec::new();
    for i in (1..=2 * k).rev() {
        let (a, b) = &images[i];
        if i % 2 == 0 {
            out.extend_from_slice(b.symbols());
            out.extend_from_slice(a.symbols());
        } else {
            out.extend_from_slice(a.symbols());
            out.extend_from_slice(b.symbols());
            out.extend_from_slice(b.symbols());
        }
    }
    out.extend_from_slice(&[B, A, C]);
    FiniteWord::new(alphabet, out)
}

pub fn fk_build(k: usize, expand: bool) -> Result<FkFamily> {
    let parikh = fk_parikh(k);
    let value = parikh.dot(&functional());
    let word = if expand { Some(fk_word(k)?) } else { None };
    Ok(FkFamily {
        k,
        word,
        parikh,
        value,
    })
}
