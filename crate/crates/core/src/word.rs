//! Alphabets, finite words and Parikh vectors.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
pub type Letter = u16;

/// Largest supported alphabet size.
pub const MAX_LETTERS: usize = Letter::MAX as usize + 1;

/// An ordered set of single-character letters.
///
/// Cloning is cheap; the letter table is shared.
#[derive(Clone)]
pub struct Alphabet {
    letters: Arc<[char]>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if letters.len() > MAX_LETTERS {
            return Err(Error::AlphabetTooLarge(letters.len()));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::DuplicateLetter(*c));
            }
        }
        Ok(Self {
            letters: letters.into(),
        })
    }

    /// Builds an alphabet from letter names, rejecting names longer than one symbol.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut letters = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            let mut chars = name.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c != '|' => letters.push(c),
                _ => return Err(Error::MultiCharLetter(name.to_string())),
            }
        }
        Self::new(letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.letters[letter as usize]
    }

    pub fn index(&self, symbol: char) -> Option<Letter> {
        self.letters
            .iter()
            .position(|&c| c == symbol)
            .map(|i| i as Letter)
    }

    /// Parses a string of letter symbols into a word over this alphabet.
    pub fn parse_word(&self, text: &str) -> Result<FiniteWord> {
        let symbols = text
            .chars()
            .map(|c| {
                self.index(c).ok_or_else(|| Error::UnknownSymbol {
                    symbol: c,
                    context: format!("word {text:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteWord {
            alphabet: self.clone(),
            symbols,
        })
    }

    pub fn render(&self, symbols: &[Letter]) -> String {
        symbols.iter().map(|&l| self.symbol(l)).collect()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.letters, &other.letters) || self.letters == other.letters
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", self.letters.iter().collect::<String>())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A finite word: a sequence of letter indices over a fixed alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteWord {
    alphabet: Alphabet,
    symbols: Vec<Letter>,
}

impl FiniteWord {
    pub fn new(alphabet: Alphabet, symbols: Vec<Letter>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(Error::LetterOutOfRange {
                index: bad as usize,
                size: alphabet.len(),
            });
        }
        Ok(Self { alphabet, symbols })
    }

    pub(crate) fn from_parts_unchecked(alphabet: Alphabet, symbols: Vec<Letter>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.len()));
        Self { alphabet, symbols }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            symbols: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Letter] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Letter> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: Letter) -> usize {
        self.symbols.iter().filter(|&&s| s == letter).count()
    }

    pub fn concat(&self, other: &FiniteWord) -> Result<FiniteWord> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "cannot concatenate words over {} and {}",
                self.alphabet, other.alphabet
            )));
        }
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Ok(Self {
            alphabet: self.alphabet.clone(),
            symbols,
        })
    }

    pub fn parikh(&self) -> ParikhVector {
        parikh_of(self.alphabet.len(), &self.symbols)
    }

    pub fn starts_with(&self, prefix: &FiniteWord) -> bool {
        self.symbols.starts_with(&prefix.symbols)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(&self.symbols))
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteWord({:?})", self.to_string())
    }
}

/// Parikh vector of a word.
pub fn parikh(word: &FiniteWord) -> ParikhVector {
    word.parikh()
}

/// Concatenation of two words over the same alphabet.
pub fn concat(u: &FiniteWord, v: &FiniteWord) -> Result<FiniteWord> {
    u.concat(v)
}

pub(crate) fn parikh_of(dim: usize, symbols: &[Letter]) -> ParikhVector {
    let mut counts = vec![0u64; dim];
    for &s in symbols {
        counts[s as usize] += 1;
    }
    ParikhVector {
        counts: counts.into_iter().map(BigInt::from).collect(),
    }
}

/// A vector of exact letter counts. Signed, so it also holds the
/// negated Parikh vectors of left-side factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParikhVector {
    counts: Vec<BigInt>,
}

impl ParikhVector {
    pub fn new(counts: Vec<BigInt>) -> Self {
        Self { counts }
    }

    pub fn from_i64s(counts: &[i64]) -> Self {
        Self {
            counts: counts.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            counts: vec![BigInt::zero(); dim],
        }
    }

    pub fn unit(dim: usize, letter: Letter) -> Self {
        let mut v = Self::zero(dim);
        v.counts[letter as usize] = BigInt::from(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    pub fn get(&self, letter: Letter) -> &BigInt {
        &self.counts[letter as usize]
    }

    /// Sum of the entries; equals the (signed) word length.
    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.counts.iter().all(|c| !c.is_negative())
    }

    /// Exact inner product with an integer functional.
    pub fn dot(&self, functional: &[BigInt]) -> BigInt {
        assert_eq!(self.dim(), functional.len(), "dimension mismatch");
        self.counts.iter().zip(functional).map(|(a, b)| a * b).sum()
    }

    pub fn dot_f64(&self, functional: &[f64]) -> f64 {
        assert_eq!(self.dim(), functional.len(), "dimension mismatch");
        use num_traits::ToPrimitive;
        self.counts
            .iter()
            .zip(functional)
            .map(|(a, b)| a.to_f64().unwrap_or(f64::NAN) * b)
            .sum()
    }
}

impl Add for &ParikhVector {
    type Output = ParikhVector;
    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ParikhVector {
            counts: self
                .counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Add for ParikhVector {
    type Output = ParikhVector;
    fn add(self, rhs: ParikhVector) -> ParikhVector {
        &self + &rhs
    }
}

impl Sub for &ParikhVector {
    type Output = ParikhVector;
    fn sub(self, rhs: &ParikhVector) -> ParikhVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ParikhVector {
            counts: self
                .counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for ParikhVector {
    type Output = ParikhVector;
    fn neg(self) -> ParikhVector {
        ParikhVector {
            counts: self.counts.into_iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abc() -> Alphabet {
        Alphabet::new("ABC".chars()).unwrap()
    }

    #[test]
    fn parikh_examples() {
        let a = abc();
        assert_eq!(
            a.parse_word("CB").unwrap().parikh(),
            ParikhVector::from_i64s(&[0, 1, 1])
        );
        assert_eq!(
            FiniteWord::empty(a.clone()).parikh(),
            ParikhVector::zero(3)
        );
        assert_eq!(
            a.parse_word("BCB").unwrap().parikh(),
            ParikhVector::from_i64s(&[0, 2, 1])
        );
    }

    #[test]
    fn concat_examples() {
        let a = abc();
        let cba = a
            .parse_word("CB")
            .unwrap()
            .concat(&a.parse_word("A").unwrap())
            .unwrap();
        assert_eq!(cba.to_string(), "CBA");
        assert_eq!(cba.parikh(), ParikhVector::from_i64s(&[1, 1, 1]));

        let w = a.parse_word("ACB").unwrap();
        assert_eq!(w.concat(&FiniteWord::empty(a.clone())).unwrap(), w);

        let ba = a.parse_word("BA").unwrap();
        let baba = ba.concat(&ba).unwrap();
        assert_eq!(baba.to_string(), "BABA");
        assert_eq!(baba.parikh(), ParikhVector::from_i64s(&[2, 2, 0]));
    }

    #[test]
    fn concat_rejects_mixed_alphabets() {
        let u = abc().parse_word("A").unwrap();
        let v = Alphabet::new("ab".chars())
            .unwrap()
            .parse_word("a")
            .unwrap();
        assert!(matches!(u.concat(&v), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(Alphabet::new("".chars()), Err(Error::EmptyAlphabet));
        assert_eq!(Alphabet::new("ABA".chars()), Err(Error::DuplicateLetter('A')));
        assert!(matches!(
            Alphabet::from_names(&["A", "BC"]),
            Err(Error::MultiCharLetter(_))
        ));
        let a = Alphabet::from_names(&["x", "y"]).unwrap();
        assert_eq!(a.index('y'), Some(1));
        assert!(matches!(
            a.parse_word("xz"),
            Err(Error::UnknownSymbol { symbol: 'z', .. })
        ));
        assert!(FiniteWord::new(a, vec![0, 2]).is_err());
    }

    proptest! {
        #[test]
        fn parikh_is_additive(u in "[ABC]{0,40}", v in "[ABC]{0,40}") {
            let a = abc();
            let (u, v) = (a.parse_word(&u).unwrap(), a.parse_word(&v).unwrap());
            prop_assert_eq!(u.concat(&v).unwrap().parikh(), &u.parikh() + &v.parikh());
        }

        #[test]
        fn entries_sum_to_length_and_roundtrip(text in "[ABC]{0,60}") {
            let a = abc();
            let w = a.parse_word(&text).unwrap();
            prop_assert_eq!(w.parikh().total(), BigInt::from(w.len()));
            prop_assert_eq!(a.parse_word(&w.to_string()).unwrap(), w);
        }
    }
}
