//! Finite windows of bi-infinite words around the delimiter, in particular of
//! the two-sided fixed point `⋯ψ²(v)ψ(v)vb | awψ(w)ψ²(w)⋯` of a substitution.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::substitution::{SeedPair, Substitution};
use crate::word::{parikh_of, Alphabet, FiniteWord, Letter, ParikhVector};

/// Letters `u_{[-n_left, n_right)}` of a bi-infinite word, indexed by `n ∈ ℤ`
/// with the delimiter sitting between `u_{-1}` and `u_0`.
#[derive(Clone, PartialEq, Eq)]
pub struct DelimitedWord {
    alphabet: Alphabet,
    // left_rev[j] = u_{-1-j}
    left_rev: Vec<Letter>,
    right: Vec<Letter>,
}

impl DelimitedWord {
    pub fn new(alphabet: Alphabet, left: &[Letter], right: &[Letter]) -> Result<Self> {
        let size = alphabet.len();
        if let Some(&bad) = left.iter().chain(right).find(|&&l| l as usize >= size) {
            return Err(Error::LetterOutOfRange {
                index: bad as usize,
                size,
            });
        }
        Ok(Self {
            alphabet,
            left_rev: left.iter().rev().copied().collect(),
            right: right.to_vec(),
        })
    }

    pub(crate) fn from_reversed(alphabet: Alphabet, left_rev: Vec<Letter>, right: Vec<Letter>) -> Self {
        Self {
            alphabet,
            left_rev,
            right,
        }
    }

    /// Parses `"⋯CBCB|CBACC⋯"`-style text: letters with exactly one `|`.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let (left, right) = text.split_once('|').ok_or_else(|| {
            Error::InvalidArgument("delimited word needs exactly one '|'".to_string())
        })?;
        if right.contains('|') {
            return Err(Error::InvalidArgument(
                "delimited word needs exactly one '|'".to_string(),
            ));
        }
        let left = alphabet.parse_word(left)?;
        let right = alphabet.parse_word(right)?;
        Self::new(alphabet.clone(), left.symbols(), right.symbols())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alphabet.len()
    }

    pub fn n_left(&self) -> usize {
        self.left_rev.len()
    }

    pub fn n_right(&self) -> usize {
        self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left_rev.is_empty() && self.right.is_empty()
    }

    /// Indices `n` with a letter in the window.
    pub fn index_range(&self) -> Range<i64> {
        -(self.n_left() as i64)..self.n_right() as i64
    }

    /// The letter `u_n`, if inside the window.
    pub fn letter(&self, n: i64) -> Option<Letter> {
        if n >= 0 {
            self.right.get(n as usize).copied()
        } else {
            self.left_rev.get((-n - 1) as usize).copied()
        }
    }

    /// `u_{[0, n_right)}`.
    pub fn right(&self) -> &[Letter] {
        &self.right
    }

    /// `u_{-1}, u_{-2}, …` in that order (reading away from the delimiter).
    pub fn left_reversed(&self) -> &[Letter] {
        &self.left_rev
    }

    /// `u_{[-n_left, 0)}` in reading order.
    pub fn left(&self) -> Vec<Letter> {
        self.left_rev.iter().rev().copied().collect()
    }

    /// The factor `u_{[start, end)}`; `None` if it leaves the window.
    pub fn factor(&self, range: Range<i64>) -> Option<FiniteWord> {
        let Range { start, end } = range;
        if start > end || start < -(self.n_left() as i64) || end > self.n_right() as i64 {
            return None;
        }
        let symbols: Vec<Letter> = (start..end).map(|n| self.letter(n).unwrap()).collect();
        Some(FiniteWord::from_parts_unchecked(self.alphabet.clone(), symbols))
    }

    /// Keeps at most `n_left` letters left and `n_right` letters right of the delimiter.
    pub fn truncated(&self, n_left: usize, n_right: usize) -> DelimitedWord {
        DelimitedWord {
            alphabet: self.alphabet.clone(),
            left_rev: self.left_rev[..n_left.min(self.left_rev.len())].to_vec(),
            right: self.right[..n_right.min(self.right.len())].to_vec(),
        }
    }

    pub fn parikh_path(&self) -> ParikhPath {
        ParikhPath::new(self)
    }
}

impl fmt::Display for DelimitedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left: String = self.left_rev.iter().rev().map(|&l| self.alphabet.symbol(l)).collect();
        write!(f, "{left}|{}", self.alphabet.render(&self.right))
    }
}

impl fmt::Debug for DelimitedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n_left() + self.n_right() <= 64 {
            write!(f, "DelimitedWord({self})")
        } else {
            write!(f, "DelimitedWord(left={}, right={})", self.n_left(), self.n_right())
        }
    }
}

/// A window of the two-sided fixed point generated by a seed pair.
#[derive(Clone, Debug)]
pub struct FixedPointWindow {
    substitution: Substitution,
    seed: SeedPair,
    word: DelimitedWord,
}

impl FixedPointWindow {
    pub fn substitution(&self) -> &Substitution {
        &self.substitution
    }

    pub fn seed(&self) -> &SeedPair {
        &self.seed
    }

    pub fn word(&self) -> &DelimitedWord {
        &self.word
    }

    pub fn into_word(self) -> DelimitedWord {
        self.word
    }
}

impl std::ops::Deref for FixedPointWindow {
    type Target = DelimitedWord;
    fn deref(&self) -> &DelimitedWord {
        &self.word
    }
}

fn check_seed(power: &Substitution, seed: &SeedPair) -> Result<()> {
    let alphabet = power.alphabet();
    let invalid = |reason: &str| Error::InvalidSeed {
        power: seed.power,
        a: alphabet.symbol(seed.a.min(alphabet.len() as Letter - 1)),
        b: alphabet.symbol(seed.b.min(alphabet.len() as Letter - 1)),
        reason: reason.to_string(),
    };
    if seed.a as usize >= alphabet.len() || seed.b as usize >= alphabet.len() {
        return Err(invalid("letter outside the alphabet"));
    }
    if seed.w.is_empty() || seed.v.is_empty() {
        return Err(invalid("v and w must be nonempty"));
    }
    let img_a = power.image(seed.a).symbols();
    if img_a.first() != Some(&seed.a) || &img_a[1..] != seed.w.symbols() {
        return Err(invalid("ψ^k(a) is not a·w"));
    }
    let img_b = power.image(seed.b).symbols();
    if img_b.last() != Some(&seed.b) || &img_b[..img_b.len() - 1] != seed.v.symbols() {
        return Err(invalid("ψ^k(b) is not v·b"));
    }
    Ok(())
}

/// Right-infinite fixed point of `power` starting with `a·w`, read from
/// itself: `u = ψ^k(u_0)ψ^k(u_1)⋯` where `ψ^k(u_0) = a·w`.
fn expand_right(power: &Substitution, a: Letter, w: &[Letter], len: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(len + 1);
    if len == 0 {
        return out;
    }
    out.push(a);
    out.extend_from_slice(w);
    let mut i = 1;
    while out.len() < len {
        let next = out[i];
        out.extend_from_slice(power.image(next).symbols());
        i += 1;
    }
    out.truncate(len);
    out
}

/// Left side, stored reversed: `u_{-1} = b`, then `v` reversed, then the
/// reversed images of `u_{-2}, u_{-3}, …`.
fn expand_left(power: &Substitution, b: Letter, v: &[Letter], len: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(len + 1);
    if len == 0 {
        return out;
    }
    out.push(b);
    out.extend(v.iter().rev());
    let mut i = 1;
    while out.len() < len {
        let next = out[i];
        out.extend(power.image(next).symbols().iter().rev());
        i += 1;
    }
    out.truncate(len);
    out
}

/// Generates `n_left` letters left and `n_right` letters right of the delimiter.
///
/// Each block `ψ^{jk}(w)` is produced from letters already emitted, so a
/// longer window always extends a shorter one.
pub fn generate_window(
    s: &Substitution,
    seed: &SeedPair,
    n_left: usize,
    n_right: usize,
) -> Result<FixedPointWindow> {
    if seed.power == 0 {
        return Err(Error::InvalidSeed {
            power: 0,
            a: '?',
            b: '?',
            reason: "power must be at least 1".to_string(),
        });
    }
    let power = s.power(seed.power)?;
    check_seed(&power, seed)?;
    let right = expand_right(&power, seed.a, seed.w.symbols(), n_right);
    let left_rev = expand_left(&power, seed.b, seed.v.symbols(), n_left);
    Ok(FixedPointWindow {
        substitution: s.clone(),
        seed: seed.clone(),
        word: DelimitedWord::from_reversed(s.alphabet().clone(), left_rev, right),
    })
}

/// Whether `p` equals the first `|p|` letters of `u_{[0,∞)}`.
pub fn is_prefix_of_fixed_point(s: &Substitution, seed: &SeedPair, p: &FiniteWord) -> Result<bool> {
    if p.alphabet() != s.alphabet() {
        return Err(Error::AlphabetMismatch(
            "prefix and substitution use different alphabets".to_string(),
        ));
    }
    let window = generate_window(s, seed, 0, p.len())?;
    Ok(window.right() == p.symbols())
}

/// Signed Parikh vectors `Ψ_n(u)` for every `n ∈ [-n_left, n_right]`.
///
/// Entries are bounded by the window length, so machine integers are exact here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParikhPath {
    dim: usize,
    n_left: usize,
    n_right: usize,
    data: Vec<i64>,
}

impl ParikhPath {
    pub fn new(word: &DelimitedWord) -> Self {
        let dim = word.dim();
        let (n_left, n_right) = (word.n_left(), word.n_right());
        let len = n_left + n_right + 1;
        let mut data = vec![0i64; len * dim];
        let origin = n_left;
        // Ψ_{n+1} = Ψ_n + e_{u_n}
        for (n, &l) in word.right().iter().enumerate() {
            let (prev, next) = data.split_at_mut((origin + n + 1) * dim);
            let prev = &prev[(origin + n) * dim..];
            next[..dim].copy_from_slice(prev);
            next[l as usize] += 1;
        }
        // Ψ_{n} = Ψ_{n+1} - e_{u_n} for n = -1, -2, …
        for (j, &l) in word.left_reversed().iter().enumerate() {
            let row = origin - j - 1;
            let (cur, next) = data.split_at_mut((row + 1) * dim);
            let cur = &mut cur[row * dim..];
            cur.copy_from_slice(&next[..dim]);
            cur[l as usize] -= 1;
        }
        Self {
            dim,
            n_left,
            n_right,
            data,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Inclusive range of indices `n` for which `Ψ_n` is known.
    pub fn index_range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n_left as i64)..=self.n_right as i64
    }

    pub fn get(&self, n: i64) -> Option<&[i64]> {
        if !self.index_range().contains(&n) {
            return None;
        }
        let row = (n + self.n_left as i64) as usize;
        Some(&self.data[row * self.dim..(row + 1) * self.dim])
    }

    pub fn vector(&self, n: i64) -> Option<ParikhVector> {
        self.get(n).map(ParikhVector::from_i64s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &[i64])> + '_ {
        let start = -(self.n_left as i64);
        self.data
            .chunks_exact(self.dim)
            .enumerate()
            .map(move |(i, v)| (start + i as i64, v))
    }
}

/// Parikh path of a fixed-point window.
pub fn parikh_path(window: &FixedPointWindow) -> ParikhPath {
    ParikhPath::new(window.word())
}

/// Parikh vector of `u_{[start, end)}`, counted directly from the letters.
pub fn factor_parikh(word: &DelimitedWord, range: Range<i64>) -> Option<ParikhVector> {
    let f = word.factor(range)?;
    Some(parikh_of(word.dim(), f.symbols()))
}
