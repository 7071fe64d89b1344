use std::fmt::{self, Debug, Display};
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::{generate_window, DelimitedWord};
use crate::substitution::{SeedPair, Substitution};

/// Number type of a scan: `i128` for integral normals, `f64` otherwise.
pub trait ScanScalar: Copy + PartialOrd + Debug + Display + Send + Sync {
    const ZERO: Self;
    fn plus(self, other: Self) -> Self;
    fn minus(self, other: Self) -> Self;
    fn magnitude(self) -> Self;
    fn as_f64(self) -> f64;
}

impl ScanScalar for i128 {
    const ZERO: Self = 0;
    fn plus(self, other: Self) -> Self {
        self + other
    }
    fn minus(self, other: Self) -> Self {
        self - other
    }
    fn magnitude(self) -> Self {
        self.abs()
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl ScanScalar for f64 {
    const ZERO: Self = 0.0;
    fn plus(self, other: Self) -> Self {
        self + other
    }
    fn minus(self, other: Self) -> Self {
        self - other
    }
    fn magnitude(self) -> Self {
        self.abs()
    }
    fn as_f64(self) -> f64 {
        self
    }
}

/// A functional `f` applied to Parikh vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum Normal {
    Integer(Vec<BigInt>),
    Real(Vec<f64>),
}

impl Normal {
    /// Parses `v1,v2,…`; all-integer input gives an exact normal.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::InvalidNormal(format!("cannot parse {text:?}")));
        }
        if let Ok(ints) = parts.iter().map(|p| p.parse::<BigInt>()).collect::<std::result::Result<Vec<_>, _>>() {
            return Ok(Normal::Integer(ints));
        }
        parts
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::InvalidNormal(format!("cannot parse component {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Normal::Real)
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        Normal::Integer(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        match self {
            Normal::Integer(v) => v.len(),
            Normal::Real(v) => v.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Normal::Integer(v) => v.iter().all(Zero::is_zero),
            Normal::Real(v) => v.iter().all(|x| *x == 0.0),
        }
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        match self {
            Normal::Integer(v) => v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            Normal::Real(v) => v.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Normal::Integer(_))
    }
}

impl Display for Normal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            Normal::Integer(v) => v.iter().map(ToString::to_string).collect(),
            Normal::Real(v) => v.iter().map(ToString::to_string).collect(),
        };
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScanVerdict {
    BoundedSoFar,
    Growing,
}

impl Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanVerdict::BoundedSoFar => "BOUNDED_SO_FAR",
            ScanVerdict::Growing => "GROWING",
        })
    }
}

/// Heuristic growth test on dyadic block maxima.
///
/// GROWING when the last five maxima increase strictly and the last is at least
/// twice the one five blocks earlier, or when the last six never decrease and
/// the last exceeds the one five blocks earlier by at least 20%.
pub fn growth_verdict(blocks: &[f64]) -> ScanVerdict {
    let n = blocks.len();
    if n < 6 {
        return ScanVerdict::BoundedSoFar;
    }
    let tail = &blocks[n - 6..];
    let (base, last) = (tail[0], tail[5]);
    let strict = tail[1..].windows(2).all(|w| w[0] < w[1]) && last >= 2.0 * base;
    let steady = tail.windows(2).all(|w| w[0] <= w[1]) && last > 0.0 && last >= 1.2 * base;
    if strict || steady {
        ScanVerdict::Growing
    } else {
        ScanVerdict::BoundedSoFar
    }
}

struct BlockAccumulator<T> {
    initial: T,
    blocks: Vec<T>,
    max: T,
    argmax: i64,
}

impl<T: ScanScalar> BlockAccumulator<T> {
    fn new() -> Self {
        Self {
            initial: T::ZERO,
            blocks: Vec::new(),
            max: T::ZERO,
            argmax: 0,
        }
    }

    fn push(&mut self, n: i64, v: T) {
        let v = v.magnitude();
        if v > self.max {
            self.max = v;
            self.argmax = n;
        }
        if n == 0 {
            if v > self.initial {
                self.initial = v;
            }
            return;
        }
        let j = (63 - n.unsigned_abs().leading_zeros()) as usize;
        if self.blocks.len() <= j {
            self.blocks.resize(j + 1, T::ZERO);
        }
        if v > self.blocks[j] {
            self.blocks[j] = v;
        }
    }
}

/// Maxima of `|value|` at `n = 0` and over each block `2^j <= |n| < 2^{j+1}`.
pub fn block_maxima<T: ScanScalar>(values: impl IntoIterator<Item = (i64, T)>) -> (T, Vec<T>) {
    let mut acc = BlockAccumulator::new();
    for (n, v) in values {
        acc.push(n, v);
    }
    (acc.initial, acc.blocks)
}

/// Signed values `f·Ψ_n` for every `n` of the window, in increasing `n`.
pub fn scan_series<T: ScanScalar>(word: &DelimitedWord, weights: &[T]) -> Vec<(i64, T)> {
    let mut left = Vec::with_capacity(word.n_left());
    let mut acc = T::ZERO;
    for (j, &l) in word.left_reversed().iter().enumerate() {
        acc = acc.minus(weights[l as usize]);
        left.push((-(j as i64) - 1, acc));
    }
    left.reverse();
    left.push((0, T::ZERO));
    acc = T::ZERO;
    for (j, &l) in word.right().iter().enumerate() {
        acc = acc.plus(weights[l as usize]);
        left.push((j as i64 + 1, acc));
    }
    left
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport<T> {
    pub n_left: usize,
    pub n_right: usize,
    /// `|f·Ψ_0|`, always zero.
    pub initial: T,
    pub block_maxima: Vec<T>,
    pub max: T,
    pub argmax: i64,
    pub verdict: ScanVerdict,
    /// Worst-case rounding error of each value; zero for exact scans.
    pub error_bound: f64,
}

/// Scans `f·Ψ_n` over the window without storing the series.
pub fn scan_word<T: ScanScalar>(word: &DelimitedWord, weights: &[T], error_bound: f64) -> ScanReport<T> {
    let mut blocks = BlockAccumulator::new();
    blocks.push(0, T::ZERO);
    let mut acc = T::ZERO;
    for (j, &l) in word.left_reversed().iter().enumerate() {
        acc = acc.minus(weights[l as usize]);
        blocks.push(-(j as i64) - 1, acc);
    }
    acc = T::ZERO;
    for (j, &l) in word.right().iter().enumerate() {
        acc = acc.plus(weights[l as usize]);
        blocks.push(j as i64 + 1, acc);
    }
    let verdict = growth_verdict(&blocks.blocks.iter().map(|b| b.as_f64()).collect::<Vec<_>>());
    ScanReport {
        n_left: word.n_left(),
        n_right: word.n_right(),
        initial: blocks.initial,
        block_maxima: blocks.blocks,
        max: blocks.max,
        argmax: blocks.argmax,
        verdict,
        error_bound,
    }
}

/// Scan result of either arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum ScanOutcome {
    Exact(ScanReport<i128>),
    Float(ScanReport<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReportJson {
    pub normal: String,
    pub exact: bool,
    pub n_left: usize,
    pub n_right: usize,
    pub max: String,
    pub argmax: i64,
    pub block_maxima: Vec<String>,
    pub verdict: ScanVerdict,
    pub heuristic: bool,
    pub error_bound: f64,
}

impl ScanOutcome {
    pub fn verdict(&self) -> ScanVerdict {
        match self {
            ScanOutcome::Exact(r) => r.verdict,
            ScanOutcome::Float(r) => r.verdict,
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            ScanOutcome::Exact(r) => r.max as f64,
            ScanOutcome::Float(r) => r.max,
        }
    }

    pub fn argmax(&self) -> i64 {
        match self {
            ScanOutcome::Exact(r) => r.argmax,
            ScanOutcome::Float(r) => r.argmax,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScanOutcome::Exact(_))
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            ScanOutcome::Exact(r) => r.error_bound,
            ScanOutcome::Float(r) => r.error_bound,
        }
    }

    pub fn block_maxima_f64(&self) -> Vec<f64> {
        match self {
            ScanOutcome::Exact(r) => r.block_maxima.iter().map(|&x| x as f64).collect(),
            ScanOutcome::Float(r) => r.block_maxima.clone(),
        }
    }

    pub fn block_maxima_strings(&self) -> Vec<String> {
        match self {
            ScanOutcome::Exact(r) => r.block_maxima.iter().map(ToString::to_string).collect(),
            ScanOutcome::Float(r) => r.block_maxima.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn max_string(&self) -> String {
        match self {
            ScanOutcome::Exact(r) => r.max.to_string(),
            ScanOutcome::Float(r) => r.max.to_string(),
        }
    }

    pub fn to_json(&self, normal: &Normal) -> ScanReportJson {
        let (n_left, n_right) = match self {
            ScanOutcome::Exact(r) => (r.n_left, r.n_right),
            ScanOutcome::Float(r) => (r.n_left, r.n_right),
        };
        ScanReportJson {
            normal: normal.to_string(),
            exact: self.is_exact(),
            n_left,
            n_right,
            max: self.max_string(),
            argmax: self.argmax(),
            block_maxima: self.block_maxima_strings(),
            verdict: self.verdict(),
            heuristic: true,
            error_bound: self.error_bound(),
        }
    }
}

fn integer_weights(v: &[BigInt]) -> Result<Vec<i128>> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .map(i128::from)
                .ok_or_else(|| Error::InvalidNormal(format!("component {x} does not fit in 64 bits")))
        })
        .collect()
}

/// Scans `f·Ψ_n` over a given window; exact when `f` is integral.
pub fn scan_normal(word: &DelimitedWord, f: &Normal) -> Result<ScanOutcome> {
    if f.dim() != word.dim() {
        return Err(Error::DimensionMismatch {
            expected: word.dim(),
            got: f.dim(),
        });
    }
    match f {
        Normal::Integer(v) => Ok(ScanOutcome::Exact(scan_word(word, &integer_weights(v)?, 0.0))),
        Normal::Real(v) => {
            let n = word.n_left().max(word.n_right()) as f64;
            let fmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let bound = n * word.dim() as f64 * fmax * f64::EPSILON;
            Ok(ScanOutcome::Float(scan_word(word, v, bound)))
        }
    }
}

/// Scans `f·Ψ_n` for `|n| <= n` on the fixed point from `seed` (default seed if `None`).
pub fn scan_boundedness(
    s: &Substitution,
    f: &Normal,
    n: usize,
    seed: Option<&SeedPair>,
) -> Result<ScanOutcome> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("window size must be at least 2, got {n}")));
    }
    if f.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: f.dim(),
        });
    }
    let default;
    let seed = match seed {
        Some(seed) => seed,
        None => {
            default = s.default_seed()?;
            &default
        }
    };
    let window = generate_window(s, seed, n, n)?;
    scan_normal(window.word(), f)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorCheck {
    pub samples: usize,
    /// Largest `|f·Ψ(w)|` over the sampled factors.
    pub max_factor: f64,
    /// Largest `|f·Ψ_n|` over the window.
    pub prefix_bound: f64,
    /// `max_factor <= 2·prefix_bound`.
    pub within_bound: bool,
}

/// Checks `|f·Ψ(w)| <= 2·max_n |f·Ψ_n|` on factors `u_{[i,j)}` of the window.
pub fn factor_functional_bound_check(
    word: &DelimitedWord,
    f: &Normal,
    samples: &[Range<i64>],
) -> Result<FactorCheck> {
    if f.dim() != word.dim() {
        return Err(Error::DimensionMismatch {
            expected: word.dim(),
            got: f.dim(),
        });
    }
    let range = word.index_range();
    if let Some(bad) = samples
        .iter()
        .find(|r| r.start > r.end || r.start < range.start || r.end > range.end)
    {
        return Err(Error::InvalidArgument(format!(
            "factor {bad:?} is outside the window {range:?}"
        )));
    }
    fn run<T: ScanScalar>(word: &DelimitedWord, weights: &[T], samples: &[Range<i64>]) -> (T, T) {
        let series = scan_series(word, weights);
        let offset = word.n_left() as i64;
        let at = |n: i64| series[(n + offset) as usize].1;
        let prefix = series
            .iter()
            .map(|(_, v)| v.magnitude())
            .fold(T::ZERO, |m, v| if v > m { v } else { m });
        let factor = samples
            .iter()
            .map(|r| at(r.end).minus(at(r.start)).magnitude())
            .fold(T::ZERO, |m, v| if v > m { v } else { m });
        (factor, prefix)
    }
    let (max_factor, prefix_bound, within) = match f {
        Normal::Integer(v) => {
            let (a, b) = run(word, &integer_weights(v)?, samples);
            (a as f64, b as f64, a <= 2 * b)
        }
        Normal::Real(v) => {
            let (a, b) = run(word, v, samples);
            (a, b, a <= 2.0 * b)
        }
    };
    Ok(FactorCheck {
        samples: samples.len(),
        max_factor,
        prefix_bound,
        within_bound: within,
    })
}
