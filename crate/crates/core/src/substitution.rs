//! Morphisms between free monoids, substitutions and their incidence matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::word::{Alphabet, FiniteWord, Letter};

/// Upper bound on the length of a single letter image when powers of a
/// substitution are materialized.
pub const EXPANSION_LIMIT: usize = 1 << 24;

/// A monoid morphism `source* -> target*`, given by one image word per source letter.
/// Images may be empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    rules: Vec<FiniteWord>,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, rules: Vec<FiniteWord>) -> Result<Self> {
        if rules.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                got: rules.len(),
            });
        }
        if let Some(bad) = rules.iter().find(|r| r.alphabet() != &target) {
            return Err(Error::AlphabetMismatch(format!(
                "rule image over {} but target alphabet is {}",
                bad.alphabet(),
                target
            )));
        }
        Ok(Self {
            source,
            target,
            rules,
        })
    }

    /// Builds a morphism from `(letter, image)` string pairs.
    pub fn from_rules<S: AsRef<str>>(
        source: &Alphabet,
        target: &Alphabet,
        rules: &[(char, S)],
    ) -> Result<Self> {
        let mut images: Vec<Option<FiniteWord>> = vec![None; source.len()];
        for (letter, image) in rules {
            let idx = source
                .index(*letter)
                .ok_or_else(|| Error::UnexpectedRule(letter.to_string()))?;
            let image = image.as_ref();
            let word = target.parse_word(image).map_err(|e| match e {
                Error::UnknownSymbol { symbol, .. } => Error::UnknownSymbol {
                    symbol,
                    context: format!("rules.{letter}"),
                },
                other => other,
            })?;
            images[idx as usize] = Some(word);
        }
        let rules = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or(Error::MissingRule(source.symbol(i as Letter))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source.clone(), target.clone(), rules)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        let rules = (0..alphabet.len())
            .map(|i| FiniteWord::from_parts_unchecked(alphabet.clone(), vec![i as Letter]))
            .collect();
        Self {
            source: alphabet.clone(),
            target: alphabet.clone(),
            rules,
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image(&self, letter: Letter) -> &FiniteWord {
        &self.rules[letter as usize]
    }

    pub fn rules(&self) -> &[FiniteWord] {
        &self.rules
    }

    pub fn is_erasing(&self) -> bool {
        self.rules.iter().any(FiniteWord::is_empty)
    }

    /// Appends the image of `letters` to `out`.
    pub fn apply_into(&self, letters: &[Letter], out: &mut Vec<Letter>) {
        for &l in letters {
            out.extend_from_slice(self.rules[l as usize].symbols());
        }
    }

    /// Length of the image of `letters`, without building it.
    pub fn image_len(&self, letters: &[Letter]) -> usize {
        letters.iter().map(|&l| self.rules[l as usize].len()).sum()
    }

    pub fn apply(&self, word: &FiniteWord) -> Result<FiniteWord> {
        if word.alphabet() != &self.source {
            return Err(Error::AlphabetMismatch(format!(
                "word over {} but morphism source is {}",
                word.alphabet(),
                self.source
            )));
        }
        let mut out = Vec::with_capacity(self.image_len(word.symbols()));
        self.apply_into(word.symbols(), &mut out);
        Ok(FiniteWord::from_parts_unchecked(self.target.clone(), out))
    }

    /// Incidence matrix: entry `(b, a)` counts the letter `b` in the image of `a`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.len(), self.source.len());
        for (a, image) in self.rules.iter().enumerate() {
            let counts = image.parikh();
            for (b, c) in counts.counts().iter().enumerate() {
                m.set(b, a, c.clone());
            }
        }
        m
    }

    /// `outer ∘ inner`: apply `inner` first.
    pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
        if inner.target != outer.source {
            return Err(Error::AlphabetMismatch(format!(
                "inner target {} differs from outer source {}",
                inner.target, outer.source
            )));
        }
        let rules = inner
            .rules
            .iter()
            .map(|w| outer.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source: inner.source.clone(),
            target: outer.target.clone(),
            rules,
        })
    }

    pub fn to_spec(&self) -> MorphismSpec {
        MorphismSpec {
            source_alphabet: self.source.letters().iter().map(char::to_string).collect(),
            target_alphabet: self.target.letters().iter().map(char::to_string).collect(),
            rules: self
                .source
                .letters()
                .iter()
                .zip(&self.rules)
                .map(|(c, w)| (c.to_string(), w.to_string()))
                .collect(),
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({self})")
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let image = if w.is_empty() {
                "ε".to_string()
            } else {
                w.to_string()
            };
            write!(f, "{}↦{}", self.source.symbol(i as Letter), image)?;
        }
        Ok(())
    }
}

/// Composition of two morphisms, `outer ∘ inner`.
pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
    Morphism::compose(outer, inner)
}

/// A non-erasing endomorphism of a free monoid, with its incidence matrix cached.
#[derive(Clone, PartialEq, Eq)]
pub struct Substitution {
    morphism: Morphism,
    incidence: IntMatrix,
}

impl Substitution {
    pub fn new(morphism: Morphism) -> Result<Self> {
        if morphism.source != morphism.target {
            return Err(Error::AlphabetMismatch(format!(
                "substitution needs equal source and target, got {} and {}",
                morphism.source, morphism.target
            )));
        }
        if let Some(i) = morphism.rules.iter().position(FiniteWord::is_empty) {
            return Err(Error::ErasingSubstitution(
                morphism.source.symbol(i as Letter),
            ));
        }
        let incidence = morphism.incidence_matrix();
        Ok(Self {
            morphism,
            incidence,
        })
    }

    pub fn from_rules<S: AsRef<str>>(alphabet: &Alphabet, rules: &[(char, S)]) -> Result<Self> {
        Self::new(Morphism::from_rules(alphabet, alphabet, rules)?)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.morphism.source
    }

    pub fn dim(&self) -> usize {
        self.morphism.source.len()
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn incidence(&self) -> &IntMatrix {
        &self.incidence
    }

    pub fn image(&self, letter: Letter) -> &FiniteWord {
        self.morphism.image(letter)
    }

    pub fn apply(&self, word: &FiniteWord) -> Result<FiniteWord> {
        self.morphism.apply(word)
    }

    /// `ψ^k` as a substitution. Fails if some letter image would exceed
    /// [`EXPANSION_LIMIT`].
    pub fn power(&self, k: usize) -> Result<Substitution> {
        let lengths = column_sums(&self.incidence.pow(k as u32));
        if lengths.iter().any(|l| l.to_usize().is_none_or(|l| l > EXPANSION_LIMIT)) {
            return Err(Error::ExpansionTooLarge {
                limit: EXPANSION_LIMIT,
            });
        }
        let mut current = Morphism::identity(self.alphabet());
        for _ in 0..k {
            current = Morphism::compose(&self.morphism, &current)?;
        }
        Ok(Substitution {
            morphism: current,
            incidence: self.incidence.pow(k as u32),
        })
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive(&self.incidence)
    }

    /// All seed pairs `(k, a, b)` with `k <= max_power`, ordered by `(k, a, b)`.
    ///
    /// The search stops early at the first power whose letter images are too
    /// large to materialize.
    pub fn find_seed_pairs(&self, max_power: usize) -> Vec<SeedPair> {
        let d = self.dim();
        let mut pairs = Vec::new();
        let mut first: Vec<Letter> = (0..d as Letter).collect();
        let mut last: Vec<Letter> = first.clone();
        let mut matrix_power = IntMatrix::identity(d);
        for k in 1..=max_power {
            // first/last letter of ψ^k(x), iterated through ψ alone
            first = first
                .iter()
                .map(|&x| self.image(x).symbols()[0])
                .collect();
            last = last
                .iter()
                .map(|&x| *self.image(x).symbols().last().unwrap())
                .collect();
            matrix_power = &matrix_power * &self.incidence;
            let lengths = column_sums(&matrix_power);
            let long = |x: usize| lengths[x] >= BigInt::from(2);
            let starts: Vec<usize> = (0..d).filter(|&a| first[a] as usize == a && long(a)).collect();
            let ends: Vec<usize> = (0..d).filter(|&b| last[b] as usize == b && long(b)).collect();
            if starts.is_empty() || ends.is_empty() {
                continue;
            }
            let Ok(power) = self.power(k) else {
                break;
            };
            for &a in &starts {
                let img_a = power.image(a as Letter).symbols();
                let w = FiniteWord::from_parts_unchecked(self.alphabet().clone(), img_a[1..].to_vec());
                for &b in &ends {
                    let img_b = power.image(b as Letter).symbols();
                    let v = FiniteWord::from_parts_unchecked(
                        self.alphabet().clone(),
                        img_b[..img_b.len() - 1].to_vec(),
                    );
                    pairs.push(SeedPair {
                        power: k,
                        a: a as Letter,
                        b: b as Letter,
                        v: v.clone(),
                        w: w.clone(),
                    });
                }
            }
        }
        pairs
    }

    /// First seed pair up to power `2d`.
    pub fn default_seed(&self) -> Result<SeedPair> {
        let max_power = 2 * self.dim();
        self.find_seed_pairs(max_power)
            .into_iter()
            .next()
            .ok_or(Error::NoSeedPair(max_power))
    }

    /// Looks up the seed pair `(power, a, b)` given by letter symbols.
    pub fn seed(&self, power: usize, a: char, b: char) -> Result<SeedPair> {
        let invalid = |reason: &str| Error::InvalidSeed {
            power,
            a,
            b,
            reason: reason.to_string(),
        };
        let ai = self.alphabet().index(a).ok_or_else(|| invalid("unknown letter"))?;
        let bi = self.alphabet().index(b).ok_or_else(|| invalid("unknown letter"))?;
        if power == 0 {
            return Err(invalid("power must be at least 1"));
        }
        let p = self.power(power)?;
        let img_a = p.image(ai).symbols();
        let img_b = p.image(bi).symbols();
        if img_a.len() < 2 || img_a[0] != ai {
            return Err(invalid("image of a does not start with a, or is too short"));
        }
        if img_b.len() < 2 || img_b[img_b.len() - 1] != bi {
            return Err(invalid("image of b does not end with b, or is too short"));
        }
        Ok(SeedPair {
            power,
            a: ai,
            b: bi,
            w: FiniteWord::from_parts_unchecked(self.alphabet().clone(), img_a[1..].to_vec()),
            v: FiniteWord::from_parts_unchecked(
                self.alphabet().clone(),
                img_b[..img_b.len() - 1].to_vec(),
            ),
        })
    }

    pub fn to_spec(&self) -> SubstitutionSpec {
        let m = self.morphism.to_spec();
        SubstitutionSpec {
            alphabet: m.source_alphabet,
            rules: m.rules,
        }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Substitution({})", self.morphism)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.morphism.fmt(f)
    }
}

fn column_sums(m: &IntMatrix) -> Vec<BigInt> {
    (0..m.cols()).map(|c| m.column(c).total()).collect()
}

/// Letters `a`, `b` and words `v`, `w` with `ψ^k(a) = a·w` and `ψ^k(b) = v·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedPair {
    pub power: usize,
    pub a: Letter,
    pub b: Letter,
    pub v: FiniteWord,
    pub w: FiniteWord,
}

impl SeedPair {
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        format!(
            "(k={}, a={}, b={})",
            self.power,
            alphabet.symbol(self.a),
            alphabet.symbol(self.b)
        )
    }
}

/// Primitivity by the Wielandt bound: a nonnegative `d x d` matrix is
/// primitive iff its `((d-1)^2 + 1)`-th power is entrywise positive.
///
/// Only the zero pattern matters, so the power is taken over booleans.
pub fn is_primitive(m: &IntMatrix) -> bool {
    let Ok(d) = m.require_square() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let pattern: Vec<bool> = (0..d * d)
        .map(|i| num_traits::Signed::is_positive(m.get(i / d, i % d)))
        .collect();
    let exponent = (d - 1) * (d - 1) + 1;
    let power = bool_pow(&pattern, d, exponent);
    power.iter().all(|&x| x)
}

fn bool_mul(a: &[bool], b: &[bool], d: usize) -> Vec<bool> {
    let mut out = vec![false; d * d];
    for i in 0..d {
        for k in 0..d {
            if a[i * d + k] {
                for j in 0..d {
                    out[i * d + j] |= b[k * d + j];
                }
            }
        }
    }
    out
}

fn bool_pow(m: &[bool], d: usize, mut exp: usize) -> Vec<bool> {
    let mut acc: Vec<bool> = (0..d * d).map(|i| i / d == i % d).collect();
    let mut base = m.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = bool_mul(&acc, &base, d);
        }
        exp >>= 1;
        if exp > 0 {
            base = bool_mul(&base, &base, d);
        }
    }
    acc
}

/// JSON form of a substitution:
/// `{"alphabet": ["A","B"], "rules": {"A": "AB", "B": "A"}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstitutionSpec {
    pub alphabet: Vec<String>,
    pub rules: BTreeMap<String, String>,
}

impl SubstitutionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_morphism(&self) -> Result<Morphism> {
        let alphabet = Alphabet::from_names(&self.alphabet)?;
        build_from_rule_map(&alphabet, &alphabet, &self.rules)
    }

    pub fn build(&self) -> Result<Substitution> {
        Substitution::new(self.to_morphism()?)
    }
}

/// JSON form of a morphism between possibly different alphabets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub source_alphabet: Vec<String>,
    pub target_alphabet: Vec<String>,
    pub rules: BTreeMap<String, String>,
}

impl MorphismSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<Morphism> {
        let source = Alphabet::from_names(&self.source_alphabet)?;
        let target = Alphabet::from_names(&self.target_alphabet)?;
        build_from_rule_map(&source, &target, &self.rules)
    }
}

fn build_from_rule_map(
    source: &Alphabet,
    target: &Alphabet,
    rules: &BTreeMap<String, String>,
) -> Result<Morphism> {
    let mut pairs = Vec::with_capacity(rules.len());
    for (key, image) in rules {
        let mut chars = key.chars();
        let letter = match (chars.next(), chars.next()) {
            (Some(c), None) if source.index(c).is_some() => c,
            _ => return Err(Error::UnexpectedRule(key.clone())),
        };
        pairs.push((letter, image.as_str()));
    }
    Morphism::from_rules(source, target, &pairs)
}
