use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::fixedpoint::ParikhPath;

/// Scalar type for point coordinates: `f64`, or `BigRational` for exact checks.
pub trait Coord: Clone + PartialOrd + Debug + Signed {
    fn from_count(n: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coord for f64 {
    fn from_count(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coord for BigRational {
    fn from_count(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Points `x_n = ℓ·Ψ_n(u)` over a window, together with the lattice spacing `η`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricRepresentation<S> {
    lengths: Vec<S>,
    eta: S,
    n_left: usize,
    points: Vec<S>,
}

fn dot<S: Coord>(a: &[S], counts: &[i64]) -> S {
    a.iter()
        .zip(counts)
        .fold(S::zero(), |acc, (x, &c)| acc + x.clone() * S::from_count(c))
}

impl<S: Coord> GeometricRepresentation<S> {
    pub fn from_lengths(lengths: Vec<S>, eta: S, path: &ParikhPath) -> Result<Self> {
        if lengths.len() != path.dim() {
            return Err(Error::DimensionMismatch {
                expected: path.dim(),
                got: lengths.len(),
            });
        }
        if let Some(bad) = lengths.iter().find(|l| !(**l > S::zero())) {
            return Err(Error::InvalidLengths(format!("length {bad:?} is not positive")));
        }
        if !(eta > S::zero()) {
            return Err(Error::InvalidLengths(format!("η = {eta:?} is not positive")));
        }
        let n_left = -*path.index_range().start() as usize;
        let points = path.iter().map(|(_, v)| dot(&lengths, v)).collect();
        Ok(Self {
            lengths,
            eta,
            n_left,
            points,
        })
    }

    /// `η = 1 + max|h_a|` and `ℓ = h + η·(1,…,1)`. Constant `h` is rejected since
    /// it only gives the trivial representation.
    pub fn from_direction(h: &[S], path: &ParikhPath) -> Result<Self> {
        if h.windows(2).all(|w| w[0] == w[1]) {
            return Err(Error::InvalidNormal(
                "all components are equal; the representation would be trivial".to_string(),
            ));
        }
        let max = h
            .iter()
            .map(|x| x.abs())
            .fold(S::zero(), |m, x| if x > m { x } else { m });
        let eta = S::one() + max;
        let lengths = h.iter().map(|x| x.clone() + eta.clone()).collect();
        Self::from_lengths(lengths, eta, path)
    }

    pub fn lengths(&self) -> &[S] {
        &self.lengths
    }

    pub fn eta(&self) -> &S {
        &self.eta
    }

    /// At least two letter lengths differ.
    pub fn is_nontrivial(&self) -> bool {
        self.lengths.windows(2).any(|w| w[0] != w[1])
    }

    pub fn index_range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n_left as i64)..=(self.points.len() - self.n_left - 1) as i64
    }

    pub fn point(&self, n: i64) -> Option<&S> {
        if !self.index_range().contains(&n) {
            return None;
        }
        self.points.get((n + self.n_left as i64) as usize)
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, &S)> + '_ {
        let start = -(self.n_left as i64);
        self.points
            .iter()
            .enumerate()
            .map(move |(i, x)| (start + i as i64, x))
    }

    /// `x_{n+1} - x_n`.
    pub fn gap(&self, n: i64) -> Option<S> {
        Some(self.point(n + 1)?.clone() - self.point(n)?.clone())
    }

    /// `ℓ - η·(1,…,1)`.
    pub fn shifted_lengths(&self) -> Vec<S> {
        self.lengths
            .iter()
            .map(|l| l.clone() - self.eta.clone())
            .collect()
    }

    pub fn deviation(&self, n: i64) -> Option<S> {
        let x = self.point(n)?;
        Some((x.clone() - self.eta.clone() * S::from_count(n)).abs())
    }

    /// `|x_n - ηn|` for every `n` in the window.
    pub fn deviation_series(&self) -> Vec<(i64, S)> {
        self.points()
            .map(|(n, x)| (n, (x.clone() - self.eta.clone() * S::from_count(n)).abs()))
            .collect()
    }

    pub fn max_deviation(&self) -> S {
        self.deviation_series()
            .into_iter()
            .map(|(_, d)| d)
            .fold(S::zero(), |m, d| if d > m { d } else { m })
    }
}

/// Representation from a real unit vector `h` (within `tol` of unit length).
pub fn build_representation(
    h: &[f64],
    path: &ParikhPath,
    tol: f64,
) -> Result<GeometricRepresentation<f64>> {
    if h.len() != path.dim() {
        return Err(Error::DimensionMismatch {
            expected: path.dim(),
            got: h.len(),
        });
    }
    let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol {
        return Err(Error::InvalidNormal(format!("expected a unit vector, norm is {norm}")));
    }
    GeometricRepresentation::from_direction(h, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::{generate_window, DelimitedWord};
    use crate::fixtures;
    use crate::word::Alphabet;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn example_window_points() {
        let abc = Alphabet::new("ABC".chars()).unwrap();
        let word = DelimitedWord::parse(&abc, "BCB|CBA").unwrap();
        let path = word.parikh_path();
        let (l1, l2, l3) = (rat(2, 1), rat(3, 1), rat(7, 1));
        let rep = GeometricRepresentation::from_lengths(
            vec![l1.clone(), l2.clone(), l3.clone()],
            rat(4, 1),
            &path,
        )
        .unwrap();
        assert_eq!(rep.point(0), Some(&rat(0, 1)));
        assert_eq!(rep.point(1), Some(&l3));
        assert_eq!(rep.point(2), Some(&(l2.clone() + l3.clone())));
        assert_eq!(rep.point(-3), Some(&(-(rat(2, 1) * l2) - l3)));
        assert!(rep.is_nontrivial());
    }

    #[test]
    fn lengths_from_unit_direction() {
        let s = fixtures::counterexample_substitution();
        let seed = s.seed(1, 'B', 'B').unwrap();
        let w = generate_window(&s, &seed, 50, 50).unwrap();
        let path = w.parikh_path();
        let r10 = 10f64.sqrt();
        let h = [3.0 / r10, -1.0 / r10, 0.0];
        let rep = build_representation(&h, &path, 1e-9).unwrap();
        let eta = 1.0 + 3.0 / r10;
        assert!((rep.eta() - eta).abs() < 1e-15);
        for (l, hi) in rep.lengths().iter().zip(h) {
            assert!((l - (hi + eta)).abs() < 1e-15);
            assert!(*l > 0.0);
        }
        for (n, d) in rep.deviation_series() {
            let expect = path.get(n).unwrap().iter().zip(h).map(|(&c, hi)| c as f64 * hi).sum::<f64>();
            assert!((d - expect.abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn partially_equal_direction_is_accepted() {
        let abc = Alphabet::new("ABC".chars()).unwrap();
        let path = DelimitedWord::parse(&abc, "AB|CA").unwrap().parikh_path();
        let h = [0.5f64.sqrt(), 0.5f64.sqrt(), 0.0];
        let rep = build_representation(&h, &path, 1e-9).unwrap();
        assert!(rep.is_nontrivial());

        let c = 1.0 / 3f64.sqrt();
        assert!(matches!(
            build_representation(&[c, c, c], &path, 1e-9),
            Err(Error::InvalidNormal(_))
        ));
        assert!(build_representation(&[1.0, 1.0, 0.0], &path, 1e-9).is_err());
    }

    #[test]
    fn trivial_lengths_have_zero_deviation() {
        let s = fixtures::thue_morse();
        let w = generate_window(&s, &s.default_seed().unwrap(), 100, 100).unwrap();
        let rep =
            GeometricRepresentation::from_lengths(vec![rat(3, 2), rat(3, 2)], rat(3, 2), &w.parikh_path())
                .unwrap();
        assert!(!rep.is_nontrivial());
        assert_eq!(rep.max_deviation(), rat(0, 1));
    }

    #[test]
    fn rejects_nonpositive_lengths() {
        let abc = Alphabet::new("AB".chars()).unwrap();
        let path = DelimitedWord::parse(&abc, "A|B").unwrap().parikh_path();
        assert!(matches!(
            GeometricRepresentation::from_lengths(vec![1.0, 0.0], 1.0, &path),
            Err(Error::InvalidLengths(_))
        ));
        assert!(matches!(
            GeometricRepresentation::from_lengths(vec![1.0], 1.0, &path),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn deviation_identity_and_gap_law(
            fixture in 0usize..4,
            left in 0usize..300,
            right in 0usize..300,
            h in prop::collection::vec(-20i64..=20, 3),
        ) {
            let (_, s) = fixtures::all_substitutions().swap_remove(fixture);
            let d = s.dim();
            let h: Vec<BigRational> = h[..d].iter().map(|&x| rat(x, 7)).collect();
            prop_assume!(h.windows(2).any(|w| w[0] != w[1]));
            let w = generate_window(&s, &s.default_seed().unwrap(), left, right).unwrap();
            let path = w.parikh_path();
            let rep = GeometricRepresentation::from_direction(&h, &path).unwrap();
            let shift = rep.shifted_lengths();
            for (n, dev) in rep.deviation_series() {
                prop_assert_eq!(dev, dot(&shift, path.get(n).unwrap()).abs());
            }
            let range = w.index_range();
            let mut first_gap: Vec<Option<BigRational>> = vec![None; d];
            for n in range.start..range.end {
                let a = w.letter(n).unwrap() as usize;
                let g = rep.gap(n).unwrap();
                match &first_gap[a] {
                    Some(prev) => prop_assert_eq!(prev, &g),
                    None => first_gap[a] = Some(g),
                }
            }
        }
    }
}
