//! Images of fixed points under morphisms, and how hyperplanes and normals
//! behave under them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::{generate_window, DelimitedWord};
use crate::linalg;
use crate::matrix::IntMatrix;
use crate::spectral::{eigen_classify, eigenvector, ModulusClass};
use crate::substitution::{Morphism, SeedPair, Substitution};
use crate::word::{FiniteWord, Letter};

/// `φ(u)` for a delimited window `u`, with the delimiter before `φ(u_0)`.
#[derive(Clone, Debug)]
pub struct ImageWindow {
    morphism: Morphism,
    source: DelimitedWord,
    image: DelimitedWord,
    /// `starts[n + n_left]` is the signed position where `φ(u_n)` begins.
    starts: Vec<i64>,
}

/// `Ψ_m(φ(u)) = M_φ·Ψ_n(u) + Ψ(v)` with `v` a proper prefix of `φ(u_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition {
    pub m: i64,
    pub n: i64,
    pub v: FiniteWord,
}

impl ImageWindow {
    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn source(&self) -> &DelimitedWord {
        &self.source
    }

    pub fn image(&self) -> &DelimitedWord {
        &self.image
    }

    /// Signed image position where the block of `u_n` begins.
    pub fn block_start(&self, n: i64) -> Option<i64> {
        let i = n + self.source.n_left() as i64;
        usize::try_from(i).ok().and_then(|i| self.starts.get(i)).copied()
    }

    /// Locates `m` in the block of the source letter it came from. `None` when
    /// `m` lies outside the image or at its right end.
    pub fn decompose(&self, m: i64) -> Option<BlockDecomposition> {
        let range = self.image.index_range();
        if m < range.start || m >= range.end {
            return None;
        }
        let idx = self.starts.partition_point(|&s| s <= m).checked_sub(1)?;
        let n = idx as i64 - self.source.n_left() as i64;
        let start = self.starts[idx];
        let block = self.morphism.image(self.source.letter(n)?);
        let v = FiniteWord::new(
            self.morphism.target().clone(),
            block.symbols()[..(m - start) as usize].to_vec(),
        )
        .ok()?;
        Some(BlockDecomposition { m, n, v })
    }

    /// Truncates to at most `n_left`/`n_right` image letters around the delimiter.
    /// Source letters whose block is cut off are dropped.
    pub fn truncated(&self, n_left: usize, n_right: usize) -> ImageWindow {
        let image = self.image.truncated(n_left, n_right);
        let range = image.index_range();
        let first = self.starts.partition_point(|&s| s < range.start);
        let last = self.starts.partition_point(|&s| s <= range.end);
        let starts = self.starts[first..last].to_vec();
        let origin = self.source.n_left();
        let src_left = origin - first.min(origin);
        let src_right = (last - 1).saturating_sub(origin);
        ImageWindow {
            morphism: self.morphism.clone(),
            source: self.source.truncated(src_left, src_right),
            image,
            starts,
        }
    }
}

pub fn image_window(phi: &Morphism, w: &DelimitedWord) -> Result<ImageWindow> {
    if phi.source() != w.alphabet() {
        return Err(Error::AlphabetMismatch(
            "morphism source alphabet differs from the window alphabet".to_string(),
        ));
    }
    let mut right = Vec::new();
    phi.apply_into(w.right(), &mut right);
    let mut left_rev: Vec<Letter> = Vec::new();
    let mut starts_left = Vec::with_capacity(w.n_left());
    for &l in w.left_reversed() {
        left_rev.extend(phi.image(l).symbols().iter().rev());
        starts_left.push(-(left_rev.len() as i64));
    }
    starts_left.reverse();
    let mut starts = starts_left;
    let mut pos = 0i64;
    starts.push(0);
    for &l in w.right() {
        pos += phi.image(l).len() as i64;
        starts.push(pos);
    }
    let mut left = left_rev;
    left.reverse();
    Ok(ImageWindow {
        morphism: phi.clone(),
        source: w.clone(),
        image: DelimitedWord::new(phi.target().clone(), &left, &right)?,
        starts,
    })
}

/// `φ(u)` with at least `n` image letters on each side of the delimiter.
pub fn image_of_fixed_point(
    s: &Substitution,
    phi: &Morphism,
    seed: &SeedPair,
    n: usize,
) -> Result<ImageWindow> {
    if phi.source() != s.alphabet() {
        return Err(Error::AlphabetMismatch(
            "morphism source alphabet differs from the substitution alphabet".to_string(),
        ));
    }
    let mut src = n.max(1);
    for _ in 0..40 {
        let window = generate_window(s, seed, src, src)?;
        let image = image_window(phi, window.word())?;
        if image.image.n_left() >= n && image.image.n_right() >= n {
            return Ok(image.truncated(n, n));
        }
        src = src.saturating_mul(2);
        if src > crate::substitution::EXPANSION_LIMIT {
            break;
        }
    }
    Err(Error::ErasedWindow)
}

/// Basis of the hyperplane orthogonal to `normal`.
pub fn hyperplane_basis(normal: &[f64]) -> Result<Vec<Vec<f64>>> {
    let norm = linalg::norm(normal);
    if !(norm > 0.0) {
        return Err(Error::InvalidNormal("normal must be nonzero".to_string()));
    }
    let unit: Vec<f64> = normal.iter().map(|x| x / norm).collect();
    let full = linalg::lowest_index_completion(&[unit], normal.len(), normal.len());
    Ok(full[1..].to_vec())
}

/// A hyperplane of the target space containing `M_φ·span(h_basis)`, completed
/// deterministically in lowest-index order.
pub fn transported_hyperplane(
    m_phi: &IntMatrix,
    h_basis: &[Vec<f64>],
    target_dim: usize,
) -> Result<Vec<Vec<f64>>> {
    if m_phi.rows() != target_dim {
        return Err(Error::DimensionMismatch {
            expected: target_dim,
            got: m_phi.rows(),
        });
    }
    if let Some(h) = h_basis.iter().find(|h| h.len() != m_phi.cols()) {
        return Err(Error::DimensionMismatch {
            expected: m_phi.cols(),
            got: h.len(),
        });
    }
    let m = m_phi.to_f64();
    let images: Vec<Vec<f64>> = h_basis
        .iter()
        .map(|h| (&m * nalgebra::DVector::from_column_slice(h)).iter().copied().collect())
        .collect();
    let span = linalg::orthonormal_span(&images, target_dim, 1e-10, target_dim);
    if span.len() >= target_dim {
        return Err(Error::HyperplaneSpansTarget(target_dim));
    }
    Ok(linalg::lowest_index_completion(&span, target_dim, target_dim - 1))
}

/// Unit normal of the hyperplane obtained by [`transported_hyperplane`].
pub fn transported_normal(m_phi: &IntMatrix, normal: &[f64]) -> Result<Vec<f64>> {
    let target = m_phi.rows();
    let hyperplane = transported_hyperplane(m_phi, &hyperplane_basis(normal)?, target)?;
    let full = linalg::lowest_index_completion(&hyperplane, target, target);
    Ok(full[target - 1].clone())
}

/// Linear conditions on a normal `f` of the target space: `f·M_φ·r = 0` for
/// every eigenvector `r` of `M_ψ` with eigenvalue of modulus `> 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalConstraintSystem {
    /// Real constraint rows (real and imaginary parts for complex eigenvalues).
    pub rows: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub null_space: Vec<Vec<f64>>,
    /// For each expanding eigenvalue, whether its left-eigenvector coefficients
    /// are nonzero at some letter, so that the condition is forced.
    pub forced: Vec<bool>,
}

pub fn image_normal_constraints(
    m_phi: &IntMatrix,
    m_psi: &IntMatrix,
    tol: f64,
) -> Result<NormalConstraintSystem> {
    let d = m_psi.require_square()?;
    if m_phi.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: m_phi.cols(),
        });
    }
    let target = m_phi.rows();
    let report = eigen_classify(m_psi, tol)?;
    let m_t = m_psi.transpose();
    let phi = m_phi.to_f64().map(|x| Complex64::new(x, 0.0));
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut forced = Vec::new();
    for e in report
        .eigen_classes
        .iter()
        .filter(|e| e.modulus_class == ModulusClass::Gt1)
    {
        let r = eigenvector(m_psi, e, tol)?;
        let left = eigenvector(&m_t, e, tol)?;
        let scale = left.iter().map(|z| z.norm()).fold(0.0, f64::max);
        forced.push(left.iter().any(|z| z.norm() > tol * scale.max(1.0)));
        let image = &phi * nalgebra::DVector::from_column_slice(&r);
        let re: Vec<f64> = image.iter().map(|z| z.re).collect();
        let norm = linalg::norm(&re).max(f64::MIN_POSITIVE);
        rows.push(re.iter().map(|x| x / norm).collect());
        if !e.is_real() {
            let im: Vec<f64> = image.iter().map(|z| z.im).collect();
            let norm = linalg::norm(&im).max(f64::MIN_POSITIVE);
            rows.push(im.iter().map(|x| x / norm).collect());
        }
    }
    let (singular_values, null_space) = if rows.is_empty() {
        (Vec::new(), linalg::lowest_index_completion(&[], target, target))
    } else {
        let a = nalgebra::DMatrix::from_fn(rows.len(), target, |r, c| Complex64::new(rows[r][c], 0.0));
        let svd = a.clone().svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        let top = sv.first().copied().unwrap_or(0.0);
        let rank = sv.iter().filter(|&&s| s > 100.0 * tol * top.max(1.0)).count();
        let (vecs, _) = linalg::smallest_right_singular_vectors(&a, target - rank);
        let null: Vec<Vec<f64>> = vecs.iter().map(|v| v.iter().map(|z| z.re).collect()).collect();
        (sv, linalg::orthonormal_span(&null, target, 1e-8, target - rank))
    };
    let rank = target - null_space.len();
    Ok(NormalConstraintSystem {
        rows,
        singular_values,
        rank,
        null_space,
        forced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdl::{scan_normal, Normal, ScanVerdict};
    use crate::fixtures;
    use crate::spectral::{candidate_normal_space, DEFAULT_TOL};
    use crate::word::{parikh, Alphabet};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn erasing_image_of_contracting_fixed_point() {
        let s = fixtures::contracting_substitution();
        let seed = s.seed(1, 'A', 'B').unwrap();
        let w = generate_window(&s, &seed, 20, 20).unwrap();
        assert!(w.word().to_string().contains("|AABBBCCCC"));
        let img = image_window(&fixtures::erasing_projection(), w.word()).unwrap();
        assert!(img.image().to_string().contains("|AABBBAA"));
        assert_eq!(img.block_start(0), Some(0));
        assert_eq!(img.block_start(1), Some(1));
    }

    #[test]
    fn identity_image_is_unchanged() {
        let s = fixtures::counterexample_substitution();
        let w = generate_window(&s, &s.default_seed().unwrap(), 40, 40).unwrap();
        let img = image_window(&Morphism::identity(s.alphabet()), w.word()).unwrap();
        assert_eq!(img.image(), w.word());
    }

    #[test]
    fn delimiter_skips_erased_blocks() {
        let abc = Alphabet::new("ABC".chars()).unwrap();
        let word = DelimitedWord::parse(&abc, "AB|CCA").unwrap();
        let img = image_window(&fixtures::erasing_projection(), &word).unwrap();
        assert_eq!(img.image().to_string(), "AB|A");
        assert_eq!(img.block_start(0), Some(0));
        assert_eq!(img.block_start(2), Some(0));
        let d = img.decompose(0).unwrap();
        assert_eq!(d.n, 2);
        assert!(d.v.is_empty());
        assert_eq!(img.decompose(1), None);
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let w = generate_window(&fixtures::thue_morse(), &fixtures::thue_morse().default_seed().unwrap(), 4, 4)
            .unwrap();
        assert!(matches!(
            image_window(&fixtures::erasing_projection(), w.word()),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    fn check_decomposition(img: &ImageWindow, m: i64) {
        let Some(dec) = img.decompose(m) else { return };
        let m_phi = img.morphism().incidence_matrix();
        let src_path = img.source().parikh_path();
        let img_path = img.image().parikh_path();
        let lhs = img_path.vector(m).unwrap();
        let rhs = &m_phi.mul_vector(&src_path.vector(dec.n).unwrap()) + &parikh(&dec.v);
        assert_eq!(lhs, rhs, "m = {m}");
        let block = img.morphism().image(img.source().letter(dec.n).unwrap());
        assert!(dec.v.len() < block.len());
        assert_eq!(&block.symbols()[..dec.v.len()], dec.v.symbols());
    }

    #[test]
    fn block_decomposition_on_random_positions() {
        let s = fixtures::contracting_substitution();
        let seed = s.seed(1, 'A', 'B').unwrap();
        let img = image_of_fixed_point(&s, &fixtures::erasing_projection(), &seed, 5000).unwrap();
        let range = img.image().index_range();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            check_decomposition(&img, rng.random_range(range.clone()));
        }
        // block starts on both sides
        for n in -200..200 {
            let m = img.block_start(n).unwrap();
            let lhs = img.image().parikh_path().vector(m).unwrap();
            let rhs = img
                .morphism()
                .incidence_matrix()
                .mul_vector(&img.source().parikh_path().vector(n).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn image_window_has_requested_size() {
        let s = fixtures::contracting_substitution();
        let seed = s.seed(1, 'A', 'B').unwrap();
        let img = image_of_fixed_point(&s, &fixtures::erasing_projection(), &seed, 1000).unwrap();
        assert_eq!(img.image().n_left(), 1000);
        assert_eq!(img.image().n_right(), 1000);
        let full = image_window(img.morphism(), img.source()).unwrap();
        assert!(full.image().n_left() >= 1000);
        assert_eq!(
            full.image().truncated(1000, 1000).to_string(),
            img.image().to_string()
        );
    }

    #[test]
    fn identity_transport_keeps_the_hyperplane() {
        let h = hyperplane_basis(&[3.0, -1.0, 0.0]).unwrap();
        let t = transported_hyperplane(&IntMatrix::identity(3), &h, 3).unwrap();
        assert_eq!(t.len(), 2);
        let n = transported_normal(&IntMatrix::identity(3), &[3.0, -1.0, 0.0]).unwrap();
        assert_eq!(
            linalg::integer_form(&n, 1e-9, 100),
            Some(vec![3.into(), (-1).into(), 0.into()])
        );
    }

    #[test]
    fn erasing_transport_can_fill_the_target() {
        let m_phi = fixtures::erasing_projection().incidence_matrix();
        let h = hyperplane_basis(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            transported_hyperplane(&m_phi, &h, 2),
            Err(Error::HyperplaneSpansTarget(2))
        );
    }

    #[test]
    fn relabeled_normal_stays_bounded() {
        let s = fixtures::contracting_substitution();
        let ns = candidate_normal_space(s.incidence(), DEFAULT_TOL).unwrap();
        let phi = fixtures::cyclic_relabeling();
        let f = transported_normal(&phi.incidence_matrix(), &ns.basis[0]).unwrap();
        let seed = s.seed(1, 'A', 'B').unwrap();
        let img = image_of_fixed_point(&s, &phi, &seed, 100_000).unwrap();
        let report = scan_normal(img.image(), &Normal::Real(f)).unwrap();
        assert_eq!(report.verdict(), ScanVerdict::BoundedSoFar);
        assert!(report.max() < 10.0);
    }

    #[test]
    fn constraints_for_fixtures() {
        let c = image_normal_constraints(
            &fixtures::erasing_projection().incidence_matrix(),
            fixtures::contracting_substitution().incidence(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(c.rank, 2);
        assert!(c.null_space.is_empty());
        assert_eq!(c.forced, vec![true, true]);

        let c = image_normal_constraints(&IntMatrix::identity(3), &IntMatrix::identity(3), DEFAULT_TOL)
            .unwrap();
        assert!(c.rows.is_empty());
        assert_eq!(c.null_space.len(), 3);

        let m = fixtures::counterexample_substitution().incidence().clone();
        let c = image_normal_constraints(&IntMatrix::identity(3), &m, DEFAULT_TOL).unwrap();
        assert_eq!(c.rank, 2);
        assert_eq!(c.null_space.len(), 1);
        assert_eq!(
            linalg::integer_form(&c.null_space[0], 1e-9, 100),
            Some(vec![3.into(), (-1).into(), 0.into()])
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn parikh_transport(symbols in prop::collection::vec(0u16..3, 0..200)) {
            let phi = fixtures::erasing_projection();
            let w = FiniteWord::new(phi.source().clone(), symbols).unwrap();
            let image = phi.apply(&w).unwrap();
            prop_assert_eq!(parikh(&image), phi.incidence_matrix().mul_vector(&parikh(&w)));
        }

        #[test]
        fn decomposition_at_every_position(left in 0usize..150, right in 0usize..150) {
            let s = fixtures::contracting_substitution();
            let seed = s.seed(1, 'A', 'B').unwrap();
            let w = generate_window(&s, &seed, left, right).unwrap();
            let img = image_window(&fixtures::erasing_projection(), w.word()).unwrap();
            let range = img.image().index_range();
            for m in range {
                check_decomposition(&img, m);
            }
        }
    }
}
