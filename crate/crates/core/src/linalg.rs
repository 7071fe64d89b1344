//! Exact kernels over ℚ and a few numeric helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Reduced row echelon form over ℚ; returns the matrix and its pivot columns.
fn rref(m: &IntMatrix) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[row].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &IntMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel `{x : m·x = 0}` as primitive integer vectors whose
/// first nonzero entry is positive.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let cols = m.cols();
    let (a, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            primitive_integer_vector(&v)
        })
        .collect()
}

/// Clears denominators and common factors; first nonzero entry positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    normalize_integer_vector(ints)
}

pub fn normalize_integer_vector(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let sign_flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x /= &g;
        if sign_flip {
            *x = -&*x;
        }
    }
    v
}

/// Integer vector proportional to `v` (entries up to `max_entry` in size), if one
/// matches every coordinate within `tol` after rescaling.
pub fn integer_form(v: &[f64], tol: f64, max_entry: u32) -> Option<Vec<BigInt>> {
    let pivot = v
        .iter()
        .copied()
        .filter(|x| x.abs() > tol)
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))?;
    let unit: Vec<f64> = v.iter().map(|x| x / pivot).collect();
    for q in 1..=max_entry {
        let scaled: Vec<f64> = unit.iter().map(|x| x * q as f64).collect();
        let rounded: Vec<f64> = scaled.iter().map(|x| x.round()).collect();
        let err = scaled
            .iter()
            .zip(&rounded)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let limit = tol * q as f64 * unit.iter().map(|x| x.abs()).fold(1.0, f64::max);
        if err <= limit && rounded.iter().all(|x| x.abs() <= max_entry as f64) {
            let ints = rounded.iter().map(|&x| BigInt::from(x as i64)).collect();
            return Some(normalize_integer_vector(ints));
        }
    }
    None
}

/// Right singular vectors belonging to the `count` smallest singular values.
/// Also returns the largest of those singular values.
pub fn smallest_right_singular_vectors(
    a: &DMatrix<Complex64>,
    count: usize,
) -> (Vec<DVector<Complex64>>, f64) {
    let n = a.ncols();
    // pad to square so that V is complete
    let padded = if a.nrows() < n {
        let mut p = DMatrix::<Complex64>::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("V requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let chosen: Vec<usize> = order.into_iter().take(count).collect();
    let worst = chosen
        .iter()
        .map(|&i| svd.singular_values[i])
        .fold(0.0, f64::max);
    let vectors = chosen
        .iter()
        .map(|&i| v_t.row(i).transpose().map(|z| z.conj()))
        .collect();
    (vectors, worst)
}

/// Orthonormal basis of the span of `vectors` (real), dropping directions whose
/// singular value falls below `rel_tol` times the largest one. At most `max_rank`
/// directions are kept.
pub fn orthonormal_span(vectors: &[Vec<f64>], dim: usize, rel_tol: f64, max_rank: usize) -> Vec<Vec<f64>> {
    if vectors.is_empty() || max_rank == 0 {
        return Vec::new();
    }
    let a = DMatrix::from_fn(dim, vectors.len(), |r, c| vectors[c][r]);
    let svd = a.svd(true, false);
    let u = svd.u.expect("U requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    order
        .into_iter()
        .filter(|&i| svd.singular_values[i] > rel_tol * top && top > 0.0)
        .take(max_rank)
        .map(|i| u.column(i).iter().copied().collect())
        .collect()
}

/// Completes an orthonormal set to `target` vectors by Gram–Schmidt against the
/// standard basis, taking basis vectors in index order.
pub fn lowest_index_completion(basis: &[Vec<f64>], dim: usize, target: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = basis.to_vec();
    for i in 0..dim {
        if out.len() >= target {
            break;
        }
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        for _ in 0..2 {
            for q in &out {
                let proj: f64 = q.iter().zip(&e).map(|(a, b)| a * b).sum();
                for (x, qx) in e.iter_mut().zip(q) {
                    *x -= proj * qx;
                }
            }
        }
        let norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            out.push(e.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
