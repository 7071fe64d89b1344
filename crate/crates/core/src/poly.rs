//! Univariate polynomials with integer coefficients.
//!
//! Exact arithmetic (pseudo-remainder gcd, square-free decomposition,
//! cyclotomic polynomials, integer roots) plus a floating-point simultaneous
//! root finder whose results carry an a posteriori inclusion radius.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::IntMatrix;

/// Dense integer polynomial, coefficients from the constant term upwards.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// `x - r`
    pub fn linear_root(r: &BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let d = m.rows();
        let mut acc = IntMatrix::zeros(d, d);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * m).add_scalar_identity(c);
        }
        acc
    }

    /// Floating-point value at `z` together with a bound on the rounding error of the evaluation.
    pub fn eval_complex(&self, z: Complex64) -> (Complex64, f64) {
        let n = self.coeffs.len();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        let az = z.norm();
        for c in self.coeffs.iter().rev() {
            let cf = c.to_f64().unwrap_or(f64::INFINITY);
            acc = acc * z + cf;
            mag = mag * az + cf.abs();
        }
        // Horner error bound, γ_{2n} with a safety factor for complex arithmetic
        let err = 4.0 * (2 * n + 1) as f64 * f64::EPSILON * mag;
        (acc, err)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, exp: usize) -> Self {
        (0..exp).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Exact quotient in `ℤ[x]`, or `None` when `divisor` does not divide `self` there.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::default());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let lead = divisor.leading();
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    /// `lc(b)^(deg a - deg b + 1) · a  mod  b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-division by zero");
        if self.is_zero() || self.degree() < b.degree() {
            return self.clone();
        }
        let lead = b.leading();
        let db = b.degree();
        let mut rem = self.coeffs.clone();
        let mut deg = self.degree();
        let steps = deg - db + 1;
        for _ in 0..steps {
            let top = rem[deg].clone();
            for c in rem.iter_mut() {
                *c *= &lead;
            }
            if !top.is_zero() {
                for (i, c) in b.coeffs.iter().enumerate() {
                    rem[deg - db + i] -= &top * c;
                }
            }
            rem.truncate(deg);
            if deg == 0 {
                break;
            }
            deg -= 1;
        }
        Self::new(rem)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::default();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Primitive gcd with positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a
    }

    /// `x^deg · p(1/x)`.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Yun's algorithm over `ℤ`: returns pairs `(s_i, i)` with `self = c · ∏ s_i^i`,
    /// each `s_i` square-free, primitive and non-constant.
    pub fn square_free_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let a = self.primitive_part();
        let b = a.derivative();
        let c = a.gcd(&b);
        let mut w = a.div_exact(&c).expect("gcd divides the polynomial");
        let mut y = b.div_exact(&c).expect("gcd divides the derivative");
        let mut z = y.sub(&w.derivative());
        let mut i = 1;
        while !w.is_constant() {
            let g = w.gcd(&z);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            w = w.div_exact(&g).expect("gcd divides w");
            y = z.div_exact(&g).expect("gcd divides z");
            z = y.sub(&w.derivative());
            i += 1;
        }
        out
    }

    /// The product of the distinct irreducible factors.
    pub fn radical(&self) -> Self {
        self.square_free_decomposition()
            .into_iter()
            .fold(Self::one(), |acc, (s, _)| acc.mul(&s))
    }

    /// Multiplicity of `r` as a root (0 if not a root).
    pub fn root_multiplicity(&self, r: &BigInt) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear_root(r);
        let mut p = self.clone();
        let mut m = 0;
        while let Some(q) = p.div_exact(&lin) {
            if p.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }

    /// Distinct integer roots, sorted.
    ///
    /// Candidates are divisors of the lowest nonzero coefficient when that is
    /// small enough to factor by trial division, otherwise the roundings of the
    /// numerically located roots; every candidate is confirmed exactly.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_constant() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let shift = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if shift > 0 {
            roots.push(BigInt::zero());
        }
        let rest = Self::new(self.coeffs[shift..].to_vec());
        if rest.is_constant() {
            return roots;
        }
        let trailing = rest.coeffs[0].abs();
        let candidates: Vec<BigInt> = match trailing.to_u64() {
            Some(t) if t <= 1_000_000_000_000 => divisors(t)
                .into_iter()
                .flat_map(|x| [BigInt::from(x), -BigInt::from(x)])
                .collect(),
            _ => {
                let mut c: Vec<BigInt> = rest
                    .approx_roots()
                    .iter()
                    .filter(|z| z.im.abs() < 0.5)
                    .filter_map(|z| num_traits::FromPrimitive::from_f64(z.re.round()))
                    .collect();
                c.extend([BigInt::one(), -BigInt::one()]);
                c
            }
        };
        for r in candidates {
            if !r.is_zero() && !roots.contains(&r) && rest.eval(&r).is_zero() {
                roots.push(r);
            }
        }
        roots.sort();
        roots
    }

    /// Approximations of all complex roots (Aberth–Ehrlich iteration in `f64`).
    pub fn approx_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if self.is_constant() {
            return Vec::new();
        }
        let lead = self.leading().to_f64().unwrap_or(f64::INFINITY);
        let a: Vec<f64> = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY) / lead)
            .collect();
        if n == 1 {
            return vec![Complex64::new(-a[0], 0.0)];
        }
        // Fujiwara-type bound for the initial circle
        let radius = (1..=n)
            .map(|k| a[n - k].abs().powf(1.0 / k as f64))
            .fold(0.0f64, f64::max)
            .max(1e-3);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
                Complex64::from_polar(radius, theta)
            })
            .collect();
        let eval = |x: Complex64| -> (Complex64, Complex64) {
            let mut p = Complex64::new(1.0, 0.0);
            let mut dp = Complex64::new(0.0, 0.0);
            for c in a[..n].iter().rev() {
                dp = dp * x + p;
                p = p * x + c;
            }
            (p, dp)
        };
        for _ in 0..2000 {
            let mut max_step: f64 = 0.0;
            for i in 0..n {
                let (p, dp) = eval(z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let sum: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
                if step.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
                }
            }
            if max_step < 1e-15 {
                break;
            }
        }
        z
    }

    /// Inclusion radii for approximations `z` of the roots of a square-free polynomial.
    ///
    /// Uses the Weierstrass correction `W_i = p(z_i) / (lc · ∏_{j≠i}(z_i − z_j))`:
    /// every root lies in `⋃ D(z_i, n|W_i|)` and a connected component of `m`
    /// disks holds exactly `m` roots. Disks that overlap are widened to cover
    /// their whole component.
    pub fn inclusion_radii(&self, z: &[Complex64]) -> Vec<f64> {
        let n = z.len();
        assert_eq!(n, self.degree(), "one approximation per root");
        let lead = self.leading().to_f64().unwrap_or(f64::INFINITY).abs();
        let mut r: Vec<f64> = (0..n)
            .map(|i| {
                let (p, err) = self.eval_complex(z[i]);
                let denom: f64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).norm())
                    .product::<f64>()
                    * lead;
                if denom == 0.0 {
                    return f64::INFINITY;
                }
                let w = (p.norm() + err) / denom;
                n as f64 * w * (1.0 + 1e-10) + f64::EPSILON * z[i].norm()
            })
            .collect();
        // merge overlapping disks into components
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], i: usize) -> usize {
            let mut root = i;
            while c[root] != root {
                root = c[root];
            }
            c[i] = root;
            root
        }
        for i in 0..n {
            for j in i + 1..n {
                if (z[i] - z[j]).norm() <= r[i] + r[j] {
                    let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                    comp[a] = b;
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut comp, i)).collect();
        let widened: Vec<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| roots[j] == roots[i])
                    .map(|j| (z[i] - z[j]).norm() + r[j])
                    .fold(r[i], f64::max)
            })
            .collect();
        r.copy_from_slice(&widened);
        r
    }
}

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn totient(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `n`-th cyclotomic polynomial, `n ≥ 1`.
pub fn cyclotomic(n: usize) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = -BigInt::one();
    coeffs[n] = BigInt::one();
    let mut p = IntPoly::new(coeffs);
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p
                .div_exact(&cyclotomic(d))
                .expect("cyclotomic polynomials divide x^n - 1");
        }
    }
    p
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
