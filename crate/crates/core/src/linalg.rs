//! Minimal dense linear algebra: just what the Gram/orthonormalization
//! pipeline and the companion-matrix eigensolver need.
//!
//! Two eigenvalue paths are provided, both Hessenberg-QR with windowed
//! updates (eigenvalues only, no Schur vectors):
//!
//! * a real double-shift Francis iteration for real matrices, which keeps
//!   complex eigenvalues in exactly conjugate pairs and runs about four
//!   times faster than complex arithmetic, and
//! * a complex single-shift (Wilkinson) iteration for genuinely complex
//!   matrices.
//!
//! Both are preceded by Parlett-Reinsch balancing (radix-2 diagonal
//! similarity, exact in floating point), which matters here because
//! companion matrices of high-degree random polynomials carry entries
//! spanning many orders of magnitude.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMat<T> {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Hermitian transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a * other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    /// Matrix product with error-free transformations (FMA two-product
    /// plus compensated summation). The dot products behind `R^* S R`
    /// cancel large intermediates down to order one, so the plain product
    /// has a noise floor far above the true residual; this variant
    /// evaluates each entry to a relative accuracy of a few ulps.
    pub fn mul_accurate(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut re = Compensated::default();
                let mut im = Compensated::default();
                for k in 0..n {
                    let a = self[(i, k)];
                    let b = other[(k, j)];
                    re.add_product(a.re, b.re);
                    re.add_product(-a.im, b.im);
                    im.add_product(a.re, b.im);
                    im.add_product(a.im, b.re);
                }
                out[(i, j)] = Complex::new(re.value(), im.value());
            }
        }
        out
    }

    /// Largest entry magnitude of `self - I`.
    pub fn max_deviation_from_identity(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let mut d = self[(i, j)];
                if i == j {
                    d.re = d.re - T::one();
                }
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Matrix 1-norm (max absolute column sum).
    pub fn norm_one(&self) -> T {
        let mut best = T::zero();
        for j in 0..self.n {
            let mut s = T::zero();
            for i in 0..self.n {
                s += self[(i, j)].norm();
            }
            best = best.max(s);
        }
        best
    }
}

/// Compensated accumulator: exact product errors via fused multiply-add,
/// exact sum errors via Knuth's branch-free two-sum, both folded into a
/// first-order correction term.
#[derive(Clone, Copy)]
struct Compensated<T> {
    sum: T,
    correction: T,
}

impl<T: Scalar> Default for Compensated<T> {
    fn default() -> Self {
        Compensated {
            sum: T::zero(),
            correction: T::zero(),
        }
    }
}

impl<T: Scalar> Compensated<T> {
    #[inline]
    fn add_product(&mut self, a: T, b: T) {
        let p = a * b;
        let product_err = a.mul_add(b, -p);
        let t = self.sum + p;
        let shifted = t - self.sum;
        let sum_err = (self.sum - (t - shifted)) + (p - shifted);
        self.sum = t;
        self.correction += sum_err + product_err;
    }

    #[inline]
    fn value(self) -> T {
        self.sum + self.correction
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Result of the scaled Cholesky change of basis.
#[derive(Debug, Clone)]
pub struct CholeskyBasis<T> {
    /// Upper-triangular `R` with strictly positive diagonal such that
    /// `R^* S R = I`.
    pub r: CMat<T>,
    /// 1-norm condition estimate of the diagonally rescaled Gram matrix
    /// (the quantity that actually controls the accuracy of `R`).
    pub scaled_condition: T,
}

/// Factors a Hermitian positive definite matrix `S` and returns the
/// upper-triangular `R` with `R^* S R = I` and positive diagonal.
///
/// The factorization runs on the correlation-scaled matrix
/// `D^{-1} S D^{-1}`, `D = diag(sqrt(S_ii))`; that keeps the computed `R`
/// accurate even when the raw diagonal of `S` spans dozens of orders of
/// magnitude, as it does for monomial Gram matrices.
pub fn cholesky_basis<T: Scalar>(s: &CMat<T>) -> Result<CholeskyBasis<T>> {
    let n = s.dim();
    let mut d = vec![T::zero(); n];
    for i in 0..n {
        let v = s[(i, i)].re;
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::Decomposition {
                pivot: i,
                value: v.to_f64(),
            });
        }
        d[i] = v.sqrt();
    }
    // Correlation-scaled, explicitly Hermitized copy.
    let mut a = CMat::<T>::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let avg = (s[(i, j)] + s[(j, i)].conj()) * Complex::new(T::from_f64(0.5), T::zero());
            a[(i, j)] = avg / Complex::new(d[i] * d[j], T::zero());
        }
    }
    // In-place lower Cholesky of the scaled matrix.
    let mut l = CMat::<T>::zeros(n);
    for j in 0..n {
        let mut diag = a[(j, j)].re;
        for k in 0..j {
            diag = diag - l[(j, k)].norm_sqr();
        }
        if !(diag > T::zero()) || !diag.is_finite() {
            return Err(Error::Decomposition {
                pivot: j,
                value: diag.to_f64(),
            });
        }
        let ljj = diag.sqrt();
        l[(j, j)] = Complex::new(ljj, T::zero());
        for i in (j + 1)..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v = v - l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / Complex::new(ljj, T::zero());
        }
    }
    // W = (L^*)^{-1}, upper triangular with positive diagonal.
    let mut w = CMat::<T>::zeros(n);
    for j in (0..n).rev() {
        // Solve L^* w_col = e_j by back substitution; L^*_{ik} = conj(L_{ki}).
        w[(j, j)] = Complex::new(T::one() / l[(j, j)].re, T::zero());
        for i in (0..j).rev() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in (i + 1)..=j {
                acc += l[(k, i)].conj() * w[(k, j)];
            }
            w[(i, j)] = -acc / Complex::new(l[(i, i)].re, T::zero());
        }
    }
    // Condition estimate of the scaled Gram: ||A||_1 * ||A^{-1}||_1 with
    // A^{-1} = W W^*.
    let inv = w.mul(&w.adjoint());
    let scaled_condition = a.norm_one() * inv.norm_one();
    // R = D^{-1} W.
    let mut r = w;
    for i in 0..n {
        for j in i..n {
            let v = r[(i, j)] / Complex::new(d[i], T::zero());
            r[(i, j)] = v;
        }
    }
    Ok(CholeskyBasis {
        r,
        scaled_condition,
    })
}

#[inline]
fn abs1<T: Scalar>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

/// Parlett-Reinsch balancing (scaling pass only) for a complex matrix.
/// Radix-2 scale factors make the similarity exact in floating point.
pub fn balance_complex<T: Scalar>(h: &mut CMat<T>) {
    let n = h.dim();
    let radix = T::from_f64(2.0);
    let b2 = radix * radix;
    let gamma = T::from_f64(0.95);
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c += abs1(h[(j, i)]);
                    r += abs1(h[(i, j)]);
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut c_acc = c;
            let mut g = r / radix;
            while c_acc < g {
                f *= radix;
                c_acc *= b2;
            }
            g = r * radix;
            while c_acc >= g {
                f /= radix;
                c_acc /= b2;
            }
            if (c_acc + r) / f < gamma * s {
                converged = false;
                let ginv = T::one() / f;
                for j in 0..n {
                    let v = h[(i, j)] * Complex::new(ginv, T::zero());
                    h[(i, j)] = v;
                }
                for j in 0..n {
                    let v = h[(j, i)] * Complex::new(f, T::zero());
                    h[(j, i)] = v;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Parlett-Reinsch balancing (scaling pass only) for a real matrix stored
/// row-major in `h` with dimension `n`.
pub fn balance_real<T: Scalar>(h: &mut [T], n: usize) {
    let radix = T::from_f64(2.0);
    let b2 = radix * radix;
    let gamma = T::from_f64(0.95);
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c += h[j * n + i].abs();
                    r += h[i * n + j].abs();
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut c_acc = c;
            let mut g = r / radix;
            while c_acc < g {
                f *= radix;
                c_acc *= b2;
            }
            g = r * radix;
            while c_acc >= g {
                f /= radix;
                c_acc /= b2;
            }
            if (c_acc + r) / f < gamma * s {
                converged = false;
                let ginv = T::one() / f;
                for j in 0..n {
                    h[i * n + j] *= ginv;
                }
                for j in 0..n {
                    h[j * n + i] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

const MAX_QR_ITERS_PER_EIGENVALUE: usize = 40;

/// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR
/// with Wilkinson shifts. The matrix is consumed as workspace.
pub fn complex_hessenberg_eigenvalues<T: Scalar>(h: &mut CMat<T>) -> Result<Vec<Complex<T>>> {
    let n = h.dim();
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigs);
    }
    let mut anorm = T::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += abs1(h[(i, j)]);
        }
    }
    if anorm == T::zero() {
        anorm = T::one();
    }
    let eps = T::epsilon();
    let mut hi = n - 1;
    let mut its = 0usize;
    loop {
        // Deflation scan: find the start of the trailing irreducible block.
        let mut lo = 0usize;
        for m in (1..=hi).rev() {
            let mut s = abs1(h[(m - 1, m - 1)]) + abs1(h[(m, m)]);
            if s == T::zero() {
                s = anorm;
            }
            if abs1(h[(m, m - 1)]) <= eps * s {
                h[(m, m - 1)] = Complex::new(T::zero(), T::zero());
                lo = m;
                break;
            }
        }
        if lo == hi {
            eigs.push(h[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            its = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(l2);
            eigs.push(l1);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            its = 0;
            continue;
        }
        if its >= MAX_QR_ITERS_PER_EIGENVALUE {
            return Err(Error::Numeric(format!(
                "complex QR iteration failed to converge for the block ending at {hi}"
            )));
        }
        // Shift selection: Wilkinson, with an occasional exceptional shift.
        let shift = if its > 0 && its % 10 == 0 {
            let mag = abs1(h[(hi, hi - 1)]) + abs1(h[(hi - 1, hi - 2)]);
            h[(hi, hi)] + Complex::new(T::from_f64(0.75) * mag, T::zero())
        } else {
            let (l1, l2) = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            let d = h[(hi, hi)];
            if abs1(l1 - d) <= abs1(l2 - d) {
                l1
            } else {
                l2
            }
        };
        its += 1;
        // Explicit shifted QR sweep on the active window.
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        let mut rot = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            // Apply from the left to rows k, k+1 over columns k..=hi.
            for j in k..=hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + b * s;
                h[(k + 1, j)] = -a * s.conj() + b * c;
            }
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = lo + idx;
            // Apply the adjoint rotation from the right to columns k, k+1
            // over rows lo..=min(k+1, hi).
            let top = (k + 1).min(hi);
            for i in lo..=top {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(eigs)
}

/// Complex Givens rotation zeroing `y` against `x`: returns `(c, s)` with
/// `c` real, `c^2 + |s|^2 = 1`, and `-conj(s) x + c y = 0`.
fn givens<T: Scalar>(x: Complex<T>, y: Complex<T>) -> (Complex<T>, Complex<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (
            Complex::new(T::one(), T::zero()),
            Complex::new(T::zero(), T::zero()),
        );
    }
    if ax == T::zero() {
        return (Complex::new(T::zero(), T::zero()), (y / ay).conj());
    }
    // Scale by the larger magnitude to dodge overflow in the hypotenuse.
    let scale = ax.max(ay);
    let rx = ax / scale;
    let ry = ay / scale;
    let r = scale * (rx * rx + ry * ry).sqrt();
    let c = Complex::new(ax / r, T::zero());
    let s = (x / ax) * y.conj() * Complex::new(T::one() / r, T::zero());
    (c, s)
}

/// Eigenvalues of a complex 2x2 matrix `[[a, b], [c, d]]`, computed with
/// the product trick to avoid cancellation in the smaller root.
fn eig2<T: Scalar>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let half = Complex::new(T::from_f64(0.5), T::zero());
    let mu = (a + d) * half;
    let p = (a - d) * half;
    let q = (p * p + b * c).sqrt();
    let big = if abs1(mu + q) >= abs1(mu - q) {
        mu + q
    } else {
        mu - q
    };
    if big.re == T::zero() && big.im == T::zero() {
        return (mu, mu);
    }
    let det = a * d - b * c;
    (big, det / big)
}

/// Eigenvalues of a real upper Hessenberg matrix (row-major `h`, dimension
/// `n`) by the Francis double-shift QR iteration, eigenvalues only.
///
/// Complex eigenvalues come out in exactly conjugate pairs because each
/// 2x2 deflation computes `m +- i sqrt(-disc)` from the same real numbers.
pub fn real_hessenberg_eigenvalues<T: Scalar>(h: &mut [T], n: usize) -> Result<Vec<Complex<T>>> {
    assert_eq!(h.len(), n * n);
    let mut eigs: Vec<Complex<T>> = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigs);
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut anorm = T::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[idx(i, j)].abs();
        }
    }
    if anorm == T::zero() {
        anorm = T::one();
    }
    let eps = T::epsilon();
    let mut en = n - 1;
    let mut t_shift = T::zero();
    let mut its = 0usize;
    'outer: loop {
        // Find the smallest l such that h[l, l-1] is negligible.
        let mut l = 0usize;
        for m in (1..=en).rev() {
            let mut s = h[idx(m - 1, m - 1)].abs() + h[idx(m, m)].abs();
            if s == T::zero() {
                s = anorm;
            }
            if h[idx(m, m - 1)].abs() <= eps * s {
                h[idx(m, m - 1)] = T::zero();
                l = m;
                break;
            }
        }
        let x = h[idx(en, en)];
        if l == en {
            eigs.push(Complex::new(x + t_shift, T::zero()));
            if en == 0 {
                break;
            }
            en -= 1;
            its = 0;
            continue;
        }
        let na = en - 1;
        let y = h[idx(na, na)];
        let w = h[idx(en, na)] * h[idx(na, en)];
        if l == na {
            // 2x2 block: eigenvalues of [[y, *], [*, x]].
            let p = (y - x) * T::from_f64(0.5);
            let q = p * p + w;
            let zz = q.abs().sqrt();
            let x_sh = x + t_shift;
            if q >= T::zero() {
                let zz = p + zz.copysign(if p == T::zero() { T::one() } else { p });
                let l1 = x_sh + zz;
                let l2 = if zz == T::zero() { l1 } else { x_sh - w / zz };
                eigs.push(Complex::new(l1, T::zero()));
                eigs.push(Complex::new(l2, T::zero()));
            } else {
                eigs.push(Complex::new(x_sh + p, zz));
                eigs.push(Complex::new(x_sh + p, -zz));
            }
            if na == 0 {
                break;
            }
            en = na - 1;
            its = 0;
            continue;
        }
        if its >= MAX_QR_ITERS_PER_EIGENVALUE {
            return Err(Error::Numeric(format!(
                "real QR iteration failed to converge for the block ending at {en}"
            )));
        }
        let (mut x, mut y, mut w) = (x, y, w);
        if its == 10 || its == 20 {
            // Exceptional shift, as in the classic eigensystem routines.
            // The subtraction must cover the whole leading range, not
            // just the active window: t_shift is restored globally at
            // every later deflation, including blocks above the window.
            t_shift += x;
            for i in 0..=en {
                h[idx(i, i)] -= x;
            }
            let s = h[idx(en, na)].abs() + h[idx(na, en - 2)].abs();
            x = T::from_f64(0.75) * s;
            y = x;
            w = T::from_f64(-0.4375) * s * s;
        }
        its += 1;
        // Look for two consecutive small subdiagonals to start the bulge.
        let enm2 = en - 2;
        let mut m = enm2;
        let (mut p, mut q, mut r);
        loop {
            let zz = h[idx(m, m)];
            let rr = x - zz;
            let ss = y - zz;
            p = (rr * ss - w) / h[idx(m + 1, m)] + h[idx(m, m + 1)];
            q = h[idx(m + 1, m + 1)] - zz - rr - ss;
            r = h[idx(m + 2, m + 1)];
            let scale = p.abs() + q.abs() + r.abs();
            p /= scale;
            q /= scale;
            r /= scale;
            if m == l {
                break;
            }
            let tst1 = p.abs()
                * (h[idx(m - 1, m - 1)].abs() + zz.abs() + h[idx(m + 1, m + 1)].abs());
            let tst2 = h[idx(m, m - 1)].abs() * (q.abs() + r.abs());
            if tst2 <= eps * tst1 {
                break;
            }
            m -= 1;
        }
        for i in (m + 2)..=en {
            h[idx(i, i - 2)] = T::zero();
            if i > m + 2 {
                h[idx(i, i - 3)] = T::zero();
            }
        }
        // Double QR sweep on rows l..=en, columns m..=en.
        for k in m..=na {
            let notlast = k != na;
            if k != m {
                p = h[idx(k, k - 1)];
                q = h[idx(k + 1, k - 1)];
                r = if notlast { h[idx(k + 2, k - 1)] } else { T::zero() };
                x = p.abs() + q.abs() + r.abs();
                if x == T::zero() {
                    continue;
                }
                p /= x;
                q /= x;
                r /= x;
            }
            let s = (p * p + q * q + r * r)
                .sqrt()
                .copysign(if p == T::zero() { T::one() } else { p });
            if k != m {
                h[idx(k, k - 1)] = -s * x;
            } else if l != m {
                h[idx(k, k - 1)] = -h[idx(k, k - 1)];
            }
            p += s;
            x = p / s;
            y = q / s;
            let zz = r / s;
            q /= p;
            r /= p;
            if notlast {
                for j in k..=en {
                    let pj = h[idx(k, j)] + q * h[idx(k + 1, j)] + r * h[idx(k + 2, j)];
                    h[idx(k, j)] -= pj * x;
                    h[idx(k + 1, j)] -= pj * y;
                    h[idx(k + 2, j)] -= pj * zz;
                }
                let hi_row = en.min(k + 3);
                for i in l..=hi_row {
                    let pi = x * h[idx(i, k)] + y * h[idx(i, k + 1)] + zz * h[idx(i, k + 2)];
                    h[idx(i, k)] -= pi;
                    h[idx(i, k + 1)] -= pi * q;
                    h[idx(i, k + 2)] -= pi * r;
                }
            } else {
                for j in k..=en {
                    let pj = h[idx(k, j)] + q * h[idx(k + 1, j)];
                    h[idx(k, j)] -= pj * x;
                    h[idx(k + 1, j)] -= pj * y;
                }
                let hi_row = en.min(k + 3);
                for i in l..=hi_row {
                    let pi = x * h[idx(i, k)] + y * h[idx(i, k + 1)];
                    h[idx(i, k)] -= pi;
                    h[idx(i, k + 1)] -= pi * q;
                }
            }
        }
        continue 'outer;
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c64(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn cholesky_identity_and_diagonal() {
        let id = CMat::<f64>::identity(3);
        let basis = cholesky_basis(&id).unwrap();
        assert!(basis.r.max_deviation_from_identity() < 1e-15);
        assert_abs_diff_eq!(basis.scaled_condition, 1.0, epsilon = 1e-12);

        let mut s = CMat::<f64>::zeros(2);
        s[(0, 0)] = c64(4.0, 0.0);
        s[(1, 1)] = c64(9.0, 0.0);
        let basis = cholesky_basis(&s).unwrap();
        assert_abs_diff_eq!(basis.r[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.r[(1, 1)].re, 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(basis.r[(0, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn cholesky_whitens_random_hermitian_pd() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2usize, 5, 12] {
            // Build S = B^* B + I, guaranteed Hermitian positive definite.
            let mut b = CMat::<f64>::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    b[(i, j)] = c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            let mut s = b.adjoint().mul(&b);
            for i in 0..n {
                s[(i, i)] += c64(1.0, 0.0);
            }
            let basis = cholesky_basis(&s).unwrap();
            let residual = basis.r.adjoint().mul(&s).mul(&basis.r);
            assert!(
                residual.max_deviation_from_identity() < 1e-13,
                "residual {:e}",
                residual.max_deviation_from_identity()
            );
            for i in 0..n {
                assert!(basis.r[(i, i)].re > 0.0);
                assert_eq!(basis.r[(i, i)].im, 0.0);
            }
        }
    }

    #[test]
    fn compensated_product_recovers_cancelled_low_bits() {
        // (2^27+1)(2^27-1) = 2^54 - 1 needs 54 mantissa bits, so the
        // plain product rounds it to 2^54 and the subsequent -2^54 term
        // cancels to 0. The compensated product keeps the lost unit.
        let big = (1u64 << 27) as f64;
        let mut a = CMat::<f64>::zeros(2);
        let mut b = CMat::<f64>::zeros(2);
        a[(0, 0)] = c64(big + 1.0, 0.0);
        a[(0, 1)] = c64(1.0, 0.0);
        b[(0, 0)] = c64(big - 1.0, 0.0);
        b[(1, 0)] = c64(-(big * big), 0.0);
        assert_eq!(a.mul(&b)[(0, 0)].re, 0.0);
        assert_eq!(a.mul_accurate(&b)[(0, 0)].re, -1.0);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut s = CMat::<f64>::zeros(2);
        s[(0, 0)] = c64(1.0, 0.0);
        s[(0, 1)] = c64(2.0, 0.0);
        s[(1, 0)] = c64(2.0, 0.0);
        s[(1, 1)] = c64(1.0, 0.0);
        match cholesky_basis(&s) {
            Err(Error::Decomposition { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected decomposition failure, got {other:?}"),
        }
    }

    fn sort_by_re_im(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
        v.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        v
    }

    /// Asserts two eigenvalue multisets agree up to `tol`, pairing each
    /// element greedily with its nearest unused partner.
    fn assert_multiset_close(a: &[Complex<f64>], b: &[Complex<f64>], tol: f64) {
        assert_eq!(a.len(), b.len());
        let mut used = vec![false; b.len()];
        for &x in a {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for (j, &y) in b.iter().enumerate() {
                if !used[j] {
                    let d = (x - y).norm();
                    if d < best_d {
                        best_d = d;
                        best = j;
                    }
                }
            }
            assert!(
                best_d <= tol,
                "no partner within {tol:e} for {x} (closest {best_d:e})"
            );
            used[best] = true;
        }
    }

    #[test]
    fn complex_qr_diagonal_and_known_2x2() {
        let mut h = CMat::<f64>::zeros(3);
        h[(0, 0)] = c64(1.0, 1.0);
        h[(1, 1)] = c64(-2.0, 0.5);
        h[(2, 2)] = c64(4.0, -3.0);
        let eigs = sort_by_re_im(complex_hessenberg_eigenvalues(&mut h).unwrap());
        assert_abs_diff_eq!(eigs[0].re, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[2].im, -3.0, epsilon = 1e-12);

        // [[0, -1], [1, 0]] has eigenvalues +-i.
        let mut h = CMat::<f64>::zeros(2);
        h[(0, 1)] = c64(-1.0, 0.0);
        h[(1, 0)] = c64(1.0, 0.0);
        let eigs = sort_by_re_im(complex_hessenberg_eigenvalues(&mut h).unwrap());
        assert_abs_diff_eq!(eigs[0].im, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[1].im, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[0].re, 0.0, epsilon = 1e-14);
    }

    /// Companion matrix of the monic polynomial with the given trailing
    /// coefficients (constant first).
    fn companion(coeffs: &[Complex<f64>]) -> CMat<f64> {
        let d = coeffs.len();
        let mut m = CMat::<f64>::zeros(d);
        for i in 0..d {
            m[(i, d - 1)] = -coeffs[i];
            if i + 1 < d {
                m[(i + 1, i)] = c64(1.0, 0.0);
            }
        }
        m
    }

    #[test]
    fn complex_qr_recovers_roots_of_unity() {
        // z^8 = 1: companion of z^8 - 1.
        let mut coeffs = vec![c64(0.0, 0.0); 8];
        coeffs[0] = c64(-1.0, 0.0);
        let mut h = companion(&coeffs);
        let eigs = complex_hessenberg_eigenvalues(&mut h).unwrap();
        assert_eq!(eigs.len(), 8);
        for e in &eigs {
            assert_abs_diff_eq!(e.norm(), 1.0, epsilon = 1e-10);
            let p8 = e.powu(8);
            assert_abs_diff_eq!(p8.re, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(p8.im, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn complex_qr_handles_prescribed_spectrum() {
        // Build a polynomial from known roots, solve, compare multisets.
        let roots = [
            c64(0.3, -0.7),
            c64(-1.2, 0.4),
            c64(2.0, 0.0),
            c64(0.0, 1.5),
            c64(-0.5, -0.5),
        ];
        let mut poly = vec![c64(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c64(0.0, 0.0); poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            poly = next;
        }
        // poly is monic, constant term first.
        let coeffs: Vec<_> = poly[..roots.len()].to_vec();
        let mut h = companion(&coeffs);
        balance_complex(&mut h);
        let eigs = sort_by_re_im(complex_hessenberg_eigenvalues(&mut h).unwrap());
        let want = sort_by_re_im(roots.to_vec());
        for (e, w) in eigs.iter().zip(&want) {
            assert_abs_diff_eq!(e.re, w.re, epsilon = 1e-10);
            assert_abs_diff_eq!(e.im, w.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn real_qr_known_spectra() {
        // Diagonal matrix.
        let n = 4;
        let mut h = vec![0.0f64; n * n];
        for (i, v) in [3.0, -1.0, 0.5, 7.0].iter().enumerate() {
            h[i * n + i] = *v;
        }
        let eigs = sort_by_re_im(real_hessenberg_eigenvalues(&mut h, n).unwrap());
        assert_abs_diff_eq!(eigs[0].re, -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(eigs[3].re, 7.0, epsilon = 1e-13);

        // Rotation block: eigenvalues +-i, exactly conjugate.
        let mut h = vec![0.0f64, -1.0, 1.0, 0.0];
        let eigs = real_hessenberg_eigenvalues(&mut h, 2).unwrap();
        assert_eq!(eigs[0].re, eigs[1].re);
        assert_eq!(eigs[0].im, -eigs[1].im);
        assert_abs_diff_eq!(eigs[0].im.abs(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn real_qr_companion_roots_match_complex_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for degree in [3usize, 8, 21, 34] {
            let coeffs: Vec<f64> = (0..degree).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            // Real companion, Hessenberg by construction.
            let n = degree;
            let mut hr = vec![0.0f64; n * n];
            for i in 0..n {
                hr[i * n + (n - 1)] = -coeffs[i];
                if i + 1 < n {
                    hr[(i + 1) * n + i] = 1.0;
                }
            }
            balance_real(&mut hr, n);
            let real_eigs = real_hessenberg_eigenvalues(&mut hr, n).unwrap();

            let cc: Vec<_> = coeffs.iter().map(|&c| c64(c, 0.0)).collect();
            let mut hc = companion(&cc);
            balance_complex(&mut hc);
            let complex_eigs = complex_hessenberg_eigenvalues(&mut hc).unwrap();

            assert_multiset_close(&real_eigs, &complex_eigs, 1e-8);
        }
    }

    #[test]
    fn balancing_preserves_eigenvalues() {
        // A deliberately ill-scaled matrix.
        let mut h = CMat::<f64>::zeros(3);
        h[(0, 0)] = c64(1.0, 0.0);
        h[(0, 1)] = c64(1e8, 0.0);
        h[(1, 0)] = c64(1e-8, 0.0);
        h[(1, 1)] = c64(2.0, 0.0);
        h[(1, 2)] = c64(1e6, 0.0);
        h[(2, 1)] = c64(1e-6, 0.0);
        h[(2, 2)] = c64(3.0, 0.0);
        let mut unbalanced = h.clone();
        balance_complex(&mut h);
        let a = sort_by_re_im(complex_hessenberg_eigenvalues(&mut h).unwrap());
        let b = sort_by_re_im(complex_hessenberg_eigenvalues(&mut unbalanced).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x.re, y.re, epsilon = 1e-6);
            assert_abs_diff_eq!(x.im, y.im, epsilon = 1e-6);
        }
    }
}
