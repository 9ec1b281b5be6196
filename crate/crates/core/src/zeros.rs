//! Random polynomials, their complex zeros, and empirical zero measures.
//!
//! A [`Polynomial`] is assembled from an orthonormal basis and a
//! coefficient ensemble, stored in the monomial basis together with a
//! common log-scale (zeros are scale invariant, and closed-form bases at
//! large degree have coefficients far outside the representable range).
//! Zeros come from a balanced companion-matrix eigensolve, with a real
//! Francis double-shift path when every coefficient is exactly real: that
//! path is about four times faster and returns complex zeros in exactly
//! conjugate pairs, which the real-zero counter relies on.

use num_complex::Complex;
use rayon::prelude::*;

use crate::basis::OrthonormalBasis;
use crate::ensembles::CoefficientEnsemble;
use crate::error::{Error, Result};
use crate::linalg::{balance_complex, balance_real, complex_hessenberg_eigenvalues,
                    real_hessenberg_eigenvalues, CMat};
use crate::rng::{stream_rng, substream};
use crate::scalar::Scalar;

/// Default relative tolerance for classifying a zero as real.
pub const REAL_ZERO_TOLERANCE: f64 = 1e-9;

/// A polynomial in the monomial basis. The represented function is
/// `e^{log_scale} · Σ_j coeffs[j] z^j`; the scale factor keeps
/// coefficients of closed-form bases at extreme degrees representable
/// and never affects zeros or relative residuals.
#[derive(Debug, Clone)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
    log_scale: T,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        Self::with_log_scale(coeffs, T::zero())
    }

    pub fn with_log_scale(coeffs: Vec<Complex<T>>, log_scale: T) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parameter("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) || !log_scale.is_finite()
        {
            return Err(Error::Parameter("polynomial coefficients must be finite".into()));
        }
        Ok(Polynomial { coeffs, log_scale })
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn log_scale(&self) -> T {
        self.log_scale
    }

    /// Degree suggested by the coefficient count (the `p` of the model).
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after trimming leading coefficients whose ratio to the
    /// largest coefficient is too extreme for the monic companion
    /// normalization to represent: their zeros sit beyond any
    /// representable distance. Closed-form bases at large degree span
    /// hundreds of orders of magnitude in exact coefficients, so
    /// anything representable is kept.
    pub fn effective_degree(&self) -> usize {
        let threshold = self.trim_threshold();
        let mut d = self.coeffs.len() - 1;
        while d > 0 && self.coeffs[d].norm() <= threshold {
            d -= 1;
        }
        d
    }

    /// Largest coefficient divided by the overflow threshold of the
    /// scalar type, with headroom for the balancing arithmetic.
    fn trim_threshold(&self) -> T {
        let max_abs = self
            .coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.norm()));
        max_abs * T::from_f64(1e4) / T::max_value()
    }

    /// `true` when every coefficient has exactly zero imaginary part, in
    /// which case the zero set is exactly closed under conjugation.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == T::zero())
    }

    /// Horner evaluation of the unscaled part `Σ coeffs[j] z^j`.
    pub fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// All complex zeros (with multiplicity) of the effective-degree
    /// polynomial, via a balanced companion-matrix eigensolve.
    pub fn roots(&self) -> Result<ZeroSet<T>> {
        let max_abs = self
            .coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.norm()));
        if max_abs == T::zero() {
            return Err(Error::NoRoots);
        }
        let degree = self.effective_degree();
        if degree == 0 {
            return Err(Error::NoRoots);
        }
        // Exact zeros at the origin: strip low-order coefficients that
        // are exactly zero (closed-form constructions, not roundoff).
        let zero_c = Complex::new(T::zero(), T::zero());
        let mut low = 0usize;
        while low < degree && self.coeffs[low] == zero_c {
            low += 1;
        }
        let work = &self.coeffs[low..=degree];
        let mut zeros = vec![zero_c; low];
        zeros.extend(solve_monic(work)?);

        let max_backward_error = zeros
            .iter()
            .map(|&r| relative_residual(work, r))
            .fold(T::zero(), |acc, v| acc.max(v));
        let real_zero_count =
            count_real_zeros(&zeros, T::from_f64(REAL_ZERO_TOLERANCE));
        Ok(ZeroSet {
            zeros,
            degree: self.nominal_degree(),
            real_zero_count,
            max_backward_error,
        })
    }
}

/// Zeros of one polynomial sample.
#[derive(Debug, Clone)]
pub struct ZeroSet<T> {
    /// All zeros of the trimmed polynomial, with multiplicity.
    pub zeros: Vec<Complex<T>>,
    /// Nominal degree `p` of the model, used for `1/p` normalization.
    pub degree: usize,
    /// Zeros within the default relative tolerance of the real axis.
    pub real_zero_count: usize,
    /// Largest relative residual `|f(r)| / Σ |c_j| |r|^j` over the
    /// returned zeros, measured against the trimmed polynomial.
    pub max_backward_error: T,
}

/// Number of zeros with `|Im z| ≤ epsilon · (1 + |z|)`.
pub fn count_real_zeros<T: Scalar>(zeros: &[Complex<T>], epsilon: T) -> usize {
    zeros
        .iter()
        .filter(|z| z.im.abs() <= epsilon * (T::one() + z.norm()))
        .count()
}

/// Draws coefficients from the ensemble and expresses the resulting
/// random combination of basis elements in the monomial basis.
pub fn random_polynomial<T: Scalar, R: rand::Rng>(
    basis: &OrthonormalBasis<T>,
    ensemble: &CoefficientEnsemble<T>,
    rng: &mut R,
) -> Result<Polynomial<T>> {
    let a = ensemble.sample(basis.dimension(), rng)?;
    let (coeffs, log_scale) = basis.coefficients_to_monomial(&a)?;
    Polynomial::with_log_scale(coeffs, log_scale)
}

/// Relative backward error of `root` for the polynomial with the given
/// monomial coefficients: `|f(r)| / Σ_j |c_j| |r|^j`. Evaluated through
/// `1/r` when `|r| > 1` so the ratio never overflows.
pub fn relative_residual<T: Scalar>(coeffs: &[Complex<T>], root: Complex<T>) -> T {
    let r = root.norm();
    let zero = Complex::new(T::zero(), T::zero());
    if r <= T::one() {
        let mut value = zero;
        let mut weight = T::zero();
        for c in coeffs.iter().rev() {
            value = value * root + c;
            weight = weight * r + c.norm();
        }
        if weight == T::zero() {
            return T::zero();
        }
        value.norm() / weight
    } else {
        // f(r) = r^d g(1/r) and Σ|c_j||r|^j = |r|^d h(1/|r|): the |r|^d
        // factors cancel in the ratio. The reciprocal is scaled by hand:
        // the naive complex division overflows its |r|² denominator for
        // |r| beyond the square root of the type's maximum.
        let inv = T::one() / r;
        let w = Complex::new(root.re * inv * inv, -(root.im * inv * inv));
        let wn = inv;
        let mut value = zero;
        let mut weight = T::zero();
        for c in coeffs.iter() {
            value = value * w + c;
            weight = weight * wn + c.norm();
        }
        if weight == T::zero() {
            return T::zero();
        }
        value.norm() / weight
    }
}

/// Zeros of the polynomial given by `work` (length ≥ 2, nonzero leading
/// and constant coefficients assumed handled by the caller).
fn solve_monic<T: Scalar>(work: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let m = work.len() - 1;
    let real = work.iter().all(|c| c.im == T::zero());
    match m {
        // A pure monomial c z^d: every zero sat at the origin already.
        0 => Ok(Vec::new()),
        1 => Ok(vec![-(work[0] / work[1])]),
        2 => {
            if real {
                Ok(quadratic_real(work[0].re, work[1].re, work[2].re))
            } else {
                Ok(quadratic_complex(work[0], work[1], work[2]))
            }
        }
        _ => {
            // Top-row companion orientation: with graded coefficients
            // (closed-form bases span hundreds of orders of magnitude)
            // the last-column form loses the small-modulus zeros even
            // after balancing, while this orientation keeps them.
            let mut zeros = if real {
                let lead = work[m].re;
                let mut h = vec![T::zero(); m * m];
                for j in 0..m {
                    h[j] = -(work[m - 1 - j].re / lead);
                }
                for i in 0..m - 1 {
                    h[(i + 1) * m + i] = T::one();
                }
                balance_real(&mut h, m);
                real_hessenberg_eigenvalues(&mut h, m)?
            } else {
                let lead = work[m];
                let mut h = CMat::<T>::zeros(m);
                for j in 0..m {
                    h[(0, j)] = -(work[m - 1 - j] / lead);
                }
                for i in 0..m - 1 {
                    h[(i + 1, i)] = Complex::new(T::one(), T::zero());
                }
                balance_complex(&mut h);
                complex_hessenberg_eigenvalues(&mut h)?
            };
            // Past a few hundred degrees the coefficient grading exceeds
            // what the balanced eigensolve can resolve and the smallest
            // zeros come back spurious. A joint polish restores them at
            // O(m²) per sweep, a vanishing fraction of the O(m³) solve.
            aberth_polish(work, &mut zeros);
            Ok(zeros)
        }
    }
}

/// Maximum joint polish sweeps. Most zeros converge in two or three,
/// but when the eigensolve loses the smallest zeros their replacements
/// start clustered and the cluster disperses one step per sweep.
const ABERTH_MAX_SWEEPS: usize = 64;

fn finite<T: Scalar>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Component-scaled complex division that survives denominators whose
/// squared modulus would overflow or underflow. `None` for a zero or
/// non-finite denominator.
fn stable_div<T: Scalar>(num: Complex<T>, den: Complex<T>) -> Option<Complex<T>> {
    let s = den.re.abs().max(den.im.abs());
    if s == T::zero() || !s.is_finite() {
        return None;
    }
    let dn = Complex::new(den.re / s, den.im / s);
    let nn = Complex::new(num.re / s, num.im / s);
    let q = dn.norm_sqr();
    Some(Complex::new(
        (nn.re * dn.re + nn.im * dn.im) / q,
        (nn.im * dn.re - nn.re * dn.im) / q,
    ))
}

/// Newton correction `f(z)/f'(z)` for the polynomial with monomial
/// coefficients `work`, evaluated through `1/z` when `|z| > 1` so the
/// powers never overflow. `None` when the derivative vanishes.
fn newton_correction<T: Scalar>(
    work: &[Complex<T>],
    z: Complex<T>,
) -> Option<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let r = z.norm();
    if r <= T::one() {
        let mut f = zero;
        let mut df = zero;
        for c in work.iter().rev() {
            df = df * z + f;
            f = f * z + c;
        }
        if f == zero {
            return Some(zero);
        }
        stable_div(f, df)
    } else {
        // f(z) = z^d g(w) with w = 1/z and g(w) = Σ_j c_j w^{d-j}, so
        // f'(z) = z^{d-1} (d·g(w) - w·g'(w)) and the z^d factors cancel
        // in the Newton ratio: f/f' = z·g / (d·g - w·g').
        let inv = T::one() / r;
        let w = Complex::new(z.re * inv * inv, -(z.im * inv * inv));
        let mut g = zero;
        let mut dg = zero;
        for c in work.iter() {
            dg = dg * w + g;
            g = g * w + c;
        }
        if g == zero {
            return Some(zero);
        }
        let d = Complex::new(T::from_usize(work.len() - 1), T::zero());
        stable_div(g, d * g - w * dg).map(|q| z * q)
    }
}

/// Ehrlich-Aberth refinement: Newton corrections deflected by the
/// reciprocal distances to the other iterates, applied in place so a
/// dispersing cluster sees its partners' fresh positions. Steps are
/// capped to a fifth of the local scale to rule out flings, converged
/// points freeze (they still repel the rest), and every zero keeps the
/// best position it visited, so the polish never degrades a root.
fn aberth_polish<T: Scalar>(work: &[Complex<T>], zeros: &mut [Complex<T>]) {
    let n = zeros.len();
    if n == 0 {
        return;
    }
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let step_tol = T::from_f64(4.0) * T::epsilon();
    let mut best: Vec<(Complex<T>, T)> = zeros
        .iter()
        .map(|&z| (z, relative_residual(work, z)))
        .collect();
    let mut frozen = vec![false; n];
    for _ in 0..ABERTH_MAX_SWEEPS {
        let mut moved = false;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let zi = zeros[i];
            let newton = match newton_correction(work, zi) {
                Some(v) if finite(v) => v,
                _ => {
                    frozen[i] = true;
                    continue;
                }
            };
            let mut repulsion = zero;
            for j in 0..n {
                if j == i {
                    continue;
                }
                if let Some(t) = stable_div(one, zi - zeros[j]) {
                    repulsion += t;
                }
            }
            let mut w = match stable_div(newton, one - newton * repulsion) {
                Some(v) if finite(v) => v,
                _ => newton,
            };
            let scale = T::one() + zi.norm();
            let cap = T::from_f64(0.2) * scale;
            let wn = w.norm();
            if wn > cap {
                w *= Complex::new(cap / wn, T::zero());
            }
            zeros[i] = zi - w;
            if wn <= step_tol * scale {
                frozen[i] = true;
                let res = relative_residual(work, zeros[i]);
                if res < best[i].1 {
                    best[i] = (zeros[i], res);
                }
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    for i in 0..n {
        if !frozen[i] && finite(zeros[i]) {
            let res = relative_residual(work, zeros[i]);
            if res < best[i].1 {
                best[i] = (zeros[i], res);
            }
        }
        zeros[i] = best[i].0;
    }
}

/// Stable quadratic formula for `c + b z + a z²` with real coefficients:
/// real roots stay exactly real, complex roots come out as an exactly
/// conjugate pair.
fn quadratic_real<T: Scalar>(c: T, b: T, a: T) -> Vec<Complex<T>> {
    let disc = b * b - T::from_f64(4.0) * a * c;
    if disc >= T::zero() {
        let s = disc.sqrt().copysign(b);
        let q = -(b + s) * T::from_f64(0.5);
        let r1 = if q == T::zero() { T::zero() } else { c / q };
        let r2 = q / a;
        vec![Complex::new(r1, T::zero()), Complex::new(r2, T::zero())]
    } else {
        let re = -b / (T::from_f64(2.0) * a);
        let im = (-disc).sqrt() / (T::from_f64(2.0) * a.abs());
        vec![Complex::new(re, im), Complex::new(re, -im)]
    }
}

/// Stable quadratic formula for complex coefficients, choosing the sign
/// of the square root that avoids cancellation.
fn quadratic_complex<T: Scalar>(
    c: Complex<T>,
    b: Complex<T>,
    a: Complex<T>,
) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let four = Complex::new(T::from_f64(4.0), T::zero());
    let disc = b * b - four * a * c;
    let mut s = disc.sqrt();
    if (b.conj() * s).re < T::zero() {
        s = -s;
    }
    let q = -(b + s) * Complex::new(T::from_f64(0.5), T::zero());
    if q == zero {
        // b = -s forces b² = disc, hence a·c = 0 with a ≠ 0.
        vec![zero, -(b / a)]
    } else {
        vec![c / q, q / a]
    }
}

/// Rectangular histogram grid over a box in the plane; bins are
/// right-open in both coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(x_min: T, x_max: T, y_min: T, y_max: T, nx: usize, ny: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite()) {
            return Err(Error::Parameter("grid bounds must be finite".into()));
        }
        if x_max <= x_min || y_max <= y_min {
            return Err(Error::Parameter("grid box must have positive extent".into()));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::Parameter("grid needs at least one bin per axis".into()));
        }
        Ok(GridSpec { x_min, x_max, y_min, y_max, nx, ny })
    }

    /// Square box `[-h, h]²` with `bins × bins` cells, the shape used by
    /// the equidistribution experiments.
    pub fn centered_square(half_width: T, bins: usize) -> Result<Self> {
        Self::new(-half_width, half_width, -half_width, half_width, bins, bins)
    }

    pub fn bin_count(&self) -> usize {
        self.nx * self.ny
    }

    /// Row-major bin index of a point, or `None` when it falls outside
    /// the box (the right and top edges are exclusive).
    pub fn bin_index(&self, z: Complex<T>) -> Option<usize> {
        let (x, y) = (z.re, z.im);
        if !(x >= self.x_min && x < self.x_max && y >= self.y_min && y < self.y_max) {
            return None;
        }
        let fx = (x - self.x_min) / (self.x_max - self.x_min) * T::from_usize(self.nx);
        let fy = (y - self.y_min) / (self.y_max - self.y_min) * T::from_usize(self.ny);
        let ix = (fx.floor().to_f64() as usize).min(self.nx - 1);
        let iy = (fy.floor().to_f64() as usize).min(self.ny - 1);
        Some(iy * self.nx + ix)
    }

    /// Center of the bin at row-major index `i`.
    pub fn bin_center(&self, i: usize) -> Complex<T> {
        let ix = i % self.nx;
        let iy = i / self.nx;
        let dx = (self.x_max - self.x_min) / T::from_usize(self.nx);
        let dy = (self.y_max - self.y_min) / T::from_usize(self.ny);
        Complex::new(
            self.x_min + dx * (T::from_usize(ix) + T::from_f64(0.5)),
            self.y_min + dy * (T::from_usize(iy) + T::from_f64(0.5)),
        )
    }

    /// Area of a single bin.
    pub fn bin_area(&self) -> T {
        let dx = (self.x_max - self.x_min) / T::from_usize(self.nx);
        let dy = (self.y_max - self.y_min) / T::from_usize(self.ny);
        dx * dy
    }
}

#[derive(Debug, Clone)]
enum MeasureData<T> {
    /// Integer zero counts: mass bookkeeping is exact, each zero of a
    /// degree-p trial carrying weight 1/p at normalization time.
    Counts {
        bins: Vec<u64>,
        outside: u64,
        degree: u64,
        trials: u64,
    },
    /// Real-valued masses (reference measures binned analytically).
    Masses { bins: Vec<T>, outside: T },
}

/// Accumulated zero mass over a rectangular grid, plus out-of-box mass.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure2D<T> {
    grid: GridSpec<T>,
    data: MeasureData<T>,
}

impl<T: Scalar> EmpiricalMeasure2D<T> {
    /// Empty counting measure on the grid.
    pub fn new(grid: GridSpec<T>) -> Self {
        EmpiricalMeasure2D {
            grid,
            data: MeasureData::Counts {
                bins: vec![0; grid.bin_count()],
                outside: 0,
                degree: 0,
                trials: 0,
            },
        }
    }

    /// Measure with preassigned bin masses (reference distributions).
    pub fn from_masses(grid: GridSpec<T>, bins: Vec<T>, outside: T) -> Result<Self> {
        if bins.len() != grid.bin_count() {
            return Err(Error::Contract(format!(
                "mass vector length {} does not match grid bin count {}",
                bins.len(),
                grid.bin_count()
            )));
        }
        if bins.iter().any(|m| !m.is_finite() || *m < T::zero())
            || !outside.is_finite()
            || outside < T::zero()
        {
            return Err(Error::Contract("bin masses must be finite and nonnegative".into()));
        }
        Ok(EmpiricalMeasure2D {
            grid,
            data: MeasureData::Masses { bins, outside },
        })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    /// Adds every zero of a trial, each with weight `1/degree`. All
    /// accumulated trials must share the same nominal degree, so the
    /// bookkeeping stays in exact integers.
    pub fn accumulate(&mut self, zero_set: &ZeroSet<T>) -> Result<()> {
        if zero_set.degree == 0 {
            return Err(Error::Contract("zero set with degree 0 cannot be binned".into()));
        }
        match &mut self.data {
            MeasureData::Masses { .. } => Err(Error::Contract(
                "cannot accumulate zeros into a fixed-mass reference measure".into(),
            )),
            MeasureData::Counts { bins, outside, degree, trials } => {
                let d = zero_set.degree as u64;
                if *trials == 0 {
                    *degree = d;
                } else if *degree != d {
                    return Err(Error::Contract(format!(
                        "degree {d} does not match the measure's degree {}",
                        *degree
                    )));
                }
                for &z in &zero_set.zeros {
                    match self.grid.bin_index(z) {
                        Some(i) => bins[i] += 1,
                        None => *outside += 1,
                    }
                }
                *trials += 1;
                Ok(())
            }
        }
    }

    /// Merges another counting measure accumulated on the same grid and
    /// degree. Merging is associative and commutative, so parallel
    /// partial accumulations combine independently of thread count.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("measures live on different grids".into()));
        }
        match (&mut self.data, &other.data) {
            (
                MeasureData::Counts { bins, outside, degree, trials },
                MeasureData::Counts {
                    bins: ob,
                    outside: oo,
                    degree: od,
                    trials: ot,
                },
            ) => {
                if *trials == 0 {
                    *degree = *od;
                } else if *ot > 0 && *degree != *od {
                    return Err(Error::Contract(format!(
                        "cannot merge measures of degrees {} and {od}",
                        *degree
                    )));
                }
                for (b, o) in bins.iter_mut().zip(ob) {
                    *b += o;
                }
                *outside += *oo;
                *trials += *ot;
                Ok(())
            }
            _ => Err(Error::Contract("can only merge counting measures".into())),
        }
    }

    /// Number of accumulated trials (counting measures only).
    pub fn trials(&self) -> Option<u64> {
        match &self.data {
            MeasureData::Counts { trials, .. } => Some(*trials),
            MeasureData::Masses { .. } => None,
        }
    }

    /// Raw bin counts (counting measures only).
    pub fn counts(&self) -> Option<(&[u64], u64)> {
        match &self.data {
            MeasureData::Counts { bins, outside, .. } => Some((bins, *outside)),
            MeasureData::Masses { .. } => None,
        }
    }

    /// Total unnormalized mass: `trials` for counting measures (each
    /// trial contributes degree zeros of weight 1/degree), the mass sum
    /// for reference measures.
    pub fn total_mass(&self) -> T {
        match &self.data {
            MeasureData::Counts { bins, outside, degree, .. } => {
                let count = bins.iter().sum::<u64>() + *outside;
                if *degree == 0 {
                    T::zero()
                } else {
                    T::from_f64(count as f64) / T::from_f64(*degree as f64)
                }
            }
            MeasureData::Masses { bins, outside } => {
                bins.iter().fold(*outside, |acc, &m| acc + m)
            }
        }
    }

    /// Probability masses per bin plus the out-of-box probability,
    /// normalized so everything sums to one.
    pub fn normalized(&self) -> Result<(Vec<T>, T)> {
        match &self.data {
            MeasureData::Counts { bins, outside, .. } => {
                let total = bins.iter().sum::<u64>() + *outside;
                if total == 0 {
                    return Err(Error::Contract("cannot normalize an empty measure".into()));
                }
                let t = T::from_f64(total as f64);
                Ok((
                    bins.iter().map(|&b| T::from_f64(b as f64) / t).collect(),
                    T::from_f64(*outside as f64) / t,
                ))
            }
            MeasureData::Masses { bins, outside } => {
                let total = bins.iter().fold(*outside, |acc, &m| acc + m);
                if total <= T::zero() {
                    return Err(Error::Contract("cannot normalize a measure with no mass".into()));
                }
                Ok((bins.iter().map(|&m| m / total).collect(), *outside / total))
            }
        }
    }

    /// Fraction of mass inside the box.
    pub fn in_box_fraction(&self) -> Result<T> {
        let (_, outside) = self.normalized()?;
        Ok(T::one() - outside)
    }

    /// Total-variation distance between two measures on the same grid,
    /// the out-of-box mass treated as one extra bin.
    pub fn tv_distance(&self, other: &Self) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("measures live on different grids".into()));
        }
        let (a, a_out) = self.normalized()?;
        let (b, b_out) = other.normalized()?;
        let mut acc = (a_out - b_out).abs();
        for (&ma, &mb) in a.iter().zip(&b) {
            acc += (ma - mb).abs();
        }
        // Mathematically ≤ 1; for near-disjoint measures the sum can
        // round a few ulps past 2, so clamp to keep the [0,1] contract.
        Ok((acc * T::from_f64(0.5)).min(T::one()))
    }
}

/// Zero sets of `trials` independent samples, one deterministic
/// substream per trial, computed in parallel and returned in trial
/// order (thread count never changes the output).
pub fn sample_zero_sets<T: Scalar>(
    basis: &OrthonormalBasis<T>,
    ensemble: &CoefficientEnsemble<T>,
    trials: usize,
    root_seed: u64,
) -> Result<Vec<ZeroSet<T>>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(substream(root_seed, trial as u64));
            let poly = random_polynomial(basis, ensemble, &mut rng)?;
            poly.roots()
        })
        .collect()
}

/// Accumulates the zeros of `trials` independent samples into a single
/// counting measure on `grid`.
pub fn sample_zero_measure<T: Scalar>(
    basis: &OrthonormalBasis<T>,
    ensemble: &CoefficientEnsemble<T>,
    trials: usize,
    root_seed: u64,
    grid: GridSpec<T>,
) -> Result<EmpiricalMeasure2D<T>> {
    let partials: Result<Vec<EmpiricalMeasure2D<T>>> = (0..trials)
        .into_par_iter()
        .fold(
            || Ok(EmpiricalMeasure2D::new(grid)),
            |acc: Result<EmpiricalMeasure2D<T>>, trial| {
                let mut measure = acc?;
                let mut rng = stream_rng(substream(root_seed, trial as u64));
                let poly = random_polynomial(basis, ensemble, &mut rng)?;
                measure.accumulate(&poly.roots()?)?;
                Ok(measure)
            },
        )
        .collect();
    let mut total = EmpiricalMeasure2D::new(grid);
    for partial in partials? {
        total.merge(&partial)?;
    }
    Ok(total)
}
