//! Coefficient ensembles: the probability laws on ℝ^k ⊂ ℂ^k (and one on
//! ℂ^k) from which random polynomial coefficients are drawn.
//!
//! All sampling is deterministic per (ensemble, k, stream): the same triple
//! yields bit-identical vectors on every platform and thread count.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::special::inv_reg_inc_beta;

/// A tabulated density on a bounded interval, piecewise linear between
/// nodes, with its declared tail constants `(c, rho)` and bound `M`.
///
/// The table is validated and renormalized to unit mass at construction;
/// sampling inverts the exact piecewise-quadratic CDF, so draws are
/// deterministic and bias-free with respect to the stored table.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity<T> {
    xs: Vec<T>,
    /// Density values at the nodes, after renormalization.
    values: Vec<T>,
    /// Cumulative mass up to each node (cum[0] = 0, cum[n-1] = 1).
    cum: Vec<T>,
    pub tail_c: T,
    pub tail_rho: T,
    pub bound_m: T,
}

impl<T: Scalar> TabulatedDensity<T> {
    /// Builds a density from `(x, value)` pairs with strictly increasing
    /// `x`. The trapezoid mass must be within 1e-3 of 1; it is then scaled
    /// to exactly 1. `M` must bound the (renormalized) density and the
    /// tail constants must satisfy `c > 0`, `rho > 1`.
    pub fn new(points: &[(T, T)], tail_c: T, tail_rho: T, bound_m: T) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parameter(
                "tabulated density needs at least two points".into(),
            ));
        }
        if !(tail_c > T::zero()) {
            return Err(Error::Parameter("tail constant c must be positive".into()));
        }
        if !(tail_rho > T::one()) {
            return Err(Error::Parameter("tail exponent rho must exceed 1".into()));
        }
        if !(bound_m > T::zero()) {
            return Err(Error::Parameter("density bound M must be positive".into()));
        }
        let mut xs = Vec::with_capacity(points.len());
        let mut values = Vec::with_capacity(points.len());
        for &(x, v) in points {
            if !x.is_finite() || !v.is_finite() {
                return Err(Error::Parameter("non-finite table entry".into()));
            }
            if let Some(&prev) = xs.last() {
                if !(x > prev) {
                    return Err(Error::Parameter(
                        "table abscissae must be strictly increasing".into(),
                    ));
                }
            }
            if v < T::zero() {
                return Err(Error::Parameter("density values must be nonnegative".into()));
            }
            xs.push(x);
            values.push(v);
        }
        let mut mass = T::zero();
        for i in 0..xs.len() - 1 {
            mass += (values[i] + values[i + 1]) * (xs[i + 1] - xs[i]) * T::from_f64(0.5);
        }
        if (mass - T::one()).abs() > T::from_f64(1e-3) {
            return Err(Error::Parameter(format!(
                "density mass {} is not within 1e-3 of 1",
                mass.to_f64()
            )));
        }
        for v in &mut values {
            *v /= mass;
        }
        let slack = T::one() + T::from_f64(1e-9);
        if values.iter().any(|&v| v > bound_m * slack) {
            return Err(Error::Parameter(
                "renormalized density exceeds its declared bound M".into(),
            ));
        }
        let mut cum = vec![T::zero(); xs.len()];
        for i in 0..xs.len() - 1 {
            cum[i + 1] =
                cum[i] + (values[i] + values[i + 1]) * (xs[i + 1] - xs[i]) * T::from_f64(0.5);
        }
        // Pin the final cumulative value so inverse sampling never walks
        // off the table through rounding.
        let n = cum.len();
        cum[n - 1] = T::one();
        Ok(TabulatedDensity {
            xs,
            values,
            cum,
            tail_c,
            tail_rho,
            bound_m,
        })
    }

    /// Density value at `x` (zero outside the table's support).
    pub fn density(&self, x: T) -> T {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return T::zero();
        }
        let cell = match self.xs.partition_point(|&t| t <= x) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        };
        let h = self.xs[cell + 1] - self.xs[cell];
        let w = (x - self.xs[cell]) / h;
        self.values[cell] * (T::one() - w) + self.values[cell + 1] * w
    }

    /// Inverse-CDF draw.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let u: T = T::uniform_01(rng);
        let cell = self
            .cum
            .partition_point(|&c| c <= u)
            .min(self.cum.len() - 1)
            .max(1)
            - 1;
        let target = u - self.cum[cell];
        let h = self.xs[cell + 1] - self.xs[cell];
        let v0 = self.values[cell];
        let slope = (self.values[cell + 1] - v0) / h;
        // Solve (slope/2) d^2 + v0 d = target for d in [0, h], in the
        // cancellation-free form d = 2 target / (v0 + sqrt(v0^2 + 2 slope target)).
        let disc = (v0 * v0 + T::from_f64(2.0) * slope * target).max(T::zero());
        let denom = v0 + disc.sqrt();
        let d = if denom > T::zero() {
            (T::from_f64(2.0) * target / denom).min(h)
        } else {
            T::zero()
        };
        self.xs[cell] + d
    }
}

/// Uniform random point on the unit sphere of ℝ^k (normalized Gaussian
/// vector; exact rotation invariance, no rejection in practice).
fn gaussian_direction<T: Scalar, R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<T> {
    let mut dir = vec![T::zero(); k];
    loop {
        let mut norm_sq = T::zero();
        for d in dir.iter_mut() {
            *d = T::standard_normal(rng);
            norm_sq += *d * *d;
        }
        if norm_sq > T::zero() {
            let norm = norm_sq.sqrt();
            for d in dir.iter_mut() {
                *d /= norm;
            }
            return dir;
        }
    }
}

/// Probability law for the coefficient vector of a random polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientEnsemble<T> {
    /// i.i.d. complex Gaussians with mean 0 and E|a_j|² = 1.
    ComplexGaussian,
    /// The real Gaussian on ℝ^k with density π^{-k/2} e^{-|a|²}
    /// (coordinates i.i.d. N(0, 1/2)).
    RealGaussian,
    /// Rotation-invariant law on ℝ^k with density
    /// proportional to (1 + |a|²)^{-k/2 - alpha}.
    RadialDensity { alpha: T },
    /// Uniform (normalized area) measure on the unit sphere of ℝ^k.
    SphereUniform,
    /// i.i.d. coordinates with a tabulated density on ℝ.
    IIDDensity(TabulatedDensity<T>),
    /// i.i.d. coordinates uniform on [0, 1].
    UniformUnitCube,
}

impl<T: Scalar> CoefficientEnsemble<T> {
    /// Builds a radial ensemble, validating the exponent.
    pub fn radial(alpha: T) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::Parameter(format!(
                "radial exponent alpha must be positive and finite, got {}",
                alpha.to_f64()
            )));
        }
        Ok(CoefficientEnsemble::RadialDensity { alpha })
    }

    /// True when the law on ℝ^k is invariant under orthogonal rotations.
    pub fn is_rotation_invariant(&self) -> bool {
        matches!(
            self,
            CoefficientEnsemble::RealGaussian
                | CoefficientEnsemble::RadialDensity { .. }
                | CoefficientEnsemble::SphereUniform
        )
    }

    /// True when samples lie in ℝ^k (zero imaginary parts).
    pub fn is_real_supported(&self) -> bool {
        !matches!(self, CoefficientEnsemble::ComplexGaussian)
    }

    /// True when the law is supported in the closed unit ball of ℝ^k.
    pub fn is_ball_supported(&self) -> bool {
        matches!(self, CoefficientEnsemble::SphereUniform)
    }

    /// Draws one coefficient vector of length `k` using `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<Vec<Complex<T>>> {
        if k == 0 {
            return Err(Error::Parameter("dimension k must be at least 1".into()));
        }
        let half_sqrt = T::from_f64(std::f64::consts::FRAC_1_SQRT_2);
        let mut out = Vec::with_capacity(k);
        match self {
            CoefficientEnsemble::ComplexGaussian => {
                for _ in 0..k {
                    let re = T::standard_normal(rng) * half_sqrt;
                    let im = T::standard_normal(rng) * half_sqrt;
                    out.push(Complex::new(re, im));
                }
            }
            CoefficientEnsemble::RealGaussian => {
                for _ in 0..k {
                    let re = T::standard_normal(rng) * half_sqrt;
                    out.push(Complex::new(re, T::zero()));
                }
            }
            CoefficientEnsemble::RadialDensity { alpha } => {
                // Direction uniform on the sphere; radius from the exact
                // marginal: |a|²/(1+|a|²) ~ Beta(k/2, alpha).
                let dir: Vec<T> = gaussian_direction(k, rng);
                let u: T = T::uniform_01(rng);
                let a = T::from_usize(k) * T::from_f64(0.5);
                let b = inv_reg_inc_beta(a, *alpha, u)?;
                let radius = (b / (T::one() - b)).sqrt();
                for d in dir {
                    out.push(Complex::new(d * radius, T::zero()));
                }
            }
            CoefficientEnsemble::SphereUniform => {
                let dir: Vec<T> = gaussian_direction(k, rng);
                for d in dir {
                    out.push(Complex::new(d, T::zero()));
                }
            }
            CoefficientEnsemble::IIDDensity(table) => {
                for _ in 0..k {
                    out.push(Complex::new(table.draw(rng), T::zero()));
                }
            }
            CoefficientEnsemble::UniformUnitCube => {
                for _ in 0..k {
                    out.push(Complex::new(T::uniform_01(rng), T::zero()));
                }
            }
        }
        Ok(out)
    }

    /// Draws one coefficient vector from a dedicated stream; identical
    /// `(ensemble, k, stream)` triples give bit-identical output.
    pub fn sample_seeded(&self, k: usize, stream: u64) -> Result<Vec<Complex<T>>> {
        let mut rng = stream_rng(stream);
        self.sample(k, &mut rng)
    }

    /// Monte Carlo estimate of P(|a₁| > e^R) for a single coordinate
    /// (the k = 1 marginal of the ensemble).
    pub fn tail_probability<R: Rng + ?Sized>(
        &self,
        r: T,
        trials: usize,
        rng: &mut R,
    ) -> Result<T> {
        if trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if r < T::zero() {
            return Err(Error::Parameter("tail radius exponent R must be >= 0".into()));
        }
        let threshold = r.exp();
        let mut hits = 0usize;
        for _ in 0..trials {
            let a = self.sample(1, rng)?;
            if a[0].norm() > threshold {
                hits += 1;
            }
        }
        Ok(T::from_usize(hits) / T::from_usize(trials))
    }

    /// Monte Carlo estimate of E[(log(1 + |a₁|))^n] for the k = 1 marginal.
    pub fn log_moment_1d<R: Rng + ?Sized>(
        &self,
        n: u32,
        trials: usize,
        rng: &mut R,
    ) -> Result<T> {
        if n == 0 {
            return Err(Error::Parameter("moment order n must be at least 1".into()));
        }
        if trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        let mut acc = T::zero();
        for _ in 0..trials {
            let a = self.sample(1, rng)?;
            acc += (T::one() + a[0].norm()).ln().powi(n as i32);
        }
        Ok(acc / T::from_usize(trials))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive, adaptive_to_inf, gauss_laguerre};
    use crate::rng::{stream_rng, substream};
    use crate::special::{erfc, ln_gamma};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn triangular_table() -> TabulatedDensity<f64> {
        // phi(x) = 1 - x/2 on [0, 2]; mass exactly 1, bound M = 1.
        TabulatedDensity::new(&[(0.0, 1.0), (1.0, 0.5), (2.0, 0.0)], 1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn table_validation_rejects_bad_input() {
        assert!(TabulatedDensity::<f64>::new(&[(0.0, 1.0)], 1.0, 2.0, 1.0).is_err());
        assert!(TabulatedDensity::new(&[(0.0, 1.0), (0.0, 1.0)], 1.0, 2.0, 1.0).is_err());
        assert!(TabulatedDensity::new(&[(0.0, 1.0), (1.0, -0.1)], 1.0, 2.0, 1.0).is_err());
        assert!(TabulatedDensity::new(&[(0.0, 2.0), (1.0, 2.0)], 1.0, 2.0, 2.5).is_err());
        assert!(TabulatedDensity::new(&[(0.0, 1.0), (2.0, 0.0)], 1.0, 0.9, 1.0).is_err());
        assert!(CoefficientEnsemble::radial(0.0).is_err());
        assert!(CoefficientEnsemble::radial(-1.0).is_err());
    }

    #[test]
    fn sphere_samples_have_unit_norm_and_real_support() {
        let ens = CoefficientEnsemble::<f64>::SphereUniform;
        let mut rng = stream_rng(4);
        for _ in 0..200 {
            let a = ens.sample(3, &mut rng).unwrap();
            let norm_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(norm_sq.sqrt(), 1.0, epsilon = 1e-12);
            assert!(a.iter().all(|z| z.im == 0.0));
        }
    }

    #[test]
    fn cube_samples_stay_in_unit_interval() {
        let ens = CoefficientEnsemble::<f64>::UniformUnitCube;
        let mut rng = stream_rng(5);
        for _ in 0..200 {
            let a = ens.sample(5, &mut rng).unwrap();
            assert!(a.iter().all(|z| (0.0..1.0).contains(&z.re) && z.im == 0.0));
        }
    }

    #[test]
    fn real_gaussian_second_moment_matches_quadrature_oracle() {
        // Oracle: E|a|² for density π^{-k/2} e^{-|a|²} at k = 2, computed
        // by polar Gauss-Laguerre: (1/π)·2π ∫ r³ e^{-r²} dr = ∫ u e^{-u} du.
        let rule = gauss_laguerre::<f64>(8).unwrap();
        let oracle: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&u, &w)| w * u)
            .sum();
        assert_abs_diff_eq!(oracle, 1.0, epsilon = 1e-12);

        let ens = CoefficientEnsemble::<f64>::RealGaussian;
        let mut rng = stream_rng(6);
        let trials = 1_000_000usize;
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for _ in 0..trials {
            let a = ens.sample(2, &mut rng).unwrap();
            let v: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / trials as f64;
        let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - oracle).abs() <= 3.0 * se,
            "mean {mean} vs oracle {oracle} (se {se})"
        );
    }

    #[test]
    fn complex_gaussian_moments() {
        let ens = CoefficientEnsemble::<f64>::ComplexGaussian;
        let mut rng = stream_rng(7);
        let trials = 200_000usize;
        let (mut norm_sum, mut cross_sum) = (0.0f64, 0.0f64);
        for _ in 0..trials {
            let a = ens.sample(1, &mut rng).unwrap();
            norm_sum += a[0].norm_sqr();
            cross_sum += a[0].re * a[0].im;
        }
        // E|a|² = 1 and E[Re·Im] = 0, each within generous MC slack.
        assert_abs_diff_eq!(norm_sum / trials as f64, 1.0, epsilon = 0.01);
        assert_abs_diff_eq!(cross_sum / trials as f64, 0.0, epsilon = 0.005);
    }

    #[test]
    fn radial_density_normalizes_for_small_k() {
        // c_{k,alpha} ∫ r^{k-1} ω_{k-1} (1+r²)^{-k/2-alpha} dr = 1 for k ≤ 3.
        for (k, alpha) in [(1usize, 1.0f64), (2, 1.0), (3, 0.7), (2, 2.5)] {
            let kf = k as f64;
            let ln_c = ln_gamma(kf / 2.0 + alpha)
                - ln_gamma(alpha)
                - kf / 2.0 * std::f64::consts::PI.ln();
            let surface = match k {
                1 => 2.0,
                2 => 2.0 * std::f64::consts::PI,
                3 => 4.0 * std::f64::consts::PI,
                _ => unreachable!(),
            };
            let mass = surface
                * adaptive_to_inf(
                    |r: f64| {
                        (ln_c + (kf - 1.0) * r.max(1e-300).ln()
                            - (kf / 2.0 + alpha) * (1.0 + r * r).ln())
                        .exp()
                    },
                    0.0,
                    1e-10,
                )
                .unwrap()
                .value;
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn radial_radius_law_matches_beta_marginal() {
        // |a|²/(1+|a|²) must be Beta(k/2, alpha); check the empirical CDF
        // at a few quantiles for k = 2, alpha = 1 where Beta(1,1) = U(0,1).
        let ens = CoefficientEnsemble::radial(1.0f64).unwrap();
        let mut rng = stream_rng(8);
        let trials = 40_000usize;
        let mut transformed = Vec::with_capacity(trials);
        for _ in 0..trials {
            let a = ens.sample(2, &mut rng).unwrap();
            let norm_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            transformed.push(norm_sq / (1.0 + norm_sq));
        }
        transformed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for q in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let idx = ((trials as f64) * q) as usize;
            // Uniform quantile; MC tolerance ~ 3·sqrt(q(1-q)/n) ≈ 0.008.
            assert_abs_diff_eq!(transformed[idx], q, epsilon = 0.01);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_stream() {
        let tables = triangular_table();
        let ensembles: Vec<CoefficientEnsemble<f64>> = vec![
            CoefficientEnsemble::ComplexGaussian,
            CoefficientEnsemble::RealGaussian,
            CoefficientEnsemble::radial(1.5).unwrap(),
            CoefficientEnsemble::SphereUniform,
            CoefficientEnsemble::IIDDensity(tables),
            CoefficientEnsemble::UniformUnitCube,
        ];
        for (i, ens) in ensembles.iter().enumerate() {
            let a = ens.sample_seeded(7, 1000 + i as u64).unwrap();
            let b = ens.sample_seeded(7, 1000 + i as u64).unwrap();
            assert_eq!(a, b);
            let c = ens.sample_seeded(7, 2000 + i as u64).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn tail_probability_trivial_and_oracle_cases() {
        let cube = CoefficientEnsemble::<f64>::UniformUnitCube;
        let mut rng = stream_rng(9);
        let p = cube.tail_probability(0.1, 2_000, &mut rng).unwrap();
        assert_eq!(p, 0.0);

        // RealGaussian coordinate has density π^{-1/2} e^{-x²}, so
        // P(|a| > 1) = erfc(1).
        let gauss = CoefficientEnsemble::<f64>::RealGaussian;
        let trials = 200_000usize;
        let est = gauss.tail_probability(0.0, trials, &mut rng).unwrap();
        let oracle = erfc(1.0f64);
        let se = (oracle * (1.0 - oracle) / trials as f64).sqrt();
        assert!(
            (est - oracle).abs() <= 3.0 * se,
            "estimate {est} vs erfc(1) = {oracle}"
        );
    }

    #[test]
    fn iid_density_tail_respects_declared_bound() {
        // Compact support in [0, 2]: for e^R > 2 the tail is exactly 0,
        // trivially below c R^{-rho}.
        let ens = CoefficientEnsemble::IIDDensity(triangular_table());
        let mut rng = stream_rng(10);
        let r = 1.0f64; // e^1 > 2
        let est = ens.tail_probability(r, 5_000, &mut rng).unwrap();
        assert_eq!(est, 0.0);
        assert!(est <= 1.0 * r.powf(-2.0));
    }

    #[test]
    fn log_moment_1d_trivial_and_oracle_cases() {
        let cube = CoefficientEnsemble::<f64>::UniformUnitCube;
        let mut rng = stream_rng(11);
        let m = cube.log_moment_1d(1, 50_000, &mut rng).unwrap();
        assert!(m >= 0.0 && m <= std::f64::consts::LN_2);

        // RealGaussian: oracle 2π^{-1/2} ∫₀^∞ log(1+x) e^{-x²} dx.
        let oracle = 2.0 / std::f64::consts::PI.sqrt()
            * (adaptive(|x: f64| (1.0 + x).ln() * (-x * x).exp(), 0.0, 1.0, 1e-10)
                .unwrap()
                .value
                + adaptive_to_inf(|x: f64| (1.0 + x).ln() * (-x * x).exp(), 1.0, 1e-10)
                    .unwrap()
                    .value);
        let gauss = CoefficientEnsemble::<f64>::RealGaussian;
        let trials = 400_000usize;
        let est = gauss.log_moment_1d(1, trials, &mut rng).unwrap();
        assert_relative_eq!(est, oracle, max_relative = 0.02);

        // RadialDensity alpha = 1, k = 1, n = 2: density (1/2)(1+x²)^{-3/2}.
        let radial = CoefficientEnsemble::radial(1.0f64).unwrap();
        let oracle = 2.0
            * 0.5
            * adaptive_to_inf(
                |x: f64| (1.0 + x).ln().powi(2) * (1.0 + x * x).powf(-1.5),
                0.0,
                1e-10,
            )
            .unwrap()
            .value;
        let est = radial.log_moment_1d(2, trials, &mut rng).unwrap();
        assert_relative_eq!(est, oracle, max_relative = 0.05);
    }

    #[test]
    fn rotation_invariance_two_sample_check() {
        // Project 10⁵ draws on a fixed direction v and on Qv for a fixed
        // rotation Q; the two empirical CDFs must agree (Lemma hypothesis).
        let k = 3usize;
        let v = [0.6f64, 0.8, 0.0];
        // Rotation by 90° in the (1,3) plane then a permutation.
        let qv = [0.0f64, 0.6, -0.8];
        for ens in [
            CoefficientEnsemble::<f64>::RealGaussian,
            CoefficientEnsemble::radial(1.0).unwrap(),
            CoefficientEnsemble::SphereUniform,
        ] {
            let n = 100_000usize;
            let mut first = Vec::with_capacity(n);
            let mut second = Vec::with_capacity(n);
            let mut rng_a = stream_rng(substream(12, 0));
            let mut rng_b = stream_rng(substream(12, 1));
            for _ in 0..n {
                let a = ens.sample(k, &mut rng_a).unwrap();
                first.push(a.iter().zip(&v).map(|(z, c)| z.re * c).sum::<f64>());
                let b = ens.sample(k, &mut rng_b).unwrap();
                second.push(b.iter().zip(&qv).map(|(z, c)| z.re * c).sum::<f64>());
            }
            first.sort_by(|a, b| a.partial_cmp(b).unwrap());
            second.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // Two-sample KS statistic by merge scan.
            let mut i = 0usize;
            let mut j = 0usize;
            let mut d: f64 = 0.0;
            while i < n && j < n {
                if first[i] <= second[j] {
                    i += 1;
                } else {
                    j += 1;
                }
                d = d.max((i as f64 / n as f64 - j as f64 / n as f64).abs());
            }
            // 3·sqrt(2/n) ≈ 0.0134 at n = 10⁵; allow a fixed margin.
            assert!(d <= 0.015, "two-sample KS {d} too large for {ens:?}");
        }
    }

    #[test]
    fn tabulated_sampling_matches_cdf() {
        let table = triangular_table();
        let ens = CoefficientEnsemble::IIDDensity(table.clone());
        let mut rng = stream_rng(13);
        let n = 100_000usize;
        let mut draws = Vec::with_capacity(n);
        for _ in 0..n {
            draws.push(ens.sample(1, &mut rng).unwrap()[0].re);
        }
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // CDF of 1 - x/2 on [0,2] is x - x²/4.
        let cdf = |x: f64| (x - x * x / 4.0).clamp(0.0, 1.0);
        let mut d: f64 = 0.0;
        for (i, &x) in draws.iter().enumerate() {
            let f = cdf(x);
            d = d.max((i + 1) as f64 / n as f64 - f).max(f - i as f64 / n as f64);
        }
        assert!(d <= 0.012, "one-sample KS {d} too large");
        assert!(draws.iter().all(|&x| (0.0..=2.0).contains(&x)));
        // Density evaluator agrees with the table shape.
        assert_abs_diff_eq!(table.density(0.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(table.density(1.0), 0.5, epsilon = 1e-12);
        assert_eq!(table.density(2.5), 0.0);
    }
}
