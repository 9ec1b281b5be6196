//! Linear statistics of zero sets and the central-limit experiment.

use num_complex::Complex;
use rayon::prelude::*;

use crate::basis::{OrthonormalBasis, SpaceKind, WeightedSpace};
use crate::ensembles::CoefficientEnsemble;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, substream};
use crate::scalar::Scalar;
use crate::special::normal_cdf;
use crate::zeros::{random_polynomial, ZeroSet};

/// A real-valued test function with compactly supported evaluator.
pub trait TestFunction<T: Scalar>: Send + Sync {
    fn evaluate(&self, z: Complex<T>) -> T;
    fn support_center(&self) -> Complex<T>;
    fn support_radius(&self) -> T;
}

/// The default test function: a radial polynomial bump
/// `ψ(z) = (1 − |z − z₀|²/r²)⁴` on its support disk, zero outside.
/// The fourth power makes the value and first three derivatives vanish
/// at the support boundary, so ψ is `C³` on all of ℂ.
#[derive(Debug, Clone, Copy)]
pub struct RadialBump<T> {
    center: Complex<T>,
    radius: T,
}

impl<T: Scalar> RadialBump<T> {
    pub fn new(center: Complex<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::Parameter(format!(
                "bump radius must be positive and finite, got {}",
                radius.to_f64()
            )));
        }
        Ok(RadialBump { center, radius })
    }
}

impl<T: Scalar> TestFunction<T> for RadialBump<T> {
    fn evaluate(&self, z: Complex<T>) -> T {
        let u = (z - self.center).norm_sqr() / (self.radius * self.radius);
        if u >= T::one() {
            return T::zero();
        }
        let w = T::one() - u;
        let w2 = w * w;
        w2 * w2
    }

    fn support_center(&self) -> Complex<T> {
        self.center
    }

    fn support_radius(&self) -> T {
        self.radius
    }
}

/// Sum of the test function over all zeros of one sample.
pub fn linear_statistic<T: Scalar>(zeros: &ZeroSet<T>, psi: &dyn TestFunction<T>) -> T {
    zeros
        .zeros
        .iter()
        .fold(T::zero(), |acc, &z| acc + psi.evaluate(z))
}

/// Outcome of a central-limit experiment on the plane-Gaussian model.
#[derive(Debug, Clone)]
pub struct CLTReport<T> {
    pub degree: usize,
    pub trials: usize,
    /// Raw statistic mean over trials.
    pub mean: T,
    /// Unbiased raw sample variance.
    pub variance: T,
    /// `(x − mean)/sd` per trial; empty when the sample is degenerate.
    pub normalized: Vec<T>,
    /// Kolmogorov–Smirnov distance of the normalized sample to N(0,1);
    /// absent when the sample variance is zero.
    pub ks: Option<T>,
    /// Set when every trial produced the same statistic.
    pub degenerate: bool,
}

/// Minimum trial count for a meaningful empirical distribution.
pub const MIN_CLT_TRIALS: usize = 100;

/// Runs `trials` independent samples of the plane-Gaussian model with
/// complex Gaussian coefficients at degree `p`, evaluates the linear
/// statistic of `psi` on each zero set, and self-normalizes by the
/// sample mean and standard deviation. The test function's support must
/// lie strictly inside the bulk disk of radius `bulk_radius` (the unit
/// disk for the plane-Gaussian weight).
pub fn clt_experiment<T: Scalar>(
    psi: &dyn TestFunction<T>,
    p: usize,
    trials: usize,
    bulk_radius: T,
    root_seed: u64,
) -> Result<CLTReport<T>> {
    if trials < MIN_CLT_TRIALS {
        return Err(Error::InsufficientSample {
            need: MIN_CLT_TRIALS,
            got: trials,
        });
    }
    let reach = psi.support_center().norm() + psi.support_radius();
    if !(reach < bulk_radius) {
        return Err(Error::Domain(format!(
            "test-function support reaches {} but must stay strictly inside \
             the bulk disk of radius {}",
            reach.to_f64(),
            bulk_radius.to_f64()
        )));
    }
    let space = WeightedSpace::new(SpaceKind::PlaneGaussian, p)?;
    let basis = OrthonormalBasis::<T>::closed_form(space)?;
    let ensemble = CoefficientEnsemble::ComplexGaussian;
    let stats: Result<Vec<T>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(substream(root_seed, trial as u64));
            let poly = random_polynomial(&basis, &ensemble, &mut rng)?;
            Ok(linear_statistic(&poly.roots()?, psi))
        })
        .collect();
    let stats = stats?;

    let n = T::from_usize(trials);
    let mean = stats.iter().fold(T::zero(), |a, &v| a + v) / n;
    let variance = stats
        .iter()
        .fold(T::zero(), |a, &v| a + (v - mean) * (v - mean))
        / (n - T::one());
    if variance <= T::zero() {
        return Ok(CLTReport {
            degree: p,
            trials,
            mean,
            variance,
            normalized: Vec::new(),
            ks: None,
            degenerate: true,
        });
    }
    let sd = variance.sqrt();
    let normalized: Vec<T> = stats.iter().map(|&v| (v - mean) / sd).collect();
    let ks = ks_statistic(&normalized)?;
    Ok(CLTReport {
        degree: p,
        trials,
        mean,
        variance,
        normalized,
        ks: Some(ks),
        degenerate: false,
    })
}

/// One-sample Kolmogorov–Smirnov distance of `sample` to the standard
/// normal distribution.
pub fn ks_statistic<T: Scalar>(sample: &[T]) -> Result<T> {
    if sample.is_empty() {
        return Err(Error::Parameter("KS statistic needs a nonempty sample".into()));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite statistic"));
    let n = T::from_usize(sorted.len());
    let mut d = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = normal_cdf(x);
        let hi = T::from_usize(i + 1) / n - cdf;
        let lo = cdf - T::from_usize(i) / n;
        d = d.max(hi).max(lo);
    }
    Ok(d)
}
