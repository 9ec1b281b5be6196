//! Explicit bounds for logarithmic moments of coefficient laws and
//! Monte Carlo verification of the inequalities behind them.
//!
//! The central quantity is `E |log |⟨a, u⟩||^ν` for a coefficient vector
//! `a` and a complex unit direction `u`. Each supported ensemble comes
//! with a closed bound assembled from one-dimensional quadratures; the
//! estimators here measure the moment directly so the bounds can be
//! checked sample against formula.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ensembles::CoefficientEnsemble;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, adaptive_to_inf};
use crate::rng::{stream_rng, substream};
use crate::scalar::Scalar;
use crate::special::ln_gamma;

/// Projections with modulus below this floor are clamped before the
/// logarithm. The moment integrand is integrable across zero, so the
/// clamp bias is far below Monte Carlo noise; the count is reported.
pub const LOG_CLAMP_FLOOR: f64 = 1e-300;

/// Samples per parallel chunk; each chunk draws from its own substream,
/// so estimates are independent of the thread count.
const MC_CHUNK: usize = 4096;

/// Largest index in the scan for the cosine-power bracket constant.
const WALLIS_SCAN_LIMIT: usize = 10_000;

/// Quadrature tolerance for the bound constants.
const BOUND_QUAD_TOL: f64 = 1e-11;

/// One logarithmic-moment question: ensemble, direction, exponent.
#[derive(Debug, Clone)]
pub struct MomentQuery<T> {
    pub ensemble: CoefficientEnsemble<T>,
    /// Complex unit vector; its length is the dimension `k`.
    pub direction: Vec<Complex<T>>,
    /// Moment exponent `ν ≥ 1`.
    pub exponent: T,
}

impl<T: Scalar> MomentQuery<T> {
    pub fn new(
        ensemble: CoefficientEnsemble<T>,
        direction: Vec<Complex<T>>,
        exponent: T,
    ) -> Result<Self> {
        validate_direction(&direction)?;
        validate_exponent(exponent)?;
        Ok(MomentQuery {
            ensemble,
            direction,
            exponent,
        })
    }

    pub fn dimension(&self) -> usize {
        self.direction.len()
    }
}

fn validate_direction<T: Scalar>(direction: &[Complex<T>]) -> Result<()> {
    if direction.is_empty() {
        return Err(Error::Parameter("direction must have dimension >= 1".into()));
    }
    let norm = direction
        .iter()
        .fold(T::zero(), |acc, u| acc + u.norm_sqr())
        .sqrt();
    if (norm - T::one()).abs() > T::from_f64(1e-12) {
        return Err(Error::Parameter(format!(
            "direction must be a unit vector, |u| = {}",
            norm.to_f64()
        )));
    }
    Ok(())
}

fn validate_exponent<T: Scalar>(nu: T) -> Result<()> {
    if !(nu >= T::one()) || !nu.is_finite() {
        return Err(Error::Parameter(format!(
            "moment exponent nu must satisfy nu >= 1, got {}",
            nu.to_f64()
        )));
    }
    Ok(())
}

/// Monte Carlo estimate of a logarithmic moment.
#[derive(Debug, Clone, Copy)]
pub struct MomentEstimate<T> {
    pub mean: T,
    /// Standard error of the mean (zero when fewer than two samples
    /// were kept).
    pub se: T,
    /// Samples that entered the mean.
    pub kept: usize,
    /// Samples with projection exactly zero, dropped from the mean.
    pub discarded: usize,
    /// Samples clamped at the modulus floor before the logarithm.
    pub clamped: usize,
}

/// A bound value together with the named constants it was built from.
#[derive(Debug, Clone)]
pub struct MomentBound<T> {
    pub name: &'static str,
    pub value: T,
    pub parts: Vec<(&'static str, T)>,
}

impl<T: Scalar> MomentBound<T> {
    fn assemble(name: &'static str, value: T, parts: Vec<(&'static str, T)>) -> Result<Self> {
        for &(part, v) in &parts {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::Numeric(format!(
                    "bound constituent {part} = {} must be finite and nonnegative",
                    v.to_f64()
                )));
            }
        }
        if !value.is_finite() || value < T::zero() {
            return Err(Error::Numeric(format!(
                "bound value {} must be finite and nonnegative",
                value.to_f64()
            )));
        }
        Ok(MomentBound { name, value, parts })
    }

    /// Looks up a constituent by name.
    pub fn part(&self, name: &str) -> Option<T> {
        self.parts.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}

/// One verified inequality: `lhs ≤ rhs + slack`.
#[derive(Debug, Clone, Copy)]
pub struct InequalityCheck<T> {
    pub lhs: T,
    pub rhs: T,
    /// Allowance added to the right side (Monte Carlo error or a fixed
    /// deterministic tolerance).
    pub slack: T,
    pub holds: bool,
}

impl<T: Scalar> InequalityCheck<T> {
    fn new(lhs: T, rhs: T, slack: T) -> Self {
        InequalityCheck {
            lhs,
            rhs,
            slack,
            holds: lhs <= rhs + slack,
        }
    }
}

/// Running sums for one Monte Carlo cell.
#[derive(Debug, Clone)]
struct Cell<T> {
    sum: T,
    sum_sq: T,
    kept: usize,
    discarded: usize,
    clamped: usize,
}

impl<T: Scalar> Cell<T> {
    fn new() -> Self {
        Cell {
            sum: T::zero(),
            sum_sq: T::zero(),
            kept: 0,
            discarded: 0,
            clamped: 0,
        }
    }

    fn push(&mut self, value: T, clamped: bool) {
        self.sum += value;
        self.sum_sq += value * value;
        self.kept += 1;
        self.clamped += clamped as usize;
    }

    fn merge(&mut self, other: &Cell<T>) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.kept += other.kept;
        self.discarded += other.discarded;
        self.clamped += other.clamped;
    }

    fn estimate(&self) -> Result<MomentEstimate<T>> {
        if self.kept == 0 {
            return Err(Error::Numeric(
                "every Monte Carlo sample was discarded".into(),
            ));
        }
        let n = T::from_usize(self.kept);
        let mean = self.sum / n;
        let se = if self.kept > 1 {
            let var = ((self.sum_sq - n * mean * mean) / (n - T::one())).max(T::zero());
            (var / n).sqrt()
        } else {
            T::zero()
        };
        Ok(MomentEstimate {
            mean,
            se,
            kept: self.kept,
            discarded: self.discarded,
            clamped: self.clamped,
        })
    }
}

/// Runs `trials` samples through `fill` in fixed-size chunks, one RNG
/// substream per chunk, and merges the cells in chunk order. The result
/// does not depend on how rayon schedules the chunks.
fn chunked_cells<T, F>(trials: usize, cells: usize, seed: u64, fill: F) -> Result<Vec<Cell<T>>>
where
    T: Scalar,
    F: Fn(&mut ChaCha8Rng, &mut [Cell<T>]) -> Result<()> + Sync,
{
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let chunk_count = trials.div_ceil(MC_CHUNK);
    let per_chunk: Result<Vec<Vec<Cell<T>>>> = (0..chunk_count)
        .into_par_iter()
        .map(|ci| {
            let mut rng = stream_rng(substream(seed, ci as u64));
            let n = MC_CHUNK.min(trials - ci * MC_CHUNK);
            let mut local = vec![Cell::new(); cells];
            for _ in 0..n {
                fill(&mut rng, &mut local)?;
            }
            Ok(local)
        })
        .collect();
    let per_chunk = per_chunk?;
    let mut merged = vec![Cell::new(); cells];
    for chunk in &per_chunk {
        for (m, c) in merged.iter_mut().zip(chunk) {
            m.merge(c);
        }
    }
    Ok(merged)
}

/// Monte Carlo moments for several directions and exponents sharing one
/// sample stream; the result is indexed `[direction][exponent]`. Sharing
/// samples makes a 20-direction sweep cost one direction's sampling.
pub fn log_moment_sweep<T: Scalar>(
    ensemble: &CoefficientEnsemble<T>,
    directions: &[Vec<Complex<T>>],
    exponents: &[T],
    trials: usize,
    seed: u64,
) -> Result<Vec<Vec<MomentEstimate<T>>>> {
    if directions.is_empty() || exponents.is_empty() {
        return Err(Error::Parameter(
            "need at least one direction and one exponent".into(),
        ));
    }
    let k = directions[0].len();
    for direction in directions {
        if direction.len() != k {
            return Err(Error::Parameter(
                "all directions must share one dimension".into(),
            ));
        }
        validate_direction(direction)?;
    }
    for &nu in exponents {
        validate_exponent(nu)?;
    }
    let floor = T::from_f64(LOG_CLAMP_FLOOR);
    let ncells = directions.len() * exponents.len();
    let cells = chunked_cells(trials, ncells, seed, |rng, local| {
        let a = ensemble.sample(k, rng)?;
        for (di, direction) in directions.iter().enumerate() {
            let mut dot = Complex::new(T::zero(), T::zero());
            for (aj, uj) in a.iter().zip(direction) {
                dot = dot + *aj * *uj;
            }
            let modulus = dot.norm();
            let row = di * exponents.len();
            if modulus == T::zero() {
                for cell in &mut local[row..row + exponents.len()] {
                    cell.discarded += 1;
                }
                continue;
            }
            let clamped = modulus < floor;
            let log_abs = if clamped { floor.ln().abs() } else { modulus.ln().abs() };
            for (ei, &nu) in exponents.iter().enumerate() {
                local[row + ei].push(log_abs.powf(nu), clamped);
            }
        }
        Ok(())
    })?;
    cells
        .chunks(exponents.len())
        .map(|row| row.iter().map(Cell::estimate).collect())
        .collect()
}

/// Monte Carlo mean and standard error of `|log |⟨a, u⟩||^ν`.
pub fn log_moment_mc<T: Scalar>(
    query: &MomentQuery<T>,
    trials: usize,
    seed: u64,
) -> Result<MomentEstimate<T>> {
    let sweep = log_moment_sweep(
        &query.ensemble,
        std::slice::from_ref(&query.direction),
        &[query.exponent],
        trials,
        seed,
    )?;
    Ok(sweep[0][0])
}

/// Monte Carlo mean of the tail term: `|log(|a₁| w)|^ν` over the event
/// `|a₁| w > 1/√2`, zero elsewhere. `w` is a nonnegative scale.
fn tail_moment_mc<T: Scalar>(
    ensemble: &CoefficientEnsemble<T>,
    k: usize,
    scale: T,
    nu: T,
    trials: usize,
    seed: u64,
) -> Result<MomentEstimate<T>> {
    let threshold = T::from_f64(std::f64::consts::FRAC_1_SQRT_2);
    let cells = chunked_cells(trials, 1, seed, |rng, local| {
        let a = ensemble.sample(k, rng)?;
        let x = a[0].norm() * scale;
        let value = if x > threshold {
            x.ln().abs().powf(nu)
        } else {
            T::zero()
        };
        local[0].push(value, false);
        Ok(())
    })?;
    cells[0].estimate()
}

/// Uniformly random real unit direction in ℝ^k ⊂ ℂ^k.
pub fn random_real_direction<T: Scalar, R: Rng + ?Sized>(
    k: usize,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    if k == 0 {
        return Err(Error::Parameter("direction dimension must be >= 1".into()));
    }
    loop {
        let draws: Vec<T> = (0..k).map(|_| T::standard_normal(rng)).collect();
        let norm = draws.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt();
        if norm > T::zero() {
            return Ok(draws
                .into_iter()
                .map(|v| Complex::new(v / norm, T::zero()))
                .collect());
        }
    }
}

/// Uniformly random complex unit direction in ℂ^k.
pub fn random_complex_direction<T: Scalar, R: Rng + ?Sized>(
    k: usize,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    if k == 0 {
        return Err(Error::Parameter("direction dimension must be >= 1".into()));
    }
    loop {
        let draws: Vec<Complex<T>> = (0..k)
            .map(|_| Complex::new(T::standard_normal(rng), T::standard_normal(rng)))
            .collect();
        let norm = draws
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr())
            .sqrt();
        if norm > T::zero() {
            return Ok(draws.into_iter().map(|v| v / norm).collect());
        }
    }
}

/// `∫₀^∞ |log x|^ν w(x) dx`, split at the kink `x = 1`. The lower piece
/// runs through `x = e^{-t}` so the quadrature never meets the endpoint
/// singularity of the logarithm.
fn abs_log_integral<T: Scalar, W: Fn(T) -> T + Copy>(nu: T, w: W) -> Result<T> {
    let tol = T::from_f64(BOUND_QUAD_TOL);
    let lower = adaptive_to_inf(
        |t: T| t.powf(nu) * (-t).exp() * w((-t).exp()),
        T::zero(),
        tol,
    )?
    .value;
    let upper = adaptive_to_inf(|x: T| x.ln().powf(nu) * w(x), T::one(), tol)?.value;
    Ok(lower + upper)
}

/// Moment bound for the real Gaussian law with density `π^{-k/2}e^{-|a|²}`:
/// `2^{2ν} ∫₀^∞ |log x|^ν e^{-x²} dx + 2^ν`, independent of the dimension.
pub fn bound_real_gaussian<T: Scalar>(nu: T) -> Result<MomentBound<T>> {
    validate_exponent(nu)?;
    let two = T::from_f64(2.0);
    let q = abs_log_integral(nu, |x: T| (-(x * x)).exp())?;
    let value = two.powf(two * nu) * q + two.powf(nu);
    MomentBound::assemble("real_gaussian", value, vec![("log_integral", q)])
}

/// Moment bound for the rotation-invariant law with density proportional
/// to `(1+|a|²)^{-k/2-α}`, assembled from the two marginal quadratures;
/// independent of the dimension.
pub fn bound_radial<T: Scalar>(alpha: T, nu: T) -> Result<MomentBound<T>> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::Parameter(format!(
            "radial exponent alpha must be positive and finite, got {}",
            alpha.to_f64()
        )));
    }
    validate_exponent(nu)?;
    let two = T::from_f64(2.0);
    let half = T::from_f64(0.5);
    let tol = T::from_f64(BOUND_QUAD_TOL);
    // Marginal density prefactor 2Γ(α+1/2)/(√π Γ(α)).
    let prefactor = two * (ln_gamma(alpha + half) - ln_gamma(alpha)).exp() / T::PI().sqrt();
    let c_full = prefactor
        * abs_log_integral(nu, |y: T| (T::one() + y * y).powf(-(alpha + half)))?;
    let tail_exponent = -(two * alpha + T::one());
    let c_tail = prefactor
        * (adaptive(
            |x: T| x.ln().abs().powf(nu) * x.powf(tail_exponent),
            T::from_f64(std::f64::consts::FRAC_1_SQRT_2),
            T::one(),
            tol,
        )?
        .value
            + adaptive_to_inf(
                |x: T| x.ln().powf(nu) * x.powf(tail_exponent),
                T::one(),
                tol,
            )?
            .value);
    let value = two.powf(two * nu - T::one()) * c_full
        + two.powf(nu - T::one()) * c_tail
        + two.powf(nu);
    MomentBound::assemble(
        "radial",
        value,
        vec![
            ("marginal_prefactor", prefactor),
            ("full_log_integral", c_full),
            ("tail_log_integral", c_tail),
        ],
    )
}

/// Smallest value of `√j ∫₀^{π/2} cos^j t dt` over `1 ≤ j ≤ 10⁴`. The
/// cosine-power integrals obey `C_j = C_{j-2}(j-1)/j` exactly, so the
/// scan is exact up to rounding; the minimum sits at `j = 1` where
/// `C_1 = 1`.
fn cosine_power_floor<T: Scalar>() -> T {
    let mut even = T::FRAC_PI_2();
    let mut odd = T::one();
    let mut best = odd;
    for j in 2..=WALLIS_SCAN_LIMIT {
        let jf = T::from_usize(j);
        let c = if j % 2 == 0 {
            even = even * (jf - T::one()) / jf;
            even
        } else {
            odd = odd * (jf - T::one()) / jf;
            odd
        };
        best = best.min(c * jf.sqrt());
    }
    best
}

/// Moment bound for the uniform law on the unit sphere of ℝ^k:
/// `2^{ν-1} A^{-1} (3 (log k)^ν + 2^{ν+1} ν^ν e^{-ν}) + 1`, where `A`
/// floors `C_j √j` over the cosine-power integrals. Requires `k ≥ 3`;
/// at `k = 2` the moment is exactly `log 2` for `ν = 1` and the formula
/// does not apply.
pub fn bound_sphere<T: Scalar>(k: usize, nu: T) -> Result<MomentBound<T>> {
    if k < 3 {
        return Err(Error::Domain(format!(
            "sphere moment bound needs dimension k >= 3, got {k}"
        )));
    }
    validate_exponent(nu)?;
    let two = T::from_f64(2.0);
    let floor = cosine_power_floor::<T>();
    let log_k = T::from_usize(k).ln();
    let coordinate_bound = (T::from_f64(3.0) * log_k.powf(nu)
        + two.powf(nu + T::one()) * nu.powf(nu) * (-nu).exp())
        / floor;
    let value = two.powf(nu - T::one()) * coordinate_bound + T::one();
    MomentBound::assemble(
        "sphere",
        value,
        vec![
            ("cosine_power_floor", floor),
            ("coordinate_moment_bound", coordinate_bound),
        ],
    )
}

/// Moment bound for i.i.d. coordinates whose density is bounded by `M`
/// and whose tail obeys `∫_{|x|>e^R} φ ≤ c R^{-ρ}`:
/// `R₀^ν (1 + 2^ρ ν c k / ((ρ-ν) R₀^ρ)) + 4√2 M ν^ν` at `R₀ = k^{1/ρ}`.
pub fn bound_iid<T: Scalar>(k: usize, nu: T, rho: T, c: T, m: T) -> Result<MomentBound<T>> {
    if k == 0 {
        return Err(Error::Parameter("dimension k must be at least 1".into()));
    }
    validate_exponent(nu)?;
    if !(c > T::zero()) || !(m > T::zero()) || !c.is_finite() || !m.is_finite() {
        return Err(Error::Parameter(
            "tail constant c and density bound M must be positive and finite".into(),
        ));
    }
    if !(nu < rho) {
        return Err(Error::Domain(format!(
            "tail bound needs nu < rho, got nu = {} and rho = {}",
            nu.to_f64(),
            rho.to_f64()
        )));
    }
    let two = T::from_f64(2.0);
    let kf = T::from_usize(k);
    let r0 = kf.powf(T::one() / rho);
    let tail_term =
        r0.powf(nu) * (T::one() + two.powf(rho) * nu * c * kf / ((rho - nu) * r0.powf(rho)));
    let density_term = T::from_f64(4.0 * std::f64::consts::SQRT_2) * m * nu.powf(nu);
    MomentBound::assemble(
        "iid_tail",
        tail_term + density_term,
        vec![
            ("truncation_radius", r0),
            ("tail_term", tail_term),
            ("density_term", density_term),
        ],
    )
}

/// Moment bound for i.i.d. coordinates uniform on `[0, 1]`:
/// `(log k)^ν + 6 ν^ν`.
pub fn bound_uniform_cube<T: Scalar>(k: usize, nu: T) -> Result<MomentBound<T>> {
    if k == 0 {
        return Err(Error::Parameter("dimension k must be at least 1".into()));
    }
    validate_exponent(nu)?;
    let log_power = T::from_usize(k).ln().powf(nu);
    let constant = T::from_f64(6.0) * nu.powf(nu);
    MomentBound::assemble(
        "uniform_cube",
        log_power + constant,
        vec![("log_power", log_power), ("constant", constant)],
    )
}

/// Monte Carlo verdict on the projection-splitting inequality for a
/// rotation-invariant law: writing `u = s + it` with `|s| ≥ |t|` (the
/// roles swap under `u → -iu` otherwise), the complex-projection moment
/// is dominated by first-coordinate terms:
/// `J ≤ 2^{2ν-1} I + 2^{ν-1} K + 2^ν`.
#[derive(Debug, Clone)]
pub struct ProjectionSplitReport<T> {
    /// Estimate of `E |log |⟨a, u⟩||^ν`.
    pub projection: MomentEstimate<T>,
    /// Estimate of `E |log |a₁||^ν`.
    pub coordinate: MomentEstimate<T>,
    /// Estimate of the scaled first-coordinate tail term `K`.
    pub tail: MomentEstimate<T>,
    pub main: InequalityCheck<T>,
    /// Sharper variant `J ≤ 2^{ν-1} I + 1` for laws supported in the
    /// closed unit ball; absent otherwise.
    pub ball: Option<InequalityCheck<T>>,
}

pub fn projection_split_check<T: Scalar>(
    ensemble: &CoefficientEnsemble<T>,
    direction: &[Complex<T>],
    exponent: T,
    trials: usize,
    seed: u64,
) -> Result<ProjectionSplitReport<T>> {
    if !ensemble.is_rotation_invariant() {
        return Err(Error::Domain(
            "the projection-splitting inequality assumes a rotation-invariant law".into(),
        ));
    }
    validate_direction(direction)?;
    validate_exponent(exponent)?;
    let k = direction.len();
    let s_sq = direction
        .iter()
        .fold(T::zero(), |acc, u| acc + u.re * u.re);
    let t_sq = direction
        .iter()
        .fold(T::zero(), |acc, u| acc + u.im * u.im);
    // |⟨a, -iu⟩| = |⟨a, u⟩|, so when |s| < |t| the rotated direction
    // measures the same moment with real and imaginary parts exchanged.
    let (direction, t_norm) = if s_sq >= t_sq {
        (direction.to_vec(), t_sq.sqrt())
    } else {
        (
            direction
                .iter()
                .map(|u| Complex::new(u.im, -u.re))
                .collect(),
            s_sq.sqrt(),
        )
    };
    let mut axis = vec![Complex::new(T::zero(), T::zero()); k];
    axis[0] = Complex::new(T::one(), T::zero());

    let projection = log_moment_sweep(
        ensemble,
        std::slice::from_ref(&direction),
        &[exponent],
        trials,
        substream(seed, 0),
    )?[0][0];
    let coordinate = log_moment_sweep(
        ensemble,
        std::slice::from_ref(&axis),
        &[exponent],
        trials,
        substream(seed, 1),
    )?[0][0];
    let tail = tail_moment_mc(ensemble, k, t_norm, exponent, trials, substream(seed, 2))?;

    let two = T::from_f64(2.0);
    let c_coord = two.powf(two * exponent - T::one());
    let c_tail = two.powf(exponent - T::one());
    let three = T::from_f64(3.0);
    let rhs = c_coord * coordinate.mean + c_tail * tail.mean + two.powf(exponent);
    let slack = three
        * (projection.se * projection.se
            + (c_coord * coordinate.se) * (c_coord * coordinate.se)
            + (c_tail * tail.se) * (c_tail * tail.se))
            .sqrt();
    let main = InequalityCheck::new(projection.mean, rhs, slack);
    let ball = ensemble.is_ball_supported().then(|| {
        let rhs = c_tail * coordinate.mean + T::one();
        let slack = three
            * (projection.se * projection.se
                + (c_tail * coordinate.se) * (c_tail * coordinate.se))
                .sqrt();
        InequalityCheck::new(projection.mean, rhs, slack)
    });
    Ok(ProjectionSplitReport {
        projection,
        coordinate,
        tail,
        main,
        ball,
    })
}

/// Deterministic verdict on the truncation bound for the logarithmic
/// kernel integral: for `ν ≥ 1`, `b ≥ 0`, `0 < τ < 1`,
/// `∫₀¹ (-log x)^ν (1-x²)^b dx ≤ 2^{ν+1}(ν/e)^ν √τ + 2(-log τ)^ν (b+3/2)^{-1/2}`.
pub fn truncated_log_integral_check<T: Scalar>(
    nu: T,
    b: T,
    tau: T,
) -> Result<InequalityCheck<T>> {
    validate_exponent(nu)?;
    if !(b >= T::zero()) || !b.is_finite() {
        return Err(Error::Parameter(format!(
            "kernel power b must be nonnegative and finite, got {}",
            b.to_f64()
        )));
    }
    if !(tau > T::zero()) || !(tau < T::one()) {
        return Err(Error::Parameter(format!(
            "truncation point tau must lie in (0, 1), got {}",
            tau.to_f64()
        )));
    }
    let two = T::from_f64(2.0);
    // Substituting x = e^{-t} gives a smooth integrand on (0, ∞).
    let lhs = adaptive_to_inf(
        |t: T| t.powf(nu) * (-(-(two * t)).exp_m1()).powf(b) * (-t).exp(),
        T::zero(),
        T::from_f64(BOUND_QUAD_TOL),
    )?
    .value;
    let rhs = two.powf(nu + T::one()) * (nu / T::E()).powf(nu) * tau.sqrt()
        + two * (-tau.ln()).powf(nu) / (b + T::from_f64(1.5)).sqrt();
    Ok(InequalityCheck::new(lhs, rhs, T::from_f64(1e-9)))
}
