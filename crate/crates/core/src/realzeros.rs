//! Expected real-zero counts: the Kac quadrature formula, classical
//! leading-order constants, and the radial-weight limit density.

use crate::error::{Error, Result};
use crate::quadrature::adaptive;
use crate::scalar::Scalar;

/// The three coefficient sums entering the Kac density at degree `p`:
/// `A(x) = Σ x^{2j}`, `B(x) = Σ j x^{2j-1}`, `C(x) = Σ j² x^{2j-2}`,
/// all summed over `j = 0..=p`.
#[derive(Debug, Clone, Copy)]
pub struct KacIntegrand {
    degree: usize,
}

impl KacIntegrand {
    pub fn new(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Parameter(
                "Kac integrand needs degree at least 1".into(),
            ));
        }
        Ok(KacIntegrand { degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `(A, B, C)` at `x`, accumulated in one pass with running powers.
    pub fn sums<T: Scalar>(&self, x: T) -> (T, T, T) {
        let x2 = x * x;
        let mut a = T::one();
        let mut b = T::zero();
        let mut c = T::zero();
        // Running powers x^{2j}, x^{2j-1}, x^{2j-2} from j = 1.
        let mut pa = x2;
        let mut pb = x;
        let mut pc = T::one();
        for j in 1..=self.degree {
            let jf = T::from_usize(j);
            a += pa;
            b += jf * pb;
            c += jf * jf * pc;
            pa *= x2;
            pb *= x2;
            pc *= x2;
        }
        (a, b, c)
    }

    /// The raw discriminant `A(x)C(x) − B(x)²`, nonnegative on `[0, 1)`
    /// up to rounding.
    pub fn discriminant<T: Scalar>(&self, x: T) -> T {
        let (a, b, c) = self.sums(x);
        a * c - b * b
    }

    /// The density `√(AC − B²) / A` (without the `4/π` prefactor), with
    /// the discriminant clamped to zero against rounding below the axis.
    pub fn density<T: Scalar>(&self, x: T) -> T {
        let (a, b, c) = self.sums(x);
        (a * c - b * b).max(T::zero()).sqrt() / a
    }
}

/// Upper limit of the `x = 1 − e^{−t}` substitution: beyond `t = 40` the
/// remaining interval has length below 5e-18 and the density is bounded
/// by `p`, so the truncated tail is far under the quadrature target.
const KAC_SUBSTITUTION_CUTOFF: f64 = 40.0;

/// Expected number of real zeros of a degree-`p` polynomial with i.i.d.
/// real Gaussian coefficients: `(4/π) ∫₀¹ √(AC − B²)/A dx`, evaluated
/// through the substitution `x = 1 − e^{−t}` because the integrand's mass
/// concentrates at `x = 1` for large `p`. Absolute error below 1e-8.
pub fn kac_expected<T: Scalar>(p: usize) -> Result<T> {
    let integrand = KacIntegrand::new(p)?;
    let cutoff = T::from_f64(KAC_SUBSTITUTION_CUTOFF);
    let f = move |t: T| {
        let et = (-t).exp();
        integrand.density(T::one() - et) * et
    };
    let q = adaptive(f, T::zero(), cutoff, T::from_f64(1e-9))?;
    Ok(T::from_f64(4.0) / T::PI() * q.value)
}

/// Families with known leading-order real-zero asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealZeroModel {
    /// i.i.d. Gaussian monomial coefficients; expectation from
    /// [`kac_expected`], growing like `(2/π) log p`.
    Kac,
    /// Binomial-weighted Gaussian model, `√p` expected real zeros.
    Elliptic,
    /// `1/√(j!)`-weighted Gaussian model, `(2/π)√p` expected real zeros.
    Weyl,
    /// Legendre-basis Gaussian model, `p/√3` expected real zeros.
    Legendre,
    /// General radial `C²` weight, limit from [`radial_weight_limit`].
    RadialWeight,
}

/// An expected real-zero count attached to its model and degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealZeroEstimate<T> {
    pub model: RealZeroModel,
    pub expected: T,
    pub degree: usize,
}

/// Leading-order expected real-zero count for the classical families.
pub fn classical_constant<T: Scalar>(
    model: RealZeroModel,
    p: usize,
) -> Result<RealZeroEstimate<T>> {
    if p == 0 {
        return Err(Error::Parameter("degree must be at least 1".into()));
    }
    let pf = T::from_usize(p);
    let expected = match model {
        RealZeroModel::Elliptic => pf.sqrt(),
        RealZeroModel::Weyl => T::from_f64(2.0) / T::PI() * pf.sqrt(),
        RealZeroModel::Legendre => pf / T::from_f64(3.0).sqrt(),
        RealZeroModel::Kac | RealZeroModel::RadialWeight => {
            return Err(Error::Domain(format!(
                "{model:?} has no closed-form leading constant; use the \
                 quadrature entry points"
            )));
        }
    };
    Ok(RealZeroEstimate {
        model,
        expected,
        degree: p,
    })
}

/// Limit of `E[real zeros]/√p` for a radial `C²` weight: the integral
/// `(1/π) ∫ √(Δφ(x)/2) dx` of the real-axis density over the supplied
/// support interval. The caller provides the Laplacian `Δφ` and the
/// interval `S_φ ∩ ℝ`; the known plane-Gaussian case ships as
/// [`gaussian_plane_weight_limit`].
pub fn radial_weight_limit<T: Scalar, F: Fn(T) -> T>(
    laplacian: F,
    interval: Option<(T, T)>,
) -> Result<T> {
    let (a, b) = interval.ok_or_else(|| {
        Error::Contract(
            "the support interval of the weight on the real axis must be supplied".into(),
        )
    })?;
    if !(a <= b) {
        return Err(Error::Parameter(format!(
            "support interval is reversed: [{}, {}]",
            a.to_f64(),
            b.to_f64()
        )));
    }
    if a == b {
        return Ok(T::zero());
    }
    let half = T::from_f64(0.5);
    let f = move |x: T| (laplacian(x) * half).sqrt();
    let q = adaptive(f, a, b, T::from_f64(1e-10))?;
    let value = q.value / T::PI();
    if !value.is_finite() {
        return Err(Error::Numeric(
            "radial-weight density is not integrable on the supplied interval \
             (negative Laplacian?)"
                .into(),
        ));
    }
    Ok(value)
}

/// The shipped radial case `φ = |z|²/2` with support `[−1, 1]` on the
/// real axis: `Δφ = 2`, so the limit is `2/π` exactly.
pub fn gaussian_plane_weight_limit<T: Scalar>() -> Result<T> {
    let two = T::from_f64(2.0);
    radial_weight_limit(move |_| two, Some((-T::one(), T::one())))
}
