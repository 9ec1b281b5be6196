//! Weighted polynomial spaces and their orthonormal bases.
//!
//! A [`WeightedSpace`] fixes the inner product `(f, g) = ∫ f ḡ e^{-2pφ} dν`
//! on polynomials of degree at most `p`. Orthonormal bases come either from
//! the Gram matrix of the monomials followed by a scaled Cholesky change of
//! basis, or from closed-form coefficient formulas where the geometry
//! provides them. The basis then powers the Bergman-kernel diagonal and the
//! extremal-function estimator used by the equilibrium comparisons.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_basis, CMat};
use crate::quadrature::{gauss_laguerre, gauss_legendre};
use crate::scalar::Scalar;
use crate::special::ln_gamma;

/// Geometry of the weighted inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// `(f, g) = ∫_Q f ḡ dλ₂` over the square `Q = [-1/2, 1/2]²`, weight 0.
    UnitSquareQ,
    /// `(f, g) = ∫_ℂ f ḡ e^{-p|z|²} dλ₂` (weight `φ = |z|²/2`).
    PlaneGaussian,
    /// `(f, g) = ∫_ℂ f ḡ / (π (1+|z|²)^{p+2}) dλ₂`.
    FubiniStudy,
}

/// Degree cap for the square geometry: the monomial Gram matrix becomes
/// too ill-conditioned for double precision beyond this point.
pub const MAX_SQUARE_DEGREE: usize = 60;

/// A weighted L² space of polynomials of degree at most `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedSpace {
    pub kind: SpaceKind,
    pub degree: usize,
}

impl WeightedSpace {
    pub fn new(kind: SpaceKind, degree: usize) -> Result<Self> {
        if kind == SpaceKind::UnitSquareQ && degree > MAX_SQUARE_DEGREE {
            return Err(Error::Parameter(format!(
                "square-geometry degree {degree} exceeds the double-precision cap {MAX_SQUARE_DEGREE}"
            )));
        }
        Ok(WeightedSpace { kind, degree })
    }

    /// Dimension of the polynomial space, `p + 1`.
    pub fn dimension(&self) -> usize {
        self.degree + 1
    }

    /// The weight function `φ` of the space.
    pub fn weight_phi<T: Scalar>(&self, z: Complex<T>) -> T {
        match self.kind {
            SpaceKind::UnitSquareQ => T::zero(),
            SpaceKind::PlaneGaussian => z.norm_sqr() * T::from_f64(0.5),
            SpaceKind::FubiniStudy => (T::one() + z.norm_sqr()).ln() * T::from_f64(0.5),
        }
    }

    /// Gram matrix `S` of the monomials, `s_{lj} = ⟨z^l, z^j⟩`.
    ///
    /// Square: tensor Gauss-Legendre with `degree + 4` nodes per axis
    /// (exact for the degree-2p integrand). Plane Gaussian: the angular
    /// integral factors out exactly; the radial part uses Gauss-Laguerre
    /// in `u = p r²`. Fubini-Study: exact Beta-integral closed form.
    pub fn gram_matrix<T: Scalar>(&self) -> Result<CMat<T>> {
        self.gram_matrix_with_nodes(self.degree + 4)
    }

    /// Gram matrix with an explicit per-axis (or radial) node count, used
    /// by the independent re-quadrature checks.
    pub fn gram_matrix_with_nodes<T: Scalar>(&self, nodes: usize) -> Result<CMat<T>> {
        let p = self.degree;
        let dim = p + 1;
        let mut s = CMat::<T>::zeros(dim);
        match self.kind {
            SpaceKind::UnitSquareQ => {
                let rule = gauss_legendre::<T>(nodes);
                let half = T::from_f64(0.5);
                let mut z_pow = vec![Complex::new(T::zero(), T::zero()); dim];
                for (ix, &nx) in rule.nodes.iter().enumerate() {
                    let x = nx * half;
                    let wx = rule.weights[ix] * half;
                    for (iy, &ny) in rule.nodes.iter().enumerate() {
                        let y = ny * half;
                        let w = wx * rule.weights[iy] * half;
                        let z = Complex::new(x, y);
                        z_pow[0] = Complex::new(T::one(), T::zero());
                        for l in 1..dim {
                            z_pow[l] = z_pow[l - 1] * z;
                        }
                        for l in 0..dim {
                            let zl_w = z_pow[l] * Complex::new(w, T::zero());
                            for j in 0..dim {
                                let v = zl_w * z_pow[j].conj();
                                s[(l, j)] += v;
                            }
                        }
                    }
                }
            }
            SpaceKind::PlaneGaussian => {
                // s_{lj} = ∫ e^{i(l-j)θ} dθ · ∫ r^{l+j} e^{-p r²} r dr
                // vanishes exactly off the diagonal; on it, with u = p r²,
                // s_{jj} = (π / p^{j+1}) ∫ u^j e^{-u} du.
                let rule = gauss_laguerre::<T>(nodes)?;
                let pf = T::from_usize(p.max(1));
                for j in 0..dim {
                    let mut radial = T::zero();
                    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                        radial += w * u.powi(j as i32);
                    }
                    let v = T::PI() * radial / pf.powi(j as i32 + 1);
                    if !v.is_finite() {
                        return Err(Error::Numeric(format!(
                            "non-finite Gram entry at index {j} (degree too large for direct quadrature)"
                        )));
                    }
                    s[(j, j)] = Complex::new(v, T::zero());
                }
            }
            SpaceKind::FubiniStudy => {
                // s_{jj} = j! (p-j)! / (p+1)! via the Beta integral; exact
                // off-diagonal zeros by rotation invariance.
                for j in 0..dim {
                    let ln_v = ln_gamma(T::from_usize(j + 1))
                        + ln_gamma(T::from_usize(p - j + 1))
                        - ln_gamma(T::from_usize(p + 2));
                    s[(j, j)] = Complex::new(ln_v.exp(), T::zero());
                }
            }
        }
        Ok(s)
    }
}

/// How the basis is represented over the monomials.
#[derive(Debug, Clone)]
enum BasisRep<T> {
    /// Upper-triangular change of basis `P_j = Σ_l r_{lj} z^l`.
    Triangular(CMat<T>),
    /// `P_j = c_j z^j` with `ln c_j` stored (closed-form geometries; the
    /// log form survives degrees where `c_j` itself would overflow).
    DiagonalLog(Vec<T>),
    /// The raw monomials (Kac-model experiments).
    Monomial,
}

/// An evaluable orthonormal basis `P_0, …, P_p`.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis<T> {
    space: Option<WeightedSpace>,
    degree: usize,
    rep: BasisRep<T>,
    /// 1-norm condition estimate of the correlation-scaled Gram matrix,
    /// when the basis came from a numerical factorization.
    pub scaled_condition: Option<T>,
}

impl<T: Scalar> OrthonormalBasis<T> {
    /// Builds the basis from a precomputed Gram matrix by scaled Cholesky,
    /// with one refinement pass if the whitening residual warrants it.
    pub fn from_gram(space: WeightedSpace, gram: &CMat<T>) -> Result<Self> {
        if gram.dim() != space.dimension() {
            return Err(Error::Contract(format!(
                "Gram dimension {} does not match space dimension {}",
                gram.dim(),
                space.dimension()
            )));
        }
        let factor = cholesky_basis(gram)?;
        let mut r = factor.r;
        // Newton-style polish: factor the small Hermitian residual
        // E = R^* S R - I and fold its whitening into R. This keeps R
        // upper triangular with positive diagonal and squares the
        // residual, which matters for the ill-conditioned square Gram.
        // The residual is evaluated with compensated products; the plain
        // product's rounding noise sits above the converged residual.
        for _ in 0..2 {
            let product = r.adjoint().mul_accurate(&gram.mul_accurate(&r));
            if product.max_deviation_from_identity() <= T::from_f64(1e-12) {
                break;
            }
            let correction = cholesky_basis(&product)?;
            r = r.mul(&correction.r);
        }
        Ok(OrthonormalBasis {
            space: Some(space),
            degree: space.degree,
            rep: BasisRep::Triangular(r),
            scaled_condition: Some(factor.scaled_condition),
        })
    }

    /// Gram + Cholesky in one step.
    pub fn cholesky(space: WeightedSpace) -> Result<Self> {
        let gram = space.gram_matrix()?;
        Self::from_gram(space, &gram)
    }

    /// Closed-form coefficients: `√(p^{j+1} / (π j!)) z^j` for the plane
    /// Gaussian geometry, `√((p+1) C(p, j)) z^j` for Fubini-Study.
    pub fn closed_form(space: WeightedSpace) -> Result<Self> {
        let p = space.degree;
        let ln_coeffs: Vec<T> = match space.kind {
            SpaceKind::PlaneGaussian => {
                let ln_p = T::from_usize(p.max(1)).ln();
                (0..=p)
                    .map(|j| {
                        (T::from_usize(j + 1) * ln_p
                            - T::PI().ln()
                            - ln_gamma(T::from_usize(j + 1)))
                            * T::from_f64(0.5)
                    })
                    .collect()
            }
            SpaceKind::FubiniStudy => {
                let ln_dim = T::from_usize(p + 1).ln();
                (0..=p)
                    .map(|j| {
                        let ln_binom = ln_gamma(T::from_usize(p + 1))
                            - ln_gamma(T::from_usize(j + 1))
                            - ln_gamma(T::from_usize(p - j + 1));
                        (ln_dim + ln_binom) * T::from_f64(0.5)
                    })
                    .collect()
            }
            SpaceKind::UnitSquareQ => {
                return Err(Error::Domain(
                    "the square geometry has no closed-form orthonormal basis".into(),
                ))
            }
        };
        Ok(OrthonormalBasis {
            space: Some(space),
            degree: p,
            rep: BasisRep::DiagonalLog(ln_coeffs),
            scaled_condition: None,
        })
    }

    /// The raw monomial basis `1, z, …, z^p` (identity change of basis).
    pub fn monomial(degree: usize) -> Self {
        OrthonormalBasis {
            space: None,
            degree,
            rep: BasisRep::Monomial,
            scaled_condition: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis elements, `p + 1`.
    pub fn dimension(&self) -> usize {
        self.degree + 1
    }

    pub fn space(&self) -> Option<WeightedSpace> {
        self.space
    }

    /// The triangular change-of-basis matrix, when the representation has
    /// one (used by the CSV export).
    pub fn triangular_matrix(&self) -> Option<&CMat<T>> {
        match &self.rep {
            BasisRep::Triangular(r) => Some(r),
            _ => None,
        }
    }

    /// Log-coefficients of a diagonal (closed-form) representation.
    pub fn diagonal_log_coefficients(&self) -> Option<&[T]> {
        match &self.rep {
            BasisRep::DiagonalLog(c) => Some(c),
            _ => None,
        }
    }

    /// Values `(P_0(z), …, P_p(z))`.
    ///
    /// For closed-form bases at very large degree the coefficients can
    /// overflow; use [`Self::log_abs_values`] for quantities that only
    /// need magnitudes.
    pub fn evaluate(&self, z: Complex<T>) -> Vec<Complex<T>> {
        let dim = self.dimension();
        let mut powers = Vec::with_capacity(dim);
        let mut acc = Complex::new(T::one(), T::zero());
        for _ in 0..dim {
            powers.push(acc);
            acc *= z;
        }
        match &self.rep {
            BasisRep::Monomial => powers,
            BasisRep::DiagonalLog(ln_c) => powers
                .iter()
                .zip(ln_c)
                .map(|(&zp, &lc)| zp * Complex::new(lc.exp(), T::zero()))
                .collect(),
            BasisRep::Triangular(r) => (0..dim)
                .map(|j| {
                    let mut v = Complex::new(T::zero(), T::zero());
                    for l in 0..=j {
                        v += r[(l, j)] * powers[l];
                    }
                    v
                })
                .collect(),
        }
    }

    /// `ln |P_j(z)|` for every j, with `-∞` for exact zeros. Stable for
    /// large `|z|` (falls back to a reversed Horner in `1/z`) and for
    /// closed-form coefficients too large to exponentiate.
    pub fn log_abs_values(&self, z: Complex<T>) -> Vec<T> {
        let dim = self.dimension();
        let r = z.norm();
        let ln_r = r.ln();
        match &self.rep {
            BasisRep::Monomial => (0..dim)
                .map(|j| {
                    if j == 0 {
                        T::zero()
                    } else if r == T::zero() {
                        T::neg_infinity()
                    } else {
                        T::from_usize(j) * ln_r
                    }
                })
                .collect(),
            BasisRep::DiagonalLog(ln_c) => ln_c
                .iter()
                .enumerate()
                .map(|(j, &lc)| {
                    if j == 0 {
                        lc
                    } else if r == T::zero() {
                        T::neg_infinity()
                    } else {
                        lc + T::from_usize(j) * ln_r
                    }
                })
                .collect(),
            BasisRep::Triangular(mat) => {
                if r <= T::from_f64(2.0) {
                    let mut powers = Vec::with_capacity(dim);
                    let mut acc = Complex::new(T::one(), T::zero());
                    for _ in 0..dim {
                        powers.push(acc);
                        acc *= z;
                    }
                    (0..dim)
                        .map(|j| {
                            let mut v = Complex::new(T::zero(), T::zero());
                            for l in 0..=j {
                                v += mat[(l, j)] * powers[l];
                            }
                            v.norm().ln()
                        })
                        .collect()
                } else {
                    // P_j(z) = z^j · (r_{jj} + r_{j-1,j}/z + … + r_{0j}/z^j):
                    // Horner in w = 1/z, highest power first (l ascending).
                    let w = Complex::new(T::one(), T::zero()) / z;
                    (0..dim)
                        .map(|j| {
                            let mut v = Complex::new(T::zero(), T::zero());
                            for l in 0..=j {
                                v = v * w + mat[(l, j)];
                            }
                            T::from_usize(j) * ln_r + v.norm().ln()
                        })
                        .collect()
                }
            }
        }
    }

    /// `ln Σ_j |P_j(z)|²`, always finite (log-sum-exp).
    pub fn log_bergman_diag(&self, z: Complex<T>) -> T {
        let logs = self.log_abs_values(z);
        let mut m = T::neg_infinity();
        for &l in &logs {
            if l.is_finite() {
                m = m.max(l + l);
            }
        }
        if !m.is_finite() {
            return T::neg_infinity();
        }
        let mut sum = T::zero();
        for &l in &logs {
            if l.is_finite() {
                sum += (l + l - m).exp();
            }
        }
        m + sum.ln()
    }

    /// `Σ_j |P_j(z)|²`; errors rather than silently returning a
    /// non-finite value when the sum overflows the scalar type.
    pub fn bergman_diag(&self, z: Complex<T>) -> Result<T> {
        let v = self.log_bergman_diag(z).exp();
        if !v.is_finite() {
            return Err(Error::Numeric(
                "Bergman diagonal overflows; use log_bergman_diag".into(),
            ));
        }
        Ok(v)
    }

    /// Extremal-function estimator
    /// `(1/2p) log(Σ_j |P_j(z)|² e^{-2pφ(z)}) + φ(z)`,
    /// which reduces to `(1/2p) log Σ_j |P_j(z)|²` for weight zero.
    pub fn extremal_estimate(&self, z: Complex<T>) -> Result<T> {
        if self.degree == 0 {
            return Err(Error::Parameter(
                "extremal estimate needs degree at least 1".into(),
            ));
        }
        let phi = match self.space {
            Some(space) => space.weight_phi(z),
            None => T::zero(),
        };
        let two_p = T::from_usize(2 * self.degree);
        Ok((self.log_bergman_diag(z) - two_p * phi) / two_p + phi)
    }

    /// Maps ensemble coefficients to monomial coefficients. Returns the
    /// coefficient vector together with a common `log_scale`: the true
    /// polynomial is `e^{log_scale} · Σ c_l z^l` (the scale never affects
    /// zeros and keeps huge closed-form coefficients representable).
    pub fn coefficients_to_monomial(
        &self,
        a: &[Complex<T>],
    ) -> Result<(Vec<Complex<T>>, T)> {
        if a.len() != self.dimension() {
            return Err(Error::Contract(format!(
                "coefficient vector length {} does not match basis dimension {}",
                a.len(),
                self.dimension()
            )));
        }
        match &self.rep {
            BasisRep::Monomial => Ok((a.to_vec(), T::zero())),
            BasisRep::DiagonalLog(ln_c) => {
                let shift = ln_c
                    .iter()
                    .fold(T::neg_infinity(), |acc, &v| acc.max(v))
                    .max(T::zero());
                let coeffs = a
                    .iter()
                    .zip(ln_c)
                    .map(|(&aj, &lc)| aj * Complex::new((lc - shift).exp(), T::zero()))
                    .collect();
                Ok((coeffs, shift))
            }
            BasisRep::Triangular(r) => {
                let dim = self.dimension();
                let mut coeffs = vec![Complex::new(T::zero(), T::zero()); dim];
                for l in 0..dim {
                    let mut v = Complex::new(T::zero(), T::zero());
                    for j in l..dim {
                        v += r[(l, j)] * a[j];
                    }
                    coeffs[l] = v;
                }
                Ok((coeffs, T::zero()))
            }
        }
    }
}

/// Re-computes the Gram matrix of an orthonormal basis by independent
/// quadrature (different node counts from the ones used to build it),
/// returning `G` with `G_{ij} = (P_i, P_j)`. Orthonormality holds when
/// `G` is the identity to the documented tolerance.
pub fn gram_of_basis<T: Scalar>(basis: &OrthonormalBasis<T>) -> Result<CMat<T>> {
    let space = basis.space().ok_or_else(|| {
        Error::Contract("re-quadrature needs a basis attached to a weighted space".into())
    })?;
    let p = space.degree;
    let dim = p + 1;
    let radial_nodes = p + 7;
    let angular_nodes = 2 * p + 3;
    let mut g = CMat::<T>::zeros(dim);
    let mut accumulate = |z: Complex<T>, w: T| {
        let values = basis.evaluate(z);
        for i in 0..dim {
            let vi_w = values[i] * Complex::new(w, T::zero());
            for j in 0..dim {
                let v = vi_w * values[j].conj();
                g[(i, j)] += v;
            }
        }
    };
    match space.kind {
        SpaceKind::UnitSquareQ => {
            let rule = gauss_legendre::<T>(radial_nodes);
            let half = T::from_f64(0.5);
            for (ix, &nx) in rule.nodes.iter().enumerate() {
                for (iy, &ny) in rule.nodes.iter().enumerate() {
                    let z = Complex::new(nx * half, ny * half);
                    let w = rule.weights[ix] * half * rule.weights[iy] * half;
                    accumulate(z, w);
                }
            }
        }
        SpaceKind::PlaneGaussian => {
            // u = p r²: ∫ f e^{-p r²} dλ₂ = Σ_θ Σ_u (2π/mθ)(w_u / 2p) f.
            let rule = gauss_laguerre::<T>(radial_nodes)?;
            let pf = T::from_usize(p.max(1));
            let m_theta = angular_nodes;
            let dtheta = T::from_f64(2.0) * T::PI() / T::from_usize(m_theta);
            for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
                let r = (u / pf).sqrt();
                let w = dtheta * wu / (T::from_f64(2.0) * pf);
                for it in 0..m_theta {
                    let theta = dtheta * T::from_usize(it);
                    let z = Complex::from_polar(r, theta);
                    accumulate(z, w);
                }
            }
        }
        SpaceKind::FubiniStudy => {
            // x = r²/(1+r²): ∫ f / (π(1+r²)^{p+2}) dλ₂
            //   = Σ_θ Σ_x (1/mθ) w_x (1-x)^p f.
            let rule = gauss_legendre::<T>(radial_nodes);
            let half = T::from_f64(0.5);
            let m_theta = angular_nodes;
            let dtheta = T::from_f64(2.0) * T::PI() / T::from_usize(m_theta);
            for (&nx, &wx) in rule.nodes.iter().zip(&rule.weights) {
                let x = (nx + T::one()) * half;
                let r = (x / (T::one() - x)).sqrt();
                let w = wx * half * (T::one() - x).powi(p as i32) / T::from_usize(m_theta);
                for it in 0..m_theta {
                    let theta = dtheta * T::from_usize(it);
                    let z = Complex::from_polar(r, theta);
                    accumulate(z, w);
                }
            }
        }
    }
    Ok(g)
}

/// Largest deviation of `R^* S R` from the identity, the whitening
/// residual reported in manifests and asserted by the acceptance tests.
/// Uses compensated products so the measurement reflects the matrices,
/// not the evaluation noise of the triple product.
pub fn whitening_residual<T: Scalar>(r: &CMat<T>, s: &CMat<T>) -> T {
    r.adjoint()
        .mul_accurate(&s.mul_accurate(r))
        .max_deviation_from_identity()
}
