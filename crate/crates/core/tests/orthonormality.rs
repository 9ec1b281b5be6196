//! Whitening residuals and independent re-quadrature across degrees for
//! all three geometries.

use num_complex::Complex;
use rpzeros::basis::{gram_of_basis, whitening_residual, OrthonormalBasis, SpaceKind, WeightedSpace};

const DEGREES: [usize; 5] = [1, 5, 10, 20, 40];

#[test]
fn square_whitening_and_requadrature() {
    for p in DEGREES {
        let space = WeightedSpace::new(SpaceKind::UnitSquareQ, p).unwrap();
        let gram = space.gram_matrix::<f64>().unwrap();
        let basis = OrthonormalBasis::from_gram(space, &gram).unwrap();
        let residual = whitening_residual(basis.triangular_matrix().unwrap(), &gram);
        let requad = gram_of_basis(&basis)
            .unwrap()
            .max_deviation_from_identity();
        let condition = basis.scaled_condition.unwrap();
        println!(
            "square p={p:2}  scaled_condition={condition:9.3e}  whitening={residual:9.3e}  requad={requad:9.3e}"
        );
        assert!(residual <= 1e-10, "whitening residual {residual:e} at p={p}");
        assert!(requad <= 1e-8, "re-quadrature deviation {requad:e} at p={p}");
    }
}

#[test]
fn plane_gaussian_whitening_and_requadrature() {
    for p in DEGREES {
        let space = WeightedSpace::new(SpaceKind::PlaneGaussian, p).unwrap();
        let gram = space.gram_matrix::<f64>().unwrap();
        let basis = OrthonormalBasis::from_gram(space, &gram).unwrap();
        let residual = whitening_residual(basis.triangular_matrix().unwrap(), &gram);
        let requad = gram_of_basis(&basis)
            .unwrap()
            .max_deviation_from_identity();
        println!("plane-gaussian p={p:2}  whitening={residual:9.3e}  requad={requad:9.3e}");
        assert!(residual <= 1e-10);
        assert!(requad <= 1e-8);

        // The closed form must satisfy the same re-quadrature bound.
        let closed = OrthonormalBasis::<f64>::closed_form(space).unwrap();
        let requad = gram_of_basis(&closed)
            .unwrap()
            .max_deviation_from_identity();
        assert!(requad <= 1e-8, "closed-form deviation {requad:e} at p={p}");
    }
}

#[test]
fn fubini_study_whitening_and_requadrature() {
    for p in DEGREES {
        let space = WeightedSpace::new(SpaceKind::FubiniStudy, p).unwrap();
        let gram = space.gram_matrix::<f64>().unwrap();
        let basis = OrthonormalBasis::from_gram(space, &gram).unwrap();
        let residual = whitening_residual(basis.triangular_matrix().unwrap(), &gram);
        let requad = gram_of_basis(&basis)
            .unwrap()
            .max_deviation_from_identity();
        println!("fubini-study p={p:2}  whitening={residual:9.3e}  requad={requad:9.3e}");
        assert!(residual <= 1e-10);
        assert!(requad <= 1e-8);

        let closed = OrthonormalBasis::<f64>::closed_form(space).unwrap();
        let requad = gram_of_basis(&closed)
            .unwrap()
            .max_deviation_from_identity();
        assert!(requad <= 1e-8);
    }
}

#[test]
fn closed_form_and_cholesky_agree_on_norms() {
    // The numerically factored basis and the closed form may differ by
    // column phases only; their diagonal magnitudes must match.
    for p in [1usize, 5, 10] {
        let space = WeightedSpace::new(SpaceKind::FubiniStudy, p).unwrap();
        let numeric = OrthonormalBasis::<f64>::cholesky(space).unwrap();
        let closed = OrthonormalBasis::<f64>::closed_form(space).unwrap();
        let r = numeric.triangular_matrix().unwrap();
        let ln_c = closed.diagonal_log_coefficients().unwrap();
        for j in 0..=p {
            let rel = (r[(j, j)].re - ln_c[j].exp()).abs() / ln_c[j].exp();
            assert!(rel <= 1e-6, "diagonal mismatch {rel:e} at p={p}, j={j}");
        }
    }
}

#[test]
fn whitened_basis_evaluates_consistently_at_sample_points() {
    // Parseval check at a point: Σ_j |P_j(z)|² computed from the
    // triangular representation agrees with the log form.
    let space = WeightedSpace::new(SpaceKind::UnitSquareQ, 20).unwrap();
    let basis = OrthonormalBasis::<f64>::cholesky(space).unwrap();
    for &(x, y) in &[(0.0, 0.0), (0.25, -0.25), (0.49, 0.49), (1.5, 0.0)] {
        let z = Complex::new(x, y);
        let direct: f64 = basis.evaluate(z).iter().map(|v| v.norm_sqr()).sum();
        let log_form = basis.log_bergman_diag(z);
        let rel = (direct.ln() - log_form).abs();
        assert!(rel <= 1e-9, "log Bergman mismatch {rel:e} at ({x}, {y})");
    }
}
