//! Corpus-level invariants of the zero engine: backward error, conjugate
//! symmetry, degree conservation, and scale invariance over a mixed bag
//! of coefficient distributions and degrees.

use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpzeros::basis::OrthonormalBasis;
use rpzeros::ensembles::CoefficientEnsemble;
use rpzeros::zeros::{random_polynomial, GridSpec, Polynomial, ZeroSet};
use rpzeros::zeros::{sample_zero_measure, EmpiricalMeasure2D};

fn conjugate_closure_defect(zs: &ZeroSet<f64>) -> f64 {
    // For each zero, distance to the nearest zero of the conjugated set;
    // zero when the set is closed under conjugation.
    zs.zeros
        .iter()
        .map(|z| {
            zs.zeros
                .iter()
                .map(|w| (w.conj() - z).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

#[test]
fn corpus_of_random_polynomials_satisfies_engine_invariants() {
    let ensembles = [
        CoefficientEnsemble::<f64>::ComplexGaussian,
        CoefficientEnsemble::<f64>::RealGaussian,
        CoefficientEnsemble::<f64>::UniformUnitCube,
        CoefficientEnsemble::<f64>::radial(1.5).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_814);
    let mut solved = 0usize;
    let mut real_polys = 0usize;
    for trial in 0..1000usize {
        let degree = 1 + trial % 50;
        let ensemble = &ensembles[trial % ensembles.len()];
        let basis = OrthonormalBasis::<f64>::monomial(degree);
        let poly = random_polynomial(&basis, ensemble, &mut rng).unwrap();
        let zs = match poly.roots() {
            Ok(zs) => zs,
            Err(e) => panic!("trial {trial} (degree {degree}) failed: {e}"),
        };
        // Degree conservation: as many zeros as the effective degree.
        assert_eq!(
            zs.zeros.len(),
            poly.effective_degree(),
            "zero count mismatch at trial {trial}"
        );
        // Backward error within 10³ machine epsilons.
        assert!(
            zs.max_backward_error <= 1e3 * f64::EPSILON,
            "backward error {:e} at trial {trial} (degree {degree})",
            zs.max_backward_error
        );
        // Real coefficients: zero set closed under conjugation.
        if poly.is_real() {
            real_polys += 1;
            let defect = conjugate_closure_defect(&zs);
            assert!(
                defect <= 1e-8,
                "conjugate defect {defect:e} at trial {trial}"
            );
        }
        solved += 1;
    }
    assert_eq!(solved, 1000);
    assert!(real_polys >= 250, "expected the real half of the corpus");
}

#[test]
fn plane_gaussian_real_model_zeros_concentrate_in_the_box() {
    // Degree 200, 50 trials: the limiting zero distribution lives in the
    // closed unit disk, so nearly all mass stays inside [-2, 2]².
    use rpzeros::basis::{SpaceKind, WeightedSpace};
    let space = WeightedSpace::new(SpaceKind::PlaneGaussian, 200).unwrap();
    let basis = OrthonormalBasis::<f64>::closed_form(space).unwrap();
    let ensemble = CoefficientEnsemble::<f64>::RealGaussian;
    let grid = GridSpec::<f64>::centered_square(2.0, 64).unwrap();
    let measure = sample_zero_measure(&basis, &ensemble, 50, 7_001, grid).unwrap();
    let in_box = measure.in_box_fraction().unwrap();
    assert!(in_box >= 0.95, "in-box fraction {in_box}");
    // Mass bookkeeping: 50 trials of weight one each.
    assert!((measure.total_mass() - 50.0).abs() < 1e-12);
}

fn arbitrary_coeffs(max_degree: usize) -> impl Strategy<Value = Vec<Complex<f64>>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..=max_degree + 1).prop_map(|v| {
        let mut coeffs: Vec<Complex<f64>> =
            v.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
        // Keep the leading coefficient well clear of the trim threshold.
        let last = coeffs.last_mut().unwrap();
        if last.norm() < 0.1 {
            *last = Complex::new(0.5, -0.5);
        }
        coeffs
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_count_matches_effective_degree(coeffs in arbitrary_coeffs(12)) {
        let poly = Polynomial::new(coeffs).unwrap();
        let zs = poly.roots().unwrap();
        prop_assert_eq!(zs.zeros.len(), poly.effective_degree());
        prop_assert!(zs.max_backward_error <= 1e3 * f64::EPSILON);
    }

    #[test]
    fn roots_are_scale_invariant(coeffs in arbitrary_coeffs(10), scale in 0.25f64..4.0) {
        let poly = Polynomial::new(coeffs.clone()).unwrap();
        let scaled = Polynomial::new(
            coeffs.iter().map(|c| c * scale).collect()
        ).unwrap();
        let a = poly.roots().unwrap();
        let b = scaled.roots().unwrap();
        prop_assert_eq!(a.zeros.len(), b.zeros.len());
        for (x, y) in a.zeros.iter().zip(&b.zeros) {
            prop_assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn real_coefficient_zero_sets_are_conjugate_closed(
        reals in prop::collection::vec(-1.0f64..1.0, 3..=13)
    ) {
        let mut coeffs: Vec<Complex<f64>> =
            reals.into_iter().map(|re| Complex::new(re, 0.0)).collect();
        let last = coeffs.last_mut().unwrap();
        if last.norm() < 0.1 {
            *last = Complex::new(0.7, 0.0);
        }
        let poly = Polynomial::new(coeffs).unwrap();
        let zs = poly.roots().unwrap();
        let defect = conjugate_closure_defect(&zs);
        prop_assert!(defect <= 1e-8, "defect {:e}", defect);
    }

    #[test]
    fn empirical_measures_normalize_to_one(
        points in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..40)
    ) {
        let grid = GridSpec::<f64>::centered_square(2.0, 8).unwrap();
        let mut measure = EmpiricalMeasure2D::new(grid);
        let degree = points.len();
        let zs = ZeroSet {
            zeros: points.into_iter().map(|(x, y)| Complex::new(x, y)).collect(),
            degree,
            real_zero_count: 0,
            max_backward_error: 0.0,
        };
        measure.accumulate(&zs).unwrap();
        let (bins, outside) = measure.normalized().unwrap();
        let total: f64 = bins.iter().sum::<f64>() + outside;
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }
}
