//! Monte Carlo real-zero counts against the quadrature expectation.

use num_complex::Complex;
use rayon::prelude::*;
use rpzeros::basis::OrthonormalBasis;
use rpzeros::ensembles::CoefficientEnsemble;
use rpzeros::realzeros::kac_expected;
use rpzeros::rng::{stream_rng, substream};
use rpzeros::scalar::Scalar;
use rpzeros::zeros::{random_polynomial, Polynomial};

const TRIALS: usize = 10_000;

fn mean_and_se(counts: &[usize]) -> (f64, f64) {
    let n = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    let var = counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn gaussian_real_zero_counts(p: usize, root_seed: u64) -> Vec<usize> {
    let basis = OrthonormalBasis::<f64>::monomial(p);
    let ensemble = CoefficientEnsemble::RealGaussian;
    (0..TRIALS)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(substream(root_seed, trial as u64));
            let poly = random_polynomial(&basis, &ensemble, &mut rng).unwrap();
            poly.roots().unwrap().real_zero_count
        })
        .collect()
}

#[test]
fn gaussian_monomial_real_zero_counts_match_the_quadrature_expectation() {
    for (p, seed) in [(10usize, 42_010u64), (50, 42_050)] {
        let expected: f64 = kac_expected(p).unwrap();
        let counts = gaussian_real_zero_counts(p, seed);
        let (mean, se) = mean_and_se(&counts);
        println!("p={p}: empirical {mean:.4} ± {se:.4}, quadrature {expected:.4}");
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "p={p}: {mean} vs {expected} (se {se})"
        );
    }
}

#[test]
fn centered_uniform_coefficients_agree_with_the_gaussian_expectation() {
    // Universality cross-check with mean-zero variance-one uniform
    // coefficients: reported for the record, not asserted, since the
    // agreement is only asymptotic in p.
    let p = 50usize;
    let expected: f64 = kac_expected(p).unwrap();
    let scale = 12.0f64.sqrt();
    let counts: Vec<usize> = (0..TRIALS)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(substream(42_150, trial as u64));
            let coeffs: Vec<Complex<f64>> = (0..=p)
                .map(|_| {
                    let u: f64 = f64::uniform_01(&mut rng);
                    Complex::new((u - 0.5) * scale, 0.0)
                })
                .collect();
            Polynomial::new(coeffs).unwrap().roots().unwrap().real_zero_count
        })
        .collect();
    let (mean, se) = mean_and_se(&counts);
    let gap = (mean - expected).abs() / se;
    println!(
        "p={p} centered-uniform: empirical {mean:.4} ± {se:.4}, \
         quadrature {expected:.4}, gap {gap:.2} SE"
    );
}
