//! Convergence of aggregated zero measures to their limit measures,
//! plus the exact sign structure of low-degree spherical-model zeros.

use rpzeros::basis::{OrthonormalBasis, SpaceKind, WeightedSpace};
use rpzeros::ensembles::CoefficientEnsemble;
use rpzeros::equilibrium::ReferenceMeasure;
use rpzeros::zeros::{sample_zero_measure, sample_zero_sets, GridSpec};

/// Total zero count held fixed while the degree grows, so every
/// aggregated measure rests on the same number of points.
const TOTAL_ZEROS: usize = 10_000;
const DEGREES: [usize; 4] = [25, 50, 100, 200];

fn tv_profile(
    kind: SpaceKind,
    reference: ReferenceMeasure,
    root_seed: u64,
) -> Vec<f64> {
    let grid = GridSpec::<f64>::centered_square(2.0, 64).unwrap();
    let binned_reference = reference.bin_reference(grid).unwrap();
    DEGREES
        .iter()
        .map(|&p| {
            let space = WeightedSpace::new(kind, p).unwrap();
            let basis = OrthonormalBasis::<f64>::closed_form(space).unwrap();
            let empirical = sample_zero_measure(
                &basis,
                &CoefficientEnsemble::ComplexGaussian,
                TOTAL_ZEROS / p,
                root_seed + p as u64,
                grid,
            )
            .unwrap();
            empirical.tv_distance(&binned_reference).unwrap()
        })
        .collect()
}

fn assert_decreasing_up_to_one_inversion(tvs: &[f64], label: &str) {
    let inversions = tvs.windows(2).filter(|w| w[1] > w[0]).count();
    assert!(
        inversions <= 1,
        "{label}: {inversions} inversions in {tvs:?}"
    );
    assert!(
        tvs[tvs.len() - 1] < tvs[0],
        "{label}: no overall decrease in {tvs:?}"
    );
}

#[test]
fn gaussian_plane_zero_measures_approach_the_disk() {
    let tvs = tv_profile(
        SpaceKind::PlaneGaussian,
        ReferenceMeasure::UnitDiskUniform,
        61_001,
    );
    println!("disk TV profile over {DEGREES:?}: {tvs:?}");
    assert_decreasing_up_to_one_inversion(&tvs, "disk");
    assert!(tvs[DEGREES.len() - 1] <= 0.15, "final TV {}", tvs[3]);
}

#[test]
fn spherical_zero_measures_approach_the_spherical_law() {
    let tvs = tv_profile(
        SpaceKind::FubiniStudy,
        ReferenceMeasure::FubiniStudyMeasure,
        61_002,
    );
    println!("spherical TV profile over {DEGREES:?}: {tvs:?}");
    assert_decreasing_up_to_one_inversion(&tvs, "spherical");
}

#[test]
fn spherical_degree_one_zeros_stay_on_the_closed_negative_real_axis() {
    let space = WeightedSpace::new(SpaceKind::FubiniStudy, 1).unwrap();
    let basis = OrthonormalBasis::<f64>::closed_form(space).unwrap();
    let sets = sample_zero_sets(
        &basis,
        &CoefficientEnsemble::UniformUnitCube,
        10_000,
        88_101,
    )
    .unwrap();
    for set in &sets {
        assert_eq!(set.zeros.len(), 1);
        for z in &set.zeros {
            assert_eq!(z.im, 0.0, "off-axis zero {z}");
            assert!(z.re <= 0.0, "positive zero {z}");
        }
    }
}

#[test]
fn spherical_degree_two_zeros_have_nonpositive_real_parts() {
    let space = WeightedSpace::new(SpaceKind::FubiniStudy, 2).unwrap();
    let basis = OrthonormalBasis::<f64>::closed_form(space).unwrap();
    let sets = sample_zero_sets(
        &basis,
        &CoefficientEnsemble::UniformUnitCube,
        10_000,
        88_102,
    )
    .unwrap();
    for set in &sets {
        assert_eq!(set.zeros.len(), 2);
        for z in &set.zeros {
            assert!(z.re <= 0.0, "zero in the right half plane: {z}");
        }
    }
}
