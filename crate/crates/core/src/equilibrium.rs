//! Limit measures for the equidistribution experiments, and helpers for
//! comparing empirical zero measures against them.
//!
//! Two references have closed-form densities (uniform measure on the
//! unit disk, and the spherical measure `1/(π(1+|z|²)²)`). The square
//! geometry's equilibrium measure lives on the boundary `∂Q` and has no
//! elementary form; it is approximated by the discrete Laplacian of the
//! basis extremal estimator, which stays inside the toolbox the rest of
//! the crate already validates.

use num_complex::Complex;

use crate::basis::{OrthonormalBasis, SpaceKind, WeightedSpace, MAX_SQUARE_DEGREE};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::zeros::{EmpiricalMeasure2D, GridSpec};

/// Half side length of the square geometry's domain `Q = [-1/2, 1/2]²`.
pub const SQUARE_HALF_SIDE: f64 = 0.5;

/// A limit measure that empirical zero measures are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMeasure {
    /// Normalized Lebesgue measure on the closed unit disk.
    UnitDiskUniform,
    /// The measure `1/(π (1+|z|²)²) dλ₂`, total mass one on the plane.
    FubiniStudyMeasure,
    /// Equilibrium measure of the square, concentrated on `∂Q`; it has
    /// no pointwise density and is realized only as a binned
    /// approximation built from the extremal estimator at the largest
    /// degree the square geometry supports.
    SquareBoundary,
}

impl ReferenceMeasure {
    /// Pointwise density with respect to planar Lebesgue measure.
    pub fn density<T: Scalar>(&self, z: Complex<T>) -> Result<T> {
        match self {
            ReferenceMeasure::UnitDiskUniform => {
                if z.norm_sqr() <= T::one() {
                    Ok(T::PI().recip())
                } else {
                    Ok(T::zero())
                }
            }
            ReferenceMeasure::FubiniStudyMeasure => {
                let denom = T::one() + z.norm_sqr();
                Ok((T::PI() * denom * denom).recip())
            }
            ReferenceMeasure::SquareBoundary => Err(Error::NoPointwiseDensity),
        }
    }

    /// Bins the measure on a grid. Density kinds use midpoint-refined
    /// quadrature (4×4 subcells per bin) with the complement assigned to
    /// out-of-box mass; the boundary measure uses the discrete Laplacian
    /// of the extremal estimator, clipped to nonnegative and normalized.
    pub fn bin_reference<T: Scalar>(&self, grid: GridSpec<T>) -> Result<EmpiricalMeasure2D<T>> {
        match self {
            ReferenceMeasure::UnitDiskUniform | ReferenceMeasure::FubiniStudyMeasure => {
                let refine = 4usize;
                let n_bins = grid.bin_count();
                let sub_dx = (grid.x_max - grid.x_min)
                    / T::from_usize(grid.nx * refine);
                let sub_dy = (grid.y_max - grid.y_min)
                    / T::from_usize(grid.ny * refine);
                let sub_area = sub_dx * sub_dy;
                let half = T::from_f64(0.5);
                let mut bins = vec![T::zero(); n_bins];
                for iy in 0..grid.ny * refine {
                    let y = grid.y_min + sub_dy * (T::from_usize(iy) + half);
                    let row = iy / refine;
                    for ix in 0..grid.nx * refine {
                        let x = grid.x_min + sub_dx * (T::from_usize(ix) + half);
                        let col = ix / refine;
                        let d = self.density(Complex::new(x, y))?;
                        bins[row * grid.nx + col] += d * sub_area;
                    }
                }
                let total = bins.iter().fold(T::zero(), |acc, &m| acc + m);
                let outside = (T::one() - total).max(T::zero());
                EmpiricalMeasure2D::from_masses(grid, bins, outside)
            }
            ReferenceMeasure::SquareBoundary => {
                let space =
                    WeightedSpace::new(SpaceKind::UnitSquareQ, MAX_SQUARE_DEGREE)?;
                let basis = OrthonormalBasis::<T>::cholesky(space)?;
                let dx = (grid.x_max - grid.x_min) / T::from_usize(grid.nx);
                let dy = (grid.y_max - grid.y_min) / T::from_usize(grid.ny);
                let half = T::from_f64(0.5);
                // Extremal-estimator field on bin centers plus a one-bin
                // ring, so every bin has all four neighbors.
                let nx2 = grid.nx + 2;
                let ny2 = grid.ny + 2;
                let mut field = vec![T::zero(); nx2 * ny2];
                for iy in 0..ny2 {
                    let y = grid.y_min + dy * (T::from_usize(iy) - half);
                    for ix in 0..nx2 {
                        let x = grid.x_min + dx * (T::from_usize(ix) - half);
                        field[iy * nx2 + ix] =
                            basis.extremal_estimate(Complex::new(x, y))?;
                    }
                }
                let mut bins = vec![T::zero(); grid.bin_count()];
                let area = grid.bin_area();
                let two_pi = T::from_f64(2.0) * T::PI();
                for iy in 0..grid.ny {
                    for ix in 0..grid.nx {
                        let c = field[(iy + 1) * nx2 + (ix + 1)];
                        let e = field[(iy + 1) * nx2 + (ix + 2)];
                        let w = field[(iy + 1) * nx2 + ix];
                        let n = field[(iy + 2) * nx2 + (ix + 1)];
                        let s = field[iy * nx2 + (ix + 1)];
                        let two = T::from_f64(2.0);
                        let lap = (e - two * c + w) / (dx * dx)
                            + (n - two * c + s) / (dy * dy);
                        bins[iy * grid.nx + ix] =
                            (lap / two_pi * area).max(T::zero());
                    }
                }
                let total = bins.iter().fold(T::zero(), |acc, &m| acc + m);
                if total <= T::zero() {
                    return Err(Error::Numeric(
                        "extremal-estimator Laplacian produced no positive mass".into(),
                    ));
                }
                for m in &mut bins {
                    *m /= total;
                }
                EmpiricalMeasure2D::from_masses(grid, bins, T::zero())
            }
        }
    }
}

/// Euclidean distance from `z` to the boundary of the square
/// `[-half_side, half_side]²`.
pub fn distance_to_square_boundary<T: Scalar>(z: Complex<T>, half_side: T) -> T {
    let ax = z.re.abs();
    let ay = z.im.abs();
    if ax <= half_side && ay <= half_side {
        half_side - ax.max(ay)
    } else {
        let dx = (ax - half_side).max(T::zero());
        let dy = (ay - half_side).max(T::zero());
        (dx * dx + dy * dy).sqrt()
    }
}

/// Fraction of a measure's total mass in bins whose centers lie within
/// `band` of the boundary of `[-half_side, half_side]²`. Out-of-box mass
/// counts as outside the band.
pub fn boundary_band_fraction<T: Scalar>(
    measure: &EmpiricalMeasure2D<T>,
    half_side: T,
    band: T,
) -> Result<T> {
    let (bins, _) = measure.normalized()?;
    let grid = *measure.grid();
    let mut in_band = T::zero();
    for (i, &m) in bins.iter().enumerate() {
        if distance_to_square_boundary(grid.bin_center(i), half_side) <= band {
            in_band += m;
        }
    }
    Ok(in_band)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive, adaptive_to_inf};
    use crate::zeros::ZeroSet;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn c64(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn density_examples() {
        let fs = ReferenceMeasure::FubiniStudyMeasure;
        assert_relative_eq!(
            fs.density(c64(0.0, 0.0)).unwrap(),
            1.0 / std::f64::consts::PI,
            max_relative = 1e-15
        );

        let disk = ReferenceMeasure::UnitDiskUniform;
        assert_eq!(disk.density(c64(2.0, 0.0)).unwrap(), 0.0);
        assert_relative_eq!(
            disk.density(c64(0.3, -0.4)).unwrap(),
            1.0 / std::f64::consts::PI,
            max_relative = 1e-15
        );

        assert!(matches!(
            ReferenceMeasure::SquareBoundary.density(c64(0.0, 0.0)),
            Err(Error::NoPointwiseDensity)
        ));
    }

    #[test]
    fn spherical_density_has_unit_total_mass() {
        // Radial reduction: total mass = ∫₀^∞ 2r/(1+r²)² dr.
        let radial = |r: f64| 2.0 * r / (1.0 + r * r).powi(2);
        let q = adaptive_to_inf(radial, 0.0, 1e-10).unwrap();
        assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-6);

        // Mass of the radius-2 disk follows the closed-form radial law
        // R²/(1+R²) = 4/5.
        let q = adaptive(radial, 0.0, 2.0, 1e-10).unwrap();
        assert_abs_diff_eq!(q.value, 0.8, epsilon = 1e-9);
    }

    #[test]
    fn disk_binning_is_rotation_symmetric_with_no_outside_mass() {
        let grid = GridSpec::<f64>::centered_square(2.0, 4).unwrap();
        let binned = ReferenceMeasure::UnitDiskUniform
            .bin_reference(grid)
            .unwrap();
        let (bins, outside) = binned.normalized().unwrap();
        assert_abs_diff_eq!(outside, 0.0, epsilon = 1e-9);
        // 90° rotation: (ix, iy) -> (iy, nx-1-ix).
        for iy in 0..4 {
            for ix in 0..4 {
                let rotated = ix * 4 + (4 - 1 - iy);
                assert_abs_diff_eq!(
                    bins[iy * 4 + ix],
                    bins[rotated],
                    epsilon = 1e-12
                );
            }
        }
        let total: f64 = bins.iter().sum::<f64>() + outside;
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spherical_box_mass_matches_the_planar_closed_form() {
        // Mass of [-2,2]²: the disk term 4/5 plus the four corner
        // regions, 4/π · ((2/√5)·atan(2/√5) − π/5) in closed form.
        let expect = 0.8
            + 4.0 / std::f64::consts::PI
                * ((2.0 / 5.0f64.sqrt()) * (2.0 / 5.0f64.sqrt()).atan()
                    - std::f64::consts::PI / 5.0);
        let grid = GridSpec::<f64>::centered_square(2.0, 64).unwrap();
        let binned = ReferenceMeasure::FubiniStudyMeasure
            .bin_reference(grid)
            .unwrap();
        let in_box = binned.in_box_fraction().unwrap();
        assert_abs_diff_eq!(in_box, expect, epsilon = 1e-3);
        // The out-of-box remainder is genuinely positive for this
        // measure: about 17% of the mass lies beyond the box.
        let (_, outside) = binned.normalized().unwrap();
        assert!(outside > 0.15 && outside < 0.19, "outside {outside}");
    }

    #[test]
    fn square_boundary_reference_concentrates_near_the_edge() {
        let grid = GridSpec::<f64>::centered_square(2.0, 64).unwrap();
        let binned = ReferenceMeasure::SquareBoundary.bin_reference(grid).unwrap();
        let frac =
            boundary_band_fraction(&binned, SQUARE_HALF_SIDE, 0.1).unwrap();
        assert!(frac >= 0.9, "band fraction {frac}");
        let (bins, outside) = binned.normalized().unwrap();
        assert_eq!(outside, 0.0);
        let total: f64 = bins.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn distance_to_square_boundary_cases() {
        let s = 0.5;
        assert_abs_diff_eq!(
            distance_to_square_boundary(c64(0.0, 0.0), s),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            distance_to_square_boundary(c64(0.45, 0.0), s),
            0.05,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            distance_to_square_boundary(c64(0.5, 0.5), s),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            distance_to_square_boundary(c64(1.0, 0.0), s),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            distance_to_square_boundary(c64(0.8, 0.9), s),
            (0.3f64 * 0.3 + 0.4 * 0.4).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn band_fraction_of_point_masses() {
        let grid = GridSpec::<f64>::centered_square(2.0, 256).unwrap();
        let mut near = EmpiricalMeasure2D::new(grid);
        near.accumulate(&ZeroSet {
            zeros: vec![c64(0.45, 0.0)],
            degree: 1,
            real_zero_count: 1,
            max_backward_error: 0.0,
        })
        .unwrap();
        assert_abs_diff_eq!(
            boundary_band_fraction(&near, 0.5, 0.1).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let mut center = EmpiricalMeasure2D::new(grid);
        center
            .accumulate(&ZeroSet {
                zeros: vec![c64(0.0, 0.0)],
                degree: 1,
                real_zero_count: 1,
                max_backward_error: 0.0,
            })
            .unwrap();
        assert_abs_diff_eq!(
            boundary_band_fraction(&center, 0.5, 0.1).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    fn random_measure(masses: Vec<(u8, u8)>, outside: u8) -> EmpiricalMeasure2D<f64> {
        let grid = GridSpec::<f64>::centered_square(1.0, 3).unwrap();
        let mut bins = vec![0.0f64; grid.bin_count()];
        for (slot, m) in masses.iter().enumerate() {
            bins[(m.0 as usize) % 9] += 1.0 + slot as f64 * (m.1 as f64) / 255.0;
        }
        EmpiricalMeasure2D::from_masses(grid, bins, outside as f64 / 16.0).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tv_distance_is_a_metric(
            a in prop::collection::vec((0u8..9, 0u8..=255), 1..6),
            b in prop::collection::vec((0u8..9, 0u8..=255), 1..6),
            c in prop::collection::vec((0u8..9, 0u8..=255), 1..6),
            oa in 0u8..8, ob in 0u8..8, oc in 0u8..8,
        ) {
            let ma = random_measure(a, oa);
            let mb = random_measure(b, ob);
            let mc = random_measure(c, oc);
            let dab = ma.tv_distance(&mb).unwrap();
            let dba = mb.tv_distance(&ma).unwrap();
            let dac = ma.tv_distance(&mc).unwrap();
            let dcb = mc.tv_distance(&mb).unwrap();
            prop_assert!((0.0..=1.0).contains(&dab));
            prop_assert_eq!(dab, dba);
            prop_assert!(dab <= dac + dcb + 1e-12);
            prop_assert!(ma.tv_distance(&ma).unwrap() == 0.0);
        }
    }
}
