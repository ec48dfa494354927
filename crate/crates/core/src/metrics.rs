//! Image-quality measurements: cuts through a peak, per-axis peak sidelobe
//! ratios, ghost detection away from the true targets, and before/after
//! suppression comparisons.
//!
//! Every level is expressed in decibels as `20·log10` of a magnitude ratio,
//! so all results are invariant to a global complex scaling of the image.
//! The array looks down the +y axis in the reference geometries, so a
//! *range* cut runs along y (a pixel column) and an *azimuth* cut along x
//! (a pixel row).

use thiserror::Error;

use crate::backprojection::ImageGrid;
use crate::geometry::{FrequencyGrid, Position2D, SPEED_OF_LIGHT};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("position ({x}, {y}) lies outside the image region")]
    PositionOutsideRegion { x: f64, y: f64 },
    #[error("cut needs at least 3 samples, got {0}")]
    CutTooShort(usize),
    #[error("cut magnitudes are all zero; decibel normalization is undefined")]
    ZeroCut,
    #[error("image peak is zero; decibel levels are undefined")]
    ZeroPeak,
    #[error("exclusion radius must be positive, got {0}")]
    BadExclusionRadius(f64),
    #[error("images cover different regions")]
    RegionMismatch,
}

/// Direction of a 1-D cut through the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutAxis {
    /// Along y (a pixel column): the downrange direction.
    Range,
    /// Along x (a pixel row): the cross-range direction.
    Azimuth,
}

/// Magnitudes along one row or column, in dB relative to the cut's own peak.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageCut {
    pub axis: CutAxis,
    /// Pixel-center coordinate along the cut axis, metres.
    pub coordinates: Vec<f64>,
    /// 20·log10(|v| / max|v|); the maximum entry is exactly 0.
    pub values_db: Vec<f64>,
}

/// Summary quality numbers for one focused image.
#[derive(Debug, Clone)]
pub struct QualityReport {
    /// Magnitude of the brightest pixel.
    pub mainlobe_peak: f64,
    /// Peak sidelobe ratio of the range cut through the peak, dB.
    pub pslr_range: f64,
    /// Peak sidelobe ratio of the azimuth cut through the peak, dB.
    pub pslr_azimuth: f64,
    /// Residual maxima away from the true targets: (position, dB vs peak),
    /// strongest first.
    pub ghost_levels: Vec<(Position2D, f64)>,
    pub notes: String,
}

/// Extracts the pixel row or column nearest `through`, normalized to the
/// cut's own maximum.
pub fn extract_cut(
    image: &ImageGrid,
    through: Position2D,
    axis: CutAxis,
) -> Result<ImageCut, MetricsError> {
    let region = &image.region;
    if !region.contains(through) {
        return Err(MetricsError::PositionOutsideRegion {
            x: through.x,
            y: through.y,
        });
    }
    let (coordinates, magnitudes): (Vec<f64>, Vec<f64>) = match axis {
        CutAxis::Range => {
            let ix = region.nearest_ix(through.x);
            (0..region.ny())
                .map(|iy| (region.pixel_y(iy), image.pixels[[iy, ix]].norm()))
                .unzip()
        }
        CutAxis::Azimuth => {
            let iy = region.nearest_iy(through.y);
            (0..region.nx())
                .map(|ix| (region.pixel_x(ix), image.pixels[[iy, ix]].norm()))
                .unzip()
        }
    };
    let max = magnitudes.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(MetricsError::ZeroCut);
    }
    let values_db = magnitudes.iter().map(|&m| 20.0 * (m / max).log10()).collect();
    Ok(ImageCut {
        axis,
        coordinates,
        values_db,
    })
}

/// Highest sample outside the mainlobe, in dB below the cut peak.
///
/// The mainlobe spans from the global peak outward on each side to the
/// first local minimum (the sample where the cut stops falling), inclusive.
/// Returns `f64::NEG_INFINITY` when no sample exists outside the mainlobe.
pub fn peak_sidelobe_ratio(cut: &ImageCut) -> Result<f64, MetricsError> {
    let v = &cut.values_db;
    if v.len() < 3 {
        return Err(MetricsError::CutTooShort(v.len()));
    }
    // First index attaining the maximum: deterministic under ties.
    let mut peak = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[peak] {
            peak = i;
        }
    }
    let mut right = peak;
    while right + 1 < v.len() && v[right + 1] < v[right] {
        right += 1;
    }
    let mut left = peak;
    while left > 0 && v[left - 1] < v[left] {
        left -= 1;
    }
    let outside = v[..left].iter().chain(v[right + 1..].iter());
    Ok(outside.copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Range-resolution-based default search radius around true targets:
/// three cells of c/(2·I·Δf).
pub fn default_exclusion_radius(frequencies: &FrequencyGrid) -> f64 {
    3.0 * SPEED_OF_LIGHT / (2.0 * frequencies.count() as f64 * frequencies.delta_f())
}

/// [`ghost_level_with_floor`] at the standard −40 dB search floor.
pub fn ghost_level(
    image: &ImageGrid,
    true_targets: &[Position2D],
    exclusion_radius: f64,
) -> Result<Vec<(Position2D, f64)>, MetricsError> {
    ghost_level_with_floor(image, true_targets, exclusion_radius, -40.0)
}

/// Finds residual local maxima once discs around the true targets are
/// masked out.
///
/// A pixel qualifies if it is unmasked, its magnitude exceeds the floor
/// (relative to the global image peak), and no 8-neighbour is brighter
/// (masked neighbours still count, so the skirt of a masked mainlobe is not
/// itself reported). Results are sorted brightest first; equal levels are
/// ordered by row-major pixel index.
pub fn ghost_level_with_floor(
    image: &ImageGrid,
    true_targets: &[Position2D],
    exclusion_radius: f64,
    floor_db: f64,
) -> Result<Vec<(Position2D, f64)>, MetricsError> {
    if !(exclusion_radius > 0.0) {
        return Err(MetricsError::BadExclusionRadius(exclusion_radius));
    }
    let region = &image.region;
    let peak = image.peak_magnitude();
    if peak == 0.0 {
        return Err(MetricsError::ZeroPeak);
    }
    let threshold = peak * 10f64.powf(floor_db / 20.0);
    let (nx, ny) = (region.nx(), region.ny());

    let masked = |ix: usize, iy: usize| {
        let p = region.pixel_center(ix, iy);
        true_targets.iter().any(|t| p.distance_to(t) <= exclusion_radius)
    };

    let mut found: Vec<(usize, Position2D, f64)> = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let mag = image.pixels[[iy, ix]].norm();
            if mag <= threshold || masked(ix, iy) {
                continue;
            }
            let mut is_max = true;
            'neighbours: for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let jx = ix as i64 + dx;
                    let jy = iy as i64 + dy;
                    if jx < 0 || jy < 0 || jx >= nx as i64 || jy >= ny as i64 {
                        continue;
                    }
                    if image.pixels[[jy as usize, jx as usize]].norm() > mag {
                        is_max = false;
                        break 'neighbours;
                    }
                }
            }
            if is_max {
                found.push((
                    region.index(ix, iy),
                    region.pixel_center(ix, iy),
                    20.0 * (mag / peak).log10(),
                ));
            }
        }
    }
    found.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then(a.0.cmp(&b.0)));
    Ok(found.into_iter().map(|(_, p, db)| (p, db)).collect())
}

/// Change in a pixel's level relative to its image peak, `after` minus
/// `before`, in dB. Negative means the pixel was suppressed (relative to
/// the rest of the image) by whatever transformation separates the two.
pub fn suppression_delta(
    before: &ImageGrid,
    after: &ImageGrid,
    at: Position2D,
) -> Result<f64, MetricsError> {
    if before.region != after.region {
        return Err(MetricsError::RegionMismatch);
    }
    if !before.region.contains(at) {
        return Err(MetricsError::PositionOutsideRegion { x: at.x, y: at.y });
    }
    let relative_db = |image: &ImageGrid| -> Result<f64, MetricsError> {
        let peak = image.peak_magnitude();
        if peak == 0.0 {
            return Err(MetricsError::ZeroPeak);
        }
        let ix = image.region.nearest_ix(at.x);
        let iy = image.region.nearest_iy(at.y);
        Ok(20.0 * (image.pixels[[iy, ix]].norm() / peak).log10())
    };
    Ok(relative_db(after)? - relative_db(before)?)
}

/// Full quality summary: cuts through the brightest pixel plus a ghost scan.
pub fn quality_report(
    image: &ImageGrid,
    true_targets: &[Position2D],
    exclusion_radius: f64,
    floor_db: f64,
) -> Result<QualityReport, MetricsError> {
    let mainlobe_peak = image.peak_magnitude();
    if mainlobe_peak == 0.0 {
        return Err(MetricsError::ZeroPeak);
    }
    let (ix, iy) = image.peak_pixel();
    let through = image.region.pixel_center(ix, iy);
    let pslr_range = peak_sidelobe_ratio(&extract_cut(image, through, CutAxis::Range)?)?;
    let pslr_azimuth = peak_sidelobe_ratio(&extract_cut(image, through, CutAxis::Azimuth)?)?;
    let ghost_levels = ghost_level_with_floor(image, true_targets, exclusion_radius, floor_db)?;
    Ok(QualityReport {
        mainlobe_peak,
        pslr_range,
        pslr_azimuth,
        ghost_levels,
        notes: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ImageRegion;
    use ndarray::Array2;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    /// |sin(πx)/(πx)|, the idealized uniform-aperture pattern magnitude.
    fn sinc_magnitude(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            (PI * x).sin().abs() / (PI * x).abs()
        }
    }

    fn image_from_magnitudes(region: ImageRegion, mags: &[&[f64]]) -> ImageGrid {
        let ny = mags.len();
        let nx = mags[0].len();
        let pixels = Array2::from_shape_fn((ny, nx), |(iy, ix)| {
            Complex64::new(mags[iy][ix], 0.0)
        });
        assert_eq!(ny, region.ny());
        assert_eq!(nx, region.nx());
        ImageGrid { region, pixels }
    }

    fn region(nx: usize, ny: usize) -> ImageRegion {
        ImageRegion::new(-1.0, 1.0, -1.0, 1.0, nx, ny).unwrap()
    }

    #[test]
    fn constant_image_cut_is_all_zero_db() {
        let image = image_from_magnitudes(
            region(4, 3),
            &[&[2.0, 2.0, 2.0, 2.0], &[2.0, 2.0, 2.0, 2.0], &[2.0, 2.0, 2.0, 2.0]],
        );
        let cut = extract_cut(&image, Position2D::new(0.0, 0.0), CutAxis::Azimuth).unwrap();
        assert_eq!(cut.values_db.len(), 4);
        assert!(cut.values_db.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cut_peaks_at_zero_db_and_matches_ratios() {
        let image = image_from_magnitudes(
            region(3, 3),
            &[&[0.0, 0.1, 0.0], &[0.5, 1.0, 0.25], &[0.0, 0.2, 0.0]],
        );
        let cut = extract_cut(&image, Position2D::new(0.0, 0.0), CutAxis::Azimuth).unwrap();
        assert_eq!(cut.values_db[1], 0.0);
        assert!((cut.values_db[0] - 20.0 * 0.5f64.log10()).abs() < 1e-12);
        assert!((cut.values_db[2] - 20.0 * 0.25f64.log10()).abs() < 1e-12);

        let vertical = extract_cut(&image, Position2D::new(0.0, 0.0), CutAxis::Range).unwrap();
        assert_eq!(vertical.values_db[1], 0.0);
        assert!((vertical.values_db[0] - 20.0 * 0.1f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn cut_is_invariant_to_global_scaling() {
        let base = image_from_magnitudes(
            region(3, 3),
            &[&[0.0, 0.1, 0.0], &[0.5, 1.0, 0.25], &[0.0, 0.2, 0.0]],
        );
        let mut scaled = base.clone();
        for v in scaled.pixels.iter_mut() {
            *v *= Complex64::new(0.0, -7.5);
        }
        let a = extract_cut(&base, Position2D::new(0.0, 0.0), CutAxis::Azimuth).unwrap();
        let b = extract_cut(&scaled, Position2D::new(0.0, 0.0), CutAxis::Azimuth).unwrap();
        for (x, y) in a.values_db.iter().zip(b.values_db.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn cut_outside_region_is_rejected() {
        let image = image_from_magnitudes(region(2, 2), &[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(
            extract_cut(&image, Position2D::new(5.0, 0.0), CutAxis::Range),
            Err(MetricsError::PositionOutsideRegion { .. })
        ));
    }

    #[test]
    fn zero_cut_is_rejected() {
        let image = image_from_magnitudes(region(2, 2), &[&[0.0, 0.0], &[1.0, 1.0]]);
        // The first magnitude row is iy = 0, i.e. the y ≈ −0.5 pixel row.
        assert!(matches!(
            extract_cut(&image, Position2D::new(0.0, -0.5), CutAxis::Azimuth),
            Err(MetricsError::ZeroCut)
        ));
    }

    fn cut_from_db(values_db: Vec<f64>) -> ImageCut {
        let coordinates = (0..values_db.len()).map(|i| i as f64).collect();
        ImageCut {
            axis: CutAxis::Range,
            coordinates,
            values_db,
        }
    }

    #[test]
    fn pslr_walk_matches_hand_trace() {
        // Mainlobe is the first two samples: the cut falls to −20, rises to
        // −13 (first local minimum at −20), so the sidelobes are {−13, −30}.
        let cut = cut_from_db(vec![0.0, -20.0, -13.0, -30.0]);
        assert_eq!(peak_sidelobe_ratio(&cut).unwrap(), -13.0);
    }

    #[test]
    fn pslr_single_lobe_has_no_sidelobe() {
        let cut = cut_from_db(vec![-10.0, -3.0, 0.0, -3.0, -10.0]);
        assert_eq!(peak_sidelobe_ratio(&cut).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn pslr_rejects_short_cuts() {
        let cut = cut_from_db(vec![0.0, -1.0]);
        assert!(matches!(
            peak_sidelobe_ratio(&cut),
            Err(MetricsError::CutTooShort(2))
        ));
    }

    #[test]
    fn pslr_of_uniform_aperture_pattern_is_classical() {
        // Dense sampling of |sin(πx)/(πx)|: first sidelobe at −13.26 dB.
        let mut coordinates = Vec::new();
        let mut values_db = Vec::new();
        for i in -3000i64..=3000 {
            let x = i as f64 * 0.001;
            coordinates.push(x);
            values_db.push(20.0 * sinc_magnitude(x).log10());
        }
        let cut = ImageCut {
            axis: CutAxis::Range,
            coordinates,
            values_db,
        };
        let pslr = peak_sidelobe_ratio(&cut).unwrap();
        assert!(
            (pslr - (-13.26)).abs() < 0.05,
            "uniform-aperture PSLR {pslr} dB"
        );
    }

    #[test]
    fn ghost_scan_is_empty_when_radius_covers_everything() {
        let mut mags = vec![vec![0.0; 5]; 5];
        mags[2][2] = 1.0;
        let rows: Vec<&[f64]> = mags.iter().map(|r| r.as_slice()).collect();
        let image = image_from_magnitudes(region(5, 5), &rows);
        let ghosts = ghost_level(&image, &[Position2D::new(0.0, 0.0)], 3.0).unwrap();
        assert!(ghosts.is_empty());
    }

    #[test]
    fn ghost_scan_reports_off_target_maximum() {
        let r = region(9, 9);
        let mut mags = vec![vec![0.0; 9]; 9];
        mags[4][4] = 1.0; // true target at the center
        mags[1][7] = 0.1; // ghost, −20 dB
        let rows: Vec<&[f64]> = mags.iter().map(|m| m.as_slice()).collect();
        let image = image_from_magnitudes(r.clone(), &rows);
        let ghosts = ghost_level(&image, &[r.pixel_center(4, 4)], 0.3).unwrap();
        assert_eq!(ghosts.len(), 1);
        let (pos, db) = ghosts[0];
        assert_eq!(pos, r.pixel_center(7, 1));
        assert!((db - (-20.0)).abs() < 1e-12);

        // Determinism: identical inputs give identical reports.
        let again = ghost_level(&image, &[r.pixel_center(4, 4)], 0.3).unwrap();
        assert_eq!(ghosts, again);
    }

    #[test]
    fn ghost_scan_breaks_ties_by_row_major_index() {
        let r = region(9, 9);
        let mut mags = vec![vec![0.0; 9]; 9];
        mags[4][4] = 1.0;
        mags[1][7] = 0.1;
        mags[7][1] = 0.1; // same level, higher row-major index
        let rows: Vec<&[f64]> = mags.iter().map(|m| m.as_slice()).collect();
        let image = image_from_magnitudes(r.clone(), &rows);
        let ghosts = ghost_level(&image, &[r.pixel_center(4, 4)], 0.3).unwrap();
        assert_eq!(ghosts.len(), 2);
        assert_eq!(ghosts[0].0, r.pixel_center(7, 1));
        assert_eq!(ghosts[1].0, r.pixel_center(1, 7));
    }

    #[test]
    fn ghost_scan_respects_the_floor() {
        let r = region(9, 9);
        let mut mags = vec![vec![0.0; 9]; 9];
        mags[4][4] = 1.0;
        mags[1][7] = 0.005; // −46 dB, below the −40 dB floor
        let rows: Vec<&[f64]> = mags.iter().map(|m| m.as_slice()).collect();
        let image = image_from_magnitudes(r.clone(), &rows);
        let ghosts = ghost_level(&image, &[r.pixel_center(4, 4)], 0.3).unwrap();
        assert!(ghosts.is_empty());

        let deeper =
            ghost_level_with_floor(&image, &[r.pixel_center(4, 4)], 0.3, -60.0).unwrap();
        assert_eq!(deeper.len(), 1);
    }

    #[test]
    fn ghost_scan_rejects_bad_radius() {
        let image = image_from_magnitudes(region(2, 2), &[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            ghost_level(&image, &[], 0.0),
            Err(MetricsError::BadExclusionRadius(_))
        ));
    }

    #[test]
    fn suppression_delta_is_zero_for_identical_images() {
        let image = image_from_magnitudes(
            region(3, 3),
            &[&[0.0, 0.1, 0.0], &[0.5, 1.0, 0.25], &[0.0, 0.2, 0.0]],
        );
        let d = suppression_delta(&image, &image, Position2D::new(-0.6, 0.0)).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn suppression_delta_reflects_pure_scaling() {
        let r = region(3, 3);
        let before = image_from_magnitudes(
            r.clone(),
            &[&[0.0, 0.1, 0.0], &[0.5, 1.0, 0.25], &[0.0, 0.2, 0.0]],
        );
        // Damp the (0, 1) pixel by ×0.1 and keep the peak untouched.
        let mut after = before.clone();
        after.pixels[[1, 0]] *= 0.1;
        let at = r.pixel_center(0, 1);
        let d = suppression_delta(&before, &after, at).unwrap();
        assert!((d - (-20.0)).abs() < 1e-12);
    }

    #[test]
    fn suppression_delta_rejects_mismatched_regions() {
        let a = image_from_magnitudes(region(2, 2), &[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = ImageGrid {
            region: ImageRegion::new(-2.0, 2.0, -1.0, 1.0, 2, 2).unwrap(),
            pixels: a.pixels.clone(),
        };
        assert!(matches!(
            suppression_delta(&a, &b, Position2D::new(0.0, 0.0)),
            Err(MetricsError::RegionMismatch)
        ));
    }

    #[test]
    fn default_exclusion_radius_is_three_range_cells() {
        let grid = FrequencyGrid::new(8e9, 1e9 / 63.0, 64).unwrap();
        let want = 3.0 * SPEED_OF_LIGHT / (2.0 * 64.0 * (1e9 / 63.0));
        assert_eq!(default_exclusion_radius(&grid), want);
        // Sanity: a bit under half a metre for a 1 GHz band.
        assert!((want - 0.4427).abs() < 1e-3);
    }

    #[test]
    fn quality_report_populates_all_fields() {
        let r = region(9, 9);
        let mut mags = vec![vec![0.0; 9]; 9];
        mags[4][4] = 1.0;
        mags[4][6] = 0.2; // azimuth sidelobe
        mags[6][4] = 0.4; // range sidelobe
        mags[1][7] = 0.1;
        let rows: Vec<&[f64]> = mags.iter().map(|m| m.as_slice()).collect();
        let image = image_from_magnitudes(r.clone(), &rows);
        // Radius 0.5 covers the planted sidelobes (0.44 m out) but not the
        // ghost pixel (0.94 m out), so exactly one residual maximum remains.
        let report =
            quality_report(&image, &[r.pixel_center(4, 4)], 0.5, -40.0).unwrap();
        assert_eq!(report.mainlobe_peak, 1.0);
        assert!(report.pslr_range <= 0.0);
        assert!(report.pslr_azimuth <= 0.0);
        assert!((report.pslr_range - 20.0 * 0.4f64.log10()).abs() < 1e-12);
        assert!((report.pslr_azimuth - 20.0 * 0.2f64.log10()).abs() < 1e-12);
        assert_eq!(report.ghost_levels.len(), 1);
    }
}
