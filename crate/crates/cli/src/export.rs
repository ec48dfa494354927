//! Rendering images to 8-bit PGM for quick visual inspection.
//!
//! Pixels are displayed on a logarithmic scale relative to the image peak:
//! the peak maps to 255, anything at or below the dB floor maps to 0, and
//! values in between scale linearly in dB. Rows are emitted top-down with +y
//! at the top, so the picture matches a conventional plot of the region.

use std::path::Path;

use crate::error::CliError;
use crate::formats::StoredImage;

/// Maps a relative level in dB (0 at the peak) onto one display byte.
/// Ties round away from zero, so an exact half-step brightens.
pub fn quantize(rel_db: f64, floor_db: f64) -> u8 {
    let rel = rel_db.clamp(floor_db, 0.0);
    let scaled = 255.0 * (1.0 - rel / floor_db);
    scaled.round() as u8
}

pub fn render_pgm(image: &StoredImage, floor_db: f64) -> Result<Vec<u8>, CliError> {
    if !(floor_db.is_finite() && floor_db < 0.0) {
        return Err(CliError::input(format!(
            "display floor must be a negative dB value, got {floor_db}"
        )));
    }
    let magnitudes = image.magnitudes();
    let peak = magnitudes.iter().cloned().fold(0.0_f64, f64::max);
    if peak <= 0.0 {
        return Err(CliError::input(
            "image is identically zero; nothing to display",
        ));
    }
    let region = image.region();
    let (nx, ny) = (region.nx(), region.ny());

    let mut bytes = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    bytes.reserve(nx * ny);
    for iy in (0..ny).rev() {
        for ix in 0..nx {
            let mag = magnitudes[(iy, ix)];
            let rel_db = if mag > 0.0 {
                20.0 * (mag / peak).log10()
            } else {
                f64::NEG_INFINITY
            };
            bytes.push(quantize(rel_db, floor_db));
        }
    }
    Ok(bytes)
}

pub fn write_pgm(path: &Path, image: &StoredImage, floor_db: f64) -> Result<(), CliError> {
    let bytes = render_pgm(image, floor_db)?;
    std::fs::write(path, bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}
