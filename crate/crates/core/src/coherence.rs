//! Per-pixel coherence weighting maps and their application to an image.
//!
//! Each map scores, between 0 and 1, how consistently the layers of an
//! image stack agree at a pixel. The magnitude-sensitive family compares
//! coherent and incoherent power:
//!
//! ```text
//! CF = |Σ_k y_k|² / (K · Σ_k |y_k|²)
//! ```
//!
//! The phase-only family measures the dispersion of the layers' unit
//! phasors:
//!
//! ```text
//! PCF = 1 − √(std²(cos φ) + std²(sin φ))      (population std over layers)
//! ```
//!
//! Both come in a spatial flavour (layers = channels: a true target is seen
//! at a consistent delay by every element, a sidelobe or azimuth ghost is
//! not) and a frequency flavour (layers = tones: a true target focuses at
//! the same spot at every frequency, a range sidelobe does not). The 2-D
//! variants multiply the two flavours and inherit the stronger suppression
//! of each. Multiplying the focused image by a map keeps targets (map ≈ 1)
//! and attenuates artifacts (map ≈ 0).
//!
//! Every builder checks that computed values stay inside [0, 1] up to a
//! 1e−12 numerical slack — a violation means the implementation itself is
//! broken, so it surfaces as [`CoherenceError::OutOfRange`] rather than
//! being clamped away silently. Within the slack, values are clamped.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::backprojection::{ChannelImageStack, FrequencyImageStack, ImageGrid};
use crate::geometry::ImageRegion;

/// Tolerance for floating-point excursions outside [0, 1].
const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CoherenceError {
    #[error("coherence map needs at least one stack layer")]
    EmptyStack,
    #[error("{kind} value {value} at pixel ({ix}, {iy}) is outside [0, 1] beyond numerical slack")]
    OutOfRange {
        kind: MapKind,
        value: f64,
        ix: usize,
        iy: usize,
    },
    #[error("expected a {expected} map, got {got}")]
    KindMismatch { expected: MapKind, got: MapKind },
    #[error("coherence maps cover different regions")]
    RegionMismatch,
    #[error("image and map cover different regions")]
    ImageRegionMismatch,
}

/// Which statistic a [`CoherenceMap`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// Magnitude coherence across channels.
    Cf,
    /// Magnitude coherence across frequencies.
    Cff,
    /// Product of [`MapKind::Cf`] and [`MapKind::Cff`].
    Cf2d,
    /// Phase coherence across channels.
    Pcf,
    /// Phase coherence across frequencies.
    Pcff,
    /// Product of [`MapKind::Pcf`] and [`MapKind::Pcff`].
    Pcf2d,
}

impl MapKind {
    pub const ALL: [MapKind; 6] = [
        MapKind::Cf,
        MapKind::Cff,
        MapKind::Cf2d,
        MapKind::Pcf,
        MapKind::Pcff,
        MapKind::Pcf2d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Cf => "cf",
            MapKind::Cff => "cff",
            MapKind::Cf2d => "cf2d",
            MapKind::Pcf => "pcf",
            MapKind::Pcff => "pcff",
            MapKind::Pcf2d => "pcf2d",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MapKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MapKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown map kind `{s}` (expected cf|cff|cf2d|pcf|pcff|pcf2d)"))
    }
}

/// A per-pixel weighting in [0, 1] over an [`ImageRegion`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceMap {
    pub region: ImageRegion,
    pub values: Array2<f64>,
    pub kind: MapKind,
}

/// Magnitude coherence across the channel axis.
pub fn cf_spatial(stack: &ChannelImageStack) -> Result<CoherenceMap, CoherenceError> {
    cf_over_lanes(&stack.region, &stack.values, MapKind::Cf)
}

/// Magnitude coherence across the frequency axis.
pub fn cf_frequency(stack: &FrequencyImageStack) -> Result<CoherenceMap, CoherenceError> {
    cf_over_lanes(&stack.region, &stack.values, MapKind::Cff)
}

/// Phase coherence across the channel axis.
pub fn pcf_spatial(stack: &ChannelImageStack) -> Result<CoherenceMap, CoherenceError> {
    pcf_over_lanes(&stack.region, &stack.values, MapKind::Pcf)
}

/// Phase coherence across the frequency axis.
pub fn pcf_frequency(stack: &FrequencyImageStack) -> Result<CoherenceMap, CoherenceError> {
    pcf_over_lanes(&stack.region, &stack.values, MapKind::Pcff)
}

/// Pixelwise product of the spatial and frequency magnitude coherences.
pub fn cf_2d(
    spatial: &CoherenceMap,
    frequency: &CoherenceMap,
) -> Result<CoherenceMap, CoherenceError> {
    product_map(spatial, frequency, MapKind::Cf, MapKind::Cff, MapKind::Cf2d)
}

/// Pixelwise product of the spatial and frequency phase coherences.
pub fn pcf_2d(
    spatial: &CoherenceMap,
    frequency: &CoherenceMap,
) -> Result<CoherenceMap, CoherenceError> {
    product_map(
        spatial,
        frequency,
        MapKind::Pcf,
        MapKind::Pcff,
        MapKind::Pcf2d,
    )
}

/// Weights the focused image by a coherence map, pixel by pixel.
pub fn apply_map(image: &ImageGrid, map: &CoherenceMap) -> Result<ImageGrid, CoherenceError> {
    if image.region != map.region {
        return Err(CoherenceError::ImageRegionMismatch);
    }
    let mut pixels = image.pixels.clone();
    for (p, &w) in pixels.iter_mut().zip(map.values.iter()) {
        *p *= w;
    }
    Ok(ImageGrid {
        region: image.region.clone(),
        pixels,
    })
}

/// All six maps computed from one pair of stacks, in canonical order.
#[derive(Debug, Clone)]
pub struct CoherenceSuite {
    pub cf: CoherenceMap,
    pub cff: CoherenceMap,
    pub cf2d: CoherenceMap,
    pub pcf: CoherenceMap,
    pub pcff: CoherenceMap,
    pub pcf2d: CoherenceMap,
}

impl CoherenceSuite {
    pub fn compute(
        channel_stack: &ChannelImageStack,
        frequency_stack: &FrequencyImageStack,
    ) -> Result<Self, CoherenceError> {
        let cf = cf_spatial(channel_stack)?;
        let cff = cf_frequency(frequency_stack)?;
        let cf2d = cf_2d(&cf, &cff)?;
        let pcf = pcf_spatial(channel_stack)?;
        let pcff = pcf_frequency(frequency_stack)?;
        let pcf2d = pcf_2d(&pcf, &pcff)?;
        Ok(Self {
            cf,
            cff,
            cf2d,
            pcf,
            pcff,
            pcf2d,
        })
    }

    pub fn get(&self, kind: MapKind) -> &CoherenceMap {
        match kind {
            MapKind::Cf => &self.cf,
            MapKind::Cff => &self.cff,
            MapKind::Cf2d => &self.cf2d,
            MapKind::Pcf => &self.pcf,
            MapKind::Pcff => &self.pcff,
            MapKind::Pcf2d => &self.pcf2d,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (MapKind, &CoherenceMap)> {
        MapKind::ALL.into_iter().map(move |k| (k, self.get(k)))
    }
}

fn check_range(
    value: f64,
    kind: MapKind,
    ix: usize,
    iy: usize,
) -> Result<f64, CoherenceError> {
    if !(value >= -RANGE_SLACK && value <= 1.0 + RANGE_SLACK) {
        return Err(CoherenceError::OutOfRange {
            kind,
            value,
            ix,
            iy,
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

fn cf_over_lanes(
    region: &ImageRegion,
    values: &Array3<Complex64>,
    kind: MapKind,
) -> Result<CoherenceMap, CoherenceError> {
    let shape = values.shape();
    let (ny, nx, depth) = (shape[0], shape[1], shape[2]);
    if depth == 0 {
        return Err(CoherenceError::EmptyStack);
    }
    let mut out = Array2::zeros((ny, nx));
    for iy in 0..ny {
        for ix in 0..nx {
            let lane = values.slice(ndarray::s![iy, ix, ..]);
            let lane = lane.as_slice().expect("lane axis is contiguous");
            let mut coherent = Complex64::ZERO;
            let mut power = 0.0;
            for &v in lane {
                coherent += v;
                power += v.norm_sqr();
            }
            let cf = if power == 0.0 {
                // No energy in any layer: nothing worth preserving.
                0.0
            } else {
                coherent.norm_sqr() / (depth as f64 * power)
            };
            out[[iy, ix]] = check_range(cf, kind, ix, iy)?;
        }
    }
    Ok(CoherenceMap {
        region: region.clone(),
        values: out,
        kind,
    })
}

fn pcf_over_lanes(
    region: &ImageRegion,
    values: &Array3<Complex64>,
    kind: MapKind,
) -> Result<CoherenceMap, CoherenceError> {
    let shape = values.shape();
    let (ny, nx, depth) = (shape[0], shape[1], shape[2]);
    if depth == 0 {
        return Err(CoherenceError::EmptyStack);
    }
    let inv_k = 1.0 / depth as f64;
    let mut cosines = vec![0.0; depth];
    let mut sines = vec![0.0; depth];
    let mut out = Array2::zeros((ny, nx));
    for iy in 0..ny {
        for ix in 0..nx {
            let lane = values.slice(ndarray::s![iy, ix, ..]);
            let lane = lane.as_slice().expect("lane axis is contiguous");
            for (k, &v) in lane.iter().enumerate() {
                let n = v.norm();
                if n == 0.0 {
                    // Zero has no phase; pin it to 0 rad for determinism.
                    cosines[k] = 1.0;
                    sines[k] = 0.0;
                } else {
                    cosines[k] = v.re / n;
                    sines[k] = v.im / n;
                }
            }
            // Two-pass population variance: a stack of identical phasors
            // yields exactly zero spread, so a perfectly coherent pixel maps
            // to exactly 1 instead of 1 − O(√ε).
            let mean_c = cosines.iter().sum::<f64>() * inv_k;
            let mean_s = sines.iter().sum::<f64>() * inv_k;
            let var_c = cosines.iter().map(|c| (c - mean_c).powi(2)).sum::<f64>() * inv_k;
            let var_s = sines.iter().map(|s| (s - mean_s).powi(2)).sum::<f64>() * inv_k;
            let pcf = 1.0 - (var_c + var_s).sqrt();
            out[[iy, ix]] = check_range(pcf, kind, ix, iy)?;
        }
    }
    Ok(CoherenceMap {
        region: region.clone(),
        values: out,
        kind,
    })
}

fn product_map(
    spatial: &CoherenceMap,
    frequency: &CoherenceMap,
    want_spatial: MapKind,
    want_frequency: MapKind,
    result: MapKind,
) -> Result<CoherenceMap, CoherenceError> {
    if spatial.kind != want_spatial {
        return Err(CoherenceError::KindMismatch {
            expected: want_spatial,
            got: spatial.kind,
        });
    }
    if frequency.kind != want_frequency {
        return Err(CoherenceError::KindMismatch {
            expected: want_frequency,
            got: frequency.kind,
        });
    }
    if spatial.region != frequency.region {
        return Err(CoherenceError::RegionMismatch);
    }
    // A product of values in [0, 1] cannot leave [0, 1], so no slack check.
    let values = &spatial.values * &frequency.values;
    Ok(CoherenceMap {
        region: spatial.region.clone(),
        values,
        kind: result,
    })
}
