//! Reference measurement configurations shared by the tests, benchmarks,
//! and the bundled scene files.
//!
//! The canonical setup is an X-band step-frequency arc: 64 tones spanning
//! 8–9 GHz inclusive (step 1 GHz/63 ≈ 15.873 MHz) and an 8° receive arc of
//! 81 elements at 10 m radius centred on the +y axis, either fed by a
//! single transmitter at (0, 10) or operated monostatically. The imaging
//! region is the 2 m × 2 m square around the origin.
//!
//! Point-target scatterers are placed exactly on a pixel centre of the
//! default 256×256 grid so the focused peak and the coherence maps hit
//! their ideal values to machine precision.

use num_complex::Complex64;

use crate::geometry::{
    arc_receiver_array, turntable_geometry, ArrayGeometry, FrequencyGrid, ImageRegion,
    MultipathPair, Position2D, Scatterer, SceneConfig,
};

/// Arc radius, metres.
pub const ARC_RADIUS: f64 = 10.0;
/// Receive aperture, degrees.
pub const APERTURE_DEG: f64 = 8.0;
/// Number of receive elements on the arc.
pub const RECEIVER_COUNT: usize = 81;
/// Number of stepped tones.
pub const TONE_COUNT: usize = 64;
/// First tone, Hz.
pub const START_FREQUENCY_HZ: f64 = 8e9;
/// Last tone, Hz (the 64 tones span the band inclusively).
pub const STOP_FREQUENCY_HZ: f64 = 9e9;
/// Default image sampling along each axis.
pub const DEFAULT_PIXELS: usize = 256;

/// 64 tones from 8 to 9 GHz, endpoints included.
pub fn reference_frequencies() -> FrequencyGrid {
    let step = (STOP_FREQUENCY_HZ - START_FREQUENCY_HZ) / (TONE_COUNT - 1) as f64;
    FrequencyGrid::new(START_FREQUENCY_HZ, step, TONE_COUNT).expect("constants are valid")
}

/// Single transmitter at the arc centre angle, 81 receivers on the arc.
pub fn simo_geometry() -> ArrayGeometry {
    let tx = vec![Position2D::new(0.0, ARC_RADIUS)];
    let rx = arc_receiver_array(ARC_RADIUS, APERTURE_DEG, RECEIVER_COUNT, 90.0)
        .expect("constants are valid");
    ArrayGeometry::full(tx, rx).expect("constants are valid")
}

/// One co-located transmit/receive element swept over the same arc.
pub fn monostatic_geometry() -> ArrayGeometry {
    turntable_geometry(ARC_RADIUS, APERTURE_DEG, RECEIVER_COUNT).expect("constants are valid")
}

/// The [−1, 1] × [−1, 1] metre imaging square at n × n pixels.
pub fn square_region(n: usize) -> ImageRegion {
    ImageRegion::new(-1.0, 1.0, -1.0, 1.0, n, n).expect("pixel count must be nonzero")
}

/// The pixel centre nearest the origin (exact centre on odd grids, the
/// upper-right neighbour on even ones).
pub fn central_pixel(region: &ImageRegion) -> Position2D {
    region.pixel_center(region.nx() / 2, region.ny() / 2)
}

/// A unit point target on a pixel centre, illuminated by the SIMO arc.
pub fn point_scene_simo(n: usize) -> SceneConfig {
    let region = square_region(n);
    let target = central_pixel(&region);
    SceneConfig::new(
        vec![Scatterer::unit(target.x, target.y)],
        simo_geometry(),
        reference_frequencies(),
        region,
    )
}

/// A unit point target on a pixel centre, observed monostatically.
pub fn point_scene_monostatic(n: usize) -> SceneConfig {
    let region = square_region(n);
    let target = central_pixel(&region);
    SceneConfig::new(
        vec![Scatterer::unit(target.x, target.y)],
        monostatic_geometry(),
        reference_frequencies(),
        region,
    )
}

/// Coupling used by the bundled double-bounce scene.
pub const GHOST_COUPLING: f64 = 0.3;

/// Three point targets with one double-bounce interaction, SIMO arc.
///
/// The coupled pair sits symmetrically about the y axis; its bounce path is
/// roughly 0.9 m longer than the direct returns. With the single fixed
/// transmitter, each bounce term mimics a point at its receive-leg
/// scatterer seen through that surplus, so back-projection focuses the
/// spurious energy in twin ghosts near (±0.46, −0.82) — well separated
/// from all three true targets and inside the imaging square. Positions
/// are pixel centres of the default 256×256 grid.
pub fn ghost_scene(n: usize) -> SceneConfig {
    let mut scene = SceneConfig::new(
        vec![
            Scatterer::unit(-0.44921875, -0.34765625),
            Scatterer::unit(0.44921875, -0.34765625),
            Scatterer::unit(0.00390625, 0.40234375),
        ],
        simo_geometry(),
        reference_frequencies(),
        square_region(n),
    );
    scene.multipath.push(MultipathPair {
        first: 0,
        second: 1,
        coupling: Complex64::new(GHOST_COUPLING, 0.0),
    });
    scene
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ChannelMode;

    #[test]
    fn frequency_ladder_spans_the_band_inclusively() {
        let grid = reference_frequencies();
        assert_eq!(grid.count(), 64);
        assert_eq!(grid.f0(), 8e9);
        assert!((grid.frequency(63) - 9e9).abs() < 1e-3);
        assert!((grid.delta_f() - 1e9 / 63.0).abs() < 1e-6);
    }

    #[test]
    fn simo_geometry_matches_reference_counts() {
        let g = simo_geometry();
        assert_eq!(g.mode(), ChannelMode::Full);
        assert_eq!(g.transmitters().len(), 1);
        assert_eq!(g.receivers().len(), 81);
        assert_eq!(g.channel_count(), 81);
        let tx = g.transmitters()[0];
        assert_eq!((tx.x, tx.y), (0.0, 10.0));
    }

    #[test]
    fn monostatic_geometry_matches_reference_counts() {
        let g = monostatic_geometry();
        assert_eq!(g.mode(), ChannelMode::Monostatic);
        assert_eq!(g.channel_count(), 81);
    }

    #[test]
    fn point_scenes_sit_on_pixel_centres() {
        for scene in [point_scene_simo(256), point_scene_monostatic(256)] {
            scene.validate().unwrap();
            let p = scene.scatterers[0].position;
            let centre = scene.region.pixel_center(128, 128);
            assert_eq!(p, centre);
        }
    }

    #[test]
    fn ghost_scene_positions_are_pixel_centres() {
        let scene = ghost_scene(256);
        scene.validate().unwrap();
        let r = &scene.region;
        assert_eq!(scene.scatterers[0].position, r.pixel_center(70, 83));
        assert_eq!(scene.scatterers[1].position, r.pixel_center(185, 83));
        assert_eq!(scene.scatterers[2].position, r.pixel_center(128, 179));
        assert_eq!(scene.multipath.len(), 1);
    }
}
