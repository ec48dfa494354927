//! Randomized invariant checks across the synthesis → imaging → filtering
//! pipeline: algebraic identities of the geometry helpers, linearity of the
//! forward model, equivalence of the two back-projection summation
//! orderings, and the range/invariance guarantees of the coherence maps.

use ndarray::Array3;
use num_complex::Complex64;
use proptest::prelude::*;

use rcf_core::backprojection::{
    channel_images, frequency_images, image_from_channels, image_from_frequencies,
    ChannelImageStack, FrequencyImageStack, ImageGrid,
};
use rcf_core::coherence::{
    apply_map, cf_2d, cf_frequency, cf_spatial, pcf_2d, pcf_frequency, pcf_spatial,
};
use rcf_core::forward::simulate_direct;
use rcf_core::geometry::{
    arc_receiver_array, turntable_geometry, two_way_distance, ArrayGeometry, FrequencyGrid,
    ImageRegion, Position2D, Scatterer, SceneConfig,
};
use rcf_core::metrics::{extract_cut, peak_sidelobe_ratio, CutAxis};

fn position() -> impl Strategy<Value = Position2D> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Position2D::new(x, y))
}

fn complex_within(mag: f64) -> impl Strategy<Value = Complex64> {
    (-mag..mag, -mag..mag).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Per-pixel layer values for a one-pixel stack.
fn lane(depth: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex_within(1e3), depth)
}

fn single_pixel_region() -> ImageRegion {
    ImageRegion::new(-0.5, 0.5, -0.5, 0.5, 1, 1).unwrap()
}

fn channel_lane(values: &[Complex64]) -> ChannelImageStack {
    let mut stack = Array3::from_elem((1, 1, values.len()), Complex64::ZERO);
    for (k, &v) in values.iter().enumerate() {
        stack[[0, 0, k]] = v;
    }
    ChannelImageStack {
        region: single_pixel_region(),
        values: stack,
    }
}

fn frequency_lane(values: &[Complex64]) -> FrequencyImageStack {
    let mut stack = Array3::from_elem((1, 1, values.len()), Complex64::ZERO);
    for (k, &v) in values.iter().enumerate() {
        stack[[0, 0, k]] = v;
    }
    FrequencyImageStack {
        region: single_pixel_region(),
        frequencies: FrequencyGrid::new(1e9, 1e6, values.len()).unwrap(),
        values: stack,
    }
}

/// A small random scene: 1–3 scatterers inside the region, a handful of
/// channels (either pairing mode), and up to 8 tones near X band.
fn small_scene() -> impl Strategy<Value = SceneConfig> {
    let scatterers = prop::collection::vec(
        (-0.8..0.8f64, -0.8..0.8f64, 0.2..1.0f64, -1.0..1.0f64),
        1..=3,
    );
    (
        scatterers,
        2..=4usize,
        1..=8usize,
        any::<bool>(),
        2.0..10.0f64,
    )
        .prop_map(|(scats, elements, tones, monostatic, aperture)| {
            let scatterers = scats
                .into_iter()
                .map(|(x, y, re, im)| Scatterer::new(Position2D::new(x, y), Complex64::new(re, im)))
                .collect();
            let geometry = if monostatic {
                turntable_geometry(10.0, aperture, elements).unwrap()
            } else {
                let tx = arc_receiver_array(10.0, aperture, 2, 90.0).unwrap();
                let rx = arc_receiver_array(10.0, aperture, elements, 90.0).unwrap();
                ArrayGeometry::full(tx, rx).unwrap()
            };
            SceneConfig::new(
                scatterers,
                geometry,
                FrequencyGrid::new(8e9, 1e9 / 63.0, tones).unwrap(),
                ImageRegion::new(-1.0, 1.0, -1.0, 1.0, 16, 16).unwrap(),
            )
        })
}

fn linf_gap(a: &ImageGrid, b: &ImageGrid) -> (f64, f64) {
    let gap = a
        .pixels
        .iter()
        .zip(b.pixels.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    (gap, a.peak_magnitude())
}

proptest! {
    #[test]
    fn two_way_distance_is_symmetric(t in position(), a in position(), b in position()) {
        prop_assert_eq!(two_way_distance(t, a, b), two_way_distance(t, b, a));
    }

    #[test]
    fn two_way_distance_obeys_the_triangle_bound(t in position(), a in position(), b in position()) {
        let via_target = two_way_distance(t, a, b);
        let direct = a.distance_to(&b);
        prop_assert!(via_target >= direct - 1e-9 * direct.max(1.0));
    }

    #[test]
    fn pixel_indexing_is_a_bijection(
        nx in 1..40usize,
        ny in 1..40usize,
        ix in 0..40usize,
        iy in 0..40usize,
    ) {
        let ix = ix % nx;
        let iy = iy % ny;
        let region = ImageRegion::new(0.0, 1.0, 0.0, 1.0, nx, ny).unwrap();
        let index = region.index(ix, iy);
        prop_assert!(index < region.pixel_count());
        prop_assert_eq!(region.pixel_at(index), (ix, iy));
    }

    #[test]
    fn frequency_ladder_is_strictly_increasing(
        f0 in 1e6..1e10f64,
        step in 1e3..1e8f64,
        count in 1..128usize,
    ) {
        let grid = FrequencyGrid::new(f0, step, count).unwrap();
        prop_assert_eq!(grid.frequency(0), f0);
        let values: Vec<f64> = grid.frequencies().collect();
        prop_assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn forward_model_is_linear_in_the_scene(scene in small_scene()) {
        prop_assume!(scene.scatterers.len() >= 2);
        let (first, rest) = scene.scatterers.split_first().unwrap();
        let mut head = scene.clone();
        head.scatterers = vec![*first];
        let mut tail = scene.clone();
        tail.scatterers = rest.to_vec();

        let whole = simulate_direct(&scene).unwrap();
        let head = simulate_direct(&head).unwrap();
        let tail = simulate_direct(&tail).unwrap();
        for ((a, b), w) in head.samples.iter().zip(tail.samples.iter()).zip(whole.samples.iter()) {
            prop_assert!((a + b - w).norm() <= 1e-12 * w.norm().max(1.0));
        }
    }

    #[test]
    fn summation_orderings_build_the_same_image(scene in small_scene()) {
        let echo = simulate_direct(&scene).unwrap();
        let by_channel =
            image_from_channels(&channel_images(&echo, &scene.region).unwrap()).unwrap();
        let by_tone =
            image_from_frequencies(&frequency_images(&echo, &scene.region).unwrap()).unwrap();
        let (gap, peak) = linf_gap(&by_channel, &by_tone);
        prop_assume!(peak > 0.0);
        prop_assert!(gap <= 1e-12 * peak, "gap {} vs peak {}", gap, peak);
    }

    #[test]
    fn coherent_numerators_agree_between_axes(scene in small_scene()) {
        let echo = simulate_direct(&scene).unwrap();
        let channels = channel_images(&echo, &scene.region).unwrap();
        let tones = frequency_images(&echo, &scene.region).unwrap();
        let (ny, nx) = (scene.region.ny(), scene.region.nx());
        let mut peak_power = 0.0f64;
        let mut powers = Vec::with_capacity(ny * nx);
        for iy in 0..ny {
            for ix in 0..nx {
                let over_channels: Complex64 =
                    channels.values.slice(ndarray::s![iy, ix, ..]).iter().sum();
                let over_tones: Complex64 =
                    tones.values.slice(ndarray::s![iy, ix, ..]).iter().sum();
                let a = over_channels.norm_sqr();
                let b = over_tones.norm_sqr();
                peak_power = peak_power.max(a);
                powers.push((a, b));
            }
        }
        prop_assume!(peak_power > 0.0);
        for (a, b) in powers {
            prop_assert!((a - b).abs() <= 1e-12 * peak_power);
        }
    }

    #[test]
    fn coherence_maps_stay_in_unit_range(values in lane(1..=16)) {
        let cf = cf_spatial(&channel_lane(&values)).unwrap();
        let pcf = pcf_spatial(&channel_lane(&values)).unwrap();
        for map in [cf, pcf] {
            let v = map.values[[0, 0]];
            prop_assert!((0.0..=1.0).contains(&v), "{} out of range", v);
        }
    }

    #[test]
    fn global_phase_rotation_changes_nothing(values in lane(1..=12), phase in -3.14..3.14f64) {
        let rotor = Complex64::from_polar(1.0, phase);
        let rotated: Vec<Complex64> = values.iter().map(|v| v * rotor).collect();
        let cf_a = cf_spatial(&channel_lane(&values)).unwrap().values[[0, 0]];
        let cf_b = cf_spatial(&channel_lane(&rotated)).unwrap().values[[0, 0]];
        let pcf_a = pcf_spatial(&channel_lane(&values)).unwrap().values[[0, 0]];
        let pcf_b = pcf_spatial(&channel_lane(&rotated)).unwrap().values[[0, 0]];
        prop_assert!((cf_a - cf_b).abs() < 1e-9);
        prop_assert!((pcf_a - pcf_b).abs() < 1e-9);
    }

    #[test]
    fn pcf_ignores_per_layer_amplitudes(
        values in lane(2..=12),
        scales in prop::collection::vec(0.01..100.0f64, 12),
    ) {
        let scaled: Vec<Complex64> = values
            .iter()
            .zip(scales.iter())
            .map(|(v, &s)| v * s)
            .collect();
        prop_assume!(scaled.len() == values.len());
        let a = pcf_spatial(&channel_lane(&values)).unwrap().values[[0, 0]];
        let b = pcf_spatial(&channel_lane(&scaled)).unwrap().values[[0, 0]];
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn unit_magnitude_links_the_two_factor_families(
        phases in prop::collection::vec(-3.14159..3.14159f64, 2..=16),
    ) {
        let values: Vec<Complex64> =
            phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
        let k = values.len() as f64;
        let mean = values.iter().sum::<Complex64>() / k;
        // Reject near-degenerate stacks: d(1−√(1−CF))/dCF blows up as the
        // phase spread vanishes and the comparison stops being meaningful.
        prop_assume!(1.0 - mean.norm_sqr() > 1e-6);

        let cf = cf_spatial(&channel_lane(&values)).unwrap().values[[0, 0]];
        let pcf = pcf_spatial(&channel_lane(&values)).unwrap().values[[0, 0]];
        prop_assert!((cf - mean.norm_sqr()).abs() < 1e-12);
        prop_assert!((pcf - (1.0 - (1.0 - cf).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_maps_are_dominated_by_their_factors(
        channel_values in lane(1..=10),
        tone_values in lane(1..=10),
    ) {
        let cf = cf_spatial(&channel_lane(&channel_values)).unwrap();
        let cff = cf_frequency(&frequency_lane(&tone_values)).unwrap();
        let cf2d = cf_2d(&cf, &cff).unwrap();
        prop_assert!(
            cf2d.values[[0, 0]] <= cf.values[[0, 0]].min(cff.values[[0, 0]]) + 1e-15
        );

        let pcf = pcf_spatial(&channel_lane(&channel_values)).unwrap();
        let pcff = pcf_frequency(&frequency_lane(&tone_values)).unwrap();
        let pcf2d = pcf_2d(&pcf, &pcff).unwrap();
        prop_assert!(
            pcf2d.values[[0, 0]] <= pcf.values[[0, 0]].min(pcff.values[[0, 0]]) + 1e-15
        );
    }

    #[test]
    fn depth_one_stacks_are_perfectly_coherent(value in complex_within(1e3)) {
        prop_assume!(value.norm() > 0.0);
        let stack = channel_lane(&[value]);
        prop_assert_eq!(cf_spatial(&stack).unwrap().values[[0, 0]], 1.0);
        prop_assert_eq!(pcf_spatial(&stack).unwrap().values[[0, 0]], 1.0);
    }

    #[test]
    fn weighting_never_amplifies(values in lane(1..=8)) {
        let stack = channel_lane(&values);
        let image = image_from_channels(&stack).unwrap();
        for map in [cf_spatial(&stack).unwrap(), pcf_spatial(&stack).unwrap()] {
            let enhanced = apply_map(&image, &map).unwrap();
            for (e, o) in enhanced.pixels.iter().zip(image.pixels.iter()) {
                prop_assert!(e.norm() <= o.norm() * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn pslr_is_invariant_to_image_scaling(scene in small_scene(), scale in 0.01..100.0f64) {
        let echo = simulate_direct(&scene).unwrap();
        let image = image_from_channels(&channel_images(&echo, &scene.region).unwrap()).unwrap();
        prop_assume!(image.peak_magnitude() > 0.0);
        let mut scaled = image.clone();
        for v in scaled.pixels.iter_mut() {
            *v *= Complex64::new(0.0, scale);
        }
        let (ix, iy) = image.peak_pixel();
        let through = image.region.pixel_center(ix, iy);
        for axis in [CutAxis::Range, CutAxis::Azimuth] {
            let a = peak_sidelobe_ratio(&extract_cut(&image, through, axis).unwrap()).unwrap();
            let b = peak_sidelobe_ratio(&extract_cut(&scaled, through, axis).unwrap()).unwrap();
            let close = (a - b).abs() < 1e-9 || (a.is_infinite() && b.is_infinite());
            prop_assert!(close, "{} vs {}", a, b);
        }
    }

    #[test]
    fn simulation_is_reproducible(scene in small_scene()) {
        let a = simulate_direct(&scene).unwrap();
        let b = simulate_direct(&scene).unwrap();
        prop_assert_eq!(a.samples, b.samples);
    }
}
