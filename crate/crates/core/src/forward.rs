//! Synthetic echo generation: direct point-scatterer returns plus an
//! explicit double-bounce term that manufactures multipath ghosts.
//!
//! The model is a linearized (single-scattering) sum over ideal point
//! targets. For transmitter `tx`, receiver `rx`, and tone `f` the direct
//! contribution of a scatterer with reflectivity `g` at `p` is
//!
//! ```text
//! g · exp(−j·2π·f·R/c),   R = |tx→p| + |p→rx|
//! ```
//!
//! with no amplitude spreading by default, so an ideal point target returns
//! the same magnitude on every channel. Each multipath pair (a, b, κ) adds
//! two bounce terms per channel, one for each traversal order:
//!
//! ```text
//! κ·g_a·g_b·exp(−j·2π·f·R_ab/c),   R_ab = |tx→p_a| + |p_a→p_b| + |p_b→rx|
//! κ·g_a·g_b·exp(−j·2π·f·R_ba/c),   R_ba = |tx→p_b| + |p_b→p_a| + |p_a→rx|
//! ```
//!
//! Back-projection focuses these bounce returns at phantom locations away
//! from every real target — the ghosts the coherence filters suppress.

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::geometry::{Channel, GeometryError, SceneConfig};
use crate::geometry::{ArrayGeometry, FrequencyGrid};

#[derive(Debug, Error)]
pub enum ForwardError {
    #[error(transparent)]
    Scene(#[from] GeometryError),
    #[error("non-finite echo sample at channel {channel}, frequency index {freq}; with spreading loss enabled no scatterer may coincide with an array element or bounce partner")]
    NonFiniteSample { channel: usize, freq: usize },
}

/// Multi-channel step-frequency echo data.
///
/// `samples[[c, i]]` is the return on canonical channel `c` at tone `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoData {
    pub geometry: ArrayGeometry,
    pub frequencies: FrequencyGrid,
    pub samples: Array2<Complex64>,
}

impl EchoData {
    pub fn channel_count(&self) -> usize {
        self.samples.nrows()
    }

    pub fn frequency_count(&self) -> usize {
        self.samples.ncols()
    }

    /// Checks the dimension and finiteness invariants.
    pub fn validate(&self) -> Result<(), ForwardError> {
        debug_assert_eq!(self.samples.nrows(), self.geometry.channel_count());
        debug_assert_eq!(self.samples.ncols(), self.frequencies.count());
        for ((c, i), v) in self.samples.indexed_iter() {
            if !v.is_finite() {
                return Err(ForwardError::NonFiniteSample {
                    channel: c,
                    freq: i,
                });
            }
        }
        Ok(())
    }

    /// Mean per-sample power, Σ|E|²/(channels·I).
    pub fn mean_power(&self) -> f64 {
        let n = self.samples.len();
        if n == 0 {
            return 0.0;
        }
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64
    }
}

/// Knobs for the echo synthesis; `Default` gives the ideal no-spreading,
/// multipath-inclusive model the rest of the crate assumes.
#[derive(Debug, Clone, Copy)]
pub struct SimulateOptions {
    /// Scale each term by the reciprocal product of its leg distances
    /// (1/(R_tx·R_rx) for direct returns, all three legs for bounces).
    /// Off by default so channel magnitudes stay equal on a point target.
    pub spreading_loss: bool,
    /// Include the double-bounce terms from the scene's multipath pairs.
    pub multipath: bool,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        Self {
            spreading_loss: false,
            multipath: true,
        }
    }
}

/// Direct Born returns only; any multipath pairs in the scene are ignored.
pub fn simulate_direct(scene: &SceneConfig) -> Result<EchoData, ForwardError> {
    simulate(
        scene,
        SimulateOptions {
            multipath: false,
            ..SimulateOptions::default()
        },
    )
}

/// Direct returns plus both traversal orders of every multipath pair.
pub fn simulate_with_multipath(scene: &SceneConfig) -> Result<EchoData, ForwardError> {
    simulate(scene, SimulateOptions::default())
}

/// One ray path collapsed to the quantities the tone loop needs.
struct PathTerm {
    amplitude: Complex64,
    distance: f64,
}

/// Echo synthesis with explicit options. Channels are filled in parallel;
/// within a channel the terms are summed in a fixed order (scatterers
/// ascending, then multipath pairs ascending, forward bounce before
/// reverse), so the output is identical for any thread count.
pub fn simulate(scene: &SceneConfig, options: SimulateOptions) -> Result<EchoData, ForwardError> {
    scene.validate()?;
    let channels = scene.geometry.channels();
    let nf = scene.frequencies.count();
    let freqs: Vec<f64> = scene.frequencies.frequencies().collect();
    let inv_c = 1.0 / scene.wave_speed;

    let mut flat = vec![Complex64::ZERO; channels.len() * nf];
    flat.par_chunks_mut(nf)
        .zip(channels.par_iter())
        .for_each(|(row, ch)| {
            let terms = channel_terms(scene, ch, options);
            for (i, &f) in freqs.iter().enumerate() {
                let mut acc = Complex64::ZERO;
                for t in &terms {
                    // Forward phase convention: exp(−j·2π·f·R/c).
                    acc += t.amplitude * Complex64::from_polar(1.0, -TAU * f * t.distance * inv_c);
                }
                row[i] = acc;
            }
        });

    let samples = Array2::from_shape_vec((channels.len(), nf), flat)
        .expect("channel-major buffer matches (channels, tones)");
    let echo = EchoData {
        geometry: scene.geometry.clone(),
        frequencies: scene.frequencies.clone(),
        samples,
    };
    echo.validate()?;
    Ok(echo)
}

/// Collapses the scene into per-path (amplitude, distance) terms for one
/// channel, in the canonical summation order.
fn channel_terms(scene: &SceneConfig, ch: &Channel, options: SimulateOptions) -> Vec<PathTerm> {
    let bounce_terms = if options.multipath {
        2 * scene.multipath.len()
    } else {
        0
    };
    let mut terms = Vec::with_capacity(scene.scatterers.len() + bounce_terms);

    for s in &scene.scatterers {
        let d_tx = s.position.distance_to(&ch.tx);
        let d_rx = s.position.distance_to(&ch.rx);
        let mut amplitude = s.reflectivity;
        if options.spreading_loss {
            amplitude /= d_tx * d_rx;
        }
        terms.push(PathTerm {
            amplitude,
            distance: d_tx + d_rx,
        });
    }

    if options.multipath {
        for pair in &scene.multipath {
            let a = &scene.scatterers[pair.first];
            let b = &scene.scatterers[pair.second];
            let base = pair.coupling * a.reflectivity * b.reflectivity;
            let d_ab = a.position.distance_to(&b.position);
            // tx → a → b → rx, then the reciprocal traversal tx → b → a → rx.
            for (first, second) in [(a, b), (b, a)] {
                let d_in = first.position.distance_to(&ch.tx);
                let d_out = second.position.distance_to(&ch.rx);
                let mut amplitude = base;
                if options.spreading_loss {
                    amplitude /= d_in * d_ab * d_out;
                }
                terms.push(PathTerm {
                    amplitude,
                    distance: d_in + d_ab + d_out,
                });
            }
        }
    }

    terms
}

/// Adds circularly-symmetric complex Gaussian noise at the given SNR.
///
/// The noise power is `mean_power / 10^(snr_db/10)`; each sample gets
/// independent real and imaginary components of variance half that. Samples
/// are drawn in channel-major, tone-minor order from a ChaCha stream, so a
/// fixed seed gives a bit-identical result on every run and platform. An
/// all-zero echo (or infinite SNR) is returned unchanged.
pub fn add_noise(echo: &EchoData, snr_db: f64, seed: u64) -> EchoData {
    let noise_power = echo.mean_power() / 10f64.powf(snr_db / 10.0);
    let sigma = (noise_power / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = echo.clone();
    for v in out.samples.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v += Complex64::new(sigma * re, sigma * im);
    }
    out
}
