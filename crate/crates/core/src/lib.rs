//! Step-frequency array imaging: echo synthesis, back-projection image
//! formation, and coherence-factor filtering.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`geometry`] describes scenes: scatterers, multipath couplings, the
//!    transmit/receive array, the frequency ladder, and the image region.
//! 2. [`forward`] synthesises multi-channel step-frequency echo data from a
//!    scene, optionally with additive complex Gaussian noise.
//! 3. [`backprojection`] focuses echoes into complex images, either channel
//!    by channel or frequency by frequency, keeping the per-channel or
//!    per-frequency stacks that the coherence filters need.
//! 4. [`coherence`] turns a stack into a per-pixel weighting map — magnitude
//!    based or phase based, over channels, over frequencies, or both — and
//!    applies it to the focused image.
//! 5. [`metrics`] quantifies the result: image cuts, peak sidelobe ratios,
//!    ghost levels, and before/after suppression deltas.
//!
//! [`presets`] bundles the reference measurement configuration used
//! throughout the tests and the command-line tool.

pub mod backprojection;
pub mod coherence;
pub mod forward;
pub mod geometry;
pub mod metrics;
pub mod presets;

pub use geometry::SPEED_OF_LIGHT;
