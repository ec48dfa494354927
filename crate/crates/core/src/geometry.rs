//! Array layouts, the step-frequency ladder, the imaging region, and scene
//! descriptions.
//!
//! All coordinates are 2-D Cartesian in metres with the scene center at the
//! origin. Everything here is immutable after construction and safe to share
//! across threads; the operations are pure functions.

use num_complex::Complex64;
use thiserror::Error;

/// Exact SI speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("position must be finite, got ({x}, {y})")]
    NonFinitePosition { x: f64, y: f64 },
    #[error("array needs at least one transmitter and one receiver")]
    EmptyArray,
    #[error("monostatic array needs identical transmit/receive element counts ({m} vs {n})")]
    MonostaticMismatch { m: usize, n: usize },
    #[error("arc radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("arc aperture angle must be non-negative, got {0}")]
    NegativeAperture(f64),
    #[error("element count must be at least 1")]
    EmptyArc,
    #[error("start frequency must be positive and finite, got {0}")]
    BadStartFrequency(f64),
    #[error("frequency step must be positive and finite, got {0}")]
    BadFrequencyStep(f64),
    #[error("frequency count must be at least 1")]
    EmptyFrequencyGrid,
    #[error("region extent must satisfy min < max, got [{min}, {max}]")]
    BadRegionExtent { min: f64, max: f64 },
    #[error("region pixel counts must be at least 1")]
    EmptyRegion,
    #[error("scene needs at least one scatterer")]
    NoScatterers,
    #[error("scatterer reflectivity must be finite")]
    NonFiniteReflectivity,
    #[error("wave speed must be positive and finite, got {0}")]
    BadWaveSpeed(f64),
    #[error("multipath pair ({first}, {second}) references a scatterer out of range (scene has {count})")]
    BadMultipathIndex {
        first: usize,
        second: usize,
        count: usize,
    },
    #[error("multipath pair must couple two distinct scatterers, got index {0} twice")]
    SelfCoupling(usize),
    #[error("multipath coupling must be finite")]
    NonFiniteCoupling,
}

/// A point in the imaging plane, metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position2D {
    pub x: f64,
    pub y: f64,
}

impl Position2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Euclidean distance to `other`.
    pub fn distance_to(&self, other: &Position2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Two-way path length: transmitter to target plus target to receiver.
///
/// Symmetric under swapping `tx` and `rx`, and never smaller than the
/// straight-line transmitter-receiver distance.
pub fn two_way_distance(target: Position2D, tx: Position2D, rx: Position2D) -> f64 {
    target.distance_to(&tx) + target.distance_to(&rx)
}

/// Which transmit/receive pairings a geometry yields echo samples for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMode {
    /// Every (m, n) pair; channel index m * N + n.
    Full,
    /// Co-located elements, m = n only; channel index m. Models a single
    /// radar on a turntable arc.
    Monostatic,
}

/// One transmit/receive pairing in canonical channel order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub tx: Position2D,
    pub rx: Position2D,
}

/// Ordered transmitter and receiver positions plus the channel pairing rule.
///
/// The element ordering is fixed at construction; channel indices derived
/// from it are the canonical ordering used by echo tensors and image stacks.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    transmitters: Vec<Position2D>,
    receivers: Vec<Position2D>,
    mode: ChannelMode,
}

impl ArrayGeometry {
    /// Full MIMO pairing: every transmitter with every receiver.
    pub fn full(
        transmitters: Vec<Position2D>,
        receivers: Vec<Position2D>,
    ) -> Result<Self, GeometryError> {
        Self::with_mode(transmitters, receivers, ChannelMode::Full)
    }

    /// Monostatic pairing of co-located elements (transmit list doubles as
    /// the receive list).
    pub fn monostatic(positions: Vec<Position2D>) -> Result<Self, GeometryError> {
        Self::with_mode(positions.clone(), positions, ChannelMode::Monostatic)
    }

    pub fn with_mode(
        transmitters: Vec<Position2D>,
        receivers: Vec<Position2D>,
        mode: ChannelMode,
    ) -> Result<Self, GeometryError> {
        if transmitters.is_empty() || receivers.is_empty() {
            return Err(GeometryError::EmptyArray);
        }
        if mode == ChannelMode::Monostatic && transmitters.len() != receivers.len() {
            return Err(GeometryError::MonostaticMismatch {
                m: transmitters.len(),
                n: receivers.len(),
            });
        }
        for p in transmitters.iter().chain(receivers.iter()) {
            if !p.is_finite() {
                return Err(GeometryError::NonFinitePosition { x: p.x, y: p.y });
            }
        }
        Ok(Self {
            transmitters,
            receivers,
            mode,
        })
    }

    pub fn transmitters(&self) -> &[Position2D] {
        &self.transmitters
    }

    pub fn receivers(&self) -> &[Position2D] {
        &self.receivers
    }

    pub fn mode(&self) -> ChannelMode {
        self.mode
    }

    pub fn channel_count(&self) -> usize {
        match self.mode {
            ChannelMode::Full => self.transmitters.len() * self.receivers.len(),
            ChannelMode::Monostatic => self.transmitters.len(),
        }
    }

    /// Channels in canonical order (transmitter-major for full MIMO).
    pub fn channels(&self) -> Vec<Channel> {
        match self.mode {
            ChannelMode::Full => {
                let mut out = Vec::with_capacity(self.channel_count());
                for &tx in &self.transmitters {
                    for &rx in &self.receivers {
                        out.push(Channel { tx, rx });
                    }
                }
                out
            }
            ChannelMode::Monostatic => self
                .transmitters
                .iter()
                .map(|&p| Channel { tx: p, rx: p })
                .collect(),
        }
    }
}

/// The step-frequency ladder f_i = f0 + i * delta_f, i = 0..count-1.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    f0: f64,
    delta_f: f64,
    count: usize,
}

impl FrequencyGrid {
    pub fn new(f0: f64, delta_f: f64, count: usize) -> Result<Self, GeometryError> {
        if !(f0.is_finite() && f0 > 0.0) {
            return Err(GeometryError::BadStartFrequency(f0));
        }
        if !(delta_f.is_finite() && delta_f > 0.0) {
            return Err(GeometryError::BadFrequencyStep(delta_f));
        }
        if count == 0 {
            return Err(GeometryError::EmptyFrequencyGrid);
        }
        Ok(Self { f0, delta_f, count })
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn delta_f(&self) -> f64 {
        self.delta_f
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn frequency(&self, i: usize) -> f64 {
        self.f0 + i as f64 * self.delta_f
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.frequency(i))
    }

    /// Occupied bandwidth, first to last tone.
    pub fn bandwidth(&self) -> f64 {
        (self.count - 1) as f64 * self.delta_f
    }
}

/// Rectangular reconstruction region sampled at pixel centers.
///
/// Pixel (ix, iy) has center (x_min + (ix+0.5)*dx, y_min + (iy+0.5)*dy) and
/// row-major index iy * nx + ix.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRegion {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl ImageRegion {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self, GeometryError> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(GeometryError::BadRegionExtent {
                min: x_min,
                max: x_max,
            });
        }
        if !(y_min.is_finite() && y_max.is_finite() && y_min < y_max) {
            return Err(GeometryError::BadRegionExtent {
                min: y_min,
                max: y_max,
            });
        }
        if nx == 0 || ny == 0 {
            return Err(GeometryError::EmptyRegion);
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn pixel_count(&self) -> usize {
        self.nx * self.ny
    }

    /// Pixel pitch along x.
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    /// Pixel pitch along y.
    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn pixel_x(&self, ix: usize) -> f64 {
        self.x_min + (ix as f64 + 0.5) * self.dx()
    }

    pub fn pixel_y(&self, iy: usize) -> f64 {
        self.y_min + (iy as f64 + 0.5) * self.dy()
    }

    pub fn pixel_center(&self, ix: usize, iy: usize) -> Position2D {
        Position2D::new(self.pixel_x(ix), self.pixel_y(iy))
    }

    /// Row-major index of pixel (ix, iy).
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// Inverse of [`index`](Self::index).
    pub fn pixel_at(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    pub fn contains(&self, p: Position2D) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Column index whose pixel center is nearest to `x`, clamped in range.
    pub fn nearest_ix(&self, x: f64) -> usize {
        let raw = ((x - self.x_min) / self.dx() - 0.5).round();
        raw.clamp(0.0, (self.nx - 1) as f64) as usize
    }

    /// Row index whose pixel center is nearest to `y`, clamped in range.
    pub fn nearest_iy(&self, y: f64) -> usize {
        let raw = ((y - self.y_min) / self.dy() - 0.5).round();
        raw.clamp(0.0, (self.ny - 1) as f64) as usize
    }
}

/// An ideal point scatterer with a complex reflectivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    pub position: Position2D,
    pub reflectivity: Complex64,
}

impl Scatterer {
    pub fn new(position: Position2D, reflectivity: Complex64) -> Self {
        Self {
            position,
            reflectivity,
        }
    }

    /// Unit reflectivity point at (x, y).
    pub fn unit(x: f64, y: f64) -> Self {
        Self::new(Position2D::new(x, y), Complex64::new(1.0, 0.0))
    }
}

/// A double-bounce interaction between two scatterers, by index into the
/// scene's scatterer list. The coupling scales the bounce amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipathPair {
    pub first: usize,
    pub second: usize,
    pub coupling: Complex64,
}

/// A complete synthetic measurement description: targets, interactions,
/// array, frequency ladder, reconstruction region, and propagation speed.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub scatterers: Vec<Scatterer>,
    pub multipath: Vec<MultipathPair>,
    pub geometry: ArrayGeometry,
    pub frequencies: FrequencyGrid,
    pub region: ImageRegion,
    pub wave_speed: f64,
}

impl SceneConfig {
    /// Scene with the exact SI wave speed and no multipath interactions.
    pub fn new(
        scatterers: Vec<Scatterer>,
        geometry: ArrayGeometry,
        frequencies: FrequencyGrid,
        region: ImageRegion,
    ) -> Self {
        Self {
            scatterers,
            multipath: Vec::new(),
            geometry,
            frequencies,
            region,
            wave_speed: SPEED_OF_LIGHT,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.wave_speed.is_finite() && self.wave_speed > 0.0) {
            return Err(GeometryError::BadWaveSpeed(self.wave_speed));
        }
        if self.scatterers.is_empty() {
            return Err(GeometryError::NoScatterers);
        }
        for s in &self.scatterers {
            if !s.position.is_finite() {
                return Err(GeometryError::NonFinitePosition {
                    x: s.position.x,
                    y: s.position.y,
                });
            }
            if !s.reflectivity.is_finite() {
                return Err(GeometryError::NonFiniteReflectivity);
            }
        }
        for pair in &self.multipath {
            if pair.first >= self.scatterers.len() || pair.second >= self.scatterers.len() {
                return Err(GeometryError::BadMultipathIndex {
                    first: pair.first,
                    second: pair.second,
                    count: self.scatterers.len(),
                });
            }
            if pair.first == pair.second {
                return Err(GeometryError::SelfCoupling(pair.first));
            }
            if !pair.coupling.is_finite() {
                return Err(GeometryError::NonFiniteCoupling);
            }
        }
        Ok(())
    }
}

/// Receiver positions spread uniformly in angle over an arc of the given
/// radius around the scene origin.
///
/// Angles are in degrees, measured counter-clockwise from the +x axis; the
/// elements span `[center - aperture/2, center + aperture/2]`. A single
/// element sits exactly at the center angle.
pub fn arc_receiver_array(
    radius: f64,
    aperture_angle_deg: f64,
    count: usize,
    center_angle_deg: f64,
) -> Result<Vec<Position2D>, GeometryError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(GeometryError::NonPositiveRadius(radius));
    }
    if !(aperture_angle_deg.is_finite() && aperture_angle_deg >= 0.0) {
        return Err(GeometryError::NegativeAperture(aperture_angle_deg));
    }
    if count == 0 {
        return Err(GeometryError::EmptyArc);
    }
    let positions = (0..count)
        .map(|k| {
            let angle_deg = if count == 1 {
                center_angle_deg
            } else {
                center_angle_deg - aperture_angle_deg / 2.0
                    + k as f64 * aperture_angle_deg / (count - 1) as f64
            };
            let angle = angle_deg.to_radians();
            Position2D::new(radius * angle.cos(), radius * angle.sin())
        })
        .collect();
    Ok(positions)
}

/// Monostatic arc: one co-located transmit/receive element replicated at
/// `count` positions on an arc centered on the +y axis (center angle 90°).
/// The channel set is restricted to m = n.
pub fn turntable_geometry(
    radius: f64,
    angle_span_deg: f64,
    count: usize,
) -> Result<ArrayGeometry, GeometryError> {
    let positions = arc_receiver_array(radius, angle_span_deg, count, 90.0)?;
    ArrayGeometry::monostatic(positions)
}
