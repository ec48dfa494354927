//! Line-oriented scene description files.
//!
//! The grammar is `key = value` lines grouped under `[section]` headers,
//! with `#` starting a comment anywhere on a line. The `[array]`,
//! `[frequencies]`, and `[region]` sections appear once; each `[scatterer]`
//! and `[multipath]` section adds one entry. All quantities are SI.
//!
//! ```text
//! [array]
//! mode = full                 # or monostatic
//! tx = 0,10                   # full mode: explicit transmit element at (x, y)
//! rx_arc = 10,8,81            # receivers: radius, aperture°, count[, centre°=90]
//! # monostatic mode instead uses `elements = x,y` / `arc = r,a,n[,c]`
//!
//! [frequencies]
//! start_hz = 8e9
//! stop_hz = 9e9               # inclusive endpoint (alternative: step_hz = ...)
//! count = 64
//!
//! [region]
//! x = -1,1
//! y = -1,1
//! pixels = 256,256
//!
//! [scatterer]
//! position = 0.00390625,0.00390625
//! reflectivity = 1            # optional, `re` or `re,im`, default 1
//!
//! [multipath]
//! pair = 0,1                  # indices into the scatterers, in file order
//! coupling = 0.3              # optional, default 1
//! ```

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use rcf_core::geometry::{
    arc_receiver_array, ArrayGeometry, ChannelMode, FrequencyGrid, ImageRegion, MultipathPair,
    Position2D, Scatterer, SceneConfig,
};

/// A parse failure, annotated with the file and line it came from.
#[derive(Debug)]
pub struct SceneError {
    pub origin: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: {}", self.origin, line, self.message),
            None => write!(f, "{}: {}", self.origin, self.message),
        }
    }
}

impl std::error::Error for SceneError {}

pub fn parse_scene_file(path: &Path) -> Result<SceneConfig, SceneError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| SceneError {
        origin: origin.clone(),
        line: None,
        message: e.to_string(),
    })?;
    parse_scene_str(&text, &origin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Array,
    Frequencies,
    Region,
    Scatterer,
    Multipath,
}

#[derive(Default)]
struct ArrayBuilder {
    mode: Option<ChannelMode>,
    transmitters: Vec<Position2D>,
    receivers: Vec<Position2D>,
    elements: Vec<Position2D>,
}

#[derive(Default)]
struct FrequencyBuilder {
    start_hz: Option<f64>,
    stop_hz: Option<f64>,
    step_hz: Option<f64>,
    count: Option<usize>,
}

#[derive(Default)]
struct RegionBuilder {
    x: Option<(f64, f64)>,
    y: Option<(f64, f64)>,
    pixels: Option<(usize, usize)>,
}

struct ScattererBuilder {
    position: Option<Position2D>,
    reflectivity: Complex64,
    header_line: usize,
}

struct MultipathBuilder {
    pair: Option<(usize, usize)>,
    pair_line: usize,
    coupling: Complex64,
    header_line: usize,
}

struct Parser<'a> {
    origin: &'a str,
    section: Option<Section>,
    array: Option<ArrayBuilder>,
    frequencies: Option<FrequencyBuilder>,
    frequencies_line: usize,
    region: Option<RegionBuilder>,
    region_line: usize,
    scatterers: Vec<Scatterer>,
    current_scatterer: Option<ScattererBuilder>,
    multipath: Vec<(MultipathPair, usize)>,
    current_multipath: Option<MultipathBuilder>,
}

pub fn parse_scene_str(text: &str, origin: &str) -> Result<SceneConfig, SceneError> {
    let mut p = Parser {
        origin,
        section: None,
        array: None,
        frequencies: None,
        frequencies_line: 0,
        region: None,
        region_line: 0,
        scatterers: Vec::new(),
        current_scatterer: None,
        multipath: Vec::new(),
        current_multipath: None,
    };

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| p.err(line_no, "unterminated section header"))?
                .trim();
            p.open_section(name, line_no)?;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| p.err(line_no, "expected `key = value`"))?;
        p.handle_key(key.trim(), value.trim(), line_no)?;
    }
    p.finish(text.lines().count())
}

impl<'a> Parser<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> SceneError {
        SceneError {
            origin: self.origin.to_string(),
            line: Some(line),
            message: message.into(),
        }
    }

    fn file_err(&self, message: impl Into<String>) -> SceneError {
        SceneError {
            origin: self.origin.to_string(),
            line: None,
            message: message.into(),
        }
    }

    fn open_section(&mut self, name: &str, line: usize) -> Result<(), SceneError> {
        self.close_entry(line)?;
        let section = match name {
            "array" => {
                if self.array.is_some() {
                    return Err(self.err(line, "duplicate [array] section"));
                }
                self.array = Some(ArrayBuilder::default());
                Section::Array
            }
            "frequencies" => {
                if self.frequencies.is_some() {
                    return Err(self.err(line, "duplicate [frequencies] section"));
                }
                self.frequencies = Some(FrequencyBuilder::default());
                self.frequencies_line = line;
                Section::Frequencies
            }
            "region" => {
                if self.region.is_some() {
                    return Err(self.err(line, "duplicate [region] section"));
                }
                self.region = Some(RegionBuilder::default());
                self.region_line = line;
                Section::Region
            }
            "scatterer" => {
                self.current_scatterer = Some(ScattererBuilder {
                    position: None,
                    reflectivity: Complex64::new(1.0, 0.0),
                    header_line: line,
                });
                Section::Scatterer
            }
            "multipath" => {
                self.current_multipath = Some(MultipathBuilder {
                    pair: None,
                    pair_line: line,
                    coupling: Complex64::new(1.0, 0.0),
                    header_line: line,
                });
                Section::Multipath
            }
            other => return Err(self.err(line, format!("unknown section [{other}]"))),
        };
        self.section = Some(section);
        Ok(())
    }

    /// Completes the in-progress scatterer/multipath entry, if any.
    fn close_entry(&mut self, line: usize) -> Result<(), SceneError> {
        if let Some(s) = self.current_scatterer.take() {
            let position = s.position.ok_or_else(|| {
                self.err(s.header_line, "[scatterer] section is missing `position`")
            })?;
            self.scatterers.push(Scatterer::new(position, s.reflectivity));
        }
        if let Some(m) = self.current_multipath.take() {
            let (first, second) = m.pair.ok_or_else(|| {
                self.err(m.header_line, "[multipath] section is missing `pair`")
            })?;
            self.multipath.push((
                MultipathPair {
                    first,
                    second,
                    coupling: m.coupling,
                },
                m.pair_line,
            ));
        }
        let _ = line;
        Ok(())
    }

    fn handle_key(&mut self, key: &str, value: &str, line: usize) -> Result<(), SceneError> {
        let section = self
            .section
            .ok_or_else(|| self.err(line, "key outside of any [section]"))?;
        match section {
            Section::Array => self.array_key(key, value, line),
            Section::Frequencies => self.frequency_key(key, value, line),
            Section::Region => self.region_key(key, value, line),
            Section::Scatterer => self.scatterer_key(key, value, line),
            Section::Multipath => self.multipath_key(key, value, line),
        }
    }

    fn array_key(&mut self, key: &str, value: &str, line: usize) -> Result<(), SceneError> {
        if key == "mode" {
            let mode = match value {
                "full" => ChannelMode::Full,
                "monostatic" => ChannelMode::Monostatic,
                other => {
                    return Err(self.err(
                        line,
                        format!("unknown mode `{other}` (expected full or monostatic)"),
                    ))
                }
            };
            let array = self.array.as_mut().expect("array section is open");
            if array.mode.replace(mode).is_some() {
                return Err(self.err(line, "duplicate `mode` key"));
            }
            return Ok(());
        }

        let mode = self
            .array
            .as_ref()
            .expect("array section is open")
            .mode
            .ok_or_else(|| self.err(line, "`mode` must be set before array elements"))?;
        let parsed: Result<Vec<Position2D>, SceneError> = match (mode, key) {
            (ChannelMode::Full, "tx") | (ChannelMode::Full, "rx") => {
                let (x, y) = self.parse_f64_pair(value, line)?;
                Ok(vec![Position2D::new(x, y)])
            }
            (ChannelMode::Full, "rx_arc") => self.parse_arc(value, line),
            (ChannelMode::Monostatic, "elements") => {
                let (x, y) = self.parse_f64_pair(value, line)?;
                Ok(vec![Position2D::new(x, y)])
            }
            (ChannelMode::Monostatic, "arc") => self.parse_arc(value, line),
            _ => Err(self.err(
                line,
                format!("unknown key `{key}` in [array] for mode {mode:?}"),
            )),
        };
        let positions = parsed?;
        let array = self.array.as_mut().expect("array section is open");
        match key {
            "tx" => array.transmitters.extend(positions),
            "rx" | "rx_arc" => array.receivers.extend(positions),
            "elements" | "arc" => array.elements.extend(positions),
            _ => unreachable!("key validated above"),
        }
        Ok(())
    }

    fn frequency_key(&mut self, key: &str, value: &str, line: usize) -> Result<(), SceneError> {
        let parsed_f64;
        let parsed_usize;
        match key {
            "start_hz" | "stop_hz" | "step_hz" => {
                parsed_f64 = Some(self.parse_f64(value, line)?);
                parsed_usize = None;
            }
            "count" => {
                parsed_usize = Some(self.parse_usize(value, line)?);
                parsed_f64 = None;
            }
            other => {
                return Err(self.err(line, format!("unknown key `{other}` in [frequencies]")))
            }
        }
        let freq = self.frequencies.as_mut().expect("frequencies section is open");
        let clobbered = match key {
            "start_hz" => freq.start_hz.replace(parsed_f64.unwrap()).is_some(),
            "stop_hz" => freq.stop_hz.replace(parsed_f64.unwrap()).is_some(),
            "step_hz" => freq.step_hz.replace(parsed_f64.unwrap()).is_some(),
            "count" => freq.count.replace(parsed_usize.unwrap()).is_some(),
            _ => unreachable!(),
        };
        if clobbered {
            return Err(self.err(line, format!("duplicate `{key}` key")));
        }
        Ok(())
    }

    fn region_key(&mut self, key: &str, value: &str, line: usize) -> Result<(), SceneError> {
        match key {
            "x" | "y" => {
                let pair = self.parse_f64_pair(value, line)?;
                let region = self.region.as_mut().expect("region section is open");
                let slot = if key == "x" { &mut region.x } else { &mut region.y };
                if slot.replace(pair).is_some() {
                    return Err(self.err(line, format!("duplicate `{key}` key")));
                }
            }
            "pixels" => {
                let pair = self.parse_usize_pair(value, line)?;
                let region = self.region.as_mut().expect("region section is open");
                if region.pixels.replace(pair).is_some() {
                    return Err(self.err(line, "duplicate `pixels` key"));
                }
            }
            other => return Err(self.err(line, format!("unknown key `{other}` in [region]"))),
        }
        Ok(())
    }

    fn scatterer_key(&mut self, key: &str, value: &str, line: usize) -> Result<(), SceneError> {
        match key {
            "position" => {
                let (x, y) = self.parse_f64_pair(value, line)?;
                let s = self.current_scatterer.as_mut().expect("scatterer open");
                if s.position.replace(Position2D::new(x, y)).is_some() {
                    return Err(self.err(line, "duplicate `position` key"));
                }
            }
            "reflectivity" => {
                let c = self.parse_complex(value, line)?;
                self.current_scatterer
                    .as_mut()
                    .expect("scatterer open")
                    .reflectivity = c;
            }
            other => return Err(self.err(line, format!("unknown key `{other}` in [scatterer]"))),
        }
        Ok(())
    }

    fn multipath_key(&mut self, key: &str, value: &str, line: usize) -> Result<(), SceneError> {
        match key {
            "pair" => {
                let (a, b) = self.parse_usize_pair(value, line)?;
                let m = self.current_multipath.as_mut().expect("multipath open");
                if m.pair.replace((a, b)).is_some() {
                    return Err(self.err(line, "duplicate `pair` key"));
                }
                m.pair_line = line;
            }
            "coupling" => {
                let c = self.parse_complex(value, line)?;
                self.current_multipath
                    .as_mut()
                    .expect("multipath open")
                    .coupling = c;
            }
            other => return Err(self.err(line, format!("unknown key `{other}` in [multipath]"))),
        }
        Ok(())
    }

    fn parse_f64(&self, value: &str, line: usize) -> Result<f64, SceneError> {
        value
            .parse::<f64>()
            .map_err(|_| self.err(line, format!("`{value}` is not a number")))
    }

    fn parse_usize(&self, value: &str, line: usize) -> Result<usize, SceneError> {
        value
            .parse::<usize>()
            .map_err(|_| self.err(line, format!("`{value}` is not a non-negative integer")))
    }

    fn split_list<'v>(&self, value: &'v str, line: usize, want: &str) -> Result<Vec<&'v str>, SceneError> {
        let parts: Vec<&str> = value.split(',').map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(self.err(line, format!("expected {want}, got `{value}`")));
        }
        Ok(parts)
    }

    fn parse_f64_pair(&self, value: &str, line: usize) -> Result<(f64, f64), SceneError> {
        let parts = self.split_list(value, line, "two comma-separated numbers")?;
        if parts.len() != 2 {
            return Err(self.err(line, format!("expected two comma-separated numbers, got `{value}`")));
        }
        Ok((self.parse_f64(parts[0], line)?, self.parse_f64(parts[1], line)?))
    }

    fn parse_usize_pair(&self, value: &str, line: usize) -> Result<(usize, usize), SceneError> {
        let parts = self.split_list(value, line, "two comma-separated integers")?;
        if parts.len() != 2 {
            return Err(self.err(line, format!("expected two comma-separated integers, got `{value}`")));
        }
        Ok((
            self.parse_usize(parts[0], line)?,
            self.parse_usize(parts[1], line)?,
        ))
    }

    /// `re` or `re,im`.
    fn parse_complex(&self, value: &str, line: usize) -> Result<Complex64, SceneError> {
        let parts = self.split_list(value, line, "`re` or `re,im`")?;
        match parts.len() {
            1 => Ok(Complex64::new(self.parse_f64(parts[0], line)?, 0.0)),
            2 => Ok(Complex64::new(
                self.parse_f64(parts[0], line)?,
                self.parse_f64(parts[1], line)?,
            )),
            _ => Err(self.err(line, format!("expected `re` or `re,im`, got `{value}`"))),
        }
    }

    /// `radius,aperture_deg,count[,center_deg]`; centre defaults to 90°.
    fn parse_arc(&self, value: &str, line: usize) -> Result<Vec<Position2D>, SceneError> {
        let parts = self.split_list(value, line, "radius,aperture,count[,center]")?;
        if parts.len() != 3 && parts.len() != 4 {
            return Err(self.err(
                line,
                format!("expected `radius,aperture,count[,center]`, got `{value}`"),
            ));
        }
        let radius = self.parse_f64(parts[0], line)?;
        let aperture = self.parse_f64(parts[1], line)?;
        let count = self.parse_usize(parts[2], line)?;
        let center = if parts.len() == 4 {
            self.parse_f64(parts[3], line)?
        } else {
            90.0
        };
        arc_receiver_array(radius, aperture, count, center)
            .map_err(|e| self.err(line, e.to_string()))
    }

    fn finish(mut self, last_line: usize) -> Result<SceneConfig, SceneError> {
        self.close_entry(last_line)?;

        let array = self
            .array
            .take()
            .ok_or_else(|| self.file_err("missing mandatory [array] section"))?;
        let mode = array
            .mode
            .ok_or_else(|| self.file_err("[array] section is missing `mode`"))?;
        let geometry = match mode {
            ChannelMode::Full => {
                if array.transmitters.is_empty() {
                    return Err(self.file_err("[array] needs at least one `tx` element"));
                }
                if array.receivers.is_empty() {
                    return Err(self.file_err("[array] needs at least one `rx` or `rx_arc` element"));
                }
                ArrayGeometry::full(array.transmitters, array.receivers)
            }
            ChannelMode::Monostatic => {
                if array.elements.is_empty() {
                    return Err(self.file_err("[array] needs at least one `elements` or `arc` entry"));
                }
                ArrayGeometry::monostatic(array.elements)
            }
        }
        .map_err(|e| self.file_err(e.to_string()))?;

        let freq = self
            .frequencies
            .take()
            .ok_or_else(|| self.file_err("missing mandatory [frequencies] section"))?;
        let start = freq
            .start_hz
            .ok_or_else(|| self.err(self.frequencies_line, "[frequencies] is missing `start_hz`"))?;
        let count = freq
            .count
            .ok_or_else(|| self.err(self.frequencies_line, "[frequencies] is missing `count`"))?;
        let step = match (freq.step_hz, freq.stop_hz) {
            (Some(step), None) => step,
            (None, Some(stop)) => {
                if count < 2 {
                    return Err(self.err(
                        self.frequencies_line,
                        "`stop_hz` needs `count` of at least 2 (endpoints are inclusive)",
                    ));
                }
                if stop <= start {
                    return Err(self.err(
                        self.frequencies_line,
                        "`stop_hz` must be greater than `start_hz`",
                    ));
                }
                (stop - start) / (count - 1) as f64
            }
            (Some(_), Some(_)) => {
                return Err(self.err(
                    self.frequencies_line,
                    "give either `step_hz` or `stop_hz`, not both",
                ))
            }
            (None, None) => {
                return Err(self.err(
                    self.frequencies_line,
                    "[frequencies] needs `step_hz` or `stop_hz`",
                ))
            }
        };
        let frequencies = FrequencyGrid::new(start, step, count)
            .map_err(|e| self.err(self.frequencies_line, e.to_string()))?;

        let region = self
            .region
            .take()
            .ok_or_else(|| self.file_err("missing mandatory [region] section"))?;
        let (x0, x1) = region
            .x
            .ok_or_else(|| self.err(self.region_line, "[region] is missing `x`"))?;
        let (y0, y1) = region
            .y
            .ok_or_else(|| self.err(self.region_line, "[region] is missing `y`"))?;
        let (nx, ny) = region
            .pixels
            .ok_or_else(|| self.err(self.region_line, "[region] is missing `pixels`"))?;
        let region = ImageRegion::new(x0, x1, y0, y1, nx, ny)
            .map_err(|e| self.err(self.region_line, e.to_string()))?;

        if self.scatterers.is_empty() {
            return Err(self.file_err("scene needs at least one [scatterer] section"));
        }
        for (pair, line) in &self.multipath {
            let count = self.scatterers.len();
            if pair.first >= count || pair.second >= count {
                return Err(self.err(
                    *line,
                    format!(
                        "multipath pair ({}, {}) references a scatterer out of range ({} defined)",
                        pair.first, pair.second, count
                    ),
                ));
            }
            if pair.first == pair.second {
                return Err(self.err(*line, "multipath pair must couple two distinct scatterers"));
            }
        }

        let mut scene = SceneConfig::new(self.scatterers, geometry, frequencies, region);
        scene.multipath = self.multipath.into_iter().map(|(p, _)| p).collect();
        scene
            .validate()
            .map_err(|e| SceneError {
                origin: self.origin.to_string(),
                line: None,
                message: e.to_string(),
            })?;
        Ok(scene)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1_GHOST: &str = "\
# Reference arc scene with one double-bounce interaction.
[array]
mode = full
tx = 0,10
rx_arc = 10,8,81

[frequencies]
start_hz = 8e9
stop_hz = 9e9
count = 64

[region]
x = -1,1
y = -1,1
pixels = 256,256

[scatterer]
position = -0.44921875,-0.34765625

[scatterer]
position = 0.44921875,-0.34765625

[scatterer]
position = 0.00390625,0.40234375

[multipath]
pair = 0,1
coupling = 0.3
";

    #[test]
    fn reference_scene_parses_to_expected_shape() {
        let scene = parse_scene_str(TABLE1_GHOST, "test.scn").unwrap();
        assert_eq!(scene.geometry.mode(), ChannelMode::Full);
        assert_eq!(scene.geometry.transmitters().len(), 1);
        assert_eq!(scene.geometry.receivers().len(), 81);
        assert_eq!(scene.frequencies.count(), 64);
        assert!((scene.frequencies.delta_f() - 1e9 / 63.0).abs() < 1e-6);
        assert_eq!(scene.scatterers.len(), 3);
        assert_eq!(scene.multipath.len(), 1);
        assert_eq!(scene.multipath[0].coupling, Complex64::new(0.3, 0.0));
        assert_eq!(scene.region.nx(), 256);
    }

    #[test]
    fn minimal_scene_parses() {
        let text = "\
[array]
mode = monostatic
elements = 0,10

[frequencies]
start_hz = 1e9
step_hz = 1e6
count = 1

[region]
x = -1,1
y = -1,1
pixels = 4,4

[scatterer]
position = 0,0
";
        let scene = parse_scene_str(text, "minimal.scn").unwrap();
        assert_eq!(scene.geometry.channel_count(), 1);
        assert_eq!(scene.frequencies.count(), 1);
        assert_eq!(scene.scatterers.len(), 1);
    }

    #[test]
    fn unknown_key_is_an_error_with_its_line() {
        let text = "\
[array]
mode = monostatic
elements = 0,10
wibble = 3
";
        let err = parse_scene_str(text, "bad.scn").unwrap_err();
        assert_eq!(err.line, Some(4));
        assert!(err.message.contains("wibble"));
    }

    #[test]
    fn out_of_range_multipath_names_its_line() {
        let text = "\
[array]
mode = monostatic
elements = 0,10

[frequencies]
start_hz = 1e9
step_hz = 1e6
count = 2

[region]
x = -1,1
y = -1,1
pixels = 4,4

[scatterer]
position = 0,0

[multipath]
pair = 0,3
";
        let err = parse_scene_str(text, "bad.scn").unwrap_err();
        assert_eq!(err.line, Some(19)); // the `pair = 0,3` line
        assert!(err.message.contains("out of range"));
    }

    #[test]
    fn missing_sections_are_reported() {
        let text = "\
[array]
mode = monostatic
elements = 0,10
";
        let err = parse_scene_str(text, "partial.scn").unwrap_err();
        assert!(err.message.contains("[frequencies]"));
    }

    #[test]
    fn both_step_and_stop_conflict() {
        let text = "\
[array]
mode = monostatic
elements = 0,10

[frequencies]
start_hz = 1e9
step_hz = 1e6
stop_hz = 2e9
count = 4

[region]
x = -1,1
y = -1,1
pixels = 4,4

[scatterer]
position = 0,0
";
        let err = parse_scene_str(text, "conflict.scn").unwrap_err();
        assert!(err.message.contains("not both"));
    }

    #[test]
    fn reflectivity_accepts_complex_values() {
        let text = "\
[array]
mode = monostatic
elements = 0,10

[frequencies]
start_hz = 1e9
step_hz = 1e6
count = 1

[region]
x = -1,1
y = -1,1
pixels = 2,2

[scatterer]
position = 0,0
reflectivity = 0.5,-0.8
";
        let scene = parse_scene_str(text, "complex.scn").unwrap();
        assert_eq!(scene.scatterers[0].reflectivity, Complex64::new(0.5, -0.8));
    }

    #[test]
    fn mode_must_precede_elements() {
        let text = "\
[array]
elements = 0,10
mode = monostatic
";
        let err = parse_scene_str(text, "order.scn").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("mode"));
    }

    #[test]
    fn full_mode_rejects_monostatic_keys() {
        let text = "\
[array]
mode = full
elements = 0,10
";
        let err = parse_scene_str(text, "wrongkey.scn").unwrap_err();
        assert_eq!(err.line, Some(3));
    }

    #[test]
    fn scatterer_without_position_is_an_error() {
        let text = "\
[array]
mode = monostatic
elements = 0,10

[frequencies]
start_hz = 1e9
step_hz = 1e6
count = 1

[region]
x = -1,1
y = -1,1
pixels = 2,2

[scatterer]
reflectivity = 1
";
        let err = parse_scene_str(text, "nopos.scn").unwrap_err();
        assert_eq!(err.line, Some(15));
        assert!(err.message.contains("position"));
    }

    #[test]
    fn comments_and_blanks_are_ignored_everywhere() {
        let text = "\
# leading comment
[array]          # trailing comment
mode = monostatic

elements = 0,10  # inline

[frequencies]
start_hz = 1e9
step_hz = 1e6
count = 1

[region]
x = -1,1
y = -1,1
pixels = 2,2

[scatterer]
position = 0,0
";
        assert!(parse_scene_str(text, "comments.scn").is_ok());
    }
}
