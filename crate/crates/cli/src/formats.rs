//! On-disk formats for echo data and images.
//!
//! Both formats pair a small ASCII header with a little-endian `f64` binary
//! payload, separated by one blank line. Floating-point header fields are
//! printed with Rust's shortest-round-trip formatting, so reading a file
//! back reproduces every value bit for bit.
//!
//! `.echo` (magic `RCE1`): array mode, element counts, the frequency ladder,
//! the element positions, then one complex sample per (channel, tone) in
//! channel-major order.
//!
//! `.img` (magic `RCI1`): payload kind (`complex` image or `real` map), the
//! image region, then one complex or real value per pixel in row-major order
//! (x fastest, y upward).

use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use rcf_core::backprojection::ImageGrid;
use rcf_core::coherence::{CoherenceMap, MapKind};
use rcf_core::forward::EchoData;
use rcf_core::geometry::{ArrayGeometry, ChannelMode, FrequencyGrid, ImageRegion, Position2D};

use crate::error::CliError;

const ECHO_MAGIC: &str = "RCE1";
const IMAGE_MAGIC: &str = "RCI1";

/// Contents of an `.img` file: either a complex back-projection/enhanced
/// image or a real-valued coherence map tagged with its kind.
#[derive(Debug, Clone, PartialEq)]
pub enum StoredImage {
    Complex(ImageGrid),
    Map(CoherenceMap),
}

impl StoredImage {
    pub fn region(&self) -> &ImageRegion {
        match self {
            StoredImage::Complex(image) => &image.region,
            StoredImage::Map(map) => &map.region,
        }
    }

    /// Per-pixel display magnitude: |z| for complex images, the value itself
    /// for maps.
    pub fn magnitudes(&self) -> Array2<f64> {
        match self {
            StoredImage::Complex(image) => image.pixels.mapv(|z| z.norm()),
            StoredImage::Map(map) => map.values.clone(),
        }
    }
}

pub fn write_echo(path: &Path, echo: &EchoData) -> Result<(), CliError> {
    let mut header = String::new();
    header.push_str(ECHO_MAGIC);
    header.push('\n');
    let mode = match echo.geometry.mode() {
        ChannelMode::Full => "full",
        ChannelMode::Monostatic => "monostatic",
    };
    header.push_str(&format!("mode = {mode}\n"));
    header.push_str(&format!("m = {}\n", echo.geometry.transmitters().len()));
    header.push_str(&format!("n = {}\n", echo.geometry.receivers().len()));
    header.push_str(&format!("i = {}\n", echo.frequencies.count()));
    header.push_str(&format!("f0_hz = {}\n", echo.frequencies.f0()));
    header.push_str(&format!("delta_f_hz = {}\n", echo.frequencies.delta_f()));
    for p in echo.geometry.transmitters() {
        header.push_str(&format!("tx = {} {}\n", p.x, p.y));
    }
    for p in echo.geometry.receivers() {
        header.push_str(&format!("rx = {} {}\n", p.x, p.y));
    }
    header.push('\n');

    let mut bytes = header.into_bytes();
    bytes.reserve(echo.samples.len() * 16);
    for z in echo.samples.iter() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    std::fs::write(path, bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

pub fn read_echo(path: &Path) -> Result<EchoData, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let (header, payload) = split_header(&bytes, path)?;
    let mut lines = header.lines();
    expect_magic(lines.next(), ECHO_MAGIC, path)?;

    let mut mode = None;
    let mut m = None;
    let mut n = None;
    let mut tone_count = None;
    let mut f0 = None;
    let mut delta_f = None;
    let mut tx = Vec::new();
    let mut rx = Vec::new();
    for line in lines {
        let (key, value) = header_kv(line, path)?;
        match key {
            "mode" => {
                mode = Some(match value {
                    "full" => ChannelMode::Full,
                    "monostatic" => ChannelMode::Monostatic,
                    other => {
                        return Err(bad_file(path, format!("unknown array mode `{other}`")))
                    }
                })
            }
            "m" => m = Some(parse_header_usize(value, path)?),
            "n" => n = Some(parse_header_usize(value, path)?),
            "i" => tone_count = Some(parse_header_usize(value, path)?),
            "f0_hz" => f0 = Some(parse_header_f64(value, path)?),
            "delta_f_hz" => delta_f = Some(parse_header_f64(value, path)?),
            "tx" => tx.push(parse_position(value, path)?),
            "rx" => rx.push(parse_position(value, path)?),
            other => return Err(bad_file(path, format!("unknown header field `{other}`"))),
        }
    }

    let mode = mode.ok_or_else(|| bad_file(path, "missing `mode`"))?;
    let m = m.ok_or_else(|| bad_file(path, "missing `m`"))?;
    let n = n.ok_or_else(|| bad_file(path, "missing `n`"))?;
    let tone_count = tone_count.ok_or_else(|| bad_file(path, "missing `i`"))?;
    let f0 = f0.ok_or_else(|| bad_file(path, "missing `f0_hz`"))?;
    let delta_f = delta_f.ok_or_else(|| bad_file(path, "missing `delta_f_hz`"))?;
    if tx.len() != m || rx.len() != n {
        return Err(bad_file(
            path,
            format!(
                "element counts disagree: header says {m} tx / {n} rx, found {} / {}",
                tx.len(),
                rx.len()
            ),
        ));
    }
    let geometry = match mode {
        ChannelMode::Full => ArrayGeometry::full(tx, rx),
        ChannelMode::Monostatic => {
            if tx != rx {
                return Err(bad_file(
                    path,
                    "monostatic data must list identical tx and rx elements",
                ));
            }
            ArrayGeometry::monostatic(rx)
        }
    }
    .map_err(|e| bad_file(path, e.to_string()))?;
    let frequencies =
        FrequencyGrid::new(f0, delta_f, tone_count).map_err(|e| bad_file(path, e.to_string()))?;

    let channels = geometry.channel_count();
    let samples = read_complex_payload(payload, channels * tone_count, path)?;
    let samples = Array2::from_shape_vec((channels, tone_count), samples)
        .expect("payload length was checked");
    let echo = EchoData {
        geometry,
        frequencies,
        samples,
    };
    // A non-finite sample in a file is bad input, not an internal failure.
    echo.validate().map_err(|e| bad_file(path, e))?;
    Ok(echo)
}

pub fn write_image(path: &Path, image: &StoredImage) -> Result<(), CliError> {
    let mut header = String::new();
    header.push_str(IMAGE_MAGIC);
    header.push('\n');
    match image {
        StoredImage::Complex(_) => header.push_str("kind = complex\n"),
        StoredImage::Map(map) => {
            header.push_str("kind = real\n");
            header.push_str(&format!("map = {}\n", map.kind));
        }
    }
    let r = image.region();
    header.push_str(&format!(
        "region = {} {} {} {} {} {}\n",
        r.x_min(),
        r.x_max(),
        r.y_min(),
        r.y_max(),
        r.nx(),
        r.ny()
    ));
    header.push('\n');

    let mut bytes = header.into_bytes();
    match image {
        StoredImage::Complex(image) => {
            bytes.reserve(image.pixels.len() * 16);
            for z in image.pixels.iter() {
                bytes.extend_from_slice(&z.re.to_le_bytes());
                bytes.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        StoredImage::Map(map) => {
            bytes.reserve(map.values.len() * 8);
            for v in map.values.iter() {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    std::fs::write(path, bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

pub fn read_image(path: &Path) -> Result<StoredImage, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let (header, payload) = split_header(&bytes, path)?;
    let mut lines = header.lines();
    expect_magic(lines.next(), IMAGE_MAGIC, path)?;

    let mut kind = None;
    let mut map_kind = None;
    let mut region = None;
    for line in lines {
        let (key, value) = header_kv(line, path)?;
        match key {
            "kind" => kind = Some(value.to_string()),
            "map" => {
                map_kind = Some(
                    value
                        .parse::<MapKind>()
                        .map_err(|e| bad_file(path, e))?,
                )
            }
            "region" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 6 {
                    return Err(bad_file(path, "region needs 6 fields"));
                }
                let x0 = parse_header_f64(parts[0], path)?;
                let x1 = parse_header_f64(parts[1], path)?;
                let y0 = parse_header_f64(parts[2], path)?;
                let y1 = parse_header_f64(parts[3], path)?;
                let nx = parse_header_usize(parts[4], path)?;
                let ny = parse_header_usize(parts[5], path)?;
                region = Some(
                    ImageRegion::new(x0, x1, y0, y1, nx, ny)
                        .map_err(|e| bad_file(path, e.to_string()))?,
                );
            }
            other => return Err(bad_file(path, format!("unknown header field `{other}`"))),
        }
    }
    let kind = kind.ok_or_else(|| bad_file(path, "missing `kind`"))?;
    let region = region.ok_or_else(|| bad_file(path, "missing `region`"))?;
    let (ny, nx) = (region.ny(), region.nx());

    match kind.as_str() {
        "complex" => {
            let pixels = read_complex_payload(payload, nx * ny, path)?;
            let pixels =
                Array2::from_shape_vec((ny, nx), pixels).expect("payload length was checked");
            Ok(StoredImage::Complex(ImageGrid { region, pixels }))
        }
        "real" => {
            let kind = map_kind
                .ok_or_else(|| bad_file(path, "real payload is missing its `map` kind"))?;
            let values = read_real_payload(payload, nx * ny, path)?;
            let values =
                Array2::from_shape_vec((ny, nx), values).expect("payload length was checked");
            Ok(StoredImage::Map(CoherenceMap {
                region,
                values,
                kind,
            }))
        }
        other => Err(bad_file(path, format!("unknown payload kind `{other}`"))),
    }
}

/// Splits raw file bytes at the blank line that ends the ASCII header.
fn split_header<'a>(bytes: &'a [u8], path: &Path) -> Result<(&'a str, &'a [u8]), CliError> {
    let sep = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or_else(|| bad_file(path, "missing blank line after header"))?;
    let header = std::str::from_utf8(&bytes[..sep])
        .map_err(|_| bad_file(path, "header is not valid UTF-8"))?;
    Ok((header, &bytes[sep + 2..]))
}

fn expect_magic(line: Option<&str>, magic: &str, path: &Path) -> Result<(), CliError> {
    match line {
        Some(l) if l == magic => Ok(()),
        _ => Err(bad_file(path, format!("expected `{magic}` magic line"))),
    }
}

fn header_kv<'a>(line: &'a str, path: &Path) -> Result<(&'a str, &'a str), CliError> {
    line.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| bad_file(path, format!("malformed header line `{line}`")))
}

fn parse_header_f64(value: &str, path: &Path) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .map_err(|_| bad_file(path, format!("`{value}` is not a number")))
}

fn parse_header_usize(value: &str, path: &Path) -> Result<usize, CliError> {
    value
        .parse::<usize>()
        .map_err(|_| bad_file(path, format!("`{value}` is not a non-negative integer")))
}

fn parse_position(value: &str, path: &Path) -> Result<Position2D, CliError> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(bad_file(path, format!("`{value}` is not an `x y` pair")));
    }
    Ok(Position2D::new(
        parse_header_f64(parts[0], path)?,
        parse_header_f64(parts[1], path)?,
    ))
}

fn read_complex_payload(
    payload: &[u8],
    count: usize,
    path: &Path,
) -> Result<Vec<Complex64>, CliError> {
    if payload.len() != count * 16 {
        return Err(bad_file(
            path,
            format!("payload holds {} bytes, expected {}", payload.len(), count * 16),
        ));
    }
    Ok(payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect())
}

fn read_real_payload(payload: &[u8], count: usize, path: &Path) -> Result<Vec<f64>, CliError> {
    if payload.len() != count * 8 {
        return Err(bad_file(
            path,
            format!("payload holds {} bytes, expected {}", payload.len(), count * 8),
        ));
    }
    Ok(payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

fn bad_file(path: &Path, message: impl std::fmt::Display) -> CliError {
    CliError::input(format!("{}: {message}", path.display()))
}
