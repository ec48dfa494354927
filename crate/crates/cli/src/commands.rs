//! Subcommand implementations.
//!
//! Every command writes its artifacts into `--out DIR` together with a
//! `manifest.txt` naming the inputs (content-hashed before processing), the
//! effective parameters, and the outputs. All commands are deterministic:
//! identical inputs and flags reproduce every output byte for byte.

use std::path::{Path, PathBuf};

use clap::Args;
use rcf_core::backprojection::{
    self, ChannelImageStack, FrequencyImageStack, ImageGrid, SpectralWeight,
};
use rcf_core::coherence::{self, CoherenceMap, CoherenceSuite, MapKind};
use rcf_core::forward::{self, EchoData};
use rcf_core::geometry::{ImageRegion, Position2D};
use rcf_core::metrics::{self, QualityReport};
use rcf_core::presets;

use crate::error::CliError;
use crate::export;
use crate::formats::{self, StoredImage};
use crate::manifest::RunManifest;
use crate::scene;

/// `x0,x1,y0,y1,nx,ny` naming the reconstruction grid.
pub fn parse_region_spec(spec: &str) -> Result<ImageRegion, String> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!(
            "expected x0,x1,y0,y1,nx,ny (6 comma-separated fields), got {} in `{spec}`",
            parts.len()
        ));
    }
    let mut nums = [0.0_f64; 4];
    for (slot, part) in nums.iter_mut().zip(&parts[..4]) {
        *slot = part
            .parse::<f64>()
            .map_err(|_| format!("`{part}` is not a number"))?;
    }
    let nx = parts[4]
        .parse::<usize>()
        .map_err(|_| format!("`{}` is not a pixel count", parts[4]))?;
    let ny = parts[5]
        .parse::<usize>()
        .map_err(|_| format!("`{}` is not a pixel count", parts[5]))?;
    ImageRegion::new(nums[0], nums[1], nums[2], nums[3], nx, ny).map_err(|e| e.to_string())
}

fn region_spec_string(region: &ImageRegion) -> String {
    format!(
        "{},{},{},{},{},{}",
        region.x_min(),
        region.x_max(),
        region.y_min(),
        region.y_max(),
        region.nx(),
        region.ny()
    )
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))
}

fn spectral_weight(f_weighted: bool) -> SpectralWeight {
    if f_weighted {
        SpectralWeight::Frequency
    } else {
        SpectralWeight::Unit
    }
}

/// Reconstructs the per-channel image stack, via the tone-domain IFFT when
/// `fast_bp` is set and the exact per-tone sum otherwise.
fn build_channel_stack(
    echo: &EchoData,
    region: &ImageRegion,
    fast_bp: bool,
    upsample: usize,
    weight: SpectralWeight,
) -> Result<ChannelImageStack, CliError> {
    let stack = if fast_bp {
        backprojection::fast_range_profiles_with(echo, region, upsample, weight)?
    } else {
        backprojection::channel_images_with(echo, region, weight)?
    };
    Ok(stack)
}

fn image_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scene description file
    #[arg(long)]
    pub scene: PathBuf,
    /// Signal-to-noise ratio for additive complex noise; omit for noiseless data
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    /// Noise generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    ensure_out_dir(&args.out)?;
    let mut manifest = RunManifest::new("simulate");
    manifest.record_input("scene", &args.scene)?;

    let scene = scene::parse_scene_file(&args.scene).map_err(|e| CliError::input(e.to_string()))?;
    let mut echo = forward::simulate_with_multipath(&scene)?;
    if let Some(snr_db) = args.snr_db {
        echo = forward::add_noise(&echo, snr_db, args.seed);
    }

    manifest.record_param(
        "snr_db",
        args.snr_db.map_or("none".to_string(), |v| v.to_string()),
    );
    manifest.record_param("seed", args.seed);
    manifest.record_param("frequency_step_policy", "inclusive-endpoint");

    let echo_path = args.out.join("echo.echo");
    formats::write_echo(&echo_path, &echo)?;
    manifest.record_output("echo", &echo_path);
    manifest.write(&args.out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// image

#[derive(Debug, Args)]
pub struct ImageArgs {
    /// Echo data file
    #[arg(long)]
    pub echo: PathBuf,
    /// Reconstruction grid as x0,x1,y0,y1,nx,ny
    #[arg(long, value_parser = parse_region_spec, allow_hyphen_values = true, default_value = "-1,1,-1,1,256,256")]
    pub region: ImageRegion,
    /// Use the IFFT range-profile reconstruction instead of the exact sum
    #[arg(long)]
    pub fast_bp: bool,
    /// Range-profile oversampling factor for --fast-bp
    #[arg(long, default_value_t = 8)]
    pub upsample: usize,
    /// Weight each tone by its frequency during reconstruction
    #[arg(long)]
    pub f_weighted: bool,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_image(args: &ImageArgs) -> Result<(), CliError> {
    ensure_out_dir(&args.out)?;
    let mut manifest = RunManifest::new("image");
    manifest.record_input("echo", &args.echo)?;

    let echo = formats::read_echo(&args.echo)?;
    let weight = spectral_weight(args.f_weighted);
    let stack = build_channel_stack(&echo, &args.region, args.fast_bp, args.upsample, weight)?;
    let bp = backprojection::image_from_channels(&stack)?;

    manifest.record_param("region", region_spec_string(&args.region));
    manifest.record_param("fast_bp", args.fast_bp);
    manifest.record_param("upsample", args.upsample);
    manifest.record_param("f_weighted", args.f_weighted);

    let bp_path = args.out.join("bp.img");
    formats::write_image(&bp_path, &StoredImage::Complex(bp))?;
    manifest.record_output("bp", &bp_path);
    manifest.write(&args.out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// enhance

#[derive(Debug, Args)]
pub struct EnhanceArgs {
    /// Echo data to reconstruct and enhance in one step
    #[arg(long, required_unless_present = "image", conflicts_with_all = ["image", "map_file"])]
    pub echo: Option<PathBuf>,
    /// Previously reconstructed complex image (pair with MAP_FILE)
    #[arg(value_name = "IMAGE", requires = "map_file")]
    pub image: Option<PathBuf>,
    /// Previously computed coherence map to apply to IMAGE
    #[arg(value_name = "MAP_FILE")]
    pub map_file: Option<PathBuf>,
    /// Which coherence map weights the image
    #[arg(long)]
    pub map: MapKind,
    /// Reconstruction grid as x0,x1,y0,y1,nx,ny (echo mode)
    #[arg(long, value_parser = parse_region_spec, allow_hyphen_values = true, default_value = "-1,1,-1,1,256,256")]
    pub region: ImageRegion,
    /// Use the IFFT range-profile reconstruction instead of the exact sum
    #[arg(long)]
    pub fast_bp: bool,
    /// Range-profile oversampling factor for --fast-bp
    #[arg(long, default_value_t = 8)]
    pub upsample: usize,
    /// Weight each tone by its frequency during reconstruction
    #[arg(long)]
    pub f_weighted: bool,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_enhance(args: &EnhanceArgs) -> Result<(), CliError> {
    ensure_out_dir(&args.out)?;
    let mut manifest = RunManifest::new("enhance");

    let kind = args.map;
    let enhanced_path = args.out.join(format!("enhanced_{kind}.img"));

    if let Some(echo_path) = &args.echo {
        manifest.record_input("echo", echo_path)?;
        let echo = formats::read_echo(echo_path)?;
        let weight = spectral_weight(args.f_weighted);
        let channel_stack =
            build_channel_stack(&echo, &args.region, args.fast_bp, args.upsample, weight)?;
        let bp = backprojection::image_from_channels(&channel_stack)?;

        let needs_frequencies =
            matches!(kind, MapKind::Cff | MapKind::Pcff | MapKind::Cf2d | MapKind::Pcf2d);
        let frequency_stack: Option<FrequencyImageStack> = if needs_frequencies {
            Some(backprojection::frequency_images(&echo, &args.region)?)
        } else {
            None
        };
        let map = compute_map(kind, &channel_stack, frequency_stack.as_ref())?;
        let enhanced = coherence::apply_map(&bp, &map)?;

        manifest.record_param("map", kind);
        manifest.record_param("region", region_spec_string(&args.region));
        manifest.record_param("fast_bp", args.fast_bp);
        manifest.record_param("upsample", args.upsample);
        manifest.record_param("f_weighted", args.f_weighted);

        let bp_path = args.out.join("bp.img");
        let map_path = args.out.join(format!("map_{kind}.img"));
        formats::write_image(&bp_path, &StoredImage::Complex(bp))?;
        formats::write_image(&map_path, &StoredImage::Map(map))?;
        formats::write_image(&enhanced_path, &StoredImage::Complex(enhanced))?;
        manifest.record_output("bp", &bp_path);
        manifest.record_output("map", &map_path);
        manifest.record_output("enhanced", &enhanced_path);
    } else {
        let (image_path, map_path) = match (&args.image, &args.map_file) {
            (Some(image), Some(map)) => (image, map),
            _ => {
                return Err(CliError::input(
                    "enhance needs either --echo or an IMAGE and MAP_FILE pair",
                ))
            }
        };
        manifest.record_input("image", image_path)?;
        manifest.record_input("map", map_path)?;

        let image = match formats::read_image(image_path)? {
            StoredImage::Complex(image) => image,
            StoredImage::Map(_) => {
                return Err(CliError::input(format!(
                    "{} holds a coherence map; IMAGE must be a complex image",
                    image_path.display()
                )))
            }
        };
        let map = match formats::read_image(map_path)? {
            StoredImage::Map(map) => map,
            StoredImage::Complex(_) => {
                return Err(CliError::input(format!(
                    "{} holds a complex image; MAP_FILE must be a coherence map",
                    map_path.display()
                )))
            }
        };
        if map.kind != kind {
            return Err(CliError::input(format!(
                "{} holds a {} map but --map asked for {kind}",
                map_path.display(),
                map.kind
            )));
        }
        let enhanced = coherence::apply_map(&image, &map)?;

        manifest.record_param("map", kind);
        formats::write_image(&enhanced_path, &StoredImage::Complex(enhanced))?;
        manifest.record_output("enhanced", &enhanced_path);
    }

    manifest.write(&args.out)?;
    Ok(())
}

/// Computes one coherence map, touching only the stacks the kind needs.
fn compute_map(
    kind: MapKind,
    channel_stack: &ChannelImageStack,
    frequency_stack: Option<&FrequencyImageStack>,
) -> Result<CoherenceMap, CliError> {
    let freq = || frequency_stack.expect("frequency stack built for frequency-axis kinds");
    let map = match kind {
        MapKind::Cf => coherence::cf_spatial(channel_stack)?,
        MapKind::Pcf => coherence::pcf_spatial(channel_stack)?,
        MapKind::Cff => coherence::cf_frequency(freq())?,
        MapKind::Pcff => coherence::pcf_frequency(freq())?,
        MapKind::Cf2d => coherence::cf_2d(
            &coherence::cf_spatial(channel_stack)?,
            &coherence::cf_frequency(freq())?,
        )?,
        MapKind::Pcf2d => coherence::pcf_2d(
            &coherence::pcf_spatial(channel_stack)?,
            &coherence::pcf_frequency(freq())?,
        )?,
    };
    Ok(map)
}

// ---------------------------------------------------------------------------
// metrics

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Image file to measure
    #[arg(value_name = "IMAGE")]
    pub image: PathBuf,
    /// Radius of the disc masked around the image peak in the ghost scan;
    /// defaults to three range cells of the reference band
    #[arg(long)]
    pub exclusion_radius: Option<f64>,
    /// Ghost-scan search floor relative to the peak
    #[arg(long, allow_negative_numbers = true, default_value_t = -40.0)]
    pub floor_db: f64,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_metrics(args: &MetricsArgs) -> Result<(), CliError> {
    ensure_out_dir(&args.out)?;
    let mut manifest = RunManifest::new("metrics");
    manifest.record_input("image", &args.image)?;

    let image = as_image_grid(formats::read_image(&args.image)?);
    let radius = args
        .exclusion_radius
        .unwrap_or_else(|| metrics::default_exclusion_radius(&presets::reference_frequencies()));
    let (ix, iy) = image.peak_pixel();
    let target = image.region.pixel_center(ix, iy);
    let report = metrics::quality_report(&image, &[target], radius, args.floor_db)?;

    manifest.record_param("exclusion_radius", radius);
    manifest.record_param("floor_db", args.floor_db);

    let mut text = String::new();
    report_block(&mut text, &image_stem(&args.image), &report);
    let report_path = args.out.join("report.txt");
    std::fs::write(&report_path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", report_path.display())))?;
    manifest.record_output("report", &report_path);
    manifest.write(&args.out)?;
    Ok(())
}

/// Complex images pass through; real maps are measured as magnitudes.
fn as_image_grid(stored: StoredImage) -> ImageGrid {
    match stored {
        StoredImage::Complex(image) => image,
        StoredImage::Map(map) => ImageGrid {
            region: map.region,
            pixels: map.values.mapv(|v| num_complex::Complex64::new(v, 0.0)),
        },
    }
}

fn report_block(out: &mut String, name: &str, report: &QualityReport) {
    out.push_str(&format!("[image {name}]\n"));
    out.push_str(&format!("peak = {}\n", report.mainlobe_peak));
    out.push_str(&format!("pslr_range_db = {}\n", report.pslr_range));
    out.push_str(&format!("pslr_azimuth_db = {}\n", report.pslr_azimuth));
    for (p, db) in &report.ghost_levels {
        out.push_str(&format!("ghost = {} {} {}\n", p.x, p.y, db));
    }
    out.push('\n');
}

// ---------------------------------------------------------------------------
// pipeline

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Scene description file
    #[arg(long)]
    pub scene: PathBuf,
    /// Signal-to-noise ratio for additive complex noise; omit for noiseless data
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    /// Noise generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the IFFT range-profile reconstruction instead of the exact sum
    #[arg(long)]
    pub fast_bp: bool,
    /// Range-profile oversampling factor for --fast-bp
    #[arg(long, default_value_t = 8)]
    pub upsample: usize,
    /// Weight each tone by its frequency during reconstruction
    #[arg(long)]
    pub f_weighted: bool,
    /// Ghost-scan search floor relative to each image peak
    #[arg(long, allow_negative_numbers = true, default_value_t = -40.0)]
    pub floor_db: f64,
    /// Radius of the disc masked around true targets in the ghost scan;
    /// defaults to three range cells of the scene's band
    #[arg(long)]
    pub exclusion_radius: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_pipeline(args: &PipelineArgs) -> Result<(), CliError> {
    ensure_out_dir(&args.out)?;
    let mut manifest = RunManifest::new("pipeline");
    manifest.record_input("scene", &args.scene)?;

    let scene = scene::parse_scene_file(&args.scene).map_err(|e| CliError::input(e.to_string()))?;
    let mut echo = forward::simulate_with_multipath(&scene)?;
    if let Some(snr_db) = args.snr_db {
        echo = forward::add_noise(&echo, snr_db, args.seed);
    }
    let region = scene.region.clone();
    let weight = spectral_weight(args.f_weighted);
    let radius = args
        .exclusion_radius
        .unwrap_or_else(|| metrics::default_exclusion_radius(&scene.frequencies));
    let targets: Vec<Position2D> = scene.scatterers.iter().map(|s| s.position).collect();

    manifest.record_param(
        "snr_db",
        args.snr_db.map_or("none".to_string(), |v| v.to_string()),
    );
    manifest.record_param("seed", args.seed);
    manifest.record_param("fast_bp", args.fast_bp);
    manifest.record_param("upsample", args.upsample);
    manifest.record_param("f_weighted", args.f_weighted);
    manifest.record_param("floor_db", args.floor_db);
    manifest.record_param("exclusion_radius", radius);
    manifest.record_param("frequency_step_policy", "inclusive-endpoint");

    let echo_path = args.out.join("echo.echo");
    formats::write_echo(&echo_path, &echo)?;
    manifest.record_output("echo", &echo_path);

    let channel_stack = build_channel_stack(&echo, &region, args.fast_bp, args.upsample, weight)?;
    let frequency_stack = backprojection::frequency_images(&echo, &region)?;
    let bp = backprojection::image_from_channels(&channel_stack)?;
    let suite = CoherenceSuite::compute(&channel_stack, &frequency_stack)?;

    let bp_path = args.out.join("bp.img");
    formats::write_image(&bp_path, &StoredImage::Complex(bp.clone()))?;
    manifest.record_output("bp", &bp_path);

    let mut report_text = String::new();
    report_block(
        &mut report_text,
        "bp",
        &metrics::quality_report(&bp, &targets, radius, args.floor_db)?,
    );

    for (kind, map) in suite.iter() {
        let map_path = args.out.join(format!("map_{kind}.img"));
        formats::write_image(&map_path, &StoredImage::Map(map.clone()))?;
        manifest.record_output(&format!("map_{kind}"), &map_path);

        let enhanced = coherence::apply_map(&bp, map)?;
        let enhanced_path = args.out.join(format!("enhanced_{kind}.img"));
        report_block(
            &mut report_text,
            &format!("enhanced_{kind}"),
            &metrics::quality_report(&enhanced, &targets, radius, args.floor_db)?,
        );
        formats::write_image(&enhanced_path, &StoredImage::Complex(enhanced))?;
        manifest.record_output(&format!("enhanced_{kind}"), &enhanced_path);
    }

    let report_path = args.out.join("report.txt");
    std::fs::write(&report_path, report_text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", report_path.display())))?;
    manifest.record_output("report", &report_path);
    manifest.write(&args.out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// export

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Image file to render
    #[arg(value_name = "IMAGE")]
    pub image: PathBuf,
    /// Display floor: pixels at or below this level map to black
    #[arg(long, allow_negative_numbers = true, default_value_t = -40.0)]
    pub floor_db: f64,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_export(args: &ExportArgs) -> Result<(), CliError> {
    ensure_out_dir(&args.out)?;
    let mut manifest = RunManifest::new("export");
    manifest.record_input("image", &args.image)?;

    let stored = formats::read_image(&args.image)?;
    manifest.record_param("floor_db", args.floor_db);

    let pgm_path = args.out.join(format!("{}.pgm", image_stem(&args.image)));
    export::write_pgm(&pgm_path, &stored, args.floor_db)?;
    manifest.record_output("pgm", &pgm_path);
    manifest.write(&args.out)?;
    Ok(())
}
