use clap::error::ErrorKind;
use clap::Parser;

use rcf_cli::commands::{
    self, EnhanceArgs, ExportArgs, ImageArgs, MetricsArgs, PipelineArgs, SimulateArgs,
};
use rcf_cli::CliError;

/// Step-frequency radar imaging: simulation, back-projection, and
/// coherence-factor enhancement.
#[derive(Debug, Parser)]
#[command(name = "rcf", version, about)]
enum Cli {
    /// Synthesize echo data from a scene description
    Simulate(SimulateArgs),
    /// Reconstruct a complex image from echo data
    Image(ImageArgs),
    /// Weight an image by a coherence map, from echo data or stored files
    Enhance(EnhanceArgs),
    /// Measure sidelobe and ghost levels of a stored image
    Metrics(MetricsArgs),
    /// Run simulate, image, all six maps, enhancement, and metrics in one go
    Pipeline(PipelineArgs),
    /// Render a stored image as an 8-bit graymap on a dB scale
    Export(ExportArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match cli {
        Cli::Simulate(args) => commands::run_simulate(args),
        Cli::Image(args) => commands::run_image(args),
        Cli::Enhance(args) => commands::run_enhance(args),
        Cli::Metrics(args) => commands::run_metrics(args),
        Cli::Pipeline(args) => commands::run_pipeline(args),
        Cli::Export(args) => commands::run_export(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; anything else is an
            // input error. (Exit code 2 is reserved for internal-consistency
            // failures, so usage errors are remapped to 1.)
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(&cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
