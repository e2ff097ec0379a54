//! Command-line entry point. Parses the flags, merges them over an
//! optional JSON run configuration, dispatches, and maps errors onto the
//! documented exit codes (0 ok, 2 invalid input, 3 legal empty result,
//! 4 numerical failure).

use clap::Parser;
use std::path::PathBuf;
use threelines::cli::{self, Mode, Overrides, RunConfig};
use threelines::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "threelines",
    version,
    about = "Minimal disks bounded by three skew lines and their hyperbolic cousin surfaces"
)]
struct Args {
    /// Command to run (may also come from the config file).
    #[arg(value_enum)]
    mode: Option<Mode>,

    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory for meshes, reports and CSV samples.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Mesh resolution (grid cells across the window).
    #[arg(long, value_name = "N")]
    resolution: Option<usize>,

    /// Exclusion radius around the punctures in the parameter chart.
    #[arg(long, value_name = "X")]
    r_excl: Option<f64>,

    /// Trinoid end data: three comma-separated growth parameters μ.
    #[arg(long, value_name = "a,b,c", value_delimiter = ',')]
    mu: Option<Vec<f64>>,

    /// Apply the rotation by π about the x3-axis, (λ, μ) → (−iλ, iμ).
    #[arg(long)]
    flip_reflection: bool,

    /// classify: also emit a representative line triple.
    #[arg(long)]
    emit_lines: bool,

    /// Seed for the randomized sampled checks.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

fn build_config(args: Args) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Some(serde_json::from_str::<RunConfig>(&text)?)
        }
        None => None,
    };
    let mu = match args.mu {
        Some(v) => {
            let [a, b, c] = v.as_slice() else {
                return Err(Error::invalid(format!(
                    "--mu needs exactly three values, got {}",
                    v.len()
                )));
            };
            Some([*a, *b, *c])
        }
        None => None,
    };
    RunConfig::from_sources(
        file,
        Overrides {
            mode: args.mode,
            mu,
            out: args.out,
            resolution: args.resolution,
            r_excl: args.r_excl,
            flip_reflection: args.flip_reflection,
            emit_lines: args.emit_lines,
            seed: args.seed,
        },
    )
}

fn main() {
    let args = Args::parse();
    let code = match build_config(args).and_then(|cfg| cli::run(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
