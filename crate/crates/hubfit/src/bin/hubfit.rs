//! Batch CLI: one subcommand per pipeline stage, flat key-value config,
//! deterministic CSV/JSON output. All the work lives in the library.

use clap::{Parser, Subcommand};
use hubfit::config::Config;
use hubfit::driver::{run, RunOptions};
use hubfit::output::OutputFormat;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "hubfit",
    version,
    about = "Bose-Hubbard parameters for two bosons in a three-well optical lattice"
)]
struct Cli {
    /// Path to a flat key-value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Restrict `figures` to one figure (fig2, fig3, fig4, fig5, fig6, fig7, fig10).
    #[arg(long, global = true)]
    only: Option<String>,

    /// Worker threads for sweeps (falls back to HUBFIT_JOBS, then all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format.
    #[arg(long, global = true, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Band extents of the sinusoidal lattice over a depth grid.
    Bands,
    /// Wannier-function profiles of the three sites.
    Wannier,
    /// All BH and extended-BH parameters.
    Params,
    /// The two-body harmonic-trap spectrum branches.
    Busch,
    /// Six-level spectra with raw and rescaled energies.
    Spectrum,
    /// Two-step optimal-parameter fit against a reference CSV.
    Fit,
    /// 1D two-boson exact-diagonalization reference spectra.
    Oracle,
    /// Generic axis sweep driving one of the emitters (`sweep_op`).
    Sweep,
    /// Canned sweeps mirroring the reference figures.
    Figures,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Wannier => "wannier",
            Command::Params => "params",
            Command::Busch => "busch",
            Command::Spectrum => "spectrum",
            Command::Fit => "fit",
            Command::Oracle => "oracle",
            Command::Sweep => "sweep",
            Command::Figures => "figures",
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => Config::from_path(path),
        None => Ok(Config::default()),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("hubfit: {e}");
            std::process::exit(1);
        }
    };
    let jobs = cli
        .jobs
        .or_else(|| std::env::var("HUBFIT_JOBS").ok().and_then(|v| v.parse().ok()));
    let opts = RunOptions {
        out_dir: cli.out.clone(),
        format: if cli.format == "json" { OutputFormat::Json } else { OutputFormat::Csv },
        jobs,
        only: cli.only.clone(),
    };
    let started = Instant::now();
    match run(cli.command.name(), &cfg, &opts) {
        Ok(paths) => {
            for p in &paths {
                eprintln!("hubfit: wrote {}", p.display());
            }
            eprintln!("hubfit: done in {:.3} s", started.elapsed().as_secs_f64());
        }
        Err(e) => {
            eprintln!("hubfit: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
