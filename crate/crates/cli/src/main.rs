//! Command-line front end: batch sweeps and geometry dumps.

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use mucellsim_cli::config::{
    parse_antenna_list, parse_config_file, parse_scheduler_list, parse_seed_list,
    parse_velocity_list, RunSettings, SweepSpec,
};
use mucellsim_cli::sweep::{run_sweep, write_geometry_csv};
use mucellsim_core::{build_hex_layout, LayoutConfig};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "mucellsim",
    about = "Multi-cell MU-MIMO downlink simulator: velocity/antenna/scheduler sweeps with CSV output",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a velocity x antenna x scheduler x seed sweep and write
    /// detail.csv / aggregate.csv into the output directory.
    Sweep(SweepArgs),
    /// Dump the hexagonal layout as CSV (site_id, x, y, sector_id,
    /// boresight_deg).
    Geometry(GeometryArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Key=value config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV artifacts.
    #[arg(long, default_value = "sweep_out")]
    out_dir: PathBuf,
    /// Comma-separated velocities in km/h (default 0,10,...,120).
    #[arg(long)]
    velocities: Option<String>,
    /// Comma-separated antenna pairs, e.g. 2x4,4x4 (default all six).
    #[arg(long)]
    antenna: Option<String>,
    /// rr, pf or both (default both).
    #[arg(long)]
    scheduler: Option<String>,
    /// Comma-separated seeds (default 42).
    #[arg(long)]
    seeds: Option<String>,
    /// TTIs per run (default: 20 for RR, 50 for PF).
    #[arg(long)]
    ttis: Option<usize>,
    /// Hexagon rings around the center site (default 2 -> 19 sites).
    #[arg(long)]
    rings: Option<u32>,
    /// Emit a per-TTI trace CSV for every run.
    #[arg(long)]
    trace: bool,
    /// Worker threads for the run pool (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Also write a gnuplot script next to the CSVs.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args)]
struct GeometryArgs {
    /// Hexagon rings around the center site.
    #[arg(long, default_value_t = 2)]
    rings: u32,
    /// Inter-site distance in meters.
    #[arg(long, default_value_t = 500.0)]
    isd: f64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    if let Err(err) = dispatch() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn dispatch() -> Result<()> {
    match Cli::parse().command {
        Command::Sweep(args) => sweep(args),
        Command::Geometry(args) => geometry(args),
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut spec = SweepSpec::default();
    let mut settings = RunSettings::default();
    if let Some(path) = &args.config {
        parse_config_file(path, &mut spec, &mut settings)?;
    }
    if let Some(v) = &args.velocities {
        spec.velocities = parse_velocity_list(v)?;
    }
    if let Some(a) = &args.antenna {
        spec.antennas = parse_antenna_list(a)?;
    }
    if let Some(s) = &args.scheduler {
        spec.schedulers = parse_scheduler_list(s)?;
    }
    if let Some(s) = &args.seeds {
        spec.seeds = parse_seed_list(s)?;
    }
    if let Some(t) = args.ttis {
        spec.n_ttis = Some(t);
    }
    if let Some(r) = args.rings {
        settings.rings = r;
    }
    if let Some(w) = args.workers {
        settings.workers = w;
    }

    let outcome = run_sweep(&spec, &settings, &args.out_dir, args.trace, args.gnuplot)?;
    println!(
        "{} runs -> {} and {}",
        outcome.rows.len(),
        outcome.detail_path.display(),
        outcome.aggregate_path.display()
    );
    Ok(())
}

fn geometry(args: GeometryArgs) -> Result<()> {
    let layout = build_hex_layout(LayoutConfig {
        n_rings: args.rings,
        isd_m: args.isd,
        ..LayoutConfig::default()
    })?;
    match &args.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            write_geometry_csv(&layout, &mut file)?;
        }
        None => {
            let stdout = std::io::stdout();
            if let Err(err) = write_geometry_csv(&layout, &mut stdout.lock()) {
                // A closed pipe (e.g. `| head`) is not a failure.
                match err.downcast_ref::<std::io::Error>() {
                    Some(io) if io.kind() == std::io::ErrorKind::BrokenPipe => {}
                    _ => return Err(err),
                }
            }
        }
    }
    Ok(())
}
