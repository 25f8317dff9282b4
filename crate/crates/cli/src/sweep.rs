//! Sweep execution and artifact output.
//!
//! Runs the velocity x antenna x scheduler x seed grid on a bounded
//! worker pool, then writes plot-ready CSVs: `detail.csv` (one row per
//! run) and `aggregate.csv` (seed means and sample standard deviations).
//! Output is byte-deterministic for a given spec: results are collected
//! and written in grid order regardless of completion order.

use crate::config::{RunSettings, SweepSpec};
use anyhow::{Context, Result};
use mucellsim_core::{run, AntennaConfig, KpiRecord, SchedulerKind};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const DETAIL_HEADER: &str =
    "velocity_kmh,scheduler,n_tx,n_rx,seed,avg_tput_mbps,edge_tput_mbps,se_bps_hz,jain,peak_tput_mbps";

pub const AGGREGATE_HEADER: &str = "velocity_kmh,scheduler,n_tx,n_rx,n_seeds,\
avg_tput_mbps_mean,avg_tput_mbps_std,edge_tput_mbps_mean,edge_tput_mbps_std,\
se_bps_hz_mean,se_bps_hz_std,jain_mean,jain_std,peak_tput_mbps_mean,peak_tput_mbps_std";

#[derive(Debug, Clone)]
struct Job {
    velocity: f64,
    scheduler: SchedulerKind,
    antenna: AntennaConfig,
    seed: u64,
    n_ttis: usize,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub velocity: f64,
    pub scheduler: SchedulerKind,
    pub antenna: AntennaConfig,
    pub seed: u64,
    pub kpis: KpiRecord,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub detail_path: PathBuf,
    pub aggregate_path: PathBuf,
}

fn kpi_fields(k: &KpiRecord) -> [f64; 5] {
    [
        k.avg_ue_throughput_bps / 1e6,
        k.cell_edge_throughput_bps / 1e6,
        k.spectral_efficiency_bps_hz,
        k.jain_index,
        k.peak_throughput_bps / 1e6,
    ]
}

/// Execute the sweep and write all artifacts into `out_dir`.
pub fn run_sweep(
    spec: &SweepSpec,
    settings: &RunSettings,
    out_dir: &Path,
    record_trace: bool,
    emit_gnuplot: bool,
) -> Result<SweepOutcome> {
    spec.validate()?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    // Fail on unwritable targets before any simulation starts.
    let probe = out_dir.join(".write_probe");
    fs::write(&probe, b"")
        .with_context(|| format!("output directory {} is not writable", out_dir.display()))?;
    fs::remove_file(&probe).ok();

    // Grid order defines row order: velocity, scheduler, antenna, seed.
    let mut jobs = Vec::new();
    for &velocity in &spec.velocities {
        for &scheduler in &spec.schedulers {
            for &antenna in &spec.antennas {
                for &seed in &spec.seeds {
                    jobs.push(Job {
                        velocity,
                        scheduler,
                        antenna,
                        seed,
                        n_ttis: spec.ttis_for(scheduler),
                    });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers)
        .build()
        .context("failed to build worker pool")?;
    let results: Vec<Result<SweepRow>> = pool.install(|| {
        use rayon::prelude::*;
        jobs.par_iter()
            .map(|job| {
                let config = settings.sim_config(
                    job.velocity,
                    job.antenna,
                    job.scheduler,
                    job.seed,
                    job.n_ttis,
                    record_trace,
                );
                let output = run(&config)?;
                if let Some(trace) = &output.trace {
                    write_trace(out_dir, job, trace)?;
                }
                Ok(SweepRow {
                    velocity: job.velocity,
                    scheduler: job.scheduler,
                    antenna: job.antenna,
                    seed: job.seed,
                    kpis: output.kpis,
                })
            })
            .collect()
    });
    let rows: Vec<SweepRow> = results.into_iter().collect::<Result<_>>()?;

    let detail_path = out_dir.join("detail.csv");
    write_detail(&detail_path, &rows)?;
    let aggregate_path = out_dir.join("aggregate.csv");
    write_aggregate(&aggregate_path, &rows, spec.seeds.len())?;
    if emit_gnuplot {
        write_gnuplot(&out_dir.join("plots.gp"), spec)?;
    }

    Ok(SweepOutcome {
        rows,
        detail_path,
        aggregate_path,
    })
}

fn write_detail(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(DETAIL_HEADER);
    out.push('\n');
    for row in rows {
        let k = kpi_fields(&row.kpis);
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            row.velocity,
            row.scheduler.label(),
            row.antenna.n_tx(),
            row.antenna.n_rx(),
            row.seed,
            k[0],
            k[1],
            k[2],
            k[3],
            k[4],
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_aggregate(path: &Path, rows: &[SweepRow], seeds_per_point: usize) -> Result<()> {
    let mut out = String::new();
    out.push_str(AGGREGATE_HEADER);
    out.push('\n');
    for group in rows.chunks(seeds_per_point) {
        let first = &group[0];
        debug_assert!(group.iter().all(|r| {
            r.velocity == first.velocity
                && r.scheduler == first.scheduler
                && r.antenna == first.antenna
        }));
        let n = group.len() as f64;
        let mut stats = Vec::with_capacity(5);
        for i in 0..5 {
            let values: Vec<f64> = group.iter().map(|r| kpi_fields(&r.kpis)[i]).collect();
            let mean = values.iter().sum::<f64>() / n;
            let std = if group.len() > 1 {
                (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            stats.push((mean, std));
        }
        out.push_str(&format!(
            "{},{},{},{},{}",
            first.velocity,
            first.scheduler.label(),
            first.antenna.n_tx(),
            first.antenna.n_rx(),
            group.len(),
        ));
        for (mean, std) in stats {
            out.push_str(&format!(",{:.6},{:.6}", mean, std));
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_trace(
    out_dir: &Path,
    job: &Job,
    trace: &[mucellsim_core::TraceRow],
) -> Result<()> {
    let name = format!(
        "trace_v{}_{}_{}x{}_s{}.csv",
        job.velocity,
        job.scheduler.label(),
        job.antenna.n_tx(),
        job.antenna.n_rx(),
        job.seed
    );
    let path = out_dir.join(name);
    let mut out = String::with_capacity(32 * (trace.len() + 1));
    out.push_str("tti,ue_id,serving_sector,rb_count_assigned,ri,mcs,delivered_bits\n");
    for row in trace {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.tti,
            row.ue_id,
            row.serving_sector,
            row.rb_count_assigned,
            row.ri,
            row.mcs,
            row.delivered_bits
        ));
    }
    fs::write(&path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_gnuplot(path: &Path, spec: &SweepSpec) -> Result<()> {
    let mut out = String::new();
    out.push_str("# Plots of aggregate.csv; run with: gnuplot plots.gp\n");
    out.push_str("set datafile separator \",\"\n");
    out.push_str("set key outside\n");
    out.push_str("set xlabel \"velocity (km/h)\"\n");
    out.push_str("set terminal pngcairo size 1000,700\n");
    let metrics: [(&str, usize, &str); 5] = [
        ("avg_tput", 6, "average UE throughput (Mbit/s)"),
        ("edge_tput", 8, "cell-edge throughput (Mbit/s)"),
        ("se", 10, "spectral efficiency (bit/s/Hz)"),
        ("jain", 12, "Jain fairness index"),
        ("peak_tput", 14, "peak throughput (Mbit/s)"),
    ];
    for (stem, column, label) in metrics {
        for sched in &spec.schedulers {
            let s = sched.label();
            out.push_str(&format!("set output \"{stem}_{s}.png\"\n"));
            out.push_str(&format!("set ylabel \"{label}\"\n"));
            let mut first = true;
            out.push_str("plot ");
            for a in &spec.antennas {
                if !first {
                    out.push_str(", \\\n     ");
                }
                first = false;
                out.push_str(&format!(
                    "\"aggregate.csv\" using 1:(stringcolumn(2) eq \"{s}\" && $3 == {} && $4 == {} ? ${column} : NaN) \
                     with linespoints title \"{}x{}\"",
                    a.n_tx(),
                    a.n_rx(),
                    a.n_tx(),
                    a.n_rx(),
                ));
            }
            out.push('\n');
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Write the layout geometry as CSV: one row per sector.
pub fn write_geometry_csv(layout: &mucellsim_core::NetworkLayout, w: &mut impl Write) -> Result<()> {
    writeln!(w, "site_id,x,y,sector_id,boresight_deg")?;
    for sector in &layout.sectors {
        writeln!(
            w,
            "{},{:.3},{:.3},{},{}",
            sector.site_id,
            sector.site_position.x,
            sector.site_position.y,
            sector.sector_id,
            sector.boresight_deg
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mucellsim_core::{build_hex_layout, LayoutConfig};

    fn tiny_spec() -> (SweepSpec, RunSettings) {
        let spec = SweepSpec {
            velocities: vec![0.0],
            antennas: vec![AntennaConfig::new(2, 2).unwrap()],
            schedulers: vec![SchedulerKind::RoundRobin],
            seeds: vec![42],
            n_ttis: Some(10),
        };
        let settings = RunSettings {
            rings: 0,
            ues_per_sector: 2,
            workers: 2,
            ..RunSettings::default()
        };
        (spec, settings)
    }

    #[test]
    fn single_point_sweep_writes_one_detail_and_one_aggregate_row() {
        let (spec, settings) = tiny_spec();
        let dir = tempfile::tempdir().unwrap();
        let outcome = run_sweep(&spec, &settings, dir.path(), false, false).unwrap();
        assert_eq!(outcome.rows.len(), 1);
        let detail = fs::read_to_string(&outcome.detail_path).unwrap();
        let lines: Vec<&str> = detail.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], DETAIL_HEADER);
        let agg = fs::read_to_string(&outcome.aggregate_path).unwrap();
        assert_eq!(agg.lines().count(), 2);
    }

    #[test]
    fn sweep_is_byte_deterministic() {
        let (mut spec, settings) = tiny_spec();
        spec.velocities = vec![0.0, 60.0];
        spec.seeds = vec![42, 43];
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let o1 = run_sweep(&spec, &settings, d1.path(), false, false).unwrap();
        let o2 = run_sweep(&spec, &settings, d2.path(), false, false).unwrap();
        assert_eq!(
            fs::read(&o1.detail_path).unwrap(),
            fs::read(&o2.detail_path).unwrap()
        );
        assert_eq!(
            fs::read(&o1.aggregate_path).unwrap(),
            fs::read(&o2.aggregate_path).unwrap()
        );
    }

    #[test]
    fn aggregate_means_match_detail_rows() {
        let (mut spec, settings) = tiny_spec();
        spec.seeds = vec![1, 2, 3];
        let dir = tempfile::tempdir().unwrap();
        let outcome = run_sweep(&spec, &settings, dir.path(), false, false).unwrap();
        let detail_avg: f64 = outcome
            .rows
            .iter()
            .map(|r| r.kpis.avg_ue_throughput_bps / 1e6)
            .sum::<f64>()
            / 3.0;
        let agg = fs::read_to_string(&outcome.aggregate_path).unwrap();
        let line = agg.lines().nth(1).unwrap();
        let mean: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!((mean - detail_avg).abs() <= 1e-6 + 1e-9 * detail_avg.abs());
        let n_seeds: usize = line.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(n_seeds, 3);
    }

    #[test]
    fn trace_files_appear_when_requested() {
        let (spec, settings) = tiny_spec();
        let dir = tempfile::tempdir().unwrap();
        run_sweep(&spec, &settings, dir.path(), true, false).unwrap();
        let trace = dir.path().join("trace_v0_rr_2x2_s42.csv");
        assert!(trace.exists(), "missing {}", trace.display());
        let body = fs::read_to_string(trace).unwrap();
        assert!(body.starts_with("tti,ue_id,serving_sector,rb_count_assigned,ri,mcs,delivered_bits"));
    }

    #[test]
    fn geometry_csv_lists_every_sector() {
        let layout = build_hex_layout(LayoutConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_geometry_csv(&layout, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 57);
        assert!(text.starts_with("site_id,x,y,sector_id,boresight_deg"));
    }

    #[test]
    fn gnuplot_script_emitted_on_request() {
        let (spec, settings) = tiny_spec();
        let dir = tempfile::tempdir().unwrap();
        run_sweep(&spec, &settings, dir.path(), false, true).unwrap();
        let gp = fs::read_to_string(dir.path().join("plots.gp")).unwrap();
        assert!(gp.contains("aggregate.csv"));
    }
}
