//! Run-level performance indicators: average/cell-edge/peak throughput,
//! spectral efficiency and Jain's fairness index.

use crate::error::{Error, Result};

/// Aggregated KPIs of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct KpiRecord {
    pub avg_ue_throughput_bps: f64,
    /// 5th percentile of the per-UE throughput ECDF.
    pub cell_edge_throughput_bps: f64,
    pub spectral_efficiency_bps_hz: f64,
    pub jain_index: f64,
    /// 95th percentile of the per-UE throughput ECDF.
    pub peak_throughput_bps: f64,
    pub n_ues: usize,
    pub bandwidth_hz: f64,
}

impl KpiRecord {
    /// Compute every KPI from per-UE throughputs.
    ///
    /// Rejects an empty or all-zero vector (Jain's index is 0/0 there);
    /// degenerate zero-TTI runs are represented by [`KpiRecord::zeroed`].
    pub fn from_throughputs(per_ue_bps: &[f64], bandwidth_hz: f64) -> Result<Self> {
        Ok(KpiRecord {
            avg_ue_throughput_bps: average_throughput(per_ue_bps)?,
            cell_edge_throughput_bps: percentile_nearest_rank(per_ue_bps, 0.05)?,
            spectral_efficiency_bps_hz: spectral_efficiency(per_ue_bps, bandwidth_hz)?,
            jain_index: jain_index(per_ue_bps)?,
            peak_throughput_bps: peak_throughput(per_ue_bps)?,
            n_ues: per_ue_bps.len(),
            bandwidth_hz,
        })
    }

    /// All-zero marker record for runs that carried no traffic at all
    /// (zero TTIs). The Jain field is set to 0, outside its normal
    /// [1/n, 1] range, precisely so the degenerate case is recognizable.
    pub fn zeroed(n_ues: usize, bandwidth_hz: f64) -> Self {
        KpiRecord {
            avg_ue_throughput_bps: 0.0,
            cell_edge_throughput_bps: 0.0,
            spectral_efficiency_bps_hz: 0.0,
            jain_index: 0.0,
            peak_throughput_bps: 0.0,
            n_ues,
            bandwidth_hz,
        }
    }
}

/// Mean per-UE throughput, sum T_k / n.
pub fn average_throughput(per_ue: &[f64]) -> Result<f64> {
    if per_ue.is_empty() {
        return Err(Error::EmptyInput("average over an empty throughput list"));
    }
    Ok(per_ue.iter().sum::<f64>() / per_ue.len() as f64)
}

/// Nearest-rank percentile: sort ascending, take the 1-based element at
/// ceil(p * n). Deterministic and exactly on an ECDF sample point.
pub fn percentile_nearest_rank(per_ue: &[f64], p: f64) -> Result<f64> {
    if per_ue.is_empty() {
        return Err(Error::EmptyInput("percentile of an empty throughput list"));
    }
    assert!(p > 0.0 && p <= 1.0, "percentile fraction must be in (0, 1]");
    let mut sorted = per_ue.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let raw = p * per_ue.len() as f64;
    // p * n that is an integer up to fp noise must not be pushed up a rank
    // by ceil (e.g. 0.05 * 100 evaluating to 5.000000000000001).
    let rank = if (raw - raw.round()).abs() < 1e-9 {
        raw.round() as usize
    } else {
        raw.ceil() as usize
    };
    let rank = rank.clamp(1, per_ue.len());
    Ok(sorted[rank - 1])
}

/// Sum throughput over bandwidth, S = sum T_k / W.
pub fn spectral_efficiency(per_ue: &[f64], bandwidth_hz: f64) -> Result<f64> {
    if per_ue.is_empty() {
        return Err(Error::EmptyInput("spectral efficiency of an empty list"));
    }
    if bandwidth_hz <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "bandwidth must be positive, got {bandwidth_hz}"
        )));
    }
    Ok(per_ue.iter().sum::<f64>() / bandwidth_hz)
}

/// Jain's fairness index J(T) = (sum T_k)^2 / (n sum T_k^2), in [1/n, 1].
pub fn jain_index(per_ue: &[f64]) -> Result<f64> {
    if per_ue.is_empty() {
        return Err(Error::EmptyInput("fairness of an empty throughput list"));
    }
    let sum: f64 = per_ue.iter().sum();
    let sum_sq: f64 = per_ue.iter().map(|t| t * t).sum();
    if sum_sq == 0.0 {
        return Err(Error::AllZeroThroughput);
    }
    Ok(sum * sum / (per_ue.len() as f64 * sum_sq))
}

/// Peak throughput, defined as the 95th percentile of the per-UE ECDF
/// (robust to a single outlier UE, unlike the maximum).
pub fn peak_throughput(per_ue: &[f64]) -> Result<f64> {
    percentile_nearest_rank(per_ue, 0.95)
}
