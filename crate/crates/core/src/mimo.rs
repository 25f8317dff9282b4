//! Closed-loop spatial multiplexing link abstraction: precoder codebooks,
//! MMSE post-processing SINR, CSI (RI/PMI/CQI) selection, effective-SINR
//! mapping and transport-block outcome.
//!
//! The receiver feeds back the rank, precoder index and per-chunk CQI that
//! maximize the sum log-capacity over all frequency chunks; the base
//! station later transmits with whatever report has survived the feedback
//! delay. Modulation tops out at 16-QAM (4 bits per symbol).

use crate::error::{Error, Result};
use crate::linalg::CMat;
use arrayvec::ArrayVec;
use num_complex::Complex64;

/// Data-bearing resource elements per RB per TTI (168 raw minus
/// control/reference overhead).
pub const DATA_RES_PER_RB: usize = 120;

// ---------------------------------------------------------------------------
// Antenna configuration
// ---------------------------------------------------------------------------

/// The six supported (n_tx, n_rx) pairs: {2,4} x {2,3,4}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaConfig {
    n_tx: usize,
    n_rx: usize,
}

impl AntennaConfig {
    pub fn new(n_tx: usize, n_rx: usize) -> Result<Self> {
        if !matches!(n_tx, 2 | 4) || !matches!(n_rx, 2..=4) {
            return Err(Error::UnsupportedAntenna { n_tx, n_rx });
        }
        Ok(AntennaConfig { n_tx, n_rx })
    }

    /// All six supported configurations in conventional order.
    pub fn all() -> Vec<AntennaConfig> {
        [(2, 2), (2, 3), (2, 4), (4, 2), (4, 3), (4, 4)]
            .iter()
            .map(|&(t, r)| AntennaConfig { n_tx: t, n_rx: r })
            .collect()
    }

    #[inline]
    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    #[inline]
    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    /// Largest spatial-multiplexing rank this pair supports.
    #[inline]
    pub fn max_rank(&self) -> usize {
        self.n_tx.min(self.n_rx)
    }
}

/// Spatial-multiplexing channel capacity C = M B log2(1 + S/N) for M
/// independent streams. M must not exceed min(n_tx, n_rx).
pub fn shannon_capacity_bps(
    config: &AntennaConfig,
    m_streams: usize,
    bandwidth_hz: f64,
    snr_linear: f64,
) -> Result<f64> {
    if m_streams > config.max_rank() {
        return Err(Error::TooManyStreams {
            m: m_streams,
            max: config.max_rank(),
        });
    }
    Ok(m_streams as f64 * bandwidth_hz * (1.0 + snr_linear).log2())
}

// ---------------------------------------------------------------------------
// Precoder codebooks
// ---------------------------------------------------------------------------

/// A codebook precoding matrix with orthonormal columns.
#[derive(Debug, Clone)]
pub struct Precoder {
    pub matrix: CMat,
    pub index: usize,
    pub rank: usize,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Generating vectors of the 4-Tx Householder codebook.
fn householder_u(n: usize) -> [Complex64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match n {
        0 => [c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)],
        1 => [c(1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0)],
        2 => [c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
        3 => [c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0)],
        4 => [c(1.0, 0.0), c(-s, -s), c(0.0, -1.0), c(s, -s)],
        5 => [c(1.0, 0.0), c(s, -s), c(0.0, 1.0), c(-s, -s)],
        6 => [c(1.0, 0.0), c(s, s), c(0.0, -1.0), c(-s, s)],
        7 => [c(1.0, 0.0), c(-s, s), c(0.0, 1.0), c(s, s)],
        8 => [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        9 => [c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, -1.0)],
        10 => [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
        11 => [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 1.0)],
        12 => [c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
        13 => [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
        14 => [c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)],
        15 => [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        _ => unreachable!(),
    }
}

/// Column selections (0-indexed) per codebook index and rank for the 4-Tx
/// codebook. Rank-1 always takes the first Householder column.
fn householder_columns(n: usize, rank: usize) -> &'static [usize] {
    const R2: [[usize; 2]; 16] = [
        [0, 3], [0, 1], [0, 1], [0, 1], [0, 3], [0, 3], [0, 2], [0, 2],
        [0, 1], [0, 3], [0, 2], [0, 2], [0, 1], [0, 2], [0, 2], [0, 1],
    ];
    const R3: [[usize; 3]; 16] = [
        [0, 1, 3], [0, 1, 2], [0, 1, 2], [0, 1, 2], [0, 1, 3], [0, 1, 3], [0, 2, 3], [0, 2, 3],
        [0, 1, 3], [0, 2, 3], [0, 1, 2], [0, 2, 3], [0, 1, 2], [0, 1, 2], [0, 1, 2], [0, 1, 2],
    ];
    const R4: [[usize; 4]; 16] = [
        [0, 1, 2, 3], [0, 1, 2, 3], [2, 1, 0, 3], [2, 1, 0, 3],
        [0, 1, 2, 3], [0, 1, 2, 3], [0, 2, 1, 3], [0, 2, 1, 3],
        [0, 1, 2, 3], [0, 1, 2, 3], [0, 2, 1, 3], [0, 2, 1, 3],
        [0, 1, 2, 3], [0, 2, 1, 3], [2, 1, 0, 3], [0, 1, 2, 3],
    ];
    match rank {
        1 => &[0],
        2 => &R2[n],
        3 => &R3[n],
        4 => &R4[n],
        _ => unreachable!(),
    }
}

/// Deterministic precoder list for one (n_tx, rank) pair.
///
/// 4-Tx: the 16-entry Householder codebook per rank, columns kept at unit
/// norm. 2-Tx: four rank-1 vectors and two rank-2 matrices.
pub fn codebook(n_tx: usize, rank: usize) -> Result<Vec<Precoder>> {
    match (n_tx, rank) {
        (2, 1) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let cols = [
                [c(s, 0.0), c(s, 0.0)],
                [c(s, 0.0), c(-s, 0.0)],
                [c(s, 0.0), c(0.0, s)],
                [c(s, 0.0), c(0.0, -s)],
            ];
            Ok(cols
                .iter()
                .enumerate()
                .map(|(index, col)| Precoder {
                    matrix: CMat::from_fn(2, 1, |i, _| col[i]),
                    index,
                    rank: 1,
                })
                .collect())
        }
        (2, 2) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let m0 = CMat::from_rows(&[&[c(s, 0.0), c(s, 0.0)], &[c(s, 0.0), c(-s, 0.0)]]);
            let m1 = CMat::from_rows(&[&[c(s, 0.0), c(s, 0.0)], &[c(0.0, s), c(0.0, -s)]]);
            Ok(vec![
                Precoder { matrix: m0, index: 0, rank: 2 },
                Precoder { matrix: m1, index: 1, rank: 2 },
            ])
        }
        (4, rank @ 1..=4) => {
            let mut out = Vec::with_capacity(16);
            for n in 0..16 {
                let u = householder_u(n);
                // W = I - 2 u u^H / (u^H u); every u has squared norm 4.
                let w = CMat::from_fn(4, 4, |i, j| {
                    let eye = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                    eye - u[i] * u[j].conj() * 0.5
                });
                let cols = householder_columns(n, rank);
                let matrix = CMat::from_fn(4, rank, |i, j| w.at(i, cols[j]));
                out.push(Precoder {
                    matrix,
                    index: n,
                    rank,
                });
            }
            Ok(out)
        }
        _ => Err(Error::UnsupportedCodebook { n_tx, rank }),
    }
}

/// All ranks of a transmit array's codebook, built once and reused.
#[derive(Debug, Clone)]
pub struct Codebook {
    n_tx: usize,
    per_rank: Vec<Vec<Precoder>>,
}

impl Codebook {
    pub fn for_tx(n_tx: usize, max_rank: usize) -> Result<Self> {
        let per_rank = (1..=max_rank)
            .map(|rank| codebook(n_tx, rank))
            .collect::<Result<Vec<_>>>()?;
        Ok(Codebook { n_tx, per_rank })
    }

    #[inline]
    pub fn rank(&self, rank: usize) -> &[Precoder] {
        &self.per_rank[rank - 1]
    }

    pub fn max_rank(&self) -> usize {
        self.per_rank.len()
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }
}

// ---------------------------------------------------------------------------
// Post-processing SINR
// ---------------------------------------------------------------------------

/// MMSE per-layer post-processing SINR.
///
/// SINR_i = 1 / [(I + (1/sigma^2) F^H H^H H F)^-1]_ii - 1 for each layer.
/// `noise_var` is noise-plus-interference power relative to the
/// unit-variance channel.
pub fn per_layer_sinr(h_chunk: &CMat, precoder: &CMat, noise_var: f64) -> ArrayVec<f64, 4> {
    assert!(noise_var > 0.0, "noise variance must be positive");
    assert_eq!(h_chunk.cols(), precoder.rows(), "precoder/channel mismatch");
    let rank = precoder.cols();
    let inv_sigma2 = 1.0 / noise_var;
    let mut out = ArrayVec::new();

    let w = h_chunk.mul(precoder); // n_rx x rank
    match rank {
        1 => {
            let mut energy = 0.0;
            for i in 0..w.rows() {
                energy += w.at(i, 0).norm_sqr();
            }
            out.push(energy * inv_sigma2);
        }
        2 => {
            let a = w.gram();
            let m00 = 1.0 + a.at(0, 0).re * inv_sigma2;
            let m11 = 1.0 + a.at(1, 1).re * inv_sigma2;
            let m01 = a.at(0, 1) * inv_sigma2;
            let det = m00 * m11 - m01.norm_sqr();
            out.push((det / m11 - 1.0).max(0.0));
            out.push((det / m00 - 1.0).max(0.0));
        }
        _ => {
            let a = w.gram();
            let mut m = CMat::identity(rank);
            for i in 0..rank {
                for j in 0..rank {
                    let v = m.at(i, j) + a.at(i, j) * inv_sigma2;
                    m.set(i, j, v);
                }
            }
            let minv = m.invert().expect("I + PSD is always invertible");
            for i in 0..rank {
                out.push((1.0 / minv.at(i, i).re - 1.0).max(0.0));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Mutual-information curve and effective SINR mapping
// ---------------------------------------------------------------------------

/// Symbol-level mutual information curve used by the effective-SINR
/// mapping. Injectable so a tabulated BICM curve can replace the default.
pub trait MutualInfoCurve {
    /// Bits per symbol at the given linear SINR.
    fn mi(&self, sinr_linear: f64) -> f64;
    /// Inverse map: smallest SINR achieving `bits` (the saturating SINR if
    /// `bits` equals the cap).
    fn sinr_for_mi(&self, bits: f64) -> f64;
    /// Saturation level in bits.
    fn cap_bits(&self) -> f64;
}

/// Truncated Shannon curve I(g) = min(log2(1 + g), cap).
#[derive(Debug, Clone, Copy)]
pub struct TruncatedShannonMi {
    pub cap_bits: f64,
}

impl Default for TruncatedShannonMi {
    fn default() -> Self {
        // 16-QAM: 4 bits per symbol.
        TruncatedShannonMi { cap_bits: 4.0 }
    }
}

impl MutualInfoCurve for TruncatedShannonMi {
    fn mi(&self, sinr_linear: f64) -> f64 {
        (1.0 + sinr_linear).log2().min(self.cap_bits)
    }

    fn sinr_for_mi(&self, bits: f64) -> f64 {
        bits.min(self.cap_bits).exp2() - 1.0
    }

    fn cap_bits(&self) -> f64 {
        self.cap_bits
    }
}

/// Mutual information per symbol under the default 16-QAM-capped curve.
pub fn mi_per_symbol(sinr_linear: f64) -> f64 {
    TruncatedShannonMi::default().mi(sinr_linear)
}

/// Effective SINR: gamma_eff = I^-1(mean of I(gamma_n)).
pub fn miesm_effective_sinr_with(curve: &impl MutualInfoCurve, sinrs: &[f64]) -> Result<f64> {
    if sinrs.is_empty() {
        return Err(Error::EmptyInput("MIESM requires at least one SINR"));
    }
    let mean_mi = sinrs.iter().map(|&g| curve.mi(g)).sum::<f64>() / sinrs.len() as f64;
    Ok(curve.sinr_for_mi(mean_mi))
}

/// Effective SINR under the default truncated-Shannon curve.
pub fn miesm_effective_sinr(sinrs: &[f64]) -> Result<f64> {
    miesm_effective_sinr_with(&TruncatedShannonMi::default(), sinrs)
}

// ---------------------------------------------------------------------------
// MCS table, CQI selection and transport-block outcome
// ---------------------------------------------------------------------------

/// One modulation-and-coding level. `index` 0 is reserved for
/// "no transmission" and never appears in the table.
#[derive(Debug, Clone, Copy)]
pub struct McsEntry {
    pub index: usize,
    pub bits_per_symbol: f64,
    pub sinr_threshold: f64,
}

/// Ordered MCS levels with strictly increasing rates and thresholds.
#[derive(Debug, Clone)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl McsTable {
    /// The 16-QAM ladder: bits per symbol 0.5 .. 3.5 in half-bit steps,
    /// threshold at the SINR where the MI curve reaches the rate
    /// (2^e - 1).
    pub fn default_16qam() -> Self {
        let entries = (1..=7)
            .map(|i| {
                let e = i as f64 * 0.5;
                // 2^(i/2) = sqrt(2^i); sqrt is correctly rounded, so the
                // integer-rate thresholds (1, 3, 7) come out exact.
                McsEntry {
                    index: i,
                    bits_per_symbol: e,
                    sinr_threshold: 2f64.powi(i as i32).sqrt() - 1.0,
                }
            })
            .collect();
        McsTable { entries }
    }

    /// Build a ladder with `levels` equal rate steps up to `cap_bits`
    /// (exclusive of the cap itself so the top level stays reachable),
    /// thresholds at the SINR where the MI curve meets each rate. The
    /// spec ladder is `with_levels(7, 4.0)`: e in {0.5, ..., 3.5}.
    pub fn with_levels(levels: usize, cap_bits: f64) -> Result<Self> {
        if levels == 0 {
            return Err(Error::EmptyInput("MCS table needs at least one level"));
        }
        let step = cap_bits / (levels as f64 + 1.0);
        let entries = (1..=levels)
            .map(|i| {
                let e = step * i as f64;
                McsEntry {
                    index: i,
                    bits_per_symbol: e,
                    sinr_threshold: e.exp2() - 1.0,
                }
            })
            .collect();
        let table = McsTable { entries };
        table.validate()?;
        Ok(table)
    }

    /// Build from explicit entries (validated).
    pub fn from_entries(entries: Vec<McsEntry>) -> Result<Self> {
        let table = McsTable { entries };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::EmptyInput("MCS table has no entries"));
        }
        for w in self.entries.windows(2) {
            if w[1].bits_per_symbol <= w[0].bits_per_symbol
                || w[1].sinr_threshold <= w[0].sinr_threshold
            {
                return Err(Error::InvalidConfig(
                    "MCS rates and thresholds must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    /// Entry for a positive MCS index; `None` for index 0.
    pub fn entry(&self, mcs: usize) -> Option<&McsEntry> {
        if mcs == 0 {
            None
        } else {
            self.entries.iter().find(|e| e.index == mcs)
        }
    }
}

/// Highest MCS whose threshold the backed-off effective SINR still clears;
/// 0 (no transmission) when even the lowest level fails.
pub fn cqi_select(effective_sinr_linear: f64, table: &McsTable, backoff_db: f64) -> usize {
    let g = effective_sinr_linear * 10f64.powf(-backoff_db / 10.0);
    let mut chosen = 0;
    for e in table.entries() {
        if e.sinr_threshold <= g {
            chosen = e.index;
        } else {
            break;
        }
    }
    chosen
}

/// Deterministic threshold transport-block outcome: full payload when the
/// actual effective SINR still meets the scheduled MCS threshold, zero
/// bits (block error) otherwise.
pub fn tb_outcome(
    mcs: usize,
    actual_effective_sinr: f64,
    table: &McsTable,
    rb_count: usize,
    layers: usize,
    data_res_per_rb: usize,
) -> u64 {
    let Some(entry) = table.entry(mcs) else {
        return 0;
    };
    if actual_effective_sinr >= entry.sinr_threshold {
        (entry.bits_per_symbol * (data_res_per_rb * rb_count * layers) as f64).round() as u64
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// CSI selection
// ---------------------------------------------------------------------------

/// Delayed feedback record: rank indicator, precoder index and one CQI per
/// frequency chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsiReport {
    pub ri: usize,
    pub pmi: usize,
    pub cqi_per_chunk: Vec<usize>,
    pub created_tti: i64,
}

impl CsiReport {
    /// Conservative report used before any real feedback has matured:
    /// rank 1, precoder 0, lowest MCS everywhere.
    pub fn fallback(chunk_count: usize, created_tti: i64) -> Self {
        CsiReport {
            ri: 1,
            pmi: 0,
            cqi_per_chunk: vec![1; chunk_count],
            created_tti,
        }
    }
}

/// Total sector power is shared equally across spatial layers: a rank-r
/// hypothesis places power 1/r on each unit-norm precoder column, which
/// is equivalent to evaluating the unit-power SINR formula at noise
/// r * sigma^2.
#[inline]
pub fn layer_noise_var(noise_var: f64, rank: usize) -> f64 {
    noise_var * rank as f64
}

/// Per-run CSI selection context: codebook, MCS table and CQI backoff for
/// one antenna configuration.
///
/// Rank hypotheses are compared under the shared-total-power budget (see
/// [`layer_noise_var`]); without it every extra layer would arrive with a
/// free unit of transmit power and rank selection would be meaningless
/// against a fixed sector power.
#[derive(Debug, Clone)]
pub struct CsiContext {
    antenna: AntennaConfig,
    codebook: Codebook,
    mcs_table: McsTable,
    cqi_backoff_db: f64,
}

impl CsiContext {
    pub fn new(antenna: AntennaConfig, mcs_table: McsTable, cqi_backoff_db: f64) -> Result<Self> {
        mcs_table.validate()?;
        let codebook = Codebook::for_tx(antenna.n_tx(), antenna.max_rank())?;
        Ok(CsiContext {
            antenna,
            codebook,
            mcs_table,
            cqi_backoff_db,
        })
    }

    pub fn antenna(&self) -> AntennaConfig {
        self.antenna
    }

    pub fn mcs_table(&self) -> &McsTable {
        &self.mcs_table
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    #[inline]
    pub fn precoder(&self, rank: usize, pmi: usize) -> &Precoder {
        &self.codebook.rank(rank)[pmi]
    }

    /// Exhaustive (rank, precoder) search maximizing the sum over chunks
    /// and layers of log2(1 + SINR). Ties break toward lower rank, then
    /// lower precoder index. CQI per chunk is the MIESM-compressed layer
    /// SINR of the winning precoder pushed through the MCS table.
    pub fn select_csi(&self, channel_chunks: &[CMat], noise_var: f64, tti: i64) -> CsiReport {
        assert!(!channel_chunks.is_empty(), "need at least one chunk");
        let mut best_metric = f64::NEG_INFINITY;
        let mut best = (1usize, 0usize);

        for rank in 1..=self.antenna.max_rank() {
            let sigma2 = layer_noise_var(noise_var, rank);
            for (pmi, precoder) in self.codebook.rank(rank).iter().enumerate() {
                let mut metric = 0.0;
                for h in channel_chunks {
                    let sinrs = per_layer_sinr(h, &precoder.matrix, sigma2);
                    // One log per chunk: sum of log2(1+s) equals
                    // log2 of the product.
                    let prod: f64 = sinrs.iter().fold(1.0, |acc, &s| acc * (1.0 + s));
                    metric += prod.log2();
                }
                if metric > best_metric {
                    best_metric = metric;
                    best = (rank, pmi);
                }
            }
        }

        let (ri, pmi) = best;
        let precoder = self.precoder(ri, pmi);
        let sigma2 = layer_noise_var(noise_var, ri);
        let cqi_per_chunk = channel_chunks
            .iter()
            .map(|h| {
                let sinrs = per_layer_sinr(h, &precoder.matrix, sigma2);
                let g_eff = miesm_effective_sinr(&sinrs).expect("non-empty layer set");
                cqi_select(g_eff, &self.mcs_table, self.cqi_backoff_db)
            })
            .collect();

        CsiReport {
            ri,
            pmi,
            cqi_per_chunk,
            created_tti: tti,
        }
    }
}
