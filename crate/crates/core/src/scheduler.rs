//! Per-TTI resource-block allocation: Round Robin and Proportional Fair.
//!
//! RR deals RBs to attached users in cyclic order regardless of channel
//! state (the alpha = 0, beta = 1 point of the generalized priority
//! function). PF assigns each RB to the user maximizing the estimated rate
//! over its exponentially averaged throughput, then updates the average
//! with T(t+1) = (1 - 1/t_c) T(t) + (1/t_c) sum_s R_s(t).

use crate::error::{Error, Result};

/// Which scheduling discipline a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchedulerKind {
    RoundRobin,
    ProportionalFair,
}

impl SchedulerKind {
    pub fn label(&self) -> &'static str {
        match self {
            SchedulerKind::RoundRobin => "rr",
            SchedulerKind::ProportionalFair => "pf",
        }
    }
}

/// Exponents of the generalized priority function P = T^alpha / R^beta.
#[derive(Debug, Clone, Copy)]
pub struct SchedulerWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl SchedulerWeights {
    /// Round Robin operating point: priority 1/R, independent of history.
    pub const ROUND_ROBIN: SchedulerWeights = SchedulerWeights { alpha: 0.0, beta: 1.0 };
}

/// Priority P = T^alpha / R^beta. Rejects non-positive rates.
pub fn rr_priority(avg_throughput: f64, rate: f64, weights: &SchedulerWeights) -> Result<f64> {
    if rate <= 0.0 {
        return Err(Error::RateNotPositive(rate));
    }
    Ok(avg_throughput.powf(weights.alpha) / rate.powf(weights.beta))
}

/// Mapping from resource blocks to frequency chunks: chunks span
/// ceil(rb_count / chunk_count) RBs each, the last chunk taking the
/// remainder.
#[derive(Debug, Clone, Copy)]
pub struct ChunkPlan {
    rb_count: usize,
    chunk_count: usize,
    span: usize,
}

impl ChunkPlan {
    pub fn new(rb_count: usize, chunk_count: usize) -> Result<Self> {
        if chunk_count == 0 {
            return Err(Error::InvalidConfig("chunk_count must be positive".into()));
        }
        if rb_count > 0 && chunk_count > rb_count {
            return Err(Error::InvalidConfig(format!(
                "chunk_count {chunk_count} exceeds rb_count {rb_count}"
            )));
        }
        let span = rb_count.div_ceil(chunk_count).max(1);
        Ok(ChunkPlan {
            rb_count,
            chunk_count,
            span,
        })
    }

    #[inline]
    pub fn chunk_of(&self, rb: usize) -> usize {
        debug_assert!(rb < self.rb_count);
        (rb / self.span).min(self.chunk_count - 1)
    }

    pub fn rb_count(&self) -> usize {
        self.rb_count
    }

    pub fn chunk_count(&self) -> usize {
        self.chunk_count
    }
}

/// One scheduled resource block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RbGrant {
    pub ue: usize,
    pub pmi: usize,
    pub rank: usize,
    pub mcs: usize,
}

/// Per-TTI map of resource blocks to grants; a block left `None` carries
/// nothing. At most one UE per RB by construction.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub grants: Vec<Option<RbGrant>>,
}

impl Assignment {
    pub fn empty(rb_count: usize) -> Self {
        Assignment {
            grants: vec![None; rb_count],
        }
    }

    /// RBs granted to `ue`.
    pub fn rb_count_for(&self, ue: usize) -> usize {
        self.grants
            .iter()
            .filter(|g| g.map(|g| g.ue == ue).unwrap_or(false))
            .count()
    }
}

/// What the scheduler knows about one attached UE: the matured CSI report
/// expanded into per-chunk MCS and estimated per-RB rate.
#[derive(Debug, Clone)]
pub struct UeSched {
    pub ue: usize,
    pub pmi: usize,
    pub rank: usize,
    pub mcs_per_chunk: Vec<usize>,
    /// Estimated deliverable bits per RB per chunk (used by PF only).
    pub rate_per_chunk: Vec<f64>,
}

/// Cyclic Round Robin: RBs are dealt one at a time to UEs in order
/// starting at `cursor`; channel state is ignored entirely.
///
/// Returns the assignment and the advanced cursor
/// (cursor + rb_count) mod n_ues.
pub fn rr_assign(
    active: &[UeSched],
    rb_count: usize,
    cursor: usize,
    plan: &ChunkPlan,
) -> (Assignment, usize) {
    let mut assignment = Assignment::empty(rb_count);
    if active.is_empty() {
        return (assignment, cursor);
    }
    let n = active.len();
    for rb in 0..rb_count {
        let ue = &active[(cursor + rb) % n];
        assignment.grants[rb] = Some(RbGrant {
            ue: ue.ue,
            pmi: ue.pmi,
            rank: ue.rank,
            mcs: ue.mcs_per_chunk[plan.chunk_of(rb)],
        });
    }
    (assignment, (cursor + rb_count) % n)
}

/// Proportional Fair per-UE averaging state T_k, floored at a small
/// epsilon so that never-served users keep maximal priority instead of
/// dividing by zero.
#[derive(Debug, Clone)]
pub struct PfState {
    t_c: f64,
    floor: f64,
    avg: Vec<f64>,
}

impl PfState {
    pub fn new(n_ues: usize, t_c: f64) -> Result<Self> {
        if t_c <= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "PF averaging window must exceed 1 TTI, got {t_c}"
            )));
        }
        Ok(PfState {
            t_c,
            floor: 1.0,
            avg: vec![1.0; n_ues],
        })
    }

    #[inline]
    pub fn avg_throughput(&self, ue: usize) -> f64 {
        self.avg[ue]
    }

    pub fn t_c(&self) -> f64 {
        self.t_c
    }
}

/// Assign each RB to argmax_k rate(chunk, k) / T_k, ties to the lowest
/// ue id.
pub fn pf_assign(
    active: &[UeSched],
    pf: &PfState,
    rb_count: usize,
    plan: &ChunkPlan,
) -> Assignment {
    let mut assignment = Assignment::empty(rb_count);
    if active.is_empty() {
        return assignment;
    }
    // Per-UE metric varies only by chunk; precompute the table.
    let n_chunks = plan.chunk_count();
    let mut metric = vec![0.0f64; active.len() * n_chunks];
    for (k, ue) in active.iter().enumerate() {
        let t = pf.avg_throughput(ue.ue);
        for chunk in 0..n_chunks {
            metric[k * n_chunks + chunk] = ue.rate_per_chunk[chunk] / t;
        }
    }
    for rb in 0..rb_count {
        let chunk = plan.chunk_of(rb);
        let mut best_k = 0;
        let mut best_metric = f64::NEG_INFINITY;
        for k in 0..active.len() {
            let m = metric[k * n_chunks + chunk];
            if m > best_metric {
                best_metric = m;
                best_k = k;
            }
        }
        let ue = &active[best_k];
        assignment.grants[rb] = Some(RbGrant {
            ue: ue.ue,
            pmi: ue.pmi,
            rank: ue.rank,
            mcs: ue.mcs_per_chunk[chunk],
        });
    }
    assignment
}

/// Exponential throughput averaging:
/// T_k(t+1) = (1 - 1/t_c) T_k(t) + (1/t_c) sum_s R_{s,k}(t), for every UE
/// (unscheduled UEs contribute 0), floored at epsilon.
pub fn pf_update(pf: &mut PfState, delivered_per_subband: &[Vec<u64>]) {
    assert_eq!(delivered_per_subband.len(), pf.avg.len());
    let keep = 1.0 - 1.0 / pf.t_c;
    let gain = 1.0 / pf.t_c;
    for (t, delivered) in pf.avg.iter_mut().zip(delivered_per_subband) {
        let total: u64 = delivered.iter().sum();
        *t = (keep * *t + gain * total as f64).max(pf.floor);
    }
}
