//! System-level simulator of a multi-cell MU-MIMO cellular downlink.
//!
//! The simulator quantifies how transmit/receive antenna-count asymmetry
//! affects throughput, fairness, spectral efficiency and cell-edge
//! performance for users moving at 0-120 km/h under Round Robin and
//! Proportional Fair scheduling. The causal chain it models: user velocity
//! induces Doppler spread, Doppler decorrelates the channel between CSI
//! report and transmission, stale precoder/MCS decisions cause block
//! errors, throughput drops — and receive-side antenna surplus buys back
//! robustness.
//!
//! Module map:
//! - [`netlayout`]: hexagonal site grid, sectorization, UE drop
//! - [`propagation`]: pathloss, shadowing, noise, wideband SINR
//! - [`fading`]: time-correlated Rayleigh MIMO fading (Doppler-driven)
//! - [`mimo`]: codebooks, MMSE layer SINR, CSI selection, MIESM, MCS
//! - [`scheduler`]: Round Robin and Proportional Fair RB allocation
//! - [`mobility`]: random-walk movement, serving-sector reselection
//! - [`kpi`]: throughput/fairness/efficiency indicators
//! - [`simcore`]: the per-TTI loop tying everything together

pub mod error;
pub mod fading;
pub mod kpi;
pub mod linalg;
pub mod mimo;
pub mod mobility;
pub mod netlayout;
pub mod propagation;
pub mod scheduler;
pub mod simcore;

pub use error::{Error, Result};
pub use kpi::KpiRecord;
pub use mimo::AntennaConfig;
pub use netlayout::{build_hex_layout, drop_ues, LayoutConfig, NetworkLayout, UeState};
pub use scheduler::SchedulerKind;
pub use simcore::{derive_stream, run, SimConfig, SimOutput, TraceRow};
