//! Random-walk UE movement and serving-sector reselection.
//!
//! Every TTI each UE takes a fixed-length step v * dt in a fresh uniformly
//! random direction, reflecting specularly off the layout bounds. Handover
//! is ideal: the serving sector is simply the strongest one at the new
//! position.

use crate::netlayout::{Bounds, NetworkLayout, UeState};
use crate::propagation::{PathlossParams, ShadowingField};
use rand::Rng;
use std::f64::consts::TAU;

#[derive(Debug, Clone)]
pub struct MobilityConfig {
    pub velocity_kmh: f64,
    /// Step interval in seconds (one TTI).
    pub dt_s: f64,
    pub bounds: Bounds,
}

/// One random-walk step: direction uniform on [0, 2 pi), displacement
/// length (v / 3.6) * dt, specular reflection at the bounds.
pub fn step(ue: &mut UeState, config: &MobilityConfig, rng: &mut impl Rng) {
    let angle = rng.random::<f64>() * TAU;
    let len = config.velocity_kmh / 3.6 * config.dt_s;
    let raw = crate::netlayout::Vec2::new(
        ue.position.x + len * angle.cos(),
        ue.position.y + len * angle.sin(),
    );
    ue.position = config.bounds.reflect(raw);
}

/// Instantaneous zero-loss handover: serving sector becomes the argmax of
/// macroscopic received power (pathloss + pattern + shadowing).
pub fn reselect_serving(
    ue: &mut UeState,
    layout: &NetworkLayout,
    shadowing: &ShadowingField,
    params: &PathlossParams,
) {
    ue.serving_sector = layout.strongest_sector(ue.position, params, Some((shadowing, ue.ue_id)));
}
