//! Macroscopic link budget: urban-macro pathloss, log-normal shadowing,
//! received power, thermal noise and wideband SINR.
//!
//! All quantities are handled in dB/dBm and converted to the linear
//! milliwatt domain only where powers have to be summed.

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Distance floor in kilometers. Links shorter than this are evaluated at
/// the floor to keep the log-distance model out of its near-field
/// singularity.
pub const MIN_DISTANCE_KM: f64 = 0.035;

/// Parameters of the urban-macro pathloss model.
#[derive(Debug, Clone, Copy)]
pub struct PathlossParams {
    /// Base-station antenna height in meters.
    pub h_bs_m: f64,
    /// Carrier frequency in MHz.
    pub f_mhz: f64,
}

impl Default for PathlossParams {
    fn default() -> Self {
        PathlossParams {
            h_bs_m: 20.0,
            f_mhz: 2450.0,
        }
    }
}

/// Urban-macro pathloss in dB at range `r_km` kilometers.
///
/// L = 40 (1 - 4e-3 h_BS) log10(R) - 18 log10(h_BS) + 21 log10(f) + 80
///
/// Distances below [`MIN_DISTANCE_KM`] are clamped to the floor. Rejects
/// non-positive distances.
pub fn pathloss_db(r_km: f64, params: &PathlossParams) -> Result<f64> {
    if r_km.is_nan() || r_km <= 0.0 {
        return Err(Error::NonPositiveDistance(r_km));
    }
    let r = r_km.max(MIN_DISTANCE_KM);
    Ok(40.0 * (1.0 - 4e-3 * params.h_bs_m) * r.log10() - 18.0 * params.h_bs_m.log10()
        + 21.0 * params.f_mhz.log10()
        + 80.0)
}

/// Received power: tx + antenna gain - pathloss - shadowing, all in dB units.
#[inline]
pub fn rx_power_dbm(
    tx_power_dbm: f64,
    pattern_gain_dbi: f64,
    pathloss_db: f64,
    shadowing_db: f64,
) -> f64 {
    tx_power_dbm + pattern_gain_dbi - pathloss_db - shadowing_db
}

/// Thermal noise power over `bandwidth_hz` with the given receiver noise
/// figure: -174 dBm/Hz + 10 log10(B) + NF.
pub fn noise_power_dbm(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    assert!(bandwidth_hz > 0.0, "bandwidth must be positive");
    -174.0 + 10.0 * bandwidth_hz.log10() + noise_figure_db
}

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Wideband SINR in dB: serving over (sum of interferers + noise), with the
/// summation carried out in linear milliwatts.
pub fn wideband_sinr_db(serving_dbm: f64, interferer_dbms: &[f64], noise_dbm: f64) -> f64 {
    let serving = db_to_linear(serving_dbm);
    let denom: f64 =
        interferer_dbms.iter().map(|&p| db_to_linear(p)).sum::<f64>() + db_to_linear(noise_dbm);
    linear_to_db(serving / denom)
}

/// Per-link log-normal shadowing, drawn once per run and fixed thereafter.
///
/// Values are zero-mean Gaussian in the dB domain with standard deviation
/// `sigma_db`; `sigma_db = 0` disables shadowing. Co-sited sectors share
/// one draw per UE: shadowing is caused by obstacles on the site-to-UE
/// path, so the three sector antennas of a site see the same loss (full
/// intra-site correlation, independent across sites and UEs).
#[derive(Debug, Clone)]
pub struct ShadowingField {
    sigma_db: f64,
    n_ues: usize,
    sectors_per_site: usize,
    values: Vec<f64>,
}

impl ShadowingField {
    /// Draw one value per (site, UE); sites carry `sectors_per_site`
    /// sectors each, `n_sectors` total.
    pub fn draw(
        n_sectors: usize,
        sectors_per_site: usize,
        n_ues: usize,
        sigma_db: f64,
        rng: &mut impl Rng,
    ) -> Self {
        assert!(sectors_per_site >= 1 && n_sectors.is_multiple_of(sectors_per_site));
        let n_sites = n_sectors / sectors_per_site;
        let values = if sigma_db == 0.0 {
            vec![0.0; n_sites * n_ues]
        } else {
            (0..n_sites * n_ues)
                .map(|_| sigma_db * rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        ShadowingField {
            sigma_db,
            n_ues,
            sectors_per_site,
            values,
        }
    }

    /// All-zero field (shadowing disabled).
    pub fn disabled(n_sectors: usize, n_ues: usize) -> Self {
        ShadowingField {
            sigma_db: 0.0,
            n_ues,
            sectors_per_site: 1,
            values: vec![0.0; n_sectors * n_ues],
        }
    }

    #[inline]
    pub fn loss_db(&self, sector: usize, ue: usize) -> f64 {
        self.values[(sector / self.sectors_per_site) * self.n_ues + ue]
    }

    pub fn sigma_db(&self) -> f64 {
        self.sigma_db
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent one-line statement of the pathloss formula, kept separate
    /// from the implementation on purpose.
    fn pathloss_oracle(r_km: f64, h: f64, f: f64) -> f64 {
        40.0 * (1.0 - 0.004 * h) * r_km.log10() - 18.0 * h.log10() + 21.0 * f.log10() + 80.0
    }

    #[test]
    fn pathloss_reference_points() {
        let p = PathlossParams::default();
        assert_abs_diff_eq!(pathloss_db(1.0, &p).unwrap(), 127.753947849703, epsilon = 1e-9);
        assert_abs_diff_eq!(pathloss_db(0.5, &p).unwrap(), 116.676044009269, epsilon = 1e-9);
        // Doubling the distance adds 36.8 * log10(2) dB.
        let slope = pathloss_db(1.0, &p).unwrap() - pathloss_db(0.5, &p).unwrap();
        assert_abs_diff_eq!(slope, 36.8 * 2f64.log10(), epsilon = 1e-9);
        assert_abs_diff_eq!(slope, 11.0779038404345, epsilon = 1e-9);
    }

    #[test]
    fn pathloss_matches_oracle_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let r = 0.035 + rng.random::<f64>() * 20.0;
            let h = 5.0 + rng.random::<f64>() * 100.0;
            let f = 400.0 + rng.random::<f64>() * 5000.0;
            let p = PathlossParams { h_bs_m: h, f_mhz: f };
            let got = pathloss_db(r, &p).unwrap();
            assert_abs_diff_eq!(got, pathloss_oracle(r, h, f), epsilon = 1e-9);
        }
    }

    #[test]
    fn pathloss_rejects_nonpositive_distance() {
        let p = PathlossParams::default();
        assert!(pathloss_db(0.0, &p).is_err());
        assert!(pathloss_db(-1.0, &p).is_err());
    }

    #[test]
    fn pathloss_clamps_below_floor() {
        let p = PathlossParams::default();
        let at_floor = pathloss_db(MIN_DISTANCE_KM, &p).unwrap();
        assert_eq!(pathloss_db(0.001, &p).unwrap(), at_floor);
    }

    #[test]
    fn rx_power_link_budget() {
        let pl = pathloss_db(1.0, &PathlossParams::default()).unwrap();
        assert_abs_diff_eq!(rx_power_dbm(45.0, 15.0, pl, 0.0), -67.753947849703, epsilon = 1e-9);
        assert_eq!(rx_power_dbm(45.0, 0.0, 0.0, 0.0), 45.0);
        let unshadowed = rx_power_dbm(45.0, 15.0, 120.0, 0.0);
        assert_abs_diff_eq!(rx_power_dbm(45.0, 15.0, 120.0, 10.0), unshadowed - 10.0, epsilon = 1e-12);
    }

    #[test]
    fn noise_reference_points() {
        assert_abs_diff_eq!(noise_power_dbm(1.0, 0.0), -174.0, epsilon = 1e-12);
        assert_abs_diff_eq!(noise_power_dbm(20e6, 9.0), -91.9897000433602, epsilon = 1e-9);
        let diff = noise_power_dbm(20e6, 9.0) - noise_power_dbm(10e6, 9.0);
        assert_abs_diff_eq!(diff, 10.0 * 2f64.log10(), epsilon = 1e-12);
    }

    #[test]
    fn wideband_sinr_examples() {
        // Serving equal to noise, no interference: 0 dB.
        assert_abs_diff_eq!(wideband_sinr_db(-91.99, &[], -91.99), 0.0, epsilon = 1e-12);
        // Linear-domain oracle: ratio 9.637 -> 9.839 dB.
        let got = wideband_sinr_db(-67.75, &[-77.75], -91.99);
        assert_abs_diff_eq!(got, 9.83940579941584, epsilon = 1e-9);
    }

    #[test]
    fn sinr_monotone_in_interference_and_serving() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let s = -60.0 - rng.random::<f64>() * 40.0;
            let n = -100.0;
            let existing: Vec<f64> = (0..3).map(|_| -70.0 - rng.random::<f64>() * 40.0).collect();
            let base = wideband_sinr_db(s, &existing, n);
            let mut more = existing.clone();
            more.push(-70.0 - rng.random::<f64>() * 40.0);
            assert!(wideband_sinr_db(s, &more, n) < base);
            assert!(wideband_sinr_db(s + 1.0, &existing, n) > base);
        }
    }

    #[test]
    fn shadowing_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let field = ShadowingField::draw(100, 1, 1000, 10.0, &mut rng);
        let n = field.values.len() as f64;
        let mean = field.values.iter().sum::<f64>() / n;
        let var = field.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 0.1, "shadowing mean {mean} out of tolerance");
        assert!((var.sqrt() - 10.0).abs() < 0.15, "shadowing std {} out of tolerance", var.sqrt());
    }

    #[test]
    fn cosited_sectors_share_one_draw() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let field = ShadowingField::draw(9, 3, 4, 10.0, &mut rng);
        for ue in 0..4 {
            for site in 0..3 {
                let base = field.loss_db(site * 3, ue);
                assert_eq!(field.loss_db(site * 3 + 1, ue), base);
                assert_eq!(field.loss_db(site * 3 + 2, ue), base);
            }
            // Different sites draw independently.
            assert_ne!(field.loss_db(0, ue), field.loss_db(3, ue));
        }
    }

    #[test]
    fn shadowing_disabled_is_zero() {
        let field = ShadowingField::disabled(3, 5);
        for s in 0..3 {
            for u in 0..5 {
                assert_eq!(field.loss_db(s, u), 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn db_linear_roundtrip(db in -200.0f64..200.0) {
            let back = linear_to_db(db_to_linear(db));
            prop_assert!((back - db).abs() <= 1e-12 * db.abs().max(1.0));
        }
    }
}
