//! Velocity-driven small-scale MIMO fading.
//!
//! Each link carries one i.i.d. Rayleigh matrix per frequency chunk,
//! evolved TTI-by-TTI with a first-order Gauss-Markov recursion whose
//! coefficient is the Clarke autocorrelation rho = J0(2 pi f_d dt). This is
//! the mechanism that turns user speed into CSI aging: at v = 0 the channel
//! is frozen (rho = 1), at vehicular speeds successive TTIs decorrelate.

use crate::linalg::CMat;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Maximum Doppler shift f_d = (v / 3.6) * f_c / c for a speed in km/h.
pub fn doppler_hz(velocity_kmh: f64, carrier_hz: f64) -> f64 {
    assert!(velocity_kmh >= 0.0, "velocity must be non-negative");
    (velocity_kmh / 3.6) * carrier_hz / SPEED_OF_LIGHT_M_S
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

/// Clarke/Jakes channel autocorrelation over a lag of `dt_s` seconds:
/// J0(2 pi f_d dt).
pub fn temporal_correlation(doppler_hz: f64, dt_s: f64) -> f64 {
    bessel_j0(2.0 * PI * doppler_hz * dt_s)
}

/// Draw an n_rx x n_tx matrix with i.i.d. unit-variance circularly
/// symmetric complex Gaussian entries.
pub fn draw_rayleigh(n_rx: usize, n_tx: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(n_rx, n_tx, |_, _| {
        Complex64::new(
            FRAC_1_SQRT_2 * rng.sample::<f64, _>(StandardNormal),
            FRAC_1_SQRT_2 * rng.sample::<f64, _>(StandardNormal),
        )
    })
}

/// Exponential antenna correlation matrix, R_ij = r^|i-j|.
pub fn exp_correlation(n: usize, r: f64) -> CMat {
    assert!((0.0..1.0).contains(&r), "correlation coefficient in [0, 1)");
    CMat::from_fn(n, n, |i, j| {
        Complex64::new(r.powi((i as i32 - j as i32).abs()), 0.0)
    })
}

/// Kronecker antenna correlation: a white draw W is colored into
/// L_rx W L_tx^H so that E[H H^H] follows the exponential correlation
/// model on each side while every entry keeps unit variance.
#[derive(Debug, Clone)]
struct Coloring {
    l_rx: Option<CMat>,
    l_tx_h: Option<CMat>,
}

impl Coloring {
    fn new(n_rx: usize, n_tx: usize, rx_corr: f64, tx_corr: f64) -> Self {
        let factor = |n: usize, r: f64| {
            (r > 0.0).then(|| {
                exp_correlation(n, r)
                    .cholesky()
                    .expect("exponential correlation matrix is positive definite")
            })
        };
        Coloring {
            l_rx: factor(n_rx, rx_corr),
            l_tx_h: factor(n_tx, tx_corr).map(|l| l.hermitian()),
        }
    }

    fn draw(&self, n_rx: usize, n_tx: usize, rng: &mut impl Rng) -> CMat {
        let mut w = draw_rayleigh(n_rx, n_tx, rng);
        if let Some(l_rx) = &self.l_rx {
            w = l_rx.mul(&w);
        }
        if let Some(l_tx_h) = &self.l_tx_h {
            w = w.mul(l_tx_h);
        }
        w
    }
}

/// Time-correlated fading state of one link: one flat-fading MIMO matrix
/// per frequency chunk.
#[derive(Debug, Clone)]
pub struct FadingState {
    rho: f64,
    n_rx: usize,
    n_tx: usize,
    coloring: Coloring,
    chunks: Vec<CMat>,
}

impl FadingState {
    /// Fresh state with spatially white draws per chunk.
    pub fn init(
        n_rx: usize,
        n_tx: usize,
        chunk_count: usize,
        rho: f64,
        rng: &mut impl Rng,
    ) -> Self {
        Self::init_kronecker(n_rx, n_tx, chunk_count, rho, 0.0, 0.0, rng)
    }

    /// Fresh state with exponential Kronecker antenna correlation
    /// (`rx_corr` / `tx_corr` of 0 leave that side white).
    pub fn init_kronecker(
        n_rx: usize,
        n_tx: usize,
        chunk_count: usize,
        rho: f64,
        rx_corr: f64,
        tx_corr: f64,
        rng: &mut impl Rng,
    ) -> Self {
        assert!(rho.abs() <= 1.0, "|rho| must not exceed 1");
        assert!(chunk_count >= 1);
        let coloring = Coloring::new(n_rx, n_tx, rx_corr, tx_corr);
        let chunks = (0..chunk_count)
            .map(|_| coloring.draw(n_rx, n_tx, rng))
            .collect();
        FadingState {
            rho,
            n_rx,
            n_tx,
            coloring,
            chunks,
        }
    }

    /// One Gauss-Markov step: H' = rho H + sqrt(1 - rho^2) W.
    ///
    /// Preserves the stationary distribution (including the spatial
    /// coloring, which is applied to every innovation). At rho = 1 the
    /// channel is exactly static and no randomness is consumed.
    pub fn evolve(&mut self, rng: &mut impl Rng) {
        if self.rho == 1.0 {
            return;
        }
        let innovation_scale = (1.0 - self.rho * self.rho).sqrt();
        for i in 0..self.chunks.len() {
            let w = self.coloring.draw(self.n_rx, self.n_tx, rng);
            self.chunks[i] = self.chunks[i]
                .scaled(self.rho)
                .add(&w.scaled(innovation_scale));
        }
    }

    /// Replace the state with fresh draws (used when a link comes newly
    /// into service after a handover).
    pub fn redraw(&mut self, rng: &mut impl Rng) {
        for i in 0..self.chunks.len() {
            self.chunks[i] = self.coloring.draw(self.n_rx, self.n_tx, rng);
        }
    }

    #[inline]
    pub fn chunk(&self, index: usize) -> &CMat {
        &self.chunks[index]
    }

    pub fn chunk_count(&self) -> usize {
        self.chunks.len()
    }

    pub fn chunks(&self) -> &[CMat] {
        &self.chunks
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent power-series evaluation of J0, adequate to ~1e-12 for
    /// |x| <= 10. Used only as a test oracle.
    fn j0_series(x: f64) -> f64 {
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..=40 {
            term *= -q / ((m * m) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn doppler_reference_points() {
        assert_eq!(doppler_hz(0.0, 2.45e9), 0.0);
        assert_abs_diff_eq!(doppler_hz(120.0, 2.45e9), 272.410677745158, epsilon = 1e-6);
        assert_abs_diff_eq!(doppler_hz(100.0, 2.45e9), 227.008898120965, epsilon = 1e-6);
    }

    #[test]
    fn correlation_at_zero_doppler_is_one() {
        assert_eq!(temporal_correlation(0.0, 0.001), 1.0);
    }

    #[test]
    fn correlation_matches_series_oracle() {
        // Grid over the short-lag regime the simulator actually uses.
        for i in 0..=1000 {
            let x = i as f64 * 0.01;
            assert_abs_diff_eq!(bessel_j0(x), j0_series(x), epsilon = 1e-10);
        }
        // The 120 km/h @ 2.45 GHz, 1 ms lag reference point.
        let rho = temporal_correlation(272.410677745158, 0.001);
        assert_abs_diff_eq!(rho, 0.3913, epsilon = 1e-4);
        assert_abs_diff_eq!(bessel_j0(1.7116), 0.39127897944623, epsilon = 1e-10);
    }

    #[test]
    fn j0_bounded_on_wide_range() {
        for i in 0..=5000 {
            let x = i as f64 * 0.01;
            assert!(bessel_j0(x).abs() <= 1.0 + 1e-12, "J0({x}) out of bounds");
        }
    }

    #[test]
    fn evolve_static_at_rho_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = FadingState::init(2, 2, 3, 1.0, &mut rng);
        let before: Vec<CMat> = state.chunks().to_vec();
        state.evolve(&mut rng);
        for (a, b) in before.iter().zip(state.chunks()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn evolve_at_rho_zero_is_fresh_draw() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut state = FadingState::init(2, 2, 1, 0.0, &mut rng);
        let before = *state.chunk(0);
        state.evolve(&mut rng);
        let after = *state.chunk(0);
        // New draw is unrelated to the old one; empirical correlation of a
        // long product sequence verifies independence below. Here just
        // check the matrix actually changed.
        assert!(before.sub(&after).frob_norm() > 1e-6);
    }

    #[test]
    fn lag1_autocorrelation_tracks_rho() {
        let rho = 0.3913;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut state = FadingState::init(1, 1, 1, rho, &mut rng);
        let n = 100_000;
        let mut xs = Vec::with_capacity(n);
        for _ in 0..n {
            xs.push(state.chunk(0).at(0, 0).re);
            state.evolve(&mut rng);
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let lag1 = xs
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / ((n - 1) as f64 * var);
        assert!(
            (0.371..=0.411).contains(&lag1),
            "lag-1 autocorrelation {lag1} outside [0.371, 0.411]"
        );
    }

    #[test]
    fn stationary_variance_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut state = FadingState::init(1, 1, 1, 0.7, &mut rng);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += state.chunk(0).at(0, 0).norm_sqr();
            state.evolve(&mut rng);
        }
        let var = acc / n as f64;
        assert!((var - 1.0).abs() < 0.03, "per-entry variance {var} drifted");
    }

    #[test]
    fn chunks_are_mutually_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut state = FadingState::init(1, 1, 2, 0.5, &mut rng);
        let n = 100_000;
        let (mut sum_a, mut sum_b, mut sum_ab, mut sum_a2, mut sum_b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let a = state.chunk(0).at(0, 0).re;
            let b = state.chunk(1).at(0, 0).re;
            sum_a += a;
            sum_b += b;
            sum_ab += a * b;
            sum_a2 += a * a;
            sum_b2 += b * b;
            state.evolve(&mut rng);
        }
        let nf = n as f64;
        let cov = sum_ab / nf - (sum_a / nf) * (sum_b / nf);
        let var_a = sum_a2 / nf - (sum_a / nf) * (sum_a / nf);
        let var_b = sum_b2 / nf - (sum_b / nf) * (sum_b / nf);
        let corr = cov / (var_a * var_b).sqrt();
        assert!(corr.abs() < 0.02, "cross-chunk correlation {corr} too large");
    }

    #[test]
    fn kronecker_coloring_matches_target_correlation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let r_tx = 0.6;
        let n = 40_000;
        // Accumulate E[h_a conj(h_b)] across adjacent tx antennas and the
        // per-entry variance.
        let mut adj = Complex64::new(0.0, 0.0);
        let mut var = 0.0;
        for _ in 0..n {
            let state = FadingState::init_kronecker(2, 4, 1, 0.5, 0.0, r_tx, &mut rng);
            let h = state.chunk(0);
            for j in 0..3 {
                adj += h.at(0, j) * h.at(0, j + 1).conj();
            }
            var += h.at(0, 0).norm_sqr();
        }
        let adj = adj / (3 * n) as f64;
        let var = var / n as f64;
        assert!((adj.re - r_tx).abs() < 0.02, "adjacent correlation {adj}");
        assert!(adj.im.abs() < 0.02);
        assert!((var - 1.0).abs() < 0.02, "colored entry variance {var}");
    }

    #[test]
    fn colored_evolution_is_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut state = FadingState::init_kronecker(2, 2, 1, 0.7, 0.4, 0.7, &mut rng);
        let n = 50_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += state.chunk(0).at(1, 1).norm_sqr();
            state.evolve(&mut rng);
        }
        let var = acc / n as f64;
        assert!((var - 1.0).abs() < 0.03, "variance {var} drifted under coloring");
    }

    #[test]
    fn trajectory_is_bit_identical_for_fixed_seed() {
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let mut state = FadingState::init(4, 4, 6, 0.3913, &mut rng);
            for _ in 0..50 {
                state.evolve(&mut rng);
            }
            let mut bits = Vec::new();
            for c in state.chunks() {
                for i in 0..4 {
                    for j in 0..4 {
                        bits.push(c.at(i, j).re.to_bits());
                        bits.push(c.at(i, j).im.to_bits());
                    }
                }
            }
            bits
        };
        assert_eq!(run(), run());
    }
}
