//! System parameters and Rayleigh channel draws.
//!
//! Every random quantity is drawn from a [`ChaCha8Rng`] obtained through
//! [`TrialStreams`], which derives one independent stream per
//! `(seed, trial index)`. Results therefore do not depend on how trials are
//! spread over threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Scalar parameters of the two-cell system. Powers and variances are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// BS antennas.
    pub n: usize,
    /// Relay antennas.
    pub m: usize,
    /// Per-BS transmit power P.
    pub power: f64,
    /// Relay power in single-user retransmission.
    pub relay_power_single: f64,
    /// Relay power in multiuser retransmission.
    pub relay_power_multi: f64,
    /// Receiver noise variance σ².
    pub noise_var: f64,
    /// Direct-link variance σ1².
    pub var_direct: f64,
    /// Cross-link (interference) variance σ2².
    pub var_cross: f64,
    /// Relay-to-user variance σ3².
    pub var_relay: f64,
    /// Attempted rate R in bits/s/Hz.
    pub rate: f64,
    /// Total number of transmission attempts L for direct ARQ.
    pub retx: u32,
}

impl SystemConfig {
    /// Two-cell direct ARQ example: N = 3, σ² = 1e-3, σ1² = 2, σ2² = 1, R = 2,
    /// at SNR = 20 dB.
    pub fn direct_example() -> Self {
        SystemConfig {
            n: 3,
            m: 3,
            power: 0.1,
            relay_power_single: 0.1,
            relay_power_multi: 0.2,
            noise_var: 1e-3,
            var_direct: 2.0,
            var_cross: 1.0,
            var_relay: 4.0,
            rate: 2.0,
            retx: 1,
        }
    }

    /// Shared-relay setup: σ² = 1, σ1² = 2, σ2² = 1, σ3² = 4, N = M = 3,
    /// one retransmission round, relay powers P and 2P, at SNR = 20 dB.
    pub fn relay_example() -> Self {
        SystemConfig {
            n: 3,
            m: 3,
            power: 100.0,
            relay_power_single: 100.0,
            relay_power_multi: 200.0,
            noise_var: 1.0,
            var_direct: 2.0,
            var_cross: 1.0,
            var_relay: 4.0,
            rate: 6.0,
            retx: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("power", self.power),
            ("relay_power_single", self.relay_power_single),
            ("relay_power_multi", self.relay_power_multi),
            ("noise_var", self.noise_var),
            ("var_direct", self.var_direct),
            ("var_cross", self.var_cross),
            ("var_relay", self.var_relay),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if !(self.rate >= 0.0 && self.rate.is_finite()) {
            return Err(Error::Config(format!("rate must be nonnegative and finite, got {}", self.rate)));
        }
        if self.n == 0 || self.m == 0 {
            return Err(Error::Config("antenna counts must be at least 1".into()));
        }
        if self.retx == 0 {
            return Err(Error::Config("retx must be at least 1".into()));
        }
        Ok(())
    }

    /// SINR threshold γ = 2^R − 1.
    pub fn gamma(&self) -> f64 {
        self.rate.exp2() - 1.0
    }

    /// Transmit SNR P/σ² (linear).
    pub fn snr(&self) -> f64 {
        self.power / self.noise_var
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.snr().log10()
    }

    /// Sets P from an SNR in dB, keeping both relay powers at their current
    /// ratio to P.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        let new_power = self.noise_var * 10f64.powf(snr_db / 10.0);
        let scale = new_power / self.power;
        self.power = new_power;
        self.relay_power_single *= scale;
        self.relay_power_multi *= scale;
        self
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = rate;
        self
    }

    pub fn with_relay_antennas(mut self, m: usize) -> Self {
        self.m = m;
        self
    }
}

pub type ComplexVector = Vec<Complex64>;

/// One fading draw. `h[i][j]` is the N-vector from BS j to user i and `g[i]`
/// the M-vector from the relay to user i (users and BSs indexed from 0).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: [[ComplexVector; 2]; 2],
    pub g: [ComplexVector; 2],
}

/// i.i.d. CN(0, variance) entries: E|x|² = variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, len: usize, variance: f64) -> ComplexVector {
    let s = (variance / 2.0).sqrt();
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(s * re, s * im)
        })
        .collect()
}

/// BS-to-user links only, `[user][bs]`.
pub fn draw_bs_links<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> [[ComplexVector; 2]; 2] {
    let var = |i: usize, j: usize| if i == j { cfg.var_direct } else { cfg.var_cross };
    [
        [complex_gaussian(rng, cfg.n, var(0, 0)), complex_gaussian(rng, cfg.n, var(0, 1))],
        [complex_gaussian(rng, cfg.n, var(1, 0)), complex_gaussian(rng, cfg.n, var(1, 1))],
    ]
}

pub fn draw_relay_links<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> [ComplexVector; 2] {
    [
        complex_gaussian(rng, cfg.m, cfg.var_relay),
        complex_gaussian(rng, cfg.m, cfg.var_relay),
    ]
}

/// Draws a full realization (BS links first, then relay links).
pub fn draw_channels<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelRealization {
    let h = draw_bs_links(cfg, rng);
    let g = draw_relay_links(cfg, rng);
    ChannelRealization { h, g }
}

/// Deterministic per-trial random streams derived from a 64-bit seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStreams {
    seed: u64,
}

impl TrialStreams {
    pub fn new(seed: u64) -> Self {
        TrialStreams { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for trial `index`: the ChaCha key comes from the
    /// seed and the stream id is the trial index.
    pub fn trial(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Streams for a sub-experiment (one sweep point, one curve, ...).
    pub fn child(&self, tag: u64) -> TrialStreams {
        TrialStreams {
            seed: splitmix64(self.seed ^ splitmix64(tag.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_realization() {
        let cfg = SystemConfig::relay_example();
        let streams = TrialStreams::new(42);
        let a = draw_channels(&cfg, &mut streams.trial(7));
        let b = draw_channels(&cfg, &mut streams.trial(7));
        assert_eq!(a, b);
        let c = draw_channels(&cfg, &mut streams.trial(8));
        assert_ne!(a, c);
        assert_ne!(streams.child(1).seed(), streams.child(2).seed());
    }

    #[test]
    fn dimensions_follow_config() {
        let cfg = SystemConfig::relay_example().with_relay_antennas(5);
        let r = draw_channels(&cfg, &mut TrialStreams::new(1).trial(0));
        assert!(r.h.iter().flatten().all(|v| v.len() == 3));
        assert!(r.g.iter().all(|v| v.len() == 5));
    }

    #[test]
    fn config_rejects_nonpositive_values() {
        let mut cfg = SystemConfig::direct_example();
        assert!(cfg.validate().is_ok());
        cfg.var_direct = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = SystemConfig::direct_example();
        cfg.retx = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = SystemConfig::direct_example();
        cfg.n = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn snr_helpers_keep_relay_ratios() {
        let cfg = SystemConfig::relay_example().with_snr_db(30.0);
        assert!((cfg.power - 1000.0).abs() < 1e-9);
        assert!((cfg.relay_power_single - 1000.0).abs() < 1e-9);
        assert!((cfg.relay_power_multi - 2000.0).abs() < 1e-9);
        assert!((cfg.snr_db() - 30.0).abs() < 1e-12);
        assert!((SystemConfig::direct_example().gamma() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn direct_link_power_and_circularity() {
        // 10^5 draws of h_{1,1}(k), N = 3, σ1² = 2. E|h|² = 2 with standard deviation
        // 2/√(3·10^5) ≈ 0.0037 for the pooled mean, well inside ±0.04.
        let cfg = SystemConfig::direct_example();
        let streams = TrialStreams::new(2024);
        let trials = 100_000u64;
        let mut power = 0.0;
        let mut square = Complex64::new(0.0, 0.0);
        let mut cross_power = 0.0;
        for t in 0..trials {
            let h = draw_bs_links(&cfg, &mut streams.trial(t));
            for z in &h[0][0] {
                power += z.norm_sqr();
                square += z * z;
            }
            cross_power += h[0][1].iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        let count = (trials * 3) as f64;
        let mean = power / count;
        assert!((1.96..=2.04).contains(&mean), "mean |h|^2 = {mean}");
        // E[h²] = 0 for circular symmetry; Re and Im of h² each have variance 4 here
        assert!((square / count).norm() < 4.0 * (8.0 / count).sqrt());
        assert!(((cross_power / count) - 1.0).abs() < 0.02);
    }
}
