//! Closed-form and semi-analytic outage probabilities for direct transmission.
//!
//! Without interference the received SNR is a scaled chi-square variable. With
//! inter-cell interference user 1 is in outage when
//!
//! ```text
//! Z = Σ_k ( |h11(k)|² − γ |h12(k)|² ) < N σ² γ / P
//! ```
//!
//! Each summand is a difference of two exponentials: the positive part has
//! rate λ = 1/σ1² and the negative part has rate μ = 1/(γσ2²). For N = 3 the
//! density of Z has a closed form and its CDF reduces to incomplete gamma
//! functions of integer order. For other N the CDF is recovered numerically
//! from the characteristic function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::{chi_square_cdf, gamma_p, gamma_q};

/// Parameters of the sum-of-differences density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffExpPdfParams {
    /// Decay rate of the positive tail, 1/σ1².
    pub lambda: f64,
    /// Decay rate of the negative tail, 1/(γσ2²).
    pub mu: f64,
    /// Number of summands (BS antennas).
    pub n: usize,
}

impl DiffExpPdfParams {
    pub fn new(lambda: f64, mu: f64, n: usize) -> Result<Self> {
        if !(lambda > 0.0 && mu > 0.0) || n == 0 {
            return Err(Error::Contract(format!(
                "need lambda > 0, mu > 0, n >= 1 (got {lambda}, {mu}, {n})"
            )));
        }
        Ok(DiffExpPdfParams { lambda, mu, n })
    }

    pub fn from_config(cfg: &SystemConfig) -> Result<Self> {
        Self::new(1.0 / cfg.var_direct, 1.0 / (cfg.gamma() * cfg.var_cross), cfg.n)
    }

    /// E[e^{jtZ}] = (λ/(λ − jt))^N (μ/(μ + jt))^N
    pub fn characteristic_function(&self, t: f64) -> Complex64 {
        let j = Complex64::i();
        let one = self.lambda / (self.lambda - j * t) * (self.mu / (self.mu + j * t));
        one.powi(self.n as i32)
    }

    fn require_order_three(&self) -> Result<()> {
        if self.n != 3 {
            return Err(Error::Unsupported(format!(
                "closed form exists for N = 3 only (got N = {}); use cf_inversion_outage",
                self.n
            )));
        }
        Ok(())
    }
}

/// Outage threshold on Z: N σ² γ / P.
pub fn outage_threshold(cfg: &SystemConfig) -> f64 {
    cfg.n as f64 * cfg.noise_var * cfg.gamma() / cfg.power
}

/// Interference-free outage: the chi-square (2N) CDF at 2Nσ²(2^R − 1)/(Pσ1²).
pub fn outage_single_user(cfg: &SystemConfig) -> f64 {
    let n = cfg.n as f64;
    let x = 2.0 * n * cfg.noise_var * cfg.gamma() / (cfg.power * cfg.var_direct);
    chi_square_cdf(2.0 * n, x)
}

// Polynomial coefficients (constant, linear, quadratic) shared by both
// branches of the N = 3 density, and its leading constant.
fn n3_terms(p: &DiffExpPdfParams) -> (f64, [f64; 3]) {
    let s = p.lambda + p.mu;
    let k = (p.lambda * p.mu).powi(3) / (2.0 * s.powi(3));
    (k, [12.0 / (s * s), 6.0 / s, 1.0])
}

/// Density of Z for N = 3.
pub fn pdf_diff_exp_n3(z: f64, p: &DiffExpPdfParams) -> Result<f64> {
    p.require_order_three()?;
    let (k, a) = n3_terms(p);
    let (w, rate) = if z >= 0.0 { (z, p.lambda) } else { (-z, p.mu) };
    Ok(k * (-rate * w).exp() * (w * w * a[2] + w * a[1] + a[0]))
}

/// CDF of Z for N = 3, integrated in closed form.
pub fn cdf_diff_exp_n3(c: f64, p: &DiffExpPdfParams) -> Result<f64> {
    p.require_order_three()?;
    let (k, a) = n3_terms(p);
    // ∫_0^x w^k e^{-rw} dw = k!/r^{k+1} P(k+1, rx)
    let moments = |rate: f64, tail: &dyn Fn(f64) -> f64| -> f64 {
        let mut fact = 1.0;
        let mut acc = 0.0;
        for (order, &coef) in a.iter().enumerate() {
            if order > 0 {
                fact *= order as f64;
            }
            acc += coef * fact / rate.powi(order as i32 + 1) * tail((order + 1) as f64);
        }
        k * acc
    };
    let value = if c <= 0.0 {
        let w0 = -c;
        moments(p.mu, &|order| gamma_q(order, p.mu * w0))
    } else {
        let negative_mass = moments(p.mu, &|_| 1.0);
        negative_mass + moments(p.lambda, &|order| gamma_p(order, p.lambda * c))
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Outage of user 1 with interference, N = 3 closed form.
pub fn outage_interference_n3(cfg: &SystemConfig) -> Result<f64> {
    let p = DiffExpPdfParams::from_config(cfg)?;
    cdf_diff_exp_n3(outage_threshold(cfg), &p)
}

/// Default absolute tolerance for characteristic-function inversion.
pub const CF_TOLERANCE: f64 = 1e-7;
const CF_TAIL: f64 = 1e-10;

// Panels [0, a0], [a0, 2a0], [2a0, 4a0], ... up to `end`.
fn geometric_panels(first: f64, end: f64) -> Vec<(f64, f64)> {
    let mut panels = vec![(0.0, first.min(end))];
    let mut lo = first;
    while lo < end {
        let hi = (2.0 * lo).min(end);
        panels.push((lo, hi));
        lo = hi;
    }
    panels
}

fn integrate_panels(f: impl Fn(f64) -> f64, end: f64, scale: f64, tol: f64) -> Result<f64> {
    let panels = geometric_panels(scale, end);
    let per_panel = tol / panels.len() as f64;
    let mut total = 0.0;
    for (a, b) in panels {
        total += quadrature::integrate(&f, a, b, per_panel)?.value;
    }
    Ok(total)
}

/// Pr{Z < c} by Gil-Pelaez inversion:
/// F(c) = 1/2 − (1/π) ∫_0^∞ Im[e^{−jtc} φ(t)] / t dt.
///
/// The integral is truncated where |φ(t)| ≤ (λμ)^N t^{−2N} bounds the tail
/// below 1e-10.
pub fn cf_inversion_cdf(c: f64, p: &DiffExpPdfParams, tol: f64) -> Result<f64> {
    let n = p.n as f64;
    let lm = p.lambda * p.mu;
    let end = (lm.powf(n) / (2.0 * n * PI * CF_TAIL)).powf(1.0 / (2.0 * n));
    let scale = p.lambda.max(p.mu);
    let end = end.max(50.0 * scale);
    let integrand = |t: f64| {
        let v = Complex64::new(0.0, -t * c).exp() * p.characteristic_function(t);
        v.im / t
    };
    let integral = integrate_panels(integrand, end, scale, tol * PI / 2.0).map_err(|e| with_context(e, "cdf", c, p))?;
    Ok(0.5 - integral / PI)
}

/// Density of Z by Fourier inversion: f(z) = (1/π) ∫_0^∞ Re[e^{−jtz} φ(t)] dt.
/// Needs N ≥ 2 for an absolutely integrable characteristic function.
pub fn cf_inversion_pdf(z: f64, p: &DiffExpPdfParams, tol: f64) -> Result<f64> {
    if p.n < 2 {
        return Err(Error::Unsupported("density inversion needs N >= 2".into()));
    }
    let n = p.n as f64;
    let lm = p.lambda * p.mu;
    let end = (lm.powf(n) / ((2.0 * n - 1.0) * PI * CF_TAIL)).powf(1.0 / (2.0 * n - 1.0));
    let scale = p.lambda.max(p.mu);
    let end = end.max(50.0 * scale);
    let integrand = |t: f64| (Complex64::new(0.0, -t * z).exp() * p.characteristic_function(t)).re;
    let integral = integrate_panels(integrand, end, scale, tol * PI / 2.0).map_err(|e| with_context(e, "pdf", z, p))?;
    Ok(integral / PI)
}

fn with_context(e: Error, what: &str, at: f64, p: &DiffExpPdfParams) -> Error {
    match e {
        Error::Numeric { message, mut trace } => {
            trace.push(format!(
                "{what} inversion at {at} with lambda={} mu={} N={}",
                p.lambda, p.mu, p.n
            ));
            Error::Numeric { message, trace }
        }
        other => other,
    }
}

/// Outage with interference for any N, via characteristic-function inversion.
pub fn cf_inversion_outage(cfg: &SystemConfig) -> Result<f64> {
    let p = DiffExpPdfParams::from_config(cfg)?;
    Ok(cf_inversion_cdf(outage_threshold(cfg), &p, CF_TOLERANCE)?.clamp(0.0, 1.0))
}

/// Per-round outage with interference: closed form for N = 3, inversion otherwise.
pub fn outage_interference(cfg: &SystemConfig) -> Result<f64> {
    if cfg.n == 3 {
        outage_interference_n3(cfg)
    } else {
        cf_inversion_outage(cfg)
    }
}

/// Outage after L independent attempts: p^L.
pub fn arq_outage(p: f64, attempts: u32) -> f64 {
    assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    assert!(attempts >= 1, "need at least one attempt");
    p.powi(attempts as i32)
}
