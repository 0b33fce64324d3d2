//! Relay beamforming when exactly one user failed.
//!
//! The relay forwards the failed user's message while the other BS sends a
//! fresh message. The beamformer maximizes ‖B^H h_target‖² subject to
//! B^H h_protect = 0 and tr(BB^H) = Pr. With vec(B) this is a Rayleigh
//! quotient over the null space of I_N ⊗ h_protect^H; because the problem
//! matrix is I_N ⊗ (h_target h_target^H) the optimum is any B whose columns lie
//! along the projection of h_target onto the complement of h_protect. We put
//! all power in the first column.

use num_complex::Complex64;

use crate::channel::{ChannelRealization, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::{self, herm_eig, kron_identity, norm, norm_sqr, null_basis, unvec, ComplexMatrix};

/// Single-user relay beamformer.
#[derive(Debug, Clone)]
pub struct Beamformer {
    /// M x N beamforming matrix.
    pub b: ComplexMatrix,
    /// tr(BB^H).
    pub power: f64,
    /// ‖B^H h_protect‖.
    pub null_residual: f64,
    /// Set when h_target lies in span(h_protect): nothing reaches the target.
    pub degenerate: bool,
}

impl Beamformer {
    /// ‖B^H h‖², the power delivered along channel `h`.
    pub fn gain(&self, h: &[Complex64]) -> f64 {
        norm_sqr(&self.b.adjoint_mul_vec(h))
    }
}

/// Relative size of ‖P⊥ h_target‖ below which the target is considered fully
/// aligned with the protected user.
const ALIGNED_TOL: f64 = 1e-12;

/// Closed-form null-steering beamformer for `streams` (= N) columns.
pub fn solve_single_user_beamformer(
    h_protect: &[Complex64],
    h_target: &[Complex64],
    relay_power: f64,
    streams: usize,
) -> Result<Beamformer> {
    let m = h_protect.len();
    check_inputs(h_protect, h_target, relay_power, streams)?;
    let u = null_basis(h_protect)?;
    let z = u.adjoint_mul_vec(h_target);
    let zn = norm(&z);
    let degenerate = zn <= ALIGNED_TOL * norm(h_target);
    let direction = if degenerate {
        u.column(0).to_vec()
    } else {
        let zs: Vec<Complex64> = z.iter().map(|x| x / zn).collect();
        u.mul_vec(&zs)
    };
    let scale = relay_power.sqrt();
    let mut b = ComplexMatrix::zeros(m, streams);
    for (dst, src) in b.column_mut(0).iter_mut().zip(&direction) {
        *dst = src * scale;
    }
    Ok(finish(b, h_protect, degenerate))
}

/// The same beamformer computed literally in the MN-dimensional vectorized
/// form: √Pr · V ν_max{V^H (I_N ⊗ h h^H) V} with V = I_N ⊗ U.
///
/// The top eigenvalue is N-fold degenerate, so the returned matrix may spread
/// power over several columns; its objective equals that of
/// [`solve_single_user_beamformer`].
pub fn solve_single_user_beamformer_kron(
    h_protect: &[Complex64],
    h_target: &[Complex64],
    relay_power: f64,
    streams: usize,
) -> Result<Beamformer> {
    let m = h_protect.len();
    check_inputs(h_protect, h_target, relay_power, streams)?;
    let u = null_basis(h_protect)?;
    let v = kron_identity(streams, &u);
    let target = ComplexMatrix::outer(h_target, h_target);
    let c = kron_identity(streams, &target);
    let reduced = &(&v.adjoint() * &c) * &v;
    let eig = herm_eig(&reduced.hermitian_part())?;
    let b_vec: Vec<Complex64> = v.mul_vec(eig.vector(0)).iter().map(|x| x * relay_power.sqrt()).collect();
    let b = unvec(&b_vec, m, streams)?;
    let degenerate = eig.eigenvalues[0] <= ALIGNED_TOL * norm_sqr(h_target);
    Ok(finish(b, h_protect, degenerate))
}

fn check_inputs(h_protect: &[Complex64], h_target: &[Complex64], relay_power: f64, streams: usize) -> Result<()> {
    if h_protect.len() != h_target.len() {
        return Err(Error::Dimension("relay channels must have equal length".into()));
    }
    if h_protect.len() < 2 {
        return Err(Error::Infeasible(
            "a single relay antenna leaves no null space to steer into".into(),
        ));
    }
    if !(relay_power > 0.0) || streams == 0 {
        return Err(Error::Contract("relay power must be positive and N >= 1".into()));
    }
    Ok(())
}

fn finish(b: ComplexMatrix, h_protect: &[Complex64], degenerate: bool) -> Beamformer {
    let power = b.frobenius_norm().powi(2);
    let null_residual = norm(&b.adjoint_mul_vec(h_protect));
    Beamformer {
        b,
        power,
        null_residual,
        degenerate,
    }
}

/// Analytic optimum Pr·‖P⊥ h_target‖² with P⊥ the projector onto the
/// complement of h_protect.
pub fn single_user_optimum(h_protect: &[Complex64], h_target: &[Complex64], relay_power: f64) -> f64 {
    relay_power * norm_sqr(&linalg::project_out(h_target, h_protect))
}

/// Rate of the user that decoded in round one and now receives a fresh
/// message from its own BS, with the relay signal as interference.
pub fn rate_protected(cfg: &SystemConfig, chan: &ChannelRealization, bf: &ComplexMatrix, target: usize) -> f64 {
    let p = 1 - target;
    let signal = cfg.power / cfg.n as f64 * norm_sqr(&chan.h[p][p]);
    let interference = norm_sqr(&bf.adjoint_mul_vec(&chan.g[p]));
    (1.0 + signal / (interference + cfg.noise_var)).log2()
}

/// Rate of the retransmission target: relay signal over the other BS's fresh
/// transmission plus noise.
pub fn rate_target(cfg: &SystemConfig, chan: &ChannelRealization, bf: &ComplexMatrix, target: usize) -> f64 {
    let p = 1 - target;
    let signal = norm_sqr(&bf.adjoint_mul_vec(&chan.g[target]));
    let interference = cfg.power / cfg.n as f64 * norm_sqr(&chan.h[target][p]);
    (1.0 + signal / (interference + cfg.noise_var)).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{complex_gaussian, draw_channels, TrialStreams};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orthogonal_target_gets_full_power() {
        let hp = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let ht = vec![c(0.0, 0.0), c(0.5, -1.0), c(2.0, 0.0)];
        let bf = solve_single_user_beamformer(&hp, &ht, 3.0, 2).unwrap();
        assert_relative_eq!(bf.gain(&ht), 3.0 * norm_sqr(&ht), max_relative = 1e-12);
        assert!(!bf.degenerate);
    }

    #[test]
    fn parallel_target_is_fully_nulled() {
        let hp = vec![c(1.0, 1.0), c(0.0, 2.0)];
        let ht: Vec<_> = hp.iter().map(|x| x * c(0.0, -3.0)).collect();
        let bf = solve_single_user_beamformer(&hp, &ht, 1.0, 3).unwrap();
        assert!(bf.gain(&ht) < 1e-20);
        assert!(bf.degenerate);
        assert_relative_eq!(bf.power, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn matches_projection_optimum() {
        let mut rng = TrialStreams::new(5).trial(0);
        let hp = complex_gaussian(&mut rng, 3, 1.0);
        let ht = complex_gaussian(&mut rng, 3, 1.0);
        let bf = solve_single_user_beamformer(&hp, &ht, 2.5, 3).unwrap();
        let opt = single_user_optimum(&hp, &ht, 2.5);
        assert_relative_eq!(bf.gain(&ht), opt, max_relative = 1e-9);
        assert_relative_eq!(bf.power, 2.5, max_relative = 1e-9);
        assert!(bf.null_residual <= 1e-10 * norm(&hp) * bf.b.frobenius_norm());
    }

    #[test]
    fn kron_path_agrees() {
        let mut rng = TrialStreams::new(6).trial(0);
        for m in [2, 3, 4] {
            let hp = complex_gaussian(&mut rng, m, 4.0);
            let ht = complex_gaussian(&mut rng, m, 4.0);
            let small = solve_single_user_beamformer(&hp, &ht, 1.0, 3).unwrap();
            let big = solve_single_user_beamformer_kron(&hp, &ht, 1.0, 3).unwrap();
            assert_relative_eq!(small.gain(&ht), big.gain(&ht), max_relative = 1e-9);
            assert!(big.null_residual < 1e-10 * norm(&hp) * big.b.frobenius_norm());
        }
    }

    #[test]
    fn single_antenna_relay_is_infeasible() {
        let h = vec![c(1.0, 0.0)];
        assert!(matches!(
            solve_single_user_beamformer(&h, &h, 1.0, 1),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn scale_and_phase_behaviour() {
        let mut rng = TrialStreams::new(8).trial(0);
        let hp = complex_gaussian(&mut rng, 4, 1.0);
        let ht = complex_gaussian(&mut rng, 4, 1.0);
        let base = solve_single_user_beamformer(&hp, &ht, 1.0, 2).unwrap().gain(&ht);
        let scaled = solve_single_user_beamformer(&hp, &ht, 7.0, 2).unwrap().gain(&ht);
        assert_relative_eq!(scaled, 7.0 * base, max_relative = 1e-12);
        let rot: Vec<_> = ht.iter().map(|x| x * Complex64::from_polar(1.0, 0.8)).collect();
        let rotated = solve_single_user_beamformer(&hp, &rot, 1.0, 2).unwrap().gain(&rot);
        assert!((rotated - base).abs() <= 1e-10 * base);
    }

    #[test]
    fn rates_with_zero_beamformer_and_zero_interference() {
        let cfg = SystemConfig::relay_example();
        let mut chan = draw_channels(&cfg, &mut TrialStreams::new(3).trial(0));
        let zero = ComplexMatrix::zeros(cfg.m, cfg.n);
        assert_eq!(rate_target(&cfg, &chan, &zero, 1), 0.0);

        let bf = solve_single_user_beamformer(&chan.g[0], &chan.g[1], cfg.relay_power_single, cfg.n).unwrap();
        chan.h[1][0] = vec![Complex64::new(0.0, 0.0); cfg.n];
        let expected = (1.0 + bf.gain(&chan.g[1]) / cfg.noise_var).log2();
        assert_relative_eq!(rate_target(&cfg, &chan, &bf.b, 1), expected, max_relative = 1e-14);

        // protected user sees no relay interference
        let snr = cfg.power / cfg.n as f64 * norm_sqr(&chan.h[0][0]) / cfg.noise_var;
        assert_relative_eq!(rate_protected(&cfg, &chan, &bf.b, 1), (1.0 + snr).log2(), max_relative = 1e-12);
        assert!(bf.gain(&chan.g[0]) <= 1e-18 * cfg.relay_power_single * norm_sqr(&chan.g[0]));
    }
}
