//! Relay beamforming when both users failed: max-min SINR design.
//!
//! The relay sends both messages, `x_r = B1 x1 + B2 x2`, with the BSs silent.
//! The common SINR target is found by bisection over SDP feasibility problems;
//! the SDP solution at the final feasible target is purified to rank one and
//! the beamformers are read off its principal eigenvectors.
//!
//! Three equivalent lifts of the problem are available. `Full` works on
//! vec(B) with C_i = I_N ⊗ h_i h_i^H (side MN). Because
//! tr((I_N ⊗ hh^H) X) = h^H S h with S the sum of the N diagonal blocks of X,
//! `Reduced` works on M×M matrices. `Span` further restricts to span{h1, h2}:
//! projecting X onto that subspace keeps both traces with C_i and can only
//! lower the power, so the optimum is the same while the matrices are at most
//! 2×2. The reduced forms put the beam in the first column of B.

use log::debug;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, herm_eig, kron_identity, norm, norm_sqr, unvec, ComplexMatrix};
use crate::sdp::{hermitian_coords, hermitian_from_coords, solve_feasibility, SdpInstance, SdpStatus, SolverOptions};

/// Eigenvalues above this fraction of the largest one count toward the rank.
pub const RANK_TOL: f64 = 1e-9;
/// `extract_beamformer` refuses matrices whose second eigenvalue exceeds this
/// fraction of the first.
pub const RANK_ONE_TOL: f64 = 1e-6;
/// Default bisection accuracy relative to the initial upper bound.
pub const DEFAULT_RELATIVE_EPS: f64 = 1e-4;
/// Barrier accuracy of the final solve at the certified target.
const POLISH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Formulation {
    /// vec(B) of length MN.
    Full,
    /// M×M after folding the N diagonal blocks.
    Reduced,
    /// At most 2×2, on span{h1, h2}.
    #[default]
    Span,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Formulation::Full => "full",
            Formulation::Reduced => "reduced",
            Formulation::Span => "span",
        }
    }
}

impl std::str::FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Formulation::Full),
            "reduced" => Ok(Formulation::Reduced),
            "span" => Ok(Formulation::Span),
            other => Err(Error::Config(format!("unknown formulation '{other}' (full|reduced|span)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MultiuserOptions {
    pub formulation: Formulation,
    /// Absolute bisection accuracy; defaults to 1e-4 of the initial upper bound.
    pub eps: Option<f64>,
    pub solver: SolverOptions,
}

/// Result of the multiuser design.
#[derive(Debug, Clone)]
pub struct MultiBeamformer {
    pub b1: ComplexMatrix,
    pub b2: ComplexMatrix,
    /// Largest target certified feasible.
    pub t_star: f64,
    /// SINRs realized by (B1, B2).
    pub achieved_sinr: [f64; 2],
    /// tr(B1 B1^H + B2 B2^H).
    pub total_power: f64,
    /// Bisection accuracy used.
    pub eps: f64,
    /// Final bracket (b_l, b_u).
    pub bracket: (f64, f64),
    pub bisection_steps: usize,
    /// Ranks of the SDP certificate before purification.
    pub certificate_ranks: [usize; 2],
    /// Ranks after purification (always (1, 1) on success unless t* = 0).
    pub ranks: [usize; 2],
    /// λ2/λ1 of each purified matrix.
    pub eigen_ratio: [f64; 2],
}

impl MultiBeamformer {
    pub fn min_sinr(&self) -> f64 {
        self.achieved_sinr[0].min(self.achieved_sinr[1])
    }
}

/// SINR of both users for relay beamformers B1, B2: own beam over the other
/// beam plus noise.
pub fn sinr_pair(
    h1: &[Complex64],
    h2: &[Complex64],
    b1: &ComplexMatrix,
    b2: &ComplexMatrix,
    noise_var: f64,
) -> [f64; 2] {
    let gain = |h: &[Complex64], b: &ComplexMatrix| norm_sqr(&b.adjoint_mul_vec(h));
    [
        gain(h1, b1) / (gain(h1, b2) + noise_var),
        gain(h2, b2) / (gain(h2, b1) + noise_var),
    ]
}

/// b_u = min_i Pr‖h_i‖²/σ².
pub fn sinr_upper_bound(h1: &[Complex64], h2: &[Complex64], relay_power: f64, noise_var: f64) -> f64 {
    relay_power * norm_sqr(h1).min(norm_sqr(h2)) / noise_var
}

/// Feasibility instance of a given formulation plus the map back to M×N
/// beamformers.
#[derive(Debug, Clone)]
pub struct Lifted {
    pub instance: SdpInstance,
    formulation: Formulation,
    m: usize,
    n: usize,
    /// Orthonormal basis (M × D) for the span formulation.
    basis: Option<ComplexMatrix>,
}

impl Lifted {
    pub fn new(
        h1: &[Complex64],
        h2: &[Complex64],
        relay_power: f64,
        noise_var: f64,
        streams: usize,
        formulation: Formulation,
    ) -> Result<Self> {
        let m = h1.len();
        if h2.len() != m {
            return Err(Error::Dimension("relay channels must have equal length".into()));
        }
        if streams == 0 {
            return Err(Error::Contract("need at least one stream".into()));
        }
        if norm(h1) == 0.0 || norm(h2) == 0.0 {
            return Err(Error::Contract("relay channels must be nonzero".into()));
        }
        let rank_one = |h: &[Complex64]| ComplexMatrix::outer(h, h);
        let (c1, c2, basis) = match formulation {
            Formulation::Full => (
                kron_identity(streams, &rank_one(h1)),
                kron_identity(streams, &rank_one(h2)),
                None,
            ),
            Formulation::Reduced => (rank_one(h1), rank_one(h2), None),
            Formulation::Span => {
                let q = span_basis(h1, h2);
                let p1 = q.adjoint_mul_vec(h1);
                let p2 = q.adjoint_mul_vec(h2);
                (rank_one(&p1), rank_one(&p2), Some(q))
            }
        };
        Ok(Lifted {
            instance: SdpInstance::new(c1, c2, 0.0, noise_var, relay_power)?,
            formulation,
            m,
            n: streams,
            basis,
        })
    }

    /// Turns a vector of the working dimension into an M×N beamformer.
    pub fn beamformer(&self, v: &[Complex64]) -> Result<ComplexMatrix> {
        match self.formulation {
            Formulation::Full => unvec(v, self.m, self.n),
            Formulation::Reduced | Formulation::Span => {
                let col = match &self.basis {
                    Some(q) => q.mul_vec(v),
                    None => v.to_vec(),
                };
                let mut b = ComplexMatrix::zeros(self.m, self.n);
                b.set_column(0, &col);
                Ok(b)
            }
        }
    }
}

/// Orthonormal basis of span{h1, h2} by Gram-Schmidt (one column if parallel).
fn span_basis(h1: &[Complex64], h2: &[Complex64]) -> ComplexMatrix {
    let n1 = norm(h1);
    let q1: Vec<Complex64> = h1.iter().map(|x| x / n1).collect();
    let c = dot(&q1, h2);
    let r: Vec<Complex64> = h2.iter().zip(&q1).map(|(x, q)| x - q * c).collect();
    let nr = norm(&r);
    if nr <= 1e-12 * norm(h2) {
        return ComplexMatrix::column_vector(&q1);
    }
    let q2: Vec<Complex64> = r.iter().map(|x| x / nr).collect();
    let mut q = ComplexMatrix::zeros(h1.len(), 2);
    q.set_column(0, &q1);
    q.set_column(1, &q2);
    q
}

/// Equivalent M×M instance of a full MN×MN instance whose constraint
/// matrices are I_N ⊗ C: keeps the leading M×M block.
pub fn reduce_dimension(full: &SdpInstance, m: usize, n: usize) -> Result<SdpInstance> {
    if full.dim() != m * n {
        return Err(Error::Dimension(format!("instance side {} is not {m}·{n}", full.dim())));
    }
    let block = |c: &ComplexMatrix| ComplexMatrix::from_fn(m, m, |i, j| c[(i, j)]);
    SdpInstance::new(
        block(&full.c1),
        block(&full.c2),
        full.target,
        full.noise_var,
        full.power,
    )
}

/// Sum of the N diagonal M×M blocks of an MN×MN matrix.
pub fn fold_blocks(x: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    if x.rows() != m * n || !x.is_square() {
        return Err(Error::Dimension(format!("matrix side {} is not {m}·{n}", x.rows())));
    }
    Ok(ComplexMatrix::from_fn(m, m, |i, j| {
        (0..n).map(|k| x[(k * m + i, k * m + j)]).sum()
    }))
}

/// Purified pair and the bookkeeping of the reduction loop.
#[derive(Debug, Clone)]
pub struct RankReductionState {
    pub z1: ComplexMatrix,
    pub z2: ComplexMatrix,
    pub r1: usize,
    pub r2: usize,
    /// W = r1² + r2² on entry and after every iteration.
    pub w_history: Vec<usize>,
}

impl RankReductionState {
    pub fn w(&self) -> usize {
        self.r1 * self.r1 + self.r2 * self.r2
    }

    pub fn iterations(&self) -> usize {
        self.w_history.len() - 1
    }
}

/// V with X = V V^H, keeping eigenpairs above the rank tolerance.
fn factor(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(&x.hermitian_part())?;
    let r = eig.rank(RANK_TOL);
    let mut v = ComplexMatrix::zeros(x.rows(), r);
    for k in 0..r {
        let s = eig.eigenvalues[k].sqrt();
        for (dst, src) in v.column_mut(k).iter_mut().zip(eig.vector(k)) {
            *dst = src * s;
        }
    }
    Ok(v)
}

/// Unit vector in the null space of a 3×W real matrix (W > 3) given by its
/// rows: last Householder basis vector of the QR factorization of A^T.
fn null_vector(rows: &[Vec<f64>; 3]) -> Vec<f64> {
    let w = rows[0].len();
    // columns of A^T are the rows of A
    let mut cols: Vec<Vec<f64>> = rows.to_vec();
    let mut reflectors: Vec<Option<Vec<f64>>> = Vec::with_capacity(3);
    for j in 0..3 {
        let x = &cols[j][j..];
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx == 0.0 {
            reflectors.push(None);
            continue;
        }
        let mut v = x.to_vec();
        v[0] += if x[0] >= 0.0 { nx } else { -nx };
        let vv: f64 = v.iter().map(|a| a * a).sum();
        for col in cols.iter_mut().skip(j) {
            let proj = 2.0 * v.iter().zip(&col[j..]).map(|(a, b)| a * b).sum::<f64>() / vv;
            for (c, a) in col[j..].iter_mut().zip(&v) {
                *c -= proj * a;
            }
        }
        reflectors.push(Some(v));
    }
    let mut q = vec![0.0; w];
    q[3] = 1.0;
    for (j, refl) in reflectors.iter().enumerate().rev() {
        if let Some(v) = refl {
            let vv: f64 = v.iter().map(|a| a * a).sum();
            let proj = 2.0 * v.iter().zip(&q[j..]).map(|(a, b)| a * b).sum::<f64>() / vv;
            for (c, a) in q[j..].iter_mut().zip(v) {
                *c -= proj * a;
            }
        }
    }
    q
}

/// Rank-one purification. Each pass finds Hermitian (Δ1, Δ2) that leave
/// tr(C1 X1) − t tr(C1 X2), tr(C2 X2) − t tr(C2 X1) and tr(X1) + tr(X2)
/// unchanged, scales them to spectral radius one and removes the direction of
/// the extreme eigenvalue, lowering r1² + r2² until it is at most 3.
pub fn rank_reduce(x1: &ComplexMatrix, x2: &ComplexMatrix, inst: &SdpInstance) -> Result<RankReductionState> {
    let t = inst.target;
    let d = inst.dim();
    if x1.rows() != d || x2.rows() != d {
        return Err(Error::Dimension("certificate does not match the instance".into()));
    }
    let mut z = [x1.hermitian_part(), x2.hermitian_part()];
    let mut v = [factor(&z[0])?, factor(&z[1])?];
    let mut w_history = vec![v[0].cols().pow(2) + v[1].cols().pow(2)];

    while *w_history.last().unwrap() > 3 {
        let r = [v[0].cols(), v[1].cols()];
        let proj = |vn: &ComplexMatrix, c: &ComplexMatrix| hermitian_coords(&(&(&vn.adjoint() * c) * vn));
        let eye = ComplexMatrix::identity(d);
        let a11 = proj(&v[0], &inst.c1);
        let a12 = proj(&v[1], &inst.c1);
        let a21 = proj(&v[0], &inst.c2);
        let a22 = proj(&v[1], &inst.c2);
        let p1 = proj(&v[0], &eye);
        let p2 = proj(&v[1], &eye);
        let join = |a: Vec<f64>, b: Vec<f64>| a.into_iter().chain(b).collect::<Vec<f64>>();
        let rows = [
            join(a11, a12.iter().map(|x| -t * x).collect()),
            join(a21.iter().map(|x| -t * x).collect(), a22),
            join(p1, p2),
        ];
        let theta = null_vector(&rows);
        let k1 = r[0] * r[0];
        let delta = [
            hermitian_from_coords(&theta[..k1], r[0]),
            hermitian_from_coords(&theta[k1..], r[1]),
        ];

        // extreme eigenvalue over both Δ's
        let mut delta0 = 0.0f64;
        for dn in &delta {
            if dn.rows() == 0 {
                continue;
            }
            for &l in &herm_eig(dn)?.eigenvalues {
                if l.abs() > delta0.abs() {
                    delta0 = l;
                }
            }
        }
        if delta0 == 0.0 {
            return Err(Error::Numeric {
                message: "rank reduction found only the zero solution".into(),
                trace: vec![format!("ranks ({}, {})", r[0], r[1])],
            });
        }

        for n in 0..2 {
            if r[n] == 0 {
                continue;
            }
            let step = &ComplexMatrix::identity(r[n]) - &delta[n].scale(1.0 / delta0);
            z[n] = (&(&v[n] * &step) * &v[n].adjoint()).hermitian_part();
            v[n] = factor(&z[n])?;
        }
        let w = v[0].cols().pow(2) + v[1].cols().pow(2);
        debug!("rank reduction: ranks ({}, {}) -> ({}, {})", r[0], r[1], v[0].cols(), v[1].cols());
        if w >= *w_history.last().unwrap() {
            return Err(Error::Numeric {
                message: "rank reduction made no progress".into(),
                trace: w_history.iter().map(|w| format!("W={w}")).collect(),
            });
        }
        w_history.push(w);
    }

    let [z1, z2] = z;
    Ok(RankReductionState {
        r1: v[0].cols(),
        r2: v[1].cols(),
        z1,
        z2,
        w_history,
    })
}

/// √λ₁ times the principal eigenvector of a rank-one PSD matrix.
pub fn extract_vector(z: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let eig = herm_eig(&z.hermitian_part())?;
    let l1 = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if l1 <= 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); z.rows()]);
    }
    if let Some(&l2) = eig.eigenvalues.get(1) {
        if l2 > RANK_ONE_TOL * l1 {
            return Err(Error::Numeric {
                message: "matrix is not rank one".into(),
                trace: vec![format!("lambda1={l1:e} lambda2={l2:e}")],
            });
        }
    }
    Ok(eig.vector(0).iter().map(|x| x * l1.sqrt()).collect())
}

/// B with vec(B) vec(B)^H ≈ Z for a rank-one Z of side rows·cols.
pub fn extract_beamformer(z: &ComplexMatrix, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if z.rows() != rows * cols {
        return Err(Error::Dimension(format!("matrix side {} is not {rows}·{cols}", z.rows())));
    }
    unvec(&extract_vector(z)?, rows, cols)
}

/// Max-min SINR relay beamformers for channels `h1`, `h2` under total power
/// `relay_power`, with `streams` columns per beamformer.
pub fn max_min_sinr(
    h1: &[Complex64],
    h2: &[Complex64],
    relay_power: f64,
    noise_var: f64,
    streams: usize,
    opts: &MultiuserOptions,
) -> Result<MultiBeamformer> {
    let lifted = Lifted::new(h1, h2, relay_power, noise_var, streams, opts.formulation)?;
    let upper = sinr_upper_bound(h1, h2, relay_power, noise_var);
    let eps = opts.eps.unwrap_or(DEFAULT_RELATIVE_EPS * upper);
    if !(eps > 0.0) {
        return Err(Error::Contract(format!("bisection accuracy must be positive, got {eps}")));
    }

    let (mut lo, mut hi) = (0.0, upper);
    let mut certificate = None;
    let mut steps = 0;
    loop {
        let t = 0.5 * (lo + hi);
        let inst = lifted.instance.at_target(t);
        let mut out = solve_feasibility(&inst, &opts.solver);
        if out.status == SdpStatus::NumericFailure {
            let retry = SolverOptions {
                tol: opts.solver.tol.max(1e-6),
                max_newton_steps: 2 * opts.solver.max_newton_steps,
                ..opts.solver
            };
            out = solve_feasibility(&inst, &retry);
        }
        steps += 1;
        match out.status {
            SdpStatus::Feasible => {
                lo = t;
                certificate = out.x;
            }
            SdpStatus::Infeasible => hi = t,
            SdpStatus::NumericFailure => {
                return Err(Error::Numeric {
                    message: format!("SDP failed at t={t:e} with bracket [{lo:e}, {hi:e}]"),
                    trace: out.trace,
                })
            }
        }
        if hi - lo <= eps {
            break;
        }
    }

    let inst = lifted.instance.at_target(lo);
    // the bisection certificate only needs to be feasible; re-solve for the
    // max-slack point so that avoidable leakage is driven to round-off
    if certificate.is_some() {
        let polish = solve_feasibility(&inst, &SolverOptions { tol: POLISH_TOL, ..SolverOptions::exact() });
        if polish.status == SdpStatus::Feasible {
            certificate = polish.x;
        } else {
            debug!("polish solve at t={lo:e} returned {:?}", polish.status);
        }
    }
    let [x1, x2] = match certificate {
        Some(x) => x,
        // nothing above zero was feasible: any split of the power works at t = 0
        None => {
            let d = inst.dim();
            let half = ComplexMatrix::identity(d).scale(relay_power / (2.0 * d as f64));
            [half.clone(), half]
        }
    };
    let certificate_ranks = [
        herm_eig(&x1)?.rank(RANK_TOL),
        herm_eig(&x2)?.rank(RANK_TOL),
    ];
    let state = rank_reduce(&x1, &x2, &inst)?;
    let ratio = |z: &ComplexMatrix| -> Result<f64> {
        let e = herm_eig(z)?.eigenvalues;
        Ok(match (e.first(), e.get(1)) {
            (Some(&l1), Some(&l2)) if l1 > 0.0 => l2.max(0.0) / l1,
            _ => 0.0,
        })
    };
    let eigen_ratio = [ratio(&state.z1)?, ratio(&state.z2)?];
    let b1 = lifted.beamformer(&extract_vector(&state.z1)?)?;
    let b2 = lifted.beamformer(&extract_vector(&state.z2)?)?;
    let achieved_sinr = sinr_pair(h1, h2, &b1, &b2, noise_var);
    let total_power = b1.frobenius_norm().powi(2) + b2.frobenius_norm().powi(2);
    debug!("max-min SINR: t*={lo:e} after {steps} steps, achieved {achieved_sinr:?}");
    Ok(MultiBeamformer {
        b1,
        b2,
        t_star: lo,
        achieved_sinr,
        total_power,
        eps,
        bracket: (lo, hi),
        bisection_steps: steps,
        certificate_ranks,
        ranks: [state.r1, state.r2],
        eigen_ratio,
    })
}
