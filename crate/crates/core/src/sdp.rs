//! Dense feasibility SDP for two-user max-min SINR at a fixed target `t`.
//!
//! Given Hermitian PSD matrices C1, C2 (side D) the relaxed problem asks for
//! X1, X2 ⪰ 0 with
//!
//! ```text
//! tr(C_i X_i) − t·tr(C_i X_j) − t·σ² ≥ 0     (i, j) ∈ {(1,2), (2,1)}
//! tr(X1) + tr(X2) ≤ Pr
//! ```
//!
//! It is solved as a phase-I problem: maximize a common slack `s` of the two
//! SINR constraints with a primal log-barrier method. Internally the matrices
//! are scaled to unit power budget (Y = X/Pr), the SINR constraints are
//! divided by σ²(1 + t), and each Hermitian matrix is parameterized by its D²
//! real coordinates in an orthonormal basis, so that tr(A Y) is a plain dot
//! product.

use log::debug;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, herm_eig, inverse_from_cholesky, log_det_from_cholesky, ComplexMatrix};
use num_complex::Complex64;

/// Number of real coordinates of a D x D Hermitian matrix.
pub fn hermitian_dim(d: usize) -> usize {
    d * d
}

/// Coordinates of a Hermitian matrix in the orthonormal basis
/// {e_aa} ∪ {(e_ab + e_ba)/√2} ∪ {i(e_ab − e_ba)/√2}: diagonal entries first,
/// then (√2 Re A_ab, √2 Im A_ab) for a < b in row order.
pub fn hermitian_coords(a: &ComplexMatrix) -> Vec<f64> {
    let d = a.rows();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(a[(i, i)].re);
    }
    let s2 = std::f64::consts::SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            let z = a[(i, j)];
            out.push(s2 * z.re);
            out.push(s2 * z.im);
        }
    }
    out
}

/// Inverse of [`hermitian_coords`].
pub fn hermitian_from_coords(theta: &[f64], d: usize) -> ComplexMatrix {
    assert_eq!(theta.len(), d * d, "coordinate vector has the wrong length");
    let mut a = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        a[(i, i)] = Complex64::new(theta[i], 0.0);
    }
    let inv_s2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = Complex64::new(theta[k], theta[k + 1]) * inv_s2;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
            k += 2;
        }
    }
    a
}

/// One feasibility problem of the bisection.
#[derive(Debug, Clone)]
pub struct SdpInstance {
    pub c1: ComplexMatrix,
    pub c2: ComplexMatrix,
    /// SINR target t.
    pub target: f64,
    pub noise_var: f64,
    /// Total power budget Pr.
    pub power: f64,
}

const PSD_TOL: f64 = 1e-10;

impl SdpInstance {
    pub fn new(c1: ComplexMatrix, c2: ComplexMatrix, target: f64, noise_var: f64, power: f64) -> Result<Self> {
        if !c1.is_square() || c1.rows() != c2.rows() || !c2.is_square() {
            return Err(Error::Dimension("constraint matrices must be square and equal-sized".into()));
        }
        for c in [&c1, &c2] {
            let e = herm_eig(c)?;
            let top = e.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
            if e.eigenvalues.iter().any(|&l| l < -PSD_TOL * top.max(1.0)) {
                return Err(Error::Contract("constraint matrix is not PSD".into()));
            }
        }
        if !(target >= 0.0) || !(noise_var > 0.0) || !(power > 0.0) {
            return Err(Error::Contract(format!(
                "need t >= 0, noise > 0, power > 0 (got {target}, {noise_var}, {power})"
            )));
        }
        Ok(SdpInstance {
            c1,
            c2,
            target,
            noise_var,
            power,
        })
    }

    /// Same constraint matrices at another target.
    pub fn at_target(&self, target: f64) -> Self {
        let mut inst = self.clone();
        inst.target = target;
        inst
    }

    pub fn dim(&self) -> usize {
        self.c1.rows()
    }

    /// SINR constraint values tr(C_i X_i) − t tr(C_i X_j) − tσ².
    pub fn gaps(&self, x1: &ComplexMatrix, x2: &ComplexMatrix) -> [f64; 2] {
        let t = self.target;
        let tr = |c: &ComplexMatrix, x: &ComplexMatrix| c.trace_product(x).re;
        [
            tr(&self.c1, x1) - t * tr(&self.c1, x2) - t * self.noise_var,
            tr(&self.c2, x2) - t * tr(&self.c2, x1) - t * self.noise_var,
        ]
    }

    pub fn total_power(&self, x1: &ComplexMatrix, x2: &ComplexMatrix) -> f64 {
        x1.trace().re + x2.trace().re
    }

    /// Scale that turns a gap into the solver's normalized slack.
    pub fn gap_scale(&self) -> f64 {
        self.noise_var * (1.0 + self.target)
    }

    /// Upper bound on any achievable common SINR: min_i Pr·tr(C_i)/... for
    /// rank-one C_i this is min_i Pr‖h_i‖²/σ².
    pub fn sinr_upper_bound(&self) -> f64 {
        let top = |c: &ComplexMatrix| herm_eig(c).map(|e| e.eigenvalues[0]).unwrap_or(0.0);
        self.power * top(&self.c1).min(top(&self.c2)) / self.noise_var
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Feasible,
    Infeasible,
    NumericFailure,
}

#[derive(Debug, Clone)]
pub struct SdpOutcome {
    pub status: SdpStatus,
    /// Certificate (X1, X2), present iff feasible.
    pub x: Option<[ComplexMatrix; 2]>,
    /// min_i of the SINR constraint values at the returned certificate (or at
    /// the last iterate when infeasible).
    pub slack: f64,
    /// Slack in the solver's normalized units.
    pub normalized_slack: f64,
    /// Upper bound on the optimal normalized slack when the barrier stopped.
    pub normalized_bound: f64,
    pub newton_steps: usize,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Stop when the barrier duality measure falls below this.
    pub tol: f64,
    /// Feasible iff the optimal normalized slack is at least −margin.
    pub margin: f64,
    /// Return as soon as the verdict is certain instead of solving to `tol`.
    pub early_exit: bool,
    pub max_newton_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            margin: 1e-9,
            early_exit: true,
            max_newton_steps: 600,
        }
    }
}

impl SolverOptions {
    /// Solve to full accuracy so that the returned slack is the optimum.
    pub fn exact() -> Self {
        SolverOptions {
            early_exit: false,
            ..Self::default()
        }
    }
}

/// Linear form a·x + b over the full variable vector.
struct Affine {
    a: Vec<f64>,
    b: f64,
}

impl Affine {
    fn eval(&self, x: &[f64]) -> f64 {
        self.a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() + self.b
    }
}

struct Barrier {
    d: usize,
    forms: [Affine; 3],
}

struct Point {
    x: Vec<f64>,
    y: [ComplexMatrix; 2],
    chol: [ComplexMatrix; 2],
    lin: [f64; 3],
}

impl Barrier {
    fn new(inst: &SdpInstance) -> Self {
        let d = inst.dim();
        let k = hermitian_dim(d);
        let n = 2 * k + 1;
        let t = inst.target;
        let scale = inst.power / inst.gap_scale();
        let c1 = hermitian_coords(&inst.c1);
        let c2 = hermitian_coords(&inst.c2);
        let eye = hermitian_coords(&ComplexMatrix::identity(d));

        let mut g1 = vec![0.0; n];
        let mut g2 = vec![0.0; n];
        let mut pw = vec![0.0; n];
        for i in 0..k {
            g1[i] = scale * c1[i];
            g1[k + i] = -t * scale * c1[i];
            g2[i] = -t * scale * c2[i];
            g2[k + i] = scale * c2[i];
            pw[i] = -eye[i];
            pw[k + i] = -eye[i];
        }
        g1[n - 1] = -1.0;
        g2[n - 1] = -1.0;
        let offset = -t * inst.noise_var / inst.gap_scale();
        Barrier {
            d,
            forms: [
                Affine { a: g1, b: offset },
                Affine { a: g2, b: offset },
                Affine { a: pw, b: 1.0 },
            ],
        }
    }

    fn k(&self) -> usize {
        hermitian_dim(self.d)
    }

    fn n(&self) -> usize {
        2 * self.k() + 1
    }

    /// Barrier parameter count: three scalar constraints plus D per PSD cone.
    fn degree(&self) -> f64 {
        (3 + 2 * self.d) as f64
    }

    fn point(&self, x: Vec<f64>) -> Option<Point> {
        let k = self.k();
        let lin = [self.forms[0].eval(&x), self.forms[1].eval(&x), self.forms[2].eval(&x)];
        if lin.iter().any(|&l| !(l > 0.0)) {
            return None;
        }
        let y1 = hermitian_from_coords(&x[..k], self.d);
        let y2 = hermitian_from_coords(&x[k..2 * k], self.d);
        let l1 = cholesky(&y1)?;
        let l2 = cholesky(&y2)?;
        Some(Point {
            x,
            y: [y1, y2],
            chol: [l1, l2],
            lin,
        })
    }

    fn value(&self, p: &Point, tau: f64) -> f64 {
        let s = p.x[self.n() - 1];
        -tau * s - p.lin.iter().map(|l| l.ln()).sum::<f64>()
            - log_det_from_cholesky(&p.chol[0])
            - log_det_from_cholesky(&p.chol[1])
    }

    /// Gradient and Hessian (row-major) at `p`.
    fn derivatives(&self, p: &Point, tau: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        let k = self.k();
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        grad[n - 1] = -tau;
        for (form, &l) in self.forms.iter().zip(&p.lin) {
            for i in 0..n {
                let ai = form.a[i];
                if ai == 0.0 {
                    continue;
                }
                grad[i] -= ai / l;
                let w = ai / (l * l);
                for j in 0..n {
                    hess[i * n + j] += w * form.a[j];
                }
            }
        }
        for blk in 0..2 {
            let inv = inverse_from_cholesky(&p.chol[blk]);
            let off = blk * k;
            for (i, g) in hermitian_coords(&inv).into_iter().enumerate() {
                grad[off + i] -= g;
            }
            let cols = logdet_hessian(&inv);
            for (i, col) in cols.iter().enumerate() {
                for (j, &v) in col.iter().enumerate() {
                    hess[(off + i) * n + off + j] += v;
                }
            }
        }
        (grad, hess)
    }
}

/// Hessian of −log det Y in Hermitian coordinates: H_kl = tr(A E_k A E_l)
/// with A = Y⁻¹. Column k is the coordinate vector of A E_k A.
fn logdet_hessian(a: &ComplexMatrix) -> Vec<Vec<f64>> {
    let d = a.rows();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i_unit = Complex64::i();
    let mut cols = Vec::with_capacity(d * d);
    // A e_a e_b^T A = u_a u_b^H with u_a the a-th column of A (A Hermitian)
    let outer = |p: usize, q: usize| ComplexMatrix::outer(a.column(p), a.column(q));
    for p in 0..d {
        cols.push(hermitian_coords(&outer(p, p)));
    }
    for p in 0..d {
        for q in p + 1..d {
            let pq = outer(p, q);
            let qp = pq.adjoint();
            cols.push(hermitian_coords(&(&pq + &qp).scale(s)));
            cols.push(hermitian_coords(&(&pq - &qp).scale_complex(i_unit * s)));
        }
    }
    cols
}

/// Solves H x = r for symmetric positive definite H (row-major), adding a
/// small diagonal shift if the factorization breaks down.
fn solve_spd(h: &[f64], r: &[f64]) -> Option<Vec<f64>> {
    let n = r.len();
    let max_diag = (0..n).map(|i| h[i * n + i].abs()).fold(0.0, f64::max);
    let mut shift = 0.0;
    for _ in 0..6 {
        if let Some(l) = cholesky_real(h, n, shift) {
            let mut y = r.to_vec();
            for i in 0..n {
                let mut s = y[i];
                for k in 0..i {
                    s -= l[i * n + k] * y[k];
                }
                y[i] = s / l[i * n + i];
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for k in i + 1..n {
                    s -= l[k * n + i] * y[k];
                }
                y[i] = s / l[i * n + i];
            }
            return Some(y);
        }
        shift = if shift == 0.0 { 1e-14 * max_diag } else { shift * 100.0 };
    }
    None
}

fn cholesky_real(h: &[f64], n: usize, shift: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = h[j * n + j] + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = h[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Some(l)
}

const NEWTON_DECREMENT_TOL: f64 = 1e-10;
const VALUE_RESOLUTION: f64 = 1e-13;
const MAX_CENTERING_STEPS: usize = 60;
const ARMIJO: f64 = 0.01;
const BACKTRACK: f64 = 0.5;
/// Initial point Y_i = I/(2D(1 + INTERIOR_EPS)).
const INTERIOR_EPS: f64 = 0.1;

/// Maximizes the common slack of the two SINR constraints and reports whether
/// the instance is feasible (optimal normalized slack ≥ −margin).
pub fn solve_feasibility(inst: &SdpInstance, opts: &SolverOptions) -> SdpOutcome {
    let barrier = Barrier::new(inst);
    let d = barrier.d;
    let k = barrier.k();
    let n = barrier.n();
    let mut trace = Vec::new();

    let mut x0 = vec![0.0; n];
    let start = hermitian_coords(&ComplexMatrix::identity(d).scale(1.0 / (2.0 * d as f64 * (1.0 + INTERIOR_EPS))));
    x0[..k].copy_from_slice(&start);
    x0[k..2 * k].copy_from_slice(&start);
    let g0 = barrier.forms[0].eval(&x0).min(barrier.forms[1].eval(&x0));
    x0[n - 1] = g0 - g0.abs().max(1.0) * INTERIOR_EPS;

    let Some(mut p) = barrier.point(x0) else {
        return failure(inst, "initial point is not strictly feasible".into(), trace, 0);
    };

    let mut tau = 1.0;
    let mut steps = 0usize;
    loop {
        // centering
        let mut inner = 0usize;
        loop {
            if steps >= opts.max_newton_steps {
                trace.push(format!("tau={tau:e} s={:e}", p.x[n - 1]));
                return failure(inst, format!("no convergence in {steps} Newton steps"), trace, steps);
            }
            let (grad, hess) = barrier.derivatives(&p, tau);
            let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
            let Some(dx) = solve_spd(&hess, &neg) else {
                trace.push(format!("tau={tau:e} singular Newton system"));
                return failure(inst, "Newton system is not positive definite".into(), trace, steps);
            };
            steps += 1;
            let decrement: f64 = -grad.iter().zip(&dx).map(|(g, v)| g * v).sum::<f64>();
            let f0 = barrier.value(&p, tau);
            // predicted decrease below what f can resolve counts as centered
            if decrement / 2.0 <= NEWTON_DECREMENT_TOL.max(VALUE_RESOLUTION * f0.abs()) {
                break;
            }
            inner += 1;
            if inner > MAX_CENTERING_STEPS {
                trace.push(format!("tau={tau:e}: centering stopped with decrement {decrement:e}"));
                break;
            }
            let mut alpha = 1.0;
            let mut next = None;
            while alpha > 1e-14 {
                let cand: Vec<f64> = p.x.iter().zip(&dx).map(|(a, b)| a + alpha * b).collect();
                if let Some(q) = barrier.point(cand) {
                    if barrier.value(&q, tau) <= f0 - ARMIJO * alpha * decrement {
                        next = Some(q);
                        break;
                    }
                }
                alpha *= BACKTRACK;
            }
            match next {
                Some(q) => p = q,
                // no decrease possible at working precision: treat as centered
                None => break,
            }
            if opts.early_exit && p.x[n - 1] > 0.0 {
                break;
            }
        }

        let s = p.x[n - 1];
        let gap = barrier.degree() / tau;
        let bound = s + 1.1 * gap;
        debug!("sdp: t={:e} tau={tau:e} s={s:e} bound={bound:e} steps={steps}", inst.target);
        if opts.early_exit {
            if s > 0.0 {
                return feasible(inst, &p, bound, steps, trace);
            }
            if bound < -opts.margin {
                return infeasible(inst, &p, bound, steps, trace);
            }
        }
        if gap <= opts.tol {
            return if s >= -opts.margin {
                feasible(inst, &p, bound, steps, trace)
            } else {
                infeasible(inst, &p, bound, steps, trace)
            };
        }
        tau *= 10.0;
    }
}

fn certificate(inst: &SdpInstance, p: &Point) -> [ComplexMatrix; 2] {
    [p.y[0].scale(inst.power), p.y[1].scale(inst.power)]
}

fn feasible(inst: &SdpInstance, p: &Point, bound: f64, steps: usize, trace: Vec<String>) -> SdpOutcome {
    let x = certificate(inst, p);
    let gaps = inst.gaps(&x[0], &x[1]);
    SdpOutcome {
        status: SdpStatus::Feasible,
        slack: gaps[0].min(gaps[1]),
        normalized_slack: p.x[p.x.len() - 1],
        normalized_bound: bound,
        x: Some(x),
        newton_steps: steps,
        trace,
    }
}

fn infeasible(inst: &SdpInstance, p: &Point, bound: f64, steps: usize, trace: Vec<String>) -> SdpOutcome {
    let x = certificate(inst, p);
    let gaps = inst.gaps(&x[0], &x[1]);
    SdpOutcome {
        status: SdpStatus::Infeasible,
        slack: gaps[0].min(gaps[1]),
        normalized_slack: p.x[p.x.len() - 1],
        normalized_bound: bound,
        x: None,
        newton_steps: steps,
        trace,
    }
}

fn failure(inst: &SdpInstance, message: String, mut trace: Vec<String>, steps: usize) -> SdpOutcome {
    trace.push(format!("t={:e}: {message}", inst.target));
    SdpOutcome {
        status: SdpStatus::NumericFailure,
        x: None,
        slack: f64::NAN,
        normalized_slack: f64::NAN,
        normalized_bound: f64::NAN,
        newton_steps: steps,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{complex_gaussian, TrialStreams};
    use crate::linalg::norm_sqr;
    use approx::assert_abs_diff_eq;

    fn rank_one(h: &[Complex64]) -> ComplexMatrix {
        ComplexMatrix::outer(h, h)
    }

    fn random_instance(seed: u64, m: usize) -> SdpInstance {
        let mut rng = TrialStreams::new(seed).trial(0);
        let h1 = complex_gaussian(&mut rng, m, 4.0);
        let h2 = complex_gaussian(&mut rng, m, 4.0);
        SdpInstance::new(rank_one(&h1), rank_one(&h2), 0.0, 1.0, 20.0).unwrap()
    }

    fn check_certificate(inst: &SdpInstance, out: &SdpOutcome) {
        let [x1, x2] = out.x.as_ref().unwrap();
        let gaps = inst.gaps(x1, x2);
        let tol = 1e-7 * (1.0 + inst.target * inst.noise_var);
        assert!(gaps.iter().all(|&g| g >= -tol), "gaps {gaps:?}");
        assert!(inst.total_power(x1, x2) <= inst.power * (1.0 + 1e-8));
        for x in [x1, x2] {
            let e = herm_eig(x).unwrap();
            let tr = x.trace().re;
            assert!(e.eigenvalues.iter().all(|&l| l >= -1e-8 * tr));
        }
        assert_abs_diff_eq!(out.slack, gaps[0].min(gaps[1]), epsilon = 1e-8);
    }

    #[test]
    fn coordinates_round_trip_and_inner_product() {
        let mut rng = TrialStreams::new(1).trial(0);
        let g = complex_gaussian(&mut rng, 9, 1.0);
        let a = ComplexMatrix::from_fn(3, 3, |i, j| g[3 * i + j]);
        let h = (&a + &a.adjoint()).scale(0.5);
        let back = hermitian_from_coords(&hermitian_coords(&h), 3);
        assert!((&back - &h).frobenius_norm() < 1e-15);
        let b = &a * &a.adjoint();
        let dot: f64 = hermitian_coords(&h).iter().zip(hermitian_coords(&b)).map(|(x, y)| x * y).sum();
        assert_abs_diff_eq!(dot, h.trace_product(&b).re, epsilon = 1e-12);
    }

    #[test]
    fn zero_target_is_feasible() {
        let inst = random_instance(2, 3);
        let out = solve_feasibility(&inst, &SolverOptions::default());
        assert_eq!(out.status, SdpStatus::Feasible);
        assert!(out.slack >= 0.0);
        check_certificate(&inst, &out);
    }

    #[test]
    fn above_upper_bound_is_infeasible() {
        let base = random_instance(3, 3);
        let bu = base.sinr_upper_bound();
        let inst = base.at_target(bu * 1.01);
        let out = solve_feasibility(&inst, &SolverOptions::default());
        assert_eq!(out.status, SdpStatus::Infeasible);
        assert!(out.x.is_none());
    }

    #[test]
    fn exact_mode_certificate_is_consistent() {
        let base = random_instance(4, 3);
        let bu = base.sinr_upper_bound();
        for frac in [0.05, 0.2] {
            let inst = base.at_target(frac * bu);
            let out = solve_feasibility(&inst, &SolverOptions::exact());
            if out.status == SdpStatus::Feasible {
                check_certificate(&inst, &out);
                // the optimum spends the full budget
                let [x1, x2] = out.x.as_ref().unwrap();
                assert!(inst.total_power(x1, x2) > inst.power * (1.0 - 1e-6));
            }
        }
    }

    #[test]
    fn feasibility_is_monotone_in_target() {
        let base = random_instance(5, 2);
        let bu = base.sinr_upper_bound();
        let verdicts: Vec<bool> = (1..=20)
            .map(|i| {
                let out = solve_feasibility(&base.at_target(bu * i as f64 / 20.0), &SolverOptions::default());
                assert_ne!(out.status, SdpStatus::NumericFailure);
                out.status == SdpStatus::Feasible
            })
            .collect();
        let first_infeasible = verdicts.iter().position(|&v| !v).unwrap_or(verdicts.len());
        assert!(verdicts[first_infeasible..].iter().all(|&v| !v), "{verdicts:?}");
    }

    #[test]
    fn orthogonal_channels_match_power_split() {
        // zero cross-talk: optimum common SINR is Pr a b/(σ²(a+b)) with a, b the channel gains
        let h1 = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
        let h2 = vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)];
        let (a, b) = (norm_sqr(&h1), norm_sqr(&h2));
        let t_star = 10.0 * a * b / (a + b);
        let base = SdpInstance::new(rank_one(&h1), rank_one(&h2), 0.0, 1.0, 10.0).unwrap();
        let lo = solve_feasibility(&base.at_target(t_star * 0.999), &SolverOptions::default());
        let hi = solve_feasibility(&base.at_target(t_star * 1.001), &SolverOptions::default());
        assert_eq!(lo.status, SdpStatus::Feasible);
        assert_eq!(hi.status, SdpStatus::Infeasible);
    }

    #[test]
    fn rejects_non_psd_constraints() {
        let bad = ComplexMatrix::diagonal(&[1.0, -1.0]);
        assert!(SdpInstance::new(bad.clone(), bad, 1.0, 1.0, 1.0).is_err());
    }
}
