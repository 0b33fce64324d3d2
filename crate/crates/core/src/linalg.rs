//! Dense complex linear algebra for the small Hermitian problems that show up
//! in relay beamforming: eigendecomposition, null spaces, Kronecker products
//! and column-stacking vectorization.
//!
//! Everything here is sized for matrices up to a few dozen rows. Storage is
//! column-major so that [`vec`] is a plain copy.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, column-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major nested rows. Rejects ragged input and
    /// non-finite entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Contract("matrix entries must be finite".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| rows[i][j]))
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Column vector (n x 1).
    pub fn column_vector(v: &[Complex64]) -> Self {
        ComplexMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// u v^H
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        self.column_mut(j).copy_from_slice(v);
    }

    /// Column-major view of the entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.cols {
            for i in 0..=j.min(self.rows - 1) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.is_square() && self.hermitian_defect() <= rel_tol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    /// Replaces the matrix with (A + A^H)/2.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = vec![ZERO; self.rows];
        for (j, &vj) in v.iter().enumerate() {
            if vj == ZERO {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o += a * vj;
            }
        }
        out
    }

    /// A^H v
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.rows, v.len(), "matrix-vector dimension mismatch");
        (0..self.cols).map(|j| dot(self.column(j), v)).collect()
    }

    /// x^H A x for Hermitian A, returned as a real number.
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        dot(x, &self.mul_vec(x)).re
    }

    /// tr(A B) without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        assert!(self.rows == other.cols && self.cols == other.rows);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let b = rhs[(k, j)];
                if b == ZERO {
                    continue;
                }
                let a_col = &self.data[k * self.rows..(k + 1) * self.rows];
                let o_col = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for (o, &a) in o_col.iter_mut().zip(a_col) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// u^H v
pub fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Column k pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// Number of eigenvalues above `rel_tol * λ_max` (zero for the zero matrix).
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.eigenvalues.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return 0;
        }
        self.eigenvalues.iter().filter(|&&l| l > rel_tol * top).count()
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        self.eigenvectors.column(k)
    }

    /// U Λ U^H
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            for z in scaled.column_mut(k) {
                *z *= l;
            }
        }
        &scaled * &self.eigenvectors.adjoint()
    }
}

const HERMITIAN_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned in descending order; each eigenvector is scaled so
/// that its largest-magnitude entry is real and positive.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::Contract(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let scale = a.frobenius_norm();
    if a.hermitian_defect() > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Contract("matrix is not Hermitian".into()));
    }
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    if scale > 0.0 {
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|j| (0..j).map(move |i| (i, j)))
                .map(|(i, j)| m[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let mut col = v.column(i).to_vec();
        fix_phase(&mut col);
        eigenvectors.set_column(k, &col);
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// One rotation zeroing m[(p, q)]; G = diag phase followed by a real rotation.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = m[(p, q)];
    let babs = b.norm();
    if babs == 0.0 {
        return;
    }
    let n = m.rows;
    let phase = b / babs;
    let a = m[(p, p)].re;
    let d = m[(q, q)].re;
    let zeta = (d - a) / (2.0 * babs);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, e^{-iφ}) R diag(1, e^{iφ}) with R the real rotation that
    // diagonalizes [[a, |b|], [|b|, d]].
    let g_pp = Complex64::new(c, 0.0);
    let g_qp = -phase.conj() * s;
    let g_pq = phase * s;
    let g_qq = Complex64::new(c, 0.0);

    // M <- M G
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    // M <- G^H M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Rotates `v` so its largest-magnitude entry (first on ties) is real positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = mag;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let rot = v[best].conj() / best_mag;
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex64::new(v[best].re, 0.0);
}

/// Orthonormal basis (M x (M-1)) of the orthogonal complement of `h`.
///
/// Built from the Householder reflector that maps `h` onto a multiple of e1;
/// the reflector's columns 2..M are returned.
pub fn null_basis(h: &[Complex64]) -> Result<ComplexMatrix> {
    let m = h.len();
    let hn = norm(h);
    if m == 0 || hn == 0.0 {
        return Err(Error::Degenerate("null space of a zero vector is the whole space".into()));
    }
    let phase = if h[0].norm() > 0.0 { h[0] / h[0].norm() } else { ONE };
    let mut w = h.to_vec();
    w[0] += phase * hn;
    let wn2 = norm_sqr(&w);
    // H = I - 2 w w^H / (w^H w); keep columns 1..m
    let u = ComplexMatrix::from_fn(m, m - 1, |i, j| {
        let col = j + 1;
        let delta = if i == col { ONE } else { ZERO };
        delta - w[i] * w[col].conj() * (2.0 / wn2)
    });
    Ok(u)
}

/// Orthogonal projection of `v` onto the complement of `h`: v - h (h^H v)/‖h‖².
pub fn project_out(v: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    let hn2 = norm_sqr(h);
    if hn2 == 0.0 {
        return v.to_vec();
    }
    let coeff = dot(h, v) / hn2;
    v.iter().zip(h).map(|(&a, &b)| a - b * coeff).collect()
}

/// General Kronecker product A ⊗ B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// I_n ⊗ A: block diagonal with `n` copies of `a`.
pub fn kron_identity(n: usize, a: &ComplexMatrix) -> ComplexMatrix {
    assert!(n >= 1, "kron_identity needs n >= 1");
    let (r, c) = (a.rows, a.cols);
    let mut out = ComplexMatrix::zeros(n * r, n * c);
    for blk in 0..n {
        for j in 0..c {
            for i in 0..r {
                out[(blk * r + i, blk * c + j)] = a[(i, j)];
            }
        }
    }
    out
}

/// Column-stacking vectorization.
pub fn vec(b: &ComplexMatrix) -> Vec<Complex64> {
    b.data.clone()
}

/// Inverse of [`vec`] for an `rows x cols` matrix.
pub fn unvec(v: &[Complex64], rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "cannot reshape length {} into {}x{}",
            v.len(),
            rows,
            cols
        )));
    }
    Ok(ComplexMatrix {
        rows,
        cols,
        data: v.to_vec(),
    })
}

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix,
/// or `None` if a pivot is not strictly positive.
pub fn cholesky(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.rows;
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        if !(diag > 0.0) {
            return None;
        }
        let ljj = diag.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Some(l)
}

/// log det of a Hermitian positive definite matrix from its Cholesky factor.
pub fn log_det_from_cholesky(l: &ComplexMatrix) -> f64 {
    (0..l.rows).map(|i| 2.0 * l[(i, i)].re.ln()).sum()
}

/// Inverse of a Hermitian positive definite matrix from its Cholesky factor.
pub fn inverse_from_cholesky(l: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows;
    // Solve L Y = I, then L^H X = Y.
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let x = inv.column_mut(col);
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= l[(i, k)] * x[k];
            }
            x[i] = s / l[(i, i)].re;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * x[k];
            }
            x[i] = s / l[(i, i)].re;
        }
    }
    inv.hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, cc: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, cc, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let a = random_matrix(rng, n, n);
        (&a + &a.adjoint()).scale(0.5)
    }

    #[test]
    fn identity_eigenvalues() {
        let e = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let u = &e.eigenvectors;
        let gram = &u.adjoint() * u;
        assert!((&gram - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn diagonal_eigenpairs() {
        let e = herm_eig(&ComplexMatrix::diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(e.vector(0), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(e.vector(1), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn two_by_two_with_imaginary_coupling() {
        // (2-x)^2 - |i|^2 = 0 -> x = 3, 1
        let a = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]])
            .unwrap();
        let e = herm_eig(&a).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_rejects_bad_input() {
        assert!(matches!(herm_eig(&ComplexMatrix::zeros(2, 3)), Err(Error::Contract(_))));
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(herm_eig(&a), Err(Error::Contract(_))));
    }

    #[test]
    fn eig_residuals_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 5, 9, 18] {
            let a = random_hermitian(&mut rng, n);
            let e = herm_eig(&a).unwrap();
            let fro = a.frobenius_norm();
            assert!((&a - &e.reconstruct()).frobenius_norm() <= 1e-10 * fro);
            let gram = &e.eigenvectors.adjoint() * &e.eigenvectors;
            assert!((&gram - &ComplexMatrix::identity(n)).frobenius_norm() <= 1e-10);
            for k in 0..n {
                let u = e.vector(k);
                let au = a.mul_vec(u);
                let r: Vec<_> = au.iter().zip(u).map(|(x, y)| x - y * e.eigenvalues[k]).collect();
                assert!(norm(&r) <= 1e-9 * fro);
            }
            assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn eigenvector_phase_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(&mut rng, 4);
        let e = herm_eig(&a).unwrap();
        for k in 0..4 {
            let v = e.vector(k);
            let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let idx = v.iter().position(|z| z.norm() == big).unwrap();
            assert_eq!(v[idx].im, 0.0);
            assert!(v[idx].re > 0.0);
        }
    }

    #[test]
    fn psd_eigenvalues_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = random_matrix(&mut rng, 6, 2);
        let a = &b * &b.adjoint();
        let e = herm_eig(&a).unwrap();
        let top = e.eigenvalues[0];
        assert!(e.eigenvalues.iter().all(|&l| l >= -1e-10 * top));
        assert_eq!(e.rank(1e-9), 2);
    }

    #[test]
    fn null_basis_of_e1() {
        let u = null_basis(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!((u.rows(), u.cols()), (2, 1));
        assert_abs_diff_eq!(u[(0, 0)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(1, 0)].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn null_basis_of_diagonal_direction() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = null_basis(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        // (1, -1)/√2 up to a unit phase
        let ratio = u[(1, 0)] / u[(0, 0)];
        assert_abs_diff_eq!(ratio.re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u[(0, 0)].norm(), s, epsilon = 1e-14);
    }

    #[test]
    fn null_basis_random_is_orthonormal_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in [2, 3, 4, 6] {
            let h: Vec<_> = (0..m).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let u = null_basis(&h).unwrap();
            assert!(norm(&u.adjoint_mul_vec(&h)) <= 1e-10 * norm(&h));
            let gram = &u.adjoint() * &u;
            assert!((&gram - &ComplexMatrix::identity(m - 1)).frobenius_norm() <= 1e-10);
        }
        assert!(matches!(null_basis(&[c(0.0, 0.0); 3]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn null_basis_composes_with_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let h: Vec<_> = (0..3).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let u = null_basis(&h).unwrap();
        let hh = ComplexMatrix::column_vector(&h).adjoint();
        let lhs = &kron_identity(3, &hh) * &kron_identity(3, &u);
        assert!(lhs.frobenius_norm() <= 1e-10);
    }

    #[test]
    fn kron_identity_structure() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(kron_identity(1, &a), a);
        let one = ComplexMatrix::from_real_rows(&[&[1.0]]).unwrap();
        assert_eq!(kron_identity(2, &one), ComplexMatrix::identity(2));
        let k = kron_identity(2, &a);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        for i in 0..4 {
            for j in 0..4 {
                if i / 2 != j / 2 {
                    assert_eq!(k[(i, j)], c(0.0, 0.0));
                } else {
                    assert_eq!(k[(i, j)], a[(i % 2, j % 2)]);
                }
            }
        }
        assert_eq!(kron(&ComplexMatrix::identity(2), &a), k);
    }

    #[test]
    fn vec_is_column_stacking() {
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 3.0], &[2.0, 4.0]]).unwrap();
        let v: Vec<f64> = vec(&b).iter().map(|z| z.re).collect();
        assert_eq!(v, vec![1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(unvec(&vec(&b), 3, 1), Err(Error::Dimension(_))));
    }

    #[test]
    fn vec_unvec_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_matrix(&mut rng, 3, 3);
        assert_eq!(unvec(&vec(&b), 3, 3).unwrap(), b);
    }

    #[test]
    fn vec_kron_identity() {
        // vec(ABC) = (C^T ⊗ A) vec(B), checked against direct multiplication
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 2, 2);
            let cm = random_matrix(&mut rng, 2, 2);
            let lhs = vec(&(&(&a * &b) * &cm));
            let rhs = kron(&cm.transpose(), &a).mul_vec(&vec(&b));
            let diff: Vec<_> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
            assert!(norm(&diff) <= 1e-12);
        }
    }

    #[test]
    fn cholesky_inverse_and_logdet() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = random_matrix(&mut rng, 4, 4);
        let a = &(&b * &b.adjoint()) + &ComplexMatrix::identity(4);
        let l = cholesky(&a).unwrap();
        assert!((&(&l * &l.adjoint()) - &a).frobenius_norm() < 1e-12);
        let inv = inverse_from_cholesky(&l);
        assert!((&(&inv * &a) - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-12);
        let e = herm_eig(&a).unwrap();
        let logdet: f64 = e.eigenvalues.iter().map(|l| l.ln()).sum();
        assert_abs_diff_eq!(log_det_from_cholesky(&l), logdet, epsilon = 1e-12);
        assert!(cholesky(&ComplexMatrix::diagonal(&[1.0, -1.0])).is_none());
    }
}
