//! Dense complex linear algebra: conversions to nalgebra, norms, inverses and
//! the principal matrix logarithm.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{Field, Matrix};
use crate::error::{Error, Result};

pub type CMatrix = Matrix<Complex64>;

pub fn to_na(m: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

pub fn from_na(m: &DMatrix<Complex64>) -> CMatrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation; shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()), "shape mismatch");
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Infinity norm (max row sum).
pub fn norm_inf(m: &CMatrix) -> f64 {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    to_na(m).try_inverse().map(|inv| from_na(&inv))
}

/// Product that panics on shape mismatch; for internal use on square data.
pub fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.mul(b).expect("compatible shapes")
}

/// Iteration cap per attempt; nalgebra's unbounded variant can cycle forever.
const SCHUR_MAX_ITER: usize = 500;

/// Complex Schur form `m = Q·T·Q*` with `T` upper triangular.
///
/// A stalled QR iteration is retried on `G*·m·G` for a few fixed unitary `G`;
/// `None` if every attempt stalls.
pub fn schur(m: &DMatrix<Complex64>) -> Option<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    let max_iter = SCHUR_MAX_ITER * n.max(1);
    if let Some(s) = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, max_iter) {
        return Some(s.unpack());
    }
    (1..=4).find_map(|k| {
        let g = rotation(n, 0.61 * k as f64);
        let s = nalgebra::Schur::try_new(g.adjoint() * m * &g, f64::EPSILON, max_iter)?;
        let (q, t) = s.unpack();
        Some((g * q, t))
    })
}

/// Product of Givens rotations on consecutive coordinate pairs.
fn rotation(n: usize, angle: f64) -> DMatrix<Complex64> {
    let mut g = DMatrix::<Complex64>::identity(n, n);
    for k in 0..n.saturating_sub(1) {
        let theta = angle * (k + 1) as f64;
        let (c, s) = (theta.cos(), theta.sin());
        let phase = Complex64::from_polar(1.0, 0.3 * theta);
        let mut r = DMatrix::<Complex64>::identity(n, n);
        r[(k, k)] = Complex64::new(c, 0.0);
        r[(k, k + 1)] = -s * phase.conj();
        r[(k + 1, k)] = s * phase;
        r[(k + 1, k + 1)] = Complex64::new(c, 0.0);
        g *= r;
    }
    g
}

/// 2-norm condition number via singular values.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = to_na(m).singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogMethod {
    Eigen,
    InverseScalingSquaring,
}

/// A matrix logarithm together with how it was obtained.
#[derive(Clone, Debug)]
pub struct MatrixLog {
    pub value: CMatrix,
    pub method: LogMethod,
    /// Eigenvalues on the negative real axis, mapped to argument `+π`.
    pub on_branch_cut: usize,
}

impl MatrixLog {
    pub fn is_principal(&self) -> bool {
        self.on_branch_cut == 0
    }
}

fn on_cut(l: Complex64) -> bool {
    l.re < 0.0 && l.im.abs() <= 1e-12 * l.norm()
}

/// Principal logarithm (eigenvalue arguments in `(-π, π]`).
///
/// Diagonalizable input goes through an eigendecomposition; otherwise inverse
/// scaling and squaring is used, which needs every eigenvalue off the closed
/// negative real axis.
pub fn logm(m: &CMatrix) -> Result<MatrixLog> {
    if !m.is_square() {
        return Err(Error::Shape(format!("logarithm of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let (q, t) = schur(&to_na(m)).ok_or_else(|| Error::LogBranchFailure("Schur iteration did not converge".into()))?;
    let eig: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    if eig.iter().any(|l| l.norm() <= 1e-14 * scale) {
        return Err(Error::LogBranchFailure("matrix is singular".into()));
    }
    let cut = eig.iter().filter(|l| on_cut(**l)).count();
    if let Some(x) = triangular_eigenvectors(&t) {
        let v = &q * x;
        if let Some(vinv) = v.clone().try_inverse() {
            let cond = v.norm() * vinv.norm();
            if cond.is_finite() && cond < 1e8 {
                let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    n,
                    eig.iter().map(|&l| principal_ln(l)),
                ));
                return Ok(MatrixLog {
                    value: from_na(&(v * d * vinv)),
                    method: LogMethod::Eigen,
                    on_branch_cut: cut,
                });
            }
        }
    }
    if cut > 0 {
        return Err(Error::LogBranchFailure(
            "defective matrix with an eigenvalue on the negative real axis".into(),
        ));
    }
    Ok(MatrixLog {
        value: log_iss(m)?,
        method: LogMethod::InverseScalingSquaring,
        on_branch_cut: 0,
    })
}

fn principal_ln(l: Complex64) -> Complex64 {
    if on_cut(l) {
        Complex64::new(l.norm().ln(), std::f64::consts::PI)
    } else {
        l.ln()
    }
}

/// Eigenvectors of an upper-triangular matrix by back substitution, or `None`
/// when a repeated eigenvalue is defective.
fn triangular_eigenvectors(t: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let n = t.nrows();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let mut x = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let lk = t[(k, k)];
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * x[(j, k)];
            }
            let gap = t[(i, i)] - lk;
            if gap.norm() <= 1e-10 * (1.0 + lk.norm()) {
                if s.norm() <= 1e-10 * scale {
                    x[(i, k)] = Complex64::new(0.0, 0.0);
                } else {
                    return None;
                }
            } else {
                x[(i, k)] = -s / gap;
            }
        }
    }
    Some(x)
}

/// Denman–Beavers iteration for the principal square root.
fn sqrtm_db(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse();
        let zi = z.clone().try_inverse();
        let (Some(yi), Some(zi)) = (yi, zi) else {
            return Err(Error::LogBranchFailure("square root iteration hit a singular iterate".into()));
        };
        let y_next = (&y + zi).scale(0.5);
        let z_next = (&z + yi).scale(0.5);
        let delta = (&y_next - &y).norm() / y_next.norm().max(f64::MIN_POSITIVE);
        y = y_next;
        z = z_next;
        if delta < 1e-15 {
            return Ok(y);
        }
    }
    // slow (defective) convergence still leaves a usable iterate if it squares back
    let err = (&y * &y - a).norm() / a.norm().max(f64::MIN_POSITIVE);
    if err < 1e-10 {
        Ok(y)
    } else {
        Err(Error::LogBranchFailure("square root iteration did not converge".into()))
    }
}

/// Inverse scaling and squaring: take square roots until close to the
/// identity, then sum the series of `log(I + E)`.
fn log_iss(m: &CMatrix) -> Result<CMatrix> {
    let n = m.rows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut x = to_na(m);
    let mut k = 0;
    while (&x - &id).norm() > 0.25 {
        if k >= 60 {
            return Err(Error::LogBranchFailure("square roots failed to approach the identity".into()));
        }
        x = sqrtm_db(&x)?;
        k += 1;
    }
    let e = &x - &id;
    let mut power = e.clone();
    let mut sum = DMatrix::<Complex64>::zeros(n, n);
    for j in 1..=80 {
        let term = power.scale(1.0 / j as f64);
        if j % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term.norm() < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
        power = &power * &e;
    }
    Ok(from_na(&sum.scale(2f64.powi(k))))
}

/// Identity-normalized comparison tolerance helper: `|a - b| <= atol + rtol |b|` entrywise.
pub fn all_close(a: &CMatrix, b: &CMatrix, atol: f64, rtol: f64) -> bool {
    a.entries()
        .iter()
        .zip(b.entries())
        .all(|(x, y)| (x - y).norm() <= atol + rtol * y.norm())
}

pub fn identity(n: usize) -> CMatrix {
    Matrix::identity(n)
}

pub fn scale(m: &CMatrix, s: Complex64) -> CMatrix {
    m.scale(&s)
}

pub fn add(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.add(b).expect("compatible shapes")
}

pub fn sub(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.sub(b).expect("compatible shapes")
}

pub fn zero(n: usize) -> CMatrix {
    Matrix::zeros(n, n)
}

/// `true` when every entry is finite.
pub fn is_finite(m: &CMatrix) -> bool {
    m.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    (0..m.rows()).fold(Complex64::zero(), |acc, k| acc + m.get(k, k))
}

pub fn det(m: &CMatrix) -> Complex64 {
    to_na(m).determinant()
}
