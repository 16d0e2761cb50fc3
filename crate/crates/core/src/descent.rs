//! Gauge equivalence, descent from C(z) to R(z), and the regular
//! representation `a + b·i ↦ [[a, -b], [b, a]]` with respect to the basis `(1, i)`.

use num_complex::Complex64;

use crate::algebra::{numeric, ExactMatrix, Field, GaussianRational, Matrix, Poly, RatFuncMatrix, RationalFunction};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::monodromy::{monodromy_rep, standard_loops, ContinuationOptions};

/// An invertible matrix over Q(i)(z).
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform {
    c: RatFuncMatrix,
    c_inv: RatFuncMatrix,
}

impl GaugeTransform {
    pub fn new(c: RatFuncMatrix) -> Result<Self> {
        let c_inv = c.inverse()?.ok_or(Error::SingularGauge)?;
        Ok(GaugeTransform { c, c_inv })
    }

    pub fn constant(c: &ExactMatrix) -> Result<Self> {
        Self::new(c.to_ratfunc())
    }

    pub fn matrix(&self) -> &RatFuncMatrix {
        &self.c
    }

    pub fn inverse_matrix(&self) -> &RatFuncMatrix {
        &self.c_inv
    }

    /// `C·C'`, which acts as "first `C`, then `C'`".
    pub fn then(&self, other: &GaugeTransform) -> Result<GaugeTransform> {
        GaugeTransform::new(self.c.mul(&other.c)?)
    }
}

/// `B = C⁻¹·A·C − C⁻¹·∂C`; a fundamental matrix of `B` is `C⁻¹·W`.
pub fn gauge_transform(a: &RatFuncMatrix, c: &GaugeTransform) -> Result<RatFuncMatrix> {
    if !a.is_square() || a.rows() != c.c.rows() {
        return Err(Error::Shape(format!(
            "system is {}x{}, gauge is {}x{}",
            a.rows(),
            a.cols(),
            c.c.rows(),
            c.c.cols()
        )));
    }
    let conj = c.c_inv.mul(a)?.mul(&c.c)?;
    let drift = c.c_inv.mul(&c.c.derivative())?;
    conj.sub(&drift)
}

/// Exact test of `gauge_transform(A, C) = B`.
pub fn check_equivalence(a: &RatFuncMatrix, b: &RatFuncMatrix, c: &GaugeTransform) -> Result<bool> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Shape("systems have different shapes".into()));
    }
    Ok(gauge_transform(a, c)? == *b)
}

/// Search for an invertible constant `C` with `A·C = C·B`, which for constant
/// gauges is exactly `C⁻¹AC − C⁻¹∂C = B`.
pub fn find_constant_gauge(a: &RatFuncMatrix, b: &RatFuncMatrix) -> Result<Option<ExactMatrix>> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Shape("constant gauge search needs two square systems of one size".into()));
    }
    let n = a.rows();
    if a == b {
        return Ok(Some(Matrix::identity(n)));
    }
    let basis = commutant_basis(a, b);
    if basis.is_empty() {
        return Ok(None);
    }
    let to_matrix = |v: &[GaussianRational]| Matrix::from_fn(n, n, |r, c| v[r * n + c].clone());
    // single basis elements first (often permutation-like), then generic combinations
    for v in &basis {
        let m = to_matrix(v);
        if !m.det()?.is_zero() {
            return Ok(Some(m));
        }
    }
    for t in 0..(2 * n * n + 2) as i64 {
        let mut v = vec![GaussianRational::zero(); n * n];
        let mut w = GaussianRational::one();
        for b in &basis {
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.add_ref(&y.mul_ref(&w));
            }
            w = w.mul_ref(&GaussianRational::from_integer(t + 1));
        }
        let m = to_matrix(&v);
        if !m.det()?.is_zero() {
            return Ok(Some(m));
        }
    }
    // a nonempty solution space with no invertible element in a generic
    // family of this size has no invertible element at all
    Ok(None)
}

/// Basis (as row-major vectors) of `{C constant : A·C − C·B = 0}`.
fn commutant_basis(a: &RatFuncMatrix, b: &RatFuncMatrix) -> Vec<Vec<GaussianRational>> {
    let n = a.rows();
    let mut den = Poly::one();
    for f in a.entries().iter().chain(b.entries()) {
        let g = den.gcd(f.denominator());
        den = den.mul(&f.denominator().div_rem(&g).0);
    }
    let den = RationalFunction::from_poly(den);
    // coefficient of unknown C[k][l] in equation (r, c), cleared to a polynomial
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let mut polys: Vec<Poly> = vec![Poly::zero(); n * n];
            for k in 0..n {
                // (A·C)[r][c] = Σ_k A[r][k] C[k][c]
                let t = a.get(r, k).mul_ref(&den);
                polys[k * n + c] = polys[k * n + c].add(t.numerator());
                // (C·B)[r][c] = Σ_l C[r][l] B[l][c]
                let t = b.get(k, c).mul_ref(&den);
                polys[r * n + k] = polys[r * n + k].sub(t.numerator());
            }
            let deg = polys.iter().filter_map(Poly::degree).max();
            if let Some(deg) = deg {
                for d in 0..=deg {
                    let row: Vec<GaussianRational> = polys.iter().map(|p| p.coeff(d)).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        // every constant matrix works; return the standard basis
        return (0..n * n)
            .map(|j| (0..n * n).map(|k| if j == k { GaussianRational::one() } else { GaussianRational::zero() }).collect())
            .collect();
    }
    Matrix::from_rows(rows).expect("consistent rows").nullspace()
}

/// A Galois 1-cocycle for `Gal(C/R)`: the image `χ` of `τ`, with `χ·conj(χ) = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    chi: ExactMatrix,
}

impl Cocycle {
    pub fn new(chi: ExactMatrix) -> Result<Self> {
        if !chi.is_square() {
            return Err(Error::Shape("cocycle matrix must be square".into()));
        }
        let n = chi.rows();
        if chi.mul(&chi.conj())? != Matrix::identity(n) {
            return Err(Error::Precondition("cocycle condition chi * conj(chi) = I fails".into()));
        }
        Ok(Cocycle { chi })
    }

    pub fn trivial(n: usize) -> Self {
        Cocycle {
            chi: Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.chi
    }

    pub fn is_trivial(&self) -> bool {
        self.chi == Matrix::identity(self.chi.rows())
    }

    /// An invertible `P` with `χ = P·conj(P)⁻¹`, found as `P = M + χ·conj(M)`
    /// (Hilbert 90) for the first suitable constant `M` in a fixed sequence.
    pub fn splitting(&self) -> Result<ExactMatrix> {
        let n = self.chi.rows();
        let candidates = splitting_candidates(n);
        for m in candidates {
            let p = m.add(&self.chi.mul(&m.conj())?)?;
            if !p.det()?.is_zero() {
                return Ok(p);
            }
        }
        Err(Error::NotDescendable("no splitting of the cocycle found".into()))
    }
}

fn splitting_candidates(n: usize) -> Vec<ExactMatrix> {
    let id: ExactMatrix = Matrix::identity(n);
    let mut out = vec![id.clone(), id.scale(&GaussianRational::i())];
    // generic integer matrices, deterministic
    for t in 1..=6i64 {
        let m = Matrix::from_fn(n, n, |r, c| {
            let k = (r * n + c) as i64;
            GaussianRational::from_parts((k * k + t) % 7 - 3, 1, (k * t + 1) % 5 - 2, 1)
        });
        out.push(m);
    }
    out
}

fn ensure_even_blocks<T: Field>(m: &Matrix<T>) -> Result<()> {
    if !m.rows().is_multiple_of(2) || !m.cols().is_multiple_of(2) {
        return Err(Error::Shape("block image must have even dimensions".into()));
    }
    Ok(())
}

/// Interleaved block map of rational-function matrices: entry `(r, c)` with
/// `a + b·i` (`a, b` real) becomes rows `2r, 2r+1`, columns `2c, 2c+1`
/// holding `[[a, -b], [b, a]]`.
pub fn mu_block(a: &RatFuncMatrix) -> RatFuncMatrix {
    let mut out = Matrix::zeros(2 * a.rows(), 2 * a.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let (re, im) = a.get(r, c).real_imag();
            out.set(2 * r, 2 * c, re.clone());
            out.set(2 * r, 2 * c + 1, im.neg_ref());
            out.set(2 * r + 1, 2 * c, im);
            out.set(2 * r + 1, 2 * c + 1, re);
        }
    }
    out
}

/// The same block map on exact constants.
pub fn mu_block_exact(a: &ExactMatrix) -> ExactMatrix {
    Matrix::from_fn(2 * a.rows(), 2 * a.cols(), |r, c| {
        let x = a.get(r / 2, c / 2);
        let re = GaussianRational::real(x.re().clone());
        let im = GaussianRational::real(x.im().clone());
        match (r % 2, c % 2) {
            (0, 0) | (1, 1) => re,
            (0, 1) => im.neg_ref(),
            _ => im,
        }
    })
}

/// The same block map on complex numbers.
pub fn mu_block_complex(m: &CMatrix) -> CMatrix {
    mu_pair_block(m, &linalg::conj(m))
}

/// Block image of a pair: with `X` the monodromy of a complex system along
/// `α` and `Z = conj(μ(τ∘α))`, the block-mapped fundamental matrix continues
/// with `[[(X+Z)/2, (Z−X)/(2i)], [(X−Z)/(2i), (X+Z)/2]]` per entry. For
/// `Z = conj(X)` this is the ordinary block map of `X`.
pub fn mu_pair_block(x: &CMatrix, z: &CMatrix) -> CMatrix {
    let two_i = Complex64::new(0.0, 2.0);
    Matrix::from_fn(2 * x.rows(), 2 * x.cols(), |r, c| {
        let (a, b) = (*x.get(r / 2, c / 2), *z.get(r / 2, c / 2));
        match (r % 2, c % 2) {
            (0, 0) | (1, 1) => (a + b) / 2.0,
            (0, 1) => (b - a) / two_i,
            _ => (a - b) / two_i,
        }
    })
}

/// Inverse of the block map on matrices that have the block shape.
pub fn mu_unblock(m: &RatFuncMatrix) -> Result<RatFuncMatrix> {
    ensure_even_blocks(m)?;
    let i = RationalFunction::constant(GaussianRational::i());
    let mut out = Matrix::zeros(m.rows() / 2, m.cols() / 2);
    for r in 0..out.rows() {
        for c in 0..out.cols() {
            let a = m.get(2 * r, 2 * c);
            let b = m.get(2 * r + 1, 2 * c);
            if m.get(2 * r + 1, 2 * c + 1) != a || m.get(2 * r, 2 * c + 1) != &b.neg_ref() {
                return Err(Error::NotDescendable(format!("block ({}, {}) lacks the [[a,-b],[b,a]] shape", r + 1, c + 1)));
            }
            out.set(r, c, a.add_ref(&i.mul_ref(b)));
        }
    }
    Ok(out)
}

/// Output of [`mu_descend`].
#[derive(Clone, Debug)]
pub struct Descended {
    /// Representative actually block-mapped (`A` itself for trivial `χ`).
    pub representative: RatFuncMatrix,
    /// `P` with `χ = P·conj(P)⁻¹` (identity for trivial `χ`).
    pub splitting: ExactMatrix,
    /// The real `2n x 2n` system.
    pub real_system: RatFuncMatrix,
}

/// Descend `A` to a real system of twice the size.
pub fn mu_descend(a: &RatFuncMatrix, chi: &Cocycle) -> Result<Descended> {
    if !a.is_square() {
        return Err(Error::Shape(format!("system matrix is {}x{}", a.rows(), a.cols())));
    }
    if chi.matrix().rows() != a.rows() {
        return Err(Error::Shape("cocycle and system sizes differ".into()));
    }
    let (representative, splitting) = if chi.is_trivial() {
        (a.clone(), Matrix::identity(a.rows()))
    } else {
        let p = chi.splitting()?;
        let g = GaugeTransform::constant(&p)?;
        (gauge_transform(a, &g)?, p)
    };
    let real_system = mu_block(&representative);
    // realness certificate: exact realness plus block consistency
    if !real_system.is_real() || mu_unblock(&real_system)? != representative {
        return Err(Error::NotDescendable("block image is not real".into()));
    }
    Ok(Descended {
        representative,
        splitting,
        real_system,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    TriviallyReal,
    ConstantGauge,
    NotByConstantGauge,
}

impl Verdict {
    pub fn describe(&self) -> &'static str {
        match self {
            Verdict::TriviallyReal => "descends: trivially real",
            Verdict::ConstantGauge => "descendable via constant gauge",
            Verdict::NotByConstantGauge => "not descendable by constant gauge",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DescentReport {
    pub verdict: Verdict,
    /// Constant `C` with `C⁻¹·A·C = τ.A`.
    pub certificate: Option<ExactMatrix>,
    /// Whether the exact identity `gauge_transform(A, C) = τ.A` was re-verified.
    pub certificate_verified: bool,
    /// `max_α |μ_{τ.A}(α) − C⁻¹·μ_A(α)·C|` on standard loops; `None` if no poles.
    pub monodromy_deviation: Option<f64>,
    pub loops_checked: usize,
}

impl DescentReport {
    pub fn descends(&self) -> bool {
        self.verdict != Verdict::NotByConstantGauge
    }
}

/// Decide whether `A` is equivalent to `τ.A` by a constant gauge and
/// cross-check the certificate on monodromy.
pub fn descent_report(a: &RatFuncMatrix, opts: &ContinuationOptions) -> Result<DescentReport> {
    if !a.is_square() {
        return Err(Error::Shape(format!("system matrix is {}x{}", a.rows(), a.cols())));
    }
    let ta = a.conjugate();
    let (verdict, certificate) = if ta == *a {
        (Verdict::TriviallyReal, Some(Matrix::identity(a.rows())))
    } else {
        match find_constant_gauge(a, &ta)? {
            Some(c) => (Verdict::ConstantGauge, Some(c)),
            None => (Verdict::NotByConstantGauge, None),
        }
    };
    let mut report = DescentReport {
        verdict,
        certificate: certificate.clone(),
        certificate_verified: false,
        monodromy_deviation: None,
        loops_checked: 0,
    };
    let Some(c) = certificate else {
        return Ok(report);
    };
    report.certificate_verified = check_equivalence(a, &ta, &GaugeTransform::constant(&c)?)?;

    let mut poles = numeric::finite_poles(a);
    for p in numeric::finite_poles(&ta) {
        if !poles.iter().any(|q| (q - p).norm() <= 1e-9 * (1.0 + p.norm())) {
            poles.push(p);
        }
    }
    if poles.is_empty() {
        return Ok(report);
    }
    let family = standard_loops(&poles, None)?;
    let rep_a = monodromy_rep(a, &family.loops, opts)?;
    let rep_ta = monodromy_rep(&ta, &family.loops, opts)?;
    let cf = c.map(GaussianRational::to_complex);
    let cf_inv = linalg::inverse(&cf).ok_or(Error::SingularGauge)?;
    let dev = rep_a
        .matrices
        .iter()
        .zip(&rep_ta.matrices)
        .map(|(ma, mt)| linalg::max_abs_diff(mt, &linalg::mul(&linalg::mul(&cf_inv, ma), &cf)))
        .fold(0.0, f64::max);
    report.monodromy_deviation = Some(dev);
    report.loops_checked = family.loops.len();
    Ok(report)
}
