//! Monodromy representations on a family of loops and the conjugation check.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::continuation::{continue_along, Continuation, ContinuationOptions, FloatSystem, LocalSystem};
use super::loops::{Loop, LoopKind, StandardLoops};
use crate::algebra::{Matrix, RatFuncMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// One invertible matrix per loop, all loops sharing `base`.
///
/// Convention: continuing the fundamental matrix `Y` along a loop `α` gives
/// `Y·M(α)`. Consequently the loop "`α` then `β`" has monodromy `M(β)·M(α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyRep {
    pub base: Complex64,
    pub loops: Vec<Loop>,
    pub matrices: Vec<CMatrix>,
}

impl MonodromyRep {
    pub fn new(base: Complex64, loops: Vec<Loop>, matrices: Vec<CMatrix>) -> Result<Self> {
        if loops.len() != matrices.len() {
            return Err(Error::Shape(format!("{} loops but {} matrices", loops.len(), matrices.len())));
        }
        let n = matrices.first().map_or(0, Matrix::rows);
        for (k, m) in matrices.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Shape(format!("matrix {} is not {n}x{n}", k + 1)));
            }
            let d = linalg::det(m).norm();
            let scale: f64 = (0..n)
                .map(|r| m.row(r).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
                .product();
            if !(d > 1e-12 * scale) {
                return Err(Error::InvalidInput(format!("matrix {} is not invertible", k + 1)));
            }
        }
        for l in &loops {
            if (l.base - base).norm() > 1e-12 * (1.0 + base.norm()) {
                return Err(Error::InvalidInput("loop base differs from representation base".into()));
            }
        }
        Ok(MonodromyRep { base, loops, matrices })
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::rows)
    }

    /// Monodromy of the concatenation of the loops with the given indices,
    /// traversed in that order.
    pub fn compose(&self, order: &[usize]) -> CMatrix {
        order.iter().fold(linalg::identity(self.dim()), |acc, &k| linalg::mul(&self.matrices[k], &acc))
    }
}

/// Monodromy along every loop, computed in parallel.
pub fn monodromy_rep_with<S: LocalSystem + ?Sized>(sys: &S, loops: &[Loop], opts: &ContinuationOptions) -> Result<(MonodromyRep, f64)> {
    let base = loops
        .first()
        .map(|l| l.base)
        .ok_or_else(|| Error::InvalidInput("no loops given".into()))?;
    let results: Vec<Continuation> = loops
        .par_iter()
        .map(|l| continue_along(sys, l, opts))
        .collect::<Result<_>>()?;
    let err = results.iter().map(|c| c.error_estimate).fold(0.0, f64::max);
    let rep = MonodromyRep::new(base, loops.to_vec(), results.into_iter().map(|c| c.matrix).collect())?;
    Ok((rep, err))
}

pub fn monodromy_rep(a: &RatFuncMatrix, loops: &[Loop], opts: &ContinuationOptions) -> Result<MonodromyRep> {
    Ok(monodromy_rep_with(&FloatSystem::new(a)?, loops, opts)?.0)
}

/// Indices of a standard family ordered by the argument of their ray from
/// the base, increasing. Traversing the positively oriented lassos in this
/// order is homotopic to one large counterclockwise circle around all poles.
pub fn infinity_order(poles: &[Complex64], base: f64) -> Vec<usize> {
    let a = Complex64::new(base, 0.0);
    let mut idx: Vec<usize> = (0..poles.len()).collect();
    idx.sort_by(|&x, &y| (poles[x] - a).arg().total_cmp(&(poles[y] - a).arg()));
    idx
}

/// Monodromy of the large counterclockwise circle around every finite pole,
/// i.e. the inverse of the monodromy at infinity. Mirror loops are inverted
/// first so that every factor is positively oriented.
pub fn product_around_all(rep: &MonodromyRep, family: &StandardLoops, poles: &[Complex64]) -> Result<CMatrix> {
    let mut acc = linalg::identity(rep.dim());
    for k in infinity_order(poles, family.base) {
        let m = match family.kinds[k] {
            LoopKind::Lasso => rep.matrices[k].clone(),
            LoopKind::Mirror(_) => linalg::inverse(&rep.matrices[k])
                .ok_or_else(|| Error::InvalidInput(format!("matrix {} is not invertible", k + 1)))?,
        };
        acc = linalg::mul(&m, &acc);
    }
    Ok(acc)
}

/// Per-loop deviations `|μ_{τ.A}(τ∘α) - conj(μ_A(α))|_max`.
#[derive(Clone, Debug)]
pub struct ConjugationReport {
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub rep: MonodromyRep,
    pub conjugate_rep: MonodromyRep,
}

fn conj_closed(poles: &[Complex64]) -> bool {
    poles.iter().all(|p| {
        let scale = 1e-9 * (1.0 + p.norm());
        poles.iter().any(|q| (q - p.conj()).norm() <= scale)
    })
}

/// Check `μ_{τ.A}(τ∘α) = conj(μ_A(α))` on every loop.
pub fn check_conjugation_formula(a: &RatFuncMatrix, loops: &[Loop], opts: &ContinuationOptions) -> Result<ConjugationReport> {
    let sys = FloatSystem::new(a)?;
    if !conj_closed(sys.poles()) {
        return Err(Error::Precondition("pole set is not closed under conjugation".into()));
    }
    if loops.iter().any(|l| l.base.im != 0.0) {
        return Err(Error::Precondition("base point must be real".into()));
    }
    let conj_sys = FloatSystem::new(&a.conjugate())?;
    let mirrored: Vec<Loop> = loops.iter().map(Loop::conj).collect();
    let (rep, _) = monodromy_rep_with(&sys, loops, opts)?;
    let (conjugate_rep, _) = monodromy_rep_with(&conj_sys, &mirrored, opts)?;
    let deviations: Vec<f64> = rep
        .matrices
        .iter()
        .zip(&conjugate_rep.matrices)
        .map(|(m, mc)| linalg::max_abs_diff(mc, &linalg::conj(m)))
        .collect();
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(ConjugationReport {
        deviations,
        max_deviation,
        rep,
        conjugate_rep,
    })
}

/// Wire form of a complex matrix: rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    Matrix::from_rows(
        rows.iter()
            .map(|row| row.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
struct LoopJson {
    base: [f64; 2],
    vertices: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    base: [f64; 2],
    loops: Vec<LoopJson>,
    matrices: Vec<MatrixJson>,
}

fn loop_to_json(l: &Loop) -> LoopJson {
    LoopJson {
        base: [l.base.re, l.base.im],
        vertices: l.vertices.iter().map(|v| [v.re, v.im]).collect(),
    }
}

fn loop_from_json(l: LoopJson) -> Result<Loop> {
    Loop::new(
        Complex64::new(l.base[0], l.base[1]),
        l.vertices.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
    )
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Loops file: a JSON array of `{"base": [re, im], "vertices": [[re, im], ...]}`.
pub fn loops_to_json(loops: &[Loop]) -> String {
    serde_json::to_string_pretty(&loops.iter().map(loop_to_json).collect::<Vec<_>>()).expect("serializable")
}

pub fn loops_from_json(text: &str) -> Result<Vec<Loop>> {
    let raw: Vec<LoopJson> = serde_json::from_str(text).map_err(json_err)?;
    if raw.is_empty() {
        return Err(Error::InvalidInput("loops file lists no loops".into()));
    }
    raw.into_iter().map(loop_from_json).collect()
}

impl MonodromyRep {
    pub fn to_json(&self) -> String {
        let r = RepJson {
            base: [self.base.re, self.base.im],
            loops: self.loops.iter().map(loop_to_json).collect(),
            matrices: self.matrices.iter().map(matrix_to_json).collect(),
        };
        serde_json::to_string_pretty(&r).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: RepJson = serde_json::from_str(text).map_err(json_err)?;
        let loops = r.loops.into_iter().map(loop_from_json).collect::<Result<Vec<_>>>()?;
        let matrices = r.matrices.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        MonodromyRep::new(Complex64::new(r.base[0], r.base[1]), loops, matrices)
    }
}
