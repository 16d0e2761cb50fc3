//! Target monodromy data and its conjugate-symmetric completion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::monodromy::rep::{matrix_from_json, matrix_to_json, MatrixJson};
use crate::monodromy::{standard_loops, MonodromyRep, StandardLoops};

/// Generators `C_1 … C_r` prescribed at points `s_1 … s_r` in the upper half plane.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetData {
    pub generators: Vec<CMatrix>,
    pub points: Vec<Complex64>,
    /// Real base point; the standard default when absent.
    pub base: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TargetJson {
    generators: Vec<MatrixJson>,
    points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<f64>,
}

impl TargetData {
    pub fn new(generators: Vec<CMatrix>, points: Vec<Complex64>, base: Option<f64>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("no generators given".into()));
        }
        if generators.len() != points.len() {
            return Err(Error::Shape(format!("{} generators but {} points", generators.len(), points.len())));
        }
        let n = generators[0].rows();
        for (k, g) in generators.iter().enumerate() {
            if g.rows() != n || g.cols() != n || n == 0 {
                return Err(Error::Shape(format!("generator {} is not {n}x{n}", k + 1)));
            }
            if !linalg::is_finite(g) || linalg::inverse(g).is_none() {
                return Err(Error::InvalidInput(format!("generator {} is not invertible", k + 1)));
            }
        }
        for (k, p) in points.iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite() && p.im > 0.0) {
                return Err(Error::InvalidInput(format!("point {} is not in the open upper half plane", k + 1)));
            }
            if points[..k].contains(p) {
                return Err(Error::InvalidInput(format!("point {} is repeated", k + 1)));
            }
        }
        if let Some(b) = base {
            if !b.is_finite() {
                return Err(Error::InvalidInput("base point must be finite".into()));
            }
        }
        Ok(TargetData { generators, points, base })
    }

    pub fn dim(&self) -> usize {
        self.generators[0].rows()
    }

    /// `{"generators": [[[[re, im], ...], ...], ...], "points": [[re, im], ...], "base": x}`
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TargetJson = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let generators = raw.generators.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        let points = raw.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        TargetData::new(generators, points, raw.base)
    }

    pub fn to_json(&self) -> String {
        let raw = TargetJson {
            generators: self.generators.iter().map(matrix_to_json).collect(),
            points: self.points.iter().map(|p| [p.re, p.im]).collect(),
            base: self.base,
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

/// Pole set `{s_1, …, s_r, τ(s_1), …, τ(s_r)}` with its standard loops and
/// the targets `(C_1, …, C_r, conj(C_1), …, conj(C_r))` on those loops.
#[derive(Clone, Debug)]
pub struct Symmetrized {
    pub poles: Vec<Complex64>,
    pub family: StandardLoops,
    pub targets: MonodromyRep,
}

impl Symmetrized {
    /// Number of free (upper half plane) poles.
    pub fn free_count(&self) -> usize {
        self.poles.len() / 2
    }
}

pub fn symmetrize_targets(t: &TargetData) -> Result<Symmetrized> {
    let mut poles = t.points.clone();
    poles.extend(t.points.iter().map(|p| p.conj()));
    let family = standard_loops(&poles, t.base)?;
    let mut matrices = t.generators.clone();
    matrices.extend(t.generators.iter().map(linalg::conj));
    let targets = MonodromyRep::new(Complex64::new(family.base, 0.0), family.loops.clone(), matrices)?;
    Ok(Symmetrized { poles, family, targets })
}
