//! End-to-end realization: targets to a complex Fuchsian system to a real system.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::refine::{refine, residue_ansatz, BranchChoice, RefineOptions};
use super::system::{FuchsianSystem, RENDER_DIGITS};
use super::targets::{symmetrize_targets, Symmetrized, TargetData};
use crate::algebra::RatFuncMatrix;
use crate::descent::{descent_report, mu_descend, mu_pair_block, Cocycle, DescentReport};
use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::monodromy::loops::conjugate_partner;
use crate::monodromy::{check_conjugation_formula, monodromy_rep};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineOptions {
    pub refine: RefineOptions,
    /// Significant digits kept when rendering residues and poles exactly.
    pub digits: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            refine: RefineOptions::default(),
            digits: RENDER_DIGITS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub iterations: usize,
    pub newton_history: Vec<f64>,
    /// `max |μ(α_k) - C_k|` per loop, recomputed on the exact rendered system.
    pub monodromy_residuals: Vec<f64>,
    /// `max |μ_{τ.A}(τ∘α) - conj(μ_A(α))|` over the standard loops.
    pub conjugation_deviation: f64,
    pub symmetry_defect: f64,
    /// Distance of `±tr(B_k) - log det(C_k)/(2πi)` from the nearest integer.
    pub trace_defects: Vec<f64>,
    pub branches: Vec<BranchChoice>,
    pub descent: DescentReport,
    /// Deviation of the real system's monodromy from the block image of the
    /// targets, per loop.
    pub real_block_residuals: Vec<f64>,
}

impl PipelineReport {
    pub fn max_monodromy_residual(&self) -> f64 {
        self.monodromy_residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_real_block_residual(&self) -> f64 {
        self.real_block_residuals.iter().cloned().fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub targets: Symmetrized,
    pub system: FuchsianSystem,
    /// Exact complex system over Q(i)(z).
    pub complex: RatFuncMatrix,
    /// Exact real system of twice the size.
    pub real: RatFuncMatrix,
    pub report: PipelineReport,
}

/// Block image expected for the real system on loop `k`: built from the
/// target on `k` and the conjugate of the target on its mirror loop.
pub fn expected_block_image(s: &Symmetrized, k: usize) -> CMatrix {
    let mirror = conjugate_partner(&s.poles, k).unwrap_or(k);
    mu_pair_block(&s.targets.matrices[k], &linalg::conj(&s.targets.matrices[mirror]))
}

fn trace_defect(b: &CMatrix, target: &CMatrix, winding: i64) -> f64 {
    let d = linalg::trace(b) * winding as f64 - linalg::det(target).ln() / Complex64::new(0.0, 2.0 * PI);
    Complex64::new(d.re - d.re.round(), d.im).norm()
}

pub fn realize_and_descend(t: &TargetData, opts: &PipelineOptions) -> Result<Realization> {
    let s = symmetrize_targets(t).map_err(|e| e.in_stage("symmetrize"))?;
    let ansatz = residue_ansatz(&s.poles, &s.targets).map_err(|e| e.in_stage("ansatz"))?;
    let refined = refine(&ansatz.system, &s.targets, &opts.refine).map_err(|e| e.in_stage("refine"))?;
    let system = refined.system;
    let complex = system.to_exact(opts.digits).map_err(|e| e.in_stage("render"))?;

    let cont = &opts.refine.continuation;
    let verify = |e: crate::Error| e.in_stage("verify");
    let rep = monodromy_rep(&complex, &s.family.loops, cont).map_err(verify)?;
    let monodromy_residuals = rep
        .matrices
        .iter()
        .zip(&s.targets.matrices)
        .map(|(m, c)| linalg::max_abs_diff(m, c))
        .collect();
    let conjugation = check_conjugation_formula(&complex, &s.family.loops, cont).map_err(verify)?;
    let trace_defects = (0..s.poles.len())
        .map(|k| {
            let w = s.family.loops[k].winding_number(s.poles[k]);
            trace_defect(&system.residues()[k], &s.targets.matrices[k], w)
        })
        .collect();

    let descent = descent_report(&complex, cont).map_err(|e| e.in_stage("descent"))?;
    let real = mu_descend(&complex, &Cocycle::trivial(complex.rows()))
        .map_err(|e| e.in_stage("descent"))?
        .real_system;
    let real_rep = monodromy_rep(&real, &s.family.loops, cont).map_err(verify)?;
    let real_block_residuals = real_rep
        .matrices
        .iter()
        .enumerate()
        .map(|(k, m)| linalg::max_abs_diff(m, &expected_block_image(&s, k)))
        .collect();

    let report = PipelineReport {
        iterations: refined.iterations,
        newton_history: refined.history,
        monodromy_residuals,
        conjugation_deviation: conjugation.max_deviation,
        symmetry_defect: system.symmetry_defect().unwrap_or(f64::INFINITY),
        trace_defects,
        branches: ansatz.branches,
        descent,
        real_block_residuals,
    };
    Ok(Realization {
        targets: s,
        system,
        complex,
        real,
        report,
    })
}
