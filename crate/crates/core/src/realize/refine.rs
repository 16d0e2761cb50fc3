//! Residue ansatz and Gauss–Newton refinement of a Fuchsian system.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::system::FuchsianSystem;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, LogMethod};
use crate::monodromy::{monodromy_rep_with, ContinuationOptions, MonodromyRep};

/// How the logarithm at one pole was taken.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchChoice {
    pub pole: usize,
    pub method: LogMethod,
    /// Eigenvalues that sat on the negative real axis (argument `+π` chosen).
    pub on_branch_cut: usize,
    /// Partner whose residue was conjugated instead of taking a logarithm.
    pub mirrored_from: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Ansatz {
    pub system: FuchsianSystem,
    pub branches: Vec<BranchChoice>,
}

/// `B_k = ±log(M_k) / (2πi)`, the sign given by the winding of loop `k`
/// around its pole; mirrored poles take the conjugate of their partner.
pub fn residue_ansatz(poles: &[Complex64], targets: &MonodromyRep) -> Result<Ansatz> {
    if poles.len() != targets.matrices.len() {
        return Err(Error::Shape(format!("{} poles but {} targets", poles.len(), targets.matrices.len())));
    }
    let n = targets.dim();
    let placeholder = FuchsianSystem::new(poles.to_vec(), vec![linalg::zero(n); poles.len()])?;
    let slaved = placeholder.slaved();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut residues = vec![linalg::zero(n); poles.len()];
    let mut branches = Vec::with_capacity(poles.len());
    for k in 0..poles.len() {
        let winding = targets.loops[k].winding_number(poles[k]);
        if winding.abs() != 1 {
            return Err(Error::InvalidInput(format!("loop {} winds {winding} times around its pole", k + 1)));
        }
        if let Some(j) = slaved[k] {
            branches.push(BranchChoice {
                pole: k,
                method: LogMethod::Eigen,
                on_branch_cut: 0,
                mirrored_from: Some(j),
            });
            continue;
        }
        let log = linalg::logm(&targets.matrices[k])?;
        residues[k] = linalg::scale(&log.value, winding as f64 / two_pi_i);
        branches.push(BranchChoice {
            pole: k,
            method: log.method,
            on_branch_cut: log.on_branch_cut,
            mirrored_from: None,
        });
    }
    let mut system = FuchsianSystem::new(poles.to_vec(), residues)?;
    system.enforce_symmetry();
    Ok(Ansatz { system, branches })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineOptions {
    /// Target for the largest entrywise monodromy residual.
    pub tol: f64,
    pub max_iter: usize,
    pub continuation: ContinuationOptions,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            tol: 1e-10,
            max_iter: 25,
            continuation: ContinuationOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Refinement {
    pub system: FuchsianSystem,
    pub iterations: usize,
    /// Final `max |μ(α_k) - C_k|` over the free loops.
    pub residual: f64,
    /// Residual before each step and after the last.
    pub history: Vec<f64>,
}

const MAX_HALVINGS: usize = 50;

struct Problem<'a> {
    template: &'a FuchsianSystem,
    targets: &'a MonodromyRep,
    free: Vec<usize>,
    opts: ContinuationOptions,
}

impl Problem<'_> {
    fn n(&self) -> usize {
        self.template.dim()
    }

    fn params(&self, sys: &FuchsianSystem) -> Vec<f64> {
        let mut x = Vec::with_capacity(2 * self.n() * self.n() * self.free.len());
        for &k in &self.free {
            for z in sys.residues()[k].entries() {
                x.push(z.re);
                x.push(z.im);
            }
        }
        x
    }

    fn system(&self, x: &[f64]) -> FuchsianSystem {
        let n = self.n();
        let mut sys = self.template.clone();
        for (slot, &k) in self.free.iter().enumerate() {
            let off = slot * 2 * n * n;
            let b = CMatrix::from_fn(n, n, |r, c| {
                let i = off + 2 * (r * n + c);
                Complex64::new(x[i], x[i + 1])
            });
            sys.set_residue(k, b);
        }
        sys.enforce_symmetry();
        sys
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let sys = self.system(x);
        let loops: Vec<_> = self.free.iter().map(|&k| self.targets.loops[k].clone()).collect();
        let (rep, _) = monodromy_rep_with(&sys, &loops, &self.opts)?;
        let mut f = Vec::with_capacity(x.len());
        for (m, &k) in rep.matrices.iter().zip(&self.free) {
            for (a, b) in m.entries().iter().zip(self.targets.matrices[k].entries()) {
                let d = a - b;
                f.push(d.re);
                f.push(d.im);
            }
        }
        Ok(f)
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn two_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gauss–Newton on the free residues so that the monodromy of every loop
/// around a free pole matches its target. Mirrored residues stay the exact
/// conjugates of their partners at every iterate.
pub fn refine(system: &FuchsianSystem, targets: &MonodromyRep, opts: &RefineOptions) -> Result<Refinement> {
    opts.continuation.validate()?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("Newton tolerance must be positive".into()));
    }
    if targets.matrices.len() != system.poles().len() || targets.dim() != system.dim() {
        return Err(Error::Shape("targets do not match the system".into()));
    }
    let free: Vec<usize> = system
        .slaved()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(k, _)| k)
        .collect();
    let problem = Problem {
        template: system,
        targets,
        free,
        opts: opts.continuation,
    };
    let mut x = problem.params(system);
    let mut f = problem.residual(&x)?;
    let mut res = max_norm(&f);
    let mut history = vec![res];
    let mut iterations = 0;
    while res > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NoConvergence { iterations, residual: res });
        }
        let cols: Vec<Vec<f64>> = (0..x.len())
            .into_par_iter()
            .map(|j| {
                let h = 1e-6 * (1.0 + x[j].abs());
                let mut xp = x.clone();
                xp[j] += h;
                let fp = problem.residual(&xp)?;
                Ok(fp.iter().zip(&f).map(|(a, b)| (a - b) / h).collect())
            })
            .collect::<Result<_>>()?;
        let jac = DMatrix::from_fn(f.len(), x.len(), |r, c| cols[c][r]);
        let rhs = DVector::from_iterator(f.len(), f.iter().map(|v| -v));
        let svd = jac.svd(true, true);
        let eps = 1e-13 * svd.singular_values.max();
        let delta = svd
            .solve(&rhs, eps)
            .map_err(|_| Error::NoConvergence { iterations, residual: res })?;

        let base_norm = two_norm(&f);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + lambda * d).collect();
            match problem.residual(&trial) {
                Ok(ft) if two_norm(&ft) < base_norm => {
                    accepted = Some((trial, ft));
                    break;
                }
                // a step that leaves the admissible region counts as a rejection
                Ok(_) | Err(Error::PrecisionLoss { .. }) | Err(Error::OutOfDisk { .. }) => lambda *= 0.5,
                Err(e) => return Err(e),
            }
        }
        let Some((xn, fnew)) = accepted else {
            return Err(Error::NoConvergence { iterations, residual: res });
        };
        x = xn;
        f = fnew;
        res = max_norm(&f);
        history.push(res);
        iterations += 1;
    }
    Ok(Refinement {
        system: problem.system(&x),
        iterations,
        residual: res,
        history,
    })
}
