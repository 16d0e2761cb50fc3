//! Analytic continuation of fundamental matrices by repeated re-expansion.

use num_complex::Complex64;

use super::loops::Loop;
use crate::algebra::{numeric, Field, Matrix, RatFuncMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::series::{self, DEFAULT_ORDER, DEFAULT_STEP_FRACTION};

pub const DEFAULT_TOL_MONO: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuationOptions {
    pub order: usize,
    pub step_fraction: f64,
    pub tol_mono: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            order: DEFAULT_ORDER,
            step_fraction: DEFAULT_STEP_FRACTION,
            tol_mono: DEFAULT_TOL_MONO,
        }
    }
}

impl ContinuationOptions {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidInput("series order must be at least 2".into()));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(Error::InvalidInput("step fraction must lie in (0, 1)".into()));
        }
        if !(self.tol_mono > 0.0) {
            return Err(Error::InvalidInput("monodromy tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// A system that can produce float Taylor coefficients of `A` at any ordinary point.
pub trait LocalSystem: Sync {
    fn dim(&self) -> usize;
    /// Finite poles; continuation keeps steps inside pole-free disks.
    fn poles(&self) -> &[Complex64];
    /// `A_0 … A_{order-1}` at `center`.
    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<CMatrix>>;
}

/// Float view of an exact system.
#[derive(Clone, Debug)]
pub struct FloatSystem {
    n: usize,
    /// Per entry: ascending numerator and denominator coefficients.
    entries: Vec<Option<(Vec<Complex64>, Vec<Complex64>)>>,
    poles: Vec<Complex64>,
}

impl FloatSystem {
    pub fn new(a: &RatFuncMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape(format!("system matrix is {}x{}", a.rows(), a.cols())));
        }
        Ok(FloatSystem {
            n: a.rows(),
            entries: a
                .entries()
                .iter()
                .map(|f| if f.is_zero() { None } else { Some(f.to_complex_coeffs()) })
                .collect(),
            poles: numeric::finite_poles(a),
        })
    }
}

fn shift(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut v = coeffs.to_vec();
    let n = v.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = v[j + 1] * c;
            v[j] += t;
        }
    }
    v
}

impl LocalSystem for FloatSystem {
    fn dim(&self) -> usize {
        self.n
    }

    fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<CMatrix>> {
        let mut out = vec![Matrix::zeros(self.n, self.n); order];
        for (idx, e) in self.entries.iter().enumerate() {
            let Some((num, den)) = e else { continue };
            let sn = shift(num, center);
            let sd = shift(den, center);
            let scale: f64 = den.iter().map(|x| x.norm()).sum::<f64>() * center.norm().max(1.0).powi(den.len() as i32);
            if sd[0].norm() <= 64.0 * f64::EPSILON * scale {
                return Err(Error::PoleEvaluation(format!("{}{:+}i is a pole", center.re, center.im)));
            }
            for (k, v) in series::series_div(&sn, &sd, order).into_iter().enumerate() {
                out[k].set(idx / self.n, idx % self.n, v);
            }
        }
        Ok(out)
    }
}

/// Result of continuing along a path.
#[derive(Clone, Debug)]
pub struct Continuation {
    pub matrix: CMatrix,
    /// Estimated absolute error of `matrix`, relative to `max(1, |matrix|)`.
    pub error_estimate: f64,
    pub steps: usize,
}

/// Cap on the local radius when there is no nearby pole, to keep entire
/// coefficients from driving huge steps.
const FAR_RADIUS: f64 = 4.0;

/// Continue the fundamental matrix normalized to `I` at the base along `path`
/// and return `M` with `Y ↦ Y·M`.
pub fn continue_along<S: LocalSystem + ?Sized>(sys: &S, path: &Loop, opts: &ContinuationOptions) -> Result<Continuation> {
    opts.validate()?;
    path.check_closed()?;
    let n = sys.dim();
    let mut w: CMatrix = Matrix::identity(n);
    // (W after the step, local error of the step) for first-order propagation
    let mut local_errors: Vec<(CMatrix, f64)> = Vec::new();
    // fallback bound by products of step norms
    let mut norm_bound = 0.0;
    let mut steps = 0usize;
    for (from, to) in path.segments() {
        let mut pos = from;
        loop {
            let remaining = (to - pos).norm();
            if remaining == 0.0 {
                break;
            }
            let radius = series::nearest_distance(sys.poles(), pos);
            let local = if radius.is_finite() { radius } else { FAR_RADIUS };
            let limit = opts.step_fraction * local;
            if limit <= 1e-12 * (1.0 + pos.norm()) {
                return Err(Error::OutOfDisk {
                    distance: remaining,
                    limit,
                });
            }
            let (next, h) = if remaining <= limit {
                (to, to - pos)
            } else {
                let h = (to - pos) * (limit / remaining);
                (pos + h, h)
            };
            let a = sys.taylor(pos, opts.order)?;
            let coeffs = series::solve_recursion(&a, Matrix::identity(n), opts.order);
            let phi = series::horner_matrix(&coeffs, h);
            let norms: Vec<f64> = coeffs.iter().map(linalg::norm_inf).collect();
            let t = h.norm();
            let tail = series::tail_estimate(&norms, t, radius);
            let rounding: f64 = norms.iter().enumerate().map(|(k, m)| m * t.powi(k as i32)).sum::<f64>()
                * f64::EPSILON
                * (opts.order + n) as f64;
            let local = (tail + rounding) * linalg::norm_inf(&w);
            norm_bound = linalg::norm_inf(&phi) * norm_bound + local;
            w = linalg::mul(&phi, &w);
            local_errors.push((w.clone(), local));
            if !linalg::is_finite(&w) {
                return Err(Error::PrecisionLoss {
                    estimate: f64::INFINITY,
                    tolerance: opts.tol_mono,
                });
            }
            pos = next;
            steps += 1;
        }
    }
    let err = propagated_error(&w, &local_errors).unwrap_or(norm_bound);
    let rel = err / linalg::norm_inf(&w).max(1.0);
    if rel > opts.tol_mono {
        return Err(Error::PrecisionLoss {
            estimate: rel,
            tolerance: opts.tol_mono,
        });
    }
    Ok(Continuation {
        matrix: w,
        error_estimate: rel,
        steps,
    })
}

/// First-order error of the final matrix: an error `E` made at a step ending
/// with `W_k` reaches the end as `W·W_k⁻¹·E`. `None` if some `W_k` is
/// numerically singular.
fn propagated_error(w: &CMatrix, local_errors: &[(CMatrix, f64)]) -> Option<f64> {
    local_errors.iter().try_fold(0.0, |acc, (wk, e)| {
        let transfer = linalg::mul(w, &linalg::inverse(wk)?);
        linalg::is_finite(&transfer).then(|| acc + linalg::norm_inf(&transfer) * e)
    })
}

/// Exact-system convenience wrapper.
pub fn continue_along_exact(a: &RatFuncMatrix, path: &Loop, opts: &ContinuationOptions) -> Result<Continuation> {
    continue_along(&FloatSystem::new(a)?, path, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_system;
    use crate::monodromy::loops::standard_loops;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square(center: Complex64, r: f64, base: Complex64) -> Loop {
        // base -> right of center, then ccw square, then back
        let start = center + c(r, 0.0);
        Loop::new(
            base,
            vec![base, start, center + c(r, r), center + c(-r, r), center + c(-r, -r), center + c(r, -r), start, base],
        )
        .unwrap()
    }

    #[test]
    fn trivial_and_half_residue() {
        let opts = ContinuationOptions::default();
        let one = parse_system("[[1]]").unwrap();
        let l = square(c(0.0, 0.0), 1.0, c(1.0, 0.0));
        let m = continue_along_exact(&one, &l, &opts).unwrap().matrix;
        assert!((m.get(0, 0) - c(1.0, 0.0)).norm() < 1e-10);

        let half = parse_system("[[(1/2)/z]]").unwrap();
        let m = continue_along_exact(&half, &l, &opts).unwrap().matrix;
        assert!((m.get(0, 0) - c(-1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn nilpotent_residue() {
        let a = parse_system("[[0,1/z],[0,0]]").unwrap();
        let fam = standard_loops(&[c(0.0, 0.0)], None).unwrap();
        let m = continue_along_exact(&a, &fam.loops[0], &ContinuationOptions::default()).unwrap().matrix;
        let expected = Matrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 2.0 * PI)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!(linalg::max_abs_diff(&m, &expected) < 1e-8);
    }

    #[test]
    fn imaginary_residue() {
        let a = parse_system("[[i/z]]").unwrap();
        let fam = standard_loops(&[c(0.0, 0.0)], None).unwrap();
        let m = continue_along_exact(&a, &fam.loops[0], &ContinuationOptions::default()).unwrap().matrix;
        assert!((m.get(0, 0) - c((-2.0 * PI).exp(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn bad_options_rejected() {
        let a = parse_system("[[1]]").unwrap();
        let l = square(c(0.0, 0.0), 1.0, c(1.0, 0.0));
        let opts = ContinuationOptions {
            step_fraction: 1.5,
            ..Default::default()
        };
        assert!(matches!(continue_along_exact(&a, &l, &opts), Err(Error::InvalidInput(_))));
    }
}
