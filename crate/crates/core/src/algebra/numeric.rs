//! Floating-point helpers on top of the exact layer: polynomial roots and the
//! finite pole set of a system.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::field::Field;
use super::matrix::RatFuncMatrix;
use super::poly::Poly;

/// Squarefree part `p / gcd(p, p')`, made monic.
pub fn squarefree(p: &Poly) -> Poly {
    if p.degree().unwrap_or(0) == 0 {
        return Poly::one();
    }
    let g = p.gcd(&p.derivative());
    p.div_rem(&g).0.monic()
}

/// Monic least common multiple of all entry denominators.
pub fn common_denominator(a: &RatFuncMatrix) -> Poly {
    let mut l = Poly::one();
    for f in a.entries() {
        let d = f.denominator();
        if d.is_one() {
            continue;
        }
        let g = l.gcd(d);
        l = l.mul(&d.div_rem(&g).0);
    }
    l.monic()
}

/// All roots of a polynomial with complex coefficients, by eigenvalues of the
/// companion matrix followed by a few Newton steps on the original polynomial.
/// Coefficients are ascending; trailing zeros are ignored.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    match n {
        0 => return Vec::new(),
        1 => return vec![-c[0] / c[1]],
        _ => {}
    }
    let lead = c[n];
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..n {
        comp[(k, k - 1)] = Complex64::new(1.0, 0.0);
    }
    for k in 0..n {
        comp[(k, n - 1)] = -c[k] / lead;
    }
    // complex Schur form is upper triangular, so its diagonal holds the roots
    let eig: Vec<Complex64> = match crate::linalg::schur(&comp) {
        Some((_, t)) => (0..n).map(|k| t[(k, k)]).collect(),
        None => aberth(&c),
    };
    let deriv: Vec<Complex64> = (1..=n).map(|k| c[k] * k as f64).collect();
    eig.iter()
        .map(|&r0| {
            let mut r = r0;
            for _ in 0..8 {
                let f = horner(&c, r);
                let df = horner(&deriv, r);
                if df.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                let next = r - step;
                // keep the eigenvalue when Newton diverges (clustered roots)
                if !next.re.is_finite() || !next.im.is_finite() || step.norm() > 1e-2 * (1.0 + r.norm()) {
                    break;
                }
                r = next;
                if step.norm() <= 4.0 * f64::EPSILON * (1.0 + r.norm()) {
                    break;
                }
            }
            r
        })
        .collect()
}

pub fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + c)
}

/// Aberth–Ehrlich simultaneous iteration; the fallback when the companion
/// eigenvalue solver stalls. `c` has a nonzero leading coefficient.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let deriv: Vec<Complex64> = (1..=n).map(|k| c[k] * k as f64).collect();
    // Cauchy bound on the root moduli, starting points spread on that circle
    let bound = 1.0 + c[..n].iter().map(|x| (x / c[n]).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let f = horner(c, z[k]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / horner(&deriv, z[k]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved <= 4.0 * f64::EPSILON {
            break;
        }
    }
    z
}

/// Finite poles of the entries of `a`, each listed once. Linear factors are
/// solved exactly; higher-degree squarefree parts numerically.
pub fn finite_poles(a: &RatFuncMatrix) -> Vec<Complex64> {
    let sq = squarefree(&common_denominator(a));
    match sq.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![sq.coeff(0).neg_ref().to_complex()],
        Some(_) => {
            let c: Vec<Complex64> = sq.coeffs().iter().map(|x| x.to_complex()).collect();
            poly_roots(&c)
        }
    }
}
