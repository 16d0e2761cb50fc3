//! Floating complex values with an optional error radius.

use num_complex::Complex64;

use super::gaussian::GaussianRational;
use super::poly::Poly;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// A complex number, optionally carrying a radius `err` with
/// `|true value - value| <= err`. Plain mode (`err = None`) is for inner loops.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexApprox {
    pub value: Complex64,
    pub err: Option<f64>,
}

impl ComplexApprox {
    pub fn plain(value: Complex64) -> Self {
        ComplexApprox { value, err: None }
    }

    /// Ball mode with a starting radius (0 for exact inputs).
    pub fn ball(value: Complex64, err: f64) -> Self {
        ComplexApprox {
            value,
            err: Some(err.max(0.0)),
        }
    }

    pub fn from_exact(x: &GaussianRational, tracked: bool) -> Self {
        let v = x.to_complex();
        if tracked {
            // conversion rounds each part once
            Self::ball(v, EPS * v.norm())
        } else {
            Self::plain(v)
        }
    }

    pub fn is_tracked(&self) -> bool {
        self.err.is_some()
    }

    pub fn radius(&self) -> f64 {
        self.err.unwrap_or(0.0)
    }

    fn combine(value: Complex64, a: &Self, b: &Self, propagated: f64) -> Self {
        match (a.err, b.err) {
            (None, None) => Self::plain(value),
            _ => Self::ball(value, propagated + 2.0 * EPS * value.norm()),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::combine(self.value + rhs.value, self, rhs, self.radius() + rhs.radius())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::combine(self.value - rhs.value, self, rhs, self.radius() + rhs.radius())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (ea, eb) = (self.radius(), rhs.radius());
        let prop = self.value.norm() * eb + rhs.value.norm() * ea + ea * eb;
        Self::combine(self.value * rhs.value, self, rhs, prop)
    }

    /// Fails with `PoleEvaluation` when the divisor ball contains zero.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let d = rhs.value.norm();
        let eb = rhs.radius();
        if d == 0.0 || d <= eb {
            return Err(Error::PoleEvaluation(format!(
                "divisor {} within error radius {eb:.3e} of zero",
                fmt_c(rhs.value)
            )));
        }
        let q = self.value / rhs.value;
        // |a/b - a'/b'| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
        let prop = (self.value.norm() * eb + d * self.radius()) / (d * (d - eb));
        Ok(Self::combine(q, self, rhs, prop))
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6e}{:+.6e}i", z.re, z.im)
}

/// Horner evaluation with a running rounding bound (Higham-style), plus the
/// propagation of the input radius through `|p'|` on a disk.
fn horner(p: &Poly, z0: &ComplexApprox) -> ComplexApprox {
    let x = z0.value;
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(GaussianRational::to_complex).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
        bound = bound * x.norm() + acc.norm();
    }
    if !z0.is_tracked() {
        return ComplexApprox::plain(acc);
    }
    let r = z0.radius();
    // first-order bound on input perturbation: sum |c_k| k (|x|+r)^(k-1) r
    let reach = x.norm() + r;
    let mut slope = 0.0;
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        slope += c.norm() * k as f64 * reach.powi(k as i32 - 1);
    }
    let coeff_err: f64 = coeffs.iter().map(|c| c.norm()).sum::<f64>() * EPS;
    ComplexApprox::ball(acc, 4.0 * EPS * bound + coeff_err * reach.max(1.0).powi(coeffs.len() as i32) + slope * r)
}

/// Evaluate a rational function at a point.
pub fn eval_at(f: &RationalFunction, z0: &ComplexApprox) -> Result<ComplexApprox> {
    let num = horner(f.numerator(), z0);
    let den = horner(f.denominator(), z0);
    if !z0.is_tracked() {
        // plain mode: only an exact floating zero is a pole, plus relative noise
        let scale = f
            .denominator()
            .coeffs()
            .iter()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
            * z0.value.norm().max(1.0).powi(f.denominator().coeffs().len() as i32);
        if den.value.norm() <= 8.0 * EPS * scale {
            return Err(Error::PoleEvaluation(format!(
                "denominator vanishes at {}",
                fmt_c(z0.value)
            )));
        }
        return Ok(ComplexApprox::plain(num.value / den.value));
    }
    num.div(&den).map_err(|_| {
        Error::PoleEvaluation(format!(
            "denominator vanishes within error radius at {}",
            fmt_c(z0.value)
        ))
    })
}
