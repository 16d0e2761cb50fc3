//! Truncated power-series fundamental matrices at ordinary points.
//!
//! With `t = z - center`, `A = Σ A_k t^k` and `W = Σ W_k t^k`, the equation
//! `W' = A W` is equivalent to `i·W_i = Σ_{j+k=i-1} A_j W_k`, so `W` is fixed
//! by `W_0`.

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::algebra::scaled::ScaledMatrix;
use crate::algebra::{numeric, ExactMatrix, ComplexApprox, Field, GaussianRational, Matrix, RatFuncMatrix};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub const DEFAULT_ORDER: usize = 64;
pub const DEFAULT_STEP_FRACTION: f64 = 0.5;

/// Scalars a series can be computed in: exact Q(i) or `f64` complex.
pub trait Coeff: Field {
    fn from_exact(x: &GaussianRational) -> Self;
    fn to_c64(&self) -> Complex64;
    /// A "numerically zero" test; exact types use true equality.
    fn negligible(&self, scale: f64) -> bool;
    /// [`solve_recursion`], possibly with a faster representation.
    fn recursion(a: &[Matrix<Self>], w0: Matrix<Self>, order: usize) -> Vec<Matrix<Self>> {
        solve_recursion(a, w0, order)
    }
}

impl Coeff for GaussianRational {
    fn from_exact(x: &GaussianRational) -> Self {
        x.clone()
    }
    fn to_c64(&self) -> Complex64 {
        self.to_complex()
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn recursion(a: &[Matrix<Self>], w0: Matrix<Self>, order: usize) -> Vec<Matrix<Self>> {
        solve_recursion_exact(a, w0, order)
    }
}

impl Coeff for Complex64 {
    fn from_exact(x: &GaussianRational) -> Self {
        x.to_complex()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= 64.0 * f64::EPSILON * scale
    }
}

/// Coefficient arithmetic mode for the CLI and mixed callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// Truncated fundamental matrix `W = Σ_{k<N} W_k (z - center)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix<T> {
    pub center: T,
    pub coeffs: Vec<Matrix<T>>,
    /// Distance from the center to the nearest finite pole (infinite if none).
    pub radius_hint: f64,
}

impl<T: Coeff> SeriesMatrix<T> {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.first().map_or(0, Matrix::rows)
    }
}

/// Taylor coefficients `A_0 … A_{N-1}` of `a` about `center`.
pub fn local_expand<T: Coeff>(a: &RatFuncMatrix, center: &T, order: usize) -> Result<Vec<Matrix<T>>> {
    let mut out = vec![Matrix::<T>::zeros(a.rows(), a.cols()); order];
    let cabs = center.to_c64().norm().max(1.0);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let f = a.get(r, c);
            if f.is_zero() {
                continue;
            }
            let num = f.numerator().taylor_shift(center, T::from_exact);
            let den = f.denominator().taylor_shift(center, T::from_exact);
            let den_scale: f64 = f
                .denominator()
                .coeffs()
                .iter()
                .map(|x| x.to_complex().norm())
                .sum::<f64>()
                * cabs.powi(den.len() as i32);
            if den[0].negligible(den_scale) {
                return Err(Error::PoleEvaluation(format!(
                    "expansion point {} is a pole of entry ({}, {})",
                    fmt_point(center.to_c64()),
                    r + 1,
                    c + 1
                )));
            }
            let series = series_div(&num, &den, order);
            for (k, v) in series.into_iter().enumerate() {
                out[k].set(r, c, v);
            }
        }
    }
    Ok(out)
}

fn fmt_point(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// First `order` coefficients of `num/den`, given `den[0] != 0`.
pub fn series_div<T: Field>(num: &[T], den: &[T], order: usize) -> Vec<T> {
    let d0_inv = T::one().div_ref(&den[0]);
    let mut q: Vec<T> = Vec::with_capacity(order);
    for k in 0..order {
        let mut acc = num.get(k).cloned().unwrap_or_else(T::zero);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            if den[j].is_zero() || q[k - j].is_zero() {
                continue;
            }
            acc = acc.sub_ref(&den[j].mul_ref(&q[k - j]));
        }
        q.push(acc.mul_ref(&d0_inv));
    }
    q
}

/// Solve the recursion `i·W_i = Σ_{j+k=i-1} A_j W_k` for `i < order`.
pub fn solve_recursion<T: Field>(a: &[Matrix<T>], w0: Matrix<T>, order: usize) -> Vec<Matrix<T>> {
    let n = w0.rows();
    let mut w = Vec::with_capacity(order);
    w.push(w0);
    for i in 1..order {
        let mut acc = Matrix::<T>::zeros(n, w[0].cols());
        for j in 0..i.min(a.len()) {
            if a[j].is_zero() {
                continue;
            }
            acc = acc.add(&a[j].mul(&w[i - 1 - j]).expect("square")).expect("shape");
        }
        let inv_i = T::one().div_ref(&T::from_i64(i as i64));
        w.push(acc.scale(&inv_i));
    }
    w
}

/// [`solve_recursion`] over Q(i) with one common denominator per matrix, so
/// each step costs integer products and a single content reduction.
pub fn solve_recursion_exact(a: &[ExactMatrix], w0: ExactMatrix, order: usize) -> Vec<ExactMatrix> {
    let (n, m) = (w0.rows(), w0.cols());
    let a: Vec<ScaledMatrix> = a.iter().take(order.saturating_sub(1)).map(ScaledMatrix::from_exact).collect();
    let mut w = Vec::with_capacity(order);
    w.push(ScaledMatrix::from_exact(&w0));
    for i in 1..order {
        let pairs: Vec<(&ScaledMatrix, &ScaledMatrix)> = (0..i.min(a.len()))
            .filter(|&j| !a[j].is_zero())
            .map(|j| (&a[j], &w[i - 1 - j]))
            .collect();
        let next = if pairs.is_empty() {
            ScaledMatrix::zeros(n, m)
        } else {
            ScaledMatrix::sum_of_products(&pairs, n, m, &BigInt::from(i))
        };
        w.push(next);
    }
    w.iter().map(ScaledMatrix::to_exact).collect()
}

/// Distance from `center` to the nearest finite pole of `a`.
pub fn radius_hint(a: &RatFuncMatrix, center: Complex64) -> f64 {
    nearest_distance(&numeric::finite_poles(a), center)
}

pub fn nearest_distance(poles: &[Complex64], center: Complex64) -> f64 {
    poles.iter().map(|p| (p - center).norm()).fold(f64::INFINITY, f64::min)
}

fn check_initial<T: Coeff>(w0: &Matrix<T>, n: usize) -> Result<()> {
    if w0.rows() != n || w0.cols() != n {
        return Err(Error::Shape(format!(
            "initial matrix is {}x{}, system is {n}x{n}",
            w0.rows(),
            w0.cols()
        )));
    }
    let det = w0.det()?;
    // Hadamard bound gives the scale against which the determinant is judged
    let hadamard: f64 = (0..n)
        .map(|r| w0.row(r).iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt())
        .product();
    if det.is_zero() || det.negligible(hadamard) {
        return Err(Error::SingularInitial);
    }
    Ok(())
}

/// Fundamental series of `a` at `center` with `W(center) = w0` (identity by default).
pub fn fundamental_series<T: Coeff>(
    a: &RatFuncMatrix,
    center: &T,
    order: usize,
    w0: Option<Matrix<T>>,
) -> Result<SeriesMatrix<T>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("system matrix is {}x{}", a.rows(), a.cols())));
    }
    if order == 0 {
        return Err(Error::InvalidInput("series order must be positive".into()));
    }
    let n = a.rows();
    let w0 = w0.unwrap_or_else(|| Matrix::identity(n));
    check_initial(&w0, n)?;
    let coeffs_a = local_expand(a, center, order)?;
    Ok(SeriesMatrix {
        center: center.clone(),
        coeffs: T::recursion(&coeffs_a, w0, order),
        radius_hint: radius_hint(a, center.to_c64()),
    })
}

/// Value of a series at a point, with an estimate of the truncation error when
/// the point is tracked.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: CMatrix,
    pub err: Option<f64>,
}

/// Horner evaluation of a float matrix series at offset `t`.
pub fn horner_matrix(coeffs: &[CMatrix], t: Complex64) -> CMatrix {
    let (r, c) = (coeffs[0].rows(), coeffs[0].cols());
    let mut acc = Matrix::<Complex64>::zeros(r, c);
    for w in coeffs.iter().rev() {
        acc = acc.scale(&t).add(w).expect("shape");
    }
    acc
}

/// Geometric tail estimate for a truncated series evaluated at `|t|` inside a
/// disk of radius `radius`.
pub fn tail_estimate(coeff_norms: &[f64], t_abs: f64, radius: f64) -> f64 {
    let n = coeff_norms.len();
    if n == 0 || t_abs == 0.0 {
        return 0.0;
    }
    let last = coeff_norms[n - 1] * t_abs.powi(n as i32 - 1);
    let prev = if n >= 2 { coeff_norms[n - 2] * t_abs.powi(n as i32 - 2) } else { last };
    let q = if radius.is_finite() { (t_abs / radius).min(0.99) } else { 0.5 };
    last.max(q * prev) * q / (1.0 - q)
}

/// Evaluate `W` at `point`; requires `|point - center| < step_fraction · radius_hint`.
pub fn evaluate_series<T: Coeff>(w: &SeriesMatrix<T>, point: &ComplexApprox, step_fraction: f64) -> Result<SeriesValue> {
    let center = w.center.to_c64();
    let t = point.value - center;
    let limit = step_fraction * w.radius_hint;
    let distance = t.norm() + point.radius();
    if distance >= limit {
        return Err(Error::OutOfDisk { distance, limit });
    }
    let coeffs: Vec<CMatrix> = w.coeffs.iter().map(|m| m.map(|x| x.to_c64())).collect();
    let value = horner_matrix(&coeffs, t);
    let err = point.err.map(|e| {
        let norms: Vec<f64> = coeffs.iter().map(crate::linalg::max_abs).collect();
        let t_abs = t.norm() + e;
        let tail = tail_estimate(&norms, t_abs, w.radius_hint);
        let rounding: f64 = norms
            .iter()
            .enumerate()
            .map(|(k, m)| m * t_abs.powi(k as i32))
            .sum::<f64>()
            * f64::EPSILON
            * coeffs.len() as f64;
        // first-order propagation of the point radius through W'
        let slope: f64 = norms
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, m)| m * k as f64 * t_abs.powi(k as i32 - 1))
            .sum();
        tail + rounding + slope * e
    });
    Ok(SeriesValue { value, err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_system;

    fn g(p: i64, q: i64) -> GaussianRational {
        GaussianRational::from_parts(p, q, 0, 1)
    }

    #[test]
    fn expansion_examples() {
        let one = parse_system("[[1]]").unwrap();
        let c = local_expand(&one, &g(3, 7), 4).unwrap();
        assert_eq!(c[0].get(0, 0), &g(1, 1));
        assert!(c[1..].iter().all(Matrix::is_zero));

        let inv_z = parse_system("[[1/z]]").unwrap();
        let c = local_expand(&inv_z, &g(1, 1), 6).unwrap();
        for (k, m) in c.iter().enumerate() {
            assert_eq!(m.get(0, 0), &g(if k % 2 == 0 { 1 } else { -1 }, 1));
        }

        let geo = parse_system("[[1/(1-z)]]").unwrap();
        let c = local_expand(&geo, &g(0, 1), 6).unwrap();
        assert!(c.iter().all(|m| m.get(0, 0) == &g(1, 1)));

        assert!(matches!(local_expand(&inv_z, &g(0, 1), 3), Err(Error::PoleEvaluation(_))));
        assert!(matches!(
            local_expand(&inv_z, &Complex64::new(0.0, 0.0), 3),
            Err(Error::PoleEvaluation(_))
        ));
    }

    #[test]
    fn exponential_series() {
        let a = parse_system("[[1]]").unwrap();
        let w = fundamental_series(&a, &g(0, 1), 8, None).unwrap();
        let mut fact = 1i64;
        for (k, m) in w.coeffs.iter().enumerate() {
            if k > 0 {
                fact *= k as i64;
            }
            assert_eq!(m.get(0, 0), &g(1, fact));
        }

        let a = parse_system("[[i]]").unwrap();
        let w = fundamental_series(&a, &g(0, 1), 6, None).unwrap();
        let mut expected = GaussianRational::one();
        for (k, m) in w.coeffs.iter().enumerate() {
            if k > 0 {
                expected = expected.mul_ref(&GaussianRational::i()).div_ref(&GaussianRational::from_integer(k as i64));
            }
            assert_eq!(m.get(0, 0), &expected);
        }
    }

    #[test]
    fn nilpotent_system() {
        let a = parse_system("[[0,1],[0,0]]").unwrap();
        let w = fundamental_series(&a, &g(0, 1), 5, None).unwrap();
        assert_eq!(w.coeffs[0], Matrix::identity(2));
        assert_eq!(w.coeffs[1], parse_system("[[0,1],[0,0]]").unwrap().as_constant().unwrap());
        assert!(w.coeffs[2..].iter().all(Matrix::is_zero));
    }

    #[test]
    fn singular_initial_rejected() {
        let a = parse_system("[[1,0],[0,1]]").unwrap();
        let w0 = Matrix::from_rows(vec![vec![g(1, 1), g(2, 1)], vec![g(2, 1), g(4, 1)]]).unwrap();
        assert!(matches!(
            fundamental_series(&a, &g(0, 1), 4, Some(w0)),
            Err(Error::SingularInitial)
        ));
    }

    #[test]
    fn evaluation_contract() {
        let a = parse_system("[[1]]").unwrap();
        let w = fundamental_series(&a, &Complex64::new(0.0, 0.0), 40, None).unwrap();
        let at0 = evaluate_series(&w, &ComplexApprox::plain(Complex64::new(0.0, 0.0)), 0.5).unwrap();
        assert_eq!(at0.value, Matrix::identity(1));
        let at1 = evaluate_series(&w, &ComplexApprox::ball(Complex64::new(1.0, 0.0), 0.0), 0.5).unwrap();
        assert!((at1.value.get(0, 0) - std::f64::consts::E).norm() < 1e-12);
        assert!(at1.err.unwrap() < 1e-12);

        let b = parse_system("[[1/(z-1)]]").unwrap();
        let w = fundamental_series(&b, &Complex64::new(0.0, 0.0), 16, None).unwrap();
        assert!((w.radius_hint - 1.0).abs() < 1e-15);
        assert!(matches!(
            evaluate_series(&w, &ComplexApprox::plain(Complex64::new(0.9, 0.0)), 0.5),
            Err(Error::OutOfDisk { .. })
        ));
    }
}
