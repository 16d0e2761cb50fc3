//! Exact elements of Q(i) and Gaussian integers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::Field;
use crate::error::{Error, Result};

/// An element `re + im·i` of Q(i), stored as two reduced big rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// `p/q + (r/s)·i` from machine integers.
    pub fn from_parts(p: i64, q: i64, r: i64, s: i64) -> Self {
        GaussianRational {
            re: BigRational::new(p.into(), q.into()),
            im: BigRational::new(r.into(), s.into()),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Exact value of the decimal renderings of `z` (shortest round-trip form),
    /// so that `0.1` becomes `1/10` rather than its binary expansion.
    pub fn from_complex_decimal(z: Complex64) -> Result<Self> {
        Ok(GaussianRational {
            re: decimal_to_rational(&format!("{:e}", z.re))?,
            im: decimal_to_rational(&format!("{:e}", z.im))?,
        })
    }

    /// Round both parts to `digits` significant decimal digits. Rounding is
    /// symmetric under negation, so conjugate inputs give conjugate outputs.
    pub fn from_complex_rounded(z: Complex64, digits: usize) -> Result<Self> {
        let digits = digits.max(1);
        Ok(GaussianRational {
            re: decimal_to_rational(&format!("{:.*e}", digits - 1, z.re))?,
            im: decimal_to_rational(&format!("{:.*e}", digits - 1, z.im))?,
        })
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: fall back to a scaled quotient
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parse a decimal literal such as `-1.25e-3` into an exact rational.
pub fn decimal_to_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a finite decimal number: {s:?}"));
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (
            &s[..pos],
            s[pos + 1..].parse::<i64>().map_err(|_| bad())?,
        ),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(value, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

impl Field for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        let inv = rhs.inv().expect("division by zero in Q(i)");
        self.mul_ref(&inv)
    }
    fn neg_ref(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::from_integer(v)
    }
}

macro_rules! forward_ops {
    ($ty:ty) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                self.add_ref(&rhs)
            }
        }
        impl<'a> Add<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn add(self, rhs: &'a $ty) -> $ty {
                self.add_ref(rhs)
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                self.sub_ref(&rhs)
            }
        }
        impl<'a> Sub<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn sub(self, rhs: &'a $ty) -> $ty {
                self.sub_ref(rhs)
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                self.mul_ref(&rhs)
            }
        }
        impl<'a> Mul<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn mul(self, rhs: &'a $ty) -> $ty {
                self.mul_ref(rhs)
            }
        }
        impl Div for $ty {
            type Output = $ty;
            fn div(self, rhs: $ty) -> $ty {
                self.div_ref(&rhs)
            }
        }
        impl<'a> Div<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn div(self, rhs: &'a $ty) -> $ty {
                self.div_ref(rhs)
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                self.neg_ref()
            }
        }
        impl<'a> Neg for &'a $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                self.neg_ref()
            }
        }
    };
}
pub(crate) use forward_ops;

forward_ops!(GaussianRational);

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders in the system-definition grammar: `3`, `-1/2`, `i`, `-2*i`, `1/2+3*i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |v: &BigRational| -> String {
            if v.abs().is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rational(&v.abs()))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", imag(&self.im))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{sign}{}", fmt_rational(&self.re), imag(&self.im))
            }
        }
    }
}

/// Element of Z[i], used by the fraction-free polynomial gcd.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn zero() -> Self {
        GaussInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn conj(&self) -> GaussInt {
        GaussInt {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Nearest-integer quotient `round(self / o)`.
    fn div_round(&self, o: &GaussInt) -> GaussInt {
        let n = o.norm();
        let p = self.mul(&o.conj());
        let round = |x: &BigInt| -> BigInt {
            let two = BigInt::from(2);
            (x * &two + &n).div_floor(&(&n * &two))
        };
        GaussInt {
            re: round(&p.re),
            im: round(&p.im),
        }
    }

    /// Exact quotient; caller guarantees divisibility.
    pub fn div_exact(&self, o: &GaussInt) -> GaussInt {
        let n = o.norm();
        let p = self.mul(&o.conj());
        debug_assert!((&p.re % &n).is_zero() && (&p.im % &n).is_zero());
        GaussInt {
            re: p.re / &n,
            im: p.im / &n,
        }
    }

    pub fn gcd(a: &GaussInt, b: &GaussInt) -> GaussInt {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let q = a.div_round(&b);
            let r = a.sub(&q.mul(&b));
            a = b;
            b = r;
        }
        a
    }

    pub fn to_rational(&self) -> GaussianRational {
        GaussianRational::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }
}
