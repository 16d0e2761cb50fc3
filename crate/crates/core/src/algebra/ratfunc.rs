//! Univariate rational functions over Q(i).
//!
//! Canonical form: the denominator is monic and coprime to the numerator, and
//! zero is `0/1`. Equality of rational functions is therefore structural.

use num_complex::Complex64;

use super::field::Field;
use super::gaussian::{forward_ops, GaussianRational};
use super::poly::Poly;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Panics when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero_value();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.leading().expect("nonzero").clone();
        if lead.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lead.inv().expect("nonzero");
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    fn zero_value() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::from_poly(Poly::z())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this function is constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs()).ok()?;
        // num and den stay coprime under powers
        Some(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Formal derivative by the quotient rule.
    pub fn derivative(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let top = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(top, self.den.mul(&self.den))
    }

    /// Conjugate every coefficient (the action of complex conjugation on Q(i)(z)).
    pub fn conj(&self) -> Self {
        RationalFunction {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    /// The unique real rational functions `(a, b)` with `self = a + i·b`.
    pub fn real_imag(&self) -> (Self, Self) {
        if self.is_real() {
            return (self.clone(), Self::zero_value());
        }
        let den_conj = self.den.conj();
        let real_den = self.den.mul(&den_conj);
        let (top_re, top_im) = self.num.mul(&den_conj).real_imag();
        let (real_den, _) = real_den.real_imag();
        (
            Self::new(top_re, real_den.clone()),
            Self::new(top_im, real_den),
        )
    }

    pub fn eval(&self, x: &GaussianRational) -> Option<GaussianRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x).div_ref(&d))
        }
    }

    /// Float coefficients `(numerator, denominator)` in ascending order.
    pub fn to_complex_coeffs(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            self.num.coeffs().iter().map(GaussianRational::to_complex).collect(),
            self.den.coeffs().iter().map(GaussianRational::to_complex).collect(),
        )
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        Self::zero_value()
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero_value();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self.mul_ref(&rhs.inv().expect("division by the zero rational function"))
    }
    fn neg_ref(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(GaussianRational::from_integer(v))
    }
}

forward_ops!(RationalFunction);

impl From<GaussianRational> for RationalFunction {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}
