//! Dense univariate polynomials over Q(i).
//!
//! Coefficients are stored in ascending degree order and the vector never
//! ends in a zero, so the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::field::Field;
use super::gaussian::{GaussInt, GaussianRational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `z`.
    pub fn z() -> Self {
        Self::from_coeffs(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    /// `z - root`.
    pub fn linear_factor(root: &GaussianRational) -> Self {
        Self::from_coeffs(vec![root.neg_ref(), GaussianRational::one()])
    }

    pub fn from_coeffs(coeffs: Vec<GaussianRational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k).add_ref(&rhs.coeff(k))).collect())
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k).sub_ref(&rhs.coeff(k))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division over the field Q(i). Panics when `rhs` is zero.
    pub fn div_rem(&self, rhs: &Poly) -> (Poly, Poly) {
        let d = rhs.degree().expect("polynomial division by zero");
        let lead_inv = rhs.coeffs[d].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d].mul_ref(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub_ref(&c.mul_ref(b));
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Scale so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero")),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_ref(&GaussianRational::from_integer(k as i64)))
                .collect(),
        )
    }

    pub fn conj(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(GaussianRational::conj).collect(),
        }
    }

    /// Polynomials with real coefficients `(p_re, p_im)` with `p = p_re + i·p_im`.
    pub fn real_imag(&self) -> (Poly, Poly) {
        let re = self
            .coeffs
            .iter()
            .map(|c| GaussianRational::real(c.re().clone()))
            .collect();
        let im = self
            .coeffs
            .iter()
            .map(|c| GaussianRational::real(c.im().clone()))
            .collect();
        (Poly::from_coeffs(re), Poly::from_coeffs(im))
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    /// Coefficients of `p(center + t)` in powers of `t`, converted into `T`.
    pub fn taylor_shift<T: Field>(&self, center: &T, convert: impl Fn(&GaussianRational) -> T) -> Vec<T> {
        let mut c: Vec<T> = self.coeffs.iter().map(convert).collect();
        let n = c.len();
        // repeated synthetic division by (z - center)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].mul_ref(center);
                c[j] = c[j].add_ref(&t);
            }
        }
        c
    }

    /// Monic gcd, computed by a primitive pseudo-remainder sequence over Z[i]
    /// after clearing denominators.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || rhs.degree() == Some(0) {
            return Poly::one();
        }
        let mut u = primitive_part(&clear_denominators(self));
        let mut v = primitive_part(&clear_denominators(rhs));
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        while !v.is_empty() {
            let r = pseudo_remainder(&u, &v);
            u = v;
            v = primitive_part(&r);
        }
        Poly::from_coeffs(u.iter().map(GaussInt::to_rational).collect()).monic()
    }
}

fn trim_int(p: &mut Vec<GaussInt>) {
    while p.last().is_some_and(GaussInt::is_zero) {
        p.pop();
    }
}

fn clear_denominators(p: &Poly) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.re().denom()).lcm(c.im().denom());
    }
    let l = BigRational::from_integer(l);
    p.coeffs()
        .iter()
        .map(|c| GaussInt {
            re: (c.re() * &l).to_integer(),
            im: (c.im() * &l).to_integer(),
        })
        .collect()
}

fn primitive_part(p: &[GaussInt]) -> Vec<GaussInt> {
    let mut content = GaussInt::zero();
    for c in p {
        content = GaussInt::gcd(&content, c);
        if content.norm().is_one() {
            return p.to_vec();
        }
    }
    if content.is_zero() {
        return Vec::new();
    }
    p.iter().map(|c| c.div_exact(&content)).collect()
}

/// `lc(v)^k · u mod v` for the minimal k; only used up to unit/content factors.
fn pseudo_remainder(u: &[GaussInt], v: &[GaussInt]) -> Vec<GaussInt> {
    let dv = v.len() - 1;
    let lv = &v[dv];
    let mut r = u.to_vec();
    trim_int(&mut r);
    while r.len() > dv {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dv;
        for c in r.iter_mut() {
            *c = c.mul(lv);
        }
        for (j, b) in v.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&lr.mul(b));
        }
        trim_int(&mut r);
    }
    r
}
