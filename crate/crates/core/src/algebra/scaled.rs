//! Matrices over Q(i) stored as Gaussian-integer numerators over one common
//! denominator. Products and sums need no per-entry gcd, which matters once
//! entries carry hundreds of digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gaussian::GaussianRational;
use super::matrix::{ExactMatrix, Matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMatrix {
    rows: usize,
    cols: usize,
    re: Vec<BigInt>,
    im: Vec<BigInt>,
    /// Positive.
    den: BigInt,
}

impl ScaledMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScaledMatrix {
            rows,
            cols,
            re: vec![BigInt::zero(); rows * cols],
            im: vec![BigInt::zero(); rows * cols],
            den: BigInt::one(),
        }
    }

    pub fn from_exact(m: &ExactMatrix) -> Self {
        let mut den = BigInt::one();
        for x in m.entries() {
            den = den.lcm(x.re().denom()).lcm(x.im().denom());
        }
        let scale = |q: &BigRational| q.numer() * (&den / q.denom());
        ScaledMatrix {
            rows: m.rows(),
            cols: m.cols(),
            re: m.entries().iter().map(|x| scale(x.re())).collect(),
            im: m.entries().iter().map(|x| scale(x.im())).collect(),
            den: den.clone(),
        }
    }

    pub fn to_exact(&self) -> ExactMatrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            let k = r * self.cols + c;
            GaussianRational::new(
                BigRational::new(self.re[k].clone(), self.den.clone()),
                BigRational::new(self.im[k].clone(), self.den.clone()),
            )
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.iter().chain(&self.im).all(Zero::is_zero)
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Numerators of `self·rhs`; their common denominator is the product of
    /// the two denominators.
    fn mul_numerators(&self, rhs: &ScaledMatrix) -> (Vec<BigInt>, Vec<BigInt>) {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut re = vec![BigInt::zero(); self.rows * rhs.cols];
        let mut im = vec![BigInt::zero(); self.rows * rhs.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let (ar, ai) = (&self.re[r * self.cols + k], &self.im[r * self.cols + k]);
                if ar.is_zero() && ai.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let (br, bi) = (&rhs.re[k * rhs.cols + c], &rhs.im[k * rhs.cols + c]);
                    let idx = r * rhs.cols + c;
                    if !br.is_zero() {
                        re[idx] += ar * br;
                        im[idx] += ai * br;
                    }
                    if !bi.is_zero() {
                        re[idx] -= ai * bi;
                        im[idx] += ar * bi;
                    }
                }
            }
        }
        (re, im)
    }

    /// `(Σ_k lhs_k · rhs_k) / divisor`, reduced to lowest common terms.
    pub fn sum_of_products(pairs: &[(&ScaledMatrix, &ScaledMatrix)], rows: usize, cols: usize, divisor: &BigInt) -> Self {
        let parts: Vec<(Vec<BigInt>, Vec<BigInt>, BigInt)> = pairs
            .iter()
            .map(|(a, b)| {
                let (re, im) = a.mul_numerators(b);
                (re, im, &a.den * &b.den)
            })
            .collect();
        let mut den = BigInt::one();
        for (_, _, d) in &parts {
            den = den.lcm(d);
        }
        let mut re = vec![BigInt::zero(); rows * cols];
        let mut im = vec![BigInt::zero(); rows * cols];
        for (pre, pim, d) in parts {
            let f = &den / d;
            for (acc, x) in re.iter_mut().zip(pre) {
                *acc += x * &f;
            }
            for (acc, x) in im.iter_mut().zip(pim) {
                *acc += x * &f;
            }
        }
        let mut out = ScaledMatrix {
            rows,
            cols,
            re,
            im,
            den: den * divisor,
        };
        out.reduce();
        out
    }

    fn reduce(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.re.iter_mut().chain(self.im.iter_mut()).for_each(|x| *x = -&*x);
        }
        let mut g = self.den.clone();
        for x in self.re.iter().chain(&self.im) {
            if g.is_one() {
                return;
            }
            g = g.gcd(x);
        }
        if g.is_one() || g.is_zero() {
            return;
        }
        self.den = &self.den / &g;
        self.re.iter_mut().chain(self.im.iter_mut()).for_each(|x| *x = &*x / &g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_system;

    fn exact(s: &str) -> ExactMatrix {
        parse_system(s).unwrap().as_constant().unwrap()
    }

    #[test]
    fn round_trip_and_products() {
        let a = exact("[[1/2, i/3],[2, -1/6+i]]");
        let b = exact("[[3/4, 1],[i/5, 0]]");
        let sa = ScaledMatrix::from_exact(&a);
        assert_eq!(sa.to_exact(), a);
        assert_eq!(sa.denominator(), &BigInt::from(6));
        let sb = ScaledMatrix::from_exact(&b);
        let got = ScaledMatrix::sum_of_products(&[(&sa, &sb), (&sb, &sa)], 2, 2, &BigInt::from(3));
        let expected = a.mul(&b).unwrap().add(&b.mul(&a).unwrap()).unwrap().scale(&GaussianRational::from_parts(1, 3, 0, 1));
        assert_eq!(got.to_exact(), expected);
        assert!(ScaledMatrix::zeros(2, 2).is_zero());
    }
}
