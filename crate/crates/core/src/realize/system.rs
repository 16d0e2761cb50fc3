//! Fuchsian systems in residue form `A(z) = Σ_k B_k / (z - s_k)`.

use num_complex::Complex64;

use crate::algebra::{GaussianRational, Matrix, Poly, RatFuncMatrix, RationalFunction};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::monodromy::loops::conjugate_partner;
use crate::monodromy::LocalSystem;

/// Significant digits used when turning float residues into exact rationals.
pub const RENDER_DIGITS: usize = 15;

#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianSystem {
    poles: Vec<Complex64>,
    residues: Vec<CMatrix>,
}

impl FuchsianSystem {
    pub fn new(poles: Vec<Complex64>, residues: Vec<CMatrix>) -> Result<Self> {
        if poles.len() != residues.len() {
            return Err(Error::Shape(format!("{} poles but {} residues", poles.len(), residues.len())));
        }
        let Some(first) = residues.first() else {
            return Err(Error::InvalidInput("a Fuchsian system needs at least one pole".into()));
        };
        let n = first.rows();
        if n == 0 {
            return Err(Error::Shape("residues must be nonempty square matrices".into()));
        }
        for (k, b) in residues.iter().enumerate() {
            if b.rows() != n || b.cols() != n {
                return Err(Error::Shape(format!("residue {} is not {n}x{n}", k + 1)));
            }
            if !linalg::is_finite(b) {
                return Err(Error::InvalidInput(format!("residue {} is not finite", k + 1)));
            }
        }
        for (k, p) in poles.iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(Error::InvalidInput(format!("pole {} is not finite", k + 1)));
            }
            if poles[..k].iter().any(|q| q == p) {
                return Err(Error::InvalidInput(format!("pole {} is repeated", k + 1)));
            }
        }
        Ok(FuchsianSystem { poles, residues })
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn residues(&self) -> &[CMatrix] {
        &self.residues
    }

    pub fn dim(&self) -> usize {
        self.residues[0].rows()
    }

    /// `-Σ B_k`, the residue at infinity.
    pub fn residue_at_infinity(&self) -> CMatrix {
        let sum = self.residues.iter().fold(linalg::zero(self.dim()), |acc, b| linalg::add(&acc, b));
        linalg::scale(&sum, Complex64::new(-1.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> CMatrix {
        self.poles
            .iter()
            .zip(&self.residues)
            .fold(linalg::zero(self.dim()), |acc, (s, b)| linalg::add(&acc, &linalg::scale(b, 1.0 / (z - s))))
    }

    /// For each pole in the lower half plane whose conjugate is a pole, the
    /// index of that partner.
    pub fn slaved(&self) -> Vec<Option<usize>> {
        (0..self.poles.len())
            .map(|k| conjugate_partner(&self.poles, k).filter(|_| self.poles[k].im < 0.0))
            .collect()
    }

    /// Largest `|B(τ(s)) - conj(B(s))|` over all poles (a real pole is its
    /// own partner); `None` if some pole off the real line lacks a partner.
    pub fn symmetry_defect(&self) -> Option<f64> {
        let mut worst = 0.0f64;
        for k in 0..self.poles.len() {
            let partner = if self.poles[k].im == 0.0 { Some(k) } else { conjugate_partner(&self.poles, k) };
            let j = partner?;
            worst = worst.max(linalg::max_abs_diff(&self.residues[k], &linalg::conj(&self.residues[j])));
        }
        Some(worst)
    }

    /// Copy the conjugates of the free residues onto their mirrored poles.
    pub fn enforce_symmetry(&mut self) {
        for (k, partner) in self.slaved().into_iter().enumerate() {
            if let Some(j) = partner {
                self.residues[k] = linalg::conj(&self.residues[j]);
            }
        }
    }

    pub(crate) fn set_residue(&mut self, k: usize, b: CMatrix) {
        self.residues[k] = b;
    }

    /// Exact system with poles and residues rounded to `digits` significant
    /// digits. Mirrored poles receive the exact conjugates of their partners,
    /// so a conjugate-symmetric system renders to a matrix over Q(z).
    pub fn to_exact(&self, digits: usize) -> Result<RatFuncMatrix> {
        let n = self.dim();
        let mut poles = Vec::with_capacity(self.poles.len());
        let mut residues = Vec::with_capacity(self.poles.len());
        for (s, b) in self.poles.iter().zip(&self.residues) {
            poles.push(GaussianRational::from_complex_rounded(*s, digits)?);
            residues.push(b.try_map(|x| GaussianRational::from_complex_rounded(*x, digits))?);
        }
        for (k, partner) in self.slaved().into_iter().enumerate() {
            if let Some(j) = partner {
                poles[k] = poles[j].conj();
                residues[k] = residues[j].conj();
            }
        }
        let mut out: RatFuncMatrix = Matrix::zeros(n, n);
        for (s, b) in poles.iter().zip(&residues) {
            let inv = RationalFunction::from_poly(Poly::linear_factor(s)).inv().expect("linear factor is nonzero");
            let term = b.to_ratfunc().scale(&inv);
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl LocalSystem for FuchsianSystem {
    fn dim(&self) -> usize {
        FuchsianSystem::dim(self)
    }

    fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// `1/(z - s) = Σ_j (-1)^j t^j / (c - s)^{j+1}` with `t = z - c`.
    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<CMatrix>> {
        let n = self.dim();
        let mut out = vec![linalg::zero(n); order];
        for (s, b) in self.poles.iter().zip(&self.residues) {
            let d = center - s;
            if d.norm() <= 64.0 * f64::EPSILON * (1.0 + s.norm()) {
                return Err(Error::PoleEvaluation(format!("{}{:+}i is a pole", center.re, center.im)));
            }
            let q = -1.0 / d;
            let mut w = 1.0 / d;
            for m in out.iter_mut() {
                *m = linalg::add(m, &linalg::scale(b, w));
                w *= q;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_system;
    use crate::monodromy::FloatSystem;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn m1(z: Complex64) -> CMatrix {
        Matrix::from_rows(vec![vec![z]]).unwrap()
    }

    #[test]
    fn taylor_matches_float_view() {
        let sys = FuchsianSystem::new(vec![c(0.0, 1.0), c(0.0, -1.0)], vec![m1(c(0.5, 0.25)), m1(c(0.5, -0.25))]).unwrap();
        let exact = sys.to_exact(RENDER_DIGITS).unwrap();
        assert!(exact.is_real());
        let fl = FloatSystem::new(&exact).unwrap();
        let center = c(0.3, -0.2);
        let a = sys.taylor(center, 12).unwrap();
        let b = fl.taylor(center, 12).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(linalg::max_abs_diff(x, y) < 1e-12);
        }
    }

    #[test]
    fn exact_rendering() {
        let sys = FuchsianSystem::new(vec![c(0.0, 0.0)], vec![m1(c(0.5, 0.0))]).unwrap();
        assert_eq!(sys.to_exact(RENDER_DIGITS).unwrap(), parse_system("[[(1/2)/z]]").unwrap());
    }

    #[test]
    fn symmetry_helpers() {
        let mut sys = FuchsianSystem::new(vec![c(1.0, 1.0), c(1.0, -1.0)], vec![m1(c(0.1, 0.2)), m1(c(7.0, 7.0))]).unwrap();
        assert_eq!(sys.slaved(), vec![None, Some(0)]);
        assert!(sys.symmetry_defect().unwrap() > 1.0);
        sys.enforce_symmetry();
        assert_eq!(sys.symmetry_defect(), Some(0.0));
        assert!(linalg::max_abs_diff(&sys.residue_at_infinity(), &m1(c(-0.2, 0.0))) < 1e-15);
        let lone = FuchsianSystem::new(vec![c(0.0, 1.0)], vec![m1(c(1.0, 0.0))]).unwrap();
        assert_eq!(lone.symmetry_defect(), None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FuchsianSystem::new(vec![c(0.0, 0.0), c(0.0, 0.0)], vec![m1(c(1.0, 0.0)), m1(c(1.0, 0.0))]).is_err());
        assert!(FuchsianSystem::new(vec![], vec![]).is_err());
        assert!(FuchsianSystem::new(vec![c(0.0, 0.0)], vec![]).is_err());
    }
}
