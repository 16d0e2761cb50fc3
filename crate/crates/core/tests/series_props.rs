use num_complex::Complex64;
use proptest::prelude::*;
use pvd_core::algebra::{derivative, ExactMatrix, Field, GaussianRational, Matrix, Poly, RatFuncMatrix, RationalFunction};
use pvd_core::series::{fundamental_series, solve_recursion, solve_recursion_exact};

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(p, q, r, s)| GaussianRational::from_parts(p, q, r, s))
}

/// Entries `p(z)` or `p(z)/(z - s)` with the pole `s` kept away from the origin.
fn entry() -> impl Strategy<Value = RationalFunction> {
    let pole = (1i64..=3, -2i64..=2, any::<bool>())
        .prop_map(|(re, im, neg)| GaussianRational::from_parts(if neg { -re } else { re }, 1, im, 1));
    (prop::collection::vec(gaussian(), 1..=3), prop::option::of(pole)).prop_map(|(c, s)| {
        let num = Poly::from_coeffs(c);
        match s {
            Some(s) => RationalFunction::new(num, Poly::linear_factor(&s)),
            None => RationalFunction::from_poly(num),
        }
    })
}

fn system(n: usize) -> impl Strategy<Value = RatFuncMatrix> {
    prop::collection::vec(entry(), n * n).prop_map(move |v| Matrix::from_fn(n, n, |r, c| v[r * n + c].clone()))
}

type PolyMatrix = Vec<Vec<Poly>>;

/// Matrix of polynomials `Σ_k W_k z^k`.
fn as_poly_matrix(coeffs: &[ExactMatrix]) -> PolyMatrix {
    let (r, c) = (coeffs[0].rows(), coeffs[0].cols());
    (0..r)
        .map(|i| (0..c).map(|j| Poly::from_coeffs(coeffs.iter().map(|m| m.get(i, j).clone()).collect())).collect())
        .collect()
}

fn poly_mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(Poly::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// Check `q·W' = (q·A)·W` through degree `order - 2` using only polynomial
/// arithmetic, where `q` is the product of all entry denominators.
fn residual_vanishes(a: &RatFuncMatrix, coeffs: &[ExactMatrix]) -> bool {
    let order = coeffs.len();
    let q = a.entries().iter().fold(Poly::one(), |acc, f| acc.mul(f.denominator()));
    let qa: PolyMatrix = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    let f = a.get(i, j);
                    let (quo, rem) = q.mul(f.numerator()).div_rem(f.denominator());
                    assert!(rem.is_zero());
                    quo
                })
                .collect()
        })
        .collect();
    let w = as_poly_matrix(coeffs);
    let rhs = poly_mat_mul(&qa, &w);
    w.iter().flatten().zip(rhs.iter().flatten()).all(|(wij, r)| {
        let d = q.mul(&wij.derivative()).sub(r);
        (0..order - 1).all(|k| d.coeff(k).is_zero())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_series_solves_the_system(a in system(2), order in 2usize..12) {
        let w = fundamental_series(&a, &GaussianRational::zero(), order, None).unwrap();
        prop_assert_eq!(w.coeffs.len(), order);
        prop_assert_eq!(w.coeffs[0].clone(), Matrix::identity(2));
        prop_assert!(residual_vanishes(&a, &w.coeffs));
    }

    #[test]
    fn fraction_free_recursion_matches_plain(a in system(2), order in 1usize..10) {
        let coeffs = pvd_core::series::local_expand(&a, &GaussianRational::zero(), order).unwrap();
        let w0: ExactMatrix = Matrix::from_fn(2, 2, |r, c| GaussianRational::from_parts(r as i64 + 1, 1, c as i64, 2));
        let plain = solve_recursion(&coeffs, w0.clone(), order);
        let fast = solve_recursion_exact(&coeffs, w0, order);
        prop_assert_eq!(plain, fast);
    }

    #[test]
    fn float_series_tracks_exact(a in system(2)) {
        let order = 10;
        let exact = fundamental_series(&a, &GaussianRational::zero(), order, None).unwrap();
        let float = fundamental_series(&a, &Complex64::new(0.0, 0.0), order, None).unwrap();
        for (e, f) in exact.coeffs.iter().zip(&float.coeffs) {
            for (x, y) in e.entries().iter().zip(f.entries()) {
                let x = x.to_complex();
                prop_assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()));
            }
        }
    }

    #[test]
    fn initial_condition_is_a_right_factor(a in system(2)) {
        // W_c = W_I · c for any constant invertible c
        let order = 6;
        let c: ExactMatrix = Matrix::from_rows(vec![
            vec![GaussianRational::from_integer(1), GaussianRational::i()],
            vec![GaussianRational::from_integer(2), GaussianRational::from_integer(-1)],
        ]).unwrap();
        let w = fundamental_series(&a, &GaussianRational::zero(), order, None).unwrap();
        let wc = fundamental_series(&a, &GaussianRational::zero(), order, Some(c.clone())).unwrap();
        for (x, y) in w.coeffs.iter().zip(&wc.coeffs) {
            prop_assert_eq!(x.mul(&c).unwrap(), y.clone());
        }
    }
}

#[test]
fn scalar_exponential() {
    let a: RatFuncMatrix = Matrix::from_fn(1, 1, |_, _| RationalFunction::one());
    let w = fundamental_series(&a, &GaussianRational::from_integer(3), 8, None).unwrap();
    let mut fact = GaussianRational::one();
    for (k, m) in w.coeffs.iter().enumerate() {
        if k > 0 {
            fact = fact.mul_ref(&GaussianRational::from_integer(k as i64));
        }
        assert_eq!(m.get(0, 0).mul_ref(&fact), GaussianRational::one());
    }
}

#[test]
fn pole_at_center_is_rejected() {
    let a: RatFuncMatrix = Matrix::from_fn(1, 1, |_, _| RationalFunction::new(Poly::one(), Poly::z()));
    assert!(fundamental_series(&a, &GaussianRational::zero(), 4, None).is_err());
    let a = derivative(&a);
    assert!(fundamental_series(&a, &GaussianRational::zero(), 4, None).is_err());
}
