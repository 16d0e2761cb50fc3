use proptest::prelude::*;
use pvd_core::algebra::{
    derivative, format_matrix, format_ratfunc, parse_expr, parse_system, Field, GaussianRational, Matrix, Poly,
    RationalFunction,
};

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-20i64..=20, 1i64..=9, -20i64..=20, 1i64..=9).prop_map(|(p, q, r, s)| GaussianRational::from_parts(p, q, r, s))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(gaussian(), 1..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly(3), poly(2)).prop_filter_map("zero denominator", |(n, d)| {
        (!d.is_zero()).then(|| RationalFunction::new(n, d))
    })
}

fn ratfunc_matrix(n: usize) -> impl Strategy<Value = Matrix<RationalFunction>> {
    prop::collection::vec(ratfunc(), n * n).prop_map(move |v| Matrix::from_fn(n, n, |r, c| v[r * n + c].clone()))
}

/// Evaluate a polynomial by Horner's rule straight from its coefficients.
fn horner(p: &Poly, x: &GaussianRational) -> GaussianRational {
    p.coeffs().iter().rev().fold(GaussianRational::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.sub_ref(&a), GaussianRational::zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul_ref(&a.inv().unwrap()), GaussianRational::one());
            prop_assert_eq!(b.div_ref(&a).mul_ref(&a), b.clone());
        }
    }

    #[test]
    fn gaussian_conj_is_field_involution(a in gaussian(), b in gaussian()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul_ref(&b).conj(), a.conj().mul_ref(&b.conj()));
        prop_assert_eq!(a.add_ref(&b).conj(), a.conj().add_ref(&b.conj()));
        prop_assert!(a.mul_ref(&a.conj()).is_real());
    }

    #[test]
    fn gaussian_matches_floats(a in gaussian(), b in gaussian()) {
        let exact = a.mul_ref(&b).add_ref(&a).to_complex();
        let float = a.to_complex() * b.to_complex() + a.to_complex();
        prop_assert!((exact - float).norm() <= 1e-12 * (1.0 + float.norm()));
    }

    #[test]
    fn poly_division_identity(p in poly(5), q in poly(3)) {
        prop_assume!(!q.is_zero());
        let (quo, rem) = p.div_rem(&q);
        prop_assert_eq!(quo.mul(&q).add(&rem), p.clone());
        prop_assert!(rem.is_zero() || rem.degree() < q.degree());
    }

    #[test]
    fn poly_eval_is_ring_map(p in poly(4), q in poly(4), x in gaussian()) {
        prop_assert_eq!(p.mul(&q).eval(&x), horner(&p, &x).mul_ref(&horner(&q, &x)));
        prop_assert_eq!(p.add(&q).eval(&x), horner(&p, &x).add_ref(&horner(&q, &x)));
    }

    #[test]
    fn ratfunc_field_axioms(f in ratfunc(), g in ratfunc(), h in ratfunc()) {
        prop_assert_eq!(f.add_ref(&g), g.add_ref(&f));
        prop_assert_eq!(f.mul_ref(&g.add_ref(&h)), f.mul_ref(&g).add_ref(&f.mul_ref(&h)));
        prop_assert_eq!(f.mul_ref(&g).mul_ref(&h), f.mul_ref(&g.mul_ref(&h)));
        if !f.is_zero() {
            prop_assert_eq!(f.mul_ref(&f.inv().unwrap()), RationalFunction::one());
        }
    }

    #[test]
    fn ratfunc_leibniz(f in ratfunc(), g in ratfunc()) {
        let lhs = f.mul_ref(&g).derivative();
        let rhs = f.derivative().mul_ref(&g).add_ref(&f.mul_ref(&g.derivative()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ratfunc_conj_involution(f in ratfunc(), g in ratfunc()) {
        prop_assert_eq!(f.conj().conj(), f.clone());
        prop_assert_eq!(f.mul_ref(&g).conj(), f.conj().mul_ref(&g.conj()));
        prop_assert_eq!(f.derivative().conj(), f.conj().derivative());
        let (re, im) = f.real_imag();
        prop_assert!(re.is_real() && im.is_real());
        let i = RationalFunction::constant(GaussianRational::i());
        prop_assert_eq!(re.add_ref(&i.mul_ref(&im)), f.clone());
    }

    #[test]
    fn ratfunc_print_parse_round_trip(f in ratfunc()) {
        let text = format_ratfunc(&f);
        prop_assert_eq!(parse_expr(&text).unwrap(), f);
    }

    #[test]
    fn matrix_print_parse_round_trip(m in ratfunc_matrix(2)) {
        let text = format_matrix(&m);
        prop_assert_eq!(parse_system(&text).unwrap(), m);
    }

    #[test]
    fn matrix_leibniz(a in ratfunc_matrix(2), b in ratfunc_matrix(2)) {
        let lhs = derivative(&a.mul(&b).unwrap());
        let rhs = derivative(&a).mul(&b).unwrap().add(&a.mul(&derivative(&b)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn parser_accepts_grammar_samples() {
    let f = parse_expr("(z^2 - 1)/(z - 1)").unwrap();
    assert_eq!(f, parse_expr("z + 1").unwrap());
    let m = parse_system("[[1/z, i], [0, -(2+3*i)/(z^2+1)]]").unwrap();
    assert_eq!(m.rows(), 2);
    assert!(parse_system("[[1, 2], [3]]").is_err());
    assert!(parse_system("[[1/(z-z)]]").is_err());
    assert!(parse_expr("z +").is_err());
}
