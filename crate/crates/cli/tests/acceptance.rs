//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.
//!
//! Reference values come from oracles written here, independently of the
//! library: binomial Taylor shifts and long division for power series, a
//! scaling-and-squaring matrix exponential, closed-form monodromy of scalar
//! residues, and a hand-written block map.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pvd_core::algebra::{
    parse_system, ExactMatrix, Field, GaussianRational, Matrix, Poly, RatFuncMatrix, RationalFunction,
};
use pvd_core::descent::mu_block;
use pvd_core::linalg::CMatrix;
use pvd_core::monodromy::{check_conjugation_formula, continue_along_exact, monodromy_rep, standard_loops, ContinuationOptions};
use pvd_core::realize::{realize_and_descend, PipelineOptions, RefineOptions, TargetData};
use pvd_core::series::fundamental_series;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type G = GaussianRational;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("series recursion", series_recursion),
        ("monodromy oracle", monodromy_oracle),
        ("conjugation formula", conjugation_formula),
        ("golden descent examples", golden_descent),
        ("block map homomorphism", block_map_homomorphism),
        ("inverse pipeline, commuting", pipeline_commuting),
        ("inverse pipeline, near identity", pipeline_near_identity),
        ("composition contract", composition_contract),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {} ({name}): {} [{}; {:.1} s]",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}

// ---------- random exact data ----------

fn small_gaussian(rng: &mut ChaCha8Rng) -> G {
    G::from_parts(rng.gen_range(-3..=3), rng.gen_range(1..=3), rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs((0..=deg).map(|_| small_gaussian(rng)).collect())
}

fn random_ratfunc(rng: &mut ChaCha8Rng) -> RationalFunction {
    if rng.gen_range(0..4) == 0 {
        return RationalFunction::zero();
    }
    let num = random_poly(rng, 2);
    let mut den = random_poly(rng, 2);
    if den.is_zero() {
        den = Poly::one();
    }
    RationalFunction::new(num, den)
}

// ---------- oracles ----------

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// Coefficients of `p(c + t)` in `t`, by binomial expansion of each power.
fn shift_oracle(p: &Poly, c: &G) -> Vec<G> {
    let coeffs = p.coeffs();
    let mut out = vec![G::zero(); coeffs.len().max(1)];
    for (k, a) in coeffs.iter().enumerate() {
        let mut cpow = G::one();
        // term a·C(k, k-j)·c^{k-j}·t^j, walking j downward from k
        for j in (0..=k).rev() {
            let term = a.mul_ref(&cpow).mul_ref(&G::from_integer(binomial(k, j)));
            out[j] = out[j].add_ref(&term);
            cpow = cpow.mul_ref(c);
        }
    }
    out
}

/// Long division of power series.
fn divide_oracle(num: &[G], den: &[G], order: usize) -> Vec<G> {
    let mut rem: Vec<G> = (0..order).map(|k| num.get(k).cloned().unwrap_or_else(G::zero)).collect();
    let d0 = den[0].clone();
    let mut q = Vec::with_capacity(order);
    for k in 0..order {
        let qk = rem[k].div_ref(&d0);
        for (j, d) in den.iter().enumerate().skip(1) {
            if k + j < order {
                rem[k + j] = rem[k + j].sub_ref(&qk.mul_ref(d));
            }
        }
        q.push(qk);
    }
    q
}

fn taylor_oracle(a: &RatFuncMatrix, c: &G, order: usize) -> Vec<ExactMatrix> {
    let n = a.rows();
    let mut out = vec![Matrix::zeros(n, n); order];
    for r in 0..n {
        for s in 0..n {
            let f = a.get(r, s);
            let series = divide_oracle(&shift_oracle(f.numerator(), c), &shift_oracle(f.denominator(), c), order);
            for (k, v) in series.into_iter().enumerate() {
                out[k].set(r, s, v);
            }
        }
    }
    out
}

fn is_pole(a: &RatFuncMatrix, c: &G) -> bool {
    a.entries().iter().any(|f| f.denominator().eval(c).is_zero())
}

/// A matrix over Q(i) as Gaussian-integer entries `(re, im)` over one
/// positive denominator, so the identity check below needs no rational gcds.
struct Integral {
    cols: usize,
    entries: Vec<(BigInt, BigInt)>,
    den: BigInt,
}

fn integral(m: &ExactMatrix) -> Integral {
    let den = m
        .entries()
        .iter()
        .fold(BigInt::one(), |d, x| d.lcm(x.re().denom()).lcm(x.im().denom()));
    let lift = |q: &BigRational| q.numer() * (&den / q.denom());
    Integral {
        cols: m.cols(),
        entries: m.entries().iter().map(|x| (lift(x.re()), lift(x.im()))).collect(),
        den: den.clone(),
    }
}

/// Numerators of `a·b` over the denominator `a.den·b.den`.
fn integral_product(a: &Integral, b: &Integral) -> Vec<(BigInt, BigInt)> {
    let rows = a.entries.len() / a.cols;
    let mut out = vec![(BigInt::zero(), BigInt::zero()); rows * b.cols];
    for r in 0..rows {
        for c in 0..b.cols {
            let (re, im) = &mut out[r * b.cols + c];
            for k in 0..a.cols {
                let (x, y) = &a.entries[r * a.cols + k];
                let (u, v) = &b.entries[k * b.cols + c];
                *re += x * u - y * v;
                *im += x * v + y * u;
            }
        }
    }
    out
}

/// Every coefficient below `t^(order-1)` of `W' - A W` vanishes, that is
/// `(k+1)·W_{k+1} = Σ_{j≤k} A_j W_{k-j}` exactly. Both sides are brought to
/// the common denominator `Π` of all products and compared as integers.
fn check_series(a_coeffs: &[ExactMatrix], w: &[ExactMatrix]) -> bool {
    let a: Vec<Integral> = a_coeffs.iter().map(integral).collect();
    let w: Vec<Integral> = w.iter().map(integral).collect();
    for k in 0..w.len() - 1 {
        let lhs = &w[k + 1];
        let mut den = lhs.den.clone();
        for j in 0..=k {
            den = den.lcm(&(&a[j].den * &w[k - j].den));
        }
        let scale = &den / &lhs.den * BigInt::from(k + 1);
        let mut diff: Vec<(BigInt, BigInt)> = lhs.entries.iter().map(|(x, y)| (x * &scale, y * &scale)).collect();
        for j in 0..=k {
            let f = &den / (&a[j].den * &w[k - j].den);
            for ((re, im), (x, y)) in diff.iter_mut().zip(integral_product(&a[j], &w[k - j])) {
                *re -= x * &f;
                *im -= y * &f;
            }
        }
        if diff.iter().any(|(x, y)| !x.is_zero() || !y.is_zero()) {
            return false;
        }
    }
    true
}

type Dense = Vec<Vec<Complex64>>;

fn dense(m: &CMatrix) -> Dense {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn dmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

/// Scaling and squaring with a 30-term Taylor polynomial.
fn expm_oracle(a: &Dense) -> Dense {
    let n = a.len();
    let norm: f64 = a.iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scale = 0.5f64.powi(s);
    let x: Dense = a.iter().map(|r| r.iter().map(|z| z * scale).collect()).collect();
    let id: Dense = (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let mut sum = id.clone();
    let mut term = id;
    for k in 1..30 {
        term = dmul(&term, &x);
        term = term.iter().map(|r| r.iter().map(|z| z / k as f64).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        sum = dmul(&sum, &sum);
    }
    sum
}

/// `a + b·i` entrywise to `[[a, -b], [b, a]]`, interleaved.
fn block_oracle(m: &ExactMatrix) -> ExactMatrix {
    let mut out = Matrix::zeros(2 * m.rows(), 2 * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let a = G::real(m.get(r, c).re().clone());
            let b = G::real(m.get(r, c).im().clone());
            out.set(2 * r, 2 * c, a.clone());
            out.set(2 * r, 2 * c + 1, b.neg_ref());
            out.set(2 * r + 1, 2 * c, b);
            out.set(2 * r + 1, 2 * c + 1, a);
        }
    }
    out
}

/// `x ⊗ I_2`, interleaved like the block map.
fn doubled_oracle(m: &CMatrix) -> Dense {
    let n = m.rows();
    (0..2 * n)
        .map(|r| {
            (0..2 * n)
                .map(|c| if r % 2 == c % 2 { *m.get(r / 2, c / 2) } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect()
}

fn pvd(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pvd")).args(args).output().expect("run pvd");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn field<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key))
}

// ---------- criteria ----------

fn series_recursion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let order = 32;
    let mut bad = 0;
    let mut oracle_blind = false;
    let (mut solve_time, mut oracle_time, mut check_time) = (Duration::ZERO, Duration::ZERO, Duration::ZERO);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let a = Matrix::from_fn(n, n, |_, _| random_ratfunc(&mut rng));
        let mut c = small_gaussian(&mut rng);
        while is_pole(&a, &c) {
            c = small_gaussian(&mut rng);
        }
        let t = Instant::now();
        let w = fundamental_series(&a, &c, order, None).expect("ordinary point");
        solve_time += t.elapsed();
        let t = Instant::now();
        let a_coeffs = taylor_oracle(&a, &c, order);
        oracle_time += t.elapsed();
        let t = Instant::now();
        let ok = w.coeffs[0] == Matrix::identity(n) && check_series(&a_coeffs, &w.coeffs);
        // the checker must notice a single perturbed coefficient
        let mut broken = w.coeffs.clone();
        let k = rng.gen_range(1..order);
        let x = broken[k].get(0, 0).add_ref(&G::from_parts(1, 1_000_003, 0, 1));
        broken[k].set(0, 0, x);
        oracle_blind |= check_series(&a_coeffs, &broken);
        check_time += t.elapsed();
        if !ok {
            bad += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad == 0 && !oracle_blind && elapsed < Duration::from_secs(30),
        format!(
            "{bad} of 100 systems violate the recursion, perturbations detected: {}, {:.1} s of 30 s (series {:.1} s, oracle expansion {:.1} s, identity check {:.1} s)",
            !oracle_blind,
            elapsed.as_secs_f64(),
            solve_time.as_secs_f64(),
            oracle_time.as_secs_f64(),
            check_time.as_secs_f64()
        ),
    )
}

fn monodromy_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let opts = ContinuationOptions::default();
    let lp = standard_loops(&[Complex64::new(0.0, 0.0)], None).unwrap().loops[0].clone();
    let inv_z = RationalFunction::z().inv().unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let raw = Matrix::from_fn(n, n, |_, _| G::from_parts(rng.gen_range(-8..=8), 8, rng.gen_range(-8..=8), 8));
        // divide by an integer bounding the max row sum, so that |C| <= 1
        let row_sum = (0..n)
            .map(|r| raw.row(r).iter().map(|x| x.to_complex().norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let d = G::from_integer(row_sum.ceil().max(1.0) as i64);
        let c = raw.map(|x| x.div_ref(&d));
        let a = c.to_ratfunc().scale(&inv_z);
        let m = continue_along_exact(&a, &lp, &opts).expect("continuation").matrix;
        let two_pi_i_c: Dense = dense(&c.map(G::to_complex))
            .iter()
            .map(|r| r.iter().map(|z| z * Complex64::new(0.0, 2.0 * PI)).collect())
            .collect();
        worst = worst.max(max_diff(&dense(&m), &expm_oracle(&two_pi_i_c)));
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-7 && elapsed < Duration::from_secs(60),
        format!("max deviation from exp(2 pi i C) {worst:.2e} (limit 1e-7), {:.1} s of 60 s", elapsed.as_secs_f64()),
    )
}

fn conjugation_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let upper = [G::i(), G::from_parts(2, 1, 1, 1)];
    let poles: Vec<Complex64> = upper.iter().flat_map(|p| [p.to_complex(), p.conj().to_complex()]).collect();
    let family = standard_loops(&poles, None).unwrap();
    let opts = ContinuationOptions::default();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let mut a: RatFuncMatrix = Matrix::zeros(n, n);
        for s in &upper {
            let b = Matrix::from_fn(n, n, |_, _| G::from_parts(rng.gen_range(-4..=4), 10, rng.gen_range(-4..=4), 10));
            for (pole, res) in [(s.clone(), b.clone()), (s.conj(), b.conj())] {
                let inv = RationalFunction::from_poly(Poly::linear_factor(&pole)).inv().unwrap();
                a = a.add(&res.to_ratfunc().scale(&inv)).unwrap();
            }
        }
        let report = check_conjugation_formula(&a, &family.loops, &opts).expect("conjugation check");
        worst = worst.max(report.max_deviation);
    }
    outcome(worst < 1e-6, format!("max deviation {worst:.2e} over 20 systems x 4 loops (limit 1e-6)"))
}

fn golden_descent() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[[i]]", Some("[[0,-1],[1,0]]")),
        ("[[1+i]]", Some("[[1,-1],[1,1]]")),
        ("[[i/(z-2), 1],[z, (1+i)/(z+3)]]", None),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (k, (input, golden)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("a{k}.txt"));
        std::fs::write(&path, input).unwrap();
        let (code, report) = pvd(&["descend", path.to_str().unwrap()]);
        let real = field(&report, "real system: ").and_then(|t| parse_system(t).ok());
        let Some(real) = real.filter(|_| code == 0) else {
            pass = false;
            notes.push(format!("{input}: descend failed with exit {code}"));
            continue;
        };
        if let Some(g) = golden {
            if real != parse_system(g).unwrap() {
                pass = false;
                notes.push(format!("{input}: got {}", pvd_core::algebra::format_matrix(&real)));
            }
        }
        // the block image of the fundamental series solves the descended system
        let a = parse_system(input).unwrap();
        let zero = G::zero();
        let w = fundamental_series(&a, &zero, 33, None).unwrap();
        let v: Vec<ExactMatrix> = w.coeffs.iter().map(block_oracle).collect();
        if !check_series(&taylor_oracle(&real, &zero, 33), &v) {
            pass = false;
            notes.push(format!("{input}: block series fails the descended system"));
        }
    }
    let detail = if notes.is_empty() {
        "mu(i) and mu(1+i) exact; block series solve the real systems through order 32".to_string()
    } else {
        notes.join("; ")
    };
    outcome(pass, detail)
}

fn block_map_homomorphism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = |f: RationalFunction| Matrix::from_fn(1, 1, |_, _| f.clone());
    let mut bad = 0;
    for _ in 0..100 {
        let x = random_ratfunc(&mut rng);
        let y = random_ratfunc(&mut rng);
        let (mx, my) = (mu_block(&one(x.clone())), mu_block(&one(y.clone())));
        let sum = mu_block(&one(x.add_ref(&y))) == mx.add(&my).unwrap();
        let product = mu_block(&one(x.mul_ref(&y))) == mx.mul(&my).unwrap();
        let derivation = mu_block(&one(x.derivative())) == mx.derivative();
        let real = mx.is_real();
        // the top-left and bottom-left entries recover x = a + b·i
        let i = RationalFunction::constant(G::i());
        let recovered = mx.get(0, 0).add_ref(&i.mul_ref(mx.get(1, 0))) == x;
        if !(sum && product && derivation && real && recovered) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad} of 100 random functions violate sum, product or derivative identities"))
}

fn pipeline_commuting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = PipelineOptions::default();
    let (mut worst_mono, mut worst_block) = (0.0f64, 0.0f64);
    let mut all_real = true;
    for _ in 0..10 {
        let theta = rng.gen_range(-PI + 0.05..PI - 0.05);
        let lambda = Complex64::from_polar(1.0, theta);
        let t = TargetData::new(vec![Matrix::from_fn(1, 1, |_, _| lambda)], vec![Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0))], None).unwrap();
        let r = realize_and_descend(&t, &opts).expect("pipeline");
        let loops = &r.targets.family.loops;
        let rep = monodromy_rep(&r.complex, loops, &opts.refine.continuation).unwrap();
        for (m, target) in rep.matrices.iter().zip(&r.targets.targets.matrices) {
            worst_mono = worst_mono.max(max_diff(&dense(m), &dense(target)));
        }
        all_real &= r.real.entries().iter().all(|f| f.numerator().is_real() && f.denominator().is_real());
        let real_rep = monodromy_rep(&r.real, loops, &opts.refine.continuation).unwrap();
        for (m, target) in real_rep.matrices.iter().zip(&r.targets.targets.matrices) {
            worst_block = worst_block.max(max_diff(&dense(m), &doubled_oracle(target)));
        }
    }
    outcome(
        worst_mono < 1e-9 && all_real && worst_block < 1e-6,
        format!("monodromy residual {worst_mono:.2e} (limit 1e-9), real coefficients exact: {all_real}, block residual {worst_block:.2e} (limit 1e-6)"),
    )
}

fn pipeline_near_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    let opts = PipelineOptions {
        refine: RefineOptions {
            tol: 1e-8,
            max_iter: 25,
            ..Default::default()
        },
        ..Default::default()
    };
    let points = vec![Complex64::new(1.0, 1.0), Complex64::new(-1.0, 1.0)];
    let mut notes = Vec::new();
    let (mut worst, mut max_iter) = (0.0f64, 0usize);
    let mut certified = true;
    for case in 0..5 {
        let gens: Vec<CMatrix> = (0..2)
            .map(|_| {
                let e: Vec<Complex64> = (0..4).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                // Frobenius norm bounds the spectral norm, so |C - I| <= 0.3
                let frob = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let s = 0.3 * rng.gen_range(0.5..1.0) / frob;
                Matrix::from_fn(2, 2, |r, c| e[2 * r + c] * s + if r == c { 1.0 } else { 0.0 })
            })
            .collect();
        let t = TargetData::new(gens, points.clone(), None).unwrap();
        match realize_and_descend(&t, &opts) {
            Ok(r) => {
                max_iter = max_iter.max(r.report.iterations);
                let rep = monodromy_rep(&r.complex, &r.targets.family.loops, &opts.refine.continuation).unwrap();
                for (m, target) in rep.matrices.iter().zip(&r.targets.targets.matrices) {
                    worst = worst.max(max_diff(&dense(m), &dense(target)));
                }
                let d = &r.report.descent;
                certified &= d.certificate_verified && d.monodromy_deviation.is_some_and(|x| x < 1e-6);
            }
            Err(e) => notes.push(format!("case {}: {e}", case + 1)),
        }
    }
    let elapsed = start.elapsed();
    let pass = notes.is_empty() && worst < 1e-6 && max_iter <= 25 && certified && elapsed < Duration::from_secs(300);
    let mut detail = format!(
        "residual {worst:.2e} (limit 1e-6), at most {max_iter} iterations, certificates valid: {certified}, {:.1} s of 300 s",
        elapsed.as_secs_f64()
    );
    for n in notes {
        detail.push_str("; ");
        detail.push_str(&n);
    }
    outcome(pass, detail)
}

fn composition_contract() -> Outcome {
    let a = parse_system("[[(1/10)/(z-1) + (1/5)/(z+1), (1/5)/(z-1)],[(3/10)/(z+1), (-1/10+i/5)/(z-1) + (1/10)/(z+1)]]").unwrap();
    let poles = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    let family = standard_loops(&poles, None).unwrap();
    let opts = ContinuationOptions::default();
    let mono = |l: &pvd_core::monodromy::Loop| dense(&continue_along_exact(&a, l, &opts).unwrap().matrix);
    let (alpha, beta) = (&family.loops[0], &family.loops[1]);
    let (ma, mb) = (mono(alpha), mono(beta));
    let both = mono(&alpha.concat(beta).unwrap());
    let declared = max_diff(&both, &dmul(&mb, &ma));
    let swapped = max_diff(&both, &dmul(&ma, &mb));
    let refine_shift = [
        max_diff(&ma, &mono(&alpha.refined(4))),
        max_diff(&mb, &mono(&beta.refined(4))),
        max_diff(&both, &mono(&alpha.concat(beta).unwrap().refined(3))),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    outcome(
        declared < 1e-7 && refine_shift < 1e-8,
        format!(
            "M(alpha then beta) vs M(beta)M(alpha) {declared:.2e} (limit 1e-7; reversed order differs by {swapped:.2e}), refinement shift {refine_shift:.2e} (limit 1e-8)"
        ),
    )
}
