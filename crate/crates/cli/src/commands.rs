//! Subcommand implementations. Each returns the report body.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use pvd_core::algebra::{format_matrix, numeric, parse_expr, parse_system, ExactMatrix, RatFuncMatrix};
use pvd_core::descent::{descent_report, find_constant_gauge, gauge_transform, mu_descend, Cocycle, DescentReport, GaugeTransform};
use pvd_core::linalg;
use pvd_core::monodromy::rep::loops_from_json;
use pvd_core::monodromy::{check_conjugation_formula, monodromy_rep_with, product_around_all, standard_loops, FloatSystem, Loop, LoopKind};
use pvd_core::realize::{expected_block_image, realize_and_descend, Realization, TargetData};
use pvd_core::series::{fundamental_series, Mode};
use pvd_core::Error;

use crate::error::CliError;
use crate::format;
use crate::{Command, RunConfig};

type Result<T> = std::result::Result<T, CliError>;

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<String> {
    match cmd {
        Command::Solve { system, center } => solve(system, center, cfg),
        Command::Monodromy {
            system,
            loops,
            auto,
            base,
            check_conjugation,
        } => {
            if loops.is_none() && !auto {
                return Err(CliError::Usage("monodromy needs --loops FILE or --auto".into()));
            }
            monodromy(system, loops.as_deref(), *base, *check_conjugation, cfg)
        }
        Command::ConjugateCheck { system, loops, base } => conjugate_check(system, loops.as_deref(), *base, cfg),
        Command::Gauge { system, by, check, find } => gauge(system, by.as_deref(), check.as_deref(), find.as_deref(), cfg),
        Command::Descend { system, cocycle } => descend(system, cocycle.as_deref(), cfg),
        Command::Realize { targets } => realize(targets, cfg, false),
        Command::Pipeline { targets } => realize(targets, cfg, true),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn read_system(path: &Path) -> Result<RatFuncMatrix> {
    Ok(parse_system(&read(path)?)?)
}

fn read_constant(path: &Path) -> Result<ExactMatrix> {
    read_system(path)?
        .as_constant()
        .ok_or_else(|| Error::InvalidInput(format!("{} must hold a constant matrix", path.display())).into())
}

fn save_artifact(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => write(path, text),
        None => Ok(()),
    }
}

fn solve(path: &Path, center: &str, cfg: &RunConfig) -> Result<String> {
    let a = read_system(path)?;
    let c = parse_expr(center)?
        .as_constant()
        .ok_or_else(|| Error::InvalidInput(format!("center {center:?} is not a constant")))?;
    let order = cfg.continuation.order;
    let mut lines = Vec::with_capacity(order);
    let radius = match cfg.mode {
        Mode::Exact => {
            let w = fundamental_series(&a, &c, order, None)?;
            for (k, m) in w.coeffs.iter().enumerate() {
                lines.push(format!("W_{k} = {}", format_matrix(&m.to_ratfunc())));
            }
            w.radius_hint
        }
        Mode::Float => {
            let w = fundamental_series(&a, &c.to_complex(), order, None)?;
            for (k, m) in w.coeffs.iter().enumerate() {
                lines.push(format!("W_{k} = {}", format::matrix(m)));
            }
            w.radius_hint
        }
    };
    let series = lines.join("\n") + "\n";
    save_artifact(cfg, &series)?;
    let mut out = String::new();
    let _ = writeln!(out, "system: {}", format_matrix(&a));
    let _ = writeln!(out, "center: {c}");
    let _ = writeln!(out, "mode: {}", if cfg.mode == Mode::Exact { "exact" } else { "float" });
    let _ = writeln!(out, "order: {order}");
    let _ = writeln!(out, "radius of convergence: {}", if radius.is_finite() { format::real(radius) } else { "infinite".into() });
    out.push_str(&series);
    Ok(out)
}

struct LoopSource {
    loops: Vec<Loop>,
    labels: Vec<String>,
    standard: Option<pvd_core::monodromy::StandardLoops>,
}

fn load_loops(poles: &[Complex64], file: Option<&Path>, base: Option<f64>) -> Result<LoopSource> {
    if let Some(path) = file {
        let loops = loops_from_json(&read(path)?)?;
        let labels = (1..=loops.len()).map(|k| format!("loop {k}")).collect();
        return Ok(LoopSource {
            loops,
            labels,
            standard: None,
        });
    }
    if poles.is_empty() {
        return Err(Error::Precondition("the system has no finite poles, so there are no standard loops".into()).into());
    }
    let family = standard_loops(poles, base)?;
    let labels = family
        .kinds
        .iter()
        .enumerate()
        .map(|(k, kind)| match kind {
            LoopKind::Lasso => format!("loop {} (lasso around {})", k + 1, format::complex(poles[k])),
            LoopKind::Mirror(j) => format!("loop {} (mirror of loop {}, around {})", k + 1, j + 1, format::complex(poles[k])),
        })
        .collect();
    Ok(LoopSource {
        loops: family.loops.clone(),
        labels,
        standard: Some(family),
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn monodromy(path: &Path, loops: Option<&Path>, base: Option<f64>, check: bool, cfg: &RunConfig) -> Result<String> {
    let a = read_system(path)?;
    let sys = FloatSystem::new(&a)?;
    let poles = numeric::finite_poles(&a);
    let src = load_loops(&poles, loops, base)?;
    let (rep, err) = monodromy_rep_with(&sys, &src.loops, &cfg.continuation)?;
    save_artifact(cfg, &rep.to_json())?;

    let mut out = String::new();
    let _ = writeln!(out, "system: {}", format_matrix(&a));
    let _ = writeln!(out, "base: {}", format::complex(rep.base));
    let _ = writeln!(out, "loops: {}", rep.loops.len());
    for (label, m) in src.labels.iter().zip(&rep.matrices) {
        let _ = writeln!(out, "{label}: {}", format::matrix(m));
    }
    let _ = writeln!(out, "max error estimate: {}", format::norm(err));
    if let Some(family) = &src.standard {
        let total = product_around_all(&rep, family, &poles)?;
        let _ = writeln!(out, "product around all poles: {}", format::matrix(&total));
    }
    if check {
        let report = check_conjugation_formula(&a, &src.loops, &cfg.continuation)?;
        let ok = report.max_deviation <= cfg.continuation.tol_mono;
        let _ = writeln!(
            out,
            "conjugation check: max deviation {} (tolerance {}) {}",
            format::norm(report.max_deviation),
            format::norm(cfg.continuation.tol_mono),
            verdict(ok)
        );
    }
    Ok(out)
}

fn conjugate_check(path: &Path, loops: Option<&Path>, base: Option<f64>, cfg: &RunConfig) -> Result<String> {
    let a = read_system(path)?;
    let poles = numeric::finite_poles(&a);
    let src = load_loops(&poles, loops, base)?;
    let report = check_conjugation_formula(&a, &src.loops, &cfg.continuation)?;
    let mut out = String::new();
    let _ = writeln!(out, "system: {}", format_matrix(&a));
    let _ = writeln!(out, "conjugate system: {}", format_matrix(&a.conjugate()));
    for (label, d) in src.labels.iter().zip(&report.deviations) {
        let _ = writeln!(out, "{label}: deviation {}", format::norm(*d));
    }
    let ok = report.max_deviation <= cfg.continuation.tol_mono;
    let _ = writeln!(
        out,
        "max deviation: {} (tolerance {}) {}",
        format::norm(report.max_deviation),
        format::norm(cfg.continuation.tol_mono),
        verdict(ok)
    );
    Ok(out)
}

fn gauge(path: &Path, by: Option<&Path>, check: Option<&Path>, find: Option<&Path>, cfg: &RunConfig) -> Result<String> {
    let a = read_system(path)?;
    let mut out = String::new();
    let _ = writeln!(out, "system: {}", format_matrix(&a));
    if let Some(target) = find {
        let b = read_system(target)?;
        let _ = writeln!(out, "target: {}", format_matrix(&b));
        match find_constant_gauge(&a, &b)? {
            Some(c) => {
                let text = format_matrix(&c.to_ratfunc());
                save_artifact(cfg, &(text.clone() + "\n"))?;
                let _ = writeln!(out, "constant gauge: {text}");
            }
            None => {
                let _ = writeln!(out, "constant gauge: none");
            }
        }
        return Ok(out);
    }
    let c = read_system(by.expect("clap requires --by or --find"))?;
    let g = GaugeTransform::new(c)?;
    let b = gauge_transform(&a, &g)?;
    let text = format_matrix(&b);
    save_artifact(cfg, &(text.clone() + "\n"))?;
    let _ = writeln!(out, "gauge: {}", format_matrix(g.matrix()));
    let _ = writeln!(out, "result: {text}");
    if let Some(expected) = check {
        let e = read_system(expected)?;
        let _ = writeln!(out, "equivalent to {}: {}", format_matrix(&e), b == e);
    }
    Ok(out)
}

fn write_descent(out: &mut String, r: &DescentReport) {
    let _ = writeln!(out, "verdict: {}", r.verdict.describe());
    if let Some(c) = &r.certificate {
        let _ = writeln!(
            out,
            "certificate: {} ({})",
            format_matrix(&c.to_ratfunc()),
            if r.certificate_verified { "verified exactly" } else { "NOT verified" }
        );
    }
    match r.monodromy_deviation {
        Some(d) => {
            let _ = writeln!(out, "monodromy cross-check: deviation {} over {} loops", format::norm(d), r.loops_checked);
        }
        None if r.certificate.is_some() => {
            let _ = writeln!(out, "monodromy cross-check: vacuous (no finite poles)");
        }
        None => {}
    }
}

fn descend(path: &Path, cocycle: Option<&Path>, cfg: &RunConfig) -> Result<String> {
    let a = read_system(path)?;
    let chi = match cocycle {
        Some(p) => Cocycle::new(read_constant(p)?)?,
        None => Cocycle::trivial(a.rows()),
    };
    let report = descent_report(&a, &cfg.continuation)?;
    let d = mu_descend(&a, &chi)?;
    let real = format_matrix(&d.real_system);
    save_artifact(cfg, &(real.clone() + "\n"))?;

    let mut out = String::new();
    let _ = writeln!(out, "system: {}", format_matrix(&a));
    let _ = writeln!(out, "conjugate system: {}", format_matrix(&a.conjugate()));
    if chi.is_trivial() {
        let _ = writeln!(out, "cocycle: trivial");
    } else {
        let _ = writeln!(out, "cocycle: {}", format_matrix(&chi.matrix().to_ratfunc()));
        let _ = writeln!(out, "splitting: {}", format_matrix(&d.splitting.to_ratfunc()));
        let _ = writeln!(out, "representative: {}", format_matrix(&d.representative));
    }
    write_descent(&mut out, &report);
    let _ = writeln!(out, "real system: {real}");
    Ok(out)
}

fn realize(path: &Path, cfg: &RunConfig, reverify: bool) -> Result<String> {
    let t = TargetData::from_json(&read(path)?)?;
    let r = realize_and_descend(&t, &cfg.pipeline())?;
    let mut out = String::new();
    write_realization(&mut out, &t, &r, cfg);
    if reverify {
        reverify_rendered(&mut out, &r, cfg)?;
    }
    if let Some(dir) = &cfg.output {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.clone(),
            source,
        })?;
        let file = |name: &str| -> PathBuf { dir.join(name) };
        write(&file("complex.txt"), &(format_matrix(&r.complex) + "\n"))?;
        write(&file("real.txt"), &(format_matrix(&r.real) + "\n"))?;
        write(&file("report.txt"), &out)?;
    }
    Ok(out)
}

fn write_realization(out: &mut String, t: &TargetData, r: &Realization, cfg: &RunConfig) {
    let s = &r.targets;
    let rep = &r.report;
    let _ = writeln!(out, "generators: {}, dimension {}", t.generators.len(), t.dim());
    let _ = writeln!(out, "seed: {}", cfg.seed);
    let _ = writeln!(out, "base: {}", format::real(s.family.base));
    for (k, p) in s.poles.iter().enumerate() {
        let _ = writeln!(out, "pole {}: {} target {}", k + 1, format::complex(*p), format::matrix(&s.targets.matrices[k]));
    }
    let _ = writeln!(out, "newton iterations: {}", rep.iterations);
    let history: Vec<String> = rep.newton_history.iter().map(|x| format::norm(*x)).collect();
    let _ = writeln!(out, "newton residuals: {}", history.join(" "));
    for b in &rep.branches {
        let how = match b.mirrored_from {
            Some(j) => format!("conjugate of pole {}", j + 1),
            None => format!("{:?} logarithm, {} eigenvalues on the branch cut", b.method, b.on_branch_cut),
        };
        let _ = writeln!(out, "branch at pole {}: {how}", b.pole + 1);
    }
    for (k, b) in r.system.residues().iter().enumerate() {
        let _ = writeln!(out, "residue {}: {}", k + 1, format::matrix(b));
    }
    let _ = writeln!(out, "residue at infinity: {}", format::matrix(&r.system.residue_at_infinity()));
    for (k, (m, tr)) in rep.monodromy_residuals.iter().zip(&rep.trace_defects).enumerate() {
        let _ = writeln!(
            out,
            "loop {}: monodromy residual {} trace defect {} real block residual {}",
            k + 1,
            format::norm(*m),
            format::norm(*tr),
            format::norm(rep.real_block_residuals[k])
        );
    }
    let _ = writeln!(
        out,
        "max monodromy residual: {} (tolerance {}) {}",
        format::norm(rep.max_monodromy_residual()),
        format::norm(cfg.tol_newton),
        verdict(rep.max_monodromy_residual() <= cfg.tol_newton.max(cfg.continuation.tol_mono))
    );
    let _ = writeln!(out, "conjugation deviation: {}", format::norm(rep.conjugation_deviation));
    let _ = writeln!(out, "symmetry defect: {}", format::norm(rep.symmetry_defect));
    write_descent(out, &rep.descent);
    let _ = writeln!(out, "real coefficients exact: {}", r.real.is_real());
    let _ = writeln!(out, "complex system: {}", format_matrix(&r.complex));
    let _ = writeln!(out, "real system: {}", format_matrix(&r.real));
}

/// Reload both rendered systems from their text form and recompute their
/// monodromy from scratch.
fn reverify_rendered(out: &mut String, r: &Realization, cfg: &RunConfig) -> Result<()> {
    let complex = parse_system(&format_matrix(&r.complex))?;
    let real = parse_system(&format_matrix(&r.real))?;
    let _ = writeln!(out, "text round trip: {}", verdict(complex == r.complex && real == r.real));
    let s = &r.targets;
    let (rep, _) = monodromy_rep_with(&FloatSystem::new(&complex)?, &s.family.loops, &cfg.continuation)?;
    let (real_rep, _) = monodromy_rep_with(&FloatSystem::new(&real)?, &s.family.loops, &cfg.continuation)?;
    let dev = rep
        .matrices
        .iter()
        .zip(&s.targets.matrices)
        .map(|(m, c)| linalg::max_abs_diff(m, c))
        .fold(0.0, f64::max);
    let real_dev = real_rep
        .matrices
        .iter()
        .enumerate()
        .map(|(k, m)| linalg::max_abs_diff(m, &expected_block_image(s, k)))
        .fold(0.0, f64::max);
    let _ = writeln!(out, "reloaded complex system monodromy residual: {}", format::norm(dev));
    let _ = writeln!(out, "reloaded real system block residual: {}", format::norm(real_dev));
    let exact_real = real.entries().iter().all(|f| f.is_real());
    let _ = writeln!(out, "reloaded real system has real coefficients: {exact_real}");
    let pole_count = numeric::finite_poles(&complex).len();
    let _ = writeln!(out, "reloaded finite poles: {pole_count}");
    Ok(())
}
