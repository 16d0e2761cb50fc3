//! Closed polygonal paths in the punctured plane and the standard generating
//! loops ("lassos") around a finite pole set.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Closed polygon starting and ending at `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub base: Complex64,
    pub vertices: Vec<Complex64>,
}

const CLOSE_TOL: f64 = 1e-12;

impl Loop {
    pub fn new(base: Complex64, vertices: Vec<Complex64>) -> Result<Self> {
        let l = Loop { base, vertices };
        l.check_closed()?;
        Ok(l)
    }

    pub fn check_closed(&self) -> Result<()> {
        let scale = 1.0 + self.base.norm();
        match (self.vertices.first(), self.vertices.last()) {
            (Some(a), Some(b))
                if self.vertices.len() >= 2
                    && (a - self.base).norm() <= CLOSE_TOL * scale
                    && (b - self.base).norm() <= CLOSE_TOL * scale =>
            {
                Ok(())
            }
            _ => Err(Error::InvalidInput(
                "loop must have at least two vertices and start and end at its base point".into(),
            )),
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Smallest distance from the polygon to `p`.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        self.segments()
            .map(|(a, b)| segment_distance(a, b, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Require every segment to stay at least `clearance` away from every pole.
    pub fn check_clearance(&self, poles: &[Complex64], clearance: f64) -> Result<()> {
        for &p in poles {
            let d = self.distance_to(p);
            if d < clearance {
                return Err(Error::DegenerateGeometry(format!(
                    "loop passes within {d:.3e} of pole {}{:+}i (clearance {clearance:.3e})",
                    p.re, p.im
                )));
            }
        }
        Ok(())
    }

    /// Mirror image under complex conjugation, vertex by vertex.
    pub fn conj(&self) -> Loop {
        Loop {
            base: self.base.conj(),
            vertices: self.vertices.iter().map(|v| v.conj()).collect(),
        }
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Loop {
        Loop {
            base: self.base,
            vertices: self.vertices.iter().rev().cloned().collect(),
        }
    }

    /// `self` followed by `other`; both must share the base point.
    pub fn concat(&self, other: &Loop) -> Result<Loop> {
        if (self.base - other.base).norm() > CLOSE_TOL * (1.0 + self.base.norm()) {
            return Err(Error::InvalidInput("loops have different base points".into()));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().skip(1));
        Ok(Loop {
            base: self.base,
            vertices,
        })
    }

    /// Insert `k - 1` equally spaced points into every segment.
    pub fn refined(&self, k: usize) -> Loop {
        let k = k.max(1);
        let mut vertices = vec![self.vertices[0]];
        for (a, b) in self.segments() {
            for j in 1..=k {
                vertices.push(a + (b - a) * (j as f64 / k as f64));
            }
        }
        Loop {
            base: self.base,
            vertices,
        }
    }

    /// Winding number around `p` (assumes the loop avoids `p`).
    pub fn winding_number(&self, p: Complex64) -> i64 {
        let total: f64 = self
            .segments()
            .map(|(a, b)| ((b - p) / (a - p)).arg())
            .sum();
        (total / (2.0 * PI)).round() as i64
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a) * d.conj()).re / len2;
    (p - (a + d * s.clamp(0.0, 1.0))).norm()
}

pub fn diameter(points: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for (k, a) in points.iter().enumerate() {
        for b in &points[k + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Default real base point `min(Re S) - 1 - diam(S)`.
pub fn default_base(poles: &[Complex64]) -> f64 {
    let min_re = poles.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
    if min_re.is_finite() {
        min_re - 1.0 - diameter(poles)
    } else {
        0.0
    }
}

/// `10^-3 · diam(S ∪ {base})`.
pub fn clearance_min(poles: &[Complex64], base: f64) -> f64 {
    let mut pts = poles.to_vec();
    pts.push(Complex64::new(base, 0.0));
    1e-3 * diameter(&pts)
}

/// Index of the conjugate partner of `poles[k]`, if it is in the set.
pub fn conjugate_partner(poles: &[Complex64], k: usize) -> Option<usize> {
    let p = poles[k];
    if p.im == 0.0 {
        return None;
    }
    let scale = 1.0 + p.norm();
    poles
        .iter()
        .position(|q| (q - p.conj()).norm() <= 1e-12 * scale)
}

/// Per-pole metadata of a standard loop family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopKind {
    /// Positively oriented lasso along a straight ray from the base.
    Lasso,
    /// Literal mirror image `τ∘α` of the lasso around the conjugate pole
    /// (index given); it winds once clockwise around its pole.
    Mirror(usize),
}

#[derive(Clone, Debug)]
pub struct StandardLoops {
    pub base: f64,
    pub clearance: f64,
    pub loops: Vec<Loop>,
    pub kinds: Vec<LoopKind>,
}

/// One loop per pole, each enclosing only its own pole.
///
/// A pole in the lower half plane whose conjugate is also present gets the
/// mirror image of its partner's loop, so that the loop family is literally
/// closed under `α ↦ τ∘α`; every other loop is a counterclockwise lasso.
pub fn standard_loops(poles: &[Complex64], base: Option<f64>) -> Result<StandardLoops> {
    let base = base.unwrap_or_else(|| default_base(poles));
    if !base.is_finite() {
        return Err(Error::InvalidInput("base point must be finite".into()));
    }
    let a = Complex64::new(base, 0.0);
    let clearance = clearance_min(poles, base);
    for (k, p) in poles.iter().enumerate() {
        if (p - a).norm() < 4.0 * clearance.max(f64::MIN_POSITIVE) {
            return Err(Error::DegenerateGeometry(format!(
                "base point {base} coincides with pole {}",
                k + 1
            )));
        }
        for (j, q) in poles.iter().enumerate().skip(k + 1) {
            if (p - q).norm() < 4.0 * clearance {
                return Err(Error::DegenerateGeometry(format!(
                    "poles {} and {} are closer than 4 x clearance ({:.3e})",
                    k + 1,
                    j + 1,
                    4.0 * clearance
                )));
            }
        }
    }
    // circle radius per pole: a quarter of the distance to anything else
    let rho: Vec<f64> = poles
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let others = poles
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, q)| (p - q).norm())
                .fold((p - a).norm(), f64::min);
            0.25 * others
        })
        .collect();

    let mut loops: Vec<Option<Loop>> = vec![None; poles.len()];
    let mut kinds = vec![LoopKind::Lasso; poles.len()];
    for k in 0..poles.len() {
        match conjugate_partner(poles, k) {
            Some(j) if poles[k].im < 0.0 => kinds[k] = LoopKind::Mirror(j),
            _ => loops[k] = Some(lasso(a, poles, &rho, k)),
        }
    }
    for k in 0..poles.len() {
        if let LoopKind::Mirror(j) = kinds[k] {
            loops[k] = Some(loops[j].as_ref().expect("partner built").conj());
        }
    }
    let loops: Vec<Loop> = loops.into_iter().map(|l| l.expect("every loop built")).collect();
    for l in &loops {
        l.check_clearance(poles, clearance)?;
    }
    Ok(StandardLoops {
        base,
        clearance,
        loops,
        kinds,
    })
}

fn lasso(a: Complex64, poles: &[Complex64], rho: &[f64], k: usize) -> Loop {
    let p = poles[k];
    let u = (p - a) / (p - a).norm();
    // circumscribed 16-gon: every edge stays at least rho from the pole
    let sides = 16;
    let r = rho[k] / (PI / sides as f64).cos();
    let entry = p - u * r;
    let approach = approach_path(a, entry, poles, rho, k);

    let mut vertices = approach.clone();
    let theta0 = (-u).arg();
    for j in 1..sides {
        let th = theta0 + 2.0 * PI * j as f64 / sides as f64;
        vertices.push(p + Complex64::from_polar(r, th));
    }
    vertices.push(entry);
    vertices.extend(approach.iter().rev().skip(1));
    Loop { base: a, vertices }
}

/// Straight path from `a` to `end`, detouring around every other pole that
/// comes within twice its circle radius.
fn approach_path(a: Complex64, end: Complex64, poles: &[Complex64], rho: &[f64], k: usize) -> Vec<Complex64> {
    let d = end - a;
    let len = d.norm();
    let u = d / len;
    let mut detours: Vec<(f64, Vec<Complex64>)> = Vec::new();
    for (j, &q) in poles.iter().enumerate() {
        if j == k {
            continue;
        }
        let radius = 2.0 * rho[j];
        let rel = (q - a) / u; // coordinates along (re) and across (im) the ray
        let (s, h) = (rel.re, rel.im);
        if h.abs() >= radius {
            continue;
        }
        let half = (radius * radius - h * h).sqrt();
        let (s0, s1) = (s - half, s + half);
        if s1 <= 0.0 || s0 >= len {
            continue;
        }
        // go around on the side away from q (left when q is on the ray)
        let side = if h > 0.0 { -1.0 } else { 1.0 };
        let start_ang = Complex64::new(s0 - s, -h).arg();
        let end_ang = Complex64::new(s1 - s, -h).arg();
        let mut sweep = end_ang - start_ang;
        // choose the arc whose midpoint lies on `side` of the ray
        // passing above (in ray coordinates) means sweeping clockwise around q
        if side > 0.0 {
            while sweep >= 0.0 {
                sweep -= 2.0 * PI;
            }
        } else {
            while sweep <= 0.0 {
                sweep += 2.0 * PI;
            }
        }
        let pieces = ((sweep.abs() / (PI / 8.0)).ceil() as usize).max(2);
        let r = radius / (sweep.abs() / (2.0 * pieces as f64)).cos();
        let mut pts = vec![a + u * s0];
        for m in 1..pieces {
            let th = start_ang + sweep * m as f64 / pieces as f64;
            pts.push(a + u * (Complex64::new(s, h) + Complex64::from_polar(r, th)));
        }
        pts.push(a + u * s1);
        detours.push((s0, pts));
    }
    detours.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut path = vec![a];
    for (_, pts) in detours {
        path.extend(pts);
    }
    path.push(end);
    path
}
