//! Critical points of rational functions with separated zeros and poles, the
//! convex hull bound for polynomials, and separation of exterior level curves.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitDisc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomials::{ComplexPoly, DEFAULT_ROOT_TOL};
use crate::tracer::{critical_level_curves, point_in_polygon, EmbeddedLevelGraph, LevelCurve, Tract};

/// Relative slack for disk and hull membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Points closer than this (relative) are treated as the same zero or pole.
const MERGE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Disk { center, radius }
    }

    /// Closed membership with slack `MEMBERSHIP_TOL * radius`.
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + MEMBERSHIP_TOL)
    }

    pub fn disjoint(&self, other: &Disk) -> bool {
        (self.center - other.center).norm() > self.radius + other.radius
    }
}

fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MERGE_TOL * (1.0 + a.norm().max(b.norm()))
}

fn group(points: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for &z in points {
        match out.iter_mut().find(|(w, _)| same_point(*w, z)) {
            Some(e) => e.1 += 1,
            None => out.push((z, 1)),
        }
    }
    out
}

/// Finite critical points of `prod(z - zeros) / prod(z - poles)`, listed with
/// multiplicity. An empty pole list means a polynomial.
///
/// The points off the zeros come from the logarithmic derivative
/// `sum m_k / (z - a_k)`, with poles weighted by minus their multiplicity; a
/// zero of multiplicity `m` contributes itself `m - 1` times.
pub fn rational_critical_points(zeros: &[Complex64], poles: &[Complex64]) -> Result<Vec<Complex64>> {
    if zeros.is_empty() {
        return Err(Error::InvalidInput("at least one zero is required".into()));
    }
    if !poles.is_empty() && poles.len() != zeros.len() {
        return Err(Error::InvalidInput(format!(
            "{} zeros and {} poles; counts must agree or the pole list be empty",
            zeros.len(),
            poles.len()
        )));
    }
    if zeros.iter().chain(poles).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("zeros and poles must be finite".into()));
    }
    let zs = group(zeros);
    let ps = group(poles);
    if let Some((z, _)) = zs.iter().find(|(z, _)| ps.iter().any(|(w, _)| same_point(*z, *w))) {
        return Err(Error::InvalidInput(format!("zero and pole coincide at {z}")));
    }
    let nodes: Vec<(Complex64, f64)> =
        zs.iter().map(|&(z, m)| (z, m as f64)).chain(ps.iter().map(|&(w, m)| (w, -(m as f64)))).collect();
    let mut s = ComplexPoly::zero();
    for (k, &(_, weight)) in nodes.iter().enumerate() {
        let others: Vec<Complex64> = nodes.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, n)| n.0).collect();
        s = s.sub(&ComplexPoly::from_roots(&others).scale(Complex64::new(-weight, 0.0)));
    }
    let mut out = Vec::new();
    for &(z, m) in &zs {
        out.extend(std::iter::repeat_n(z, m - 1));
    }
    if !s.is_zero() {
        for r in s.roots(DEFAULT_ROOT_TOL)? {
            out.extend(std::iter::repeat_n(r.value, r.multiplicity));
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// A critical point outside both disks.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub point: Complex64,
    /// Distances beyond the boundary of each disk.
    pub excess: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BocherReport {
    pub critical_points: Vec<Complex64>,
    pub violations: Vec<Violation>,
}

impl BocherReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every critical point lies in `disk1` or `disk2`, given all
/// zeros in `disk1` and all poles in `disk2`. With no poles `disk2` may be
/// omitted.
pub fn check_bocher(zeros: &[Complex64], poles: &[Complex64], disk1: Disk, disk2: Option<Disk>) -> Result<BocherReport> {
    let disks: Vec<Disk> = std::iter::once(disk1).chain(disk2).collect();
    if disks.iter().any(|d| !(d.radius > 0.0)) {
        return Err(Error::InvalidInput("disk radii must be positive".into()));
    }
    if let Some(d2) = disk2 {
        if !disk1.disjoint(&d2) {
            return Err(Error::InvalidInput("disks overlap".into()));
        }
    } else if !poles.is_empty() {
        return Err(Error::InvalidInput("poles given without a second disk".into()));
    }
    if let Some(z) = zeros.iter().find(|z| !disk1.contains(**z)) {
        return Err(Error::InvalidInput(format!("zero {z} lies outside the first disk")));
    }
    if let Some(w) = poles.iter().find(|w| !disk2.is_some_and(|d| d.contains(**w))) {
        return Err(Error::InvalidInput(format!("pole {w} lies outside the second disk")));
    }
    let critical_points = rational_critical_points(zeros, poles)?;
    let violations = critical_points
        .iter()
        .filter(|z| !disks.iter().any(|d| d.contains(**z)))
        .map(|&z| Violation { point: z, excess: disks.iter().map(|d| (z - d.center).norm() - d.radius).collect() })
        .collect();
    Ok(BocherReport { critical_points, violations })
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull in counterclockwise order (monotone chain). Collinear and
/// repeated points are dropped, so the hull may have one or two vertices.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let s = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * s)).norm()
}

/// Euclidean distance from `z` to the convex hull returned by [`convex_hull`].
pub fn hull_distance(z: Complex64, hull: &[Complex64]) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        _ => {
            let inside = hull.len() >= 3 && (0..hull.len()).all(|i| cross(hull[i], hull[(i + 1) % hull.len()], z) >= 0.0);
            if inside {
                0.0
            } else {
                (0..hull.len()).map(|i| segment_distance(z, hull[i], hull[(i + 1) % hull.len()])).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Critical points of `prod(z - zeros)` farther than the slack from the convex
/// hull of the zeros.
pub fn check_gauss_lucas(zeros: &[Complex64]) -> Result<BocherReport> {
    let critical_points = rational_critical_points(zeros, &[])?;
    let hull = convex_hull(zeros);
    let size = zeros.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let violations = critical_points
        .iter()
        .map(|&z| (z, hull_distance(z, &hull)))
        .filter(|&(_, d)| d > MEMBERSHIP_TOL * (1.0 + size))
        .map(|(z, d)| Violation { point: z, excess: vec![d] })
        .collect();
    Ok(BocherReport { critical_points, violations })
}

/// One random rational function with its separating disks.
#[derive(Clone, Debug, Serialize)]
pub struct BocherInstance {
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub disk1: Disk,
    pub disk2: Disk,
}

fn in_disk(rng: &mut ChaCha8Rng, d: &Disk) -> Complex64 {
    let [x, y]: [f64; 2] = UnitDisc.sample(rng);
    d.center + Complex64::new(x, y) * d.radius
}

/// `count` random instances with degree at most `max_degree`: two disjoint
/// disks, zeros and poles uniform in them.
pub fn random_bocher_instances(count: usize, max_degree: usize, seed: u64) -> Vec<BocherInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_degree.max(1));
            let r1 = rng.random_range(0.1..2.0);
            let r2 = rng.random_range(0.1..2.0);
            let c1 = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let gap = rng.random_range(0.01..2.0);
            let c2 = c1 + Complex64::from_polar(r1 + r2 + gap, rng.random_range(0.0..std::f64::consts::TAU));
            let disk1 = Disk::new(c1, r1);
            let disk2 = Disk::new(c2, r2);
            let zeros = (0..n).map(|_| in_disk(&mut rng, &disk1)).collect();
            let poles = (0..n).map(|_| in_disk(&mut rng, &disk2)).collect();
            BocherInstance { zeros, poles, disk1, disk2 }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub instances: usize,
    /// Failing instances with their violations.
    pub counterexamples: Vec<(BocherInstance, Vec<Violation>)>,
}

impl SuiteReport {
    pub fn passes(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Runs [`check_bocher`] over random instances.
pub fn bocher_suite(count: usize, max_degree: usize, seed: u64) -> Result<SuiteReport> {
    let instances = random_bocher_instances(count, max_degree, seed);
    let reports: Vec<BocherReport> = instances
        .par_iter()
        .map(|i| check_bocher(&i.zeros, &i.poles, i.disk1, Some(i.disk2)))
        .collect::<Result<_>>()?;
    let counterexamples = instances
        .into_iter()
        .zip(reports)
        .filter(|(_, r)| !r.passes())
        .map(|(i, r)| (i, r.violations))
        .collect();
    Ok(SuiteReport { instances: count, counterexamples })
}

/// Runs [`check_gauss_lucas`] over random polynomials with zeros in a disk;
/// the instances carry no poles.
pub fn gauss_lucas_suite(count: usize, max_degree: usize, seed: u64) -> Result<SuiteReport> {
    let instances: Vec<BocherInstance> = random_bocher_instances(count, max_degree, seed)
        .into_iter()
        .map(|mut i| {
            i.poles.clear();
            i
        })
        .collect();
    let reports: Vec<BocherReport> = instances.par_iter().map(|i| check_gauss_lucas(&i.zeros)).collect::<Result<_>>()?;
    let counterexamples = instances
        .into_iter()
        .zip(reports)
        .filter(|(_, r)| !r.passes())
        .map(|(i, r)| (i, r.violations))
        .collect();
    Ok(SuiteReport { instances: count, counterexamples })
}

/// A connected piece of a level set of a tract: a traced regular curve or a
/// critical level graph.
pub trait LevelSet {
    fn level(&self) -> f64;
    /// Some point of the set.
    fn sample(&self) -> Complex64;
    /// Whether `z` lies in a bounded face.
    fn encloses(&self, z: Complex64) -> bool;
}

impl LevelSet for LevelCurve {
    fn level(&self) -> f64 {
        self.level
    }

    fn sample(&self) -> Complex64 {
        self.points[0]
    }

    fn encloses(&self, z: Complex64) -> bool {
        point_in_polygon(z, &self.points)
    }
}

impl LevelSet for EmbeddedLevelGraph {
    fn level(&self) -> f64 {
        self.level
    }

    fn sample(&self) -> Complex64 {
        self.vertices[0].location
    }

    fn encloses(&self, z: Complex64) -> bool {
        (0..self.faces.len()).any(|f| self.face_contains(f, z))
    }
}

/// A critical level curve with two given curves in different bounded faces.
#[derive(Clone, Debug, Serialize)]
pub struct Separation {
    /// Index into [`Tract::critical`].
    pub critical: usize,
    pub point: Complex64,
    pub level: f64,
    /// Bounded faces of `graph` holding the first and second curve.
    pub faces: (usize, usize),
    pub graph: EmbeddedLevelGraph,
}

/// Finds the lowest critical level curve of `t` whose bounded faces separate
/// `a` from `b`. The two sets must lie in each other's unbounded face.
pub fn check_separation<A: LevelSet + ?Sized, B: LevelSet + ?Sized>(t: &Tract, a: &A, b: &B) -> Result<Separation> {
    let graphs = critical_level_curves(t)?;
    separate(&graphs, a, b)
}

pub(crate) fn separate<A: LevelSet + ?Sized, B: LevelSet + ?Sized>(
    graphs: &[EmbeddedLevelGraph],
    a: &A,
    b: &B,
) -> Result<Separation> {
    let (za, zb) = (a.sample(), b.sample());
    if a.encloses(zb) || b.encloses(za) {
        return Err(Error::InvalidInput("the level sets are not mutually exterior".into()));
    }
    let floor = a.level().max(b.level());
    for g in graphs.iter().filter(|g| g.level > floor * (1.0 + 1e-12)) {
        let fa = (0..g.faces.len()).find(|&f| g.face_contains(f, za));
        let fb = (0..g.faces.len()).find(|&f| g.face_contains(f, zb));
        if let (Some(fa), Some(fb)) = (fa, fb) {
            if fa != fb {
                let shared = |v: &usize| g.faces[fa].boundary.contains(v) && g.faces[fb].boundary.contains(v);
                let v = (0..g.vertices.len()).find(shared).unwrap_or(0);
                let critical = g.vertices[v].critical;
                return Ok(Separation { critical, point: g.vertices[v].location, level: g.level, faces: (fa, fb), graph: g.clone() });
            }
        }
    }
    Err(Error::NoSeparation)
}

/// Outcome of checking every mutually exterior pair of critical level curves.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub pairs: usize,
    /// Index pairs into the critical level curves for which no separator was found.
    pub failures: Vec<(usize, usize)>,
}

/// Runs [`check_separation`] on every mutually exterior pair of critical
/// level curves of `t`.
pub fn separation_pairs(t: &Tract) -> Result<SeparationReport> {
    let graphs = critical_level_curves(t)?;
    let mut pairs = 0;
    let mut failures = Vec::new();
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            let (a, b) = (&graphs[i], &graphs[j]);
            if a.encloses(b.sample()) || b.encloses(a.sample()) {
                continue;
            }
            pairs += 1;
            match separate(&graphs, a, b) {
                Ok(_) => {}
                Err(Error::NoSeparation) => failures.push((i, j)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(SeparationReport { pairs, failures })
}
