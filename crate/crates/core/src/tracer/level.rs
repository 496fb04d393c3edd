use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{newton_to, trace_gradient_line, GradientEnd, Tract};
use crate::configuration::{normalize_arg, Configuration, Face, GraphNode, ARG_SNAP};
use crate::error::{Error, Result};
use crate::polynomials::DEFAULT_TIE_TOL;

const MAX_DTHETA: f64 = TAU / 256.0;
const MAX_STEPS: usize = 400_000;
const CLOSE_TOL: f64 = 1e-7;

/// A traced closed level curve, parameterized by the continuous argument of `p`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelCurve {
    pub level: f64,
    pub points: Vec<Complex64>,
    pub thetas: Vec<f64>,
    /// Number of zeros enclosed: the total argument change over `2pi`.
    pub turns: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddedVertex {
    pub location: Complex64,
    /// Multiplicity as a zero of `p'`; the vertex has `2(k+1)` edge-ends.
    pub multiplicity: usize,
    /// Argument of `p` in `[0, 2pi)`.
    pub arg: f64,
    pub radius: f64,
    #[serde(skip)]
    pub(crate) critical: usize,
}

/// An edge of a critical level graph, oriented so that `arg p` increases.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddedEdge {
    pub start: usize,
    pub end: usize,
    /// Bounded sector at `start` on the left of the edge.
    pub start_sector: usize,
    /// Bounded sector at `end` on the left of the edge.
    pub end_sector: usize,
    pub chain: Vec<Complex64>,
    /// Continuous argument of `p` at each chain point.
    pub thetas: Vec<f64>,
    pub delta: f64,
    /// Interior points where `p` is real and positive, in order along the edge.
    pub distinguished: Vec<Complex64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddedFace {
    /// Vertices in counterclockwise order.
    pub boundary: Vec<usize>,
    /// `edges[i]` runs from `boundary[i]` to `boundary[i+1]`.
    pub edges: Vec<usize>,
    /// Zeros inside, from the total argument change.
    pub zeros: u32,
}

/// One connected critical level curve with its planar embedding.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddedLevelGraph {
    pub level: f64,
    pub vertices: Vec<EmbeddedVertex>,
    pub edges: Vec<EmbeddedEdge>,
    /// Bounded faces around each vertex, counterclockwise by sector.
    pub rotation: Vec<Vec<usize>>,
    pub faces: Vec<EmbeddedFace>,
    /// `vertex_edges[v][j]` is the edge leaving `v` from sector `j`.
    pub vertex_edges: Vec<Vec<usize>>,
}

impl EmbeddedLevelGraph {
    /// Number of edge-ends at a vertex.
    pub fn edge_ends(&self, v: usize) -> usize {
        2 * self.rotation[v].len()
    }

    /// Closed polygon around a bounded face.
    pub fn face_polygon(&self, f: usize) -> Vec<Complex64> {
        let mut out = Vec::new();
        for &e in &self.faces[f].edges {
            let chain = &self.edges[e].chain;
            out.extend_from_slice(&chain[..chain.len() - 1]);
        }
        out
    }

    pub fn face_contains(&self, f: usize, z: Complex64) -> bool {
        point_in_polygon(z, &self.face_polygon(f))
    }

    /// Sector index of face `f` at vertex `v`.
    pub fn sector_of(&self, v: usize, f: usize) -> Option<usize> {
        self.rotation[v].iter().position(|&g| g == f)
    }

    /// Location of the distinguished points of the configuration step
    /// `(f, i)`: the start vertex first when `p` is positive there, then the
    /// interior points of the edge.
    pub fn step_points(&self, (f, i): (usize, usize)) -> Vec<Complex64> {
        let face = &self.faces[f];
        let v = face.boundary[i];
        let mut out = Vec::new();
        if self.vertices[v].arg == 0.0 {
            out.push(self.vertices[v].location);
        }
        out.extend_from_slice(&self.edges[face.edges[i]].distinguished);
        out
    }

    /// The graph as a configuration node whose children are placeholder points.
    pub fn to_graph_node(&self) -> GraphNode {
        GraphNode {
            level: self.level,
            rotation: self.rotation.clone(),
            args: self.vertices.iter().map(|v| v.arg).collect(),
            faces: self
                .faces
                .iter()
                .map(|f| Face {
                    z: f.zeros,
                    boundary: f.boundary.clone(),
                    distinguished: f.edges.iter().map(|&e| self.edges[e].distinguished.len() as u32).collect(),
                    child: Box::new(Configuration::point(f.zeros)),
                    gradient_offset: 0,
                })
                .collect(),
        }
    }
}

/// Even-odd ray casting.
pub fn point_in_polygon(z: Complex64, poly: &[Complex64]) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Total change of `arg p` along a closed chain, in turns.
pub fn winding_number(t: &Tract, curve: &[Complex64]) -> Result<i64> {
    if curve.len() < 3 {
        return Err(Error::InvalidInput("chain has fewer than three points".into()));
    }
    let vals: Vec<Complex64> = curve.iter().map(|&z| t.eval(z)).collect();
    if vals.iter().any(|v| v.norm() == 0.0) {
        return Err(Error::InvalidInput("chain passes through a zero".into()));
    }
    let total: f64 = (0..vals.len()).map(|i| (vals[(i + 1) % vals.len()] / vals[i]).arg()).sum();
    let turns = total / TAU;
    let residual = (turns - turns.round()).abs();
    if residual >= 0.1 {
        return Err(Error::WindingResidual { turns, residual });
    }
    Ok(turns.round() as i64)
}

/// One predictor-corrector step along `|p| = h` from `(z, theta)`. Returns the
/// accepted step or `None` when the step must be shortened.
fn level_step(t: &Tract, h: f64, z: Complex64, theta: f64, dth: f64) -> Option<Complex64> {
    let (pz, dpz) = t.eval_d(z);
    let dz = Complex64::i() * pz / dpz * dth;
    let pred = z + dz;
    let target = Complex64::from_polar(h, theta + dth);
    let znew = newton_to(t, pred, target, 8)?;
    ((znew - pred).norm() <= 0.25 * dz.norm() + 1e-14 * (1.0 + z.norm())).then_some(znew)
}

/// Largest argument step allowed at `z`.
fn step_cap(t: &Tract, z: Complex64) -> f64 {
    let (pz, dpz) = t.eval_d(z);
    let speed = pz.norm() / dpz.norm();
    MAX_DTHETA.min(0.05 * t.distance_to_critical(z) / speed)
}

/// Traces the component of `{|p| = eps}` through (a point near) `seed` once
/// around, until the argument has advanced by a multiple of `2pi` and the curve
/// has closed.
pub fn trace_level_component(t: &Tract, seed: Complex64, eps: f64) -> Result<LevelCurve> {
    let p0 = t.eval(seed);
    if !(eps > 0.0) || p0.norm() == 0.0 {
        return Err(Error::InvalidInput("level must be positive and the seed not a zero".into()));
    }
    let theta0 = p0.arg();
    let z0 = newton_to(t, seed, Complex64::from_polar(eps, theta0), 50)
        .ok_or_else(|| Error::Tracing { location: seed, reason: "could not reach the level from the seed".into() })?;
    for c in t.critical() {
        if (c.value.norm() - eps).abs() <= 1e-9 * eps && (c.point - z0).norm() <= 2.0 * c.radius {
            return Err(Error::Tracing { location: z0, reason: "seed is at a critical point of this level".into() });
        }
    }
    let mut z = z0;
    let mut theta = theta0;
    let mut points = vec![z0];
    let mut thetas = vec![theta0];
    let mut dtheta = MAX_DTHETA;
    let mut turn = 1i64;
    for _ in 0..MAX_STEPS {
        let mark = theta0 + TAU * turn as f64;
        let mut dth = dtheta.min(step_cap(t, z));
        let landing = theta + dth >= mark;
        if landing {
            dth = mark - theta;
        }
        if dth < 1e-14 && !landing {
            return Err(Error::Tracing { location: z, reason: "step size underflow".into() });
        }
        let Some(znew) = level_step(t, eps, z, theta, dth) else {
            dtheta = dth / 2.0;
            continue;
        };
        for c in t.critical() {
            if !c.is_zero() && (c.value.norm() - eps).abs() <= 1e-9 * eps && (c.point - znew).norm() <= c.radius {
                return Err(Error::Tracing { location: znew, reason: "met a critical point of the same level".into() });
            }
        }
        z = znew;
        theta = if landing { mark } else { theta + dth };
        if !landing {
            dtheta = (dth * 1.5).min(MAX_DTHETA);
        }
        if landing {
            if (z - z0).norm() <= CLOSE_TOL * (1.0 + z0.norm()) {
                return Ok(LevelCurve { level: eps, points, thetas, turns: turn });
            }
            turn += 1;
            if turn as usize > t.degree() {
                return Err(Error::Tracing { location: z, reason: "curve did not close".into() });
            }
        }
        points.push(z);
        thetas.push(theta);
    }
    Err(Error::Tracing { location: z, reason: "step budget exhausted".into() })
}

/// Every component of `{|p| = eps}` for a regular level `eps`. Each component
/// is seeded from a zero it encloses by following a gradient line outward.
pub fn level_set(t: &Tract, eps: f64) -> Result<Vec<LevelCurve>> {
    let zeros = t.zeros();
    let mut covered = vec![false; zeros.len()];
    let mut out = Vec::new();
    for i in 0..zeros.len() {
        if covered[i] {
            continue;
        }
        let (z0, _) = zeros[i];
        let near = t.critical().iter().map(|c| (c.point - z0).norm()).chain(zeros.iter().map(|z| (z.0 - z0).norm()));
        let r = 1e-3 * near.filter(|&d| d > 0.0).fold(1.0, f64::min);
        let mut seed = None;
        for k in 0..16 {
            let start = z0 + Complex64::from_polar(r, 0.1 + std::f64::consts::TAU * k as f64 / 16.0);
            if t.eval(start).norm() >= eps {
                continue;
            }
            if let Ok(line) = trace_gradient_line(t, start, true, Some(eps)) {
                if line.end == GradientEnd::Level {
                    seed = Some(line.endpoint());
                    break;
                }
            }
        }
        let seed = seed.ok_or_else(|| Error::Tracing { location: z0, reason: format!("no gradient line reaches level {eps}") })?;
        let curve = trace_level_component(t, seed, eps)?;
        for (j, z) in zeros.iter().enumerate() {
            if point_in_polygon(z.0, &curve.points) {
                covered[j] = true;
            }
        }
        covered[i] = true;
        out.push(curve);
    }
    Ok(out)
}

struct EdgeTrace {
    end: usize,
    end_sector: usize,
    chain: Vec<Complex64>,
    thetas: Vec<f64>,
    distinguished: Vec<Complex64>,
}

/// Traces the edge leaving vertex `group[start]` along ray `out(sector)` until
/// it enters the hit radius of a vertex of the same level.
fn trace_edge(t: &Tract, group: &[usize], args: &[f64], h: f64, start: usize, sector: usize) -> Result<EdgeTrace> {
    let info = &t.critical()[group[start]];
    let m = &info.model;
    let w = info.point;
    let z_start = w + Complex64::from_polar(info.radius, m.out_angle(sector));
    let p_start = t.eval(z_start);
    let target = p_start * (h / p_start.norm());
    let mut z = newton_to(t, z_start, target, 20)
        .ok_or_else(|| Error::Tracing { location: z_start, reason: "could not leave the vertex".into() })?;
    let a0 = args[start];
    let mut theta = a0 + (target * Complex64::from_polar(1.0, -a0)).arg();
    if theta < a0 {
        return Err(Error::Tracing { location: z, reason: "start ray has decreasing argument".into() });
    }
    let mut chain = vec![w, z];
    let mut thetas = vec![a0, theta];
    let mut distinguished = Vec::new();
    let mut next_mark = (theta / TAU).floor() + 1.0;
    let mut dtheta = MAX_DTHETA;
    let mut left = false;
    let limit = a0 + TAU * (t.degree() as f64 + 1.0);
    for _ in 0..MAX_STEPS {
        if !left && (z - w).norm() > 2.0 * info.radius {
            left = true;
        }
        for (gi, &g) in group.iter().enumerate() {
            let c = &t.critical()[g];
            if (gi != start || left) && (z - c.point).norm() <= c.radius {
                let (end_sector, miss) = c.model.nearest((z - c.point).arg(), |m, j| m.in_angle(j));
                if miss > PI / (2.0 * (c.multiplicity + 1) as f64) {
                    return Err(Error::Tracing { location: z, reason: "arrived between level-curve rays".into() });
                }
                let mut rest = (args[gi] - theta).rem_euclid(TAU);
                if rest > PI {
                    rest -= TAU;
                }
                if !(-1e-6..0.5).contains(&rest) {
                    return Err(Error::Tracing { location: z, reason: format!("argument mismatch {rest} at arrival") });
                }
                chain.push(c.point);
                thetas.push(theta + rest.max(0.0));
                return Ok(EdgeTrace { end: gi, end_sector, chain, thetas, distinguished });
            }
        }
        let mark = TAU * next_mark;
        let mut dth = dtheta.min(step_cap(t, z));
        let landing = theta + dth >= mark;
        if landing {
            dth = mark - theta;
        }
        if dth < 1e-15 && !landing {
            return Err(Error::Tracing { location: z, reason: format!("step size underflow at argument {theta}") });
        }
        let Some(znew) = level_step(t, h, z, theta, dth) else {
            dtheta = dth / 2.0;
            continue;
        };
        z = znew;
        theta = if landing { mark } else { theta + dth };
        if !landing {
            dtheta = (dth * 1.5).min(MAX_DTHETA);
        }
        if landing {
            distinguished.push(z);
            next_mark += 1.0;
        }
        if theta > limit || z.norm() > 1e6 {
            return Err(Error::Tracing { location: z, reason: "edge did not reach a vertex".into() });
        }
        chain.push(z);
        thetas.push(theta);
    }
    Err(Error::Tracing { location: z, reason: "step budget exhausted".into() })
}

/// Groups indices of nonzero critical values by tied modulus, ascending.
fn level_groups(t: &Tract) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..t.critical().len()).filter(|&i| !t.critical()[i].is_zero()).collect();
    idx.sort_by(|&a, &b| t.critical()[a].value.norm().partial_cmp(&t.critical()[b].value.norm()).unwrap());
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        let h = t.critical()[i].value.norm();
        match groups.last_mut() {
            Some(g) if (t.critical()[g[0]].value.norm() - h).abs() <= DEFAULT_TIE_TOL * h => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// All critical level curves of a tract: one embedded graph per connected
/// component of `{|p| = |v|}` through a critical point with `v != 0`, sorted by
/// ascending level.
pub fn critical_level_curves(t: &Tract) -> Result<Vec<EmbeddedLevelGraph>> {
    let mut out = Vec::new();
    for group in level_groups(t) {
        out.extend(level_graphs(t, &group)?);
    }
    Ok(out)
}

fn level_graphs(t: &Tract, group: &[usize]) -> Result<Vec<EmbeddedLevelGraph>> {
    let crit = t.critical();
    let h = group.iter().map(|&i| crit[i].value.norm()).sum::<f64>() / group.len() as f64;
    let args: Vec<f64> = group.iter().map(|&i| normalize_arg(crit[i].value.arg(), ARG_SNAP)).collect();
    let jobs: Vec<(usize, usize)> =
        (0..group.len()).flat_map(|v| (0..=crit[group[v]].multiplicity).map(move |j| (v, j))).collect();
    let traces: Vec<EdgeTrace> =
        jobs.par_iter().map(|&(v, j)| trace_edge(t, group, &args, h, v, j)).collect::<Result<_>>()?;
    let mut edge_id = vec![Vec::new(); group.len()];
    for (e, &(v, _)) in jobs.iter().enumerate() {
        edge_id[v].push(e);
    }

    // each (vertex, sector) must be entered by exactly one edge
    let mut entered = vec![Vec::new(); group.len()];
    for v in 0..group.len() {
        entered[v] = vec![0usize; crit[group[v]].multiplicity + 1];
    }
    for tr in &traces {
        entered[tr.end][tr.end_sector] += 1;
    }
    if let Some((v, _)) = entered.iter().enumerate().find(|(_, s)| s.iter().any(|&n| n != 1)) {
        return Err(Error::Tracing {
            location: crit[group[v]].point,
            reason: "incoming edges do not match the local model".into(),
        });
    }

    let mut parent: Vec<usize> = (0..group.len()).collect();
    for (e, tr) in traces.iter().enumerate() {
        let (a, b) = (find(&mut parent, jobs[e].0), find(&mut parent, tr.end));
        parent[a] = b;
    }
    let mut graphs = Vec::new();
    let mut roots = Vec::new();
    for v in 0..group.len() {
        let r = find(&mut parent, v);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    for root in roots {
        let members: Vec<usize> = (0..group.len()).filter(|&v| find(&mut parent, v) == root).collect();
        let local = |v: usize| members.iter().position(|&m| m == v).unwrap();
        let vertices: Vec<EmbeddedVertex> = members
            .iter()
            .map(|&v| {
                let c = &crit[group[v]];
                EmbeddedVertex {
                    location: c.point,
                    multiplicity: c.multiplicity,
                    arg: args[v],
                    radius: c.radius,
                    critical: group[v],
                }
            })
            .collect();
        let mut edges = Vec::new();
        let mut vertex_edges = vec![Vec::new(); members.len()];
        for (lv, &v) in members.iter().enumerate() {
            for (j, &e) in edge_id[v].iter().enumerate() {
                let tr = &traces[e];
                let delta = tr.thetas.last().unwrap() - args[v];
                vertex_edges[lv].push(edges.len());
                edges.push(EmbeddedEdge {
                    start: lv,
                    end: local(tr.end),
                    start_sector: j,
                    end_sector: tr.end_sector,
                    chain: tr.chain.clone(),
                    thetas: tr.thetas.clone(),
                    delta,
                    distinguished: tr.distinguished.clone(),
                });
            }
        }
        let mut rotation: Vec<Vec<usize>> = vertex_edges.iter().map(|s| vec![usize::MAX; s.len()]).collect();
        let mut faces = Vec::new();
        for lv in 0..members.len() {
            for j in 0..vertex_edges[lv].len() {
                if rotation[lv][j] != usize::MAX {
                    continue;
                }
                let f = faces.len();
                let (mut v, mut s) = (lv, j);
                let mut boundary = Vec::new();
                let mut face_edges = Vec::new();
                loop {
                    if rotation[v][s] != usize::MAX {
                        return Err(Error::Tracing {
                            location: vertices[v].location,
                            reason: "face boundary does not close".into(),
                        });
                    }
                    rotation[v][s] = f;
                    boundary.push(v);
                    let e = vertex_edges[v][s];
                    face_edges.push(e);
                    (v, s) = (edges[e].end, edges[e].end_sector);
                    if (v, s) == (lv, j) {
                        break;
                    }
                }
                faces.push(EmbeddedFace { boundary, edges: face_edges, zeros: 0 });
            }
        }
        let mut g = EmbeddedLevelGraph { level: h, vertices, edges, rotation, faces, vertex_edges };
        for f in 0..g.faces.len() {
            let total: f64 = g.faces[f].edges.iter().map(|&e| g.edges[e].delta).sum();
            let turns = total / TAU;
            let residual = (turns - turns.round()).abs();
            if residual >= 0.1 {
                return Err(Error::WindingResidual { turns, residual });
            }
            let inside = t.zeros_inside(&g.face_polygon(f));
            if turns.round() as i64 != inside as i64 || inside == 0 {
                return Err(Error::Tracing {
                    location: g.vertices[g.faces[f].boundary[0]].location,
                    reason: format!("face winds {turns:.3} times but contains {inside} zeros"),
                });
            }
            g.faces[f].zeros = inside;
        }
        graphs.push(g);
    }
    Ok(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::ComplexPoly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tract(coeffs: &[f64]) -> Tract {
        Tract::normalized(ComplexPoly::from_real(coeffs).unwrap()).unwrap()
    }

    #[test]
    fn circle_of_z_squared() {
        let t = tract(&[0.0, 0.0, 1.0]);
        let curve = trace_level_component(&t, c(0.4, 0.1), 0.25).unwrap();
        assert_eq!(curve.turns, 2);
        for z in &curve.points {
            assert!((z.norm() - 0.5).abs() < 1e-9);
        }
        assert_eq!(winding_number(&t, &curve.points).unwrap(), 2);
    }

    /// Independent oracle: connected components of `{|p| < eps}` on a grid.
    fn grid_components(p: &ComplexPoly, eps: f64) -> usize {
        let n = 400;
        let (lo, hi) = (-1.0, 3.0);
        let step = (hi - lo) / n as f64;
        let mut labels = vec![usize::MAX; n * n];
        let cell = |i: usize, j: usize| c(lo + (i as f64 + 0.5) * step, lo + (j as f64 + 0.5) * step);
        let mut count = 0;
        for start in 0..n * n {
            if labels[start] != usize::MAX || p.eval(cell(start % n, start / n)).norm() >= eps {
                continue;
            }
            let mut stack = vec![start];
            labels[start] = count;
            while let Some(k) = stack.pop() {
                let (i, j) = (k % n, k / n);
                let nb = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
                for (a, b) in nb {
                    if a < n && b < n && labels[b * n + a] == usize::MAX && p.eval(cell(a, b)).norm() < eps {
                        labels[b * n + a] = count;
                        stack.push(b * n + a);
                    }
                }
            }
            count += 1;
        }
        count
    }

    #[test]
    fn two_near_circles() {
        let p = ComplexPoly::from_real(&[0.0, -2.0, 1.0]).unwrap();
        assert_eq!(grid_components(&p, 0.09), 2);
        let t = Tract::new(p.scale(c(0.5, 0.0))).unwrap();
        for seed in [c(0.04, 0.0), c(2.04, 0.0)] {
            let curve = trace_level_component(&t, seed, 0.045).unwrap();
            assert_eq!(curve.turns, 1);
            assert_eq!(t.zeros_inside(&curve.points), 1);
        }
    }

    #[test]
    fn rose_outer_curve() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let t = Tract::new(p.scale(c(0.5, 0.0))).unwrap();
        let curve = trace_level_component(&t, c(1.3, 0.0), 0.75).unwrap();
        assert_eq!(curve.turns, 5);
        assert_eq!(winding_number(&t, &curve.points).unwrap(), 5);
        let petal = trace_level_component(&t, c(0.9, 0.0), 0.25).unwrap();
        assert_eq!(petal.turns, 1);
    }

    #[test]
    fn lemniscate_graph() {
        let t = tract(&[0.0, -2.0, 1.0]);
        let graphs = critical_level_curves(&t).unwrap();
        assert_eq!(graphs.len(), 1);
        let g = &graphs[0];
        assert_eq!(g.vertices.len(), 1);
        assert!((g.vertices[0].location - c(1.0, 0.0)).norm() < 1e-10);
        assert!((g.vertices[0].arg - PI).abs() < 1e-9);
        assert_eq!(g.edge_ends(0), 4);
        assert_eq!(g.faces.len(), 2);
        let mut dist: Vec<f64> = g.edges.iter().flat_map(|e| e.distinguished.iter().map(|z| z.re)).collect();
        dist.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(dist.len(), 2);
        assert!((dist[0] - (1.0 - 2f64.sqrt())).abs() < 1e-9);
        assert!((dist[1] - (1.0 + 2f64.sqrt())).abs() < 1e-9);
        for f in &g.faces {
            assert_eq!(f.zeros, 1);
        }
        for e in &g.edges {
            for z in &e.chain {
                assert!((t.eval(*z).norm() - g.level).abs() < 1e-8 * g.level);
            }
        }
        assert_eq!(crate::configuration::validate(&Configuration::Graph(g.to_graph_node())), Ok(()));
    }

    #[test]
    fn rose_graph() {
        let t = tract(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let graphs = critical_level_curves(&t).unwrap();
        assert_eq!(graphs.len(), 1);
        let g = &graphs[0];
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.vertices[0].multiplicity, 4);
        assert_eq!(g.edge_ends(0), 10);
        assert_eq!(g.edges.len(), 5);
        assert_eq!(g.faces.len(), 5);
        assert!(g.faces.iter().all(|f| f.zeros == 1));
        assert_eq!(g.edges.iter().map(|e| e.distinguished.len()).sum::<usize>(), 5);
        assert!((g.vertices[0].arg - PI).abs() < 1e-9);
    }

    #[test]
    fn powers_have_no_critical_curves() {
        let t = tract(&[0.0, 0.0, 0.0, 1.0]);
        assert!(critical_level_curves(&t).unwrap().is_empty());
    }

    #[test]
    fn tied_levels_on_separate_components() {
        // even polynomial: the two nonzero critical values coincide and the
        // level curve through them is a chain of two figure-eights
        let u = [c(0.0, 0.0), c(0.8, 0.3), c(-0.8, -0.3)];
        let p = crate::polynomials::from_critical_points(&u).unwrap();
        let t = Tract::normalized(p).unwrap();
        let graphs = critical_level_curves(&t).unwrap();
        assert_eq!(graphs.len(), 1);
        assert_eq!(graphs[0].vertices.len(), 2);
        assert_eq!(graphs[0].faces.len(), 3);
        for g in &graphs {
            assert_eq!(crate::configuration::validate(&Configuration::Graph(g.to_graph_node())), Ok(()));
        }
    }
}
