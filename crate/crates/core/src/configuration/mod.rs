//! Level-curve configurations: the combinatorial record of critical level
//! curves, zeros, levels, face zero counts, vertex arguments, distinguished
//! points and gradient maps.

mod code;
mod order;
mod scatter;
mod validate;

pub use code::{canonical_code, equals, CanonicalCode, Token, DEFAULT_EQ_TOL};
pub use order::{prec_order, NodeInfo, NodeKind, PrecOrder};
pub use scatter::{find_single_edge_face, scatter_bound, scatter_case, scatter_perturb, ScatterCase};
pub use validate::validate;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One member of the recursive configuration: either a zero of some
/// multiplicity or a critical level graph with its faces and their children.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Configuration {
    Point {
        #[serde(rename = "Z")]
        z: u32,
    },
    Graph(GraphNode),
}

/// A critical level graph of analytic type.
///
/// Every edge borders the unbounded face, so the graph is a cactus: each
/// bounded face is a simple cycle of vertices and each vertex lies on at least
/// two bounded faces. Edges are oriented so that the argument increases, with
/// the bounded face on the left.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    #[serde(rename = "H")]
    pub level: f64,
    /// Bounded faces around each vertex in counterclockwise order.
    pub rotation: Vec<Vec<usize>>,
    /// Argument of the function at each vertex, in `[0, 2pi)`.
    pub args: Vec<f64>,
    pub faces: Vec<Face>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub z: u32,
    /// Vertices met when walking the boundary counterclockwise.
    pub boundary: Vec<usize>,
    /// Interior distinguished points on the edge `boundary[i] -> boundary[i+1]`.
    pub distinguished: Vec<u32>,
    pub child: Box<Configuration>,
    /// The first distinguished point of the boundary maps to entry
    /// `gradient_offset` of the child's walk.
    pub gradient_offset: usize,
}

/// A directed edge of a graph, named by its face and position on the face boundary.
pub type Step = (usize, usize);

/// A distinguished point as it occurs in a walk: the step it belongs to and
/// its index within that step's list (vertex corner first, then interior points).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub step: Step,
    pub sub: usize,
}

pub(crate) fn is_distinguished(a: f64) -> bool {
    a == 0.0
}

/// Default snapping distance for arguments close to `0 mod 2pi`.
pub const ARG_SNAP: f64 = 1e-9;

/// Snaps arguments that are within `eps` of `0` or `2pi` to exactly `0`.
pub fn normalize_arg(a: f64, eps: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r < eps || TAU - r < eps {
        0.0
    } else {
        r
    }
}

impl Configuration {
    pub fn point(z: u32) -> Self {
        Configuration::Point { z }
    }

    /// Total number of zeros `Z` enclosed.
    pub fn zeros(&self) -> u32 {
        match self {
            Configuration::Point { z } => *z,
            Configuration::Graph(g) => g.total_zeros(),
        }
    }

    pub fn level(&self) -> f64 {
        match self {
            Configuration::Point { .. } => 0.0,
            Configuration::Graph(g) => g.level,
        }
    }

    pub fn as_graph(&self) -> Option<&GraphNode> {
        match self {
            Configuration::Graph(g) => Some(g),
            _ => None,
        }
    }

    /// The critical values encoded by this configuration, sorted by modulus.
    pub fn critical_values(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.collect_values(&mut out);
        out.sort_by(|a, b| {
            a.norm()
                .partial_cmp(&b.norm())
                .unwrap()
                .then(a.arg().partial_cmp(&b.arg()).unwrap())
        });
        out
    }

    fn collect_values(&self, out: &mut Vec<Complex64>) {
        match self {
            Configuration::Point { z } => {
                out.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), z.saturating_sub(1) as usize))
            }
            Configuration::Graph(g) => {
                for (v, &a) in g.args.iter().enumerate() {
                    let value = Complex64::from_polar(g.level, a);
                    out.extend(std::iter::repeat_n(value, g.multiplicity(v)));
                }
                for f in &g.faces {
                    f.child.collect_values(out);
                }
            }
        }
    }

    /// Degree `n` of a polynomial with this configuration.
    pub fn degree(&self) -> usize {
        self.zeros() as usize
    }

    /// Node at a path of face indices from this node.
    pub fn node_at(&self, path: &[usize]) -> Option<&Configuration> {
        let mut node = self;
        for &f in path {
            node = &node.as_graph()?.faces.get(f)?.child;
        }
        Some(node)
    }

    pub fn node_at_mut(&mut self, path: &[usize]) -> Option<&mut Configuration> {
        let mut node = self;
        for &f in path {
            match node {
                Configuration::Graph(g) => node = &mut g.faces.get_mut(f)?.child,
                _ => return None,
            }
        }
        Some(node)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl GraphNode {
    pub fn vertex_count(&self) -> usize {
        self.args.len()
    }

    /// Number of bounded faces at a vertex.
    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// `m(w)/2 - 1` where `m(w) = 2 * degree` is the number of edge-ends.
    pub fn multiplicity(&self, v: usize) -> usize {
        self.degree(v).saturating_sub(1)
    }

    pub fn edge_ends(&self, v: usize) -> usize {
        2 * self.degree(v)
    }

    pub fn edge_count(&self) -> usize {
        self.faces.iter().map(|f| f.boundary.len()).sum()
    }

    pub fn total_zeros(&self) -> u32 {
        self.faces.iter().map(|f| f.z).sum()
    }

    /// Vertex at which a step starts.
    pub fn step_start(&self, (f, i): Step) -> usize {
        self.faces[f].boundary[i]
    }

    pub fn step_end(&self, (f, i): Step) -> usize {
        let b = &self.faces[f].boundary;
        b[(i + 1) % b.len()]
    }

    /// Number of distinguished points listed for a step.
    pub fn step_entries(&self, step: Step) -> usize {
        let corner = is_distinguished(self.args[self.step_start(step)]) as usize;
        corner + self.faces[step.0].distinguished[step.1] as usize
    }

    /// Argument increase along the edge of a step.
    pub fn step_delta(&self, step: Step) -> f64 {
        let (x, y) = (self.step_start(step), self.step_end(step));
        let c = self.faces[step.0].distinguished[step.1] as f64;
        let wrap = is_distinguished(self.args[y]) as u32 as f64;
        self.args[y] - self.args[x] + TAU * (c + wrap)
    }

    /// The step following `step` along the unbounded face: at the end vertex,
    /// continue along the next bounded face in counterclockwise order.
    pub fn next_step(&self, (f, i): Step) -> Option<Step> {
        let face = self.faces.get(f)?;
        let w = *face.boundary.get((i + 1) % face.boundary.len())?;
        let rot = self.rotation.get(w)?;
        let pos = rot.iter().position(|&g| g == f)?;
        let f2 = rot[(pos + 1) % rot.len()];
        let i2 = self.faces.get(f2)?.boundary.iter().position(|&x| x == w)?;
        Some((f2, i2))
    }

    /// The closed walk along the unbounded face from `start`. For a valid graph
    /// it visits every step exactly once.
    pub fn walk(&self, start: Step) -> Vec<Step> {
        let limit = self.edge_count();
        let mut out = vec![start];
        let mut cur = start;
        while let Some(next) = self.next_step(cur) {
            if next == start || out.len() > limit {
                break;
            }
            out.push(next);
            cur = next;
        }
        out
    }

    pub fn all_steps(&self) -> Vec<Step> {
        self.faces
            .iter()
            .enumerate()
            .flat_map(|(f, face)| (0..face.boundary.len()).map(move |i| (f, i)))
            .collect()
    }

    /// Distinguished points in walk order from `start`.
    pub fn walk_entries(&self, start: Step) -> Vec<Entry> {
        self.walk(start)
            .into_iter()
            .flat_map(|s| (0..self.step_entries(s)).map(move |sub| Entry { step: s, sub }))
            .collect()
    }

    /// Distinguished points of a face boundary in counterclockwise order from
    /// its first vertex.
    pub fn face_entries(&self, f: usize) -> Vec<Entry> {
        (0..self.faces[f].boundary.len())
            .flat_map(|i| (0..self.step_entries((f, i))).map(move |sub| Entry { step: (f, i), sub }))
            .collect()
    }

    /// Number of face entries strictly before step `(f, i)` on the face boundary.
    pub fn face_entries_before(&self, f: usize, i: usize) -> usize {
        (0..i).map(|j| self.step_entries((f, j))).sum()
    }

    /// Index of an entry in the walk from step `(0, 0)`.
    pub fn walk_index(&self, e: Entry) -> Option<usize> {
        let mut count = 0;
        for s in self.walk((0, 0)) {
            if s == e.step {
                return Some(count + e.sub);
            }
            count += self.step_entries(s);
        }
        None
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use std::f64::consts::PI;

    pub fn figure_eight(level: f64, a: f64, c1: Configuration, c2: Configuration, off1: usize, off2: usize) -> Configuration {
        let d = is_distinguished(a) as u32;
        let (z1, z2) = (c1.zeros(), c2.zeros());
        Configuration::Graph(GraphNode {
            level,
            rotation: vec![vec![0, 1]],
            args: vec![a],
            faces: vec![
                Face { z: z1, boundary: vec![0], distinguished: vec![z1 - d], child: Box::new(c1), gradient_offset: off1 },
                Face { z: z2, boundary: vec![0], distinguished: vec![z2 - d], child: Box::new(c2), gradient_offset: off2 },
            ],
        })
    }

    /// Rose with `k` petals, one zero in each, at argument `pi` (the shape of
    /// `z^k - 1` scaled into a tract).
    pub fn rose(k: usize, level: f64) -> Configuration {
        Configuration::Graph(GraphNode {
            level,
            rotation: vec![(0..k).collect()],
            args: vec![PI],
            faces: (0..k)
                .map(|_| Face {
                    z: 1,
                    boundary: vec![0],
                    distinguished: vec![1],
                    child: Box::new(Configuration::point(1)),
                    gradient_offset: 0,
                })
                .collect(),
        })
    }

    /// Three lobes in a row: A at x, B between x and y, C at y.
    pub fn chain(level: f64, ax: f64, ay: f64) -> Configuration {
        // lobes A, C: single loop edges, each one zero, so c = 1 - [a=0]
        let dx = is_distinguished(ax) as u32;
        let dy = is_distinguished(ay) as u32;
        // lobe B: x -> y and y -> x; choose crossings making z(B) = 1
        // delta(x->y) = ay - ax + 2pi(c + [ay=0]) > 0 and the sum over B is 2pi
        let (cxy, cyx) = if ay > ax { (0, 1 - dx - dy) } else { (1 - dy - dx, 0) };
        let b_child = Configuration::point(1);
        Configuration::Graph(GraphNode {
            level,
            rotation: vec![vec![0, 1], vec![1, 2]],
            args: vec![ax, ay],
            faces: vec![
                Face { z: 1, boundary: vec![0], distinguished: vec![1 - dx], child: Box::new(Configuration::point(1)), gradient_offset: 0 },
                Face { z: 1, boundary: vec![0, 1], distinguished: vec![cxy, cyx], child: Box::new(b_child), gradient_offset: 0 },
                Face { z: 1, boundary: vec![1], distinguished: vec![1 - dy], child: Box::new(Configuration::point(1)), gradient_offset: 0 },
            ],
        })
    }
}
