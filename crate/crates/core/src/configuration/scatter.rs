use super::{is_distinguished, prec_order, Configuration, Entry, Face, GraphNode, NodeKind};
use crate::error::{Error, Result};
use crate::polynomials::{atypicality_degree, DEFAULT_TIE_TOL};

/// Which perturbation applies to a configuration with atypical critical values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScatterCase {
    /// A multiple zero becomes a figure-eight at a small level.
    SplitZero,
    /// A graph with a single simple vertex is lifted slightly.
    RaiseLevel,
    /// One single-edge face of a larger graph is split off into a figure-eight.
    SplitFace,
}

/// A bounded face whose boundary is a single edge, found as a leaf of the
/// face-vertex incidence tree.
pub fn find_single_edge_face(g: &GraphNode) -> Result<usize> {
    let nv = g.args.len();
    let nf = g.faces.len();
    let incidences: usize = g.faces.iter().map(|f| f.boundary.len()).sum();
    if nv == 0 || nf < 2 || incidences != nv + nf - 1 {
        return Err(Error::InvalidInput("face-vertex incidence graph is not a tree".into()));
    }
    if g.rotation.iter().any(|r| r.len() < 2) {
        return Err(Error::InvalidInput("a vertex lies on fewer than two bounded faces".into()));
    }
    // vertices have degree at least two in the tree, so every leaf is a face
    g.faces
        .iter()
        .position(|f| f.boundary.len() == 1)
        .ok_or_else(|| Error::InvalidInput("no leaf face in the incidence tree".into()))
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= DEFAULT_TIE_TOL * a.max(b) || (a <= DEFAULT_TIE_TOL && b <= DEFAULT_TIE_TOL)
}

struct Plan {
    case: ScatterCase,
    path: Vec<usize>,
    /// Modulus of the value being moved.
    modulus: f64,
}

fn plan(c: &Configuration) -> Result<Option<Plan>> {
    let values = c.critical_values();
    let m = atypicality_degree(&values, DEFAULT_TIE_TOL)?;
    if m == 0 {
        return Ok(None);
    }
    let h = values[m - 1].norm();
    let order = prec_order(c);
    if h <= DEFAULT_TIE_TOL {
        let node = order
            .nodes
            .iter()
            .find(|n| n.kind == NodeKind::Point && n.zeros >= 2)
            .ok_or_else(|| Error::InvalidInput("zero critical value without a multiple zero".into()))?;
        return Ok(Some(Plan { case: ScatterCase::SplitZero, path: node.path.clone(), modulus: 0.0 }));
    }
    let at_level: Vec<&Vec<usize>> = order
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::Graph && tied(n.level, h))
        .map(|n| &n.path)
        .collect();
    let simple = at_level.iter().find(|p| {
        let g = c.node_at(p).and_then(Configuration::as_graph).unwrap();
        g.vertex_count() == 1 && g.multiplicity(0) == 1
    });
    let (case, path) = match simple {
        Some(p) => (ScatterCase::RaiseLevel, (*p).clone()),
        None => (
            ScatterCase::SplitFace,
            at_level
                .first()
                .ok_or_else(|| Error::InvalidInput("no graph at the tied level".into()))?
                .to_vec(),
        ),
    };
    Ok(Some(Plan { case, path, modulus: h }))
}

/// The case `scatter_perturb` would apply, or `None` for typical values.
pub fn scatter_case(c: &Configuration) -> Result<Option<ScatterCase>> {
    Ok(plan(c)?.map(|p| p.case))
}

/// Largest `nu` (exclusive) for which `scatter_perturb` keeps the values below
/// modulus 1 and strictly reduces the atypicality degree.
pub fn scatter_bound(c: &Configuration) -> Result<f64> {
    let values = c.critical_values();
    let vmax = values.last().map_or(0.0, |v| v.norm());
    let mut bound = 1.0 - vmax;
    if let Some(p) = plan(c)? {
        let moduli: Vec<f64> = values.iter().map(|v| v.norm()).collect();
        match p.case {
            ScatterCase::SplitZero => {
                if let Some(&minmod) = moduli.iter().find(|&&x| x > DEFAULT_TIE_TOL) {
                    bound = bound.min(2.0 * minmod);
                } else {
                    bound = bound.min(2.0);
                }
            }
            _ => {
                let next = moduli
                    .iter()
                    .copied()
                    .find(|&x| x > p.modulus && !tied(x, p.modulus))
                    .unwrap_or(1.0);
                bound = bound.min(2.0 * (next / p.modulus - 1.0));
            }
        }
    }
    Ok(bound)
}

/// Perturbs a configuration with atypical critical values into one whose
/// values move by less than `nu` and whose atypicality degree is smaller.
/// Typical configurations are returned unchanged.
pub fn scatter_perturb(c: &Configuration, nu: f64) -> Result<Configuration> {
    let Some(p) = plan(c)? else {
        return Ok(c.clone());
    };
    let bound = scatter_bound(c)?;
    if !(nu > 0.0 && nu < bound) {
        return Err(Error::InvalidInput(format!("nu = {nu} must lie in (0, {bound})")));
    }
    let mut out = c.clone();
    match p.case {
        ScatterCase::SplitZero => {
            let k = c.node_at(&p.path).unwrap().zeros();
            let d1 = Face {
                z: k - 1,
                boundary: vec![0],
                distinguished: vec![k - 2],
                child: Box::new(Configuration::point(k - 1)),
                gradient_offset: 0,
            };
            let d2 = Face {
                z: 1,
                boundary: vec![0],
                distinguished: vec![0],
                child: Box::new(Configuration::point(1)),
                gradient_offset: 0,
            };
            let hat = Configuration::Graph(GraphNode {
                level: nu / 2.0,
                rotation: vec![vec![0, 1]],
                args: vec![0.0],
                faces: vec![d1, d2],
            });
            *out.node_at_mut(&p.path).unwrap() = hat;
            set_parent_offset(&mut out, &p.path, |_| 0);
        }
        ScatterCase::RaiseLevel => {
            if let Some(Configuration::Graph(g)) = out.node_at_mut(&p.path) {
                g.level *= 1.0 + nu / 2.0;
            }
        }
        ScatterCase::SplitFace => {
            let g = c.node_at(&p.path).and_then(Configuration::as_graph).unwrap();
            let (hat, r) = split_face(g, nu)?;
            let total = g.total_zeros() as usize;
            *out.node_at_mut(&p.path).unwrap() = Configuration::Graph(hat);
            set_parent_offset(&mut out, &p.path, |off| (off + total - r % total) % total);
        }
    }
    Ok(out)
}

fn set_parent_offset(c: &mut Configuration, path: &[usize], f: impl Fn(usize) -> usize) {
    if let Some((&last, parent)) = path.split_last() {
        if let Some(Configuration::Graph(g)) = c.node_at_mut(parent) {
            let face = &mut g.faces[last];
            face.gradient_offset = f(face.gradient_offset);
        }
    }
}

/// Splits a single-edge face off `g`. Returns the new figure-eight and the
/// index, in the walk of `g` from step `(0, 0)`, of the first distinguished
/// point on the removed face.
fn split_face(g: &GraphNode, nu: f64) -> Result<(GraphNode, usize)> {
    let f1 = find_single_edge_face(g)?;
    let z = g.faces[f1].boundary[0];
    let a = g.args[z];
    let corner = is_distinguished(a) as u32;
    let r = g
        .walk_index(Entry { step: (f1, 0), sub: 0 })
        .ok_or_else(|| Error::InvalidInput("walk does not reach the split face".into()))?;
    let (fp, jp) = g.next_step((f1, 0)).expect("valid graph");

    let mut rest = g.clone();
    rest.rotation[z].retain(|&f| f != f1);
    // position in `rest` of the point where the walk after the removed edge starts
    let mut anchor = (fp, jp, 0usize);
    if rest.rotation[z].len() == 1 {
        // z is no longer a vertex: join its two edges on face fp
        let face = &mut rest.faces[fp];
        let l = face.boundary.len();
        let prev = (jp + l - 1) % l;
        let (ca, cb) = (face.distinguished[prev], face.distinguished[jp]);
        let merged = ca + cb + corner;
        let prev_corner = is_distinguished(g.args[face.boundary[prev]]) as usize;
        if jp == 0 {
            let shift = corner as usize + cb as usize;
            face.boundary.remove(0);
            face.distinguished.remove(0);
            let last = face.boundary.len() - 1;
            face.distinguished[last] = merged;
            // a point child has a single walk entry
            let period = if face.child.as_graph().is_some() { face.z as usize } else { 1 };
            face.gradient_offset = (face.gradient_offset + shift) % period;
            anchor = (fp, last, prev_corner + ca as usize);
        } else {
            face.boundary.remove(jp);
            face.distinguished.remove(jp);
            face.distinguished[prev] = merged;
            anchor = (fp, prev, prev_corner + ca as usize);
        }
        // drop vertex z
        rest.args.remove(z);
        rest.rotation.remove(z);
        for f in rest.faces.iter_mut() {
            for x in f.boundary.iter_mut() {
                if *x > z {
                    *x -= 1;
                }
            }
        }
    }
    // drop face f1
    let removed = rest.faces.remove(f1);
    for rot in rest.rotation.iter_mut() {
        for f in rot.iter_mut() {
            if *f > f1 {
                *f -= 1;
            }
        }
    }
    if anchor.0 > f1 {
        anchor.0 -= 1;
    }
    let z_rest = rest.total_zeros();
    let idx = rest
        .walk_index(Entry { step: (anchor.0, anchor.1), sub: anchor.2 })
        .ok_or_else(|| Error::InvalidInput("walk of the reduced graph is broken".into()))?;
    let level = g.level;
    let d1 = Face {
        z: removed.z,
        boundary: vec![0],
        distinguished: vec![removed.distinguished[0]],
        child: removed.child,
        gradient_offset: removed.gradient_offset,
    };
    let d2 = Face {
        z: z_rest,
        boundary: vec![0],
        distinguished: vec![z_rest - corner],
        child: Box::new(Configuration::Graph(rest)),
        gradient_offset: idx % z_rest as usize,
    };
    let hat = GraphNode {
        level: level * (1.0 + nu / 2.0),
        rotation: vec![vec![0, 1]],
        args: vec![a],
        faces: vec![d1, d2],
    };
    Ok((hat, r))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::validate;
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn max_shift(a: &[Complex64], b: &[Complex64]) -> f64 {
        crate::polynomials::unordered_distance(a, b).unwrap()
    }

    fn check_scatter(c: &Configuration, nu: f64, expected: ScatterCase) -> Configuration {
        assert!(validate(c).is_ok(), "{:?}", validate(c));
        assert_eq!(scatter_case(c).unwrap(), Some(expected));
        let v = c.critical_values();
        let m = atypicality_degree(&v, DEFAULT_TIE_TOL).unwrap();
        let hat = scatter_perturb(c, nu).unwrap();
        assert_eq!(validate(&hat), Ok(()));
        let w = hat.critical_values();
        assert_eq!(v.len(), w.len());
        assert!(atypicality_degree(&w, DEFAULT_TIE_TOL).unwrap() < m);
        assert!(max_shift(&v, &w) < nu);
        hat
    }

    #[test]
    fn double_zero() {
        let hat = check_scatter(&Configuration::point(2), 0.1, ScatterCase::SplitZero);
        assert!((hat.level() - 0.05).abs() < 1e-15);
        assert_eq!(hat.critical_values(), vec![Complex64::new(0.05, 0.0)]);
    }

    #[test]
    fn two_tied_figure_eights() {
        let a = figure_eight(0.5, 1.0, Configuration::point(1), Configuration::point(1), 0, 0);
        let b = figure_eight(0.5, 2.0, Configuration::point(1), Configuration::point(1), 0, 0);
        let top = figure_eight(0.8, PI, a, b, 1, 0);
        let hat = check_scatter(&top, 0.1, ScatterCase::RaiseLevel);
        let levels: Vec<f64> = hat.as_graph().unwrap().faces.iter().map(|f| f.child.level()).collect();
        assert!(levels.contains(&(0.5 * 1.05)) && levels.contains(&0.5));
    }

    #[test]
    fn rose_splits_a_petal() {
        let hat = check_scatter(&rose(5, 0.9), 0.05, ScatterCase::SplitFace);
        let g = hat.as_graph().unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.faces.len(), 2);
        assert_eq!(g.faces[1].child.as_graph().unwrap().faces.len(), 4);
    }

    #[test]
    fn chain_splits_an_end_lobe() {
        for (ax, ay) in [(1.0, 2.0), (2.0, 1.0), (0.0, 1.0), (1.0, 0.0)] {
            let c = chain(0.5, ax, ay);
            let g = c.as_graph().unwrap();
            let f = find_single_edge_face(g).unwrap();
            assert_ne!(f, 1);
            check_scatter(&c, 0.1, ScatterCase::SplitFace);
        }
    }

    #[test]
    fn chain_around_a_double_zero() {
        let json = r#"{"kind":"graph","H":0.5,"rotation":[[0,1],[1,2]],"args":[4.5,4.5],"faces":[
            {"z":1,"boundary":[0],"distinguished":[1],"child":{"kind":"point","Z":1},"gradient_offset":0},
            {"z":2,"boundary":[0,1],"distinguished":[1,1],"child":{"kind":"point","Z":2},"gradient_offset":0},
            {"z":1,"boundary":[1],"distinguished":[1],"child":{"kind":"point","Z":1},"gradient_offset":0}]}"#;
        let c = Configuration::from_json(json).unwrap();
        assert_eq!(validate(&c), Ok(()));
        check_scatter(&c, 0.1, ScatterCase::SplitFace);
    }

    #[test]
    fn repeated_scattering_reaches_typical_values() {
        let mut c = rose(4, 0.9);
        for _ in 0..10 {
            match scatter_case(&c).unwrap() {
                None => break,
                Some(_) => {
                    let nu = 0.5 * scatter_bound(&c).unwrap().min(0.05);
                    c = scatter_perturb(&c, nu).unwrap();
                    assert_eq!(validate(&c), Ok(()));
                }
            }
        }
        assert_eq!(atypicality_degree(&c.critical_values(), DEFAULT_TIE_TOL).unwrap(), 0);
    }

    #[test]
    fn rejects_large_nu() {
        assert!(scatter_perturb(&Configuration::point(2), 1.5).is_err());
    }
}
