//! Reading the configuration of a tract off its traced critical level curves.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::configuration::{validate, Configuration, Entry, GraphNode};
use crate::error::{Error, Result};
use crate::polynomials::unordered_distance;
use crate::tracer::{
    critical_level_curves, descend_from_corner, follow_gradient, point_in_polygon, EmbeddedLevelGraph, GradientEnd,
    Tract,
};

/// A member of the nesting forest: a traced graph or a zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Item {
    Graph(usize),
    /// Index into the tract's zero list.
    Zero(usize),
}

/// Containment of critical level graphs and zeros in each other's bounded faces.
#[derive(Clone, Debug, Serialize)]
pub struct NestingForest {
    /// `children[g][f]` is the member placed in face `f` of graph `g`.
    pub children: Vec<Vec<Item>>,
    /// The member not contained in any face.
    pub root: Item,
}

/// Attaches every graph and zero to the innermost face containing it. Each
/// face must receive exactly one member and exactly one member must be left
/// over as the root.
pub fn nesting_forest(graphs: &[EmbeddedLevelGraph], zeros: &[(Complex64, usize)]) -> Result<NestingForest> {
    let polygons: Vec<Vec<Vec<Complex64>>> =
        graphs.iter().map(|g| (0..g.faces.len()).map(|f| g.face_polygon(f)).collect()).collect();
    let items: Vec<(Item, Complex64, f64)> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| (Item::Graph(i), g.vertices[0].location, g.level))
        .chain(zeros.iter().enumerate().map(|(i, z)| (Item::Zero(i), z.0, 0.0)))
        .collect();
    let mut slots: Vec<Vec<Vec<Item>>> = graphs.iter().map(|g| vec![Vec::new(); g.faces.len()]).collect();
    let mut roots = Vec::new();
    for &(item, at, level) in &items {
        let mut best: Option<(usize, usize)> = None;
        for (gi, g) in graphs.iter().enumerate() {
            if g.level <= level * (1.0 + 1e-9) || Item::Graph(gi) == item {
                continue;
            }
            for f in 0..g.faces.len() {
                if point_in_polygon(at, &polygons[gi][f]) {
                    match best {
                        Some((bg, _)) if graphs[bg].level < g.level => {}
                        Some((bg, _)) if graphs[bg].level == g.level => {
                            return Err(Error::Containment(format!("{item:?} lies in two faces of equal level")))
                        }
                        _ => best = Some((gi, f)),
                    }
                }
            }
        }
        match best {
            Some((g, f)) => slots[g][f].push(item),
            None => roots.push(item),
        }
    }
    let mut children = Vec::new();
    for (gi, faces) in slots.into_iter().enumerate() {
        let mut row = Vec::new();
        for (f, members) in faces.into_iter().enumerate() {
            if members.len() != 1 {
                return Err(Error::Containment(format!("face {f} of graph {gi} holds {} members", members.len())));
            }
            row.push(members[0]);
        }
        children.push(row);
    }
    if roots.len() != 1 {
        return Err(Error::Containment(format!("{} outermost members", roots.len())));
    }
    let forest = NestingForest { children, root: roots[0] };
    for (gi, g) in graphs.iter().enumerate() {
        for (f, face) in g.faces.iter().enumerate() {
            let z = item_zeros(graphs, zeros, forest.children[gi][f]);
            if z != face.zeros {
                return Err(Error::Containment(format!("face {f} of graph {gi} has {} zeros but its member {z}", face.zeros)));
            }
        }
    }
    Ok(forest)
}

fn item_zeros(graphs: &[EmbeddedLevelGraph], zeros: &[(Complex64, usize)], item: Item) -> u32 {
    match item {
        Item::Graph(g) => graphs[g].faces.iter().map(|f| f.zeros).sum(),
        Item::Zero(z) => zeros[z].1 as u32,
    }
}

/// Where a gradient line from `y` lands on a child graph: the index of the
/// matching distinguished point in the child's walk from step `(0, 0)`.
fn land(t: &Tract, child: &EmbeddedLevelGraph, node: &GraphNode, line_end: GradientEnd, path: &[Complex64]) -> Result<usize> {
    let entries = node.walk_entries((0, 0));
    let end = *path.last().unwrap();
    let corner = |v: usize, from: Complex64| -> Result<usize> {
        let vert = &child.vertices[v];
        let model = &t.critical()[vert.critical].model;
        let (j, _) = model.nearest((from - vert.location).arg(), |m, j| m.ascent_angle(j));
        let f = child.rotation[v][j];
        let i = node.faces[f].boundary.iter().position(|&x| x == v).unwrap();
        node.walk_index(Entry { step: (f, i), sub: 0 })
            .ok_or_else(|| Error::Containment("corner entry missing from walk".into()))
    };
    if let GradientEnd::CriticalPoint { index, point } = line_end {
        return match child.vertices.iter().position(|v| v.critical == index && v.arg == 0.0) {
            Some(v) => corner(v, path[path.len() - 2]),
            None => Err(Error::SaddleConnection { critical_point: point }),
        };
    }
    for (v, vert) in child.vertices.iter().enumerate() {
        if vert.arg == 0.0 && (end - vert.location).norm() <= 3.0 * vert.radius {
            let from = path.iter().rev().find(|z| (**z - vert.location).norm() > 0.5 * vert.radius).copied().unwrap_or(end);
            return corner(v, from);
        }
    }
    let mut best = (f64::INFINITY, usize::MAX);
    let mut second = f64::INFINITY;
    for (k, e) in entries.iter().enumerate() {
        let pts = child.step_points(e.step);
        let d = (pts[e.sub] - end).norm();
        if d < best.0 {
            second = best.0;
            best = (d, k);
        } else if d < second {
            second = d;
        }
    }
    if best.0 > 1e-6 * (1.0 + end.norm()) || best.0 > 0.5 * second {
        return Err(Error::Containment(format!("gradient line end {end} matches no distinguished point")));
    }
    Ok(best.1)
}

/// The gradient map of face `face` of `graphs[parent]`: for each distinguished
/// point of the face boundary, in counterclockwise order from the first vertex,
/// the index of its image in the child's walk. For a zero every image is 0.
pub fn gradient_map_for_face(
    t: &Tract,
    graphs: &[EmbeddedLevelGraph],
    parent: usize,
    face: usize,
    child: Item,
) -> Result<Vec<usize>> {
    let g = &graphs[parent];
    let node = g.to_graph_node();
    let z = g.faces[face].zeros as usize;
    let Item::Graph(c) = child else {
        return Ok(vec![0; z]);
    };
    let cg = &graphs[c];
    let cnode = cg.to_graph_node();
    let images = node
        .face_entries(face)
        .par_iter()
        .map(|e| {
            let v = g.faces[face].boundary[e.step.1];
            let corner = g.vertices[v].arg == 0.0;
            let line = if corner && e.sub == 0 {
                let sector = g.sector_of(v, face).unwrap();
                descend_from_corner(t, g.vertices[v].critical, sector, cg.level)?
            } else {
                let y = g.step_points(e.step)[e.sub];
                let s0 = t.eval(y).norm();
                follow_gradient(t, y, 0.0, s0, cg.level, None)?
            };
            land(t, cg, &cnode, line.end, &line.points)
        })
        .collect::<Result<Vec<usize>>>()?;
    if images.len() != z {
        return Err(Error::Containment(format!("face has {} distinguished points, expected {z}", images.len())));
    }
    for (i, &im) in images.iter().enumerate() {
        if im != (images[0] + i) % z {
            return Err(Error::Containment(format!("gradient map is not order preserving: {images:?}")));
        }
    }
    Ok(images)
}

/// A configuration together with the curves it was read from.
#[derive(Clone, Debug, Serialize)]
pub struct Extraction {
    pub configuration: Configuration,
    pub curves: Vec<EmbeddedLevelGraph>,
    pub forest: NestingForest,
    /// The input polynomial was divided by this before tracing.
    pub scale: f64,
}

pub fn extract(t: &Tract) -> Result<Extraction> {
    let curves = critical_level_curves(t)?;
    let forest = nesting_forest(&curves, t.zeros())?;
    let jobs: Vec<(usize, usize)> =
        (0..curves.len()).flat_map(|g| (0..curves[g].faces.len()).map(move |f| (g, f))).collect();
    let offsets: Vec<usize> = jobs
        .par_iter()
        .map(|&(g, f)| Ok(gradient_map_for_face(t, &curves, g, f, forest.children[g][f])?.first().copied().unwrap_or(0)))
        .collect::<Result<_>>()?;
    let offset = |g: usize, f: usize| offsets[jobs.iter().position(|&j| j == (g, f)).unwrap()];
    fn build(item: Item, curves: &[EmbeddedLevelGraph], zeros: &[(Complex64, usize)], forest: &NestingForest, offset: &dyn Fn(usize, usize) -> usize) -> Configuration {
        match item {
            Item::Zero(z) => Configuration::point(zeros[z].1 as u32),
            Item::Graph(g) => {
                let mut node = curves[g].to_graph_node();
                for (f, face) in node.faces.iter_mut().enumerate() {
                    face.child = Box::new(build(forest.children[g][f], curves, zeros, forest, offset));
                    face.gradient_offset = offset(g, f);
                }
                Configuration::Graph(node)
            }
        }
    }
    let configuration = build(forest.root, &curves, t.zeros(), &forest, &offset);
    validate(&configuration).map_err(Error::InvalidConfiguration)?;
    let mut expected = t.spectrum().values.clone();
    for v in expected.iter_mut() {
        if v.norm() <= crate::tracer::ZERO_VALUE_TOL {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    let got = configuration.critical_values();
    match unordered_distance(&got, &expected) {
        Some(d) if d <= 1e-6 => {}
        d => {
            return Err(Error::InvalidConfiguration(vec![format!(
                "critical values of the configuration differ from the spectrum (distance {d:?})"
            )]))
        }
    }
    Ok(Extraction { configuration, curves, forest, scale: t.scale() })
}

/// The configuration of a tract.
pub fn extract_configuration(t: &Tract) -> Result<Configuration> {
    Ok(extract(t)?.configuration)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::{canonical_code, equals, DEFAULT_EQ_TOL};
    use crate::polynomials::{from_critical_points, ComplexPoly};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lemniscate_forest() {
        let t = Tract::normalized(ComplexPoly::from_real(&[0.0, -2.0, 1.0]).unwrap()).unwrap();
        let curves = critical_level_curves(&t).unwrap();
        let forest = nesting_forest(&curves, t.zeros()).unwrap();
        assert_eq!(forest.root, Item::Graph(0));
        let mut kids = forest.children[0].clone();
        kids.sort_by_key(|i| format!("{i:?}"));
        assert_eq!(kids, vec![Item::Zero(0), Item::Zero(1)]);
        let conf = extract_configuration(&t).unwrap();
        let g = conf.as_graph().unwrap();
        assert!((g.args[0] - PI).abs() < 1e-9);
        assert!((g.level - 0.9).abs() < 1e-12);
        assert!(g.faces.iter().all(|f| *f.child == Configuration::point(1)));
    }

    #[test]
    fn rose_forest() {
        let t = Tract::normalized(ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap()).unwrap();
        let conf = extract_configuration(&t).unwrap();
        let g = conf.as_graph().unwrap();
        assert_eq!(g.faces.len(), 5);
        assert!(g.faces.iter().all(|f| *f.child == Configuration::point(1)));
    }

    #[test]
    fn triple_zero() {
        let t = Tract::new(ComplexPoly::from_real(&[0.0, 0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(extract_configuration(&t).unwrap(), Configuration::point(3));
    }

    #[test]
    fn single_critical_value() {
        for v0 in [c(0.3, 0.4), c(-0.5, 0.0), c(0.7, 0.0)] {
            let t = Tract::new(ComplexPoly::new(vec![v0, c(0.0, 0.0), c(1.0, 0.0)]).unwrap()).unwrap();
            let conf = extract_configuration(&t).unwrap();
            assert_eq!(conf.critical_values().len(), 1);
            assert!((conf.critical_values()[0] - v0).norm() < 1e-9);
        }
    }

    #[test]
    fn nested_offsets_follow_gradient_lines() {
        let u = [c(0.5, 0.1), c(-0.4, 0.3), c(0.1, -0.6)];
        let t = Tract::normalized(from_critical_points(&u).unwrap()).unwrap();
        let conf = extract_configuration(&t).unwrap();
        assert_eq!(conf.zeros(), 4);
        // affine conjugation does not change the configuration
        let a = Complex64::from_polar(1.7, 0.9);
        let b = c(0.3, -1.2);
        let moved = t.poly().compose_affine(a, b);
        let t2 = Tract::new(moved).unwrap();
        let conf2 = extract_configuration(&t2).unwrap();
        assert!(equals(&conf, &conf2, DEFAULT_EQ_TOL));
        assert_eq!(canonical_code(&conf), canonical_code(&extract_configuration(&t).unwrap()));
    }
}
