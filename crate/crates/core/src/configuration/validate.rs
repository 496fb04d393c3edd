use std::collections::HashSet;
use std::f64::consts::TAU;

use super::{Configuration, GraphNode};

/// Checks every structural rule; returns the list of violations, each naming
/// the rule and where it failed.
pub fn validate(c: &Configuration) -> Result<(), Vec<String>> {
    let mut v = Vec::new();
    check(c, "root", None, &mut v);
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

fn check(c: &Configuration, at: &str, parent_level: Option<f64>, out: &mut Vec<String>) {
    match c {
        Configuration::Point { z } => {
            if *z == 0 {
                out.push(format!("{at}: point-multiplicity: Z must be positive"));
            }
        }
        Configuration::Graph(g) => {
            if !(g.level > 0.0 && g.level < 1.0) {
                out.push(format!("{at}: level-range: H = {} not in (0,1)", g.level));
            }
            if let Some(p) = parent_level {
                if g.level >= p {
                    out.push(format!("{at}: maximum-modulus rule: child level {} >= parent level {p}", g.level));
                }
            }
            let before = out.len();
            check_structure(g, at, out);
            if out.len() > before {
                return;
            }
            check_arguments(g, at, out);
            for (fi, f) in g.faces.iter().enumerate() {
                let here = format!("{at}/face{fi}");
                if f.child.zeros() != f.z {
                    out.push(format!("{here}: zero-count: child has Z = {} but z(D) = {}", f.child.zeros(), f.z));
                }
                let limit = if matches!(*f.child, Configuration::Point { .. }) { 1 } else { f.z.max(1) as usize };
                if f.gradient_offset >= limit {
                    out.push(format!("{here}: gradient-offset: {} out of range {limit}", f.gradient_offset));
                }
                check(&f.child, &here, Some(g.level), out);
            }
        }
    }
}

fn check_structure(g: &GraphNode, at: &str, out: &mut Vec<String>) {
    let nv = g.args.len();
    let nf = g.faces.len();
    if nv == 0 || nf < 2 {
        out.push(format!("{at}: vertex-degree: need at least one vertex and two faces"));
        return;
    }
    if g.rotation.len() != nv {
        out.push(format!("{at}: rotation-consistency: {} rotation lists for {nv} vertices", g.rotation.len()));
        return;
    }
    for (v, rot) in g.rotation.iter().enumerate() {
        if rot.len() < 2 {
            out.push(format!("{at}/v{v}: vertex-degree: {} edge-ends, need an even number above two", 2 * rot.len()));
        }
        let set: HashSet<_> = rot.iter().collect();
        if set.len() != rot.len() || rot.iter().any(|&f| f >= nf) {
            out.push(format!("{at}/v{v}: rotation-consistency: bad face list {rot:?}"));
        }
    }
    for (fi, f) in g.faces.iter().enumerate() {
        if f.z == 0 {
            out.push(format!("{at}/face{fi}: zero-count: z(D) must be positive"));
        }
        if f.boundary.is_empty() || f.distinguished.len() != f.boundary.len() {
            out.push(format!("{at}/face{fi}: face-boundary: boundary and distinguished lengths differ or are empty"));
            continue;
        }
        let set: HashSet<_> = f.boundary.iter().collect();
        if set.len() != f.boundary.len() || f.boundary.iter().any(|&x| x >= nv) {
            out.push(format!("{at}/face{fi}: face-boundary: boundary {:?} is not a simple cycle", f.boundary));
            continue;
        }
        for &x in &f.boundary {
            if !g.rotation[x].contains(&fi) {
                out.push(format!("{at}/face{fi}: rotation-consistency: vertex {x} does not list the face"));
            }
        }
    }
    for (v, rot) in g.rotation.iter().enumerate() {
        for &f in rot {
            if f < nf && !g.faces[f].boundary.contains(&v) {
                out.push(format!("{at}/v{v}: rotation-consistency: face {f} does not contain the vertex"));
            }
        }
    }
    if !out.is_empty() {
        return;
    }
    // face-vertex incidence must be a tree: connected with V + F - 1 incidences
    let incidences: usize = g.faces.iter().map(|f| f.boundary.len()).sum();
    if incidences != nv + nf - 1 || !incidence_connected(g) {
        out.push(format!("{at}: unbounded-face incidence: face-vertex incidence graph is not a tree"));
        return;
    }
    let walk = g.walk((0, 0));
    if walk.len() != incidences {
        out.push(format!(
            "{at}: unbounded-face incidence: walk along the unbounded face covers {} of {incidences} edges",
            walk.len()
        ));
    }
}

fn incidence_connected(g: &GraphNode) -> bool {
    let nv = g.args.len();
    let mut seen_v = vec![false; nv];
    let mut seen_f = vec![false; g.faces.len()];
    let mut stack = vec![0usize];
    seen_v[0] = true;
    while let Some(v) = stack.pop() {
        for &f in &g.rotation[v] {
            if !seen_f[f] {
                seen_f[f] = true;
                for &x in &g.faces[f].boundary {
                    if !seen_v[x] {
                        seen_v[x] = true;
                        stack.push(x);
                    }
                }
            }
        }
    }
    seen_v.iter().all(|&b| b) && seen_f.iter().all(|&b| b)
}

fn check_arguments(g: &GraphNode, at: &str, out: &mut Vec<String>) {
    for (v, &a) in g.args.iter().enumerate() {
        if !(0.0..TAU).contains(&a) {
            out.push(format!("{at}/v{v}: argument-range: a(x) = {a} not in [0, 2pi)"));
        }
    }
    for (fi, f) in g.faces.iter().enumerate() {
        let mut count = 0usize;
        for i in 0..f.boundary.len() {
            let d = g.step_delta((fi, i));
            if d <= 0.0 {
                out.push(format!(
                    "{at}/face{fi}/edge{i}: argument-monotonicity: argument change {d} is not positive"
                ));
            }
            count += g.step_entries((fi, i));
        }
        if count != f.z as usize {
            out.push(format!(
                "{at}/face{fi}: distinguished-count: {count} distinguished points but z(D) = {}",
                f.z
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_point_is_valid() {
        assert!(validate(&Configuration::point(1)).is_ok());
        assert!(validate(&Configuration::point(0)).is_err());
    }

    #[test]
    fn rose_is_valid() {
        assert!(validate(&rose(5, 0.9)).is_ok());
    }

    #[test]
    fn chain_is_valid() {
        assert_eq!(validate(&chain(0.5, 1.0, 2.0)), Ok(()));
        assert_eq!(validate(&chain(0.5, 2.0, 1.0)), Ok(()));
        assert_eq!(validate(&chain(0.5, 0.0, 1.0)), Ok(()));
    }

    #[test]
    fn maximum_modulus_rule() {
        let inner = figure_eight(0.7, 1.0, Configuration::point(1), Configuration::point(1), 0, 0);
        let c = figure_eight(0.5, PI, Configuration::point(1), inner, 0, 0);
        let err = validate(&c).unwrap_err();
        assert!(err.iter().any(|e| e.contains("maximum-modulus rule")), "{err:?}");
    }

    #[test]
    fn wrong_distinguished_count() {
        let mut c = figure_eight(0.5, PI, Configuration::point(1), Configuration::point(1), 0, 0);
        if let Configuration::Graph(g) = &mut c {
            g.faces[0].distinguished[0] = 2;
        }
        let err = validate(&c).unwrap_err();
        assert!(err.iter().any(|e| e.contains("distinguished-count")));
    }

    #[test]
    fn non_increasing_argument() {
        // edge x -> y with a(y) < a(x) and no crossing
        let mut c = chain(0.5, 2.0, 1.0);
        if let Configuration::Graph(g) = &mut c {
            g.faces[1].distinguished = vec![0, 1];
        }
        let err = validate(&c).unwrap_err();
        assert!(err.iter().any(|e| e.contains("argument-monotonicity")), "{err:?}");
    }

    #[test]
    fn zero_count_mismatch() {
        let c = figure_eight(0.5, PI, Configuration::point(2), Configuration::point(1), 0, 0);
        let mut bad = c.clone();
        if let Configuration::Graph(g) = &mut bad {
            g.faces[0].child = Box::new(Configuration::point(1));
        }
        assert!(validate(&c).is_ok());
        assert!(validate(&bad).unwrap_err().iter().any(|e| e.contains("zero-count")));
    }
}
