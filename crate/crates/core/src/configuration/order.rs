use super::Configuration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Point,
    Graph,
}

/// A member of the configuration, addressed by the faces passed through from the root.
#[derive(Clone, Debug)]
pub struct NodeInfo {
    pub path: Vec<usize>,
    pub kind: NodeKind,
    pub level: f64,
    pub zeros: u32,
}

/// The containment order on members: `a` precedes `b` when `a` sits inside a
/// bounded face of `b`.
#[derive(Clone, Debug)]
pub struct PrecOrder {
    pub nodes: Vec<NodeInfo>,
}

impl PrecOrder {
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        let (pa, pb) = (&self.nodes[a].path, &self.nodes[b].path);
        pa.len() > pb.len() && pa.starts_with(pb)
    }

    /// Members inside face `face` of node `b`.
    pub fn inside_face(&self, b: usize, face: usize) -> Vec<usize> {
        let mut prefix = self.nodes[b].path.clone();
        prefix.push(face);
        (0..self.nodes.len()).filter(|&i| self.nodes[i].path.starts_with(&prefix)).collect()
    }

    /// For face `face` of graph node `b`: the number of zeros counted with
    /// multiplicity among single-point members inside it, and the number of
    /// critical values contributed by members inside it.
    pub fn face_counts(&self, root: &Configuration, b: usize, face: usize) -> (u32, usize) {
        let inside = self.inside_face(b, face);
        let zeros = inside
            .iter()
            .filter(|&&i| self.nodes[i].kind == NodeKind::Point)
            .map(|&i| self.nodes[i].zeros)
            .sum();
        let values = inside
            .iter()
            .map(|&i| own_value_count(root.node_at(&self.nodes[i].path).expect("path from order")))
            .sum();
        (zeros, values)
    }

    /// Checks that every face holds `z(D)` zeros and `z(D) - 1` critical values.
    pub fn note_identities_hold(&self, root: &Configuration) -> bool {
        self.nodes.iter().enumerate().all(|(b, info)| {
            let Some(Configuration::Graph(g)) = root.node_at(&info.path) else {
                return true;
            };
            g.faces.iter().enumerate().all(|(fi, f)| {
                let (zeros, values) = self.face_counts(root, b, fi);
                zeros == f.z && values + 1 == f.z as usize
            })
        })
    }
}

fn own_value_count(c: &Configuration) -> usize {
    match c {
        Configuration::Point { z } => z.saturating_sub(1) as usize,
        Configuration::Graph(g) => (0..g.vertex_count()).map(|v| g.multiplicity(v)).sum(),
    }
}

pub fn prec_order(c: &Configuration) -> PrecOrder {
    let mut nodes = Vec::new();
    collect(c, Vec::new(), &mut nodes);
    PrecOrder { nodes }
}

fn collect(c: &Configuration, path: Vec<usize>, out: &mut Vec<NodeInfo>) {
    let kind = match c {
        Configuration::Point { .. } => NodeKind::Point,
        Configuration::Graph(_) => NodeKind::Graph,
    };
    out.push(NodeInfo { path: path.clone(), kind, level: c.level(), zeros: c.zeros() });
    if let Configuration::Graph(g) = c {
        for (i, f) in g.faces.iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            collect(&f.child, p, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn structural_examples() {
        for c in [
            rose(5, 0.9),
            chain(0.5, 1.0, 2.0),
            figure_eight(
                0.5,
                PI,
                Configuration::point(1),
                figure_eight(0.2, 1.0, Configuration::point(2), Configuration::point(1), 0, 0),
                0,
                1,
            ),
        ] {
            let o = prec_order(&c);
            assert!(o.note_identities_hold(&c));
            for i in 1..o.nodes.len() {
                assert!(o.precedes(i, 0));
                assert!(!o.precedes(0, i));
            }
        }
    }
}
