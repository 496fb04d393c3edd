//! SVG pictures of level curves, critical level graphs and gradient lines.

use std::fmt::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tracer::{critical_level_curves, descend_from_corner, level_set, trace_gradient_line, EmbeddedLevelGraph, Tract};

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Width of the picture in pixels; the height follows the aspect ratio.
    pub width: f64,
    /// Margin as a fraction of the larger side of the bounding box.
    pub margin: f64,
    /// Draw every critical level graph of the tract.
    pub critical_graphs: bool,
    /// Dashed gradient lines from the distinguished points down to the next level.
    pub gradients: bool,
    pub zeros: bool,
    pub critical_points: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { width: 600.0, margin: 0.08, critical_graphs: false, gradients: false, zeros: true, critical_points: true }
    }
}

#[derive(Default)]
struct Scene {
    curves: Vec<Vec<Complex64>>,
    graph_edges: Vec<Vec<Complex64>>,
    gradients: Vec<Vec<Complex64>>,
    distinguished: Vec<Complex64>,
    zeros: Vec<Complex64>,
    critical: Vec<Complex64>,
}

impl Scene {
    fn bounds(&self) -> Option<(Complex64, Complex64)> {
        let all = self
            .curves
            .iter()
            .chain(&self.graph_edges)
            .chain(&self.gradients)
            .flatten()
            .chain(&self.distinguished)
            .chain(&self.zeros)
            .chain(&self.critical);
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        let mut any = false;
        for z in all {
            any = true;
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        any.then_some((lo, hi))
    }
}

fn add_graph(scene: &mut Scene, g: &EmbeddedLevelGraph) {
    for e in &g.edges {
        scene.graph_edges.push(e.chain.clone());
        scene.distinguished.extend_from_slice(&e.distinguished);
    }
    scene.distinguished.extend(g.vertices.iter().filter(|v| v.arg == 0.0).map(|v| v.location));
}

fn add_gradients(scene: &mut Scene, t: &Tract, g: &EmbeddedLevelGraph) -> Result<()> {
    for e in &g.edges {
        for &d in &e.distinguished {
            scene.gradients.push(trace_gradient_line(t, d, false, None)?.points);
        }
    }
    for v in g.vertices.iter().filter(|v| v.arg == 0.0) {
        for sector in 0..=v.multiplicity {
            scene.gradients.push(descend_from_corner(t, v.critical, sector, 0.0)?.points);
        }
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn polyline(out: &mut String, pts: &[Complex64], map: &dyn Fn(Complex64) -> (f64, f64), class: &str, closed: bool) {
    let mut d = String::new();
    for (i, z) in pts.iter().enumerate() {
        let (x, y) = map(*z);
        let _ = write!(d, "{}{},{}", if i == 0 { "M" } else { " L" }, fmt(x), fmt(y));
    }
    if closed {
        d.push_str(" Z");
    }
    let _ = writeln!(out, r#"<path class="{class}" d="{d}"/>"#);
}

fn dot(out: &mut String, z: Complex64, map: &dyn Fn(Complex64) -> (f64, f64), class: &str, r: f64) {
    let (x, y) = map(z);
    let _ = writeln!(out, r#"<circle class="{class}" cx="{}" cy="{}" r="{r}"/>"#, fmt(x), fmt(y));
}

/// An SVG document showing `{|q| = eps}` for each `eps` in `levels`, where `q`
/// is the polynomial the tract was built from (before any normalization).
/// Levels equal to a critical modulus are drawn as their critical graphs.
pub fn render_svg(t: &Tract, levels: &[f64], opts: &RenderOptions) -> Result<String> {
    if let Some(eps) = levels.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidInput(format!("level {eps} must be positive")));
    }
    let graphs = critical_level_curves(t)?;
    let mut scene = Scene::default();
    for &eps in levels {
        let h = eps / t.scale();
        let critical = graphs.iter().filter(|g| (g.level - h).abs() <= 1e-9 * h).collect::<Vec<_>>();
        if critical.is_empty() {
            scene.curves.extend(level_set(t, h)?.into_iter().map(|c| c.points));
        } else if !opts.critical_graphs {
            for g in critical {
                add_graph(&mut scene, g);
            }
        }
    }
    if opts.critical_graphs {
        for g in &graphs {
            add_graph(&mut scene, g);
        }
    }
    if opts.gradients {
        for g in &graphs {
            add_gradients(&mut scene, t, g)?;
        }
    }
    if opts.zeros {
        scene.zeros = t.zeros().iter().map(|z| z.0).collect();
    }
    if opts.critical_points {
        scene.critical = t.critical().iter().filter(|c| !c.is_zero()).map(|c| c.point).collect();
    }
    let (lo, hi) = scene.bounds().unwrap_or((Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0)));
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let pad = opts.margin * span;
    let (x0, y1) = (lo.re - pad, hi.im + pad);
    let (w, h) = (hi.re - lo.re + 2.0 * pad, hi.im - lo.im + 2.0 * pad);
    let px = opts.width / w;
    let height = h * px;
    let map = move |z: Complex64| ((z.re - x0) * px, (y1 - z.im) * px);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt(opts.width),
        fmt(height),
        fmt(opts.width),
        fmt(height)
    );
    out.push_str(concat!(
        "<style>",
        ".level{fill:none;stroke:#1f4e96;stroke-width:1.2}",
        ".graph{fill:none;stroke:#000;stroke-width:1.6}",
        ".gradient{fill:none;stroke:#b03030;stroke-width:0.9;stroke-dasharray:4 3}",
        ".zero{fill:#000}.critical{fill:#d08000}.distinguished{fill:#fff;stroke:#000;stroke-width:1}",
        "</style>\n"
    ));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for c in &scene.curves {
        polyline(&mut out, c, &map, "level", true);
    }
    for c in &scene.graph_edges {
        polyline(&mut out, c, &map, "graph", false);
    }
    for c in &scene.gradients {
        polyline(&mut out, c, &map, "gradient", false);
    }
    for z in &scene.zeros {
        dot(&mut out, *z, &map, "zero", 3.0);
    }
    for z in &scene.critical {
        dot(&mut out, *z, &map, "critical", 3.0);
    }
    for z in &scene.distinguished {
        dot(&mut out, *z, &map, "distinguished", 2.5);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
