use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomials::ComplexPoly;

/// The model `p(z) ~ v + c (z - w)^(k+1)` of a polynomial near a critical
/// point `w` of multiplicity `k`.
///
/// Write `alpha = arg(c / v)`. Around `w` the level curve `|p| = |v|` consists
/// of `2(k+1)` rays. On ray `out(j)` the argument of `p` increases away from
/// `w`, on ray `in(j) = out(j) + pi/(k+1)` it decreases, and the sector from
/// `out(j)` to `in(j)` lies in `{|p| < |v|}`.
#[derive(Clone, Debug, Default)]
pub struct LocalModel {
    pub w: Complex64,
    pub k: usize,
    pub v: Complex64,
    pub c: Complex64,
    /// Next Taylor coefficient, used to bound the range of the model.
    pub d: Complex64,
    pub alpha: f64,
}

impl LocalModel {
    pub fn new(p: &ComplexPoly, w: Complex64, k: usize) -> Self {
        let t = p.taylor_at(w);
        let get = |i: usize| t.get(i).copied().unwrap_or_default();
        let v = get(0);
        let c = get(k + 1);
        let alpha = if v.norm() > 0.0 { (c / v).arg() } else { 0.0 };
        LocalModel { w, k, v, c, d: get(k + 2), alpha }
    }

    fn order(&self) -> f64 {
        (self.k + 1) as f64
    }

    pub fn out_angle(&self, j: usize) -> f64 {
        ((FRAC_PI_2 - self.alpha + TAU * j as f64) / self.order()).rem_euclid(TAU)
    }

    pub fn in_angle(&self, j: usize) -> f64 {
        (self.out_angle(j) + PI / self.order()).rem_euclid(TAU)
    }

    /// Steepest descent of `|p|` inside the bounded sector `j`.
    pub fn descent_angle(&self, j: usize) -> f64 {
        ((PI - self.alpha + TAU * j as f64) / self.order()).rem_euclid(TAU)
    }

    /// Steepest ascent inside the unbounded sector between `in(j-1)` and `out(j)`.
    pub fn ascent_angle(&self, j: usize) -> f64 {
        ((TAU * j as f64 - self.alpha) / self.order()).rem_euclid(TAU)
    }

    /// Index `j` minimizing the angular distance between `angle` and `f(j)`.
    pub fn nearest(&self, angle: f64, f: impl Fn(&Self, usize) -> f64) -> (usize, f64) {
        (0..=self.k)
            .map(|j| (j, angle_dist(angle, f(self, j))))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap()
    }

    /// Radius at which the model term has relative size `tol`, limited so that
    /// the next Taylor term stays below one percent of the model term.
    pub fn hit_radius(&self, tol: f64) -> f64 {
        let scale = if self.v.norm() > 0.0 { self.v.norm() } else { 1.0 };
        let r = (tol * scale / self.c.norm()).powf(1.0 / self.order());
        if self.d.norm() > 0.0 {
            r.min(0.01 * self.c.norm() / self.d.norm())
        } else {
            r
        }
    }
}

pub(crate) fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// The `2(k+1)` unit tangent directions of `{|p| = |p(w)|}` at a critical
/// point `w` of multiplicity `k`, sorted by angle in `[0, 2pi)`.
pub fn local_edge_directions(p: &ComplexPoly, w: Complex64, k: usize) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Err(Error::InvalidInput("not a critical point".into()));
    }
    let m = LocalModel::new(p, w, k);
    if m.v.norm() == 0.0 {
        return Err(Error::InvalidInput(format!("p vanishes at {w}; the level set is the point itself")));
    }
    if m.c.norm() == 0.0 {
        return Err(Error::InvalidInput(format!("multiplicity {k} is too small at {w}")));
    }
    let mut angles: Vec<f64> = (0..=k).flat_map(|j| [m.out_angle(j), m.in_angle(j)]).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(angles.into_iter().map(|a| Complex64::from_polar(1.0, a)).collect())
}
