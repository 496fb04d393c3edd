use num_complex::Complex64;

use super::ComplexPoly;
use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

const MAX_ITER: usize = 2000;

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// All roots of `p` with multiplicities summing to its degree.
///
/// Simultaneous Aberth iteration gives one approximation per root; nearby
/// approximations are then merged into multiple roots and polished with Newton
/// on the appropriate derivative.
pub fn roots(p: &ComplexPoly, tol: f64) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no finite root set".into()));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidInput(format!("root tolerance {tol} must lie in (0, 1)")));
    }
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic = p.scale(Complex64::new(1.0, 0.0) / p.leading());
    // factor out exact zeros at the origin first
    let lead_zeros = monic.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = ComplexPoly::new(monic.coeffs()[lead_zeros..].to_vec())?;

    let mut out = Vec::new();
    if lead_zeros > 0 {
        out.push(Root { value: Complex64::new(0.0, 0.0), multiplicity: lead_zeros });
    }
    if reduced.degree() > 0 {
        let approx = aberth(&reduced)?;
        out.extend(cluster(&reduced, &approx, tol));
    }
    out.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(out)
}

fn initial_guesses(p: &ComplexPoly) -> Vec<Complex64> {
    let n = p.degree();
    let c = p.coeffs();
    let center = -c[n - 1] / (c[n] * n as f64);
    let shifted = p.taylor_at(center);
    // Fujiwara bound for the shifted polynomial
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        let a = (shifted[n - k] / shifted[n]).norm();
        let b = if k == n { a / 2.0 } else { a };
        radius = radius.max(b.powf(1.0 / k as f64));
    }
    radius = (2.0 * radius).max(1e-3);
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius * 0.5, angle)
        })
        .collect()
}

fn aberth(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let mut z = initial_guesses(p);
    let mut done = vec![false; n];
    let eps = f64::EPSILON;
    for iter in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.norm() <= 16.0 * eps * p.abs_scale(z[i].norm()) {
                done[i] = true;
                continue;
            }
            all = false;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += 1.0 / d;
                    }
                }
            }
            let ratio = if dv.norm() > 0.0 { v / dv } else { Complex64::new(1e-8, 1e-8) };
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let w = if denom.norm() > 0.0 { ratio / denom } else { ratio };
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
            }
        }
        if all {
            return Ok(z);
        }
        if iter + 1 == MAX_ITER {
            break;
        }
    }
    let residual = z
        .iter()
        .map(|&zi| p.eval(zi).norm() / p.abs_scale(zi.norm()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Err(Error::RootsDidNotConverge { iterations: MAX_ITER, residual, best: z })
}

fn cluster_radius(m: usize, tol: f64, scale: f64) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    2.0 * scale * tol.powf(1.0 / m as f64)
}

/// Greedy grouping of the Aberth approximations, trying the largest groups first.
fn cluster(p: &ComplexPoly, approx: &[Complex64], tol: f64) -> Vec<Root> {
    let n = approx.len();
    let scale = approx.iter().fold(1.0f64, |s, z| s.max(z.norm()));
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for m in (2..=n).rev() {
        let r = cluster_radius(m, tol, scale);
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let mut near: Vec<(f64, usize)> = (0..n)
                .filter(|&j| !assigned[j])
                .map(|j| ((approx[j] - approx[i]).norm(), j))
                .collect();
            if near.len() < m {
                continue;
            }
            near.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let group: Vec<usize> = near[..m].iter().map(|&(_, j)| j).collect();
            let centroid = group.iter().map(|&j| approx[j]).sum::<Complex64>() / m as f64;
            let spread = group.iter().map(|&j| (approx[j] - centroid).norm()).fold(0.0, f64::max);
            if spread > r {
                continue;
            }
            for &j in &group {
                assigned[j] = true;
            }
            out.push(Root { value: refine_multiple(p, centroid, m, r), multiplicity: m });
        }
    }
    for i in 0..n {
        if !assigned[i] {
            out.push(Root { value: approx[i], multiplicity: 1 });
        }
    }
    out
}

/// Newton on the (m-1)-th derivative, which has a simple root at an m-fold root.
fn refine_multiple(p: &ComplexPoly, start: Complex64, m: usize, radius: f64) -> Complex64 {
    let q = p.nth_derivative(m - 1);
    let mut z = start;
    for _ in 0..50 {
        let (v, dv) = q.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    if (z - start).norm() <= radius && z.re.is_finite() && z.im.is_finite() {
        z
    } else {
        start
    }
}
