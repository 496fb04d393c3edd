use num_complex::Complex64;
use serde::Serialize;

use super::{newton_to, Tract};
use crate::error::{Error, Result};

const MAX_STEPS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GradientEnd {
    /// The target modulus was reached.
    Level,
    /// The line ran into a critical point before reaching the target.
    CriticalPoint { index: usize, point: Complex64 },
}

/// A gradient line of `log|p|`: `arg p` is constant and `|p|` is monotone.
#[derive(Clone, Debug, Serialize)]
pub struct GradientLine {
    pub points: Vec<Complex64>,
    pub moduli: Vec<f64>,
    /// The constant argument of `p`.
    pub phase: f64,
    pub end: GradientEnd,
}

impl GradientLine {
    pub fn endpoint(&self) -> Complex64 {
        *self.points.last().unwrap()
    }
}

/// Follows the gradient line through `start` outward (increasing `|p|`) or
/// inward until `|p|` equals `target`, which defaults to 1 outward and 0 inward.
pub fn trace_gradient_line(t: &Tract, start: Complex64, outward: bool, target: Option<f64>) -> Result<GradientLine> {
    let (pz, dpz) = t.eval_d(start);
    if pz.norm() == 0.0 || dpz.norm() == 0.0 {
        return Err(Error::InvalidInput("gradient lines start at points where p and p' are nonzero".into()));
    }
    let s0 = pz.norm();
    let target = target.unwrap_or(if outward { 1.0 } else { 0.0 });
    if (target > s0) != outward {
        return Err(Error::InvalidInput(format!("target modulus {target} is on the wrong side of {s0}")));
    }
    follow_gradient(t, start, pz.arg(), s0, target, None)
}

/// Descends from a critical point into its bounded sector `sector`, keeping
/// `arg p` equal to the argument of the critical value.
pub(crate) fn descend_from_corner(t: &Tract, critical: usize, sector: usize, target: f64) -> Result<GradientLine> {
    let info = &t.critical()[critical];
    let phase = info.value.arg();
    let z0 = info.point + Complex64::from_polar(2.0 * info.radius, info.model.descent_angle(sector));
    let s0 = t.eval(z0).norm();
    let z = newton_to(t, z0, Complex64::from_polar(s0, phase), 20)
        .ok_or_else(|| Error::Tracing { location: z0, reason: "could not start the gradient line".into() })?;
    let mut line = follow_gradient(t, z, phase, s0, target, Some(critical))?;
    line.points.insert(0, info.point);
    line.moduli.insert(0, info.value.norm());
    Ok(line)
}

/// Integrates `dz/ds = e^(i phase) / p'(z)` from `s0` to `target`, correcting
/// onto `p(z) = s e^(i phase)` after every step.
pub(crate) fn follow_gradient(
    t: &Tract,
    start: Complex64,
    phase: f64,
    s0: f64,
    target: f64,
    skip: Option<usize>,
) -> Result<GradientLine> {
    let unit = Complex64::from_polar(1.0, phase);
    let sign = if target >= s0 { 1.0 } else { -1.0 };
    let min_ds = 0.05 * (s0 - target).abs();
    let mut z = start;
    let mut s = s0;
    let mut points = vec![z];
    let mut moduli = vec![s];
    let mut ds_max = f64::INFINITY;
    let mut skipping = skip;
    let done = |points, moduli, end| Ok(GradientLine { points, moduli, phase, end });
    for _ in 0..MAX_STEPS {
        if s == target {
            return done(points, moduli, GradientEnd::Level);
        }
        if let Some(k) = skipping {
            if (z - t.critical()[k].point).norm() > 3.0 * t.critical()[k].radius {
                skipping = None;
            }
        }
        for (i, c) in t.critical().iter().enumerate() {
            if Some(i) != skipping && (z - c.point).norm() <= c.radius {
                let end = if c.is_zero() && target == 0.0 {
                    GradientEnd::Level
                } else {
                    GradientEnd::CriticalPoint { index: i, point: c.point }
                };
                points.push(c.point);
                moduli.push(c.value.norm());
                return done(points, moduli, end);
            }
        }
        let dpz = t.eval_d(z).1;
        if dpz.norm() == 0.0 {
            return Err(Error::Tracing { location: z, reason: "derivative vanished off the critical points".into() });
        }
        let speed = 1.0 / dpz.norm();
        let cap = (s.max(min_ds) / 16.0).min(0.05 * t.distance_to_critical(z) / speed).min(ds_max);
        let remaining = (target - s).abs();
        let landing = remaining <= cap;
        let ds = if landing { remaining } else { cap };
        if ds < 1e-15 * s0.max(1e-300) && !landing {
            return Err(Error::Tracing { location: z, reason: format!("gradient step size underflow (s {s}, target {target})") });
        }
        let s_new = if landing { target } else { s + sign * ds };
        let dz = unit / dpz * (s_new - s);
        let pred = z + dz;
        let znew = if s_new == 0.0 {
            newton_to(t, pred, Complex64::new(0.0, 0.0), 20)
        } else {
            newton_to(t, pred, unit * s_new, 8)
        };
        match znew {
            Some(zn) if (zn - pred).norm() <= 0.25 * dz.norm() + 1e-14 * (1.0 + z.norm()) => {
                z = zn;
                s = s_new;
                points.push(z);
                moduli.push(s);
                ds_max = (ds * 2.0).max(f64::MIN_POSITIVE);
            }
            _ => {
                ds_max = ds / 2.0;
            }
        }
        if z.norm() > 1e6 {
            return Err(Error::Tracing { location: z, reason: "gradient line escaped".into() });
        }
    }
    Err(Error::Tracing { location: z, reason: "step budget exhausted".into() })
}
