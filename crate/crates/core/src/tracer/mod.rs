//! Numerical tracing of level curves `|p| = eps` and gradient lines
//! `arg p = const` inside the tract `{|p| < 1}` of a polynomial.

mod gradient;
mod level;
mod local;

pub use gradient::{trace_gradient_line, GradientEnd, GradientLine};
pub use level::{
    critical_level_curves, level_set, point_in_polygon, trace_level_component, winding_number, EmbeddedEdge, EmbeddedFace,
    EmbeddedLevelGraph, EmbeddedVertex, LevelCurve,
};
pub use local::{local_edge_directions, LocalModel};

pub(crate) use gradient::{descend_from_corner, follow_gradient};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomials::{critical_spectrum, roots, ComplexPoly, CriticalSpectrum, Root, DEFAULT_ROOT_TOL};

/// Critical values at or below this modulus are treated as multiple zeros.
pub const ZERO_VALUE_TOL: f64 = 1e-9;

/// Relative accuracy of the local model at the vertex-hit radius.
const HIT_TOL: f64 = 1e-8;

/// Maximum modulus of the critical values after [`Tract::normalized`] rescales.
pub const NORMALIZED_MAX: f64 = 0.9;

/// A critical point together with the data the tracer needs near it.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalInfo {
    pub point: Complex64,
    /// Multiplicity as a zero of `p'`.
    pub multiplicity: usize,
    pub value: Complex64,
    /// Radius inside which curves are matched to the local model instead of integrated.
    pub radius: f64,
    #[serde(skip)]
    pub(crate) model: LocalModel,
}

impl CriticalInfo {
    pub fn is_zero(&self) -> bool {
        self.value.norm() <= ZERO_VALUE_TOL
    }
}

/// The region `{|p| < 1}` of a polynomial whose critical values all have modulus below 1.
#[derive(Clone, Debug, Serialize)]
pub struct Tract {
    poly: ComplexPoly,
    /// `poly(z) = centered(z - center)`; evaluating near the zeros' centroid
    /// avoids the cancellation of large coefficients.
    #[serde(skip)]
    centered: ComplexPoly,
    #[serde(skip)]
    center: Complex64,
    spectrum: CriticalSpectrum,
    critical: Vec<CriticalInfo>,
    zeros: Vec<(Complex64, usize)>,
    /// The input polynomial divided by `scale` gives `poly`.
    scale: f64,
}

impl Tract {
    pub fn new(p: ComplexPoly) -> Result<Self> {
        Self::with_scale(p, 1.0)
    }

    /// Like [`Tract::new`] but first divides `p` by a positive constant when
    /// needed so that the largest critical value has modulus 0.9.
    pub fn normalized(p: ComplexPoly) -> Result<Self> {
        if p.degree() < 1 {
            return Err(Error::InvalidInput("constant polynomial has no tract".into()));
        }
        let m = critical_spectrum(&p, DEFAULT_ROOT_TOL)?.max_modulus();
        if m >= 1.0 {
            let s = m / NORMALIZED_MAX;
            Self::with_scale(p.scale(Complex64::new(1.0 / s, 0.0)), s)
        } else {
            Self::new(p)
        }
    }

    fn with_scale(p: ComplexPoly, scale: f64) -> Result<Self> {
        if p.degree() < 1 {
            return Err(Error::InvalidInput("constant polynomial has no tract".into()));
        }
        let coeffs = p.coeffs();
        let n = p.degree();
        let center = -coeffs[n - 1] / (coeffs[n] * n as f64);
        let centered = ComplexPoly::new(p.taylor_at(center))?;
        let mut spectrum = if n == 1 {
            CriticalSpectrum { points: Vec::new(), values: Vec::new() }
        } else {
            critical_spectrum(&centered, DEFAULT_ROOT_TOL)?
        };
        for c in spectrum.points.iter_mut() {
            c.point += center;
        }
        let max_modulus = spectrum.max_modulus();
        if !(max_modulus < 1.0) {
            return Err(Error::NotATract { max_modulus });
        }
        let zeros: Vec<(Complex64, usize)> =
            roots(&centered, DEFAULT_ROOT_TOL)?.into_iter().map(|Root { value, multiplicity }| (value + center, multiplicity)).collect();
        let critical = spectrum
            .points
            .iter()
            .map(|c| {
                let mut model = LocalModel::new(&centered, c.point - center, c.multiplicity);
                model.w = c.point;
                let sep = spectrum
                    .points
                    .iter()
                    .map(|o| o.point)
                    .chain(zeros.iter().map(|z| z.0))
                    .map(|q| (q - c.point).norm())
                    .filter(|&d| d > 1e-12)
                    .fold(f64::INFINITY, f64::min);
                let radius = model.hit_radius(HIT_TOL).min(0.05 * sep);
                CriticalInfo { point: c.point, multiplicity: c.multiplicity, value: c.value, radius, model }
            })
            .collect();
        Ok(Tract { poly: p, centered, center, spectrum, critical, zeros, scale })
    }

    pub fn poly(&self) -> &ComplexPoly {
        &self.poly
    }

    pub fn spectrum(&self) -> &CriticalSpectrum {
        &self.spectrum
    }

    pub fn critical(&self) -> &[CriticalInfo] {
        &self.critical
    }

    /// Distinct zeros of `p` with multiplicities.
    pub fn zeros(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The bound defining the tract.
    pub fn level(&self) -> f64 {
        1.0
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.centered.eval(z - self.center)
    }

    /// `p(z)` and `p'(z)`.
    pub fn eval_d(&self, z: Complex64) -> (Complex64, Complex64) {
        self.centered.eval_with_derivative(z - self.center)
    }

    /// Bound on the rounding error of [`Tract::eval`] at `z`.
    pub(crate) fn noise(&self, z: Complex64) -> f64 {
        64.0 * f64::EPSILON * self.centered.abs_scale((z - self.center).norm())
    }

    pub(crate) fn distance_to_critical(&self, z: Complex64) -> f64 {
        self.critical.iter().map(|c| (c.point - z).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Number of zeros, with multiplicity, inside a closed polygon.
    pub fn zeros_inside(&self, polygon: &[Complex64]) -> u32 {
        self.zeros.iter().filter(|z| point_in_polygon(z.0, polygon)).map(|z| z.1 as u32).sum()
    }
}

/// Newton's method for `p(z) = target` from `z`. `None` when it does not
/// settle within a few iterations.
pub(crate) fn newton_to(t: &Tract, mut z: Complex64, target: Complex64, max_iter: usize) -> Option<Complex64> {
    for _ in 0..max_iter {
        let (pz, dpz) = t.eval_d(z);
        let r = pz - target;
        let noise = t.noise(z);
        if r.norm() <= 1e-13 * target.norm() + noise {
            return Some(z);
        }
        if dpz.norm() == 0.0 {
            return None;
        }
        z -= r / dpz;
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
    }
    let r = (t.eval(z) - target).norm();
    let noise = t.noise(z);
    (r <= 1e-10 * target.norm() + noise).then_some(z)
}
