use num_complex::Complex64;
use pathfinding::kuhn_munkres::kuhn_munkres_min;
use pathfinding::matrix::Matrix;
use serde::Serialize;

use super::{roots, ComplexPoly, Root};
use crate::error::{Error, Result};

/// Relative tolerance used to decide that two critical values have equal modulus.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Critical points of a polynomial and the critical values they produce.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalSpectrum {
    pub points: Vec<CriticalPoint>,
    /// Critical values repeated by multiplicity, sorted by ascending modulus.
    pub values: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CriticalPoint {
    pub point: Complex64,
    pub multiplicity: usize,
    pub value: Complex64,
}

impl CriticalSpectrum {
    pub fn max_modulus(&self) -> f64 {
        self.values.last().map_or(0.0, |v| v.norm())
    }
}

pub fn critical_spectrum(p: &ComplexPoly, tol: f64) -> Result<CriticalSpectrum> {
    if p.degree() < 1 {
        return Err(Error::InvalidInput("constant polynomial has no critical structure".into()));
    }
    let rs: Vec<Root> = roots(&p.derivative(), tol)?;
    let points: Vec<CriticalPoint> = rs
        .into_iter()
        .map(|r| CriticalPoint { point: r.value, multiplicity: r.multiplicity, value: p.eval(r.value) })
        .collect();
    let mut values: Vec<Complex64> = points
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity))
        .collect();
    values.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    Ok(CriticalSpectrum { points, values })
}

/// Largest pairwise distance after matching the entries of `a` and `b` by a
/// minimal-cost assignment on `|x - y|`. `None` when the lengths differ.
pub fn unordered_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    let assignment = match_values(a, b)?;
    Some(assignment.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).fold(0.0, f64::max))
}

/// Minimal-cost matching of `a` onto `b`: entry `i` of the result is the index
/// in `b` paired with `a[i]`. `None` when the lengths differ.
pub fn match_values(a: &[Complex64], b: &[Complex64]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    // integer costs on a 1e-12 grid
    let weights = Matrix::from_fn(a.len(), b.len(), |(i, j)| ((a[i] - b[j]).norm() * 1e12).round() as i64);
    Some(kuhn_munkres_min(&weights).1)
}

fn tied(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.max(b).max(1e-300) || (a <= tol && b <= tol)
}

/// The atypicality degree of a modulus-sorted vector of critical values.
///
/// This is the largest 1-based index `k >= 2` with `|v(k-1)| = |v(k)|`; failing
/// that it is 1 when `v(1) = 0` and 0 otherwise. Equality of moduli is tested
/// with relative tolerance `tol`.
pub fn atypicality_degree(v: &[Complex64], tol: f64) -> Result<usize> {
    for w in v.windows(2) {
        let (a, b) = (w[0].norm(), w[1].norm());
        if a > b && !tied(a, b, tol) {
            return Err(Error::NotSorted);
        }
    }
    for k in (2..=v.len()).rev() {
        if tied(v[k - 2].norm(), v[k - 1].norm(), tol) {
            return Ok(k);
        }
    }
    Ok(match v.first() {
        Some(x) if x.norm() <= tol => 1,
        _ => 0,
    })
}
