//! Complex polynomials, their critical data, and the map taking prescribed
//! critical points to critical values.

mod roots;
mod spectrum;
mod theta;

pub use roots::{roots, Root, DEFAULT_ROOT_TOL};
pub use spectrum::{
    atypicality_degree, critical_spectrum, match_values, unordered_distance, CriticalPoint, CriticalSpectrum, DEFAULT_TIE_TOL,
};
pub use theta::{
    continue_fiber_point, from_critical_points, polish_fiber_point, solve_theta_fiber, theta,
    theta_jacobian, Fiber, FiberOptions,
};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A polynomial with complex coefficients stored in ascending degree.
///
/// The leading coefficient is nonzero except for the zero polynomial, which is
/// represented by a single zero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        Ok(ComplexPoly { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            coeffs = mul_linear(&coeffs, r);
        }
        ComplexPoly { coeffs }
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |a_k| r^k`, the usual bound for rounding error in Horner evaluation.
    pub fn abs_scale(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() == 1 {
            return ComplexPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        ComplexPoly { coeffs }
    }

    pub fn nth_derivative(&self, k: usize) -> ComplexPoly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Coefficients of `t -> p(w + t)`, ascending in `t`.
    pub fn taylor_at(&self, w: Complex64) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += w * next;
            }
        }
        c
    }

    /// `z -> p(a z + b)`.
    pub fn compose_affine(&self, a: Complex64, b: Complex64) -> ComplexPoly {
        let mut c = self.taylor_at(b);
        let mut ak = Complex64::new(1.0, 0.0);
        for coeff in c.iter_mut() {
            *coeff *= ak;
            ak *= a;
        }
        ComplexPoly { coeffs: c }
    }

    pub fn scale(&self, s: Complex64) -> ComplexPoly {
        ComplexPoly { coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    pub fn add_constant(&self, c: Complex64) -> ComplexPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        ComplexPoly { coeffs }
    }

    pub fn mul(&self, other: &ComplexPoly) -> ComplexPoly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out).unwrap_or_else(|_| ComplexPoly::zero())
    }

    pub fn sub(&self, other: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or_default()
                    - other.coeffs.get(k).copied().unwrap_or_default()
            })
            .collect();
        ComplexPoly::new(out).unwrap_or_else(|_| ComplexPoly::zero())
    }

    /// `z -> conj(p(conj z))`; its level curves are the mirror images of those of `p`.
    pub fn reflected(&self) -> ComplexPoly {
        ComplexPoly { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn roots(&self, tol: f64) -> Result<Vec<Root>> {
        roots(self, tol)
    }
}

fn mul_linear(coeffs: &[Complex64], r: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
    for (k, &c) in coeffs.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * r;
    }
    out
}

impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        ComplexPoly::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
