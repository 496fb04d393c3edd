//! Fixed inputs shared by the benchmarks.

use lemniscate_core::{Complex64, ComplexPoly};

/// `p_u` for a fixed, well-separated choice of critical points of degree `n`.
pub fn sample_poly(n: usize) -> ComplexPoly {
    let u: Vec<Complex64> = (0..n - 1)
        .map(|k| Complex64::from_polar(0.3 + 0.1 * k as f64, 1.3 * k as f64 + 0.2))
        .collect();
    lemniscate_core::polynomials::from_critical_points(&u).expect("n >= 2")
}
