use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::ComplexPoly;
use crate::error::{Error, Result};

/// `p_u(z) = n * integral from 0 to z of prod_j (t - u_j) dt`.
///
/// Monic of degree `n = u.len() + 1` with `p_u(0) = 0` and critical points `u`.
pub fn from_critical_points(u: &[Complex64]) -> Result<ComplexPoly> {
    if u.is_empty() {
        return Err(Error::InvalidInput("need at least one critical point (n >= 2)".into()));
    }
    Ok(integrate_scaled(&ComplexPoly::from_roots(u), u.len() + 1))
}

fn integrate_scaled(q: &ComplexPoly, n: usize) -> ComplexPoly {
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    for (k, &c) in q.coeffs().iter().enumerate() {
        coeffs.push(c * (n as f64 / (k + 1) as f64));
    }
    ComplexPoly::new(coeffs).expect("finite coefficients")
}

/// Critical values of `p_u`, in the order of `u`.
pub fn theta(u: &[Complex64]) -> Result<Vec<Complex64>> {
    let p = from_critical_points(u)?;
    Ok(u.iter().map(|&x| p.eval(x)).collect())
}

/// `J[j][k] = d theta_j / d u_k`. Since `p_u'(u_j) = 0`, only the dependence of
/// the coefficients on `u_k` contributes.
pub fn theta_jacobian(u: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let m = u.len();
    if m == 0 {
        return Err(Error::InvalidInput("need at least one critical point (n >= 2)".into()));
    }
    let n = m + 1;
    let mut jac = DMatrix::zeros(m, m);
    for k in 0..m {
        let others: Vec<Complex64> = (0..m).filter(|&l| l != k).map(|l| u[l]).collect();
        let qk = integrate_scaled(&ComplexPoly::from_roots(&others), n);
        for j in 0..m {
            jac[(j, k)] = -qk.eval(u[j]);
        }
    }
    Ok(jac)
}

fn residual(u: &[Complex64], v: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    let t = theta(u)?;
    let f: Vec<Complex64> = t.iter().zip(v).map(|(a, b)| a - b).collect();
    let r = f.iter().fold(0.0, |m: f64, x| m.max(x.norm()));
    Ok((f, r))
}

fn newton_step(u: &[Complex64], f: &[Complex64]) -> Option<Vec<Complex64>> {
    let jac = theta_jacobian(u).ok()?;
    let rhs = DVector::from_iterator(f.len(), f.iter().map(|x| -x));
    let sol = jac.lu().solve(&rhs)?;
    if sol.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return None;
    }
    Some(sol.iter().copied().collect())
}

/// Damped Newton from `start`. Returns the final iterate and its residual.
fn damped_newton(
    start: Vec<Complex64>,
    v: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> (Vec<Complex64>, f64) {
    let mut u = start;
    let Ok((mut f, mut r)) = residual(&u, v) else {
        return (u, f64::INFINITY);
    };
    for _ in 0..max_iter {
        if r < tol {
            break;
        }
        let Some(step) = newton_step(&u, &f) else { break };
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1.0 / 4096.0 {
            let trial: Vec<Complex64> = u.iter().zip(&step).map(|(a, d)| a + d * lambda).collect();
            if let Ok((ft, rt)) = residual(&trial, v) {
                if rt < r {
                    u = trial;
                    f = ft;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (u, r)
}

/// Options for multistart fiber solving.
#[derive(Clone, Debug)]
pub struct FiberOptions {
    pub starts: usize,
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
    /// Extra starting points tried before the random ones.
    pub warm_starts: Vec<Vec<Complex64>>,
}

impl Default for FiberOptions {
    fn default() -> Self {
        FiberOptions { starts: 200, tol: 1e-10, seed: 0, max_iter: 100, warm_starts: Vec::new() }
    }
}

/// Solutions of `theta(u) = v` found by multistart Newton, with diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct Fiber {
    pub solutions: Vec<Vec<Complex64>>,
    pub starts: usize,
    pub best_residual: f64,
}

impl Fiber {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

pub fn solve_theta_fiber(v: &[Complex64], opts: &FiberOptions) -> Result<Fiber> {
    if v.is_empty() {
        return Err(Error::InvalidInput("need n - 1 >= 1 critical values".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let m = v.len();
    let n = m + 1;
    let vmax = v.iter().fold(0.0, |a: f64, x| a.max(x.norm()));
    let sigma = vmax.max(1e-6).powf(1.0 / n as f64);

    let mut starts: Vec<Vec<Complex64>> = opts.warm_starts.iter().filter(|s| s.len() == m).cloned().collect();
    starts.extend((0..opts.starts).map(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i as u64);
        (0..m)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im) * (sigma / std::f64::consts::SQRT_2)
            })
            .collect()
    }));
    let total = starts.len();

    let results: Vec<(Vec<Complex64>, f64)> = starts
        .into_par_iter()
        .map(|s| damped_newton(s, v, opts.tol, opts.max_iter))
        .collect();

    let best_residual = results.iter().fold(f64::INFINITY, |a, (_, r)| a.min(*r));
    let radius = 1e3 * opts.tol;
    let mut solutions: Vec<Vec<Complex64>> = Vec::new();
    for (u, r) in results {
        if r >= opts.tol {
            continue;
        }
        let dup = solutions
            .iter()
            .any(|s| s.iter().zip(&u).all(|(a, b)| (a - b).norm() <= radius));
        if !dup {
            solutions.push(u);
        }
    }
    Ok(Fiber { solutions, starts: total, best_residual })
}

/// Long Newton run at a fixed target, for endpoints where the Jacobian may be
/// nearly singular and convergence only linear. Returns the best iterate.
pub fn polish_fiber_point(u: &[Complex64], v: &[Complex64], tol: f64, max_iter: usize) -> (Vec<Complex64>, f64) {
    damped_newton(u.to_vec(), v, tol, max_iter)
}

/// Tracks a fiber point along the straight path from `v_from` to `v_to`.
///
/// `u0` must satisfy `theta(u0) = v_from`. The returned point satisfies
/// `theta(u) = v_to` to within `tol`, after a final polishing run.
pub fn continue_fiber_point(
    u0: &[Complex64],
    v_from: &[Complex64],
    v_to: &[Complex64],
    tol: f64,
) -> Result<Vec<Complex64>> {
    if u0.len() != v_from.len() || v_from.len() != v_to.len() {
        return Err(Error::InvalidInput("dimension mismatch in continuation".into()));
    }
    let target = |t: f64| -> Vec<Complex64> {
        v_from.iter().zip(v_to).map(|(a, b)| a + (b - a) * t).collect()
    };
    let dv: Vec<Complex64> = v_from.iter().zip(v_to).map(|(a, b)| b - a).collect();
    let mut u = u0.to_vec();
    let mut t = 0.0;
    let mut h: f64 = 0.05;
    while t < 1.0 {
        let t_next = (t + h).min(1.0);
        // Euler predictor: J du = dv dt
        let neg: Vec<Complex64> = dv.iter().map(|x| -x * (t_next - t)).collect();
        let predicted: Option<Vec<Complex64>> =
            newton_step(&u, &neg).map(|d| u.iter().zip(&d).map(|(a, b)| a + b).collect());
        let mut ok = false;
        if let Some(pred) = predicted {
            let vt = target(t_next);
            let (cand, r) = damped_newton(pred.clone(), &vt, tol, 8);
            let jump = cand.iter().zip(&pred).fold(0.0, |m: f64, (a, b)| m.max((a - b).norm()));
            let scale = u.iter().fold(1e-3, |m: f64, x| m.max(x.norm()));
            if r < tol && jump < 0.1 * scale {
                u = cand;
                t = t_next;
                h = (h * 1.5).min(0.1);
                ok = true;
            }
        }
        if !ok {
            h *= 0.5;
            if h < 1e-7 {
                // possibly a singular endpoint; try to finish directly
                let (cand, r) = polish_fiber_point(&u, v_to, tol, 500);
                if r < tol {
                    return Ok(cand);
                }
                return Err(Error::ContinuationStalled { t });
            }
        }
    }
    let (u, r) = polish_fiber_point(&u, v_to, tol * 1e-2, 50);
    if r < tol {
        Ok(u)
    } else {
        Err(Error::ContinuationStalled { t: 1.0 })
    }
}
