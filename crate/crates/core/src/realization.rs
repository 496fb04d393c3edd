//! Polynomials with a prescribed configuration, and the equivalence test.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::configuration::{
    canonical_code, equals, scatter_bound, scatter_perturb, validate, Configuration, DEFAULT_EQ_TOL,
};
use crate::error::{Error, Result};
use crate::extraction::extract_configuration;
use crate::polynomials::{
    atypicality_degree, continue_fiber_point, from_critical_points, match_values, polish_fiber_point,
    solve_theta_fiber, theta, ComplexPoly, FiberOptions, DEFAULT_TIE_TOL,
};
use crate::tracer::Tract;

/// Residual reached by the final Newton polish of a fiber point.
const SHARP_TOL: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct RealizeOptions {
    pub fiber: FiberOptions,
    /// Perturbation sizes below this end the ladder.
    pub nu_min: f64,
    /// Tolerance for comparing configurations.
    pub eq_tol: f64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { fiber: FiberOptions::default(), nu_min: 1e-8, eq_tol: DEFAULT_EQ_TOL }
    }
}

/// A realizing polynomial `p_u` and how it was found.
#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub poly: ComplexPoly,
    /// Critical points of `poly`.
    pub u: Vec<Complex64>,
    /// `p_u(u_j)`.
    pub values: Vec<Complex64>,
    /// Configuration extracted from `poly`, equal to the request.
    pub configuration: Configuration,
    /// Perturbation sizes used on the way, outermost first.
    pub ladder: Vec<f64>,
}

/// A polynomial whose tract has configuration `c`.
pub fn realize(c: &Configuration, opts: &RealizeOptions) -> Result<Realization> {
    validate(c).map_err(Error::InvalidConfiguration)?;
    realize_valid(c, opts)
}

fn realize_valid(c: &Configuration, opts: &RealizeOptions) -> Result<Realization> {
    if let Configuration::Point { z } = *c {
        let n = z as usize;
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let zero = vec![Complex64::new(0.0, 0.0); n - 1];
        let poly = ComplexPoly::from_real(&coeffs)?;
        return Ok(Realization { poly, u: zero.clone(), values: zero, configuration: c.clone(), ladder: Vec::new() });
    }
    let v = c.critical_values();
    if atypicality_degree(&v, DEFAULT_TIE_TOL)? == 0 {
        return realize_generic(c, &v, opts);
    }
    let mut nu = 0.5 * scatter_bound(c)?;
    let mut seen = Vec::new();
    while nu >= opts.nu_min {
        let attempt = scatter_perturb(c, nu).and_then(|hat| {
            let inner = realize_valid(&hat, opts)?;
            let order = match_values(&inner.values, &v).expect("same number of values");
            let target: Vec<Complex64> = order.iter().map(|&j| v[j]).collect();
            let u = continue_fiber_point(&inner.u, &inner.values, &target, opts.fiber.tol)?;
            let u = sharpen(u, &target);
            let found = check(&u, c, opts)?;
            let mut ladder = vec![nu];
            ladder.extend(inner.ladder);
            Ok((found, ladder))
        });
        match attempt {
            Ok((Ok(mut r), ladder)) => {
                r.ladder = ladder;
                return Ok(r);
            }
            Ok((Err(other), _)) => seen.push(other),
            Err(_) => {}
        }
        nu /= 2.0;
    }
    Err(failure(c, &seen))
}

/// Extra Newton iterations at the target. Near repeated or vanishing values
/// convergence is only linear, and the tracer needs those values accurate.
fn sharpen(u: Vec<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    let before = residual(&u, v);
    let (w, r) = polish_fiber_point(&u, v, SHARP_TOL, 400);
    if r <= before {
        w
    } else {
        u
    }
}

fn residual(u: &[Complex64], v: &[Complex64]) -> f64 {
    theta(u).map_or(f64::INFINITY, |t| t.iter().zip(v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

/// Extracts the configuration of `p_u`: the realization when it equals `c`,
/// otherwise the configuration found instead.
fn check(u: &[Complex64], c: &Configuration, opts: &RealizeOptions) -> Result<std::result::Result<Realization, Configuration>> {
    let poly = from_critical_points(u)?;
    let found = extract_configuration(&Tract::new(poly.clone())?)?;
    if equals(&found, c, opts.eq_tol) {
        Ok(Ok(Realization { poly, u: u.to_vec(), values: theta(u)?, configuration: found, ladder: Vec::new() }))
    } else {
        Ok(Err(found))
    }
}

fn realize_generic(c: &Configuration, v: &[Complex64], opts: &RealizeOptions) -> Result<Realization> {
    let fiber = solve_theta_fiber(v, &opts.fiber)?;
    if fiber.is_empty() {
        return Err(Error::EmptyFiber { starts: fiber.starts, best_residual: fiber.best_residual });
    }
    let results: Vec<Result<std::result::Result<Realization, Configuration>>> =
        fiber.solutions.par_iter().map(|u| check(&sharpen(u.clone(), v), c, opts)).collect();
    let mut seen = Vec::new();
    for r in results {
        match r {
            Ok(Ok(found)) => return Ok(found),
            Ok(Err(other)) => seen.push(other),
            Err(_) => {}
        }
    }
    Err(failure(c, &seen))
}

fn failure(c: &Configuration, seen: &[Configuration]) -> Error {
    let mut codes: Vec<_> = seen.iter().map(canonical_code).collect();
    codes.sort();
    codes.dedup();
    let want = canonical_code(c);
    let diff = codes
        .iter()
        .map(|k| {
            let common = want.tokens().iter().zip(k.tokens()).take_while(|(a, b)| a == b).count();
            format!("found code differs from the request at token {common}: {}", k.describe())
        })
        .collect::<Vec<_>>()
        .join("; ");
    Error::RealizationFailed { found: codes.len(), diff: format!("requested {}; {diff}", want.describe()) }
}

/// Distinct configurations of the polynomials in the fiber over `v`, each with
/// one critical-point vector realizing it.
pub fn fiber_configurations(v: &[Complex64], opts: &FiberOptions) -> Result<Vec<(Vec<Complex64>, Configuration)>> {
    let fiber = solve_theta_fiber(v, opts)?;
    let extracted: Vec<(Vec<Complex64>, Configuration)> = fiber
        .solutions
        .par_iter()
        .map(|u| {
            let u = sharpen(u.clone(), v);
            let c = extract_configuration(&Tract::new(from_critical_points(&u)?)?)?;
            Ok((u, c))
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<(Vec<Complex64>, Configuration)> = Vec::new();
    for (u, c) in extracted {
        if !out.iter().any(|(_, d)| equals(d, &c, DEFAULT_EQ_TOL)) {
            out.push((u, c));
        }
    }
    out.sort_by_key(|(_, c)| canonical_code(c));
    Ok(out)
}

/// Whether two tracts have the same configuration.
pub fn equivalent(t1: &Tract, t2: &Tract) -> Result<bool> {
    Ok(equals(&extract_configuration(t1)?, &extract_configuration(t2)?, DEFAULT_EQ_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate_generic;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic() {
        let target = extract_configuration(&Tract::new(ComplexPoly::from_real(&[-0.5, 0.0, 1.0]).unwrap()).unwrap()).unwrap();
        let r = realize(&target, &RealizeOptions::default()).unwrap();
        assert_eq!(r.values.len(), 1);
        assert!((r.values[0] - c(-0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn triple_zero() {
        let r = realize(&Configuration::point(3), &RealizeOptions::default()).unwrap();
        assert_eq!(r.configuration, Configuration::point(3));
        let cs = r.poly.coeffs();
        assert!((cs[3] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(cs[..3].iter().all(|x| x.norm() < 1e-9), "{cs:?}");
    }

    #[test]
    fn all_four_classes() {
        let v = [c(0.2, 0.1), Complex64::from_polar(0.45, 2.0), Complex64::from_polar(0.7, -1.0)];
        let configs = enumerate_generic(&v).unwrap();
        assert_eq!(configs.len(), 4);
        let fiber = fiber_configurations(&v, &FiberOptions::default()).unwrap();
        assert_eq!(fiber.len(), 4);
        let mut polys = Vec::new();
        for conf in &configs {
            let r = realize(conf, &RealizeOptions::default()).unwrap();
            assert!(equals(&r.configuration, conf, DEFAULT_EQ_TOL));
            polys.push(Tract::new(r.poly).unwrap());
        }
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(equivalent(&polys[i], &polys[j]).unwrap(), i == j);
            }
        }
    }

    #[test]
    fn atypical_rose() {
        // z^3 - 1 style: one vertex of multiplicity 2
        let p = ComplexPoly::from_real(&[-0.6, 0.0, 0.0, 1.0]).unwrap();
        let target = extract_configuration(&Tract::new(p).unwrap()).unwrap();
        let r = realize(&target, &RealizeOptions::default()).unwrap();
        assert!(!r.ladder.is_empty());
        assert!(equals(&r.configuration, &target, DEFAULT_EQ_TOL));
    }

    #[test]
    fn equivalence_examples() {
        let a = Tract::normalized(ComplexPoly::from_real(&[0.0, -2.0, 1.0]).unwrap()).unwrap();
        let b = Tract::normalized(ComplexPoly::from_real(&[0.0, 2.0, 1.0]).unwrap()).unwrap();
        assert!(equivalent(&a, &b).unwrap());
    }
}
