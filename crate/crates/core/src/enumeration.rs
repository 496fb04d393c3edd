//! Configurations with a prescribed generic vector of critical values, and
//! their count.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::configuration::{canonical_code, is_distinguished, normalize_arg, CanonicalCode, Configuration, Face, GraphNode, ARG_SNAP};
use crate::error::{Error, Result};
use crate::polynomials::{atypicality_degree, DEFAULT_TIE_TOL};

/// All configurations whose critical values are exactly `v`.
///
/// `v` must be sorted by modulus with distinct nonzero moduli below 1. Every
/// graph is then a figure-eight: the largest value sits at the outermost
/// vertex and the remaining values are split between its two faces.
pub fn enumerate_generic(v: &[Complex64]) -> Result<Vec<Configuration>> {
    if v.iter().any(|x| !(x.norm() < 1.0)) {
        return Err(Error::InvalidInput("critical values must have modulus below 1".into()));
    }
    if atypicality_degree(v, DEFAULT_TIE_TOL)? != 0 {
        return Err(Error::InvalidInput("critical values are not generic (tied or zero moduli)".into()));
    }
    let mut memo = HashMap::new();
    let all = (1u64 << v.len()) - 1;
    Ok(build(v, all, &mut memo))
}

/// Configurations for the values selected by `mask`, sorted by code.
fn build(v: &[Complex64], mask: u64, memo: &mut HashMap<u64, Vec<Configuration>>) -> Vec<Configuration> {
    if let Some(r) = memo.get(&mask) {
        return r.clone();
    }
    if mask == 0 {
        memo.insert(0, vec![Configuration::point(1)]);
        return memo[&0].clone();
    }
    let top = 63 - mask.leading_zeros() as usize;
    let rest = mask & !(1u64 << top);
    let h = v[top].norm();
    let a = normalize_arg(v[top].arg(), ARG_SNAP);

    // all subsets of `rest` for the first face
    let mut subsets = Vec::new();
    let mut s = rest;
    loop {
        subsets.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & rest;
    }
    for &s in &subsets {
        build(v, s, memo);
    }
    let memo_ref = &*memo;
    let mut found: Vec<(CanonicalCode, Configuration)> = subsets
        .par_iter()
        .flat_map_iter(|&s1| {
            let c1s = &memo_ref[&s1];
            let c2s = &memo_ref[&(rest & !s1)];
            let mut out = Vec::new();
            for c1 in c1s {
                for c2 in c2s {
                    for o1 in 0..offsets(c1) {
                        for o2 in 0..offsets(c2) {
                            let c = figure_eight(h, a, c1.clone(), c2.clone(), o1, o2);
                            out.push((canonical_code(&c), c));
                        }
                    }
                }
            }
            out
        })
        .collect();
    found.sort_by(|x, y| x.0.cmp(&y.0));
    found.dedup_by(|x, y| x.0 == y.0);
    let result: Vec<Configuration> = found.into_iter().map(|(_, c)| c).collect();
    memo.insert(mask, result.clone());
    result
}

fn offsets(c: &Configuration) -> usize {
    match c {
        Configuration::Point { .. } => 1,
        Configuration::Graph(g) => g.total_zeros() as usize,
    }
}

fn figure_eight(h: f64, a: f64, c1: Configuration, c2: Configuration, o1: usize, o2: usize) -> Configuration {
    let d = is_distinguished(a) as u32;
    let face = |c: Configuration, o: usize| {
        let z = c.zeros();
        Face { z, boundary: vec![0], distinguished: vec![z - d], child: Box::new(c), gradient_offset: o }
    };
    Configuration::Graph(GraphNode {
        level: h,
        rotation: vec![vec![0, 1]],
        args: vec![a],
        faces: vec![face(c1, o1), face(c2, o2)],
    })
}

/// `n - 1` random critical values in the unit disk, sorted by modulus, with
/// moduli in `(0.05, 0.95)` at least `0.02` apart.
pub fn random_generic_values(n: usize, seed: u64) -> Result<Vec<Complex64>> {
    if n < 2 || n > 40 {
        return Err(Error::InvalidInput(format!("degree {n} must lie in 2..=40")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut moduli: Vec<f64> = (1..n).map(|_| rng.random_range(0.05..0.95)).collect();
        moduli.sort_by(f64::total_cmp);
        if moduli.windows(2).all(|w| w[1] - w[0] >= 0.02) {
            return Ok(moduli.into_iter().map(|r| Complex64::from_polar(r, rng.random_range(-PI..PI))).collect());
        }
    }
}

/// `n^(n-3)` for `n >= 3`, and 1 for `n = 2`.
pub fn count_generic(n: usize) -> Result<BigUint> {
    match n {
        0 | 1 => Err(Error::InvalidInput("degree must be at least 2".into())),
        2 => Ok(BigUint::one()),
        _ => Ok(BigUint::from(n).pow(n as u32 - 3)),
    }
}

fn term(m: i64, i: i64) -> BigRational {
    let pow = |base: i64, e: i64| -> BigRational {
        let b = BigRational::from_integer(BigInt::from(base));
        if e >= 0 {
            num_traits::pow(b, e as usize)
        } else {
            BigRational::one() / num_traits::pow(b, (-e) as usize)
        }
    };
    let binom = (0..i).fold(BigInt::one(), |acc, k| acc * (m - k) / (k + 1));
    BigRational::new(binom, BigInt::from(2)) * pow(i + 1, i - 1) * pow(m - i + 1, m - i - 1)
}

/// `sum_{i=0}^{m} C(m,i) (i+1)^(i-1) (m-i+1)^(m-i-1) / 2`, which equals `(m+2)^(m-1)`.
pub fn riordan_sum(m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let m = m as i64;
    Ok((0..=m).map(|i| term(m, i)).fold(BigRational::zero(), |a, b| a + b))
}

/// The same sum stopped at `i = m - 1`; reported next to the full sum for comparison.
pub fn riordan_sum_truncated(m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let m = m as i64;
    Ok((0..m).map(|i| term(m, i)).fold(BigRational::zero(), |a, b| a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::validate;

    fn generic(n: usize) -> Vec<Complex64> {
        (1..n).map(|k| Complex64::from_polar(0.12 * k as f64 + 0.05, 0.7 + 1.9 * k as f64)).collect()
    }

    #[test]
    fn counts_match_formula() {
        for n in 2..=6 {
            let configs = enumerate_generic(&generic(n)).unwrap();
            assert_eq!(BigUint::from(configs.len()), count_generic(n).unwrap(), "n = {n}");
            for c in &configs {
                assert_eq!(validate(c), Ok(()));
                assert_eq!(c.zeros() as usize, n);
            }
        }
    }

    #[test]
    fn random_values_are_generic() {
        for seed in 0..20 {
            let v = random_generic_values(5, seed).unwrap();
            assert_eq!(v.len(), 4);
            assert_eq!(atypicality_degree(&v, DEFAULT_TIE_TOL).unwrap(), 0);
            assert_eq!(v, random_generic_values(5, seed).unwrap());
        }
        assert!(random_generic_values(1, 0).is_err());
    }

    #[test]
    fn distinguished_vertex_values() {
        // positive real values make every vertex distinguished
        let v: Vec<Complex64> = [0.2, 0.4, 0.6].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let configs = enumerate_generic(&v).unwrap();
        assert_eq!(configs.len(), 4);
        let v: Vec<Complex64> = [0.2, -0.4, 0.6].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert_eq!(enumerate_generic(&v).unwrap().len(), 4);
    }

    #[test]
    fn rejects_atypical() {
        let v = [Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)];
        assert!(enumerate_generic(&v).is_err());
        let v = [Complex64::new(0.0, 0.0), Complex64::new(-0.5, 0.0)];
        assert!(enumerate_generic(&v).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_generic(2).unwrap(), BigUint::from(1u32));
        assert_eq!(count_generic(3).unwrap(), BigUint::from(1u32));
        assert_eq!(count_generic(6).unwrap(), BigUint::from(216u32));
    }

    #[test]
    fn riordan_examples() {
        let int = |x: i64| BigRational::from_integer(BigInt::from(x));
        assert_eq!(riordan_sum(1).unwrap(), int(1));
        assert_eq!(riordan_sum(2).unwrap(), int(4));
        assert_eq!(riordan_sum(3).unwrap(), int(25));
        assert_eq!(term(3, 0), BigRational::new(BigInt::from(8), BigInt::from(1)));
        assert_eq!(term(3, 1), BigRational::new(BigInt::from(9), BigInt::from(2)));
        for m in 1..=10usize {
            let expected = int(m as i64 + 2).pow(m as i32 - 1);
            assert_eq!(riordan_sum(m).unwrap(), expected);
        }
        assert_ne!(riordan_sum_truncated(3).unwrap(), int(25));
    }
}
