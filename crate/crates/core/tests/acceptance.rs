//! Acceptance run: one PASS/FAIL line per criterion, with the time taken
//! against its limit. Exits nonzero when any criterion fails.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lemniscate_core::bocher::{bocher_suite, gauss_lucas_suite, random_bocher_instances, rational_critical_points, separation_pairs, check_separation};
use lemniscate_core::configuration::{scatter_bound, scatter_case, scatter_perturb, validate, ScatterCase, DEFAULT_EQ_TOL};
use lemniscate_core::enumeration::{enumerate_generic, random_generic_values, riordan_sum};
use lemniscate_core::extraction::extract_configuration;
use lemniscate_core::polynomials::{
    atypicality_degree, from_critical_points, unordered_distance, FiberOptions, DEFAULT_TIE_TOL,
};
use lemniscate_core::realization::{equivalent, fiber_configurations, realize, RealizeOptions};
use lemniscate_core::tracer::{critical_level_curves, level_set, trace_level_component, winding_number, Tract};
use lemniscate_core::{canonical_code, equals, CanonicalCode, Complex64, ComplexPoly, Configuration};

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_u(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n - 1).map(|_| Complex64::from_polar(rng.random_range(0.0..1.0f64).sqrt(), rng.random_range(0.0..TAU))).collect()
}

/// A normalized tract `p_u` whose critical values are generic.
fn random_generic_tract(rng: &mut ChaCha8Rng, n: usize) -> Tract {
    loop {
        let u = random_u(rng, n);
        let Ok(p) = from_critical_points(&u) else { continue };
        let Ok(t) = Tract::normalized(p) else { continue };
        let values = &t.spectrum().values;
        let separated = values.iter().all(|v| v.norm() > 0.02)
            && (0..values.len()).all(|i| (0..i).all(|j| (values[i].norm() - values[j].norm()).abs() > 1e-3));
        if separated && t.critical().len() == n - 1 {
            return t;
        }
    }
}

fn criterion_1() -> Check {
    let mut checked = 0;
    for n in 2..=6usize {
        // n^(n-3), with 1 for n = 2
        let want = if n == 2 { 1 } else { n.pow(n as u32 - 3) };
        for k in 0..10 {
            let v = random_generic_values(n, 1000 * n as u64 + k).map_err(|e| e.to_string())?;
            let got = enumerate_generic(&v).map_err(|e| e.to_string())?;
            ensure(got.len() == want, || format!("n = {n}, sample {k}: {} configurations, expected {want}", got.len()))?;
            let codes: BTreeSet<CanonicalCode> = got.iter().map(canonical_code).collect();
            ensure(codes.len() == want, || format!("n = {n}: duplicate configurations"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} value vectors, counts 1, 1, 4, 25, 216"))
}

fn criterion_2() -> Check {
    for m in 1..=10usize {
        let want = BigRational::from_integer(num_traits::pow(BigInt::from(m + 2), m - 1));
        let got = riordan_sum(m).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("m = {m}: {got} != {want}"))?;
    }
    Ok("m = 1..10 exact".into())
}

fn criterion_3() -> Check {
    let v = random_generic_values(4, 2024).map_err(|e| e.to_string())?;
    let enumerated: BTreeSet<CanonicalCode> =
        enumerate_generic(&v).map_err(|e| e.to_string())?.iter().map(canonical_code).collect();
    let opts = FiberOptions { starts: 200, seed: 7, ..Default::default() };
    let fiber = fiber_configurations(&v, &opts).map_err(|e| e.to_string())?;
    let from_fiber: BTreeSet<CanonicalCode> = fiber.iter().map(|(_, c)| canonical_code(c)).collect();
    ensure(enumerated.len() == 4, || format!("{} enumerated", enumerated.len()))?;
    ensure(from_fiber == enumerated, || {
        format!("fiber gave {} codes, {} shared with enumeration", from_fiber.len(), from_fiber.intersection(&enumerated).count())
    })?;
    Ok(format!("{} starts, 4 codes on both sides", opts.starts))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut tally = [0usize; 6];
    for k in 0..25 {
        let n = 2 + k % 4;
        let t = random_generic_tract(&mut rng, n);
        let first = extract_configuration(&t).map_err(|e| format!("case {k}: extract: {e}"))?;
        let r = realize(&first, &RealizeOptions::default()).map_err(|e| format!("case {k} (n = {n}): realize: {e}"))?;
        let second = extract_configuration(&Tract::new(r.poly).map_err(|e| e.to_string())?)
            .map_err(|e| format!("case {k}: re-extract: {e}"))?;
        ensure(canonical_code(&first) == canonical_code(&second), || format!("case {k} (n = {n}): codes differ"))?;
        tally[n] += 1;
    }
    Ok(format!("25 round trips (n = 2..5: {:?})", &tally[2..]))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut tol_equal = 0;
    let mut mismatches = Vec::new();
    for k in 0..25 {
        let n = 2 + k % 5;
        let t = random_generic_tract(&mut rng, n);
        let a = Complex64::from_polar(rng.random_range(0.3..3.0), rng.random_range(0.0..TAU));
        let b = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let moved = Tract::new(t.poly().compose_affine(a, b)).map_err(|e| e.to_string())?;
        let c1 = extract_configuration(&t).map_err(|e| format!("case {k}: {e}"))?;
        let c2 = extract_configuration(&moved).map_err(|e| format!("case {k} moved: {e}"))?;
        if equals(&c1, &c2, DEFAULT_EQ_TOL) {
            tol_equal += 1;
        }
        if canonical_code(&c1) != canonical_code(&c2) {
            mismatches.push(k);
        }
    }
    ensure(mismatches.is_empty(), || format!("code mismatch in cases {mismatches:?} ({tol_equal}/25 equal within tolerance)"))?;
    Ok("25 affine pairs, identical codes".into())
}

fn criterion_6() -> Check {
    let t = Tract::normalized(ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap()).map_err(|e| e.to_string())?;
    let graphs = critical_level_curves(&t).map_err(|e| e.to_string())?;
    ensure(graphs.len() == 1, || format!("{} critical graphs", graphs.len()))?;
    let g = &graphs[0];
    ensure(g.vertices.len() == 1 && g.vertices[0].multiplicity == 4, || "expected one vertex of multiplicity 4".into())?;
    ensure(g.vertices[0].location.norm() < 1e-12, || "vertex not at 0".into())?;
    ensure(g.edge_ends(0) == 10, || format!("{} edge-ends", g.edge_ends(0)))?;
    ensure(g.faces.len() == 5 && g.faces.iter().all(|f| f.zeros == 1), || "expected 5 faces with one zero each".into())?;
    // p = 0.9 (z^5 - 1) is 0.9 on the rose at the fifth roots of 2
    let mut dist: Vec<Complex64> = g.edges.iter().flat_map(|e| e.distinguished.clone()).collect();
    dist.extend(g.vertices.iter().filter(|v| v.arg == 0.0).map(|v| v.location));
    let want: Vec<Complex64> = (0..5).map(|k| Complex64::from_polar(2f64.powf(0.2), TAU * k as f64 / 5.0)).collect();
    ensure(dist.len() == 5, || format!("{} distinguished points", dist.len()))?;
    ensure(unordered_distance(&dist, &want).is_some_and(|d| d < 1e-9), || "distinguished points misplaced".into())?;
    let outer = trace_level_component(&t, c(1.3, 0.0), 0.95).map_err(|e| e.to_string())?;
    let petal = trace_level_component(&t, c(1.1, 0.0), 0.45).map_err(|e| e.to_string())?;
    let (wo, wp) = (winding_number(&t, &outer.points).map_err(|e| e.to_string())?, winding_number(&t, &petal.points).map_err(|e| e.to_string())?);
    ensure(wo == 5 && wp == 1, || format!("winding {wo} outside, {wp} on a petal"))?;
    Ok("1 vertex (k = 4), 10 edge-ends, 5 faces z = 1, 5 distinguished points, winding 5 / 1".into())
}

fn criterion_7() -> Check {
    let b = bocher_suite(200, 6, 77).map_err(|e| e.to_string())?;
    ensure(b.passes(), || format!("{} Bôcher counterexamples", b.counterexamples.len()))?;
    // independent check: each reported point is a root of p'q - pq'
    let mut points = 0;
    for i in random_bocher_instances(200, 6, 77) {
        let p = ComplexPoly::from_roots(&i.zeros);
        let q = ComplexPoly::from_roots(&i.poles);
        let num = p.derivative().mul(&q).sub(&p.mul(&q.derivative()));
        let cps = rational_critical_points(&i.zeros, &i.poles).map_err(|e| e.to_string())?;
        ensure(cps.len() == 2 * i.zeros.len() - 2, || format!("{} critical points for degree {}", cps.len(), i.zeros.len()))?;
        for z in cps {
            let r = num.eval(z).norm() / num.abs_scale(z.norm()).max(f64::MIN_POSITIVE);
            ensure(r < 1e-6, || format!("critical point {z} has relative residual {r:e}"))?;
            points += 1;
        }
    }
    let g = gauss_lucas_suite(200, 6, 78).map_err(|e| e.to_string())?;
    ensure(g.passes(), || format!("{} hull counterexamples", g.counterexamples.len()))?;
    Ok(format!("200 + 200 instances, {points} critical points verified, none outside"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut pairs = 0;
    let mut curve_pairs = 0;
    for k in 0..20 {
        let n = 3 + k % 3;
        let t = random_generic_tract(&mut rng, n);
        let r = separation_pairs(&t).map_err(|e| format!("tract {k}: {e}"))?;
        ensure(r.failures.is_empty(), || format!("tract {k}: no separator for pairs {:?}", r.failures))?;
        pairs += r.pairs;
        // regular curves around distinct zeros below the lowest critical level
        let low = t.spectrum().values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let curves = level_set(&t, 0.5 * low).map_err(|e| format!("tract {k}: {e}"))?;
        ensure(curves.len() == n, || format!("tract {k}: {} small components", curves.len()))?;
        for i in 0..curves.len() {
            for j in 0..i {
                let s = check_separation(&t, &curves[i], &curves[j]).map_err(|e| format!("tract {k}: {e}"))?;
                ensure(s.level > 0.5 * low, || format!("tract {k}: separator below the curves"))?;
                curve_pairs += 1;
            }
        }
    }
    ensure(pairs > 0, || "no mutually exterior critical pairs were exercised".into())?;
    Ok(format!("20 tracts, {pairs} critical and {curve_pairs} regular exterior pairs separated"))
}

fn graph_paths(cfg: &Configuration) -> Vec<Vec<usize>> {
    fn walk(cfg: &Configuration, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let Configuration::Graph(g) = cfg {
            out.push(path.clone());
            for (f, face) in g.faces.iter().enumerate() {
                path.push(f);
                walk(&face.child, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(cfg, &mut Vec::new(), &mut out);
    out
}

/// Replaces a graph below the root by a multiple zero.
fn zeroed(cfg: &Configuration, path: &[usize]) -> Option<Configuration> {
    let (&f, parent) = path.split_last()?;
    let mut out = cfg.clone();
    let Configuration::Graph(g) = out.node_at_mut(parent)? else { return None };
    let face = &mut g.faces[f];
    face.child = Box::new(Configuration::point(face.z));
    face.gradient_offset = 0;
    Some(out)
}

/// Moves the graph at `q` to the level of the graph at `p`, when that keeps
/// the nesting order.
fn tied(cfg: &Configuration, p: &[usize], q: &[usize]) -> Option<Configuration> {
    if q.starts_with(p) || p.starts_with(q) {
        return None;
    }
    let h = cfg.node_at(p)?.level();
    let parent = cfg.node_at(&q[..q.len() - 1])?.level();
    let Configuration::Graph(g) = cfg.node_at(q)? else { return None };
    let below = g.faces.iter().map(|f| f.child.level()).fold(0.0, f64::max);
    if !(h > below && h < parent) {
        return None;
    }
    let mut out = cfg.clone();
    if let Some(Configuration::Graph(g)) = out.node_at_mut(q) {
        g.level = h;
    }
    Some(out)
}

fn check_scatter(cfg: &Configuration, want: ScatterCase, counts: &mut [usize; 3]) -> Result<(), String> {
    ensure(validate(cfg).is_ok(), || format!("degenerate input does not validate: {:?}", validate(cfg)))?;
    let case = scatter_case(cfg).map_err(|e| e.to_string())?;
    ensure(case == Some(want), || format!("expected {want:?}, planned {case:?}"))?;
    let v = cfg.critical_values();
    let before = atypicality_degree(&v, DEFAULT_TIE_TOL).map_err(|e| e.to_string())?;
    let bound = scatter_bound(cfg).map_err(|e| e.to_string())?;
    for nu in [0.5 * bound, 0.1 * bound, 1e-4 * bound] {
        let hat = scatter_perturb(cfg, nu).map_err(|e| e.to_string())?;
        ensure(validate(&hat).is_ok(), || {
            format!("{want:?}: output does not validate at nu = {nu}: {:?}\n  input {}", validate(&hat), cfg.to_json())
        })?;
        let w = hat.critical_values();
        let shift = unordered_distance(&v, &w).ok_or("value count changed")?;
        ensure(shift < nu, || format!("{want:?}: values moved {shift} >= nu = {nu}"))?;
        let after = atypicality_degree(&w, DEFAULT_TIE_TOL).map_err(|e| e.to_string())?;
        ensure(after < before, || format!("{want:?}: atypicality {before} -> {after}"))?;
    }
    counts[want as usize] += 1;
    Ok(())
}

fn criterion_9() -> Check {
    let mut counts = [0usize; 3];
    for n in 3..=5usize {
        let v = random_generic_values(n, 900 + n as u64).map_err(|e| e.to_string())?;
        for cfg in enumerate_generic(&v).map_err(|e| e.to_string())? {
            let paths = graph_paths(&cfg);
            for p in paths.iter().filter(|p| !p.is_empty()) {
                check_scatter(&zeroed(&cfg, p).unwrap(), ScatterCase::SplitZero, &mut counts)?;
            }
            for p in &paths {
                for q in paths.iter().filter(|q| !q.is_empty()) {
                    if let Some(t) = tied(&cfg, p, q) {
                        check_scatter(&t, ScatterCase::RaiseLevel, &mut counts)?;
                    }
                }
            }
        }
    }
    // values tied on a single curve come from polynomials: roses and a chain
    let mut polys: Vec<ComplexPoly> = Vec::new();
    for k in 2..=4usize {
        for arg in [PI, 0.0, 1.0] {
            let mut coeffs = vec![c(0.0, 0.0); k + 2];
            coeffs[0] = Complex64::from_polar(0.6, arg + PI);
            coeffs[k + 1] = c(1.0, 0.0);
            polys.push(ComplexPoly::new(coeffs).unwrap());
        }
    }
    polys.push(from_critical_points(&[c(0.0, 0.0), c(0.8, 0.3), c(-0.8, -0.3)]).unwrap());
    for p in polys {
        let cfg = extract_configuration(&Tract::normalized(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        check_scatter(&cfg, ScatterCase::SplitFace, &mut counts)?;
    }
    ensure(counts.iter().all(|&k| k > 0), || format!("cases exercised {counts:?}"))?;
    Ok(format!("split zero {}, raise level {}, split face {} (3 sizes of nu each)", counts[0], counts[1], counts[2]))
}

fn criterion_10() -> Check {
    // f(z) = (z^2 + 9/25) e^z / 0.6 at its critical point -0.2
    let z0: f64 = -0.2;
    let v0 = (z0 * z0 + 9.0 / 25.0) * z0.exp() / 0.6;
    ensure((v0 - 0.4 / 0.6 * (-0.2f64).exp()).abs() < 1e-15 && v0 < 1.0, || format!("v0 = {v0}"))?;
    let t = Tract::new(ComplexPoly::from_real(&[v0, 0.0, 1.0]).unwrap()).map_err(|e| e.to_string())?;
    let cfg = extract_configuration(&t).map_err(|e| e.to_string())?;
    let only = enumerate_generic(&[c(v0, 0.0)]).map_err(|e| e.to_string())?;
    ensure(only.len() == 1 && equals(&cfg, &only[0], DEFAULT_EQ_TOL), || "not the unique one-value configuration".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for _ in 0..5 {
        let a = Complex64::from_polar(rng.random_range(0.2..5.0), rng.random_range(0.0..TAU));
        let b = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        // a (z - b)^2 + v0
        let other = ComplexPoly::new(vec![a * b * b + v0, -2.0 * a * b, a]).unwrap();
        let same = equivalent(&t, &Tract::new(other).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(same, || format!("a = {a}, b = {b} judged inequivalent"))?;
    }
    let different = Tract::new(ComplexPoly::from_real(&[-v0, 0.0, 1.0]).unwrap()).map_err(|e| e.to_string())?;
    ensure(!equivalent(&t, &different).map_err(|e| e.to_string())?, || "-v0 judged equivalent".into())?;
    Ok(format!("v0 = {v0:.12}, 5 equivalent quadratics, -v0 distinguished"))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Check); 10] = [
        (1, "counting n^(n-3)", 60, criterion_1),
        (2, "Riordan identity", 1, criterion_2),
        (3, "fiber vs enumeration, n = 4", 300, criterion_3),
        (4, "extract -> realize -> extract", 600, criterion_4),
        (5, "affine invariance", 600, criterion_5),
        (6, "z^5 - 1 structure", 10, criterion_6),
        (7, "Bocher and Gauss-Lucas suites", 60, criterion_7),
        (8, "separation", 300, criterion_8),
        (9, "scattering", 60, criterion_9),
        (10, "z^2 + f(-0.2)", 10, criterion_10),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; over the {limit} s limit")),
            r => r,
        };
        match result {
            Ok(msg) => println!("PASS criterion {id:>2} {name}: {msg} ({:.2} s, limit {limit} s)", took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {msg} ({:.2} s, limit {limit} s)", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
