use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use lemniscate_core::bocher::{bocher_suite, check_bocher, gauss_lucas_suite, Disk};
use lemniscate_core::configuration::{scatter_bound, scatter_case, scatter_perturb, validate, DEFAULT_EQ_TOL};
use lemniscate_core::enumeration::{count_generic, enumerate_generic, random_generic_values};
use lemniscate_core::extraction::extract;
use lemniscate_core::polynomials::FiberOptions;
use lemniscate_core::realization::{realize, RealizeOptions};
use lemniscate_core::render::{render_svg, RenderOptions};
use lemniscate_core::tracer::{critical_level_curves, level_set, Tract};
use lemniscate_core::{canonical_code, equals, Complex64, ComplexPoly, Configuration};

#[derive(Parser)]
#[command(name = "lemniscate", version, about = "Critical level-curve configurations of complex polynomials")]
struct Cli {
    /// Tolerance for comparing configurations.
    #[arg(long, global = true, default_value_t = DEFAULT_EQ_TOL)]
    tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the critical level graphs, or the level sets at the given levels.
    Trace {
        /// Polynomial JSON (`-` for stdin).
        input: String,
        /// Levels of the input polynomial's modulus.
        #[arg(long = "level")]
        levels: Vec<f64>,
    },
    /// Extract the configuration of a polynomial's tract.
    Extract { input: String },
    /// List the configurations with given (or random) generic critical values.
    Enumerate {
        /// Degree of the polynomials.
        n: usize,
        /// Critical values as a JSON array of [re, im] pairs, sorted by modulus.
        #[arg(long)]
        values: Option<String>,
    },
    /// Number of configurations with a fixed generic value vector.
    Count { n: usize },
    /// Find a polynomial with a given configuration.
    Realize {
        input: String,
        /// Newton starts for the fiber solve.
        #[arg(long, default_value_t = 200)]
        starts: usize,
    },
    /// Perturb a configuration with tied or zero critical values.
    Perturb {
        input: String,
        /// Perturbation size; half the admissible bound by default.
        #[arg(long)]
        nu: Option<f64>,
    },
    /// Whether two polynomials (or configurations) have the same configuration.
    Equiv { a: String, b: String },
    /// Check the critical points of rational functions with separated zeros and poles.
    CheckBocher {
        /// A single instance {zeros, poles, disk1, disk2}; random suites otherwise.
        input: Option<String>,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Draw level curves as SVG.
    Render {
        input: String,
        #[arg(long = "level")]
        levels: Vec<f64>,
        /// Draw all critical level graphs.
        #[arg(long)]
        graphs: bool,
        /// Draw gradient lines from the distinguished points.
        #[arg(long)]
        gradients: bool,
        #[arg(long, default_value_t = 600.0)]
        width: f64,
    },
}

/// Result of a subcommand: the artifact and whether the answer was negative.
struct Outcome {
    text: String,
    negative: bool,
}

impl Outcome {
    fn json(v: &Value) -> Self {
        Outcome { text: format!("{v}\n"), negative: false }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn parse_json(text: &str, source: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| anyhow!("{source}: not valid JSON: {e}"))
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value, source: &str, what: &str) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("{source}: not a {what}: at `{path}`: {}", e.inner())
    })
}

/// The value under `key` when `v` is an object carrying it, else `v`.
fn unwrap_key(v: Value, key: &str) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key(key) => m.remove(key).unwrap(),
        v => v,
    }
}

fn read_poly(path: &str) -> Result<ComplexPoly> {
    let v = parse_json(&read_input(path)?, path)?;
    typed(unwrap_key(v, "polynomial"), path, "polynomial (array of [re, im] coefficients, ascending degree)")
}

fn read_configuration(path: &str) -> Result<Configuration> {
    let v = parse_json(&read_input(path)?, path)?;
    let c: Configuration = typed(unwrap_key(v, "configuration"), path, "configuration node")?;
    validate(&c).map_err(|errs| anyhow!("{path}: invalid configuration: {}", errs.join("; ")))?;
    Ok(c)
}

/// A polynomial input is extracted; a configuration input is taken as is.
fn read_either(path: &str) -> Result<Configuration> {
    let v = parse_json(&read_input(path)?, path)?;
    let is_config = matches!(&v, Value::Object(m) if m.contains_key("configuration") || m.contains_key("kind"));
    if is_config {
        let c: Configuration = typed(unwrap_key(v, "configuration"), path, "configuration node")?;
        validate(&c).map_err(|errs| anyhow!("{path}: invalid configuration: {}", errs.join("; ")))?;
        Ok(c)
    } else {
        let p: ComplexPoly = typed(unwrap_key(v, "polynomial"), path, "polynomial")?;
        Ok(extract(&Tract::normalized(p)?)?.configuration)
    }
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn pairs(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| pair(z)).collect())
}

fn trace(t: &Tract, levels: &[f64]) -> Result<Value> {
    let graphs = critical_level_curves(t)?;
    if levels.is_empty() {
        return Ok(json!({ "scale": t.scale(), "graphs": serde_json::to_value(&graphs)? }));
    }
    let mut out = Vec::new();
    for &eps in levels {
        if !(eps > 0.0) {
            bail!("level {eps} must be positive");
        }
        let h = eps / t.scale();
        let at_level: Vec<_> = graphs.iter().filter(|g| (g.level - h).abs() <= 1e-9 * h).collect();
        if !at_level.is_empty() {
            out.push(json!({ "level": eps, "graphs": serde_json::to_value(&at_level)? }));
            continue;
        }
        let curves: Vec<Value> = level_set(t, h)?
            .iter()
            .map(|c| {
                let modulus: Vec<f64> = c.points.iter().map(|&z| t.eval(z).norm() * t.scale()).collect();
                json!({ "points": pairs(&c.points), "arg": c.thetas, "modulus": modulus, "turns": c.turns })
            })
            .collect();
        out.push(json!({ "level": eps, "curves": curves }));
    }
    Ok(json!({ "scale": t.scale(), "levels": out }))
}

fn config_json(c: &Configuration) -> Result<Value> {
    Ok(serde_json::to_value(c)?)
}

fn require_json(format: Option<Format>, command: &str) -> Result<()> {
    if format == Some(Format::Svg) {
        bail!("`{command}` has no SVG output");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Trace { input, levels } => {
            let t = Tract::normalized(read_poly(input)?)?;
            if format == Some(Format::Svg) {
                let opts = RenderOptions { critical_graphs: levels.is_empty(), ..Default::default() };
                return Ok(Outcome { text: render_svg(&t, levels, &opts)?, negative: false });
            }
            Ok(Outcome::json(&trace(&t, levels)?))
        }
        Command::Extract { input } => {
            let t = Tract::normalized(read_poly(input)?)?;
            if format == Some(Format::Svg) {
                let opts = RenderOptions { critical_graphs: true, gradients: true, ..Default::default() };
                return Ok(Outcome { text: render_svg(&t, &[], &opts)?, negative: false });
            }
            let e = extract(&t)?;
            Ok(Outcome::json(&json!({
                "configuration": config_json(&e.configuration)?,
                "code": canonical_code(&e.configuration).to_hex(),
                "scale": e.scale,
                "critical_values": pairs(&e.configuration.critical_values()),
            })))
        }
        Command::Enumerate { n, values } => {
            require_json(format, "enumerate")?;
            let v: Vec<Complex64> = match values {
                Some(s) => typed(parse_json(s, "--values")?, "--values", "array of [re, im] pairs")?,
                None => random_generic_values(*n, cli.seed)?,
            };
            if v.len() + 1 != *n {
                bail!("{} critical values given for degree {n}", v.len());
            }
            let configs = enumerate_generic(&v)?;
            let list: Vec<Value> = configs.iter().map(config_json).collect::<Result<_>>()?;
            Ok(Outcome::json(&json!({ "n": n, "values": pairs(&v), "count": configs.len(), "configurations": list })))
        }
        Command::Count { n } => {
            require_json(format, "count")?;
            // written by hand so that large counts stay exact integers
            Ok(Outcome { text: format!("{{\"n\":{n},\"count\":{}}}\n", count_generic(*n)?), negative: false })
        }
        Command::Realize { input, starts } => {
            require_json(format, "realize")?;
            let c = read_configuration(input)?;
            let opts = RealizeOptions {
                fiber: FiberOptions { starts: *starts, seed: cli.seed, ..Default::default() },
                eq_tol: cli.tol,
                ..Default::default()
            };
            let r = realize(&c, &opts)?;
            Ok(Outcome::json(&json!({
                "polynomial": serde_json::to_value(&r.poly)?,
                "critical_points": pairs(&r.u),
                "critical_values": pairs(&r.values),
                "ladder": r.ladder,
                "code": canonical_code(&r.configuration).to_hex(),
                "verified": true,
            })))
        }
        Command::Perturb { input, nu } => {
            require_json(format, "perturb")?;
            let c = read_configuration(input)?;
            let bound = scatter_bound(&c)?;
            let case = scatter_case(&c)?;
            let nu = nu.unwrap_or(0.5 * bound);
            let hat = scatter_perturb(&c, nu)?;
            Ok(Outcome::json(&json!({
                "case": case.map(|k| format!("{k:?}")),
                "nu": nu,
                "bound": bound,
                "configuration": config_json(&hat)?,
            })))
        }
        Command::Equiv { a, b } => {
            require_json(format, "equiv")?;
            let same = equals(&read_either(a)?, &read_either(b)?, cli.tol);
            Ok(Outcome { text: format!("{same}\n"), negative: !same })
        }
        Command::CheckBocher { input, instances, max_degree } => {
            require_json(format, "check-bocher")?;
            match input {
                Some(path) => {
                    #[derive(Deserialize)]
                    struct Instance {
                        zeros: Vec<Complex64>,
                        #[serde(default)]
                        poles: Vec<Complex64>,
                        disk1: Disk,
                        disk2: Option<Disk>,
                    }
                    let i: Instance = typed(parse_json(&read_input(path)?, path)?, path, "instance {zeros, poles, disk1, disk2}")?;
                    let r = check_bocher(&i.zeros, &i.poles, i.disk1, i.disk2)?;
                    Ok(Outcome { negative: !r.passes(), ..Outcome::json(&serde_json::to_value(&r)?) })
                }
                None => {
                    let b = bocher_suite(*instances, *max_degree, cli.seed)?;
                    let g = gauss_lucas_suite(*instances, *max_degree, cli.seed)?;
                    let report = json!({
                        "bocher": { "instances": b.instances, "counterexamples": serde_json::to_value(&b.counterexamples)? },
                        "gauss_lucas": { "instances": g.instances, "counterexamples": serde_json::to_value(&g.counterexamples)? },
                    });
                    Ok(Outcome { negative: !(b.passes() && g.passes()), ..Outcome::json(&report) })
                }
            }
        }
        Command::Render { input, levels, graphs, gradients, width } => {
            if format == Some(Format::Json) {
                bail!("`render` only writes SVG");
            }
            let t = Tract::normalized(read_poly(input)?)?;
            let opts = RenderOptions { critical_graphs: *graphs, gradients: *gradients, width: *width, ..Default::default() };
            Ok(Outcome { text: render_svg(&t, levels, &opts)?, negative: false })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(outcome.text.as_bytes()).context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
