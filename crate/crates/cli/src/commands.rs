//! Subcommand implementations and exit-code policy.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error, 3 no
//! closed-form oracle, 4 vacuous envelope result, 5 unwritable output path.

use crate::ideal_file::IdealFile;
use crate::point::{format_complex, parse_point};
use clap::{Args, Parser, Subcommand};
use green_core::envelope::{optimize_envelope, EnvelopeOptions};
use green_core::models::{match_model, product_green, pullback_equality_check};
use green_core::verify::{
    check_log_bound, check_negative, check_psh_lines, lelong_radial, FunctionHandle,
};
use green_core::{
    CoordRange, DomainKind, EstimateKind, GreenValue, GridSpec, IdealSpec, ModelId, ProbeSpec,
    ProperMapSpec, VanishingOrder, WeightedZeroSet, Witness,
};
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NO_ORACLE: i32 = 3;
pub const EXIT_VACUOUS: i32 = 4;
pub const EXIT_UNWRITABLE: i32 = 5;

/// Green functions of polynomial ideals: evaluation, disc-envelope bounds,
/// verification suites, grids, and generator reduction.
#[derive(Debug, Parser)]
#[command(name = "green", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct EnvelopeParams {
    /// Disc degree for the random families.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    /// Number of random restarts.
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    /// Disc evaluations allowed per restart.
    #[arg(long, default_value_t = 400)]
    pub budget: usize,
    /// Random seed (stochastic commands are reproducible given the seed).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Disable structural starts (diagonal and model templates).
    #[arg(long, default_value_t = false)]
    pub no_templates: bool,
}

impl EnvelopeParams {
    fn to_options(&self, seed: u64) -> EnvelopeOptions {
        EnvelopeOptions {
            degree: self.degree,
            restarts: self.restarts,
            budget: self.budget,
            seed,
            use_templates: !self.no_templates,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Green function at a point via the closed-form oracle.
    Eval {
        /// Ideal specification file (JSON).
        file: PathBuf,
        /// Evaluation point, comma-separated complex tokens like `0.5,0.25i`.
        #[arg(long)]
        point: String,
        /// Fall back to envelope optimization when no oracle matches.
        #[arg(long, default_value_t = false)]
        envelope: bool,
        #[command(flatten)]
        params: EnvelopeParams,
    },
    /// Compute a certified disc upper bound at a point.
    Envelope {
        file: PathBuf,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        params: EnvelopeParams,
    },
    /// Run verification suites and emit a JSON report.
    Verify {
        file: PathBuf,
        /// One of: membership, product, pullback, lelong, all.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: u64,
        /// Power-map exponents for the pullback suite, e.g. `2,1`.
        #[arg(long)]
        map: Option<String>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Testing hook: add a constant to the candidate before checking.
        #[arg(long, hide = true, default_value_t = 0.0)]
        inject_offset: f64,
    },
    /// Evaluate over a modulus grid and write a CSV file.
    Grid {
        file: PathBuf,
        /// Per-coordinate ranges `lo:hi:count[@phase]`, comma-separated.
        #[arg(long)]
        spec: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        params: EnvelopeParams,
    },
    /// Reduce the number of generators by random linear combinations.
    Reduce {
        file: PathBuf,
        /// Target number of combinations.
        #[arg(long)]
        k: usize,
        /// Retry draws.
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Write the reduced ideal here (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Run a parsed command, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Eval {
            file,
            point,
            envelope,
            params,
        } => cmd_eval(&file, &point, envelope, &params),
        Command::Envelope {
            file,
            point,
            params,
        } => cmd_envelope(&file, &point, &params),
        Command::Verify {
            file,
            suite,
            seed,
            map,
            out,
            inject_offset,
        } => cmd_verify(&file, &suite, seed, map.as_deref(), out.as_deref(), inject_offset),
        Command::Grid {
            file,
            spec,
            out,
            params,
        } => cmd_grid(&file, &spec, &out, &params),
        Command::Reduce {
            file,
            k,
            trials,
            seed,
            out,
        } => cmd_reduce(&file, k, trials, seed, out.as_deref()),
    }
}

fn load_spec(path: &std::path::Path) -> Result<IdealSpec, i32> {
    let file = IdealFile::load(path).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    let spec = file.to_spec().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    if let Some(hint) = &file.model_hint {
        match match_model(&spec) {
            Some(m) if m.tag() == hint => {}
            matched => eprintln!(
                "warning: model hint {:?} does not match the detected model {:?}",
                hint,
                matched.map(|m| m.tag().to_string())
            ),
        }
    }
    Ok(spec)
}

fn parse_point_arg(s: &str, dim: usize) -> Result<Vec<Complex64>, i32> {
    let p = parse_point(s).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    if p.len() != dim {
        eprintln!("error: point has {} coordinates, ideal needs {dim}", p.len());
        return Err(EXIT_PARSE);
    }
    Ok(p)
}

fn cmd_eval(path: &std::path::Path, point: &str, envelope: bool, params: &EnvelopeParams) -> i32 {
    let spec = match load_spec(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let z = match parse_point_arg(point, spec.domain().dim) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match match_model(&spec) {
        Some(model) => match model.oracle_eval(&z) {
            Ok(v) => {
                println!("{} (oracle_exact, {})", format_value(v), model.tag());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_PARSE
            }
        },
        None if envelope => run_envelope(&spec, &z, params),
        None => {
            eprintln!("error: no oracle; use envelope");
            EXIT_NO_ORACLE
        }
    }
}

fn format_value(v: GreenValue) -> String {
    match v {
        GreenValue::Finite(x) => format!("{x:.6}"),
        GreenValue::MinusInf => "-inf".to_string(),
    }
}

fn run_envelope(spec: &IdealSpec, z: &[Complex64], params: &EnvelopeParams) -> i32 {
    let seed = match params.seed {
        Some(s) => s,
        None => {
            eprintln!("error: --seed is mandatory for stochastic commands");
            return EXIT_PARSE;
        }
    };
    let est = match optimize_envelope(spec, z, &params.to_options(seed)) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    match (est.value, est.kind) {
        (GreenValue::MinusInf, _) => {
            println!("-inf (exact)");
            EXIT_OK
        }
        (GreenValue::Finite(v), kind) => {
            println!("{v:.6} ({kind})");
            if let Some(Witness::Disc(disc)) = &est.witness {
                let center: Vec<String> =
                    disc.center().iter().map(|c| format_complex(*c)).collect();
                println!("witness center: {}", center.join(","));
                for (j, coeffs) in disc.coeffs().iter().enumerate() {
                    let toks: Vec<String> = coeffs.iter().map(|c| format_complex(*c)).collect();
                    println!("witness coeffs[{}]: {}", j + 1, toks.join(","));
                }
            }
            if let Some(model) = match_model(spec) {
                if let Ok(oracle) = model.oracle_eval(z) {
                    let gap = oracle.abs_diff(GreenValue::Finite(v));
                    println!("oracle: {} ({}), gap: {gap:.3e}", format_value(oracle), model.tag());
                }
            }
            if v == 0.0 {
                eprintln!("error: only the vacuous 0-estimate was found");
                return EXIT_VACUOUS;
            }
            EXIT_OK
        }
    }
}

fn cmd_envelope(path: &std::path::Path, point: &str, params: &EnvelopeParams) -> i32 {
    let spec = match load_spec(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let z = match parse_point_arg(point, spec.domain().dim) {
        Ok(p) => p,
        Err(code) => return code,
    };
    run_envelope(&spec, &z, params)
}

#[derive(Debug, Serialize)]
struct CheckResult {
    name: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
    measured: serde_json::Value,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    suite: String,
    model: String,
    seed: u64,
    checks: Vec<CheckResult>,
    all_pass: bool,
}

fn cmd_verify(
    path: &std::path::Path,
    suite: &str,
    seed: u64,
    map: Option<&str>,
    out: Option<&std::path::Path>,
    inject_offset: f64,
) -> i32 {
    let spec = match load_spec(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let Some(model) = match_model(&spec) else {
        eprintln!("error: no oracle; verification suites need a closed-form model");
        return EXIT_NO_ORACLE;
    };
    if !matches!(suite, "membership" | "product" | "pullback" | "lelong" | "all") {
        eprintln!("error: unknown suite {suite:?} (use membership, product, pullback, lelong, all)");
        return EXIT_PARSE;
    }

    let candidate = if inject_offset == 0.0 {
        model.handle()
    } else {
        let base = model.handle();
        let inner = base.evaluator();
        FunctionHandle::new(base.domain(), "injected", move |z| match inner(z) {
            GreenValue::Finite(v) => GreenValue::Finite(v + inject_offset),
            GreenValue::MinusInf => GreenValue::MinusInf,
        })
    };

    let mut checks = Vec::new();
    if suite == "membership" || suite == "all" {
        run_membership_checks(&candidate, &spec, &model, seed, &mut checks);
    }
    if suite == "product" || suite == "all" {
        checks.push(product_check(&candidate, &model));
    }
    if suite == "pullback" || suite == "all" {
        checks.push(pullback_check(&spec, &model, map));
    }
    if suite == "lelong" || suite == "all" {
        checks.push(lelong_check(&candidate, &spec, &model, seed));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        suite: suite.to_string(),
        model: model.tag().to_string(),
        seed,
        checks,
        all_pass,
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable report");
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return EXIT_UNWRITABLE;
            }
        }
        None => println!("{text}"),
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run_membership_checks(
    u: &FunctionHandle,
    spec: &IdealSpec,
    model: &ModelId,
    seed: u64,
    checks: &mut Vec<CheckResult>,
) {
    match check_negative(u, 500, seed) {
        Ok(r) => checks.push(CheckResult {
            name: "negativity".into(),
            pass: r.pass,
            skipped: None,
            measured: serde_json::json!({"max_value": r.max_value, "samples": r.samples}),
        }),
        Err(e) => checks.push(error_check("negativity", e)),
    }
    match check_psh_lines(u, 200, 256, &[0.05, 0.1, 0.2], 1e-7, seed) {
        Ok(r) => checks.push(CheckResult {
            name: "psh_lines".into(),
            pass: r.pass,
            skipped: None,
            measured: serde_json::json!({
                "circles_checked": r.circles_checked,
                "circles_skipped": r.circles_skipped,
                "max_excess": r.max_excess,
            }),
        }),
        Err(e) => checks.push(error_check("psh_lines", e)),
    }
    let anchors = model.zero_set_anchors();
    match check_log_bound(u, spec, &anchors, &[1e-1, 1e-2, 1e-3, 1e-4], 300, seed) {
        Ok(r) => checks.push(CheckResult {
            name: "log_bound".into(),
            pass: r.pass,
            skipped: None,
            measured: serde_json::json!({
                "c_estimate": r.c_estimate,
                "per_radius": r.per_radius,
            }),
        }),
        Err(e) => checks.push(error_check("log_bound", e)),
    }
}

fn error_check(name: &str, e: green_core::CoreError) -> CheckResult {
    CheckResult {
        name: name.into(),
        pass: false,
        skipped: None,
        measured: serde_json::json!({"error": e.to_string()}),
    }
}

/// Product property: compose the model with a one-dimensional single-pole
/// factor and compare against the direct max on a grid.
fn product_check(u: &FunctionHandle, model: &ModelId) -> CheckResult {
    let pole =
        WeightedZeroSet::new([(Complex64::new(0.0, 0.0), 1.0)]).expect("unit pole");
    let factor = FunctionHandle::from_zero_set(pole, "log|z|");
    let prod = product_green(&factor, u);
    let n = model.domain().dim + 1;
    // Keep points inside the ball factor as well.
    let hi = 0.9 / (n as f64).sqrt();
    let grid = GridSpec::square(0.02, hi, 6, n);
    let mut max_diff = 0.0f64;
    for z in grid.points() {
        let lhs = prod.eval(&z);
        let direct = {
            let g1 = GreenValue::Finite(z[0].norm().ln());
            g1.max(u.eval(&z[1..]))
        };
        max_diff = max_diff.max(lhs.abs_diff(direct));
    }
    CheckResult {
        name: "product".into(),
        pass: max_diff <= 1e-12,
        skipped: None,
        measured: serde_json::json!({"max_diff": max_diff, "points": grid.len()}),
    }
}

fn pullback_check(spec: &IdealSpec, model: &ModelId, map: Option<&str>) -> CheckResult {
    if model.domain().kind != DomainKind::Polydisc {
        return CheckResult {
            name: "pullback".into(),
            pass: true,
            skipped: Some("power maps are branched coverings of the polydisc only".into()),
            measured: serde_json::Value::Null,
        };
    }
    let dim = spec.domain().dim;
    let exponents: Vec<u32> = match map {
        Some(s) => match s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
        {
            Ok(v) => v,
            Err(e) => {
                return CheckResult {
                    name: "pullback".into(),
                    pass: false,
                    skipped: None,
                    measured: serde_json::json!({"error": format!("bad --map: {e}")}),
                }
            }
        },
        None => vec![1; dim],
    };
    let phi = match ProperMapSpec::new(exponents) {
        Ok(p) => p,
        Err(e) => {
            return CheckResult {
                name: "pullback".into(),
                pass: false,
                skipped: None,
                measured: serde_json::json!({"error": e.to_string()}),
            }
        }
    };
    let grid = GridSpec::square(0.05, 0.9, 20, dim);
    match pullback_equality_check(spec, &phi, &grid) {
        Ok(r) => CheckResult {
            name: "pullback".into(),
            pass: r.pass,
            skipped: None,
            measured: serde_json::json!({
                "max_diff": r.max_diff,
                "points": r.points,
                "pulled_model": r.pulled_model,
            }),
        },
        Err(e) => CheckResult {
            name: "pullback".into(),
            pass: false,
            skipped: None,
            measured: serde_json::json!({"error": e.to_string()}),
        },
    }
}

fn lelong_check(
    u: &FunctionHandle,
    spec: &IdealSpec,
    model: &ModelId,
    seed: u64,
) -> CheckResult {
    let anchor = model.zero_set_anchors().into_iter().next().expect("anchor");
    let radii = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let expected = match spec.nu_tilde(&anchor) {
        Ok(VanishingOrder::Finite(k)) => k as f64,
        other => {
            return CheckResult {
                name: "lelong".into(),
                pass: false,
                skipped: None,
                measured: serde_json::json!({"error": format!("nu_tilde: {other:?}")}),
            }
        }
    };
    match lelong_radial(u, &anchor, &radii, 4096, seed) {
        Ok(r) => CheckResult {
            name: "lelong".into(),
            pass: (r.final_slope - expected).abs() <= 0.05,
            skipped: None,
            measured: serde_json::json!({
                "final_slope": r.final_slope,
                "nu_tilde": expected,
                "slopes": r.slope_estimates,
            }),
        },
        Err(e) => CheckResult {
            name: "lelong".into(),
            pass: false,
            skipped: None,
            measured: serde_json::json!({"error": e.to_string()}),
        },
    }
}

fn parse_grid_spec(s: &str, dim: usize) -> Result<GridSpec, String> {
    let coords: Vec<CoordRange> = s
        .split(',')
        .map(|part| {
            let (range, phase) = match part.split_once('@') {
                Some((r, p)) => (
                    r,
                    p.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad phase in {part:?}: {e}"))?,
                ),
                None => (part, 0.0),
            };
            let fields: Vec<&str> = range.split(':').collect();
            if fields.len() != 3 {
                return Err(format!("grid range {range:?} must be lo:hi:count"));
            }
            let lo: f64 = fields[0].trim().parse().map_err(|e| format!("bad lo: {e}"))?;
            let hi: f64 = fields[1].trim().parse().map_err(|e| format!("bad hi: {e}"))?;
            let count: usize = fields[2].trim().parse().map_err(|e| format!("bad count: {e}"))?;
            if count == 0 {
                return Err("grid count must be positive".into());
            }
            Ok(CoordRange {
                lo,
                hi,
                count,
                phase,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    if coords.len() != dim {
        return Err(format!(
            "grid spec has {} coordinates, ideal needs {dim}",
            coords.len()
        ));
    }
    Ok(GridSpec { coords })
}

fn cmd_grid(
    path: &std::path::Path,
    spec_str: &str,
    out: &std::path::Path,
    params: &EnvelopeParams,
) -> i32 {
    let spec = match load_spec(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let grid = match parse_grid_spec(spec_str, spec.domain().dim) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let model = match_model(&spec);
    let seed = match (model.is_some(), params.seed) {
        (true, s) => s.unwrap_or(0),
        (false, Some(s)) => s,
        (false, None) => {
            eprintln!("error: --seed is mandatory when the grid falls back to envelope optimization");
            return EXIT_PARSE;
        }
    };

    let mut rows = String::new();
    let dim = spec.domain().dim;
    let header: Vec<String> = (1..=dim).map(|j| format!("z{j}")).collect();
    rows.push_str(&header.join(","));
    rows.push_str(",value,kind\n");
    for z in grid.points() {
        let interior = spec.domain().boundary_gap(&z) > 0.0;
        let (value, kind) = match (&model, interior) {
            (Some(m), true) => match m.oracle_eval(&z) {
                Ok(v) => (v, EstimateKind::OracleExact),
                Err(_) => (GreenValue::Finite(0.0), EstimateKind::OracleExact),
            },
            (None, true) => match optimize_envelope(&spec, &z, &params.to_options(seed)) {
                Ok(est) => (est.value, est.kind),
                Err(_) => (GreenValue::Finite(0.0), EstimateKind::DiscUpperBound),
            },
            // Boundary or exterior grid points are skipped.
            (_, false) => continue,
        };
        let coords: Vec<String> = z.iter().map(|c| format_complex(*c)).collect();
        let value_str = match value {
            GreenValue::Finite(v) => format!("{v:?}"),
            GreenValue::MinusInf => "-inf".to_string(),
        };
        rows.push_str(&format!("{},{},{}\n", coords.join(","), value_str, kind));
    }

    match std::fs::File::create(out).and_then(|mut f| f.write_all(rows.as_bytes())) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", out.display());
            EXIT_UNWRITABLE
        }
    }
}

fn cmd_reduce(
    path: &std::path::Path,
    k: usize,
    trials: usize,
    seed: u64,
    out: Option<&std::path::Path>,
) -> i32 {
    let spec = match load_spec(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match spec.reduce_generators(k, trials, seed, &ProbeSpec::default()) {
        Ok((reduced, report)) => {
            let report_text =
                serde_json::to_string_pretty(&report).expect("serializable report");
            println!("{report_text}");
            if let Some(p) = out {
                let file = IdealFile::from_spec(&reduced);
                let text = serde_json::to_string_pretty(&file).expect("serializable ideal");
                if let Err(e) = std::fs::write(p, text) {
                    eprintln!("error: cannot write {}: {e}", p.display());
                    return EXIT_UNWRITABLE;
                }
            }
            if report.success {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_PARSE
        }
    }
}
