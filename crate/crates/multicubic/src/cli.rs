//! Command-line front end: argument parsing, dispatch into the library,
//! and deterministic report emission.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::combinatorics::{identity_total_weight, identity_w1, identity_w2};
use crate::equation::{classify, diff_operator, remark21_demo, residual_sweep, Sample, Tolerances};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::mappings::{add_power_noise, load_model};
use crate::point::Point;
use crate::rat::{format_rat, parse_rat, rat_frac, rat_int, Rat};
use crate::report;
use crate::scalar::{Mode, Scalar};
use crate::stability::{
    fit_delta, hyperstability_check, phi_closed_form, phi_series, stabilize, BoundVariant,
    ControlFunction, StabilizationConfig,
};

#[derive(Parser)]
#[command(name = "multicubic", version, about = "Multi-cubic equation verifier and stabilizer")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Computation mode: exact | float (default: MULTICUBIC_MODE env, then exact)
    #[arg(long)]
    mode: Option<String>,
    /// Report destination; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format: json | csv (csv applies to stabilize only)
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct GridArgs {
    /// Integer grid range "int:LO..HI" or "none" (default int:-3..3)
    #[arg(long)]
    grid: Option<String>,
    /// Number of seeded random rational grid points (default 200)
    #[arg(long)]
    random: Option<usize>,
    /// Grid RNG seed (default 42)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the three weight identities for n = 1..n-max
    Identities {
        #[arg(long = "n-max", default_value_t = 12)]
        n_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep the characterizing equation's residual over the grid
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Full grid-level classification of a model
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recover the multi-cubic approximant and certify its error bound
    Stabilize {
        #[arg(long)]
        model: PathBuf,
        /// Control exponent alpha (rational, != 3n)
        #[arg(long)]
        alpha: String,
        /// Control amplitude delta (rational)
        #[arg(long)]
        delta: Option<String>,
        /// Fit delta empirically from the grid instead of taking --delta
        #[arg(long, default_value_t = false)]
        fit_delta: bool,
        /// Add seeded power noise of this amplitude to the model
        #[arg(long)]
        noise_delta: Option<String>,
        /// Noise exponent (default: --alpha)
        #[arg(long)]
        noise_alpha: Option<String>,
        #[arg(long, default_value_t = 1)]
        noise_seed: u64,
        /// Contraction sign override (+1 or -1)
        #[arg(long)]
        beta: Option<i8>,
        /// Iteration count
        #[arg(long = "L", default_value_t = 40)]
        iterations: u32,
        #[arg(long, default_value_t = 60)]
        series_terms: u32,
        /// Evaluation points "LO..HI:COUNT", each coordinate swept jointly
        #[arg(long, default_value = "-2..2:41", allow_hyphen_values = true)]
        points: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare the series bound against both closed-form constants
    Bound {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "1")]
        delta: String,
        /// Evaluation points "LO..HI:COUNT"
        #[arg(long, default_value = "1..3:5", allow_hyphen_values = true)]
        points: String,
        #[arg(long, default_value_t = 60)]
        series_terms: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Hyperstability check under a product control
    Hyper {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "1")]
        delta: String,
        /// Product exponents "p11,..,p1n;p21,..,p2n"; one row is used for both
        #[arg(long)]
        exponents: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The norm-cube demonstration: 3-power scaling without the equation
    Remark21 {
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn resolve_mode(out: &OutputArgs) -> Result<Mode> {
    if let Some(m) = &out.mode {
        return Mode::parse(m);
    }
    match std::env::var("MULTICUBIC_MODE") {
        Ok(v) => Mode::parse(&v),
        Err(_) => Ok(Mode::Exact),
    }
}

fn resolve_grid(args: &GridArgs) -> Result<GridSpec> {
    let mut spec = GridSpec::default();
    if let Some(g) = &args.grid {
        if g == "none" {
            spec.int_range = None;
        } else if let Some(r) = g.strip_prefix("int:") {
            let (lo, hi) = r
                .split_once("..")
                .ok_or_else(|| Error::parse("--grid", "expected int:LO..HI"))?;
            let lo: i64 = lo.parse().map_err(|_| Error::parse("--grid", "bad LO"))?;
            let hi: i64 = hi.parse().map_err(|_| Error::parse("--grid", "bad HI"))?;
            if lo > hi {
                return Err(Error::parse("--grid", "LO must not exceed HI"));
            }
            spec.int_range = Some((lo, hi));
        } else {
            return Err(Error::parse("--grid", "expected int:LO..HI or none"));
        }
    }
    if let Some(c) = args.random {
        spec.random_count = c;
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    Ok(spec)
}

fn grid_echo(spec: &GridSpec) -> Value {
    json!({
        "intRange": spec.int_range.map(|(lo, hi)| json!([lo, hi])),
        "random": spec.random_count,
        "seed": spec.seed,
    })
}

fn parse_points_spec(s: &str) -> Result<(i64, i64, usize)> {
    let err = || Error::parse("--points", "expected LO..HI:COUNT");
    let (range, count) = s.rsplit_once(':').ok_or_else(err)?;
    let (lo, hi) = range.split_once("..").ok_or_else(err)?;
    let lo: i64 = lo.parse().map_err(|_| err())?;
    let hi: i64 = hi.parse().map_err(|_| err())?;
    let count: usize = count.parse().map_err(|_| err())?;
    if count == 0 || lo > hi {
        return Err(err());
    }
    Ok((lo, hi, count))
}

/// Evenly spaced diagonal points; the spacing is rational so both modes see
/// the same coordinates.
fn diagonal_points<S: Scalar>(n: usize, lo: i64, hi: i64, count: usize) -> Vec<Point<S>> {
    (0..count)
        .map(|i| {
            let t = if count > 1 {
                rat_frac(i as i64, count as i64 - 1)
            } else {
                rat_frac(1, 2)
            };
            let v = rat_int(lo) + t * (rat_int(hi) - rat_int(lo));
            Point::scalar_coords(vec![S::from_rat(&v); n])
        })
        .collect()
}

fn grid_samples<S: Scalar>(spec: &GridSpec, n: usize) -> Result<Vec<Sample<S>>> {
    spec.sample_pairs(n)?
        .into_iter()
        .map(|(a, b)| Sample::new(a, b))
        .collect()
}

fn parse_exponent_rows(s: &str, n: usize) -> Result<[Vec<Rat>; 2]> {
    let rows: Vec<&str> = s.split(';').collect();
    let parse_row = |row: &str| -> Result<Vec<Rat>> {
        row.split(',')
            .map(|p| parse_rat(p.trim(), "--exponents"))
            .collect()
    };
    let (r1, r2) = match rows.as_slice() {
        [one] => {
            let r = parse_row(one)?;
            (r.clone(), r)
        }
        [a, b] => (parse_row(a)?, parse_row(b)?),
        _ => return Err(Error::parse("--exponents", "expected one or two rows")),
    };
    if r1.len() != n || r2.len() != n {
        return Err(Error::parse(
            "--exponents",
            format!("each row needs {n} entries"),
        ));
    }
    Ok([r1, r2])
}

struct Emission {
    command: &'static str,
    request: Value,
    payload: Value,
    /// CSV body when the command supports the csv format.
    csv: Option<String>,
    success: bool,
}

fn run_identities(n_max: usize) -> Result<Emission> {
    let mut rows = Vec::new();
    let mut all_equal = true;
    for n in 1..=n_max {
        for (label, check) in [
            ("total", identity_total_weight(n)?),
            ("w2", identity_w2(n)?),
            ("w1", identity_w1(n)?),
        ] {
            all_equal &= check.equal;
            rows.push(report::identity_row_json(n, label, &check));
        }
    }
    Ok(Emission {
        command: "identities",
        request: json!({ "nMax": n_max }),
        payload: json!({ "rows": rows, "allEqual": all_equal }),
        csv: None,
        success: all_equal,
    })
}

fn run_verify<S: Scalar>(model_path: &Path, spec: &GridSpec) -> Result<Emission> {
    let model = load_model(model_path)?;
    let samples = grid_samples::<S>(spec, model.arity())?;
    let tol = Tolerances::default();
    let sweep = residual_sweep(&model, &samples, false)?;
    let mut passes = true;
    for s in &samples {
        if !diff_operator(&model, s)?.vanishes(&tol) {
            passes = false;
            break;
        }
    }
    Ok(Emission {
        command: "verify",
        request: json!({
            "model": model_path.display().to_string(),
            "grid": grid_echo(spec),
        }),
        payload: json!({
            "report": report::residual_report_json(&sweep),
            "equationHolds": passes,
        }),
        csv: None,
        success: passes,
    })
}

fn run_classify<S: Scalar>(model_path: &Path, spec: &GridSpec) -> Result<Emission> {
    let model = load_model(model_path)?;
    let samples = grid_samples::<S>(spec, model.arity())?;
    let verdict = classify(&model, &samples, &Tolerances::default())?;
    Ok(Emission {
        command: "classify",
        request: json!({
            "model": model_path.display().to_string(),
            "grid": grid_echo(spec),
        }),
        payload: report::verdict_json(&verdict),
        csv: None,
        success: verdict.is_multicubic(),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_stabilize<S: Scalar>(
    model_path: &Path,
    alpha: &Rat,
    delta: Option<&Rat>,
    fit: bool,
    noise: Option<(&Rat, &Rat, u64)>,
    beta: Option<i8>,
    iterations: u32,
    series_terms: u32,
    points: (i64, i64, usize),
    spec: &GridSpec,
) -> Result<Emission> {
    let mut model = load_model(model_path)?;
    if let Some((nd, na, seed)) = noise {
        model = add_power_noise(model, nd.clone(), na.clone(), seed)?;
    }
    let n = model.arity();
    let samples = grid_samples::<S>(spec, n)?;

    let delta = if fit {
        let fitted = fit_delta(&model, alpha, &samples)?;
        if !fitted.admissible {
            return Err(Error::domain(
                "no admissible delta: nonzero residual over a vanishing control",
            ));
        }
        rat_from_scalar(&fitted.delta)?
    } else {
        delta
            .cloned()
            .ok_or_else(|| Error::parse("--delta", "required unless --fit-delta is set"))?
    };
    let phi = ControlFunction::power(delta.clone(), alpha.clone());

    let cfg = StabilizationConfig {
        beta_override: beta,
        iterations,
        series_terms,
        tolerance: 1e-9,
    };
    let (lo, hi, count) = points;
    let eval_points = diagonal_points::<S>(n, lo, hi, count);
    let rep = stabilize(&model, &phi, &cfg, &eval_points, &samples, &Tolerances::default())?;
    let success = rep.all_bounds_ok && rep.all_converged;
    let csv = report::stabilization_csv(&rep);
    Ok(Emission {
        command: "stabilize",
        request: json!({
            "model": model_path.display().to_string(),
            "alpha": format_rat(alpha),
            "delta": format_rat(&delta),
            "fitDelta": fit,
            "noise": noise.map(|(nd, na, seed)| json!({
                "delta": format_rat(nd),
                "alpha": format_rat(na),
                "seed": seed,
            })),
            "beta": beta,
            "L": iterations,
            "seriesTerms": series_terms,
            "points": json!([lo, hi, count]),
            "grid": grid_echo(spec),
        }),
        payload: report::stabilization_json(&rep),
        csv: Some(csv),
        success,
    })
}

fn rat_from_scalar<S: Scalar>(v: &S) -> Result<Rat> {
    if S::EXACT {
        // round-trips through the JSON string form to stay lossless
        match v.to_json() {
            Value::String(s) => parse_rat(&s, "fitted delta"),
            _ => Err(Error::domain("unexpected exact scalar encoding")),
        }
    } else {
        Rat::from_float(v.to_f64())
            .ok_or_else(|| Error::domain("fitted delta is not finite"))
    }
}

fn run_bound<S: Scalar>(
    n: usize,
    alpha: &Rat,
    delta: &Rat,
    points: (i64, i64, usize),
    series_terms: u32,
) -> Result<Emission> {
    let phi = ControlFunction::power(delta.clone(), alpha.clone());
    let beta = crate::stability::choose_beta(alpha, n)?;
    let (lo, hi, count) = points;
    let eval_points = diagonal_points::<S>(n, lo, hi, count);
    let mut rows = Vec::new();
    let mut agree = true;
    for x in &eval_points {
        let series = phi_series(x, &phi, beta, n, series_terms)?;
        let total = match &series.tail {
            Some(t) => series.partial_sum.add(t),
            None => series.partial_sum.clone(),
        };
        let paper = phi_closed_form(x, delta, alpha, n, BoundVariant::Paper)?;
        let tight = phi_closed_form(x, delta, alpha, n, BoundVariant::Series)?;
        // below the critical exponent the three values coincide; above it the
        // series must match the tight constant and stay under the paper one
        let ok = if series.diverged {
            false
        } else if S::EXACT {
            total == tight && total <= paper
        } else {
            let rel = (total.to_f64() - tight.to_f64()).abs() / tight.to_f64().max(f64::MIN_POSITIVE);
            rel < 1e-10 && total.to_f64() <= paper.to_f64() * (1.0 + 1e-10)
        };
        agree &= ok;
        rows.push(json!({
            "x": x.to_json(),
            "series": total.to_json(),
            "closedFormSeries": tight.to_json(),
            "closedFormPaper": paper.to_json(),
            "agrees": ok,
        }));
    }
    Ok(Emission {
        command: "bound",
        request: json!({
            "n": n,
            "alpha": format_rat(alpha),
            "delta": format_rat(delta),
            "points": json!([lo, hi, count]),
            "seriesTerms": series_terms,
        }),
        payload: json!({ "beta": beta, "rows": rows, "allAgree": agree }),
        csv: None,
        success: agree,
    })
}

fn run_hyper<S: Scalar>(
    model_path: &Path,
    delta: &Rat,
    exponents: &str,
    spec: &GridSpec,
) -> Result<Emission> {
    let model = load_model(model_path)?;
    let n = model.arity();
    let rows = parse_exponent_rows(exponents, n)?;
    let phi = ControlFunction::product(delta.clone(), rows.clone())?;
    let samples = grid_samples::<S>(spec, n)?;
    let verdict = hyperstability_check(&model, &phi, &samples, &Tolerances::default())?;
    let success = matches!(verdict, crate::stability::HyperVerdict::MultiCubicOnGrid);
    Ok(Emission {
        command: "hyper",
        request: json!({
            "model": model_path.display().to_string(),
            "delta": format_rat(delta),
            "exponents": [
                rows[0].iter().map(format_rat).collect::<Vec<_>>(),
                rows[1].iter().map(format_rat).collect::<Vec<_>>(),
            ],
            "grid": grid_echo(spec),
        }),
        payload: report::hyper_json(&verdict),
        csv: None,
        success,
    })
}

fn run_remark21() -> Result<Emission> {
    let demo = remark21_demo()?;
    let residual_ok = demo
        .residual_at_unit
        .iter()
        .zip(&demo.residual_expected)
        .all(|(a, b)| (a - b).abs() <= 1e-12);
    let double_ok = demo
        .double_at_34
        .iter()
        .zip(&demo.eight_h_at_34)
        .all(|(a, b)| (a - b).abs() <= 1e-9 * b.abs().max(1.0));
    let success = demo.power_condition_holds && residual_ok && double_ok;
    Ok(Emission {
        command: "remark21",
        request: json!({}),
        payload: report::remark21_json(&demo),
        csv: None,
        success,
    })
}

fn dispatch(cli: &Cli, mode: Mode) -> Result<Emission> {
    match &cli.command {
        Command::Identities { n_max, .. } => run_identities(*n_max),
        Command::Verify { model, grid, .. } => {
            let spec = resolve_grid(grid)?;
            match mode {
                Mode::Exact => run_verify::<Rat>(model, &spec),
                Mode::Float => run_verify::<f64>(model, &spec),
            }
        }
        Command::Classify { model, grid, .. } => {
            let spec = resolve_grid(grid)?;
            match mode {
                Mode::Exact => run_classify::<Rat>(model, &spec),
                Mode::Float => run_classify::<f64>(model, &spec),
            }
        }
        Command::Stabilize {
            model,
            alpha,
            delta,
            fit_delta,
            noise_delta,
            noise_alpha,
            noise_seed,
            beta,
            iterations,
            series_terms,
            points,
            grid,
            ..
        } => {
            let spec = resolve_grid(grid)?;
            let alpha = parse_rat(alpha, "--alpha")?;
            let delta = delta.as_ref().map(|d| parse_rat(d, "--delta")).transpose()?;
            let noise_delta = noise_delta
                .as_ref()
                .map(|d| parse_rat(d, "--noise-delta"))
                .transpose()?;
            let noise_alpha = noise_alpha
                .as_ref()
                .map(|a| parse_rat(a, "--noise-alpha"))
                .transpose()?
                .unwrap_or_else(|| alpha.clone());
            let noise = noise_delta.as_ref().map(|nd| (nd, &noise_alpha, *noise_seed));
            let pts = parse_points_spec(points)?;
            match mode {
                Mode::Exact => run_stabilize::<Rat>(
                    model, &alpha, delta.as_ref(), *fit_delta, noise, *beta, *iterations,
                    *series_terms, pts, &spec,
                ),
                Mode::Float => run_stabilize::<f64>(
                    model, &alpha, delta.as_ref(), *fit_delta, noise, *beta, *iterations,
                    *series_terms, pts, &spec,
                ),
            }
        }
        Command::Bound {
            n,
            alpha,
            delta,
            points,
            series_terms,
            ..
        } => {
            let alpha = parse_rat(alpha, "--alpha")?;
            let delta = parse_rat(delta, "--delta")?;
            let pts = parse_points_spec(points)?;
            match mode {
                Mode::Exact => run_bound::<Rat>(*n, &alpha, &delta, pts, *series_terms),
                Mode::Float => run_bound::<f64>(*n, &alpha, &delta, pts, *series_terms),
            }
        }
        Command::Hyper {
            model,
            delta,
            exponents,
            grid,
            ..
        } => {
            let spec = resolve_grid(grid)?;
            let delta = parse_rat(delta, "--delta")?;
            match mode {
                Mode::Exact => run_hyper::<Rat>(model, &delta, exponents, &spec),
                Mode::Float => run_hyper::<f64>(model, &delta, exponents, &spec),
            }
        }
        Command::Remark21 { .. } => run_remark21(),
    }
}

fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Identities { out, .. }
        | Command::Verify { out, .. }
        | Command::Classify { out, .. }
        | Command::Stabilize { out, .. }
        | Command::Bound { out, .. }
        | Command::Hyper { out, .. }
        | Command::Remark21 { out } => out,
    }
}

/// Full run; the exit code is 0 on verdict success, 1 on verdict failure.
/// Errors map to exit code 2 in main.
pub fn run(cli: &Cli) -> Result<i32> {
    let out = output_args(cli);
    let mode = resolve_mode(out)?;
    let started = Instant::now();
    let emission = dispatch(cli, mode)?;

    let mut request = emission.request.clone();
    if let Value::Object(m) = &mut request {
        m.insert("mode".into(), json!(mode.as_str()));
    }
    let text = match out.format.as_str() {
        "json" => report::render_json(&report::envelope(emission.command, request, emission.payload)),
        "csv" => emission
            .csv
            .ok_or_else(|| Error::parse("--format", "csv is only available for stabilize"))?,
        other => return Err(Error::parse("--format", format!("unknown format {other:?}"))),
    };
    report::write_output(&text, out.output.as_deref())?;
    // wall-clock time goes to stderr only; report bytes stay request-determined
    eprintln!(
        "{}: {} in {:?}",
        emission.command,
        if emission.success { "ok" } else { "verdict failure" },
        started.elapsed()
    );
    Ok(if emission.success { 0 } else { 1 })
}

pub fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(2)
        }
    }
}
