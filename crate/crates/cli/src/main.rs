//! Batch front end for the etamode library. Every subcommand evaluates a
//! closed-form layer of the theory and emits one deterministic CSV table:
//! identical invocations produce byte-identical bytes (shortest round-trip
//! float formatting, '.' decimal separator, '\n' line endings), so emitted
//! files diff cleanly across runs and machines.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use etamode::model::{self, PhasePoint};
use etamode::qmeasure::{q_measure, QMode, QParams};
use etamode::scan::{
    classify_singularity, default_measures, numerical_derivative, refined_profile, sweep,
    FitSide, SweepAxis, WindowPolicy,
};
use etamode::verify;
use etamode::EntropyForm;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "etamode", version, about = "Momentum-space entanglement of eta-pairing ground states: phase diagrams, correlation-measure sweeps, Q scans, and oracle verification", max_term_width = 100)]
struct Cli {
    /// Output file; stdout when omitted.
    #[arg(long = "out", global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phase-diagram grid: region label and order parameters per (n, u).
    Phase(PhaseArgs),
    /// Correlation measures and their derivatives along one sweep axis.
    Measures(MeasuresArgs),
    /// Multipartite measure Q vs u for a list of block sizes D.
    Qscan(QscanArgs),
    /// Classify the derivative singularity of each measure at a point.
    Singularity(SingularityArgs),
    /// The constant-a curve n(u) along which every measure is flat.
    Isocurve(IsocurveArgs),
    /// Run every closed-form-vs-brute-force comparison and report a table.
    OracleVerify(OracleVerifyArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct PhaseArgs {
    #[arg(long, default_value_t = 0.005)]
    n_min: f64,
    #[arg(long, default_value_t = 1.0)]
    n_max: f64,
    #[arg(long, default_value_t = 0.005)]
    n_step: f64,
    #[arg(long, default_value_t = -8.0)]
    u_min: f64,
    #[arg(long, default_value_t = 8.0)]
    u_max: f64,
    #[arg(long, default_value_t = 0.08)]
    u_step: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct MeasuresArgs {
    /// Sweep coordinate: u (fixed n), n (fixed u), or iso (u along fixed a).
    #[arg(long, value_enum, default_value_t = Axis::U)]
    axis: Axis,
    /// Filling, required for --axis u.
    #[arg(long)]
    n: Option<f64>,
    /// Interaction, required for --axis n.
    #[arg(long)]
    u: Option<f64>,
    /// Pair fraction, required for --axis iso.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = -4.5)]
    u_min: f64,
    #[arg(long, default_value_t = 4.5)]
    u_max: f64,
    #[arg(long, default_value_t = 0.01)]
    u_step: f64,
    #[arg(long, default_value_t = 0.005)]
    n_min: f64,
    #[arg(long, default_value_t = 1.0)]
    n_max: f64,
    #[arg(long, default_value_t = 0.005)]
    n_step: f64,
    /// Two-mode entropy branch: the spectrum-derived form or the printed one.
    #[arg(long, value_enum, default_value_t = Form::Printed)]
    form: Form,
    /// Report entropic measures in bits (2) or nats (e).
    #[arg(long, value_enum, default_value_t = LogBase::Two)]
    log_base: LogBase,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct QscanArgs {
    /// Lattice sites.
    #[arg(long = "L", default_value_t = 1000.0)]
    l: f64,
    /// Electrons (filling n = N / L).
    #[arg(long = "N", default_value_t = 500.0)]
    n_electrons: f64,
    /// Block sizes D; repeatable or comma-separated.
    #[arg(long = "D", value_delimiter = ',', num_args = 1.., default_values_t = [1, 2, 4, 8, 16, 32])]
    d: Vec<usize>,
    #[arg(long, default_value_t = -4.5)]
    u_min: f64,
    #[arg(long, default_value_t = 4.5)]
    u_max: f64,
    #[arg(long, default_value_t = 0.01)]
    u_step: f64,
    /// Purity evaluation: the product approximation or exact mixed spectra.
    #[arg(long, value_enum, default_value_t = Mode::Paper)]
    mode: Mode,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SingularityArgs {
    /// Sweep coordinate crossing the critical point.
    #[arg(long, value_enum, default_value_t = Axis::U)]
    axis: Axis,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    /// Critical abscissa x_c to profile around.
    #[arg(long)]
    at: f64,
    #[arg(long, value_enum, default_value_t = Form::Printed)]
    form: Form,
    /// Innermost offset |x - x_c| of the derivative profile.
    #[arg(long, default_value_t = 1e-5)]
    min_offset: f64,
    /// Outermost offset of the derivative profile.
    #[arg(long, default_value_t = 1e-2)]
    max_offset: f64,
    #[arg(long, default_value_t = 16)]
    points_per_decade: usize,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct IsocurveArgs {
    /// Pair fraction held constant along the curve.
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = -3.999)]
    u_min: f64,
    #[arg(long, default_value_t = 3.999)]
    u_max: f64,
    #[arg(long, default_value_t = 0.01)]
    u_step: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct OracleVerifyArgs {
    /// Scale factor on every comparison tolerance.
    #[arg(long = "tol", default_value_t = 1.0)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Axis {
    U,
    N,
    Iso,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Form {
    /// 2 h2(a) + a(1 - a).
    Printed,
    /// 2 h2(a) - 2 a(1 - a), consistent with the two-mode spectrum.
    Spectrum,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    /// Product of pure-block purities.
    Paper,
    /// Exact mixed-block spectra.
    Exact,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum LogBase {
    #[value(name = "2")]
    Two,
    E,
}

impl Form {
    fn entropy_form(self) -> EntropyForm {
        match self {
            Form::Printed => EntropyForm::Printed,
            Form::Spectrum => EntropyForm::Spectrum,
        }
    }
    fn label(self) -> &'static str {
        match self {
            Form::Printed => "printed",
            Form::Spectrum => "spectrum",
        }
    }
}

impl Mode {
    fn q_mode(self) -> QMode {
        match self {
            Mode::Paper => QMode::ProductForm,
            Mode::Exact => QMode::ExactSpectrum,
        }
    }
    fn label(self) -> &'static str {
        match self {
            Mode::Paper => "paper",
            Mode::Exact => "exact",
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let (csv, code) = match cli.cmd {
        Command::Phase(a) => (phase(&a)?, 0),
        Command::Measures(a) => (measure_sweep(&a)?, 0),
        Command::Qscan(a) => (qscan(&a)?, 0),
        Command::Singularity(a) => (singularity(&a)?, 0),
        Command::Isocurve(a) => (isocurve(&a)?, 0),
        Command::OracleVerify(a) => oracle_verify(&a)?,
    };
    match cli.out {
        Some(path) => std::fs::write(&path, csv)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(code)
}

/// Shortest round-trip decimal representation, with -0 folded into 0 so
/// equal values always print identically.
fn fmt(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

/// Uniform grid from min to max inclusive (up to roundoff on the last step).
fn grid(min: f64, max: f64, step: f64, what: &str) -> anyhow::Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() || !min.is_finite() || max < min {
        bail!("bad {what} range [{min}, {max}] with step {step}");
    }
    let count = ((max - min) / step).round() as usize;
    let mut xs = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let x = min + i as f64 * step;
        if x > max + step * 1e-9 {
            break;
        }
        xs.push(x);
    }
    Ok(xs)
}

fn phase(a: &PhaseArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "# config: phase n-min={} n-max={} n-step={} u-min={} u-max={} u-step={}",
        fmt(a.n_min), fmt(a.n_max), fmt(a.n_step), fmt(a.u_min), fmt(a.u_max), fmt(a.u_step)
    )?;
    writeln!(out, "n,u,region,n_s,n_d,a")?;
    for n in grid(a.n_min, a.n_max, a.n_step, "n")? {
        for u in grid(a.u_min, a.u_max, a.u_step, "u")? {
            let gs = model::ground_state(PhasePoint::new(n, u))?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt(n), fmt(u), gs.region, fmt(gs.n_s), fmt(gs.n_d), fmt(gs.a)
            )?;
        }
    }
    Ok(out)
}

/// Resolve an axis plus its fixed-coordinate flags into a SweepAxis.
fn resolve_axis(
    axis: Axis,
    n: Option<f64>,
    u: Option<f64>,
    a: Option<f64>,
) -> anyhow::Result<(SweepAxis, String)> {
    match axis {
        Axis::U => {
            let n = n.ok_or_else(|| anyhow::anyhow!("--axis u requires --n"))?;
            Ok((SweepAxis::U { n }, format!("axis=u n={}", fmt(n))))
        }
        Axis::N => {
            let u = u.ok_or_else(|| anyhow::anyhow!("--axis n requires --u"))?;
            Ok((SweepAxis::N { u }, format!("axis=n u={}", fmt(u))))
        }
        Axis::Iso => {
            let a = a.ok_or_else(|| anyhow::anyhow!("--axis iso requires --a"))?;
            Ok((SweepAxis::IsoCurve { a }, format!("axis=iso a={}", fmt(a))))
        }
    }
}

fn measure_sweep(args: &MeasuresArgs) -> anyhow::Result<String> {
    let (axis, axis_cfg) = resolve_axis(args.axis, args.n, args.u, args.a)?;
    let (min, max, step) = match args.axis {
        Axis::N => (args.n_min, args.n_max, args.n_step),
        _ => (args.u_min, args.u_max, args.u_step),
    };
    let kinds = default_measures(args.form.entropy_form());
    let mut records = sweep(axis, min, max, step, &kinds)?;
    numerical_derivative(&mut records);

    // Entropic columns are computed in bits; nats differ by a factor ln 2.
    let scale: Vec<f64> = kinds
        .iter()
        .map(|k| {
            if args.log_base == LogBase::E && k.is_entropic() {
                std::f64::consts::LN_2
            } else {
                1.0
            }
        })
        .collect();

    let mut out = String::new();
    writeln!(
        out,
        "# config: measures {axis_cfg} start={} stop={} step={} form={} log-base={}",
        fmt(min), fmt(max), fmt(step), args.form.label(),
        if args.log_base == LogBase::E { "e" } else { "2" }
    )?;
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    let deriv_names: Vec<String> = names.iter().map(|n| format!("d_{n}")).collect();
    writeln!(out, "x,region,{},{}", names.join(","), deriv_names.join(","))?;
    for r in &records {
        let vals: Vec<String> = r
            .values
            .iter()
            .zip(&scale)
            .map(|(v, s)| fmt(v * s))
            .collect();
        let ders: Vec<String> = r
            .d1
            .iter()
            .zip(&scale)
            .map(|(d, s)| d.map(|v| fmt(v * s)).unwrap_or_default())
            .collect();
        writeln!(out, "{},{},{},{}", fmt(r.x), r.region, vals.join(","), ders.join(","))?;
    }
    Ok(out)
}

fn qscan(args: &QscanArgs) -> anyhow::Result<String> {
    if args.d.is_empty() || args.d.iter().any(|&d| d == 0) {
        bail!("-D requires positive block sizes");
    }
    if !(args.l > 0.0) || !(args.n_electrons > 0.0) || args.n_electrons > args.l {
        bail!("need 0 < N <= L, got L = {}, N = {}", args.l, args.n_electrons);
    }
    let n = args.n_electrons / args.l;
    let mut out = String::new();
    let d_list: Vec<String> = args.d.iter().map(|d| d.to_string()).collect();
    writeln!(
        out,
        "# config: qscan L={} N={} D={} u-min={} u-max={} u-step={} mode={}",
        fmt(args.l), fmt(args.n_electrons), d_list.join(","),
        fmt(args.u_min), fmt(args.u_max), fmt(args.u_step), args.mode.label()
    )?;
    let q_names: Vec<String> = args.d.iter().map(|d| format!("q_{d}")).collect();
    writeln!(out, "u,region,{}", q_names.join(","))?;
    for u in grid(args.u_min, args.u_max, args.u_step, "u")? {
        let gs = model::ground_state(PhasePoint::new(n, u))?;
        let mut row = format!("{},{}", fmt(u), gs.region);
        for &d in &args.d {
            let q = q_measure(&QParams {
                l: args.l,
                n_s: args.l * gs.n_s,
                n_d: args.l * gs.n_d,
                d,
                mode: args.mode.q_mode(),
            })?;
            row.push(',');
            row.push_str(&fmt(q));
        }
        writeln!(out, "{row}")?;
    }
    Ok(out)
}

fn singularity(args: &SingularityArgs) -> anyhow::Result<String> {
    let (axis, axis_cfg) = resolve_axis(args.axis, args.n, args.u, args.a)?;
    let policy = WindowPolicy {
        min_offset: args.min_offset,
        max_offset: args.max_offset,
        points_per_decade: args.points_per_decade,
        ..WindowPolicy::default()
    };
    let kinds = default_measures(args.form.entropy_form());
    let records = refined_profile(axis, args.at, &policy, &kinds)?;
    let mut out = String::new();
    writeln!(
        out,
        "# config: singularity {axis_cfg} at={} form={} min-offset={} max-offset={} points-per-decade={}",
        fmt(args.at), args.form.label(), fmt(args.min_offset), fmt(args.max_offset),
        args.points_per_decade
    )?;
    writeln!(out, "measure,class,side,exponent,r2,notes")?;
    for (idx, kind) in kinds.iter().enumerate() {
        let rep = classify_singularity(&records, idx, args.at, &policy)?;
        let side = match rep.side {
            FitSide::FromBelow => "below",
            FitSide::FromAbove => "above",
            FitSide::Both => "both",
        };
        writeln!(
            out,
            "{},{},{},{},{},\"{}\"",
            kind.name(),
            rep.class,
            side,
            rep.fitted_exponent.map(fmt).unwrap_or_default(),
            rep.fit_r2.map(fmt).unwrap_or_default(),
            rep.notes
        )?;
    }
    Ok(out)
}

fn isocurve(args: &IsocurveArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "# config: isocurve a={} u-min={} u-max={} u-step={}",
        fmt(args.a), fmt(args.u_min), fmt(args.u_max), fmt(args.u_step)
    )?;
    writeln!(out, "u,n")?;
    let mut any = false;
    for u in grid(args.u_min, args.u_max, args.u_step, "u")? {
        // The curve only exists inside the mixed phase; skip the rest.
        if let Ok(n) = model::iso_correlation_curve(args.a, u) {
            writeln!(out, "{},{}", fmt(u), fmt(n))?;
            any = true;
        }
    }
    if !any {
        bail!("no point of the requested u range lies inside the mixed phase");
    }
    Ok(out)
}

fn oracle_verify(args: &OracleVerifyArgs) -> anyhow::Result<(String, i32)> {
    if !(args.tol > 0.0) || !args.tol.is_finite() {
        bail!("--tol must be a positive scale factor, got {}", args.tol);
    }
    let rows = verify::run_all(args.tol)?;
    let mut out = String::new();
    writeln!(out, "# config: oracle-verify tol={}", fmt(args.tol))?;
    writeln!(out, "name,status,deviation,tolerance,detail")?;
    let mut failed = false;
    for row in &rows {
        failed |= row.status == verify::CheckStatus::Fail;
        writeln!(
            out,
            "{},{},{},{},\"{}\"",
            row.name,
            row.status,
            fmt(row.deviation),
            if row.tolerance.is_finite() { fmt(row.tolerance) } else { String::new() },
            row.detail
        )?;
    }
    Ok((out, if failed { 2 } else { 0 }))
}
