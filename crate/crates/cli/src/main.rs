//! `qes`: exact relation checks, spectra, sweeps and cross-checks for the
//! matrix QES operators in `qes-core`.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on bad usage.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qes_core::exactnum::{fmt_rational, parse_rational, to_f64, Rational, Var, DEFAULT_ROOT_TOL};
use qes_core::generators::{Metric, MixSpec};
use qes_core::report::fmt_sig;
use qes_core::spectral::{
    algebraic_spectrum_with_tol, convergence_study, eigenfunctions_y, find_degeneracy, numeric_crosscheck,
    reflection_check, spectral_polynomial, spectral_polynomial_in_c, sweep, write_csv, CrossCheck, FdGrid,
    HamiltonianSpec,
};
use qes_core::verify::{delta4_scan, run_suite, Fault, SuiteConfig, DELTA4_DEFAULT_N};
use qes_core::Error;

/// Reflection symmetry is checked symbolically up to this n.
const REFLECTION_N_MAX: u32 = 6;

#[derive(Parser)]
#[command(name = "qes", version, about = "Exact laboratory for quasi-exactly-solvable matrix operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every commutation relation exactly, plus the reflection symmetry and the delta=4 scan
    Verify(VerifyArgs),
    /// Algebraic spectrum, eigenvector node counts and optionally the characteristic polynomial
    Spectrum(SpectrumArgs),
    /// Characteristic polynomial of the restricted Hamiltonian, symbolic in c or k0
    Charpoly(CharpolyArgs),
    /// Energies on a uniform grid of couplings c, as CSV
    Sweep(SweepArgs),
    /// Coupling where two neighbouring levels come closest
    Degeneracy(DegeneracyArgs),
    /// Compare algebraic levels with a finite-difference solve of the raw operator
    Crosscheck(CrosscheckArgs),
    /// Show that no delta=4 mixing closes linearly
    #[command(name = "delta4-scan")]
    Delta4Scan(Delta4Args),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

/// Exactly one of `--k0` / `--c`, related by `c = -4 n k0`.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Coupling {
    /// Gauge parameter k0 (p/q)
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    k0: Option<Rational>,
    /// Coupling c = -4 n k0 (p/q)
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c: Option<Rational>,
}

impl Coupling {
    fn spec(&self, n: u32) -> qes_core::Result<HamiltonianSpec> {
        match (&self.k0, &self.c) {
            (Some(k0), None) => HamiltonianSpec::new(n, k0.clone()),
            (None, Some(c)) => HamiltonianSpec::from_c(n, c.clone()),
            _ => unreachable!("clap enforces exactly one"),
        }
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|_| format!("expected an exact rational p/q, got {s:?}"))
}

fn fault(s: &str) -> Result<Fault, String> {
    let f: Fault = s.parse().map_err(|e: Error| e.to_string())?;
    match f {
        Fault::Q(k) | Fault::QBar(k) if !(1..=5).contains(&k) => Err(format!("tower index {k} outside 1..=5")),
        _ => Ok(f),
    }
}

fn metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=8))]
    delta_max: u32,
    /// Perturb one generator: T+, T0, T-, J, Q<k> or Qbar<k>
    #[arg(long, value_parser = fault)]
    inject_fault: Option<Fault>,
    /// Sign convention of the invariant form in {F,F} = n² g: standard or killing
    #[arg(long, value_parser = metric, default_value = "standard")]
    metric: Metric,
    /// Print every report, not only failures
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    coupling: Coupling,
    /// Also print the characteristic polynomial symbolically in c
    #[arg(long)]
    charpoly: bool,
    /// Isolation width for irrational eigenvalues
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    root_tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyVar {
    C,
    K0,
}

#[derive(Args)]
struct CharpolyArgs {
    #[arg(long)]
    n: u32,
    /// Parameter the coefficients are written in
    #[arg(long, value_enum, default_value = "c")]
    var: PolyVar,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c_min: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c_max: Rational,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    steps: u64,
    /// Write the |E| branches instead of all signed energies
    #[arg(long)]
    modulus: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DegeneracyArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c_min: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c_max: Rational,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    coupling: Coupling,
    /// Interior grid points
    #[arg(long, default_value_t = 800)]
    grid: usize,
    /// Box half-width L; the grid covers [-L, L]
    #[arg(long = "box", default_value_t = 4.5)]
    half_width: f64,
    /// Largest accepted |algebraic - numeric|
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Repeat at half the spacing and report the error ratio
    #[arg(long)]
    refine: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Delta4Args {
    #[arg(long, default_value_t = DELTA4_DEFAULT_N)]
    n: u32,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "-3")]
    c_min: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "3")]
    c_max: Rational,
    #[arg(long, value_parser = rational, default_value = "1/4")]
    c_step: Rational,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Check,
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidParams(_) | Error::InvalidInterval { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Charpoly(a) => cmd_charpoly(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Degeneracy(a) => cmd_degeneracy(a),
        Command::Crosscheck(a) => cmd_crosscheck(a),
        Command::Delta4Scan(a) => cmd_delta4(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn reject_csv(format: Format) -> Outcome {
    if format == Format::Csv {
        return Err(Failure::Usage("csv output is only available for sweep".into()));
    }
    Ok(())
}

fn write_json(w: &mut dyn Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    reject_csv(a.format)?;
    if a.n_max < a.delta_max.max(2) {
        return Err(Failure::Usage(format!("--n-max must be at least {}", a.delta_max.max(2))));
    }
    let cfg = SuiteConfig {
        n_max: a.n_max,
        delta_max: a.delta_max,
        mix: MixSpec::default(),
        metric: a.metric,
        fault: a.inject_fault,
    };
    let reports = run_suite(&cfg)?;
    let reflections = (2..=a.n_max.min(REFLECTION_N_MAX))
        .map(reflection_check)
        .collect::<qes_core::Result<Vec<_>>>()?;
    let scan = if a.delta_max >= 4 && a.inject_fault.is_none() {
        delta4_scan(a.n_max.min(DELTA4_DEFAULT_N).max(4), &qes_core::verify::default_delta4_grid())?
    } else {
        Vec::new()
    };

    let failed = reports.iter().filter(|r| !r.holds()).count()
        + reflections.iter().filter(|r| !r.holds()).count()
        + scan.iter().filter(|r| r.is_counterexample()).count();
    let mut w = a.output.open()?;
    if a.format == Format::Json {
        write_json(
            &mut w,
            &json!({
                "relations": reports,
                "reflection": reflections,
                "delta4": scan,
                "failed": failed,
            }),
        )?;
    } else {
        for r in &reports {
            if a.all || !r.holds() {
                match &r.note {
                    Some(note) if !r.holds() => writeln!(w, "{}  # {note}", r.line())?,
                    _ => writeln!(w, "{}", r.line())?,
                }
            }
        }
        for r in &reflections {
            if a.all || !r.holds() {
                writeln!(w, "{}", r.line())?;
            }
        }
        for r in &scan {
            if a.all || r.is_counterexample() {
                writeln!(w, "{}", r.line())?;
            }
        }
        writeln!(
            w,
            "summary relations={} reflection={} delta4_points={} failed={failed}",
            reports.len(),
            reflections.len(),
            scan.len()
        )?;
    }
    w.flush()?;
    if failed > 0 {
        return Err(Failure::Check);
    }
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs) -> Outcome {
    reject_csv(a.format)?;
    let spec = a.coupling.spec(a.n)?;
    let s = algebraic_spectrum_with_tol(&spec, a.root_tol)?;
    let funcs = eigenfunctions_y(&s)?;
    let charpoly = if a.charpoly { Some(spectral_polynomial_in_c(a.n)?) } else { None };
    let mut w = a.output.open()?;
    if a.format == Format::Json {
        let levels: Vec<Value> = s
            .levels
            .iter()
            .map(|l| {
                let nodes: Vec<Value> = funcs
                    .iter()
                    .filter(|f| f.energy == l.energy)
                    .map(|f| json!(f.nodes.map(|(t, b)| [t, b])))
                    .collect();
                json!({
                    "energy": l.energy,
                    "exact": l.exact.as_ref().map(fmt_rational),
                    "multiplicity": l.multiplicity,
                    "nodes": nodes,
                })
            })
            .collect();
        let mut v = json!({
            "n": spec.n,
            "k0": fmt_rational(&spec.k0),
            "c": fmt_rational(&spec.c_spec()),
            "eigenvalues": s.energies(),
            "char_poly": s.char_poly.to_string(),
            "levels": levels,
        });
        if let Some(p) = &charpoly {
            v["char_poly_in_c"] = json!(p.to_string());
        }
        write_json(&mut w, &v)?;
    } else {
        writeln!(w, "{}", spec.header())?;
        let e: Vec<String> = s.energies().iter().map(|e| fmt_sig(*e, 12)).collect();
        writeln!(w, "E = {}", e.join(", "))?;
        for f in &funcs {
            let level = s.levels.iter().find(|l| l.energy == f.energy).expect("level of eigenfunction");
            let exact = level.exact.as_ref().map_or("-".to_string(), fmt_rational);
            let nodes = f.nodes.map_or("degenerate".to_string(), |(t, b)| format!("({t},{b})"));
            writeln!(
                w,
                "level E={} exact={exact} multiplicity={} nodes={nodes}",
                fmt_sig(f.energy, 12),
                level.multiplicity
            )?;
        }
        if let Some(p) = &charpoly {
            writeln!(w, "p(λ) = {p}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_charpoly(a: CharpolyArgs) -> Outcome {
    reject_csv(a.format)?;
    let (p, var) = match a.var {
        PolyVar::C => (spectral_polynomial_in_c(a.n)?, Var::C),
        PolyVar::K0 => (spectral_polynomial(a.n)?, Var::K0),
    };
    let mut w = a.output.open()?;
    if a.format == Format::Json {
        let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
        write_json(
            &mut w,
            &json!({
                "n": a.n,
                "variable": var.to_string(),
                "even": p.is_even(),
                "coefficients": coeffs,
                "polynomial": p.to_string(),
            }),
        )?;
    } else {
        writeln!(w, "n={} variable={var}", a.n)?;
        for k in (0..=p.degree()).rev() {
            let c = p.coeff(k);
            if !c.is_zero() {
                writeln!(w, "λ^{k}: {c}")?;
            }
        }
        writeln!(w, "p(λ) = {p}")?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    if a.format == Format::Text {
        return Err(Failure::Usage("sweep writes csv or json".into()));
    }
    let table = sweep(a.n, &a.c_min, &a.c_max, a.steps as usize)?;
    let mut w = a.output.open()?;
    if a.format == Format::Json {
        write_json(&mut w, &serde_json::to_value(&table).map_err(|e| Failure::Runtime(e.to_string()))?)?;
    } else {
        write_csv(&table, &mut w, a.modulus)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_degeneracy(a: DegeneracyArgs) -> Outcome {
    reject_csv(a.format)?;
    let (lo, hi) = (to_f64(&a.c_min), to_f64(&a.c_max));
    let mut w = a.output.open()?;
    match find_degeneracy(a.n, lo, hi) {
        Ok(d) => {
            if a.format == Format::Json {
                write_json(&mut w, &json!({ "degeneracy": d }))?;
            } else {
                writeln!(
                    w,
                    "n={} c*={} gap={} levels=({},{})",
                    d.n,
                    fmt_sig(d.c_star, 12),
                    fmt_sig(d.gap, 6),
                    d.levels.0,
                    d.levels.1
                )?;
            }
        }
        Err(Error::NoInteriorMinimum { .. }) => {
            if a.format == Format::Json {
                write_json(&mut w, &json!({ "degeneracy": null, "n": a.n, "c_min": lo, "c_max": hi }))?;
            } else {
                writeln!(w, "n={} no interior gap minimum in [{lo}, {hi}]: no degeneracy", a.n)?;
            }
        }
        Err(e) => return Err(e.into()),
    }
    w.flush()?;
    Ok(())
}

fn crosscheck_lines(w: &mut dyn Write, label: &str, c: &CrossCheck) -> io::Result<()> {
    writeln!(
        w,
        "{label} grid={} box={} h={}",
        c.grid.points,
        c.grid.half_width,
        fmt_sig(c.grid.spacing(), 6)
    )?;
    for m in &c.matches {
        writeln!(
            w,
            "  E_alg={} E_num={} diff={:.3e}",
            fmt_sig(m.algebraic, 12),
            fmt_sig(m.numeric, 12),
            m.diff
        )?;
    }
    writeln!(w, "  max_diff={:.3e}", c.max_diff)
}

fn cmd_crosscheck(a: CrosscheckArgs) -> Outcome {
    reject_csv(a.format)?;
    if !(a.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let spec = a.coupling.spec(a.n)?;
    let grid = FdGrid::new(a.grid, a.half_width)?;
    let (coarse, fine, ratio) = if a.refine {
        let c = convergence_study(&spec, &grid)?;
        (c.coarse, Some(c.fine), Some(c.ratio))
    } else {
        (numeric_crosscheck(&spec, &grid)?, None, None)
    };
    let pass = coarse.max_diff <= a.tol;
    let mut w = a.output.open()?;
    if a.format == Format::Json {
        write_json(
            &mut w,
            &json!({
                "n": spec.n,
                "k0": fmt_rational(&spec.k0),
                "c": fmt_rational(&spec.c_spec()),
                "crosscheck": coarse,
                "refined": fine,
                "ratio": ratio,
                "tol": a.tol,
                "pass": pass,
            }),
        )?;
    } else {
        writeln!(w, "{}", spec.header())?;
        crosscheck_lines(&mut w, "grid", &coarse)?;
        if let (Some(f), Some(r)) = (&fine, ratio) {
            crosscheck_lines(&mut w, "refined", f)?;
            writeln!(w, "error ratio={r:.4} (4 for second order)")?;
        }
        writeln!(w, "status={} tol={:e}", if pass { "pass" } else { "fail" }, a.tol)?;
    }
    w.flush()?;
    if !pass {
        return Err(Failure::Check);
    }
    Ok(())
}

fn cmd_delta4(a: Delta4Args) -> Outcome {
    reject_csv(a.format)?;
    if a.c_step <= Rational::from_integer(0.into()) || a.c_min > a.c_max {
        return Err(Failure::Usage("need c-min <= c-max and a positive c-step".into()));
    }
    let mut grid = Vec::new();
    let mut c = a.c_min.clone();
    while c <= a.c_max {
        grid.extend(MixSpec::all_signs(&c));
        c += &a.c_step;
    }
    let reports = delta4_scan(a.n, &grid)?;
    let counterexamples = reports.iter().filter(|r| r.is_counterexample()).count();
    let mut w = a.output.open()?;
    if a.format == Format::Json {
        write_json(&mut w, &json!({ "reports": reports, "counterexamples": counterexamples }))?;
    } else {
        for r in &reports {
            writeln!(w, "{}", r.line())?;
        }
        writeln!(w, "summary points={} counterexamples={counterexamples}", reports.len())?;
    }
    w.flush()?;
    if counterexamples > 0 {
        return Err(Failure::Check);
    }
    Ok(())
}
