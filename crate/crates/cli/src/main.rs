mod args;
mod config;
mod output;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use num_complex::Complex;
use serde_json::Value;

use args::{Cli, Command, RunArgs, ScheduleArg, Suite};
use szego_core::lab::{make_schedule, zero_distribution_report_ap, ScheduleKind};
use szego_core::potential::{discretize_mu_r, log_potential, weighted_leja, DEFAULT_LEJA_GRID_FACTOR};
use szego_core::roots::find_roots_ap;
use szego_core::{monic_rescaled, trace_level_curve, with_precision, Ap, LaguerreSpec, Level, Precision, Real};

/// Failures that map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn main() -> ExitCode {
    let raw: Vec<_> = std::env::args_os().collect();
    let argv = match config::expand_args(raw) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let is_usage = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<szego_core::Error>(),
                    Some(szego_core::Error::Config(_))
                );
            ExitCode::from(if is_usage { 2 } else { 1 })
        }
    }
}

const DEFAULT_BITS: u32 = 128;
const EXPERIMENT_BITS: u32 = 512;
const DEFAULT_CURVE_NODES: usize = 1024;
const DEFAULT_MEASURE_NODES: usize = 4096;

fn precision(run: &RunArgs, default_bits: u32) -> Result<Precision> {
    let bits = run.precision.unwrap_or(default_bits);
    Precision::new(bits).map_err(|e| usage(e.to_string()))
}

fn nodes(run: &RunArgs, default: usize) -> Result<usize> {
    let m = run.nodes.unwrap_or(default);
    if m < 16 || !m.is_multiple_of(2) {
        return Err(usage(format!("--nodes must be even and at least 16, got {m}")));
    }
    Ok(m)
}

fn parse_real(s: &str, prec: Precision, what: &str) -> Result<Ap> {
    Ap::parse(s, prec).map_err(|e| usage(format!("--{what}: {e}")))
}

fn parse_level(s: &str, prec: Precision) -> Result<Level<Ap>> {
    let t = s.trim().to_ascii_lowercase();
    if t == "inf" || t == "infinity" {
        return Ok(Level::Infinite);
    }
    let r = parse_real(s, prec, "r")?;
    Level::finite(r).map_err(|e| usage(e.to_string()))
}

fn finite_level(s: &str, prec: Precision) -> Result<Ap> {
    match parse_level(s, prec)? {
        Level::Finite(r) => Ok(r),
        Level::Infinite => Err(usage("this command needs a finite level --r")),
    }
}

fn parse_point(s: &str, prec: Precision) -> Result<Complex<Ap>> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, b),
        None => (s, "0"),
    };
    Ok(Complex::new(parse_real(re, prec, "z")?, parse_real(im, prec, "z")?))
}

fn tolerance(run: &RunArgs, prec: Precision) -> Result<Ap> {
    match &run.tol {
        Some(t) => {
            let v = parse_real(t, prec, "tol")?;
            if v <= Ap::with_prec(0.0, prec) {
                return Err(usage("--tol must be positive"));
            }
            Ok(v)
        }
        None => Ok(with_precision(prec, szego_core::roots::default_tolerance::<Ap>)),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let run = cli.run;
    match cli.command {
        Command::Zeros { n, alpha } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let prec = precision(&run, Precision::for_degree(n).bits())?;
            let alpha = parse_real(&alpha, prec, "alpha")?;
            let tol = tolerance(&run, prec)?;
            let zs = with_precision(prec, || -> Result<_> {
                let spec = LaguerreSpec::contracted(n, alpha)?;
                let poly = monic_rescaled(&spec)?;
                Ok(find_roots_ap(&poly, prec.bits(), &tol)?)
            })?;
            output::emit(run.out.as_deref(), &output::zeros_csv(&zs, prec.decimal_digits()))?;
            Ok(true)
        }
        Command::Curve { r } => {
            let prec = precision(&run, DEFAULT_BITS)?;
            let m = nodes(&run, DEFAULT_CURVE_NODES)?;
            let text = with_precision(prec, || -> Result<_> {
                match parse_level(&r, prec)? {
                    Level::Infinite => Ok("theta,re,im\n0,0,0\n".to_string()),
                    Level::Finite(r) => Ok(output::curve_csv(&trace_level_curve(&r, m)?, prec.decimal_digits())),
                }
            })?;
            output::emit(run.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Measure { r } => {
            let prec = precision(&run, DEFAULT_BITS)?;
            let m = nodes(&run, DEFAULT_MEASURE_NODES)?;
            let text = with_precision(prec, || -> Result<_> {
                let mu = discretize_mu_r(&parse_level(&r, prec)?, m)?;
                let rows: Vec<_> = mu.points.into_iter().zip(mu.weights).collect();
                Ok(output::points_csv("re,im,weight", &rows, prec.decimal_digits()))
            })?;
            output::emit(run.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Potential { r, z } => {
            let prec = precision(&run, DEFAULT_BITS)?;
            let m = nodes(&run, DEFAULT_MEASURE_NODES)?;
            let text = with_precision(prec, || -> Result<_> {
                let mu = discretize_mu_r(&parse_level(&r, prec)?, m)?;
                let mut rows = Vec::new();
                for s in &z {
                    let p = parse_point(s, prec)?;
                    let v = log_potential(&mu, &p)?;
                    rows.push((p, v));
                }
                Ok(output::points_csv("re,im,potential", &rows, prec.decimal_digits()))
            })?;
            output::emit(run.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Verify { suite, r } => verify(&run, suite, &r),
        Command::Leja { r, count, grid } => {
            if count == 0 {
                return Err(usage("--count must be at least 1"));
            }
            let grid = grid.unwrap_or(DEFAULT_LEJA_GRID_FACTOR * count);
            if grid < 8 * count || grid % 2 != 0 || grid < 16 {
                return Err(usage("--grid must be even, at least 16 and at least 8 * count"));
            }
            let prec = precision(&run, DEFAULT_BITS)?;
            let digits = prec.decimal_digits();
            let (text, summary) = with_precision(prec, || -> Result<_> {
                let r = finite_level(&r, prec)?;
                let leja = weighted_leja(&r, count, grid)?;
                let mut s = String::from("theta,re,im\n");
                for (t, z) in leja.thetas.iter().zip(&leja.measure.points) {
                    s.push_str(&format!(
                        "{},{},{}\n",
                        t.to_decimal(digits),
                        z.re.to_decimal(digits),
                        z.im.to_decimal(digits)
                    ));
                }
                let mut m = serde_json::Map::new();
                m.insert("count".into(), Value::from(count));
                m.insert("grid".into(), Value::from(grid));
                m.insert("sup_norm".into(), output::number(&leja.sup_norm, digits));
                m.insert("robin_estimate".into(), output::number(&leja.robin_estimate, digits));
                Ok((s, Value::Object(m)))
            })?;
            match &run.out {
                Some(p) => {
                    output::write_atomic(p, text.as_bytes())?;
                    print!("{}", output::to_pretty(&summary));
                }
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Experiment {
            fig,
            schedule,
            param,
            degrees,
        } => {
            let dir = run.out.clone().unwrap_or_else(|| PathBuf::from("."));
            match (fig, schedule) {
                (Some(f), _) => figure(&run, f, &dir),
                (None, Some(kind)) => schedule_run(&run, kind, param.as_deref(), &degrees, &dir),
                (None, None) => Err(usage("experiment needs --fig or --schedule")),
            }
        }
    }
}

fn verify(run: &RunArgs, suite: Suite, r: &str) -> Result<bool> {
    let prec = precision(run, DEFAULT_BITS)?;
    let m = nodes(run, DEFAULT_MEASURE_NODES)?;
    let checks = with_precision(prec, || -> Result<_> {
        match suite {
            Suite::Lemma1 => suites::measure_identities(&parse_level(r, prec)?, m),
            Suite::Balayage => suites::balayage(&finite_level(r, prec)?, m),
            Suite::Robin => suites::robin(&finite_level(r, prec)?),
            Suite::LaguerreIdentities => suites::laguerre_identities(),
        }
    })?;
    let mut text = String::new();
    for c in &checks {
        text.push_str(&c.line());
        text.push('\n');
    }
    print!("{text}");
    if let Some(p) = &run.out {
        let mut csv = String::from("check,value,tolerance,pass\n");
        for c in &checks {
            csv.push_str(&format!("\"{}\",{:e},{:e},{}\n", c.name, c.value, c.tolerance, c.pass));
        }
        output::write_atomic(p, csv.as_bytes())?;
    }
    Ok(checks.iter().all(|c| c.pass))
}

/// Zeros, curves and report for one `(n, α)`, written under `dir` with
/// the given file stem.
fn overlay(run: &RunArgs, n: usize, alpha: &str, stem: &str, dir: &Path, with_szego: bool) -> Result<Value> {
    let prec = precision(run, EXPERIMENT_BITS.max(Precision::for_degree(n).bits()))?;
    let m = nodes(run, DEFAULT_CURVE_NODES)?;
    let digits = prec.decimal_digits();
    let alpha = parse_real(alpha, prec, "alpha")?;
    let rep = zero_distribution_report_ap(n, &alpha, m, prec.bits())?;
    output::write_atomic(
        &dir.join(format!("{stem}_zeros.csv")),
        output::zeros_csv(&rep.zeros, digits).as_bytes(),
    )?;
    with_precision(prec, || -> Result<()> {
        let curve = trace_level_curve(&rep.r_eff, m)?;
        output::write_atomic(
            &dir.join(format!("{stem}_curve_reff.csv")),
            output::curve_csv(&curve, digits).as_bytes(),
        )?;
        if with_szego {
            let szego = trace_level_curve(&Ap::with_prec(0.0, prec), m)?;
            output::write_atomic(
                &dir.join(format!("{stem}_curve_r0.csv")),
                output::curve_csv(&szego, digits).as_bytes(),
            )?;
        }
        Ok(())
    })?;
    let json = output::report_json(&rep, digits);
    output::write_atomic(
        &dir.join(format!("{stem}_report.json")),
        output::to_pretty(&json).as_bytes(),
    )?;
    Ok(json)
}

fn figure(run: &RunArgs, fig: u8, dir: &Path) -> Result<bool> {
    match fig {
        1 => {
            let prec = precision(run, DEFAULT_BITS)?;
            let m = nodes(run, DEFAULT_CURVE_NODES)?;
            let text = with_precision(prec, || -> Result<_> {
                let c = trace_level_curve(&Ap::with_prec(0.0, prec), m)?;
                Ok(output::curve_csv(&c, prec.decimal_digits()))
            })?;
            output::write_atomic(&dir.join("fig1_szego_curve.csv"), text.as_bytes())?;
        }
        2 => {
            let json = overlay(run, 60, "-60.1", "fig2", dir, true)?;
            print!("{}", output::to_pretty(&json));
        }
        3 => {
            let json = overlay(run, 60, "-59.99999", "fig3", dir, false)?;
            print!("{}", output::to_pretty(&json));
        }
        _ => bail!(usage("--fig must be 1, 2 or 3")),
    }
    Ok(true)
}

fn schedule_run(run: &RunArgs, kind: ScheduleArg, param: Option<&str>, degrees: &[usize], dir: &Path) -> Result<bool> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(usage("--degrees must list positive integers"));
    }
    let m = nodes(run, DEFAULT_CURVE_NODES)?;
    let name = match kind {
        ScheduleArg::Generic => "generic",
        ScheduleArg::Exponential => "exponential",
        ScheduleArg::Superexponential => "superexponential",
    };
    let mut all = Vec::new();
    for &n in degrees {
        // parameters are parsed at 64 bits to size the precision, then again
        let sizing = Precision::new(64)?;
        let kind_at = |prec: Precision| -> Result<ScheduleKind<Ap>> {
            let need =
                |what: &str| param.ok_or_else(|| usage(format!("--param ({what}) is required for this schedule")));
            Ok(match kind {
                ScheduleArg::Generic => ScheduleKind::Generic {
                    c: parse_real(need("c")?, prec, "param")?,
                },
                ScheduleArg::Exponential => ScheduleKind::Exponential {
                    r: parse_real(need("r")?, prec, "param")?,
                },
                ScheduleArg::Superexponential => ScheduleKind::Superexponential,
            })
        };
        let required = make_schedule(kind_at(sizing)?)
            .map_err(|e| usage(e.to_string()))?
            .required_bits(n);
        let prec = precision(run, required.max(EXPERIMENT_BITS))?;
        let prec = Precision::new(prec.bits().max(required))?;
        let alpha = with_precision(prec, || -> Result<Ap> {
            let s = make_schedule(kind_at(prec)?).map_err(|e| usage(e.to_string()))?;
            Ok(s.alpha(n)?)
        })?;
        let rep = zero_distribution_report_ap(n, &alpha, m, prec.bits())
            .with_context(|| format!("{name} schedule at n = {n}"))?;
        let json = output::report_json(&rep, prec.decimal_digits());
        output::write_atomic(
            &dir.join(format!("schedule_{name}_n{n}.json")),
            output::to_pretty(&json).as_bytes(),
        )?;
        output::write_atomic(
            &dir.join(format!("schedule_{name}_n{n}_zeros.csv")),
            output::zeros_csv(&rep.zeros, prec.decimal_digits()).as_bytes(),
        )?;
        all.push(json);
    }
    print!("{}", output::to_pretty(&Value::Array(all)));
    Ok(true)
}
