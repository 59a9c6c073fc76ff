use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use serde::Serialize;
use serde_json::json;

use thermowig::analysis::{
    limit_suite, negativity_volume, sample_grid, scan_theta, verify_state, GridSpec, Source,
    Tolerances,
};
use thermowig::export::{fmt_f64, write_grid_csv, write_scan_csv};
use thermowig::fock_oracle::calibration_residual;

mod config;

use config::{
    Cli, Command, EvalArgs, Format, LimitsArgs, NegativityArgs, RunConfig, ScanArgs, SourceArg,
    VerifyArgs,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const CALIBRATION_TOL: f64 = 1e-14;

/// Usage problems exit with 2, numerical failures with 1.
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numerical(format!("{e:#}"))
    }
}

impl From<thermowig::Error> for Failure {
    fn from(e: thermowig::Error) -> Self {
        use thermowig::Error::*;
        match e {
            InvalidParameter { .. }
            | OrderTooLarge { .. }
            | ExcitationTooLarge { .. }
            | DegenerateState(_)
            | ZeroTemperatureThermoNumber
            | InvalidGrid(_)
            | BoxTooSmall { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn check_calibration() -> Result<(), Failure> {
    let residual = calibration_residual();
    if residual > CALIBRATION_TOL {
        return Err(Failure::Numerical(format!(
            "oracle calibration failed: |W_vacuum(0) - 1/pi| = {residual:e}"
        )));
    }
    Ok(())
}

fn eval(args: &EvalArgs) -> Result<(), Failure> {
    let state = args.state.resolve()?;
    let grid = GridSpec::square(args.half_width, args.res as usize);
    grid.validate()?;
    let source = match args.source {
        SourceArg::Closed => Source::ClosedForm,
        SourceArg::Oracle => {
            check_calibration()?;
            Source::Oracle
        }
    };
    let sampled = sample_grid(&state, grid, source)?;
    match args.format {
        Format::Csv => {
            let mut out = open_output(args.output.as_deref())?;
            write_grid_csv(&sampled, &mut out).context("writing grid")?;
            out.flush().context("writing grid")?;
        }
        Format::Json => write_json(
            &json!({
                "tool": "thermowig",
                "version": VERSION,
                "config": RunConfig { command: "eval", args },
                "grid": sampled,
            }),
            args.output.as_deref(),
        )?,
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let state = args.state.resolve()?;
    let mut grid = GridSpec::default_for(state.family);
    if let Some(b) = args.half_width {
        grid = GridSpec::square(b, grid.nq);
    }
    if let Some(res) = args.res {
        grid.nq = res as usize;
        grid.np = res as usize;
    }
    grid.validate()?;
    check_calibration()?;
    let report = verify_state(&state, grid, Tolerances::for_family(state.family));
    let pass = report.pass;
    write_json(
        &json!({
            "tool": "thermowig",
            "version": VERSION,
            "config": RunConfig { command: "verify", args },
            "calibration_residual": calibration_residual(),
            "report": report,
        }),
        args.output.as_deref(),
    )?;
    Ok(pass)
}

fn negativity(args: &NegativityArgs) -> Result<(), Failure> {
    let state = args.state.resolve()?;
    if !(args.spacing.is_finite() && args.spacing > 0.0) {
        return Err(Failure::Usage("--spacing must be > 0".into()));
    }
    let grid = sample_grid(
        &state,
        GridSpec::auto_for(&state, args.spacing),
        Source::ClosedForm,
    )?;
    let vol = negativity_volume(&grid)?;
    println!("{}", fmt_f64(vol));
    Ok(())
}

fn limits(args: &LimitsArgs) -> Result<bool, Failure> {
    let checks = limit_suite();
    let pass = checks.iter().all(|c| c.pass);
    match args.format {
        Format::Json => write_json(
            &json!({ "tool": "thermowig", "version": VERSION, "pass": pass, "checks": checks }),
            None,
        )?,
        Format::Csv => {
            println!("name,max_abs_diff,tolerance,pass");
            for c in &checks {
                println!(
                    "{},{},{},{}",
                    c.name,
                    fmt_f64(c.max_abs_diff),
                    fmt_f64(c.tolerance),
                    c.pass
                );
            }
        }
    }
    Ok(pass)
}

fn scan(args: &ScanArgs) -> Result<(), Failure> {
    let valid = args.theta_min.is_finite()
        && args.theta_max.is_finite()
        && 0.0 <= args.theta_min
        && args.theta_min < args.theta_max
        && args.spacing > 0.0;
    if !valid {
        return Err(Failure::Usage(
            "need 0 <= --theta-min < --theta-max and --spacing > 0".into(),
        ));
    }
    let rows = scan_theta(args.family.into(), args.n, &args.thetas(), args.spacing)?;
    let mut out = open_output(args.output.as_deref())?;
    write_scan_csv(&rows, &mut out).context("writing scan")?;
    out.flush().context("writing scan")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(a) => eval(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Negativity(a) => negativity(a).map(|_| true),
        Command::Limits(a) => limits(a),
        Command::ScanTheta(a) => scan(a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("{}", json!({ "status": "error", "reason": msg }));
            ExitCode::from(1)
        }
    }
}
