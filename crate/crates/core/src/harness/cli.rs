//! `surfspline` command line.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 on numerical failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    compare_bounds, moment_constants, moment_inequality_check, new_constants, LambdaPolicy,
    NewBoundConstants,
};
use crate::error::{Error, Result};
use crate::interpolant::{fit, CenterSet};
use crate::kernel::{sqrt_factorial_inequality_check, KernelParams};
use crate::polyinterp::{lebesgue_max_estimate, LagrangeInterpolator};
use crate::simplex::{binomial, equally_spaced_nodes, regular_simplex};

use super::io::{fmt_f64, read_query_csv, read_sample_csv, write_compare_csv, write_convergence_csv};
use super::{fit_decay, nonincreasing_with_slack, run_convergence, ExperimentConfig};

#[derive(Debug, Parser)]
#[command(name = "surfspline", version, about = "Shifted surface spline interpolation and error-bound constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Policy {
    Fixed,
    Track,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the bound constants for one kernel.
    Constants {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        b0: f64,
        #[arg(long, default_value_t = 1.0)]
        l_const: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Old versus new bound base over a range of even dimensions, as CSV.
    Compare {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        lambda: usize,
        #[arg(long, value_enum, default_value_t = Policy::Fixed)]
        lambda_policy: Policy,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        b0: f64,
        #[arg(long, default_value_t = 1.0)]
        l_const: f64,
    },
    /// Sampled maximum of the Lebesgue function on a regular simplex.
    Lebesgue {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 60)]
        resolution: usize,
    },
    /// Run a convergence experiment from a JSON config.
    Converge {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report_fill_distance: bool,
    },
    /// Fit a spline to CSV samples and evaluate it at query points.
    Interp {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        l_const: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the inequality and reproduction self-checks.
    Check,
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct ConstantsReport {
    #[serde(flatten)]
    constants: NewBoundConstants,
    ln_omega_prime: f64,
    log10_one_minus_omega_prime: f64,
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Constants {
            n,
            lambda,
            c,
            b0,
            l_const,
            format,
        } => {
            let params = KernelParams::with_fourier_constant(n, lambda, c, l_const)?;
            let consts = new_constants(&params, b0)?;
            let mut out = io::stdout().lock();
            match format {
                Format::Json => {
                    let report = ConstantsReport {
                        constants: consts,
                        ln_omega_prime: consts.omega_prime.ln(),
                        log10_one_minus_omega_prime: consts.log10_one_minus_omega_prime(),
                    };
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
                Format::Table => {
                    let mc = consts.moments;
                    let rows: [(&str, String); 14] = [
                        ("n", n.to_string()),
                        ("lambda", lambda.to_string()),
                        ("m", consts.m.to_string()),
                        ("c", c.to_string()),
                        ("l_const", l_const.to_string()),
                        ("b0", b0.to_string()),
                        ("case", mc.case_label.label().to_string()),
                        ("s", mc.s.to_string()),
                        ("rho", fmt_f64(mc.rho)),
                        ("delta0_const", fmt_f64(mc.delta0_const)),
                        ("C", fmt_f64(consts.c_const)),
                        ("delta_max", fmt_f64(consts.delta_max)),
                        ("omega_prime", fmt_f64(consts.omega_prime)),
                        ("c1", fmt_f64(consts.c1)),
                    ];
                    for (k, v) in rows {
                        writeln!(out, "{k:<14}{v}")?;
                    }
                }
            }
            Ok(())
        }
        Command::Compare {
            n_min,
            n_max,
            lambda,
            lambda_policy,
            c,
            b0,
            l_const,
        } => {
            if n_max < n_min {
                return Err(Error::InvalidParameter(format!(
                    "n-max {n_max} is below n-min {n_min}"
                )));
            }
            let ns: Vec<usize> = (n_min.max(2)..=n_max).filter(|n| n % 2 == 0).collect();
            if ns.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "no even dimension in [{n_min}, {n_max}]"
                )));
            }
            let policy = match lambda_policy {
                Policy::Fixed => LambdaPolicy::Fixed,
                Policy::Track => LambdaPolicy::Track,
            };
            let base = KernelParams::with_fourier_constant(ns[0], lambda, c, l_const)?;
            let rows = compare_bounds(&base, b0, &ns, policy)?;
            write_compare_csv(open_output(None)?, &rows)
        }
        Command::Lebesgue { n, k, resolution } => {
            let s = regular_simplex(n, 1.0)?;
            let est = lebesgue_max_estimate(&s, k, resolution)?;
            let mut out = io::stdout().lock();
            writeln!(out, "n={n} k={k} resolution={resolution}")?;
            writeln!(out, "lebesgue_max={}", fmt_f64(est))?;
            writeln!(out, "binomial_bound={}", fmt_f64(binomial(2 * k - 1, k)))?;
            Ok(())
        }
        Command::Converge {
            config,
            output,
            report_fill_distance,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = ExperimentConfig::from_json(&text)?;
            let run = run_convergence(&cfg)?;
            let decay = fit_decay(&run.records);
            let mut meta = run.metadata();
            match &decay {
                Ok(f) => meta.push(format!(
                    "fit_decay slope={} intercept={} points={} ln_omega_prime={}",
                    f.slope,
                    f.intercept,
                    f.points_used,
                    run.constants.omega_prime.ln()
                )),
                Err(e) => meta.push(format!("fit_decay failed: {e}")),
            }
            for (i, msg) in &run.failures {
                meta.push(format!("row {i} failed: {msg}"));
            }
            if report_fill_distance {
                let list: Vec<String> = run.fill_distances.iter().map(|d| fmt_f64(*d)).collect();
                meta.push(format!("fill_distance={}", list.join(";")));
            }
            let path = output.or_else(|| cfg.output.clone());
            write_convergence_csv(open_output(path.as_ref())?, &meta, &run.records)?;
            let fit = decay?;
            let ln_omega = run.constants.omega_prime.ln();
            eprintln!(
                "slope={:.6} ln(omega')={:.6} rate_ok={} monotone_slack3={}",
                fit.slope,
                ln_omega,
                fit.slope <= ln_omega,
                nonincreasing_with_slack(&run.records, 3.0)
            );
            Ok(())
        }
        Command::Interp {
            data,
            query,
            lambda,
            c,
            l_const,
            output,
        } => {
            let samples = read_sample_csv(File::open(&data)?)?;
            let (qcols, queries) = read_query_csv(File::open(&query)?)?;
            let n = samples.dim();
            if qcols.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: qcols.len(),
                });
            }
            let params = KernelParams::with_fourier_constant(n, lambda, c, l_const)?;
            let centers = CenterSet::new(samples.points.clone())?;
            let spline = fit(&params, &centers, &samples.values)?;
            eprintln!(
                "fitted {} centers, condition estimate {:e}, method {:?}",
                centers.len(),
                spline.condition_estimate(),
                spline.method()
            );
            let mut w = csv::Writer::from_writer(open_output(output.as_ref())?);
            let mut header = qcols.clone();
            header.push("value".into());
            header.push("bound".into());
            w.write_record(&header)?;
            for q in &queries {
                let v = spline.evaluate(q)?;
                let mut row: Vec<String> = q.iter().map(|x| fmt_f64(*x)).collect();
                row.push(fmt_f64(v));
                row.push("NA".into());
                w.write_record(&row)?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Check => {
            let results = self_checks();
            let mut out = io::stdout().lock();
            let mut failed = Vec::new();
            for (name, outcome) in &results {
                match outcome {
                    Ok(()) => writeln!(out, "ok    {name}")?,
                    Err(e) => {
                        writeln!(out, "FAIL  {name}: {e}")?;
                        failed.push(*name);
                    }
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Error::CheckFailed(failed.join(", ")))
            }
        }
    }
}

fn self_checks() -> Vec<(&'static str, Result<()>)> {
    vec![
        ("sqrt factorial inequality, k = 1..300", check_factorial()),
        ("moment inequality grid", check_moments()),
        ("norming measure reproduction", check_norming()),
    ]
}

fn check_factorial() -> Result<()> {
    match (1..=300u64).find(|&k| !sqrt_factorial_inequality_check(k)) {
        None => Ok(()),
        Some(k) => Err(Error::OutOfRange(format!("fails at k = {k}"))),
    }
}

fn check_moments() -> Result<()> {
    for n in (2..=10).step_by(2) {
        for lambda in (2..=8).step_by(2) {
            moment_constants(n, lambda)?;
            let m = 1 + lambda as u64 / 2;
            for k in (2 * m + 2)..=(2 * m + 60) {
                if !moment_inequality_check(n, lambda, k)? {
                    return Err(Error::OutOfRange(format!(
                        "fails at n = {n}, lambda = {lambda}, k = {k}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn check_norming() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 1..=3 {
        let s = regular_simplex(n, 1.0)?;
        for k in 1..=5 {
            let interp = LagrangeInterpolator::new(equally_spaced_nodes(&s, k)?)?;
            let bound = binomial(2 * k - 1, k);
            for _ in 0..20 {
                let mut w: Vec<f64> = (0..=n).map(|_| rng.random_range(0.01..1.0)).collect();
                let t: f64 = w.iter().sum();
                w.iter_mut().for_each(|v| *v /= t);
                let anchor = s.point_from_barycentric(&w);
                let mu = interp.norming_measure(&anchor)?;
                let res = mu.reproduction_residual();
                let tv = mu.total_variation();
                if res > 1e-9 || tv > bound + 1e-6 {
                    return Err(Error::OutOfRange(format!(
                        "n = {n}, k = {k}: residual {res:e}, total variation {tv} (bound {bound})"
                    )));
                }
            }
        }
    }
    Ok(())
}
