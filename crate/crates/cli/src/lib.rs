//! Command-line front end for the `nusamp` experiments.
//!
//! Exit codes: 0 success, 1 failed check, 2 configuration or usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nusamp::bounds::{gaussian_bound, hyper_rate_bound, theorem_floor};
use nusamp::genfun::GeneratingFunction;
use nusamp::harness::{parse_complex, sweep, write_outputs, ExperimentConfig, SweepReport};
use nusamp::oracle::{laplace_asymptotic_check, residue_check, ContourSpec};
use nusamp::reconstruction::{plan, reconstruct_recentered, Reconstructor, ReconstructionPlan};
use nusamp::regularizers::{make_regularizer, RegularizerKind};
use nusamp::sequences::validate;
use nusamp::{Complex64, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest accepted relative deviation for `verify-residue`.
pub const RESIDUE_GATE: f64 = 1e-8;
/// Accepted ratio range for `verify-laplace`.
pub const LAPLACE_GATE: (f64, f64) = (0.95, 1.05);

#[derive(Debug, Parser)]
#[command(name = "nusamp", version, about = "Regularized nonuniform sampling experiments")]
pub struct Cli {
    /// Worker threads (falls back to NUSAMP_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Experiment configuration (JSON).
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Sample window half-width.
    #[arg(long = "N")]
    pub n: usize,
    /// Evaluation point, e.g. `0.3` or `0.3+0.2i`.
    #[arg(long, value_parser = parse_z, allow_hyphen_values = true)]
    pub z: Complex64,
}

fn parse_z(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convergence sweep over N_list; writes CSV and JSON summary.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate the regularized series at one point.
    Reconstruct {
        #[command(flatten)]
        point: PointArgs,
        /// Re-index the sequence around the node nearest Re z.
        #[arg(long)]
        recenter: bool,
    },
    /// Print `n,lambda_n` for |n| <= count.
    GenerateSequence {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Write `sequence.csv` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the direct error with its contour-integral representation.
    VerifyResidue {
        #[command(flatten)]
        point: PointArgs,
        /// Per-side quadrature tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Laplace-method ratio for `int_0^inf e^{N h_m(t)} dt`.
    VerifyLaplace {
        #[arg(long)]
        m: u32,
        #[arg(long = "N")]
        n: f64,
    },
    /// Error bound at one point.
    Bound {
        #[command(flatten)]
        point: PointArgs,
    },
}

pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

/// Parse `argv` (including the program name) and run, printing to stdout/stderr.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let threads = match resolve_threads(cli.threads, std::env::var("NUSAMP_THREADS").ok()) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_CHECK_FAILED;
        }
    };
    let mut buffer = Vec::new();
    let result = pool.install(|| execute(&cli.command, &mut buffer));
    let _ = out.write_all(&buffer);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// `--threads` wins over the environment; zero is rejected.
pub fn resolve_threads(flag: Option<usize>, env: Option<String>) -> Result<Option<usize>, String> {
    let value = match (flag, env) {
        (Some(k), _) => Some(k),
        (None, Some(s)) if !s.trim().is_empty() => {
            Some(s.trim().parse::<usize>().map_err(|_| format!("NUSAMP_THREADS={s:?} is not a thread count"))?)
        }
        _ => None,
    };
    if value == Some(0) {
        return Err("thread count must be at least 1".into());
    }
    Ok(value)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::ParameterDomain(_)
        | Error::Precondition(_)
        | Error::FitInsufficient { .. }
        | Error::DegenerateFit => EXIT_USAGE,
        Error::RootBracket { .. } | Error::Quadrature { .. } => EXIT_CHECK_FAILED,
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Config(format!("cannot write output: {e}"))
}

struct Prepared {
    cfg: ExperimentConfig,
    gf: GeneratingFunction,
    plan: ReconstructionPlan,
}

fn prepare(config: &ConfigArg, n: usize) -> Result<Prepared, Error> {
    let cfg = ExperimentConfig::from_path(&config.config)?;
    let seq = cfg.build_sequence()?;
    let gf = GeneratingFunction::new(&seq, cfg.m_prod.for_n(n)?);
    let plan = plan(&gf, n)?;
    Ok(Prepared { cfg, gf, plan })
}

fn check_interval(plan: &ReconstructionPlan, z: Complex64) -> Result<(), Error> {
    let (lo, hi) = plan.validity;
    if z.re > lo && z.re < hi {
        Ok(())
    } else {
        Err(Error::Precondition(format!("Re z = {} outside ({lo}, {hi}); use --recenter", z.re)))
    }
}

fn execute(cmd: &Command, out: &mut Vec<u8>) -> Result<i32, Error> {
    match cmd {
        Command::Sweep { config, out: dir } => {
            let cfg = ExperimentConfig::from_path(&config.config)?;
            let report = sweep(&cfg)?;
            let (csv, summary) = write_outputs(&cfg, &report, dir)?;
            print_sweep(out, &report).map_err(io)?;
            writeln!(out, "wrote {} and {}", csv.display(), summary.display()).map_err(io)?;
            Ok(if report.dominance_ok() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Reconstruct { point, recenter } => {
            let cfg = ExperimentConfig::from_path(&point.config.config)?;
            let f = cfg.build_signal()?;
            let z = point.z;
            let value = if *recenter {
                if z.im != 0.0 {
                    return Err(Error::Precondition("--recenter needs a real evaluation point".into()));
                }
                let seq = cfg.build_sequence()?;
                reconstruct_recentered(&f, &seq, point.n, cfg.regularizer_kind(), cfg.m_prod.for_n(point.n)?, z.re)?
            } else {
                let p = prepare(&point.config, point.n)?;
                check_interval(&p.plan, z)?;
                let reg = make_regularizer(cfg.regularizer_kind(), f.sigma(), p.plan.n_star)?;
                Reconstructor::new(&f, &p.gf, &p.plan, &reg)?.eval(z)
            };
            let exact = f.eval(z);
            let line = serde_json::json!({
                "z": [z.re, z.im],
                "value": [value.re, value.im],
                "exact": [exact.re, exact.im],
                "error": (exact - value).norm(),
            });
            writeln!(out, "{line}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::GenerateSequence { config, count, out: dir } => {
            let cfg = ExperimentConfig::from_path(&config.config)?;
            let seq = cfg.build_sequence()?;
            let nodes = seq.nodes(*count);
            let k = *count as i64;
            let mut text = String::from("n,lambda\n");
            for (n, lam) in (-k..=k).zip(nodes) {
                text.push_str(&format!("{n},{lam:.16e}\n"));
            }
            match dir {
                Some(d) => {
                    std::fs::create_dir_all(d).map_err(io)?;
                    std::fs::write(d.join("sequence.csv"), text).map_err(io)?;
                }
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::VerifyResidue { point, tol } => {
            let p = prepare(&point.config, point.n)?;
            let f = p.cfg.build_signal()?;
            let reg = make_regularizer(p.cfg.regularizer_kind(), f.sigma(), p.plan.n_star)?;
            let z = point.z;
            let contour = ContourSpec::from_plan(&p.plan, z.im, *tol)?;
            let chk = residue_check(&f, &p.gf, &p.plan, &reg, z, &contour)?;
            writeln!(out, "direct error:  {:+.16e} {:+.16e}i", chk.direct.re, chk.direct.im).map_err(io)?;
            writeln!(out, "contour error: {:+.16e} {:+.16e}i", chk.contour.re, chk.contour.im).map_err(io)?;
            writeln!(out, "relative deviation: {:.3e}", chk.rel_deviation).map_err(io)?;
            Ok(if chk.rel_deviation <= RESIDUE_GATE { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::VerifyLaplace { m, n } => {
            let ratio = laplace_asymptotic_check(*m, *n)?;
            writeln!(out, "ratio: {ratio:.12}").map_err(io)?;
            Ok(if (LAPLACE_GATE.0..=LAPLACE_GATE.1).contains(&ratio) { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Bound { point } => {
            let p = prepare(&point.config, point.n)?;
            let f = p.cfg.build_signal()?;
            let z = point.z;
            check_interval(&p.plan, z)?;
            let line = match p.cfg.regularizer_kind() {
                RegularizerKind::Gaussian => {
                    let floor = theorem_floor(&p.gf, &p.plan, z.im)?;
                    serde_json::to_string(&gaussian_bound(&f, &p.gf, &p.plan, z, floor)?).expect("serializable")
                }
                RegularizerKind::HyperGaussian { m } => {
                    let report = validate(&p.cfg.build_sequence()?, p.gf.window().m_prod())?;
                    let shape = hyper_rate_bound(&p.plan, m, f.sigma(), &report)?;
                    serde_json::json!({ "rate_shape": shape }).to_string()
                }
            };
            writeln!(out, "{line}").map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn print_sweep(out: &mut dyn Write, r: &SweepReport) -> std::io::Result<()> {
    writeln!(out, "{:>4} {:>8} {:>12} {:>12} floor", "N", "N_star", "max_error", "bound")?;
    for row in &r.rows {
        writeln!(out, "{:>4} {:>8.3} {:>12.4e} {:>12.4e} {}", row.n, row.n_star, row.max_error, row.bound, row.at_floor)?;
    }
    writeln!(
        out,
        "slope {:.6} (predicted {:.6}, rel. dev. {:.3}); dominance violations {}{}",
        r.fitted_slope,
        r.predicted_slope,
        r.slope_rel_dev,
        r.dominance_violations,
        if r.dominance_enforced { "" } else { " (not enforced)" }
    )?;
    if let Some(fe) = r.free_exponent {
        writeln!(out, "free-exponent fit: slope {:.6}, exponent {:.3}", fe.slope, fe.exponent)?;
    }
    Ok(())
}
