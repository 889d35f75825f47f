//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::FRAC_PI_2;
use std::process::Command;
use std::time::{Duration, Instant};

use nusamp::genfun::GeneratingFunction;
use nusamp::harness::{sweep, ExperimentConfig, SweepReport};
use nusamp::oracle::{boundary_layer_check, hm_landscape, laplace_asymptotic_check, residue_check, side_bound_check, ContourSpec};
use nusamp::reconstruction::{plan, Reconstructor};
use nusamp::regularizers::{make_regularizer, RegularizerKind};
use nusamp::sequences::{make_perturbed, make_uniform, SamplingSequence};
use nusamp::signals::Signal;
use nusamp::{genfun::ProductWindow, Complex64};

const N_LIST: &str = "[5,7,9,11,13,15,17,19,21,23,25,27,29,31,33,35]";
const PERTURBED_SEED: u64 = 20240601;

fn config(sequence: &str, regularizer: &str) -> ExperimentConfig {
    let text = format!(
        r#"{{"sequence": {sequence}, "signal": {{"kind": "sinc_sigma", "sigma": {FRAC_PI_2}}},
            "regularizer": {regularizer}, "N_list": {N_LIST}, "grid_points": 512, "seed": {PERTURBED_SEED},
            "fit": {{"free_exponent": true}}}}"#
    );
    ExperimentConfig::from_json(&text).expect("acceptance config is valid")
}

fn single_threaded<T: Send>(job: impl FnOnce() -> T + Send) -> (T, Duration) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    let start = Instant::now();
    let out = pool.install(job);
    (out, start.elapsed())
}

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn report(o: &Outcome) {
    println!("criterion {:>2} [{}] {}: {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
}

fn rate(id: usize, name: &'static str, r: &nusamp::Result<SweepReport>, secs: f64, gate: impl Fn(&SweepReport) -> bool, limit: f64) -> Outcome {
    match r {
        Ok(rep) => Outcome {
            id,
            name,
            pass: gate(rep) && secs < limit,
            detail: format!(
                "slope {:.6} vs {:.6} (rel. dev. {:.3}), {} fitted rows, {:.1}s",
                rep.fitted_slope,
                rep.predicted_slope,
                rep.slope_rel_dev,
                rep.rows.iter().filter(|r| !r.at_floor).count(),
                secs
            ),
        },
        Err(e) => Outcome { id, name, pass: false, detail: format!("sweep failed: {e}") },
    }
}

struct OracleCase {
    label: String,
    seq: SamplingSequence,
    kind: RegularizerKind,
    z: Complex64,
}

fn oracle_cases() -> Vec<OracleCase> {
    let mut cases = Vec::new();
    for (sname, seq) in [("uniform", make_uniform()), ("perturbed", make_perturbed(0.2, PERTURBED_SEED).unwrap())] {
        for (rname, kind) in [("gaussian", RegularizerKind::Gaussian), ("m=2", RegularizerKind::HyperGaussian { m: 2 })] {
            for z in [Complex64::new(0.3, 0.0), Complex64::new(0.3, 0.2)] {
                cases.push(OracleCase { label: format!("{sname}/{rname}/z={z}"), seq: seq.clone(), kind, z });
            }
        }
    }
    cases
}

fn main() {
    let mut outcomes = Vec::new();

    let c1 = config(r#"{"kind": "uniform"}"#, r#"{"kind": "gaussian"}"#);
    let (r1, t1) = single_threaded(|| sweep(&c1));
    outcomes.push(rate(1, "Gaussian rate, uniform", &r1, t1.as_secs_f64(), |r| r.slope_rel_dev <= 0.15, 60.0));

    let c2 = config(r#"{"kind": "uniform"}"#, r#"{"kind": "hyper_gaussian", "m": 2}"#);
    let (r2, t2) = single_threaded(|| sweep(&c2));
    outcomes.push(rate(2, "hyper-Gaussian rate (m=2)", &r2, t2.as_secs_f64(), |r| r.slope_rel_dev <= 0.15, 60.0));

    let c3 = config(
        r#"{"kind": "sine_type", "A": 1.0, "g": [{"coefficient": 0.3, "frequency": 1.0}]}"#,
        r#"{"kind": "gaussian"}"#,
    );
    let (r3, t3) = single_threaded(|| sweep(&c3));
    let eta_gate = -0.9 * std::f64::consts::PI / 4.0;
    outcomes.push(rate(3, "sine-type rate", &r3, t3.as_secs_f64(), |r| r.fitted_slope <= eta_gate, 60.0));

    let c4 = config(r#"{"kind": "perturbed", "L": 0.2}"#, r#"{"kind": "gaussian"}"#);
    let (r4, t4) = single_threaded(|| sweep(&c4));
    let mut o4 = rate(4, "perturbed rate (L=0.2)", &r4, t4.as_secs_f64(), |r| r.slope_rel_dev <= 0.15, 60.0);
    if let Ok(Some(fe)) = r4.as_ref().map(|r| r.free_exponent) {
        o4.detail.push_str(&format!("; free-exponent fit: exponent {:.3}", fe.exponent));
    }
    outcomes.push(o4);

    let o5 = match (&r1, &r3) {
        (Ok(a), Ok(b)) => {
            let checked: usize = [a, b]
                .iter()
                .map(|r| r.rows.iter().filter(|row| !row.at_floor).count() * c1.grid_points)
                .sum();
            Outcome {
                id: 5,
                name: "bound dominance",
                pass: a.dominance_enforced && b.dominance_enforced && a.dominance_violations + b.dominance_violations == 0,
                detail: format!(
                    "{} violations (uniform), {} (sine-type) over {checked} grid points in non-floor rows",
                    a.dominance_violations, b.dominance_violations
                ),
            }
        }
        _ => Outcome { id: 5, name: "bound dominance", pass: false, detail: "sweeps failed".into() },
    };
    outcomes.push(o5);

    let f = Signal::cos(FRAC_PI_2).unwrap();
    let cases = oracle_cases();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut side_violations = 0usize;
    let mut failures = Vec::new();
    let mut residuals = Vec::new();
    for case in &cases {
        let gf = GeneratingFunction::new(&case.seq, ProductWindow::auto(3));
        let p = plan(&gf, 3).unwrap();
        let reg = make_regularizer(case.kind, f.sigma(), p.n_star).unwrap();
        let contour = ContourSpec::from_plan(&p, 0.0, 1e-10).unwrap();
        match residue_check(&f, &gf, &p, &reg, case.z, &contour) {
            Ok(chk) => worst = worst.max(chk.rel_deviation),
            Err(e) => failures.push(format!("{}: {e}", case.label)),
        }
        match side_bound_check(&f, &gf, &p, &reg, case.z, &contour) {
            Ok(chk) => side_violations += chk.violations(),
            Err(e) => failures.push(format!("{}: {e}", case.label)),
        }
        let r = Reconstructor::new(&f, &gf, &p, &reg).unwrap();
        residuals.push(
            (-3i64..=3)
                .map(|k| (r.eval(Complex64::new(gf.node(k), 0.0)).re - f.eval_real(gf.node(k))).abs())
                .fold(0.0, f64::max),
        );
    }
    let t6 = start.elapsed().as_secs_f64();
    outcomes.push(Outcome {
        id: 6,
        name: "residue identity",
        pass: failures.is_empty() && worst <= 1e-8 && t6 < 30.0,
        detail: format!("max rel. deviation {worst:.2e} over {} configurations, {t6:.1}s{}", cases.len(), failures.join("; ")),
    });
    outcomes.push(Outcome {
        id: 7,
        name: "side-integral bounds",
        pass: failures.is_empty() && side_violations == 0,
        detail: format!("{side_violations} violations over {} sides", 4 * cases.len()),
    });

    let mut hm_worst = 0.0f64;
    let mut hm_ok = true;
    for m in 2..=10 {
        match hm_landscape(m) {
            Ok(l) => {
                hm_worst = hm_worst.max(l.max_value_mismatch());
                hm_ok &= l.t0_is_global_max() && l.second_derivative_mismatch() <= 1e-6;
            }
            Err(_) => hm_ok = false,
        }
    }
    let lap = laplace_asymptotic_check(2, 200.0);
    let bl = boundary_layer_check(2.0, 1.0, |t| -2.0 * t - t * t, 500.0);
    let (lap_v, bl_v) = (lap.as_ref().copied().unwrap_or(f64::NAN), bl.as_ref().copied().unwrap_or(f64::NAN));
    outcomes.push(Outcome {
        id: 8,
        name: "Laplace suite",
        pass: hm_ok && hm_worst <= 1e-12 && (0.95..=1.05).contains(&lap_v) && (0.98..=1.02).contains(&bl_v),
        detail: format!("h_m closed-form mismatch {hm_worst:.1e} (m=2..10), Laplace ratio {lap_v:.6}, boundary-layer ratio {bl_v:.6}"),
    });

    let sweep_residual = [&r1, &r2, &r3, &r4]
        .iter()
        .map(|r| r.as_ref().map_or(f64::INFINITY, |r| r.interpolation_max_residual))
        .fold(0.0, f64::max);
    let oracle_residual = residuals.iter().copied().fold(0.0, f64::max);
    outcomes.push(Outcome {
        id: 9,
        name: "interpolation exactness",
        pass: sweep_residual <= 1e-12 && oracle_residual <= 1e-12,
        detail: format!("max |G_N f(lambda_k) - f(lambda_k)| = {:.1e}", sweep_residual.max(oracle_residual)),
    });

    outcomes.push(determinism());

    for o in &outcomes {
        report(o);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = dir.path().join("sweep.json");
    let text = format!(
        r#"{{"sequence": {{"kind": "perturbed", "L": 0.2, "seed": {PERTURBED_SEED}}},
            "signal": {{"kind": "cos_sigma", "sigma": {FRAC_PI_2}}}, "N_list": [5,9,13,17,21,25], "grid_points": 512}}"#
    );
    std::fs::write(&cfg, text).unwrap();
    let run = |threads: &str, sub: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(sub);
        let status = Command::new(env!("CARGO_BIN_EXE_nusamp"))
            .args(["--threads", threads, "sweep", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("--threads {threads} exited with {}", status.status));
        }
        std::fs::read(out.join("sweep.csv")).map_err(|e| e.to_string())
    };
    let (pass, detail) = match (run("1", "t1"), run("8", "t8")) {
        (Ok(a), Ok(b)) => (a == b, format!("{} bytes, identical: {}", a.len(), a == b)),
        (Err(e), _) | (_, Err(e)) => (false, e),
    };
    Outcome { id: 10, name: "determinism (--threads 1 vs 8)", pass, detail }
}
