use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, SequenceConfig};
use super::fit::{fit_free_exponent, fit_rate, FreeExponentFit};
use crate::bounds::{calibrate_corollary_constant, corollary_bound, gaussian_bound, hyper_rate_bound, theorem_floor};
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::reconstruction::{plan, pointwise_errors, summarize, Reconstructor, ERROR_FLOOR};
use crate::regularizers::{hyper_constants, make_regularizer, RegularizerKind};
use crate::sequences::{validate, SamplingSequence, ValidationReport};
use crate::signals::Signal;

/// Which bound fills the `bound` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Gaussian theorem bound with the numerically computed contour floor.
    Theorem,
    /// Corollary bound with `p = 4L` and `C` calibrated at the first `N`.
    CalibratedCorollary,
    /// Hyper-Gaussian rate shape `e^{-mu_m N_*} / sqrt(N_*)`; not a bound.
    RateShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N_star")]
    pub n_star: f64,
    pub max_error: f64,
    /// Largest pointwise bound over the grid.
    pub bound: f64,
    pub at_floor: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowDetail {
    #[serde(rename = "N")]
    pub n: usize,
    pub argmax: f64,
    pub phi_floor: Option<f64>,
    /// Grid points above the round-off floor where the bound is exceeded.
    pub dominance_violations: usize,
    /// `max_{|k| <= N} |G_N f(lambda_k) - f(lambda_k)|`.
    pub interpolation_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub fitted_slope: f64,
    pub fitted_intercept: f64,
    pub predicted_slope: f64,
    pub slope_rel_dev: f64,
    pub free_exponent: Option<FreeExponentFit>,
    pub bound_kind: BoundKind,
    pub corollary_constant: Option<f64>,
    pub dominance_enforced: bool,
    pub dominance_violations: usize,
    pub monotone_violations: usize,
    pub monotone_ok: bool,
    pub interpolation_max_residual: f64,
    pub details: Vec<RowDetail>,
}

impl SweepReport {
    /// Dominance holds wherever it is asserted.
    pub fn dominance_ok(&self) -> bool {
        !self.dominance_enforced || self.dominance_violations == 0
    }

    /// `(N_*, log E + log(N_*)/2)` over rows above the floor.
    pub fn fit_points(&self) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| !r.at_floor)
            .map(|r| (r.n_star, r.max_error.ln() + 0.5 * r.n_star.ln()))
            .collect()
    }
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    seq: SamplingSequence,
    signal: Signal,
    kind: RegularizerKind,
    bound_kind: BoundKind,
    corollary_c: Option<f64>,
    validation: Option<ValidationReport>,
}

/// Evaluate one `N`: measured errors, bounds and interpolation residual.
pub fn sweep_row(cfg: &ExperimentConfig, n: usize) -> Result<(SweepRow, RowDetail)> {
    let ctx = context(cfg)?;
    row(&ctx, n)
}

fn context(cfg: &ExperimentConfig) -> Result<Context<'_>> {
    cfg.validate()?;
    let seq = cfg.build_sequence()?;
    let signal = cfg.build_signal()?;
    let kind = cfg.regularizer_kind();
    let bound_kind = match (kind, &cfg.sequence) {
        (RegularizerKind::HyperGaussian { .. }, _) => BoundKind::RateShape,
        (_, SequenceConfig::Perturbed { .. }) => BoundKind::CalibratedCorollary,
        _ => BoundKind::Theorem,
    };
    let corollary_c = match (bound_kind, cfg.n_list.first()) {
        (BoundKind::CalibratedCorollary, Some(&n0)) => {
            let gf = GeneratingFunction::new(&seq, cfg.m_prod.for_n(n0)?);
            Some(calibrate_corollary_constant(&gf, &plan(&gf, n0)?, cfg.polynomial_exponent())?)
        }
        _ => None,
    };
    let validation = match bound_kind {
        BoundKind::RateShape => {
            let window = cfg.n_list.last().map_or(64, |&n| cfg.m_prod.for_n(n).map_or(64, |w| w.m_prod()));
            Some(validate(&seq, window)?)
        }
        _ => None,
    };
    Ok(Context { cfg, seq, signal, kind, bound_kind, corollary_c, validation })
}

fn row(ctx: &Context<'_>, n: usize) -> Result<(SweepRow, RowDetail)> {
    let f = &ctx.signal;
    let gf = GeneratingFunction::new(&ctx.seq, ctx.cfg.m_prod.for_n(n)?);
    let p = plan(&gf, n)?;
    let reg = make_regularizer(ctx.kind, f.sigma(), p.n_star)?;
    let r = Reconstructor::new(f, &gf, &p, &reg)?;
    let grid = p.error_grid(ctx.cfg.grid_points);
    let errors = pointwise_errors(f, &r, &grid);
    let summary = summarize(&grid, &errors);

    let (bounds, phi_floor): (Vec<f64>, Option<f64>) = match ctx.bound_kind {
        BoundKind::Theorem => {
            let floor = theorem_floor(&gf, &p, 0.0)?;
            let b = grid
                .par_iter()
                .map(|&x| gaussian_bound(f, &gf, &p, Complex64::new(x, 0.0), floor).map(|b| b.bound_value))
                .collect::<Result<Vec<f64>>>()?;
            (b, Some(floor))
        }
        BoundKind::CalibratedCorollary => {
            let c = ctx.corollary_c.expect("calibrated before the sweep");
            let pexp = ctx.cfg.polynomial_exponent();
            let b = grid
                .par_iter()
                .map(|&x| corollary_bound(f, &gf, &p, x, c, pexp))
                .collect::<Result<Vec<f64>>>()?;
            (b, None)
        }
        BoundKind::RateShape => {
            let m = reg.order();
            let report = ctx.validation.as_ref().expect("validated before the sweep");
            (vec![hyper_rate_bound(&p, m, f.sigma(), report)?], None)
        }
    };
    let bound = bounds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dominance_violations = match ctx.bound_kind {
        BoundKind::RateShape => 0,
        _ => errors.iter().zip(&bounds).filter(|(e, b)| **e >= ERROR_FLOOR && !(**e <= **b)).count(),
    };

    let k = n as i64;
    let interpolation_residual = (-k..=k)
        .map(|j| {
            let x = gf.node(j);
            (r.eval(Complex64::new(x, 0.0)).re - f.eval_real(x)).abs()
        })
        .fold(0.0, f64::max);

    Ok((
        SweepRow { n, n_star: p.n_star, max_error: summary.value, bound, at_floor: summary.at_floor },
        RowDetail { n, argmax: summary.at, phi_floor, dominance_violations, interpolation_residual },
    ))
}

/// Run every `N` of the config, then fit and check the results.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    if cfg.n_list.is_empty() {
        return Err(Error::Config("N_list must not be empty for a sweep".into()));
    }
    let ctx = context(cfg)?;
    let results: Vec<(SweepRow, RowDetail)> = cfg.n_list.par_iter().map(|&n| row(&ctx, n)).collect::<Result<_>>()?;
    let (rows, details): (Vec<SweepRow>, Vec<RowDetail>) = results.into_iter().unzip();

    let sigma = ctx.signal.sigma();
    let predicted_slope = match ctx.kind {
        RegularizerKind::Gaussian => -(PI - sigma) / 2.0,
        RegularizerKind::HyperGaussian { m } => -hyper_constants(m, sigma).1,
    };

    let usable: Vec<&SweepRow> = rows.iter().filter(|r| !r.at_floor).collect();
    let points: Vec<(f64, f64)> = usable.iter().map(|r| (r.n_star, r.max_error.ln() + 0.5 * r.n_star.ln())).collect();
    let line = fit_rate(&points)?;
    let free_exponent = if cfg.fit.free_exponent {
        let raw: Vec<(f64, f64)> = usable.iter().map(|r| (r.n_star, r.max_error.ln())).collect();
        Some(fit_free_exponent(&raw)?)
    } else {
        None
    };

    let increases: Vec<f64> = usable.windows(2).filter(|w| w[1].max_error > w[0].max_error).map(|w| w[1].max_error / w[0].max_error).collect();
    let monotone_ok = increases.is_empty() || (increases.len() == 1 && increases[0] <= 1.1);

    let dominance_violations = details.iter().map(|d| d.dominance_violations).sum();
    Ok(SweepReport {
        fitted_slope: line.slope,
        fitted_intercept: line.intercept,
        predicted_slope,
        slope_rel_dev: (line.slope - predicted_slope).abs() / predicted_slope.abs(),
        free_exponent,
        bound_kind: ctx.bound_kind,
        corollary_constant: ctx.corollary_c,
        dominance_enforced: ctx.bound_kind == BoundKind::Theorem,
        dominance_violations,
        monotone_violations: increases.len(),
        monotone_ok,
        interpolation_max_residual: details.iter().map(|d| d.interpolation_residual).fold(0.0, f64::max),
        rows,
        details,
    })
}
