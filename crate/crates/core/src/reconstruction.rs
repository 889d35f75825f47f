//! Reconstruction plans and the regularized sampling series
//!
//! ```text
//! G_N f(z) = sum_{n=-N}^{N} f(lambda_n) phi_n(z) G_N(z - lambda_n)
//! ```

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genfun::{GeneratingFunction, NodeDerivatives, ProductWindow, Rectangle};
use crate::numeric::ComplexSum;
use crate::regularizers::{make_regularizer, RegularizerKind, RegularizerSpec};
use crate::sequences::SamplingSequence;
use crate::signals::Signal;

/// Measured errors below this are dominated by round-off.
pub const ERROR_FLOOR: f64 = 1e-13;

/// Sample window, contour abscissas and margin for one `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionPlan {
    pub n: usize,
    pub t_plus: f64,
    pub t_minus: f64,
    /// `min(lambda_{-1} - T^-, T^+ - lambda_1)`.
    pub n_star: f64,
    pub window: ProductWindow,
    /// `(lambda_{-1}, lambda_1)`, where the error theory applies.
    pub validity: (f64, f64),
}

impl ReconstructionPlan {
    /// Rectangle with vertices `T^+- + i(y +- N_*)`.
    pub fn theorem_rectangle(&self, y: f64) -> Rectangle {
        self.rectangle(y - self.n_star, y + self.n_star)
    }

    pub fn rectangle(&self, s_minus: f64, s_plus: f64) -> Rectangle {
        Rectangle { t_minus: self.t_minus, t_plus: self.t_plus, s_minus, s_plus }
    }

    /// Open equispaced grid in `(lambda_{-1}, lambda_1)`, endpoints excluded by
    /// half a step.
    pub fn error_grid(&self, points: usize) -> Vec<f64> {
        let (lo, hi) = self.validity;
        let h = (hi - lo) / points as f64;
        (0..points).map(|i| lo + (i as f64 + 0.5) * h).collect()
    }
}

/// Midpoint plan: `T^+ = (lambda_N + lambda_{N+1})/2`, `T^- = (lambda_{-N} + lambda_{-N-1})/2`.
pub fn plan(gf: &GeneratingFunction, n: usize) -> Result<ReconstructionPlan> {
    if n < 1 {
        return Err(Error::Precondition("sample window N must be at least 1".into()));
    }
    let window = gf.window();
    if !window.serves(n) {
        return Err(Error::Precondition(format!(
            "product window {} must be at least 2N + 2 = {}",
            window.m_prod(),
            2 * n + 2
        )));
    }
    let k = n as i64;
    let t_plus = 0.5 * (gf.node(k) + gf.node(k + 1));
    let t_minus = 0.5 * (gf.node(-k) + gf.node(-k - 1));
    let validity = (gf.node(-1), gf.node(1));
    let n_star = (validity.0 - t_minus).min(t_plus - validity.1);
    Ok(ReconstructionPlan { n, t_plus, t_minus, n_star, window, validity })
}

/// A prepared series: samples, node derivatives and regularizer for one plan.
#[derive(Debug, Clone)]
pub struct Reconstructor<'a> {
    gf: &'a GeneratingFunction,
    plan: ReconstructionPlan,
    reg: RegularizerSpec,
    derivs: NodeDerivatives,
    samples: Vec<Complex64>,
}

impl<'a> Reconstructor<'a> {
    pub fn new(f: &Signal, gf: &'a GeneratingFunction, plan: &ReconstructionPlan, reg: &RegularizerSpec) -> Result<Self> {
        Self::with_sample_shift(f, gf, plan, reg, 0.0)
    }

    /// Samples are taken as `f(lambda_n + shift)`; used for recentered sequences.
    pub fn with_sample_shift(
        f: &Signal,
        gf: &'a GeneratingFunction,
        plan: &ReconstructionPlan,
        reg: &RegularizerSpec,
        shift: f64,
    ) -> Result<Self> {
        if reg.n_star != plan.n_star {
            return Err(Error::Config(format!(
                "regularizer built for N_* = {} but plan has N_* = {}",
                reg.n_star, plan.n_star
            )));
        }
        if gf.window() != plan.window {
            return Err(Error::Config("plan and generating function use different product windows".into()));
        }
        let n = plan.n as i64;
        let samples = (-n..=n)
            .map(|k| Complex64::new(f.eval_real(gf.node(k) + shift), 0.0))
            .collect();
        Ok(Self { gf, plan: *plan, reg: *reg, derivs: gf.node_derivatives(plan.n), samples })
    }

    pub fn plan(&self) -> &ReconstructionPlan {
        &self.plan
    }

    pub fn regularizer(&self) -> &RegularizerSpec {
        &self.reg
    }

    /// `G_N f(z)`, summed in index order `-N..=N` with compensation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let row = self.gf.basis_row(&self.derivs, z);
        let n = self.plan.n as i64;
        let mut acc = ComplexSum::new();
        for (k, (basis, sample)) in (-n..=n).zip(row.iter().zip(&self.samples)) {
            if *basis == Complex64::new(0.0, 0.0) {
                continue;
            }
            acc.add(sample * basis * self.reg.eval(z - self.gf.node(k)));
        }
        acc.value()
    }
}

/// `G_N f(z)`.
pub fn reconstruct(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    reg: &RegularizerSpec,
    z: Complex64,
) -> Result<Complex64> {
    Ok(Reconstructor::new(f, gf, plan, reg)?.eval(z))
}

/// Index of the node closest to `x`.
pub fn nearest_node(seq: &SamplingSequence, x: f64) -> i64 {
    // |lambda_n - n| <= 1 for every supported family
    let guess = x.round() as i64;
    (guess - 3..=guess + 3)
        .min_by(|&a, &b| (seq.lambda(a) - x).abs().total_cmp(&(seq.lambda(b) - x).abs()))
        .expect("non-empty range")
}

/// Reconstruct at an arbitrary real `x` by re-indexing the sequence so the
/// node nearest `x` becomes index 0, then planning on the translated sequence.
pub fn reconstruct_recentered(
    f: &Signal,
    seq: &SamplingSequence,
    n: usize,
    kind: RegularizerKind,
    window: ProductWindow,
    x: f64,
) -> Result<Complex64> {
    let origin = nearest_node(seq, x);
    let shift = seq.lambda(origin);
    let local = seq.recentered(origin);
    let gf = GeneratingFunction::new(&local, window);
    let plan = plan(&gf, n)?;
    let reg = make_regularizer(kind, f.sigma(), plan.n_star)?;
    let r = Reconstructor::with_sample_shift(f, &gf, &plan, &reg, shift)?;
    Ok(r.eval(Complex64::new(x - shift, 0.0)))
}

/// Largest measured error over the validity grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxError {
    pub value: f64,
    pub at: f64,
    pub at_floor: bool,
}

/// `|f(x) - G_N f(x)|` at every point of `grid`.
pub fn pointwise_errors(f: &Signal, r: &Reconstructor<'_>, grid: &[f64]) -> Vec<f64> {
    grid.par_iter()
        .map(|&x| {
            let z = Complex64::new(x, 0.0);
            (f.eval(z) - r.eval(z)).norm()
        })
        .collect()
}

/// `max |f(x) - G_N f(x)|` over an open grid of `grid_points` points in
/// `(lambda_{-1}, lambda_1)`.
pub fn max_error(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    reg: &RegularizerSpec,
    grid_points: usize,
) -> Result<MaxError> {
    if grid_points < 64 {
        return Err(Error::Precondition(format!("grid needs at least 64 points, got {grid_points}")));
    }
    let r = Reconstructor::new(f, gf, plan, reg)?;
    let grid = plan.error_grid(grid_points);
    let errors = pointwise_errors(f, &r, &grid);
    Ok(summarize(&grid, &errors))
}

pub(crate) fn summarize(grid: &[f64], errors: &[f64]) -> MaxError {
    let (at, value) = grid
        .iter()
        .zip(errors)
        .fold((grid[0], f64::NEG_INFINITY), |(bx, be), (&x, &e)| if e > be { (x, e) } else { (bx, be) });
    MaxError { value, at, at_floor: value < ERROR_FLOOR }
}
