//! Explicit error bounds for the Gaussian series and the rate shape of the
//! hyper-Gaussian one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genfun::{GeneratingFunction, Rectangle};
use crate::quadrature::{integrate_real, QuadratureOptions};
use crate::reconstruction::ReconstructionPlan;
use crate::regularizers::{hyper_constants, RegularizerSpec, MAX_HYPER_ORDER};
use crate::sequences::ValidationReport;
use crate::signals::Signal;

/// Default boundary sampling step for contour floors.
pub const FLOOR_GRID: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundComponents {
    #[serde(rename = "C_N_y")]
    pub c_n_y: f64,
    pub phi_floor: f64,
    pub phi_at_z: f64,
    pub exp_term: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_value: f64,
    pub components: BoundComponents,
}

/// `C_N(y)`, singular at `|y| = N_*`.
pub fn c_n(sigma: f64, n_star: f64, y: f64) -> Result<f64> {
    if !(y.abs() < n_star) {
        return Err(Error::ParameterDomain(format!("|Im z| = {} must stay below N_* = {n_star}", y.abs())));
    }
    let d = PI - sigma;
    let q = y / n_star;
    Ok((2.0 * PI / (d * n_star)).sqrt() * (d * y).cosh()
        + 4.0 / (d * n_star) * (d * y * y / (2.0 * n_star)).exp() / (1.0 - q * q))
}

fn check_inside(plan: &ReconstructionPlan, x: f64) -> Result<()> {
    let (lo, hi) = plan.validity;
    if !(x > lo && x < hi) {
        return Err(Error::Precondition(format!("Re z = {x} must lie in ({lo}, {hi})")));
    }
    Ok(())
}

/// Contour floor on the theorem rectangle `T^+- + i(y +- N_*)`.
pub fn theorem_floor(gf: &GeneratingFunction, plan: &ReconstructionPlan, y: f64) -> Result<f64> {
    gf.phi_floor(&plan.theorem_rectangle(y), FLOOR_GRID)
}

/// Gaussian error bound at `z` given a lower bound `floor` for the contour
/// floor of the theorem rectangle.
pub fn gaussian_bound(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    z: Complex64,
    floor: f64,
) -> Result<BoundReport> {
    check_inside(plan, z.re)?;
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(Error::ParameterDomain(format!("contour floor {floor} must be positive")));
    }
    let sigma = f.sigma();
    let c_n_y = c_n(sigma, plan.n_star, z.im)?;
    let phi_at_z = gf.phi(z).magnitude();
    let exp_term = (-(PI - sigma) / 2.0 * plan.n_star).exp();
    let bound_value = c_n_y * f.sup_bound() * phi_at_z / (PI * floor) * exp_term;
    Ok(BoundReport { bound_value, components: BoundComponents { c_n_y, phi_floor: floor, phi_at_z, exp_term } })
}

/// Bound from a lower estimate `|phi(z)| >= C |z|^{-p} e^{pi |Im z|}` off the nodes.
pub fn corollary_bound(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    x: f64,
    c: f64,
    p: f64,
) -> Result<f64> {
    if !(c > 0.0) || !(p >= 0.0) {
        return Err(Error::ParameterDomain(format!("need C > 0 and p >= 0, got C = {c}, p = {p}")));
    }
    check_inside(plan, x)?;
    let d = PI - f.sigma();
    let ns = plan.n_star;
    let n_tilde = (plan.t_plus.abs().max(plan.t_minus.abs()).powi(2) + ns * ns).sqrt();
    let phi_x = gf.phi(Complex64::new(x, 0.0)).magnitude();
    Ok(((2.0 * PI / d).sqrt() + 4.0 / (d * ns.sqrt())) * f.sup_bound() * phi_x * n_tilde.powf(p)
        / (c * PI * ns.sqrt())
        * (-d / 2.0 * ns).exp())
}

/// Largest `C` with `floor >= C * Ntilde^{-p}` on the `y = 0` theorem rectangle.
pub fn calibrate_corollary_constant(gf: &GeneratingFunction, plan: &ReconstructionPlan, p: f64) -> Result<f64> {
    let floor = theorem_floor(gf, plan, 0.0)?;
    let n_tilde = (plan.t_plus.abs().max(plan.t_minus.abs()).powi(2) + plan.n_star.powi(2)).sqrt();
    Ok(floor * n_tilde.powf(p))
}

/// Rate shape `e^{-mu_m N_*} / sqrt(N_*)` of the hyper-Gaussian error; its
/// constant is unknown, so this is only used for fitting.
pub fn hyper_rate_bound(plan: &ReconstructionPlan, m: u32, sigma: f64, report: &ValidationReport) -> Result<f64> {
    if !(1..=MAX_HYPER_ORDER).contains(&m) {
        return Err(Error::ParameterDomain(format!("order m = {m} must lie in 1..={MAX_HYPER_ORDER}")));
    }
    if !(sigma > 0.0 && sigma < PI) {
        return Err(Error::ParameterDomain(format!("sigma = {sigma} must lie in (0, pi)")));
    }
    if !report.symmetry_ok {
        return Err(Error::Config(format!(
            "symmetry budget {} not verified for the sequence",
            report.symmetry_budget
        )));
    }
    let (_, mu) = hyper_constants(m, sigma);
    Ok((-mu * plan.n_star).exp() / plan.n_star.sqrt())
}

/// Upper bounds for the four side integrals of the error representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideBounds {
    pub hor_plus: f64,
    pub hor_minus: f64,
    pub ver_plus: f64,
    pub ver_minus: f64,
}

/// Per-side bounds on `rect` for the evaluation point `z`, with the regularizer
/// integrals evaluated numerically and `floor` the contour floor of `rect`.
pub fn side_bounds(
    f: &Signal,
    reg: &RegularizerSpec,
    rect: &Rectangle,
    z: Complex64,
    floor: f64,
    tol: f64,
) -> Result<SideBounds> {
    if !rect.contains(z) {
        return Err(Error::Precondition(format!("{z} is not inside {rect:?}")));
    }
    let (x, y) = (z.re, z.im);
    let d = PI - f.sigma();
    let sup = f.sup_bound();
    let opts = QuadratureOptions::relative(tol);

    let horizontal = |s: f64| -> Result<f64> {
        let g = |t: f64| reg.eval(Complex64::new(x - t, y - s)).norm();
        let mut pts = vec![rect.t_minus, rect.t_plus];
        if x > rect.t_minus && x < rect.t_plus {
            pts.insert(1, x);
        }
        let (integral, _) = integrate_real(g, &pts, opts)?;
        Ok(sup / (s - y).abs() * (-d * s.abs()).exp() / floor * integral)
    };
    let vertical = |t: f64| -> Result<f64> {
        let g = |s: f64| (-d * s.abs()).exp() * reg.eval(Complex64::new(x - t, y - s)).norm();
        let mut pts = vec![rect.s_minus];
        for p in [0.0, y] {
            if p > *pts.last().unwrap() && p < rect.s_plus {
                pts.push(p);
            }
        }
        pts.push(rect.s_plus);
        let (integral, _) = integrate_real(g, &pts, opts)?;
        Ok(sup / (t - x).abs() / floor * integral)
    };

    Ok(SideBounds {
        hor_plus: horizontal(rect.s_plus)?,
        hor_minus: horizontal(rect.s_minus)?,
        ver_plus: vertical(rect.t_plus)?,
        ver_minus: vertical(rect.t_minus)?,
    })
}
