//! Gaussian and hyper-Gaussian regularizers `G_N` with `G_N(0) = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest hyper-Gaussian order accepted by default.
pub const MAX_HYPER_ORDER: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularizerKind {
    Gaussian,
    HyperGaussian { m: u32 },
}

/// A regularizer with its parameters resolved for one `(sigma, N_*)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizerSpec {
    pub kind: RegularizerKind,
    pub sigma: f64,
    pub n_star: f64,
    /// `r^2` for the Gaussian, `r_{m,N}` for the hyper-Gaussian.
    pub rate: f64,
    /// `b_m`, hyper-Gaussian only.
    pub b_m: Option<f64>,
    /// Exponential decay rate `mu_m` of the error (`mu_1 = (pi - sigma)/2`).
    pub mu: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < PI) {
        return Err(Error::ParameterDomain(format!(
            "bandwidth sigma = {sigma} must lie in (0, pi) to leave an oversampling margin"
        )));
    }
    Ok(())
}

fn check_n_star(n_star: f64) -> Result<()> {
    if !(n_star > 0.0 && n_star.is_finite()) {
        return Err(Error::ParameterDomain(format!("N_* = {n_star} must be positive")));
    }
    Ok(())
}

/// `G(z) = exp(-r^2 z^2)` with `r^2 = (pi - sigma) / (2 N_*)`.
pub fn make_gaussian(sigma: f64, n_star: f64) -> Result<RegularizerSpec> {
    check_sigma(sigma)?;
    check_n_star(n_star)?;
    Ok(RegularizerSpec {
        kind: RegularizerKind::Gaussian,
        sigma,
        n_star,
        rate: (PI - sigma) / (2.0 * n_star),
        b_m: None,
        mu: 0.5 * (PI - sigma),
    })
}

/// `G(z) = exp(-r_{m,N} z^{2m})` with `r_{m,N} = mu_m N_*^{1-2m}`.
pub fn make_hyper_gaussian(m: u32, sigma: f64, n_star: f64) -> Result<RegularizerSpec> {
    if !(2..=MAX_HYPER_ORDER).contains(&m) {
        return Err(Error::ParameterDomain(format!(
            "hyper-Gaussian order m = {m} must lie in 2..={MAX_HYPER_ORDER}"
        )));
    }
    check_sigma(sigma)?;
    check_n_star(n_star)?;
    let (b_m, mu) = hyper_constants(m, sigma);
    Ok(RegularizerSpec {
        kind: RegularizerKind::HyperGaussian { m },
        sigma,
        n_star,
        rate: mu * n_star.powi(1 - 2 * m as i32),
        b_m: Some(b_m),
        mu,
    })
}

/// Build either kind from a [`RegularizerKind`].
pub fn make_regularizer(kind: RegularizerKind, sigma: f64, n_star: f64) -> Result<RegularizerSpec> {
    match kind {
        RegularizerKind::Gaussian => make_gaussian(sigma, n_star),
        RegularizerKind::HyperGaussian { m } => make_hyper_gaussian(m, sigma, n_star),
    }
}

/// `(b_m, mu_m)`. `m = 1` gives the Gaussian reference values `(1, (pi - sigma)/2)`.
pub fn hyper_constants(m: u32, sigma: f64) -> (f64, f64) {
    assert!(m >= 1, "hyper-Gaussian order must be at least 1");
    let m = m as f64;
    let s = (PI / (4.0 * m - 2.0)).sin();
    let b = (2.0 * m - 1.0).powf(-1.0 / (2.0 * m)) * s.powf((2.0 * m - 1.0) / (2.0 * m));
    let mu = (2.0 * m - 1.0) / (2.0 * m) * (PI - sigma) * b;
    (b, mu)
}

impl RegularizerSpec {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.im == 0.0 {
            return Complex64::new(self.eval_real(z.re), 0.0);
        }
        let power = match self.kind {
            RegularizerKind::Gaussian => z * z,
            RegularizerKind::HyperGaussian { m } => z.powu(2 * m),
        };
        (-power * self.rate).exp()
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        let power = match self.kind {
            RegularizerKind::Gaussian => x * x,
            RegularizerKind::HyperGaussian { m } => x.powi(2 * m as i32),
        };
        (-self.rate * power).exp()
    }

    pub fn order(&self) -> u32 {
        match self.kind {
            RegularizerKind::Gaussian => 1,
            RegularizerKind::HyperGaussian { m } => m,
        }
    }
}

/// `G_N(z)` for a resolved spec.
pub fn eval_g(spec: &RegularizerSpec, z: Complex64) -> Complex64 {
    spec.eval(z)
}
