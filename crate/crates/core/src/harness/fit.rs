use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::FitInsufficient { needed: MIN_FIT_POINTS, got: points.len() });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let scale = points.iter().map(|p| p.0 * p.0).sum::<f64>();
    if !(sxx > 1e-24 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    Ok(LineFit { slope, intercept: my - slope * mx })
}

/// `log E = intercept + slope * N_* + exponent * log N_*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub exponent: f64,
}

/// Least squares for the three-parameter model on `(N_*, log E)` pairs.
pub fn fit_free_exponent(points: &[(f64, f64)]) -> Result<FreeExponentFit> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::FitInsufficient { needed: MIN_FIT_POINTS, got: points.len() });
    }
    if points.iter().any(|p| !(p.0 > 0.0)) {
        return Err(Error::DegenerateFit);
    }
    let a = DMatrix::from_fn(points.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => points[i].0,
        _ => points[i].0.ln(),
    });
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::DegenerateFit);
    }
    let x = svd.solve(&b, 0.0).map_err(|_| Error::DegenerateFit)?;
    Ok(FreeExponentFit { intercept: x[0], slope: x[1], exponent: x[2] })
}
