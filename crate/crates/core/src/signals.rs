//! Closed-form band-limited test functions, evaluable anywhere in the
//! complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{sinc_unnormalized, sinc_unnormalized_real};

/// One shifted sinc `c sin(sigma (z - a)) / (sigma (z - a))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftedSinc {
    pub coefficient: f64,
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SignalKind {
    /// `sin(sigma z) / (sigma z)`
    SincSigma,
    /// `cos(sigma z)`
    CosSigma,
    /// `(sin(sigma z / 2) / (sigma z / 2))^2`
    SincSquared,
    /// `sum_j c_j sin(sigma (z - a_j)) / (sigma (z - a_j))`
    ShiftedSincCombo(Vec<ShiftedSinc>),
}

/// A function of exponential type at most `sigma`, bounded on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    kind: SignalKind,
    sigma: f64,
    sup_bound: f64,
}

impl Signal {
    pub fn new(kind: SignalKind, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < PI) {
            return Err(Error::ParameterDomain(format!("bandwidth sigma = {sigma} must lie in (0, pi)")));
        }
        let sup_bound = match &kind {
            SignalKind::SincSigma | SignalKind::CosSigma | SignalKind::SincSquared => 1.0,
            SignalKind::ShiftedSincCombo(terms) => {
                if terms.iter().any(|t| !t.coefficient.is_finite() || !t.shift.is_finite()) {
                    return Err(Error::ParameterDomain("sinc combination entries must be finite".into()));
                }
                terms.iter().map(|t| t.coefficient.abs()).sum()
            }
        };
        Ok(Self { kind, sigma, sup_bound })
    }

    pub fn sinc(sigma: f64) -> Result<Self> {
        Self::new(SignalKind::SincSigma, sigma)
    }

    pub fn cos(sigma: f64) -> Result<Self> {
        Self::new(SignalKind::CosSigma, sigma)
    }

    pub fn kind(&self) -> &SignalKind {
        &self.kind
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Upper bound for `sup_x |f(x)|` over the real line.
    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    /// The same signal translated: `g(z) = f(z + offset)`.
    pub fn translated(&self, offset: f64) -> Option<Self> {
        match &self.kind {
            SignalKind::ShiftedSincCombo(terms) => {
                let terms = terms
                    .iter()
                    .map(|t| ShiftedSinc { coefficient: t.coefficient, shift: t.shift - offset })
                    .collect();
                Some(Self { kind: SignalKind::ShiftedSincCombo(terms), ..*self })
            }
            SignalKind::SincSigma if offset == 0.0 => Some(self.clone()),
            _ => None,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.im == 0.0 {
            return Complex64::new(self.eval_real(z.re), 0.0);
        }
        let s = self.sigma;
        match &self.kind {
            SignalKind::SincSigma => sinc_unnormalized(z * s),
            SignalKind::CosSigma => (z * s).cos(),
            SignalKind::SincSquared => {
                let v = sinc_unnormalized(z * (0.5 * s));
                v * v
            }
            SignalKind::ShiftedSincCombo(terms) => terms
                .iter()
                .map(|t| sinc_unnormalized((z - t.shift) * s) * t.coefficient)
                .sum(),
        }
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        let s = self.sigma;
        match &self.kind {
            SignalKind::SincSigma => sinc_unnormalized_real(s * x),
            SignalKind::CosSigma => (s * x).cos(),
            SignalKind::SincSquared => sinc_unnormalized_real(0.5 * s * x).powi(2),
            SignalKind::ShiftedSincCombo(terms) => terms
                .iter()
                .map(|t| t.coefficient * sinc_unnormalized_real(s * (x - t.shift)))
                .sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn all_kinds(sigma: f64) -> Vec<Signal> {
        vec![
            Signal::new(SignalKind::SincSigma, sigma).unwrap(),
            Signal::new(SignalKind::CosSigma, sigma).unwrap(),
            Signal::new(SignalKind::SincSquared, sigma).unwrap(),
            Signal::new(
                SignalKind::ShiftedSincCombo(vec![
                    ShiftedSinc { coefficient: 0.7, shift: 0.3 },
                    ShiftedSinc { coefficient: -0.4, shift: -2.1 },
                ]),
                sigma,
            )
            .unwrap(),
        ]
    }

    #[test]
    fn sinc_at_origin_is_one() {
        let f = Signal::sinc(FRAC_PI_2).unwrap();
        assert_eq!(f.eval(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn cos_at_two() {
        let f = Signal::cos(FRAC_PI_2).unwrap();
        assert_relative_eq!(f.eval(Complex64::new(2.0, 0.0)).re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn sinc_on_imaginary_axis_matches_sinh() {
        let f = Signal::sinc(FRAC_PI_2).unwrap();
        let v = f.eval(Complex64::new(0.0, 1.0));
        let oracle = (FRAC_PI_2).sinh() / FRAC_PI_2;
        assert_relative_eq!(v.re, oracle, max_relative = 1e-14);
        assert!(v.im.abs() < 1e-15);
        assert_relative_eq!(oracle, 1.465_052_383_336_635, max_relative = 1e-14);
    }

    #[test]
    fn sigma_outside_band_is_rejected() {
        assert!(Signal::sinc(PI).is_err());
        assert!(Signal::sinc(0.0).is_err());
    }

    #[test]
    fn real_inputs_give_real_outputs() {
        for f in all_kinds(1.3) {
            for i in -40..40 {
                let x = 0.37 * i as f64;
                let v = f.eval(Complex64::new(x, 0.0));
                assert_eq!(v.im, 0.0);
                assert_eq!(v.re, f.eval_real(x));
            }
        }
    }

    #[test]
    fn complex_and_real_branches_agree_near_axis() {
        for f in all_kinds(2.0) {
            for i in -20..20 {
                let x = 0.53 * i as f64 + 0.01;
                let near = f.eval(Complex64::new(x, 1e-12));
                assert!((near.re - f.eval_real(x)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn growth_bounded_by_exponential_type() {
        for sigma in [0.5, FRAC_PI_2, 3.0] {
            for f in all_kinds(sigma) {
                for ix in -40..=40 {
                    for iy in -10..=10 {
                        let z = Complex64::new(0.5 * ix as f64, 0.5 * iy as f64);
                        let bound = f.sup_bound() * (sigma * z.im.abs()).exp();
                        assert!(f.eval(z).norm() <= bound * (1.0 + 1e-12), "{f:?} at {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn translation_of_combo() {
        let f = &all_kinds(1.0)[3];
        let g = f.translated(1.5).unwrap();
        for i in -10..10 {
            let x = 0.3 * i as f64;
            assert_relative_eq!(g.eval_real(x), f.eval_real(x + 1.5), epsilon = 1e-15);
        }
    }
}
