//! Small numerical building blocks shared by the other modules.

use num_complex::Complex64;

/// Neumaier-compensated running sum.
///
/// Adding the same values in the same order always yields the same bits.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum over complex values, real and imaginary parts kept separately.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `sin(pi x)` with exact reduction to `[-1/2, 1/2]`, accurate at large `|x|`.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (std::f64::consts::PI * r).sin();
    if (n as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

/// `cos(pi x)` with the same reduction as [`sin_pi`].
pub fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let c = (std::f64::consts::PI * r).cos();
    if (n as i64).rem_euclid(2) == 0 {
        c
    } else {
        -c
    }
}

/// `sin(w)/w` for complex `w`, using a short Taylor series near the origin.
pub fn sinc_unnormalized(w: Complex64) -> Complex64 {
    if w.norm() < 1e-6 {
        let w2 = w * w;
        Complex64::new(1.0, 0.0) - w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sin() / w
    }
}

/// Real-argument counterpart of [`sinc_unnormalized`].
pub fn sinc_unnormalized_real(w: f64) -> f64 {
    if w.abs() < 1e-6 {
        let w2 = w * w;
        1.0 - w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sin() / w
    }
}
