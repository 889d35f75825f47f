//! Generating functions of sampling sequences.
//!
//! The generating function is evaluated as
//!
//! ```text
//! phi(z) = z * prod_{0 < |k| <= M} (1 - z / lambda_k) * prod_{k > M} (1 - z^2 / k^2)
//! ```
//!
//! i.e. the symmetric product over the window `|k| <= M`, continued by the
//! integer lattice beyond it. The continuation is the exact canonical
//! product of a sequence that agrees with `Lambda` on the whole window, so
//! every identity that only involves nodes inside a contour of size `< M`
//! holds exactly; for `Lambda = Z` it is `sin(pi z) / pi` to round-off.
//!
//! Products are accumulated in log space with an explicit phase, so windows
//! of `10^5` factors neither overflow nor underflow.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::sequences::SamplingSequence;

/// Lower limit on the product window.
pub const MIN_PRODUCT_WINDOW: usize = 512;
/// Safety factor applied to sampled contour minima.
pub const FLOOR_SAFETY: f64 = 0.9;

const TAIL_TERMS: usize = 64;

/// Truncation index `M` of the symmetric product (factors `0 < |k| <= M`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductWindow(usize);

impl ProductWindow {
    pub fn new(m_prod: usize) -> Result<Self> {
        if m_prod < 2 {
            return Err(Error::ParameterDomain(format!("product window {m_prod} is too small")));
        }
        Ok(Self(m_prod))
    }

    /// Default window for a sample window `N`: `max(8N, 512)`.
    pub fn auto(n: usize) -> Self {
        Self((8 * n).max(MIN_PRODUCT_WINDOW))
    }

    pub fn m_prod(self) -> usize {
        self.0
    }

    /// Whether the window is large enough for sample window `n`.
    pub fn serves(self, n: usize) -> bool {
        self.0 >= 2 * n + 2
    }

    /// Largest `|z|` at which the window evaluates accurately.
    pub fn radius(self) -> f64 {
        0.5 * self.0 as f64
    }
}

/// A nonzero complex number stored as `exp(log_magnitude) * phase`, or zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub log_magnitude: f64,
    /// Unit complex number; exactly `+-1` for real values.
    pub phase: Complex64,
}

impl LogValue {
    pub fn zero() -> Self {
        Self { log_magnitude: f64::NEG_INFINITY, phase: Complex64::new(1.0, 0.0) }
    }

    pub fn one() -> Self {
        Self { log_magnitude: 0.0, phase: Complex64::new(1.0, 0.0) }
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn magnitude(&self) -> f64 {
        self.log_magnitude.exp()
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.phase * self.log_magnitude.exp()
    }
}

impl std::ops::Neg for LogValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self { phase: -self.phase, ..self }
    }
}

/// `ln(1 - z / lambda)` split into log-magnitude, argument and a sign flag
/// for real factors.
#[derive(Debug, Clone, Copy, Default)]
struct LogTerm {
    ln_mag: f64,
    arg: f64,
    negative: bool,
}

fn log_factor(lambda: f64, z: Complex64) -> LogTerm {
    let a = z.re / lambda;
    let b = z.im / lambda;
    let u = a * (a - 2.0) + b * b;
    let ln_mag = if u.abs() < 0.5 {
        0.5 * u.ln_1p()
    } else {
        (lambda - z.re).hypot(z.im).ln() - lambda.abs().ln()
    };
    if z.im == 0.0 {
        LogTerm { ln_mag, arg: 0.0, negative: (lambda - z.re) / lambda < 0.0 }
    } else {
        LogTerm { ln_mag, arg: (-b).atan2(1.0 - a), negative: false }
    }
}

/// Running log-space product.
#[derive(Debug, Clone, Copy, Default)]
struct LogProduct {
    ln_mag: CompensatedSum,
    arg: CompensatedSum,
    negative: bool,
}

impl LogProduct {
    fn push(&mut self, t: LogTerm) {
        self.ln_mag.add(t.ln_mag);
        if t.arg != 0.0 {
            self.arg.add(t.arg);
        }
        self.negative ^= t.negative;
    }

    fn push_complex_log(&mut self, w: Complex64) {
        self.ln_mag.add(w.re);
        if w.im != 0.0 {
            self.arg.add(w.im);
        }
    }

    fn total(&self) -> LogTerm {
        LogTerm { ln_mag: self.ln_mag.value(), arg: self.arg.value(), negative: self.negative }
    }
}

fn to_log_value(t: LogTerm) -> LogValue {
    let sign = if t.negative { -1.0 } else { 1.0 };
    let phase = if t.arg == 0.0 {
        Complex64::new(sign, 0.0)
    } else {
        Complex64::from_polar(sign, t.arg)
    };
    LogValue { log_magnitude: t.ln_mag, phase }
}

/// `ln prod_{k > M} (1 - z^2 / k^2)` as a power series in `(z / M)^2`.
#[derive(Debug, Clone)]
struct LatticeTail {
    m: f64,
    // M^{2j-1} * sum_{k > M} k^{-2j}, j = 1..=TAIL_TERMS
    scaled_zeta: Vec<f64>,
}

impl LatticeTail {
    fn new(m_prod: usize) -> Self {
        let m = m_prod as f64;
        let k = m + 1.0;
        let ratio = m / k;
        // Euler-Maclaurin for sum_{k >= K} k^{-s}
        const BERNOULLI: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
        let scaled_zeta = (1..=TAIL_TERMS)
            .map(|j| {
                let s = 2.0 * j as f64;
                let mut acc = 1.0 / (s - 1.0) + 0.5 / k;
                let mut rising = s; // s (s+1) ... (s+2p-2)
                let mut factorial = 2.0; // (2p)!
                let mut kpow = k * k;
                for (p, b) in BERNOULLI.iter().enumerate() {
                    acc += b / factorial * rising / kpow;
                    let q = 2.0 * p as f64;
                    rising *= (s + q + 1.0) * (s + q + 2.0);
                    factorial *= (q + 3.0) * (q + 4.0);
                    kpow *= k * k;
                }
                ratio.powf(s - 1.0) * acc
            })
            .collect();
        Self { m, scaled_zeta }
    }

    fn log(&self, z: Complex64) -> Complex64 {
        let w = (z / self.m) * (z / self.m);
        let mut power = w;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, zeta) in self.scaled_zeta.iter().enumerate() {
            let term = power * (zeta / (j + 1) as f64);
            acc += term;
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
            power *= w;
        }
        -acc * self.m
    }
}

/// Axis-aligned rectangle with corners `T^- + i S^-` and `T^+ + i S^+`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub t_minus: f64,
    pub t_plus: f64,
    pub s_minus: f64,
    pub s_plus: f64,
}

impl Rectangle {
    pub fn perimeter(&self) -> f64 {
        2.0 * ((self.t_plus - self.t_minus) + (self.s_plus - self.s_minus))
    }

    /// Strict interior test.
    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.t_minus && z.re < self.t_plus && z.im > self.s_minus && z.im < self.s_plus
    }

    /// Point at arclength `s` along the positively oriented boundary,
    /// starting at the lower-left corner.
    pub fn boundary_point(&self, s: f64) -> Complex64 {
        let width = self.t_plus - self.t_minus;
        let height = self.s_plus - self.s_minus;
        let s = s.rem_euclid(self.perimeter());
        if s < width {
            Complex64::new(self.t_minus + s, self.s_minus)
        } else if s < width + height {
            Complex64::new(self.t_plus, self.s_minus + (s - width))
        } else if s < 2.0 * width + height {
            Complex64::new(self.t_plus - (s - width - height), self.s_plus)
        } else {
            Complex64::new(self.t_minus, self.s_plus - (s - 2.0 * width - height))
        }
    }

    /// Largest `|z|` on the rectangle.
    pub fn max_modulus(&self) -> f64 {
        let x = self.t_minus.abs().max(self.t_plus.abs());
        let y = self.s_minus.abs().max(self.s_plus.abs());
        x.hypot(y)
    }
}

/// `log phi'(lambda_n)` for a contiguous range of nodes, reused across
/// evaluation points.
#[derive(Debug, Clone)]
pub struct NodeDerivatives {
    n: usize,
    // log Q_n(lambda_n) for n = -N..=N
    values: Vec<LogTerm>,
}

impl NodeDerivatives {
    pub fn sample_window(&self) -> usize {
        self.n
    }
}

/// Node table and tail series for one sequence and one product window.
#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    window: ProductWindow,
    // lambda_{-M}, ..., lambda_M
    nodes: Vec<f64>,
    tail: LatticeTail,
}

impl GeneratingFunction {
    pub fn new(seq: &SamplingSequence, window: ProductWindow) -> Self {
        let nodes = seq.nodes(window.m_prod());
        Self { window, nodes, tail: LatticeTail::new(window.m_prod()) }
    }

    pub fn window(&self) -> ProductWindow {
        self.window
    }

    /// `lambda_n` for `|n| <= M`.
    pub fn node(&self, n: i64) -> f64 {
        self.nodes[(n + self.window.m_prod() as i64) as usize]
    }

    /// Index `k` with `lambda_k == z` exactly, if any.
    pub fn node_at(&self, z: Complex64) -> Option<i64> {
        if z.im != 0.0 {
            return None;
        }
        self.nodes
            .binary_search_by(|v| v.total_cmp(&z.re))
            .ok()
            .map(|i| i as i64 - self.window.m_prod() as i64)
    }

    fn check_radius(&self, z: Complex64) {
        assert!(
            z.norm() <= self.window.radius(),
            "|z| = {} exceeds the product window radius {}",
            z.norm(),
            self.window.radius()
        );
    }

    // Every factor log(1 - z / lambda_k), 0 < |k| <= M, in index order, plus
    // the tail, accumulated; excluding index `skip` when given.
    fn product_terms(&self, z: Complex64, skip: Option<i64>) -> LogProduct {
        let m = self.window.m_prod() as i64;
        let mut acc = LogProduct::default();
        for k in (-m..=m).filter(|&k| k != 0 && Some(k) != skip) {
            acc.push(log_factor(self.node(k), z));
        }
        let tail = self.tail.log(z);
        if z.im == 0.0 {
            acc.push_complex_log(Complex64::new(tail.re, 0.0));
        } else {
            acc.push_complex_log(tail);
        }
        acc
    }

    /// `phi(z)`; exactly zero at the nodes of the window.
    pub fn phi(&self, z: Complex64) -> LogValue {
        self.check_radius(z);
        if self.node_at(z).is_some() {
            return LogValue::zero();
        }
        let mut acc = self.product_terms(z, None);
        acc.push(LogTerm { ln_mag: z.norm().ln(), arg: if z.im == 0.0 { 0.0 } else { z.arg() }, negative: z.im == 0.0 && z.re < 0.0 });
        to_log_value(acc.total())
    }

    /// `ln |phi(z)|` without phase bookkeeping.
    pub fn log_abs_phi(&self, z: Complex64) -> f64 {
        let m = self.window.m_prod() as i64;
        let mut acc = CompensatedSum::new();
        acc.add(z.norm().ln());
        for k in (-m..=m).filter(|&k| k != 0) {
            acc.add(log_factor(self.node(k), z).ln_mag);
        }
        acc.add(self.tail.log(z).re);
        acc.value()
    }

    /// `phi(zeta) e^{-pi |Im zeta|}`.
    pub fn normalized_modulus(&self, z: Complex64) -> f64 {
        (self.log_abs_phi(z) - PI * z.im.abs()).exp()
    }

    // log Q_n(lambda_n) with Q_n(z) = prod_{k != 0, n} (1 - z/lambda_k) * tail(z)
    fn log_q_at_node(&self, n: i64) -> LogTerm {
        if n == 0 {
            return LogTerm::default();
        }
        let z = Complex64::new(self.node(n), 0.0);
        self.product_terms(z, Some(n)).total()
    }

    /// `phi'(lambda_n)`, obtained by deleting the vanishing factor.
    pub fn phi_prime_at(&self, n: i64) -> LogValue {
        assert!(n.unsigned_abs() as usize <= self.window.m_prod(), "node {n} outside the product window");
        self.check_radius(Complex64::new(self.node(n), 0.0));
        if n == 0 {
            return LogValue::one();
        }
        -to_log_value(self.log_q_at_node(n))
    }

    /// Precompute `phi'(lambda_n)` for `|n| <= sample_window`.
    pub fn node_derivatives(&self, sample_window: usize) -> NodeDerivatives {
        let n = sample_window as i64;
        let values = (-n..=n).into_par_iter().map(|k| self.log_q_at_node(k)).collect();
        NodeDerivatives { n: sample_window, values }
    }

    /// Interpolation basis `phi(z) / (phi'(lambda_n) (z - lambda_n))`.
    pub fn basis(&self, n: i64, z: Complex64) -> Complex64 {
        assert!(n.unsigned_abs() as usize <= self.window.m_prod(), "node {n} outside the product window");
        self.check_radius(z);
        if let Some(k) = self.node_at(z) {
            return Complex64::new(if k == n { 1.0 } else { 0.0 }, 0.0);
        }
        let numerator = self.product_terms(z, Some(n)).total();
        let denominator = self.log_q_at_node(n);
        self.combine(n, z, numerator, denominator)
    }

    /// All basis values `n = -N..=N` at `z`, sharing one pass over the window.
    pub fn basis_row(&self, derivs: &NodeDerivatives, z: Complex64) -> Vec<Complex64> {
        self.check_radius(z);
        let n_max = derivs.n as i64;
        if let Some(k) = self.node_at(z) {
            return (-n_max..=n_max)
                .map(|n| Complex64::new(if k == n { 1.0 } else { 0.0 }, 0.0))
                .collect();
        }
        let total = self.product_terms(z, None).total();
        (-n_max..=n_max)
            .map(|n| {
                let numerator = if n == 0 {
                    total
                } else {
                    let t = log_factor(self.node(n), z);
                    LogTerm { ln_mag: total.ln_mag - t.ln_mag, arg: total.arg - t.arg, negative: total.negative ^ t.negative }
                };
                self.combine(n, z, numerator, derivs.values[(n + n_max) as usize])
            })
            .collect()
    }

    // (z / lambda_n) * exp(numerator - denominator), the ratio factor only for n != 0
    fn combine(&self, n: i64, z: Complex64, numerator: LogTerm, denominator: LogTerm) -> Complex64 {
        let ratio = LogTerm {
            ln_mag: numerator.ln_mag - denominator.ln_mag,
            arg: numerator.arg - denominator.arg,
            negative: numerator.negative ^ denominator.negative,
        };
        let v = to_log_value(ratio).to_complex();
        if n == 0 {
            v
        } else {
            v * (z / self.node(n))
        }
    }

    /// Lower bound for `min |phi(zeta)| e^{-pi |Im zeta|}` over the boundary of
    /// `rect`: dense sampling at spacing `<= grid_density`, golden-section
    /// refinement of the sampled local minima, then the safety factor.
    pub fn phi_floor(&self, rect: &Rectangle, grid_density: f64) -> Result<f64> {
        if !(grid_density > 0.0) {
            return Err(Error::Precondition("floor grid spacing must be positive".into()));
        }
        if !(rect.t_minus < rect.t_plus && rect.s_minus < rect.s_plus) {
            return Err(Error::Precondition(format!("degenerate rectangle {rect:?}")));
        }
        if rect.max_modulus() > self.window.radius() {
            return Err(Error::Precondition(format!(
                "rectangle reaches |z| = {} beyond the product window radius {}",
                rect.max_modulus(),
                self.window.radius()
            )));
        }
        let perimeter = rect.perimeter();
        let count = (perimeter / grid_density).ceil() as usize;
        let step = perimeter / count as f64;
        let samples: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|i| self.log_abs_phi(rect.boundary_point(i as f64 * step)) - PI * rect.boundary_point(i as f64 * step).im.abs())
            .collect();

        let eval = |s: f64| {
            let z = rect.boundary_point(s);
            self.log_abs_phi(z) - PI * z.im.abs()
        };
        let mut candidates: Vec<usize> = (0..count)
            .filter(|&i| {
                let prev = samples[(i + count - 1) % count];
                let next = samples[(i + 1) % count];
                samples[i] <= prev && samples[i] <= next
            })
            .collect();
        candidates.sort_by(|&a, &b| samples[a].total_cmp(&samples[b]));
        candidates.truncate(8);

        let sampled_min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let refined_min = candidates
            .par_iter()
            .map(|&i| {
                let center = i as f64 * step;
                golden_section_min(&eval, center - step, center + step, 1e-9 * step.max(1.0))
            })
            .reduce(|| f64::INFINITY, f64::min);
        Ok(FLOOR_SAFETY * sampled_min.min(refined_min).exp())
    }
}

fn golden_section_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.min(fd);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
    }
    best
}

/// `phi(z)` for `seq` truncated at `window`.
pub fn phi(seq: &SamplingSequence, z: Complex64, window: ProductWindow) -> LogValue {
    GeneratingFunction::new(seq, window).phi(z)
}

/// `phi'(lambda_n)` for `seq` truncated at `window`.
pub fn phi_prime_at(seq: &SamplingSequence, n: i64, window: ProductWindow) -> LogValue {
    GeneratingFunction::new(seq, window).phi_prime_at(n)
}

/// Interpolation basis function `n` at `z`.
pub fn basis(seq: &SamplingSequence, n: i64, z: Complex64, window: ProductWindow) -> Complex64 {
    GeneratingFunction::new(seq, window).basis(n, z)
}

/// Contour floor over the boundary of `rect`.
pub fn phi_floor(seq: &SamplingSequence, rect: &Rectangle, grid_density: f64, window: ProductWindow) -> Result<f64> {
    GeneratingFunction::new(seq, window).phi_floor(rect, grid_density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{make_perturbed, make_sine_type, make_uniform, SineCombo, SineTerm};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // sum_{k > M} k^{-s} by brute force plus an integral remainder
    fn zeta_tail_oracle(m: usize, s: f64) -> f64 {
        let stop = m + 200_000;
        let direct: f64 = ((m + 1)..=stop).rev().map(|k| (k as f64).powf(-s)).sum();
        let k = stop as f64 + 0.5;
        direct + k.powf(1.0 - s) / (s - 1.0)
    }

    #[test]
    fn tail_zeta_matches_brute_force() {
        let tail = LatticeTail::new(512);
        for j in 1..=4 {
            let s = 2.0 * j as f64;
            let oracle = zeta_tail_oracle(512, s) * 512f64.powf(s - 1.0);
            assert_relative_eq!(tail.scaled_zeta[j - 1], oracle, max_relative = 1e-10);
        }
    }

    #[test]
    fn uniform_phi_is_sine_over_pi() {
        let w = ProductWindow::new(100_000).unwrap();
        let gf = GeneratingFunction::new(&make_uniform(), w);
        let v = gf.phi(c(0.5, 0.0));
        assert_eq!(v.phase, c(1.0, 0.0));
        assert_relative_eq!(v.magnitude(), 1.0 / PI, max_relative = 1e-5);
        let z = c(0.5, 1.0);
        let expected = (z * PI).sin() / PI;
        let got = gf.phi(z).to_complex();
        assert!((got - expected).norm() / expected.norm() < 1e-5);
    }

    #[test]
    fn lattice_continuation_is_exact_for_small_window() {
        let gf = GeneratingFunction::new(&make_uniform(), ProductWindow::new(512).unwrap());
        for &z in &[c(0.5, 0.0), c(-3.7, 0.0), c(10.25, 4.0), c(-20.0, -30.0)] {
            let expected = (z * PI).sin() / PI;
            let got = gf.phi(z).to_complex();
            assert!((got - expected).norm() <= 1e-12 * expected.norm(), "{z}: {got} vs {expected}");
        }
    }

    #[test]
    fn nodes_are_exact_zeros() {
        let seq = make_perturbed(0.3, 5).unwrap();
        let gf = GeneratingFunction::new(&seq, ProductWindow::auto(10));
        assert!(gf.phi(c(seq.lambda(3), 0.0)).is_zero());
        assert!(gf.phi(c(0.0, 0.0)).is_zero());
        assert!(!gf.phi(c(seq.lambda(3) + 1e-9, 0.0)).is_zero());
    }

    #[test]
    fn uniform_derivatives_at_nodes() {
        let gf = GeneratingFunction::new(&make_uniform(), ProductWindow::new(100_000).unwrap());
        assert_relative_eq!(gf.phi_prime_at(0).to_complex().re, 1.0, max_relative = 1e-5);
        assert_relative_eq!(gf.phi_prime_at(1).to_complex().re, -1.0, max_relative = 1e-5);
    }

    fn finite_difference_check(seq: &SamplingSequence) {
        let gf = GeneratingFunction::new(seq, ProductWindow::auto(10));
        let h = 1e-6;
        for n in [-7i64, -1, 0, 2, 9] {
            let x = gf.node(n);
            let fd = (gf.phi(c(x + h, 0.0)).to_complex() - gf.phi(c(x - h, 0.0)).to_complex()) / (2.0 * h);
            let exact = gf.phi_prime_at(n).to_complex();
            assert!((fd - exact).norm() <= 1e-5 * exact.norm(), "n = {n}: {fd} vs {exact}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        finite_difference_check(&make_uniform());
        finite_difference_check(&make_perturbed(0.2, 11).unwrap());
        let g = SineCombo::new(vec![SineTerm { coefficient: 0.3, frequency: 1.0 }]).unwrap();
        finite_difference_check(&make_sine_type(1.0, g).unwrap());
    }

    #[test]
    fn uniform_basis_values() {
        let gf = GeneratingFunction::new(&make_uniform(), ProductWindow::auto(10));
        assert_eq!(gf.basis(2, c(2.0, 0.0)), c(1.0, 0.0));
        assert_eq!(gf.basis(0, c(5.0, 0.0)), c(0.0, 0.0));
        assert_relative_eq!(gf.basis(0, c(0.5, 0.0)).re, 2.0 / PI, max_relative = 1e-13);
    }

    #[test]
    fn uniform_basis_is_sinc() {
        let gf = GeneratingFunction::new(&make_uniform(), ProductWindow::auto(20));
        for n in -20i64..=20 {
            for i in 0..25 {
                let x = -1.0 + 0.0813 * i as f64 + 1e-3;
                let expected = (PI * (x - n as f64)).sin() / (PI * (x - n as f64));
                let got = gf.basis(n, c(x, 0.0));
                assert!(got.im == 0.0);
                assert!((got.re - expected).abs() <= 1e-13 * (1.0 + expected.abs()), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn basis_row_matches_direct_basis() {
        let seq = make_perturbed(0.2, 4).unwrap();
        let gf = GeneratingFunction::new(&seq, ProductWindow::auto(12));
        let derivs = gf.node_derivatives(12);
        for &z in &[c(0.31, 0.0), c(-0.7, 0.0), c(0.3, 0.2), c(seq.lambda(5), 0.0)] {
            let row = gf.basis_row(&derivs, z);
            for n in -12i64..=12 {
                let direct = gf.basis(n, z);
                assert!((row[(n + 12) as usize] - direct).norm() <= 1e-13 * (1.0 + direct.norm()));
            }
        }
    }

    #[test]
    fn interpolation_is_exact_at_nodes() {
        let seq = make_perturbed(0.35, 8).unwrap();
        let gf = GeneratingFunction::new(&seq, ProductWindow::auto(8));
        for n in -8i64..=8 {
            for k in -8i64..=8 {
                let v = gf.basis(n, c(seq.lambda(k), 0.0));
                assert_eq!(v, c(if n == k { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let seq = make_perturbed(0.2, 2).unwrap();
        let gf = GeneratingFunction::new(&seq, ProductWindow::auto(10));
        for &z in &[c(0.3, 0.7), c(-4.2, 2.0), c(7.5, -9.0)] {
            let a = gf.phi(z.conj()).to_complex();
            let b = gf.phi(z).to_complex().conj();
            assert!((a - b).norm() <= 1e-14 * a.norm());
        }
    }

    #[test]
    fn doubling_window_leaves_uniform_basis_unchanged() {
        let small = GeneratingFunction::new(&make_uniform(), ProductWindow::new(512).unwrap());
        let large = GeneratingFunction::new(&make_uniform(), ProductWindow::new(1024).unwrap());
        let n_max = 20i64;
        for n in -n_max..=n_max {
            for i in 0..12 {
                let z = c(-21.0 + 3.5 * i as f64 + 0.01, 0.3 * (i % 3) as f64);
                let a = small.basis(n, z);
                let b = large.basis(n, z);
                assert!((a - b).norm() <= 1e-10 * b.norm(), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn uniform_floor_near_half_over_pi() {
        // phi = sin(pi z) / pi here, so the classical floor 1/2 appears divided by pi
        let gf = GeneratingFunction::new(&make_uniform(), ProductWindow::auto(10));
        let rect = Rectangle { t_minus: -10.5, t_plus: 10.5, s_minus: -9.5, s_plus: 9.5 };
        let floor = gf.phi_floor(&rect, 0.05).unwrap() * PI;
        assert!((0.45 - 1e-12..=0.5 * (1.0 + 1e-9)).contains(&floor), "{floor}");
    }

    #[test]
    fn sine_type_floor_is_positive() {
        let g = SineCombo::new(vec![SineTerm { coefficient: 0.3, frequency: 1.0 }]).unwrap();
        let seq = make_sine_type(1.0, g).unwrap();
        let gf = GeneratingFunction::new(&seq, ProductWindow::auto(10));
        let t_plus = 0.5 * (seq.lambda(10) + seq.lambda(11));
        let t_minus = 0.5 * (seq.lambda(-10) + seq.lambda(-11));
        let rect = Rectangle { t_minus, t_plus, s_minus: -9.5, s_plus: 9.5 };
        assert!(gf.phi_floor(&rect, 0.05).unwrap() > 0.0);
    }

    #[test]
    fn floor_is_below_every_boundary_sample() {
        let seq = make_perturbed(0.2, 21).unwrap();
        let gf = GeneratingFunction::new(&seq, ProductWindow::auto(6));
        let t_plus = 0.5 * (seq.lambda(6) + seq.lambda(7));
        let t_minus = 0.5 * (seq.lambda(-6) + seq.lambda(-7));
        let rect = Rectangle { t_minus, t_plus, s_minus: -5.5, s_plus: 5.5 };
        let floor = gf.phi_floor(&rect, 0.05).unwrap();
        let fine = (0..20_000)
            .map(|i| gf.normalized_modulus(rect.boundary_point(i as f64 * rect.perimeter() / 20_000.0)))
            .fold(f64::INFINITY, f64::min);
        assert!(floor <= fine);
        assert!(floor >= 0.85 * fine);
    }
}
