//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex-valued
//! integrands of a real parameter.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl QuadratureOptions {
    /// Relative tolerance with a tiny absolute floor and 2^16 panels.
    pub fn relative(rel_tol: f64) -> Self {
        Self { abs_tol: 0.0, rel_tol, max_panels: 1 << 16 }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, error }
}

/// Integrate `f` over the consecutive intervals defined by `breakpoints`
/// (at least two, increasing).
pub fn integrate<F>(f: F, breakpoints: &[f64], opts: QuadratureOptions) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    assert!(breakpoints.len() >= 2, "need at least one interval");
    let mut heap: BinaryHeap<Panel> = breakpoints
        .windows(2)
        .map(|w| kronrod_panel(&f, w[0], w[1]))
        .collect();
    let mut panels = heap.len();
    let (mut value, mut error) = totals(&heap);

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        if error <= target {
            // re-total in interval order
            let (value, error) = totals(&heap);
            return Ok(Quadrature { value, error_estimate: error, panels });
        }
        if panels >= opts.max_panels {
            return Err(Error::Quadrature { estimate: error, panels });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature { estimate: error, panels });
        }
        let left = kronrod_panel(&f, worst.a, mid);
        let right = kronrod_panel(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
        if panels.is_multiple_of(256) {
            (value, error) = totals(&heap);
        }
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, breakpoints: &[f64], opts: QuadratureOptions) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let q = integrate(|t| Complex64::new(f(t), 0.0), breakpoints, opts)?;
    Ok((q.value.re, q.error_estimate))
}

fn totals(heap: &BinaryHeap<Panel>) -> (Complex64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = crate::numeric::ComplexSum::new();
    let mut error = 0.0;
    for p in panels {
        value.add(p.value);
        error += p.error;
    }
    (value.value(), error)
}
