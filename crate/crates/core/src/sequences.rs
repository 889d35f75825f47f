//! Sampling sequences: uniform, perturbed uniform and zeros of sine-wave
//! crossings. Every sequence is addressable by integer index and evaluated
//! lazily, so product windows can reach far past the sample window.

use std::collections::HashMap;
use std::f64::consts::PI;

use parking_lot::RwLock;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{cos_pi, sin_pi};
use crate::roots::hybrid_root;

/// Absolute tolerance for the zeros of a sine-wave crossing function.
pub const ROOT_TOLERANCE: f64 = 1e-13;

/// One term `c sin(nu x)` of a [`SineCombo`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineTerm {
    pub coefficient: f64,
    pub frequency: f64,
}

/// A finite combination `g(x) = sum_j c_j sin(nu_j x)` with `0 < nu_j < pi`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SineCombo {
    terms: Vec<SineTerm>,
}

impl SineCombo {
    pub fn new(terms: Vec<SineTerm>) -> Result<Self> {
        for t in &terms {
            if !(t.frequency > 0.0 && t.frequency < PI) {
                return Err(Error::ParameterDomain(format!(
                    "sine frequency {} must lie in (0, pi)",
                    t.frequency
                )));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::ParameterDomain("sine coefficient must be finite".into()));
            }
        }
        Ok(Self { terms })
    }

    /// `g = 0`.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[SineTerm] {
        &self.terms
    }

    /// `sum_j |c_j|`, an upper bound for `|g|` on the real line.
    pub fn abs_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.coefficient * (t.frequency * x).sin()).sum()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.frequency * (t.frequency * x).cos())
            .sum()
    }
}

/// Which family a [`SamplingSequence`] belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    /// `lambda_n = n`.
    Uniform,
    /// `lambda_n = n + d_n` with `|d_n| <= max_offset < 1/2` and `d_0 = 0`.
    PerturbedUniform { max_offset: f64 },
    /// Zeros of `A sin(pi x) - g(x)`.
    SineTypeCrossings { amplitude: f64, g: SineCombo },
}

/// An ordered real sequence `{lambda_n}` indexed by all integers, `lambda_0 = 0`.
#[derive(Debug)]
pub struct SamplingSequence {
    kind: SequenceKind,
    seed: u64,
    origin: i64,
    cache: RwLock<HashMap<i64, f64>>,
}

impl Clone for SamplingSequence {
    fn clone(&self) -> Self {
        Self {
            kind: self.kind.clone(),
            seed: self.seed,
            origin: self.origin,
            cache: RwLock::new(self.cache.read().clone()),
        }
    }
}

impl PartialEq for SamplingSequence {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.seed == other.seed && self.origin == other.origin
    }
}

/// The integers.
pub fn make_uniform() -> SamplingSequence {
    SamplingSequence::from_kind(SequenceKind::Uniform, 0)
}

/// A perturbed integer lattice with offsets drawn from a counter-based
/// generator keyed by `(seed, n)`.
pub fn make_perturbed(max_offset: f64, seed: u64) -> Result<SamplingSequence> {
    if !(0.0..0.5).contains(&max_offset) {
        return Err(Error::ParameterDomain(format!(
            "perturbation bound L = {max_offset} must satisfy 0 <= L < 1/2"
        )));
    }
    Ok(SamplingSequence::from_kind(SequenceKind::PerturbedUniform { max_offset }, seed))
}

/// Zeros of the sine-wave crossing function `A sin(pi x) - g(x)`.
pub fn make_sine_type(amplitude: f64, g: SineCombo) -> Result<SamplingSequence> {
    if !(amplitude.is_finite() && amplitude > 0.0) {
        return Err(Error::ParameterDomain(format!("amplitude A = {amplitude} must be positive")));
    }
    if g.abs_sum() >= amplitude {
        return Err(Error::ParameterDomain(format!(
            "sum of |c_j| = {} must be strictly below A = {amplitude}",
            g.abs_sum()
        )));
    }
    Ok(SamplingSequence::from_kind(SequenceKind::SineTypeCrossings { amplitude, g }, 0))
}

fn zigzag(n: i64) -> u64 {
    ((n << 1) ^ (n >> 63)) as u64
}

impl SamplingSequence {
    fn from_kind(kind: SequenceKind, seed: u64) -> Self {
        Self { kind, seed, origin: 0, cache: RwLock::new(HashMap::new()) }
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of the underlying sequence that plays the role of `lambda_0`.
    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// The same nodes re-indexed so that underlying index `origin` becomes
    /// index 0 and translated so that it sits at 0.
    pub fn recentered(&self, origin: i64) -> Self {
        Self {
            kind: self.kind.clone(),
            seed: self.seed,
            origin: self.origin + origin,
            cache: RwLock::new(self.cache.read().clone()),
        }
    }

    /// Position of underlying node `origin` in the original coordinates.
    pub fn origin_offset(&self) -> f64 {
        self.raw(self.origin)
    }

    /// `lambda_n`.
    ///
    /// # Panics
    /// If the root bracket of a sine-type zero fails, which cannot happen
    /// for sequences built by [`make_sine_type`]. Use [`Self::try_lambda`]
    /// to observe the error instead.
    pub fn lambda(&self, n: i64) -> f64 {
        self.try_lambda(n).expect("sine-type bracket verified at construction")
    }

    pub fn try_lambda(&self, n: i64) -> Result<f64> {
        if self.origin == 0 {
            return self.try_raw(n);
        }
        Ok(self.try_raw(n + self.origin)? - self.try_raw(self.origin)?)
    }

    fn raw(&self, n: i64) -> f64 {
        self.try_raw(n).expect("sine-type bracket verified at construction")
    }

    fn try_raw(&self, n: i64) -> Result<f64> {
        match &self.kind {
            SequenceKind::Uniform => Ok(n as f64),
            SequenceKind::PerturbedUniform { max_offset } => {
                if n == 0 || *max_offset == 0.0 {
                    return Ok(n as f64);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(zigzag(n));
                let d: f64 = rng.gen_range(-*max_offset..=*max_offset);
                Ok(n as f64 + d)
            }
            SequenceKind::SineTypeCrossings { amplitude, g } => {
                if n == 0 {
                    return Ok(0.0);
                }
                if let Some(v) = self.cache.read().get(&n) {
                    return Ok(*v);
                }
                let root = crossing_root(*amplitude, g, n)?;
                // racing writers compute the same value, first one wins
                Ok(*self.cache.write().entry(n).or_insert(root))
            }
        }
    }

    /// `lambda_{-m}, ..., lambda_m` in index order.
    pub fn nodes(&self, m: usize) -> Vec<f64> {
        let m = m as i64;
        match self.kind {
            SequenceKind::SineTypeCrossings { .. } => {
                (-m..=m).into_par_iter().map(|n| self.lambda(n)).collect()
            }
            _ => (-m..=m).map(|n| self.lambda(n)).collect(),
        }
    }

    /// Value of the crossing function `A sin(pi x) - g(x)` (sine-type only).
    pub fn crossing_value(&self, x: f64) -> Option<f64> {
        match &self.kind {
            SequenceKind::SineTypeCrossings { amplitude, g } => Some(amplitude * sin_pi(x) - g.eval(x)),
            _ => None,
        }
    }

    /// Bound on `|lambda_n - n|` that holds for every index.
    pub fn offset_bound(&self) -> f64 {
        let base = match self.kind {
            SequenceKind::Uniform => 0.0,
            SequenceKind::PerturbedUniform { max_offset } => max_offset,
            SequenceKind::SineTypeCrossings { .. } => 0.5,
        };
        if self.origin == 0 {
            base
        } else {
            2.0 * base
        }
    }

    /// Closed-form lower bound on the separation constant, where known.
    pub fn separation_floor(&self) -> Option<f64> {
        match self.kind {
            SequenceKind::Uniform => Some(1.0),
            SequenceKind::PerturbedUniform { max_offset } => Some(1.0 - 2.0 * max_offset),
            SequenceKind::SineTypeCrossings { .. } => None,
        }
    }
}

fn crossing_root(amplitude: f64, g: &SineCombo, n: i64) -> Result<f64> {
    let f = |x: f64| amplitude * sin_pi(x) - g.eval(x);
    let df = |x: f64| amplitude * PI * cos_pi(x) - g.derivative(x);
    let c = n as f64;
    hybrid_root(f, df, c - 0.5, c + 0.5, ROOT_TOLERANCE)
}

/// Diagnostics produced by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub window: usize,
    pub lambda0_is_zero: bool,
    pub strictly_increasing: bool,
    /// Smallest gap `lambda_{n+1} - lambda_n` over `|n| <= M`.
    pub min_gap: f64,
    pub separation_floor: Option<f64>,
    pub separation_ok: bool,
    /// `max_{N <= M} |lambda_N + lambda_{-N}|`.
    pub symmetry_budget: f64,
    pub symmetry_ok: bool,
    /// `max_{|n| <= M} |lambda_n - n|`.
    pub max_offset: f64,
    pub offset_ok: bool,
    /// `lambda_M / M`, sine-type sequences only.
    pub density_ratio: Option<f64>,
    pub density_ok: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.lambda0_is_zero
            && self.strictly_increasing
            && self.separation_ok
            && self.symmetry_ok
            && self.offset_ok
            && self.density_ok
    }
}

/// Check the standing assumptions on `|n| <= window`.
pub fn validate(seq: &SamplingSequence, window: usize) -> Result<ValidationReport> {
    if window < 1 {
        return Err(Error::Precondition("validation window must be at least 1".into()));
    }
    let m = window as i64;
    let values = seq.nodes(window + 1);
    let at = |n: i64| values[(n + m + 1) as usize];

    let mut min_gap = f64::INFINITY;
    let mut increasing = true;
    for n in -m..m {
        let gap = at(n + 1) - at(n);
        increasing &= gap > 0.0;
        min_gap = min_gap.min(gap);
    }
    let symmetry_budget = (1..=m).map(|n| (at(n) + at(-n)).abs()).fold(0.0, f64::max);
    let max_offset = (-m..=m).map(|n| (at(n) - n as f64).abs()).fold(0.0, f64::max);

    let floor = seq.separation_floor();
    let separation_ok = min_gap > 0.0 && floor.is_none_or(|fl| min_gap >= fl - 1e-15);
    let offset_bound = seq.offset_bound();
    let symmetry_ok = symmetry_budget <= 2.0 * offset_bound + 1e-12;
    let offset_ok = max_offset <= offset_bound + 1e-15;

    let density_ratio = match seq.kind() {
        SequenceKind::SineTypeCrossings { .. } => Some(at(m) / m as f64),
        _ => None,
    };
    let density_ok = density_ratio.is_none_or(|r| (r - 1.0).abs() <= 0.02);

    Ok(ValidationReport {
        window,
        lambda0_is_zero: at(0) == 0.0,
        strictly_increasing: increasing,
        min_gap,
        separation_floor: floor,
        separation_ok,
        symmetry_budget,
        symmetry_ok,
        max_offset,
        offset_ok,
        density_ratio,
        density_ok,
    })
}
