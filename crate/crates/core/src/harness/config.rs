use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::ProductWindow;
use crate::regularizers::{RegularizerKind, MAX_HYPER_ORDER};
use crate::sequences::{make_perturbed, make_sine_type, make_uniform, SamplingSequence, SineCombo, SineTerm};
use crate::signals::{ShiftedSinc, Signal, SignalKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceConfig {
    Uniform,
    Perturbed {
        #[serde(rename = "L")]
        max_offset: f64,
        /// Falls back to the top-level `seed`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    SineType {
        #[serde(rename = "A")]
        amplitude: f64,
        #[serde(default)]
        g: Vec<SineTerm>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalName {
    SincSigma,
    CosSigma,
    SincSquared,
    ShiftedSincCombo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalConfig {
    pub kind: SignalName,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<ShiftedSinc>,
}

impl Default for SignalConfig {
    fn default() -> Self {
        Self { kind: SignalName::SincSigma, sigma: FRAC_PI_2, terms: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegularizerConfig {
    #[default]
    Gaussian,
    HyperGaussian {
        m: u32,
    },
}

impl RegularizerConfig {
    pub fn kind(self) -> RegularizerKind {
        match self {
            Self::Gaussian => RegularizerKind::Gaussian,
            Self::HyperGaussian { m } => RegularizerKind::HyperGaussian { m },
        }
    }
}

/// `"auto"` or an explicit product half-width.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ProductWindowSpec {
    #[default]
    Auto,
    Fixed(usize),
}

impl ProductWindowSpec {
    pub fn for_n(self, n: usize) -> Result<ProductWindow> {
        match self {
            Self::Auto => Ok(ProductWindow::auto(n)),
            Self::Fixed(m) => ProductWindow::new(m),
        }
    }
}

impl Serialize for ProductWindowSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Auto => s.serialize_str("auto"),
            Self::Fixed(m) => s.serialize_u64(*m as u64),
        }
    }
}

impl<'de> Deserialize<'de> for ProductWindowSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            Count(u64),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w == "auto" => Ok(Self::Auto),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("M_prod must be \"auto\" or an integer, got {w:?}"))),
            Raw::Count(m) => Ok(Self::Fixed(m as usize)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default = "default_csv")]
    pub csv: String,
    #[serde(default = "default_summary")]
    pub summary: String,
}

fn default_csv() -> String {
    "sweep.csv".into()
}

fn default_summary() -> String {
    "summary.json".into()
}

impl Default for OutputPaths {
    fn default() -> Self {
        Self { csv: default_csv(), summary: default_summary() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    /// Also fit `log E = a + b N_* + c log N_*`.
    #[serde(default)]
    pub free_exponent: bool,
}

fn default_grid_points() -> usize {
    512
}

/// One experiment, read from a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sequence: SequenceConfig,
    #[serde(default)]
    pub signal: SignalConfig,
    #[serde(default)]
    pub regularizer: RegularizerConfig,
    #[serde(rename = "N_list", default)]
    pub n_list: Vec<usize>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(rename = "M_prod", default)]
    pub m_prod: ProductWindowSpec,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub fit: FitConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Parameter checks that do not need a sweep list.
    pub fn validate(&self) -> Result<()> {
        self.build_sequence()?;
        self.build_signal()?;
        if let RegularizerConfig::HyperGaussian { m } = self.regularizer {
            if !(1..=MAX_HYPER_ORDER).contains(&m) {
                return Err(Error::Config(format!("hyper-Gaussian order m = {m} must lie in 1..={MAX_HYPER_ORDER}")));
            }
        }
        if self.grid_points < 64 {
            return Err(Error::Config(format!("grid_points = {} must be at least 64", self.grid_points)));
        }
        if self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("N_list must be strictly increasing".into()));
        }
        if self.n_list.first() == Some(&0) {
            return Err(Error::Config("N_list entries must be at least 1".into()));
        }
        if let (ProductWindowSpec::Fixed(m), Some(&n)) = (self.m_prod, self.n_list.last()) {
            if m < 2 * n + 2 {
                return Err(Error::Config(format!("M_prod = {m} must be at least 2N + 2 = {} for N = {n}", 2 * n + 2)));
            }
        }
        if let ProductWindowSpec::Fixed(m) = self.m_prod {
            ProductWindow::new(m).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn build_sequence(&self) -> Result<SamplingSequence> {
        let seq = match &self.sequence {
            SequenceConfig::Uniform => Ok(make_uniform()),
            SequenceConfig::Perturbed { max_offset, seed } => make_perturbed(*max_offset, seed.unwrap_or(self.seed)),
            SequenceConfig::SineType { amplitude, g } => {
                SineCombo::new(g.clone()).and_then(|g| make_sine_type(*amplitude, g))
            }
        };
        seq.map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build_signal(&self) -> Result<Signal> {
        let s = &self.signal;
        if !(s.sigma > 0.0 && s.sigma < PI) {
            return Err(Error::Config(format!("signal sigma = {} must lie in (0, pi)", s.sigma)));
        }
        let kind = match s.kind {
            SignalName::SincSigma => SignalKind::SincSigma,
            SignalName::CosSigma => SignalKind::CosSigma,
            SignalName::SincSquared => SignalKind::SincSquared,
            SignalName::ShiftedSincCombo => SignalKind::ShiftedSincCombo(s.terms.clone()),
        };
        if !matches!(s.kind, SignalName::ShiftedSincCombo) && !s.terms.is_empty() {
            return Err(Error::Config("signal terms are only used by shifted_sinc_combo".into()));
        }
        Signal::new(kind, s.sigma).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn regularizer_kind(&self) -> RegularizerKind {
        self.regularizer.kind()
    }

    /// `4L` for perturbed sequences, otherwise 0.
    pub fn polynomial_exponent(&self) -> f64 {
        match self.sequence {
            SequenceConfig::Perturbed { max_offset, .. } => 4.0 * max_offset,
            _ => 0.0,
        }
    }
}

/// Parse `a`, `bi`, `a+bi` or `a-bi` (spaces ignored, `i` alone means 1).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("cannot parse complex number {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let finite = |v: f64| if v.is_finite() { Ok(v) } else { Err(bad()) };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(finite(s.parse().map_err(|_| bad())?)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { finite(re.parse().map_err(|_| bad())?)? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => finite(v.parse().map_err(|_| bad())?)?,
    };
    if re.is_nan() || im.is_nan() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}
