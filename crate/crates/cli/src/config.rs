//! Experiment configuration (JSON).
//!
//! Precedence, highest first: command-line flags, then the config file,
//! then the built-in defaults below.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bohrsum::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::HarnessError;

/// An exact rational written `"num/den"` (or a bare integer) in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioText(pub Rational);

impl fmt::Display for RatioText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for RatioText {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_ratio(s).map(RatioText)
    }
}

impl Serialize for RatioText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatioText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub fn parse_ratio(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i128 = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: i128 = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// How the radius of each sampled Bohr set is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EpsilonPolicy {
    /// The same radius everywhere.
    Fixed(RatioText),
    /// A regular value in `(δ, 2δ)`.
    RegularNear(RatioText),
    /// The smallest radius `m/p` with `|B| ≥ p^θ`.
    TargetSizeExponent(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterSelection {
    All,
    /// `n` distinct nontrivial indices drawn per Bohr set, reported ascending.
    Sample(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    /// Inclusive; `lo > hi` (or a range without primes) is an empty sweep.
    pub prime_range: [u64; 2],
    pub d_values: Vec<usize>,
    pub gamma_samples: usize,
    pub epsilon_policy: EpsilonPolicy,
    pub characters: CharacterSelection,
    pub k_values: Vec<u32>,
    pub seed: u64,
    #[serde(rename = "constant_C")]
    pub constant_c: f64,
    pub output_path: Option<PathBuf>,
    /// Fill `runtime_ms`; off by default because timings break byte-equality.
    pub record_timing: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Random instances per randomized suite in `verify`.
    pub verify_instances: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment_id: "bohrsum".into(),
            prime_range: [3, 199],
            d_values: vec![1, 2],
            gamma_samples: 4,
            epsilon_policy: EpsilonPolicy::RegularNear(RatioText(Rational::new(1, 10))),
            characters: CharacterSelection::Sample(4),
            k_values: vec![2, 3],
            seed: 1,
            constant_c: 1.0,
            output_path: None,
            record_timing: false,
            threads: None,
            verify_instances: 20,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        let [lo, hi] = self.prime_range;
        if lo < 3 {
            return bad(format!("prime_range lower end {lo} is below 3"));
        }
        if hi > bohrsum::zp::MAX_MODULUS {
            return bad(format!("prime_range upper end {hi} exceeds 2^31"));
        }
        if self.d_values.is_empty() || self.d_values.iter().any(|&d| d == 0 || d > 8) {
            return bad("d_values must be nonempty with entries in 1..=8".into());
        }
        if self.gamma_samples == 0 {
            return bad("gamma_samples must be positive".into());
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return bad("k_values must be nonempty and positive".into());
        }
        if !(self.constant_c.is_finite() && self.constant_c > 0.0) {
            return bad("constant_C must be a positive real".into());
        }
        match self.epsilon_policy {
            EpsilonPolicy::Fixed(RatioText(e)) => {
                if e <= Rational::from_integer(0) || e > Rational::new(1, 2) {
                    return bad(format!("fixed epsilon {e} outside (0, 1/2]"));
                }
            }
            EpsilonPolicy::RegularNear(RatioText(e)) => {
                if e <= Rational::from_integer(0) || e > Rational::new(1, 4) {
                    return bad(format!("regular_near delta {e} outside (0, 1/4]"));
                }
            }
            EpsilonPolicy::TargetSizeExponent(t) => {
                if !(t > 0.0 && t <= 1.0) {
                    return bad(format!("target_size_exponent {t} outside (0, 1]"));
                }
            }
        }
        if let CharacterSelection::Sample(0) = self.characters {
            return bad("characters sample count must be positive".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        Ok(())
    }

    /// Primes in `prime_range`, ascending.
    pub fn primes(&self) -> Vec<u32> {
        let [lo, hi] = self.prime_range;
        (lo..=hi)
            .filter(|&n| bohrsum::zp::is_prime(n))
            .map(|n| n as u32)
            .collect()
    }
}
