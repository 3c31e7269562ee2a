use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Space parameters; unset fields take the suite's defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpaceParams {
    pub dim: Option<usize>,
    #[serde(with = "ext_float::opt")]
    pub p: Option<f64>,
    #[serde(with = "ext_float::opt")]
    pub q: Option<f64>,
    pub lambda: Option<f64>,
}

/// Random corpus settings; `count` falls back to the suite default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub count: Option<usize>,
    /// Inclusive range of the number of cells.
    pub cells: (usize, usize),
    /// Inclusive range of the grid level.
    pub levels: (i32, i32),
    /// Range of coefficient moduli, sampled log-uniformly.
    pub modulus: (f64, f64),
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { count: None, cells: (1, 64), levels: (-4, 2), modulus: (0.25, 4.0) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: String,
    pub seed: u64,
    pub space: SpaceParams,
    /// Values of the suite's swept parameter; `None` keeps the default sweep
    /// and an empty list yields a report with no cases.
    pub sweep: Option<Vec<f64>>,
    pub corpus: CorpusConfig,
    /// Report destination; the JSON summary goes next to it.
    pub output: Option<PathBuf>,
    /// Overrides of named tolerances and brackets.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suite: String::new(),
            seed: 1,
            space: SpaceParams::default(),
            sweep: None,
            corpus: CorpusConfig::default(),
            output: None,
            tolerances: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), ..Self::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sweep(mut self, sweep: Vec<f64>) -> Self {
        self.sweep = Some(sweep);
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.corpus.count = Some(count);
        self
    }

    pub fn with_tolerance(mut self, key: impl Into<String>, value: f64) -> Self {
        self.tolerances.insert(key.into(), value);
        self
    }

    /// Named tolerance with a suite default.
    pub fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    pub fn sweep_or(&self, default: &[f64]) -> Vec<f64> {
        self.sweep.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn count_or(&self, default: usize) -> usize {
        self.corpus.count.unwrap_or(default)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Serde helpers writing infinite floats as the strings `"inf"`/`"-inf"`,
/// which JSON cannot otherwise represent.
pub(crate) mod ext_float {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn decode<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(v) => Ok(v),
            Repr::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => other.parse().map_err(|_| E::custom(format!("not a number: {s}"))),
            },
        }
    }

    fn encode<S: Serializer>(v: f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => encode(*x, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Option::<Repr>::deserialize(d)?.map(decode).transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let mut cfg = ExperimentConfig::new("thm-main").with_seed(7).with_sweep(vec![0.125, 0.25]).with_tolerance("stability", 0.1);
        cfg.space.q = Some(f64::INFINITY);
        cfg.space.p = Some(2.0);
        cfg.output = Some("out/report.csv".into());
        let text = cfg.to_json().unwrap();
        assert!(text.contains("\"inf\""));
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn missing_fields_take_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"suite": "cstar", "space": {"q": "infinity"}}"#).unwrap();
        assert_eq!(cfg.seed, 1);
        assert_eq!(cfg.space.q, Some(f64::INFINITY));
        assert_eq!(cfg.corpus, CorpusConfig::default());
        assert!(ExperimentConfig::from_json(r#"{"suite": "cstar", "bogus": 1}"#).is_err());
    }
}
