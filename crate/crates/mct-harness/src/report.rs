use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ext_float;
use crate::error::Result;
use crate::fit::SlopeFit;

/// One case of a suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub case: String,
    /// `key=value` pairs separated by `;`.
    pub inputs: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Set when a quadrature refinement moved the value by more than 1%.
    pub flagged: bool,
    pub diagnostics: String,
}

impl Row {
    pub fn new(case: impl Into<String>, inputs: &[(&str, f64)], lhs: f64, rhs: f64) -> Self {
        Self { case: case.into(), inputs: format_pairs(inputs), lhs, rhs, ratio: lhs / rhs, flagged: false, diagnostics: String::new() }
    }

    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio = ratio;
        self
    }

    pub fn with_diagnostics(mut self, pairs: &[(&str, f64)]) -> Self {
        self.diagnostics = format_pairs(pairs);
        self
    }

    pub fn flag(mut self, flagged: bool) -> Self {
        self.flagged = flagged;
        self
    }
}

/// JSON number, or the string `"inf"`, `"-inf"` or `"nan"` for values JSON
/// cannot represent.
pub fn json_number(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map(serde_json::Value::Number).unwrap_or_else(|| {
        serde_json::Value::String(if v.is_nan() { "nan" } else if v > 0.0 { "inf" } else { "-inf" }.into())
    })
}

/// `key=value;key=value` with shortest round-trip formatting.
pub fn format_pairs(pairs: &[(&str, f64)]) -> String {
    let mut s = String::new();
    for (i, (k, v)) in pairs.iter().enumerate() {
        if i > 0 {
            s.push(';');
        }
        let _ = write!(s, "{k}={v}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    #[serde(with = "ext_float::opt")]
    pub max_ratio: Option<f64>,
    pub slope: Option<SlopeFit>,
    /// Rows whose quadrature refinement exceeded 1% of the value.
    pub flagged: usize,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl ExperimentReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        Self {
            rows: Vec::new(),
            summary: Summary {
                suite: suite.to_string(),
                seed,
                cases: 0,
                max_ratio: None,
                slope: None,
                flagged: 0,
                verdicts: Vec::new(),
                pass: true,
            },
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.summary.verdicts.push(Verdict { name: name.into(), pass, detail: detail.into() });
    }

    pub fn set_slope(&mut self, fit: SlopeFit) {
        self.summary.slope = Some(fit);
    }

    /// Largest recorded ratio (NaN rows are ignored).
    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.ratio).filter(|r| !r.is_nan()).reduce(f64::max)
    }

    /// Fills the derived summary fields; an empty report gets a single
    /// "no cases" verdict in place of the suite's own.
    pub fn finish(mut self) -> Self {
        let s = &mut self.summary;
        s.cases = self.rows.len();
        s.flagged = self.rows.iter().filter(|r| r.flagged).count();
        if self.rows.is_empty() {
            s.verdicts = vec![Verdict { name: "no cases".into(), pass: true, detail: "the sweep was empty".into() }];
            s.slope = None;
        }
        s.max_ratio = self.rows.iter().map(|r| r.ratio).filter(|r| !r.is_nan()).reduce(f64::max);
        s.pass = s.verdicts.iter().all(|v| v.pass);
        self
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn verdict_named(&self, name: &str) -> Option<&Verdict> {
        self.summary.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        if self.rows.is_empty() {
            w.write_record(["case", "inputs", "lhs", "rhs", "ratio", "flagged", "diagnostics"])?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary)?)
    }

    /// Writes the rows to `path` and the summary to `path` with a `.json`
    /// extension; returns the summary path.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_csv()?)?;
        let json = path.with_extension("json");
        std::fs::write(&json, self.summary_json()?)?;
        Ok(json)
    }

    /// One line per verdict.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for v in &self.summary.verdicts {
            let _ = writeln!(s, "{} [{}] {}: {}", if v.pass { "PASS" } else { "FAIL" }, self.summary.suite, v.name, v.detail);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_says_no_cases() {
        let mut r = ExperimentReport::new("cstar", 1);
        r.verdict("bracket", false, "unused");
        let r = r.finish();
        assert!(r.passed());
        assert_eq!(r.summary.verdicts[0].name, "no cases");
        assert!(r.to_csv().unwrap().starts_with("case,inputs"));
    }

    #[test]
    fn summary_tracks_rows_and_verdicts() {
        let mut r = ExperimentReport::new("x", 3);
        r.push(Row::new("a", &[("N", 4.0)], 1.0, 2.0));
        r.push(Row::new("b", &[("N", 8.0)], 3.0, 1.0).flag(true));
        r.push(Row::new("c", &[], 0.0, 0.0));
        r.verdict("one", true, "");
        r.verdict("two", false, "");
        let r = r.finish();
        assert_eq!(r.summary.cases, 3);
        assert_eq!(r.summary.flagged, 1);
        assert_eq!(r.summary.max_ratio, Some(3.0));
        assert!(!r.passed());
        let csv = r.to_csv().unwrap();
        assert!(csv.contains("a,N=4,1.0,2.0,0.5,false,"));
        let back: Summary = serde_json::from_str(&r.summary_json().unwrap()).unwrap();
        assert_eq!(back, r.summary);
    }
}
