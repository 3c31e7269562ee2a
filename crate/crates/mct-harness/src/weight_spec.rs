use std::path::Path;

use mct_core::norms::Weight;

use crate::error::{HarnessError, Result};

fn bad(spec: &str, reason: impl Into<String>) -> HarnessError {
    HarnessError::WeightSpec { spec: spec.to_string(), reason: reason.into() }
}

/// Parses `pow:E` (the weight `r^E`), `powlog:E:L` (`r^E (1 + |ln r|)^L`) or
/// `table:PATH` (a CSV of consecutive dyadic exponents `k` and values
/// `w(2^k)`, with an optional header).
pub fn parse_weight(spec: &str) -> Result<Weight<f64>> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| bad(spec, "expected KIND:ARGS"))?;
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(spec, format!("not a number: {s:?}")));
    match kind {
        "pow" => Ok(Weight::power(num(rest)?)),
        "powlog" => {
            let (e, l) = rest.split_once(':').ok_or_else(|| bad(spec, "expected powlog:E:L"))?;
            Ok(Weight::power_log(num(e)?, num(l)?))
        }
        "table" => read_table(spec, Path::new(rest)),
        other => Err(bad(spec, format!("unknown kind {other:?}; use pow, powlog or table"))),
    }
}

fn read_table(spec: &str, path: &Path) -> Result<Weight<f64>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).comment(Some(b'#')).from_path(path)?;
    let mut rows: Vec<(i32, f64)> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(bad(spec, format!("line {}: expected two columns", i + 1)));
        }
        match (rec[0].parse::<i32>(), rec[1].parse::<f64>()) {
            (Ok(k), Ok(v)) => rows.push((k, v)),
            _ if i == 0 && rows.is_empty() => continue,
            _ => return Err(bad(spec, format!("line {}: cannot parse {:?}", i + 1, rec))),
        }
    }
    let Some(&(k0, _)) = rows.first() else {
        return Err(bad(spec, "table is empty"));
    };
    if rows.iter().enumerate().any(|(i, (k, _))| *k != k0 + i as i32) {
        return Err(bad(spec, "dyadic exponents must be consecutive and increasing"));
    }
    Ok(Weight::table(k0, rows.into_iter().map(|r| r.1).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_specs() {
        let w = parse_weight("pow:-0.25").unwrap();
        assert_eq!(w.power_exponent(), Some(-0.25));
        assert!((w.eval(16.0) - 0.5).abs() < 1e-15);
        let l = parse_weight("powlog:-0.5:-1").unwrap();
        assert!((l.eval(1.0) - 1.0).abs() < 1e-15);
        for s in ["pow", "pow:x", "cube:1", "powlog:1"] {
            assert!(parse_weight(s).is_err(), "{s}");
        }
    }

    #[test]
    fn table_specs() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("w.csv");
        std::fs::write(&good, "k,w\n-1,2\n0,1\n1,0.5\n").unwrap();
        let w = parse_weight(&format!("table:{}", good.display())).unwrap();
        assert!((w.at_dyadic(-1) - 2.0).abs() < 1e-15);
        assert!((w.at_dyadic(1) - 0.5).abs() < 1e-15);
        let gap = dir.path().join("gap.csv");
        std::fs::write(&gap, "0,1\n2,0.5\n").unwrap();
        assert!(parse_weight(&format!("table:{}", gap.display())).is_err());
        let neg = dir.path().join("neg.csv");
        std::fs::write(&neg, "0,1\n1,-1\n").unwrap();
        assert!(parse_weight(&format!("table:{}", neg.display())).is_err());
        assert!(parse_weight("table:/nonexistent/w.csv").is_err());
    }
}
