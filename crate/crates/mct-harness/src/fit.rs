use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// Standard error of the slope; zero for an exact fit.
    pub stderr: f64,
    pub intercept: f64,
}

/// Fits `ln y = a + b ln x`; needs at least three points with positive
/// coordinates and two distinct abscissae.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(HarnessError::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some((x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(HarnessError::Fit(format!("nonpositive or nonfinite point ({x}, {y})")));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::Fit("all abscissae coincide".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, stderr, intercept })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let sq: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, (i * i) as f64)).collect();
        let f = fit_slope(&sq).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.stderr < 1e-12);
        let flat: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, 3.5)).collect();
        assert!(fit_slope(&flat).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn perturbed_square_root() {
        let pts: Vec<(f64, f64)> = (0..8)
            .map(|i| {
                let x = 2f64.powi(i + 2);
                (x, x.sqrt() * (1.0 + 0.05 * if i % 2 == 0 { 1.0 } else { -1.0 }))
            })
            .collect();
        let f = fit_slope(&pts).unwrap();
        assert!((0.45..=0.55).contains(&f.slope), "{f:?}");
        assert!(f.stderr > 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_slope(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(fit_slope(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
    }
}
