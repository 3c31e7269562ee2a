//! Suites on the Morrey form of Pitt's inequality
//! `‖|x|^{−δ} f̂‖_{M^ν_{q,∞}} ≲ ‖|x|^γ f‖_{L_p}`.

use mct_core::constructions::{modulated_box, power_weighted_lp_norm};
use mct_core::fourier::PowerWeighted;
use mct_core::grid::StepFunction;
use mct_core::norms::{fourier_morrey_norm, FourierGridOptions, Weight};

use super::{fit_into, integer_sweep, par_map, require_dim, space};
use crate::config::ExperimentConfig;
use crate::error::{config_error, Result};
use crate::report::{ExperimentReport, Row};

struct PittParams {
    p: f64,
    q: f64,
    nu: f64,
    delta: f64,
    gamma: f64,
}

fn pitt_params(cfg: &ExperimentConfig, suite: &str) -> Result<PittParams> {
    let (dim, p, q, _) = space(cfg, 1, 2.0, 2.0, 0.0);
    require_dim(dim, &[1], suite)?;
    let prm = PittParams { p, q, nu: cfg.tol("nu", 0.25), delta: cfg.tol("delta", 0.125), gamma: cfg.tol("gamma", 0.375) };
    if !(p >= 1.0 && q >= 1.0 && prm.delta >= 0.0 && prm.gamma >= 0.0 && prm.nu >= 0.0) {
        return config_error("need p, q ≥ 1 and nonnegative ν, δ, γ");
    }
    Ok(prm)
}

pub fn homogeneity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let prm = pitt_params(cfg, "pitt-homogeneity")?;
    let rel = cfg.tol("rel", 0.02);
    let js = integer_sweep(cfg, &[0.0, 1.0, 2.0, 3.0])?;
    if js.iter().any(|j| *j > 20) {
        return config_error("dilation exponents must lie in 0..=20");
    }
    let base = StepFunction::<f64>::indicator(1, 0, [[0, 0]])?;
    let w = Weight::power(-prm.nu);
    let rows = par_map(&js, |_, &j| {
        let j = j as i32;
        let f = base.dilate(j);
        let g = PowerWeighted { inner: f.clone(), exponent: -prm.delta };
        // The sampling window moves with the dilation, so every sample of
        // the dilated transform is an exact rescaling of a base sample.
        let side = 2f64.powi(4 + j);
        let opts = FourierGridOptions { m_range: (-6 + j, 4 + j), resolution: 4, region: [(-side, side), (-side, side)] };
        let lhs = fourier_morrey_norm(&g, &w, prm.q, f64::INFINITY, &opts)?.0.value;
        let rhs = power_weighted_lp_norm(&f, prm.gamma, prm.p);
        Ok(Row::new(format!("j{j}"), &[("dilation", 2f64.powi(j)), ("nu", prm.nu), ("delta", prm.delta), ("gamma", prm.gamma)], lhs, rhs))
    })?;
    let mut report = ExperimentReport::new("pitt-homogeneity", cfg.seed);
    let xs: Vec<f64> = js.iter().map(|j| 2f64.powi(*j as i32)).collect();
    let expect_lhs = -1.0 - prm.nu - prm.delta + 1.0 / prm.q;
    let expect_rhs = -1.0 / prm.p - prm.gamma;
    let lhs_pts: Vec<(f64, f64)> = xs.iter().zip(&rows).map(|(x, r)| (*x, r.lhs)).collect();
    let rhs_pts: Vec<(f64, f64)> = xs.iter().zip(&rows).map(|(x, r)| (*x, r.rhs)).collect();
    if let (Ok(a), Some(b)) = (crate::fit::fit_slope(&rhs_pts), fit_into(&mut report, &lhs_pts)) {
        let ok = |s: f64, e: f64| (s - e).abs() <= rel * e.abs();
        report.verdict("transform side", ok(b.slope, expect_lhs), format!("exponent {:.5} vs −n − ν − δ + n/q = {expect_lhs}", b.slope));
        report.verdict("function side", ok(a.slope, expect_rhs), format!("exponent {:.5} vs −n/p − γ = {expect_rhs}", a.slope));
    }
    report.rows = rows;
    Ok(report)
}

pub fn necessity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let prm = pitt_params(cfg, "pitt-necessity")?;
    let band = cfg.tol("slope_band", 0.1);
    let ns = integer_sweep(cfg, &[8.0, 16.0, 32.0, 64.0])?;
    let w = Weight::power(-prm.nu);
    let rows = par_map(&ns, |_, &n| {
        let freq = n as f64;
        let f = modulated_box(freq, 1)?;
        let rhs = power_weighted_lp_norm(&f.base, prm.gamma, prm.p);
        let g = PowerWeighted { inner: f, exponent: -prm.delta };
        // Cubes near the frequency, where F̂_N carries its bump.
        let opts = FourierGridOptions { m_range: (-6, 2), resolution: 4, region: [(freq - 4.0, freq + 4.0), (0.0, 0.0)] };
        let lhs = fourier_morrey_norm(&g, &w, prm.q, f64::INFINITY, &opts)?.0.value;
        Ok(Row::new(format!("N{n}"), &[("N", freq), ("nu", prm.nu), ("delta", prm.delta), ("gamma", prm.gamma)], lhs, rhs))
    })?;
    let mut report = ExperimentReport::new("pitt-necessity", cfg.seed);
    let pts: Vec<(f64, f64)> = rows.iter().zip(&ns).map(|(r, n)| (*n as f64, r.ratio)).collect();
    if let Some(fit) = fit_into(&mut report, &pts) {
        let target = -prm.delta;
        report.verdict("slope", (fit.slope - target).abs() <= band, format!("slope {:.4} ± {:.4} vs −δ = {target} (band ±{band})", fit.slope, fit.stderr));
    }
    report.rows = rows;
    Ok(report)
}
