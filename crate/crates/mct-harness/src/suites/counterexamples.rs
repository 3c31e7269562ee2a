//! Counterexample suites: the lacunary family against the unweighted bound
//! and Rudin–Shapiro polynomials against the weighted one.

use std::f64::consts::PI;

use mct_core::constructions::{lacunary_product, polynomial_l2_on_interval, power_box_morrey_norm, rudin_shapiro, Lacunary};
use mct_core::fourier::ft_lp_on_cube_adaptive;
use mct_core::grid::DyadicCube;
use mct_core::norms::{morrey_norm, MorreyOptions, NormParams};

use super::{fit_into, fmt_range, integer_sweep, min_max, par_map, require_dim, space};
use crate::config::ExperimentConfig;
use crate::error::{config_error, Result};
use crate::report::{ExperimentReport, Row};

/// Largest `N` whose lacunary step function is also checked cell by cell.
const STEP_CHECK_MAX: u64 = 24;
/// Largest `N` checked by quadrature; beyond it the transform oscillates
/// `2^N` times on the unit interval and adaptive quadrature cannot resolve it.
const QUAD_CHECK_MAX: u64 = 10;

pub fn a1(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, lambda) = space(cfg, 1, 2.0, f64::INFINITY, 0.5);
    require_dim(dim, &[1, 2], "appendix-a1")?;
    let (lo, hi) = (cfg.tol("slope_lo", 0.4) * dim as f64, cfg.tol("slope_hi", 0.6) * dim as f64);
    let ns = integer_sweep(cfg, &[4.0, 8.0, 16.0, 32.0, 64.0])?;
    if ns.iter().any(|n| *n == 0 || *n > 64) {
        return config_error("N must lie in 1..=64");
    }
    let rows = par_map(&ns, |_, &n| {
        let lac = Lacunary { terms: n as u32, dim };
        let lhs = lac.transform_l2_unit();
        let rhs = lac.morrey_norm(p, lambda);
        // Independent one-dimensional checks: quadrature of the transform on
        // the unit interval and the generic Morrey routine on the step function.
        let mut diag = Vec::new();
        let mut ok = true;
        if dim == 1 && n <= QUAD_CHECK_MAX {
            let quad = ft_lp_on_cube_adaptive(&lac, 2.0, &DyadicCube::new(1, 0, &[0]), 1e-8)?;
            let dev = (quad.value - lhs).abs() / lhs;
            diag.push(("quadrature_dev", dev));
            ok &= dev <= 0.01;
        }
        if dim == 1 && n <= STEP_CHECK_MAX {
            let f = lacunary_product::<f64>(n as u32, 1)?;
            let m = morrey_norm(&f, &NormParams::new(1, p, f64::INFINITY, lambda)?, &MorreyOptions::default())?.value;
            let dev = (m - rhs).abs() / rhs;
            diag.push(("morrey_dev", dev));
            ok &= dev <= 1e-12;
        }
        let row = Row::new(format!("N{n}"), &[("N", n as f64), ("dim", dim as f64)], lhs, rhs).with_diagnostics(&diag).flag(!ok);
        Ok((row, ok))
    })?;
    let agree = rows.iter().all(|r| r.1);
    let rows: Vec<Row> = rows.into_iter().map(|r| r.0).collect();
    let mut report = ExperimentReport::new("appendix-a1", cfg.seed);
    let pts: Vec<(f64, f64)> = ns.iter().zip(&rows).map(|(n, r)| (*n as f64, r.ratio)).collect();
    if let Some(fit) = fit_into(&mut report, &pts) {
        report.verdict("slope", fit.slope >= lo && fit.slope <= hi, format!("slope {:.4} ± {:.4} in [{lo}, {hi}]", fit.slope, fit.stderr));
    }
    report.verdict("oracles", agree, "closed forms agree with quadrature and with the step-function Morrey norm");
    report.rows = rows;
    Ok(report)
}

pub fn a2(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, lambda) = space(cfg, 1, 4.0, f64::INFINITY, 0.125);
    require_dim(dim, &[1], "appendix-a2")?;
    let gamma = cfg.tol("gamma", 0.125);
    let beta = cfg.tol("beta", 0.25);
    let (b_lo, b_hi) = (cfg.tol("bracket_lo", 0.1), cfg.tol("bracket_hi", 0.45));
    if !(lambda > 0.0 && lambda < 1.0 / p && gamma >= 0.0) {
        return config_error("need 0 < λ < 1/p and γ ≥ 0");
    }
    let js = integer_sweep(cfg, &[4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0])?;
    if js.iter().any(|j| *j == 0 || *j > 20) {
        return config_error("j must lie in 1..=20");
    }
    let (a, b) = (1.0 / (4.0 * PI), 1.0 / (2.0 * PI));
    // On (a, b): |y|^{−β} ≥ b^{−β} and |sinc(πy)| ≥ sinc(πb), so this factor
    // times ‖P_N‖_{L_2(a,b)} bounds ‖|y|^{−β} f̂_N‖_{L_2(a,b)} from below.
    let factor = b.powf(-beta) * (PI * b).sin() / (PI * b);
    let rows = par_map(&js, |_, &j| {
        let eps = rudin_shapiro(1 << j)?;
        let n = (1usize << j) - 1;
        let poly = polynomial_l2_on_interval(&eps, a, b);
        let lhs = factor * poly;
        let rhs = power_box_morrey_norm(j as i32, gamma, p, lambda);
        Ok(Row::new(format!("j{j}"), &[("N", n as f64), ("gamma", gamma), ("lambda", lambda), ("beta", beta)], lhs, rhs)
            .with_diagnostics(&[("poly_over_sqrt_n", poly / (n as f64).sqrt())]))
    })?;
    let mut report = ExperimentReport::new("appendix-a2", cfg.seed);
    let flat: Vec<f64> = js.iter().zip(&rows).map(|(j, r)| r.lhs / factor / (((1u64 << j) - 1) as f64).sqrt()).collect();
    if let Some((lo, hi)) = min_max(flat) {
        report.verdict("flatness bracket", lo >= b_lo && hi <= b_hi, format!("‖P_N‖_(L_2(1/4π,1/2π)) / √N in {} (bracket [{b_lo}, {b_hi}])", fmt_range(lo, hi)));
    }
    let pts: Vec<(f64, f64)> = js.iter().zip(&rows).map(|(j, r)| (((1u64 << j) - 1) as f64, r.ratio)).collect();
    if let Some(fit) = fit_into(&mut report, &pts) {
        let need = 0.4 - (gamma - lambda + 1.0 / p);
        report.verdict("contradiction slope", fit.slope >= need, format!("slope {:.4} ± {:.4}, required ≥ {need:.4}", fit.slope, fit.stderr));
    }
    report.rows = rows;
    Ok(report)
}
