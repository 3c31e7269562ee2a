//! Suites on the Fourier–Morrey bound, its Lorentz corollaries and the
//! radial monotone case.

use mct_core::constructions::{power_weighted_lp_norm, sharpness_example, sharpness_window};
use mct_core::functionals::{d_functional, d_functional_weighted, gm_constant};
use mct_core::grid::StepFunction;
use mct_core::norms::{fourier_morrey_norm, gamma_norm, lorentz_norm, FourierGridOptions, NormParams, Weight};

use super::{corpus, par_map, require_dim, space};
use crate::config::ExperimentConfig;
use crate::error::{config_error, Result};
use crate::report::{ExperimentReport, Row};

const LAMBDAS: [f64; 3] = [0.125, 0.25, 0.375];

/// Sampling window for `f̂` that follows the scale of `f`: cubes from well
/// below the reciprocal support radius up to a few octaves above the
/// reciprocal cell side. Dilating `f` shifts every level by the same amount.
pub(super) fn transform_window(f: &StepFunction<f64>, resolution: usize) -> FourierGridOptions<f64> {
    let level = f.level();
    let reach = f.max_radius().max(f.cell_side()).log2().ceil() as i32;
    let top = 3 - level;
    let side = 2f64.powi(top);
    FourierGridOptions { m_range: (-reach - 5, top), resolution, region: [(-side, side), (-side, side)] }
}

/// `‖f̂‖_{M^λ_{p,q}}` at `resolution` and twice that; the finer value is the
/// reported one and the relative change is the refinement delta.
fn transform_morrey(f: &StepFunction<f64>, w: &Weight<f64>, p: f64, q: f64, resolution: usize) -> Result<(f64, f64)> {
    let coarse = fourier_morrey_norm(f, w, p, q, &transform_window(f, resolution))?.0.value;
    let fine = fourier_morrey_norm(f, w, p, q, &transform_window(f, 2 * resolution))?.0.value;
    Ok((fine, coarse))
}

fn lambda_sweep(cfg: &ExperimentConfig) -> Vec<f64> {
    match cfg.space.lambda {
        Some(l) => vec![l],
        None => cfg.sweep_or(&LAMBDAS),
    }
}

pub fn thm_main(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, q, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "thm-main")?;
    let resolution = cfg.tol("resolution", 2.0) as usize;
    let stability = cfg.tol("stability", 0.10);
    let fs = corpus(cfg, 100, 1, false)?;
    let mut report = ExperimentReport::new("thm-main", cfg.seed);
    for lambda in lambda_sweep(cfg) {
        let w = NormParams::new(1, p, q, lambda)?.weight();
        let cases = par_map(&fs, |i, f| {
            let d = d_functional(f, p, q, lambda, None)?.value;
            let (lhs, coarse) = transform_morrey(f, &w, p, q, resolution)?;
            let delta = (lhs - coarse).abs() / lhs;
            let row = Row::new(format!("lambda{lambda}-f{i}"), &[("lambda", lambda), ("p", p), ("q", q)], lhs, d)
                .with_diagnostics(&[("coarse_ratio", coarse / d), ("refinement", delta)])
                .flag(delta > 0.01);
            Ok((row, coarse / d))
        })?;
        let fine = cases.iter().map(|c| c.0.ratio).fold(0.0, f64::max);
        let coarse = cases.iter().map(|c| c.1).fold(0.0, f64::max);
        let rows: Vec<Row> = cases.into_iter().map(|c| c.0).collect();
        let change = (fine - coarse).abs() / fine;
        report.verdict(
            format!("lambda={lambda} bounded"),
            fine.is_finite() && change <= stability,
            format!("max ‖f̂‖_M / D = {fine:.6}; at half resolution {coarse:.6} (change {:.2}%, allowed {:.0}%)", 100.0 * change, 100.0 * stability),
        );
        report.rows.extend(rows);
    }
    Ok(report)
}

pub fn cor_lorentz(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "cor-lorentz")?;
    let qs = cfg.space.q.map(|q| vec![q]).unwrap_or_else(|| vec![2.0, f64::INFINITY]);
    let fs = corpus(cfg, 100, 1, false)?;
    let mut report = ExperimentReport::new("cor-lorentz", cfg.seed);
    for lambda in lambda_sweep(cfg) {
        for &q in &qs {
            let sp = NormParams::new(1, p, q, lambda)?.s_prime();
            let rows = par_map(&fs, |i, f| {
                let d = d_functional(f, p, q, lambda, None)?.value;
                let l = lorentz_norm(f, sp, q)?;
                Ok(Row::new(format!("lambda{lambda}-q{q}-f{i}"), &[("lambda", lambda), ("q", q), ("s_prime", sp)], d, l))
            })?;
            let c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
            report.verdict(format!("lambda={lambda} q={q}"), c.is_finite(), format!("single constant C = {c:.6} for D ≤ C‖f‖_(L_{{{sp:.4},{q}}})"));
            report.rows.extend(rows);
        }
    }
    Ok(report)
}

/// `v(t) = u(t^{−1/n}) t^{1/p' − 1/q}`.
fn gamma_weight(u: Weight<f64>, n: f64, p: f64, q: f64) -> Weight<f64> {
    let e = 1.0 - 1.0 / p - 1.0 / q;
    let label = format!("{}(t^(-1/{n})) t^{e}", u.label());
    Weight::custom(label, move |t: f64| u.eval(t.powf(-1.0 / n)) * t.powf(e))
}

pub fn weighted(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, q, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "weighted")?;
    let log_exp = cfg.tol("log_exponent", -1.0);
    let fs = corpus(cfg, 50, 1, false)?;
    let mut report = ExperimentReport::new("weighted", cfg.seed);
    for lambda in lambda_sweep(cfg) {
        let u = Weight::power_log(-lambda, log_exp);
        let v = gamma_weight(u.clone(), 1.0, p, q);
        let rows = par_map(&fs, |i, f| {
            let d = d_functional_weighted(f, p, q, &u, None)?.value;
            let g = gamma_norm(f, &v, q)?;
            Ok(Row::new(format!("lambda{lambda}-f{i}"), &[("lambda", lambda), ("log_exponent", log_exp)], d, g))
        })?;
        let c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        report.verdict(format!("lambda={lambda}"), c.is_finite(), format!("D_u ≤ C‖f‖_Γ with C = {c:.6} for u = {}", u.label()));
        report.rows.extend(rows);
    }
    Ok(report)
}

pub fn gamma(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "gamma")?;
    let tol = cfg.tol("rel", 1e-9);
    let qs = cfg.space.q.map(|q| vec![q]).unwrap_or_else(|| vec![2.0, f64::INFINITY]);
    let fs = corpus(cfg, 50, 1, false)?;
    let mut report = ExperimentReport::new("gamma", cfg.seed);
    for lambda in lambda_sweep(cfg) {
        for &q in &qs {
            let prm = NormParams::new(1, p, q, lambda)?;
            let (s, sp) = (prm.s(), prm.s_prime());
            let v = Weight::power(1.0 / sp - 1.0 / q);
            let rows = par_map(&fs, |i, f| {
                let g = gamma_norm(f, &v, q)?;
                let l = lorentz_norm(f, sp, q)?;
                Ok(Row::new(format!("lambda{lambda}-q{q}-f{i}"), &[("lambda", lambda), ("q", q), ("s", s)], g, l))
            })?;
            let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
            let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
            report.verdict(
                format!("lambda={lambda} q={q}"),
                lo >= 1.0 - tol && hi <= s * (1.0 + tol),
                format!("Γ / Lorentz in [{lo:.6}, {hi:.6}], bracket [1, s = {s:.4}]"),
            );
            report.rows.extend(rows);
        }
    }
    Ok(report)
}

pub fn sharpness(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, q, lambda) = space(cfg, 1, 2.0, f64::INFINITY, 0.25);
    require_dim(dim, &[1], "sharpness")?;
    let prm = NormParams::new(1, p, q, lambda)?;
    let (lo, hi) = sharpness_window(&prm);
    let alpha = cfg.tol("alpha", 0.5 * (lo + hi));
    let d_tol = cfg.tol("d_change", 0.05);
    let growth_min = cfg.tol("growth", 1.5);
    let ks = super::integer_sweep(cfg, &[30.0, 60.0])?;
    if ks.iter().any(|k| *k == 0 || *k > 62) {
        return config_error("K must lie in 1..=62");
    }
    let sp = prm.s_prime();
    let rows = par_map(&ks, |_, &k| {
        let f = sharpness_example(alpha, k as u32, Some(&prm))?;
        let d = d_functional(&f, p, q, lambda, None)?.value;
        let l = lorentz_norm(&f, sp, f64::INFINITY)?;
        Ok(Row::new(format!("K{k}"), &[("K", k as f64), ("alpha", alpha), ("s", prm.s())], d, l))
    })?;
    let mut report = ExperimentReport::new("sharpness", cfg.seed);
    if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
        let d_change = (last.lhs / first.lhs - 1.0).abs();
        let growth = last.rhs / first.rhs;
        report.verdict(
            "D stable",
            d_change < d_tol,
            format!("D changes by {:.3}% from K = {} to K = {} (allowed {:.0}%), α = {alpha} in ({lo}, {hi})", 100.0 * d_change, ks[0], ks[ks.len() - 1], 100.0 * d_tol),
        );
        report.verdict("Lorentz growth", growth >= growth_min, format!("‖f_K‖_(L_{{{sp:.4},∞}}) grows by ×{growth:.4} (required ×{growth_min})"));
    }
    report.rows = rows;
    Ok(report)
}

/// Nonincreasing radial profiles on `[0, ∞)` used by the `gm` suite, as
/// `(name, level, values of consecutive cells from 0)`.
fn gm_profiles() -> Vec<(String, i32, Vec<f64>)> {
    let mut out = Vec::new();
    let h = 2f64.powi(-6);
    for theta in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6] {
        // Cell averages of t^{−θ} on (0, 1).
        let e = 1.0 - theta;
        let vals = (0..64).map(|k| (((k + 1) as f64 * h).powf(e) - (k as f64 * h).powf(e)) / (e * h)).collect();
        out.push((format!("power{theta}"), -6, vals));
    }
    out.push(("unit-box".into(), 0, vec![1.0]));
    out.push(("wide-box".into(), 0, vec![1.0; 4]));
    out.push(("staircase".into(), -1, vec![3.0, 3.0, 2.0, 2.0, 1.0, 1.0]));
    out.push(("linear".into(), -6, (0..64).map(|k| 1.0 - (k as f64 + 0.5) * h).collect()));
    out.push(("exponential".into(), -3, (0..64).map(|k| (-(k as f64 + 0.5) / 8.0).exp()).collect()));
    out.push(("reciprocal".into(), -2, (0..64).map(|k| 1.0 / (1.0 + (k as f64 + 0.5) / 4.0)).collect()));
    out
}

/// `‖|x|^γ f‖_{L_q}`, including `q = ∞`.
fn weighted_lq(f: &StepFunction<f64>, gamma: f64, q: f64) -> f64 {
    if q.is_finite() {
        return power_weighted_lp_norm(f, gamma, q);
    }
    let h = f.cell_side();
    f.cells()
        .map(|(k, c)| {
            let (a, b) = ((k[0] as f64 * h).abs(), ((k[0] + 1) as f64 * h).abs());
            c.norm() * if gamma >= 0.0 { a.max(b) } else { a.min(b) }.powf(gamma)
        })
        .fold(0.0, f64::max)
}

pub fn gm(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, q, lambda) = space(cfg, 1, 2.0, 2.0, 0.25);
    require_dim(dim, &[1], "gm")?;
    let n = 1.0;
    if !(lambda > (n / p - n / 2.0).max(0.0) && lambda < n / p) || q < 1.0 {
        return config_error("need max(0, n/p − n/2) < λ < n/p and q ≥ 1");
    }
    let resolution = cfg.tol("resolution", 2.0) as usize;
    let gamma = n - n / p - n / q + lambda;
    let w = Weight::power(-lambda);
    let profiles = gm_profiles();
    let rows = par_map(&profiles, |_, (name, level, vals)| {
        let prof = StepFunction::from_real(1, *level, vals.iter().enumerate().map(|(k, v)| ([k as i64, 0], *v)))?;
        let f = mct_core::constructions::even_extension(&prof)?;
        let gm_c = gm_constant(&prof, 2.0, (-12, 12))?;
        let (lhs, coarse) = transform_morrey(&f, &w, p, q, resolution)?;
        let rhs = weighted_lq(&f, gamma, q);
        let delta = (lhs - coarse).abs() / lhs;
        Ok(Row::new(name.clone(), &[("p", p), ("q", q), ("lambda", lambda), ("gamma", gamma)], lhs, rhs)
            .with_diagnostics(&[("gm_constant", gm_c), ("refinement", delta)])
            .flag(delta > 0.01))
    })?;
    let mut report = ExperimentReport::new("gm", cfg.seed);
    let c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let monotone = rows.iter().all(|r| !r.diagnostics.contains("gm_constant=inf"));
    report.verdict("bounded", c.is_finite(), format!("‖f̂‖_M ≤ C‖|x|^{gamma} f‖_(L_{q}) with C = {c:.6} over {} profiles", rows.len()));
    report.verdict("general monotone", monotone, "every profile has a finite GM constant");
    report.rows = rows;
    Ok(report)
}
