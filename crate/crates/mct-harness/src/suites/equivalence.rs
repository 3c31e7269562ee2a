//! Two-sided comparisons between equivalent quantities. Every bracket below
//! follows from elementary covering and averaging arguments, so a failure
//! means a numerical error, not a loose constant.

use mct_core::norms::{
    ball_oscillation, campanato_norm, inf_over_constants, local_morrey_norm, lorentz_norm, morrey_norm, morrey_norm_balls, truncated_norm,
    CampanatoOptions, MorreyOptions, NormParams, Weight,
};
use rand::Rng;

use super::{case_rng, corpus, fmt_range, min_max, par_map, require_dim, space};
use crate::config::ExperimentConfig;
use crate::error::{config_error, Result};
use crate::report::{ExperimentReport, Row};

/// Relative slack for rounding in bracket checks.
const SLACK: f64 = 1e-9;

fn in_bracket(report: &mut ExperimentReport, name: &str, rows: &[Row], lo: f64, hi: f64, what: &str) {
    if let Some((a, b)) = min_max(rows.iter().map(|r| r.ratio)) {
        let ok = a >= lo * (1.0 - SLACK) && b <= hi * (1.0 + SLACK);
        report.verdict(name, ok, format!("{what} in {} (bracket {})", fmt_range(a, b), fmt_range(lo, hi)));
    }
}

fn lambda_sweep(cfg: &ExperimentConfig, default: &[f64]) -> Vec<f64> {
    match cfg.space.lambda {
        Some(l) => vec![l],
        None => cfg.sweep_or(default),
    }
}

/// Ball Morrey norms over all radii against aligned dyadic cubes, and
/// Campanato suprema over a finer center lattice against the default one.
pub fn discretization(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "discretization")?;
    let fine_offset = cfg.tol("fine_lattice_offset", 5.0) as i32;
    let fs = corpus(cfg, 50, 1, false)?;
    let mut report = ExperimentReport::new("discretization", cfg.seed);
    for lambda in lambda_sweep(cfg, &[0.125, 0.25]) {
        let prm = NormParams::new(1, p, f64::INFINITY, lambda)?;
        prm.check_morrey()?;
        let rows = par_map(&fs, |i, f| {
            let aligned = morrey_norm(f, &prm, &MorreyOptions::default())?.value;
            let balls = morrey_norm_balls(f, &prm)?.value;
            Ok(Row::new(format!("morrey-lambda{lambda}-f{i}"), &[("lambda", lambda), ("p", p)], balls, aligned))
        })?;
        // A cube of side 2^m is a ball of radius 2^{m−1}; a ball of radius
        // r ≤ 2^m meets at most two aligned cubes of side 2^{m+1}.
        let (lo, hi) = (2f64.powf(lambda), 2f64.powf(1.0 / p + 2.0 * lambda));
        in_bracket(&mut report, &format!("morrey lambda={lambda}"), &rows, lo, hi, "balls / aligned cubes");
        report.rows.extend(rows);

        let w = Weight::power(-lambda);
        let coarse_opts = CampanatoOptions::default();
        let fine_opts = CampanatoOptions { lattice_offset: fine_offset, ..coarse_opts };
        let rows = par_map(&fs, |i, f| {
            let coarse = campanato_norm(f, &w, p, f64::INFINITY, &coarse_opts)?.seminorm.value;
            let fine = campanato_norm(f, &w, p, f64::INFINITY, &fine_opts)?.seminorm.value;
            Ok(Row::new(format!("campanato-lambda{lambda}-f{i}"), &[("lambda", lambda), ("p", p)], fine, coarse))
        })?;
        // The fine lattice contains the coarse one; a ball of radius 2^k is
        // inside a coarse-lattice ball of radius 2^{k+1}, and oscillation is
        // at most twice the best constant approximation.
        in_bracket(&mut report, &format!("campanato lambda={lambda}"), &rows, 1.0, 2f64.powf(1.0 + lambda), "fine / coarse lattice");
        report.rows.extend(rows);
    }
    Ok(report)
}

/// `‖f‖_{M^λ_{p,∞}} ≤ (1 − p/s)^{−1/p} ‖f‖_{L_{s,∞}}` with `1/s = 1/p − λ/n`.
pub fn embeddings(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1, 2], "embeddings")?;
    let fs = corpus(cfg, 50, dim, false)?;
    let mut report = ExperimentReport::new("embeddings", cfg.seed);
    let n = dim as f64;
    for lambda in lambda_sweep(cfg, &[0.125 * n, 0.25 * n, 0.375 * n]) {
        let prm = NormParams::new(dim, p, f64::INFINITY, lambda)?;
        prm.check_morrey()?;
        let s = prm.s();
        let c = (1.0 - p / s).powf(-1.0 / p);
        let rows = par_map(&fs, |i, f| {
            let m = morrey_norm(f, &prm, &MorreyOptions::default())?.value;
            let l = lorentz_norm(f, s, f64::INFINITY)?;
            Ok(Row::new(format!("lambda{lambda}-f{i}"), &[("lambda", lambda), ("p", p), ("s", s)], m, l))
        })?;
        let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        report.verdict(format!("lambda={lambda}"), worst <= c * (1.0 + SLACK), format!("max Morrey / L_(s,∞) = {worst:.6} ≤ C = {c:.6}"));
        report.rows.extend(rows);
    }
    Ok(report)
}

/// `LM^λ_{p,q}` (balls about the origin) against `T^{−λ}_q L_p` (annuli).
pub fn lm_truncated(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, lambda) = space(cfg, 1, 2.0, f64::INFINITY, 0.25);
    require_dim(dim, &[1, 2], "lm-truncated")?;
    if !(lambda > 0.0 && p >= 1.0) {
        return config_error("need λ > 0 and p ≥ 1");
    }
    let qs = match cfg.space.q {
        Some(q) => vec![q],
        None => cfg.sweep_or(&[1.0, 2.0, f64::INFINITY]),
    };
    let fs = corpus(cfg, 50, dim, false)?;
    let mut report = ExperimentReport::new("lm-truncated", cfg.seed);
    for q in qs {
        let prm = NormParams::new(dim, p, q, lambda)?;
        let rows = par_map(&fs, |i, f| {
            let lm = local_morrey_norm(f, &prm)?.value;
            let t = truncated_norm(f, -lambda, q, p)?.value;
            Ok(Row::new(format!("q{q}-f{i}"), &[("q", q), ("lambda", lambda), ("p", p)], lm, t))
        })?;
        // Annulus k lies in the ball of radius 2^{k+1}; the ball of radius
        // 2^k is the union of the annuli below it, summed in ℓ_min(p,q).
        let r = p.min(q);
        let x = 2f64.powf(-lambda * r);
        let hi = (x / (1.0 - x)).powf(1.0 / r);
        in_bracket(&mut report, &format!("q={q}"), &rows, 2f64.powf(-lambda), hi, "LM / truncated");
        report.rows.extend(rows);
    }
    Ok(report)
}

/// `inf_c ‖f − c‖_{L_p(B)} ≤ ‖f − A_B f‖_{L_p(B)} ≤ 2 inf_c ‖f − c‖_{L_p(B)}`
/// on random balls.
pub fn inf_constants(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, _, _, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "inf-constants")?;
    let balls = cfg.tol("balls_per_function", 20.0) as usize;
    let rel = cfg.tol("rel", 1e-9);
    let ps = match cfg.space.p {
        Some(p) => vec![p],
        None => cfg.sweep_or(&[1.0, 2.0, 3.0]),
    };
    if ps.iter().any(|p| *p < 1.0) {
        return config_error("p must be at least 1");
    }
    let fs = corpus(cfg, 50, 1, true)?;
    let mut report = ExperimentReport::new("inf-constants", cfg.seed);
    for p in ps {
        let rows = par_map(&fs, |i, f| {
            let mut rng = case_rng(cfg.seed ^ 0x1f, i);
            let reach = f.max_radius();
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for _ in 0..balls {
                let center = rng.gen_range(-1.2 * reach..1.2 * reach);
                let r = f.cell_side() * 2f64.powf(rng.gen_range(-3.0..7.0));
                let (inf, _) = inf_over_constants(f, p, center, r)?;
                let osc = ball_oscillation(f, p, &[center], r).1.powf(1.0 / p);
                if inf > 0.0 {
                    lo = lo.min(osc / inf);
                    hi = hi.max(osc / inf);
                } else if osc > 1e-12 * f.max_abs() * r.powf(1.0 / p) {
                    lo = f64::INFINITY;
                    hi = f64::INFINITY;
                }
            }
            Ok(Row::new(format!("p{p}-f{i}"), &[("p", p), ("balls", balls as f64)], hi, 1.0).with_diagnostics(&[("min_ratio", lo)]))
        })?;
        let lo = rows.iter().filter_map(|r| r.diagnostics.strip_prefix("min_ratio=").and_then(|v| v.parse::<f64>().ok())).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        report.verdict(
            format!("p={p}"),
            lo >= 1.0 - rel && hi <= 2.0 * (1.0 + rel),
            format!("‖f − A_B f‖ / inf_c ‖f − c‖ in {} over {} balls (bracket [1, 2])", fmt_range(lo, hi), rows.len() * balls),
        );
        report.rows.extend(rows);
    }
    Ok(report)
}

/// Campanato seminorm with weight `r^{−λ}` against the ball Morrey norm.
pub fn campanato_morrey(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, _, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "campanato-morrey")?;
    let fs = corpus(cfg, 50, 1, false)?;
    let mut report = ExperimentReport::new("campanato-morrey", cfg.seed);
    for lambda in lambda_sweep(cfg, &[0.125, 0.25]) {
        let prm = NormParams::new(1, p, f64::INFINITY, lambda)?;
        prm.check_morrey()?;
        let w = Weight::power(-lambda);
        let rows = par_map(&fs, |i, f| {
            let c = campanato_norm(f, &w, p, f64::INFINITY, &CampanatoOptions::default())?.seminorm.value;
            let m = morrey_norm_balls(f, &prm)?.value;
            Ok(Row::new(format!("lambda{lambda}-f{i}"), &[("lambda", lambda), ("p", p)], c, m))
        })?;
        // Upper: oscillation is at most twice the norm on the ball. Lower:
        // averages over nested lattice balls telescope to zero at infinity,
        // and each step costs one oscillation term.
        let k = 4f64.powf(lambda) * (1.0 + 2f64.powf(lambda) / (1.0 - 2f64.powf(lambda - 1.0 / p)));
        in_bracket(&mut report, &format!("lambda={lambda}"), &rows, 1.0 / k, 2.0, "Campanato / ball Morrey");
        report.rows.extend(rows);
    }
    Ok(report)
}
