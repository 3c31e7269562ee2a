//! Campanato-type bounds for the Fourier transform and the Lipschitz
//! modulus of continuity.

use mct_core::functionals::{campanato_rhs, campanato_weight_conditions};
use mct_core::grid::StepFunction;
use mct_core::norms::{campanato_norm_grid, modulus_sup, truncated_norm, GridCampanatoOptions, ModulusOptions, Weight};

use super::{corpus, par_map, require_dim, space};
use crate::config::ExperimentConfig;
use crate::error::{config_error, Result};
use crate::report::{ExperimentReport, Row};

/// `(log₂ of the support radius, grid level)` of a corpus function.
fn scales(f: &StepFunction<f64>) -> (i32, i32) {
    (f.max_radius().max(f.cell_side()).log2().ceil() as i32, f.level())
}

pub fn campanato(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, p, q, _) = space(cfg, 1, 2.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "campanato")?;
    let alpha = cfg.tol("alpha", 0.5);
    let resolution = cfg.tol("resolution", 8.0) as usize;
    if !(alpha > 0.0 && alpha < 1.0) {
        return config_error("need 0 < α < 1");
    }
    let n = dim as f64;
    let v = Weight::power(-alpha);
    let w = Weight::power(-alpha - n / p);
    let conditions = campanato_weight_conditions(&v, &w, dim, p, (-40, 40))?;
    let fs = corpus(cfg, 50, dim, false)?;
    let rows = par_map(&fs, |i, f| {
        let (reach, level) = scales(f);
        let side = 2f64.powi(2 - level);
        let opts = GridCampanatoOptions { region: [(-side, side), (0.0, 0.0)], k_range: (-reach - 3, 2 - level), resolution, lattice_offset: 3 };
        let lhs = campanato_norm_grid(f, &w, p, q, &opts)?.seminorm.value;
        let rhs = campanato_rhs(f, &v, q)?.value;
        Ok(Row::new(format!("f{i}"), &[("alpha", alpha), ("p", p), ("q", q)], lhs, rhs))
    })?;
    let mut report = ExperimentReport::new("campanato", cfg.seed);
    report.verdict(
        "weight conditions",
        conditions.ok(),
        format!("v = r^-{alpha}, w = r^-{}: product sup {:.4}, lower sum {:.4}, upper sum {:.4}", alpha + n / p, conditions.product_sup, conditions.lower_sum, conditions.upper_sum),
    );
    let c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    report.verdict("bounded", c.is_finite() && c > 0.0, format!("Campanato seminorm of f̂ ≤ C · rhs with C = {c:.6}"));
    report.rows = rows;
    Ok(report)
}

pub fn lipschitz(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (dim, _, _, _) = space(cfg, 1, 1.0, f64::INFINITY, 0.0);
    require_dim(dim, &[1], "lipschitz")?;
    let alpha = cfg.tol("alpha", 0.5);
    let samples = cfg.tol("samples_per_t", 8.0) as usize;
    let ts: Vec<i32> = super::integer_sweep(cfg, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])?.into_iter().map(|j| j as i32).collect();
    if ts.is_empty() {
        return Ok(ExperimentReport::new("lipschitz", cfg.seed));
    }
    let fs = corpus(cfg, 50, 1, false)?;
    let rows = par_map(&fs, |i, f| {
        let side = 2f64.powi(1 - f.level());
        let opts = ModulusOptions { samples_per_t: samples, region: [(-side, side), (0.0, 0.0)] };
        let mut lhs = 0.0f64;
        let mut worst_t = 0.0;
        for &j in &ts {
            let t = 2f64.powi(-j);
            let v = modulus_sup(f, t, &opts)? / t.powf(alpha);
            if v > lhs {
                lhs = v;
                worst_t = t;
            }
        }
        let rhs = truncated_norm(f, alpha, f64::INFINITY, 1.0)?.value;
        Ok(Row::new(format!("f{i}"), &[("alpha", alpha)], lhs, rhs).with_diagnostics(&[("argmax_t", worst_t)]))
    })?;
    let mut report = ExperimentReport::new("lipschitz", cfg.seed);
    let c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    report.verdict(
        "bounded",
        c.is_finite() && c > 0.0,
        format!("ω(f̂, t)_∞ / t^{alpha} ≤ C sup_k 2^(kα) ∫_annulus |f| with C = {c:.6} over t = 2^-j, j in {ts:?}"),
    );
    report.rows = rows;
    Ok(report)
}
