//! Suites on sequences: rearrangement averages, `c**_N`, hyperbolic
//! crosses, the `d_{s,k}` bound and the discrete Hardy inequality.

use std::collections::BTreeSet;

use mct_core::grid::Idx;
use mct_core::sequences::{
    cstar_star_profile, dsk_sample, hardy_bound_check, hyperbolic_cross, inverse_product_seq, rearrange, HardyDirection, IndexedSeq,
};
use rand::Rng;

use super::{case_rng, fmt_range, integer_sweep, min_max, par_map, require_dim};
use crate::config::ExperimentConfig;
use crate::error::{config_error, Result};
use crate::report::{ExperimentReport, Row};

/// Largest support for which subsets are enumerated.
const MAX_SUPPORT: usize = 12;

/// `sup_{|e| = ν} (1/ν) Σ_{e} a` by enumerating subsets of the support;
/// positions off the support contribute zeros.
fn best_subset_average(values: &[f64], nu: usize) -> f64 {
    let s = values.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << s) {
        if mask.count_ones() as usize > nu {
            continue;
        }
        let sum: f64 = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| values[i]).sum();
        best = best.max(sum);
    }
    best / nu as f64
}

pub fn rearrangement(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let tol = cfg.tol("exact", 1e-12);
    let count = cfg.count_or(500);
    let cases: Vec<usize> = (0..count).collect();
    let rows = par_map(&cases, |_, &i| {
        let mut rng = case_rng(cfg.seed, i);
        let support = rng.gen_range(1..=MAX_SUPPORT);
        let mut positions = BTreeSet::new();
        while positions.len() < support {
            positions.insert(rng.gen_range(-20i64..20));
        }
        // Half the entries come from a coarse lattice so ties and zeros occur.
        let entries: Vec<(Idx, f64)> = positions
            .into_iter()
            .map(|k| {
                let v = if rng.gen::<bool>() { rng.gen_range(0..8) as f64 / 4.0 } else { rng.gen_range(0.0..10.0) };
                ([k, 0], v)
            })
            .collect();
        let values: Vec<f64> = entries.iter().map(|e| e.1).collect();
        let r = rearrange(&IndexedSeq::from_entries(1, entries)?)?;
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for nu in 1..=MAX_SUPPORT + 2 {
            let exhaustive = best_subset_average(&values, nu);
            worst = worst.max((exhaustive - r.star_star(nu)).abs());
            scale = scale.max(exhaustive);
        }
        Ok(Row::new(format!("seq{i}"), &[("support", support as f64)], worst, scale).with_ratio(worst))
    })?;
    let mut report = ExperimentReport::new("rearrangement", cfg.seed);
    let worst = rows.iter().map(|r| r.lhs).fold(0.0, f64::max);
    report.rows = rows;
    report.verdict("exhaustive", worst <= tol, format!("max |a** − best subset average| = {worst:e} (tol {tol:e})"));
    Ok(report)
}

pub fn cstar(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let dims: Vec<usize> = match cfg.space.dim {
        Some(d) => {
            require_dim(d, &[1, 2], "cstar")?;
            vec![d]
        }
        None => vec![1, 2],
    };
    let (lo, hi) = (cfg.tol("bracket_lo", 1.0), cfg.tol("bracket_hi", 3.0));
    let spread = cfg.tol("variation", 2.0);
    let mut report = ExperimentReport::new("cstar", cfg.seed);
    for dim in dims {
        let default: &[f64] = if dim == 1 { &[10.0, 100.0, 1000.0, 10000.0] } else { &[100.0, 1000.0, 10000.0] };
        let ns = integer_sweep(cfg, default)?;
        if ns.contains(&0) {
            return config_error("N must be positive");
        }
        let Some(&n_max) = ns.iter().max() else { continue };
        let profile = cstar_star_profile::<f64>(dim, n_max as usize)?;
        let mut ratios = Vec::new();
        for &n in &ns {
            let c = profile[n as usize - 1].1;
            let lhs = n as f64 * c;
            let rhs = ((n + 1) as f64).ln().powi(dim as i32);
            let row = Row::new(format!("dim{dim}-N{n}"), &[("dim", dim as f64), ("N", n as f64)], lhs, rhs);
            ratios.push(row.ratio);
            report.push(row);
        }
        let (a, b) = min_max(ratios).unwrap();
        if dim == 1 {
            report.verdict("dim1 bracket", a >= lo && b <= hi, format!("N c**_N / ln(N+1) in {} (bracket [{lo}, {hi}])", fmt_range(a, b)));
        } else {
            report.verdict("dim2 variation", b / a <= spread, format!("N c**_N / ln²(N+1) in {}, spread {:.4} (max {spread})", fmt_range(a, b), b / a));
        }
    }
    Ok(report)
}

/// Exact `|E_m|`: `2^{m+1} − 2` in dimension 1 and `(m − 2) 2^{m+1} + 4` in
/// dimension 2.
fn cross_size(m: u64, dim: usize) -> u64 {
    if dim == 1 {
        (1 << (m + 1)) - 2
    } else {
        (m - 2) * (1 << (m + 1)) + 4
    }
}

/// Counts `k` with `‖k‖_∞ < 2^m` inside the cross by brute force.
fn brute_force_size(m: u32, dim: usize) -> Result<u64> {
    let e = hyperbolic_cross(m, dim)?;
    let r = 1i64 << m;
    let mut count = 0;
    for a in -r + 1..r {
        if dim == 1 {
            count += e.contains(&[a, 0]) as u64;
        } else {
            count += (-r + 1..r).filter(|b| e.contains(&[a, *b])).count() as u64;
        }
    }
    Ok(count)
}

pub fn hyperbolic(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let dims: Vec<usize> = match cfg.space.dim {
        Some(d) => {
            require_dim(d, &[1, 2], "hyperbolic")?;
            vec![d]
        }
        None => vec![1, 2],
    };
    let (lo, hi) = (cfg.tol("bracket_lo", 0.5), cfg.tol("bracket_hi", 2.0));
    let brute_max = cfg.tol("brute_force_max_m", 10.0) as u32;
    let mut report = ExperimentReport::new("hyperbolic", cfg.seed);
    for dim in dims {
        let default: Vec<f64> = (dim as u32..=20).map(f64::from).collect();
        let ms = integer_sweep(cfg, &default)?;
        if let Some(m) = ms.iter().find(|m| **m < dim as u64 || **m > 30) {
            return config_error(format!("m = {m} outside {dim}..=30"));
        }
        let rows = par_map(&ms, |_, &m| {
            let e = hyperbolic_cross(m as u32, dim)?;
            let seen = e.verify_partition()?;
            let covered = if m as u32 <= brute_max { brute_force_size(m as u32, dim)? == seen } else { true };
            let exact = seen == cross_size(m, dim);
            let rhs = 2f64.powi(m as i32) * (m as f64).powi(dim as i32 - 1);
            Ok((Row::new(format!("dim{dim}-m{m}"), &[("dim", dim as f64), ("m", m as f64)], seen as f64, rhs), covered && exact))
        })?;
        let all_exact = rows.iter().all(|r| r.1);
        let rows: Vec<Row> = rows.into_iter().map(|r| r.0).collect();
        if let Some((a, b)) = min_max(rows.iter().map(|r| r.ratio)) {
            report.verdict(format!("dim{dim} bracket"), a >= lo && b <= hi, format!("|E_m| / (2^m m^(n−1)) in {} (bracket [{lo}, {hi}])", fmt_range(a, b)));
            report.verdict(
                format!("dim{dim} partition"),
                all_exact,
                format!("blocks disjoint, sizes match the closed form, cover checked by brute force for m ≤ {brute_max}"),
            );
        }
        report.rows.extend(rows);
    }
    Ok(report)
}

/// `count` distinct indices in `[-w, w)^dim`.
fn random_indices(rng: &mut impl Rng, dim: usize, w: i64, count: usize) -> Vec<Idx> {
    let mut set = BTreeSet::new();
    while set.len() < count {
        let a = rng.gen_range(-w..w);
        let b = if dim == 2 { rng.gen_range(-w..w) } else { 0 };
        set.insert([a, b]);
    }
    set.into_iter().collect()
}

pub fn dsk(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    const MAX_SET: usize = 64;
    let tol = cfg.tol("rel", 1e-12);
    let windows = [40i64, 8];
    let cseq = [inverse_product_seq::<f64>(1, 2 * windows[0] as usize)?, inverse_product_seq::<f64>(2, 2 * windows[1] as usize)?];
    let cstar = [cstar_star_profile::<f64>(1, MAX_SET)?, cstar_star_profile::<f64>(2, MAX_SET)?];
    let cases: Vec<usize> = (0..cfg.count_or(200)).collect();
    let rows = par_map(&cases, |_, &i| {
        let mut rng = case_rng(cfg.seed, i);
        let dim = 1 + i % 2;
        let w = windows[dim - 1];
        let (so, se) = (rng.gen_range(1..=MAX_SET), rng.gen_range(1..=MAX_SET));
        let omega = random_indices(&mut rng, dim, w, so);
        let e = random_indices(&mut rng, dim, w, se);
        let d = dsk_sample(&cseq[dim - 1], &omega, &e)?;
        let bound = cstar[dim - 1][so.max(se) - 1].1;
        Ok(Row::new(format!("case{i}"), &[("dim", dim as f64), ("omega", so as f64), ("e", se as f64)], d, bound))
    })?;
    let mut report = ExperimentReport::new("dsk", cfg.seed);
    let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    report.rows = rows;
    report.verdict("bound", worst <= 1.0 + tol, format!("max d / c**_max(|ω|,|e|) = {worst:.6}"));
    Ok(report)
}

pub fn hardy(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (lo_n, hi_n) = (-20i64, 20i64);
    let c_max = cfg.tol("c_max_p1", 64.0);
    let ps = match cfg.space.p {
        Some(p) => vec![p],
        None => cfg.sweep_or(&[1.0, 2.0]),
    };
    if let Some(p) = ps.iter().find(|p| !(**p > 0.0)) {
        return config_error(format!("p = {p} must be positive"));
    }
    let b = IndexedSeq::from_entries(1, (lo_n..=hi_n).map(|n| ([n, 0], 2f64.powf(n as f64 / 2.0))))?;
    let count = cfg.count_or(100);
    let mut report = ExperimentReport::new("hardy", cfg.seed);
    for &p in &ps {
        let cases: Vec<usize> = (0..count).collect();
        let rows = par_map(&cases, |_, &i| {
            let mut rng = case_rng(cfg.seed, i);
            let a = IndexedSeq::from_entries(
                1,
                (lo_n..=hi_n).map(|n| ([n, 0], if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(-5.0f64..5.0).exp() })),
            )?;
            let h = hardy_bound_check(&a, &b, p, HardyDirection::Forward, (lo_n, hi_n), 1e6)?;
            Ok(Row::new(format!("p{p}-a{i}"), &[("p", p)], h.lhs, h.mid).with_ratio(h.mid / h.lhs).with_diagnostics(&[("cb", h.cb)]))
        })?;
        let ordered = rows.iter().all(|r| r.lhs <= r.rhs * (1.0 + 1e-12));
        let c = rows.iter().map(|r| r.ratio).filter(|r| r.is_finite()).fold(0.0, f64::max);
        report.verdict(format!("p={p} lhs ≤ mid"), ordered, format!("{} sequences", rows.len()));
        let detail = format!("single constant C = {c:.6} (mid ≤ C·lhs)");
        if p == 1.0 {
            report.verdict("p=1 constant", c <= c_max, format!("{detail}; required ≤ {c_max}"));
        } else {
            report.verdict(format!("p={p} constant"), c.is_finite(), detail);
        }
        report.rows.extend(rows);
    }
    Ok(report)
}
