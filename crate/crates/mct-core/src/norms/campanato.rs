use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::fourier::{FourierEvaluable, SampleGrid};
use crate::grid::StepFunction;
use crate::norms::morrey::BallProfile;
use crate::norms::xi::{xi_class_check, Verdict};
use crate::norms::{NormReport, Weight};
use crate::quad::golden_min;
use crate::scalar::{from_count, geometric_tail_power, lit, pow2, root, to_f64, LqAccumulator, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CampanatoOptions {
    /// Centers for radius `2^k` lie on the lattice `2^{k − lattice_offset} Z^n`.
    pub lattice_offset: i32,
    /// Levels summed explicitly above the support diameter.
    pub extra_levels: i32,
}

impl Default for CampanatoOptions {
    fn default() -> Self {
        Self { lattice_offset: 3, extra_levels: 40 }
    }
}

/// Options for sampled inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridCampanatoOptions<T> {
    /// Centers are restricted to this box (per axis).
    pub region: [(T, T); 2],
    /// Radii `2^k` for `k` in this inclusive range.
    pub k_range: (i32, i32),
    /// Sample points per length `2^{k_lo}`; a power of two at least
    /// `2^lattice_offset`.
    pub resolution: usize,
    pub lattice_offset: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampanatoReport<T> {
    pub seminorm: NormReport<T>,
    /// `sup_x ‖g‖_{L_p(B_1(x))}` (exact in dimension 1, lattice otherwise),
    /// when it could be computed.
    pub unit_ball_sup: Option<T>,
    /// `(k, sup_x ‖g − A_{2^k} g(x)‖_{L_p(B_{2^k}(x))})` for explicit levels.
    pub per_level: Vec<(i32, T)>,
}

impl<T: Real> CampanatoReport<T> {
    /// Seminorm plus the unit-ball supremum.
    pub fn full_norm(&self) -> Option<T> {
        self.unit_ball_sup.map(|u| u + self.seminorm.value)
    }
}

fn warn_if_trivial<T: Real>(w: &Weight<T>, dim: usize, p: T, q: T, window: (i32, i32)) {
    let k = lit::<T>(dim as f64) + p;
    let check = xi_class_check(w, k, p, q, window);
    if check.near_zero == Verdict::Fails || check.near_infinity == Verdict::Fails {
        log::warn!("weight {} fails the nontriviality test; the Campanato space may be trivial", w.label());
    }
}

/// `(∫_B g, ∫_B |g − A_B g|^p)` for `B = B_r(center)` and a step function.
pub fn ball_oscillation<T: Real>(f: &StepFunction<T>, p: T, center: &[T], r: T) -> (Complex<T>, T) {
    let h = f.cell_side();
    let Some(bounds) = f.index_bounds() else {
        return (Complex::new(T::zero(), T::zero()), T::zero());
    };
    let dim = f.dim();
    let mut range = [(0i64, 0i64); 2];
    for a in 0..dim {
        let lo = ((center[a] - r) / h).floor().to_i64().unwrap_or(i64::MIN).max(bounds[a].0);
        let hi = ((center[a] + r) / h).floor().to_i64().unwrap_or(i64::MAX).min(bounds[a].1);
        if lo > hi {
            return (Complex::new(T::zero(), T::zero()), T::zero());
        }
        range[a] = (lo, hi);
    }
    let ball = if dim == 1 { r + r } else { T::PI() * r * r };
    let mut pieces: Vec<(Complex<T>, T)> = Vec::new();
    let mut integral = Complex::new(T::zero(), T::zero());
    let mut covered = T::zero();
    for i in range[0].0..=range[0].1 {
        for j in range[1].0..=range[1].1 {
            let k = [i, j];
            let c = f.coefficient(&k);
            if c.norm() == T::zero() {
                continue;
            }
            let area = f.ball_cell_measure(&k, center, r);
            if area > T::zero() {
                integral += c * area;
                covered += area;
                pieces.push((c, area));
            }
        }
    }
    let mean = integral / ball;
    let mut osc: T = pieces.iter().map(|(c, a)| (*c - mean).norm().powf(p) * *a).sum();
    // A gap at rounding level would be amplified by the 1/p root downstream.
    let gap = ball - covered;
    if gap > ball * lit::<T>(1e-12) {
        osc += mean.norm().powf(p) * gap;
    }
    (integral, osc)
}

/// `inf_c ‖f − c‖_{L_p(B)}` for a real one-dimensional step function and
/// `p ≥ 1`, by golden-section search; returns `(inf, argmin)`.
pub fn inf_over_constants<T: Real>(f: &StepFunction<T>, p: T, center: T, r: T) -> Result<(T, T)> {
    if f.dim() != 1 || !f.is_real() || p < T::one() {
        return invalid("inf over constants needs a real 1-D function and p ≥ 1");
    }
    let h = f.cell_side();
    let (x0, x1) = (center - r, center + r);
    let mut pieces: Vec<(T, T)> = Vec::new();
    let mut covered = T::zero();
    for (k, c) in f.cells() {
        let a = lit::<T>(k[0] as f64) * h;
        let len = crate::grid::interval_overlap(a, a + h, x0, x1);
        if len > T::zero() {
            pieces.push((c.re, len));
            covered += len;
        }
    }
    let rest = (x1 - x0 - covered).max(T::zero());
    if rest > T::zero() {
        pieces.push((T::zero(), rest));
    }
    let lo = pieces.iter().map(|p| p.0).fold(T::infinity(), T::min);
    let hi = pieces.iter().map(|p| p.0).fold(T::neg_infinity(), T::max);
    let cost = |c: T| pieces.iter().map(|(v, len)| (*v - c).abs().powf(p) * *len).sum::<T>();
    if hi == lo {
        return Ok((T::zero(), lo));
    }
    let (c, v) = golden_min(lo, hi, lit(1e-12), cost);
    Ok((v.powf(p.recip()), c))
}

/// Campanato seminorm `‖w(2^k) sup_x ‖g − A_{2^k} g(x)‖_{L_p(B_{2^k}(x))}‖_{ℓ_q(k)}`
/// of a step function, centers restricted to the shift lattice.
///
/// Below half the cell side the level suprema scale exactly like
/// `2^{kn/p}`, so that tail is closed-form. Above the support diameter the
/// levels are summed for `extra_levels` more steps and the remainder is
/// extrapolated with the last level supremum.
pub fn campanato_norm<T: Real>(
    f: &StepFunction<T>,
    w: &Weight<T>,
    p: T,
    q: T,
    opts: &CampanatoOptions,
) -> Result<CampanatoReport<T>> {
    if !(p > T::zero()) || !(q > T::zero()) {
        return invalid("p and q must be positive");
    }
    let dim = f.dim();
    let n = lit::<T>(dim as f64);
    let params = vec![("n".into(), dim as f64), ("p".into(), to_f64(p)), ("q".into(), to_f64(q))];
    let space = format!("C[{}]", w.label());
    if f.is_zero() {
        let rep = NormReport::exact(space, params, T::zero(), (f.level(), f.level()));
        return Ok(CampanatoReport { seminorm: rep, unit_ball_sup: Some(T::zero()), per_level: vec![] });
    }
    let level = f.level();
    let bounds = f.index_bounds().unwrap();
    let h = f.cell_side();
    let mut extent = T::zero();
    for b in bounds.iter().take(dim) {
        let len = lit::<T>((b.1 - b.0 + 1) as f64) * h;
        extent += len * len;
    }
    let k_lo = level - 1;
    let k_hi = extent.sqrt().log2().ceil().to_i32().unwrap() + opts.extra_levels;
    warn_if_trivial(w, dim, p, q, (k_lo - 20, k_hi));

    let per_level: Vec<(i32, T)> = (k_lo..=k_hi)
        .into_par_iter()
        .map(|k| (k, level_sup(f, p, k, opts.lattice_offset, &bounds)))
        .collect();
    let mut acc = LqAccumulator::new(q);
    for (k, s) in &per_level {
        acc.push(w.at_dyadic(*k) * *s);
    }
    let mut raw = acc.raw();
    let two = lit::<T>(2.0);
    let base = per_level[0].1;
    let last = per_level.last().unwrap().1;
    let mut tail = T::zero();
    let mut lower_bound = false;
    match w.power_exponent() {
        Some(e) => {
            let first = w.at_dyadic(k_lo - 1) * base * two.powf(-n / p);
            raw = combine(raw, geometric_tail_power(first, two.powf(-(n / p + e)), q), q);
            tail = geometric_tail_power(w.at_dyadic(k_hi + 1) * last, two.powf(e), q);
        }
        None => {
            for j in 1..=200 {
                let k = k_lo - j;
                raw = combine(raw, pow_q(w.at_dyadic(k) * base * two.powf(-n * lit(j as f64) / p), q), q);
            }
            for k in k_hi + 1..=k_hi + 200 {
                tail = combine(tail, pow_q(w.at_dyadic(k) * last, q), q);
            }
            lower_bound = true;
        }
    }
    let value_wo = root(raw, q);
    let value = root(combine(raw, tail, q), q);
    let seminorm = NormReport {
        space,
        params,
        value,
        lower_bound,
        tail_estimate: value - value_wo,
        m_range: (k_lo, k_hi),
    };
    let unit_ball_sup = Some(unit_ball_sup_step(f, p));
    Ok(CampanatoReport { seminorm, unit_ball_sup, per_level })
}

fn pow_q<T: Real>(x: T, q: T) -> T {
    if q.is_infinite() {
        x
    } else {
        x.powf(q)
    }
}

fn combine<T: Real>(a: T, b: T, q: T) -> T {
    if q.is_infinite() {
        a.max(b)
    } else {
        a + b
    }
}

/// `sup_x ‖f − A_r f(x)‖_{L_p(B_r(x))}`, `r = 2^k`, over lattice centers.
fn level_sup<T: Real>(f: &StepFunction<T>, p: T, k: i32, offset: i32, bounds: &[(i64, i64); 2]) -> T {
    let r = pow2::<T>(k);
    let s = pow2::<T>(k - offset);
    let h = f.cell_side();
    let centers = lattice_centers(f, r, s, h, bounds);
    let best = centers
        .into_iter()
        .map(|c| ball_oscillation(f, p, &c, r).1)
        .fold(T::zero(), T::max);
    best.powf(p.recip())
}

/// Lattice points whose ball contains a cell edge in its interior.
fn lattice_centers<T: Real>(f: &StepFunction<T>, r: T, s: T, h: T, bounds: &[(i64, i64); 2]) -> Vec<[T; 2]> {
    if f.dim() == 1 {
        let mut js: Vec<i64> = Vec::new();
        let mut edges: Vec<i64> = f.cells().flat_map(|(k, _)| [k[0], k[0] + 1]).collect();
        edges.dedup();
        for e in edges {
            let b = lit::<T>(e as f64) * h;
            let lo = ((b - r) / s).ceil().to_i64().unwrap();
            let hi = ((b + r) / s).floor().to_i64().unwrap();
            js.extend(lo..=hi);
        }
        js.sort_unstable();
        js.dedup();
        js.into_iter().map(|j| [lit::<T>(j as f64) * s, T::zero()]).collect()
    } else {
        let lo = |a: usize| ((lit::<T>(bounds[a].0 as f64) * h - r) / s).floor().to_i64().unwrap();
        let hi = |a: usize| ((lit::<T>((bounds[a].1 + 1) as f64) * h + r) / s).ceil().to_i64().unwrap();
        let mut out = Vec::new();
        for i in lo(0)..=hi(0) {
            let x = lit::<T>(i as f64) * s;
            for j in lo(1)..=hi(1) {
                let y = lit::<T>(j as f64) * s;
                // A disk inside one cell has zero oscillation.
                let inside = ((x - r) / h).floor() == ((x + r) / h).floor() && ((y - r) / h).floor() == ((y + r) / h).floor();
                if !inside {
                    out.push([x, y]);
                }
            }
        }
        out
    }
}

fn unit_ball_sup_step<T: Real>(f: &StepFunction<T>, p: T) -> T {
    if f.dim() == 1 {
        let prof = BallProfile::new(f, p).expect("one-dimensional");
        return prof.max_ball(T::one()).powf(p.recip());
    }
    let b = f.index_bounds().unwrap();
    let h = f.cell_side();
    let s = lit::<T>(0.125);
    let lo = |a: usize| ((lit::<T>(b[a].0 as f64) * h - T::one()) / s).floor().to_i64().unwrap();
    let hi = |a: usize| ((lit::<T>((b[a].1 + 1) as f64) * h + T::one()) / s).ceil().to_i64().unwrap();
    let mut best = T::zero();
    for i in lo(0)..=hi(0) {
        for j in lo(1)..=hi(1) {
            let c = [lit::<T>(i as f64) * s, lit::<T>(j as f64) * s];
            best = best.max(f.ball_power(p, &c, T::one()));
        }
    }
    best.powf(p.recip())
}

/// Campanato seminorm of a function known through point values, from a
/// midpoint sample grid; a lower bound on the lattice-restricted quantity.
pub fn campanato_norm_grid<T: Real, E: FourierEvaluable<T>>(
    g: &E,
    w: &Weight<T>,
    p: T,
    q: T,
    opts: &GridCampanatoOptions<T>,
) -> Result<CampanatoReport<T>> {
    let dim = g.dim();
    let (k_lo, k_hi) = opts.k_range;
    let lat = 1usize << opts.lattice_offset.max(0);
    if k_lo > k_hi || opts.resolution < lat || !opts.resolution.is_power_of_two() {
        return invalid("need k_lo ≤ k_hi and a power-of-two resolution ≥ 2^lattice_offset");
    }
    let h = pow2::<T>(k_lo) / from_count(opts.resolution);
    let margin = pow2::<T>(k_hi).max(T::one());
    let mut lo = [T::zero(); 2];
    let mut npts = [1usize; 2];
    for a in 0..dim {
        let (r0, r1) = opts.region[a];
        lo[a] = ((r0 - margin) / margin).floor() * margin;
        let hi = ((r1 + margin) / margin).ceil() * margin;
        npts[a] = ((hi - lo[a]) / h).round().to_usize().unwrap();
    }
    let grid = SampleGrid::sample(g, lo, h, npts);
    let level_of = |r_idx: usize, s_idx: usize| -> T { grid_level_sup(&grid, opts, p, r_idx, s_idx) };
    let mut per_level = Vec::new();
    let mut acc = LqAccumulator::new(q);
    for k in k_lo..=k_hi {
        let r_idx = opts.resolution << (k - k_lo);
        let s_idx = r_idx >> opts.lattice_offset;
        let v = level_of(r_idx, s_idx);
        per_level.push((k, v));
        acc.push(w.at_dyadic(k) * v);
    }
    let params = vec![("n".into(), dim as f64), ("p".into(), to_f64(p)), ("q".into(), to_f64(q))];
    let value = acc.value();
    // Extrapolate both ends geometrically from the outermost pairs.
    let term = |i: usize| w.at_dyadic(per_level[i].0) * per_level[i].1;
    let mut tail_raw = T::zero();
    if per_level.len() >= 2 {
        let m = per_level.len();
        for (edge, inner) in [(term(0), term(1)), (term(m - 1), term(m - 2))] {
            if edge > T::zero() {
                let ratio = edge / inner;
                tail_raw = combine(
                    tail_raw,
                    if ratio < T::one() { geometric_tail_power(edge * ratio, ratio, q) } else { T::infinity() },
                    q,
                );
            }
        }
    }
    let tail_estimate = root(combine(acc.raw(), tail_raw, q), q) - value;
    let seminorm = NormReport {
        space: format!("C[{}]", w.label()),
        params,
        value,
        lower_bound: true,
        tail_estimate,
        m_range: (k_lo, k_hi),
    };
    let unit_ball_sup = if margin >= T::one() && T::one() <= pow2(k_hi) && h <= T::one() {
        let r_idx = (T::one() / h).round().to_usize().unwrap();
        let s_idx = (r_idx / 8).max(1);
        Some(grid_level_power_sup(&grid, opts, p, r_idx, s_idx).powf(p.recip()))
    } else {
        None
    };
    Ok(CampanatoReport { seminorm, unit_ball_sup, per_level })
}

/// Node offsets `(di, dj)` with midpoints inside the ball of radius `r_idx`
/// centred at a grid vertex.
fn ball_offsets(dim: usize, r_idx: usize) -> Vec<(isize, isize)> {
    let r = r_idx as isize;
    let mut out = Vec::new();
    if dim == 1 {
        for di in -r..r {
            out.push((di, 0));
        }
    } else {
        let r2 = (r_idx as f64).powi(2);
        for di in -r..r {
            for dj in -r..r {
                let x = di as f64 + 0.5;
                let y = dj as f64 + 0.5;
                if x * x + y * y < r2 {
                    out.push((di, dj));
                }
            }
        }
    }
    out
}

/// Vertex indices (per axis) of lattice centers inside the region.
fn center_indices<T: Real>(grid: &SampleGrid<T>, opts: &GridCampanatoOptions<T>, axis: usize, s_idx: usize) -> Vec<usize> {
    if grid.dim == 1 && axis == 1 {
        return vec![0];
    }
    let (r0, r1) = opts.region[axis];
    let first = ((r0 - grid.lo[axis]) / grid.h).ceil().to_usize().unwrap_or(0);
    let last = ((r1 - grid.lo[axis]) / grid.h).floor().to_usize().unwrap_or(0);
    let start = first.div_ceil(s_idx) * s_idx;
    (start..=last).step_by(s_idx).collect()
}

fn grid_level_sup<T: Real>(grid: &SampleGrid<T>, opts: &GridCampanatoOptions<T>, p: T, r_idx: usize, s_idx: usize) -> T {
    let offs = ball_offsets(grid.dim, r_idx);
    let cx = center_indices(grid, opts, 0, s_idx);
    let cy = center_indices(grid, opts, 1, s_idx);
    let vol = grid.cell_volume();
    let count = from_count::<T>(offs.len());
    let best = cx
        .par_iter()
        .map(|&i| {
            let mut best = T::zero();
            for &j in &cy {
                let at = |o: &(isize, isize)| grid.at((i as isize + o.0) as usize, (j as isize + o.1) as usize);
                let mean = offs.iter().map(at).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b) / count;
                let osc: T = offs.iter().map(|o| (at(o) - mean).norm().powf(p)).sum();
                best = best.max(osc);
            }
            best
        })
        .reduce(T::zero, T::max);
    (best * vol).powf(p.recip())
}

fn grid_level_power_sup<T: Real>(grid: &SampleGrid<T>, opts: &GridCampanatoOptions<T>, p: T, r_idx: usize, s_idx: usize) -> T {
    let offs = ball_offsets(grid.dim, r_idx);
    let cx = center_indices(grid, opts, 0, s_idx);
    let cy = center_indices(grid, opts, 1, s_idx);
    cx.par_iter()
        .map(|&i| {
            cy.iter()
                .map(|&j| {
                    offs.iter()
                        .map(|o| grid.at((i as isize + o.0) as usize, (j as isize + o.1) as usize).norm().powf(p))
                        .sum::<T>()
                })
                .fold(T::zero(), T::max)
        })
        .reduce(T::zero, T::max)
        * grid.cell_volume()
}
