use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::grid::{Idx, StepFunction};
use crate::norms::{stabilizing_shift, NormParams, NormReport, Weight};
use crate::scalar::{geometric_tail_power, lit, pow2, root, to_f64, LqAccumulator, Real};

/// Which family of sets the supremum in the Morrey norm runs over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MorreyConvention {
    /// Grid-aligned dyadic cubes of each level.
    #[default]
    AlignedCubes,
    /// All open balls (dimension 1 only).
    Balls,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MorreyOptions {
    pub convention: MorreyConvention,
    /// Levels summed explicitly for weights without a closed-form tail.
    pub m_range: Option<(i32, i32)>,
}

/// Per-level suprema `S_m = sup_{Q ∈ G^m} ∫_Q |f|^p` of a step function.
///
/// Below the function level `S_m = max|c|^p 2^{mn}`; from `stable` on the
/// aggregated cubes are the (at most `2^n`) cubes touching the origin and
/// `S_m` is constant.
#[derive(Clone, Debug)]
pub(crate) struct AlignedProfile<T> {
    pub level: i32,
    pub stable: i32,
    pub max_abs: T,
    /// `S_m` for `m = level..=stable`.
    pub sups: Vec<T>,
    pub dim: usize,
}

impl<T: Real> AlignedProfile<T> {
    pub fn new(f: &StepFunction<T>, p: T) -> Self {
        let level = f.level();
        let shift = f.cells().flat_map(|(k, _)| k.iter().take(f.dim()).map(|&x| stabilizing_shift(x))).max().unwrap_or(0);
        let stable = level + shift as i32;
        let mu = f.cell_measure();
        let mut cur: BTreeMap<Idx, T> = f.cells().map(|(k, c)| (*k, c.norm().powf(p) * mu)).collect();
        let mut sups = Vec::with_capacity(shift as usize + 1);
        for step in 0..=shift {
            if step > 0 {
                let mut next: BTreeMap<Idx, T> = BTreeMap::new();
                for (k, v) in cur {
                    *next.entry([k[0] >> 1, k[1] >> 1]).or_insert_with(T::zero) += v;
                }
                cur = next;
            }
            sups.push(cur.values().fold(T::zero(), |a, b| a.max(*b)));
        }
        Self { level, stable, max_abs: f.max_abs(), sups, dim: f.dim() }
    }

    /// `S_m^{1/p}` at any level.
    pub fn sup_norm(&self, m: i32, p: T) -> T {
        if m < self.level {
            self.max_abs * pow2::<T>(m * self.dim as i32).powf(p.recip())
        } else {
            let i = (m.min(self.stable) - self.level) as usize;
            self.sups[i].powf(p.recip())
        }
    }
}

/// `‖f‖_{M^λ_{p,q}}` of a step function.
pub fn morrey_norm<T: Real>(f: &StepFunction<T>, prm: &NormParams<T>, opts: &MorreyOptions) -> Result<NormReport<T>> {
    prm.check_morrey()?;
    if f.dim() != prm.dim {
        return invalid("dimension of the function and the parameters differ");
    }
    let mut rep = match opts.convention {
        MorreyConvention::AlignedCubes => morrey_norm_weighted(f, &prm.weight(), prm.p, prm.q, opts)?,
        MorreyConvention::Balls => morrey_norm_balls(f, prm)?,
    };
    rep.params = prm.record();
    Ok(rep)
}

/// `(Σ_m (w(2^m) sup_{Q ∈ G^m} ‖f‖_{L_p(Q)})^q)^{1/q}` over aligned cubes.
///
/// Power weights get closed-form tails and an exact value. Other weights
/// are summed over `opts.m_range` joined with the levels where the profile
/// changes; the remaining tails are estimated from the last two terms and
/// the report is flagged as a lower bound.
pub fn morrey_norm_weighted<T: Real>(
    f: &StepFunction<T>,
    w: &Weight<T>,
    p: T,
    q: T,
    opts: &MorreyOptions,
) -> Result<NormReport<T>> {
    if !(p > T::zero()) || !(q > T::zero()) {
        return invalid("p and q must be positive");
    }
    if opts.convention == MorreyConvention::Balls {
        return invalid("the ball convention takes NormParams; use morrey_norm");
    }
    let params = vec![("n".into(), f.dim() as f64), ("p".into(), to_f64(p)), ("q".into(), to_f64(q))];
    let space = format!("M[{}]", w.label());
    if f.is_zero() {
        return Ok(NormReport::exact(space, params, T::zero(), (f.level(), f.level())));
    }
    let prof = AlignedProfile::new(f, p);
    let n = lit::<T>(f.dim() as f64);
    let term = |m: i32| w.at_dyadic(m) * prof.sup_norm(m, p);
    match w.power_exponent() {
        Some(e) => {
            let mut acc = LqAccumulator::new(q);
            for m in prof.level..=prof.stable {
                acc.push(term(m));
            }
            let mut raw = acc.raw();
            let two = lit::<T>(2.0);
            raw = combine(raw, geometric_tail_power(term(prof.level - 1), two.powf(-(e + n / p)), q), q);
            raw = combine(raw, geometric_tail_power(term(prof.stable + 1), two.powf(e), q), q);
            Ok(NormReport::exact(space, params, root(raw, q), (prof.level, prof.stable)))
        }
        None => {
            let (lo, hi) = opts.m_range.unwrap_or((prof.level - 40, prof.stable + 40));
            let lo = lo.min(prof.level);
            let hi = hi.max(prof.stable);
            let mut acc = LqAccumulator::new(q);
            for m in lo..=hi {
                acc.push(term(m));
            }
            let tail_lo = estimated_tail(term(lo), term(lo + 1), q);
            let tail_hi = estimated_tail(term(hi), term(hi - 1), q);
            let value = acc.value();
            let tail = root(combine(combine(acc.raw(), tail_lo, q), tail_hi, q), q) - value;
            Ok(NormReport { space, params, value, lower_bound: true, tail_estimate: tail, m_range: (lo, hi) })
        }
    }
}

/// Adds a q-th power (or sup candidate for `q = ∞`).
fn combine<T: Real>(a: T, b: T, q: T) -> T {
    if q.is_infinite() {
        a.max(b)
    } else {
        a + b
    }
}

/// Geometric extrapolation beyond `edge` given the neighbouring term `inner`;
/// returned as a q-th power, infinite when the terms do not decay.
fn estimated_tail<T: Real>(edge: T, inner: T, q: T) -> T {
    if edge == T::zero() {
        return T::zero();
    }
    let ratio = edge / inner;
    if !(ratio < T::one()) {
        return T::infinity();
    }
    let first = edge * ratio;
    geometric_tail_power(first, ratio, q)
}

/// Breakpoints and `|f|^p` densities of a one-dimensional step function.
#[derive(Clone, Debug)]
pub struct BallProfile<T> {
    bps: Vec<T>,
    dens: Vec<T>,
    prefix: Vec<T>,
}

impl<T: Real> BallProfile<T> {
    pub fn new(f: &StepFunction<T>, p: T) -> Result<Self> {
        if f.dim() != 1 {
            return invalid("the ball profile is one-dimensional");
        }
        let h = f.cell_side();
        let mut bps: Vec<T> = Vec::new();
        let mut dens: Vec<T> = Vec::new();
        let mut prev_k: Option<i64> = None;
        for (k, c) in f.cells() {
            let a = lit::<T>(k[0] as f64) * h;
            let d = c.norm().powf(p);
            match prev_k {
                Some(pk) if pk + 1 == k[0] => {
                    if *dens.last().unwrap() == d {
                        *bps.last_mut().unwrap() = a + h;
                    } else {
                        dens.push(d);
                        bps.push(a + h);
                    }
                }
                Some(_) => {
                    // Gap of zero density.
                    dens.push(T::zero());
                    bps.push(a);
                    dens.push(d);
                    bps.push(a + h);
                }
                None => {
                    bps.push(a);
                    dens.push(d);
                    bps.push(a + h);
                }
            }
            prev_k = Some(k[0]);
        }
        let mut prefix = vec![T::zero(); bps.len()];
        for i in 1..bps.len() {
            prefix[i] = prefix[i - 1] + dens[i - 1] * (bps[i] - bps[i - 1]);
        }
        Ok(Self { bps, dens, prefix })
    }

    pub fn total(&self) -> T {
        self.prefix.last().copied().unwrap_or(T::zero())
    }

    /// `∫_{−∞}^x |f|^p`.
    pub fn cumulative(&self, x: T) -> T {
        if self.bps.is_empty() || x <= self.bps[0] {
            return T::zero();
        }
        let last = self.bps.len() - 1;
        if x >= self.bps[last] {
            return self.prefix[last];
        }
        let i = self.bps.partition_point(|b| *b <= x) - 1;
        self.prefix[i] + self.dens[i] * (x - self.bps[i])
    }

    /// `F(r) = sup_x ∫_{x−r}^{x+r} |f|^p`.
    pub fn max_ball(&self, r: T) -> T {
        let two_r = r + r;
        let mut best = T::zero();
        for (i, b) in self.bps.iter().enumerate() {
            best = best.max(self.cumulative(*b + two_r) - self.prefix[i]);
            best = best.max(self.prefix[i] - self.cumulative(*b - two_r));
        }
        best
    }

    fn max_density(&self) -> T {
        self.dens.iter().fold(T::zero(), |a, b| a.max(*b))
    }

    /// Radii where some window endpoint crosses a breakpoint.
    fn critical_radii(&self) -> Vec<T> {
        let mut rs = Vec::new();
        for i in 0..self.bps.len() {
            for j in i + 1..self.bps.len() {
                rs.push((self.bps[j] - self.bps[i]) / lit(2.0));
            }
        }
        rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rs.dedup();
        rs
    }

    /// `sup_{r>0} r^{−λ} F(r)^{1/p}`, exact: on each interval between
    /// critical radii every candidate window integral is affine in `r`.
    pub fn sup_over_radii(&self, lambda: T, p: T) -> T {
        if self.bps.is_empty() {
            return T::zero();
        }
        let ip = p.recip();
        let phi = |r: T, v: T| r.powf(-lambda) * v.max(T::zero()).powf(ip);
        let rs = self.critical_radii();
        let r_min = rs[0];
        let r_max = *rs.last().unwrap();
        if lambda > ip || lambda < T::zero() {
            return T::infinity();
        }
        // r ≤ r_min: F(r) = 2r·max density.
        let mut best = phi(r_min, (r_min + r_min) * self.max_density());
        // r ≥ r_max: F(r) = total, nonincreasing in r.
        best = best.max(phi(r_max, self.total()));
        let crit_ok = lambda > T::zero() && lambda * p < T::one();
        for win in rs.windows(2) {
            let (ra, rb) = (win[0], win[1]);
            for (i, b) in self.bps.iter().enumerate() {
                let fwd = |r: T| self.cumulative(*b + r + r) - self.prefix[i];
                let bwd = |r: T| self.prefix[i] - self.cumulative(*b - r - r);
                for g in [&fwd as &dyn Fn(T) -> T, &bwd] {
                    let (va, vb) = (g(ra), g(rb));
                    best = best.max(phi(ra, va)).max(phi(rb, vb));
                    let slope = (vb - va) / (rb - ra);
                    let alpha = va - slope * ra;
                    if crit_ok && slope > T::zero() && alpha > T::zero() {
                        let r = lambda * p * alpha / (slope * (T::one() - lambda * p));
                        if r > ra && r < rb {
                            best = best.max(phi(r, alpha + slope * r));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Ball-convention Morrey norm in dimension 1: continuous supremum over
/// radii for `q = ∞`, dyadic radii `2^k` for `q < ∞`.
pub fn morrey_norm_balls<T: Real>(f: &StepFunction<T>, prm: &NormParams<T>) -> Result<NormReport<T>> {
    prm.check_morrey()?;
    let prof = BallProfile::new(f, prm.p)?;
    let space = "M[balls]";
    if f.is_zero() {
        return Ok(NormReport::exact(space, prm.record(), T::zero(), (0, 0)));
    }
    let (p, q, lambda) = (prm.p, prm.q, prm.lambda);
    if q.is_infinite() {
        let v = prof.sup_over_radii(lambda, p);
        return Ok(NormReport::exact(space, prm.record(), v, (0, 0)));
    }
    let rs = prof.critical_radii();
    let k_lo = rs[0].log2().floor().to_i32().unwrap() - 1;
    let k_hi = rs.last().unwrap().log2().ceil().to_i32().unwrap() + 1;
    let term = |k: i32| pow2::<T>(k).powf(-lambda) * prof.max_ball(pow2(k)).powf(p.recip());
    let mut acc = LqAccumulator::new(q);
    for k in k_lo..=k_hi {
        acc.push(term(k));
    }
    let two = lit::<T>(2.0);
    let mut raw = acc.raw();
    raw += geometric_tail_power(term(k_lo - 1), two.powf(lambda - p.recip()), q);
    raw += geometric_tail_power(term(k_hi + 1), two.powf(-lambda), q);
    Ok(NormReport::exact(space, prm.record(), root(raw, q), (k_lo, k_hi)))
}
