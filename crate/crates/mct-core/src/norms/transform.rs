use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::fourier::{FourierEvaluable, SampleGrid};
use crate::grid::Idx;
use crate::norms::{NormReport, Weight};
use crate::scalar::{from_count, lit, pow2, root, to_f64, LqAccumulator, Real};

/// Sampling setup for norms of functions known through point values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierGridOptions<T> {
    /// Cube levels `m_lo..=m_hi` summed explicitly.
    pub m_range: (i32, i32),
    /// Midpoint samples per axis in each cube of level `m_lo`.
    pub resolution: usize,
    /// Box sampled (per axis), widened to multiples of `2^{m_lo}`.
    pub region: [(T, T); 2],
}

/// Morrey norm over aligned cubes of a sampled function: level suprema are
/// taken over the cubes meeting the region, so the value is a lower bound
/// up to quadrature error. Returns the per-level suprema alongside.
pub fn fourier_morrey_norm<T: Real, E: FourierEvaluable<T>>(
    g: &E,
    w: &Weight<T>,
    p: T,
    q: T,
    opts: &FourierGridOptions<T>,
) -> Result<(NormReport<T>, Vec<(i32, T)>)> {
    let (m_lo, m_hi) = opts.m_range;
    if m_lo > m_hi || opts.resolution == 0 || !(p > T::zero()) || !(q > T::zero()) {
        return invalid("need m_lo ≤ m_hi, positive resolution and exponents");
    }
    let dim = g.dim();
    let side = pow2::<T>(m_lo);
    let res = opts.resolution;
    let h = side / from_count(res);
    let mut lo = [T::zero(); 2];
    let mut first_cube = [0i64; 2];
    let mut n = [1usize; 2];
    for a in 0..dim {
        let (r0, r1) = opts.region[a];
        let c0 = (r0 / side).floor();
        let c1 = (r1 / side).ceil();
        lo[a] = c0 * side;
        first_cube[a] = c0.to_i64().unwrap();
        n[a] = ((c1 - c0).to_usize().unwrap()).max(1) * res;
    }
    let grid = SampleGrid::sample(g, lo, h, n);
    let vol = grid.cell_volume();
    let cubes_x = n[0] / res;
    let cubes_y = if dim == 1 { 1 } else { n[1] / res };
    // ∫|g|^p over each cube of level m_lo.
    let finest: Vec<(Idx, T)> = (0..cubes_x * cubes_y)
        .into_par_iter()
        .map(|c| {
            let (cx, cy) = (c / cubes_y, c % cubes_y);
            let mut s = T::zero();
            if dim == 1 {
                for i in 0..res {
                    s += grid.at(cx * res + i, 0).norm().powf(p);
                }
            } else {
                for i in 0..res {
                    for j in 0..res {
                        s += grid.at(cx * res + i, cy * res + j).norm().powf(p);
                    }
                }
            }
            let k = if dim == 1 { [first_cube[0] + cx as i64, 0] } else { [first_cube[0] + cx as i64, first_cube[1] + cy as i64] };
            (k, s * vol)
        })
        .collect();
    let mut cur: HashMap<Idx, T> = finest.into_iter().collect();
    let mut per_level = Vec::new();
    let mut acc = LqAccumulator::new(q);
    for m in m_lo..=m_hi {
        if m > m_lo {
            let mut next: HashMap<Idx, T> = HashMap::new();
            for (k, v) in cur {
                let parent = if dim == 1 { [k[0] >> 1, 0] } else { [k[0] >> 1, k[1] >> 1] };
                *next.entry(parent).or_insert_with(T::zero) += v;
            }
            cur = next;
        }
        let s = cur.values().fold(T::zero(), |a, b| a.max(*b)).powf(p.recip());
        per_level.push((m, s));
        acc.push(w.at_dyadic(m) * s);
    }
    let value = acc.value();
    let gmax = grid.values.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let nd = lit::<T>(dim as f64);
    let s_top = per_level.last().unwrap().1;
    let mut tail = LqAccumulator::new(q);
    for j in 1..=200 {
        let m_below = m_lo - j;
        tail.push(w.at_dyadic(m_below) * gmax * pow2::<T>(m_below).powf(nd / p));
        tail.push(w.at_dyadic(m_hi + j) * s_top);
    }
    let total = if q.is_infinite() { acc.raw().max(tail.raw()) } else { acc.raw() + tail.raw() };
    let report = NormReport {
        space: format!("M[{}] of sampled function", w.label()),
        params: vec![
            ("n".into(), dim as f64),
            ("p".into(), to_f64(p)),
            ("q".into(), to_f64(q)),
            ("resolution".into(), res as f64),
        ],
        value,
        lower_bound: true,
        tail_estimate: root(total, q) - value,
        m_range: opts.m_range,
    };
    Ok((report, per_level))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusOptions<T> {
    /// Grid points per length `t`; shifts are multiples of `t / samples_per_t`.
    pub samples_per_t: usize,
    /// Box of base points `x` (per axis).
    pub region: [(T, T); 2],
}

/// Sampled `ω(g, t)_∞ = sup_{|y| ≤ t} ‖g(· + y) − g‖_∞`, a lower bound.
pub fn modulus_sup<T: Real, E: FourierEvaluable<T>>(g: &E, t: T, opts: &ModulusOptions<T>) -> Result<T> {
    let j = opts.samples_per_t;
    if j == 0 || !(t > T::zero()) {
        return invalid("need t > 0 and at least one sample per t");
    }
    let dim = g.dim();
    let d = t / from_count(j);
    let mut lo = [T::zero(); 2];
    let mut n = [1usize; 2];
    for a in 0..dim {
        let (r0, r1) = opts.region[a];
        lo[a] = r0 - t;
        n[a] = ((r1 - r0 + t + t) / d).ceil().to_usize().unwrap() + 1;
    }
    let grid = SampleGrid::sample(g, lo, d, n);
    let ji = j as isize;
    let shifts: Vec<(isize, isize)> = if dim == 1 {
        (-ji..=ji).map(|s| (s, 0)).collect()
    } else {
        let mut v = Vec::new();
        for a in -ji..=ji {
            for b in -ji..=ji {
                if a * a + b * b <= ji * ji {
                    v.push((a, b));
                }
            }
        }
        v
    };
    let inner = |a: usize| (j, n[a] - j);
    let (x0, x1) = inner(0);
    let (y0, y1) = if dim == 1 { (0, 1) } else { inner(1) };
    let best = (x0..x1)
        .into_par_iter()
        .map(|i| {
            let mut best = T::zero();
            for k in y0..y1 {
                let base = grid.at(i, k);
                for (a, b) in &shifts {
                    let v = grid.at((i as isize + a) as usize, (k as isize + b) as usize);
                    best = best.max((v - base).norm());
                }
            }
            best
        })
        .reduce(T::zero, T::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::FnEvaluable;
    use crate::grid::StepFunction;
    use approx::assert_relative_eq;
    use num_complex::Complex;

    #[test]
    fn constant_has_zero_modulus() {
        let g = FnEvaluable { dim: 1, func: |_: &[f64]| Complex::new(2.0, 1.0), bound: 3.0 };
        let opts = ModulusOptions { samples_per_t: 8, region: [(-2.0, 2.0), (0.0, 0.0)] };
        assert_eq!(modulus_sup(&g, 0.5, &opts).unwrap(), 0.0);
    }

    #[test]
    fn modulus_of_unit_interval_transform() {
        let f = StepFunction::indicator(1, 0, [[0, 0]]).unwrap();
        let opts = ModulusOptions { samples_per_t: 8, region: [(-4.0, 4.0), (0.0, 0.0)] };
        for t in [0.01, 0.05, 0.2] {
            let w1 = modulus_sup(&f, t, &opts).unwrap();
            let w2 = modulus_sup(&f, 2.0 * t, &opts).unwrap();
            // Mean-value ceiling 2π t ∫|x||f| = π t.
            assert!(w1 <= std::f64::consts::PI * t * (1.0 + 1e-12));
            assert!(w1 > 0.5 * std::f64::consts::PI * t);
            assert!(w2 <= 2.0 * w1 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn sampled_morrey_of_constant() {
        let g = FnEvaluable { dim: 1, func: |_: &[f64]| Complex::new(1.0, 0.0), bound: 1.0 };
        let opts = FourierGridOptions { m_range: (-3, 0), resolution: 8, region: [(0.0, 1.0), (0.0, 0.0)] };
        let (rep, levels) = fourier_morrey_norm(&g, &Weight::power(-0.5), 2.0, f64::INFINITY, &opts).unwrap();
        // Every level gives 2^{−m/2}·2^{m/2} = 1.
        for (_, s) in &levels {
            assert!(*s > 0.0);
        }
        assert_relative_eq!(rep.value, 1.0, max_relative = 1e-14);
        assert!(rep.lower_bound);
    }
}
