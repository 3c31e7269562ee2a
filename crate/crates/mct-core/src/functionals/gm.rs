use crate::error::{invalid, Result};
use crate::grid::StepFunction;
use crate::scalar::{lit, pow2, Real};

/// Points per octave of the log-grid added to the analytic candidates.
const GRID_PER_OCTAVE: usize = 64;

/// Jumps `(t, |Δ|)` of the profile restricted to `(0, ∞)`.
fn jumps<T: Real>(f0: &StepFunction<T>) -> Vec<(T, T)> {
    let h = f0.cell_side();
    let mut cells: Vec<(i64, T)> = f0.cells().filter(|(k, _)| k[0] >= 0).map(|(k, c)| (k[0], c.re)).collect();
    cells.sort_by_key(|c| c.0);
    let mut out: Vec<(T, T)> = Vec::new();
    let mut prev: Option<(i64, T)> = None;
    for (k, c) in cells {
        match prev {
            Some((pk, pc)) if pk + 1 == k => {
                if c != pc {
                    out.push((lit::<T>(k as f64) * h, (c - pc).abs()));
                }
            }
            Some((pk, pc)) => {
                out.push((lit::<T>((pk + 1) as f64) * h, pc.abs()));
                out.push((lit::<T>(k as f64) * h, c.abs()));
            }
            None if k > 0 => out.push((lit::<T>(k as f64) * h, c.abs())),
            None => {}
        }
        prev = Some((k, c));
    }
    if let Some((pk, pc)) = prev {
        out.push((lit::<T>((pk + 1) as f64) * h, pc.abs()));
    }
    out.retain(|j| j.1 > T::zero());
    out
}

/// `∫_0^x |f0|` from sorted cell starts and cumulative masses.
struct Primitive<T> {
    starts: Vec<T>,
    cum: Vec<T>,
    vals: Vec<T>,
    h: T,
}

impl<T: Real> Primitive<T> {
    fn new(f0: &StepFunction<T>) -> Self {
        let h = f0.cell_side();
        let mut cells: Vec<(i64, T)> = f0.cells().filter(|(k, _)| k[0] >= 0).map(|(k, c)| (k[0], c.norm())).collect();
        cells.sort_by_key(|c| c.0);
        let mut cum = vec![T::zero()];
        for (_, v) in &cells {
            let last = *cum.last().unwrap();
            cum.push(last + *v * h);
        }
        let starts = cells.iter().map(|c| lit::<T>(c.0 as f64) * h).collect();
        let vals = cells.iter().map(|c| c.1).collect();
        Primitive { starts, cum, vals, h }
    }

    fn at(&self, x: T) -> T {
        let i = self.starts.partition_point(|s| *s <= x);
        if i == 0 {
            return T::zero();
        }
        let part = (x - self.starts[i - 1]).min(self.h);
        self.cum[i - 1] + self.vals[i - 1] * part
    }
}

/// Smallest `C` with `x ∫_x^{2x} |df0| ≤ C ∫_{x/Λ}^{Λx} |f0|` for
/// `x ∈ [2^{window.0}, 2^{window.1}]`, or `+∞` when some `x` has positive
/// variation and zero mass.
pub fn gm_constant<T: Real>(f0: &StepFunction<T>, dilation: T, window: (i32, i32)) -> Result<T> {
    if f0.dim() != 1 {
        return invalid("the radial profile must be one-dimensional");
    }
    if !(dilation > T::one()) {
        return invalid("dilation must exceed 1");
    }
    if window.0 > window.1 {
        return invalid("empty window");
    }
    let js = jumps(f0);
    let prim = Primitive::new(f0);
    let mut cum_jump = vec![T::zero()];
    for j in &js {
        let last = *cum_jump.last().unwrap();
        cum_jump.push(last + j.1);
    }
    let (x_lo, x_hi) = (pow2::<T>(window.0), pow2::<T>(window.1));
    let two = lit::<T>(2.0);
    let ratio = |x: T| -> T {
        let a = js.partition_point(|j| j.0 < x);
        let b = js.partition_point(|j| j.0 <= two * x);
        let var = if b > a { cum_jump[b] - cum_jump[a] } else { T::zero() };
        if var == T::zero() {
            return T::zero();
        }
        let m = prim.at(dilation * x) - prim.at(x / dilation);
        if m == T::zero() {
            T::infinity()
        } else {
            x * var / m
        }
    };
    let mut cands = vec![x_lo, x_hi];
    for (t, _) in &js {
        cands.extend([*t, *t / two, *t * dilation, *t / dilation]);
    }
    let octaves = (window.1 - window.0) as usize;
    let step = two.powf(lit(1.0 / GRID_PER_OCTAVE as f64));
    let mut x = x_lo;
    for _ in 0..=octaves * GRID_PER_OCTAVE {
        cands.push(x);
        x *= step;
    }
    Ok(cands.into_iter().filter(|x| *x >= x_lo && *x <= x_hi).map(ratio).fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_interval() {
        let f = StepFunction::indicator(1, 0, [[0, 0]]).unwrap();
        // Worst point x = 1: variation 1, mass over [1/2, 2] is 1/2.
        assert_relative_eq!(gm_constant(&f, 2.0, (-10, 10)).unwrap(), 2.0, max_relative = 1e-14);
        assert_eq!(gm_constant(&f, 2.0, (3, 6)).unwrap(), 0.0);
    }

    #[test]
    fn nonincreasing_profiles_are_finite() {
        let f = StepFunction::from_real(1, -3, (0..40).map(|k| ([k, 0], 1.0 / (1.0 + k as f64)))).unwrap();
        let c = gm_constant(&f, 2.0, (-10, 10)).unwrap();
        assert!(c.is_finite() && c > 0.0);
    }

    #[test]
    fn isolated_spike_blows_up() {
        let spike = |bg: f64| {
            let mut cells: Vec<([i64; 2], f64)> = (0..16).filter(|k| *k != 4).map(|k| ([k, 0], bg)).collect();
            cells.push(([4, 0], 1.0));
            StepFunction::from_real(1, 0, cells).unwrap()
        };
        let c1 = gm_constant(&spike(1e-2), 2.0, (-10, 10)).unwrap();
        let c2 = gm_constant(&spike(1e-4), 2.0, (-10, 10)).unwrap();
        assert!(c2 > 50.0 * c1);
        let bare = StepFunction::indicator(1, 0, [[4, 0]]).unwrap();
        assert_eq!(gm_constant(&bare, 1.5, (-10, 10)).unwrap(), f64::INFINITY);
    }
}
