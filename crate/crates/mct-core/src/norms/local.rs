use crate::error::{invalid, MctError, Result};
use crate::grid::StepFunction;
use crate::norms::{NormParams, NormReport, Weight};
use crate::scalar::{geometric_tail_power, lit, pow2, root, to_f64, LqAccumulator, Real};

/// `Σ |c|^p` over the cells touching the origin, times the fraction of
/// `B_r` each covers, so that `∫_{B_r} |f|^p = K r^n` for `r ≤ 2^level`.
fn origin_density<T: Real>(f: &StepFunction<T>, p: T) -> T {
    let corner: Vec<[i64; 2]> = if f.dim() == 1 {
        vec![[-1, 0], [0, 0]]
    } else {
        vec![[-1, -1], [-1, 0], [0, -1], [0, 0]]
    };
    let s: T = corner.iter().map(|k| f.coefficient(k).norm().powf(p)).sum();
    if f.dim() == 1 {
        s
    } else {
        s * T::FRAC_PI_4()
    }
}

fn touches_origin<T: Real>(f: &StepFunction<T>) -> bool {
    f.min_radius() == T::zero()
}

fn dyadic_ceil<T: Real>(x: T) -> i32 {
    x.log2().ceil().to_i32().expect("finite radius")
}

fn dyadic_floor<T: Real>(x: T) -> i32 {
    x.log2().floor().to_i32().expect("finite radius")
}

/// `‖f‖_{LM^λ_{p,q}} = ‖2^{−kλ} ‖f‖_{L_p(B_{2^k}(0))}‖_{ℓ_q(k ∈ Z)}`, exact.
pub fn local_morrey_norm<T: Real>(f: &StepFunction<T>, prm: &NormParams<T>) -> Result<NormReport<T>> {
    if prm.q.is_finite() && prm.lambda == T::zero() {
        return Err(MctError::TrivialSpace(format!("λ = 0 with q = {} < ∞ leaves only the zero function", prm.q)));
    }
    if f.dim() != prm.dim {
        return invalid("dimension of the function and the parameters differ");
    }
    let (p, q, lambda) = (prm.p, prm.q, prm.lambda);
    let params = prm.record();
    if f.is_zero() {
        return Ok(NormReport::exact("LM", params, T::zero(), (0, 0)));
    }
    let n = prm.n();
    let origin = [T::zero(); 2];
    let term = |k: i32| pow2::<T>(k).powf(-lambda) * f.ball_power(p, &origin, pow2(k)).powf(p.recip());
    let k_hi = dyadic_ceil(f.max_radius());
    let two = lit::<T>(2.0);
    let mut raw = T::zero();
    let k_lo = if touches_origin(f) {
        let dens = origin_density(f, p);
        let level = f.level();
        let first = pow2::<T>(level - 1).powf(-lambda) * (dens * pow2::<T>((level - 1) * prm.dim as i32)).powf(p.recip());
        raw = geometric_tail_power(first, two.powf(lambda - n / p), q);
        level
    } else {
        dyadic_floor(f.min_radius())
    };
    let mut acc = LqAccumulator::new(q);
    for k in k_lo..=k_hi {
        acc.push(term(k));
    }
    raw = combine(raw, acc.raw(), q);
    if lambda <= T::zero() {
        raw = T::infinity();
    } else {
        let first = pow2::<T>(k_hi + 1).powf(-lambda) * f.lp_norm(p);
        raw = combine(raw, geometric_tail_power(first, two.powf(-lambda), q), q);
    }
    Ok(NormReport::exact("LM", params, root(raw, q), (k_lo, k_hi)))
}

/// `‖f‖_{T^λ_q L_p} = ‖2^{kλ} ‖f‖_{L_p(B_{2^{k+1}} \ B_{2^k})}‖_{ℓ_q(k ∈ Z)}`,
/// exact in dimension 1 and up to disk-area rounding in dimension 2.
pub fn truncated_norm<T: Real>(f: &StepFunction<T>, lambda: T, q: T, p: T) -> Result<NormReport<T>> {
    let mut rep = annuli_norm(f, p, q, &Weight::power(lambda))?;
    rep.params.push(("lambda".into(), to_f64(lambda)));
    Ok(rep)
}

/// `‖μ(2^k) ‖f‖_{L_p(B_{2^{k+1}} \ B_{2^k})}‖_{ℓ_q(k ∈ Z)}` for a multiplier
/// `μ`. The tail toward the origin is closed-form for power multipliers and
/// summed over 200 further levels otherwise.
pub(crate) fn annuli_norm<T: Real>(f: &StepFunction<T>, p: T, q: T, mult: &Weight<T>) -> Result<NormReport<T>> {
    if !(p > T::zero()) || !(q > T::zero()) {
        return invalid("p and q must be positive");
    }
    let params = vec![("n".into(), f.dim() as f64), ("p".into(), to_f64(p)), ("q".into(), to_f64(q))];
    let space = format!("T[{}]", mult.label());
    if f.is_zero() {
        return Ok(NormReport::exact(space, params, T::zero(), (0, 0)));
    }
    let n = lit::<T>(f.dim() as f64);
    let origin = [T::zero(); 2];
    let annulus = |k: i32| {
        (f.ball_power(p, &origin, pow2(k + 1)) - f.ball_power(p, &origin, pow2(k))).max(T::zero())
    };
    let term = |k: i32| mult.at_dyadic(k) * annulus(k).powf(p.recip());
    let k_hi = dyadic_ceil(f.max_radius()) - 1;
    let mut raw = T::zero();
    let mut lower_bound = false;
    let k_lo = if touches_origin(f) {
        let dens = origin_density(f, p);
        let level = f.level();
        let shell = dens * (pow2::<T>(f.dim() as i32) - T::one());
        // Annulus k below the cell level carries shell·2^{kn}.
        let inner = |k: i32| mult.at_dyadic(k) * (shell * pow2::<T>(k * f.dim() as i32)).powf(p.recip());
        match mult.power_exponent() {
            Some(e) => raw = geometric_tail_power(inner(level - 1), lit::<T>(2.0).powf(-(e + n / p)), q),
            None => {
                let mut acc = LqAccumulator::new(q);
                for k in (level - 200..level).rev() {
                    acc.push(inner(k));
                }
                raw = acc.raw();
                lower_bound = true;
            }
        }
        level
    } else {
        dyadic_floor(f.min_radius()) - 1
    };
    let mut acc = LqAccumulator::new(q);
    for k in k_lo..=k_hi.max(k_lo) {
        acc.push(term(k));
    }
    raw = combine(raw, acc.raw(), q);
    Ok(NormReport { space, params, value: root(raw, q), lower_bound, tail_estimate: T::zero(), m_range: (k_lo, k_hi) })
}

fn combine<T: Real>(a: T, b: T, q: T) -> T {
    if q.is_infinite() {
        a.max(b)
    } else {
        a + b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_block_examples() {
        let f = StepFunction::indicator(1, 0, [[1, 0]]).unwrap();
        let t = truncated_norm(&f, 0.5, f64::INFINITY, 1.0).unwrap();
        assert_relative_eq!(t.value, 1.0);
        for lambda in [0.25, 0.5, 0.9] {
            let prm = NormParams::new(1, 1.0, f64::INFINITY, lambda).unwrap();
            assert_relative_eq!(local_morrey_norm(&f, &prm).unwrap().value, 2f64.powf(-lambda), max_relative = 1e-15);
        }
        let prm = NormParams::new(1, 1.0, 2.0, 0.0).unwrap();
        assert!(matches!(local_morrey_norm(&f, &prm), Err(MctError::TrivialSpace(_))));
    }

    fn brute_lm(f: &StepFunction<f64>, p: f64, q: f64, lambda: f64) -> f64 {
        let mut acc = LqAccumulator::new(q);
        for k in -500..500 {
            acc.push(2f64.powf(-lambda * k as f64) * f.ball_power(p, &[0.0, 0.0], 2f64.powi(k)).powf(1.0 / p));
        }
        acc.value()
    }

    fn brute_t(f: &StepFunction<f64>, p: f64, q: f64, lambda: f64) -> f64 {
        let mut acc = LqAccumulator::new(q);
        for k in -500..500 {
            let a = f.ball_power(p, &[0.0, 0.0], 2f64.powi(k + 1)) - f.ball_power(p, &[0.0, 0.0], 2f64.powi(k));
            acc.push(2f64.powf(lambda * k as f64) * a.max(0.0).powf(1.0 / p));
        }
        acc.value()
    }

    #[test]
    fn tails_match_brute_force() {
        let fs = vec![
            StepFunction::from_real(1, -2, vec![([-1, 0], 1.0), ([0, 0], 2.0), ([7, 0], 0.5)]).unwrap(),
            StepFunction::from_real(1, 1, vec![([3, 0], 1.0), ([-4, 0], 3.0)]).unwrap(),
            StepFunction::from_real(2, -1, vec![([0, 0], 1.0), ([-1, 0], 2.0), ([3, -2], 1.0)]).unwrap(),
        ];
        for f in &fs {
            for (p, q, l) in [(2.0, 2.0, 0.3), (1.0, f64::INFINITY, 0.7), (3.0, 1.0, 0.2)] {
                let prm = NormParams::new(f.dim(), p, q, l).unwrap();
                assert_relative_eq!(local_morrey_norm(f, &prm).unwrap().value, brute_lm(f, p, q, l), max_relative = 1e-11);
                assert_relative_eq!(truncated_norm(f, -l, q, p).unwrap().value, brute_t(f, p, q, -l), max_relative = 1e-11);
            }
        }
    }
}
