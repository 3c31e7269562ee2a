//! Named example and counterexample families.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{invalid, MctError, Result};
use crate::fourier::{EvalKind, FourierEvaluable};
use crate::grid::{Idx, Modulated, StepFunction};
use crate::norms::NormParams;
use crate::quad::GaussRule;
use crate::scalar::{lit, pow2, sinc, Real};

/// Largest exponent whose position `2^k` still fits a cell index.
const MAX_POSITION_EXP: u32 = 61;

/// `Π_j Σ_{k=1}^N χ_{[2^k, 2^k + 1)}(x_j)` on the unit grid, `N^n` cells.
pub fn lacunary_product<T: Real>(terms: u32, dim: usize) -> Result<StepFunction<T>> {
    if terms == 0 || terms > MAX_POSITION_EXP {
        return invalid(format!("need 1 ≤ N ≤ {MAX_POSITION_EXP}"));
    }
    let pos: Vec<i64> = (1..=terms).map(|k| 1i64 << k).collect();
    let cells: Vec<Idx> = if dim == 1 {
        pos.iter().map(|&a| [a, 0]).collect()
    } else {
        pos.iter().flat_map(|&a| pos.iter().map(move |&b| [a, b])).collect()
    };
    StepFunction::indicator(dim, 0, cells)
}

/// Closed-form view of the lacunary family, valid for any number of terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lacunary {
    pub terms: u32,
    pub dim: usize,
}

impl Lacunary {
    /// Aligned-cube `M^λ_{p,∞}` norm, exact: at level `m ≥ 1` the fullest
    /// cube per axis is `[0, 2^m)` with `min(N, m − 1)` cells (or any single
    /// cell), and at `m ≤ 0` a cube sits inside one cell.
    pub fn morrey_norm<T: Real>(&self, p: T, lambda: T) -> T {
        let n = lit::<T>(self.dim as f64);
        let below = if lambda <= n / p { T::one() } else { T::infinity() };
        let mut best = below;
        for m in 1..=(self.terms as i32 + 2) {
            let count = ((m - 1).min(self.terms as i32)).max(1);
            let v = pow2::<T>(m).powf(-lambda) * lit::<T>(count as f64).powf(n / p);
            best = best.max(v);
        }
        if lambda < T::zero() {
            T::infinity()
        } else {
            best
        }
    }

    /// `‖ĝ_N‖_{L_2((0,1)^n)}` from the Gram sum of the exponentials against
    /// `sinc²(πy)`.
    pub fn transform_l2_unit(&self) -> f64 {
        let mut s = 0.0;
        let mut cache: BTreeMap<u64, f64> = BTreeMap::new();
        for k in 1..=self.terms {
            for l in 1..=self.terms {
                let d = (2f64.powi(k as i32) - 2f64.powi(l as i32)).abs() as u64;
                s += *cache.entry(d).or_insert_with(|| sinc2_cosine_moment(d));
            }
        }
        s.powf(self.dim as f64 / 2.0)
    }
}

/// `∫_0^1 sinc²(πy) cos(2π d y) dy` for an integer `d ≥ 0`.
pub fn sinc2_cosine_moment(d: u64) -> f64 {
    if d > 4096 {
        // Integration by parts: odd derivatives of sinc² vanish at 0 and the
        // first one surviving at 1 is the third, equal to −12.
        let w = 2.0 * std::f64::consts::PI * d as f64;
        return 12.0 / w.powi(4);
    }
    let rule = GaussRule::<f64>::new(16);
    let panels = (2 * d).max(16);
    let h = 1.0 / panels as f64;
    let pi = std::f64::consts::PI;
    (0..panels)
        .map(|i| {
            let a = i as f64 * h;
            rule.integrate(a, a + h, |y| sinc(pi * y).powi(2) * (2.0 * pi * (d as f64) * y).cos())
        })
        .sum()
}

impl<T: Real> FourierEvaluable<T> for Lacunary {
    fn dim(&self) -> usize {
        self.dim
    }

    fn ft(&self, y: &[T]) -> Complex<T> {
        let mut out = Complex::new(T::one(), T::zero());
        for &yj in y.iter().take(self.dim) {
            // Box factor ∫_0^1 e^{−2πixy} dx = e^{−πiy} sinc(πy).
            let th = -T::PI() * yj;
            let mut axis = Complex::new(T::zero(), T::zero());
            for k in 1..=self.terms {
                // 2^k·y is exact, so reducing it mod 1 loses nothing.
                let t = pow2::<T>(k as i32) * yj;
                let turns = t - t.floor();
                let ph = -T::TAU() * turns;
                axis += Complex::new(ph.cos(), ph.sin());
            }
            out = out * axis * Complex::new(th.cos(), th.sin()).scale(sinc(T::PI() * yj));
        }
        out
    }

    fn kind(&self) -> EvalKind {
        EvalKind::ExactClosedForm
    }

    fn mass_bound(&self) -> T {
        lit::<T>(self.terms as f64).powi(self.dim as i32)
    }
}

/// Rudin–Shapiro signs of length `len` (a power of two).
pub fn rudin_shapiro(len: usize) -> Result<Vec<i8>> {
    if len == 0 || !len.is_power_of_two() {
        return invalid(format!("length {len} is not a power of two"));
    }
    let (mut p, mut q) = (vec![1i8], vec![1i8]);
    while p.len() < len {
        let np: Vec<i8> = p.iter().chain(q.iter()).copied().collect();
        let nq: Vec<i8> = p.iter().copied().chain(q.iter().map(|x| -x)).collect();
        p = np;
        q = nq;
    }
    Ok(p)
}

/// `f_N = Σ_{n=0}^{N} ε_n χ_{[n, n+1)}` with Rudin–Shapiro signs; `N + 1`
/// must be a power of two.
pub fn ultraflat_counterexample<T: Real>(n_max: usize) -> Result<StepFunction<T>> {
    let eps = rudin_shapiro(n_max + 1)?;
    StepFunction::from_real(1, 0, eps.iter().enumerate().map(|(n, e)| ([n as i64, 0], lit::<T>(*e as f64))))
}

/// `max_j |Σ_n ε_n e^{2πi n j/M}| / √len` over `M` equispaced points.
pub fn polynomial_sup_ratio(coeffs: &[i8], samples: usize) -> f64 {
    let len = coeffs.len() as f64;
    let mut best = 0.0f64;
    for j in 0..samples {
        let (mut re, mut im) = (0.0, 0.0);
        for (n, e) in coeffs.iter().enumerate() {
            // Reduce n·j mod M first to keep the phase exact.
            let turns = ((n * j) % samples) as f64 / samples as f64;
            let th = 2.0 * std::f64::consts::PI * turns;
            re += *e as f64 * th.cos();
            im += *e as f64 * th.sin();
        }
        best = best.max(re.hypot(im));
    }
    best / len.sqrt()
}

/// `(∫_a^b |Σ_n ε_n e^{2πi n y}|² dy)^{1/2}`, exact through the
/// autocorrelation of the coefficients.
pub fn polynomial_l2_on_interval(coeffs: &[i8], a: f64, b: f64) -> f64 {
    let len = coeffs.len();
    let pi2 = 2.0 * std::f64::consts::PI;
    let mut total = len as f64 * (b - a);
    for d in 1..len {
        let r: i64 = (0..len - d).map(|n| coeffs[n] as i64 * coeffs[n + d] as i64).sum();
        if r != 0 {
            let w = pi2 * d as f64;
            total += 2.0 * r as f64 * ((w * b).sin() - (w * a).sin()) / w;
        }
    }
    total.max(0.0).sqrt()
}

/// `e^{2πi⟨N,x⟩} χ_{[1,2)^n}(x)`, whose transform is the unit box transform
/// translated to `N`.
pub fn modulated_box<T: Real>(freq: T, dim: usize) -> Result<Modulated<T>> {
    let base = StepFunction::indicator(dim, 0, [[1, if dim == 2 { 1 } else { 0 }]])?;
    Ok(base.modulate(&[freq, freq][..dim]))
}

/// `χ_{[N, N+1)^n}`.
pub fn shifted_box<T: Real>(shift: i64, dim: usize) -> Result<StepFunction<T>> {
    StepFunction::indicator(dim, 0, [[shift, if dim == 2 { shift } else { 0 }]])
}

/// `‖|x|^γ f‖_{L_p}`: exact in dimension 1, tensor Gauss–Legendre per cell in
/// dimension 2.
pub fn power_weighted_lp_norm<T: Real>(f: &StepFunction<T>, gamma: T, p: T) -> T {
    let h = f.cell_side();
    let e = gamma * p;
    let mut s = T::zero();
    if f.dim() == 1 {
        let prim = |x: T| x.powf(e + T::one()) / (e + T::one());
        for (k, c) in f.cells() {
            let a = lit::<T>(k[0] as f64) * h;
            let (lo, hi) = if a >= T::zero() { (a, a + h) } else { (-a - h, -a) };
            s += c.norm().powf(p) * (prim(hi) - prim(lo));
        }
    } else {
        let rule = GaussRule::<T>::new(12);
        for (k, c) in f.cells() {
            let x0 = lit::<T>(k[0] as f64) * h;
            let y0 = lit::<T>(k[1] as f64) * h;
            let v = rule.integrate(x0, x0 + h, |x| rule.integrate(y0, y0 + h, |y| x.hypot(y).powf(e)));
            s += c.norm().powf(p) * v;
        }
    }
    s.powf(p.recip())
}

/// `|x|^{−γ−n/p} / |ln |x||` on `B_{1/2π}(0)`, sampled at the midpoints of
/// the level-`level` grid (default −20 in dimension 1, −8 in dimension 2).
pub fn log_singular<T: Real>(gamma: T, p: T, dim: usize, level: Option<i32>) -> Result<StepFunction<T>> {
    let n = lit::<T>(dim as f64);
    if !(gamma < n - n / p) {
        return Err(MctError::NotIntegrable(format!("γ = {gamma} must be below n/p' = {}", n - n / p)));
    }
    let level = level.unwrap_or(if dim == 1 { -20 } else { -8 });
    let h = pow2::<T>(level);
    let radius = (T::TAU()).recip();
    let reach = (radius / h).ceil().to_i64().unwrap();
    let profile = |r: T| r.powf(-gamma - n / p) / r.ln().abs();
    let half = lit::<T>(0.5);
    let mut cells = Vec::new();
    if dim == 1 {
        for k in -reach..reach {
            let r = ((lit::<T>(k as f64) + half) * h).abs();
            if r < radius {
                cells.push(([k, 0], profile(r)));
            }
        }
    } else {
        for i in -reach..reach {
            for j in -reach..reach {
                let r = ((lit::<T>(i as f64) + half) * h).hypot((lit::<T>(j as f64) + half) * h);
                if r < radius {
                    cells.push(([i, j], profile(r)));
                }
            }
        }
    }
    StepFunction::from_real(dim, level, cells)
}

/// Admissible range `(1 − 1/s − β, 1 − 1/s)` of the decay exponent.
pub fn sharpness_window<T: Real>(prm: &NormParams<T>) -> (T, T) {
    let hi = T::one() - prm.s_inv();
    (hi - prm.beta(), hi)
}

/// `f_K = Σ_{k=1}^K k^{−α} χ_{[2^{k−1}, 2^{k−1} + 1)}`.
pub fn sharpness_example<T: Real>(alpha: T, terms: u32, prm: Option<&NormParams<T>>) -> Result<StepFunction<T>> {
    if terms == 0 || terms > MAX_POSITION_EXP + 1 {
        return invalid(format!("need 1 ≤ K ≤ {}", MAX_POSITION_EXP + 1));
    }
    if let Some(prm) = prm {
        let (lo, hi) = sharpness_window(prm);
        if !(alpha > lo && alpha < hi) {
            log::warn!("α = {alpha} lies outside ({lo}, {hi}); the example need not separate the two bounds");
        }
    }
    StepFunction::from_real(1, 0, (1..=terms).map(|k| ([1i64 << (k - 1), 0], lit::<T>(k as f64).powf(-alpha))))
}

/// Nonincreasing step profile of `t^{−θ}` on `(0, 1)` at level −16: cell
/// averages when `θ < 1`, midpoint values otherwise.
pub fn gm_radial<T: Real>(theta: T, dim: usize) -> Result<StepFunction<T>> {
    if !(theta > T::zero()) || !(theta < lit(dim as f64)) {
        return invalid("need 0 < θ < n");
    }
    let level = -16;
    let h = pow2::<T>(level);
    let cells = 1i64 << (-level);
    let one = T::one();
    let vals = (0..cells).map(|k| {
        let a = lit::<T>(k as f64) * h;
        let v = if theta < one {
            let e = one - theta;
            ((a + h).powf(e) - a.powf(e)) / (e * h)
        } else {
            (a + h * lit(0.5)).powf(-theta)
        };
        ([k, 0], v)
    });
    StepFunction::from_real(1, level, vals)
}

/// `f(|x|)` on the line from a profile supported in `[0, ∞)`.
pub fn even_extension<T: Real>(profile: &StepFunction<T>) -> Result<StepFunction<T>> {
    let cells: Vec<(Idx, Complex<T>)> = profile
        .cells()
        .filter(|(k, _)| k[0] >= 0)
        .flat_map(|(k, c)| [([k[0], 0], *c), ([-k[0] - 1, 0], *c)])
        .collect();
    StepFunction::new(1, profile.level(), cells)
}

/// Names accepted by [`family`].
pub const FAMILY_NAMES: [&str; 7] = ["lacunary", "ultraflat", "modulated-box", "shifted-box", "log-singular", "sharpness", "gm-radial"];

/// A concrete member of a named family.
#[derive(Clone, Debug, PartialEq)]
pub enum Realization {
    Step(StepFunction<f64>),
    Modulated(Modulated<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticFamily {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub realization: Realization,
}

impl AnalyticFamily {
    /// The step function, or the unmodulated base for modulated members.
    pub fn step(&self) -> &StepFunction<f64> {
        match &self.realization {
            Realization::Step(f) => f,
            Realization::Modulated(m) => &m.base,
        }
    }
}

/// Builds a family member from `name` and `key = value` parameters.
pub fn family(name: &str, params: &BTreeMap<String, f64>) -> Result<AnalyticFamily> {
    let get = |k: &str, default: Option<f64>| -> Result<f64> {
        params.get(k).copied().or(default).ok_or_else(|| MctError::InvalidArgument(format!("family {name} needs parameter {k}")))
    };
    let dim = get("dim", Some(1.0))? as usize;
    let whole = |k: &str, default: Option<f64>| -> Result<u32> {
        let v = get(k, default)?;
        if v.fract() != 0.0 || v < 0.0 {
            return invalid(format!("{k} must be a nonnegative integer"));
        }
        Ok(v as u32)
    };
    let realization = match name {
        "lacunary" => Realization::Step(lacunary_product(whole("N", None)?, dim)?),
        "ultraflat" => Realization::Step(ultraflat_counterexample(whole("N", None)? as usize)?),
        "modulated-box" => Realization::Modulated(modulated_box(get("N", None)?, dim)?),
        "shifted-box" => Realization::Step(shifted_box(whole("N", None)? as i64, dim)?),
        "log-singular" => {
            let level = params.get("level").map(|v| *v as i32);
            Realization::Step(log_singular(get("gamma", None)?, get("p", None)?, dim, level)?)
        }
        "sharpness" => Realization::Step(sharpness_example(get("alpha", None)?, whole("K", None)?, None)?),
        "gm-radial" => Realization::Step(gm_radial(get("theta", None)?, dim)?),
        _ => return invalid(format!("unknown family {name}; known: {}", FAMILY_NAMES.join(", "))),
    };
    Ok(AnalyticFamily { name: name.to_string(), params: params.clone(), realization })
}

/// Value of `(1/(γp + 1))(b^{γp+1} − a^{γp+1})`.
fn power_integral(a: f64, b: f64, e: f64) -> f64 {
    (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0)
}

/// Aligned-cube `M^λ_{p,∞}` norm of `x^γ χ_{[0, 2^J)}` for `γ ≥ 0` and
/// `0 < λ < 1/p`. The integrand increases, so the rightmost cube of each
/// level is extremal, and levels above `J` only lose.
pub fn power_box_morrey_norm(j: i32, gamma: f64, p: f64, lambda: f64) -> f64 {
    let e = gamma * p;
    let top = 2f64.powi(j);
    (j - 400..=j)
        .map(|m| {
            let side = 2f64.powi(m);
            2f64.powf(-lambda * m as f64) * power_integral(top - side, top, e).powf(1.0 / p)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{morrey_norm, DistributionProfile, MorreyOptions};
    use approx::assert_relative_eq;

    #[test]
    fn lacunary_examples() {
        let f = lacunary_product::<f64>(1, 1).unwrap();
        assert_eq!(f.cell_count(), 1);
        assert_eq!(f.coefficient(&[2, 0]).re, 1.0);
        let f3 = lacunary_product::<f64>(3, 1).unwrap();
        for a in [2, 4, 8] {
            assert_eq!(f3.coefficient(&[a, 0]).re, 1.0);
        }
        assert_relative_eq!(f3.l1_norm(), 3.0);
        assert_eq!(lacunary_product::<f64>(4, 2).unwrap().cell_count(), 16);
    }

    #[test]
    fn lacunary_morrey_closed_form_matches_and_stays_bounded() {
        let prm = NormParams::new(1, 2.0, f64::INFINITY, 0.5).unwrap();
        for n in 2..=20 {
            let f = lacunary_product::<f64>(n, 1).unwrap();
            let exact = morrey_norm(&f, &prm, &MorreyOptions::default()).unwrap().value;
            let closed = Lacunary { terms: n, dim: 1 }.morrey_norm(2.0, 0.5);
            assert_relative_eq!(exact, closed, max_relative = 1e-14);
            assert!(exact <= 1.0 + 1e-12);
        }
        for (p, l) in [(2.0, 0.25), (4.0, 0.125)] {
            let prm = NormParams::new(2, p, f64::INFINITY, l).unwrap();
            let f = lacunary_product::<f64>(6, 2).unwrap();
            let exact = morrey_norm(&f, &prm, &MorreyOptions::default()).unwrap().value;
            assert_relative_eq!(exact, Lacunary { terms: 6, dim: 2 }.morrey_norm(p, l), max_relative = 1e-14);
        }
    }

    #[test]
    fn lacunary_transform_matches_step_transform() {
        let lac = Lacunary { terms: 8, dim: 2 };
        let f = lacunary_product::<f64>(8, 2).unwrap();
        for y in [[0.1, 0.3], [-1.7, 0.45], [3.25, -0.01]] {
            let a: Complex<f64> = lac.ft(&y);
            let b = f.ft(&y);
            assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn lacunary_unit_l2_matches_quadrature() {
        let lac = Lacunary { terms: 4, dim: 1 };
        let rule = GaussRule::<f64>::new(16);
        let direct: f64 = (0..256)
            .map(|i| {
                let a = i as f64 / 256.0;
                rule.integrate(a, a + 1.0 / 256.0, |y| FourierEvaluable::<f64>::ft(&lac, &[y]).norm_sqr())
            })
            .sum();
        assert_relative_eq!(lac.transform_l2_unit(), direct.sqrt(), max_relative = 1e-12);
        // The large-frequency formula joins the quadrature branch.
        let q = sinc2_cosine_moment(4096);
        let w = 2.0 * std::f64::consts::PI * 4096.0;
        assert_relative_eq!(q, 12.0 / w.powi(4), max_relative = 1e-4);
    }

    #[test]
    fn rudin_shapiro_examples() {
        assert_eq!(rudin_shapiro(2).unwrap(), vec![1, 1]);
        assert_eq!(rudin_shapiro(4).unwrap(), vec![1, 1, 1, -1]);
        assert!(rudin_shapiro(6).is_err());
        assert!(ultraflat_counterexample::<f64>(5).is_err());
        for j in 4..=12 {
            let c = rudin_shapiro(1 << j).unwrap();
            let r = polynomial_sup_ratio(&c, 4096);
            assert!(r >= 1.0 - 1e-12 && r <= 2f64.sqrt() + 1e-12, "j = {j}: {r}");
        }
    }

    #[test]
    fn interval_l2_matches_quadrature() {
        let c = rudin_shapiro(64).unwrap();
        let (a, b) = (0.25 / std::f64::consts::PI, 0.5 / std::f64::consts::PI);
        let rule = GaussRule::<f64>::new(16);
        let panels = 64;
        let h = (b - a) / panels as f64;
        let direct: f64 = (0..panels)
            .map(|i| {
                rule.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, |y| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (n, e) in c.iter().enumerate() {
                        let th = 2.0 * std::f64::consts::PI * n as f64 * y;
                        re += *e as f64 * th.cos();
                        im += *e as f64 * th.sin();
                    }
                    re * re + im * im
                })
            })
            .sum();
        assert_relative_eq!(polynomial_l2_on_interval(&c, a, b), direct.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn box_examples() {
        let m0 = modulated_box(0.0f64, 1).unwrap();
        let m3 = modulated_box(3.0f64, 1).unwrap();
        assert_relative_eq!(m0.ft(&[0.0]).norm(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(m3.ft(&[3.0]).norm(), 1.0, max_relative = 1e-15);
        for i in 0..100 {
            let s = -5.0 + 0.1 * i as f64;
            assert_relative_eq!(m3.ft(&[s + 3.0]).norm(), m0.ft(&[s]).norm(), max_relative = 1e-12, epsilon = 1e-15);
            // Closed form e^{−2πi s}(1 − e^{−2πi s})/(2πi s) at the shifted argument.
            if s.abs() > 1e-9 {
                let z = Complex::new(0.0, -2.0 * std::f64::consts::PI * s);
                let expect = z.exp() * (Complex::new(1.0, 0.0) - z.exp()) / Complex::new(0.0, 2.0 * std::f64::consts::PI * s);
                assert!((m3.ft(&[s + 3.0]) - expect).norm() < 1e-12);
            }
        }
        let g = shifted_box::<f64>(5, 1).unwrap();
        for gamma in [0.5, 1.0, 2.0] {
            let v = power_weighted_lp_norm(&g, gamma, 2.0);
            assert!(v >= 5f64.powf(gamma) && v <= 6f64.powf(gamma));
        }
        let g2 = shifted_box::<f64>(2, 2).unwrap();
        let v2 = power_weighted_lp_norm(&g2, 1.0, 2.0);
        // ∫∫_{[2,3)^2} (x² + y²) = 2·19/3.
        assert_relative_eq!(v2, (38.0f64 / 3.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn log_singular_examples() {
        let f = log_singular(0.1f64, 2.0, 1, Some(-12)).unwrap();
        let l1 = f.l1_norm();
        assert!(l1.is_finite() && l1 > 0.0);
        assert_relative_eq!(f.ft(&[0.0]).re, l1, max_relative = 1e-12);
        for i in 0..=20 {
            let y = -1.0 + 0.1 * i as f64;
            assert!(f.ft(&[y]).norm() > 0.1 * l1);
        }
        assert!(power_weighted_lp_norm(&f, 0.1, 2.0).is_finite());
        assert!(matches!(log_singular(0.5f64, 2.0, 1, None), Err(MctError::NotIntegrable(_))));
        let f2 = log_singular(0.5f64, 2.0, 2, Some(-5)).unwrap();
        assert!(f2.l1_norm() > 0.0);
    }

    #[test]
    fn sharpness_examples() {
        let f1 = sharpness_example(0.3f64, 1, None).unwrap();
        assert_eq!(f1.cell_count(), 1);
        assert_eq!(f1.coefficient(&[1, 0]).re, 1.0);
        let k = 40;
        let alpha = 0.3;
        let f = sharpness_example(alpha, k, None).unwrap();
        let expect: f64 = (1..=k).map(|i| (i as f64).powf(-alpha)).sum();
        assert_relative_eq!(f.l1_norm(), expect, max_relative = 1e-14);
        let prof = DistributionProfile::from_step(&f);
        for t in [0.5, 3.5, 17.2, 39.9] {
            assert_relative_eq!(prof.f_star(t), t.ceil().powf(-alpha), max_relative = 1e-14);
        }
        let prm = NormParams::new(1, 2.0, f64::INFINITY, 0.25).unwrap();
        let (lo, hi) = sharpness_window(&prm);
        assert_relative_eq!(hi, 0.75);
        assert_relative_eq!(lo, 0.5);
    }

    #[test]
    fn gm_radial_examples() {
        let f = gm_radial(0.5f64, 1).unwrap();
        assert_relative_eq!(f.l1_norm(), 2.0, max_relative = 1e-12);
        let c = crate::functionals::gm_constant(&f, 2.0, (-10, 10)).unwrap();
        assert!(c.is_finite() && c > 0.0);
        let prof = DistributionProfile::from_step(&f);
        for t in [0.001, 0.3, 0.77] {
            assert_relative_eq!(prof.f_star(t), f.value_at(&[t]).re, max_relative = 1e-14);
        }
        let e = even_extension(&f).unwrap();
        assert_relative_eq!(e.l1_norm(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn power_box_morrey_reduces_to_indicator() {
        let prm = NormParams::new(1, 4.0, f64::INFINITY, 0.125).unwrap();
        let f = StepFunction::indicator(1, 0, (0..16).map(|k| [k, 0])).unwrap();
        let exact = morrey_norm(&f, &prm, &MorreyOptions::default()).unwrap().value;
        assert_relative_eq!(power_box_morrey_norm(4, 0.0, 4.0, 0.125), exact, max_relative = 1e-14);
        // Monotone in γ for a box inside [1, ∞)-heavy support.
        assert!(power_box_morrey_norm(6, 0.25, 4.0, 0.125) > power_box_morrey_norm(6, 0.0, 4.0, 0.125));
    }

    #[test]
    fn registry_builds_every_family() {
        let mut p = BTreeMap::new();
        p.insert("N".to_string(), 3.0);
        p.insert("gamma".to_string(), 0.1);
        p.insert("p".to_string(), 2.0);
        p.insert("alpha".to_string(), 0.3);
        p.insert("K".to_string(), 5.0);
        p.insert("theta".to_string(), 0.5);
        p.insert("level".to_string(), -8.0);
        for name in FAMILY_NAMES {
            let mut q = p.clone();
            if name == "ultraflat" {
                q.insert("N".into(), 7.0);
            }
            let fam = family(name, &q).unwrap();
            assert!(!fam.step().is_zero(), "{name}");
        }
        assert!(family("nope", &p).is_err());
    }
}
