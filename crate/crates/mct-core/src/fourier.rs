//! Exact Fourier transforms `f̂(y) = ∫ f(x) e^{−2πi⟨x,y⟩} dx` and midpoint
//! quadrature of `|ĝ|^p`.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::grid::{DyadicCube, Modulated, StepFunction};
use crate::scalar::{from_count, lit, sinc, Compensated, Real};

/// How a transform value is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalKind {
    ExactClosedForm,
    QuadratureBacked,
}

/// Anything that reports a pointwise value `ĝ(y)`.
pub trait FourierEvaluable<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn ft(&self, y: &[T]) -> Complex<T>;
    fn kind(&self) -> EvalKind {
        EvalKind::ExactClosedForm
    }
    /// Upper bound for `sup |ĝ|` (`+∞` when unknown).
    fn mass_bound(&self) -> T;
}

impl<T: Real, E: FourierEvaluable<T> + ?Sized> FourierEvaluable<T> for &E {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn ft(&self, y: &[T]) -> Complex<T> {
        (**self).ft(y)
    }
    fn kind(&self) -> EvalKind {
        (**self).kind()
    }
    fn mass_bound(&self) -> T {
        (**self).mass_bound()
    }
}

impl<T: Real, E: FourierEvaluable<T> + ?Sized> FourierEvaluable<T> for Arc<E> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn ft(&self, y: &[T]) -> Complex<T> {
        (**self).ft(y)
    }
    fn kind(&self) -> EvalKind {
        (**self).kind()
    }
    fn mass_bound(&self) -> T {
        (**self).mass_bound()
    }
}

/// Fractional part of `k·w` computed with an exact two-product, so phases stay
/// accurate when `k·w` is huge.
#[inline]
fn cycles<T: Real>(k: T, w: T) -> T {
    let t = k * w;
    let err = k.mul_add(w, -t);
    (t - t.floor()) + err
}

#[inline]
fn expi<T: Real>(turns: T) -> Complex<T> {
    let th = -T::TAU() * turns;
    Complex::new(th.cos(), th.sin())
}

/// Exact transform of a step function at `y`.
pub fn ft_point<T: Real>(f: &StepFunction<T>, y: &[T]) -> Complex<T> {
    let n = f.dim();
    let h = f.cell_side();
    let half = lit::<T>(0.5);
    // Per-axis factor h·e^{−πi h y}·sinc(πhy) is shared by all cells.
    let mut common = Complex::new(T::one(), T::zero());
    let mut w = [T::zero(); 2];
    for a in 0..n {
        w[a] = h * y[a];
        common = common * expi(half * w[a]).scale(h * sinc(T::PI() * w[a]));
    }
    let term = |k: &[i64; 2], c: &Complex<T>| {
        let mut turns = T::zero();
        for a in 0..n {
            turns += cycles(T::from_i64(k[a]).unwrap(), w[a]);
        }
        *c * expi(turns)
    };
    if f.cell_count() > 10_000 {
        let mut re = Compensated::new();
        let mut im = Compensated::new();
        for (k, c) in f.cells() {
            let t = term(k, c);
            re.add(t.re);
            im.add(t.im);
        }
        common * Complex::new(re.value(), im.value())
    } else {
        let mut s = Complex::new(T::zero(), T::zero());
        for (k, c) in f.cells() {
            s += term(k, c);
        }
        common * s
    }
}

impl<T: Real> FourierEvaluable<T> for StepFunction<T> {
    fn dim(&self) -> usize {
        StepFunction::dim(self)
    }
    fn ft(&self, y: &[T]) -> Complex<T> {
        ft_point(self, y)
    }
    fn mass_bound(&self) -> T {
        self.l1_norm()
    }
}

impl<T: Real> FourierEvaluable<T> for Modulated<T> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn ft(&self, y: &[T]) -> Complex<T> {
        let shifted = [y[0] - self.frequency[0], if y.len() > 1 { y[1] - self.frequency[1] } else { T::zero() }];
        ft_point(&self.base, &shifted[..self.base.dim()])
    }
    fn mass_bound(&self) -> T {
        self.base.l1_norm()
    }
}

/// `|y|^exponent · ĝ(y)`; used for the power weights of Pitt-type bounds.
#[derive(Clone, Debug)]
pub struct PowerWeighted<E, T> {
    pub inner: E,
    pub exponent: T,
}

impl<T: Real, E: FourierEvaluable<T>> FourierEvaluable<T> for PowerWeighted<E, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn ft(&self, y: &[T]) -> Complex<T> {
        let r = y.iter().take(self.dim()).map(|v| *v * *v).sum::<T>().sqrt();
        self.inner.ft(y).scale(r.powf(self.exponent))
    }
    fn kind(&self) -> EvalKind {
        self.inner.kind()
    }
    fn mass_bound(&self) -> T {
        if self.exponent == T::zero() {
            self.inner.mass_bound()
        } else {
            T::infinity()
        }
    }
}

/// Arbitrary closure `g(y)`, for direct use of the quadrature layer.
pub struct FnEvaluable<T, F> {
    pub dim: usize,
    pub func: F,
    pub bound: T,
}

impl<T: Real, F: Fn(&[T]) -> Complex<T> + Send + Sync> FourierEvaluable<T> for FnEvaluable<T, F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn ft(&self, y: &[T]) -> Complex<T> {
        (self.func)(y)
    }
    fn kind(&self) -> EvalKind {
        EvalKind::QuadratureBacked
    }
    fn mass_bound(&self) -> T {
        self.bound
    }
}

/// Result of a quadrature with one refinement step.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub refinement_delta: T,
    /// Values at each resolution tried, coarsest first.
    pub sequence: Vec<T>,
}

fn midpoint_power<T: Real, E: FourierEvaluable<T>>(g: &E, p: T, cube: &DyadicCube, res: usize) -> T {
    let side: T = cube.side();
    let h = side / from_count(res);
    let (x0, _) = cube.bounds::<T>(0);
    let half = lit::<T>(0.5);
    if cube.dim == 1 {
        let s: T = (0..res)
            .into_par_iter()
            .map(|i| g.ft(&[x0 + (from_count::<T>(i) + half) * h]).norm().powf(p))
            .collect::<Vec<T>>()
            .into_iter()
            .sum();
        s * h
    } else {
        let (y0, _) = cube.bounds::<T>(1);
        let s: T = (0..res)
            .into_par_iter()
            .map(|i| {
                let x = x0 + (from_count::<T>(i) + half) * h;
                (0..res).map(|j| g.ft(&[x, y0 + (from_count::<T>(j) + half) * h]).norm().powf(p)).sum::<T>()
            })
            .collect::<Vec<T>>()
            .into_iter()
            .sum();
        s * h * h
    }
}

/// `(∫_Q |g|^p)^{1/p}` by the composite midpoint rule at `resolution` and
/// `2·resolution` points per axis.
pub fn ft_lp_on_cube<T: Real, E: FourierEvaluable<T>>(g: &E, p: T, cube: &DyadicCube, resolution: usize) -> Result<Quadrature<T>> {
    if resolution < 2 {
        return invalid("resolution must be at least 2");
    }
    if !(p > T::zero()) {
        return invalid("p must be positive");
    }
    let coarse = midpoint_power(g, p, cube, resolution).powf(p.recip());
    let fine = midpoint_power(g, p, cube, 2 * resolution).powf(p.recip());
    Ok(Quadrature { value: fine, refinement_delta: (fine - coarse).abs(), sequence: vec![coarse, fine] })
}

/// Doubles the resolution from 64 until the delta drops below
/// `rel_tol·value` or the resolution reaches 1024.
pub fn ft_lp_on_cube_adaptive<T: Real, E: FourierEvaluable<T>>(g: &E, p: T, cube: &DyadicCube, rel_tol: T) -> Result<Quadrature<T>> {
    if !(p > T::zero()) {
        return invalid("p must be positive");
    }
    let mut res = 64;
    let mut seq = vec![midpoint_power(g, p, cube, res).powf(p.recip())];
    loop {
        res *= 2;
        let v = midpoint_power(g, p, cube, res).powf(p.recip());
        let delta = (v - *seq.last().unwrap()).abs();
        seq.push(v);
        if delta <= rel_tol * v || res >= 1024 {
            return Ok(Quadrature { value: v, refinement_delta: delta, sequence: seq });
        }
    }
}

/// `A_r g(ξ)`: midpoint average over the ball, normalized by the number of
/// nodes inside so constants are reproduced exactly.
pub fn average_on_ball<T: Real, E: FourierEvaluable<T>>(g: &E, r: T, xi: &[T], resolution: usize) -> Result<Complex<T>> {
    if resolution < 2 || !(r > T::zero()) {
        return invalid("need resolution ≥ 2 and r > 0");
    }
    let h = lit::<T>(2.0) * r / from_count(resolution);
    let half = lit::<T>(0.5);
    let mut s = Complex::new(T::zero(), T::zero());
    let mut count = 0usize;
    if g.dim() == 1 {
        for i in 0..resolution {
            s += g.ft(&[xi[0] - r + (from_count::<T>(i) + half) * h]);
            count += 1;
        }
    } else {
        for i in 0..resolution {
            let dx = -r + (from_count::<T>(i) + half) * h;
            for j in 0..resolution {
                let dy = -r + (from_count::<T>(j) + half) * h;
                if dx * dx + dy * dy < r * r {
                    s += g.ft(&[xi[0] + dx, xi[1] + dy]);
                    count += 1;
                }
            }
        }
    }
    Ok(s / from_count::<T>(count.max(1)))
}

/// Values of `g` at the midpoints of a uniform grid of spacing `h` covering
/// the box `[lo, lo + n·h)`.
#[derive(Clone, Debug)]
pub struct SampleGrid<T> {
    pub dim: usize,
    pub lo: [T; 2],
    pub h: T,
    pub n: [usize; 2],
    pub values: Vec<Complex<T>>,
}

impl<T: Real> SampleGrid<T> {
    pub fn sample<E: FourierEvaluable<T>>(g: &E, lo: [T; 2], h: T, n: [usize; 2]) -> Self {
        let dim = g.dim();
        let ny = if dim == 1 { 1 } else { n[1] };
        let half = lit::<T>(0.5);
        let values: Vec<Complex<T>> = (0..n[0] * ny)
            .into_par_iter()
            .map(|flat| {
                let i = flat / ny;
                let j = flat % ny;
                let x = lo[0] + (from_count::<T>(i) + half) * h;
                if dim == 1 {
                    g.ft(&[x])
                } else {
                    g.ft(&[x, lo[1] + (from_count::<T>(j) + half) * h])
                }
            })
            .collect();
        Self { dim, lo, h, n: [n[0], ny], values }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.values[i * self.n[1] + j]
    }

    /// Midpoint of node `(i, j)` along `axis`.
    #[inline]
    pub fn coord(&self, axis: usize, i: usize) -> T {
        self.lo[axis] + (from_count::<T>(i) + lit(0.5)) * self.h
    }

    pub fn cell_volume(&self) -> T {
        self.h.powi(self.dim as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> StepFunction<f64> {
        StepFunction::indicator(1, 0, [[0, 0]]).unwrap()
    }

    #[test]
    fn unit_interval_transform() {
        let f = unit();
        assert_relative_eq!(ft_point(&f, &[0.0]).re, 1.0, max_relative = 1e-15);
        assert_relative_eq!(ft_point(&f, &[0.5]).norm(), 2.0 / std::f64::consts::PI, max_relative = 1e-14);
        // Closed form (1 − e^{−2πiy})/(2πiy).
        for &y in &[0.3, -1.7, 12.25, 1e-3] {
            let z = Complex::new(0.0, -2.0 * std::f64::consts::PI * y);
            let want = (Complex::new(1.0, 0.0) - z.exp()) / Complex::new(0.0, 2.0 * std::f64::consts::PI * y);
            let got = ft_point(&f, &[y]);
            assert!((got - want).norm() < 1e-12, "{y}: {got} vs {want}");
        }
    }

    #[test]
    fn two_dimensional_product_structure() {
        let f = StepFunction::<f64>::indicator(2, 0, [[1, -2]]).unwrap();
        let g = StepFunction::<f64>::indicator(1, 0, [[1, 0]]).unwrap();
        let h = StepFunction::<f64>::indicator(1, 0, [[-2, 0]]).unwrap();
        for &(a, b) in &[(0.2, 0.9), (-1.3, 0.45)] {
            let want = ft_point(&g, &[a]) * ft_point(&h, &[b]);
            assert!((ft_point(&f, &[a, b]) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_quadrature_is_exact() {
        let c = FnEvaluable { dim: 1, func: |_: &[f64]| Complex::new(3.0, 4.0), bound: 5.0 };
        let q = ft_lp_on_cube(&c, 2.0, &DyadicCube::new(1, -2, &[3]), 4).unwrap();
        assert_relative_eq!(q.value, 5.0 * 0.25f64.sqrt(), max_relative = 1e-14);
        let a = average_on_ball(&c, 0.7, &[1.0], 16).unwrap();
        assert!((a - Complex::new(3.0, 4.0)).norm() < 1e-14);
        let c2 = FnEvaluable { dim: 2, func: |_: &[f64]| Complex::new(-1.0, 0.0), bound: 1.0 };
        assert!((average_on_ball(&c2, 0.3, &[0.0, 0.0], 9).unwrap() + 1.0).norm() < 1e-14);
    }

    #[test]
    fn modulation_shifts_transform() {
        let m = unit().modulate(&[5.0]);
        assert_relative_eq!(m.ft(&[5.0]).norm(), 1.0, max_relative = 1e-14);
    }
}
