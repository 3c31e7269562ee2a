//! Gauss–Legendre rules and small root-finding helpers.

use crate::scalar::{from_count, lit, Real};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf: T = from_count(n);
    for i in 0..(n + 1) / 2 {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (T::PI() * (from_count::<T>(i) + lit(0.75)) / (nf + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * lit(4.0) {
                let (_, d) = legendre(n, x);
                dp = d;
                break;
            }
        }
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf: T = from_count(k);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf: T = from_count(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Fixed rule mapped to arbitrary intervals.
#[derive(Clone, Debug)]
pub struct GaussRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate(&self, a: T, b: T, f: impl Fn(T) -> T) -> T {
        let half = (b - a) / lit(2.0);
        let mid = (a + b) / lit(2.0);
        let mut s = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += *w * f(mid + half * *x);
        }
        s * half
    }

    /// Integral over `[a, b]` split into geometric pieces of ratio at most 2,
    /// which keeps power-like integrands well resolved. Requires `0 < a < b`.
    pub fn integrate_geometric(&self, a: T, b: T, f: impl Fn(T) -> T) -> T {
        let mut s = T::zero();
        let mut lo = a;
        while lo < b {
            let hi = (lo * lit(2.0)).min(b);
            s += self.integrate(lo, hi, &f);
            lo = hi;
        }
        s
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
pub fn golden_min<T: Real>(mut a: T, mut b: T, tol: T, f: impl Fn(T) -> T) -> (T, T) {
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) / lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (T::one() + a.abs().max(b.abs())) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / lit(2.0);
    let fx = f(x);
    let mut best = (x, fx);
    for (xx, ff) in [(c, fc), (d, fd)] {
        if ff < best.1 {
            best = (xx, ff);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussRule::<f64>::new(16);
        // Degree 31 is the exactness limit.
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(31));
        assert_relative_eq!(v, (2f64.powi(32) - 1.0) / 32.0, max_relative = 1e-13);
        let w: f64 = gauss_legendre::<f64>(7).1.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn geometric_split_handles_power_singularity() {
        let rule = GaussRule::<f64>::new(16);
        let v = rule.integrate_geometric(1e-12, 1.0, |x| x.powf(-0.5));
        assert_relative_eq!(v, 2.0 * (1.0 - 1e-6), max_relative = 1e-12);
    }

    #[test]
    fn golden_section_finds_minimum() {
        let (x, fx) = golden_min(-3.0, 5.0, 1e-12, |x: f64| (x - 1.25).powi(2) + 0.5);
        assert!((x - 1.25).abs() < 1e-6);
        assert_relative_eq!(fx, 0.5, max_relative = 1e-12);
    }
}
