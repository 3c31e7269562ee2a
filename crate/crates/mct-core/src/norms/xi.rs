use crate::norms::Weight;
use crate::quad::GaussRule;
use crate::scalar::{lit, pow2, to_f64, Real};

/// Outcome of a dyadic convergence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Result of testing `‖r^{k/p − 1/q} u‖_{L_q(0,1)} < ∞` (near zero) and
/// `‖r^{−1/q} u‖_{L_q(1,∞)} < ∞` (near infinity).
#[derive(Clone, Debug, PartialEq)]
pub struct XiCheck {
    pub near_zero: Verdict,
    pub near_infinity: Verdict,
    pub witnesses: Vec<String>,
}

impl XiCheck {
    pub fn ok(&self) -> bool {
        self.near_zero == Verdict::Holds && self.near_infinity == Verdict::Holds
    }
}

/// Blocks examined at each end when deciding.
const DECISION_BLOCKS: usize = 8;

/// Ratio test on dyadic blocks `[2^j, 2^{j+1})` over the window of `j`.
pub fn xi_class_check<T: Real>(u: &Weight<T>, k: T, p: T, q: T, window: (i32, i32)) -> XiCheck {
    let rule = GaussRule::<T>::new(8);
    let lo = window.0.min(-(DECISION_BLOCKS as i32) - 1);
    let hi = window.1.max(DECISION_BLOCKS as i32 + 1);
    let near_zero_exp = if q.is_infinite() { k / p } else { k / p - q.recip() };
    let far_exp = if q.is_infinite() { T::zero() } else { -q.recip() };
    let block = |j: i32, e: T| -> T {
        let a = pow2::<T>(j);
        let b = pow2::<T>(j + 1);
        let f = |r: T| r.powf(e) * u.eval(r);
        if q.is_infinite() {
            (0..=8).map(|i| f(a + (b - a) * lit(i as f64 / 8.0))).fold(T::zero(), T::max)
        } else {
            rule.integrate(a, b, |r| f(r).powf(q))
        }
    };
    // Outward order: from 1 toward 0, and from 1 toward ∞.
    let zero_blocks: Vec<T> = (lo..0).rev().map(|j| block(j, near_zero_exp)).collect();
    let far_blocks: Vec<T> = (0..hi).map(|j| block(j, far_exp)).collect();
    let mut witnesses = Vec::new();
    let near_zero = decide(&zero_blocks, q.is_infinite(), "near 0", lo, &mut witnesses);
    let near_infinity = decide(&far_blocks, q.is_infinite(), "near ∞", hi, &mut witnesses);
    XiCheck { near_zero, near_infinity, witnesses }
}

fn decide<T: Real>(blocks: &[T], sup: bool, which: &str, edge: i32, witnesses: &mut Vec<String>) -> Verdict {
    let tail = &blocks[blocks.len() - DECISION_BLOCKS..];
    if tail.iter().any(|b| !b.is_finite()) {
        witnesses.push(format!("{which}: non-finite block value"));
        return Verdict::Fails;
    }
    if tail.iter().all(|b| *b == T::zero()) {
        return Verdict::Holds;
    }
    let ratios: Vec<T> = tail.windows(2).map(|w| w[1] / w[0]).collect();
    let max = ratios.iter().fold(T::neg_infinity(), |a, b| a.max(*b));
    let min = ratios.iter().fold(T::infinity(), |a, b| a.min(*b));
    let (hold, fail) = if sup { (lit(1.0 + 1e-9), lit(1.01)) } else { (lit(0.98), lit(0.999)) };
    if max <= hold {
        Verdict::Holds
    } else if min >= fail {
        witnesses.push(format!(
            "{which}: block ratios in [{:.4}, {:.4}] up to dyadic level {edge}",
            to_f64(min),
            to_f64(max)
        ));
        Verdict::Fails
    } else {
        witnesses.push(format!("{which}: ratios in [{:.4}, {:.4}] do not decide", to_f64(min), to_f64(max)));
        Verdict::Inconclusive
    }
}
