//! Scalar abstraction shared by every numerical kernel.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point type the kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer count into `T`.
#[inline]
pub fn from_count<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// `2^e` computed exactly (barring over/underflow).
#[inline]
pub fn pow2<T: Real>(e: i32) -> T {
    lit::<T>(2.0).powi(e)
}

/// `sin(x)/x` with the removable singularity filled in.
#[inline]
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < lit(1e-8) {
        // Two Taylor terms are exact to rounding below 1e-8.
        T::one() - x * x / lit(6.0)
    } else {
        x.sin() / x
    }
}

/// Lossy view of a scalar as `f64`, for reporting.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Compensated<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

/// `x^(1/q)`, treating `q = ∞` as the identity on suprema.
#[inline]
pub fn root<T: Real>(x: T, q: T) -> T {
    if q.is_infinite() {
        x
    } else {
        x.powf(q.recip())
    }
}

/// Accumulates an ℓ_q (quasi-)norm; `q = ∞` keeps the maximum.
#[derive(Clone, Copy, Debug)]
pub struct LqAccumulator<T> {
    q: T,
    acc: T,
}

impl<T: Real> LqAccumulator<T> {
    pub fn new(q: T) -> Self {
        Self { q, acc: T::zero() }
    }

    pub fn push(&mut self, term: T) {
        if self.q.is_infinite() {
            if term > self.acc || term.is_nan() {
                self.acc = term;
            }
        } else {
            self.acc += term.powf(self.q);
        }
    }

    /// Adds a precomputed q-th power (or, for `q = ∞`, a sup candidate).
    pub fn push_power(&mut self, term_pow: T) {
        if self.q.is_infinite() {
            self.push(term_pow);
        } else {
            self.acc += term_pow;
        }
    }

    /// Raw accumulated value: Σ term^q, or the running max.
    pub fn raw(&self) -> T {
        self.acc
    }

    pub fn value(&self) -> T {
        root(self.acc, self.q)
    }
}

/// Sum (`q < ∞`) or sup (`q = ∞`) of a geometric tail `first·ratio^i`, `i ≥ 0`,
/// contributed to an ℓ_q aggregate, as a q-th power.
pub fn geometric_tail_power<T: Real>(first: T, ratio: T, q: T) -> T {
    if first == T::zero() {
        return T::zero();
    }
    if q.is_infinite() {
        if ratio <= T::one() {
            first
        } else {
            T::infinity()
        }
    } else if ratio < T::one() {
        first.powf(q) / (T::one() - ratio.powf(q))
    } else {
        T::infinity()
    }
}
