//! Discretized Morrey, local Morrey, Campanato, Lorentz and Γ norms.
//!
//! Step-function inputs are handled exactly: every supremum over cubes is a
//! finite maximum and tails in the dyadic scale are closed-form geometric
//! series. Inputs given only through point evaluation (transforms of step
//! functions) go through uniform sample grids and the result is a lower
//! bound on the defining supremum.

mod campanato;
mod local;
mod lorentz;
mod morrey;
mod transform;
mod xi;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, MctError, Result};
use crate::scalar::{lit, pow2, to_f64, Real};

pub use campanato::{ball_oscillation, campanato_norm, campanato_norm_grid, inf_over_constants, CampanatoOptions, CampanatoReport, GridCampanatoOptions};
pub(crate) use local::annuli_norm;
pub use local::{local_morrey_norm, truncated_norm};
pub use lorentz::{gamma_norm, lorentz_norm, DistributionProfile};
pub use morrey::{morrey_norm, morrey_norm_balls, morrey_norm_weighted, BallProfile, MorreyConvention, MorreyOptions};
pub use transform::{fourier_morrey_norm, modulus_sup, FourierGridOptions, ModulusOptions};
pub use xi::{xi_class_check, Verdict, XiCheck};

/// Exponents `p`, `q`, `λ` in dimension `n`, with the derived quantities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormParams<T> {
    pub dim: usize,
    pub p: T,
    pub q: T,
    pub lambda: T,
}

impl<T: Real> NormParams<T> {
    pub fn new(dim: usize, p: T, q: T, lambda: T) -> Result<Self> {
        crate::grid::check_dim(dim)?;
        if !(p > T::zero()) || !(q > T::zero()) || lambda.is_nan() {
            return invalid("need p > 0, q > 0 and finite λ");
        }
        Ok(Self { dim, p, q, lambda })
    }

    pub fn n(&self) -> T {
        lit(self.dim as f64)
    }

    /// `1/s = 1/p − λ/n`.
    pub fn s_inv(&self) -> T {
        self.p.recip() - self.lambda / self.n()
    }

    pub fn s(&self) -> T {
        self.s_inv().recip()
    }

    /// Conjugate exponent of `s`.
    pub fn s_prime(&self) -> T {
        T::one() / (T::one() - self.s_inv())
    }

    /// `β = λ − max(0, n/p − n/2)`.
    pub fn beta(&self) -> T {
        self.lambda - (self.n() / self.p - self.n() / lit(2.0)).max(T::zero())
    }

    /// `α = λ − n/p`.
    pub fn alpha(&self) -> T {
        self.lambda - self.n() / self.p
    }

    /// The weight `r^{−λ}`.
    pub fn weight(&self) -> Weight<T> {
        Weight::power(-self.lambda)
    }

    /// Rejects parameter combinations for which the Morrey space is trivial.
    pub fn check_morrey(&self) -> Result<()> {
        let np = self.n() / self.p;
        if self.lambda > np {
            return Err(MctError::TrivialSpace(format!(
                "λ = {} exceeds n/p = {}; only the zero function has finite norm",
                self.lambda, np
            )));
        }
        if self.q.is_finite() && (self.lambda == T::zero() || self.lambda == np) {
            return Err(MctError::TrivialSpace(format!(
                "λ = {} with q = {} < ∞ leaves only the zero function",
                self.lambda, self.q
            )));
        }
        if self.lambda < T::zero() {
            log::warn!("λ = {} < 0: every nonzero function has infinite Morrey norm", self.lambda);
        }
        Ok(())
    }

    fn record(&self) -> Vec<(String, f64)> {
        vec![
            ("n".into(), self.dim as f64),
            ("p".into(), to_f64(self.p)),
            ("q".into(), to_f64(self.q)),
            ("lambda".into(), to_f64(self.lambda)),
        ]
    }
}

/// A positive weight on `(0, ∞)`.
#[derive(Clone)]
pub enum Weight<T> {
    /// `r^e`.
    Power(T),
    /// `r^e (1 + |ln r|)^l`.
    PowerLog { exponent: T, log_exponent: T },
    /// Values `w(2^k)` for `k = k0, k0 + 1, …`; log-linear in between and
    /// constant beyond the table ends.
    Table { k0: i32, values: Vec<T> },
    /// Arbitrary evaluator with a label used in reports.
    Custom { label: String, f: Arc<dyn Fn(T) -> T + Send + Sync> },
}

impl<T: Real> fmt::Debug for Weight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.label())
    }
}

impl<T: Real> Weight<T> {
    pub fn power(exponent: T) -> Self {
        Weight::Power(exponent)
    }

    pub fn power_log(exponent: T, log_exponent: T) -> Self {
        Weight::PowerLog { exponent, log_exponent }
    }

    pub fn table(k0: i32, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return invalid("weight table is empty");
        }
        if let Some(v) = values.iter().find(|v| !(**v > T::zero()) || !v.is_finite()) {
            return Err(MctError::WeightCondition(format!("table entry {v} is not positive and finite")));
        }
        Ok(Weight::Table { k0, values })
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Weight::Custom { label: label.into(), f: Arc::new(f) }
    }

    pub fn eval(&self, r: T) -> T {
        match self {
            Weight::Power(e) => r.powf(*e),
            Weight::PowerLog { exponent, log_exponent } => {
                r.powf(*exponent) * (T::one() + r.ln().abs()).powf(*log_exponent)
            }
            Weight::Table { k0, values } => {
                let t = r.log2() - lit(*k0 as f64);
                let last = values.len() - 1;
                if t <= T::zero() {
                    values[0]
                } else if t >= lit(last as f64) {
                    values[last]
                } else {
                    let i = t.floor().to_usize().unwrap().min(last - 1);
                    let frac = t - lit(i as f64);
                    (values[i].ln() * (T::one() - frac) + values[i + 1].ln() * frac).exp()
                }
            }
            Weight::Custom { f, .. } => f(r),
        }
    }

    /// `w(2^k)`, exact for tables.
    pub fn at_dyadic(&self, k: i32) -> T {
        match self {
            Weight::Power(e) => pow2::<T>(1).powf(*e * lit(k as f64)),
            Weight::Table { k0, values } => {
                let i = (k - k0).clamp(0, values.len() as i32 - 1);
                values[i as usize]
            }
            _ => self.eval(pow2(k)),
        }
    }

    /// The exponent `e` when the weight is exactly `r^e`.
    pub fn power_exponent(&self) -> Option<T> {
        match self {
            Weight::Power(e) => Some(*e),
            _ => None,
        }
    }

    /// `max_k max(w(2^k)/w(2^{k+1}), w(2^{k+1})/w(2^k))` over `k ∈ [lo, hi)`.
    pub fn doubling_constant(&self, window: (i32, i32)) -> T {
        let mut c = T::one();
        for k in window.0..window.1 {
            let a = self.at_dyadic(k);
            let b = self.at_dyadic(k + 1);
            c = c.max(a / b).max(b / a);
        }
        c
    }

    /// Errors unless the doubling constant on the window is at most `limit`.
    pub fn certify_doubling(&self, window: (i32, i32), limit: T) -> Result<T> {
        let c = self.doubling_constant(window);
        if c.is_finite() && c <= limit {
            Ok(c)
        } else {
            Err(MctError::WeightCondition(format!(
                "doubling constant {c} of {} exceeds {limit} on k ∈ [{}, {}]",
                self.label(),
                window.0,
                window.1
            )))
        }
    }

    /// `r^e · w(r)`.
    pub fn times_power(&self, e: T) -> Self {
        match self {
            Weight::Power(a) => Weight::Power(*a + e),
            Weight::PowerLog { exponent, log_exponent } => {
                Weight::PowerLog { exponent: *exponent + e, log_exponent: *log_exponent }
            }
            other => {
                let inner = other.clone();
                let label = format!("r^{}·{}", to_f64(e), other.label());
                Weight::custom(label, move |r: T| r.powf(e) * inner.eval(r))
            }
        }
    }

    /// `1 / w(r)`.
    pub fn reciprocal(&self) -> Self {
        match self {
            Weight::Power(a) => Weight::Power(-*a),
            Weight::PowerLog { exponent, log_exponent } => {
                Weight::PowerLog { exponent: -*exponent, log_exponent: -*log_exponent }
            }
            Weight::Table { k0, values } => Weight::Table { k0: *k0, values: values.iter().map(|v| v.recip()).collect() },
            Weight::Custom { label, f } => {
                let f = f.clone();
                Weight::custom(format!("1/{label}"), move |r: T| f(r).recip())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Weight::Power(e) => format!("pow:{}", to_f64(*e)),
            Weight::PowerLog { exponent, log_exponent } => {
                format!("powlog:{}:{}", to_f64(*exponent), to_f64(*log_exponent))
            }
            Weight::Table { k0, values } => format!("table:k0={k0},len={}", values.len()),
            Weight::Custom { label, .. } => label.clone(),
        }
    }
}

/// A norm value with provenance, as produced by every norm routine.
#[derive(Clone, Debug, PartialEq)]
pub struct NormReport<T> {
    pub space: String,
    pub params: Vec<(String, f64)>,
    pub value: T,
    /// True when `value` is a finite sub-supremum or truncated sum.
    pub lower_bound: bool,
    /// Heuristic size of what was left out (zero when exact).
    pub tail_estimate: T,
    /// Dyadic levels computed explicitly.
    pub m_range: (i32, i32),
}

/// Serializable form of a [`NormReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRecord {
    pub space: String,
    pub params: std::collections::BTreeMap<String, f64>,
    pub value: f64,
    pub lower_bound_flag: bool,
    pub tail_estimate: f64,
    pub m_range: [i32; 2],
}

impl<T: Real> NormReport<T> {
    pub(crate) fn exact(space: impl Into<String>, params: Vec<(String, f64)>, value: T, m_range: (i32, i32)) -> Self {
        Self { space: space.into(), params, value, lower_bound: false, tail_estimate: T::zero(), m_range }
    }

    pub fn record(&self) -> NormRecord {
        NormRecord {
            space: self.space.clone(),
            params: self.params.iter().cloned().collect(),
            value: to_f64(self.value),
            lower_bound_flag: self.lower_bound,
            tail_estimate: to_f64(self.tail_estimate),
            m_range: [self.m_range.0, self.m_range.1],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("norm record serializes")
    }
}

/// Number of bits needed so that `k >> bits ∈ {−1, 0}`.
pub(crate) fn stabilizing_shift(k: i64) -> u32 {
    let v = if k < 0 { !k } else { k };
    64 - v.leading_zeros()
}
