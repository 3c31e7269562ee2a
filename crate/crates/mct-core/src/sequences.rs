//! Finite sequences over `Z^n`: rearrangements, discrete Lorentz norms,
//! convolution, the inverse-product sequence and its hyperbolic crosses, and
//! the two-sided discrete Hardy inequality.

use std::collections::BTreeMap;

use crate::error::{invalid, MctError, Result};
use crate::grid::{check_dim, Idx};
use crate::scalar::{from_count, root, to_f64, Real};

/// Finitely supported sequence on `Z^n` (n ∈ {1, 2}).
#[derive(Clone, Debug, PartialEq)]
pub struct IndexedSeq<T> {
    dim: usize,
    entries: BTreeMap<Idx, T>,
}

impl<T: Real> IndexedSeq<T> {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: BTreeMap::new() }
    }

    pub fn from_map(dim: usize, entries: BTreeMap<Idx, T>) -> Self {
        Self { dim, entries }
    }

    /// Builds from `(index, value)` pairs; later duplicates are added to earlier ones.
    pub fn from_entries(dim: usize, it: impl IntoIterator<Item = (Idx, T)>) -> Result<Self> {
        check_dim(dim)?;
        let mut entries = BTreeMap::new();
        for (k, v) in it {
            *entries.entry(k).or_insert_with(T::zero) += v;
        }
        Ok(Self { dim, entries })
    }

    /// One-dimensional sequence from consecutive values starting at `start`.
    pub fn from_slice(start: i64, values: &[T]) -> Self {
        let entries = values.iter().enumerate().map(|(i, v)| ([start + i as i64, 0], *v)).collect();
        Self { dim: 1, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &Idx) -> T {
        self.entries.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn insert(&mut self, k: Idx, v: T) {
        self.entries.insert(k, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Idx, &T)> {
        self.entries.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.entries.values()
    }

    pub fn l1(&self) -> T {
        self.entries.values().map(|v| v.abs()).sum()
    }
}

/// Decreasing rearrangement `a*` with cached prefix sums.
#[derive(Clone, Debug, PartialEq)]
pub struct Rearranged<T> {
    sorted: Vec<T>,
    prefix: Vec<T>,
}

impl<T: Real> Rearranged<T> {
    /// Rearranges raw nonnegative values (zeros are dropped).
    pub fn from_values(mut values: Vec<T>) -> Self {
        values.retain(|v| *v > T::zero());
        // Stable sort keeps the caller's (index) order among ties.
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut s = T::zero();
        prefix.push(s);
        for v in &values {
            s += *v;
            prefix.push(s);
        }
        Self { sorted: values, prefix }
    }

    /// Number of nonzero entries.
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// `a*_ν` (1-based; zero past the support).
    pub fn star(&self, nu: usize) -> T {
        assert!(nu >= 1);
        self.sorted.get(nu - 1).copied().unwrap_or_else(T::zero)
    }

    /// `Σ_{i≤ν} a*_i`.
    pub fn top_sum(&self, nu: usize) -> T {
        self.prefix[nu.min(self.sorted.len())]
    }

    /// `a**_ν = (1/ν) Σ_{i≤ν} a*_i`.
    pub fn star_star(&self, nu: usize) -> T {
        assert!(nu >= 1);
        self.top_sum(nu) / from_count(nu)
    }

    pub fn total(&self) -> T {
        *self.prefix.last().unwrap()
    }

    /// Rows `(N, a*_N, a**_N)` for `N = 1..=n_max`.
    pub fn profile(&self, n_max: usize) -> Vec<(usize, T, T)> {
        (1..=n_max).map(|n| (n, self.star(n), self.star_star(n))).collect()
    }
}

/// Decreasing rearrangement; negative entries are rejected.
pub fn rearrange<T: Real>(a: &IndexedSeq<T>) -> Result<Rearranged<T>> {
    for (k, v) in a.iter() {
        if *v < T::zero() || v.is_nan() {
            return Err(MctError::NegativeEntry { index: k[..a.dim].to_vec(), value: to_f64(*v) });
        }
    }
    Ok(Rearranged::from_values(a.values().copied().collect()))
}

/// Discrete Lorentz quasi-norm `(Σ_ν (ν^{1/p} a*_ν)^q / ν)^{1/q}`.
pub fn lorentz_seq_norm<T: Real>(a: &IndexedSeq<T>, p: T, q: T) -> Result<T> {
    if !(p > T::zero()) || !(q > T::zero()) {
        return invalid("p and q must be positive");
    }
    let r = rearrange(a)?;
    Ok(rearranged_lorentz(&r, p, q))
}

pub(crate) fn rearranged_lorentz<T: Real>(r: &Rearranged<T>, p: T, q: T) -> T {
    let mut acc = T::zero();
    for (i, v) in r.sorted().iter().enumerate() {
        let nu: T = from_count(i + 1);
        let term = nu.powf(p.recip()) * *v;
        if q.is_infinite() {
            acc = acc.max(term);
        } else {
            acc += term.powf(q) / nu;
        }
    }
    root(acc, q)
}

/// `(b ∗ c)_m = Σ_k b_k c_{m−k}`.
pub fn convolve<T: Real>(b: &IndexedSeq<T>, c: &IndexedSeq<T>) -> Result<IndexedSeq<T>> {
    if b.dim != c.dim {
        return Err(MctError::DimensionMismatch { expected: b.dim, found: c.dim });
    }
    let mut out: BTreeMap<Idx, T> = BTreeMap::new();
    for (k, bv) in b.iter() {
        for (j, cv) in c.iter() {
            let m = [k[0] + j[0], k[1] + j[1]];
            *out.entry(m).or_insert_with(T::zero) += *bv * *cv;
        }
    }
    Ok(IndexedSeq { dim: b.dim, entries: out })
}

/// `c_r = 1 / Π max(|r_j|, 1)`.
pub fn inverse_product_value<T: Real>(r: &[i64]) -> T {
    let d: T = r.iter().map(|v| from_count::<T>(v.unsigned_abs().max(1) as usize)).fold(T::one(), |a, b| a * b);
    d.recip()
}

/// `c_r` on the box `‖r‖_∞ ≤ radius`.
pub fn inverse_product_seq<T: Real>(dim: usize, radius: usize) -> Result<IndexedSeq<T>> {
    check_dim(dim)?;
    if radius < 1 {
        return invalid("radius must be at least 1");
    }
    let n = radius as i64;
    let mut entries = BTreeMap::new();
    if dim == 1 {
        for r in -n..=n {
            entries.insert([r, 0], inverse_product_value(&[r]));
        }
    } else {
        for r1 in -n..=n {
            for r2 in -n..=n {
                entries.insert([r1, r2], inverse_product_value(&[r1, r2]));
            }
        }
    }
    Ok(IndexedSeq { dim, entries })
}

/// Step hyperbolic cross `E_m = ∪_{ν_1+…+ν_n ≤ m, ν_i ≥ 1} ρ(ν)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicCross {
    pub dim: usize,
    pub m: u32,
    /// Block exponents `ν` (second entry unused in dimension 1).
    pub blocks: Vec<[u32; 2]>,
}

/// `|ρ_1(ν)| = #{k : ⌊2^{ν−1}⌋ ≤ |k| < 2^ν} = 2^ν` for `ν ≥ 1`.
fn shell_size(nu: u32) -> u64 {
    1u64 << nu
}

/// The shell `{k : ⌊2^{ν−1}⌋ ≤ |k| < 2^ν}` in increasing order.
fn shell(nu: u32) -> impl Iterator<Item = i64> {
    let lo = 1i64 << (nu - 1);
    let hi = 1i64 << nu;
    (-(hi - 1)..=-lo).chain(lo..hi)
}

/// Block exponent of a nonzero coordinate: `⌊log₂|k|⌋ + 1`.
fn shell_of(k: i64) -> Option<u32> {
    if k == 0 {
        None
    } else {
        Some(64 - k.unsigned_abs().leading_zeros())
    }
}

impl HyperbolicCross {
    /// Total cardinality from block sizes.
    pub fn len(&self) -> u64 {
        self.blocks.iter().map(|nu| self.block_len(nu)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_len(&self, nu: &[u32; 2]) -> u64 {
        (0..self.dim).map(|a| shell_size(nu[a])).product()
    }

    /// Indices of `ρ(ν)` in lexicographic order.
    pub fn block_indices(&self, nu: &[u32; 2]) -> Vec<Idx> {
        if self.dim == 1 {
            shell(nu[0]).map(|k| [k, 0]).collect()
        } else {
            let ys: Vec<i64> = shell(nu[1]).collect();
            shell(nu[0]).flat_map(|x| ys.iter().map(move |&y| [x, y])).collect()
        }
    }

    pub fn contains(&self, k: &Idx) -> bool {
        let mut s = 0u32;
        for &v in k.iter().take(self.dim) {
            match shell_of(v) {
                Some(nu) => s += nu,
                None => return false,
            }
        }
        s <= self.m
    }

    /// Checks that every enumerated index of block `ν` maps back to `ν`, which
    /// makes the blocks pairwise disjoint; returns the number of indices seen.
    pub fn verify_partition(&self) -> Result<u64> {
        let mut seen = 0u64;
        for nu in &self.blocks {
            for k in self.block_indices(nu) {
                for a in 0..self.dim {
                    if shell_of(k[a]) != Some(nu[a]) {
                        return invalid(format!("index {:?} escapes block {:?}", &k[..self.dim], &nu[..self.dim]));
                    }
                }
                seen += 1;
            }
        }
        if seen != self.len() {
            return invalid("block enumeration disagrees with block sizes");
        }
        Ok(seen)
    }
}

/// Enumerates the block exponents of `E_m`; `m < n` yields an empty cross.
pub fn hyperbolic_cross(m: u32, dim: usize) -> Result<HyperbolicCross> {
    check_dim(dim)?;
    if m > 62 {
        return invalid("m must be at most 62");
    }
    let mut blocks = Vec::new();
    if (m as usize) < dim {
        log::warn!("hyperbolic cross with m = {m} < n = {dim} is empty");
    } else if dim == 1 {
        blocks.extend((1..=m).map(|nu| [nu, 0]));
    } else {
        for a in 1..m {
            for b in 1..=(m - a) {
                blocks.push([a, b]);
            }
        }
    }
    Ok(HyperbolicCross { dim, m, blocks })
}

/// Exact `(N, c**_N)` for `N = 1..=n_max`, with the enumeration radius
/// enlarged until the top `n_max` values are provably captured.
pub fn cstar_star_profile<T: Real>(dim: usize, n_max: usize) -> Result<Vec<(usize, T)>> {
    check_dim(dim)?;
    let mut radius = if dim == 1 { n_max.max(1) } else { 2 * (n_max as f64).sqrt().ceil() as usize };
    loop {
        match cstar_star_profile_with_radius(dim, n_max, radius) {
            Err(MctError::RadiusTooSmall { .. }) => radius *= 2,
            other => return other,
        }
    }
}

/// As [`cstar_star_profile`] with a fixed enumeration radius; fails when the
/// radius cannot certify the top `n_max` values.
pub fn cstar_star_profile_with_radius<T: Real>(dim: usize, n_max: usize, radius: usize) -> Result<Vec<(usize, T)>> {
    check_dim(dim)?;
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let n = radius as i64;
    let mut values: Vec<T> = Vec::new();
    if dim == 1 {
        values.extend((-n..=n).map(|r| inverse_product_value::<T>(&[r])));
    } else {
        // Values depend on |r_j| only; expand multiplicities directly.
        let per_axis: Vec<(T, usize)> = (0..=n).map(|r| (inverse_product_value::<T>(&[r]), if r == 0 { 1 } else { 2 })).collect();
        for (v1, m1) in &per_axis {
            for (v2, m2) in &per_axis {
                for _ in 0..(m1 * m2) {
                    values.push(*v1 * *v2);
                }
            }
        }
    }
    let r = Rearranged::from_values(values);
    // Anything outside the box is at most 1/(radius+1).
    let outside: T = from_count::<T>(radius + 1).recip();
    if r.len() < n_max || r.star(n_max) < outside {
        return Err(MctError::RadiusTooSmall { radius });
    }
    Ok((1..=n_max).map(|k| (k, r.star_star(k))).collect())
}

/// `d = (1/|ω|)(1/|e|) Σ_{t∈ω} Σ_{m∈e} |c_{m−t}|`.
pub fn dsk_sample<T: Real>(c: &IndexedSeq<T>, omega: &[Idx], e: &[Idx]) -> Result<T> {
    if omega.is_empty() || e.is_empty() {
        return invalid("index sets must be nonempty");
    }
    let mut s = T::zero();
    for t in omega {
        for m in e {
            s += c.get(&[m[0] - t[0], m[1] - t[1]]).abs();
        }
    }
    Ok(s / (from_count::<T>(omega.len()) * from_count::<T>(e.len())))
}

/// Which tail the Hardy operator sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardyDirection {
    /// `Σ_{k≤n} b_k ≤ C_b b_n`; middle term uses `Σ_{k≥n} a_k`.
    Forward,
    /// `Σ_{k≥n} b_k ≤ C_b b_n`; middle term uses `Σ_{k≤n} a_k`.
    Backward,
}

/// The three quantities of the discrete Hardy inequality on a window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyCheck<T> {
    pub lhs: T,
    pub mid: T,
    pub rhs: T,
    /// Certified constant in the condition on `b` over the window.
    pub cb: T,
}

/// Evaluates `Σ b_n^p a_n^p` and `Σ (b_n · tail_n(a))^p` on `window = [lo, hi]`.
pub fn hardy_bound_check<T: Real>(
    a: &IndexedSeq<T>,
    b: &IndexedSeq<T>,
    p: T,
    direction: HardyDirection,
    window: (i64, i64),
    cb_limit: T,
) -> Result<HardyCheck<T>> {
    if a.dim != 1 || b.dim != 1 {
        return invalid("Hardy sequences are one-dimensional");
    }
    if !(p > T::zero()) {
        return invalid("p must be positive");
    }
    let (lo, hi) = window;
    if lo > hi {
        return invalid("empty window");
    }
    let idx: Vec<i64> = (lo..=hi).collect();
    let av: Vec<T> = idx.iter().map(|&n| a.get(&[n, 0])).collect();
    let bv: Vec<T> = idx.iter().map(|&n| b.get(&[n, 0])).collect();
    if let Some(i) = av.iter().chain(bv.iter()).position(|v| *v < T::zero()) {
        let n = idx[i % idx.len()];
        return Err(MctError::NegativeEntry { index: vec![n], value: -1.0 });
    }
    let order: Vec<usize> = match direction {
        HardyDirection::Forward => (0..idx.len()).collect(),
        HardyDirection::Backward => (0..idx.len()).rev().collect(),
    };
    // Condition on b: running sum from the far end towards n.
    let mut cb = T::zero();
    let mut run = T::zero();
    for &i in &order {
        run += bv[i];
        if run > T::zero() {
            if bv[i] == T::zero() {
                return Err(MctError::ConditionViolated { condition: "b_n = 0 with positive partial sum".into(), witness: idx[i] });
            }
            cb = cb.max(run / bv[i]);
            if cb > cb_limit {
                return Err(MctError::ConditionViolated {
                    condition: format!("partial sum of b exceeds {} · b_n", to_f64(cb_limit)),
                    witness: idx[i],
                });
            }
        }
    }
    // Tail of a in the opposite direction.
    let mut tails = vec![T::zero(); idx.len()];
    let mut acc = T::zero();
    for &i in order.iter().rev() {
        acc += av[i];
        tails[i] = acc;
    }
    let mut lhs = T::zero();
    let mut mid = T::zero();
    for i in 0..idx.len() {
        lhs += (bv[i] * av[i]).powf(p);
        mid += (bv[i] * tails[i]).powf(p);
    }
    Ok(HardyCheck { lhs, mid, rhs: lhs, cb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn seq1(v: &[(i64, f64)]) -> IndexedSeq<f64> {
        IndexedSeq::from_entries(1, v.iter().map(|(k, x)| ([*k, 0], *x))).unwrap()
    }

    #[test]
    fn rearrange_examples() {
        let r = rearrange(&seq1(&[(0, 1.0), (1, 3.0), (-2, 2.0)])).unwrap();
        assert_eq!(r.sorted(), &[3.0, 2.0, 1.0]);
        assert_eq!((1..=3).map(|n| r.star_star(n)).collect::<Vec<_>>(), vec![3.0, 2.5, 2.0]);
        let c = rearrange(&IndexedSeq::from_slice(0, &[5.0; 4])).unwrap();
        assert!((1..=4).all(|n| c.star_star(n) == 5.0));
        assert!(rearrange(&seq1(&[(0, -1.0)])).is_err());
        assert_eq!(r.star(7), 0.0);
    }

    #[test]
    fn lorentz_seq_examples() {
        let ones = IndexedSeq::from_slice(0, &[1.0; 4]);
        assert_relative_eq!(lorentz_seq_norm(&ones, 2.0, 2.0).unwrap(), 2.0, max_relative = 1e-15);
        let single = seq1(&[(5, 0.7)]);
        for (p, q) in [(0.5, 3.0), (2.0, f64::INFINITY), (4.0, 1.0)] {
            assert_relative_eq!(lorentz_seq_norm(&single, p, q).unwrap(), 0.7, max_relative = 1e-15);
        }
        let a = seq1(&[(0, 1.0), (1, 3.0), (2, 2.0)]);
        assert_relative_eq!(lorentz_seq_norm(&a, 2.0, f64::INFINITY).unwrap(), 3.0);
    }

    #[test]
    fn convolution_examples() {
        let delta = seq1(&[(0, 1.0)]);
        let c = seq1(&[(-1, 0.5), (3, 2.0)]);
        assert_eq!(convolve(&delta, &c).unwrap(), c);
        let pair = seq1(&[(0, 1.0), (1, 1.0)]);
        let sq = convolve(&pair, &pair).unwrap();
        assert_eq!(sq.iter().map(|(k, v)| (k[0], *v)).collect::<Vec<_>>(), vec![(0, 1.0), (1, 2.0), (2, 1.0)]);
        let two = IndexedSeq::<f64>::new(2);
        assert!(convolve(&pair, &two).is_err());
    }

    #[test]
    fn inverse_product_examples() {
        assert_eq!(inverse_product_value::<f64>(&[0]), 1.0);
        assert_eq!(inverse_product_value::<f64>(&[2]), 0.5);
        assert_relative_eq!(inverse_product_value::<f64>(&[2, -3]), 1.0 / 6.0);
        let c = rearrange(&inverse_product_seq::<f64>(1, 10).unwrap()).unwrap();
        assert_eq!(&c.sorted()[..3], &[1.0, 1.0, 1.0]);
        assert!(c.star(4) < 1.0);
    }

    #[test]
    fn hyperbolic_cross_examples() {
        let e2 = hyperbolic_cross(2, 1).unwrap();
        let mut all: Vec<i64> = e2.blocks.iter().flat_map(|nu| e2.block_indices(nu)).map(|k| k[0]).collect();
        all.sort();
        assert_eq!(all, vec![-3, -2, -1, 1, 2, 3]);
        assert_eq!(hyperbolic_cross(1, 1).unwrap().len(), 2);
        assert!(hyperbolic_cross(1, 2).unwrap().is_empty());
        let e = hyperbolic_cross(6, 2).unwrap();
        assert_eq!(e.verify_partition().unwrap(), e.len());
        assert!(e.contains(&[3, -4]));
        assert!(!e.contains(&[0, 1]));
    }

    #[test]
    fn cstar_examples() {
        let prof = cstar_star_profile::<f64>(1, 1000).unwrap();
        assert_eq!(prof[0].1, 1.0);
        assert_eq!(prof[2].1, 1.0);
        assert!(prof[3].1 < 1.0);
        let n = 1000.0;
        let ratio = n * prof[999].1 / (n + 1.0f64).ln();
        assert!((1.0..=3.0).contains(&ratio), "{ratio}");
        assert!(matches!(
            cstar_star_profile_with_radius::<f64>(2, 10_000, 200),
            Err(MctError::RadiusTooSmall { radius: 200 })
        ));
        assert_eq!(cstar_star_profile::<f64>(2, 10_000).unwrap().len(), 10_000);
    }

    #[test]
    fn dsk_examples() {
        let delta = seq1(&[(0, 1.0)]);
        assert_eq!(dsk_sample(&delta, &[[0, 0]], &[[0, 0]]).unwrap(), 1.0);
        assert_eq!(dsk_sample(&delta, &[[0, 0]], &[[0, 0], [1, 0]]).unwrap(), 0.5);
        assert!(dsk_sample(&delta, &[], &[[0, 0]]).is_err());
    }

    #[test]
    fn hardy_examples() {
        let a = seq1(&[(0, 1.0)]);
        let b = IndexedSeq::from_entries(1, (-60..=0).map(|n| ([n, 0], 2f64.powi(n as i32)))).unwrap();
        let h = hardy_bound_check(&a, &b, 1.0, HardyDirection::Forward, (-60, 0), 2.0).unwrap();
        assert_eq!(h.lhs, 1.0);
        assert_relative_eq!(h.mid, 2.0, max_relative = 1e-15);
        assert!(h.cb <= 2.0);
        let zero = IndexedSeq::<f64>::new(1);
        let h0 = hardy_bound_check(&zero, &b, 1.0, HardyDirection::Forward, (-60, 0), 2.0).unwrap();
        assert_eq!((h0.lhs, h0.mid, h0.rhs), (0.0, 0.0, 0.0));
        // Increasing b violates the backward condition with a tight limit.
        let err = hardy_bound_check(&a, &b, 1.0, HardyDirection::Backward, (-60, 0), 1.5).unwrap_err();
        assert!(matches!(err, MctError::ConditionViolated { .. }));
    }
}
