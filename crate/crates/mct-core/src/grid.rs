//! Dyadic geometry and exact operations on step functions.
//!
//! A cube of level `m` and index `k` is `[0, 2^m)^n + 2^m k`. Step functions
//! store one complex coefficient per cube of a single level, so every integral
//! of `|f|^p` over a dyadic region or a ball reduces to finitely many exact
//! cell measures.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, MctError, Result};
use crate::scalar::{lit, pow2, to_f64, Real};
use crate::sequences::IndexedSeq;

/// Lattice index; the second coordinate is zero in dimension 1.
pub type Idx = [i64; 2];

/// Packs a slice of length 1 or 2 into an [`Idx`].
pub fn idx(k: &[i64]) -> Idx {
    match k.len() {
        1 => [k[0], 0],
        2 => [k[0], k[1]],
        _ => panic!("index length must be 1 or 2"),
    }
}

/// Floor division by `2^d` for `d ≥ 0`.
#[inline]
pub(crate) fn shr_floor(k: i64, d: u32) -> i64 {
    if d >= 63 {
        if k < 0 {
            -1
        } else {
            0
        }
    } else {
        k >> d
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        invalid(format!("dimension must be 1 or 2, got {dim}"))
    }
}

/// The cube `Q_k^m = [0, 2^m)^n + 2^m k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub dim: usize,
    pub level: i32,
    pub index: Idx,
}

impl DyadicCube {
    pub fn new(dim: usize, level: i32, k: &[i64]) -> Self {
        assert_eq!(k.len(), dim, "index length must match dimension");
        Self { dim, level, index: idx(k) }
    }

    pub fn side<T: Real>(&self) -> T {
        pow2(self.level)
    }

    pub fn measure<T: Real>(&self) -> T {
        pow2(self.level * self.dim as i32)
    }

    /// `[lo, hi)` along `axis`.
    pub fn bounds<T: Real>(&self, axis: usize) -> (T, T) {
        let h: T = self.side();
        let lo = T::from_i64(self.index[axis]).unwrap() * h;
        (lo, lo + h)
    }

    /// The unique cube of level `level ≥ self.level` containing this one.
    pub fn ancestor(&self, level: i32) -> Self {
        assert!(level >= self.level);
        let d = (level - self.level) as u32;
        let mut index = self.index;
        for k in index.iter_mut().take(self.dim) {
            *k = shr_floor(*k, d);
        }
        Self { dim: self.dim, level, index }
    }

    pub fn contains(&self, other: &DyadicCube) -> bool {
        other.level <= self.level && other.ancestor(self.level) == *self
    }

    /// The `2^{n(level−m)}` subcubes of level `m ≤ level`.
    pub fn children(&self, m: i32) -> Vec<DyadicCube> {
        assert!(m <= self.level);
        let d = (self.level - m) as u32;
        let per_axis = 1i64 << d;
        let base: Vec<i64> = (0..self.dim).map(|a| self.index[a] << d).collect();
        let mut out = Vec::with_capacity((per_axis as usize).pow(self.dim as u32));
        if self.dim == 1 {
            for i in 0..per_axis {
                out.push(DyadicCube { dim: 1, level: m, index: [base[0] + i, 0] });
            }
        } else {
            for i in 0..per_axis {
                for j in 0..per_axis {
                    out.push(DyadicCube { dim: 2, level: m, index: [base[0] + i, base[1] + j] });
                }
            }
        }
        out
    }
}

/// Complex-valued step function on the level-`level` dyadic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<T> {
    dim: usize,
    level: i32,
    cells: BTreeMap<Idx, Complex<T>>,
}

/// Modulated step function `e^{2πi⟨N,x⟩} f(x)`; only its transform is used.
#[derive(Clone, Debug, PartialEq)]
pub struct Modulated<T> {
    pub base: StepFunction<T>,
    pub frequency: [T; 2],
}

impl<T: Real> StepFunction<T> {
    /// Builds a step function, rejecting duplicate indices. Zero coefficients
    /// are dropped.
    pub fn new(dim: usize, level: i32, cells: impl IntoIterator<Item = (Idx, Complex<T>)>) -> Result<Self> {
        check_dim(dim)?;
        let mut map = BTreeMap::new();
        for (k, c) in cells {
            if dim == 1 && k[1] != 0 {
                return invalid("second index coordinate must be 0 in dimension 1");
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return invalid(format!("non-finite coefficient at {:?}", &k[..dim]));
            }
            if map.insert(k, c).is_some() {
                return Err(MctError::DuplicateCell(k[..dim].to_vec()));
            }
        }
        map.retain(|_, c| *c != Complex::new(T::zero(), T::zero()));
        Ok(Self { dim, level, cells: map })
    }

    pub fn from_real(dim: usize, level: i32, cells: impl IntoIterator<Item = (Idx, T)>) -> Result<Self> {
        Self::new(dim, level, cells.into_iter().map(|(k, v)| (k, Complex::new(v, T::zero()))))
    }

    /// Indicator of a union of level-`level` cells.
    pub fn indicator(dim: usize, level: i32, cells: impl IntoIterator<Item = Idx>) -> Result<Self> {
        Self::from_real(dim, level, cells.into_iter().map(|k| (k, T::one())))
    }

    pub fn zero(dim: usize, level: i32) -> Result<Self> {
        Self::new(dim, level, std::iter::empty())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Idx, &Complex<T>)> {
        self.cells.iter()
    }

    pub fn coefficient(&self, k: &Idx) -> Complex<T> {
        self.cells.get(k).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn cube(&self, k: &Idx) -> DyadicCube {
        DyadicCube { dim: self.dim, level: self.level, index: *k }
    }

    /// Side length `2^level` of a cell.
    pub fn cell_side(&self) -> T {
        pow2(self.level)
    }

    /// Measure `2^{n·level}` of a cell.
    pub fn cell_measure(&self) -> T {
        pow2(self.level * self.dim as i32)
    }

    pub fn support_measure(&self) -> T {
        T::from_usize(self.cells.len()).unwrap() * self.cell_measure()
    }

    /// Pointwise value; cells are half-open.
    pub fn value_at(&self, x: &[T]) -> Complex<T> {
        let h = self.cell_side();
        let mut k = [0i64; 2];
        for a in 0..self.dim {
            k[a] = (x[a] / h).floor().to_i64().unwrap_or(i64::MAX);
        }
        self.coefficient(&k)
    }

    pub fn max_abs(&self) -> T {
        self.cells.values().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// `∫ |f|^p`.
    pub fn lp_power(&self, p: T) -> T {
        let s: T = self.cells.values().map(|c| c.norm().powf(p)).sum();
        s * self.cell_measure()
    }

    pub fn lp_norm(&self, p: T) -> T {
        if p.is_infinite() {
            self.max_abs()
        } else {
            self.lp_power(p).powf(p.recip())
        }
    }

    pub fn l1_norm(&self) -> T {
        self.lp_power(T::one())
    }

    /// Componentwise index bounds `[(min, max)]` over the support.
    pub fn index_bounds(&self) -> Option<[(i64, i64); 2]> {
        let mut it = self.cells.keys();
        let first = it.next()?;
        let mut b = [(first[0], first[0]), (first[1], first[1])];
        for k in it {
            for a in 0..2 {
                b[a].0 = b[a].0.min(k[a]);
                b[a].1 = b[a].1.max(k[a]);
            }
        }
        Some(b)
    }

    /// Euclidean distance from the origin to the farthest point of the support.
    pub fn max_radius(&self) -> T {
        let h = self.cell_side();
        self.cells
            .keys()
            .map(|k| {
                let mut s = T::zero();
                for &ka in k.iter().take(self.dim) {
                    let lo = T::from_i64(ka).unwrap() * h;
                    let far = lo.abs().max((lo + h).abs());
                    s += far * far;
                }
                s.sqrt()
            })
            .fold(T::zero(), T::max)
    }

    /// Euclidean distance from the origin to the nearest point of the support.
    pub fn min_radius(&self) -> T {
        let h = self.cell_side();
        self.cells
            .keys()
            .map(|k| {
                let mut s = T::zero();
                for &ka in k.iter().take(self.dim) {
                    let lo = T::from_i64(ka).unwrap() * h;
                    let hi = lo + h;
                    let near = if lo <= T::zero() && hi >= T::zero() { T::zero() } else { lo.abs().min(hi.abs()) };
                    s += near * near;
                }
                s.sqrt()
            })
            .fold(T::infinity(), T::min)
    }

    /// Same function on the finer grid of level `m ≤ level`.
    pub fn refine(&self, m: i32) -> Result<Self> {
        if m > self.level {
            return Err(MctError::CannotCoarsen { level: self.level, target: m });
        }
        let mut cells = BTreeMap::new();
        for (k, c) in &self.cells {
            for child in self.cube(k).children(m) {
                cells.insert(child.index, *c);
            }
        }
        Ok(Self { dim: self.dim, level: m, cells })
    }

    /// `∫_Q |f|^p` for every cube `Q` of level `m ≥ level` meeting the support.
    pub fn aggregate_powers(&self, m: i32, p: T) -> BTreeMap<Idx, T> {
        assert!(m >= self.level, "aggregation needs m ≥ level");
        let mut out: BTreeMap<Idx, T> = BTreeMap::new();
        let mu = self.cell_measure();
        for (k, c) in &self.cells {
            let parent = self.cube(k).ancestor(m).index;
            *out.entry(parent).or_insert_with(T::zero) += c.norm().powf(p) * mu;
        }
        out
    }

    /// `b_k = ∫_{Q_k^m} |f|` at any level `m`.
    pub fn cell_integrals(&self, m: i32) -> IndexedSeq<T> {
        if m >= self.level {
            IndexedSeq::from_map(self.dim, self.aggregate_powers(m, T::one()))
        } else {
            let sub = pow2::<T>(m * self.dim as i32);
            let mut out = BTreeMap::new();
            for (k, c) in &self.cells {
                for child in self.cube(k).children(m) {
                    out.insert(child.index, c.norm() * sub);
                }
            }
            IndexedSeq::from_map(self.dim, out)
        }
    }

    /// `(∫_region |f|^p)^{1/p}` with a two-sided bracket.
    pub fn lp_norm_region(&self, p: T, region: &Region<T>) -> Result<RegionNorm<T>> {
        if !(p > T::zero()) {
            return invalid("p must be positive");
        }
        let (pow, slack) = match region {
            Region::Cubes(cubes) => (self.cubes_power(p, cubes)?, T::zero()),
            Region::Annulus { k } => {
                let outer = self.ball_power(p, &[T::zero(); 2], pow2(k + 1));
                let inner = self.ball_power(p, &[T::zero(); 2], pow2(*k));
                ((outer - inner).max(T::zero()), self.disk_slack(p))
            }
            Region::Ball { center, radius } => (self.ball_power(p, center, *radius), self.disk_slack(p)),
        };
        let value = pow.powf(p.recip());
        let lower = (pow - slack).max(T::zero()).powf(p.recip());
        let upper = (pow + slack).powf(p.recip());
        Ok(RegionNorm { value, lower, upper })
    }

    fn disk_slack(&self, p: T) -> T {
        if self.dim == 1 {
            T::zero()
        } else {
            // Rounding in the closed-form disk-rectangle area.
            self.lp_power(p) * lit(1e-13)
        }
    }

    fn cubes_power(&self, p: T, cubes: &[DyadicCube]) -> Result<T> {
        // Drop cubes covered by a coarser cube so the union is counted once.
        let mut sorted: Vec<DyadicCube> = cubes.to_vec();
        for q in &sorted {
            if q.dim != self.dim {
                return Err(MctError::DimensionMismatch { expected: self.dim, found: q.dim });
            }
        }
        sorted.sort_by(|a, b| b.level.cmp(&a.level).then(a.index.cmp(&b.index)));
        sorted.dedup();
        let mut kept: Vec<DyadicCube> = Vec::new();
        for q in sorted {
            if !kept.iter().any(|big| big.contains(&q)) {
                kept.push(q);
            }
        }
        let mu = self.cell_measure();
        let mut total = T::zero();
        for q in kept {
            if q.level >= self.level {
                for (k, c) in &self.cells {
                    if self.cube(k).ancestor(q.level) == q {
                        total += c.norm().powf(p) * mu;
                    }
                }
            } else {
                let host = q.ancestor(self.level);
                total += self.coefficient(&host.index).norm().powf(p) * q.measure::<T>();
            }
        }
        Ok(total)
    }

    /// `∫_{B_r(center)} |f|^p` with exact interval or disk-cell areas.
    pub fn ball_power(&self, p: T, center: &[T], radius: T) -> T {
        let mu = self.cell_measure();
        let mut total = T::zero();
        for (k, c) in &self.cells {
            let area = self.ball_cell_measure(k, center, radius);
            if area > T::zero() {
                let frac = (area / mu).min(T::one());
                total += c.norm().powf(p) * frac * mu;
            }
        }
        total
    }

    /// `|B_r(center) ∩ Q_k|` for a cell `k` of this function's grid.
    pub fn ball_cell_measure(&self, k: &Idx, center: &[T], radius: T) -> T {
        let cube = self.cube(k);
        let (x0, x1) = cube.bounds::<T>(0);
        if self.dim == 1 {
            interval_overlap(x0, x1, center[0] - radius, center[0] + radius)
        } else {
            let (y0, y1) = cube.bounds::<T>(1);
            disk_rect_area(center[0], center[1], radius, x0, x1, y0, y1)
        }
    }

    /// `f(2^j x)`.
    pub fn dilate(&self, j: i32) -> Self {
        Self { dim: self.dim, level: self.level - j, cells: self.cells.clone() }
    }

    /// `f(a x)` for a power-of-two `a`.
    pub fn dilate_by(&self, factor: f64) -> Result<Self> {
        if factor > 0.0 {
            let j = factor.log2().round();
            if (2f64.powi(j as i32) - factor).abs() <= f64::EPSILON * factor {
                return Ok(self.dilate(j as i32));
            }
        }
        Err(MctError::NonDyadicDilation(factor))
    }

    /// `f(x − 2^m k)`; refines first when `m` is below the grid level.
    pub fn translate(&self, m: i32, k: &[i64]) -> Result<Self> {
        if k.len() != self.dim {
            return Err(MctError::DimensionMismatch { expected: self.dim, found: k.len() });
        }
        let base = if m < self.level { self.refine(m)? } else { self.clone() };
        let d = (m - base.level) as u32;
        let shift = idx(k).map(|v| v << d);
        let cells = base
            .cells
            .iter()
            .map(|(i, c)| ([i[0] + shift[0], if base.dim == 2 { i[1] + shift[1] } else { 0 }], *c))
            .collect();
        Ok(Self { dim: base.dim, level: base.level, cells })
    }

    /// `e^{2πi⟨N,x⟩} f(x)`.
    pub fn modulate(&self, frequency: &[T]) -> Modulated<T> {
        let mut freq = [T::zero(); 2];
        for (a, v) in frequency.iter().take(self.dim).enumerate() {
            freq[a] = *v;
        }
        Modulated { base: self.clone(), frequency: freq }
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: Complex<T>) -> Self {
        let cells = self.cells.iter().map(|(k, c)| (*k, *c * s)).collect();
        Self { dim: self.dim, level: self.level, cells }
    }

    /// Same cells with coefficients replaced by their moduli.
    pub fn abs(&self) -> Self {
        let cells = self.cells.iter().map(|(k, c)| (*k, Complex::new(c.norm(), T::zero()))).collect();
        Self { dim: self.dim, level: self.level, cells }
    }

    pub fn is_real(&self) -> bool {
        self.cells.values().all(|c| c.im == T::zero())
    }

    /// Serializable form.
    pub fn to_file(&self) -> StepFile {
        StepFile {
            dim: self.dim,
            level: self.level,
            cells: self
                .cells
                .iter()
                .map(|(k, c)| CellRecord { k: k[..self.dim].to_vec(), re: to_f64(c.re), im: to_f64(c.im) })
                .collect(),
        }
    }

    pub fn from_file(file: &StepFile) -> Result<Self> {
        check_dim(file.dim)?;
        let mut cells = Vec::with_capacity(file.cells.len());
        for rec in &file.cells {
            if rec.k.len() != file.dim {
                return Err(MctError::DimensionMismatch { expected: file.dim, found: rec.k.len() });
            }
            let c = Complex::new(
                T::from_f64(rec.re).ok_or_else(|| MctError::Parse("coefficient".into()))?,
                T::from_f64(rec.im).ok_or_else(|| MctError::Parse("coefficient".into()))?,
            );
            cells.push((idx(&rec.k), c));
        }
        Self::new(file.dim, file.level, cells)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StepFile = serde_json::from_str(text).map_err(|e| MctError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// JSON layout `{"dim", "level", "cells": [{"k", "re", "im"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFile {
    pub dim: usize,
    pub level: i32,
    pub cells: Vec<CellRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub k: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Integration region for [`StepFunction::lp_norm_region`].
#[derive(Clone, Debug, PartialEq)]
pub enum Region<T> {
    /// Union of dyadic cubes (overlaps counted once).
    Cubes(Vec<DyadicCube>),
    /// `B_{2^{k+1}}(0) \ B_{2^k}(0)`.
    Annulus { k: i32 },
    /// Open ball `B_r(c)`.
    Ball { center: [T; 2], radius: T },
}

/// A norm value with a two-sided bracket; `lower == upper == value` when exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionNorm<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
}

/// Length of `[a0, a1) ∩ (b0, b1)`.
#[inline]
pub fn interval_overlap<T: Real>(a0: T, a1: T, b0: T, b1: T) -> T {
    (a1.min(b1) - a0.max(b0)).max(T::zero())
}

/// Area of `{0 ≤ x ≤ a, 0 ≤ y ≤ b, x² + y² < r²}` for `a, b ≥ 0`.
fn quadrant_area<T: Real>(a: T, b: T, r: T) -> T {
    if a <= T::zero() || b <= T::zero() || r <= T::zero() {
        return T::zero();
    }
    let a = a.min(r);
    let b = b.min(r);
    let r2 = r * r;
    if a * a + b * b <= r2 {
        return a * b;
    }
    let xs = (r2 - b * b).max(T::zero()).sqrt();
    let prim = |x: T| (x * (r2 - x * x).max(T::zero()).sqrt() + r2 * (x / r).min(T::one()).asin()) / lit(2.0);
    b * xs + prim(a) - prim(xs)
}

fn signed_quadrant<T: Real>(x: T, y: T, r: T) -> T {
    let s = x.signum() * y.signum();
    s * quadrant_area(x.abs(), y.abs(), r)
}

/// Area of the disk `B_r(c)` intersected with `[x0, x1) × [y0, y1)`.
pub fn disk_rect_area<T: Real>(cx: T, cy: T, r: T, x0: T, x1: T, y0: T, y1: T) -> T {
    let (x0, x1, y0, y1) = (x0 - cx, x1 - cx, y0 - cy, y1 - cy);
    let far_x = x0.abs().max(x1.abs());
    let far_y = y0.abs().max(y1.abs());
    if far_x * far_x + far_y * far_y <= r * r {
        return (x1 - x0) * (y1 - y0);
    }
    let near = |lo: T, hi: T| if lo <= T::zero() && hi >= T::zero() { T::zero() } else { lo.abs().min(hi.abs()) };
    let nx = near(x0, x1);
    let ny = near(y0, y1);
    if nx * nx + ny * ny >= r * r {
        return T::zero();
    }
    let g = signed_quadrant(x1, y1, r) - signed_quadrant(x0, y1, r) - signed_quadrant(x1, y0, r)
        + signed_quadrant(x0, y0, r);
    g.max(T::zero()).min((x1 - x0) * (y1 - y0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> StepFunction<f64> {
        StepFunction::indicator(1, 0, [[0, 0]]).unwrap()
    }

    #[test]
    fn refine_unit_interval() {
        let f = unit().refine(-1).unwrap();
        let cells: Vec<_> = f.cells().map(|(k, c)| (k[0], c.re)).collect();
        assert_eq!(cells, vec![(0, 1.0), (1, 1.0)]);
        assert_eq!(unit().refine(0).unwrap(), unit());
        assert!(matches!(unit().refine(1), Err(MctError::CannotCoarsen { .. })));
    }

    #[test]
    fn refine_two_dimensional_counts_cells() {
        let f = StepFunction::<f64>::from_real(2, 1, [([0, 0], 1.5), ([1, -1], -2.0)]).unwrap();
        let g = f.refine(-1).unwrap();
        assert_eq!(g.cell_count(), 32);
        assert_relative_eq!(g.l1_norm(), f.l1_norm(), max_relative = 1e-15);
    }

    #[test]
    fn cell_integral_examples() {
        let f = unit();
        assert_eq!(f.cell_integrals(0).get(&[0, 0]), 1.0);
        let half = f.cell_integrals(-1);
        assert_eq!(half.get(&[0, 0]), 0.5);
        assert_eq!(half.get(&[1, 0]), 0.5);
        let g = StepFunction::<f64>::from_real(1, 0, [([0, 0], 1.0), ([1, 0], -2.0)]).unwrap();
        let agg = g.cell_integrals(1);
        assert_eq!(agg.len(), 1);
        assert_eq!(agg.get(&[0, 0]), 3.0);
    }

    #[test]
    fn region_norm_examples() {
        let f = unit();
        let whole = Region::Cubes(vec![DyadicCube::new(1, 0, &[0])]);
        assert_eq!(f.lp_norm_region(2.0, &whole).unwrap().value, 1.0);
        let half = Region::Cubes(vec![DyadicCube::new(1, -1, &[0])]);
        assert_relative_eq!(f.lp_norm_region(2.0, &half).unwrap().value, 2f64.powf(-0.5), max_relative = 1e-15);
        let g = f.scale(Complex::new(3.0, 0.0));
        assert_eq!(g.lp_norm_region(3.0, &Region::Annulus { k: 0 }).unwrap().value, 0.0);
    }

    #[test]
    fn overlapping_cubes_counted_once() {
        let f = unit();
        let r = Region::Cubes(vec![DyadicCube::new(1, 0, &[0]), DyadicCube::new(1, -1, &[1])]);
        assert_eq!(f.lp_norm_region(1.0, &r).unwrap().value, 1.0);
    }

    #[test]
    fn transforms() {
        let d = unit().dilate_by(2.0).unwrap();
        assert_eq!(d.level(), -1);
        assert_eq!(d.cell_count(), 1);
        assert_relative_eq!(d.l1_norm(), 0.5);
        assert!(matches!(unit().dilate_by(3.0), Err(MctError::NonDyadicDilation(_))));
        let t = unit().translate(0, &[3]).unwrap();
        assert_eq!(t.cells().next().unwrap().0, &[3, 0]);
        let t2 = unit().translate(-1, &[1]).unwrap();
        assert_eq!(t2.level(), -1);
        assert_eq!(t2.cells().map(|(k, _)| k[0]).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn duplicate_cells_rejected() {
        let err = StepFunction::<f64>::indicator(1, 0, [[1, 0], [1, 0]]).unwrap_err();
        assert_eq!(err, MctError::DuplicateCell(vec![1]));
        let json = r#"{"dim":1,"level":0,"cells":[{"k":[2],"re":1,"im":0},{"k":[2],"re":2,"im":0}]}"#;
        assert!(StepFunction::<f64>::from_json(json).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = StepFunction::<f64>::new(2, -3, [([1, -2], Complex::new(0.5, -1.25)), ([0, 0], Complex::new(2.0, 0.0))])
            .unwrap();
        assert_eq!(StepFunction::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn disk_rect_area_matches_quarter_disk() {
        let a = disk_rect_area(0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0);
        assert_relative_eq!(a, std::f64::consts::FRAC_PI_4, max_relative = 1e-14);
        let full = disk_rect_area(0.3, -0.2, 1.0, -2.0, 2.0, -2.0, 2.0);
        assert_relative_eq!(full, std::f64::consts::PI, max_relative = 1e-14);
        // Half-plane cut through the centre.
        let half = disk_rect_area(0.0, 0.0, 2.0, 0.0, 5.0, -5.0, 5.0);
        assert_relative_eq!(half, 2.0 * std::f64::consts::PI, max_relative = 1e-14);
    }

    #[test]
    fn disk_rect_area_against_grid_count() {
        // Independent midpoint count on a 2000×2000 grid.
        let (cx, cy, r) = (0.37, -0.11, 0.8);
        let (x0, x1, y0, y1) = (-0.2, 0.9, -0.7, 0.25);
        let n = 2000;
        let mut hits = 0usize;
        for i in 0..n {
            for j in 0..n {
                let x = x0 + (i as f64 + 0.5) * (x1 - x0) / n as f64;
                let y = y0 + (j as f64 + 0.5) * (y1 - y0) / n as f64;
                if (x - cx).powi(2) + (y - cy).powi(2) < r * r {
                    hits += 1;
                }
            }
        }
        let grid = hits as f64 * (x1 - x0) * (y1 - y0) / (n * n) as f64;
        assert_relative_eq!(disk_rect_area(cx, cy, r, x0, x1, y0, y1), grid, max_relative = 1e-3);
    }
}
