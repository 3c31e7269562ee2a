use std::f64::consts::TAU;

use mct_core::grid::{Idx, StepFunction};
use num_complex::Complex;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::CorpusConfig;
use crate::error::{config_error, Result};

/// Shape of the random step functions.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusOptions {
    pub dim: usize,
    /// Inclusive range of the number of cells.
    pub cells: (usize, usize),
    /// Inclusive range of the grid level.
    pub levels: (i32, i32),
    /// Coefficient moduli are log-uniform in this range.
    pub modulus: (f64, f64),
    /// Cell indices lie in `[-window, window)` per axis.
    pub window: i64,
    /// Real coefficients with random signs instead of random phases.
    pub real: bool,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self::from_config(&CorpusConfig::default(), 1)
    }
}

impl CorpusOptions {
    /// Options from a config; the window holds at least `cells.1` positions.
    pub fn from_config(cfg: &CorpusConfig, dim: usize) -> Self {
        let window = if dim == 1 { 32 } else { 8 };
        Self { dim, cells: cfg.cells, levels: cfg.levels, modulus: cfg.modulus, window, real: false }
    }

    pub fn real(mut self) -> Self {
        self.real = true;
        self
    }

    fn positions(&self) -> usize {
        (2 * self.window as usize).pow(self.dim as u32)
    }
}

/// `count` reproducible step functions; function `i` uses stream `i` of a
/// ChaCha generator seeded with `seed`, so the corpus is identical however
/// it is computed.
pub fn generate_corpus(seed: u64, count: usize, opts: &CorpusOptions) -> Result<Vec<StepFunction<f64>>> {
    if count == 0 {
        return config_error("corpus count must be at least 1");
    }
    if !(1..=2).contains(&opts.dim) {
        return config_error("corpus dimension must be 1 or 2");
    }
    let (c0, c1) = opts.cells;
    if c0 == 0 || c0 > c1 || c1 > opts.positions() {
        return config_error(format!("cell range {c0}..={c1} must be nonempty and fit {} positions", opts.positions()));
    }
    if opts.levels.0 > opts.levels.1 {
        return config_error("empty level range");
    }
    let (r0, r1) = opts.modulus;
    if !(r0 > 0.0 && r0 <= r1 && r1.is_finite()) {
        return config_error("modulus range must satisfy 0 < lo ≤ hi < ∞");
    }
    (0..count).into_par_iter().map(|i| one(seed, i as u64, opts)).collect()
}

fn one(seed: u64, stream: u64, opts: &CorpusOptions) -> Result<StepFunction<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let level = rng.gen_range(opts.levels.0..=opts.levels.1);
    let count = rng.gen_range(opts.cells.0..=opts.cells.1);
    let side = 2 * opts.window;
    let (l0, l1) = (opts.modulus.0.ln(), opts.modulus.1.ln());
    let picks = sample(&mut rng, opts.positions(), count).into_vec();
    let cells: Vec<(Idx, Complex<f64>)> = picks
        .into_iter()
        .map(|pos| {
            let pos = pos as i64;
            let k = if opts.dim == 1 { [pos - opts.window, 0] } else { [pos % side - opts.window, pos / side - opts.window] };
            let modulus = if l0 == l1 { l0.exp() } else { rng.gen_range(l0..=l1).exp() };
            let c = if opts.real {
                Complex::new(if rng.gen::<bool>() { modulus } else { -modulus }, 0.0)
            } else {
                Complex::from_polar(modulus, rng.gen_range(0.0..TAU))
            };
            (k, c)
        })
        .collect();
    Ok(StepFunction::new(opts.dim, level, cells)?)
}
