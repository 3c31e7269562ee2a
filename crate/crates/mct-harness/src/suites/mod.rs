//! Named verification suites. Every suite returns per-case rows and
//! verdicts derived only from the recorded numbers; cases run in parallel
//! and are collected in order, so a report depends only on its config.

mod counterexamples;
mod campanato;
mod equivalence;
mod fourier;
mod pitt;
mod sequences;

use mct_core::grid::StepFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::corpus::{generate_corpus, CorpusOptions};
use crate::error::{config_error, HarnessError, Result};
use crate::report::ExperimentReport;

type SuiteFn = fn(&ExperimentConfig) -> Result<ExperimentReport>;

const SUITES: [(&str, SuiteFn); 22] = [
    ("discretization", equivalence::discretization),
    ("embeddings", equivalence::embeddings),
    ("hardy", sequences::hardy),
    ("dsk", sequences::dsk),
    ("cstar", sequences::cstar),
    ("thm-main", fourier::thm_main),
    ("cor-lorentz", fourier::cor_lorentz),
    ("weighted", fourier::weighted),
    ("gamma", fourier::gamma),
    ("sharpness", fourier::sharpness),
    ("gm", fourier::gm),
    ("pitt-homogeneity", pitt::homogeneity),
    ("pitt-necessity", pitt::necessity),
    ("campanato", campanato::campanato),
    ("lipschitz", campanato::lipschitz),
    ("appendix-a1", counterexamples::a1),
    ("appendix-a2", counterexamples::a2),
    ("rearrangement", sequences::rearrangement),
    ("hyperbolic", sequences::hyperbolic),
    ("lm-truncated", equivalence::lm_truncated),
    ("inf-constants", equivalence::inf_constants),
    ("campanato-morrey", equivalence::campanato_morrey),
];

/// Names accepted by [`run_suite`].
pub const SUITE_NAMES: [&str; 22] = {
    let mut names = [""; 22];
    let mut i = 0;
    while i < SUITES.len() {
        names[i] = SUITES[i].0;
        i += 1;
    }
    names
};

/// Runs the suite named in `cfg` and fills in its summary.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let Some((_, run)) = SUITES.iter().find(|(name, _)| *name == cfg.suite) else {
        return Err(HarnessError::UnknownSuite { name: cfg.suite.clone(), known: SUITE_NAMES.join(", ") });
    };
    let report = run(cfg)?.finish();
    log::info!("suite {}: {} cases, pass = {}", cfg.suite, report.summary.cases, report.summary.pass);
    Ok(report)
}

/// Independent generator for case `i`.
fn case_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// The configured random corpus in dimension `dim`.
fn corpus(cfg: &ExperimentConfig, default_count: usize, dim: usize, real: bool) -> Result<Vec<StepFunction<f64>>> {
    let mut opts = CorpusOptions::from_config(&cfg.corpus, dim);
    opts.real = real;
    generate_corpus(cfg.seed, cfg.count_or(default_count), &opts)
}

/// Maps `f` over `items` in parallel, keeping their order.
fn par_map<I: Sync, R: Send>(items: &[I], f: impl Fn(usize, &I) -> Result<R> + Sync) -> Result<Vec<R>> {
    items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

/// Resolved `(dim, p, q, λ)` with suite defaults for unset fields.
fn space(cfg: &ExperimentConfig, dim: usize, p: f64, q: f64, lambda: f64) -> (usize, f64, f64, f64) {
    let s = &cfg.space;
    (s.dim.unwrap_or(dim), s.p.unwrap_or(p), s.q.unwrap_or(q), s.lambda.unwrap_or(lambda))
}

fn require_dim(dim: usize, allowed: &[usize], suite: &str) -> Result<()> {
    if allowed.contains(&dim) {
        Ok(())
    } else {
        config_error(format!("suite {suite} supports dimension {allowed:?}, not {dim}"))
    }
}

/// Sweep values that must be positive integers.
fn integer_sweep(cfg: &ExperimentConfig, default: &[f64]) -> Result<Vec<u64>> {
    cfg.sweep_or(default)
        .into_iter()
        .map(|v| if v >= 0.0 && v.fract() == 0.0 && v < 1e15 { Ok(v as u64) } else { config_error(format!("sweep value {v} must be a nonnegative integer")) })
        .collect()
}

/// Fits a log-log slope when there are enough points, recording the fit.
fn fit_into(report: &mut ExperimentReport, points: &[(f64, f64)]) -> Option<crate::fit::SlopeFit> {
    match crate::fit::fit_slope(points) {
        Ok(fit) => {
            report.set_slope(fit);
            Some(fit)
        }
        Err(e) => {
            log::warn!("{e}");
            None
        }
    }
}

fn fmt_range(lo: f64, hi: f64) -> String {
    format!("[{lo:.6}, {hi:.6}]")
}

/// `(min, max)` of finite values, or `None` for an empty input.
fn min_max(values: impl IntoIterator<Item = f64>) -> Option<(f64, f64)> {
    values.into_iter().fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((a, b)) => Some((a.min(v), b.max(v))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_the_known_ones() {
        let err = run_suite(&ExperimentConfig::new("nope")).unwrap_err().to_string();
        for name in SUITE_NAMES {
            assert!(err.contains(name), "{err}");
        }
    }

    #[test]
    fn names_are_unique() {
        let mut v = SUITE_NAMES.to_vec();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), SUITES.len());
    }
}
