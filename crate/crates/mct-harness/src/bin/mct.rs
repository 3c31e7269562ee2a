//! Command-line front end: norms of step functions, the D-functional,
//! named families and verification suites.
//!
//! Exit codes: 0 on success or when every suite verdict passes, 1 when a
//! suite verdict fails, 2 on usage or input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use mct_core::constructions::{family, Realization};
use mct_core::functionals::{d_functional, d_functional_weighted};
use mct_core::norms::{
    campanato_norm, fourier_morrey_norm, gamma_norm, local_morrey_norm, lorentz_norm, morrey_norm_weighted, truncated_norm, CampanatoOptions,
    FourierGridOptions, MorreyOptions, NormParams, NormReport, Weight,
};
use mct_core::Step;
use mct_harness::report::json_number;
use mct_harness::{parse_weight, run_suite, ExperimentConfig};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mct", version, about = "Morrey, Campanato and Lorentz norms of dyadic step functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Shared exponent arguments; `inf` is accepted for `q`.
#[derive(clap::Args)]
struct Exponents {
    #[arg(long, value_parser = parse_exponent)]
    p: f64,
    #[arg(long, value_parser = parse_exponent)]
    q: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    lambda: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Lorentz,
    Morrey,
    LocalMorrey,
    Truncated,
    Campanato,
    Gamma,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformSpace {
    Morrey,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of a step function read from JSON.
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        space: Space,
        #[command(flatten)]
        exp: Exponents,
        /// `pow:E`, `powlog:E:L` or `table:PATH`.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Sampled Morrey norm of the Fourier transform of a step function.
    FourierNorm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "morrey")]
        space: TransformSpace,
        #[command(flatten)]
        exp: Exponents,
        #[arg(long, allow_hyphen_values = true)]
        m_lo: i32,
        #[arg(long, allow_hyphen_values = true)]
        m_hi: i32,
        #[arg(long, default_value_t = 4)]
        resolution: usize,
        /// Half-width of the sampled box; defaults to `2^{m_hi}`.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// The D-functional bounding the Fourier–Morrey norm.
    D {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        exp: Exponents,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Also write the per-level profile as CSV.
        #[arg(long)]
        levels: Option<PathBuf>,
    },
    /// Writes a member of a named family as JSON.
    Family {
        #[arg(long)]
        name: String,
        /// `KEY=VALUE`, repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a verification suite.
    Suite {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV of rows; the JSON summary is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("{s:?}: {e}")),
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    Ok((k.trim().to_string(), v.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"))?))
}

fn load(path: &Path) -> anyhow::Result<Step> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Step::from_json(&text)?)
}

fn weight_arg(spec: &Option<String>) -> anyhow::Result<Option<Weight<f64>>> {
    Ok(spec.as_deref().map(parse_weight).transpose()?)
}

fn report_json(rep: &NormReport<f64>) -> Value {
    let params: serde_json::Map<String, Value> = rep.params.iter().map(|(k, v)| (k.clone(), json_number(*v))).collect();
    json!({
        "space": rep.space,
        "params": params,
        "value": json_number(rep.value),
        "lower_bound": rep.lower_bound,
        "tail_estimate": json_number(rep.tail_estimate),
        "m_range": [rep.m_range.0, rep.m_range.1],
    })
}

fn norm(input: &Path, space: Space, e: &Exponents, weight: &Option<String>) -> anyhow::Result<Value> {
    let f = load(input)?;
    let w = weight_arg(weight)?;
    let simple = |name: &str, v: f64| json!({ "space": name, "p": json_number(e.p), "q": json_number(e.q), "value": json_number(v) });
    Ok(match space {
        Space::Lorentz => simple("lorentz", lorentz_norm(&f, e.p, e.q)?),
        Space::Morrey => {
            let w = w.unwrap_or_else(|| Weight::power(-e.lambda));
            report_json(&morrey_norm_weighted(&f, &w, e.p, e.q, &MorreyOptions::default())?)
        }
        Space::LocalMorrey => {
            if w.is_some() {
                bail!("local-morrey takes no weight");
            }
            report_json(&local_morrey_norm(&f, &NormParams::new(f.dim(), e.p, e.q, e.lambda)?)?)
        }
        Space::Truncated => {
            if w.is_some() {
                bail!("truncated takes no weight; use --lambda");
            }
            report_json(&truncated_norm(&f, e.lambda, e.q, e.p)?)
        }
        Space::Campanato => {
            let w = w.unwrap_or_else(|| Weight::power(-e.lambda));
            let rep = campanato_norm(&f, &w, e.p, e.q, &CampanatoOptions::default())?;
            let mut v = report_json(&rep.seminorm);
            v["unit_ball_sup"] = rep.unit_ball_sup.map_or(Value::Null, json_number);
            v
        }
        Space::Gamma => {
            let w = w.unwrap_or_else(|| Weight::power(1.0 / e.p - 1.0 / e.q));
            simple("gamma", gamma_norm(&f, &w, e.q)?)
        }
    })
}

fn fourier_norm(input: &Path, e: &Exponents, m_lo: i32, m_hi: i32, resolution: usize, radius: Option<f64>) -> anyhow::Result<Value> {
    let f = load(input)?;
    let r = radius.unwrap_or_else(|| 2f64.powi(m_hi));
    if !(r > 0.0) {
        bail!("radius must be positive");
    }
    let opts = FourierGridOptions { m_range: (m_lo, m_hi), resolution, region: [(-r, r), (-r, r)] };
    let (rep, per_level) = fourier_morrey_norm(&f, &Weight::power(-e.lambda), e.p, e.q, &opts)?;
    let mut v = report_json(&rep);
    v["per_level"] = Value::Array(per_level.iter().map(|(m, s)| json!([m, json_number(*s)])).collect());
    Ok(v)
}

fn d_command(input: &Path, e: &Exponents, weight: &Option<String>, levels: &Option<PathBuf>) -> anyhow::Result<Value> {
    let f = load(input)?;
    let prof = match weight_arg(weight)? {
        Some(u) => d_functional_weighted(&f, e.p, e.q, &u, None)?,
        None => d_functional(&f, e.p, e.q, e.lambda, None)?,
    };
    if let Some(path) = levels {
        std::fs::write(path, prof.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(json!({
        "value": json_number(prof.value),
        "tail_estimate": json_number(prof.tail_estimate),
        "m_range": [prof.m_range.0, prof.m_range.1],
        "levels": prof.levels.len(),
    }))
}

fn family_command(name: &str, params: &[(String, f64)], out: &Option<PathBuf>) -> anyhow::Result<()> {
    let params: BTreeMap<String, f64> = params.iter().cloned().collect();
    let fam = family(name, &params)?;
    if let Realization::Modulated(m) = &fam.realization {
        eprintln!("note: writing the unmodulated base; the frequency is {:?}", &m.frequency[..m.base.dim()]);
    }
    let text = fam.step().to_json();
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn suite_command(name: &Option<String>, config: &Option<PathBuf>, seed: Option<u64>, out: &Option<PathBuf>) -> anyhow::Result<bool> {
    let mut cfg = match config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(n) = name {
        cfg.suite = n.clone();
    }
    if cfg.suite.is_empty() {
        return Err(anyhow!("no suite given; pass --name or a config with a suite field"));
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = out {
        cfg.output = Some(o.clone());
    }
    let report = run_suite(&cfg)?;
    print!("{}", report.render());
    if let Some(path) = &cfg.output {
        let json = report.write(path)?;
        eprintln!("wrote {} and {}", path.display(), json.display());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Norm { input, space, exp, weight } => norm(input, *space, exp, weight).map(|v| {
            println!("{v}");
            true
        }),
        Command::FourierNorm { input, space: TransformSpace::Morrey, exp, m_lo, m_hi, resolution, radius } => {
            fourier_norm(input, exp, *m_lo, *m_hi, *resolution, *radius).map(|v| {
                println!("{v}");
                true
            })
        }
        Command::D { input, exp, weight, levels } => d_command(input, exp, weight, levels).map(|v| {
            println!("{v}");
            true
        }),
        Command::Family { name, params, out } => family_command(name, params, out).map(|_| true),
        Command::Suite { name, config, seed, out } => suite_command(name, config, *seed, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
