//! Run configuration: a JSON file overlaid by command-line flags.

use num_rational::BigRational;
use qso_core::field::{parse_rational, Q2};
use qso_core::spectrum::SpectralParams;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Spectral parameters as `"p/q"` strings; missing entries take the defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralConfig {
    pub theta: Option<String>,
    pub theta1: Option<String>,
    pub theta2: Option<String>,
    pub theta3: Option<String>,
    pub mu_y: Option<String>,
    pub mu_z: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub q_samples: Option<Vec<String>>,
    pub q2_convention: Option<String>,
    pub lambda_plus: Option<Vec<String>>,
    pub lambda_minus: Option<Vec<String>>,
    pub spectral: Option<SpectralConfig>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub verbosity: Option<u8>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    /// Permits `q = 1` among the samples.
    pub classical: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

pub fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational \"p/q\": {s}"))
}

pub fn rationals(xs: &[String]) -> Result<Vec<BigRational>, String> {
    xs.iter().map(|s| rational(s)).collect()
}

pub fn q2(s: &str) -> Result<Q2, String> {
    Q2::parse(s).ok_or_else(|| format!("unknown q2 convention {s}; use q^1/2, q or q^2"))
}

/// Named parameter sets, then individual overrides.
pub fn spectral(base: &str, n: usize, q: BigRational, over: &SpectralConfig) -> Result<SpectralParams, String> {
    let mut p = SpectralParams::default_for(n, q);
    match base {
        "default" => {}
        "boundary" => p.theta = p.theta_boundary(),
        other => return Err(format!("unknown parameter set {other}; use default or boundary")),
    }
    let set = |slot: &mut BigRational, v: &Option<String>| -> Result<(), String> {
        if let Some(s) = v {
            *slot = rational(s)?;
        }
        Ok(())
    };
    set(&mut p.theta1, &over.theta1)?;
    set(&mut p.theta2, &over.theta2)?;
    set(&mut p.theta3, &over.theta3)?;
    set(&mut p.mu_y, &over.mu_y)?;
    set(&mut p.mu_z, &over.mu_z)?;
    if base == "boundary" && over.theta.is_none() {
        p.theta = p.theta_boundary();
    }
    set(&mut p.theta, &over.theta)?;
    Ok(p)
}
