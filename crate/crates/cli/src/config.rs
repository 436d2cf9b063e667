//! Run configuration: a JSON document whose fields mirror the command-line
//! flags. Flags given on the command line take precedence.

use std::path::Path;

use fracml::dynamics::{Axis, MapTriple};
use fracml::FractionalOrder;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub n: Option<usize>,
    pub a0: Option<f64>,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub eps: Option<f64>,
    pub mode: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub horizon: Option<usize>,
    pub out: Option<String>,
    pub matrix: Option<String>,
    pub simulate: Option<bool>,
    pub gamma: Option<bool>,
    pub j: Option<usize>,
    pub guess: Option<f64>,
    pub amplitude: Option<f64>,
    pub base: Option<f64>,
    pub initial: Option<Vec<f64>>,
    pub target: Option<f64>,
    pub window: Option<usize>,
    pub cutoff: Option<f64>,
    pub p1: Option<Axis>,
    pub p2: Option<Axis>,
    pub maps: Option<MapTriple>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),* $(,)?) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
    }

    /// Replaces every field that `other` sets.
    pub fn overlay(&mut self, other: RunConfig) {
        overlay!(
            self, other, alpha, n, a0, a1, a2, mu, delta, eps, mode, samples, seed, horizon, out,
            matrix, simulate, gamma, j, guess, amplitude, base, initial, target, window, cutoff,
            p1, p2, maps,
        );
    }

    pub fn alpha(&self) -> Result<FractionalOrder, CliError> {
        let a = self.alpha.ok_or_else(|| CliError::usage("--alpha is required"))?;
        FractionalOrder::new(a).map_err(|e| CliError::usage(e.to_string()))
    }

    pub fn n(&self) -> Result<usize, CliError> {
        match self.n {
            Some(0) => Err(CliError::usage("--n must be at least 1")),
            Some(n) => Ok(n),
            None => Err(CliError::usage("--n is required")),
        }
    }

    pub fn value(&self, v: Option<f64>, flag: &str) -> Result<f64, CliError> {
        match v {
            Some(x) if x.is_finite() => Ok(x),
            Some(x) => Err(CliError::usage(format!("--{flag} must be finite, got {x}"))),
            None => Err(CliError::usage(format!("--{flag} is required"))),
        }
    }

    pub fn mode_or(&self, default: &str) -> String {
        self.mode.clone().unwrap_or_else(|| default.to_string())
    }
}

/// Parses `lo:hi:count`.
pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(format!("expected lo:hi:count, got '{s}'"));
    };
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound '{lo}': {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound '{hi}': {e}"))?;
    let count: usize = count.trim().parse().map_err(|e| format!("bad count '{count}': {e}"))?;
    Axis::new(lo, hi, count).map_err(|e| e.to_string())
}
