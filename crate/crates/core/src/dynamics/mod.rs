//! Direct simulation of fractional coupled map lattices.
//!
//! Both iterations keep the full history, since the kernel weight depends on
//! `t - j`. A run over `T` steps costs `O(T² N)`.

pub mod maps;
pub mod simulate;
pub mod sweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fracops::FracError;
use crate::stability::Status;

pub use maps::{
    eval_map, eval_map_derivative, find_homogeneous_equilibrium, linearize_at, Equilibrium,
    MapSpec, MapTriple, NeighborWeights,
};
pub use simulate::{
    simulate, simulate_linear, simulate_nonlinear, Coupling, InitialCondition, SystemSpec,
    Trajectory, DEFAULT_AMPLITUDE, DEFAULT_CUTOFF, DEFAULT_HORIZON_CAP, DEFAULT_SEED,
};
pub use sweep::{cell_seed, sweep, write_sweep_csv, Axis, SweepCell, SweepFamily, SweepGrid, SweepMode, SweepOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("lattice size must be at least 1")]
    EmptyLattice,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("horizon {horizon} exceeds the cap of {cap} steps")]
    HorizonTooLong { horizon: usize, cap: usize },
    #[error("divergence cutoff must be positive, got {0}")]
    InvalidCutoff(f64),
    #[error("perturbation amplitude must be positive and finite, got {0}")]
    InvalidAmplitude(f64),
    #[error("initial state must be finite")]
    NonFiniteInitial,
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0}")]
    WrongCoupling(&'static str),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("Newton step undefined: g'(x) vanishes at x = {at}")]
    FlatResidual { at: f64 },
    #[error("no equilibrium after {iterations} Newton iterations; last iterate {last}")]
    NoEquilibrium { last: f64, iterations: usize },
    #[error("trajectory of {horizon} steps is too short for window {window}: need T >= 4 * window")]
    ShortTrajectory { horizon: usize, window: usize },
    #[error("window must be at least 1")]
    ZeroWindow,
    #[error("reference has {got} sites, trajectory has {expected}")]
    ReferenceMismatch { expected: usize, got: usize },
    #[error("grid axis is invalid: {0}")]
    InvalidGrid(String),
    #[error("{cells} cells exceed the limit of {limit} for this sweep mode")]
    GridTooLarge { cells: usize, limit: usize },
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error("{0}")]
    Analysis(String),
}

/// Lattice values `x(1) … x(N)` with periodic indexing: `x(0) = x(N)`,
/// `x(N+1) = x(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    values: Vec<f64>,
}

impl LatticeState {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "lattice needs at least one site");
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One-based periodic accessor.
    pub fn at(&self, k: isize) -> f64 {
        let n = self.values.len() as isize;
        self.values[((k - 1).rem_euclid(n)) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmpiricalVerdict {
    Decaying,
    Growing,
    Inconclusive,
    Diverged,
}

impl EmpiricalVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            EmpiricalVerdict::Decaying => "decaying",
            EmpiricalVerdict::Growing => "growing",
            EmpiricalVerdict::Inconclusive => "inconclusive",
            EmpiricalVerdict::Diverged => "diverged",
        }
    }

    /// True when the observation directly opposes an analytic verdict.
    pub fn contradicts(self, status: Status) -> bool {
        matches!(
            (self, status),
            (EmpiricalVerdict::Decaying, Status::Unstable)
                | (EmpiricalVerdict::Growing | EmpiricalVerdict::Diverged, Status::Stable)
        )
    }

    pub fn agrees_with(self, status: Status) -> bool {
        matches!(
            (self, status),
            (EmpiricalVerdict::Decaying, Status::Stable)
                | (EmpiricalVerdict::Growing | EmpiricalVerdict::Diverged, Status::Unstable)
        )
    }
}

impl std::fmt::Display for EmpiricalVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_WINDOW: usize = 100;
const DECAY_RATIO: f64 = 0.2;
const GROWTH_RATIO: f64 = 5.0;

/// Compares the largest deviation from `reference` (zero when `None`) over the
/// last `window` states with the same over the first `window`.
pub fn classify_trajectory(
    traj: &Trajectory,
    window: usize,
    reference: Option<&[f64]>,
) -> Result<EmpiricalVerdict, DynamicsError> {
    if window == 0 {
        return Err(DynamicsError::ZeroWindow);
    }
    if let Some(r) = reference {
        if r.len() != traj.sites() {
            return Err(DynamicsError::ReferenceMismatch {
                expected: traj.sites(),
                got: r.len(),
            });
        }
    }
    if traj.diverged() {
        return Ok(EmpiricalVerdict::Diverged);
    }
    let horizon = traj.horizon();
    if horizon < 4 * window {
        return Err(DynamicsError::ShortTrajectory { horizon, window });
    }
    let deviation = |range: std::ops::Range<usize>| {
        range
            .flat_map(|t| {
                traj.state(t)
                    .iter()
                    .enumerate()
                    .map(move |(k, x)| (x - reference.map_or(0.0, |r| r[k])).abs())
            })
            .fold(0.0f64, f64::max)
    };
    let e = deviation(0..window);
    let h = deviation(horizon + 1 - window..horizon + 1);
    Ok(if h == 0.0 || h < DECAY_RATIO * e {
        EmpiricalVerdict::Decaying
    } else if h > GROWTH_RATIO * e {
        EmpiricalVerdict::Growing
    } else {
        EmpiricalVerdict::Inconclusive
    })
}
