//! Two-parameter stability maps.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maps::{linearize_at, MapTriple};
use super::simulate::{simulate, Coupling, InitialCondition, SystemSpec};
use super::{classify_trajectory, DynamicsError, EmpiricalVerdict, DEFAULT_WINDOW};
use crate::fracops::FractionalOrder;
use crate::format_real;
use crate::spectra::{circulant_eigenvalues, CirculantSpec};
use crate::stability::{StabilityRegion, Verdict, DEFAULT_BAND, DEFAULT_SAMPLES};

pub const MAX_ANALYTIC_CELLS: usize = 1_000_000;
pub const MAX_SIMULATED_CELLS: usize = 10_000;

/// Which lattice a grid point `(p1, p2)` describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepFamily {
    /// `(p1, p2) = (a2, a1)`, `a0 = a2`.
    Symmetric,
    /// `(p1, p2) = (a1, a2)`, `a0 = -a2`.
    Asymmetric,
    /// `(p1, p2) = (δ, μ)`: logistic self map with cubic neighbours.
    LogisticCubic,
    /// `(p1, p2) = (μ, δ)`: logistic self map with circle-map neighbours.
    LogisticCircle,
    /// `(p1, p2) = (ε, μ)`: diffusively coupled logistic maps.
    CoupledLogistic,
}

impl SweepFamily {
    pub fn axis_names(self) -> (&'static str, &'static str) {
        match self {
            SweepFamily::Symmetric => ("a2", "a1"),
            SweepFamily::Asymmetric => ("a1", "a2"),
            SweepFamily::LogisticCubic => ("delta", "mu"),
            SweepFamily::LogisticCircle => ("mu", "delta"),
            SweepFamily::CoupledLogistic => ("eps", "mu"),
        }
    }

    fn coupling(self, p1: f64, p2: f64, n: usize) -> Result<Coupling, DynamicsError> {
        let circ = |a0, a1, a2| {
            CirculantSpec::new(a0, a1, a2, n)
                .map(Coupling::Circulant)
                .map_err(|e| DynamicsError::Analysis(e.to_string()))
        };
        match self {
            SweepFamily::Symmetric => circ(p1, p2, p1),
            SweepFamily::Asymmetric => circ(-p2, p1, p2),
            SweepFamily::LogisticCubic => Ok(Coupling::Maps(MapTriple::logistic_cubic(p2, p1))),
            SweepFamily::LogisticCircle => Ok(Coupling::Maps(MapTriple::logistic_circle(p1, p2))),
            SweepFamily::CoupledLogistic => Ok(Coupling::Maps(MapTriple::coupled_logistic(p2, p1))),
        }
    }
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self, DynamicsError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(DynamicsError::InvalidGrid(format!("bounds [{lo}, {hi}] are not finite")));
        }
        if count == 0 {
            return Err(DynamicsError::InvalidGrid("axis needs at least one point".into()));
        }
        if hi < lo {
            return Err(DynamicsError::InvalidGrid(format!("upper bound {hi} is below lower bound {lo}")));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub p1: Axis,
    pub p2: Axis,
}

impl SweepGrid {
    pub fn cells(&self) -> usize {
        self.p1.count.saturating_mul(self.p2.count)
    }

    /// Row-major over `p2`, then `p1`.
    pub fn point(&self, index: usize) -> (f64, f64) {
        (self.p1.value(index % self.p1.count), self.p2.value(index / self.p1.count))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Analytic,
    Simulated,
    Both,
}

impl SweepMode {
    fn analytic(self) -> bool {
        self != SweepMode::Simulated
    }

    fn simulated(self) -> bool {
        self != SweepMode::Analytic
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub alpha: FractionalOrder,
    pub n: usize,
    pub family: SweepFamily,
    pub mode: SweepMode,
    pub horizon: usize,
    pub window: usize,
    pub amplitude: f64,
    pub seed: u64,
    pub samples: usize,
    pub band: f64,
}

impl SweepOptions {
    pub fn new(alpha: FractionalOrder, n: usize, family: SweepFamily, mode: SweepMode) -> Self {
        Self {
            alpha,
            n,
            family,
            mode,
            horizon: 2000,
            window: DEFAULT_WINDOW,
            amplitude: super::DEFAULT_AMPLITUDE,
            seed: super::DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            band: DEFAULT_BAND,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub p1: f64,
    pub p2: f64,
    pub analytic: Option<Verdict>,
    pub empirical: Option<EmpiricalVerdict>,
}

/// Seed of cell `index`, independent of evaluation order.
pub fn cell_seed(base: u64, index: usize) -> u64 {
    let mut z = base ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Evaluates every grid cell, in parallel on the current rayon pool. The
/// result is in grid order and does not depend on the thread count.
pub fn sweep(grid: &SweepGrid, opts: &SweepOptions) -> Result<Vec<SweepCell>, DynamicsError> {
    let cells = grid.cells();
    let limit = if opts.mode.simulated() {
        MAX_SIMULATED_CELLS
    } else {
        MAX_ANALYTIC_CELLS
    };
    if cells > limit {
        return Err(DynamicsError::GridTooLarge { cells, limit });
    }
    if opts.n == 0 {
        return Err(DynamicsError::EmptyLattice);
    }
    let region = opts.mode.analytic().then(|| {
        StabilityRegion::with_samples(opts.alpha, opts.samples).with_band(opts.band)
    });
    (0..cells)
        .into_par_iter()
        .map(|i| {
            let (p1, p2) = grid.point(i);
            evaluate(opts, region.as_ref(), p1, p2, cell_seed(opts.seed, i))
        })
        .collect()
}

fn evaluate(
    opts: &SweepOptions,
    region: Option<&StabilityRegion>,
    p1: f64,
    p2: f64,
    seed: u64,
) -> Result<SweepCell, DynamicsError> {
    let coupling = opts.family.coupling(p1, p2, opts.n)?;
    let analytic = match region {
        None => None,
        Some(region) => {
            let spec = match &coupling {
                Coupling::Circulant(c) => *c,
                Coupling::Maps(m) => linearize_at(m, 0.0)
                    .on_lattice(opts.n)
                    .map_err(|e| DynamicsError::Analysis(e.to_string()))?,
                Coupling::Matrix(_) => unreachable!("sweeps use structured couplings"),
            };
            let v = region
                .classify_spectrum(&circulant_eigenvalues(&spec))
                .map_err(|e| DynamicsError::Analysis(e.to_string()))?;
            Some(v)
        }
    };
    let empirical = if opts.mode.simulated() {
        let initial = InitialCondition::Perturbation {
            base: 0.0,
            amplitude: opts.amplitude,
            seed,
        };
        let sys = SystemSpec::new(opts.alpha, opts.n, coupling, initial, opts.horizon);
        let traj = simulate(&sys)?;
        Some(classify_trajectory(&traj, opts.window, None)?)
    } else {
        None
    };
    Ok(SweepCell {
        p1,
        p2,
        analytic,
        empirical,
    })
}

/// CSV with header `p1,p2,analytic_verdict,empirical_verdict,margin`. Columns
/// that were not computed are left empty.
pub fn write_sweep_csv<W: Write>(mut out: W, cells: &[SweepCell]) -> io::Result<()> {
    writeln!(out, "p1,p2,analytic_verdict,empirical_verdict,margin")?;
    for c in cells {
        let (status, margin) = match c.analytic {
            Some(v) => (v.status.as_str().to_string(), format_real(v.margin)),
            None => (String::new(), String::new()),
        };
        let emp = c.empirical.map_or("", EmpiricalVerdict::as_str);
        writeln!(out, "{},{},{},{},{}", format_real(c.p1), format_real(c.p2), status, emp, margin)?;
    }
    Ok(())
}
