//! The memory iterations for linear and nonlinear lattices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::maps::MapTriple;
use super::{DynamicsError, LatticeState};
use crate::fracops::{memory_convolution_flat, FractionalOrder, KernelWeights};
use crate::spectra::{CirculantSpec, DenseMatrix};

pub const DEFAULT_HORIZON_CAP: usize = 100_000;
pub const DEFAULT_CUTOFF: f64 = 1e8;
pub const DEFAULT_AMPLITUDE: f64 = 0.01;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    Circulant(CirculantSpec),
    Matrix(DenseMatrix),
    Maps(MapTriple),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialCondition {
    Explicit { values: Vec<f64> },
    /// `base + U[-amplitude, amplitude]` per site, from a seeded ChaCha8 stream.
    Perturbation { base: f64, amplitude: f64, seed: u64 },
}

impl InitialCondition {
    pub fn around(base: f64) -> Self {
        InitialCondition::Perturbation {
            base,
            amplitude: DEFAULT_AMPLITUDE,
            seed: DEFAULT_SEED,
        }
    }

    pub fn realize(&self, n: usize) -> Result<Vec<f64>, DynamicsError> {
        match self {
            InitialCondition::Explicit { values } => {
                if values.len() != n {
                    return Err(DynamicsError::DimensionMismatch {
                        expected: n,
                        got: values.len(),
                    });
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(DynamicsError::NonFiniteInitial);
                }
                Ok(values.clone())
            }
            &InitialCondition::Perturbation { base, amplitude, seed } => {
                if !(amplitude > 0.0) || !amplitude.is_finite() || !base.is_finite() {
                    return Err(DynamicsError::InvalidAmplitude(amplitude));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..n)
                    .map(|_| base + rng.random_range(-amplitude..=amplitude))
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub alpha: FractionalOrder,
    pub n: usize,
    pub coupling: Coupling,
    pub initial: InitialCondition,
    pub horizon: usize,
    pub cutoff: f64,
    pub horizon_cap: usize,
}

impl SystemSpec {
    pub fn new(alpha: FractionalOrder, n: usize, coupling: Coupling, initial: InitialCondition, horizon: usize) -> Self {
        Self {
            alpha,
            n,
            coupling,
            initial,
            horizon,
            cutoff: DEFAULT_CUTOFF,
            horizon_cap: DEFAULT_HORIZON_CAP,
        }
    }

    pub fn linear(alpha: FractionalOrder, spec: CirculantSpec, initial: InitialCondition, horizon: usize) -> Self {
        Self::new(alpha, spec.n, Coupling::Circulant(spec), initial, horizon)
    }

    pub fn nonlinear(alpha: FractionalOrder, n: usize, maps: MapTriple, initial: InitialCondition, horizon: usize) -> Self {
        Self::new(alpha, n, Coupling::Maps(maps), initial, horizon)
    }

    fn validate(&self) -> Result<Vec<f64>, DynamicsError> {
        if self.n == 0 {
            return Err(DynamicsError::EmptyLattice);
        }
        if self.horizon == 0 {
            return Err(DynamicsError::ZeroHorizon);
        }
        if self.horizon > self.horizon_cap {
            return Err(DynamicsError::HorizonTooLong {
                horizon: self.horizon,
                cap: self.horizon_cap,
            });
        }
        if !(self.cutoff > 0.0) {
            return Err(DynamicsError::InvalidCutoff(self.cutoff));
        }
        let dim = match &self.coupling {
            Coupling::Circulant(c) => c.n,
            Coupling::Matrix(m) => m.dim(),
            Coupling::Maps(_) => self.n,
        };
        if dim != self.n {
            return Err(DynamicsError::DimensionMismatch {
                expected: self.n,
                got: dim,
            });
        }
        self.initial.realize(self.n)
    }
}

/// States `X_0 … X_T`, stored row-major. A diverged run is truncated after the
/// last finite state and has `diverged` set.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    alpha: FractionalOrder,
    n: usize,
    data: Vec<f64>,
    diverged: bool,
}

impl Trajectory {
    pub fn from_states(alpha: FractionalOrder, states: &[Vec<f64>]) -> Result<Self, DynamicsError> {
        let n = states.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(DynamicsError::EmptyLattice);
        }
        let mut data = Vec::with_capacity(n * states.len());
        for s in states {
            if s.len() != n {
                return Err(DynamicsError::DimensionMismatch {
                    expected: n,
                    got: s.len(),
                });
            }
            data.extend_from_slice(s);
        }
        Ok(Self {
            alpha,
            n,
            data,
            diverged: false,
        })
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    /// Number of stored steps after the initial state.
    pub fn horizon(&self) -> usize {
        self.data.len() / self.n - 1
    }

    pub fn diverged(&self) -> bool {
        self.diverged
    }

    pub fn state(&self, t: usize) -> &[f64] {
        &self.data[t * self.n..(t + 1) * self.n]
    }

    pub fn lattice_state(&self, t: usize) -> LatticeState {
        LatticeState::new(self.state(t).to_vec())
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn last(&self) -> &[f64] {
        self.state(self.horizon())
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// CSV with header `t,site_1,…,site_N`, one row per stored state.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "t")?;
        for k in 1..=self.n {
            write!(out, ",site_{k}")?;
        }
        writeln!(out)?;
        for (t, s) in self.states().enumerate() {
            write!(out, "{t}")?;
            for v in s {
                write!(out, ",{}", crate::format_real(*v))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

pub fn simulate(spec: &SystemSpec) -> Result<Trajectory, DynamicsError> {
    match &spec.coupling {
        Coupling::Maps(_) => simulate_nonlinear(spec),
        _ => simulate_linear(spec),
    }
}

type Apply<'a> = Box<dyn Fn(&[f64], &mut [f64]) + 'a>;

/// `X_{t+1} = X_0 + (A - I) Σ_{j≤t} w[t-j] X_j`.
pub fn simulate_linear(spec: &SystemSpec) -> Result<Trajectory, DynamicsError> {
    let x0 = spec.validate()?;
    let apply: Apply = match &spec.coupling {
        Coupling::Circulant(c) => Box::new(move |x, out| c.apply(x, out)),
        Coupling::Matrix(m) => Box::new(move |x, out| m.apply(x, out)),
        Coupling::Maps(_) => return Err(DynamicsError::WrongCoupling("simulate_linear needs a linear coupling")),
    };
    let n = spec.n;
    let weights = KernelWeights::new(spec.alpha, spec.horizon + 1)?;
    let mut data = Vec::with_capacity(n * (spec.horizon + 1));
    data.extend_from_slice(&x0);
    let mut sum = vec![0.0; n];
    let mut ax = vec![0.0; n];
    let mut diverged = false;
    for t in 0..spec.horizon {
        memory_convolution_flat(&weights, &data, n, t, &mut sum)?;
        apply(&sum, &mut ax);
        let next: Vec<f64> = (0..n).map(|k| x0[k] + ax[k] - sum[k]).collect();
        if push_checked(&mut data, &next, spec.cutoff) {
            diverged = true;
            break;
        }
    }
    Ok(Trajectory {
        alpha: spec.alpha,
        n,
        data,
        diverged,
    })
}

/// `X_{t+1} = X_0 + Σ_{j≤t} w[t-j] (F(X_j) - X_j)` with
/// `F_k(X) = f0(x_{k-1}) + f1(x_k) + f2(x_{k+1})`, periodic in `k`.
pub fn simulate_nonlinear(spec: &SystemSpec) -> Result<Trajectory, DynamicsError> {
    let x0 = spec.validate()?;
    let Coupling::Maps(maps) = &spec.coupling else {
        return Err(DynamicsError::WrongCoupling("simulate_nonlinear needs a map triple"));
    };
    let n = spec.n;
    let weights = KernelWeights::new(spec.alpha, spec.horizon + 1)?;
    let mut data = Vec::with_capacity(n * (spec.horizon + 1));
    let mut drive = Vec::with_capacity(n * spec.horizon);
    data.extend_from_slice(&x0);
    let mut sum = vec![0.0; n];
    let mut diverged = false;
    for t in 0..spec.horizon {
        let g = increment(maps, &data[t * n..]);
        if g.iter().any(|v| !v.is_finite()) {
            diverged = true;
            break;
        }
        drive.extend_from_slice(&g);
        memory_convolution_flat(&weights, &drive, n, t, &mut sum)?;
        let next: Vec<f64> = x0.iter().zip(&sum).map(|(a, b)| a + b).collect();
        if push_checked(&mut data, &next, spec.cutoff) {
            diverged = true;
            break;
        }
    }
    Ok(Trajectory {
        alpha: spec.alpha,
        n,
        data,
        diverged,
    })
}

fn increment(maps: &MapTriple, x: &[f64]) -> Vec<f64> {
    let state = LatticeState::new(x.to_vec());
    (1..=x.len())
        .map(|k| {
            maps.f0.eval(state.at(k as isize - 1)) + maps.f1.eval(state.at(k as isize))
                - state.at(k as isize)
                + maps.f2.eval(state.at(k as isize + 1))
        })
        .collect()
}

/// Appends `next` unless it breaks the cutoff. Returns true on divergence.
fn push_checked(data: &mut Vec<f64>, next: &[f64], cutoff: f64) -> bool {
    if next.iter().all(|v| v.is_finite()) {
        data.extend_from_slice(next);
    }
    next.iter().any(|v| !v.is_finite() || v.abs() > cutoff)
}
