//! Site maps, homogeneous equilibria and linearization.

use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::spectra::{CirculantSpec, SpectraError};

/// A scalar site map with a closed-form derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapSpec {
    /// `a x`
    Linear { a: f64 },
    /// `μ x (1 - x)`
    Logistic { mu: f64 },
    /// `4 x³ - δ x`
    Cubic { delta: f64 },
    /// `x + δ sin x`
    Circle { delta: f64 },
    /// `c f(x)`
    Scaled { c: f64, map: Box<MapSpec> },
    /// `-f(x)`
    Negated { map: Box<MapSpec> },
}

impl MapSpec {
    pub fn zero() -> Self {
        MapSpec::Linear { a: 0.0 }
    }

    pub fn scaled(c: f64, map: MapSpec) -> Self {
        MapSpec::Scaled {
            c,
            map: Box::new(map),
        }
    }

    pub fn negated(map: MapSpec) -> Self {
        MapSpec::Negated { map: Box::new(map) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            MapSpec::Linear { a } => a * x,
            MapSpec::Logistic { mu } => mu * x * (1.0 - x),
            MapSpec::Cubic { delta } => 4.0 * x * x * x - delta * x,
            MapSpec::Circle { delta } => x + delta * x.sin(),
            MapSpec::Scaled { c, map } => c * map.eval(x),
            MapSpec::Negated { map } => -map.eval(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            MapSpec::Linear { a } => *a,
            MapSpec::Logistic { mu } => mu * (1.0 - 2.0 * x),
            MapSpec::Cubic { delta } => 12.0 * x * x - delta,
            MapSpec::Circle { delta } => 1.0 + delta * x.cos(),
            MapSpec::Scaled { c, map } => c * map.derivative(x),
            MapSpec::Negated { map } => -map.derivative(x),
        }
    }
}

pub fn eval_map(f: &MapSpec, x: f64) -> f64 {
    f.eval(x)
}

pub fn eval_map_derivative(f: &MapSpec, x: f64) -> f64 {
    f.derivative(x)
}

/// Left-neighbour, self and right-neighbour maps `(f0, f1, f2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapTriple {
    pub f0: MapSpec,
    pub f1: MapSpec,
    pub f2: MapSpec,
}

impl MapTriple {
    pub fn new(f0: MapSpec, f1: MapSpec, f2: MapSpec) -> Self {
        Self { f0, f1, f2 }
    }

    /// `f_i(x) = a_i x`.
    pub fn linear(a0: f64, a1: f64, a2: f64) -> Self {
        Self::new(
            MapSpec::Linear { a: a0 },
            MapSpec::Linear { a: a1 },
            MapSpec::Linear { a: a2 },
        )
    }

    /// Logistic self map, cubic neighbours: `f1 = μx(1-x)`, `f0 = f2 = 4x³ - δx`.
    pub fn logistic_cubic(mu: f64, delta: f64) -> Self {
        let cubic = MapSpec::Cubic { delta };
        Self::new(cubic.clone(), MapSpec::Logistic { mu }, cubic)
    }

    /// Logistic self map, antisymmetric circle-map neighbours:
    /// `f2 = x + δ sin x`, `f0 = -f2`.
    pub fn logistic_circle(mu: f64, delta: f64) -> Self {
        let circle = MapSpec::Circle { delta };
        Self::new(
            MapSpec::negated(circle.clone()),
            MapSpec::Logistic { mu },
            circle,
        )
    }

    /// Diffusively coupled logistic maps: `f1 = (1-ε) f`, `f0 = f2 = (ε/2) f`.
    pub fn coupled_logistic(mu: f64, eps: f64) -> Self {
        let f = MapSpec::Logistic { mu };
        Self::new(
            MapSpec::scaled(eps / 2.0, f.clone()),
            MapSpec::scaled(1.0 - eps, f.clone()),
            MapSpec::scaled(eps / 2.0, f),
        )
    }

    /// `f0(x) + f1(x) + f2(x)`: the homogeneous image of a synchronized state.
    pub fn homogeneous(&self, x: f64) -> f64 {
        self.f0.eval(x) + self.f1.eval(x) + self.f2.eval(x)
    }

    fn homogeneous_derivative(&self, x: f64) -> f64 {
        self.f0.derivative(x) + self.f1.derivative(x) + self.f2.derivative(x)
    }
}

/// Homogeneous fixed point `x*` with its residual `|f0+f1+f2 - x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub x_star: f64,
    pub residual: f64,
}

const NEWTON_MAX_ITER: usize = 100;

/// Newton's method on `g(x) = f0(x) + f1(x) + f2(x) - x`.
pub fn find_homogeneous_equilibrium(
    maps: &MapTriple,
    guess: f64,
    tol: f64,
) -> Result<Equilibrium, DynamicsError> {
    if !(tol > 0.0) {
        return Err(DynamicsError::InvalidTolerance(tol));
    }
    let mut x = guess;
    for _ in 0..=NEWTON_MAX_ITER {
        let g = maps.homogeneous(x) - x;
        if !g.is_finite() {
            break;
        }
        if g.abs() <= tol {
            return Ok(Equilibrium {
                x_star: x,
                residual: g.abs(),
            });
        }
        let dg = maps.homogeneous_derivative(x) - 1.0;
        if dg.abs() < 1e-14 {
            return Err(DynamicsError::FlatResidual { at: x });
        }
        x -= g / dg;
    }
    Err(DynamicsError::NoEquilibrium {
        last: x,
        iterations: NEWTON_MAX_ITER,
    })
}

/// Coupling weights of the lattice linearized about a homogeneous state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborWeights {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl NeighborWeights {
    pub fn on_lattice(&self, n: usize) -> Result<CirculantSpec, SpectraError> {
        CirculantSpec::new(self.a0, self.a1, self.a2, n)
    }
}

/// `(f0'(x*), f1'(x*), f2'(x*))`. Meaningful when `x*` is a homogeneous
/// equilibrium of `maps`.
pub fn linearize_at(maps: &MapTriple, x_star: f64) -> NeighborWeights {
    NeighborWeights {
        a0: maps.f0.derivative(x_star),
        a1: maps.f1.derivative(x_star),
        a2: maps.f2.derivative(x_star),
    }
}
