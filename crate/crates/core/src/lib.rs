//! Stability analysis and direct simulation of fractional-order coupled map
//! lattices.
//!
//! * [`fracops`]: power-law memory kernel, fractional sums and differences.
//! * [`spectra`]: eigenvalues of circulant, block-circulant and dense couplings.
//! * [`stability`]: the stability boundary, region geometry and verdicts.
//! * [`dynamics`]: linear and nonlinear lattice simulation, equilibria,
//!   linearization and parameter sweeps.

pub mod fracops;
pub mod spectra;
pub mod stability;
pub mod dynamics;

/// CSV rendering of a real: 17 significant digits, so every value parses
/// back to the same `f64`. Negative zero prints as zero.
pub fn format_real(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub use fracops::{FracError, FractionalOrder, KernelWeights};
pub use num_complex::Complex64;
pub use spectra::{
    BlockCirculantSpec, CirculantSpec, DenseMatrix, SpectraError, Spectrum, SpectrumSource,
};
pub use stability::{
    classify_spectrum, eigenvalue_in_region, real_interval, RealInterval, StabilityError,
    StabilityRegion, Status, Verdict,
};
pub use dynamics::{
    classify_trajectory, DynamicsError, EmpiricalVerdict, MapSpec, MapTriple, SystemSpec,
    Trajectory,
};
