//! Stability verdicts for synchronized fixed points.
//!
//! An eigenvalue `λ` of the connectivity matrix is stable when it lies strictly
//! inside the closed boundary curve `β` (see [`boundary`]). Real eigenvalues
//! reduce to the open interval `(1 - 2^α, 1)`. Points within a small band of the
//! boundary are reported as [`Status::Marginal`], never as stable.
//!
//! The structured couplings get exact regions in the coupling plane:
//! a quadrilateral for `a0 = a2` and the innermost cardioid for `a0 = -a2`
//! (see [`regions`]).

pub mod boundary;
pub mod regions;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fracops::FractionalOrder;
use crate::spectra::Spectrum;

pub use boundary::{
    boundary_beta, boundary_gamma, boundary_gamma_infinity, BoundaryCurve, BoundaryKind,
    HalfPolygon, DEFAULT_SAMPLES,
};
pub use regions::{
    asymmetric_region, innermost_cardioid_index, innermost_cardioid_index_brute_force,
    symmetric_region, thermodynamic_region, AsymmetricRegion, Parity, Quadrilateral,
    SymmetricRegion, ThermoMode, ThermoRegion,
};

/// Half-width of the band around the boundary reported as marginal.
pub const DEFAULT_BAND: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilityError {
    #[error("boundary needs at least 64 samples, got {0}")]
    TooFewSamples(usize),
    #[error("cardioid index j = {j} is not usable for N = {n}: need 1 <= j <= N/2 and sin(2πj/N) != 0; use the real interval instead")]
    GammaIndex { n: usize, j: usize },
    #[error("the symmetric quadrilateral needs N >= 2; for N = 1 test a0 + a1 + a2 against the real interval")]
    SingleSite,
    #[error("no cardioid applies for N = {0} <= 2")]
    NoCardioid(usize),
    #[error("lattice size must be at least 1")]
    EmptyLattice,
    #[error("cannot classify an empty spectrum")]
    EmptySpectrum,
}

/// The real stability interval `(1 - 2^α, 1)`, open at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RealInterval {
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Distance to the nearer end, positive outside.
    pub fn signed_distance(&self, x: f64) -> f64 {
        (self.lo - x).max(x - self.hi)
    }
}

pub fn real_interval(alpha: FractionalOrder) -> RealInterval {
    RealInterval {
        lo: alpha.real_lower_bound(),
        hi: 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Stable,
    Unstable,
    Marginal,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Stable => "stable",
            Status::Unstable => "unstable",
            Status::Marginal => "marginal",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a stability test.
///
/// `margin` is the distance to the boundary, positive outside the stable
/// region and negative inside. It is informational only; classification uses
/// the membership test and the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Complex64>,
    pub margin: f64,
}

impl Verdict {
    pub(crate) fn from_margin(inside: bool, margin: f64, band: f64, subject: Complex64) -> Self {
        let status = if margin.abs() < band {
            Status::Marginal
        } else if inside {
            Status::Stable
        } else {
            Status::Unstable
        };
        Verdict {
            status,
            witness: (status != Status::Stable).then_some(subject),
            margin,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.status == Status::Stable
    }
}

/// Membership test for the region bounded by `β`, in the eigenvalue plane.
///
/// Build once per `α` and reuse; each query is linear in the sample count.
#[derive(Debug, Clone)]
pub struct StabilityRegion {
    alpha: FractionalOrder,
    interval: RealInterval,
    polygon: HalfPolygon,
    band: f64,
}

impl StabilityRegion {
    pub fn new(alpha: FractionalOrder) -> Self {
        Self::with_samples(alpha, DEFAULT_SAMPLES)
    }

    pub fn with_samples(alpha: FractionalOrder, samples: usize) -> Self {
        Self {
            alpha,
            interval: real_interval(alpha),
            polygon: HalfPolygon::new(alpha, samples, 1.0),
            band: DEFAULT_BAND,
        }
    }

    pub fn with_band(mut self, band: f64) -> Self {
        self.band = band;
        self
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn band(&self) -> f64 {
        self.band
    }

    pub fn classify(&self, lambda: Complex64) -> Verdict {
        if lambda.im == 0.0 {
            let m = self.interval.signed_distance(lambda.re);
            return Verdict::from_margin(self.interval.contains(lambda.re), m, self.band, lambda);
        }
        let loc = self.polygon.locate(lambda.re, lambda.im);
        Verdict::from_margin(loc.inside, loc.signed_distance(), self.band, lambda)
    }

    /// Stable iff every eigenvalue is stable. Otherwise the witness is the
    /// eigenvalue with the largest margin, ties going to the larger imaginary
    /// part.
    pub fn classify_spectrum(&self, spectrum: &Spectrum) -> Result<Verdict, StabilityError> {
        self.classify_all(spectrum.eigenvalues())
    }

    pub fn classify_all(&self, eigenvalues: &[Complex64]) -> Result<Verdict, StabilityError> {
        if eigenvalues.is_empty() {
            return Err(StabilityError::EmptySpectrum);
        }
        let mut worst: Option<Verdict> = None;
        let mut status = Status::Stable;
        for &z in eigenvalues {
            let v = self.classify(z);
            status = match (status, v.status) {
                (Status::Unstable, _) | (_, Status::Unstable) => Status::Unstable,
                (Status::Marginal, _) | (_, Status::Marginal) => Status::Marginal,
                _ => Status::Stable,
            };
            let replace = match worst {
                None => true,
                Some(w) => {
                    v.margin > w.margin
                        || (v.margin == w.margin && z.im > w.witness.map_or(f64::NEG_INFINITY, |p| p.im))
                }
            };
            if replace {
                worst = Some(Verdict {
                    witness: Some(z),
                    ..v
                });
            }
        }
        let worst = worst.expect("non-empty");
        Ok(Verdict {
            status,
            witness: (status != Status::Stable).then_some(worst.witness.expect("set")),
            margin: worst.margin,
        })
    }
}

/// Verdict for a single eigenvalue, at the default resolution and band.
pub fn eigenvalue_in_region(lambda: Complex64, alpha: FractionalOrder) -> Verdict {
    StabilityRegion::new(alpha).classify(lambda)
}

/// Verdict for a whole spectrum, at the default resolution and band.
pub fn classify_spectrum(spectrum: &Spectrum, alpha: FractionalOrder) -> Result<Verdict, StabilityError> {
    StabilityRegion::new(alpha).classify_spectrum(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{circulant_eigenvalues, CirculantSpec, SpectrumSource};

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn interval_values() {
        let r = real_interval(order(1.0));
        assert_eq!((r.lo, r.hi), (-1.0, 1.0));
        let r = real_interval(order(0.4));
        assert!((r.lo + 0.319508).abs() < 1e-6);
        let r = real_interval(order(1e-12));
        assert!(r.lo.abs() < 1e-11 && r.lo < 0.0);
        assert!(!r.contains(1.0) && !r.contains(r.lo));
    }

    #[test]
    fn single_eigenvalues() {
        assert!(eigenvalue_in_region(Complex64::new(0.0, 0.0), order(0.3)).is_stable());
        let v = eigenvalue_in_region(Complex64::new(-0.65, 0.0866025), order(0.4));
        assert_eq!(v.status, Status::Unstable);
        assert!(v.margin > 0.0);
        let v = eigenvalue_in_region(Complex64::new(-0.45, 0.0866), order(0.8));
        assert_eq!(v.status, Status::Stable);
        assert!(v.margin < 0.0);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn boundary_points_are_marginal() {
        let region = StabilityRegion::new(order(0.5));
        assert_eq!(region.classify(Complex64::new(1.0, 0.0)).status, Status::Marginal);
        let lo = order(0.5).real_lower_bound();
        assert_eq!(region.classify(Complex64::new(lo, 0.0)).status, Status::Marginal);
        let (x, y) = boundary::beta_point(order(0.5), 2.0);
        assert_eq!(region.classify(Complex64::new(x, y)).status, Status::Marginal);
    }

    #[test]
    fn three_site_verdicts() {
        let s = circulant_eigenvalues(&CirculantSpec::new(0.2, -0.5, 0.1, 3).unwrap());
        let v = classify_spectrum(&s, order(0.4)).unwrap();
        assert_eq!(v.status, Status::Unstable);
        let w = v.witness.unwrap();
        assert!((w - Complex64::new(-0.65, 0.0866025)).norm() < 1e-6);

        let s = circulant_eigenvalues(&CirculantSpec::new(0.2, -0.3, 0.1, 3).unwrap());
        assert_eq!(classify_spectrum(&s, order(0.8)).unwrap().status, Status::Stable);
    }

    #[test]
    fn decoupled_lattice() {
        let al = order(0.6);
        let lo = al.real_lower_bound();
        for (a1, want) in [(0.5, Status::Stable), (lo + 0.01, Status::Stable), (1.01, Status::Unstable), (lo - 0.01, Status::Unstable)] {
            let s = Spectrum::new(vec![Complex64::new(a1, 0.0); 5], SpectrumSource::AnalyticCirculant);
            assert_eq!(classify_spectrum(&s, al).unwrap().status, want, "a1={a1}");
        }
        let empty = Spectrum::new(vec![], SpectrumSource::NumericDense);
        assert_eq!(classify_spectrum(&empty, al), Err(StabilityError::EmptySpectrum));
    }
}
