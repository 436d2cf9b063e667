//! Exact stable regions in the coupling plane for the two structured lattices.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::{self, gamma_scale, HalfPolygon, DEFAULT_SAMPLES};
use super::{real_interval, RealInterval, StabilityError, Verdict, DEFAULT_BAND};
use crate::fracops::FractionalOrder;
use crate::spectra::root_of_unity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd(usize),
}

/// Stable region of the symmetric lattice in the `(a2, a1)` plane.
///
/// Vertices run counter-clockwise: `Q1` top, `Q2` left, `Q3` bottom, `Q4` right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrilateral {
    pub q1: (f64, f64),
    pub q2: (f64, f64),
    pub q3: (f64, f64),
    pub q4: (f64, f64),
    pub parity: Parity,
}

impl Quadrilateral {
    fn new(alpha: FractionalOrder, parity: Parity) -> Self {
        let a = alpha.value();
        let lo = alpha.real_lower_bound();
        let (q2, q4) = match parity {
            Parity::Even => (
                (-(a - 2.0).exp2(), (a - 1.0).exp2() + lo),
                ((a - 2.0).exp2(), 1.0 - (a - 1.0).exp2()),
            ),
            Parity::Odd(n) => {
                let d = 1.0 + (PI / n as f64).cos();
                (
                    (-(a - 1.0).exp2() / d, a.exp2() / d + lo),
                    ((a - 1.0).exp2() / d, 1.0 - a.exp2() / d),
                )
            }
        };
        Self {
            q1: (0.0, 1.0),
            q2,
            q3: (0.0, lo),
            q4,
            parity,
        }
    }

    pub fn vertices(&self) -> [(f64, f64); 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }

    pub fn labels(&self) -> [&'static str; 4] {
        match self.parity {
            Parity::Even => ["Q1", "Q2", "Q3", "Q4"],
            Parity::Odd(_) => ["Q1", "Q2'", "Q3", "Q4'"],
        }
    }

    /// Strict interior test on the vertex polygon.
    pub fn contains(&self, a2: f64, a1: f64) -> bool {
        let v = self.vertices();
        (0..4).all(|k| {
            let (x0, y0) = v[k];
            let (x1, y1) = v[(k + 1) % 4];
            (x1 - x0) * (a1 - y0) - (y1 - y0) * (a2 - x0) > 0.0
        })
    }

    pub fn area(&self) -> f64 {
        let v = self.vertices();
        0.5 * (0..4)
            .map(|k| {
                let (x0, y0) = v[k];
                let (x1, y1) = v[(k + 1) % 4];
                x0 * y1 - x1 * y0
            })
            .sum::<f64>()
    }
}

/// Symmetric coupling `a0 = a2`: the intersection of the strips
/// `1 - 2^α < a1 + 2 a2 cos(2πj/N) < 1`, `j = 0..=⌊N/2⌋`.
#[derive(Debug, Clone)]
pub struct SymmetricRegion {
    alpha: FractionalOrder,
    n: Option<usize>,
    cosines: Vec<f64>,
    interval: RealInterval,
    quad: Quadrilateral,
    band: f64,
}

impl SymmetricRegion {
    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    /// `None` in the thermodynamic limit.
    pub fn lattice_size(&self) -> Option<usize> {
        self.n
    }

    pub fn quadrilateral(&self) -> &Quadrilateral {
        &self.quad
    }

    pub fn with_band(mut self, band: f64) -> Self {
        self.band = band;
        self
    }

    /// Exact verdict from the strip inequalities; the witness is the most
    /// violating eigenvalue `a1 + 2 a2 cos(2πj/N)`.
    pub fn classify(&self, a2: f64, a1: f64) -> Verdict {
        let mut worst = (f64::NEG_INFINITY, 0.0);
        for &c in &self.cosines {
            let lambda = a1 + 2.0 * a2 * c;
            let m = self.interval.signed_distance(lambda);
            if m > worst.0 {
                worst = (m, lambda);
            }
        }
        Verdict::from_margin(worst.0 < 0.0, worst.0, self.band, Complex64::new(worst.1, 0.0))
    }
}

pub fn symmetric_region(alpha: FractionalOrder, n: usize) -> Result<SymmetricRegion, StabilityError> {
    match n {
        0 => Err(StabilityError::EmptyLattice),
        1 => Err(StabilityError::SingleSite),
        _ => {
            let parity = if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd(n) };
            Ok(SymmetricRegion {
                alpha,
                n: Some(n),
                cosines: (0..=n / 2).map(|j| root_of_unity(j, n).0).collect(),
                interval: real_interval(alpha),
                quad: Quadrilateral::new(alpha, parity),
                band: DEFAULT_BAND,
            })
        }
    }
}

/// Index `j*` of the innermost cardioid: `⌊N/4⌋` for even `N`,
/// `⌈(N-1)/4⌉` for odd `N`.
pub fn innermost_cardioid_index(n: usize) -> Result<usize, StabilityError> {
    if n <= 2 {
        return Err(StabilityError::NoCardioid(n));
    }
    let j = if n.is_multiple_of(2) { n / 4 } else { (n - 1).div_ceil(4) };
    debug_assert_eq!(Some(j), innermost_cardioid_index_brute_force(n));
    Ok(j)
}

/// First minimiser of `|4j - N|` over `j = 1..=⌊N/2⌋`.
pub fn innermost_cardioid_index_brute_force(n: usize) -> Option<usize> {
    (1..=n / 2).min_by_key(|&j| (4 * j).abs_diff(n))
}

/// Antisymmetric coupling `a0 = -a2`, in the `(a1, a2)` plane: the strip
/// `1 - 2^α < a1 < 1` intersected with the interior of the innermost cardioid.
#[derive(Debug, Clone)]
pub struct AsymmetricRegion {
    alpha: FractionalOrder,
    n: Option<usize>,
    j: Option<usize>,
    interval: RealInterval,
    cardioid: Option<(HalfPolygon, f64)>,
    band: f64,
}

impl AsymmetricRegion {
    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn lattice_size(&self) -> Option<usize> {
        self.n
    }

    /// Index of the bounding cardioid; `None` for `N ≤ 2` and in the limit.
    pub fn cardioid_index(&self) -> Option<usize> {
        self.j
    }

    pub fn has_cardioid(&self) -> bool {
        self.cardioid.is_some()
    }

    pub fn interval(&self) -> RealInterval {
        self.interval
    }

    pub fn with_band(mut self, band: f64) -> Self {
        self.band = band;
        self
    }

    /// Sampled bounding cardioid, `None` when only the interval applies.
    pub fn boundary(&self, samples: usize) -> Option<Result<boundary::BoundaryCurve, StabilityError>> {
        match (self.n, self.j) {
            (Some(n), Some(j)) => Some(boundary::boundary_gamma(self.alpha, n, j, samples)),
            (None, _) => Some(boundary::boundary_gamma_infinity(self.alpha, samples)),
            _ => None,
        }
    }

    /// Endpoints of the part of the line `a1 = 1` that closes the region.
    pub fn line_segment(&self) -> Option<((f64, f64), (f64, f64))> {
        let (_, scale) = self.cardioid.as_ref()?;
        let (_, y) = boundary::beta_point(self.alpha, boundary::unit_line_crossing(self.alpha));
        Some(((1.0, -y * scale), (1.0, y * scale)))
    }

    pub fn classify(&self, a1: f64, a2: f64) -> Verdict {
        let m0 = self.interval.signed_distance(a1);
        let in0 = self.interval.contains(a1);
        let Some((poly, scale)) = &self.cardioid else {
            return Verdict::from_margin(in0, m0, self.band, Complex64::new(a1, 0.0));
        };
        let loc = poly.locate(a1, a2);
        let mc = loc.signed_distance();
        let witness = if mc > m0 {
            Complex64::new(a1, a2 / scale)
        } else {
            Complex64::new(a1, 0.0)
        };
        Verdict::from_margin(in0 && loc.inside, m0.max(mc), self.band, witness)
    }
}

fn asymmetric_with(
    alpha: FractionalOrder,
    n: Option<usize>,
    samples: usize,
) -> Result<AsymmetricRegion, StabilityError> {
    let (j, cardioid) = match n {
        Some(0) => return Err(StabilityError::EmptyLattice),
        Some(1 | 2) => (None, None),
        Some(n) => {
            let j = innermost_cardioid_index(n)?;
            let scale = gamma_scale(n, j)?;
            (Some(j), Some((HalfPolygon::new(alpha, samples, scale), scale)))
        }
        None => (None, Some((HalfPolygon::new(alpha, samples, 0.5), 0.5))),
    };
    Ok(AsymmetricRegion {
        alpha,
        n,
        j,
        interval: real_interval(alpha),
        cardioid,
        band: DEFAULT_BAND,
    })
}

pub fn asymmetric_region(alpha: FractionalOrder, n: usize) -> Result<AsymmetricRegion, StabilityError> {
    asymmetric_with(alpha, Some(n), DEFAULT_SAMPLES)
}

impl AsymmetricRegion {
    pub fn with_samples(alpha: FractionalOrder, n: usize, samples: usize) -> Result<Self, StabilityError> {
        asymmetric_with(alpha, Some(n), samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThermoMode {
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone)]
pub enum ThermoRegion {
    Symmetric(SymmetricRegion),
    Asymmetric(AsymmetricRegion),
}

/// Stable region as `N → ∞`: the even-`N` quadrilateral, or the strip
/// `a1 < 1` with the cardioid `γ_∞`.
pub fn thermodynamic_region(alpha: FractionalOrder, mode: ThermoMode) -> ThermoRegion {
    match mode {
        ThermoMode::Symmetric => ThermoRegion::Symmetric(SymmetricRegion {
            alpha,
            n: None,
            cosines: vec![1.0, -1.0],
            interval: real_interval(alpha),
            quad: Quadrilateral::new(alpha, Parity::Even),
            band: DEFAULT_BAND,
        }),
        ThermoMode::Asymmetric => ThermoRegion::Asymmetric(
            asymmetric_with(alpha, None, DEFAULT_SAMPLES).expect("limit region always exists"),
        ),
    }
}
