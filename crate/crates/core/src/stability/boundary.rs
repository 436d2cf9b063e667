//! The stability boundary `β(t)` and its rescaled cardioids `γ_j`.
//!
//! Substituting `z = e^{it}` into the characteristic equation gives the image of
//! the unit circle under `z ↦ 1 + z (1 - z⁻¹)^α`. Eigenvalues strictly inside it
//! are stable.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use super::StabilityError;
use crate::fracops::FractionalOrder;
use crate::spectra::root_of_unity;

/// Minimum sample count for exported curves.
pub const MIN_SAMPLES: usize = 64;

/// Default resolution of the membership polygons.
pub const DEFAULT_SAMPLES: usize = 8192;

/// `β(t)` from its real closed form.
pub fn beta_point(alpha: FractionalOrder, t: f64) -> (f64, f64) {
    let a = alpha.value();
    let r = a.exp2() * (t / 2.0).sin().abs().powf(a);
    let phase = a * FRAC_PI_2 + t * (1.0 - a / 2.0);
    (r * phase.cos() + 1.0, r * phase.sin())
}

/// `e^{it} (1 - e^{-it})^α` on the principal branch; zero at `t = 0, 2π`.
pub fn cardioid_term(alpha: FractionalOrder, t: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, t);
    let base = Complex64::new(1.0, 0.0) - e.conj();
    if base.norm() == 0.0 || t == 0.0 || t == TAU {
        return Complex64::new(0.0, 0.0);
    }
    e * base.powf(alpha.value())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind {
    Beta,
    Gamma { j: usize, n: usize },
    GammaInfinity,
}

/// Closed curve sampled at `M + 1` uniformly spaced parameters on `[0, 2π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub alpha: FractionalOrder,
    pub kind: BoundaryKind,
    pub t: Vec<f64>,
    pub points: Vec<(f64, f64)>,
}

impl BoundaryCurve {
    pub fn samples(&self) -> usize {
        self.t.len() - 1
    }

    fn sample<F: Fn(f64) -> (f64, f64)>(
        alpha: FractionalOrder,
        kind: BoundaryKind,
        m: usize,
        f: F,
    ) -> Result<Self, StabilityError> {
        if m < MIN_SAMPLES {
            return Err(StabilityError::TooFewSamples(m));
        }
        let t: Vec<f64> = (0..=m).map(|k| TAU * k as f64 / m as f64).collect();
        let mut points = vec![(0.0, 0.0); m + 1];
        // upper half from the formula, lower half mirrored so the curve is
        // symmetric about the real axis bit for bit
        for k in 0..=m / 2 {
            points[k] = if k == 0 { (1.0, 0.0) } else { f(t[k]) };
            points[m - k] = (points[k].0, -points[k].1);
        }
        if m.is_multiple_of(2) {
            let lo = alpha.real_lower_bound();
            points[m / 2] = (lo, 0.0);
        }
        Ok(Self {
            alpha,
            kind,
            t,
            points,
        })
    }
}

/// `β` sampled at `M + 1` points (`M ≥ 64`), endpoints duplicated.
pub fn boundary_beta(alpha: FractionalOrder, m: usize) -> Result<BoundaryCurve, StabilityError> {
    BoundaryCurve::sample(alpha, BoundaryKind::Beta, m, |t| beta_point(alpha, t))
}

/// `γ_j` in the `(a1, a2)` plane: `β` with its imaginary part divided by
/// `2 sin(2πj/N)`. Needs `1 ≤ j ≤ ⌊N/2⌋` and `sin(2πj/N) ≠ 0`.
pub fn boundary_gamma(
    alpha: FractionalOrder,
    n: usize,
    j: usize,
    m: usize,
) -> Result<BoundaryCurve, StabilityError> {
    let scale = gamma_scale(n, j)?;
    BoundaryCurve::sample(alpha, BoundaryKind::Gamma { j, n }, m, |t| {
        let z = cardioid_term(alpha, t);
        (z.re + 1.0, z.im * scale)
    })
}

/// `γ_∞`: the limiting cardioid with `sin → 1`.
pub fn boundary_gamma_infinity(
    alpha: FractionalOrder,
    m: usize,
) -> Result<BoundaryCurve, StabilityError> {
    BoundaryCurve::sample(alpha, BoundaryKind::GammaInfinity, m, |t| {
        let z = cardioid_term(alpha, t);
        (z.re + 1.0, z.im * 0.5)
    })
}

/// `1 / (2 sin(2πj/N))`.
pub(crate) fn gamma_scale(n: usize, j: usize) -> Result<f64, StabilityError> {
    if n == 0 || j == 0 || j > n / 2 {
        return Err(StabilityError::GammaIndex { n, j });
    }
    let (_, s) = root_of_unity(j, n);
    if s == 0.0 {
        return Err(StabilityError::GammaIndex { n, j });
    }
    Ok(1.0 / (2.0 * s))
}

/// Parameter value where `β` crosses the vertical line `x = 1` away from the
/// cusp: the phase hits `π/2`.
pub fn unit_line_crossing(alpha: FractionalOrder) -> f64 {
    let a = alpha.value();
    PI * (1.0 - a) / (2.0 - a)
}

/// Upper half of a (possibly rescaled) `β` polyline, used for membership.
///
/// Parameters mix a uniform grid in `t` with a grid uniform in `t^α`; the
/// latter resolves the cusp at `(1, 0)`, where the curve leaves like `t^α`.
/// Because the region is symmetric about the real axis, a point `(x, y)` is
/// tested as `(x, |y|)` against this half only: a horizontal ray at `y > 0`
/// never meets the closing segment on the real axis or the mirrored half.
#[derive(Debug, Clone)]
pub struct HalfPolygon {
    lo: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
    y_max: f64,
    x_min: f64,
    x_max: f64,
}

/// Classification of a point against a [`HalfPolygon`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLocation {
    pub inside: bool,
    /// Distance to the sampled boundary.
    pub distance: f64,
}

impl PointLocation {
    /// Distance to the boundary, positive outside and negative inside.
    pub fn signed_distance(&self) -> f64 {
        if self.inside {
            -self.distance
        } else {
            self.distance
        }
    }
}

impl HalfPolygon {
    pub fn new(alpha: FractionalOrder, samples: usize, y_scale: f64) -> Self {
        let half = (samples / 2).max(MIN_SAMPLES / 2);
        let a = alpha.value();
        let mut ts: Vec<f64> = (0..=half)
            .flat_map(|k| {
                let u = k as f64 / half as f64;
                [PI * u, PI * u.powf(1.0 / a)]
            })
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|b, a| (*b - *a).abs() < 1e-15);

        let lo = alpha.real_lower_bound();
        let last = ts.len() - 1;
        let (mut xs, mut ys) = (Vec::with_capacity(ts.len()), Vec::with_capacity(ts.len()));
        for (k, &t) in ts.iter().enumerate() {
            let (x, y) = if k == 0 {
                (1.0, 0.0)
            } else if k == last {
                (lo, 0.0)
            } else {
                beta_point(alpha, t)
            };
            xs.push(x);
            ys.push(y * y_scale);
        }
        let y_max = ys.iter().copied().fold(0.0, f64::max);
        let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            lo,
            xs,
            ys,
            y_max,
            x_min,
            x_max,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.xs.len()
    }

    pub fn real_interval(&self) -> (f64, f64) {
        (self.lo, 1.0)
    }

    pub fn locate(&self, x: f64, y: f64) -> PointLocation {
        let y = y.abs();
        let mut inside = false;
        let mut best = f64::INFINITY;
        let on_axis = y == 0.0;
        let far_out = y > self.y_max || x < self.x_min || x > self.x_max;
        for k in 0..self.xs.len() - 1 {
            let (x0, y0, x1, y1) = (self.xs[k], self.ys[k], self.xs[k + 1], self.ys[k + 1]);
            if !on_axis && !far_out && ((y0 > y) != (y1 > y)) {
                let xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0);
                if x < xc {
                    inside = !inside;
                }
            }
            best = best.min(segment_distance_sq(x, y, x0, y0, x1, y1));
        }
        if on_axis {
            inside = x > self.lo && x < 1.0;
        }
        PointLocation {
            inside,
            distance: best.sqrt(),
        }
    }
}

fn segment_distance_sq(px: f64, py: f64, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let (dx, dy) = (x1 - x0, y1 - y0);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((px - x0) * dx + (py - y0) * dy) / len2).clamp(0.0, 1.0)
    };
    let (ex, ey) = (x0 + s * dx - px, y0 + s * dy - py);
    ex * ex + ey * ey
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn beta_landmarks() {
        for k in 1..=10 {
            let al = order(k as f64 / 10.0);
            let c = boundary_beta(al, 1024).unwrap();
            assert_eq!(c.points.len(), 1025);
            assert_eq!(c.points[0], (1.0, 0.0));
            assert_eq!(c.points[1024], (1.0, 0.0));
            let (x, y) = beta_point(al, PI);
            assert!((x - (1.0 - al.value().exp2())).abs() < 1e-12);
            assert!(y.abs() < 1e-12);
            assert_eq!(c.points[512], (al.real_lower_bound(), 0.0));
            for k in 0..=1024 {
                assert_eq!(c.points[k].1, -c.points[1024 - k].1);
            }
        }
    }

    #[test]
    fn beta_at_one_is_unit_circle() {
        let c = boundary_beta(order(1.0), 4096).unwrap();
        for (t, p) in c.t.iter().zip(&c.points) {
            assert!(((p.0 * p.0 + p.1 * p.1).sqrt() - 1.0).abs() < 1e-12);
            assert!((p.0 - t.cos()).abs() < 1e-12 && (p.1.abs() - t.sin().abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn real_and_complex_forms_agree() {
        for a in [0.1, 0.35, 0.5, 0.8, 1.0] {
            for k in 1..200 {
                let t = TAU * k as f64 / 200.0;
                let (x, y) = beta_point(order(a), t);
                let z = cardioid_term(order(a), t);
                assert!((x - (z.re + 1.0)).abs() < 1e-13, "a={a} t={t}");
                assert!((y - z.im).abs() < 1e-13, "a={a} t={t}");
            }
        }
    }

    #[test]
    fn gamma_scaling() {
        let al = order(0.6);
        let g = boundary_gamma(al, 8, 2, 512).unwrap();
        let b = boundary_beta(al, 512).unwrap();
        for (p, q) in g.points.iter().zip(&b.points) {
            assert!((p.0 - q.0).abs() < 1e-13);
            assert!((p.1 - q.1 / 2.0).abs() < 1e-13);
        }
        let inf = boundary_gamma_infinity(al, 512).unwrap();
        for (p, q) in g.points.iter().zip(&inf.points) {
            assert!((p.0 - q.0).abs() < 1e-15 && (p.1 - q.1).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_x_extent() {
        for a in [0.3, 0.7, 1.0] {
            let al = order(a);
            let g = boundary_gamma(al, 6, 1, 4096).unwrap();
            let xmin = g.points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let xmax = g.points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            assert!((xmin - al.real_lower_bound()).abs() < 1e-12);
            assert!(xmax >= 1.0);
            if a == 1.0 {
                assert!((xmax - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gamma_rejects_degenerate_index() {
        let al = order(0.5);
        assert!(boundary_gamma(al, 6, 3, 128).is_err());
        assert!(boundary_gamma(al, 6, 0, 128).is_err());
        assert!(boundary_gamma(al, 2, 1, 128).is_err());
        assert!(boundary_gamma(al, 6, 4, 128).is_err());
        assert!(boundary_beta(al, 63).is_err());
    }

    #[test]
    fn unit_line_crossing_is_on_line() {
        for a in [0.2, 0.5, 0.9] {
            let (x, y) = beta_point(order(a), unit_line_crossing(order(a)));
            assert!((x - 1.0).abs() < 1e-14);
            assert!(y > 0.0);
        }
    }

    #[test]
    fn half_polygon_basic_points() {
        let poly = HalfPolygon::new(order(0.4), 4096, 1.0);
        assert!(poly.locate(0.0, 0.0).inside);
        assert!(poly.locate(0.0, 0.1).inside);
        assert!(poly.locate(0.0, -0.1).inside);
        assert!(!poly.locate(-0.65, 0.0866025).inside);
        assert!(!poly.locate(1.2, 0.0).inside);
        assert!(!poly.locate(0.0, 5.0).inside);
        let lo = order(0.4).real_lower_bound();
        assert!(poly.locate(lo + 1e-3, 0.0).inside);
        assert!(!poly.locate(lo - 1e-3, 0.0).inside);
        assert!(poly.locate(1.0, 0.0).distance == 0.0);
    }

    #[test]
    fn cusp_is_resolved_at_small_alpha() {
        // just right of the cusp along the outgoing tangent direction e^{iαπ/2},
        // slightly rotated inward: inside
        let al = order(0.1);
        let poly = HalfPolygon::new(al, 8192, 1.0);
        let r = 1e-4;
        let ang = al.value() * FRAC_PI_2 + 0.3;
        assert!(poly.locate(1.0 + r * ang.cos(), r * ang.sin()).inside);
        let ang = al.value() * FRAC_PI_2 - 0.05;
        assert!(!poly.locate(1.0 + r * ang.cos(), r * ang.sin()).inside);
    }
}
