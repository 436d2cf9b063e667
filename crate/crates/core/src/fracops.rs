//! Discrete fractional calculus primitives.
//!
//! Everything here works on the integer grid `n = 0, 1, 2, ...` with unit step.
//! The power-law memory kernel
//!
//! ```text
//! w[n] = Γ(n + α) / (Γ(α) Γ(n + 1))
//! ```
//!
//! is tabulated once by the multiplicative recurrence `w[n+1] = w[n] (n + α) / (n + 1)`,
//! so no Gamma function is ever evaluated and arbitrarily long horizons stay finite.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("fractional order must satisfy 0 < alpha <= 1, got {0}")]
    InvalidOrder(f64),
    #[error("kernel length must be at least 1")]
    EmptyKernel,
    #[error("binomial family is undefined at n = 0")]
    PhiAtZero,
    #[error("index {index} out of range for signal of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("the Caputo-like difference needs alpha < 1; use the plain forward difference at alpha = 1")]
    IntegerOrder,
    #[error("{have} kernel weights precomputed but {need} are required")]
    InsufficientWeights { have: usize, need: usize },
    #[error("history state {index} has dimension {got}, expected {expected}")]
    RaggedHistory {
        index: usize,
        got: usize,
        expected: usize,
    },
}

/// Fractional order `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self, FracError> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(FracError::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - 2^α`, the left end of the real stability interval.
    #[inline]
    pub fn real_lower_bound(self) -> f64 {
        1.0 - self.0.exp2()
    }
}

impl fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = FracError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

/// Tabulated power-law memory weights `w[0..len]`.
///
/// `w[n]` equals the binomial family value `φ̃_α(n + 1)`. The table is immutable
/// after construction and can be shared freely between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWeights {
    alpha: FractionalOrder,
    w: Vec<f64>,
}

impl KernelWeights {
    pub fn new(alpha: FractionalOrder, len: usize) -> Result<Self, FracError> {
        if len == 0 {
            return Err(FracError::EmptyKernel);
        }
        let a = alpha.value();
        let mut w = Vec::with_capacity(len);
        let mut cur = 1.0;
        w.push(cur);
        for n in 0..len - 1 {
            let nf = n as f64;
            cur *= (nf + a) / (nf + 1.0);
            w.push(cur);
        }
        Ok(Self { alpha, w })
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.w.get(n).copied()
    }

    fn require(&self, need: usize) -> Result<(), FracError> {
        if self.w.len() < need {
            Err(FracError::InsufficientWeights {
                have: self.w.len(),
                need,
            })
        } else {
            Ok(())
        }
    }
}

impl std::ops::Index<usize> for KernelWeights {
    type Output = f64;

    fn index(&self, n: usize) -> &f64 {
        &self.w[n]
    }
}

/// Tabulates `w[0..length]`. See [`KernelWeights`].
pub fn kernel_weights(alpha: FractionalOrder, length: usize) -> Result<KernelWeights, FracError> {
    KernelWeights::new(alpha, length)
}

/// The binomial family `φ̃_α(n) = Γ(n + α - 1) / (Γ(α) Γ(n))` for `n ≥ 1`.
pub fn binomial_phi(alpha: FractionalOrder, n: usize) -> Result<f64, FracError> {
    if n == 0 {
        return Err(FracError::PhiAtZero);
    }
    let a = alpha.value();
    Ok((0..n - 1).fold(1.0, |acc, k| {
        let kf = k as f64;
        acc * ((kf + a) / (kf + 1.0))
    }))
}

/// Fractional sum of order `α` of `x`, evaluated at integer index `n`:
/// `Σ_{s=0}^{n} w[n - s] x(s)`.
pub fn fractional_sum(alpha: FractionalOrder, x: &[f64], n: usize) -> Result<f64, FracError> {
    if n >= x.len() {
        return Err(FracError::OutOfRange {
            index: n,
            len: x.len(),
        });
    }
    let w = KernelWeights::new(alpha, n + 1)?;
    Ok(weighted_tail(w.as_slice(), &x[..=n]))
}

// Σ_s w[n - s] x[s] with n = x.len() - 1.
#[inline]
fn weighted_tail(w: &[f64], x: &[f64]) -> f64 {
    x.iter().zip(w[..x.len()].iter().rev()).map(|(xs, ws)| xs * ws).sum()
}

/// Caputo-like difference of order `α ∈ (0, 1)` at index `n`: the order `1 - α`
/// fractional sum of the forward difference of `x`.
pub fn caputo_difference(alpha: FractionalOrder, x: &[f64], n: usize) -> Result<f64, FracError> {
    if alpha.value() >= 1.0 {
        return Err(FracError::IntegerOrder);
    }
    if n + 1 >= x.len() {
        return Err(FracError::OutOfRange {
            index: n + 1,
            len: x.len(),
        });
    }
    let diff: Vec<f64> = x[..=n + 1].windows(2).map(|p| p[1] - p[0]).collect();
    let complement = FractionalOrder::new(1.0 - alpha.value())?;
    fractional_sum(complement, &diff, n)
}

/// Memory convolution `Σ_{j=0}^{t} w[t - j] X_j`, componentwise.
///
/// Costs `O((t + 1) N)`; a full run over `T` steps is therefore `O(T² N)`.
pub fn memory_convolution<S: AsRef<[f64]>>(
    weights: &KernelWeights,
    history: &[S],
    t: usize,
) -> Result<Vec<f64>, FracError> {
    if t >= history.len() {
        return Err(FracError::OutOfRange {
            index: t,
            len: history.len(),
        });
    }
    weights.require(t + 1)?;
    let dim = history[0].as_ref().len();
    let mut out = vec![0.0; dim];
    for (j, state) in history[..=t].iter().enumerate() {
        let state = state.as_ref();
        if state.len() != dim {
            return Err(FracError::RaggedHistory {
                index: j,
                got: state.len(),
                expected: dim,
            });
        }
        let wj = weights[t - j];
        for (o, x) in out.iter_mut().zip(state) {
            *o += wj * x;
        }
    }
    Ok(out)
}

/// Flat-storage variant used by the simulators: `history` holds at least
/// `(t + 1) * dim` values, state `j` at `history[j * dim..(j + 1) * dim]`.
/// The result overwrites `out`.
pub fn memory_convolution_flat(
    weights: &KernelWeights,
    history: &[f64],
    dim: usize,
    t: usize,
    out: &mut [f64],
) -> Result<(), FracError> {
    let need = (t + 1) * dim;
    if history.len() < need {
        return Err(FracError::OutOfRange {
            index: t,
            len: history.len() / dim.max(1),
        });
    }
    weights.require(t + 1)?;
    debug_assert_eq!(out.len(), dim);
    out.fill(0.0);
    let w = weights.as_slice();
    for (j, state) in history[..need].chunks_exact(dim).enumerate() {
        let wj = w[t - j];
        for (o, x) in out.iter_mut().zip(state) {
            *o += wj * x;
        }
    }
    Ok(())
}

/// Orbit of the scalar fractional map `x(t) = x0 + Σ_{j<t} φ̃_α(t - j) f(x(j))`,
/// for `t = 0..=horizon`.
pub fn scalar_orbit<F: Fn(f64) -> f64>(
    alpha: FractionalOrder,
    x0: f64,
    f: F,
    horizon: usize,
) -> Vec<f64> {
    let w = KernelWeights::new(alpha, horizon.max(1)).expect("non-empty kernel");
    let mut xs = Vec::with_capacity(horizon + 1);
    let mut fx = Vec::with_capacity(horizon);
    xs.push(x0);
    for t in 1..=horizon {
        fx.push(f(xs[t - 1]));
        xs.push(x0 + weighted_tail(w.as_slice(), &fx));
    }
    xs
}
