//! Eigenvalues of lattice connectivity matrices.
//!
//! Circulant and block-circulant couplings have closed-form spectra built from
//! roots of unity. Anything else goes through the dense nonsymmetric solver in
//! [`dense`].

mod dense;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dense::{dense_eigenvalues, DEFAULT_DENSE_TOL, MAX_DENSE_DIM};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("lattice size must be at least 1")]
    EmptyLattice,
    #[error("matrix is not square: row {row} has {got} entries, expected {expected}")]
    NotSquare {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix dimension {0} exceeds the dense solver cap of {MAX_DENSE_DIM}")]
    TooLarge(usize),
    #[error("QR iteration did not converge after {iterations} iterations ({found} of {dim} eigenvalues found)")]
    NoConvergence {
        iterations: usize,
        found: usize,
        dim: usize,
    },
}

/// `cos` and `sin` of `2π l / n`, exact at multiples of a quarter turn.
pub(crate) fn root_of_unity(l: usize, n: usize) -> (f64, f64) {
    let l = l % n;
    if (4 * l).is_multiple_of(n) {
        return match 4 * l / n {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    let theta = TAU * l as f64 / n as f64;
    (theta.cos(), theta.sin())
}

/// One-dimensional nearest-neighbour coupling with periodic boundaries:
/// `A[i][i] = a1`, `A[i][i+1] = a2`, `A[i][i-1] = a0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirculantSpec {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub n: usize,
}

impl CirculantSpec {
    pub fn new(a0: f64, a1: f64, a2: f64, n: usize) -> Result<Self, SpectraError> {
        if n == 0 {
            return Err(SpectraError::EmptyLattice);
        }
        Ok(Self { a0, a1, a2, n })
    }

    /// Dense form. Neighbour weights accumulate, so `N = 1` gives `[a0 + a1 + a2]`
    /// and `N = 2` puts `a0 + a2` off the diagonal.
    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n;
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += self.a1;
            row[(i + 1) % n] += self.a2;
            row[(i + n - 1) % n] += self.a0;
        }
        DenseMatrix { rows: m }
    }

    /// `(A x)_k = a0 x_{k-1} + a1 x_k + a2 x_{k+1}` with periodic indices.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        debug_assert_eq!(n, self.n);
        for k in 0..n {
            out[k] = self.a0 * x[(k + n - 1) % n] + self.a1 * x[k] + self.a2 * x[(k + 1) % n];
        }
    }
}

/// Two-dimensional `N × M` lattice: `a0` couples along the first axis, `a2`
/// along the second, `a1` is the self weight. Site `(i, j)` has index `i * M + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockCirculantSpec {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub n: usize,
    pub m: usize,
}

impl BlockCirculantSpec {
    pub fn new(a0: f64, a1: f64, a2: f64, n: usize, m: usize) -> Result<Self, SpectraError> {
        if n == 0 || m == 0 {
            return Err(SpectraError::EmptyLattice);
        }
        Ok(Self { a0, a1, a2, n, m })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let (n, m) = (self.n, self.m);
        let dim = n * m;
        let mut a = vec![vec![0.0; dim]; dim];
        for i in 0..n {
            for j in 0..m {
                let row = &mut a[i * m + j];
                row[i * m + j] += self.a1;
                row[((i + 1) % n) * m + j] += self.a0;
                row[((i + n - 1) % n) * m + j] += self.a0;
                row[i * m + (j + 1) % m] += self.a2;
                row[i * m + (j + m - 1) % m] += self.a2;
            }
        }
        DenseMatrix { rows: a }
    }
}

/// Square matrix of finite reals, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: Vec<Vec<f64>>,
}

impl DenseMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, SpectraError> {
        let n = rows.len();
        if n == 0 {
            return Err(SpectraError::EmptyMatrix);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(SpectraError::NotSquare {
                    row: i,
                    got: r.len(),
                    expected: n,
                });
            }
            if let Some(j) = r.iter().position(|v| !v.is_finite()) {
                return Err(SpectraError::NonFinite { row: i, col: j });
            }
        }
        Ok(Self { rows })
    }

    pub fn diagonal(d: &[f64]) -> Result<Self, SpectraError> {
        let n = d.len();
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0.0; n];
                r[i] = d[i];
                r
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn trace(&self) -> f64 {
        self.rows.iter().enumerate().map(|(i, r)| r[i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.rows.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    AnalyticCirculant,
    AnalyticBlock,
    NumericDense,
}

/// Multiset of eigenvalues, in the order the producer generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    source: SpectrumSource,
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<Complex64>, source: SpectrumSource) -> Self {
        Self {
            eigenvalues,
            source,
        }
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> Complex64 {
        self.eigenvalues.iter().sum()
    }

    /// Eigenvalues sorted by real part, then imaginary part.
    pub fn canonical(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(lex_cmp);
        v
    }

    /// Whether every eigenvalue has a partner within `tol` of its conjugate.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        let conj = Spectrum::new(
            self.eigenvalues.iter().map(|z| z.conj()).collect(),
            self.source,
        );
        multiset_distance(self.eigenvalues(), conj.eigenvalues()) <= tol
    }
}

pub(crate) fn lex_cmp(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Greedy nearest-pair matching distance between two multisets: the largest
/// gap among matched pairs, or `+∞` when the sizes differ.
///
/// Elements of `a` are matched in canonical order; ties go to the
/// lexicographically first candidate in `b`.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(lex_cmp);
    b.sort_by(lex_cmp);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in &a {
        let mut best: Option<(usize, f64)> = None;
        for (k, w) in b.iter().enumerate() {
            if used[k] {
                continue;
            }
            let d = (z - w).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        let (k, d) = best.expect("equal sizes");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// `λ_l = a1 + a2 ω^l + a0 ω^{-l}`, `ω = e^{2πi/N}`.
///
/// Pairs `l` and `N - l` are exact conjugates.
pub fn circulant_eigenvalues(spec: &CirculantSpec) -> Spectrum {
    let n = spec.n;
    let mut ev = vec![Complex64::new(0.0, 0.0); n];
    for l in 0..=n / 2 {
        let (c, s) = root_of_unity(l, n);
        let z = Complex64::new(spec.a1 + (spec.a2 + spec.a0) * c, (spec.a2 - spec.a0) * s);
        ev[l] = z;
        if l != 0 {
            ev[n - l] = z.conj();
        }
    }
    Spectrum::new(ev, SpectrumSource::AnalyticCirculant)
}

/// Real spectrum of the symmetric lattice `a0 = a2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSpectrum {
    /// `a1 + 2 a2 cos(2πj/N)` for `j = 0..N`.
    pub values: Vec<f64>,
    /// The distinct indices `j = 0..=⌊N/2⌋`.
    pub distinct: Vec<usize>,
}

impl SymmetricSpectrum {
    pub fn to_spectrum(&self) -> Spectrum {
        Spectrum::new(
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            SpectrumSource::AnalyticCirculant,
        )
    }
}

pub fn symmetric_eigenvalues(a1: f64, a2: f64, n: usize) -> Result<SymmetricSpectrum, SpectraError> {
    if n == 0 {
        return Err(SpectraError::EmptyLattice);
    }
    let mut values = vec![0.0; n];
    for j in 0..=n / 2 {
        let (c, _) = root_of_unity(j, n);
        values[j] = a1 + 2.0 * a2 * c;
        values[(n - j) % n] = values[j];
    }
    Ok(SymmetricSpectrum {
        values,
        distinct: (0..=n / 2).collect(),
    })
}

/// Spectrum of the antisymmetric-coupling lattice `a0 = -a2`:
/// `a1 + 2i a2 sin(2πj/N)`.
pub fn asymmetric_eigenvalues(a1: f64, a2: f64, n: usize) -> Result<Spectrum, SpectraError> {
    if n == 0 {
        return Err(SpectraError::EmptyLattice);
    }
    let mut ev = vec![Complex64::new(a1, 0.0); n];
    for j in 1..=n / 2 {
        let (_, s) = root_of_unity(j, n);
        let z = Complex64::new(a1, 2.0 * a2 * s);
        ev[j] = z;
        ev[n - j] = z.conj();
    }
    Ok(Spectrum::new(ev, SpectrumSource::AnalyticCirculant))
}

/// `a1 + 2 a0 cos(2πk1/N) + 2 a2 cos(2πk2/M)` over all `k1 < N`, `k2 < M`.
pub fn block_circulant_eigenvalues(spec: &BlockCirculantSpec) -> Spectrum {
    let mut ev = Vec::with_capacity(spec.n * spec.m);
    for k1 in 0..spec.n {
        let (c1, _) = root_of_unity(k1, spec.n);
        for k2 in 0..spec.m {
            let (c2, _) = root_of_unity(k2, spec.m);
            ev.push(Complex64::new(spec.a1 + 2.0 * spec.a0 * c1 + 2.0 * spec.a2 * c2, 0.0));
        }
    }
    Spectrum::new(ev, SpectrumSource::AnalyticBlock)
}
