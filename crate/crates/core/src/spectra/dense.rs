//! Eigenvalues of a general real square matrix.
//!
//! Balancing, Householder reduction to upper Hessenberg form, then Francis
//! double-shift QR on the Hessenberg matrix (the classic EISPACK `balanc` /
//! `orthes` / `hqr` sequence, eigenvalues only).

use num_complex::Complex64;

use super::{DenseMatrix, SpectraError, Spectrum, SpectrumSource};

/// Practical size cap for the O(N³) solver.
pub const MAX_DENSE_DIM: usize = 512;

/// Default accuracy target, relative to the matrix norm.
pub const DEFAULT_DENSE_TOL: f64 = 1e-9;

/// All eigenvalues of `a`.
///
/// Complex pairs whose imaginary part is below `tol · max(‖A‖_F, 1)` are
/// reported as two real eigenvalues at their common real part. The QR sweep
/// gives up after `100 N` iterations with [`SpectraError::NoConvergence`].
pub fn dense_eigenvalues(a: &DenseMatrix, tol: f64) -> Result<Spectrum, SpectraError> {
    let n = a.dim();
    if n > MAX_DENSE_DIM {
        return Err(SpectraError::TooLarge(n));
    }
    let mut h: Vec<Vec<f64>> = a.rows().to_vec();
    balance(&mut h);
    to_hessenberg(&mut h);
    let mut ev = hessenberg_qr(&mut h)?;

    let snap = tol * a.frobenius_norm().max(1.0);
    for z in ev.iter_mut() {
        if z.im != 0.0 && z.im.abs() <= snap {
            z.im = 0.0;
        }
    }
    Ok(Spectrum::new(ev, SpectrumSource::NumericDense))
}

// Diagonal similarity scaling by powers of two so row and column norms match.
fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for v in a[i].iter_mut() {
                    *v *= g;
                }
                for row in a.iter_mut() {
                    row[i] *= f;
                }
            }
        }
    }
}

fn to_hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    let mut u = vec![0.0; n];
    for m in 1..n - 1 {
        let scale: f64 = (m..n).map(|i| a[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in m..n {
            u[i] = a[i][m - 1] / scale;
            h += u[i] * u[i];
        }
        let mut g = h.sqrt();
        if u[m] > 0.0 {
            g = -g;
        }
        h -= u[m] * g;
        u[m] -= g;

        // P A with P = I - u u^T / h
        for j in m..n {
            let f = (m..n).map(|i| u[i] * a[i][j]).sum::<f64>() / h;
            for i in m..n {
                a[i][j] -= f * u[i];
            }
        }
        // (P A) P
        for row in a.iter_mut() {
            let f = (m..n).map(|j| u[j] * row[j]).sum::<f64>() / h;
            for j in m..n {
                row[j] -= f * u[j];
            }
        }
        a[m][m - 1] = scale * g;
        for row in a.iter_mut().skip(m + 1) {
            row[m - 1] = 0.0;
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

fn hessenberg_qr(a: &mut [Vec<f64>]) -> Result<Vec<Complex64>, SpectraError> {
    let n = a.len();
    let mut ev = vec![Complex64::new(0.0, 0.0); n];
    let max_iter = 100 * n;
    let mut total = 0usize;

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut shift = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // look for a negligible subdiagonal element
            let mut l = nu;
            while l >= 1 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                ev[nu] = Complex64::new(x + shift, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += shift;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    let hi = x + z;
                    let lo = if z != 0.0 { x - w / z } else { hi };
                    ev[nu - 1] = Complex64::new(hi, 0.0);
                    ev[nu] = Complex64::new(lo, 0.0);
                } else {
                    ev[nu - 1] = Complex64::new(x + p, z);
                    ev[nu] = Complex64::new(x + p, -z);
                }
                nn -= 2;
                break;
            }

            if total >= max_iter {
                return Err(SpectraError::NoConvergence {
                    iterations: total,
                    found: n - 1 - nu,
                    dim: n,
                });
            }
            if its > 0 && its.is_multiple_of(10) {
                // exceptional shift
                shift += x;
                for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                    row[i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total += 1;

            // find two consecutive small subdiagonal elements
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }

            // double-shift QR sweep on rows/columns l..=nn
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k != nu - 1 { a[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nu - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for row in a.iter_mut().take(mmin + 1).skip(l) {
                        let mut pp = x * row[k] + y * row[k + 1];
                        if k != nu - 1 {
                            pp += z * row[k + 2];
                            row[k + 2] -= pp * r;
                        }
                        row[k + 1] -= pp * q;
                        row[k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(ev)
}
