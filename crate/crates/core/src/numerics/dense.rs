//! Dense complex eigensolver: balancing, Householder reduction to Hessenberg
//! form, implicit single-shift QR to Schur form, and triangular back-substitution
//! for eigenvectors.

use super::matrix::{norm2, ComplexMatrix};
use super::{EigenDecomposition, EPS};
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// All eigenvalues of a square complex matrix, with unit eigenvectors on request.
///
/// Pairs are sorted by real then imaginary part.
pub fn eigs_dense(m: &ComplexMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: want_vectors.then(|| ComplexMatrix::zeros(0, 0)) });
    }
    let mut h = m.clone();
    let scale = balance(&mut h);
    let mut z = want_vectors.then(|| ComplexMatrix::identity(n));
    hessenberg(&mut h, z.as_mut());
    schur(&mut h, z.as_mut())?;
    let values: Vec<C64> = (0..n).map(|i| h[(i, i)]).collect();
    let vectors = match z {
        Some(z) => {
            let mut v = z.matmul(&triangular_eigenvectors(&h));
            for i in 0..n {
                for j in 0..n {
                    v[(i, j)] *= scale[i];
                }
            }
            for j in 0..n {
                let nrm = norm2(&v.column(j));
                for i in 0..n {
                    v[(i, j)] /= nrm;
                }
            }
            Some(v)
        }
        None => None,
    };
    let mut out = EigenDecomposition { values, vectors };
    out.sort();
    Ok(out)
}

fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity `D⁻¹ A D` with power-of-two entries equilibrating row and
/// column norms. Returns `D`.
fn balance(a: &mut ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    let mut d = vec![1.0; n];
    let radix = 2.0;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            return d;
        }
    }
}

/// Householder reduction to upper Hessenberg form, accumulating into `z`.
fn hessenberg(h: &mut ComplexMatrix, mut z: Option<&mut ComplexMatrix>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let alpha_norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * alpha_norm;
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] /= vn;
        }
        // H <- (I - 2vv^H) H
        for j in k..n {
            let s: C64 = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                h[(i, j)] -= 2.0 * v[i] * s;
            }
        }
        // H <- H (I - 2vv^H), Z <- Z (I - 2vv^H)
        for i in 0..n {
            let s: C64 = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            for j in k + 1..n {
                h[(i, j)] -= 2.0 * s * v[j].conj();
            }
        }
        if let Some(z) = z.as_deref_mut() {
            for i in 0..n {
                let s: C64 = (k + 1..n).map(|j| z[(i, j)] * v[j]).sum();
                for j in k + 1..n {
                    z[(i, j)] -= 2.0 * s * v[j].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G (x, y)ᵀ = (r, 0)ᵀ`.
fn givens(x: C64, y: C64) -> (f64, C64, C64) {
    if y == ZERO {
        return (1.0, ZERO, x);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm(), C64::new(y.norm(), 0.0));
    }
    let ax = x.norm();
    let nrm = ax.hypot(y.norm());
    let phase = x / ax;
    (ax / nrm, phase * y.conj() / nrm, phase * nrm)
}

fn rotate_rows(h: &mut ComplexMatrix, j: usize, c: f64, s: C64, cols: std::ops::RangeInclusive<usize>) {
    for col in cols {
        let a = h[(j, col)];
        let b = h[(j + 1, col)];
        h[(j, col)] = c * a + s * b;
        h[(j + 1, col)] = -s.conj() * a + c * b;
    }
}

fn rotate_cols(h: &mut ComplexMatrix, j: usize, c: f64, s: C64, rows: std::ops::RangeInclusive<usize>) {
    for row in rows {
        let a = h[(row, j)];
        let b = h[(row, j + 1)];
        h[(row, j)] = c * a + s.conj() * b;
        h[(row, j + 1)] = -s * a + c * b;
    }
}

/// Implicit single-shift QR on a Hessenberg matrix. With `z` present the full
/// Schur form is produced and the transformations are accumulated.
fn schur(h: &mut ComplexMatrix, mut z: Option<&mut ComplexMatrix>) -> Result<()> {
    let n = h.rows();
    let wantt = z.is_some();
    let norm = h.frobenius_norm();
    let small = f64::MIN_POSITIVE * (n as f64) / EPS;
    let itmax = 30 * n.max(10);
    let mut i = n - 1;
    let mut total = 0usize;
    loop {
        let mut its = 0usize;
        let l = loop {
            let mut l = i;
            while l > 0 {
                let mut s = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
                if s == 0.0 {
                    s = norm;
                }
                if abs1(h[(l, l - 1)]) <= (EPS * s).max(small) {
                    break;
                }
                l -= 1;
            }
            if l > 0 {
                h[(l, l - 1)] = ZERO;
            }
            if l >= i {
                break l;
            }
            its += 1;
            total += 1;
            if its > itmax {
                return Err(Error::NoConvergence { what: "dense QR iteration", iterations: total });
            }
            let sigma = if its % 10 == 0 {
                // Exceptional shift to break cycles.
                let base = if its % 20 == 0 { i } else { l };
                let sub = if base == i { h[(i, i - 1)] } else { h[(l + 1, l)] };
                h[(base, base)] + 0.75 * sub.re.abs()
            } else {
                wilkinson(h[(i - 1, i - 1)], h[(i - 1, i)], h[(i, i - 1)], h[(i, i)])
            };
            let i2 = if wantt { n - 1 } else { i };
            let i1 = if wantt { 0 } else { l };
            for j in l..i {
                let (c, s) = if j == l {
                    let (c, s, _) = givens(h[(l, l)] - sigma, h[(l + 1, l)]);
                    (c, s)
                } else {
                    let (c, s, r) = givens(h[(j, j - 1)], h[(j + 1, j - 1)]);
                    h[(j, j - 1)] = r;
                    h[(j + 1, j - 1)] = ZERO;
                    (c, s)
                };
                rotate_rows(h, j, c, s, j..=i2);
                rotate_cols(h, j, c, s, i1..=(j + 2).min(i));
                if let Some(z) = z.as_deref_mut() {
                    rotate_cols(z, j, c, s, 0..=n - 1);
                }
            }
        };
        if l == 0 {
            break;
        }
        i = l - 1;
        if i == 0 {
            break;
        }
    }
    Ok(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let t = (a - d) * 0.5;
    let bc = b * c;
    let disc = (t * t + bc).sqrt();
    let p = t + disc;
    let m = t - disc;
    let den = if p.norm() >= m.norm() { p } else { m };
    if den == ZERO {
        d
    } else {
        d - bc / den
    }
}

/// Columns are eigenvectors of the upper triangular `t`.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let tnorm = t.frobenius_norm();
    let smin = (EPS * tnorm).max(f64::MIN_POSITIVE * 1e10);
    let big = 1e150;
    let mut x = ComplexMatrix::zeros(n, n);
    let mut col = vec![ZERO; n];
    for k in 0..n {
        let lam = t[(k, k)];
        col[..=k].iter_mut().for_each(|c| *c = ZERO);
        col[k] = ONE;
        for j in (0..k).rev() {
            let s: C64 = (j + 1..=k).map(|l| t[(j, l)] * col[l]).sum();
            let mut den = t[(j, j)] - lam;
            if den.norm() < smin {
                den = C64::new(smin, 0.0);
            }
            col[j] = -s / den;
            if col[j].norm() > big {
                let f = 1.0 / col[j].norm();
                col[j..=k].iter_mut().for_each(|c| *c *= f);
            }
        }
        for j in 0..=k {
            x[(j, k)] = col[j];
        }
    }
    x
}
