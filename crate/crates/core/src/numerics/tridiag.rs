//! Tridiagonal eigensolver, independent of the dense path.
//!
//! Eigenvalues: Ehrlich–Aberth iteration on the characteristic polynomial,
//! evaluated by the three-term recurrence in `O(n)` per point. The matrix only
//! enters through its diagonal and the products `l_i u_i`. Eigenvectors:
//! inverse iteration on the original matrix with a pivoted tridiagonal LU.

use super::matrix::{norm2, ComplexMatrix, TridiagonalMatrix};
use super::{EigenDecomposition, EPS};
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn eigs_tridiagonal(t: &TridiagonalMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    let n = t.n();
    let anorm = t.frobenius_norm();
    let prods: Vec<C64> = t.lower.iter().zip(&t.upper).map(|(l, u)| l * u).collect();
    let split = EPS * EPS * anorm * anorm;
    let mut values = Vec::with_capacity(n);
    let mut start = 0;
    for i in 0..n {
        if i + 1 == n || prods[i].norm() <= split {
            values.extend(aberth(&t.diag[start..=i], &prods[start..i], anorm)?);
            start = i + 1;
        }
    }
    let vectors = if want_vectors {
        let mut v = ComplexMatrix::zeros(n, n);
        for (j, &lam) in values.iter().enumerate() {
            let x = inverse_iteration(t, lam, anorm)?;
            for i in 0..n {
                v[(i, j)] = x[i];
            }
        }
        Some(v)
    } else {
        None
    };
    let mut out = EigenDecomposition { values, vectors };
    out.sort();
    Ok(out)
}

/// Newton correction `p(λ)/p'(λ)` of the characteristic polynomial of the
/// unreduced block with diagonal `d` and coupling products `prods`, evaluated
/// by the three-term recurrence with rescaling.
fn newton_ratio(d: &[C64], prods: &[C64], lam: C64) -> C64 {
    let (mut p0, mut p1) = (ONE, d[0] - lam);
    let (mut q0, mut q1) = (ZERO, -ONE);
    for j in 1..d.len() {
        let p2 = (d[j] - lam) * p1 - prods[j - 1] * p0;
        let q2 = (d[j] - lam) * q1 - p1 - prods[j - 1] * q0;
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
        let s = p1.norm().max(q1.norm());
        if s > 1e100 || (s < 1e-100 && s > 0.0) {
            let f = 1.0 / s;
            p0 *= f;
            p1 *= f;
            q0 *= f;
            q1 *= f;
        }
    }
    if p1 == ZERO {
        ZERO
    } else {
        p1 / q1
    }
}

/// Ehrlich–Aberth simultaneous iteration on one unreduced block.
fn aberth(d: &[C64], prods: &[C64], anorm: f64) -> Result<Vec<C64>> {
    let m = d.len();
    if m == 1 {
        return Ok(vec![d[0]]);
    }
    let scale = anorm.max(f64::MIN_POSITIVE);
    let center = d.iter().sum::<C64>() / m as f64;
    let radius = d.iter().map(|x| (x - center).norm()).fold(0.0, f64::max)
        + 2.0 * prods.iter().map(|p| p.norm().sqrt()).fold(0.0, f64::max);
    let radius = radius.max(EPS * scale);
    let mut z: Vec<C64> = (0..m)
        .map(|j| center + C64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / m as f64 + 0.4))
        .collect();
    let mut done = vec![false; m];
    let mut last = vec![f64::INFINITY; m];
    let tol = 4.0 * EPS;
    for _ in 0..2000 {
        for i in 0..m {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(d, prods, z[i]);
            let sum: C64 = (0..m).filter(|&j| j != i).map(|j| ONE / (z[i] - z[j])).sum();
            let w = ratio / (ONE - ratio * sum);
            if !w.is_finite() {
                // Stationary point of p or coincident iterates: nudge off it.
                z[i] += C64::new(EPS * scale, EPS * scale);
                continue;
            }
            z[i] -= w;
            last[i] = w.norm();
            if w.norm() <= tol * (z[i].norm() + scale) {
                done[i] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return Ok(z);
        }
    }
    // Multiple roots converge only linearly; accept once the corrections have
    // reached the square-root accuracy limit.
    if last.iter().all(|&w| w <= 1e-7 * scale) {
        return Ok(z);
    }
    Err(Error::NoConvergence { what: "tridiagonal Aberth iteration", iterations: 2000 })
}

/// Solves `t x = b` by Gaussian elimination with partial pivoting; zero pivots
/// are replaced by `floor`.
pub fn solve_tridiagonal(t: &TridiagonalMatrix, b: &[C64], floor: f64) -> Vec<C64> {
    let n = t.n();
    // Rows of U carry up to two superdiagonals after pivoting.
    let mut u0 = t.diag.clone();
    let mut u1: Vec<C64> = t.upper.clone();
    u1.push(ZERO);
    let mut u2 = vec![ZERO; n];
    let mut low: Vec<C64> = t.lower.clone();
    low.push(ZERO);
    let mut x = b.to_vec();
    for k in 0..n.saturating_sub(1) {
        // Candidate rows: k (u0[k], u1[k], u2[k]) and k+1 (low[k], t.diag[k+1], upper[k+1]).
        let next_d = u0[k + 1];
        let next_u = u1[k + 1];
        if low[k].norm() > u0[k].norm() {
            let (a0, a1, a2) = (u0[k], u1[k], u2[k]);
            u0[k] = low[k];
            u1[k] = next_d;
            u2[k] = next_u;
            x.swap(k, k + 1);
            let f = a0 / u0[k];
            u0[k + 1] = a1 - f * u1[k];
            u1[k + 1] = a2 - f * u2[k];
            let xk = x[k];
            x[k + 1] -= f * xk;
        } else {
            let mut piv = u0[k];
            if piv.norm() < floor {
                piv = C64::new(floor, 0.0);
                u0[k] = piv;
            }
            let f = low[k] / piv;
            u0[k + 1] = next_d - f * u1[k];
            u1[k + 1] = next_u - f * u2[k];
            let xk = x[k];
            x[k + 1] -= f * xk;
        }
        low[k] = ZERO;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        let mut piv = u0[i];
        if piv.norm() < floor {
            piv = C64::new(floor, 0.0);
        }
        x[i] = s / piv;
    }
    x
}

fn inverse_iteration(t: &TridiagonalMatrix, lam: C64, anorm: f64) -> Result<Vec<C64>> {
    let n = t.n();
    if n == 1 {
        return Ok(vec![ONE]);
    }
    let scale = anorm.max(f64::MIN_POSITIVE);
    let shift = lam + C64::new(EPS * scale, EPS * scale * 0.5);
    let shifted = TridiagonalMatrix {
        diag: t.diag.iter().map(|d| d - shift).collect(),
        lower: t.lower.clone(),
        upper: t.upper.clone(),
    };
    let floor = EPS * scale;
    let mut x: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + ((i * 7919) % 97) as f64 / 97.0, ((i * 104729) % 89) as f64 / 178.0))
        .collect();
    let mut best = (f64::INFINITY, x.clone());
    for _ in 0..6 {
        x = solve_tridiagonal(&shifted, &x, floor);
        let nrm = norm2(&x);
        if !nrm.is_finite() || nrm == 0.0 {
            break;
        }
        x.iter_mut().for_each(|z| *z /= nrm);
        let tx = t.mul_vec(&x);
        let res = norm2(&tx.iter().zip(&x).map(|(a, b)| a - lam * b).collect::<Vec<_>>()) / scale;
        if res < best.0 {
            best = (res, x.clone());
        }
        if res < 1e-13 {
            break;
        }
    }
    if !best.0.is_finite() {
        return Err(Error::NoConvergence { what: "tridiagonal inverse iteration", iterations: 6 });
    }
    Ok(best.1)
}
