//! Essential spectrum, equal-modulus set and finite truncations.

use crate::numerics::{eigs_dense, eigs_tridiagonal, polynomial_roots, winding_number, TridiagonalMatrix};
use crate::symbol::UnitCell;
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Eigenvalue branches sampled on a uniform parameter grid over `[−π, π)`.
#[derive(Debug, Clone)]
pub struct SpectralCurve {
    pub alpha_grid: Vec<f64>,
    /// `branches[b][i]` is branch `b` at `alpha_grid[i]`.
    pub branches: Vec<Vec<C64>>,
}

impl SpectralCurve {
    pub fn points(&self) -> Vec<C64> {
        self.branches.iter().flatten().copied().collect()
    }

    /// Distance from `lambda` to the closed polylines through each branch.
    pub fn distance_to(&self, lambda: C64) -> f64 {
        let mut best = f64::INFINITY;
        for br in &self.branches {
            let n = br.len();
            for i in 0..n {
                best = best.min(segment_distance(lambda, br[i], br[(i + 1) % n]));
            }
        }
        best
    }

    /// Rows `(alpha, branch_index, value)` in branch-major order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, usize, C64)> + '_ {
        self.branches
            .iter()
            .enumerate()
            .flat_map(move |(b, br)| br.iter().zip(&self.alpha_grid).map(move |(&z, &a)| (a, b, z)))
    }
}

fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

#[derive(Debug, Clone)]
pub struct TruncationSpectrum {
    pub n: usize,
    pub values: Vec<C64>,
}

pub fn alpha_grid(samples: usize) -> Vec<f64> {
    (0..samples).map(|i| -PI + 2.0 * PI * i as f64 / samples as f64).collect()
}

fn sampled_branches(cell: &UnitCell, radius: f64, samples: usize) -> Result<SpectralCurve> {
    if samples < 64 {
        return Err(Error::InvalidInput(format!("need at least 64 samples, got {samples}")));
    }
    let grid = alpha_grid(samples);
    let k = cell.k();
    let mut branches = vec![Vec::with_capacity(samples); k];
    let mut prev: Option<Vec<C64>> = None;
    for &alpha in &grid {
        let vals = eigs_dense(&cell.symbol_at(C64::from_polar(radius, alpha))?, false)?.values;
        let ordered = match &prev {
            None => vals,
            Some(p) => match_nearest(p, vals),
        };
        for (b, &v) in ordered.iter().enumerate() {
            branches[b].push(v);
        }
        prev = Some(ordered);
    }
    Ok(SpectralCurve { alpha_grid: grid, branches })
}

/// Greedy nearest-neighbour assignment of `next` onto the slots of `prev`.
pub(crate) fn match_nearest(prev: &[C64], next: Vec<C64>) -> Vec<C64> {
    let n = prev.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push(((p - q).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![C64::new(f64::NAN, 0.0); n];
    let (mut used_i, mut used_j) = (vec![false; n], vec![false; n]);
    for (_, i, j) in pairs {
        if !used_i[i] && !used_j[j] {
            out[i] = next[j];
            used_i[i] = true;
            used_j[j] = true;
        }
    }
    out
}

/// `σ_det(f)`: eigenvalues of `f(e^{iα})`.
pub fn essential_spectrum(cell: &UnitCell, samples: usize) -> Result<SpectralCurve> {
    sampled_branches(cell, 1.0, samples)
}

/// The equal-modulus set: eigenvalues of `f(r e^{iα})` with `r` the Viète radius.
pub fn gamma_set(cell: &UnitCell, samples: usize) -> Result<SpectralCurve> {
    sampled_branches(cell, cell.viete_data().r, samples)
}

/// Distance from `lambda` to Γ, refining the sampled curve by golden-section
/// search in `α` around the nearest samples. Polyline distances alone are
/// coarse near square-root branch points of the eigenvalue curves.
pub fn gamma_distance(cell: &UnitCell, gamma: &SpectralCurve, lambda: C64) -> Result<f64> {
    let radius = cell.viete_data().r;
    let n = gamma.alpha_grid.len();
    let h = 2.0 * PI / n as f64;
    let dist_at = |alpha: f64| -> Result<f64> {
        let vals = eigs_dense(&cell.symbol_at(C64::from_polar(radius, alpha))?, false)?.values;
        Ok(vals.iter().map(|v| (v - lambda).norm()).fold(f64::INFINITY, f64::min))
    };
    let mut nearest: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let d = gamma.branches.iter().map(|br| (br[i] - lambda).norm()).fold(f64::INFINITY, f64::min);
            (d, i)
        })
        .collect();
    nearest.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = gamma.distance_to(lambda);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for &(_, i) in nearest.iter().take(3) {
        let (mut lo, mut hi) = (gamma.alpha_grid[i] - h, gamma.alpha_grid[i] + h);
        let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        let (mut f1, mut f2) = (dist_at(x1)?, dist_at(x2)?);
        while hi - lo > 1e-14 {
            if f1 < f2 {
                hi = x2;
                (x2, f2) = (x1, f1);
                x1 = hi - g * (hi - lo);
                f1 = dist_at(x1)?;
            } else {
                lo = x1;
                (x1, f1) = (x2, f2);
                x2 = lo + g * (hi - lo);
                f2 = dist_at(x2)?;
            }
        }
        best = best.min(f1).min(f2);
    }
    Ok(best)
}

/// Winding number of `α ↦ det(f(e^{iα}) − λ)` about 0.
pub fn winding_region_membership(cell: &UnitCell, lambda: C64, samples: usize) -> Result<i64> {
    let curve = essential_spectrum(cell, samples)?;
    let dist = curve.distance_to(lambda);
    if dist <= 1e-6 {
        return Err(Error::TargetOnCurve { distance: dist });
    }
    let mut n = samples;
    loop {
        let dets: Vec<C64> = alpha_grid(n)
            .iter()
            .map(|&a| crate::numerics::det(&cell.symbol_at(C64::from_polar(1.0, a))?.shifted(lambda)))
            .collect::<Result<_>>()?;
        match winding_number(&dets, C64::new(0.0, 0.0)) {
            Err(Error::InsufficientSampling { .. }) if n < 1 << 16 => n *= 2,
            other => return other,
        }
    }
}

/// The `m`-cell truncation `T_{mk}`.
pub fn truncate(cell: &UnitCell, m: usize) -> Result<TridiagonalMatrix> {
    if m == 0 {
        return Err(Error::InvalidInput("truncation needs m >= 1".into()));
    }
    let k = cell.k();
    let n = m * k;
    let diag = (0..n).map(|i| cell.a()[i % k]).collect();
    let upper = (0..n - 1).map(|i| cell.b()[i % k]).collect();
    let lower = (0..n - 1).map(|i| cell.c()[i % k]).collect();
    TridiagonalMatrix::new(diag, lower, upper)
}

pub fn truncation_spectrum(cell: &UnitCell, m: usize) -> Result<TruncationSpectrum> {
    let t = truncate(cell, m)?;
    Ok(TruncationSpectrum { n: t.n(), values: eigs_tridiagonal(&t, false)?.values })
}

/// `σ_det` of a symmetric cell from the roots of `g(λ) − 2A cos α = 0`, one
/// vector of `k` roots per `α`.
pub fn sigma_det_from_g(cell: &UnitCell, alphas: &[f64]) -> Result<Vec<Vec<C64>>> {
    if !cell.is_symmetric() {
        return Err(Error::InvalidInput("cosine parametrisation needs a symmetric cell".into()));
    }
    let k = cell.k();
    let a_prod = cell.viete_data().a_prod;
    let lead = C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    let bound = cell.a().iter().map(|z| z.norm()).fold(0.0, f64::max)
        + 2.0 * cell.b().iter().map(|z| z.norm()).fold(0.0, f64::max)
        + 1.0;
    alphas
        .iter()
        .map(|&alpha| {
            let shift = 2.0 * a_prod * alpha.cos();
            polynomial_roots(|l| cell.g_poly(l).expect("symmetric") - shift, k, lead, bound)
        })
        .collect()
}
