//! Edge modes of the semi-infinite operator and the open-limit spectrum.
//!
//! An eigenvalue `λ` of `B0` is an edge eigenvalue when the Bloch vector
//! `v = (B0-eigenvector, 0)` extends to the decaying solution
//! `(v, z⁻¹v, z⁻²v, …)` with `|z| > 1`. The same verdict follows from the
//! contour determinant `C0(λ)` vanishing; both are computed and must agree.

use crate::numerics::{
    contour_integral_mean, det, eigs_dense, inverse, norm2, null_vector, ClosedContour,
};
use crate::spectra::{gamma_distance, gamma_set, SpectralCurve};
use crate::symbol::UnitCell;
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

/// Threshold on `|C0|` below which `λ ∈ G0`.
pub const G0_THRESHOLD: f64 = 1e-6;
/// Width of the `|z| ≈ 1` band reported as marginal.
pub const MARGINAL_Z: f64 = 1e-8;
/// Relative gap `|z2|/|z1| − 1` below which `λ` counts as lying on Γ.
pub const ON_GAMMA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    B0,
    B1,
    #[serde(rename = "both")]
    Both,
}

#[derive(Debug, Clone)]
pub struct EdgeModeReport {
    pub lambda: C64,
    /// Unit Bloch vector with vanishing last entry.
    pub bloch_vector: Vec<C64>,
    /// `None` when `v_{k−1} = 0` puts the root at infinity.
    pub floquet_z: Option<C64>,
    pub is_edge: bool,
    /// `|z|` within [`MARGINAL_Z`] of 1 or `λ` on Γ; no verdict is forced.
    pub marginal: bool,
    /// Signed contour determinant; NaN when `λ` lies on Γ.
    pub c0_value: C64,
    pub membership: Membership,
}

/// Flat record used for JSON export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeReportRecord {
    pub lambda: [f64; 2],
    pub z: Option<[f64; 2]>,
    pub abs_z: Option<f64>,
    pub c0_abs: Option<f64>,
    pub is_edge: bool,
    pub membership: Membership,
}

impl From<&EdgeModeReport> for EdgeReportRecord {
    fn from(r: &EdgeModeReport) -> Self {
        Self {
            lambda: [r.lambda.re, r.lambda.im],
            z: r.floquet_z.map(|z| [z.re, z.im]),
            abs_z: r.floquet_z.map(|z| z.norm()),
            c0_abs: r.c0_value.is_finite().then(|| r.c0_value.norm()),
            is_edge: r.is_edge,
            membership: r.membership,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BlochData {
    pub v: Vec<C64>,
    pub z: Option<C64>,
}

#[derive(Debug, Clone)]
pub struct OpenLimitResult {
    pub gamma: SpectralCurve,
    pub g0_points: Vec<C64>,
}

impl OpenLimitResult {
    pub fn distance_to(&self, lambda: C64) -> f64 {
        self.g0_points
            .iter()
            .map(|g| (g - lambda).norm())
            .fold(self.gamma.distance_to(lambda), f64::min)
    }

    /// `sup_{λ ∈ values} dist(λ, Γ ∪ G0)`.
    pub fn directed_distance_from(&self, values: &[C64]) -> f64 {
        values.iter().map(|&l| self.distance_to(l)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct HomotopyTrace {
    pub t_grid: Vec<f64>,
    /// `edge_paths[p][i]`: path `p` at `t_grid[i]`.
    pub edge_paths: Vec<Vec<C64>>,
    pub abs_z: Vec<Vec<f64>>,
    /// Distance of each path point to Γ at the same `t`.
    pub gap_margin: Vec<Vec<f64>>,
    /// Grid indices where two candidates collided and matching restarted.
    pub restarts: Vec<usize>,
}

fn eigenvalues(m: &crate::numerics::ComplexMatrix) -> Result<Vec<C64>> {
    Ok(eigs_dense(m, false)?.values)
}

/// `σ(B0)`; empty for `k = 1`.
pub fn edge_candidates(cell: &UnitCell) -> Result<Vec<C64>> {
    if cell.k() < 2 {
        return Ok(vec![]);
    }
    eigenvalues(&cell.principal_submatrices().0)
}

fn on_gamma(cell: &UnitCell, lambda: C64) -> Result<bool> {
    let (z1, z2) = cell.floquet_roots(lambda)?;
    Ok(z2.norm() <= z1.norm() * (1.0 + ON_GAMMA))
}

/// Bloch vector `v = (B0-eigenvector, 0)` and the root `z` solving row `k` of
/// `(f(z) − λ) v = 0`, i.e. `z = −b_k v_1 / (c_{k−1} v_{k−1})`.
pub fn bloch_data(cell: &UnitCell, lambda: C64) -> Result<BlochData> {
    let k = cell.k();
    if k < 2 {
        return Err(Error::InvalidInput("bloch data needs k >= 2".into()));
    }
    let (b0, _) = cell.principal_submatrices();
    let cand = eigenvalues(&b0)?;
    let scale = b0.frobenius_norm().max(1.0);
    let dist = cand.iter().map(|c| (c - lambda).norm()).fold(f64::INFINITY, f64::min);
    if dist > 1e-8 * scale {
        return Err(Error::InvalidInput(format!("{lambda} is not an eigenvalue of B0 (distance {dist:e})")));
    }
    if on_gamma(cell, lambda)? {
        return Err(Error::Degenerate(format!("{lambda} lies on the equal-modulus set")));
    }
    let (mut u, _) = null_vector(&b0.shifted(lambda))?;
    if let Some(first) = u.iter().copied().find(|x| x.norm() > 1e-12) {
        let phase = first.conj() / first.norm();
        u.iter_mut().for_each(|x| *x *= phase);
    }
    let mut v = u;
    v.push(C64::new(0.0, 0.0));
    let (b, c) = (cell.b(), cell.c());
    let den = c[k - 2] * v[k - 2];
    let z = if v[k - 2].norm() <= 1e-12 { None } else { Some(-b[k - 1] * v[0] / den) };
    if let Some(z) = z.filter(|z| z.norm() > 0.0) {
        let f = cell.symbol_at(z)?.shifted(lambda);
        let res = norm2(&f.mul_vec(&v)) / f.frobenius_norm().max(1.0);
        if res > 1e-8 {
            return Err(Error::Consistency(format!("Bloch residual {res:e} at {lambda}")));
        }
    }
    Ok(BlochData { v, z })
}

/// `det((1/2πi) ∮ (f(z) − λ)⁻¹ dz/z)` on the circle of radius `√(|z1 z2|)`.
///
/// Starts at 1024 samples and doubles until successive moduli agree to 1e-9.
pub fn c0_value(cell: &UnitCell, lambda: C64) -> Result<C64> {
    let (z1, z2) = cell.floquet_roots(lambda)?;
    if z2.norm() <= z1.norm() * (1.0 + ON_GAMMA) {
        return Err(Error::PoleOnContour { index: 0 });
    }
    let radius = (z1.norm() * z2.norm()).sqrt();
    let eval = |samples: usize| -> Result<C64> {
        let gamma = ClosedContour::new(C64::new(0.0, 0.0), radius, samples)?;
        let mean = contour_integral_mean(|z| inverse(&cell.symbol_at(z)?.shifted(lambda)), &gamma)?;
        det(&mean)
    };
    let mut samples = 1024;
    let mut prev = eval(samples)?;
    while samples < 1 << 18 {
        samples *= 2;
        let next = eval(samples)?;
        if (next.norm() - prev.norm()).abs() < 1e-9 * next.norm().max(1.0) && (next - prev).norm() < 1e-9 * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence { what: "C0 contour quadrature", iterations: samples })
}

fn dedup(mut v: Vec<C64>, tol: f64) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for x in v {
        if out.iter().all(|y| (x - y).norm() > tol) {
            out.push(x);
        }
    }
    out
}

/// Points of `σ(B0) ∪ σ(B1)` with `|C0| < G0_THRESHOLD`, excluding those on Γ.
pub fn g0_set(cell: &UnitCell) -> Result<Vec<C64>> {
    g0_set_with_threshold(cell, G0_THRESHOLD)
}

pub fn g0_set_with_threshold(cell: &UnitCell, threshold: f64) -> Result<Vec<C64>> {
    if cell.k() < 2 {
        return Ok(vec![]);
    }
    let (b0, b1) = cell.principal_submatrices();
    let mut cand = eigenvalues(&b0)?;
    cand.extend(eigenvalues(&b1)?);
    let mut out = Vec::new();
    for lambda in dedup(cand, 1e-8) {
        if on_gamma(cell, lambda)? {
            continue;
        }
        if c0_value(cell, lambda)?.norm() < threshold {
            out.push(lambda);
        }
    }
    Ok(out)
}

/// One report per `σ(B0)` candidate, with the `|z| > 1` and `C0` verdicts
/// cross-checked.
pub fn edge_spectrum(cell: &UnitCell) -> Result<Vec<EdgeModeReport>> {
    if cell.k() < 2 {
        return Ok(vec![]);
    }
    let (_, b1) = cell.principal_submatrices();
    let sigma_b1 = eigenvalues(&b1)?;
    let mut reports = Vec::new();
    for lambda in edge_candidates(cell)? {
        let in_b1 = sigma_b1.iter().any(|m| (m - lambda).norm() <= 1e-8 * lambda.norm().max(1.0));
        let membership = if in_b1 { Membership::Both } else { Membership::B0 };
        let nan = C64::new(f64::NAN, f64::NAN);
        if on_gamma(cell, lambda)? {
            let (mut v, _) = null_vector(&cell.principal_submatrices().0.shifted(lambda))?;
            v.push(C64::new(0.0, 0.0));
            reports.push(EdgeModeReport {
                lambda,
                bloch_vector: v,
                floquet_z: None,
                is_edge: false,
                marginal: true,
                c0_value: nan,
                membership,
            });
            continue;
        }
        let bd = bloch_data(cell, lambda)?;
        let c0 = c0_value(cell, lambda)?;
        let in_g0 = c0.norm() < G0_THRESHOLD;
        let (is_edge, marginal) = match bd.z {
            None => (false, false),
            Some(z) if (z.norm() - 1.0).abs() <= MARGINAL_Z => (false, true),
            Some(z) => {
                // C0 sees decay relative to Γ, whose radius is r; for symmetric
                // cells r = 1 and the two tests coincide.
                let decays_past_gamma = z.norm() > cell.viete_data().r;
                if decays_past_gamma != in_g0 {
                    return Err(Error::Consistency(format!(
                        "edge criteria disagree at {lambda}: |z| = {}, |C0| = {:e}",
                        z.norm(),
                        c0.norm()
                    )));
                }
                (z.norm() > 1.0 + MARGINAL_Z, false)
            }
        };
        reports.push(EdgeModeReport {
            lambda,
            bloch_vector: bd.v,
            floquet_z: bd.z,
            is_edge,
            marginal,
            c0_value: c0,
            membership,
        });
    }
    Ok(reports)
}

/// The limit set `Γ ∪ G0` of truncation spectra.
pub fn open_limit(cell: &UnitCell, samples: usize) -> Result<OpenLimitResult> {
    Ok(OpenLimitResult { gamma: gamma_set(cell, samples)?, g0_points: g0_set(cell)? })
}

/// `(v, z⁻¹v, …, z^{1−m}v)` for `m` cells.
pub fn quasiperiodic_extension(v: &[C64], z: C64, m: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(m * v.len());
    let mut f = C64::new(1.0, 0.0);
    for _ in 0..m {
        out.extend(v.iter().map(|x| x * f));
        f /= z;
    }
    out
}

/// Tracks `σ(B0)` along `t_grid` together with `|z|` and the distance to Γ.
pub fn homotopy_sweep<F>(cell_at: F, t_grid: &[f64], samples: usize) -> Result<HomotopyTrace>
where
    F: Fn(f64) -> Result<UnitCell>,
{
    if t_grid.is_empty() {
        return Err(Error::InvalidInput("empty homotopy grid".into()));
    }
    let mut paths: Vec<Vec<C64>> = Vec::new();
    let mut abs_z: Vec<Vec<f64>> = Vec::new();
    let mut margin: Vec<Vec<f64>> = Vec::new();
    let mut restarts = Vec::new();
    let mut prev: Option<Vec<C64>> = None;
    for (i, &t) in t_grid.iter().enumerate() {
        let cell = cell_at(t)?;
        let mut cand = edge_candidates(&cell)?;
        let collided = (0..cand.len()).any(|a| (a + 1..cand.len()).any(|b| (cand[a] - cand[b]).norm() < 1e-6));
        cand = match (&prev, collided) {
            (Some(p), false) if p.len() == cand.len() => crate::spectra::match_nearest(p, cand),
            (Some(_), _) => {
                restarts.push(i);
                cand
            }
            (None, _) => cand,
        };
        if paths.is_empty() {
            paths = vec![Vec::new(); cand.len()];
            abs_z = vec![Vec::new(); cand.len()];
            margin = vec![Vec::new(); cand.len()];
        }
        let gamma = gamma_set(&cell, samples)?;
        for (p, &lambda) in cand.iter().enumerate() {
            let z = match bloch_data(&cell, lambda) {
                Ok(bd) => bd.z.map_or(f64::INFINITY, |z| z.norm()),
                Err(Error::Degenerate(_)) => 1.0,
                Err(e) => return Err(e),
            };
            paths[p].push(lambda);
            abs_z[p].push(z);
            margin[p].push(gamma_distance(&cell, &gamma, lambda)?);
        }
        prev = Some(cand);
    }
    Ok(HomotopyTrace { t_grid: t_grid.to_vec(), edge_paths: paths, abs_z, gap_margin: margin, restarts })
}
