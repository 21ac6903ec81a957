//! Finite-difference discretisation of `−(1/μ₀) ∂ₓ((1/ε) ∂ₓ u)` on a unit
//! cell with piecewise constant permittivity, and the continuum-limit
//! diagnostics built on it.
//!
//! Grid nodes sit at `x_i = (i − ½)/k`, so a material interface effectively
//! snaps to the nearest cell face. Face coefficients are harmonic means of
//! `1/ε` across the face, which keeps the stencil symmetric at jumps.

use crate::edge::edge_candidates;
use crate::interface::{matched_f, InterfaceSpec};
use crate::numerics::eigs_dense;
use crate::symbol::UnitCell;
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct FdmConfig {
    k: usize,
    eps_inside: f64,
    eps_outside: f64,
    mu0: f64,
    geometry: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawConfig {
    k: usize,
    eps_inside: f64,
    eps_outside: f64,
    #[serde(default = "unit")]
    mu0: f64,
    geometry: Vec<(f64, f64)>,
}

fn unit() -> f64 {
    1.0
}

impl TryFrom<RawConfig> for FdmConfig {
    type Error = Error;
    fn try_from(r: RawConfig) -> Result<Self> {
        FdmConfig::new(r.k, r.eps_inside, r.eps_outside, r.mu0, r.geometry)
    }
}

impl From<FdmConfig> for RawConfig {
    fn from(c: FdmConfig) -> Self {
        RawConfig { k: c.k, eps_inside: c.eps_inside, eps_outside: c.eps_outside, mu0: c.mu0, geometry: c.geometry }
    }
}

/// Two resonators per cell, mirror-symmetric about `x = ½`.
pub const DIMER_GEOMETRY: [(f64, f64); 2] = [(0.1, 0.35), (0.65, 0.9)];

impl FdmConfig {
    pub fn new(k: usize, eps_inside: f64, eps_outside: f64, mu0: f64, geometry: Vec<(f64, f64)>) -> Result<Self> {
        if k < 4 {
            return Err(Error::InvalidInput(format!("need at least 4 grid points per cell, got {k}")));
        }
        for (name, v) in [("eps_inside", eps_inside), ("eps_outside", eps_outside), ("mu0", mu0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        let mut prev = 0.0;
        for &(l, r) in &geometry {
            if !(l >= prev && l < r && r <= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "resonator intervals must be ordered, disjoint and inside [0, 1], got ({l}, {r})"
                )));
            }
            prev = r;
        }
        Ok(Self { k, eps_inside, eps_outside, mu0, geometry })
    }

    /// High-contrast dimer: `ε_b = 10` in [`DIMER_GEOMETRY`], `ε = 1` outside, `μ₀ = 1`.
    pub fn dimer(k: usize) -> Result<Self> {
        Self::new(k, 10.0, 1.0, 1.0, DIMER_GEOMETRY.to_vec())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eps_inside(&self) -> f64 {
        self.eps_inside
    }

    pub fn eps_outside(&self) -> f64 {
        self.eps_outside
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn geometry(&self) -> &[(f64, f64)] {
        &self.geometry
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(k, self.eps_inside, self.eps_outside, self.mu0, self.geometry.clone())
    }

    /// Permittivity at each node.
    pub fn node_permittivity(&self) -> Vec<f64> {
        (0..self.k)
            .map(|i| {
                let x = (i as f64 + 0.5) / self.k as f64;
                if self.geometry.iter().any(|&(l, r)| l <= x && x <= r) {
                    self.eps_inside
                } else {
                    self.eps_outside
                }
            })
            .collect()
    }
}

/// Real symmetric `k`-periodic cell: `a_i = (κ_{i−½} + κ_{i+½}) / (μ₀Δx²)`,
/// `b_i = −κ_{i+½} / (μ₀Δx²)`, `κ = 2/(ε_i + ε_{i+1})`; `b_k` couples the last
/// node to the first node of the next cell.
pub fn assemble_fdm_cell(cfg: &FdmConfig) -> UnitCell {
    let k = cfg.k;
    let eps = cfg.node_permittivity();
    let scale = cfg.mu0 / (k * k) as f64;
    let face: Vec<f64> = (0..k).map(|i| 2.0 / (eps[i] + eps[(i + 1) % k]) / scale).collect();
    let a = (0..k).map(|i| C64::new(face[(i + k - 1) % k] + face[i], 0.0)).collect();
    let b = face.iter().map(|f| C64::new(-f, 0.0)).collect();
    UnitCell::symmetric(a, b).expect("k >= 4 with nonzero couplings")
}

/// Bands `[lo, hi]` of a real symmetric cell, ascending. Band edges of a
/// periodic Jacobi operator are the periodic and antiperiodic eigenvalues,
/// i.e. those of `f(1)` and `f(−1)`; sorted together they pair up into bands.
pub fn band_edges(cell: &UnitCell) -> Result<Vec<(f64, f64)>> {
    let mut e = Vec::with_capacity(2 * cell.k());
    for z in [1.0, -1.0] {
        e.extend(eigs_dense(&cell.symbol_at(C64::new(z, 0.0))?, false)?.values.iter().map(|v| v.re));
    }
    e.sort_by(f64::total_cmp);
    Ok(e.chunks_exact(2).map(|p| (p[0], p[1])).collect())
}

/// Open gaps between consecutive bands. Touching bands leave rounding-level
/// slivers, so gaps narrower than `10⁻⁹` of the spectral radius are dropped.
pub fn gaps(bands: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let scale = bands.iter().map(|&(lo, hi)| lo.abs().max(hi.abs())).fold(0.0, f64::max);
    bands.windows(2).filter(|w| w[1].0 - w[0].1 > 1e-9 * scale).map(|w| (w[0].1, w[1].0)).collect()
}

fn distance_to_bands(x: f64, bands: &[(f64, f64)]) -> f64 {
    bands.iter().map(|&(lo, hi)| if x < lo { lo - x } else if x > hi { x - hi } else { 0.0 }).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct B0Row {
    pub k: usize,
    pub b0_index: usize,
    pub re: f64,
    pub distance_to_band: f64,
}

/// Distance of every `σ(B₀)` value (ascending) to the nearest band, per `k`.
pub fn b0_convergence(cfg: &FdmConfig, k_list: &[usize]) -> Result<Vec<B0Row>> {
    if k_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("k_list must be strictly increasing".into()));
    }
    let mut rows = Vec::new();
    for &k in k_list {
        let cell = assemble_fdm_cell(&cfg.with_k(k)?);
        let bands = band_edges(&cell)?;
        let mut vals: Vec<f64> = edge_candidates(&cell)?.iter().map(|v| v.re).collect();
        vals.sort_by(f64::total_cmp);
        rows.extend(vals.into_iter().enumerate().map(|(i, re)| B0Row {
            k,
            b0_index: i,
            re,
            distance_to_band: distance_to_bands(re, &bands),
        }));
    }
    Ok(rows)
}

/// Largest distance among the `lowest` smallest `σ(B₀)` values at grid size
/// `k`; `None` when `k` is absent from `rows`.
pub fn max_low_distance(rows: &[B0Row], k: usize, lowest: usize) -> Option<f64> {
    let sel: Vec<f64> = rows.iter().filter(|r| r.k == k && r.b0_index < lowest).map(|r| r.distance_to_band).collect();
    (!sel.is_empty()).then(|| sel.into_iter().fold(0.0, f64::max))
}

/// Shared-site interface anchored at a cell boundary: `η = a_k`, `q = s = b_k`,
/// i.e. the centre node continues the periodic stencil.
pub fn fdm_interface(cell: &UnitCell) -> Result<InterfaceSpec> {
    let k = cell.k();
    let bk = cell.b()[k - 1];
    InterfaceSpec::shared_site(cell.clone(), cell.a()[k - 1], bk, bk)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceRow {
    pub omega2: f64,
    pub f: C64,
}

/// `F(ω²)` of [`fdm_interface`] on `gap_grid`. Every grid point must lie
/// strictly inside a gap.
pub fn impedance_curve(cfg: &FdmConfig, gap_grid: &[f64]) -> Result<Vec<ImpedanceRow>> {
    let cell = assemble_fdm_cell(cfg);
    let bands = band_edges(&cell)?;
    let spec = fdm_interface(&cell)?;
    gap_grid
        .iter()
        .map(|&w2| {
            if distance_to_bands(w2, &bands) == 0.0 {
                return Err(Error::InvalidInput(format!("ω² = {w2} lies on a band")));
            }
            Ok(ImpedanceRow { omega2: w2, f: matched_f(&spec, C64::new(w2, 0.0))? })
        })
        .collect()
}

/// Points `lo + t (hi − lo)` for each fraction `t`.
pub fn gap_grid(gap: (f64, f64), fractions: &[f64]) -> Vec<f64> {
    fractions.iter().map(|t| gap.0 + t * (gap.1 - gap.0)).collect()
}
