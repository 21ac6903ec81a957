//! Damped subwavelength resonator chains in the capacitance approximation.
//!
//! A chain has `N = 4m + 1` unit-length resonators mirrored about the central
//! one, with spacings `s2` next to the centre and then alternating `s1, s2`
//! outward. The capacitance matrix of a spacing list `s` is the weighted path
//! Laplacian `C_ii = 1/s_{i−1} + 1/s_i`, `C_{i,i+1} = −1/s_i`; the generalized
//! capacitance is `v_b² C`.

use crate::interface::{classify_parity, InterfaceSpec, Parity};
use crate::numerics::{eigs_tridiagonal, TridiagonalMatrix};
use crate::symbol::UnitCell;
use crate::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChain", into = "RawChain")]
pub struct ResonatorChain {
    /// Dimers per side.
    pub m: usize,
    pub s1: f64,
    pub s2: f64,
    pub v_b: C64,
    pub delta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawChain {
    m: usize,
    s1: f64,
    s2: f64,
    v_re: f64,
    v_im: f64,
    delta: f64,
}

impl TryFrom<RawChain> for ResonatorChain {
    type Error = Error;
    fn try_from(r: RawChain) -> Result<Self> {
        ResonatorChain::new(r.m, r.s1, r.s2, C64::new(r.v_re, r.v_im), r.delta)
    }
}

impl From<ResonatorChain> for RawChain {
    fn from(c: ResonatorChain) -> Self {
        RawChain { m: c.m, s1: c.s1, s2: c.s2, v_re: c.v_b.re, v_im: c.v_b.im, delta: c.delta }
    }
}

impl ResonatorChain {
    pub fn new(m: usize, s1: f64, s2: f64, v_b: C64, delta: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("chain needs m >= 1".into()));
        }
        if !(s1 > 0.0 && s2 > 0.0 && s1.is_finite() && s2.is_finite()) {
            return Err(Error::InvalidInput(format!("spacings must be positive, got {s1}, {s2}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidInput(format!("contrast must lie in (0, 1), got {delta}")));
        }
        if !v_b.is_finite() || v_b.norm() == 0.0 {
            return Err(Error::InvalidInput("wave speed must be finite and nonzero".into()));
        }
        Ok(Self { m, s1, s2, v_b, delta })
    }

    pub fn n(&self) -> usize {
        4 * self.m + 1
    }

    /// The `N − 1` spacings, left to right.
    pub fn spacings(&self) -> Vec<f64> {
        let right: Vec<f64> = (0..2 * self.m).map(|i| if i % 2 == 0 { self.s2 } else { self.s1 }).collect();
        right.iter().rev().chain(&right).copied().collect()
    }

    /// Bulk dimer cell `(α; β₁, β₂)` of the right half, scaled by `v_b²`.
    pub fn bulk_cell(&self) -> Result<UnitCell> {
        let v2 = self.v_b * self.v_b;
        let alpha = v2 * (1.0 / self.s1 + 1.0 / self.s2);
        UnitCell::symmetric(vec![alpha, alpha], vec![v2 * (-1.0 / self.s1), v2 * (-1.0 / self.s2)])
    }

    /// Shared-site interface whose `m`-cell assembly equals the generalized
    /// capacitance matrix up to the two boundary corners.
    pub fn interface_spec(&self) -> Result<InterfaceSpec> {
        let v2 = self.v_b * self.v_b;
        let beta2 = v2 * (-1.0 / self.s2);
        InterfaceSpec::shared_site(self.bulk_cell()?, v2 * (2.0 / self.s2), beta2, beta2)
    }

    /// Lower and upper edge of the bulk gap of `C` around `α`:
    /// `α ∓ |1/s1 − 1/s2|`.
    pub fn bulk_gap(&self) -> (f64, f64) {
        let alpha = 1.0 / self.s1 + 1.0 / self.s2;
        let d = (1.0 / self.s1 - 1.0 / self.s2).abs();
        (alpha - d, alpha + d)
    }
}

pub fn capacitance_from_spacings(spacings: &[f64]) -> Result<TridiagonalMatrix> {
    if spacings.is_empty() || spacings.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidInput("spacings must be a nonempty list of positive numbers".into()));
    }
    let n = spacings.len() + 1;
    let inv: Vec<f64> = spacings.iter().map(|s| 1.0 / s).collect();
    let diag = (0..n)
        .map(|i| {
            let left = if i > 0 { inv[i - 1] } else { 0.0 };
            let right = if i + 1 < n { inv[i] } else { 0.0 };
            C64::new(left + right, 0.0)
        })
        .collect();
    let off: Vec<C64> = inv.iter().map(|x| C64::new(-x, 0.0)).collect();
    TridiagonalMatrix::symmetric(diag, off)
}

pub fn capacitance_matrix(chain: &ResonatorChain) -> Result<TridiagonalMatrix> {
    capacitance_from_spacings(&chain.spacings())
}

fn scaled(t: &TridiagonalMatrix, f: C64) -> TridiagonalMatrix {
    TridiagonalMatrix {
        diag: t.diag.iter().map(|x| x * f).collect(),
        lower: t.lower.iter().map(|x| x * f).collect(),
        upper: t.upper.iter().map(|x| x * f).collect(),
    }
}

pub fn generalized_capacitance(chain: &ResonatorChain) -> Result<TridiagonalMatrix> {
    Ok(scaled(&capacitance_matrix(chain)?, chain.v_b * chain.v_b))
}

/// Capacitance matrix with only the interface entries replaced as if both
/// spacings next to the centre were `s_int`: `η = 2/s_int`, `q = s = −1/s_int`.
/// The bulk on both sides is left untouched.
pub fn capacitance_with_interface(chain: &ResonatorChain, s_int: f64) -> Result<TridiagonalMatrix> {
    if !(s_int > 0.0 && s_int.is_finite()) {
        return Err(Error::InvalidInput(format!("interface spacing must be positive, got {s_int}")));
    }
    let mut c = capacitance_matrix(chain)?;
    let center = 2 * chain.m;
    c.diag[center] = C64::new(2.0 / s_int, 0.0);
    for idx in [center - 1, center] {
        c.lower[idx] = C64::new(-1.0 / s_int, 0.0);
        c.upper[idx] = C64::new(-1.0 / s_int, 0.0);
    }
    Ok(c)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonanceSet {
    /// Generalized capacitance eigenvalues.
    pub lambda: Vec<C64>,
    /// `ω = √(δλ)`, principal branch, index-aligned with `lambda`.
    pub omega: Vec<C64>,
    /// Smallest pairwise eigenvalue gap; below `10⁻⁸` the reduction's
    /// simplicity hypothesis fails.
    pub min_gap: f64,
}

impl ResonanceSet {
    pub fn is_simple(&self) -> bool {
        self.min_gap > 1e-8
    }
}

pub fn resonances(chain: &ResonatorChain) -> Result<ResonanceSet> {
    let lambda = eigs_tridiagonal(&generalized_capacitance(chain)?, false)?.values;
    let omega = lambda.iter().map(|l| (chain.delta * l).sqrt()).collect();
    let mut min_gap = f64::INFINITY;
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            min_gap = min_gap.min((lambda[i] - lambda[j]).norm());
        }
    }
    Ok(ResonanceSet { lambda, omega, min_gap })
}

/// Eigenvalue of `C` strictly inside the bulk gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapMode {
    /// Generalized capacitance eigenvalue `v_b² μ`.
    pub lambda: C64,
    /// Eigenvalue `μ` of the real capacitance matrix.
    pub mu: f64,
    pub parity: Parity,
    /// Distance from `μ` to the nearer gap edge.
    pub margin: f64,
    pub vector: Vec<C64>,
}

/// Gap modes of `c` (a real capacitance matrix for `chain`'s bulk) with
/// margin above `min_margin`.
pub fn gap_modes(chain: &ResonatorChain, c: &TridiagonalMatrix, min_margin: f64) -> Result<Vec<GapMode>> {
    let (lo, hi) = chain.bulk_gap();
    let eig = eigs_tridiagonal(c, true)?;
    let v2 = chain.v_b * chain.v_b;
    let mut out = Vec::new();
    for (i, &mu) in eig.values.iter().enumerate() {
        let margin = (mu.re - lo).min(hi - mu.re);
        if margin > min_margin {
            let w = eig.vector(i).expect("vectors requested");
            out.push(GapMode { lambda: v2 * mu, mu: mu.re, parity: classify_parity(&w), margin, vector: w });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    /// Interface spacing values `s_int`.
    InterfaceSpacings(Vec<f64>),
    /// Multiplicative noise `s ↦ s(1 + u)`, `u ~ U(−level, level)`, on every
    /// spacing; `trials` realizations per level.
    AllSpacings { levels: Vec<f64>, trials: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param_value: f64,
    pub trial: usize,
    pub eig_index: usize,
    pub value: C64,
}

/// Generalized capacitance spectra along a perturbation family.
pub fn robustness_sweep(chain: &ResonatorChain, perturbation: &Perturbation) -> Result<Vec<SweepRow>> {
    let v2 = chain.v_b * chain.v_b;
    let mut rows = Vec::new();
    let mut push = |param: f64, trial: usize, c: &TridiagonalMatrix| -> Result<()> {
        let vals = eigs_tridiagonal(&scaled(c, v2), false)?.values;
        rows.extend(vals.into_iter().enumerate().map(|(i, value)| SweepRow { param_value: param, trial, eig_index: i, value }));
        Ok(())
    };
    match perturbation {
        Perturbation::InterfaceSpacings(values) => {
            for &s_int in values {
                push(s_int, 0, &capacitance_with_interface(chain, s_int)?)?;
            }
        }
        Perturbation::AllSpacings { levels, trials, seed } => {
            let base = chain.spacings();
            for (li, &level) in levels.iter().enumerate() {
                if !(0.0..1.0).contains(&level) {
                    return Err(Error::InvalidInput(format!("noise level must lie in [0, 1), got {level}")));
                }
                for trial in 0..*trials {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    rng.set_stream((li * trials + trial) as u64);
                    let sp: Vec<f64> = base
                        .iter()
                        .map(|&s| if level > 0.0 { s * (1.0 + rng.gen_range(-level..level)) } else { s })
                        .collect();
                    push(level, trial, &capacitance_from_spacings(&sp)?)?;
                }
            }
        }
    }
    Ok(rows)
}
