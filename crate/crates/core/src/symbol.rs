//! Unit cells of tridiagonal k-Toeplitz operators and their symbol.
//!
//! A cell stores the diagonal `a`, superdiagonal `b` and subdiagonal `c`, each of
//! length `k`, with the usual 1-based names mapped to 0-based storage. The
//! symbol is
//!
//! ```text
//! f(z) = A0 + c_k z E_{1,k} + b_k z⁻¹ E_{k,1}
//! ```
//!
//! so that `z det(f(z) − λ) = (−1)^{k+1} ∏c · z² + g(λ) z + (−1)^{k+1} ∏b` and the
//! Bloch solutions of `(f(z) − λ) v = 0` satisfy `u_{i+k} = u_i / z`.

use crate::numerics::{det, null_vector, quadratic_roots, ComplexMatrix};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCell", into = "RawCell")]
pub struct UnitCell {
    a: Vec<C64>,
    b: Vec<C64>,
    c: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct RawCell {
    k: usize,
    a: Vec<C64>,
    b: Vec<C64>,
    c: Vec<C64>,
}

impl TryFrom<RawCell> for UnitCell {
    type Error = Error;
    fn try_from(raw: RawCell) -> Result<Self> {
        if raw.a.len() != raw.k {
            return Err(Error::InvalidInput(format!("k = {} but {} diagonal entries", raw.k, raw.a.len())));
        }
        UnitCell::new(raw.a, raw.b, raw.c)
    }
}

impl From<UnitCell> for RawCell {
    fn from(cell: UnitCell) -> Self {
        RawCell { k: cell.k(), a: cell.a, b: cell.b, c: cell.c }
    }
}

/// Coefficient matrices of `f(z) = am1 z⁻¹ + a0 + ap1 z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlocks {
    pub a0: ComplexMatrix,
    pub am1: ComplexMatrix,
    pub ap1: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VieteData {
    /// `(−1)^k ∏ b_i`.
    pub a_prod: C64,
    /// `√(∏ |b_i / c_i|)`, the common modulus of equal-modulus Floquet roots.
    pub r: f64,
}

/// Symmetrised cell with the diagonal similarity that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrized {
    pub cell: UnitCell,
    /// `d_1..d_k` with `d_1 = 1`; site `j k + i` of a truncation is scaled by
    /// `cell_factor^j d_i`.
    pub weights: Vec<C64>,
    pub cell_factor: C64,
}

impl Symmetrized {
    /// Weights `D` of the truncation with `m` cells, so that `D⁻¹ T_m D` is symmetric.
    pub fn truncation_weights(&self, m: usize) -> Vec<C64> {
        let mut out = Vec::with_capacity(m * self.weights.len());
        let mut f = ONE;
        for _ in 0..m {
            out.extend(self.weights.iter().map(|w| w * f));
            f *= self.cell_factor;
        }
        out
    }
}

impl UnitCell {
    pub fn new(a: Vec<C64>, b: Vec<C64>, c: Vec<C64>) -> Result<Self> {
        let k = a.len();
        if k == 0 {
            return Err(Error::InvalidInput("unit cell needs k >= 1".into()));
        }
        if b.len() != k || c.len() != k {
            return Err(Error::InvalidInput(format!(
                "coefficient lengths differ: a {k}, b {}, c {}",
                b.len(),
                c.len()
            )));
        }
        if a.iter().chain(&b).chain(&c).any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("non-finite cell coefficient".into()));
        }
        if b.iter().chain(&c).any(|z| z.norm() == 0.0) {
            return Err(Error::InvalidInput("couplings b and c must be nonzero".into()));
        }
        Ok(Self { a, b, c })
    }

    pub fn symmetric(a: Vec<C64>, b: Vec<C64>) -> Result<Self> {
        Self::new(a, b.clone(), b)
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[C64] {
        &self.a
    }

    pub fn b(&self) -> &[C64] {
        &self.b
    }

    pub fn c(&self) -> &[C64] {
        &self.c
    }

    pub fn is_symmetric(&self) -> bool {
        self.b.iter().zip(&self.c).all(|(b, c)| (b - c).norm() <= 1e-14 * b.norm().max(1.0))
    }

    /// The cell starting at site `shift` (0-based) instead of site 0.
    pub fn cyclic_shift(&self, shift: usize) -> Self {
        let k = self.k();
        let rot = |v: &[C64]| (0..k).map(|i| v[(i + shift) % k]).collect();
        Self { a: rot(&self.a), b: rot(&self.b), c: rot(&self.c) }
    }

    pub fn symbol_at(&self, z: C64) -> Result<ComplexMatrix> {
        if z.norm() == 0.0 || !z.is_finite() {
            return Err(Error::InvalidInput("symbol evaluated at z = 0".into()));
        }
        let k = self.k();
        if k == 1 {
            return Ok(ComplexMatrix::from_diag(&[self.a[0] + self.b[0] / z + self.c[0] * z]));
        }
        let mut f = self.blocks().a0;
        f[(0, k - 1)] += self.c[k - 1] * z;
        f[(k - 1, 0)] += self.b[k - 1] / z;
        Ok(f)
    }

    pub fn blocks(&self) -> SymbolBlocks {
        let k = self.k();
        let mut a0 = ComplexMatrix::from_diag(&self.a);
        for i in 0..k - 1 {
            a0[(i, i + 1)] = self.b[i];
            a0[(i + 1, i)] = self.c[i];
        }
        let mut am1 = ComplexMatrix::zeros(k, k);
        let mut ap1 = ComplexMatrix::zeros(k, k);
        am1[(k - 1, 0)] = self.b[k - 1];
        ap1[(0, k - 1)] = self.c[k - 1];
        SymbolBlocks { a0, am1, ap1 }
    }

    /// `(B0, B1)`: `A0` without its last, respectively first, row and column.
    /// Both are `0 × 0` when `k = 1`.
    pub fn principal_submatrices(&self) -> (ComplexMatrix, ComplexMatrix) {
        let a0 = self.blocks().a0;
        (a0.drop_last(), a0.drop_first())
    }

    /// `g(λ) = det(A0 − λ) − b_k² p(λ)` for symmetric cells, with `p` the
    /// determinant of rows and columns `2..k−1` of `A0 − λ`.
    pub fn g_poly(&self, lambda: C64) -> Result<C64> {
        if !self.is_symmetric() {
            return Err(Error::InvalidInput("g_poly needs a symmetric cell; symmetrize first".into()));
        }
        let k = self.k();
        let full = continuant(&self.a, &self.b, lambda);
        let p = match k {
            1 => ZERO,
            2 => ONE,
            _ => continuant(&self.a[1..k - 1], &self.b[1..k - 2], lambda),
        };
        Ok(full - self.b[k - 1] * self.b[k - 1] * p)
    }

    pub fn viete_data(&self) -> VieteData {
        let k = self.k();
        let prod: C64 = self.b.iter().product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let log_r: f64 = self.b.iter().zip(&self.c).map(|(b, c)| (b.norm() / c.norm()).ln()).sum::<f64>() * 0.5;
        VieteData { a_prod: prod * sign, r: log_r.exp() }
    }

    /// Diagonal similarity to the complex symmetric cell with couplings
    /// `√(b_i c_i)` (principal branch). Pairs with `b_i = c_i` are kept as they
    /// are, so symmetric cells map to themselves with unit weights.
    pub fn symmetrize(&self) -> Symmetrized {
        let k = self.k();
        let s: Vec<C64> = self
            .b
            .iter()
            .zip(&self.c)
            .map(|(&b, &c)| if b == c { b } else { (b * c).sqrt() })
            .collect();
        let mut weights = vec![ONE; k];
        for i in 1..k {
            weights[i] = weights[i - 1] * s[i - 1] / self.b[i - 1];
        }
        let cell_factor = weights[k - 1] * s[k - 1] / self.b[k - 1];
        let cell = Self { a: self.a.clone(), b: s.clone(), c: s };
        Symmetrized { cell, weights, cell_factor }
    }

    /// Coefficients `(c2, c1, c0)` of `z det(f(z) − λ)`, with `c1` from `det(f(1) − λ)`.
    pub fn floquet_coefficients(&self, lambda: C64) -> Result<(C64, C64, C64)> {
        let k = self.k();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let c2 = self.c.iter().product::<C64>() * sign;
        let c0 = self.b.iter().product::<C64>() * sign;
        let at_one = det(&self.symbol_at(ONE)?.shifted(lambda))?;
        Ok((c2, at_one - c2 - c0, c0))
    }

    /// Floquet roots `|z1| ≤ |z2|` of `det(f(z) − λ) = 0`.
    ///
    /// Computed from the rescaled monodromy of the three-term recurrence, which
    /// stays finite for large `k` where `∏ b` and `det(f(1) − λ)` overflow.
    pub fn floquet_roots(&self, lambda: C64) -> Result<(C64, C64)> {
        let k = self.k();
        let mut m = [[ONE, ZERO], [ZERO, ONE]];
        let mut log_scale = 0.0;
        for i in 0..k {
            let prev_c = self.c[(i + k - 1) % k];
            let t = [[(lambda - self.a[i]) / self.b[i], -prev_c / self.b[i]], [ONE, ZERO]];
            m = [
                [t[0][0] * m[0][0] + t[0][1] * m[1][0], t[0][0] * m[0][1] + t[0][1] * m[1][1]],
                [m[0][0], m[0][1]],
            ];
            let big = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
            if big > 1e100 || (big < 1e-100 && big > 0.0) {
                m.iter_mut().flatten().for_each(|z| *z /= big);
                log_scale += big.ln();
            }
        }
        // μ = e^{L} μ̃ with μ̃² − tr μ̃ + det e^{−2L} = 0; z = 1/μ.
        let tr = m[0][0] + m[1][1];
        let log_det: f64 = self.c.iter().zip(&self.b).map(|(c, b)| (c.norm() / b.norm()).ln()).sum();
        let det_phase: C64 = self.c.iter().zip(&self.b).map(|(c, b)| (c / b) / (c / b).norm()).product();
        let scaled_det = det_phase * (log_det - 2.0 * log_scale).exp();
        let (mu_small, mu_big) = quadratic_roots(ONE, -tr, scaled_det)?;
        if mu_small.norm() == 0.0 || !mu_small.is_finite() || !mu_big.is_finite() {
            return Err(Error::Degenerate("monodromy eigenvalue underflow".into()));
        }
        let unscale = (-log_scale).exp();
        let z1 = unscale / mu_big;
        let z2 = unscale / mu_small;
        Ok(crate::numerics::order_by_modulus(z1, z2))
    }

    /// Unit vector `v` with `(f(z) − λ) v ≈ 0`, and the relative residual.
    pub fn kernel_vector(&self, z: C64, lambda: C64) -> Result<(Vec<C64>, f64)> {
        null_vector(&self.symbol_at(z)?.shifted(lambda))
    }

    /// Floquet roots together with the Bloch vector of the larger root, which
    /// gives the solution decaying to the right (`u_{i+k} = u_i / z2`).
    pub fn decaying_solution(&self, lambda: C64) -> Result<DecayingSolution> {
        let (z1, z2) = self.floquet_roots(lambda)?;
        let (v, residual) = self.kernel_vector(z2, lambda)?;
        Ok(DecayingSolution { z1, z2, v, residual })
    }
}

#[derive(Debug, Clone)]
pub struct DecayingSolution {
    pub z1: C64,
    pub z2: C64,
    pub v: Vec<C64>,
    pub residual: f64,
}

/// Determinant of the tridiagonal matrix with diagonal `a − λ` and symmetric
/// off-diagonal `b` (first `a.len() − 1` entries used).
fn continuant(a: &[C64], b: &[C64], lambda: C64) -> C64 {
    let mut prev = ONE;
    let mut cur = a[0] - lambda;
    for i in 1..a.len() {
        let next = (a[i] - lambda) * cur - b[i - 1] * b[i - 1] * prev;
        prev = cur;
        cur = next;
    }
    cur
}
