//! Chiral interface chains with multiplicatively disordered couplings.
//!
//! A chain has a zero diagonal and a shared centre site. Reading outward from
//! the centre on either side, the bonds alternate `b, a, b, a, …` with the
//! `2k'`-periodic base pattern `b₁, a₁, b₂, a₂, …, b_{k'}, a_{k'}`, and every
//! bond is multiplied by its own `1 + u`, `u ~ U(−d, d)`. Each side holds
//! `2k'm + 1` sites, so `n = 4k'm + 3` is always odd.
//!
//! The zero mode vanishes at even distance from the centre. At odd distance
//! `2i + 1` it equals `z_i` with `z₀ = 1` and `z_i = −a_{i−1} z_{i−1} / b_i`.

use crate::numerics::{eigs_tridiagonal, TridiagonalMatrix};
use crate::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct DisorderConfig {
    base_a: Vec<C64>,
    base_b: Vec<C64>,
    d: f64,
    m: usize,
    seed: u64,
    trials: usize,
}

#[derive(Serialize, Deserialize)]
struct RawConfig {
    base_a: Vec<C64>,
    base_b: Vec<C64>,
    d: f64,
    m: usize,
    seed: u64,
    #[serde(default = "one")]
    trials: usize,
}

fn one() -> usize {
    1
}

impl TryFrom<RawConfig> for DisorderConfig {
    type Error = Error;
    fn try_from(r: RawConfig) -> Result<Self> {
        DisorderConfig::new(r.base_a, r.base_b, r.d, r.m, r.seed, r.trials)
    }
}

impl From<DisorderConfig> for RawConfig {
    fn from(c: DisorderConfig) -> Self {
        RawConfig { base_a: c.base_a, base_b: c.base_b, d: c.d, m: c.m, seed: c.seed, trials: c.trials }
    }
}

impl DisorderConfig {
    pub fn new(base_a: Vec<C64>, base_b: Vec<C64>, d: f64, m: usize, seed: u64, trials: usize) -> Result<Self> {
        if base_a.is_empty() || base_a.len() != base_b.len() {
            return Err(Error::InvalidInput(format!(
                "base couplings need equal nonzero lengths, got {} and {}",
                base_a.len(),
                base_b.len()
            )));
        }
        if base_a.iter().chain(&base_b).any(|c| !c.is_finite() || c.norm() == 0.0) {
            return Err(Error::InvalidInput("base couplings must be finite and nonzero".into()));
        }
        // d < 1 keeps every 1 + u positive, so bonds keep their phase.
        if !(0.0..1.0).contains(&d) {
            return Err(Error::InvalidInput(format!("disorder amplitude must lie in [0, 1), got {d}")));
        }
        if m == 0 || trials == 0 {
            return Err(Error::InvalidInput("m and trials must be at least 1".into()));
        }
        Ok(Self { base_a, base_b, d, m, seed, trials })
    }

    /// Two-periodic chain `a, b` with `m` dimers per side.
    pub fn dimer(a: C64, b: C64, d: f64, m: usize, seed: u64, trials: usize) -> Result<Self> {
        Self::new(vec![a], vec![b], d, m, seed, trials)
    }

    pub fn base_a(&self) -> &[C64] {
        &self.base_a
    }

    pub fn base_b(&self) -> &[C64] {
        &self.base_b
    }

    /// Number of dimers `k'` in one period.
    pub fn period(&self) -> usize {
        self.base_a.len()
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn with_d(&self, d: f64) -> Result<Self> {
        Self::new(self.base_a.clone(), self.base_b.clone(), d, self.m, self.seed, self.trials)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn with_trials(&self, trials: usize) -> Result<Self> {
        Self::new(self.base_a.clone(), self.base_b.clone(), self.d, self.m, self.seed, trials)
    }

    /// Chain dimension `4k'm + 3`.
    pub fn n(&self) -> usize {
        4 * self.period() * self.m + 3
    }

    /// `ln|a₁⋯a_{k'} / (b₁⋯b_{k'})|`, the decay rate per block of `k'` dimers.
    pub fn theoretical_rate(&self) -> f64 {
        self.base_a.iter().map(|a| a.norm().ln()).sum::<f64>() - self.base_b.iter().map(|b| b.norm().ln()).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left = 0,
    Right = 1,
}

/// Draws bonds for one realization. Each bond's factor depends only on
/// `(seed, realization, side, position)`, so chains of any length and the
/// Floquet process agree bond by bond.
struct Bonds<'a> {
    cfg: &'a DisorderConfig,
    rng: ChaCha8Rng,
}

impl<'a> Bonds<'a> {
    fn new(cfg: &'a DisorderConfig, realization: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(realization);
        Self { cfg, rng }
    }

    /// Bond at outward position `p` (0 is the centre bond).
    fn get(&mut self, side: Side, p: usize) -> C64 {
        let k = self.cfg.period();
        let base = if p % 2 == 0 { self.cfg.base_b[(p / 2) % k] } else { self.cfg.base_a[(p / 2) % k] };
        if self.cfg.d == 0.0 {
            return base;
        }
        // One f64 draw consumes two 32-bit words.
        let key = ((p as u128) << 1) | side as u128;
        self.rng.set_word_pos(2 * key);
        base * (1.0 + self.rng.gen_range(-self.cfg.d..self.cfg.d))
    }
}

pub fn build_disordered_chain(cfg: &DisorderConfig, realization: u64) -> TridiagonalMatrix {
    let per_side = 2 * cfg.period() * cfg.m + 1;
    let n = 2 * per_side + 1;
    let center = per_side;
    let mut bonds = Bonds::new(cfg, realization);
    let mut off = vec![C64::new(0.0, 0.0); n - 1];
    for p in 0..per_side {
        // Right bond p joins centre + p and centre + p + 1; left joins centre − p − 1 and centre − p.
        off[center + p] = bonds.get(Side::Right, p);
        off[center - 1 - p] = bonds.get(Side::Left, p);
    }
    TridiagonalMatrix::symmetric(vec![C64::new(0.0, 0.0); n], off).expect("lengths match by construction")
}

#[derive(Debug, Clone)]
pub struct ZeroMode {
    pub lambda: C64,
    pub vector: Vec<C64>,
    /// `|λ₀| / ‖M‖_F`.
    pub relative: f64,
}

/// Eigenpair closest to 0. For odd `n` it always exists; for even `n` it is
/// reported only when `|λ₀| ≤ 10⁻¹² ‖M‖_F`.
pub fn zero_mode(chain: &TridiagonalMatrix) -> Result<Option<ZeroMode>> {
    if chain.diag.iter().any(|x| *x != C64::new(0.0, 0.0)) {
        return Err(Error::InvalidInput("zero mode needs a zero diagonal".into()));
    }
    let eig = eigs_tridiagonal(chain, true)?;
    let i = eig.nearest(C64::new(0.0, 0.0)).expect("n >= 1");
    let norm = chain.frobenius_norm();
    let relative = if norm > 0.0 { eig.values[i].norm() / norm } else { 0.0 };
    if chain.n() % 2 == 0 && relative > ZERO_TOL {
        return Ok(None);
    }
    Ok(Some(ZeroMode { lambda: eig.values[i], vector: eig.vector(i).expect("vectors requested"), relative }))
}

/// `z₀, …, z_{steps−1}` on the right side of `realization`.
pub fn floquet_process(cfg: &DisorderConfig, realization: u64, steps: usize) -> Vec<C64> {
    let mut bonds = Bonds::new(cfg, realization);
    let mut z = Vec::with_capacity(steps);
    let mut cur = C64::new(1.0, 0.0);
    for i in 0..steps {
        if i > 0 {
            cur = -bonds.get(Side::Right, 2 * i - 1) * cur / bonds.get(Side::Right, 2 * i);
        }
        z.push(cur);
    }
    z
}

/// `ln|z̃_j|` for the block process `z̃_j = z_{k'j}`, `j = 0..=blocks`, summed
/// in log form so long runs cannot underflow.
fn block_log_process(cfg: &DisorderConfig, realization: u64, blocks: usize) -> Vec<f64> {
    let k = cfg.period();
    let mut bonds = Bonds::new(cfg, realization);
    let mut out = Vec::with_capacity(blocks + 1);
    let mut acc = 0.0;
    out.push(acc);
    for i in 1..=k * blocks {
        acc += bonds.get(Side::Right, 2 * i - 1).norm().ln() - bonds.get(Side::Right, 2 * i).norm().ln();
        if i % k == 0 {
            out.push(acc);
        }
    }
    out
}

/// Least-squares slope of `y` against `0, 1, …`.
fn ls_slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (v - ym);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Decay rates per block of `k'` dimers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayStats {
    pub per_trial_rates: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation across trials (0 for a single trial).
    pub std: f64,
    /// `std / √trials`.
    pub stderr: f64,
    pub theoretical: f64,
}

/// Per trial, the least-squares slope of `ln|z̃_j|` over the `m` blocks of the
/// right side.
pub fn decay_rate_stats(cfg: &DisorderConfig) -> DecayStats {
    let rates: Vec<f64> = (0..cfg.trials as u64).map(|t| ls_slope(&block_log_process(cfg, t, cfg.m))).collect();
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    let std = if rates.len() > 1 {
        (rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    DecayStats { stderr: std / n.sqrt(), per_trial_rates: rates, mean, std, theoretical: cfg.theoretical_rate() }
}

/// Cells nearest the interface and the boundary left out of envelope fits.
pub const FIT_SKIP: usize = 2;

/// Decay rate per block of `k_block` dimers of the right half of a zero mode:
/// the slope of `ln max|w|` over blocks of `2 k_block` sites, leaving out
/// [`FIT_SKIP`] blocks at each end. The left half is fitted by passing the
/// reversed vector.
pub fn eigenvector_decay_fit(vector: &[C64], k_block: usize) -> Result<f64> {
    let n = vector.len();
    if n % 2 == 0 || k_block == 0 {
        return Err(Error::InvalidInput(format!("need odd length and k_block >= 1, got n = {n}, k_block = {k_block}")));
    }
    let right = &vector[n / 2 + 1..];
    let env: Vec<f64> = right.chunks_exact(2 * k_block).map(|c| c.iter().map(|x| x.norm()).fold(0.0, f64::max)).collect();
    if env.len() < 2 * FIT_SKIP + 2 {
        return Err(Error::InvalidInput(format!("only {} full blocks per side, need {}", env.len(), 2 * FIT_SKIP + 2)));
    }
    let window = &env[FIT_SKIP..env.len() - FIT_SKIP];
    if window.contains(&0.0) {
        return Err(Error::Degenerate("envelope vanishes on a fitted block".into()));
    }
    Ok(ls_slope(&window.iter().map(|e| e.ln()).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        assert!((ls_slope(&[1.0, 3.0, 5.0, 7.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bond_draws_are_position_keyed() {
        let cfg = DisorderConfig::dimer(C64::new(1.0, 0.0), C64::new(2.0, 0.0), 0.4, 3, 9, 1).unwrap();
        let mut a = Bonds::new(&cfg, 4);
        let late = a.get(Side::Left, 7);
        let early = a.get(Side::Right, 1);
        let mut b = Bonds::new(&cfg, 4);
        assert_eq!(b.get(Side::Right, 1), early);
        assert_eq!(b.get(Side::Left, 7), late);
    }
}
