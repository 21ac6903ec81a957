//! Interfaces between a bulk cell and its mirror image.
//!
//! Shared-site assemblies have size `2mk + 1`: the interface site sits at index
//! `mk` with diagonal `η`, coupling `q` to the left and `s` to the right.
//! Common-coupling assemblies have size `2mk` with a single bond `q` joining
//! the two halves. In both the left half is the entrywise reflection of the
//! right half, so with `q = s` the matrix satisfies `M[i][j] = M[n−1−i][n−1−j]`.

use crate::edge::{bloch_data, edge_spectrum, quasiperiodic_extension};
use crate::numerics::{eigs_tridiagonal, norm2, EigenDecomposition, TridiagonalMatrix};
use crate::spectra::{gamma_set, SpectralCurve, TruncationSpectrum};
use crate::symbol::UnitCell;
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterfaceKind {
    SharedSite { eta: C64, q: C64, s: C64 },
    CommonCoupling { q: C64 },
}

/// Right bulk `cell` and the interface couplings. The left bulk is the mirror.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct InterfaceSpec {
    pub cell: UnitCell,
    pub kind: InterfaceKind,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "snake_case")]
enum KindTag {
    SharedSite,
    CommonCoupling,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    #[serde(flatten)]
    cell: UnitCell,
    kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<C64>,
    q: C64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<C64>,
}

impl TryFrom<RawSpec> for InterfaceSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        let kind = match raw.kind {
            KindTag::SharedSite => InterfaceKind::SharedSite {
                eta: raw.eta.ok_or_else(|| Error::InvalidInput("shared_site needs eta".into()))?,
                q: raw.q,
                s: raw.s.unwrap_or(raw.q),
            },
            KindTag::CommonCoupling => InterfaceKind::CommonCoupling { q: raw.q },
        };
        InterfaceSpec::new(raw.cell, kind)
    }
}

impl From<InterfaceSpec> for RawSpec {
    fn from(spec: InterfaceSpec) -> Self {
        match spec.kind {
            InterfaceKind::SharedSite { eta, q, s } => {
                RawSpec { cell: spec.cell, kind: KindTag::SharedSite, eta: Some(eta), q, s: Some(s) }
            }
            InterfaceKind::CommonCoupling { q } => {
                RawSpec { cell: spec.cell, kind: KindTag::CommonCoupling, eta: None, q, s: None }
            }
        }
    }
}

impl InterfaceSpec {
    /// Validated constructor: interface couplings must be nonzero and finite.
    /// The fields are public so decoupled diagnostic assemblies stay possible.
    pub fn new(cell: UnitCell, kind: InterfaceKind) -> Result<Self> {
        let couplings = match kind {
            InterfaceKind::SharedSite { eta, q, s } => {
                if !eta.is_finite() {
                    return Err(Error::InvalidInput("non-finite eta".into()));
                }
                vec![q, s]
            }
            InterfaceKind::CommonCoupling { q } => vec![q],
        };
        if couplings.iter().any(|z| !z.is_finite() || z.norm() == 0.0) {
            return Err(Error::InvalidInput("interface couplings must be nonzero and finite".into()));
        }
        Ok(Self { cell, kind })
    }

    pub fn shared_site(cell: UnitCell, eta: C64, q: C64, s: C64) -> Result<Self> {
        Self::new(cell, InterfaceKind::SharedSite { eta, q, s })
    }

    pub fn common_coupling(cell: UnitCell, q: C64) -> Result<Self> {
        Self::new(cell, InterfaceKind::CommonCoupling { q })
    }

    /// Matrix size for `m` cells per side.
    pub fn size(&self, m: usize) -> usize {
        let half = m * self.cell.k();
        match self.kind {
            InterfaceKind::SharedSite { .. } => 2 * half + 1,
            InterfaceKind::CommonCoupling { .. } => 2 * half,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Monopole,
    Dipole,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    EdgeInduced,
    Matched,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterfaceMode {
    pub lambda: C64,
    pub kind: ModeKind,
    pub parity: Parity,
    /// Entries in assembly order, symmetric about the interface.
    pub vector: Vec<C64>,
    /// `ln` of the per-cell decay factor, positive for localized modes.
    pub decay_rate: f64,
    /// `‖Mw − λw‖ / ‖w‖` on the assembly used for verification.
    pub residual: f64,
    /// Distance from `λ` to the nearest eigenvalue of that assembly.
    pub truncation_distance: f64,
}

/// Axis-aligned rectangle in ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRegion {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl SearchRegion {
    pub fn contains(&self, z: C64) -> bool {
        (self.re.0..=self.re.1).contains(&z.re) && (self.im.0..=self.im.1).contains(&z.im)
    }

    fn grid(&self, n: usize) -> Vec<C64> {
        let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| C64::new(step(self.re.0, self.re.1, i), step(self.im.0, self.im.1, j)))
            .collect()
    }
}

pub fn assemble_interface(spec: &InterfaceSpec, m: usize) -> Result<TridiagonalMatrix> {
    if m == 0 {
        return Err(Error::InvalidInput("interface assembly needs m >= 1".into()));
    }
    let cell = &spec.cell;
    let k = cell.k();
    let half = m * k;
    let (da, up, lo): (Vec<C64>, Vec<C64>, Vec<C64>) = (
        (0..half).map(|i| cell.a()[i % k]).collect(),
        (0..half - 1).map(|i| cell.b()[i % k]).collect(),
        (0..half - 1).map(|i| cell.c()[i % k]).collect(),
    );
    let mut diag: Vec<C64> = da.iter().rev().copied().collect();
    // Reflection swaps the roles of the upper and lower couplings.
    let mut lower: Vec<C64> = up.iter().rev().copied().collect();
    let mut upper: Vec<C64> = lo.iter().rev().copied().collect();
    match spec.kind {
        InterfaceKind::SharedSite { eta, q, s } => {
            diag.push(eta);
            lower.extend([q, s]);
            upper.extend([q, s]);
        }
        InterfaceKind::CommonCoupling { q } => {
            lower.push(q);
            upper.push(q);
        }
    }
    diag.extend(da);
    lower.extend(lo);
    upper.extend(up);
    TridiagonalMatrix::new(diag, lower, upper)
}

pub fn interface_spectrum(spec: &InterfaceSpec, m: usize) -> Result<TruncationSpectrum> {
    let t = assemble_interface(spec, m)?;
    Ok(TruncationSpectrum { n: t.n(), values: eigs_tridiagonal(&t, false)?.values })
}

pub fn interface_eigensystem(spec: &InterfaceSpec, m: usize) -> Result<EigenDecomposition> {
    eigs_tridiagonal(&assemble_interface(spec, m)?, true)
}

fn reflection_defect(w: &[C64], sign: f64) -> f64 {
    let n = w.len();
    let d: Vec<C64> = (0..n).map(|i| w[i] - sign * w[n - 1 - i]).collect();
    norm2(&d)
}

/// Parity under the reflection `i ↦ n − 1 − i`, tolerance `10⁻⁶` relative.
pub fn classify_parity(w: &[C64]) -> Parity {
    let nrm = norm2(w);
    if nrm == 0.0 {
        return Parity::None;
    }
    if reflection_defect(w, 1.0) <= 1e-6 * nrm {
        Parity::Monopole
    } else if reflection_defect(w, -1.0) <= 1e-6 * nrm {
        Parity::Dipole
    } else {
        Parity::None
    }
}

fn residual(t: &TridiagonalMatrix, lambda: C64, w: &[C64]) -> f64 {
    let tw = t.mul_vec(w);
    let r: Vec<C64> = tw.iter().zip(w).map(|(a, b)| a - lambda * b).collect();
    norm2(&r) / norm2(w)
}

fn nearest_distance(values: &[C64], lambda: C64) -> f64 {
    values.iter().map(|v| (v - lambda).norm()).fold(f64::INFINITY, f64::min)
}

/// Antisymmetric mode built from an edge mode of the right bulk: `w₀ = 0`,
/// right half the quasiperiodic extension, left half its negated mirror.
pub fn edge_induced_mode(spec: &InterfaceSpec, m: usize) -> Result<InterfaceMode> {
    let InterfaceKind::SharedSite { q, s, .. } = spec.kind else {
        return Err(Error::InvalidInput("edge-induced modes need a shared-site interface".into()));
    };
    if (q - s).norm() > 1e-14 * q.norm().max(1.0) {
        return Err(Error::InvalidInput("edge-induced modes need q = s".into()));
    }
    let rep = edge_spectrum(&spec.cell)?
        .into_iter()
        .filter(|r| r.is_edge)
        .max_by(|a, b| {
            let za = a.floquet_z.map_or(0.0, |z| z.norm());
            let zb = b.floquet_z.map_or(0.0, |z| z.norm());
            za.total_cmp(&zb)
        })
        .ok_or_else(|| Error::InvalidInput("bulk cell has no edge mode".into()))?;
    let z = rep.floquet_z.expect("edge reports carry a finite z");
    let bd = bloch_data(&spec.cell, rep.lambda)?;
    let right = quasiperiodic_extension(&bd.v, z, m);
    let mut w: Vec<C64> = right.iter().rev().map(|x| -x).collect();
    w.push(ZERO);
    w.extend(right);
    let nrm = norm2(&w);
    w.iter_mut().for_each(|x| *x /= nrm);
    let t = assemble_interface(spec, m)?;
    let res = residual(&t, rep.lambda, &w);
    let bound = 10.0 * z.norm().powi(-(m as i32));
    if res > bound.max(1e-12) {
        return Err(Error::Consistency(format!("edge-induced residual {res:e} exceeds {bound:e}")));
    }
    let values = eigs_tridiagonal(&t, false)?.values;
    Ok(InterfaceMode {
        lambda: rep.lambda,
        kind: ModeKind::EdgeInduced,
        parity: classify_parity(&w),
        vector: w,
        decay_rate: z.norm().ln(),
        residual: res,
        truncation_distance: nearest_distance(&values, rep.lambda),
    })
}

/// Decaying Bloch data scaled so that `v_k = 1`. Fails when `v_k ≈ 0`, which
/// marks an edge-type point.
fn scaled_decaying(cell: &UnitCell, lambda: C64) -> Result<(C64, Vec<C64>)> {
    let sol = cell.decaying_solution(lambda)?;
    let k = cell.k();
    let vk = sol.v[k - 1];
    if vk.norm() <= 1e-10 * norm2(&sol.v) {
        return Err(Error::Degenerate(format!("v_k vanishes at {lambda}")));
    }
    Ok((sol.z1, sol.v.iter().map(|x| x / vk).collect()))
}

/// `F(λ) = 2q² z₁ v₁ / (b_k v_k) − λ + η`; its zeros off Γ are the eigenvalues
/// of monopole interface modes.
pub fn matched_f(spec: &InterfaceSpec, lambda: C64) -> Result<C64> {
    let InterfaceKind::SharedSite { eta, q, .. } = spec.kind else {
        return Err(Error::InvalidInput("F needs a shared-site interface".into()));
    };
    let cell = &spec.cell;
    let (z1, v) = scaled_decaying(cell, lambda)?;
    Ok(2.0 * q * q * z1 * v[0] / cell.b()[cell.k() - 1] - lambda + eta)
}

/// `v₂/v₁ + (a q + a₁ − λ)/b₁` for the common-coupling interface, `a = ±1`.
pub fn common_coupling_g(spec: &InterfaceSpec, lambda: C64, sign: f64) -> Result<C64> {
    let InterfaceKind::CommonCoupling { q } = spec.kind else {
        return Err(Error::InvalidInput("common-coupling condition needs that kind".into()));
    };
    let cell = &spec.cell;
    let (_, v) = scaled_decaying(cell, lambda)?;
    if cell.k() < 2 {
        return Err(Error::InvalidInput("common-coupling condition needs k >= 2".into()));
    }
    if v[0].norm() <= 1e-12 {
        return Err(Error::Degenerate(format!("v_1 vanishes at {lambda}")));
    }
    Ok(v[1] / v[0] + (sign * q + cell.a()[0] - lambda) / cell.b()[0])
}

/// Newton iteration with a central-difference derivative.
fn newton<F>(f: F, start: C64) -> Option<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut x = start;
    for _ in 0..60 {
        let fx = f(x).ok()?;
        let h = 1e-6 * (1.0 + x.norm());
        let d = (f(x + h).ok()? - f(x - h).ok()?) / (2.0 * h);
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let dx = fx / d;
        x -= dx;
        if !x.is_finite() {
            return None;
        }
        if dx.norm() < 1e-14 * (1.0 + x.norm()) {
            break;
        }
    }
    Some(x)
}

/// Bounding box of the Gershgorin discs of the assembly, which contains every
/// eigenvalue for any `m`. Isolated modes can sit well outside the hull of Γ.
pub fn default_search_region(spec: &InterfaceSpec) -> SearchRegion {
    let cell = &spec.cell;
    let k = cell.k();
    let mut discs: Vec<(C64, f64)> = (0..k)
        .map(|i| (cell.a()[i], cell.b()[i].norm() + cell.c()[(i + k - 1) % k].norm()))
        .collect();
    match spec.kind {
        InterfaceKind::SharedSite { eta, q, s } => {
            discs.push((eta, q.norm() + s.norm()));
            discs.push((cell.a()[0], cell.b()[0].norm() + s.norm().max(q.norm())));
        }
        InterfaceKind::CommonCoupling { q } => discs.push((cell.a()[0], cell.b()[0].norm() + q.norm())),
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (c, r) in discs {
        x0 = x0.min(c.re - r);
        x1 = x1.max(c.re + r);
        y0 = y0.min(c.im - r);
        y1 = y1.max(c.im + r);
    }
    SearchRegion { re: (x0, x1), im: (y0, y1) }
}

const GAMMA_MARGIN: f64 = 1e-3;
const START_GRID: usize = 20;

fn find_roots<F>(f: F, region: &SearchRegion, gamma: &SpectralCurve) -> Vec<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut roots: Vec<C64> = Vec::new();
    for start in region.grid(START_GRID) {
        if gamma.distance_to(start) < GAMMA_MARGIN {
            continue;
        }
        let Some(x) = newton(&f, start) else { continue };
        let ok = f(x).map(|v| v.norm() <= 1e-9).unwrap_or(false);
        if ok && region.contains(x) && gamma.distance_to(x) > GAMMA_MARGIN && roots.iter().all(|r| (r - x).norm() > 1e-7) {
            roots.push(x);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Right-half blocks `z₁ʲ v` for `m` cells.
fn decaying_half(v: &[C64], z1: C64, m: usize) -> Vec<C64> {
    quasiperiodic_extension(v, ONE / z1, m)
}

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn finish_mode(t: &TridiagonalMatrix, values: &[C64], lambda: C64, mut w: Vec<C64>, z1: C64) -> InterfaceMode {
    let nrm = norm2(&w);
    w.iter_mut().for_each(|x| *x /= nrm);
    InterfaceMode {
        lambda,
        kind: ModeKind::Matched,
        parity: classify_parity(&w),
        residual: residual(t, lambda, &w),
        vector: w,
        decay_rate: -z1.norm().ln(),
        truncation_distance: nearest_distance(values, lambda),
    }
}

/// Zeros of [`matched_f`] in `region` (default: [`default_search_region`]),
/// each with its monopole vector verified on the `m`-cell assembly.
pub fn matched_interface_roots(spec: &InterfaceSpec, region: Option<SearchRegion>, m: usize) -> Result<Vec<InterfaceMode>> {
    let InterfaceKind::SharedSite { q, .. } = spec.kind else {
        return Err(Error::InvalidInput("matched roots need a shared-site interface".into()));
    };
    let cell = &spec.cell;
    if !cell.is_symmetric() {
        return Err(Error::InvalidInput("matched roots need a symmetric cell".into()));
    }
    let region = region.unwrap_or_else(|| default_search_region(spec));
    let gamma = gamma_set(cell, 512)?;
    let roots = find_roots(|l| matched_f(spec, l), &region, &gamma);
    if roots.is_empty() {
        return Ok(vec![]);
    }
    let t = assemble_interface(spec, m)?;
    let values = eigs_tridiagonal(&t, false)?.values;
    let k = cell.k();
    roots
        .into_iter()
        .map(|lambda| {
            let (z1, v) = scaled_decaying(cell, lambda)?;
            let right = decaying_half(&v, z1, m);
            let mut w: Vec<C64> = right.iter().rev().copied().collect();
            w.push(cell.b()[k - 1] * v[k - 1] / (q * z1));
            w.extend(right);
            Ok(finish_mode(&t, &values, lambda, w, z1))
        })
        .collect()
}

/// Zeros of [`common_coupling_g`] for `a = +1` (monopole-type) and `a = −1`
/// (dipole-type), verified on the `m`-cell assembly.
pub fn common_coupling_match(spec: &InterfaceSpec, region: Option<SearchRegion>, m: usize) -> Result<Vec<InterfaceMode>> {
    let InterfaceKind::CommonCoupling { .. } = spec.kind else {
        return Err(Error::InvalidInput("common-coupling match needs that kind".into()));
    };
    let cell = &spec.cell;
    if !cell.is_symmetric() {
        return Err(Error::InvalidInput("common-coupling match needs a symmetric cell".into()));
    }
    let region = region.unwrap_or_else(|| default_search_region(spec));
    let gamma = gamma_set(cell, 512)?;
    let mut found = Vec::new();
    for sign in [1.0, -1.0] {
        for lambda in find_roots(|l| common_coupling_g(spec, l, sign), &region, &gamma) {
            found.push((lambda, sign));
        }
    }
    if found.is_empty() {
        return Ok(vec![]);
    }
    let t = assemble_interface(spec, m)?;
    let values = eigs_tridiagonal(&t, false)?.values;
    found
        .into_iter()
        .map(|(lambda, sign)| {
            let (z1, v) = scaled_decaying(cell, lambda)?;
            let right = decaying_half(&v, z1, m);
            let mut w: Vec<C64> = right.iter().rev().map(|x| x * sign).collect();
            w.extend(right);
            Ok(finish_mode(&t, &values, lambda, w, z1))
        })
        .collect()
}

/// Eigenpairs of the `m`-cell assembly farther than `margin` from Γ, with
/// their parity.
pub fn isolated_modes(spec: &InterfaceSpec, m: usize, margin: f64) -> Result<Vec<(C64, Parity, Vec<C64>)>> {
    let gamma = gamma_set(&spec.cell, 512)?;
    let eig = interface_eigensystem(spec, m)?;
    let mut out = Vec::new();
    for (i, &lambda) in eig.values.iter().enumerate() {
        if crate::spectra::gamma_distance(&spec.cell, &gamma, lambda)? > margin {
            let w = eig.vector(i).expect("vectors requested");
            out.push((lambda, classify_parity(&w), w));
        }
    }
    Ok(out)
}
