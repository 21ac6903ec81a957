use super::Ctx;
use crate::svg::{Plot, Series, Style};
use crate::{CliError, CliResult};
use ktoeplitz::fdm::{assemble_fdm_cell, b0_convergence, band_edges, gap_grid, gaps, impedance_curve, FdmConfig};
use ktoeplitz::spectra::essential_spectrum;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdmRunConfig {
    #[serde(default)]
    pub description: Option<String>,
    pub fdm: FdmConfig,
    /// Grid sizes for the σ(B₀) convergence table; strictly increasing.
    #[serde(default)]
    pub k_list: Option<Vec<usize>>,
    /// Which gap (from the bottom) to sample F on.
    #[serde(default)]
    pub gap_index: usize,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_points() -> usize {
    201
}

fn default_samples() -> usize {
    64
}

#[derive(Serialize)]
struct BandRow {
    band_index: usize,
    lo: f64,
    hi: f64,
}

#[derive(Serialize)]
struct SampledRow {
    alpha: f64,
    band_index: usize,
    omega2: f64,
}

#[derive(Serialize)]
struct ImpedanceCsvRow {
    omega2: f64,
    re_f: f64,
    im_f: f64,
}

#[derive(Serialize)]
struct Summary {
    k: usize,
    bands: Vec<(f64, f64)>,
    gaps: Vec<(f64, f64)>,
    /// `None` when the requested gap does not exist.
    impedance_gap: Option<(f64, f64)>,
    re_f_changes_sign: Option<bool>,
}

/// Chebyshev-clustered fractions in `(0, 1)`, dense near both gap edges where
/// `F` varies fastest.
fn clustered_fractions(points: usize) -> Vec<f64> {
    (0..points).map(|j| 0.5 * (1.0 - (PI * (j as f64 + 0.5) / points as f64).cos())).collect()
}

pub fn run(cfg: FdmRunConfig, ctx: &mut Ctx) -> CliResult<()> {
    let samples = ctx.samples(cfg.samples);
    if cfg.points < 2 {
        return Err(CliError::Config("points must be at least 2".into()));
    }
    let cell = assemble_fdm_cell(&cfg.fdm);
    let bands = band_edges(&cell)?;
    let gs = gaps(&bands);
    let rows: Vec<BandRow> = bands.iter().enumerate().map(|(band_index, &(lo, hi))| BandRow { band_index, lo, hi }).collect();
    ctx.out.csv("bands.csv", &rows)?;

    let ess = essential_spectrum(&cell, samples)?;
    let sampled: Vec<SampledRow> =
        ess.rows().map(|(alpha, band_index, z)| SampledRow { alpha, band_index, omega2: z.re }).collect();
    ctx.out.csv("bands_sampled.csv", &sampled)?;

    if let Some(ks) = &cfg.k_list {
        let b0 = b0_convergence(&cfg.fdm, ks)?;
        ctx.out.csv_with_header("b0.csv", &["k", "b0_index", "re", "distance_to_band"], &b0)?;
        if ctx.svg() {
            let mut p = Plot::new("σ(B₀) distance to the bands", "B₀ index", "log10 distance");
            for &k in ks {
                let pts = b0
                    .iter()
                    .filter(|r| r.k == k && r.distance_to_band > 0.0)
                    .map(|r| (r.b0_index as f64, r.distance_to_band.log10()))
                    .collect();
                p = p.with(Series::new(format!("k={k}"), pts, Style::Marker));
            }
            ctx.out.text("b0.svg", &p.render())?;
        }
    }

    let gap = gs.get(cfg.gap_index).copied();
    let mut sign_change = None;
    if let Some(g) = gap {
        let curve = impedance_curve(&cfg.fdm, &gap_grid(g, &clustered_fractions(cfg.points)))?;
        let rows: Vec<ImpedanceCsvRow> =
            curve.iter().map(|r| ImpedanceCsvRow { omega2: r.omega2, re_f: r.f.re, im_f: r.f.im }).collect();
        ctx.out.csv("impedance.csv", &rows)?;
        let first = curve.first().map(|r| r.f.re);
        let last = curve.last().map(|r| r.f.re);
        sign_change = first.zip(last).map(|(a, b)| a * b < 0.0);
        if ctx.svg() {
            let pts = curve.iter().map(|r| (r.omega2, r.f.re.signum() * r.f.re.abs().ln_1p())).collect();
            let p = Plot::new(format!("F in gap {}", cfg.gap_index), "ω²", "sign(Re F) ln(1 + |Re F|)")
                .with(Series::new("Re F", pts, Style::Line));
            ctx.out.text("impedance.svg", &p.render())?;
        }
    }

    ctx.out.json(
        "summary.json",
        &Summary { k: cfg.fdm.k(), bands: bands.clone(), gaps: gs, impedance_gap: gap, re_f_changes_sign: sign_change },
    )?;

    if ctx.svg() {
        let pts = sampled.iter().map(|r| (r.alpha, r.omega2)).collect();
        let p = Plot::new(format!("bands, k = {}", cfg.fdm.k()), "α", "ω²").with(Series::new("bands", pts, Style::Dots));
        ctx.out.text("bands.svg", &p.render())?;
    }
    Ok(())
}
