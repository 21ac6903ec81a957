use super::{curve_rows, indexed, vector_rows, Ctx};
use crate::svg::{complex_points, Plot, Series, Style};
use crate::{CliError, CliResult};
use ktoeplitz::edge::edge_spectrum;
use ktoeplitz::interface::{
    common_coupling_g, common_coupling_match, edge_induced_mode, interface_spectrum, matched_f,
    matched_interface_roots, InterfaceKind, InterfaceMode, InterfaceSpec, ModeKind, Parity, SearchRegion,
};
use ktoeplitz::spectra::gamma_set;
use ktoeplitz::C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfaceConfig {
    #[serde(default)]
    pub description: Option<String>,
    pub interface: InterfaceSpec,
    /// Cells per side of the verification assembly.
    #[serde(default = "default_m")]
    pub m: usize,
    /// Root search rectangle; the Gershgorin box when omitted.
    #[serde(default)]
    pub search: Option<SearchRegion>,
    #[serde(default)]
    pub f_line: Option<Segment>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_m() -> usize {
    100
}

fn default_samples() -> usize {
    512
}

/// `points` equally spaced samples from `from` to `to`, both included.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub from: C64,
    pub to: C64,
    pub points: usize,
}

#[derive(Serialize)]
struct ModeRecord {
    mode_index: usize,
    lambda: [f64; 2],
    kind: ModeKind,
    parity: Parity,
    decay_rate: f64,
    residual: f64,
    truncation_distance: f64,
}

#[derive(Serialize)]
struct ModeRow {
    mode_index: usize,
    re: f64,
    im: f64,
    kind: ModeKind,
    parity: Parity,
    decay_rate: f64,
    residual: f64,
    truncation_distance: f64,
}

#[derive(Serialize)]
struct FRow {
    s: f64,
    re: f64,
    im: f64,
    /// 0 for F; ±1 for the two common-coupling conditions.
    branch: i8,
    re_f: f64,
    im_f: f64,
}

fn find_modes(spec: &InterfaceSpec, region: Option<SearchRegion>, m: usize) -> CliResult<Vec<InterfaceMode>> {
    let mut modes = Vec::new();
    match spec.kind {
        InterfaceKind::SharedSite { q, s, .. } => {
            let has_edge = edge_spectrum(&spec.cell)?.iter().any(|r| r.is_edge);
            if has_edge && q == s {
                modes.push(edge_induced_mode(spec, m)?);
            }
            if spec.cell.is_symmetric() {
                modes.extend(matched_interface_roots(spec, region, m)?);
            }
        }
        InterfaceKind::CommonCoupling { .. } => {
            if spec.cell.is_symmetric() {
                modes.extend(common_coupling_match(spec, region, m)?);
            }
        }
    }
    Ok(modes)
}

fn f_rows(spec: &InterfaceSpec, seg: &Segment) -> Vec<FRow> {
    let branches: &[i8] = match spec.kind {
        InterfaceKind::SharedSite { .. } => &[0],
        InterfaceKind::CommonCoupling { .. } => &[1, -1],
    };
    let mut rows = Vec::new();
    for i in 0..seg.points {
        let s = if seg.points == 1 { 0.0 } else { i as f64 / (seg.points - 1) as f64 };
        let lambda = seg.from + (seg.to - seg.from) * s;
        for &branch in branches {
            let v = match branch {
                0 => matched_f(spec, lambda),
                sign => common_coupling_g(spec, lambda, sign as f64),
            };
            // Points on Γ or at edge-type λ have no value.
            let v = v.unwrap_or(C64::new(f64::NAN, f64::NAN));
            rows.push(FRow { s, re: lambda.re, im: lambda.im, branch, re_f: v.re, im_f: v.im });
        }
    }
    rows
}

pub fn run(cfg: InterfaceConfig, ctx: &mut Ctx) -> CliResult<()> {
    let samples = ctx.samples(cfg.samples);
    if cfg.m < 2 {
        return Err(CliError::Config("m must be at least 2".into()));
    }
    let spec = &cfg.interface;
    let tr = interface_spectrum(spec, cfg.m)?;
    ctx.out.csv("spectrum.csv", &indexed(&tr.values))?;
    let gamma = gamma_set(&spec.cell, samples)?;
    ctx.out.csv_with_header("gamma.csv", &["alpha", "branch_index", "re", "im"], &curve_rows(&gamma))?;

    let modes = find_modes(spec, cfg.search, cfg.m)?;
    let records: Vec<ModeRecord> = modes
        .iter()
        .enumerate()
        .map(|(i, md)| ModeRecord {
            mode_index: i,
            lambda: super::pair(md.lambda),
            kind: md.kind,
            parity: md.parity,
            decay_rate: md.decay_rate,
            residual: md.residual,
            truncation_distance: md.truncation_distance,
        })
        .collect();
    ctx.out.json("modes.json", &records)?;
    let rows: Vec<ModeRow> = modes
        .iter()
        .enumerate()
        .map(|(i, md)| ModeRow {
            mode_index: i,
            re: md.lambda.re,
            im: md.lambda.im,
            kind: md.kind,
            parity: md.parity,
            decay_rate: md.decay_rate,
            residual: md.residual,
            truncation_distance: md.truncation_distance,
        })
        .collect();
    ctx.out.csv_with_header(
        "modes.csv",
        &["mode_index", "re", "im", "kind", "parity", "decay_rate", "residual", "truncation_distance"],
        &rows,
    )?;
    ctx.out.csv_with_header(
        "mode_vectors.csv",
        &["mode_index", "site", "re", "im"],
        &vector_rows(modes.iter().map(|md| md.vector.as_slice())),
    )?;

    if let Some(seg) = &cfg.f_line {
        if seg.points == 0 {
            return Err(CliError::Config("f_line needs at least one point".into()));
        }
        let rows = f_rows(spec, seg);
        ctx.out.csv("f_line.csv", &rows)?;
        if ctx.svg() {
            let mut fp = Plot::new("matching function along the segment", "s", "Re");
            for b in [0i8, 1, -1] {
                let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.branch == b).map(|r| (r.s, r.re_f)).collect();
                if !pts.is_empty() {
                    fp = fp.with(Series::new(format!("branch {b}"), pts, Style::Line));
                }
            }
            ctx.out.text("f_line.svg", &fp.render())?;
        }
    }

    if ctx.svg() {
        let lambdas: Vec<C64> = modes.iter().map(|md| md.lambda).collect();
        let plot = Plot::new(format!("interface assembly, m = {}", cfg.m), "Re λ", "Im λ")
            .with(Series::new("eigenvalues", complex_points(&tr.values), Style::Dots))
            .with(Series::new("Γ", complex_points(&gamma.points()), Style::Dots))
            .with(Series::new("interface modes", complex_points(&lambdas), Style::Marker));
        ctx.out.text("spectrum.svg", &plot.render())?;
        if let Some(md) = modes.first() {
            let pts = md.vector.iter().enumerate().map(|(i, z)| (i as f64, z.norm())).collect();
            let mp = Plot::new("first interface mode", "site", "|w|").with(Series::new("|w|", pts, Style::Line));
            ctx.out.text("mode.svg", &mp.render())?;
        }
    }
    Ok(())
}
