use super::{vector_rows, Ctx};
use crate::svg::{complex_points, Plot, Series, Style};
use crate::CliResult;
use ktoeplitz::interface::Parity;
use ktoeplitz::resonators::{
    capacitance_matrix, capacitance_with_interface, gap_modes, resonances, robustness_sweep, Perturbation,
    ResonatorChain,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorConfig {
    #[serde(default)]
    pub description: Option<String>,
    pub chain: ResonatorChain,
    #[serde(default)]
    pub sweep: Option<Perturbation>,
    /// Gap modes closer than this to a gap edge are not reported.
    #[serde(default = "default_margin")]
    pub min_margin: f64,
}

fn default_margin() -> f64 {
    1e-2
}

#[derive(Serialize)]
struct ResonanceRow {
    index: usize,
    lambda_re: f64,
    lambda_im: f64,
    omega_re: f64,
    omega_im: f64,
}

#[derive(Serialize)]
struct GapModeRow {
    mode_index: usize,
    lambda_re: f64,
    lambda_im: f64,
    mu: f64,
    parity: Parity,
    margin: f64,
}

#[derive(Serialize)]
struct SweepCsvRow {
    param_value: f64,
    trial: usize,
    eig_index: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct GapModeSummary {
    mu: f64,
    parity: Parity,
    margin: f64,
}

/// Gap modes that remain after replacing the interface spacing.
#[derive(Serialize)]
struct InterfaceSurvival {
    s_int: f64,
    gap_modes: Vec<GapModeSummary>,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    bulk_gap: (f64, f64),
    /// `s1 > s2`: the right bulk dimer carries an edge mode.
    edge_regime: bool,
    min_gap: f64,
    simple: bool,
    gap_modes: Vec<GapModeSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    interface_sweep: Vec<InterfaceSurvival>,
}

pub fn run(cfg: ResonatorConfig, ctx: &mut Ctx) -> CliResult<()> {
    let chain = &cfg.chain;
    let res = resonances(chain)?;
    let rows: Vec<ResonanceRow> = res
        .lambda
        .iter()
        .zip(&res.omega)
        .enumerate()
        .map(|(index, (l, w))| ResonanceRow { index, lambda_re: l.re, lambda_im: l.im, omega_re: w.re, omega_im: w.im })
        .collect();
    ctx.out.csv("resonances.csv", &rows)?;

    let modes = gap_modes(chain, &capacitance_matrix(chain)?, cfg.min_margin)?;
    let gm_rows: Vec<GapModeRow> = modes
        .iter()
        .enumerate()
        .map(|(i, g)| GapModeRow {
            mode_index: i,
            lambda_re: g.lambda.re,
            lambda_im: g.lambda.im,
            mu: g.mu,
            parity: g.parity,
            margin: g.margin,
        })
        .collect();
    ctx.out.csv_with_header("gap_modes.csv", &["mode_index", "lambda_re", "lambda_im", "mu", "parity", "margin"], &gm_rows)?;
    ctx.out.json("gap_modes.json", &modes)?;
    ctx.out.csv_with_header(
        "gap_mode_vectors.csv",
        &["mode_index", "site", "re", "im"],
        &vector_rows(modes.iter().map(|g| g.vector.as_slice())),
    )?;

    let summarize = |ms: &[ktoeplitz::resonators::GapMode]| {
        ms.iter().map(|g| GapModeSummary { mu: g.mu, parity: g.parity, margin: g.margin }).collect::<Vec<_>>()
    };
    let mut interface_sweep = Vec::new();
    if let Some(p) = &cfg.sweep {
        let p = match (p, ctx.common.seed) {
            (Perturbation::AllSpacings { levels, trials, .. }, Some(seed)) => {
                Perturbation::AllSpacings { levels: levels.clone(), trials: *trials, seed }
            }
            _ => p.clone(),
        };
        let sweep = robustness_sweep(chain, &p)?;
        let rows: Vec<SweepCsvRow> = sweep
            .iter()
            .map(|r| SweepCsvRow { param_value: r.param_value, trial: r.trial, eig_index: r.eig_index, re: r.value.re, im: r.value.im })
            .collect();
        ctx.out.csv_with_header("sweep.csv", &["param_value", "trial", "eig_index", "re", "im"], &rows)?;
        if let Perturbation::InterfaceSpacings(values) = &p {
            for &s_int in values {
                let ms = gap_modes(chain, &capacitance_with_interface(chain, s_int)?, cfg.min_margin)?;
                interface_sweep.push(InterfaceSurvival { s_int, gap_modes: summarize(&ms) });
            }
        }
        if ctx.svg() {
            let pts = sweep.iter().map(|r| (r.param_value, r.value.norm())).collect();
            let sp = Plot::new("spectrum along the perturbation", "parameter", "|λ|")
                .with(Series::new("eigenvalues", pts, Style::Dots));
            ctx.out.text("sweep.svg", &sp.render())?;
        }
    }

    let summary = Summary {
        n: chain.n(),
        bulk_gap: chain.bulk_gap(),
        edge_regime: chain.s1 > chain.s2,
        min_gap: res.min_gap,
        simple: res.is_simple(),
        gap_modes: summarize(&modes),
        interface_sweep,
    };
    ctx.out.json("summary.json", &summary)?;

    if ctx.svg() {
        let plot = Plot::new(format!("resonances, N = {}", chain.n()), "Re ω", "Im ω")
            .with(Series::new("ω", complex_points(&res.omega), Style::Marker));
        ctx.out.text("resonances.svg", &plot.render())?;
        if let Some(g) = modes.first() {
            let pts = g.vector.iter().enumerate().map(|(i, z)| (i as f64, z.re)).collect();
            let mp = Plot::new(format!("gap mode ({:?})", g.parity), "resonator", "Re w")
                .with(Series::new("w", pts, Style::Line));
            ctx.out.text("gap_mode.svg", &mp.render())?;
        }
    }
    Ok(())
}
