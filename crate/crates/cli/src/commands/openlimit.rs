use super::{curve_rows, indexed, Ctx};
use crate::svg::{complex_points, Plot, Series, Style};
use crate::{CliError, CliResult};
use ktoeplitz::edge::open_limit;
use ktoeplitz::spectra::truncation_spectrum;
use ktoeplitz::symbol::UnitCell;
use ktoeplitz::C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenLimitConfig {
    #[serde(default)]
    pub description: Option<String>,
    pub cell: UnitCell,
    /// Truncation sizes; each must be a multiple of `k`.
    pub n_list: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    1024
}

#[derive(Serialize)]
struct TruncRow {
    n: usize,
    index: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct DistanceRow {
    n: usize,
    directed_distance: f64,
    hausdorff_distance: f64,
}

pub fn run(cfg: OpenLimitConfig, ctx: &mut Ctx) -> CliResult<()> {
    let samples = ctx.samples(cfg.samples);
    let k = cfg.cell.k();
    if cfg.n_list.is_empty() || cfg.n_list.iter().any(|&n| n == 0 || n % k != 0) {
        return Err(CliError::Config(format!("n_list must be non-empty positive multiples of k = {k}")));
    }
    let ol = open_limit(&cfg.cell, samples)?;
    ctx.out.csv_with_header("gamma.csv", &["alpha", "branch_index", "re", "im"], &curve_rows(&ol.gamma))?;
    ctx.out.csv_with_header("g0.csv", &["index", "re", "im"], &indexed(&ol.g0_points))?;

    let limit_pts: Vec<C64> = ol.gamma.points().into_iter().chain(ol.g0_points.iter().copied()).collect();
    let mut trunc_rows = Vec::new();
    let mut dist_rows = Vec::new();
    let mut plot = Plot::new("open limit", "Re λ", "Im λ");
    for &n in &cfg.n_list {
        let tr = truncation_spectrum(&cfg.cell, n / k)?;
        trunc_rows.extend(tr.values.iter().enumerate().map(|(index, z)| TruncRow { n, index, re: z.re, im: z.im }));
        let directed = ol.directed_distance_from(&tr.values);
        let reverse = limit_pts
            .iter()
            .map(|p| tr.values.iter().map(|v| (v - p).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        dist_rows.push(DistanceRow { n, directed_distance: directed, hausdorff_distance: directed.max(reverse) });
        plot = plot.with(Series::new(format!("n={n}"), complex_points(&tr.values), Style::Dots));
    }
    ctx.out.csv("truncations.csv", &trunc_rows)?;
    ctx.out.csv("distances.csv", &dist_rows)?;
    if ctx.svg() {
        let plot = plot
            .with(Series::new("Γ", complex_points(&ol.gamma.points()), Style::Dots))
            .with(Series::new("G₀", complex_points(&ol.g0_points), Style::Marker));
        ctx.out.text("open_limit.svg", &plot.render())?;
    }
    Ok(())
}
