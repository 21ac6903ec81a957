use super::{curve_rows, indexed, Ctx};
use crate::svg::{complex_points, Plot, Series, Style};
use crate::{CliError, CliResult};
use ktoeplitz::edge::{edge_spectrum, homotopy_sweep, EdgeReportRecord};
use ktoeplitz::spectra::{essential_spectrum, gamma_set, truncation_spectrum};
use ktoeplitz::symbol::UnitCell;
use ktoeplitz::C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(default)]
    pub description: Option<String>,
    pub cell: UnitCell,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Cells in the finite truncation; omitted means no truncation output.
    #[serde(default)]
    pub truncation_m: Option<usize>,
    #[serde(default)]
    pub homotopy: Option<Homotopy>,
}

fn default_samples() -> usize {
    512
}

/// The family `cell + t · direction` over `t_grid`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Homotopy {
    pub t_grid: Vec<f64>,
    pub direction: Direction,
}

/// Entry-wise increments. A missing `c` follows `b`, so symmetric cells stay
/// symmetric along the path.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Direction {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    #[serde(default)]
    pub c: Option<Vec<C64>>,
}

impl Homotopy {
    fn cell_at(&self, base: &UnitCell, t: f64) -> ktoeplitz::Result<UnitCell> {
        let add = |x: &[C64], d: &[C64]| x.iter().zip(d).map(|(x, d)| x + d * t).collect::<Vec<_>>();
        let dc = self.direction.c.as_ref().unwrap_or(&self.direction.b);
        UnitCell::new(add(base.a(), &self.direction.a), add(base.b(), &self.direction.b), add(base.c(), dc))
    }

    fn validate(&self, k: usize) -> CliResult<()> {
        let dc = self.direction.c.as_ref().unwrap_or(&self.direction.b);
        if self.direction.a.len() != k || self.direction.b.len() != k || dc.len() != k {
            return Err(CliError::Config(format!("homotopy direction must have {k} entries per diagonal")));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !t.is_finite()) {
            return Err(CliError::Config("homotopy t_grid must be non-empty and finite".into()));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct EdgeReport {
    k: usize,
    samples: usize,
    modes: Vec<EdgeEntry>,
}

#[derive(Serialize)]
struct EdgeEntry {
    #[serde(flatten)]
    record: EdgeReportRecord,
    marginal: bool,
}

#[derive(Serialize)]
struct HomotopyRow {
    t: f64,
    path_index: usize,
    re: f64,
    im: f64,
    abs_z: f64,
    gap_margin: f64,
}

pub fn run(cfg: SpectrumConfig, ctx: &mut Ctx) -> CliResult<()> {
    let samples = ctx.samples(cfg.samples);
    let cell = &cfg.cell;
    let ess = essential_spectrum(cell, samples)?;
    let gamma = gamma_set(cell, samples)?;
    ctx.out.csv("essential_spectrum.csv", &curve_rows(&ess))?;
    ctx.out.csv_with_header("gamma.csv", &["alpha", "branch_index", "re", "im"], &curve_rows(&gamma))?;

    let edges = edge_spectrum(cell)?;
    let report = EdgeReport {
        k: cell.k(),
        samples,
        modes: edges.iter().map(|r| EdgeEntry { record: r.into(), marginal: r.marginal }).collect(),
    };
    ctx.out.json("edge_report.json", &report)?;

    let mut plot = Plot::new("spectrum", "Re λ", "Im λ")
        .with(Series::new("essential", complex_points(&ess.points()), Style::Dots))
        .with(Series::new("Γ", complex_points(&gamma.points()), Style::Dots));
    let edge_pts: Vec<C64> = edges.iter().filter(|r| r.is_edge).map(|r| r.lambda).collect();

    if let Some(m) = cfg.truncation_m {
        if m == 0 {
            return Err(CliError::Config("truncation_m must be positive".into()));
        }
        let tr = truncation_spectrum(cell, m)?;
        ctx.out.csv("truncation.csv", &indexed(&tr.values))?;
        plot = plot.with(Series::new(format!("truncation n={}", tr.n), complex_points(&tr.values), Style::Dots));
    }
    plot = plot.with(Series::new("edge", complex_points(&edge_pts), Style::Marker));

    if let Some(h) = &cfg.homotopy {
        h.validate(cell.k())?;
        let trace = homotopy_sweep(|t| h.cell_at(cell, t), &h.t_grid, samples)?;
        let mut rows = Vec::new();
        for (p, path) in trace.edge_paths.iter().enumerate() {
            for (i, z) in path.iter().enumerate() {
                rows.push(HomotopyRow {
                    t: trace.t_grid[i],
                    path_index: p,
                    re: z.re,
                    im: z.im,
                    abs_z: trace.abs_z[p][i],
                    gap_margin: trace.gap_margin[p][i],
                });
            }
        }
        ctx.out.csv_with_header("homotopy.csv", &["t", "path_index", "re", "im", "abs_z", "gap_margin"], &rows)?;
        if ctx.svg() {
            let mut hp = Plot::new("edge eigenvalue paths", "t", "|z|");
            for (p, az) in trace.abs_z.iter().enumerate() {
                let pts = trace.t_grid.iter().copied().zip(az.iter().copied()).collect();
                hp = hp.with(Series::new(format!("path {p}"), pts, Style::Line));
            }
            ctx.out.text("homotopy.svg", &hp.render())?;
        }
    }
    if ctx.svg() {
        ctx.out.text("spectrum.svg", &plot.render())?;
    }
    Ok(())
}
