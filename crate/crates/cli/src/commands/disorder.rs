use super::Ctx;
use crate::svg::{Plot, Series, Style};
use crate::{CliError, CliResult};
use ktoeplitz::disorder::{build_disordered_chain, decay_rate_stats, eigenvector_decay_fit, zero_mode, DisorderConfig};
use ktoeplitz::numerics::eigs_tridiagonal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderRunConfig {
    #[serde(default)]
    pub description: Option<String>,
    pub disorder: DisorderConfig,
    /// Extra disorder strengths for `rates_by_d.csv`.
    #[serde(default)]
    pub d_list: Option<Vec<f64>>,
    /// Realizations whose full spectrum is written.
    #[serde(default = "one")]
    pub spectrum_realizations: usize,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
}

fn one() -> usize {
    1
}

fn default_bins() -> usize {
    40
}

#[derive(Serialize)]
struct SpectrumRow {
    realization: usize,
    index: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SiteRow {
    site: isize,
    re: f64,
    im: f64,
    abs: f64,
}

#[derive(Serialize)]
struct TrialRow {
    trial: usize,
    fitted_rate: f64,
}

#[derive(Serialize)]
struct BinRow {
    bin_lo: f64,
    bin_hi: f64,
    count: usize,
}

#[derive(Serialize)]
struct RateRow {
    d: f64,
    trials: usize,
    mean: f64,
    std: f64,
    stderr: f64,
    theoretical: f64,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    d: f64,
    seed: u64,
    trials: usize,
    /// Rates are slopes of `ln|z|` per block of `period` dimers.
    rate_unit: &'static str,
    period: usize,
    mean: f64,
    std: f64,
    stderr: f64,
    theoretical: f64,
    zero_mode_relative: Option<f64>,
    /// Envelope fit of realization 0's zero mode, right and left halves.
    eigenvector_rate_right: Option<f64>,
    eigenvector_rate_left: Option<f64>,
}

fn histogram(values: &[f64], bins: usize) -> Vec<BinRow> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &v in values {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| BinRow { bin_lo: lo + i as f64 * width, bin_hi: lo + (i + 1) as f64 * width, count })
        .collect()
}

pub fn run(cfg: DisorderRunConfig, ctx: &mut Ctx) -> CliResult<()> {
    if cfg.histogram_bins == 0 {
        return Err(CliError::Config("histogram_bins must be positive".into()));
    }
    let dc = match ctx.common.seed {
        Some(seed) => cfg.disorder.with_seed(seed),
        None => cfg.disorder.clone(),
    };
    let n = dc.n();

    let mut spec_rows = Vec::new();
    for r in 0..cfg.spectrum_realizations {
        let vals = eigs_tridiagonal(&build_disordered_chain(&dc, r as u64), false)?.values;
        spec_rows.extend(vals.iter().enumerate().map(|(index, z)| SpectrumRow { realization: r, index, re: z.re, im: z.im }));
    }
    ctx.out.csv_with_header("spectrum.csv", &["realization", "index", "re", "im"], &spec_rows)?;

    let zm = zero_mode(&build_disordered_chain(&dc, 0))?;
    let center = (n / 2) as isize;
    let zm_rows: Vec<SiteRow> = zm
        .iter()
        .flat_map(|z| z.vector.iter().enumerate())
        .map(|(i, w)| SiteRow { site: i as isize - center, re: w.re, im: w.im, abs: w.norm() })
        .collect();
    ctx.out.csv_with_header("zero_mode.csv", &["site", "re", "im", "abs"], &zm_rows)?;
    let fit = |v: &[ktoeplitz::C64]| eigenvector_decay_fit(v, dc.period()).ok();
    let (right, left) = match &zm {
        Some(z) => {
            let rev: Vec<_> = z.vector.iter().rev().copied().collect();
            (fit(&z.vector), fit(&rev))
        }
        None => (None, None),
    };

    let stats = decay_rate_stats(&dc);
    let trial_rows: Vec<TrialRow> =
        stats.per_trial_rates.iter().enumerate().map(|(trial, &fitted_rate)| TrialRow { trial, fitted_rate }).collect();
    ctx.out.csv("stats.csv", &trial_rows)?;
    ctx.out.csv("histogram.csv", &histogram(&stats.per_trial_rates, cfg.histogram_bins))?;

    let summary = Summary {
        n,
        d: dc.d(),
        seed: dc.seed(),
        trials: dc.trials(),
        rate_unit: "per_cell_block",
        period: dc.period(),
        mean: stats.mean,
        std: stats.std,
        stderr: stats.stderr,
        theoretical: stats.theoretical,
        zero_mode_relative: zm.as_ref().map(|z| z.relative),
        eigenvector_rate_right: right,
        eigenvector_rate_left: left,
    };
    ctx.out.json("summary.json", &summary)?;

    if let Some(ds) = &cfg.d_list {
        let mut rows = Vec::new();
        for &d in ds {
            let s = decay_rate_stats(&dc.with_d(d)?);
            rows.push(RateRow { d, trials: dc.trials(), mean: s.mean, std: s.std, stderr: s.stderr, theoretical: s.theoretical });
        }
        ctx.out.csv_with_header("rates_by_d.csv", &["d", "trials", "mean", "std", "stderr", "theoretical"], &rows)?;
    }

    if ctx.svg() {
        if !zm_rows.is_empty() {
            let pts = zm_rows.iter().map(|r| (r.site as f64, r.abs.max(1e-300).log10())).collect();
            let p = Plot::new("zero mode, realization 0", "site", "log10 |w|").with(Series::new("|w|", pts, Style::Line));
            ctx.out.text("zero_mode.svg", &p.render())?;
        }
        let bins = histogram(&stats.per_trial_rates, cfg.histogram_bins);
        let pts = bins.iter().map(|b| (0.5 * (b.bin_lo + b.bin_hi), b.count as f64)).collect();
        let p = Plot::new("fitted decay rates", "rate per block", "count")
            .with(Series::new("trials", pts, Style::Line))
            .with(Series::new("theoretical", vec![(stats.theoretical, 0.0)], Style::Marker));
        ctx.out.text("histogram.svg", &p.render())?;
    }
    Ok(())
}
