//! Subcommands. Each reads a JSON config into its own typed struct, computes,
//! and writes CSV/JSON (and optionally SVG) into the output directory.

pub mod disorder;
pub mod fdm;
pub mod interface;
pub mod openlimit;
pub mod resonators;
pub mod spectrum;

use crate::output::{OutputDir, RunManifest};
use crate::{presets, CliError, CliResult, Common};
use ktoeplitz::C64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::PathBuf;

/// What a command sees of its invocation.
pub struct Ctx<'a> {
    pub common: &'a Common,
    pub out: OutputDir,
}

impl Ctx<'_> {
    /// `--samples` if given, else the config's value. Range checks are left
    /// to the core routines.
    pub fn samples(&self, configured: usize) -> usize {
        self.common.samples.unwrap_or(configured)
    }

    pub fn svg(&self) -> bool {
        self.common.svg
    }
}

fn load_source(name: &str, common: &Common) -> CliResult<(String, String)> {
    match (&common.config, &common.preset) {
        (Some(path), _) => {
            let body = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            Ok((body, path.display().to_string()))
        }
        (None, Some(p)) => {
            let preset = presets::find(p).ok_or_else(|| CliError::Config(format!("unknown preset `{p}`")))?;
            if preset.command != name {
                return Err(CliError::Config(format!("preset `{p}` belongs to `{}`, not `{name}`", preset.command)));
            }
            Ok((preset.json.to_owned(), format!("preset:{p}")))
        }
        (None, None) => Err(CliError::Config("pass --config or --preset".into())),
    }
}

pub fn parse<T: DeserializeOwned>(body: &str) -> CliResult<T> {
    serde_json::from_str(body).map_err(|e| CliError::Config(e.to_string()))
}

/// Loads the config, runs `f`, then writes the manifest.
pub fn run_with<T, F>(name: &str, common: &Common, f: F) -> CliResult<Vec<PathBuf>>
where
    T: DeserializeOwned,
    F: FnOnce(T, &mut Ctx) -> CliResult<()>,
{
    let (body, source) = load_source(name, common)?;
    let cfg: T = parse(&body)?;
    let mut ctx = Ctx { common, out: OutputDir::create(&common.out)? };
    f(cfg, &mut ctx)?;
    let mut out = ctx.out;
    let mut files = out.written().to_vec();
    files.push(out.path().join("manifest.json"));
    let manifest = RunManifest::new(name, source, out.path(), common.seed, common.samples, &files);
    out.json("manifest.json", &manifest)?;
    Ok(out.into_written())
}

/// `(re, im)` row with a leading index, the common shape of spectrum CSVs.
#[derive(Serialize)]
pub struct IndexedValue {
    pub index: usize,
    pub re: f64,
    pub im: f64,
}

pub fn indexed(values: &[C64]) -> Vec<IndexedValue> {
    values.iter().enumerate().map(|(index, z)| IndexedValue { index, re: z.re, im: z.im }).collect()
}

#[derive(Serialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub branch_index: usize,
    pub re: f64,
    pub im: f64,
}

pub fn curve_rows(curve: &ktoeplitz::spectra::SpectralCurve) -> Vec<CurveRow> {
    curve.rows().map(|(alpha, branch_index, z)| CurveRow { alpha, branch_index, re: z.re, im: z.im }).collect()
}

/// Site-indexed vector entries for mode CSVs.
#[derive(Serialize)]
pub struct VectorRow {
    pub mode_index: usize,
    pub site: usize,
    pub re: f64,
    pub im: f64,
}

pub fn vector_rows<'a>(modes: impl IntoIterator<Item = &'a [C64]>) -> Vec<VectorRow> {
    modes
        .into_iter()
        .enumerate()
        .flat_map(|(mode_index, v)| {
            v.iter().enumerate().map(move |(site, z)| VectorRow { mode_index, site, re: z.re, im: z.im })
        })
        .collect()
}

pub fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}
