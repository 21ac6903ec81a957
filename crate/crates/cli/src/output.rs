//! Output directory handling: CSV, JSON and SVG writers plus the run manifest.

use crate::{CliError, CliResult};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

pub struct OutputDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_owned(), source }
}

impl OutputDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        Ok(Self { dir: dir.to_owned(), written: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    fn target(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> CliResult<()> {
        let path = self.target(name);
        let file = fs::File::create(&path).map_err(io_err(&path))?;
        let mut w = csv::Writer::from_writer(file);
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Io { path: path.clone(), source: e.into() })?;
        }
        w.flush().map_err(io_err(&path))
    }

    /// A CSV with only a header when `rows` is empty (the serializer emits
    /// headers lazily).
    pub fn csv_with_header<T: Serialize>(&mut self, name: &str, header: &[&str], rows: &[T]) -> CliResult<()> {
        if rows.is_empty() {
            return self.text(name, &format!("{}\n", header.join(",")));
        }
        self.csv(name, rows)
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let s = serde_json::to_string_pretty(value).expect("output types serialize");
        self.text(name, &(s + "\n"))
    }

    pub fn text(&mut self, name: &str, body: &str) -> CliResult<()> {
        let path = self.target(name);
        fs::write(&path, body).map_err(io_err(&path))
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn into_written(self) -> Vec<PathBuf> {
        self.written
    }
}

/// Written next to every output set. Everything but the timestamp is a
/// function of the invocation.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Config path, or `preset:NAME`.
    pub config: String,
    pub out: String,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub version: String,
    pub timestamp: String,
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: String, out: &Path, seed: Option<u64>, samples: Option<usize>, files: &[PathBuf]) -> Self {
        Self {
            command: command.to_owned(),
            config,
            out: out.display().to_string(),
            seed,
            samples,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            files: files.iter().filter_map(|p| p.file_name()).map(|f| f.to_string_lossy().into_owned()).collect(),
        }
    }
}
