use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Csv,
    Tsv,
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    /// seconds since the Unix epoch
    pub timestamp: u64,
    pub seed: Option<u64>,
    pub format: TableFormat,
    pub config: serde_json::Value,
}

impl RunManifest {
    pub fn new<C: Serialize>(subcommand: &str, config: &C, seed: Option<u64>, format: TableFormat) -> Result<Self> {
        Ok(Self {
            subcommand: subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            seed,
            format,
            config: serde_json::to_value(config)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}

pub struct OutputDir {
    dir: PathBuf,
    format: TableFormat,
}

pub type Row = Vec<String>;

pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

impl OutputDir {
    pub fn create(dir: &Path, format: TableFormat) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), format })
    }

    pub fn table(&self, name: &str, header: &[&str], rows: &[Row]) -> Result<PathBuf> {
        let (delim, ext) = match self.format {
            TableFormat::Csv => (b',', "csv"),
            TableFormat::Tsv => (b'\t', "tsv"),
        };
        let path = self.dir.join(format!("{name}.{ext}"));
        let mut w = csv::WriterBuilder::new().delimiter(delim).from_path(&path)?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(path)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let path = self.dir.join(format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }

    pub fn manifest(&self, manifest: &RunManifest) -> Result<PathBuf> {
        self.json("manifest", manifest)
    }
}
