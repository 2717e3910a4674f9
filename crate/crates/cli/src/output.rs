use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const SCHEMA_LINE: &str = "# schema=1";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Collects the files written by one command and emits the manifest last.
pub struct OutputDir {
    root: PathBuf,
    config_hash: String,
    seed: u64,
    files: Vec<String>,
}

/// One CSV line. Provenance columns are appended by [`OutputDir::write_csv`].
pub trait Row {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// Shortest representation that parses back to the same value.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema: u32,
    command: &'a str,
    config_hash: &'a str,
    seed: u64,
    config: &'a ExperimentConfig,
    files: &'a [String],
}

impl OutputDir {
    pub fn create(config: &ExperimentConfig) -> CliResult<Self> {
        let root = config.output_dir.clone();
        fs::create_dir_all(&root).map_err(io_err(&root))?;
        Ok(Self {
            root,
            config_hash: config.hash(),
            seed: config.seed,
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes `# schema=1`, a header and one line per row, each stamped
    /// with the config hash and seed.
    pub fn write_csv<R: Row>(&mut self, name: &str, rows: &[R]) -> CliResult<PathBuf> {
        let path = self.root.join(name);
        let mut file = File::create(&path).map_err(io_err(&path))?;
        writeln!(file, "{SCHEMA_LINE}").map_err(io_err(&path))?;
        let csv_err = |source| CliError::Csv {
            path: path.clone(),
            source,
        };
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(file);
        let mut header: Vec<&str> = R::HEADER.to_vec();
        header.extend(["config_hash", "seed"]);
        w.write_record(&header).map_err(csv_err)?;
        let seed = self.seed.to_string();
        for row in rows {
            let mut fields = row.fields();
            debug_assert_eq!(fields.len(), R::HEADER.len());
            fields.push(self.config_hash.clone());
            fields.push(seed.clone());
            w.write_record(&fields).map_err(csv_err)?;
        }
        w.flush().map_err(io_err(&path))?;
        self.files.push(name.to_string());
        Ok(path)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> CliResult<PathBuf> {
        let path = self.root.join(name);
        fs::write(&path, text).map_err(io_err(&path))?;
        self.files.push(name.to_string());
        Ok(path)
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn finish(self, command: &str, config: &ExperimentConfig) -> CliResult<PathBuf> {
        let manifest = Manifest {
            schema: 1,
            command,
            config_hash: &self.config_hash,
            seed: self.seed,
            config,
            files: &self.files,
        };
        let path = self.root.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(io_err(&path))?;
        Ok(path)
    }
}

/// `0.2` → `q0.20`.
pub fn q_tag(q: f64) -> String {
    format!("q{q:.2}")
}
