//! File writers and the `run.json` record.
//!
//! `run.json` is a single JSON object:
//!
//! - `artifact`, `version`: program name and version
//! - `command`: subcommand that produced the directory
//! - `config`: the resolved run configuration, same keys as the TOML file
//! - `integrator`: engine, relative and absolute tolerance
//! - `files`: CSV files written next to it
//! - plus command-specific entries (`dressed_frame`, `figure`, `oracle`)
//!
//! Keys are sorted and no timestamps are recorded, so identical runs give
//! identical files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qbcharge::dynamics::Tolerances;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::CliError;

pub const RUN_FILE: &str = "run.json";

pub fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Creates `dir/name` and hands a buffered writer to `body`.
pub fn write_file<F>(dir: &Path, name: &str, body: F) -> Result<PathBuf, CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let path = dir.join(name);
    let file = File::create(&path).map_err(io_err(&path))?;
    let mut out = BufWriter::new(file);
    body(&mut out).and_then(|_| out.flush()).map_err(io_err(&path))?;
    Ok(path)
}

pub struct RunRecord<'a> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub files: &'a [PathBuf],
    pub extra: Map<String, Value>,
}

impl RunRecord<'_> {
    pub fn to_json(&self) -> Value {
        let tol = Tolerances::relative(self.config.tol);
        let files: Vec<String> = self
            .files
            .iter()
            .filter_map(|p| p.file_name())
            .map(|n| n.to_string_lossy().into_owned())
            .collect();
        let mut record = json!({
            "artifact": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config.resolved(),
            "integrator": {
                "engine": self.config.engine,
                "rtol": tol.rtol,
                "atol": tol.atol,
                "max_steps": tol.max_steps,
            },
            "files": files,
        });
        let obj = record.as_object_mut().expect("object literal");
        for (k, v) in &self.extra {
            obj.insert(k.clone(), v.clone());
        }
        record
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("serializable record");
        write_file(dir, RUN_FILE, |out| writeln!(out, "{text}"))
    }
}
