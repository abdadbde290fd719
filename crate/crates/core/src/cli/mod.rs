//! Command-line driver: every experiment as a subcommand writing CSV (or
//! binary Husimi) artifacts plus `run.conf` and `manifest.json`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error,
//! 3 numerical failure. The thread count can be pinned with
//! `KICKTOP_THREADS`.

mod args;
mod commands;
mod config;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{
    validate_config, Diagnostic, OutputFormat, RangeSpec, RunConfig, Severity, SpinSpec, Subcommand,
    ValueSpec,
};

use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "KICKTOP_THREADS";

/// Name of the config echo written next to the outputs.
pub const CONFIG_FILE: &str = "run.conf";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifestOutput {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Provenance record written after every successful run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The effective configuration in `key = value` form.
    pub config: String,
    pub wall_time_seconds: f64,
    pub threads: usize,
    pub diagnostics: Vec<String>,
    pub outputs: Vec<ManifestOutput>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        RunConfig::from_config_str(&self.config)
    }
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Loads a `key = value` config file or the config echoed in a manifest.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let m: Manifest =
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        m.run_config()
    } else {
        RunConfig::from_config_str(&text)
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else if matches!(e, Error::Io(_)) {
        EXIT_IO
    } else {
        EXIT_CONFIG
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    // a pool built earlier in this process wins; that is harmless here
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Resolves the command line (plus any `--config` file) to a full config.
fn resolve(args: args::Cli) -> Result<RunConfig> {
    let (command, flags) = args.command.split();
    let given = flags.to_config(command)?;
    let mut cfg = match &flags.config {
        Some(path) => {
            let base = load_config(path)?;
            if base.command != command {
                return Err(Error::InvalidParameter(format!(
                    "{} holds a {} config, not {command}",
                    path.display(),
                    base.command
                )));
            }
            base
        }
        None => RunConfig::new(command),
    };
    cfg.merge(&given);
    Ok(cfg.with_defaults())
}

/// Writes every output or none: on failure the files written so far (and the
/// directory, if this run created it) are removed.
fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<()> {
    let created = !dir.exists();
    fs::create_dir_all(dir)?;
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, bytes) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            let _ = fs::remove_file(&path);
            if created {
                let _ = fs::remove_dir(dir);
            }
            return Err(e.into());
        }
        written.push(path);
    }
    Ok(())
}

/// Runs one configuration, returning the manifest written next to the outputs.
pub fn run_config(cfg: &RunConfig) -> Result<Manifest> {
    let diagnostics = validate_config(cfg);
    if let Some(d) = diagnostics.iter().find(|d| d.severity == Severity::Error) {
        return Err(Error::InvalidParameter(d.message.clone()));
    }
    let started = Instant::now();
    let report = commands::execute(cfg)?;
    let config_text = cfg.to_config_string();
    let mut files: Vec<(String, Vec<u8>)> =
        report.outputs.into_iter().map(|o| (o.name, o.bytes)).collect();
    files.push((CONFIG_FILE.to_string(), config_text.clone().into_bytes()));
    let manifest = Manifest {
        tool: "kicktop".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cfg.command.to_string(),
        config: config_text,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        diagnostics: diagnostics.iter().map(|d| d.to_string()).collect(),
        outputs: files
            .iter()
            .map(|(name, bytes)| ManifestOutput { file: name.clone(), bytes: bytes.len() as u64, sha256: sha256_hex(bytes) })
            .collect(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Format(e.to_string()))?;
    files.push((MANIFEST_FILE.to_string(), json.into_bytes()));
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    write_all(&dir, &files)?;
    for line in &report.summary {
        println!("{line}");
    }
    Ok(manifest)
}

/// Entry point: parses `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match args::Cli::try_parse_from(argv) {
        Ok(p) => p,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_CONFIG;
    }
    let cfg = match resolve(parsed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    for d in validate_config(&cfg) {
        eprintln!("{d}");
    }
    match run_config(&cfg) {
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
