//! File formats, configuration and the command-line front end of
//! `spectre-core`.
//!
//! Every run is deterministic: identical configurations produce
//! byte-identical artifacts whatever the thread count, because parallel
//! work is split into independent units (sweep steps, enumeration roots,
//! corpus graphs) whose results are combined in a fixed order.

pub mod cli;
pub mod commands;
pub mod config;
pub mod format;
pub mod io;
pub mod verify;

use std::io::Write;
use std::path::Path;

use config::{CommandKind, ConfigError, Plan, RunConfig};

/// Why a run stopped.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Invalid flags, config file or input graph: exit status 2.
    #[error("{0}")]
    Config(String),
    /// A computation failed: exit status 1.
    #[error("{0:#}")]
    Compute(#[from] anyhow::Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.0)
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Compute(_) => 1,
        }
    }
}

/// Reads an optional config file and lays the flags over it.
pub fn resolve(config_file: Option<&Path>, flags: RunConfig) -> Result<Plan, RunError> {
    let base = match config_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    Ok(base.overlay(flags).validate()?)
}

/// Runs a validated plan, returning the artifact and whether it passed
/// (`verify` can fail without an error).
pub fn execute(plan: &Plan) -> Result<(Vec<u8>, bool), RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.threads)
        .build()
        .map_err(|e| RunError::Compute(e.into()))?;
    pool.install(|| {
        let mut out = Vec::new();
        if plan.command == CommandKind::Verify {
            let passed = verify::verify(plan, &mut out)?;
            return Ok((out, passed));
        }
        let host = commands::build_host(plan.family.as_ref().expect("validated family"))?;
        match plan.command {
            CommandKind::Generate => commands::generate(&host, &mut out)?,
            CommandKind::Curvature => commands::curvature(plan, &host, &mut out)?,
            CommandKind::Cheeger => commands::cheeger(plan, &host, &mut out)?,
            CommandKind::Spectrum => commands::spectrum(plan, &host, &mut out)?,
            CommandKind::Sweep => commands::sweep(plan, &host, &mut out)?,
            CommandKind::Verify => unreachable!(),
        }
        Ok((out, true))
    })
}

/// Runs and writes the artifact to `--output` or standard output; returns
/// the exit status.
pub fn run(plan: &Plan) -> Result<i32, RunError> {
    let (out, passed) = execute(plan)?;
    match &plan.output {
        Some(path) => std::fs::write(path, &out)
            .map_err(|e| RunError::Compute(anyhow::anyhow!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&out).and_then(|_| stdout.flush()).map_err(|e| RunError::Compute(e.into()))?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}
