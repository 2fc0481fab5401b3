//! Batch manifests: a TOML file listing jobs whose results are cached under
//! content-addressed names, so an interrupted batch resumes where it left off.
//!
//! ```toml
//! out_dir = "results"          # relative to the manifest; default "ldic-out"
//!
//! [[job]]
//! name = "example-5"           # optional label, unique within the manifest
//! command = "region"
//! params = "10,9,2,15,0,0"
//! compare = "10,9,2,15,10,15"
//! format = "svg"
//!
//! [[job]]
//! command = "sweep"
//! base = "20,15,12,13"
//! fb1 = "0..20"
//! fb2 = "0..15"
//! decimal = true
//! ```
//!
//! Every key other than `name` and `command` becomes the flag `--key value` (underscores
//! turn into dashes; `true` becomes a bare flag). The cache key is the SHA-256
//! of the fully parsed command, defaults included.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command};
use crate::{commands, CliError, Outcome};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    out_dir: Option<PathBuf>,
    #[serde(default, rename = "job")]
    jobs: Vec<toml::Table>,
}

fn job_argv(k: usize, job: &toml::Table) -> Result<Vec<String>, CliError> {
    let bad = |msg: String| CliError::Usage(format!("job {}: {msg}", k + 1));
    let command = job.get("command").and_then(|v| v.as_str()).ok_or_else(|| bad("missing `command`".into()))?;
    let mut argv = vec!["ldic".to_string(), command.to_string()];
    for (key, value) in job {
        if key == "command" || key == "name" {
            continue;
        }
        if key == "out" {
            return Err(bad("`out` is chosen by the manifest runner".into()));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => argv.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => argv.extend([flag, s.clone()]),
            toml::Value::Integer(i) => argv.extend([flag, i.to_string()]),
            other => return Err(bad(format!("unsupported value for `{key}`: {other}"))),
        }
    }
    Ok(argv)
}

/// Cache file name for a parsed command.
pub fn cache_name(cmd: &Command) -> String {
    let mut canonical = cmd.clone();
    canonical.output_mut().out = None;
    let digest = Sha256::digest(format!("{canonical:?}").as_bytes());
    let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    format!("{}-{hex}.{}", cmd.name(), cmd.format().extension())
}

pub fn run(path: &Path) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path)?;
    let manifest: Manifest =
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let out_dir = base.join(manifest.out_dir.unwrap_or_else(|| PathBuf::from("ldic-out")));
    fs::create_dir_all(&out_dir)?;

    let mut parsed = Vec::with_capacity(manifest.jobs.len());
    let mut labels: Vec<String> = Vec::with_capacity(manifest.jobs.len());
    for (k, job) in manifest.jobs.iter().enumerate() {
        let label = match job.get("name") {
            None => format!("job {}", k + 1),
            Some(toml::Value::String(n)) => n.clone(),
            Some(other) => return Err(CliError::Usage(format!("job {}: `name` must be a string, got {other}", k + 1))),
        };
        if labels.contains(&label) {
            return Err(CliError::Usage(format!("job {}: duplicate job name {label:?}", k + 1)));
        }
        labels.push(label);
        let argv = job_argv(k, job)?;
        let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(format!("job {}: {e}", k + 1)))?;
        let cmd = cli.command.ok_or_else(|| CliError::Usage(format!("job {}: no command", k + 1)))?;
        parsed.push(cmd);
    }

    let mut log = String::new();
    let mut code = 0;
    for (k, cmd) in parsed.iter().enumerate() {
        let target = out_dir.join(cache_name(cmd));
        if target.exists() {
            log.push_str(&format!("{} {}: cached {}\n", labels[k], cmd.name(), target.display()));
            continue;
        }
        let outcome = commands::execute(cmd)?;
        if outcome.code == 0 {
            fs::write(&target, &outcome.text)?;
            log.push_str(&format!("{} {}: wrote {}\n", labels[k], cmd.name(), target.display()));
        } else {
            log.push_str(&format!("{} {}: exit {}, not cached\n", labels[k], cmd.name(), outcome.code));
        }
        code = code.max(outcome.code);
    }
    Ok(Outcome { text: log, code })
}
