use std::path::{Path, PathBuf};

use clap::Args;

use crate::manifest::{sha256_file, RunManifest, ARTIFACT, MANIFEST_NAME, VERSION};
use crate::{ActinSettings, CliError, GraphSettings, SwarmSettings};

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// manifest.json written by an earlier run
    #[arg(long, value_name = "PATH")]
    manifest: PathBuf,
    /// Directory for the re-run (default: `replay/` next to the manifest)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// Outcome of comparing a re-run against its manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub matched: Vec<String>,
    /// `(path, recorded, reproduced)`; `reproduced` is empty when the file
    /// was not produced again.
    pub mismatched: Vec<(String, String, String)>,
    pub unexpected: Vec<String>,
}

impl ReplayReport {
    pub fn identical(&self) -> bool {
        self.mismatched.is_empty() && self.unexpected.is_empty()
    }
}

fn decode<T: serde::de::DeserializeOwned>(m: &RunManifest) -> Result<T, CliError> {
    serde_json::from_value(m.config.clone()).map_err(|e| {
        CliError::Runtime(format!(
            "manifest config does not describe a {} run: {e}",
            m.subcommand
        ))
    })
}

/// Re-executes the run recorded in `manifest_path` into `out` and compares
/// every output checksum.
pub fn replay(manifest_path: &Path, out: &Path) -> Result<ReplayReport, CliError> {
    let m = RunManifest::load(manifest_path)?;
    if m.artifact != ARTIFACT || m.version != VERSION {
        return Err(CliError::Runtime(format!(
            "manifest was written by {} {}, this is {ARTIFACT} {VERSION}; \
             outputs are only guaranteed identical within one version, refusing to replay",
            m.artifact, m.version
        )));
    }
    for input in &m.inputs {
        let now = sha256_file(Path::new(&input.path))?;
        if now != input.sha256 {
            return Err(CliError::Runtime(format!(
                "input {} changed since the run (sha256 {} recorded, {now} now)",
                input.path, input.sha256
            )));
        }
    }
    if out.join(MANIFEST_NAME).exists() {
        return Err(CliError::Runtime(format!(
            "{} already holds a run; choose a fresh --out",
            out.display()
        )));
    }
    let new_manifest = match m.subcommand.as_str() {
        "actin" => decode::<ActinSettings>(&m)?.execute(out)?,
        "graph" => decode::<GraphSettings>(&m)?.execute(out)?,
        "swarm" => decode::<SwarmSettings>(&m)?.execute(out)?,
        other => {
            return Err(CliError::Runtime(format!(
                "unknown subcommand {other:?} in manifest"
            )))
        }
    };
    let fresh = RunManifest::load(&new_manifest)?;
    let mut report = ReplayReport {
        matched: Vec::new(),
        mismatched: Vec::new(),
        unexpected: Vec::new(),
    };
    for rec in &m.outputs {
        match fresh.outputs.iter().find(|o| o.path == rec.path) {
            Some(o) if o.sha256 == rec.sha256 => report.matched.push(rec.path.clone()),
            Some(o) => {
                report
                    .mismatched
                    .push((rec.path.clone(), rec.sha256.clone(), o.sha256.clone()))
            }
            None => report
                .mismatched
                .push((rec.path.clone(), rec.sha256.clone(), String::new())),
        }
    }
    for o in &fresh.outputs {
        if !m.outputs.iter().any(|rec| rec.path == o.path) {
            report.unexpected.push(o.path.clone());
        }
    }
    Ok(report)
}

pub fn command(args: ReplayArgs) -> i32 {
    let out = args.out.unwrap_or_else(|| {
        args.manifest
            .parent()
            .unwrap_or(Path::new("."))
            .join("replay")
    });
    match replay(&args.manifest, &out) {
        Ok(report) => {
            for (path, recorded, reproduced) in &report.mismatched {
                if reproduced.is_empty() {
                    println!("MISSING  {path}");
                } else {
                    println!("MISMATCH {path} recorded {recorded} reproduced {reproduced}");
                }
            }
            for path in &report.unexpected {
                println!("EXTRA    {path}");
            }
            println!(
                "{} of {} outputs identical",
                report.matched.len(),
                report.matched.len() + report.mismatched.len()
            );
            if report.identical() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().max(2)
        }
    }
}
