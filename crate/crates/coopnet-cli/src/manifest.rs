//! Run manifests: every artifact-producing command writes a JSON record
//! beside its output with enough to reproduce the run bit-for-bit — the
//! exact argv, the resolved parameters, the seed, and digests of every
//! input graph and output file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::source::ResolvedGraph;

#[derive(Serialize)]
pub struct SourceRecord {
    /// `file:`, `family:`, or `model:` prefixed origin.
    pub source: String,
    /// Digest of the graph's canonical edge list.
    pub digest: String,
}

impl From<&ResolvedGraph> for SourceRecord {
    fn from(g: &ResolvedGraph) -> Self {
        SourceRecord {
            source: g.label.clone(),
            digest: g.digest.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct ArtifactRecord {
    pub path: String,
    /// Digest of the file bytes as written.
    pub digest: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    /// Subcommand name.
    pub command: &'static str,
    /// Arguments after the binary name; rerunning `coopnet` with exactly
    /// these reproduces the outputs.
    pub argv: Vec<String>,
    /// Master seed of the run, when any step was randomized.
    pub seed: Option<u64>,
    /// Resolved command-specific parameters.
    pub params: serde_json::Value,
    pub inputs: Vec<SourceRecord>,
    pub outputs: Vec<ArtifactRecord>,
}

impl RunManifest {
    pub fn new(
        command: &'static str,
        seed: Option<u64>,
        params: serde_json::Value,
        inputs: &[&ResolvedGraph],
    ) -> Self {
        RunManifest {
            tool: "coopnet",
            version: env!("CARGO_PKG_VERSION"),
            command,
            argv: std::env::args().skip(1).collect(),
            seed,
            params,
            inputs: inputs.iter().map(|&g| g.into()).collect(),
            outputs: Vec::new(),
        }
    }

    /// Writes `body` to `out` and the manifest to `<out>.manifest.json`.
    pub fn write_artifact(mut self, out: &Path, body: &str) -> Result<PathBuf> {
        fs::write(out, body).with_context(|| format!("writing {}", out.display()))?;
        self.outputs.push(ArtifactRecord {
            path: out.display().to_string(),
            digest: coopnet::digest::hex_digest(body.as_bytes()),
        });
        let manifest_path = PathBuf::from(format!("{}.manifest.json", out.display()));
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        fs::write(&manifest_path, text + "\n")
            .with_context(|| format!("writing {}", manifest_path.display()))?;
        Ok(manifest_path)
    }
}
