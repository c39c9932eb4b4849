//! Run manifests: every command writes `<primary-out>.manifest.json`
//! recording the exact invocation, digests of its input files and the list
//! of outputs. No timestamps, so reruns are byte-identical.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    argv: Vec<String>,
    inputs: Vec<InputDigest>,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

pub fn write(primary_out: &Path, inputs: &[&Path], outputs: &[&Path]) -> qsl_core::Result<()> {
    // argv[0] normalized so manifests do not depend on the install path
    let mut argv: Vec<String> = std::env::args().collect();
    if !argv.is_empty() {
        argv[0] = "qsl".into();
    }
    let mut digests = Vec::new();
    for path in inputs {
        let bytes = std::fs::read(path)?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        digests.push(InputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", hasher.finalize()),
        });
    }
    let manifest = Manifest {
        tool: "qsl",
        version: env!("CARGO_PKG_VERSION"),
        argv,
        inputs: digests,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    let path = primary_out.with_extension(match primary_out.extension() {
        Some(ext) => format!("{}.manifest.json", ext.to_string_lossy()),
        None => "manifest.json".into(),
    });
    std::fs::write(path, serde_json::to_string_pretty(&manifest).expect("manifest serialization"))?;
    Ok(())
}
