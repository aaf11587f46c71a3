//! Output artifacts: metadata envelope and atomic file writes.

use qwe_core::{Error, Result};
use serde::Serialize;
use std::path::Path;

/// Reproducibility header embedded in every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub precision: String,
}

impl Meta {
    pub fn new(seed: Option<u64>, precision: &str) -> Meta {
        let command = std::env::args().collect::<Vec<_>>().join(" ");
        Meta {
            tool: "qwe",
            version: qwe_core::VERSION,
            command,
            seed,
            precision: precision.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub meta: Meta,
    #[serde(flatten)]
    pub payload: T,
}

/// Write via a temp file in the target directory plus a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp{}",
            path.file_name().and_then(|f| f.to_str()).unwrap_or("out"),
            std::process::id()
        )),
        None => Path::new(&format!(
            ".{}.tmp{}",
            path.file_name().and_then(|f| f.to_str()).unwrap_or("out"),
            std::process::id()
        ))
        .to_path_buf(),
    };
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: Option<&Path>, meta: Meta, payload: T) -> Result<()> {
    let envelope = Envelope { meta, payload };
    let mut text = serde_json::to_string_pretty(&envelope)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    text.push('\n');
    emit(path, text.as_bytes())
}

/// CSV with `# key: value` metadata comment lines on top.
pub fn write_csv(path: Option<&Path>, meta: Meta, body: &str) -> Result<()> {
    let mut text = String::new();
    text.push_str(&format!("# tool: {} {}\n", meta.tool, meta.version));
    text.push_str(&format!("# command: {}\n", meta.command));
    if let Some(seed) = meta.seed {
        text.push_str(&format!("# seed: {seed}\n"));
    }
    text.push_str(&format!("# precision: {}\n", meta.precision));
    text.push_str(body);
    emit(path, text.as_bytes())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}
