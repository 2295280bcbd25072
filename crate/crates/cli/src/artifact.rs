use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const VERSION: &str = env!("BDLAB_VERSION");

/// Provenance stamped on every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub config_hash: String,
    pub seed: u64,
    pub config: Value,
}

impl Meta {
    /// The hash covers the canonical JSON of the command; the thread count is
    /// left out since it does not affect the output.
    pub fn new<C: Serialize>(config: &C, seed: u64) -> Self {
        let config = serde_json::to_value(config).expect("config serializes");
        let digest = Sha256::digest(config.to_string().as_bytes());
        Meta { version: VERSION, config_hash: format!("{digest:x}"), seed, config }
    }

    pub fn csv_header(&self) -> String {
        format!("# version={} config_hash={} seed={}\n", self.version, self.config_hash, self.seed)
    }

    /// `body` with a leading `meta` field.
    pub fn wrap(&self, body: Value) -> Value {
        let mut out = json!({ "meta": self });
        if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
            o.extend(b);
        }
        out
    }
}

pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, bytes)?;
        }
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

pub fn in_dir(dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}
