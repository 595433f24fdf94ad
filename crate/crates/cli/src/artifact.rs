use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Failure;

/// The parameters a run depends on, echoed into every artifact it writes.
pub struct RunConfig {
    value: Value,
    hash: String,
}

impl RunConfig {
    pub fn new(command: &str, params: Value) -> Self {
        let mut value = json!({ "command": command });
        if let (Value::Object(dst), Value::Object(src)) = (&mut value, params) {
            dst.extend(src);
        }
        // Value maps are key-sorted, so the text is canonical
        let hash = sha256_hex(serde_json::to_string(&value).expect("json").as_bytes());
        Self { value, hash }
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// `{config_hash, config, ...payload}`.
    pub fn wrap<T: Serialize>(&self, payload: &T) -> Value {
        let mut out = json!({ "config_hash": self.hash, "config": self.value });
        if let (Value::Object(dst), Ok(Value::Object(src))) = (&mut out, serde_json::to_value(payload)) {
            dst.extend(src);
        }
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

pub fn out_dir(dir: &Path) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir.to_path_buf())
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("json");
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

/// Prints to stdout or writes to `output`.
pub fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write_bytes(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::io(e.to_string()))
        }
    }
}

pub fn emit_json(output: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("json");
    text.push('\n');
    emit(output, &text)
}

/// RFC 4180 text. The config hash rides along as the last column.
pub fn csv_text(config: &RunConfig, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let err = |e: csv::Error| Failure::io(e.to_string());
    w.write_record(header.iter().copied().chain(["config_hash"])).map_err(err)?;
    for r in rows {
        w.write_record(r.iter().map(String::as_str).chain([config.hash()])).map_err(err)?;
    }
    let body = w.into_inner().map_err(|e| Failure::io(e.to_string()))?;
    Ok(String::from_utf8(body).expect("utf-8"))
}
