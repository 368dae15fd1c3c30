use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::body::ConvexBody;
use crate::error::{Error, Result};

/// On-disk body description. Facets are never stored; they are recomputed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyFile {
    pub dimension: usize,
    #[serde(default)]
    pub label: String,
    pub vertices: Vec<Vec<f64>>,
}

pub fn body_from_json(text: &str) -> Result<ConvexBody> {
    let file: BodyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = file.dimension;
    if let Some(bad) = file.vertices.iter().find(|v| v.len() != n) {
        return Err(Error::Parse(format!("vertex of length {} in a {n}-dimensional body", bad.len())));
    }
    let flat: Vec<f64> = file.vertices.concat();
    ConvexBody::from_flat(n, &flat, file.label).map_err(|e| match e {
        Error::DegenerateInput { .. } | Error::InvalidArgument(_) => Error::Parse(e.to_string()),
        other => other,
    })
}

pub fn body_to_json(body: &ConvexBody) -> String {
    let file = BodyFile {
        dimension: body.dim(),
        label: body.label().to_string(),
        vertices: body.vertices().map(|v| v.to_vec()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("body serialization cannot fail")
}

pub fn read_body(path: impl AsRef<Path>) -> Result<ConvexBody> {
    let text = std::fs::read_to_string(path)?;
    body_from_json(&text)
}

/// Writes through a temporary file and renames, so readers never observe a
/// partial body.
pub fn write_body(path: impl AsRef<Path>, body: &ConvexBody) -> Result<()> {
    write_atomic(path.as_ref(), body_to_json(body).as_bytes())
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}
