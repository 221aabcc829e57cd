//! JSON file formats: pretty printed, two-space indent, trailing newline.

use crate::error::{Error, Result};
use crate::groups::Catalog;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::Path;

pub const CATALOG_ENV: &str = "POLARIS_CATALOG";

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedDescriptor(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| match e {
        Error::MalformedDescriptor(m) => Error::MalformedDescriptor(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Catalog from an explicit path, else from `$POLARIS_CATALOG`, else the built-in default.
pub fn load_catalog(path: Option<&Path>) -> Result<Catalog> {
    let from_env = std::env::var_os(CATALOG_ENV).map(std::path::PathBuf::from);
    let Some(path) = path.map(Path::to_path_buf).or(from_env) else {
        return Ok(Catalog::default_catalog());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let (cat, report) = Catalog::from_json(&text).map_err(Error::MalformedDescriptor)?;
    if !report.is_valid() {
        let lines: Vec<String> =
            report.violations.iter().map(|v| format!("{} {}: {}", v.entry, v.location, v.message)).collect();
        return Err(Error::InvalidCatalog(lines.join("; ")));
    }
    Ok(cat)
}
