//! Resolving a `<FAN>` argument to a fan.
//!
//! `-` reads JSON from stdin, an existing path is read as a JSON file, and
//! anything else is looked up in the catalog: built-in entries first, then
//! `<name>.json` in the directory named by `TORIC_KSTAB_CATALOG_DIR`.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use toric_kstab::catalog::{catalog_get, catalog_list};
use toric_kstab::Fan;

pub const CATALOG_DIR_VAR: &str = "TORIC_KSTAB_CATALOG_DIR";

fn user_dir() -> Option<PathBuf> {
    std::env::var_os(CATALOG_DIR_VAR).map(PathBuf::from)
}

/// Names of `*.json` files in the user catalog directory, sorted.
pub fn user_entries() -> Result<Vec<String>> {
    let Some(dir) = user_dir() else {
        return Ok(Vec::new());
    };
    let mut names = Vec::new();
    for entry in fs::read_dir(&dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                names.push(stem.to_string());
            }
        }
    }
    names.sort();
    Ok(names)
}

/// Built-in and user names, sorted and deduplicated.
pub fn all_names() -> Result<Vec<String>> {
    let mut names = catalog_list();
    names.extend(user_entries()?);
    names.sort();
    names.dedup();
    Ok(names)
}

pub fn parse_fan(json: &str, origin: &str) -> Result<Fan> {
    serde_json::from_str(json).with_context(|| format!("invalid fan JSON in {origin}"))
}

fn read_file(path: &Path) -> Result<Fan> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_fan(&text, &path.display().to_string())
}

pub fn load(arg: &str) -> Result<Fan> {
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        return parse_fan(&text, "standard input");
    }
    let path = Path::new(arg);
    if path.is_file() {
        return read_file(path);
    }
    if let Ok(entry) = catalog_get(arg) {
        return Ok(entry.fan);
    }
    if let Some(dir) = user_dir() {
        let candidate = dir.join(format!("{arg}.json"));
        if candidate.is_file() {
            return read_file(&candidate);
        }
    }
    bail!(
        "{arg:?} is neither a readable fan file nor a catalog entry; available: {}",
        all_names()?.join(", ")
    )
}
