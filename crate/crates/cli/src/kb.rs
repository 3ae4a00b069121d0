use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kchlint_core::KnowledgeBase;

pub const KB_PATH_VAR: &str = "KCHLINT_KB_PATH";

pub fn load_file(path: &Path) -> Result<KnowledgeBase> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    KnowledgeBase::load_manifest(&bytes).with_context(|| format!("{}", path.display()))
}

/// Manifests named by the search path: files as given, directories
/// expanded to their `*.json` entries in name order. Missing entries are skipped.
fn search_path_manifests() -> Result<Vec<PathBuf>> {
    let Some(var) = std::env::var_os(KB_PATH_VAR) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for entry in std::env::split_paths(&var) {
        if entry.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(&entry)
                .with_context(|| format!("cannot list {}", entry.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            found.sort();
            out.extend(found);
        } else if entry.is_file() {
            out.push(entry);
        }
    }
    Ok(out)
}

/// Bundled manifests, then the search path, then `--kb` files.
pub fn resolve(extra: &[PathBuf]) -> Result<KnowledgeBase> {
    let mut kb = KnowledgeBase::bundled();
    for path in search_path_manifests()?.iter().chain(extra) {
        kb = kb.merge(&load_file(path)?);
    }
    Ok(kb)
}
