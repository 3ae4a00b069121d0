use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Clean,
    Hallucinated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HallucType {
    MistypedApi,
    MissingImport,
    ContextualMismatch,
    IdentifierConflict,
}

impl HallucType {
    pub const ALL: [HallucType; 4] = [
        HallucType::MistypedApi,
        HallucType::MissingImport,
        HallucType::ContextualMismatch,
        HallucType::IdentifierConflict,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HallucType::MistypedApi => "mistyped-api",
            HallucType::MissingImport => "missing-import",
            HallucType::ContextualMismatch => "contextual-mismatch",
            HallucType::IdentifierConflict => "identifier-conflict",
        }
    }
}

impl fmt::Display for HallucType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HallucType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HallucType::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| format!("unknown hallucination type `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub id: String,
    pub code: String,
    pub label: Label,
    pub halluc_type: Option<HallucType>,
    pub library: Option<String>,
    pub expected_fixed_code: Option<String>,
}

impl Sample {
    pub fn clean(id: &str, code: &str) -> Sample {
        Sample {
            id: id.to_string(),
            code: code.to_string(),
            label: Label::Clean,
            halluc_type: None,
            library: None,
            expected_fixed_code: None,
        }
    }

    /// Checks the label/type and expected-code invariants.
    pub fn check(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.label == Label::Hallucinated && self.halluc_type.is_none() {
            return Err("hallucinated sample without halluc_type".into());
        }
        if let Some(expected) = &self.expected_fixed_code {
            parse(expected).map_err(|e| format!("expected code does not parse: {e}"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed index {path}: {reason}")]
    Index { path: PathBuf, reason: String },
    #[error("sample `{id}`: {reason}")]
    Sample { id: String, reason: String },
}

pub const INDEX_FILE: &str = "index.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexDoc {
    samples: Vec<IndexEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexEntry {
    id: String,
    label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    halluc_type: Option<HallucType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    library: Option<String>,
    code_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected_path: Option<String>,
}

fn read(path: &Path) -> Result<String, DatasetError> {
    fs::read_to_string(path).map_err(|source| DatasetError::Io { path: path.to_path_buf(), source })
}

/// Samples listed in `<dir>/index.json`, in index order.
pub fn load_dataset(dir: &Path) -> Result<Vec<Sample>, DatasetError> {
    let index_path = dir.join(INDEX_FILE);
    let text = read(&index_path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let doc: IndexDoc = serde_path_to_error::deserialize(de).map_err(|e| DatasetError::Index {
        path: index_path.clone(),
        reason: format!("{}: {}", e.path(), e.inner()),
    })?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(doc.samples.len());
    for entry in doc.samples {
        let bad = |reason: String| DatasetError::Sample { id: entry.id.clone(), reason };
        if !seen.insert(entry.id.clone()) {
            return Err(bad("duplicate id".into()));
        }
        let code = read(&dir.join(&entry.code_path)).map_err(|e| bad(e.to_string()))?;
        let expected_fixed_code = match &entry.expected_path {
            Some(p) => Some(read(&dir.join(p)).map_err(|e| bad(e.to_string()))?),
            None => None,
        };
        let sample = Sample {
            id: entry.id.clone(),
            code,
            label: entry.label,
            halluc_type: entry.halluc_type,
            library: entry.library.clone(),
            expected_fixed_code,
        };
        sample.check().map_err(bad)?;
        out.push(sample);
    }
    Ok(out)
}

/// Writes `samples` in the layout [`load_dataset`] reads:
/// `index.json`, `samples/<id>.py`, `expected/<id>.py`.
pub fn write_dataset(dir: &Path, samples: &[Sample]) -> Result<(), DatasetError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| DatasetError::Io { path, source }
    };
    for sub in ["samples", "expected"] {
        let p = dir.join(sub);
        fs::create_dir_all(&p).map_err(io(&p))?;
    }
    let mut entries = Vec::new();
    for s in samples {
        s.check().map_err(|reason| DatasetError::Sample { id: s.id.clone(), reason })?;
        let code_path = format!("samples/{}.py", s.id);
        fs::write(dir.join(&code_path), &s.code).map_err(io(&dir.join(&code_path)))?;
        let expected_path = match &s.expected_fixed_code {
            Some(code) => {
                let p = format!("expected/{}.py", s.id);
                fs::write(dir.join(&p), code).map_err(io(&dir.join(&p)))?;
                Some(p)
            }
            None => None,
        };
        entries.push(IndexEntry {
            id: s.id.clone(),
            label: s.label,
            halluc_type: s.halluc_type,
            library: s.library.clone(),
            code_path,
            expected_path,
        });
    }
    let mut text = serde_json::to_string_pretty(&IndexDoc { samples: entries }).expect("index serializes");
    text.push('\n');
    let index = dir.join(INDEX_FILE);
    fs::write(&index, text).map_err(io(&index))
}
