//! Versioned catalogue of valid callables, canonical aliases, object
//! methods and semantic rules for the target libraries.
//!
//! A [`KnowledgeBase`] is immutable once loaded. Several manifests can be
//! layered with [`KnowledgeBase::merge`]; the right-hand side wins on
//! version and rule conflicts.

mod manifest;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

pub use manifest::{
    ExtensionRuleDoc, IntentRuleDoc, LibraryDoc, ManifestDoc, PreferenceDoc, SemanticDoc, SCHEMA_VERSION,
};

use crate::syntax::is_identifier;
use crate::validation::distance;

/// Manifests shipped inside the crate: numpy, pandas, requests,
/// matplotlib.pyplot and json, introspected from installed releases.
pub const BUNDLED_MANIFESTS: &[(&str, &str)] = &[
    ("json", include_str!("../../manifests/json.json")),
    ("matplotlib.pyplot", include_str!("../../manifests/matplotlib.pyplot.json")),
    ("numpy", include_str!("../../manifests/numpy.json")),
    ("pandas", include_str!("../../manifests/pandas.json")),
    ("requests", include_str!("../../manifests/requests.json")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("invalid manifest at `{path}`: {reason}")]
    Schema { path: String, reason: String },
    #[error("dangling rule at `{path}`: `{library}.{callable}` is not a known callable")]
    DanglingRule { path: String, library: String, callable: String },
}

impl ManifestError {
    /// Location of the problem inside the manifest document.
    pub fn path(&self) -> &str {
        match self {
            ManifestError::Schema { path, .. } | ManifestError::DanglingRule { path, .. } => path,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("library `{0}` is not in the knowledge base")]
pub struct UnknownLibrary(pub String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibraryEntry {
    pub module_path: String,
    pub version: String,
    pub canonical_alias: Option<String>,
    pub callables: HashSet<String>,
    pub object_methods: BTreeMap<String, HashSet<String>>,
    /// Callable name to the type of object it returns.
    pub constructors: BTreeMap<String, String>,
}

/// A `(library, callable)` reference used by semantic rules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApiRef {
    pub library: String,
    pub callable: String,
}

impl ApiRef {
    fn new(library: &str, callable: &str) -> ApiRef {
        ApiRef { library: library.to_string(), callable: callable.to_string() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SemanticRules {
    /// `(extension, library)` to the reader that library prefers for it.
    pub extension_map: BTreeMap<(String, String), String>,
    pub reader_family: BTreeSet<String>,
    /// Lowercase cue word to the API it implies.
    pub intent_synonyms: BTreeMap<String, ApiRef>,
    pub preferences: BTreeMap<String, ApiRef>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    libraries: BTreeMap<String, LibraryEntry>,
    semantic: SemanticRules,
}

fn schema_err(path: impl Into<String>, reason: impl Into<String>) -> ManifestError {
    ManifestError::Schema { path: path.into(), reason: reason.into() }
}

fn check_identifier(path: &str, name: &str) -> Result<(), ManifestError> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(schema_err(path, format!("`{name}` is not a valid identifier")))
    }
}

impl KnowledgeBase {
    pub fn empty() -> KnowledgeBase {
        KnowledgeBase::default()
    }

    /// Parse and validate a manifest document.
    pub fn load_manifest(bytes: &[u8]) -> Result<KnowledgeBase, ManifestError> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        let doc: ManifestDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            schema_err(if path == "." { String::new() } else { path }, e.into_inner().to_string())
        })?;
        KnowledgeBase::from_doc(doc)
    }

    /// Every bundled manifest merged in name order.
    pub fn bundled() -> KnowledgeBase {
        BUNDLED_MANIFESTS.iter().fold(KnowledgeBase::empty(), |kb, (name, text)| {
            let part = KnowledgeBase::load_manifest(text.as_bytes())
                .unwrap_or_else(|e| panic!("bundled manifest {name} is invalid: {e}"));
            kb.merge(&part)
        })
    }

    pub fn from_doc(doc: ManifestDoc) -> Result<KnowledgeBase, ManifestError> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(schema_err(
                "schema_version",
                format!("unsupported schema version {} (expected {SCHEMA_VERSION})", doc.schema_version),
            ));
        }
        let mut libraries = BTreeMap::new();
        for (path, lib) in doc.libraries {
            let at = format!("libraries.{path}");
            if path.is_empty() || !path.split('.').all(is_identifier) {
                return Err(schema_err(&at, "module path must be a dotted identifier"));
            }
            if lib.version.trim().is_empty() {
                return Err(schema_err(format!("{at}.version"), "version must not be empty"));
            }
            if let Some(alias) = &lib.canonical_alias {
                check_identifier(&format!("{at}.canonical_alias"), alias)?;
            }
            for (i, name) in lib.callables.iter().enumerate() {
                check_identifier(&format!("{at}.callables[{i}]"), name)?;
            }
            let mut object_methods = BTreeMap::new();
            for (ty, methods) in &lib.object_methods {
                check_identifier(&format!("{at}.object_methods"), ty)?;
                for (i, m) in methods.iter().enumerate() {
                    check_identifier(&format!("{at}.object_methods.{ty}[{i}]"), m)?;
                }
                object_methods.insert(ty.clone(), methods.iter().cloned().collect());
            }
            let callables: HashSet<String> = lib.callables.into_iter().collect();
            for (ctor, ty) in &lib.constructors {
                if !callables.contains(ctor) {
                    return Err(ManifestError::DanglingRule {
                        path: format!("{at}.constructors.{ctor}"),
                        library: path.clone(),
                        callable: ctor.clone(),
                    });
                }
                check_identifier(&format!("{at}.constructors.{ctor}"), ty)?;
            }
            libraries.insert(
                path.clone(),
                LibraryEntry {
                    module_path: path,
                    version: lib.version,
                    canonical_alias: lib.canonical_alias,
                    callables,
                    object_methods,
                    constructors: lib.constructors,
                },
            );
        }

        let exists = |lib: &str, callable: &str| {
            libraries.get(lib).is_some_and(|l: &LibraryEntry| l.callables.contains(callable))
        };
        let dangling = |path: String, lib: &str, callable: &str| ManifestError::DanglingRule {
            path,
            library: lib.to_string(),
            callable: callable.to_string(),
        };

        let mut semantic = SemanticRules::default();
        for (i, rule) in doc.semantic.extension_map.iter().enumerate() {
            let at = format!("semantic.extension_map[{i}]");
            if !rule.ext.starts_with('.') || rule.ext.len() < 2 {
                return Err(schema_err(format!("{at}.ext"), "extension must start with '.'"));
            }
            if !exists(&rule.library, &rule.callable) {
                return Err(dangling(at, &rule.library, &rule.callable));
            }
            semantic.extension_map.insert((rule.ext.to_lowercase(), rule.library.clone()), rule.callable.clone());
        }
        for (i, name) in doc.semantic.reader_family.iter().enumerate() {
            check_identifier(&format!("semantic.reader_family[{i}]"), name)?;
            semantic.reader_family.insert(name.clone());
        }
        for (i, rule) in doc.semantic.intent_synonyms.iter().enumerate() {
            let at = format!("semantic.intent_synonyms[{i}]");
            if rule.word.trim().is_empty() || rule.word.contains(char::is_whitespace) {
                return Err(schema_err(format!("{at}.word"), "intent word must be a single word"));
            }
            if !exists(&rule.library, &rule.callable) {
                return Err(dangling(at, &rule.library, &rule.callable));
            }
            semantic.intent_synonyms.insert(rule.word.to_lowercase(), ApiRef::new(&rule.library, &rule.callable));
        }
        for (i, rule) in doc.semantic.preferences.iter().enumerate() {
            let at = format!("semantic.preferences[{i}]");
            if rule.intent.trim().is_empty() {
                return Err(schema_err(format!("{at}.intent"), "intent must not be empty"));
            }
            if !exists(&rule.library, &rule.callable) {
                return Err(dangling(at, &rule.library, &rule.callable));
            }
            semantic.preferences.insert(rule.intent.clone(), ApiRef::new(&rule.library, &rule.callable));
        }
        Ok(KnowledgeBase { libraries, semantic })
    }

    /// Manifest document with every list sorted, suitable for serialization.
    pub fn to_doc(&self) -> ManifestDoc {
        let sorted = |set: &HashSet<String>| {
            let mut v: Vec<String> = set.iter().cloned().collect();
            v.sort();
            v
        };
        let libraries = self
            .libraries
            .iter()
            .map(|(path, lib)| {
                (
                    path.clone(),
                    LibraryDoc {
                        version: lib.version.clone(),
                        canonical_alias: lib.canonical_alias.clone(),
                        callables: sorted(&lib.callables),
                        object_methods: lib.object_methods.iter().map(|(t, m)| (t.clone(), sorted(m))).collect(),
                        constructors: lib.constructors.clone(),
                    },
                )
            })
            .collect();
        let s = &self.semantic;
        ManifestDoc {
            schema_version: SCHEMA_VERSION,
            libraries,
            semantic: SemanticDoc {
                extension_map: s
                    .extension_map
                    .iter()
                    .map(|((ext, library), callable)| ExtensionRuleDoc {
                        ext: ext.clone(),
                        library: library.clone(),
                        callable: callable.clone(),
                    })
                    .collect(),
                reader_family: s.reader_family.iter().cloned().collect(),
                intent_synonyms: s
                    .intent_synonyms
                    .iter()
                    .map(|(word, r)| IntentRuleDoc {
                        word: word.clone(),
                        library: r.library.clone(),
                        callable: r.callable.clone(),
                    })
                    .collect(),
                preferences: s
                    .preferences
                    .iter()
                    .map(|(intent, r)| PreferenceDoc {
                        intent: intent.clone(),
                        library: r.library.clone(),
                        callable: r.callable.clone(),
                    })
                    .collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Per-library union of callables and methods; `other` wins on version,
    /// alias and semantic-rule conflicts.
    pub fn merge(&self, other: &KnowledgeBase) -> KnowledgeBase {
        let mut out = self.clone();
        for (path, lib) in &other.libraries {
            match out.libraries.get_mut(path) {
                Some(mine) => {
                    mine.version = lib.version.clone();
                    if lib.canonical_alias.is_some() {
                        mine.canonical_alias = lib.canonical_alias.clone();
                    }
                    mine.callables.extend(lib.callables.iter().cloned());
                    for (ty, methods) in &lib.object_methods {
                        mine.object_methods.entry(ty.clone()).or_default().extend(methods.iter().cloned());
                    }
                    mine.constructors.extend(lib.constructors.iter().map(|(k, v)| (k.clone(), v.clone())));
                }
                None => {
                    out.libraries.insert(path.clone(), lib.clone());
                }
            }
        }
        let s = &mut out.semantic;
        s.extension_map.extend(other.semantic.extension_map.iter().map(|(k, v)| (k.clone(), v.clone())));
        s.reader_family.extend(other.semantic.reader_family.iter().cloned());
        s.intent_synonyms.extend(other.semantic.intent_synonyms.iter().map(|(k, v)| (k.clone(), v.clone())));
        s.preferences.extend(other.semantic.preferences.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }

    pub fn libraries(&self) -> impl Iterator<Item = &LibraryEntry> {
        self.libraries.values()
    }

    pub fn library(&self, module_path: &str) -> Option<&LibraryEntry> {
        self.libraries.get(module_path)
    }

    pub fn semantic(&self) -> &SemanticRules {
        &self.semantic
    }

    /// Total number of callable entries across libraries.
    pub fn callable_count(&self) -> usize {
        self.libraries.values().map(|l| l.callables.len()).sum()
    }

    pub fn lookup_callable(&self, module_path: &str, name: &str) -> Result<bool, UnknownLibrary> {
        self.library(module_path)
            .map(|l| l.callables.contains(name))
            .ok_or_else(|| UnknownLibrary(module_path.to_string()))
    }

    pub fn lookup_method(&self, module_path: &str, type_name: &str, name: &str) -> Result<bool, UnknownLibrary> {
        self.library(module_path)
            .map(|l| l.object_methods.get(type_name).is_some_and(|m| m.contains(name)))
            .ok_or_else(|| UnknownLibrary(module_path.to_string()))
    }

    /// Closest callable of `module_path` to `name` that passes the
    /// suggestion threshold.
    pub fn nearest_symbol(&self, module_path: &str, name: &str) -> Option<(String, usize)> {
        let lib = self.library(module_path)?;
        distance::closest(name, lib.callables.iter().map(String::as_str))
    }

    /// Closest method of a tracked object type.
    pub fn nearest_method(&self, module_path: &str, type_name: &str, name: &str) -> Option<(String, usize)> {
        let methods = self.library(module_path)?.object_methods.get(type_name)?;
        distance::closest(name, methods.iter().map(String::as_str))
    }

    /// Libraries whose callables include `name`, in module-path order.
    pub fn libraries_with_callable(&self, name: &str) -> Vec<&LibraryEntry> {
        self.libraries.values().filter(|l| l.callables.contains(name)).collect()
    }

    /// Library whose canonical alias is `alias`.
    pub fn library_by_alias(&self, alias: &str) -> Option<&LibraryEntry> {
        self.libraries.values().find(|l| l.canonical_alias.as_deref() == Some(alias))
    }

    pub fn is_canonical_alias(&self, name: &str) -> bool {
        self.library_by_alias(name).is_some()
    }

    pub fn constructor_type(&self, module_path: &str, callable: &str) -> Option<&str> {
        self.library(module_path)?.constructors.get(callable).map(String::as_str)
    }

    /// Reader preferred by `library` for files with extension `ext`
    /// (lowercase, with leading dot).
    pub fn reader_for_extension(&self, ext: &str, library: &str) -> Option<&str> {
        self.semantic.extension_map.get(&(ext.to_string(), library.to_string())).map(String::as_str)
    }

    pub fn is_reader(&self, callable: &str) -> bool {
        self.semantic.reader_family.contains(callable)
    }

    /// Library a preference rule selects for `callable`, when exactly one
    /// rule names it.
    pub fn preferred_library(&self, callable: &str) -> Option<&str> {
        let mut libs: BTreeSet<&str> = BTreeSet::new();
        for r in self.semantic.preferences.values() {
            if r.callable == callable {
                libs.insert(r.library.as_str());
            }
        }
        if libs.len() == 1 {
            libs.into_iter().next()
        } else {
            None
        }
    }

    pub fn intent_for_word(&self, word: &str) -> Option<&ApiRef> {
        self.semantic.intent_synonyms.get(&word.to_lowercase())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(json: &str) -> Result<KnowledgeBase, ManifestError> {
        KnowledgeBase::load_manifest(json.as_bytes())
    }

    #[test]
    fn bundled_pandas_contents() {
        let kb = KnowledgeBase::bundled();
        let pandas = kb.library("pandas").unwrap();
        for name in ["read_csv", "read_excel", "read_json", "DataFrame", "concat", "merge"] {
            assert!(pandas.callables.contains(name), "{name}");
        }
        let df = &pandas.object_methods["DataFrame"];
        for m in ["head", "describe", "groupby", "to_csv"] {
            assert!(df.contains(m), "{m}");
        }
        assert!(pandas.object_methods.contains_key("Series"));
        assert_eq!(pandas.canonical_alias.as_deref(), Some("pd"));
        assert!(!pandas.version.is_empty());
    }

    #[test]
    fn canonical_aliases() {
        let kb = KnowledgeBase::bundled();
        let expect = [
            ("numpy", "np"),
            ("pandas", "pd"),
            ("matplotlib.pyplot", "plt"),
            ("requests", "requests"),
            ("json", "json"),
        ];
        for (lib, alias) in expect {
            assert_eq!(kb.library(lib).unwrap().canonical_alias.as_deref(), Some(alias));
        }
    }

    #[test]
    fn empty_libraries_document() {
        let kb = doc(r#"{"schema_version": 1, "libraries": {}}"#).unwrap();
        assert_eq!(kb.callable_count(), 0);
    }

    #[test]
    fn dangling_intent_synonym() {
        let err = doc(r#"{"schema_version": 1,
                "libraries": {"numpy": {"version": "2.0", "callables": ["mean"]}},
                "semantic": {"intent_synonyms": [{"word": "average", "library": "numpy", "callable": "meen"}]}}"#)
        .unwrap_err();
        assert!(matches!(err, ManifestError::DanglingRule { ref callable, .. } if callable == "meen"));
        assert_eq!(err.path(), "semantic.intent_synonyms[0]");
    }

    #[test]
    fn unknown_fields_are_rejected_with_path() {
        let err = doc(r#"{"schema_version": 1, "libraries": {"json": {"version": "2", "callabls": []}}}"#).unwrap_err();
        assert_eq!(err.path(), "libraries.json.callabls");
        let err =
            doc(r#"{"schema_version": 1, "libraries": {"json": {"version": "2", "callables": [3]}}}"#).unwrap_err();
        assert_eq!(err.path(), "libraries.json.callables[0]");
    }

    #[test]
    fn schema_checks() {
        assert_eq!(doc(r#"{"schema_version": 2}"#).unwrap_err().path(), "schema_version");
        let bad_ext = r#"{"schema_version": 1, "libraries": {"pandas": {"version": "1", "callables": ["read_csv"]}},
            "semantic": {"extension_map": [{"ext": "csv", "library": "pandas", "callable": "read_csv"}]}}"#;
        assert_eq!(doc(bad_ext).unwrap_err().path(), "semantic.extension_map[0].ext");
        let bad_alias = r#"{"schema_version": 1, "libraries": {"pandas": {"version": "1", "canonical_alias": "p d"}}}"#;
        assert_eq!(doc(bad_alias).unwrap_err().path(), "libraries.pandas.canonical_alias");
        let no_version = r#"{"schema_version": 1, "libraries": {"pandas": {"version": ""}}}"#;
        assert_eq!(doc(no_version).unwrap_err().path(), "libraries.pandas.version");
    }

    #[test]
    fn lookups() {
        let kb = KnowledgeBase::bundled();
        assert_eq!(kb.lookup_callable("pandas", "read_csv"), Ok(true));
        assert_eq!(kb.lookup_callable("pandas", "read_exel"), Ok(false));
        assert_eq!(kb.lookup_callable("json", "loads"), Ok(true));
        assert_eq!(kb.lookup_callable("scipy", "stats"), Err(UnknownLibrary("scipy".into())));
        assert_eq!(kb.lookup_method("pandas", "DataFrame", "head"), Ok(true));
    }

    #[test]
    fn nearest_symbols() {
        let kb = KnowledgeBase::bundled();
        assert_eq!(kb.nearest_symbol("pandas", "read_exel"), Some(("read_excel".into(), 1)));
        assert_eq!(kb.nearest_symbol("numpy", "arrya"), Some(("array".into(), 2)));
        assert_eq!(kb.nearest_symbol("matplotlib.pyplot", "plotx"), Some(("plot".into(), 1)));
        assert_eq!(kb.nearest_symbol("pandas", "zzqq"), None);
        assert_eq!(kb.nearest_symbol("pandas", "read_csv"), Some(("read_csv".into(), 0)));
    }

    #[test]
    fn merge_rules() {
        let a = doc(r#"{"schema_version": 1, "libraries": {"m": {"version": "2.0", "callables": ["f"]}}}"#).unwrap();
        let b = doc(r#"{"schema_version": 1, "libraries": {"m": {"version": "2.1", "callables": ["g"]}}}"#).unwrap();
        let merged = a.merge(&b);
        let m = merged.library("m").unwrap();
        assert_eq!(m.version, "2.1");
        assert_eq!(m.callables, ["f", "g"].iter().map(|s| s.to_string()).collect());
        assert_eq!(a.merge(&KnowledgeBase::empty()), a);
        assert_eq!(a.merge(&a), a);
    }

    #[test]
    fn serialization_round_trip() {
        let kb = KnowledgeBase::bundled();
        let again = KnowledgeBase::load_manifest(kb.to_json().as_bytes()).unwrap();
        assert_eq!(kb, again);
        assert_eq!(kb.to_json(), again.to_json());
    }

    #[test]
    fn preferences_disambiguate() {
        let kb = KnowledgeBase::bundled();
        assert_eq!(kb.preferred_library("get"), Some("requests"));
        assert_eq!(kb.preferred_library("array"), Some("numpy"));
        assert_eq!(kb.preferred_library("read_csv"), None);
    }
}
