//! On-disk manifest document. Field order here is the serialization order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDoc {
    pub schema_version: u32,
    #[serde(default)]
    pub libraries: BTreeMap<String, LibraryDoc>,
    #[serde(default)]
    pub semantic: SemanticDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryDoc {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_alias: Option<String>,
    #[serde(default)]
    pub callables: Vec<String>,
    #[serde(default)]
    pub object_methods: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub constructors: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemanticDoc {
    #[serde(default)]
    pub extension_map: Vec<ExtensionRuleDoc>,
    #[serde(default)]
    pub reader_family: Vec<String>,
    #[serde(default)]
    pub intent_synonyms: Vec<IntentRuleDoc>,
    #[serde(default)]
    pub preferences: Vec<PreferenceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionRuleDoc {
    pub ext: String,
    pub library: String,
    pub callable: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntentRuleDoc {
    pub word: String,
    pub library: String,
    pub callable: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferenceDoc {
    pub intent: String,
    pub library: String,
    pub callable: String,
}
