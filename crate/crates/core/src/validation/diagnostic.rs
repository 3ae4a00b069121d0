use std::fmt;

use serde::Serialize;

use crate::syntax::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Category {
    UnknownApi,
    BareCriticalCall,
    SemanticArgumentShape,
    SemanticIntent,
    IdentifierConflict,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::UnknownApi,
        Category::BareCriticalCall,
        Category::SemanticArgumentShape,
        Category::SemanticIntent,
        Category::IdentifierConflict,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::UnknownApi => "UnknownApi",
            Category::BareCriticalCall => "BareCriticalCall",
            Category::SemanticArgumentShape => "SemanticArgumentShape",
            Category::SemanticIntent => "SemanticIntent",
            Category::IdentifierConflict => "IdentifierConflict",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    ExactRule,
    EditDistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixKind {
    RenameCallee,
    RewriteCalleeForContext,
    InsertImportAndQualify,
    RenameIdentifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RequiredImport {
    pub module_path: String,
    pub alias: String,
}

impl fmt::Display for RequiredImport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.module_path == self.alias {
            write!(f, "import {}", self.module_path)
        } else {
            write!(f, "import {} as {}", self.module_path, self.alias)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuggestedFix {
    pub kind: FixKind,
    /// Full replacement for the flagged callee or identifier, e.g.
    /// `pd.read_csv` or `max_len_str`.
    pub replacement: String,
    pub required_import: Option<RequiredImport>,
}

impl fmt::Display for SuggestedFix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.required_import {
            Some(imp) => write!(f, "{imp}; use {}", self.replacement),
            None => write!(f, "use {}", self.replacement),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub category: Category,
    /// Callee expression for call rules, the name for identifier conflicts.
    pub span: Span,
    /// Callee or identifier as written.
    pub subject: String,
    pub message: String,
    pub suggestion: Option<SuggestedFix>,
    pub confidence: Confidence,
}

impl Diagnostic {
    /// `line:col: CATEGORY message [suggestion]`
    pub fn render(&self) -> String {
        let mut s = format!("{}: {} {}", self.span, self.category, self.message);
        if let Some(fix) = &self.suggestion {
            s.push_str(&format!(" [{fix}]"));
        }
        s
    }
}
