//! Deterministic detection and repair of knowledge-conflicting hallucinations
//! (invented APIs, missing imports, context mismatches, undefined identifiers)
//! in Python snippets.
//!
//! The pipeline is entirely static: source is parsed into an AST
//! ([`syntax`]), structural features are pulled out of it ([`extraction`]),
//! checked against a versioned API catalogue ([`knowledge_base`]) by a fixed
//! rule set ([`validation`]), and repaired through localized tree edits that
//! are unparsed back to canonical source ([`correction`]). [`evalharness`]
//! scores the whole thing against labelled corpora.

pub mod correction;
pub mod evalharness;
pub mod extraction;
pub mod knowledge_base;
pub mod syntax;
pub mod validation;

pub use correction::{fix, fix_with, FixOptions, FixResult};
pub use knowledge_base::KnowledgeBase;
pub use syntax::{parse, unparse, Module, ParseError, Span};
pub use validation::{validate, Category, Diagnostic};
