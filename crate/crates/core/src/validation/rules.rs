use std::collections::BTreeSet;

use super::builtins::is_builtin;
use super::diagnostic::{Category, Confidence, Diagnostic, FixKind, RequiredImport, SuggestedFix};
use super::distance;
use crate::extraction::{AssignedValue, CallSite, CalleeKind, DefKind, Features, Receiver};
use crate::knowledge_base::{KnowledgeBase, LibraryEntry};

/// How a call site's callee maps onto the knowledge base.
#[derive(Debug, Clone)]
pub(crate) enum Target<'k> {
    /// Module-level callable of a library.
    Callable { lib: &'k LibraryEntry, from_import: bool },
    /// Method of a constructor-tracked object.
    Method { lib: &'k LibraryEntry, type_name: String },
}

pub(crate) struct Rules<'a> {
    pub kb: &'a KnowledgeBase,
    pub features: &'a Features,
}

fn replace_last(dotted: &str, name: &str) -> String {
    match dotted.rsplit_once('.') {
        Some((head, _)) => format!("{head}.{name}"),
        None => name.to_string(),
    }
}

/// Lowercase words of a comment or identifier, split on anything that is
/// not a letter or digit.
fn words(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).map(str::to_lowercase)
}

impl<'a> Rules<'a> {
    /// Whether a star import could be providing `name`.
    fn star_provides(&self, name: &str) -> bool {
        self.features
            .aliases
            .star_imports()
            .iter()
            .any(|m| self.kb.library(m).is_none_or(|lib| lib.callables.contains(name)))
    }

    fn defined_at(&self, site_span: crate::syntax::Span, name: &str) -> bool {
        let scopes = &self.features.scopes;
        scopes.is_defined(scopes.scope_at(site_span), name)
    }

    /// Library whose canonical alias is `name` when nothing binds `name`.
    fn unimported_alias(&self, site_span: crate::syntax::Span, name: &str) -> Option<&'a LibraryEntry> {
        if self.features.aliases.get(name).is_some() || self.defined_at(site_span, name) {
            return None;
        }
        self.kb.library_by_alias(name)
    }

    /// Object type of a receiver, when every binding of it comes from a
    /// known constructor returning the same type.
    fn receiver_type(&self, site: &CallSite) -> Option<(&'a LibraryEntry, String)> {
        let from_callee = |callee: &str| -> Option<(&'a LibraryEntry, String)> {
            let full = self.features.aliases.resolve(callee)?;
            let (module, func) = full.rsplit_once('.')?;
            let lib = self.kb.library(module)?;
            Some((lib, lib.constructors.get(func)?.clone()))
        };
        match site.receiver.as_ref()? {
            Receiver::Name { name, span } => {
                let scopes = &self.features.scopes;
                let defs = scopes.definitions(scopes.scope_at(*span), name)?;
                let mut found: Option<(&'a LibraryEntry, String)> = None;
                for d in defs {
                    let AssignedValue::Call { callee } = &d.value else { return None };
                    if d.kind != DefKind::Assign {
                        return None;
                    }
                    let t = from_callee(callee)?;
                    match &found {
                        Some((lib, ty)) if lib.module_path != t.0.module_path || *ty != t.1 => return None,
                        _ => found = Some(t),
                    }
                }
                found
            }
            Receiver::Call { callee } => from_callee(callee),
            Receiver::Other => None,
        }
    }

    pub fn target(&self, site: &CallSite) -> Option<Target<'a>> {
        match site.kind {
            CalleeKind::Qualified => {
                let lib = self.kb.library(&site.base_path)?;
                Some(Target::Callable { lib, from_import: site.via_from_import })
            }
            CalleeKind::MethodOnValue => {
                if let Some(Receiver::Name { name, span }) = &site.receiver {
                    if let Some(lib) = self.unimported_alias(*span, name) {
                        return Some(Target::Callable { lib, from_import: false });
                    }
                }
                let (lib, type_name) = self.receiver_type(site)?;
                lib.object_methods.contains_key(&type_name).then_some(Target::Method { lib, type_name })
            }
            CalleeKind::Bare | CalleeKind::Dynamic => None,
        }
    }

    fn known(&self, target: &Target<'_>, name: &str) -> bool {
        match target {
            Target::Callable { lib, .. } => lib.callables.contains(name),
            Target::Method { lib, type_name } => lib.object_methods.get(type_name).is_some_and(|m| m.contains(name)),
        }
    }

    /// Reader mapped from the first string argument's extension.
    fn context_reader(&self, site: &CallSite, lib: &LibraryEntry) -> Option<&'a str> {
        let ext = site.first_string_arg()?.file_extension.as_deref()?;
        self.kb.reader_for_extension(ext, &lib.module_path)
    }

    pub fn unknown_api(&self, site: &CallSite) -> Option<Diagnostic> {
        let target = self.target(site)?;
        if self.known(&target, &site.func_name) {
            return None;
        }
        let (lib, nearest, owner) = match &target {
            Target::Callable { lib, .. } => {
                (*lib, self.kb.nearest_symbol(&lib.module_path, &site.func_name), lib.module_path.clone())
            }
            Target::Method { lib, type_name } => (
                *lib,
                self.kb.nearest_method(&lib.module_path, type_name, &site.func_name),
                format!("{}.{type_name}", lib.module_path),
            ),
        };
        let from_import = matches!(target, Target::Callable { from_import: true, .. });
        // A from-imported name might be a submodule or constant; only a
        // near miss is evidence of a typo.
        if from_import && nearest.is_none() {
            return None;
        }
        let mut message = format!("`{}` is not a known callable of {owner} {}", site.callee_text, lib.version);
        let suggestion = if from_import {
            message.push_str(" (fix the import by hand)");
            None
        } else {
            match (&target, nearest) {
                (Target::Callable { .. }, Some((near, _))) if self.kb.is_reader(&near) => {
                    match self.context_reader(site, lib) {
                        Some(reader) => Some(SuggestedFix {
                            kind: FixKind::RewriteCalleeForContext,
                            replacement: replace_last(&site.callee_text, reader),
                            required_import: None,
                        }),
                        None => Some(SuggestedFix {
                            kind: FixKind::RenameCallee,
                            replacement: replace_last(&site.callee_text, &near),
                            required_import: None,
                        }),
                    }
                }
                (_, Some((near, _))) => Some(SuggestedFix {
                    kind: FixKind::RenameCallee,
                    replacement: replace_last(&site.callee_text, &near),
                    required_import: None,
                }),
                (_, None) => None,
            }
        };
        Some(Diagnostic {
            category: Category::UnknownApi,
            span: site.func_span,
            subject: site.callee_text.clone(),
            message,
            suggestion,
            confidence: Confidence::EditDistance,
        })
    }

    pub fn argument_shape(&self, site: &CallSite) -> Option<Diagnostic> {
        let Target::Callable { lib, from_import: false } = self.target(site)? else { return None };
        if !self.kb.is_reader(&site.func_name) || !lib.callables.contains(&site.func_name) {
            return None;
        }
        let reader = self.context_reader(site, lib)?;
        if reader == site.func_name {
            return None;
        }
        let ext = site.first_string_arg()?.file_extension.clone()?;
        Some(Diagnostic {
            category: Category::SemanticArgumentShape,
            span: site.func_span,
            subject: site.callee_text.clone(),
            message: format!(
                "`{}` is given a `{ext}` file; {} reads those with `{reader}`",
                site.callee_text, lib.module_path
            ),
            suggestion: Some(SuggestedFix {
                kind: FixKind::RewriteCalleeForContext,
                replacement: replace_last(&site.callee_text, reader),
                required_import: None,
            }),
            confidence: Confidence::ExactRule,
        })
    }

    pub fn intent(&self, site: &CallSite) -> Option<Diagnostic> {
        if !site.statement_root {
            return None;
        }
        let Target::Callable { lib, from_import: false } = self.target(site)? else { return None };
        if !lib.callables.contains(&site.func_name) {
            return None;
        }
        let ctx = &site.statement;
        let mut cues: Vec<(String, String)> = Vec::new();
        for text in ctx.comments.iter().chain(ctx.assigned_names.iter()) {
            for w in words(text) {
                if let Some(api) = self.kb.intent_for_word(&w) {
                    if api.library == lib.module_path {
                        cues.push((w, api.callable.clone()));
                    }
                }
            }
        }
        let wanted: BTreeSet<&str> = cues.iter().map(|(_, c)| c.as_str()).collect();
        // No cue, a cue the call already satisfies, or conflicting cues.
        if wanted.len() != 1 || wanted.contains(site.func_name.as_str()) {
            return None;
        }
        let (word, callable) = &cues[0];
        Some(Diagnostic {
            category: Category::SemanticIntent,
            span: site.func_span,
            subject: site.callee_text.clone(),
            message: format!("statement mentions \"{word}\" but calls `{}`", site.callee_text),
            suggestion: Some(SuggestedFix {
                kind: FixKind::RewriteCalleeForContext,
                replacement: replace_last(&site.callee_text, callable),
                required_import: None,
            }),
            confidence: Confidence::EditDistance,
        })
    }

    /// Library a bare name should come from: the only library defining it,
    /// or the one a preference rule picks among several.
    fn bare_owner(&self, name: &str) -> Result<&'a LibraryEntry, Vec<&'a LibraryEntry>> {
        let libs = self.kb.libraries_with_callable(name);
        match libs.as_slice() {
            [only] => Ok(only),
            _ => match self.kb.preferred_library(name) {
                Some(p) => libs.iter().copied().find(|l| l.module_path == p).ok_or(libs),
                None => Err(libs),
            },
        }
    }

    pub fn bare_call(&self, site: &CallSite) -> Option<Diagnostic> {
        if site.kind != CalleeKind::Bare {
            return None;
        }
        let name = &site.func_name;
        if is_builtin(name) || self.defined_at(site.span, name) || self.star_provides(name) {
            return None;
        }
        let (message, suggestion) = match self.bare_owner(name) {
            Ok(lib) => {
                let message = format!("`{name}` is called without its module; it belongs to {}", lib.module_path);
                let existing = self.features.aliases.alias_for_module(&lib.module_path);
                let suggestion = match (existing, lib.canonical_alias.as_deref()) {
                    (Some(alias), _) => Some(SuggestedFix {
                        kind: FixKind::InsertImportAndQualify,
                        replacement: format!("{alias}.{name}"),
                        required_import: None,
                    }),
                    (None, Some(alias)) if self.alias_free(site, alias) => Some(SuggestedFix {
                        kind: FixKind::InsertImportAndQualify,
                        replacement: format!("{alias}.{name}"),
                        required_import: Some(RequiredImport {
                            module_path: lib.module_path.clone(),
                            alias: alias.to_string(),
                        }),
                    }),
                    _ => None,
                };
                (message, suggestion)
            }
            Err(libs) if libs.is_empty() => return None,
            Err(libs) => {
                let names: Vec<&str> = libs.iter().map(|l| l.module_path.as_str()).collect();
                (format!("`{name}` is called without its module; it exists in {} (ambiguous)", names.join(", ")), None)
            }
        };
        Some(Diagnostic {
            category: Category::BareCriticalCall,
            span: site.func_span,
            subject: name.clone(),
            message,
            suggestion,
            confidence: Confidence::ExactRule,
        })
    }

    /// `alias` is not already bound to something else.
    fn alias_free(&self, site: &CallSite, alias: &str) -> bool {
        self.features.aliases.get(alias).is_none() && !self.defined_at(site.span, alias)
    }

    /// Uses of a canonical alias (`np.array(...)`) with no import binding it.
    pub fn missing_imports(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if !self.features.aliases.star_imports().is_empty() {
            return out;
        }
        for u in self.features.scopes.uses() {
            if is_builtin(&u.name) {
                continue;
            }
            let Some(lib) = self.unimported_alias(u.span, &u.name) else { continue };
            out.push(Diagnostic {
                category: Category::BareCriticalCall,
                span: u.span,
                subject: u.name.clone(),
                message: format!("`{}` is used but {} is never imported", u.name, lib.module_path),
                suggestion: Some(SuggestedFix {
                    kind: FixKind::InsertImportAndQualify,
                    replacement: u.name.clone(),
                    required_import: Some(RequiredImport {
                        module_path: lib.module_path.clone(),
                        alias: u.name.clone(),
                    }),
                }),
                confidence: Confidence::ExactRule,
            });
        }
        out
    }

    pub fn identifiers(&self) -> Vec<Diagnostic> {
        let scopes = &self.features.scopes;
        let mut out = Vec::new();
        for u in scopes.uses() {
            let name = u.name.as_str();
            if scopes.is_defined(u.scope, name)
                || is_builtin(name)
                || self.kb.is_canonical_alias(name)
                || self.star_provides(name)
                || (u.is_callee && !self.kb.libraries_with_callable(name).is_empty())
            {
                continue;
            }
            let candidates = scopes.visible_names(u.scope);
            let near =
                distance::closest_within(name, candidates.iter().copied(), distance::max_accepted_identifier(name));
            out.push(Diagnostic {
                category: Category::IdentifierConflict,
                span: u.span,
                subject: name.to_string(),
                message: format!("`{name}` is not defined"),
                suggestion: near.map(|(n, _)| SuggestedFix {
                    kind: FixKind::RenameIdentifier,
                    replacement: n,
                    required_import: None,
                }),
                confidence: Confidence::EditDistance,
            });
        }
        out
    }
}
