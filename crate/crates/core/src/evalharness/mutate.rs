//! Seeded generators for hallucinated samples, one per category.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::dataset::{HallucType, Label, Sample};
use crate::correction::{apply_fixes, import_insertion_point, rewrite_exprs, EditKind, FixEdit};
use crate::extraction::{extract, CallSite, CalleeKind, DefKind, Features};
use crate::knowledge_base::{KnowledgeBase, LibraryEntry};
use crate::syntax::{is_identifier, parse, unparse, Expr, ExprKind, Module, ParseError, Span, StmtKind};
use crate::validation::{distance, is_builtin};

const ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("sample `{0}` is not labelled clean")]
    NotClean(String),
    #[error("sample `{id}` does not parse: {error}")]
    Parse { id: String, error: ParseError },
    #[error("no mutation point for {0}")]
    NoMutationPoint(HallucType),
}

/// What a mutation changed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationDetail {
    pub original: String,
    pub mutated: String,
    pub span: Span,
}

/// Generates hallucinated variants of clean samples. Output depends only on
/// the sample, the kind and the seed.
pub struct Mutator<'k> {
    kb: &'k KnowledgeBase,
}

#[derive(Clone, Copy)]
enum Typo {
    Swap,
    Drop,
    Duplicate,
}

/// One random single-character edit of `name`: swap two adjacent
/// characters, drop one, or duplicate one.
fn typo(name: &str, rng: &mut ChaCha8Rng) -> Option<String> {
    let chars: Vec<char> = name.chars().collect();
    if chars.len() < 2 {
        return None;
    }
    let op = [Typo::Swap, Typo::Drop, Typo::Duplicate][rng.gen_range(0..3)];
    let mut out = chars.clone();
    match op {
        Typo::Swap => {
            let i = rng.gen_range(0..chars.len() - 1);
            out.swap(i, i + 1);
        }
        Typo::Drop => {
            out.remove(rng.gen_range(0..chars.len()));
        }
        Typo::Duplicate => {
            let i = rng.gen_range(0..chars.len());
            out.insert(i, chars[i]);
        }
    }
    let s: String = out.into_iter().collect();
    (s != name && is_identifier(&s)).then_some(s)
}

fn rewrite_at(module: &Module, span: Span, f: impl Fn(&mut Expr)) -> Module {
    let mut out = module.clone();
    rewrite_exprs(&mut out.body, &mut |e| {
        if e.span == span {
            f(e)
        }
    });
    out
}

impl<'k> Mutator<'k> {
    pub fn new(kb: &'k KnowledgeBase) -> Mutator<'k> {
        Mutator { kb }
    }

    pub fn mutate(&self, clean: &Sample, kind: HallucType, seed: u64) -> Result<Sample, MutationError> {
        self.mutate_with_detail(clean, kind, seed).map(|(s, _)| s)
    }

    pub fn mutate_with_detail(
        &self,
        clean: &Sample,
        kind: HallucType,
        seed: u64,
    ) -> Result<(Sample, MutationDetail), MutationError> {
        if clean.label != Label::Clean {
            return Err(MutationError::NotClean(clean.id.clone()));
        }
        let module = parse(&clean.code).map_err(|error| MutationError::Parse { id: clean.id.clone(), error })?;
        let features = extract(&module);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let found = match kind {
            HallucType::MistypedApi => self.mistype(&module, &features, &mut rng),
            HallucType::MissingImport => self.drop_import(&module, &features),
            HallucType::ContextualMismatch => self.swap_reader(&module, &features, &mut rng),
            HallucType::IdentifierConflict => self.misspell_identifier(&module, &features, &mut rng),
        };
        let (mutated, library, detail) = found.ok_or(MutationError::NoMutationPoint(kind))?;
        let sample = Sample {
            id: format!("{}.{kind}.{seed}", clean.id),
            code: unparse(&mutated),
            label: Label::Hallucinated,
            halluc_type: Some(kind),
            library,
            expected_fixed_code: Some(unparse(&module)),
        };
        Ok((sample, detail))
    }

    /// `count` mutations of `kind` cycling over the samples that have a
    /// mutation point, with seeds `seed, seed + 1, ...`.
    pub fn corpus(&self, clean: &[Sample], kind: HallucType, count: usize, seed: u64) -> Vec<(Sample, MutationDetail)> {
        let eligible: Vec<&Sample> = clean.iter().filter(|s| self.mutate(s, kind, seed).is_ok()).collect();
        if eligible.is_empty() {
            return Vec::new();
        }
        (0..count)
            .filter_map(|i| {
                let s = eligible[i % eligible.len()];
                self.mutate_with_detail(s, kind, seed.wrapping_add(i as u64)).ok()
            })
            .collect()
    }

    /// Qualified call to a known module-level callable.
    fn known_callable<'f>(&self, site: &'f CallSite) -> Option<&'k LibraryEntry> {
        if site.kind != CalleeKind::Qualified || site.via_from_import {
            return None;
        }
        let lib = self.kb.library(&site.base_path)?;
        lib.callables.contains(&site.func_name).then_some(lib)
    }

    fn mistype(
        &self,
        module: &Module,
        features: &Features,
        rng: &mut ChaCha8Rng,
    ) -> Option<(Module, Option<String>, MutationDetail)> {
        let points: Vec<(&CallSite, &LibraryEntry)> = features
            .call_sites
            .iter()
            .filter_map(|s| self.known_callable(s).map(|l| (s, l)))
            .filter(|(s, _)| s.func_name.chars().count() >= 2)
            .collect();
        if points.is_empty() {
            return None;
        }
        for _ in 0..ATTEMPTS {
            let (site, lib) = points[rng.gen_range(0..points.len())];
            let Some(name) = typo(&site.func_name, rng) else { continue };
            if lib.callables.contains(&name) {
                continue;
            }
            let edit = FixEdit { target: site.func_span, kind: EditKind::ReplaceAttrName { name: name.clone() } };
            let detail = MutationDetail { original: site.func_name.clone(), mutated: name, span: site.func_span };
            return Some((apply_fixes(module, &[edit]), Some(lib.module_path.clone()), detail));
        }
        None
    }

    /// Removes the last import of the leading block and unqualifies its
    /// single use, when the fix would restore both exactly.
    fn drop_import(&self, module: &Module, features: &Features) -> Option<(Module, Option<String>, MutationDetail)> {
        if !features.aliases.star_imports().is_empty() {
            return None;
        }
        let at = import_insertion_point(module);
        let first_import = usize::from(at > 0 && !module.body[0].is_import());
        if at <= first_import {
            return None;
        }
        let stmt = &module.body[at - 1];
        let StmtKind::Import(names) = &stmt.kind else { return None };
        let [imported] = names.as_slice() else { return None };
        if !stmt.leading_comments.is_empty() || stmt.trailing_comment.is_some() {
            return None;
        }
        let lib = self.kb.library(&imported.name)?;
        let alias = lib.canonical_alias.as_deref()?;
        let rendered_alias = (alias != lib.module_path).then_some(alias);
        if imported.bound_name() != alias || imported.alias.as_deref() != rendered_alias {
            return None;
        }
        let scopes = &features.scopes;
        if scopes.scopes.iter().map(|s| s.defs.get(alias).map_or(0, Vec::len)).sum::<usize>() != 1 {
            return None;
        }
        let uses: Vec<_> = scopes.uses().filter(|u| u.name == alias).collect();
        let [only_use] = uses.as_slice() else { return None };
        let site = features.call_sites.iter().find(|s| {
            s.kind == CalleeKind::Qualified
                && s.alias.as_deref() == Some(alias)
                && s.base_path == lib.module_path
                && s.callee_text == format!("{alias}.{}", s.func_name)
                && s.func_span.contains(&only_use.span)
        })?;
        let f = &site.func_name;
        let owner_ok = match self.kb.libraries_with_callable(f).as_slice() {
            [one] => one.module_path == lib.module_path,
            _ => self.kb.preferred_library(f) == Some(lib.module_path.as_str()),
        };
        let scope = scopes.scope_at(site.span);
        if !owner_ok || is_builtin(f) || scopes.is_defined(scope, f) || features.aliases.get(f).is_some() {
            return None;
        }
        let mut out = rewrite_at(module, site.func_span, |e| {
            if let ExprKind::Attribute { attr, .. } = &e.kind {
                e.kind = ExprKind::Name(attr.clone());
            }
        });
        out.body.remove(at - 1);
        let detail = MutationDetail { original: site.callee_text.clone(), mutated: f.clone(), span: site.func_span };
        Some((out, Some(lib.module_path.clone()), detail))
    }

    fn swap_reader(
        &self,
        module: &Module,
        features: &Features,
        rng: &mut ChaCha8Rng,
    ) -> Option<(Module, Option<String>, MutationDetail)> {
        let mut points = Vec::new();
        for site in &features.call_sites {
            let Some(lib) = self.known_callable(site) else { continue };
            if !self.kb.is_reader(&site.func_name) {
                continue;
            }
            let Some(ext) = site.first_string_arg().and_then(|a| a.file_extension.as_deref()) else { continue };
            if self.kb.reader_for_extension(ext, &lib.module_path) != Some(site.func_name.as_str()) {
                continue;
            }
            let alternatives: Vec<&String> = self
                .kb
                .semantic()
                .reader_family
                .iter()
                .filter(|r| **r != site.func_name && lib.callables.contains(*r))
                .collect();
            if !alternatives.is_empty() {
                points.push((site, lib, alternatives));
            }
        }
        if points.is_empty() {
            return None;
        }
        let (site, lib, alternatives) = &points[rng.gen_range(0..points.len())];
        let name = alternatives[rng.gen_range(0..alternatives.len())].clone();
        let edit = FixEdit { target: site.func_span, kind: EditKind::ReplaceAttrName { name: name.clone() } };
        let detail = MutationDetail { original: site.func_name.clone(), mutated: name, span: site.func_span };
        Some((apply_fixes(module, &[edit]), Some(lib.module_path.clone()), detail))
    }

    fn misspell_identifier(
        &self,
        module: &Module,
        features: &Features,
        rng: &mut ChaCha8Rng,
    ) -> Option<(Module, Option<String>, MutationDetail)> {
        let scopes = &features.scopes;
        let points: Vec<_> = scopes
            .uses()
            .filter(|u| !u.is_callee && u.name.chars().count() >= 4)
            .filter(|u| {
                scopes.definitions(u.scope, &u.name).is_some_and(|defs| {
                    defs.iter().all(|d| {
                        matches!(d.kind, DefKind::Assign | DefKind::Param | DefKind::LoopTarget | DefKind::WithTarget)
                    })
                })
            })
            .collect();
        if points.is_empty() {
            return None;
        }
        let taken = |name: &str| {
            scopes.scopes.iter().any(|s| s.defs.contains_key(name))
                || is_builtin(name)
                || self.kb.is_canonical_alias(name)
                || features.aliases.get(name).is_some()
        };
        for _ in 0..ATTEMPTS {
            let u = points[rng.gen_range(0..points.len())];
            let Some(name) = typo(&u.name, rng) else { continue };
            if taken(&name) {
                continue;
            }
            let visible = scopes.visible_names(u.scope);
            let limit = distance::max_accepted_identifier(&name);
            if distance::closest_within(&name, visible.iter().copied(), limit).map(|(n, _)| n) != Some(u.name.clone()) {
                continue;
            }
            let edit = FixEdit { target: u.span, kind: EditKind::ReplaceName { name: name.clone() } };
            let detail = MutationDetail { original: u.name.clone(), mutated: name, span: u.span };
            return Some((apply_fixes(module, &[edit]), None, detail));
        }
        None
    }
}
