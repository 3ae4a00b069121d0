use std::collections::BTreeMap;

use serde::Serialize;

use crate::syntax::{walk_stmts, Module, Span, StmtKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AliasKind {
    /// `import M` / `import M as A`: the alias names a module.
    Module,
    /// `from M import N`: the alias names `M.N`, which may be a callable
    /// or a submodule.
    Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AliasEntry {
    /// Fully qualified path the alias stands for.
    pub target: String,
    pub kind: AliasKind,
    /// Span of the import statement that created the entry.
    pub stmt_span: Span,
    /// Span of the `name [as alias]` clause inside that statement.
    pub name_span: Span,
}

impl AliasEntry {
    /// For symbol entries, the module the symbol was imported from.
    pub fn source_module(&self) -> &str {
        match self.kind {
            AliasKind::Module => &self.target,
            AliasKind::Symbol => self.target.rsplit_once('.').map_or("", |(m, _)| m),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AliasMap {
    entries: BTreeMap<String, AliasEntry>,
    /// Modules pulled in with `from M import *`, in source order.
    star_imports: Vec<String>,
}

impl AliasMap {
    pub fn get(&self, alias: &str) -> Option<&AliasEntry> {
        self.entries.get(alias)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AliasEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.star_imports.is_empty()
    }

    pub fn star_imports(&self) -> &[String] {
        &self.star_imports
    }

    /// Local name bound to module `module_path`, if any import binds it
    /// directly. The lexicographically smallest alias wins when several do.
    pub fn alias_for_module(&self, module_path: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, e)| e.kind == AliasKind::Module && e.target == module_path)
            .map(|(k, _)| k.as_str())
            .or_else(|| {
                // `from matplotlib import pyplot as plt` binds a module too.
                self.entries
                    .iter()
                    .find(|(_, e)| e.kind == AliasKind::Symbol && e.target == module_path)
                    .map(|(k, _)| k.as_str())
            })
    }

    /// Resolves a dotted path whose first segment is an alias to its fully
    /// qualified form.
    pub fn resolve(&self, dotted: &str) -> Option<String> {
        let (head, rest) = match dotted.split_once('.') {
            Some((h, r)) => (h, Some(r)),
            None => (dotted, None),
        };
        let entry = self.entries.get(head)?;
        Some(match rest {
            Some(r) => format!("{}.{r}", entry.target),
            None => entry.target.clone(),
        })
    }
}

/// Import aliases of the whole module, later imports shadowing earlier ones.
pub fn extract_imports(module: &Module) -> AliasMap {
    let mut map = AliasMap::default();
    walk_stmts(&module.body, &mut |stmt| match &stmt.kind {
        StmtKind::Import(names) => {
            for n in names {
                // `import a.b` binds `a`; `import a.b as c` binds `c` to `a.b`.
                let target = match &n.alias {
                    Some(_) => n.name.clone(),
                    None => n.bound_name().to_string(),
                };
                map.entries.insert(
                    n.bound_name().to_string(),
                    AliasEntry { target, kind: AliasKind::Module, stmt_span: stmt.span, name_span: n.span },
                );
            }
        }
        StmtKind::ImportFrom { level, module: m, names } => {
            if *level > 0 {
                return;
            }
            for n in names {
                if n.name == "*" {
                    map.star_imports.push(m.clone());
                    continue;
                }
                map.entries.insert(
                    n.bound_name().to_string(),
                    AliasEntry {
                        target: format!("{m}.{}", n.name),
                        kind: AliasKind::Symbol,
                        stmt_span: stmt.span,
                        name_span: n.span,
                    },
                );
            }
        }
        _ => {}
    });
    map
}
