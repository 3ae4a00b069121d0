use std::collections::BTreeMap;

use serde::Serialize;

use crate::syntax::{Expr, ExprKind, Module, Span, Stmt, StmtKind};

pub type ScopeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefKind {
    Assign,
    Param,
    Function,
    Import,
    LoopTarget,
    WithTarget,
    ExceptName,
}

/// Right-hand side of a plain `name = value` binding, kept for
/// constructor-based type tracking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum AssignedValue {
    /// Direct call with a dotted callee, as written (`pd.read_csv`).
    Call {
        callee: String,
    },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Definition {
    pub name: String,
    pub span: Span,
    pub kind: DefKind,
    pub value: AssignedValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NameUse {
    pub name: String,
    pub span: Span,
    pub scope: ScopeId,
    /// The name is the callee of a call: `name(...)`.
    pub is_callee: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scope {
    pub id: ScopeId,
    pub parent: Option<ScopeId>,
    /// Function name, or `None` for the module scope.
    pub function: Option<String>,
    pub span: Span,
    pub defs: BTreeMap<String, Vec<Definition>>,
    pub uses: Vec<NameUse>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScopeTable {
    /// Index 0 is the module scope.
    pub scopes: Vec<Scope>,
}

impl ScopeTable {
    pub fn module_scope(&self) -> &Scope {
        &self.scopes[0]
    }

    /// Scope chain from `id` outwards.
    pub fn chain(&self, id: ScopeId) -> impl Iterator<Item = &Scope> {
        let mut next = Some(id);
        std::iter::from_fn(move || {
            let scope = &self.scopes[next?];
            next = scope.parent;
            Some(scope)
        })
    }

    /// Whether `name` is bound anywhere in `id` or an enclosing scope.
    pub fn is_defined(&self, id: ScopeId, name: &str) -> bool {
        self.chain(id).any(|s| s.defs.contains_key(name))
    }

    /// Definitions of `name` in the innermost scope that binds it.
    pub fn definitions(&self, id: ScopeId, name: &str) -> Option<&[Definition]> {
        self.chain(id).find_map(|s| s.defs.get(name).map(Vec::as_slice))
    }

    /// Every name visible from scope `id`, innermost first, deduplicated.
    pub fn visible_names(&self, id: ScopeId) -> Vec<&str> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for scope in self.chain(id) {
            for name in scope.defs.keys() {
                if seen.insert(name.as_str()) {
                    out.push(name.as_str());
                }
            }
        }
        out
    }

    /// Innermost scope whose body contains `span`.
    pub fn scope_at(&self, span: Span) -> ScopeId {
        self.scopes
            .iter()
            .filter(|s| s.id != 0 && s.span.contains(&span))
            .max_by_key(|s| s.span.start)
            .map_or(0, |s| s.id)
    }

    pub fn uses(&self) -> impl Iterator<Item = &NameUse> {
        self.scopes.iter().flat_map(|s| s.uses.iter())
    }
}

struct Builder {
    scopes: Vec<Scope>,
}

impl Builder {
    fn define(&mut self, scope: ScopeId, name: &str, span: Span, kind: DefKind, value: AssignedValue) {
        self.scopes[scope].defs.entry(name.to_string()).or_default().push(Definition {
            name: name.to_string(),
            span,
            kind,
            value,
        });
    }

    fn define_target(&mut self, scope: ScopeId, target: &Expr, kind: DefKind, value: &AssignedValue) {
        match &target.kind {
            ExprKind::Name(n) => self.define(scope, n, target.span, kind, value.clone()),
            ExprKind::TupleLit(items) | ExprKind::ListLit(items) => {
                for item in items {
                    self.define_target(scope, item, kind, &AssignedValue::Other);
                }
            }
            // `a.b = v` and `a[i] = v` read `a`.
            _ => self.uses_in(scope, target),
        }
    }

    fn uses_in(&mut self, scope: ScopeId, e: &Expr) {
        let mut callees: Vec<Span> = Vec::new();
        let mut found: Vec<(String, Span)> = Vec::new();
        e.walk(&mut |x| match &x.kind {
            ExprKind::Name(n) => found.push((n.clone(), x.span)),
            ExprKind::Call { func, .. } if matches!(func.kind, ExprKind::Name(_)) => callees.push(func.span),
            _ => {}
        });
        for (name, span) in found {
            let is_callee = callees.contains(&span);
            self.scopes[scope].uses.push(NameUse { name, span, scope, is_callee });
        }
    }

    fn block(&mut self, scope: ScopeId, body: &[Stmt]) {
        for stmt in body {
            self.stmt(scope, stmt);
        }
    }

    fn stmt(&mut self, scope: ScopeId, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::Import(names) | StmtKind::ImportFrom { names, .. } => {
                for n in names.iter().filter(|n| n.name != "*") {
                    self.define(scope, n.bound_name(), n.span, DefKind::Import, AssignedValue::Other);
                }
            }
            StmtKind::Assign { targets, value } => {
                self.uses_in(scope, value);
                let assigned = match &value.kind {
                    ExprKind::Call { func, .. } => match func.dotted_path() {
                        Some(callee) => AssignedValue::Call { callee },
                        None => AssignedValue::Other,
                    },
                    _ => AssignedValue::Other,
                };
                for t in targets {
                    self.define_target(scope, t, DefKind::Assign, &assigned);
                }
            }
            StmtKind::AugAssign { target, value, .. } => {
                self.uses_in(scope, target);
                self.uses_in(scope, value);
                self.define_target(scope, target, DefKind::Assign, &AssignedValue::Other);
            }
            StmtKind::FunctionDef { name, name_span, params, body } => {
                for p in params {
                    if let Some(d) = &p.default {
                        self.uses_in(scope, d);
                    }
                }
                self.define(scope, name, *name_span, DefKind::Function, AssignedValue::Other);
                let id = self.scopes.len();
                self.scopes.push(Scope {
                    id,
                    parent: Some(scope),
                    function: Some(name.clone()),
                    span: stmt.span,
                    defs: BTreeMap::new(),
                    uses: Vec::new(),
                });
                for p in params {
                    self.define(id, &p.name, p.span, DefKind::Param, AssignedValue::Other);
                }
                self.block(id, body);
            }
            StmtKind::For { target, iter, body, orelse } => {
                self.uses_in(scope, iter);
                self.define_target(scope, target, DefKind::LoopTarget, &AssignedValue::Other);
                self.block(scope, body);
                self.block(scope, orelse);
            }
            StmtKind::With { items, body } => {
                for item in items {
                    self.uses_in(scope, &item.context);
                    if let Some(t) = &item.target {
                        self.define_target(scope, t, DefKind::WithTarget, &AssignedValue::Other);
                    }
                }
                self.block(scope, body);
            }
            StmtKind::Try { body, handlers, orelse, finalbody } => {
                self.block(scope, body);
                for h in handlers {
                    if let Some(k) = &h.kind {
                        self.uses_in(scope, k);
                    }
                    if let Some((name, span)) = &h.name {
                        self.define(scope, name, *span, DefKind::ExceptName, AssignedValue::Other);
                    }
                    self.block(scope, &h.body);
                }
                self.block(scope, orelse);
                self.block(scope, finalbody);
            }
            _ => {
                for e in stmt.exprs() {
                    self.uses_in(scope, e);
                }
                for b in stmt.blocks() {
                    self.block(scope, b);
                }
            }
        }
    }
}

/// Defined names and name uses for the module scope and every function.
/// Bindings are flow-insensitive: a name bound anywhere in a scope counts
/// as defined throughout it.
pub fn extract_scopes(module: &Module) -> ScopeTable {
    let mut b = Builder {
        scopes: vec![Scope {
            id: 0,
            parent: None,
            function: None,
            span: module.span,
            defs: BTreeMap::new(),
            uses: Vec::new(),
        }],
    };
    b.block(0, &module.body);
    for s in &mut b.scopes {
        s.uses.sort_by_key(|u| u.span.start);
    }
    ScopeTable { scopes: b.scopes }
}
