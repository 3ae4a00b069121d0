use serde::Serialize;

use super::imports::{AliasKind, AliasMap};
use crate::syntax::{stmt_header, walk_stmts, Expr, ExprKind, Module, Span, Stmt, StmtKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalleeKind {
    /// Callee path starts with an imported alias: `pd.read_csv(...)`, or a
    /// from-imported symbol: `loads(...)` after `from json import loads`.
    Qualified,
    /// Plain name that is not an import: `read_csv(...)`.
    Bare,
    /// Attribute call on something that is not an import: `df.head()`.
    MethodOnValue,
    /// Callee is neither a name nor an attribute: `fs[0]()`, `f()()`.
    Dynamic,
}

/// What a method-on-value call is invoked on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Receiver {
    Name {
        name: String,
        span: Span,
    },
    /// Result of a direct call, e.g. `pd.read_csv(p).head()`.
    Call {
        callee: String,
    },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum ArgSlot {
    Positional(usize),
    Keyword(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiteralKind {
    String,
    Number,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgFeature {
    pub slot: ArgSlot,
    pub literal_kind: LiteralKind,
    pub string_value: Option<String>,
    /// Lowercased suffix after the last '.', with the dot.
    pub file_extension: Option<String>,
}

/// Text cues from the statement a call belongs to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StatementContext {
    /// First line of the statement, with its trailing comment.
    pub text: String,
    /// Leading and trailing comments attached to the statement.
    pub comments: Vec<String>,
    /// Plain names assigned by the statement.
    pub assigned_names: Vec<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CallSite {
    pub kind: CalleeKind,
    /// Resolved module path for qualified calls, receiver text for
    /// method calls, empty for bare calls.
    pub base_path: String,
    pub func_name: String,
    /// Callee as written, e.g. `pd.read_exel`.
    pub callee_text: String,
    /// Local alias the qualified path went through.
    pub alias: Option<String>,
    /// The callee is a from-imported name used directly.
    pub via_from_import: bool,
    pub receiver: Option<Receiver>,
    pub args: Vec<ArgFeature>,
    /// Span of the whole call.
    pub span: Span,
    /// Span of the callee expression.
    pub func_span: Span,
    /// Outermost expression of its statement (`x = f()`, `f()`, `return f()`).
    pub statement_root: bool,
    pub statement: StatementContext,
}

impl CallSite {
    /// First argument that is a string literal.
    pub fn first_string_arg(&self) -> Option<&ArgFeature> {
        self.args.iter().find(|a| a.literal_kind == LiteralKind::String)
    }
}

/// Extension of a path-like string: `data.CSV` gives `.csv`.
pub fn file_extension(value: &str) -> Option<String> {
    let (_, suffix) = value.rsplit_once('.')?;
    if suffix.is_empty() || !suffix.chars().all(|c| c.is_ascii_alphanumeric()) {
        return None;
    }
    Some(format!(".{}", suffix.to_ascii_lowercase()))
}

fn arg_feature(slot: ArgSlot, e: &Expr) -> ArgFeature {
    match &e.kind {
        ExprKind::StringLit(s) => ArgFeature {
            slot,
            literal_kind: LiteralKind::String,
            string_value: Some(s.value.clone()),
            file_extension: file_extension(&s.value),
        },
        ExprKind::NumberLit(_) => {
            ArgFeature { slot, literal_kind: LiteralKind::Number, string_value: None, file_extension: None }
        }
        _ => ArgFeature { slot, literal_kind: LiteralKind::Other, string_value: None, file_extension: None },
    }
}

fn comment_body(text: &str) -> String {
    text.trim_start_matches('#').trim().to_string()
}

fn target_names(e: &Expr, out: &mut Vec<String>) {
    match &e.kind {
        ExprKind::Name(n) => out.push(n.clone()),
        ExprKind::TupleLit(items) | ExprKind::ListLit(items) => items.iter().for_each(|i| target_names(i, out)),
        _ => {}
    }
}

fn statement_context(stmt: &Stmt) -> StatementContext {
    let mut comments: Vec<String> = stmt.leading_comments.iter().map(|c| comment_body(&c.text)).collect();
    let mut text = stmt_header(stmt);
    if let Some(c) = &stmt.trailing_comment {
        comments.push(comment_body(&c.text));
        text.push_str("  ");
        text.push_str(&c.text);
    }
    let mut assigned_names = Vec::new();
    match &stmt.kind {
        StmtKind::Assign { targets, .. } => targets.iter().for_each(|t| target_names(t, &mut assigned_names)),
        StmtKind::AugAssign { target, .. } | StmtKind::For { target, .. } => target_names(target, &mut assigned_names),
        StmtKind::With { items, .. } => {
            items.iter().filter_map(|i| i.target.as_ref()).for_each(|t| target_names(t, &mut assigned_names))
        }
        _ => {}
    }
    StatementContext { text, comments, assigned_names, span: stmt.span }
}

fn root_expr(stmt: &Stmt) -> Option<&Expr> {
    match &stmt.kind {
        StmtKind::Assign { value, .. } | StmtKind::AugAssign { value, .. } | StmtKind::Expr(value) => Some(value),
        StmtKind::Return(v) => v.as_ref(),
        _ => None,
    }
}

fn call_site(call: &Expr, aliases: &AliasMap, root: bool, ctx: &StatementContext) -> CallSite {
    let ExprKind::Call { func, args, keywords } = &call.kind else { unreachable!("call_site on non-call") };
    let mut features: Vec<ArgFeature> =
        args.iter().enumerate().map(|(i, a)| arg_feature(ArgSlot::Positional(i), a)).collect();
    features.extend(keywords.iter().map(|k| arg_feature(ArgSlot::Keyword(k.name.clone()), &k.value)));

    let mut site = CallSite {
        kind: CalleeKind::Dynamic,
        base_path: String::new(),
        func_name: String::new(),
        callee_text: crate::syntax::unparse_expr(func),
        alias: None,
        via_from_import: false,
        receiver: None,
        args: features,
        span: call.span,
        func_span: func.span,
        statement_root: root,
        statement: ctx.clone(),
    };

    match func.dotted_path() {
        Some(path) => {
            let mut parts: Vec<&str> = path.split('.').collect();
            let name = parts.pop().unwrap_or_default();
            site.func_name = name.to_string();
            let head = parts.first().copied().unwrap_or(name);
            match aliases.get(head) {
                Some(entry) if parts.is_empty() => {
                    // A from-imported name used directly.
                    site.kind = CalleeKind::Qualified;
                    site.alias = Some(head.to_string());
                    site.via_from_import = entry.kind == AliasKind::Symbol;
                    match entry.kind {
                        AliasKind::Symbol => {
                            let (module, symbol) = entry.target.rsplit_once('.').unwrap_or(("", &entry.target));
                            site.base_path = module.to_string();
                            site.func_name = symbol.to_string();
                        }
                        // `import m` then `m()`: calling a module.
                        AliasKind::Module => site.base_path = entry.target.clone(),
                    }
                }
                Some(_) => {
                    site.kind = CalleeKind::Qualified;
                    site.alias = Some(head.to_string());
                    site.base_path = aliases.resolve(&parts.join(".")).unwrap_or_default();
                }
                None if parts.is_empty() => site.kind = CalleeKind::Bare,
                None => {
                    site.kind = CalleeKind::MethodOnValue;
                    site.base_path = parts.join(".");
                    site.receiver = Some(match (&func.kind, parts.len()) {
                        (ExprKind::Attribute { value, .. }, 1) => {
                            Receiver::Name { name: head.to_string(), span: value.span }
                        }
                        _ => Receiver::Other,
                    });
                }
            }
        }
        None => {
            if let ExprKind::Attribute { value, attr } = &func.kind {
                site.kind = CalleeKind::MethodOnValue;
                site.func_name = attr.clone();
                site.base_path = crate::syntax::unparse_expr(value);
                site.receiver = Some(match &value.kind {
                    ExprKind::Call { func: inner, .. } => match inner.dotted_path() {
                        Some(callee) => Receiver::Call { callee },
                        None => Receiver::Other,
                    },
                    _ => Receiver::Other,
                });
            }
        }
    }
    site
}

/// One call site per `Call` node, in source order.
pub fn extract_call_sites(module: &Module, aliases: &AliasMap) -> Vec<CallSite> {
    let mut sites = Vec::new();
    walk_stmts(&module.body, &mut |stmt| {
        let ctx = statement_context(stmt);
        let root = root_expr(stmt);
        for e in stmt.exprs() {
            e.walk(&mut |x| {
                if matches!(x.kind, ExprKind::Call { .. }) {
                    let is_root = root.is_some_and(|r| std::ptr::eq(r, x));
                    sites.push(call_site(x, aliases, is_root, &ctx));
                }
            });
        }
    });
    sites.sort_by_key(|s| s.span.start);
    sites
}
