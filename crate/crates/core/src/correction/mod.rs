//! Turns diagnostics into localized tree edits and canonical fixed source.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::knowledge_base::KnowledgeBase;
use crate::syntax::{parse, unparse, Expr, ExprKind, ImportName, Module, ParseError, Span, Stmt, StmtKind};
use crate::validation::{validate, Category, Diagnostic, FixKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum EditKind {
    /// Rename the final attribute of an `Attribute` callee.
    ReplaceAttrName { name: String },
    /// Rename a `Name` node.
    ReplaceName { name: String },
    /// Turn the `Name` callee `f` into `alias.f`.
    QualifyCall { alias: String },
    /// Add `import module_path as alias` after the leading imports.
    InsertImport { module_path: String, alias: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixEdit {
    /// Node the edit rewrites; synthetic (line 0) for import insertion.
    pub target: Span,
    pub kind: EditKind,
}

impl FixEdit {
    fn is_positional(&self) -> bool {
        !matches!(self.kind, EditKind::InsertImport { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FixOptions {
    /// Also apply intent-synonym rewrites, which are detect-only by default.
    pub fix_intent: bool,
}

/// Edits for a module and how the diagnostics were split.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixPlan {
    pub edits: Vec<FixEdit>,
    pub applied: Vec<Diagnostic>,
    pub unfixed: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixResult {
    pub fixed_source: String,
    pub applied: Vec<Diagnostic>,
    pub unfixed: Vec<Diagnostic>,
    pub edits: Vec<FixEdit>,
    /// Set when the input could not be parsed; the source is returned as is.
    pub parse_failure: Option<ParseError>,
}

impl FixResult {
    pub fn changed(&self) -> bool {
        !self.edits.is_empty()
    }
}

fn find_expr(module: &Module, span: Span) -> Option<&Expr> {
    let mut found = None;
    module.walk_exprs(&mut |e| {
        if found.is_none() && e.span == span && matches!(e.kind, ExprKind::Name(_) | ExprKind::Attribute { .. }) {
            found = Some(e);
        }
    });
    found
}

fn edits_for(module: &Module, d: &Diagnostic) -> Option<Vec<FixEdit>> {
    let fix = d.suggestion.as_ref()?;
    let node = find_expr(module, d.span)?;
    let last = fix.replacement.rsplit('.').next().unwrap_or(&fix.replacement).to_string();
    let mut edits = Vec::new();
    match (fix.kind, &node.kind) {
        (FixKind::RenameCallee | FixKind::RewriteCalleeForContext, ExprKind::Attribute { .. }) => {
            edits.push(FixEdit { target: d.span, kind: EditKind::ReplaceAttrName { name: last } });
        }
        (FixKind::RenameCallee | FixKind::RewriteCalleeForContext | FixKind::RenameIdentifier, ExprKind::Name(_)) => {
            edits.push(FixEdit { target: d.span, kind: EditKind::ReplaceName { name: last } });
        }
        (FixKind::InsertImportAndQualify, ExprKind::Name(current)) => {
            if *current != fix.replacement {
                let (alias, name) = fix.replacement.rsplit_once('.')?;
                if name != current {
                    return None;
                }
                edits.push(FixEdit { target: d.span, kind: EditKind::QualifyCall { alias: alias.to_string() } });
            }
            if let Some(imp) = &fix.required_import {
                edits.push(FixEdit {
                    target: Span::default(),
                    kind: EditKind::InsertImport { module_path: imp.module_path.clone(), alias: imp.alias.clone() },
                });
            }
        }
        _ => return None,
    }
    Some(edits)
}

/// Edits for every fixable diagnostic. Diagnostics are taken in source
/// order; one whose edit overlaps an earlier accepted edit is left unfixed.
/// Import insertions are deduplicated.
pub fn plan_fixes(module: &Module, diagnostics: &[Diagnostic], options: FixOptions) -> FixPlan {
    let mut plan = FixPlan::default();
    let mut imports: BTreeSet<(String, String)> = BTreeSet::new();
    let mut order: Vec<&Diagnostic> = diagnostics.iter().collect();
    order.sort_by_key(|d| (d.span.start, d.span.end, d.category));
    for d in order {
        let allowed = d.category != Category::SemanticIntent || options.fix_intent;
        let edits = if allowed { edits_for(module, d) } else { None };
        let Some(edits) = edits else {
            plan.unfixed.push(d.clone());
            continue;
        };
        let clash = edits
            .iter()
            .filter(|e| e.is_positional())
            .any(|e| plan.edits.iter().filter(|p| p.is_positional()).any(|p| p.target.overlaps(&e.target)));
        if clash {
            plan.unfixed.push(d.clone());
            continue;
        }
        for e in edits {
            if let EditKind::InsertImport { module_path, alias } = &e.kind {
                if !imports.insert((module_path.clone(), alias.clone())) {
                    continue;
                }
            }
            plan.edits.push(e);
        }
        plan.applied.push(d.clone());
    }
    plan
}

/// Post-order rewrite of every expression in `body`.
pub(crate) fn rewrite_exprs(body: &mut [Stmt], f: &mut dyn FnMut(&mut Expr)) {
    fn walk(e: &mut Expr, f: &mut dyn FnMut(&mut Expr)) {
        for c in e.children_mut() {
            walk(c, f);
        }
        f(e);
    }
    for stmt in body {
        for e in stmt.exprs_mut() {
            walk(e, f);
        }
        for block in stmt.blocks_mut() {
            rewrite_exprs(block, f);
        }
    }
}

/// Index after the leading docstring and import statements.
pub(crate) fn import_insertion_point(module: &Module) -> usize {
    let mut i = 0;
    if let Some(Stmt { kind: StmtKind::Expr(Expr { kind: ExprKind::StringLit(_), .. }), .. }) = module.body.first() {
        i = 1;
    }
    while module.body.get(i).is_some_and(Stmt::is_import) {
        i += 1;
    }
    i
}

/// Applies `edits` to a copy of `module`. Nodes not targeted are untouched.
pub fn apply_fixes(module: &Module, edits: &[FixEdit]) -> Module {
    let mut out = module.clone();
    rewrite_exprs(&mut out.body, &mut |e| {
        for edit in edits.iter().filter(|x| x.is_positional() && x.target == e.span) {
            match (&edit.kind, &mut e.kind) {
                (EditKind::ReplaceAttrName { name }, ExprKind::Attribute { attr, .. }) => *attr = name.clone(),
                (EditKind::ReplaceName { name }, ExprKind::Name(n)) => *n = name.clone(),
                (EditKind::QualifyCall { alias }, ExprKind::Name(n)) => {
                    let attr = std::mem::take(n);
                    let base = Expr::from_dotted(alias, Span::default());
                    e.kind = ExprKind::Attribute { value: Box::new(base), attr };
                }
                _ => {}
            }
        }
    });
    let mut at = import_insertion_point(&out);
    for edit in edits {
        if let EditKind::InsertImport { module_path, alias } = &edit.kind {
            let alias = (alias != module_path).then(|| alias.clone());
            let name = ImportName { name: module_path.clone(), alias, span: Span::default() };
            out.body.insert(at, Stmt::new(StmtKind::Import(vec![name]), Span::default()));
            at += 1;
        }
    }
    out
}

const MAX_PASSES: usize = 4;

/// Parse, validate, plan, apply and unparse with default options.
pub fn fix(source: &str, kb: &KnowledgeBase) -> FixResult {
    fix_with(source, kb, FixOptions::default())
}

/// Repairs can enable further diagnostics (an inserted import makes a
/// near-miss name resolvable, a corrected constructor types its receiver),
/// so passes repeat until nothing changes. Spans of edits and diagnostics
/// from later passes refer to the source produced by the previous pass.
pub fn fix_with(source: &str, kb: &KnowledgeBase, options: FixOptions) -> FixResult {
    let mut module = match parse(source) {
        Ok(m) => m,
        Err(e) => {
            return FixResult {
                fixed_source: source.to_string(),
                applied: Vec::new(),
                unfixed: Vec::new(),
                edits: Vec::new(),
                parse_failure: Some(e),
            }
        }
    };
    let mut applied = Vec::new();
    let mut edits = Vec::new();
    let mut unfixed = Vec::new();
    // No edits: hand back the input untouched rather than reformatting it.
    let mut fixed_source = source.to_string();
    for _ in 0..MAX_PASSES {
        let diagnostics = validate(&module, kb);
        let plan = plan_fixes(&module, &diagnostics, options);
        unfixed = plan.unfixed;
        if plan.edits.is_empty() {
            break;
        }
        fixed_source = unparse(&apply_fixes(&module, &plan.edits));
        applied.extend(plan.applied);
        edits.extend(plan.edits);
        match parse(&fixed_source) {
            Ok(next) => module = next,
            Err(_) => break,
        }
    }
    FixResult { fixed_source, applied, unfixed, edits, parse_failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn kb() -> &'static KnowledgeBase {
        static KB: OnceLock<KnowledgeBase> = OnceLock::new();
        KB.get_or_init(KnowledgeBase::bundled)
    }

    #[test]
    fn read_exel_becomes_read_csv() {
        let r = fix("import pandas as pd\npd.read_exel('data.csv')", kb());
        assert_eq!(r.fixed_source, "import pandas as pd\npd.read_csv('data.csv')\n");
        assert_eq!(r.applied.len(), 1);
        assert!(r.unfixed.is_empty());
    }

    #[test]
    fn plan_for_unknown_api() {
        let m = parse("import pandas as pd\nx = pd.read_exel(p)\np = 1\n").unwrap();
        let d = validate(&m, kb());
        let plan = plan_fixes(&m, &d, FixOptions::default());
        assert_eq!(plan.edits.len(), 1);
        assert_eq!(plan.edits[0].kind, EditKind::ReplaceAttrName { name: "read_excel".into() });
    }

    #[test]
    fn bare_calls_share_one_import() {
        let src = "a = read_csv('a.csv')\nb = read_csv('b.csv')\n";
        let m = parse(src).unwrap();
        let plan = plan_fixes(&m, &validate(&m, kb()), FixOptions::default());
        let qualify = plan.edits.iter().filter(|e| matches!(e.kind, EditKind::QualifyCall { .. })).count();
        let import = plan.edits.iter().filter(|e| matches!(e.kind, EditKind::InsertImport { .. })).count();
        assert_eq!((qualify, import), (2, 1));
        assert_eq!(
            fix(src, kb()).fixed_source,
            "import pandas as pd\na = pd.read_csv('a.csv')\nb = pd.read_csv('b.csv')\n"
        );
    }

    #[test]
    fn import_goes_after_existing_imports_and_docstring() {
        let src = "\"\"\"Load data.\"\"\"\nimport json\n# read it\ndf = read_csv('a.csv')\n";
        assert_eq!(
            fix(src, kb()).fixed_source,
            "\"\"\"Load data.\"\"\"\nimport json\nimport pandas as pd\n# read it\ndf = pd.read_csv('a.csv')\n"
        );
    }

    #[test]
    fn unfixable_diagnostics() {
        let src = "import pandas as pd\npd.zzqq()\n";
        let r = fix(src, kb());
        assert_eq!(r.fixed_source, src);
        assert!(r.applied.is_empty());
        assert_eq!(r.unfixed.len(), 1);
        let m = parse(src).unwrap();
        assert!(plan_fixes(&m, &validate(&m, kb()), FixOptions::default()).edits.is_empty());
    }

    #[test]
    fn apply_nothing_is_identity() {
        let m = parse("import numpy as np\nx = np.mean([1])\n").unwrap();
        assert_eq!(apply_fixes(&m, &[]), m);
    }

    #[test]
    fn replace_attr_on_reader() {
        let r = fix("import pandas as pd\ndf = pd.read_excel('f.csv')\n", kb());
        assert_eq!(r.fixed_source, "import pandas as pd\ndf = pd.read_csv('f.csv')\n");
    }

    #[test]
    fn clean_source_is_returned_verbatim() {
        let src = "import numpy  as np\nx=np.mean([1,2])\n";
        let r = fix(src, kb());
        assert_eq!(r.fixed_source, src);
        assert!(!r.changed());
    }

    #[test]
    fn intent_fix_is_opt_in() {
        let src = "import numpy as np\nxs = [1]\navg = np.sum(xs)  # compute the average\n";
        let r = fix(src, kb());
        assert_eq!((r.applied.len(), r.unfixed.len()), (0, 1));
        let r = fix_with(src, kb(), FixOptions { fix_intent: true });
        assert_eq!(r.fixed_source, "import numpy as np\nxs = [1]\navg = np.mean(xs)  # compute the average\n");
    }

    #[test]
    fn missing_alias_import() {
        let r = fix("a = np.array([1])\nb = np.arrya([2])\n", kb());
        assert_eq!(r.fixed_source, "import numpy as np\na = np.array([1])\nb = np.array([2])\n");
        assert!(r.unfixed.is_empty());
    }

    #[test]
    fn identifier_rename() {
        let r = fix("max_len_str = 0\nprint(max_len_len_str)\n", kb());
        assert_eq!(r.fixed_source, "max_len_str = 0\nprint(max_len_str)\n");
    }

    #[test]
    fn syntax_errors_pass_through() {
        let r = fix("def f(:", kb());
        assert_eq!(r.fixed_source, "def f(:");
        assert!(r.parse_failure.is_some());
    }

    #[test]
    fn overlapping_edits_first_wins() {
        let m = parse("import pandas as pd\npd.read_exel('a.csv')\n").unwrap();
        let mut d = validate(&m, kb());
        let mut dup = d[0].clone();
        dup.category = Category::SemanticArgumentShape;
        d.push(dup);
        let plan = plan_fixes(&m, &d, FixOptions::default());
        assert_eq!((plan.applied.len(), plan.unfixed.len()), (1, 1));
        assert_eq!(plan.applied[0].category, Category::UnknownApi);
    }
}
