//! Canonical source rendering.
//!
//! Layout: 4-space indents, one statement per line, no blank lines, single
//! spaces around `=` and binary operators, string literals re-emitted with
//! their original prefix, quotes and body. Parentheses are inserted only
//! where precedence requires them.

use super::ast::*;

const INDENT: &str = "    ";

/// Render a module to canonical source text.
pub fn unparse(module: &Module) -> String {
    let mut out = String::new();
    block(&mut out, &module.body, 0);
    for c in &module.trailing_comments {
        out.push_str(&c.text);
        out.push('\n');
    }
    out
}

/// Render a single statement (and its nested blocks) at indent level zero.
pub fn unparse_stmt(stmt: &Stmt) -> String {
    let mut out = String::new();
    statement(&mut out, stmt, 0);
    out
}

/// Render the first line of a statement: the whole statement for simple
/// statements, the header for compound ones. Comments are not included.
pub fn stmt_header(stmt: &Stmt) -> String {
    match &stmt.kind {
        StmtKind::FunctionDef { .. }
        | StmtKind::For { .. }
        | StmtKind::While { .. }
        | StmtKind::If { .. }
        | StmtKind::With { .. }
        | StmtKind::Try { .. } => compound_header(stmt),
        _ => simple(stmt),
    }
}

pub fn unparse_expr(e: &Expr) -> String {
    expr_top(e)
}

fn block(out: &mut String, body: &[Stmt], depth: usize) {
    if body.is_empty() {
        push_line(out, depth, "pass");
        return;
    }
    for stmt in body {
        statement(out, stmt, depth);
    }
}

fn push_line(out: &mut String, depth: usize, text: &str) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
    out.push_str(text);
    out.push('\n');
}

fn with_trailing(text: String, stmt: &Stmt) -> String {
    match &stmt.trailing_comment {
        Some(c) => format!("{text}  {}", c.text),
        None => text,
    }
}

fn statement(out: &mut String, stmt: &Stmt, depth: usize) {
    for c in &stmt.leading_comments {
        push_line(out, depth, &c.text);
    }
    match &stmt.kind {
        StmtKind::FunctionDef { body, .. } | StmtKind::With { body, .. } => {
            push_line(out, depth, &with_trailing(compound_header(stmt), stmt));
            block(out, body, depth + 1);
        }
        StmtKind::For { body, orelse, .. } | StmtKind::While { body, orelse, .. } => {
            push_line(out, depth, &with_trailing(compound_header(stmt), stmt));
            block(out, body, depth + 1);
            if !orelse.is_empty() {
                push_line(out, depth, "else:");
                block(out, orelse, depth + 1);
            }
        }
        StmtKind::If { .. } => if_chain(out, stmt, depth, "if"),
        StmtKind::Try { body, handlers, orelse, finalbody } => {
            push_line(out, depth, &with_trailing(compound_header(stmt), stmt));
            block(out, body, depth + 1);
            for h in handlers {
                let mut head = String::from("except");
                if let Some(k) = &h.kind {
                    head.push(' ');
                    head.push_str(&expr(k, prec::TEST));
                    if let Some((name, _)) = &h.name {
                        head.push_str(" as ");
                        head.push_str(name);
                    }
                }
                head.push(':');
                push_line(out, depth, &head);
                block(out, &h.body, depth + 1);
            }
            if !orelse.is_empty() {
                push_line(out, depth, "else:");
                block(out, orelse, depth + 1);
            }
            if !finalbody.is_empty() {
                push_line(out, depth, "finally:");
                block(out, finalbody, depth + 1);
            }
        }
        _ => push_line(out, depth, &with_trailing(simple(stmt), stmt)),
    }
}

fn if_chain(out: &mut String, stmt: &Stmt, depth: usize, keyword: &str) {
    let StmtKind::If { test, body, orelse } = &stmt.kind else { unreachable!() };
    let head = format!("{keyword} {}:", expr(test, prec::TEST));
    push_line(out, depth, &with_trailing(head, stmt));
    block(out, body, depth + 1);
    match orelse.as_slice() {
        [] => {}
        [only] if matches!(only.kind, StmtKind::If { .. }) && only.leading_comments.is_empty() => {
            if_chain(out, only, depth, "elif");
        }
        _ => {
            push_line(out, depth, "else:");
            block(out, orelse, depth + 1);
        }
    }
}

fn compound_header(stmt: &Stmt) -> String {
    match &stmt.kind {
        StmtKind::FunctionDef { name, params, .. } => {
            let params: Vec<String> = params
                .iter()
                .map(|p| match &p.default {
                    Some(d) => format!("{}={}", p.name, expr(d, prec::TEST)),
                    None => p.name.clone(),
                })
                .collect();
            format!("def {name}({}):", params.join(", "))
        }
        StmtKind::For { target, iter, .. } => format!("for {} in {}:", expr_top(target), expr_top(iter)),
        StmtKind::While { test, .. } => format!("while {}:", expr(test, prec::TEST)),
        StmtKind::If { test, .. } => format!("if {}:", expr(test, prec::TEST)),
        StmtKind::With { items, .. } => {
            let items: Vec<String> = items
                .iter()
                .map(|i| match &i.target {
                    Some(t) => format!("{} as {}", expr(&i.context, prec::TEST), expr(t, prec::TEST)),
                    None => expr(&i.context, prec::TEST),
                })
                .collect();
            format!("with {}:", items.join(", "))
        }
        StmtKind::Try { .. } => "try:".to_string(),
        _ => simple(stmt),
    }
}

fn import_names(names: &[ImportName]) -> String {
    names
        .iter()
        .map(|n| match &n.alias {
            Some(a) => format!("{} as {a}", n.name),
            None => n.name.clone(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn simple(stmt: &Stmt) -> String {
    match &stmt.kind {
        StmtKind::Import(names) => format!("import {}", import_names(names)),
        StmtKind::ImportFrom { level, module, names } => {
            format!("from {}{module} import {}", ".".repeat(*level as usize), import_names(names))
        }
        StmtKind::Assign { targets, value } => {
            let mut parts: Vec<String> = targets.iter().map(expr_top).collect();
            parts.push(expr_top(value));
            parts.join(" = ")
        }
        StmtKind::AugAssign { target, op, value } => {
            format!("{} {}= {}", expr_top(target), op.symbol(), expr_top(value))
        }
        StmtKind::Expr(e) => expr_top(e),
        StmtKind::Return(v) => match v {
            Some(v) => format!("return {}", expr_top(v)),
            None => "return".into(),
        },
        StmtKind::Raise(v) => match v {
            Some(v) => format!("raise {}", expr_top(v)),
            None => "raise".into(),
        },
        StmtKind::Pass => "pass".into(),
        StmtKind::Break => "break".into(),
        StmtKind::Continue => "continue".into(),
        _ => compound_header(stmt),
    }
}

/// Statement-level expression: tuples of two or more render without parens.
fn expr_top(e: &Expr) -> String {
    match &e.kind {
        ExprKind::TupleLit(items) if items.len() >= 2 => {
            items.iter().map(|i| expr(i, prec::TEST)).collect::<Vec<_>>().join(", ")
        }
        _ => expr(e, prec::TUPLE),
    }
}

fn expr(e: &Expr, min_prec: u8) -> String {
    let text = expr_inner(e);
    // Non-bare tuples carry their own parentheses.
    if e.precedence() < min_prec && !matches!(e.kind, ExprKind::TupleLit(_)) {
        format!("({text})")
    } else {
        text
    }
}

fn join(items: &[Expr]) -> String {
    items.iter().map(|i| expr(i, prec::TEST)).collect::<Vec<_>>().join(", ")
}

fn expr_inner(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Name(n) => n.clone(),
        ExprKind::Constant(c) => match c {
            Constant::True => "True",
            Constant::False => "False",
            Constant::None => "None",
            Constant::Ellipsis => "...",
        }
        .to_string(),
        ExprKind::StringLit(s) => {
            let d = s.quote.delimiter();
            format!("{}{d}{}{d}", s.prefix, s.raw_body)
        }
        ExprKind::NumberLit(raw) => raw.clone(),
        ExprKind::ListLit(items) => format!("[{}]", join(items)),
        ExprKind::TupleLit(items) => match items.len() {
            0 => "()".into(),
            1 => format!("({},)", expr(&items[0], prec::TEST)),
            _ => format!("({})", join(items)),
        },
        ExprKind::DictLit(pairs) => {
            let parts: Vec<String> =
                pairs.iter().map(|(k, v)| format!("{}: {}", expr(k, prec::TEST), expr(v, prec::TEST))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        ExprKind::Attribute { value, attr } => {
            let base = if matches!(value.kind, ExprKind::NumberLit(_)) {
                format!("({})", expr_inner(value))
            } else {
                expr(value, prec::PRIMARY)
            };
            format!("{base}.{attr}")
        }
        ExprKind::Call { func, args, keywords } => {
            let mut parts: Vec<String> = args.iter().map(|a| expr(a, prec::TEST)).collect();
            parts.extend(keywords.iter().map(|k| format!("{}={}", k.name, expr(&k.value, prec::TEST))));
            format!("{}({})", expr(func, prec::PRIMARY), parts.join(", "))
        }
        ExprKind::Subscript { value, index } => {
            let idx = match &index.kind {
                ExprKind::TupleLit(items) if items.len() >= 2 => {
                    items.iter().map(subscript_item).collect::<Vec<_>>().join(", ")
                }
                _ => subscript_item(index),
            };
            format!("{}[{idx}]", expr(value, prec::PRIMARY))
        }
        ExprKind::Slice { .. } => subscript_item(e),
        ExprKind::BinOp { left, op, right } => {
            let p = op.precedence();
            let (lp, rp) = if *op == BinOperator::Pow { (prec::PRIMARY, prec::UNARY) } else { (p, p + 1) };
            format!("{} {} {}", expr(left, lp), op.symbol(), expr(right, rp))
        }
        ExprKind::UnaryOp { op, operand } => {
            let p = if *op == UnaryOperator::Not { prec::NOT } else { prec::UNARY };
            format!("{}{}", op.symbol(), expr(operand, p))
        }
        ExprKind::Compare { left, ops } => {
            let mut s = expr(left, prec::COMPARE + 1);
            for (op, rhs) in ops {
                s.push(' ');
                s.push_str(op.symbol());
                s.push(' ');
                s.push_str(&expr(rhs, prec::COMPARE + 1));
            }
            s
        }
    }
}

fn subscript_item(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Slice { lower, upper, step } => {
            let part = |p: &Option<Box<Expr>>| p.as_ref().map(|x| expr(x, prec::TEST)).unwrap_or_default();
            let mut s = format!("{}:{}", part(lower), part(upper));
            if step.is_some() {
                s.push(':');
                s.push_str(&part(step));
            }
            s
        }
        _ => expr(e, prec::TEST),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::syntax::Span;

    fn roundtrip(src: &str) -> String {
        unparse(&parse(src).unwrap())
    }

    #[test]
    fn canonical_source_is_a_fixpoint() {
        let src = "import numpy as np\nimport matplotlib.pyplot as plt\nfrom json import loads as ld\n# comment\ndef f(a, b=2):\n    return np.mean([a, b]) ** 2  # avg\nfor i, v in enumerate(xs):\n    if v > 0:\n        pass\n    elif v < 0:\n        break\n    else:\n        continue\ny = (a + b) * -c\nz = arr[:, 0]\nd = {'k': [1, 2], 'j': (1,)}\n";
        assert_eq!(roundtrip(src), src);
    }

    #[test]
    fn import_rendering() {
        let m = Module {
            body: vec![Stmt::new(
                StmtKind::Import(vec![ImportName {
                    name: "pandas".into(),
                    alias: Some("pd".into()),
                    span: Span::default(),
                }]),
                Span::default(),
            )],
            trailing_comments: vec![],
            span: Span::default(),
        };
        assert_eq!(unparse(&m), "import pandas as pd\n");
    }

    #[test]
    fn quote_style_is_preserved() {
        assert_eq!(roundtrip("x = pd.read_csv('f.csv')"), "x = pd.read_csv('f.csv')\n");
        assert_eq!(roundtrip("x = pd.read_csv(\"f.csv\")"), "x = pd.read_csv(\"f.csv\")\n");
        assert_eq!(roundtrip("x = r'\\d+'"), "x = r'\\d+'\n");
    }

    #[test]
    fn normalizes_spacing() {
        assert_eq!(roundtrip("x=f( a,b = 1 )"), "x = f(a, b=1)\n");
    }

    #[test]
    fn parentheses_only_where_needed() {
        assert_eq!(roundtrip("x = ((a + b)) * c"), "x = (a + b) * c\n");
        assert_eq!(roundtrip("x = a - (b - c)"), "x = a - (b - c)\n");
        assert_eq!(roundtrip("x = (a - b) - c"), "x = a - b - c\n");
        assert_eq!(roundtrip("x = (-a) ** 2"), "x = (-a) ** 2\n");
        assert_eq!(roundtrip("x = -a ** 2"), "x = -a ** 2\n");
        assert_eq!(roundtrip("x = a ** b ** c"), "x = a ** b ** c\n");
        assert_eq!(roundtrip("x = (a ** b) ** c"), "x = (a ** b) ** c\n");
        assert_eq!(roundtrip("x = not (a and b)"), "x = not (a and b)\n");
        assert_eq!(roundtrip("x = (a < b) < c"), "x = (a < b) < c\n");
        assert_eq!(roundtrip("f((a, b))"), "f((a, b))\n");
    }

    #[test]
    fn deterministic() {
        let m = parse("import json\nwith open('a.json') as f:\n    data = json.load(f)\n").unwrap();
        assert_eq!(unparse(&m), unparse(&m));
    }

    #[test]
    fn single_line_suite_expands() {
        assert_eq!(roundtrip("if x: y = 1"), "if x:\n    y = 1\n");
    }
}
