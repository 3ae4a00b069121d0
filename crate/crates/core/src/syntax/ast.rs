//! Tree types for the supported Python subset.
//!
//! Every node carries a [`Span`]. Structural comparison ignores spans and
//! comment line numbers; see [`Module::structurally_eq`].

use super::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    pub body: Vec<Stmt>,
    /// Comments after the last statement.
    pub trailing_comments: Vec<Comment>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    /// Full comment text including the leading `#`.
    pub text: String,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
    pub leading_comments: Vec<Comment>,
    pub trailing_comment: Option<Comment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportName {
    /// Dotted module path for `import`, bare name for `from ... import`.
    pub name: String,
    pub alias: Option<String>,
    pub span: Span,
}

impl ImportName {
    /// The local name this import binds.
    pub fn bound_name(&self) -> &str {
        match &self.alias {
            Some(a) => a,
            None => self.name.split('.').next().unwrap_or(&self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub default: Option<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WithItem {
    pub context: Expr,
    pub target: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptHandler {
    pub kind: Option<Expr>,
    pub name: Option<(String, Span)>,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Import(Vec<ImportName>),
    ImportFrom {
        /// Leading dots of a relative import.
        level: u32,
        module: String,
        names: Vec<ImportName>,
    },
    Assign {
        targets: Vec<Expr>,
        value: Expr,
    },
    AugAssign {
        target: Expr,
        op: BinOperator,
        value: Expr,
    },
    Expr(Expr),
    FunctionDef {
        name: String,
        name_span: Span,
        params: Vec<Param>,
        body: Vec<Stmt>,
    },
    Return(Option<Expr>),
    For {
        target: Expr,
        iter: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    While {
        test: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    If {
        test: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    With {
        items: Vec<WithItem>,
        body: Vec<Stmt>,
    },
    Try {
        body: Vec<Stmt>,
        handlers: Vec<ExceptHandler>,
        orelse: Vec<Stmt>,
        finalbody: Vec<Stmt>,
    },
    Raise(Option<Expr>),
    Pass,
    Break,
    Continue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuoteStyle {
    Single,
    Double,
    TripleSingle,
    TripleDouble,
}

impl QuoteStyle {
    pub fn delimiter(self) -> &'static str {
        match self {
            QuoteStyle::Single => "'",
            QuoteStyle::Double => "\"",
            QuoteStyle::TripleSingle => "'''",
            QuoteStyle::TripleDouble => "\"\"\"",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringLit {
    /// Decoded value (escape sequences processed unless raw).
    pub value: String,
    pub quote: QuoteStyle,
    /// String prefix as written (`r`, `f`, `b`, ...), possibly empty.
    pub prefix: String,
    /// Body between the delimiters, exactly as written.
    pub raw_body: String,
}

impl StringLit {
    /// Builds a literal from a plain value using single quotes.
    pub fn single_quoted(value: &str) -> StringLit {
        let mut raw = String::new();
        for c in value.chars() {
            match c {
                '\\' => raw.push_str("\\\\"),
                '\'' => raw.push_str("\\'"),
                '\n' => raw.push_str("\\n"),
                '\t' => raw.push_str("\\t"),
                c => raw.push(c),
            }
        }
        StringLit { value: value.to_string(), quote: QuoteStyle::Single, prefix: String::new(), raw_body: raw }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    True,
    False,
    None,
    Ellipsis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOperator {
    Add,
    Sub,
    Mul,
    MatMul,
    Div,
    FloorDiv,
    Mod,
    Pow,
    LShift,
    RShift,
    BitOr,
    BitXor,
    BitAnd,
    And,
    Or,
}

impl BinOperator {
    pub fn symbol(self) -> &'static str {
        use BinOperator::*;
        match self {
            Add => "+",
            Sub => "-",
            Mul => "*",
            MatMul => "@",
            Div => "/",
            FloorDiv => "//",
            Mod => "%",
            Pow => "**",
            LShift => "<<",
            RShift => ">>",
            BitOr => "|",
            BitXor => "^",
            BitAnd => "&",
            And => "and",
            Or => "or",
        }
    }

    pub(crate) fn from_symbol(s: &str) -> Option<BinOperator> {
        use BinOperator::*;
        Some(match s {
            "+" => Add,
            "-" => Sub,
            "*" => Mul,
            "@" => MatMul,
            "/" => Div,
            "//" => FloorDiv,
            "%" => Mod,
            "**" => Pow,
            "<<" => LShift,
            ">>" => RShift,
            "|" => BitOr,
            "^" => BitXor,
            "&" => BitAnd,
            "and" => And,
            "or" => Or,
            _ => return None,
        })
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        use BinOperator::*;
        match self {
            Or => prec::OR,
            And => prec::AND,
            BitOr => prec::BIT_OR,
            BitXor => prec::BIT_XOR,
            BitAnd => prec::BIT_AND,
            LShift | RShift => prec::SHIFT,
            Add | Sub => prec::ARITH,
            Mul | MatMul | Div | FloorDiv | Mod => prec::TERM,
            Pow => prec::POWER,
        }
    }
}

pub(crate) mod prec {
    pub const TUPLE: u8 = 0;
    pub const TEST: u8 = 1;
    pub const OR: u8 = 2;
    pub const AND: u8 = 3;
    pub const NOT: u8 = 4;
    pub const COMPARE: u8 = 5;
    pub const BIT_OR: u8 = 6;
    pub const BIT_XOR: u8 = 7;
    pub const BIT_AND: u8 = 8;
    pub const SHIFT: u8 = 9;
    pub const ARITH: u8 = 10;
    pub const TERM: u8 = 11;
    pub const UNARY: u8 = 12;
    pub const POWER: u8 = 13;
    pub const PRIMARY: u8 = 14;
    pub const ATOM: u8 = 15;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOperator {
    Neg,
    Pos,
    Invert,
    Not,
}

impl UnaryOperator {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOperator::Neg => "-",
            UnaryOperator::Pos => "+",
            UnaryOperator::Invert => "~",
            UnaryOperator::Not => "not ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOperator {
    Eq,
    NotEq,
    Lt,
    LtE,
    Gt,
    GtE,
    In,
    NotIn,
    Is,
    IsNot,
}

impl CmpOperator {
    pub fn symbol(self) -> &'static str {
        use CmpOperator::*;
        match self {
            Eq => "==",
            NotEq => "!=",
            Lt => "<",
            LtE => "<=",
            Gt => ">",
            GtE => ">=",
            In => "in",
            NotIn => "not in",
            Is => "is",
            IsNot => "is not",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keyword {
    pub name: String,
    pub value: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Name(String),
    Constant(Constant),
    StringLit(StringLit),
    NumberLit(String),
    ListLit(Vec<Expr>),
    TupleLit(Vec<Expr>),
    DictLit(Vec<(Expr, Expr)>),
    Attribute { value: Box<Expr>, attr: String },
    Call { func: Box<Expr>, args: Vec<Expr>, keywords: Vec<Keyword> },
    Subscript { value: Box<Expr>, index: Box<Expr> },
    Slice { lower: Option<Box<Expr>>, upper: Option<Box<Expr>>, step: Option<Box<Expr>> },
    BinOp { left: Box<Expr>, op: BinOperator, right: Box<Expr> },
    UnaryOp { op: UnaryOperator, operand: Box<Expr> },
    Compare { left: Box<Expr>, ops: Vec<(CmpOperator, Expr)> },
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    pub fn name(id: &str, span: Span) -> Expr {
        Expr::new(ExprKind::Name(id.to_string()), span)
    }

    /// Linearizes a `Name(.attr)*` chain to a dotted path.
    pub fn dotted_path(&self) -> Option<String> {
        match &self.kind {
            ExprKind::Name(n) => Some(n.clone()),
            ExprKind::Attribute { value, attr } => value.dotted_path().map(|p| format!("{p}.{attr}")),
            _ => None,
        }
    }

    /// Builds an attribute chain from a dotted path. Every node gets `span`.
    pub fn from_dotted(path: &str, span: Span) -> Expr {
        let mut parts = path.split('.');
        let mut expr = Expr::name(parts.next().unwrap_or_default(), span);
        for part in parts {
            expr = Expr::new(ExprKind::Attribute { value: Box::new(expr), attr: part.to_string() }, span);
        }
        expr
    }

    pub fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::TupleLit(items) if !items.is_empty() => prec::TUPLE,
            ExprKind::BinOp { op, .. } => op.precedence(),
            ExprKind::UnaryOp { op: UnaryOperator::Not, .. } => prec::NOT,
            ExprKind::UnaryOp { .. } => prec::UNARY,
            ExprKind::Compare { .. } => prec::COMPARE,
            ExprKind::Attribute { .. } | ExprKind::Call { .. } | ExprKind::Subscript { .. } => prec::PRIMARY,
            _ => prec::ATOM,
        }
    }

    /// Direct child expressions in source order.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Name(_) | ExprKind::Constant(_) | ExprKind::StringLit(_) | ExprKind::NumberLit(_) => vec![],
            ExprKind::ListLit(items) | ExprKind::TupleLit(items) => items.iter().collect(),
            ExprKind::DictLit(pairs) => pairs.iter().flat_map(|(k, v)| [k, v]).collect(),
            ExprKind::Attribute { value, .. } => vec![value],
            ExprKind::Call { func, args, keywords } => {
                let mut out: Vec<&Expr> = vec![func];
                out.extend(args.iter());
                out.extend(keywords.iter().map(|k| &k.value));
                out
            }
            ExprKind::Subscript { value, index } => vec![value, index],
            ExprKind::Slice { lower, upper, step } => {
                [lower, upper, step].into_iter().flatten().map(|b| b.as_ref()).collect()
            }
            ExprKind::BinOp { left, right, .. } => vec![left, right],
            ExprKind::UnaryOp { operand, .. } => vec![operand],
            ExprKind::Compare { left, ops } => {
                let mut out: Vec<&Expr> = vec![left];
                out.extend(ops.iter().map(|(_, e)| e));
                out
            }
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            ExprKind::Name(_) | ExprKind::Constant(_) | ExprKind::StringLit(_) | ExprKind::NumberLit(_) => vec![],
            ExprKind::ListLit(items) | ExprKind::TupleLit(items) => items.iter_mut().collect(),
            ExprKind::DictLit(pairs) => pairs.iter_mut().flat_map(|(k, v)| [k, v]).collect(),
            ExprKind::Attribute { value, .. } => vec![value],
            ExprKind::Call { func, args, keywords } => {
                let mut out: Vec<&mut Expr> = vec![func];
                out.extend(args.iter_mut());
                out.extend(keywords.iter_mut().map(|k| &mut k.value));
                out
            }
            ExprKind::Subscript { value, index } => vec![value, index],
            ExprKind::Slice { lower, upper, step } => {
                [lower, upper, step].into_iter().flatten().map(|b| b.as_mut()).collect()
            }
            ExprKind::BinOp { left, right, .. } => vec![left, right],
            ExprKind::UnaryOp { operand, .. } => vec![operand],
            ExprKind::Compare { left, ops } => {
                let mut out: Vec<&mut Expr> = vec![left];
                out.extend(ops.iter_mut().map(|(_, e)| e));
                out
            }
        }
    }

    /// Pre-order walk over this expression and all descendants.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        for child in self.children() {
            child.walk(f);
        }
    }

    fn clear_spans(&mut self) {
        self.span = Span::default();
        if let ExprKind::Call { keywords, .. } = &mut self.kind {
            for kw in keywords {
                kw.span = Span::default();
            }
        }
        for child in self.children_mut() {
            child.clear_spans();
        }
    }
}

impl Stmt {
    pub fn new(kind: StmtKind, span: Span) -> Stmt {
        Stmt { kind, span, leading_comments: Vec::new(), trailing_comment: None }
    }

    /// Expressions owned directly by this statement (not by nested bodies).
    pub fn exprs(&self) -> Vec<&Expr> {
        match &self.kind {
            StmtKind::Import(_) | StmtKind::ImportFrom { .. } => vec![],
            StmtKind::Pass | StmtKind::Break | StmtKind::Continue => vec![],
            StmtKind::Assign { targets, value } => targets.iter().chain(std::iter::once(value)).collect(),
            StmtKind::AugAssign { target, value, .. } => vec![target, value],
            StmtKind::Expr(e) => vec![e],
            StmtKind::FunctionDef { params, .. } => params.iter().filter_map(|p| p.default.as_ref()).collect(),
            StmtKind::Return(e) | StmtKind::Raise(e) => e.iter().collect(),
            StmtKind::For { target, iter, .. } => vec![target, iter],
            StmtKind::While { test, .. } | StmtKind::If { test, .. } => vec![test],
            StmtKind::With { items, .. } => {
                items.iter().flat_map(|i| std::iter::once(&i.context).chain(i.target.iter())).collect()
            }
            StmtKind::Try { handlers, .. } => handlers.iter().filter_map(|h| h.kind.as_ref()).collect(),
        }
    }

    pub fn exprs_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            StmtKind::Import(_) | StmtKind::ImportFrom { .. } => vec![],
            StmtKind::Pass | StmtKind::Break | StmtKind::Continue => vec![],
            StmtKind::Assign { targets, value } => targets.iter_mut().chain(std::iter::once(value)).collect(),
            StmtKind::AugAssign { target, value, .. } => vec![target, value],
            StmtKind::Expr(e) => vec![e],
            StmtKind::FunctionDef { params, .. } => params.iter_mut().filter_map(|p| p.default.as_mut()).collect(),
            StmtKind::Return(e) | StmtKind::Raise(e) => e.iter_mut().collect(),
            StmtKind::For { target, iter, .. } => vec![target, iter],
            StmtKind::While { test, .. } | StmtKind::If { test, .. } => vec![test],
            StmtKind::With { items, .. } => {
                items.iter_mut().flat_map(|i| std::iter::once(&mut i.context).chain(i.target.iter_mut())).collect()
            }
            StmtKind::Try { handlers, .. } => handlers.iter_mut().filter_map(|h| h.kind.as_mut()).collect(),
        }
    }

    /// Nested statement blocks in source order.
    pub fn blocks(&self) -> Vec<&Vec<Stmt>> {
        match &self.kind {
            StmtKind::FunctionDef { body, .. } | StmtKind::With { body, .. } => vec![body],
            StmtKind::For { body, orelse, .. }
            | StmtKind::While { body, orelse, .. }
            | StmtKind::If { body, orelse, .. } => vec![body, orelse],
            StmtKind::Try { body, handlers, orelse, finalbody } => {
                let mut out = vec![body];
                out.extend(handlers.iter().map(|h| &h.body));
                out.push(orelse);
                out.push(finalbody);
                out
            }
            _ => vec![],
        }
    }

    pub fn blocks_mut(&mut self) -> Vec<&mut Vec<Stmt>> {
        match &mut self.kind {
            StmtKind::FunctionDef { body, .. } | StmtKind::With { body, .. } => vec![body],
            StmtKind::For { body, orelse, .. }
            | StmtKind::While { body, orelse, .. }
            | StmtKind::If { body, orelse, .. } => vec![body, orelse],
            StmtKind::Try { body, handlers, orelse, finalbody } => {
                let mut out = vec![body];
                out.extend(handlers.iter_mut().map(|h| &mut h.body));
                out.push(orelse);
                out.push(finalbody);
                out
            }
            _ => vec![],
        }
    }

    pub fn is_import(&self) -> bool {
        matches!(self.kind, StmtKind::Import(_) | StmtKind::ImportFrom { .. })
    }

    fn clear_spans(&mut self) {
        self.span = Span::default();
        for c in &mut self.leading_comments {
            c.line = 0;
        }
        if let Some(c) = &mut self.trailing_comment {
            c.line = 0;
        }
        match &mut self.kind {
            StmtKind::Import(names) | StmtKind::ImportFrom { names, .. } => {
                for n in names {
                    n.span = Span::default();
                }
            }
            StmtKind::FunctionDef { name_span, params, .. } => {
                *name_span = Span::default();
                for p in params {
                    p.span = Span::default();
                }
            }
            StmtKind::Try { handlers, .. } => {
                for h in handlers {
                    h.span = Span::default();
                    if let Some((_, s)) = &mut h.name {
                        *s = Span::default();
                    }
                }
            }
            _ => {}
        }
        for e in self.exprs_mut() {
            e.clear_spans();
        }
        for block in self.blocks_mut() {
            for s in block {
                s.clear_spans();
            }
        }
    }
}

/// Pre-order walk over statements, descending into nested blocks.
pub fn walk_stmts<'a>(body: &'a [Stmt], f: &mut dyn FnMut(&'a Stmt)) {
    for stmt in body {
        f(stmt);
        for block in stmt.blocks() {
            walk_stmts(block, f);
        }
    }
}

impl Module {
    /// Copy with every span and comment line number zeroed.
    pub fn without_spans(&self) -> Module {
        let mut m = self.clone();
        m.span = Span::default();
        for c in &mut m.trailing_comments {
            c.line = 0;
        }
        for s in &mut m.body {
            s.clear_spans();
        }
        m
    }

    /// Span-insensitive equality.
    pub fn structurally_eq(&self, other: &Module) -> bool {
        self.without_spans() == other.without_spans()
    }

    /// Visits every expression in the tree, pre-order, in source order.
    pub fn walk_exprs<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        walk_stmts(&self.body, &mut |stmt| {
            for e in stmt.exprs() {
                e.walk(f);
            }
        });
    }

    /// Number of `Call` nodes in the tree.
    pub fn call_count(&self) -> usize {
        let mut n = 0;
        self.walk_exprs(&mut |e| {
            if matches!(e.kind, ExprKind::Call { .. }) {
                n += 1;
            }
        });
        n
    }
}
