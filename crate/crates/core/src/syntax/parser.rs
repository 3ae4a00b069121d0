use thiserror::Error;

use super::ast::*;
use super::token::{tokenize, LexError, Token, TokenKind};
use super::Span;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: expected {expected}, found {found}")]
pub struct SyntaxError {
    pub span: Span,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("lex error at {0}")]
    Lex(#[from] LexError),
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Lex(e) => e.span,
            ParseError::Syntax(e) => e.span,
        }
    }
}

type PResult<T> = Result<T, SyntaxError>;

/// Parse `source` into a [`Module`].
pub fn parse(source: &str) -> Result<Module, ParseError> {
    let tokens = tokenize(source)?;
    let mut significant = Vec::with_capacity(tokens.len());
    let mut comments = Vec::new();
    for tok in tokens {
        if tok.kind == TokenKind::Comment {
            comments
                .push((significant.len(), Comment { text: tok.lexeme.trim_end().to_string(), line: tok.span.line }));
        } else {
            significant.push(tok);
        }
    }
    let mut p = Parser { toks: significant, pos: 0, comments, next_comment: 0 };
    Ok(p.module()?)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Comments paired with the index of the next significant token.
    comments: Vec<(usize, Comment)>,
    next_comment: usize,
}

const UNSUPPORTED_STMT_KEYWORDS: &[&str] =
    &["class", "lambda", "yield", "async", "await", "global", "nonlocal", "del", "assert"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek_nth(&self, n: usize) -> &Token {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn describe(tok: &Token) -> String {
        match tok.kind {
            TokenKind::Eof => "end of input".into(),
            TokenKind::Newline => "newline".into(),
            TokenKind::Indent => "indent".into(),
            TokenKind::Dedent => "dedent".into(),
            _ => format!("{:?}", tok.lexeme),
        }
    }

    fn fail<T>(&self, expected: impl Into<String>) -> PResult<T> {
        let tok = self.peek();
        Err(SyntaxError { span: tok.span, expected: expected.into(), found: Self::describe(tok) })
    }

    fn at_op(&self, op: &str) -> bool {
        self.peek().is_op(op)
    }

    fn at_kw(&self, kw: &str) -> bool {
        self.peek().is_keyword(kw)
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.at_op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: &str) -> PResult<Span> {
        if self.at_op(op) {
            Ok(self.bump().span)
        } else {
            self.fail(format!("'{op}'"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Span> {
        if self.at_kw(kw) {
            Ok(self.bump().span)
        } else {
            self.fail(format!("'{kw}'"))
        }
    }

    fn expect_name(&mut self) -> PResult<(String, Span)> {
        if self.peek().kind == TokenKind::Name {
            let t = self.bump();
            Ok((t.lexeme, t.span))
        } else {
            self.fail("identifier")
        }
    }

    fn expect_newline(&mut self) -> PResult<()> {
        match self.peek().kind {
            TokenKind::Newline => {
                self.bump();
                Ok(())
            }
            TokenKind::Eof => Ok(()),
            _ => self.fail("newline"),
        }
    }

    /// Comments whose next significant token is at or before `upto`.
    fn take_comments_before(&mut self, upto: usize) -> Vec<Comment> {
        let mut out = Vec::new();
        while let Some((idx, c)) = self.comments.get(self.next_comment) {
            if *idx > upto {
                break;
            }
            out.push(c.clone());
            self.next_comment += 1;
        }
        out
    }

    /// Attaches a comment sitting on the statement's last line, just before
    /// the newline at the current position.
    fn take_trailing_comment(&mut self, line: u32) -> Option<Comment> {
        let (idx, c) = self.comments.get(self.next_comment)?;
        if *idx == self.pos && c.line == line {
            let c = c.clone();
            self.next_comment += 1;
            Some(c)
        } else {
            None
        }
    }

    fn module(&mut self) -> PResult<Module> {
        let mut body = Vec::new();
        loop {
            match self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::Newline => {
                    self.bump();
                }
                TokenKind::Indent => return self.fail("statement (unexpected indent)"),
                _ => body.extend(self.statement()?),
            }
        }
        let trailing_comments = self.take_comments_before(usize::MAX);
        let span = match (body.first(), body.last()) {
            (Some(first), Some(last)) => first.span.to(last.span),
            _ => Span { line: 1, end_line: 1, ..Span::default() },
        };
        Ok(Module { body, trailing_comments, span })
    }

    /// Parses one logical line (possibly several `;`-separated simple
    /// statements) or one compound statement.
    fn statement(&mut self) -> PResult<Vec<Stmt>> {
        let leading = self.take_comments_before(self.pos);
        let tok = self.peek().clone();
        let mut stmts = if tok.kind == TokenKind::Keyword
            && matches!(tok.lexeme.as_str(), "def" | "if" | "for" | "while" | "with" | "try")
        {
            vec![self.compound_statement()?]
        } else if tok.is_op("@") {
            return self.fail("statement (decorators are not supported)");
        } else {
            self.simple_line()?
        };
        if let Some(first) = stmts.first_mut() {
            first.leading_comments.splice(0..0, leading);
        }
        Ok(stmts)
    }

    fn simple_line(&mut self) -> PResult<Vec<Stmt>> {
        let mut stmts = vec![self.simple_statement()?];
        while self.eat_op(";") {
            if matches!(self.peek().kind, TokenKind::Newline | TokenKind::Eof) {
                break;
            }
            stmts.push(self.simple_statement()?);
        }
        let last_line = self.prev_span().end_line;
        // Comments inside a bracketed multi-line statement float above it.
        let interior = self.take_comments_before(self.pos.saturating_sub(1));
        let trailing = self.take_trailing_comment(last_line);
        self.expect_newline()?;
        stmts[0].leading_comments.splice(0..0, interior);
        if let Some(last) = stmts.last_mut() {
            last.trailing_comment = trailing;
        }
        Ok(stmts)
    }

    fn simple_statement(&mut self) -> PResult<Stmt> {
        let tok = self.peek().clone();
        let start = tok.span;
        if tok.kind == TokenKind::Keyword {
            match tok.lexeme.as_str() {
                "import" => return self.import_stmt(),
                "from" => return self.import_from_stmt(),
                "pass" => {
                    self.bump();
                    return Ok(Stmt::new(StmtKind::Pass, start));
                }
                "break" => {
                    self.bump();
                    return Ok(Stmt::new(StmtKind::Break, start));
                }
                "continue" => {
                    self.bump();
                    return Ok(Stmt::new(StmtKind::Continue, start));
                }
                "return" | "raise" => {
                    self.bump();
                    let value = if matches!(self.peek().kind, TokenKind::Newline | TokenKind::Eof) || self.at_op(";") {
                        None
                    } else {
                        Some(self.testlist()?)
                    };
                    let span = value.as_ref().map_or(start, |v| start.to(v.span));
                    let kind = if tok.lexeme == "return" { StmtKind::Return(value) } else { StmtKind::Raise(value) };
                    return Ok(Stmt::new(kind, span));
                }
                kw if UNSUPPORTED_STMT_KEYWORDS.contains(&kw) => {
                    return self.fail(format!("statement ('{kw}' is not supported)"));
                }
                _ => {}
            }
        }
        let first = self.testlist()?;
        if self.at_op("=") {
            let mut targets = vec![first];
            let mut value;
            loop {
                self.bump();
                value = self.testlist()?;
                if self.at_op("=") {
                    targets.push(value);
                } else {
                    break;
                }
            }
            for t in &targets {
                check_target(t)?;
            }
            let span = start.to(value.span);
            return Ok(Stmt::new(StmtKind::Assign { targets, value }, span));
        }
        let aug = self.peek().clone();
        if aug.kind == TokenKind::Operator
            && aug.lexeme.len() >= 2
            && aug.lexeme.ends_with('=')
            && !matches!(aug.lexeme.as_str(), "==" | "!=" | "<=" | ">=")
        {
            let Some(op) = BinOperator::from_symbol(&aug.lexeme[..aug.lexeme.len() - 1]) else {
                return self.fail("augmented assignment operator");
            };
            self.bump();
            check_target(&first)?;
            if matches!(first.kind, ExprKind::TupleLit(_) | ExprKind::ListLit(_)) {
                return Err(SyntaxError {
                    span: first.span,
                    expected: "single assignment target".into(),
                    found: "sequence".into(),
                });
            }
            let value = self.testlist()?;
            let span = start.to(value.span);
            return Ok(Stmt::new(StmtKind::AugAssign { target: first, op, value }, span));
        }
        if self.at_op(":") {
            return self.fail("statement (annotations are not supported)");
        }
        let span = first.span;
        Ok(Stmt::new(StmtKind::Expr(first), span))
    }

    fn dotted_name(&mut self) -> PResult<(String, Span)> {
        let (mut name, mut span) = self.expect_name()?;
        while self.at_op(".") {
            self.bump();
            let (part, s) = self.expect_name()?;
            name.push('.');
            name.push_str(&part);
            span = span.to(s);
        }
        Ok((name, span))
    }

    fn import_stmt(&mut self) -> PResult<Stmt> {
        let start = self.expect_kw("import")?;
        let mut names = Vec::new();
        loop {
            let (name, mut span) = self.dotted_name()?;
            let alias = if self.eat_kw("as") {
                let (a, s) = self.expect_name()?;
                span = span.to(s);
                Some(a)
            } else {
                None
            };
            names.push(ImportName { name, alias, span });
            if !self.eat_op(",") {
                break;
            }
        }
        let span = start.to(self.prev_span());
        Ok(Stmt::new(StmtKind::Import(names), span))
    }

    fn import_from_stmt(&mut self) -> PResult<Stmt> {
        let start = self.expect_kw("from")?;
        let mut level = 0;
        loop {
            if self.eat_op(".") {
                level += 1;
            } else if self.eat_op("...") {
                level += 3;
            } else {
                break;
            }
        }
        let module = if self.peek().kind == TokenKind::Name {
            self.dotted_name()?.0
        } else if level == 0 {
            return self.fail("module name");
        } else {
            String::new()
        };
        self.expect_kw("import")?;
        let mut names = Vec::new();
        if self.at_op("*") {
            let t = self.bump();
            names.push(ImportName { name: "*".into(), alias: None, span: t.span });
        } else {
            let parens = self.eat_op("(");
            loop {
                let (name, mut span) = self.expect_name()?;
                let alias = if self.eat_kw("as") {
                    let (a, s) = self.expect_name()?;
                    span = span.to(s);
                    Some(a)
                } else {
                    None
                };
                names.push(ImportName { name, alias, span });
                if !self.eat_op(",") {
                    break;
                }
                if parens && self.at_op(")") {
                    break;
                }
            }
            if parens {
                self.expect_op(")")?;
            }
        }
        let span = start.to(self.prev_span());
        Ok(Stmt::new(StmtKind::ImportFrom { level, module, names }, span))
    }

    fn compound_statement(&mut self) -> PResult<Stmt> {
        let tok = self.bump();
        let start = tok.span;
        match tok.lexeme.as_str() {
            "def" => {
                let (name, name_span) = self.expect_name()?;
                self.expect_op("(")?;
                let mut params: Vec<Param> = Vec::new();
                while !self.at_op(")") {
                    if self.at_op("*") || self.at_op("**") || self.at_op("/") {
                        return self.fail("parameter (star parameters are not supported)");
                    }
                    let (pname, pspan) = self.expect_name()?;
                    if self.at_op(":") {
                        return self.fail("',' or ')' (annotations are not supported)");
                    }
                    let default = if self.eat_op("=") { Some(self.test()?) } else { None };
                    if default.is_none() && params.iter().any(|p| p.default.is_some()) {
                        return Err(SyntaxError {
                            span: pspan,
                            expected: "parameter with default".into(),
                            found: format!("{pname:?}"),
                        });
                    }
                    let span = default.as_ref().map_or(pspan, |d| pspan.to(d.span));
                    params.push(Param { name: pname, default, span });
                    if !self.eat_op(",") {
                        break;
                    }
                }
                self.expect_op(")")?;
                if self.at_op("->") {
                    return self.fail("':' (return annotations are not supported)");
                }
                let (header_comment, body) = self.suite()?;
                let span = start.to(block_end(&body, name_span));
                let mut stmt = Stmt::new(StmtKind::FunctionDef { name, name_span, params, body }, span);
                stmt.trailing_comment = header_comment;
                Ok(stmt)
            }
            "if" => self.if_tail(start),
            "for" => {
                let target = self.target_list()?;
                check_target(&target)?;
                self.expect_kw("in")?;
                let iter = self.testlist()?;
                let (header_comment, body) = self.suite()?;
                let orelse = self.else_block()?;
                let span = start.to(block_end(&orelse, block_end(&body, iter.span)));
                let mut stmt = Stmt::new(StmtKind::For { target, iter, body, orelse }, span);
                stmt.trailing_comment = header_comment;
                Ok(stmt)
            }
            "while" => {
                let test = self.test()?;
                let (header_comment, body) = self.suite()?;
                let orelse = self.else_block()?;
                let span = start.to(block_end(&orelse, block_end(&body, test.span)));
                let mut stmt = Stmt::new(StmtKind::While { test, body, orelse }, span);
                stmt.trailing_comment = header_comment;
                Ok(stmt)
            }
            "with" => {
                let mut items = Vec::new();
                loop {
                    let context = self.test()?;
                    let target = if self.eat_kw("as") {
                        let t = self.target_atom()?;
                        check_target(&t)?;
                        Some(t)
                    } else {
                        None
                    };
                    items.push(WithItem { context, target });
                    if !self.eat_op(",") {
                        break;
                    }
                }
                let (header_comment, body) = self.suite()?;
                let span = start.to(block_end(&body, self.prev_span()));
                let mut stmt = Stmt::new(StmtKind::With { items, body }, span);
                stmt.trailing_comment = header_comment;
                Ok(stmt)
            }
            "try" => {
                let (header_comment, body) = self.suite()?;
                let mut handlers = Vec::new();
                while self.at_kw("except") {
                    let hstart = self.bump().span;
                    let kind = if self.at_op(":") { None } else { Some(self.test()?) };
                    let name = if kind.is_some() && self.eat_kw("as") { Some(self.expect_name()?) } else { None };
                    let hbody = self.clause_suite()?;
                    let span = hstart.to(block_end(&hbody, hstart));
                    handlers.push(ExceptHandler { kind, name, body: hbody, span });
                }
                let orelse = if handlers.is_empty() { Vec::new() } else { self.else_block()? };
                let finalbody = if self.eat_kw("finally") { self.clause_suite()? } else { Vec::new() };
                if handlers.is_empty() && finalbody.is_empty() {
                    return self.fail("'except' or 'finally'");
                }
                let end = block_end(
                    &finalbody,
                    block_end(&orelse, handlers.last().map_or(block_end(&body, start), |h| h.span)),
                );
                let mut stmt = Stmt::new(StmtKind::Try { body, handlers, orelse, finalbody }, start.to(end));
                stmt.trailing_comment = header_comment;
                Ok(stmt)
            }
            _ => unreachable!("caller checked compound keyword"),
        }
    }

    fn if_tail(&mut self, start: Span) -> PResult<Stmt> {
        let test = self.test()?;
        let (header_comment, body) = self.suite()?;
        let orelse = if self.at_kw("elif") {
            let elif_start = self.bump().span;
            vec![self.if_tail(elif_start)?]
        } else {
            self.else_block()?
        };
        let span = start.to(block_end(&orelse, block_end(&body, test.span)));
        let mut stmt = Stmt::new(StmtKind::If { test, body, orelse }, span);
        stmt.trailing_comment = header_comment;
        Ok(stmt)
    }

    fn else_block(&mut self) -> PResult<Vec<Stmt>> {
        if self.eat_kw("else") {
            self.clause_suite()
        } else {
            Ok(Vec::new())
        }
    }

    /// Suite of a clause that has no statement of its own (`else`,
    /// `except`, `finally`); a header comment moves into the body.
    fn clause_suite(&mut self) -> PResult<Vec<Stmt>> {
        let (comment, mut body) = self.suite()?;
        if let (Some(c), Some(first)) = (comment, body.first_mut()) {
            first.leading_comments.insert(0, c);
        }
        Ok(body)
    }

    /// `':' NEWLINE INDENT stmt+ DEDENT` or `':' simple_stmt`. Returns the
    /// comment trailing the header line, if any.
    fn suite(&mut self) -> PResult<(Option<Comment>, Vec<Stmt>)> {
        let colon = self.expect_op(":")?;
        if self.peek().kind != TokenKind::Newline {
            let stmts = self.simple_line()?;
            return Ok((None, stmts));
        }
        let header_comment = self.take_trailing_comment(colon.line);
        self.bump();
        if self.peek().kind != TokenKind::Indent {
            return self.fail("indented block");
        }
        self.bump();
        let mut body = Vec::new();
        loop {
            match self.peek().kind {
                TokenKind::Dedent => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => break,
                TokenKind::Newline => {
                    self.bump();
                }
                _ => body.extend(self.statement()?),
            }
        }
        Ok((header_comment, body))
    }

    // ---- expressions ----

    /// Comma-separated expressions; a bare tuple when there is a comma.
    fn testlist(&mut self) -> PResult<Expr> {
        let first = self.test()?;
        if !self.at_op(",") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat_op(",") {
            if self.at_expr_end() {
                break;
            }
            items.push(self.test()?);
        }
        let span = items[0].span.to(self.prev_span());
        Ok(Expr::new(ExprKind::TupleLit(items), span))
    }

    fn at_expr_end(&self) -> bool {
        let t = self.peek();
        matches!(t.kind, TokenKind::Newline | TokenKind::Eof)
            || t.is_op("=")
            || t.is_op(")")
            || t.is_op("]")
            || t.is_op("}")
            || t.is_op(":")
            || t.is_op(";")
            || t.is_keyword("in")
            || (t.kind == TokenKind::Operator
                && t.lexeme.ends_with('=')
                && t.lexeme.len() >= 2
                && !matches!(t.lexeme.as_str(), "==" | "!=" | "<=" | ">="))
    }

    /// Loop targets: stop before `in` so it is not read as a comparison.
    fn target_list(&mut self) -> PResult<Expr> {
        let first = self.target_atom()?;
        if !self.at_op(",") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat_op(",") {
            if self.at_kw("in") {
                break;
            }
            items.push(self.target_atom()?);
        }
        let span = items[0].span.to(self.prev_span());
        Ok(Expr::new(ExprKind::TupleLit(items), span))
    }

    fn target_atom(&mut self) -> PResult<Expr> {
        self.bitor()
    }

    fn test(&mut self) -> PResult<Expr> {
        if self.at_kw("lambda") {
            return self.fail("expression (lambda is not supported)");
        }
        let e = self.or_test()?;
        if self.at_kw("if") {
            return self.fail("end of expression (conditional expressions are not supported)");
        }
        Ok(e)
    }

    fn or_test(&mut self) -> PResult<Expr> {
        let mut left = self.and_test()?;
        while self.eat_kw("or") {
            let right = self.and_test()?;
            left = binop(left, BinOperator::Or, right);
        }
        Ok(left)
    }

    fn and_test(&mut self) -> PResult<Expr> {
        let mut left = self.not_test()?;
        while self.eat_kw("and") {
            let right = self.not_test()?;
            left = binop(left, BinOperator::And, right);
        }
        Ok(left)
    }

    fn not_test(&mut self) -> PResult<Expr> {
        if self.at_kw("not") {
            let start = self.bump().span;
            let operand = self.not_test()?;
            let span = start.to(operand.span);
            return Ok(Expr::new(ExprKind::UnaryOp { op: UnaryOperator::Not, operand: Box::new(operand) }, span));
        }
        self.comparison()
    }

    fn comp_op(&mut self) -> Option<CmpOperator> {
        let t = self.peek().clone();
        let op = match (t.kind, t.lexeme.as_str()) {
            (TokenKind::Operator, "==") => CmpOperator::Eq,
            (TokenKind::Operator, "!=") => CmpOperator::NotEq,
            (TokenKind::Operator, "<") => CmpOperator::Lt,
            (TokenKind::Operator, "<=") => CmpOperator::LtE,
            (TokenKind::Operator, ">") => CmpOperator::Gt,
            (TokenKind::Operator, ">=") => CmpOperator::GtE,
            (TokenKind::Keyword, "in") => CmpOperator::In,
            (TokenKind::Keyword, "not") if self.peek_nth(1).is_keyword("in") => {
                self.bump();
                CmpOperator::NotIn
            }
            (TokenKind::Keyword, "is") => {
                if self.peek_nth(1).is_keyword("not") {
                    self.bump();
                    CmpOperator::IsNot
                } else {
                    CmpOperator::Is
                }
            }
            _ => return None,
        };
        self.bump();
        Some(op)
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let left = self.bitor()?;
        let mut ops = Vec::new();
        while let Some(op) = self.comp_op() {
            ops.push((op, self.bitor()?));
        }
        if ops.is_empty() {
            return Ok(left);
        }
        let span = left.span.to(ops.last().expect("non-empty").1.span);
        Ok(Expr::new(ExprKind::Compare { left: Box::new(left), ops }, span))
    }

    fn binary_level(&mut self, level: usize) -> PResult<Expr> {
        const LEVELS: &[&[&str]] = &[&["|"], &["^"], &["&"], &["<<", ">>"], &["+", "-"], &["*", "@", "/", "//", "%"]];
        if level == LEVELS.len() {
            return self.factor();
        }
        let mut left = self.binary_level(level + 1)?;
        loop {
            let t = self.peek();
            if t.kind != TokenKind::Operator || !LEVELS[level].contains(&t.lexeme.as_str()) {
                break;
            }
            let op = BinOperator::from_symbol(&self.bump().lexeme).expect("listed operator");
            let right = self.binary_level(level + 1)?;
            left = binop(left, op, right);
        }
        Ok(left)
    }

    fn bitor(&mut self) -> PResult<Expr> {
        self.binary_level(0)
    }

    fn factor(&mut self) -> PResult<Expr> {
        let t = self.peek();
        let op = match t.lexeme.as_str() {
            "-" if t.kind == TokenKind::Operator => Some(UnaryOperator::Neg),
            "+" if t.kind == TokenKind::Operator => Some(UnaryOperator::Pos),
            "~" if t.kind == TokenKind::Operator => Some(UnaryOperator::Invert),
            _ => None,
        };
        if let Some(op) = op {
            let start = self.bump().span;
            let operand = self.factor()?;
            let span = start.to(operand.span);
            return Ok(Expr::new(ExprKind::UnaryOp { op, operand: Box::new(operand) }, span));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.primary()?;
        if self.eat_op("**") {
            let exp = self.factor()?;
            return Ok(binop(base, BinOperator::Pow, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        loop {
            if self.at_op(".") {
                self.bump();
                let (attr, s) = self.expect_name()?;
                let span = e.span.to(s);
                e = Expr::new(ExprKind::Attribute { value: Box::new(e), attr }, span);
            } else if self.at_op("(") {
                self.bump();
                let (args, keywords) = self.call_args()?;
                let close = self.expect_op(")")?;
                let span = e.span.to(close);
                e = Expr::new(ExprKind::Call { func: Box::new(e), args, keywords }, span);
            } else if self.at_op("[") {
                self.bump();
                let index = self.subscript_index()?;
                let close = self.expect_op("]")?;
                let span = e.span.to(close);
                e = Expr::new(ExprKind::Subscript { value: Box::new(e), index: Box::new(index) }, span);
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn call_args(&mut self) -> PResult<(Vec<Expr>, Vec<Keyword>)> {
        let mut args = Vec::new();
        let mut keywords: Vec<Keyword> = Vec::new();
        while !self.at_op(")") {
            if self.at_op("*") || self.at_op("**") {
                return self.fail("argument (star arguments are not supported)");
            }
            if self.peek().kind == TokenKind::Name && self.peek_nth(1).is_op("=") {
                let (name, nspan) = self.expect_name()?;
                self.bump();
                let value = self.test()?;
                let span = nspan.to(value.span);
                keywords.push(Keyword { name, value, span });
            } else {
                if !keywords.is_empty() {
                    return self.fail("keyword argument (positional argument follows keyword argument)");
                }
                let arg = self.test()?;
                if self.at_kw("for") {
                    return self.fail("')' (generator expressions are not supported)");
                }
                args.push(arg);
            }
            if !self.eat_op(",") {
                break;
            }
        }
        Ok((args, keywords))
    }

    fn subscript_index(&mut self) -> PResult<Expr> {
        let first = self.subscript_item()?;
        if !self.at_op(",") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat_op(",") {
            if self.at_op("]") {
                break;
            }
            items.push(self.subscript_item()?);
        }
        let span = items[0].span.to(self.prev_span());
        Ok(Expr::new(ExprKind::TupleLit(items), span))
    }

    fn subscript_item(&mut self) -> PResult<Expr> {
        let start = self.peek().span;
        let lower = if self.at_op(":") { None } else { Some(self.test()?) };
        if !self.at_op(":") {
            return lower.ok_or_else(|| SyntaxError { span: start, expected: "index".into(), found: "':'".into() });
        }
        self.bump();
        let upper =
            if self.at_op(":") || self.at_op("]") || self.at_op(",") { None } else { Some(Box::new(self.test()?)) };
        let step = if self.eat_op(":") {
            if self.at_op("]") || self.at_op(",") {
                None
            } else {
                Some(Box::new(self.test()?))
            }
        } else {
            None
        };
        let span = start.to(self.prev_span());
        Ok(Expr::new(ExprKind::Slice { lower: lower.map(Box::new), upper, step }, span))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Name => {
                self.bump();
                Ok(Expr::name(&tok.lexeme, tok.span))
            }
            TokenKind::Number => {
                self.bump();
                Ok(Expr::new(ExprKind::NumberLit(tok.lexeme), tok.span))
            }
            TokenKind::String => {
                self.bump();
                if self.peek().kind == TokenKind::String {
                    return self.fail("end of string (implicit concatenation is not supported)");
                }
                Ok(Expr::new(ExprKind::StringLit(string_lit(&tok)), tok.span))
            }
            TokenKind::Keyword => {
                let c = match tok.lexeme.as_str() {
                    "True" => Constant::True,
                    "False" => Constant::False,
                    "None" => Constant::None,
                    _ => return self.fail("expression"),
                };
                self.bump();
                Ok(Expr::new(ExprKind::Constant(c), tok.span))
            }
            TokenKind::Operator => match tok.lexeme.as_str() {
                "..." => {
                    self.bump();
                    Ok(Expr::new(ExprKind::Constant(Constant::Ellipsis), tok.span))
                }
                "(" => {
                    self.bump();
                    if self.at_op(")") {
                        let close = self.bump().span;
                        return Ok(Expr::new(ExprKind::TupleLit(Vec::new()), tok.span.to(close)));
                    }
                    let first = self.test()?;
                    if self.at_kw("for") {
                        return self.fail("')' (generator expressions are not supported)");
                    }
                    if self.at_op(")") {
                        self.bump();
                        return Ok(first);
                    }
                    let mut items = vec![first];
                    while self.eat_op(",") {
                        if self.at_op(")") {
                            break;
                        }
                        items.push(self.test()?);
                    }
                    let close = self.expect_op(")")?;
                    Ok(Expr::new(ExprKind::TupleLit(items), tok.span.to(close)))
                }
                "[" => {
                    self.bump();
                    let mut items = Vec::new();
                    while !self.at_op("]") {
                        items.push(self.test()?);
                        if self.at_kw("for") {
                            return self.fail("']' (comprehensions are not supported)");
                        }
                        if !self.eat_op(",") {
                            break;
                        }
                    }
                    let close = self.expect_op("]")?;
                    Ok(Expr::new(ExprKind::ListLit(items), tok.span.to(close)))
                }
                "{" => {
                    self.bump();
                    let mut pairs = Vec::new();
                    while !self.at_op("}") {
                        if self.at_op("**") {
                            return self.fail("dict entry (unpacking is not supported)");
                        }
                        let k = self.test()?;
                        if !self.at_op(":") {
                            return self.fail("':' (set literals are not supported)");
                        }
                        self.bump();
                        let v = self.test()?;
                        if self.at_kw("for") {
                            return self.fail("'}' (comprehensions are not supported)");
                        }
                        pairs.push((k, v));
                        if !self.eat_op(",") {
                            break;
                        }
                    }
                    let close = self.expect_op("}")?;
                    Ok(Expr::new(ExprKind::DictLit(pairs), tok.span.to(close)))
                }
                _ => self.fail("expression"),
            },
            _ => self.fail("expression"),
        }
    }
}

fn binop(left: Expr, op: BinOperator, right: Expr) -> Expr {
    let span = left.span.to(right.span);
    Expr::new(ExprKind::BinOp { left: Box::new(left), op, right: Box::new(right) }, span)
}

fn block_end(block: &[Stmt], fallback: Span) -> Span {
    block.last().map_or(fallback, |s| s.span)
}

fn check_target(e: &Expr) -> PResult<()> {
    match &e.kind {
        ExprKind::Name(_) | ExprKind::Attribute { .. } | ExprKind::Subscript { .. } => Ok(()),
        ExprKind::TupleLit(items) | ExprKind::ListLit(items) if !items.is_empty() => {
            items.iter().try_for_each(check_target)
        }
        _ => Err(SyntaxError { span: e.span, expected: "assignable target".into(), found: "expression".into() }),
    }
}

fn string_lit(tok: &Token) -> StringLit {
    let lex = tok.lexeme.as_str();
    let prefix_len = lex.find(['\'', '"']).unwrap_or(0);
    let prefix = lex[..prefix_len].to_string();
    let rest = &lex[prefix_len..];
    let quote = if rest.starts_with("'''") {
        QuoteStyle::TripleSingle
    } else if rest.starts_with("\"\"\"") {
        QuoteStyle::TripleDouble
    } else if rest.starts_with('\'') {
        QuoteStyle::Single
    } else {
        QuoteStyle::Double
    };
    let d = quote.delimiter().len();
    let raw_body = rest[d..rest.len() - d].to_string();
    StringLit { value: tok.value.clone().unwrap_or_default(), quote, prefix, raw_body }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(src: &str) -> Vec<Stmt> {
        parse(src).unwrap().body
    }

    #[test]
    fn import_and_call() {
        let m = parse("import pandas as pd\ndf = pd.read_csv('f.csv')").unwrap();
        assert_eq!(m.body.len(), 2);
        match &m.body[0].kind {
            StmtKind::Import(names) => {
                assert_eq!(names[0].name, "pandas");
                assert_eq!(names[0].alias.as_deref(), Some("pd"));
            }
            k => panic!("unexpected {k:?}"),
        }
        let StmtKind::Assign { targets, value } = &m.body[1].kind else { panic!() };
        assert!(matches!(&targets[0].kind, ExprKind::Name(n) if n == "df"));
        let ExprKind::Call { func, args, .. } = &value.kind else { panic!() };
        assert_eq!(func.dotted_path().as_deref(), Some("pd.read_csv"));
        assert!(matches!(&args[0].kind, ExprKind::StringLit(s) if s.value == "f.csv"));
    }

    #[test]
    fn invented_name_parses_fine() {
        let b = body("pd.read_exel('data.csv')");
        let StmtKind::Expr(e) = &b[0].kind else { panic!() };
        let ExprKind::Call { func, .. } = &e.kind else { panic!() };
        assert_eq!(func.dotted_path().as_deref(), Some("pd.read_exel"));
    }

    #[test]
    fn malformed_def_is_syntax_error() {
        assert!(matches!(parse("def f(:"), Err(ParseError::Syntax(_))));
    }

    #[test]
    fn unsupported_constructs_are_errors() {
        for src in [
            "class A:\n    pass\n",
            "x = [i for i in y]\n",
            "f = lambda x: x\n",
            "@dec\ndef f():\n    pass\n",
            "x = a if b else c\n",
            "f(*args)\n",
            "s = {1, 2}\n",
            "x: int = 3\n",
        ] {
            assert!(parse(src).is_err(), "{src:?} should be rejected");
        }
    }

    #[test]
    fn comments_attach_to_following_statement() {
        let m = parse("# load\nx = 1  # trailing\n# end\n").unwrap();
        assert_eq!(m.body[0].leading_comments[0].text, "# load");
        assert_eq!(m.body[0].trailing_comment.as_ref().unwrap().text, "# trailing");
        assert_eq!(m.trailing_comments[0].text, "# end");
    }

    #[test]
    fn comment_after_block_attaches_to_outer_statement() {
        let m = parse("def f():\n    x = 1\n    # note\ny = 2\n").unwrap();
        assert_eq!(m.body[1].leading_comments[0].text, "# note");
    }

    #[test]
    fn compound_statements() {
        let src = "for i, v in enumerate(xs):\n    if v > 0 and not done:\n        pass\n    elif v < 0:\n        break\n    else:\n        continue\nwith open('a.json') as f:\n    data = json.load(f)\ntry:\n    r = requests.get(url, timeout=5)\nexcept Exception as e:\n    raise\nfinally:\n    pass\nwhile x:\n    x -= 1\n";
        let m = parse(src).unwrap();
        assert_eq!(m.body.len(), 4);
    }

    #[test]
    fn precedence() {
        let b = body("x = a + b * c ** -d\n");
        let StmtKind::Assign { value, .. } = &b[0].kind else { panic!() };
        let ExprKind::BinOp { op, right, .. } = &value.kind else { panic!() };
        assert_eq!(*op, BinOperator::Add);
        assert!(matches!(right.kind, ExprKind::BinOp { op: BinOperator::Mul, .. }));
    }

    #[test]
    fn subscripts_and_slices() {
        let b = body("y = arr[:, 0]\nz = df['a'][1:3]\n");
        let StmtKind::Assign { value, .. } = &b[0].kind else { panic!() };
        let ExprKind::Subscript { index, .. } = &value.kind else { panic!() };
        assert!(matches!(&index.kind, ExprKind::TupleLit(items) if items.len() == 2));
    }

    #[test]
    fn child_spans_nest() {
        let m = parse("import numpy as np\nresult = np.mean(np.array([1, 2, 3]), axis=0)\n").unwrap();
        m.walk_exprs(&mut |e| {
            for c in e.children() {
                assert!(e.span.contains(&c.span), "{:?} not in {:?}", c.span, e.span);
            }
        });
    }
}
