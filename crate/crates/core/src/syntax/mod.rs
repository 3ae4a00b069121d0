//! Lexing, parsing and canonical unparsing for the supported Python subset.
//!
//! The subset covers what library-usage snippets need: imports, assignments,
//! expression statements, function definitions, `for`/`while`/`if`/`with`/
//! `try` blocks, calls with positional and keyword arguments, attribute
//! chains, subscripts and slices, literals and operators. Anything else is
//! rejected with a [`SyntaxError`] rather than skipped.

mod ast;
mod parser;
mod token;
mod unparse;

pub use ast::*;
pub use parser::{parse, ParseError, SyntaxError};
pub use token::{is_identifier, tokenize, LexError, Span, Token, TokenKind, KEYWORDS};
pub use unparse::{stmt_header, unparse, unparse_expr, unparse_stmt};
