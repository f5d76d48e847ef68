//! Recursive-descent parser for the expression syntax.
//!
//! ```text
//! expr    := union
//! union   := concat ('|' concat)*
//! concat  := term+
//! term    := INT? factor (INT | ':' STRING | '*' | '+' | '?')*
//! factor  := STRING | CLASS | '.' | '(' expr ')'
//! CLASS   := '[' CHAR '-' CHAR ']' ('@' IDENT)?
//! STRING  := "'" chars "'" ('@' IDENT)?
//! ```
//!
//! Whitespace is insignificant outside literals and `#` starts a comment
//! running to the end of the line.

use std::iter::Peekable;
use std::str::Chars;

use thiserror::Error;

use super::ast::{Ast, Atom};
use crate::text::decode_escape;
use crate::types::{OutputString, RangeLabel, Symbol, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("right side of `:` must be a string literal")]
    OutputNotString,
    #[error("empty character class")]
    EmptyClass,
    #[error("character class range is inverted ({lo:?} > {hi:?})")]
    InvertedClass { lo: char, hi: char },
    #[error("{0}")]
    BadLiteral(String),
    #[error("weight literal `{0}` does not fit in 64 bits")]
    WeightRange(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Str(Vec<Symbol>),
    Class(RangeLabel),
    Dot,
    LParen,
    RParen,
    Pipe,
    Star,
    Plus,
    Question,
    Colon,
    Int(i64),
    Annotation(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Str(_) => "string literal".into(),
            Tok::Class(_) => "character class".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Question => "`?`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Int(i) => format!("weight `{i}`"),
            Tok::Annotation(n) => format!("annotation `@{n}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line, column, kind }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.bump() else {
                out.push(Spanned {
                    tok: Tok::Eof,
                    line,
                    column,
                });
                return Ok(out);
            };
            let tok = match c {
                '.' => Tok::Dot,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '|' => Tok::Pipe,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                '?' => Tok::Question,
                ':' => Tok::Colon,
                '\'' => Tok::Str(self.string(line, column)?),
                '[' => Tok::Class(self.class(line, column)?),
                '@' => {
                    let mut name = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            name.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if name.is_empty() {
                        return Err(self.error(
                            line,
                            column,
                            ParseErrorKind::Unexpected("`@` without an alphabet name".into()),
                        ));
                    }
                    Tok::Annotation(name)
                }
                '-' | '0'..='9' => {
                    let mut digits = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if digits == "-" {
                        return Err(self.error(
                            line,
                            column,
                            ParseErrorKind::Unexpected("`-` outside a character class".into()),
                        ));
                    }
                    let value = digits.parse::<i64>().map_err(|_| {
                        self.error(line, column, ParseErrorKind::WeightRange(digits))
                    })?;
                    Tok::Int(value)
                }
                other => {
                    return Err(self.error(
                        line,
                        column,
                        ParseErrorKind::Unexpected(format!("character {other:?}")),
                    ))
                }
            };
            out.push(Spanned { tok, line, column });
        }
    }

    fn escape(&mut self, line: usize, column: usize) -> Result<char, ParseError> {
        let mut consumed = 0;
        let decoded = decode_escape(&mut self.chars.clone().inspect(|_| consumed += 1))
            .map_err(|m| self.error(line, column, ParseErrorKind::BadLiteral(m)))?;
        for _ in 0..consumed {
            self.bump();
        }
        Ok(decoded)
    }

    fn string(&mut self, line: usize, column: usize) -> Result<Vec<Symbol>, ParseError> {
        let mut out = Vec::new();
        loop {
            let (l, c) = (self.line, self.column);
            match self.bump() {
                None => {
                    return Err(self.error(
                        line,
                        column,
                        ParseErrorKind::BadLiteral("unterminated string literal".into()),
                    ))
                }
                Some('\'') => return Ok(out),
                Some('\\') => out.push(Symbol::new(self.escape(l, c)?)),
                Some(ch) => out.push(Symbol::new(ch)),
            }
        }
    }

    fn class_char(&mut self, line: usize, column: usize) -> Result<Option<char>, ParseError> {
        let (l, c) = (self.line, self.column);
        match self.bump() {
            None => Err(self.error(
                line,
                column,
                ParseErrorKind::BadLiteral("unterminated character class".into()),
            )),
            Some('\\') => self.escape(l, c).map(Some),
            Some(']') => Ok(None),
            Some(ch) => Ok(Some(ch)),
        }
    }

    fn class(&mut self, line: usize, column: usize) -> Result<RangeLabel, ParseError> {
        let Some(lo) = self.class_char(line, column)? else {
            return Err(self.error(line, column, ParseErrorKind::EmptyClass));
        };
        let hi = match self.chars.peek() {
            Some(']') => {
                self.bump();
                return Ok(RangeLabel::single(lo));
            }
            Some('-') => {
                self.bump();
                match self.class_char(line, column)? {
                    Some(hi) => hi,
                    None => {
                        return Err(self.error(
                            line,
                            column,
                            ParseErrorKind::BadLiteral("missing upper bound in class".into()),
                        ))
                    }
                }
            }
            _ => {
                return Err(self.error(
                    self.line,
                    self.column,
                    ParseErrorKind::BadLiteral("expected `-` or `]` in class".into()),
                ))
            }
        };
        if self.bump() != Some(']') {
            return Err(self.error(
                line,
                column,
                ParseErrorKind::BadLiteral("expected `]` to close class".into()),
            ));
        }
        RangeLabel::new(lo, hi)
            .map_err(|_| self.error(line, column, ParseErrorKind::InvertedClass { lo, hi }))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            kind: ParseErrorKind::Unexpected(s.tok.describe()),
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.concat()?;
        while *self.peek() == Tok::Pipe {
            self.next();
            lhs = lhs.union(self.concat()?);
        }
        Ok(lhs)
    }

    fn starts_term(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Int(_) | Tok::Str(_) | Tok::Class(_) | Tok::Dot | Tok::LParen
        )
    }

    fn concat(&mut self) -> Result<Ast, ParseError> {
        if !self.starts_term() {
            return Err(self.unexpected());
        }
        let mut lhs = self.term()?;
        while self.starts_term() {
            lhs = lhs.concat(self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let prefix = match *self.peek() {
            Tok::Int(w) => {
                self.next();
                Some(Weight(w))
            }
            _ => None,
        };
        let mut node = self.factor()?;
        loop {
            match self.peek().clone() {
                Tok::Int(w) => {
                    self.next();
                    node = Ast::WeightAfter(Box::new(node), Weight(w));
                }
                Tok::Star => {
                    self.next();
                    node = node.star();
                }
                Tok::Plus => {
                    self.next();
                    node = Ast::Plus(Box::new(node));
                }
                Tok::Question => {
                    self.next();
                    node = Ast::Optional(Box::new(node));
                }
                Tok::Colon => {
                    self.next();
                    let operand = self.next();
                    let Tok::Str(out) = operand.tok else {
                        return Err(ParseError {
                            line: operand.line,
                            column: operand.column,
                            kind: ParseErrorKind::OutputNotString,
                        });
                    };
                    if let Tok::Annotation(_) = self.peek() {
                        return Err(self.unexpected());
                    }
                    node = Ast::Output(Box::new(node), OutputString::from_symbols(out));
                }
                _ => break,
            }
        }
        Ok(match prefix {
            Some(w) => Ast::WeightBefore(w, Box::new(node)),
            None => node,
        })
    }

    fn annotation(&mut self) -> Option<String> {
        match self.peek().clone() {
            Tok::Annotation(name) => {
                self.next();
                Some(name)
            }
            _ => None,
        }
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let tok = self.next();
        match tok.tok {
            Tok::Str(symbols) => {
                let name = self.annotation();
                if symbols.is_empty() && name.is_some() {
                    return Err(ParseError {
                        line: tok.line,
                        column: tok.column,
                        kind: ParseErrorKind::BadLiteral(
                            "the empty string cannot carry an alphabet annotation".into(),
                        ),
                    });
                }
                Ok(Ast::literal(&symbols, name.as_deref()))
            }
            Tok::Class(label) => Ok(Ast::Atom(Atom {
                label,
                alphabet: self.annotation(),
            })),
            Tok::Dot => Ok(Ast::Any),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected());
                }
                self.next();
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }
}

/// Parses an expression into its syntax tree. Sugar nodes are kept; call
/// [`Ast::desugar`] before compiling.
pub fn parse(text: &str) -> Result<Ast, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected());
    }
    Ok(ast)
}
