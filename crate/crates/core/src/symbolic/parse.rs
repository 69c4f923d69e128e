//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' integer)? | '-' factor
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Opaque function names may carry trailing primes (`a''(t)`) to denote
//! formal derivatives. The exponent integer may be negative (`x^-2`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::Num;
use thiserror::Error;

use super::expr::{Chart, Expr, Func, Rational};

/// Names an expression may refer to.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    pub coordinates: Vec<String>,
    pub params: Vec<String>,
    pub functions: Vec<String>,
}

impl SymbolTable {
    pub fn new(chart: &Chart, params: &[String], functions: &[String]) -> Self {
        SymbolTable {
            coordinates: chart.names().to_vec(),
            params: params.to_vec(),
            functions: functions.to_vec(),
        }
    }

    fn is_symbol(&self, name: &str) -> bool {
        self.coordinates.iter().chain(&self.params).any(|s| s == name)
    }

    fn is_function(&self, name: &str) -> bool {
        self.functions.iter().any(|s| s == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    UnknownSymbol(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => write!(
                f,
                "syntax error at position {}: expected {}, found {}",
                self.position,
                expected.join(" or "),
                found
            ),
            ParseErrorKind::UnknownSymbol(name) => {
                write!(f, "unknown symbol `{}` at position {}", name, self.position)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(Rational, bool),
    Ident(String, u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(..) => "number".into(),
            Token::Ident(name, _) => format!("identifier `{name}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn syntax(position: usize, expected: &[&str], found: String) -> ParseError {
    ParseError {
        position,
        kind: ParseErrorKind::Syntax {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        },
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let int_part = &text[start..i];
            let mut is_integer = true;
            let value = if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let frac_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac_start {
                    return Err(syntax(i, &["digit"], describe_char(text, i)));
                }
                is_integer = false;
                let frac = &text[frac_start..i];
                let digits = BigInt::from_str_radix(&format!("{int_part}{frac}"), 10).unwrap();
                let scale = num_traits::pow::Pow::pow(BigInt::from(10), frac.len() as u32);
                Rational::new(digits, scale)
            } else {
                Rational::from_integer(BigInt::from_str_radix(int_part, 10).unwrap())
            };
            out.push((Token::Number(value, is_integer), start));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = text[start..i].to_string();
            let mut primes = 0;
            while i < bytes.len() && bytes[i] == b'\'' {
                primes += 1;
                i += 1;
            }
            out.push((Token::Ident(name, primes), start));
            continue;
        }
        return Err(syntax(
            start,
            &["number", "identifier", "operator", "parenthesis"],
            describe_char(text, start),
        ));
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

fn describe_char(text: &str, at: usize) -> String {
    match text[at..].chars().next() {
        Some(c) => format!("`{c}`"),
        None => "end of input".into(),
    }
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    table: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        syntax(self.offset(), expected, self.peek().describe())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Token::Minus => {
                    self.bump();
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    factors.push(self.factor()?);
                }
                Token::Slash => {
                    self.bump();
                    factors.push(self.factor()?.recip());
                }
                _ => break,
            }
        }
        Ok(Expr::product(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Token::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        match self.bump() {
            Token::Number(value, true) => {
                let n: i64 = value
                    .to_integer()
                    .try_into()
                    .map_err(|_| syntax(at, &["integer exponent"], "oversized integer".into()))?;
                Ok(base.pow(if negative { -n } else { n }))
            }
            other => Err(syntax(at, &["integer exponent"], other.describe())),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Token::Number(value, _) => {
                self.bump();
                Ok(Expr::Num(value))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Token::RParen {
                    return Err(self.unexpected(&["`)`", "operator"]));
                }
                self.bump();
                Ok(inner)
            }
            Token::Ident(name, primes) => {
                self.bump();
                if *self.peek() == Token::LParen {
                    self.bump();
                    let arg = self.expr()?;
                    if *self.peek() != Token::RParen {
                        return Err(self.unexpected(&["`)`", "operator"]));
                    }
                    self.bump();
                    if primes == 0 {
                        if let Some(f) = Func::from_name(&name) {
                            return Ok(Expr::func(f, arg));
                        }
                    }
                    if self.table.is_function(&name) {
                        return Ok(Expr::Apply {
                            name,
                            order: primes,
                            arg: Box::new(arg),
                        });
                    }
                    return Err(ParseError {
                        position: at,
                        kind: ParseErrorKind::UnknownSymbol(name),
                    });
                }
                if primes == 0 && self.table.is_symbol(&name) {
                    Ok(Expr::Sym(name))
                } else {
                    Err(ParseError {
                        position: at,
                        kind: ParseErrorKind::UnknownSymbol(name),
                    })
                }
            }
            _ => Err(self.unexpected(&["number", "identifier", "`(`", "`-`"])),
        }
    }
}

/// Parse against an explicit symbol table.
pub fn parse_with(text: &str, table: &SymbolTable) -> Result<Expr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        table,
    };
    let e = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected(&["`+`", "`-`", "`*`", "`/`", "end of input"]));
    }
    Ok(e)
}

/// Parse an expression over `chart` coordinates and free parameters.
pub fn parse_expr(text: &str, chart: &Chart, params: &[&str]) -> Result<Expr, ParseError> {
    let table = SymbolTable {
        coordinates: chart.names().to_vec(),
        params: params.iter().map(|s| s.to_string()).collect(),
        functions: Vec::new(),
    };
    parse_with(text, &table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(&["t", "x", "y"]).unwrap()
    }

    #[test]
    fn precedence() {
        let c = Chart::new(&["a", "b", "c"]).unwrap();
        let e = parse_expr("a + b*c", &c, &[]).unwrap();
        assert_eq!(
            e,
            Expr::Add(vec![
                Expr::sym("a"),
                Expr::Mul(vec![Expr::sym("b"), Expr::sym("c")])
            ])
        );
    }

    #[test]
    fn power_and_function_call() {
        let e = parse_expr("x^2 + sin(t)", &chart(), &[]).unwrap();
        assert_eq!(e, Expr::Add(vec![Expr::sym("x").pow(2), Expr::sym("t").sin()]));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse_expr("-x^2", &chart(), &[]).unwrap();
        assert_eq!(e, -(Expr::sym("x").pow(2)));
    }

    #[test]
    fn incomplete_input_reports_end() {
        let err = parse_expr("x +", &chart(), &[]).unwrap_err();
        assert_eq!(err.position, 3);
        match err.kind {
            ParseErrorKind::Syntax { found, .. } => assert_eq!(found, "end of input"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_symbol() {
        let err = parse_expr("x + q", &chart(), &[]).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSymbol("q".into()));
        assert_eq!(err.position, 4);
        assert!(parse_expr("x + q", &chart(), &["q"]).is_ok());
    }

    #[test]
    fn decimals_are_exact() {
        let e = parse_expr("0.25", &chart(), &[]).unwrap();
        assert_eq!(e, Expr::rational(1, 4));
    }

    #[test]
    fn opaque_functions_and_primes() {
        let table = SymbolTable {
            coordinates: vec!["t".into()],
            params: vec![],
            functions: vec!["a".into()],
        };
        let e = parse_with("a''(t)", &table).unwrap();
        assert_eq!(
            e,
            Expr::Apply {
                name: "a".into(),
                order: 2,
                arg: Box::new(Expr::sym("t"))
            }
        );
        assert!(parse_with("b(t)", &table).is_err());
    }

    #[test]
    fn double_power_is_rejected() {
        assert!(parse_expr("x^2^3", &chart(), &[]).is_err());
        assert!(parse_expr("x^y", &chart(), &[]).is_err());
        assert!(parse_expr("(x", &chart(), &[]).is_err());
    }
}
