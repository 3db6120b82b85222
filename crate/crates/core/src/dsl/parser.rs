//! Lexer and recursive-descent parser for `.kt-op` documents.
//!
//! ```text
//! doc      := "base" INT ("field" IDENT)+ "operator" IDENT "{" eq* "}" stage*
//! stage    := "stage" INT "{" ("correction"? eq)* "}"
//! eq       := IDENT "=" expr
//! expr     := "-"? term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := atom ("^" INT)?
//! atom     := INT ("/" INT)? | x<INT> | IDENT | "(" expr ")"
//!           | "d" "(" INT "," expr ")" | "jet" "(" IDENT "," dirs ")"
//!           | "c" "{" "-"? INT "," INT "}" | "jet_c" "(" "-"? INT "," INT "," dirs ")"
//! dirs     := "[" INT ("," INT)* "]" | "[" "]"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::ast::{Equation, Expr, Ident, SpecAst, Span, StageBlock, StageItem};
use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigUint),
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::Slash => "/",
            _ => "",
        }
    }
}

const KEYWORDS: [&str; 8] = ["base", "field", "operator", "stage", "correction", "d", "jet", "jet_c"];

/// Names that cannot be used for fields or equations.
pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || name == "c" || base_index(name).is_some()
}

fn base_index(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(text.parse().expect("digits")), span));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(text), span));
            continue;
        }
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            other => {
                return Err(DslError::Parse {
                    span,
                    found: format!("character `{other}`"),
                    expected: vec!["a token".into()],
                })
            }
        };
        out.push((tok, span));
        i += 1;
        col += 1;
    }
    out.push((Tok::Eof, Span::new(line, col)));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        Err(DslError::Parse {
            span: self.span(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, DslError> {
        if self.is_keyword(kw) {
            Ok(self.bump().1)
        } else {
            self.error(&[&format!("`{kw}`")])
        }
    }

    fn symbol(&mut self, t: Tok) -> Result<Span, DslError> {
        if *self.peek() == t {
            Ok(self.bump().1)
        } else {
            self.error(&[&format!("`{}`", t.symbol())])
        }
    }

    fn int(&mut self) -> Result<(BigUint, Span), DslError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let s = self.bump().1;
                Ok((n, s))
            }
            _ => self.error(&["integer"]),
        }
    }

    fn small_int(&mut self) -> Result<(u32, Span), DslError> {
        let (n, span) = self.int()?;
        match n.to_u32() {
            Some(v) => Ok((v, span)),
            None => Err(DslError::Semantic {
                span,
                message: format!("integer {n} is too large"),
            }),
        }
    }

    fn signed_int(&mut self) -> Result<(i64, Span), DslError> {
        let neg = *self.peek() == Tok::Minus;
        let start = self.span();
        if neg {
            self.bump();
        }
        let (v, _) = self.small_int()?;
        Ok((if neg { -(v as i64) } else { v as i64 }, start))
    }

    /// A user-chosen name: an identifier that is not reserved.
    fn name(&mut self, what: &str) -> Result<Ident, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                let span = self.bump().1;
                Ok(Ident { name: s, span })
            }
            Tok::Ident(s) => Err(DslError::Semantic {
                span: self.span(),
                message: format!("`{s}` is reserved and cannot name a {what}"),
            }),
            _ => self.error(&[what]),
        }
    }

    fn document(&mut self) -> Result<SpecAst, DslError> {
        self.keyword("base")?;
        let (base, _) = self.small_int()?;
        let mut fields = Vec::new();
        while self.is_keyword("field") {
            self.bump();
            fields.push(self.name("field name")?);
        }
        if fields.is_empty() {
            return self.error(&["`field`"]);
        }
        if !self.is_keyword("operator") {
            return self.error(&["`field`", "`operator`"]);
        }
        self.bump();
        let operator = self.name("operator name")?;
        self.symbol(Tok::LBrace)?;
        let mut equations = Vec::new();
        while *self.peek() != Tok::RBrace {
            if !matches!(self.peek(), Tok::Ident(_)) {
                return self.error(&["equation name", "`}`"]);
            }
            equations.push(self.equation()?);
        }
        self.bump();
        let mut stages = Vec::new();
        while *self.peek() != Tok::Eof {
            if !self.is_keyword("stage") {
                return self.error(&["`stage`", "end of input"]);
            }
            stages.push(self.stage()?);
        }
        Ok(SpecAst {
            base,
            fields,
            operator,
            equations,
            stages,
        })
    }

    fn stage(&mut self) -> Result<StageBlock, DslError> {
        let span = self.keyword("stage")?;
        let (stage, _) = self.small_int()?;
        self.symbol(Tok::LBrace)?;
        let mut items = Vec::new();
        while *self.peek() != Tok::RBrace {
            if self.is_keyword("correction") {
                self.bump();
                items.push(StageItem::Correction(self.equation()?));
            } else if matches!(self.peek(), Tok::Ident(_)) {
                items.push(StageItem::Operator(self.equation()?));
            } else {
                return self.error(&["operator name", "`correction`", "`}`"]);
            }
        }
        self.bump();
        Ok(StageBlock { stage, items, span })
    }

    fn equation(&mut self) -> Result<Equation, DslError> {
        let name = self.name("equation name")?;
        self.symbol(Tok::Eq)?;
        let expr = self.expr()?;
        Ok(Equation {
            name: name.name,
            expr,
            span: name.span,
        })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut acc = if *self.peek() == Tok::Minus {
            let span = self.bump().1;
            Expr::Neg(Box::new(self.term()?), span)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    let span = self.bump().1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?), span);
                }
                Tok::Minus => {
                    let span = self.bump().1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?), span);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            let span = self.bump().1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?), span);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        let a = self.atom()?;
        if *self.peek() == Tok::Caret {
            let span = self.bump().1;
            let (k, _) = self.small_int()?;
            return Ok(Expr::Pow(Box::new(a), k, span));
        }
        Ok(a)
    }

    fn directions(&mut self) -> Result<Vec<u32>, DslError> {
        self.symbol(Tok::LBracket)?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RBracket {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.small_int()?.0);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.error(&["`,`", "`]`"]),
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(num) => {
                self.bump();
                let den = if *self.peek() == Tok::Slash {
                    self.bump();
                    let (d, dspan) = self.int()?;
                    if d == BigUint::from(0u32) {
                        return Err(DslError::Semantic {
                            span: dspan,
                            message: "zero denominator".into(),
                        });
                    }
                    Some(d)
                } else {
                    None
                };
                Ok(Expr::Num { num, den, span })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.symbol(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(index) = base_index(&name) {
                    return Ok(Expr::Base { index, span });
                }
                match name.as_str() {
                    "d" => {
                        self.symbol(Tok::LParen)?;
                        let (direction, _) = self.small_int()?;
                        self.symbol(Tok::Comma)?;
                        let e = self.expr()?;
                        self.symbol(Tok::RParen)?;
                        Ok(Expr::Deriv {
                            direction,
                            expr: Box::new(e),
                            span,
                        })
                    }
                    "jet" => {
                        self.symbol(Tok::LParen)?;
                        let field = self.name("field name")?;
                        self.symbol(Tok::Comma)?;
                        let directions = self.directions()?;
                        self.symbol(Tok::RParen)?;
                        Ok(Expr::Jet {
                            field: field.name,
                            directions,
                            span,
                        })
                    }
                    "c" => {
                        self.symbol(Tok::LBrace)?;
                        let (stage, _) = self.signed_int()?;
                        self.symbol(Tok::Comma)?;
                        let (r, _) = self.small_int()?;
                        self.symbol(Tok::RBrace)?;
                        Ok(Expr::Antifield { stage, r, span })
                    }
                    "jet_c" => {
                        self.symbol(Tok::LParen)?;
                        let (stage, _) = self.signed_int()?;
                        self.symbol(Tok::Comma)?;
                        let (r, _) = self.small_int()?;
                        self.symbol(Tok::Comma)?;
                        let directions = self.directions()?;
                        self.symbol(Tok::RParen)?;
                        Ok(Expr::JetAntifield {
                            stage,
                            r,
                            directions,
                            span,
                        })
                    }
                    kw if KEYWORDS.contains(&kw) => Err(DslError::Parse {
                        span,
                        found: format!("keyword `{kw}`"),
                        expected: vec!["expression".into()],
                    }),
                    _ => Ok(Expr::Field { name, span }),
                }
            }
            _ => self.error(&["number", "identifier", "`(`"]),
        }
    }
}

/// Parses a `.kt-op` document.
pub fn parse(src: &str) -> Result<SpecAst, DslError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    p.document()
}
