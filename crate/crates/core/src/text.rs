//! Text formats.
//!
//! Polynomials: rational literals `p` or `p/q`, variables (`x`, `y`,
//! `x1`..`xN`), `+ - * ^` with non-negative integer exponents, and
//! parentheses. Implicit multiplication is rejected: write `2*x`, not `2x`.
//!
//! Operators: one line per coefficient, `q[i] = <polynomial in x>`, or
//! `q[(a1,...,an)] = <polynomial in x1..xn>` for several variables.
//!
//! Measures: one line per atom, `atom <rational or (r1,...,rn)> weight
//! <polynomial in y>`.
//!
//! Blank lines and `#` comments are ignored in the line formats.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::moments::AtomicMeasureFamily;
use crate::poly::{MultiPoly, UniPoly};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::weyl::{MultiWeylOp, WeylOp};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, col)),
            '-' => out.push((Tok::Minus, col)),
            '*' => out.push((Tok::Star, col)),
            '/' => out.push((Tok::Slash, col)),
            '^' => out.push((Tok::Caret, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Int(BigInt::from_str(&s).expect("digits")), col));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    out.push((Tok::End, col0 + chars.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(err(self.line, self.col(), msg))
    }

    fn arity(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?)?;
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    return self.fail("implicit multiplication is not allowed; use `*`")
                }
                Tok::Slash => return self.fail("`/` is only allowed inside rational literals"),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = match self.bump() {
            Tok::Int(n) => n,
            Tok::Minus => return self.fail("negative exponents are not allowed"),
            t => return self.fail(format!("expected exponent, found {}", describe(&t))),
        };
        let e = e
            .to_u32()
            .filter(|&e| e <= 10_000)
            .ok_or_else(|| err(self.line, self.col(), "exponent too large"))?;
        let mut acc = MultiPoly::one(self.arity());
        for _ in 0..e {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let col = self.col();
        match self.bump() {
            Tok::Int(n) => {
                let mut q = Rational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => q /= Rational::from_integer(d),
                        Tok::Int(_) => return Err(err(self.line, col, "zero denominator")),
                        t => {
                            return self.fail(format!("expected denominator, found {}", describe(&t)))
                        }
                    }
                }
                Ok(MultiPoly::constant(self.arity(), q))
            }
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(MultiPoly::var(self.arity(), i)),
                None => Err(err(
                    self.line,
                    col,
                    format!("unknown variable `{name}` (expected one of {})", self.vars.join(", ")),
                )),
            },
            Tok::LParen => {
                let e = self.expr()?;
                match self.bump() {
                    Tok::RParen => Ok(e),
                    t => Err(err(self.line, col, format!("unclosed `(`, found {}", describe(&t)))),
                }
            }
            t => Err(err(self.line, col, format!("expected a term, found {}", describe(&t)))),
        }
    }
}

fn parse_poly_at(text: &str, vars: &[String], line: usize, col0: usize) -> Result<MultiPoly> {
    let toks = lex(text, line, col0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        vars,
    };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        t => p.fail(format!("unexpected {}", describe(t))),
    }
}

/// Parses a polynomial in the given variables (in that order).
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<MultiPoly> {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    parse_poly_at(text, &vars, 1, 1)
}

pub fn parse_unipoly(text: &str, var: &str) -> Result<UniPoly> {
    parse_poly(text, &[var])?.to_uni()
}

fn identifiers(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut cur = String::new();
    for c in text.chars().chain(std::iter::once(' ')) {
        if c.is_ascii_alphanumeric() || c == '_' {
            cur.push(c);
        } else {
            if cur.starts_with(|c: char| c.is_ascii_alphabetic()) && !out.contains(&cur) {
                out.push(cur.clone());
            }
            cur.clear();
        }
    }
    out
}

/// Variable list for a set of polynomial texts: `[x]` when only `x` (or no
/// variable) occurs, `x1..xN` when only indexed variables occur, otherwise
/// the sorted distinct names.
pub fn detect_vars(texts: &[&str]) -> Vec<String> {
    let mut names: Vec<String> = texts.iter().flat_map(|t| identifiers(t)).collect();
    names.sort();
    names.dedup();
    if names.is_empty() || names == ["x"] {
        return vec!["x".into()];
    }
    let indexed: Option<Vec<usize>> = names
        .iter()
        .map(|n| n.strip_prefix('x').and_then(|k| k.parse::<usize>().ok()).filter(|&k| k > 0))
        .collect();
    match indexed {
        Some(ks) => {
            let n = ks.into_iter().max().unwrap_or(1).max(2);
            (1..=n).map(|i| format!("x{i}")).collect()
        }
        None => names,
    }
}

/// Parses a polynomial, inferring its variables with [`detect_vars`].
pub fn parse_poly_auto(text: &str) -> Result<(MultiPoly, Vec<String>)> {
    let vars = detect_vars(&[text]);
    Ok((parse_poly_at(text, &vars, 1, 1)?, vars))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        (!l.trim().is_empty()).then_some((i + 1, l))
    })
}

/// Splits `q[<index>] = <rhs>` into index text and right-hand side, with the
/// column at which the right-hand side starts.
fn split_coeff_line(line: &str, lineno: usize) -> Result<(String, &str, usize)> {
    let trimmed = line.trim_start();
    let indent = line.len() - trimmed.len();
    let Some(rest) = trimmed.strip_prefix("q[") else {
        return Err(err(lineno, indent + 1, "expected `q[...] = ...`"));
    };
    let Some(close) = rest.find(']') else {
        return Err(err(lineno, indent + 3, "missing `]`"));
    };
    let index = rest[..close].trim().to_string();
    let after = &rest[close + 1..];
    let Some(eq) = after.find('=') else {
        return Err(err(lineno, indent + close + 4, "missing `=`"));
    };
    if !after[..eq].trim().is_empty() {
        return Err(err(lineno, indent + close + 4, "expected `=` after `]`"));
    }
    let rhs_start = indent + 2 + close + 1 + eq + 1;
    Ok((index, &line[rhs_start..], rhs_start + 1))
}

/// Parses the univariate operator format.
pub fn parse_weyl(text: &str) -> Result<WeylOp> {
    let vars = vec!["x".to_string()];
    let mut coeffs: Vec<Option<UniPoly>> = Vec::new();
    for (lineno, line) in content_lines(text) {
        let (index, rhs, col) = split_coeff_line(line, lineno)?;
        let i: usize = index
            .parse()
            .map_err(|_| err(lineno, 3, format!("malformed index `{index}`")))?;
        if i > 1_000_000 {
            return Err(err(lineno, 3, "index too large"));
        }
        let q = parse_poly_at(rhs, &vars, lineno, col)?.to_uni()?;
        if coeffs.len() <= i {
            coeffs.resize(i + 1, None);
        }
        if coeffs[i].is_some() {
            return Err(err(lineno, 1, format!("duplicate coefficient q[{i}]")));
        }
        coeffs[i] = Some(q);
    }
    Ok(WeylOp::new(coeffs.into_iter().map(Option::unwrap_or_default).collect()))
}

fn parse_tuple_u32(s: &str, lineno: usize) -> Result<Vec<u32>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| err(lineno, 3, format!("malformed multi-index `{s}`")))?;
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| err(lineno, 3, format!("malformed multi-index `{s}`")))
        })
        .collect()
}

/// Parses the multivariate operator format. Arity comes from the first
/// multi-index; one variable is written `x`, several `x1..xn`.
pub fn parse_multi_weyl(text: &str) -> Result<MultiWeylOp> {
    let mut arity = None;
    let mut terms = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (lineno, line) in content_lines(text) {
        let (index, rhs, col) = split_coeff_line(line, lineno)?;
        let alpha = parse_tuple_u32(&index, lineno)?;
        let n = *arity.get_or_insert(alpha.len());
        if alpha.len() != n {
            return Err(err(
                lineno,
                3,
                format!("multi-index has {} entries, expected {n}", alpha.len()),
            ));
        }
        if !seen.insert(alpha.clone()) {
            return Err(err(lineno, 1, format!("duplicate coefficient q[{index}]")));
        }
        let vars = MultiPoly::default_names(n);
        terms.push((alpha, parse_poly_at(rhs, &vars, lineno, col)?));
    }
    let arity = arity.ok_or_else(|| Error::InvalidInput("empty multivariate operator".into()))?;
    MultiWeylOp::from_terms(arity, terms)
}

/// Either kind of operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedOperator {
    Uni(WeylOp),
    Multi(MultiWeylOp),
}

pub fn parse_operator(text: &str) -> Result<ParsedOperator> {
    let multi = content_lines(text).any(|(_, l)| l.trim_start().starts_with("q[("));
    if multi {
        parse_multi_weyl(text).map(ParsedOperator::Multi)
    } else {
        parse_weyl(text).map(ParsedOperator::Uni)
    }
}

pub fn weyl_to_text(t: &WeylOp) -> String {
    if t.is_zero() {
        return "q[0] = 0\n".into();
    }
    t.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, q)| format!("q[{i}] = {q}\n"))
        .collect()
}

pub fn multi_weyl_to_text(t: &MultiWeylOp) -> String {
    let names = MultiPoly::default_names(t.arity());
    if t.is_zero() {
        let zeros = vec!["0"; t.arity()].join(",");
        return format!("q[({zeros})] = 0\n");
    }
    t.terms()
        .iter()
        .map(|(alpha, q)| {
            let idx: Vec<String> = alpha.iter().map(u32::to_string).collect();
            format!("q[({})] = {}\n", idx.join(","), q.to_text(&names))
        })
        .collect()
}

fn parse_point_at(s: &str, lineno: usize) -> Result<Vec<Rational>> {
    let s = s.trim();
    let wrap = |e: Error| match e {
        Error::InvalidInput(m) => err(lineno, 1, m),
        other => other,
    };
    match s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) => inner.split(',').map(|p| parse_rational(p).map_err(wrap)).collect(),
        None => Ok(vec![parse_rational(s).map_err(wrap)?]),
    }
}

/// A point `r`, `(r1, ..., rn)` or `r1,...,rn`.
pub fn parse_point(s: &str) -> Result<Vec<Rational>> {
    let s = s.trim();
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    inner.split(',').map(parse_rational).collect()
}

/// A multi-index `k`, `(k1, ..., kn)` or `k1,...,kn`.
pub fn parse_multi_index(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("malformed multi-index `{s}`")))
        })
        .collect()
}

/// Parses the measure format.
pub fn parse_measure(text: &str) -> Result<AtomicMeasureFamily> {
    let vars = vec!["y".to_string()];
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for (lineno, line) in content_lines(text) {
        let t = line.trim_start();
        let indent = line.len() - t.len();
        let Some(rest) = t.strip_prefix("atom") else {
            return Err(err(lineno, indent + 1, "expected `atom <point> weight <polynomial>`"));
        };
        let Some(w) = rest.find("weight") else {
            return Err(err(lineno, indent + 5, "missing `weight`"));
        };
        atoms.push(parse_point_at(&rest[..w], lineno)?);
        let col = indent + 4 + w + 6 + 1;
        weights.push(parse_poly_at(&rest[w + 6..], &vars, lineno, col)?.to_uni()?);
    }
    AtomicMeasureFamily::new(atoms, weights)
}

pub fn measure_to_text(m: &AtomicMeasureFamily) -> String {
    m.atoms()
        .iter()
        .zip(m.weights())
        .map(|(a, w)| {
            let pt = if a.len() == 1 {
                fmt_rational(&a[0])
            } else {
                let parts: Vec<String> = a.iter().map(fmt_rational).collect();
                format!("({})", parts.join(", "))
            };
            format!("atom {pt} weight {}\n", w.to_text("y"))
        })
        .collect()
}

/// Whitespace- or comma-separated rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect()
}

pub fn matrix_to_text<T>(m: &[Vec<T>], cell: impl Fn(&T) -> String) -> String {
    m.iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(&cell).collect();
            format!("[{}]\n", cells.join(", "))
        })
        .collect()
}

// serde helpers: rationals and polynomials travel as strings in the grammar

pub fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

pub fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).map_err(serde::de::Error::custom)
}

pub fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rational))
}

pub fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
    let v = Vec::<String>::deserialize(d)?;
    v.iter()
        .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
        .collect()
}

pub fn ser_poly_x<S: Serializer>(p: &UniPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text("x"))
}

pub fn ser_poly_y<S: Serializer>(p: &UniPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text("y"))
}

pub fn de_poly_x<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<UniPoly, D::Error> {
    let s = String::deserialize(d)?;
    parse_unipoly(&s, "x").map_err(serde::de::Error::custom)
}

pub fn ser_polys_x<S: Serializer>(v: &[UniPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_text("x")))
}

pub fn de_polys_x<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<UniPoly>, D::Error> {
    let v = Vec::<String>::deserialize(d)?;
    v.iter()
        .map(|s| parse_unipoly(s, "x").map_err(serde::de::Error::custom))
        .collect()
}
