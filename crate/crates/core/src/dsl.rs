//! Text format for polycyclic presentations (`.pcp` files).
//!
//! ```text
//! document  := statement*
//! statement := "group" NAME ";"
//!            | "gen" NAME ORDER ";"
//!            | "pow" NAME "=" word ";"
//!            | "swap" NAME NAME "=" word ";"
//!            | "tower" "U" ":" NAME+ ("|" "W" ":" NAME+)* ";"
//! word      := "1" | factor+
//! factor    := NAME | NAME "^" INT
//! ```
//!
//! `#` starts a comment running to the end of the line. A swap statement
//! `swap a b = w` means `a b = w` and requires `a` to be declared after `b`.
//! Words must be in normal form: generators strictly increasing in declaration
//! order, exponents in `1..order`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pcgroup::{GroupElement, PcPresentation};

/// 1-based source location; `col_end` is inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}", self.line, self.col_start, self.col_end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    UnknownGenerator,
    DuplicateGenerator,
    BadExponent,
    RuleNotNormalForm,
    Syntax,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::UnknownGenerator => "unknown generator",
            ParseErrorKind::DuplicateGenerator => "duplicate generator",
            ParseErrorKind::BadExponent => "bad exponent",
            ParseErrorKind::RuleNotNormalForm => "rule not in normal form",
            ParseErrorKind::Syntax => "syntax error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{span}: {kind}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

/// Generator names of an iterated semidirect decomposition.
///
/// `abelian` spans the abelian bottom layer; each entry of `complements`
/// adds one complement acting on everything before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub abelian: Vec<String>,
    pub complements: Vec<Vec<String>>,
}

impl fmt::Display for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U: {}", self.abelian.join(" "))?;
        for layer in &self.complements {
            write!(f, " | W: {}", layer.join(" "))?;
        }
        Ok(())
    }
}

/// A presentation with its optional tower annotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcDocument {
    pub presentation: PcPresentation,
    pub tower: Option<TowerSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(src: &str, errors: &mut Vec<ParseError>) -> Vec<Token> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let start = i;
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
                continue;
            } else if c.is_ascii_alphabetic() || c == '_' {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), span: span(ln, start, i) });
                continue;
            } else if c.is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token { tok: Tok::Int(chars[start..i].iter().collect()), span: span(ln, start, i) });
                continue;
            } else if ";=^|:-".contains(c) {
                out.push(Token { tok: Tok::Sym(c), span: span(ln, start, start + 1) });
            } else {
                errors.push(ParseError {
                    span: span(ln, start, start + 1),
                    kind: ParseErrorKind::Syntax,
                    message: format!("unexpected character `{c}`"),
                });
            }
            i += 1;
        }
    }
    out
}

fn span(line: usize, start: usize, end: usize) -> SourceSpan {
    SourceSpan { line: line + 1, col_start: start + 1, col_end: end.max(start + 1) }
}

type Word = Vec<(usize, u32)>;

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    eof: SourceSpan,
    name: Option<String>,
    gens: Vec<String>,
    orders: Vec<u32>,
    powers: Vec<(usize, Word)>,
    swaps: Vec<(usize, usize, Word)>,
    tower: Option<TowerSpec>,
}

type Step<T> = Result<T, ParseError>;

fn err(span: SourceSpan, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
    ParseError { span, kind, message: message.into() }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> SourceSpan {
        self.peek().map_or(self.eof, |t| t.span)
    }

    fn next(&mut self) -> Step<&'a Token> {
        let t =
            self.toks.get(self.pos).ok_or_else(|| err(self.eof, ParseErrorKind::Syntax, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn ident(&mut self, what: &str) -> Step<(String, SourceSpan)> {
        let t = self.next()?;
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.span)),
            _ => Err(err(t.span, ParseErrorKind::Syntax, format!("expected {what}"))),
        }
    }

    fn sym(&mut self, c: char) -> Step<()> {
        let t = self.next()?;
        match t.tok {
            Tok::Sym(s) if s == c => Ok(()),
            _ => Err(err(t.span, ParseErrorKind::Syntax, format!("expected `{c}`"))),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn generator(&mut self) -> Step<(usize, SourceSpan)> {
        let (name, sp) = self.ident("generator name")?;
        let idx = self
            .gens
            .iter()
            .position(|g| *g == name)
            .ok_or_else(|| err(sp, ParseErrorKind::UnknownGenerator, format!("`{name}` is not declared")))?;
        Ok((idx, sp))
    }

    /// A positive integer; zero, negative or oversized values are bad exponents.
    fn exponent(&mut self) -> Step<(u32, SourceSpan)> {
        if self.at_sym('-') {
            let minus = self.next()?.span;
            let end = match self.peek() {
                Some(t) if t.span.line == minus.line && matches!(t.tok, Tok::Int(_)) => {
                    self.pos += 1;
                    t.span.col_end
                }
                _ => minus.col_end,
            };
            return Err(err(
                SourceSpan { col_end: end, ..minus },
                ParseErrorKind::BadExponent,
                "negative exponents are not allowed",
            ));
        }
        let t = self.next()?;
        let Tok::Int(s) = &t.tok else {
            return Err(err(t.span, ParseErrorKind::Syntax, "expected an integer"));
        };
        match s.parse::<u32>() {
            Ok(0) => Err(err(t.span, ParseErrorKind::BadExponent, "exponent must be positive")),
            Ok(v) => Ok((v, t.span)),
            Err(_) => Err(err(t.span, ParseErrorKind::BadExponent, format!("`{s}` is too large"))),
        }
    }

    fn word(&mut self) -> Step<Word> {
        if let Some(Token { tok: Tok::Int(s), span }) = self.peek() {
            if s == "1" {
                self.pos += 1;
                return Ok(Vec::new());
            }
            return Err(err(*span, ParseErrorKind::Syntax, "expected `1` or a product of generators"));
        }
        let mut word: Word = Vec::new();
        while !self.at_sym(';') {
            let (g, sp) = self.generator()?;
            let mut e = 1;
            if self.at_sym('^') {
                self.pos += 1;
                let (v, esp) = self.exponent()?;
                if v >= self.orders[g] {
                    return Err(err(
                        esp,
                        ParseErrorKind::RuleNotNormalForm,
                        format!("exponent {v} of `{}` must be below {}", self.gens[g], self.orders[g]),
                    ));
                }
                e = v;
            }
            if let Some(&(prev, _)) = word.last() {
                if g <= prev {
                    return Err(err(
                        sp,
                        ParseErrorKind::RuleNotNormalForm,
                        format!("`{}` must come after `{}` in a normal-form word", self.gens[g], self.gens[prev]),
                    ));
                }
            }
            word.push((g, e));
        }
        if word.is_empty() {
            return Err(err(self.here(), ParseErrorKind::Syntax, "empty word; write `1` for the identity"));
        }
        Ok(word)
    }

    fn statement(&mut self) -> Step<()> {
        let (kw, kw_span) = self.ident("a statement keyword")?;
        match kw.as_str() {
            "group" => {
                let (name, _) = self.ident("group name")?;
                self.name = Some(name);
            }
            "gen" => {
                let (name, sp) = self.ident("generator name")?;
                if self.gens.contains(&name) {
                    return Err(err(sp, ParseErrorKind::DuplicateGenerator, format!("`{name}` is already declared")));
                }
                let t = self.next()?;
                let order = match &t.tok {
                    Tok::Int(s) => s.parse::<u32>().ok().filter(|&n| n >= 2).ok_or_else(|| {
                        err(t.span, ParseErrorKind::BadExponent, "relative order must be an integer of at least 2")
                    })?,
                    Tok::Sym('-') => {
                        return Err(err(t.span, ParseErrorKind::BadExponent, "relative order must be positive"))
                    }
                    _ => return Err(err(t.span, ParseErrorKind::Syntax, "expected a relative order")),
                };
                self.gens.push(name);
                self.orders.push(order);
            }
            "pow" => {
                let (g, sp) = self.generator()?;
                self.sym('=')?;
                let w = self.word()?;
                if self.powers.iter().any(|(h, _)| *h == g) {
                    return Err(err(sp, ParseErrorKind::Syntax, format!("power rule for `{}` repeated", self.gens[g])));
                }
                self.powers.push((g, w));
            }
            "swap" => {
                let (j, sj) = self.generator()?;
                let (i, si) = self.generator()?;
                if j <= i {
                    return Err(err(
                        SourceSpan { col_end: if si.line == sj.line { si.col_end } else { sj.col_end }, ..sj },
                        ParseErrorKind::Syntax,
                        format!("`{}` must be declared after `{}`", self.gens[j], self.gens[i]),
                    ));
                }
                self.sym('=')?;
                let w = self.word()?;
                if self.swaps.iter().any(|(a, b, _)| (*a, *b) == (j, i)) {
                    return Err(err(sj, ParseErrorKind::Syntax, "swap rule repeated"));
                }
                self.swaps.push((j, i, w));
            }
            "tower" => {
                let tower = self.tower_body()?;
                if self.tower.replace(tower).is_some() {
                    return Err(err(kw_span, ParseErrorKind::Syntax, "tower declared twice"));
                }
            }
            other => return Err(err(kw_span, ParseErrorKind::Syntax, format!("unknown statement `{other}`"))),
        }
        if !self.at_sym(';') {
            return Err(err(self.here(), ParseErrorKind::Syntax, "expected `;`"));
        }
        self.pos += 1;
        Ok(())
    }

    fn layer(&mut self, label: &str) -> Step<Vec<String>> {
        let (l, sp) = self.ident("layer label")?;
        if l != label {
            return Err(err(sp, ParseErrorKind::Syntax, format!("expected layer `{label}`")));
        }
        self.sym(':')?;
        let mut names = Vec::new();
        while self.peek().is_some() && !self.at_sym('|') && !self.at_sym(';') {
            let (g, _) = self.generator()?;
            names.push(self.gens[g].clone());
        }
        if names.is_empty() {
            return Err(err(self.here(), ParseErrorKind::Syntax, "empty tower layer"));
        }
        Ok(names)
    }

    fn tower_body(&mut self) -> Step<TowerSpec> {
        let abelian = self.layer("U")?;
        let mut complements = Vec::new();
        while self.at_sym('|') {
            self.pos += 1;
            complements.push(self.layer("W")?);
        }
        Ok(TowerSpec { abelian, complements })
    }

    fn recover(&mut self) {
        while let Some(t) = self.peek() {
            self.pos += 1;
            if t.tok == Tok::Sym(';') {
                break;
            }
        }
    }

    fn finish(self) -> PcDocument {
        let mut p = PcPresentation::new(self.name.unwrap_or_else(|| "group".to_string()));
        for (g, &n) in self.gens.iter().zip(&self.orders) {
            p.add_generator(g.clone(), n).expect("validated while parsing");
        }
        let element = |w: &Word| {
            let mut v = vec![0; self.gens.len()];
            for &(g, e) in w {
                v[g] = e;
            }
            GroupElement::new(v)
        };
        for (g, w) in &self.powers {
            p.set_power_rule(*g, element(w)).expect("validated while parsing");
        }
        for (j, i, w) in &self.swaps {
            p.set_swap_rule(*j, *i, element(w)).expect("validated while parsing");
        }
        PcDocument { presentation: p, tower: self.tower }
    }
}

fn end_span(src: &str) -> SourceSpan {
    let lines: Vec<&str> = src.lines().collect();
    let line = lines.len().max(1);
    let col = lines.last().map_or(0, |l| l.chars().count()) + 1;
    SourceSpan { line, col_start: col, col_end: col }
}

/// Parses a document; every statement is attempted and all errors are returned.
pub fn parse_document(src: &str) -> Result<PcDocument, Vec<ParseError>> {
    let mut errors = Vec::new();
    let toks = lex(src, &mut errors);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        eof: end_span(src),
        name: None,
        gens: Vec::new(),
        orders: Vec::new(),
        powers: Vec::new(),
        swaps: Vec::new(),
        tower: None,
    };
    while p.peek().is_some() {
        if let Err(e) = p.statement() {
            errors.push(e);
            p.recover();
        }
    }
    if errors.is_empty() {
        Ok(p.finish())
    } else {
        errors.sort_by_key(|e| (e.span.line, e.span.col_start));
        Err(errors)
    }
}

/// Parses a presentation, ignoring any tower annotation.
pub fn parse(src: &str) -> Result<PcPresentation, Vec<ParseError>> {
    parse_document(src).map(|d| d.presentation)
}

/// Parses a bare tower such as `U: x1 x2 | W: w` against known generators.
pub fn parse_tower(spec: &str, presentation: &PcPresentation) -> Result<TowerSpec, Vec<ParseError>> {
    let mut errors = Vec::new();
    let toks = lex(spec, &mut errors);
    if !errors.is_empty() {
        return Err(errors);
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        eof: end_span(spec),
        name: None,
        gens: presentation.generators().to_vec(),
        orders: presentation.relative_orders().to_vec(),
        powers: Vec::new(),
        swaps: Vec::new(),
        tower: None,
    };
    let tower = p.tower_body().map_err(|e| vec![e])?;
    if p.at_sym(';') {
        p.pos += 1;
    }
    match p.peek() {
        Some(t) => Err(vec![err(t.span, ParseErrorKind::Syntax, "trailing input after tower")]),
        None => Ok(tower),
    }
}

fn render_word(p: &PcPresentation, w: &GroupElement) -> String {
    if w.is_identity() {
        return "1".to_string();
    }
    let gens = p.generators();
    w.syllables()
        .map(|(g, e)| if e == 1 { gens[g].clone() } else { format!("{}^{e}", gens[g]) })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical text: one statement per line, rules ordered by generator indices.
pub fn render(p: &PcPresentation) -> String {
    let mut out = format!("group {};\n", p.name());
    for (g, n) in p.generators().iter().zip(p.relative_orders()) {
        out.push_str(&format!("gen {g} {n};\n"));
    }
    let gens = p.generators();
    for (&g, w) in p.power_rules() {
        out.push_str(&format!("pow {} = {};\n", gens[g], render_word(p, w)));
    }
    for (&(j, i), w) in p.swap_rules() {
        out.push_str(&format!("swap {} {} = {};\n", gens[j], gens[i], render_word(p, w)));
    }
    out
}

pub fn render_document(doc: &PcDocument) -> String {
    let mut out = render(&doc.presentation);
    if let Some(t) = &doc.tower {
        out.push_str(&format!("tower {t};\n"));
    }
    out
}
