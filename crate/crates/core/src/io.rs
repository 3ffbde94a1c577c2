//! Line-oriented text documents for algebras, extending data, module actions,
//! cocycles and `D` matrices, with canonical serializers.
//!
//! ```text
//! # M4
//! field gf 5
//! dim 4
//! basis e1 e2 e3 e4
//! [e1,e2] = e2
//! [e2,e3] = e4
//! space V { basis v }
//! tl e2 v = e4
//! tr e1 v = v
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{default_names, MalcevAlgebra};
use crate::bilinear::{BilinearMap, SkewMap};
use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Vector};
use crate::reps::{Cocycle, ModuleAction};
use crate::unified::ExtendingDatum;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown basis name {0}")]
    UnknownBasisName(String),
    #[error("pair ({0},{1}) given more than once")]
    DuplicatePair(String, String),
    #[error("characteristic {0} is not supported")]
    BadFieldChar(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0}")]
    WrongCodomain(String),
    #[error("{0}")]
    WrongDomain(String),
    #[error("{0}")]
    Invalid(String),
}

pub type ParseResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

impl Pos {
    fn err<T>(self, kind: ParseErrorKind) -> ParseResult<T> {
        Err(ParseError { line: self.line, col: self.col, kind })
    }
}

fn syntax<T>(pos: Pos, msg: impl Into<String>) -> ParseResult<T> {
    pos.err(ParseErrorKind::Syntax(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
}

fn lex(line: &str, lineno: usize) -> ParseResult<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line: lineno, col: i + 1 };
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].is_alphabetic() || chars[i] == '_') {
                return syntax(Pos { line: lineno, col: i + 1 }, "expected '*' between coefficient and name");
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if "[],=+-*/{}".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return syntax(pos, format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Name {
    s: String,
    pos: Pos,
}

/// `Σ (num/den) * name`; an empty list is `0`.
#[derive(Clone, Debug)]
struct Comb {
    terms: Vec<(BigInt, BigInt, Pos, Name)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Bracket,
    Tl,
    Tr,
    Omega,
    Bv,
    Cocycle,
    D,
}

impl Section {
    fn keyword(self) -> &'static str {
        match self {
            Section::Bracket => "[x,y]",
            Section::Tl => "tl",
            Section::Tr => "tr",
            Section::Omega => "omega",
            Section::Bv => "bv",
            Section::Cocycle => "cocycle",
            Section::D => "D",
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    section: Section,
    args: Vec<Name>,
    comb: Comb,
    pos: Pos,
}

#[derive(Default, Debug)]
struct Doc {
    field: Option<(Field, Pos)>,
    dim: Option<(usize, Pos)>,
    basis: Option<(Vec<Name>, Pos)>,
    space: Option<(Vec<Name>, Pos)>,
    entries: Vec<Entry>,
}

struct Cursor {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    end: Pos,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.1)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.i).cloned();
        self.i += 1;
        t
    }

    fn sym(&mut self, c: char) -> ParseResult<Pos> {
        match self.next() {
            Some((Tok::Sym(d), p)) if d == c => Ok(p),
            Some((_, p)) => syntax(p, format!("expected '{c}'")),
            None => syntax(self.end, format!("expected '{c}'")),
        }
    }

    fn name(&mut self) -> ParseResult<Name> {
        match self.next() {
            Some((Tok::Ident(s), pos)) => Ok(Name { s, pos }),
            Some((_, p)) => syntax(p, "expected a basis name"),
            None => syntax(self.end, "expected a basis name"),
        }
    }

    fn number(&mut self) -> ParseResult<(u64, Pos)> {
        match self.next() {
            Some((Tok::Num(s), p)) => match s.parse() {
                Ok(n) => Ok((n, p)),
                Err(_) => syntax(p, "number too large"),
            },
            Some((_, p)) => syntax(p, "expected a number"),
            None => syntax(self.end, "expected a number"),
        }
    }

    fn done(&self) -> ParseResult<()> {
        match self.toks.get(self.i) {
            None => Ok(()),
            Some((_, p)) => syntax(*p, "unexpected trailing input"),
        }
    }

    /// Names up to a closing `}` or the end of the line.
    fn names(&mut self) -> ParseResult<Vec<Name>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) => out.push(self.name()?),
                Some(Tok::Sym('}')) | None => return Ok(out),
                _ => return syntax(self.pos(), "expected a basis name"),
            }
        }
    }

    fn comb(&mut self) -> ParseResult<Comb> {
        let mut terms = Vec::new();
        if let Some(Tok::Num(s)) = self.peek() {
            if s.chars().all(|c| c == '0') && self.toks.len() == self.i + 1 {
                self.i += 1;
                return Ok(Comb { terms });
            }
        }
        let mut first = true;
        loop {
            let mut neg = false;
            match self.peek() {
                Some(Tok::Sym('+')) if !first => {
                    self.i += 1;
                }
                Some(Tok::Sym('-')) => {
                    self.i += 1;
                    neg = true;
                }
                None if first => return syntax(self.end, "expected a linear combination"),
                _ if !first => return syntax(self.pos(), "expected '+' or '-'"),
                _ => {}
            }
            first = false;
            let cpos = self.pos();
            let (mut num, den) = match self.peek() {
                Some(Tok::Num(_)) => {
                    let Some((Tok::Num(n), _)) = self.next() else { unreachable!() };
                    let num = BigInt::from_str(&n).expect("digits");
                    let den = if self.peek() == Some(&Tok::Sym('/')) {
                        self.i += 1;
                        match self.next() {
                            Some((Tok::Num(d), _)) => BigInt::from_str(&d).expect("digits"),
                            Some((_, p)) => return syntax(p, "expected a denominator"),
                            None => return syntax(self.end, "expected a denominator"),
                        }
                    } else {
                        BigInt::one()
                    };
                    self.sym('*')?;
                    (num, den)
                }
                _ => (BigInt::one(), BigInt::one()),
            };
            if den == BigInt::from(0) {
                return syntax(cpos, "zero denominator");
            }
            if neg {
                num = -num;
            }
            let name = self.name()?;
            terms.push((num, den, cpos, name));
            if self.peek().is_none() {
                return Ok(Comb { terms });
            }
        }
    }
}

fn parse_doc(text: &str) -> ParseResult<Doc> {
    let mut doc = Doc::default();
    let mut open_space: Option<(Pos, Vec<Name>, bool)> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = lex(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let end = Pos { line: lineno, col: line.chars().count() + 1 };
        let mut c = Cursor { toks, i: 0, end };
        let start = c.pos();
        if let Some((spos, names, has_basis)) = open_space.as_mut() {
            match c.next() {
                Some((Tok::Ident(k), p)) if k == "basis" => {
                    if *has_basis {
                        return syntax(p, "space basis given twice");
                    }
                    *has_basis = true;
                    *names = c.names()?;
                    if c.peek() == Some(&Tok::Sym('}')) {
                        c.i += 1;
                        c.done()?;
                        doc.space = Some((std::mem::take(names), *spos));
                        open_space = None;
                    }
                }
                Some((Tok::Sym('}'), _)) => {
                    c.done()?;
                    doc.space = Some((std::mem::take(names), *spos));
                    open_space = None;
                }
                _ => return syntax(start, "expected 'basis' or '}' inside the space block"),
            }
            continue;
        }
        match c.next().expect("nonempty") {
            (Tok::Ident(k), p) if k == "field" => {
                if doc.field.is_some() {
                    return syntax(p, "field declared twice");
                }
                let f = match c.next() {
                    Some((Tok::Ident(w), _)) if w == "rational" => Field::Rational,
                    Some((Tok::Ident(w), _)) if w == "gf" => {
                        let (q, qp) = c.number()?;
                        match Field::prime(q) {
                            Ok(f) => f,
                            Err(Error::BadFieldChar(q)) => return qp.err(ParseErrorKind::BadFieldChar(q)),
                            Err(_) => return qp.err(ParseErrorKind::NotPrime(q)),
                        }
                    }
                    Some((_, wp)) => return syntax(wp, "expected 'rational' or 'gf <p>'"),
                    None => return syntax(end, "expected 'rational' or 'gf <p>'"),
                };
                c.done()?;
                doc.field = Some((f, p));
            }
            (Tok::Ident(k), p) if k == "dim" => {
                if doc.dim.is_some() {
                    return syntax(p, "dim declared twice");
                }
                let (n, _) = c.number()?;
                c.done()?;
                doc.dim = Some((n as usize, p));
            }
            (Tok::Ident(k), p) if k == "basis" => {
                if doc.basis.is_some() {
                    return syntax(p, "basis declared twice");
                }
                let names = c.names()?;
                c.done()?;
                if names.is_empty() {
                    return syntax(end, "expected a basis name");
                }
                doc.basis = Some((names, p));
            }
            (Tok::Ident(k), p) if k == "space" => {
                if doc.space.is_some() {
                    return syntax(p, "space declared twice");
                }
                match c.next() {
                    Some((Tok::Ident(v), _)) if v == "V" => {}
                    Some((_, vp)) => return syntax(vp, "expected 'V'"),
                    None => return syntax(end, "expected 'V'"),
                }
                c.sym('{')?;
                let mut names = Vec::new();
                let mut has_basis = false;
                if let Some(Tok::Ident(b)) = c.peek() {
                    if b != "basis" {
                        return syntax(c.pos(), "expected 'basis'");
                    }
                    c.i += 1;
                    has_basis = true;
                    names = c.names()?;
                }
                if c.peek() == Some(&Tok::Sym('}')) {
                    c.i += 1;
                    c.done()?;
                    doc.space = Some((names, p));
                } else {
                    c.done()?;
                    open_space = Some((p, names, has_basis));
                }
            }
            (Tok::Sym('['), p) => {
                let a = c.name()?;
                c.sym(',')?;
                let b = c.name()?;
                c.sym(']')?;
                c.sym('=')?;
                let comb = c.comb()?;
                c.done()?;
                doc.entries.push(Entry { section: Section::Bracket, args: vec![a, b], comb, pos: p });
            }
            (Tok::Ident(k), p) if ["tl", "tr", "omega", "bv", "cocycle", "D"].contains(&k.as_str()) => {
                let section = match k.as_str() {
                    "tl" => Section::Tl,
                    "tr" => Section::Tr,
                    "omega" => Section::Omega,
                    "bv" => Section::Bv,
                    "cocycle" => Section::Cocycle,
                    _ => Section::D,
                };
                let args = match section {
                    Section::D => vec![c.name()?],
                    Section::Bv | Section::Cocycle => {
                        c.sym('[')?;
                        let a = c.name()?;
                        c.sym(',')?;
                        let b = c.name()?;
                        c.sym(']')?;
                        vec![a, b]
                    }
                    _ => vec![c.name()?, c.name()?],
                };
                c.sym('=')?;
                let comb = c.comb()?;
                c.done()?;
                doc.entries.push(Entry { section, args, comb, pos: p });
            }
            (_, p) => return syntax(p, "unknown statement"),
        }
    }
    if let Some((p, _, _)) = open_space {
        return syntax(p, "space block is not closed");
    }
    Ok(doc)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Space {
    M,
    V,
}

struct Scope<'a> {
    field: Field,
    m: &'a [String],
    v: &'a [String],
}

impl Scope<'_> {
    fn index(&self, n: &Name, want: Space, what: &str) -> ParseResult<usize> {
        let (own, other, own_name, other_name) = match want {
            Space::M => (self.m, self.v, "M", "V"),
            Space::V => (self.v, self.m, "V", "M"),
        };
        if let Some(i) = own.iter().position(|s| *s == n.s) {
            return Ok(i);
        }
        if other.contains(&n.s) {
            let msg = format!("{} is in {other_name}, {what} must be in {own_name}", n.s);
            return n.pos.err(if what == "value" {
                ParseErrorKind::WrongCodomain(msg)
            } else {
                ParseErrorKind::WrongDomain(msg)
            });
        }
        n.pos.err(ParseErrorKind::UnknownBasisName(n.s.clone()))
    }

    fn vector(&self, c: &Comb, space: Space) -> ParseResult<Vector> {
        let dim = match space {
            Space::M => self.m.len(),
            Space::V => self.v.len(),
        };
        let mut v = Vector::zero(self.field, dim);
        for (num, den, cpos, name) in &c.terms {
            let i = self.index(name, space, "value")?;
            let s = match self.field.from_ratio(num, den) {
                Ok(s) => s,
                Err(_) => return syntax(*cpos, format!("coefficient {num}/{den} is not defined in {}", self.field)),
            };
            v[i] += &s;
        }
        Ok(v)
    }
}

fn check_names(names: &[Name]) -> ParseResult<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for n in names {
        if out.contains(&n.s) {
            return syntax(n.pos, format!("basis name {} repeated", n.s));
        }
        out.push(n.s.clone());
    }
    Ok(out)
}

fn forbid(doc: &Doc, kind: &str, allowed: &[Section], header: bool, space: bool) -> ParseResult<()> {
    if let Some(e) = doc.entries.iter().find(|e| !allowed.contains(&e.section)) {
        return e.pos.err(ParseErrorKind::Invalid(format!(
            "'{}' lines are not allowed in {kind} document",
            e.section.keyword()
        )));
    }
    if !header {
        let p = [doc.field.map(|f| f.1), doc.dim.map(|d| d.1), doc.basis.as_ref().map(|b| b.1)].into_iter().flatten().next();
        if let Some(p) = p {
            return p.err(ParseErrorKind::Invalid(format!("{kind} document takes M from the algebra file")));
        }
    }
    if !space {
        if let Some((_, p)) = &doc.space {
            return p.err(ParseErrorKind::Invalid(format!("{kind} document has no space block")));
        }
    }
    Ok(())
}

fn header(doc: &Doc, field_override: Option<Field>) -> ParseResult<(Field, Vec<String>)> {
    let declared = doc.field.map(|f| f.0).unwrap_or(Field::Rational);
    let field = match field_override {
        None => declared,
        Some(f) if declared == f || declared == Field::Rational => f,
        Some(f) => {
            let p = doc.field.expect("declared").1;
            return p.err(ParseErrorKind::Invalid(format!("document declares {declared}, requested {f}")));
        }
    };
    let names = match (&doc.dim, &doc.basis) {
        (Some((n, p)), Some((b, _))) if *n != b.len() => {
            return syntax(*p, format!("dim {n} but {} basis names", b.len()));
        }
        (_, Some((b, _))) => check_names(b)?,
        (Some((n, _)), None) => default_names("e", *n),
        (None, None) => return syntax(Pos { line: 1, col: 1 }, "missing 'dim' or 'basis'"),
    };
    Ok((field, names))
}

fn space_names(doc: &Doc, kind: &str) -> ParseResult<(Vec<String>, Pos)> {
    match &doc.space {
        Some((names, p)) => Ok((check_names(names)?, *p)),
        None => syntax(Pos { line: 1, col: 1 }, format!("{kind} document needs a 'space V {{ basis ... }}' block")),
    }
}

/// Pairs in canonical order with the sign of the swap.
fn pair(e: &Entry, a: usize, b: usize, seen: &mut BTreeMap<(Section, usize, usize), ()>) -> ParseResult<(usize, usize, bool)> {
    if a == b {
        return syntax(e.args[1].pos, format!("diagonal pair ({0},{0}) of a skew map", e.args[0].s));
    }
    let (i, j, swap) = if a < b { (a, b, false) } else { (b, a, true) };
    if seen.insert((e.section, i, j), ()).is_some() {
        return e.pos.err(ParseErrorKind::DuplicatePair(e.args[0].s.clone(), e.args[1].s.clone()));
    }
    Ok((i, j, swap))
}

fn algebra_from(doc: &Doc, field: Field, names: Vec<String>) -> ParseResult<MalcevAlgebra> {
    let scope = Scope { field, m: &names, v: &[] };
    let mut m = MalcevAlgebra::new(field, names.clone())
        .or_else(|e| syntax(Pos { line: 1, col: 1 }, e.to_string()))?;
    let mut seen = BTreeMap::new();
    for e in doc.entries.iter().filter(|e| e.section == Section::Bracket) {
        let a = scope.index(&e.args[0], Space::M, "argument")?;
        let b = scope.index(&e.args[1], Space::M, "argument")?;
        let (i, j, swap) = pair(e, a, b, &mut seen)?;
        let v = scope.vector(&e.comb, Space::M)?;
        m.set_bracket(i, j, &if swap { -&v } else { v }).expect("in range");
    }
    Ok(m)
}

pub fn parse_algebra(text: &str) -> ParseResult<MalcevAlgebra> {
    parse_algebra_over(text, None)
}

/// Reads the algebra over `field` when given; a `rational` declaration is reduced.
pub fn parse_algebra_over(text: &str, field: Option<Field>) -> ParseResult<MalcevAlgebra> {
    let doc = parse_doc(text)?;
    forbid(&doc, "an algebra", &[Section::Bracket], true, false)?;
    let (f, names) = header(&doc, field)?;
    algebra_from(&doc, f, names)
}

fn fill_datum(doc: &Doc, d: &mut ExtendingDatum, scope: &Scope) -> ParseResult<()> {
    let mut seen = BTreeMap::new();
    for e in &doc.entries {
        match e.section {
            Section::Tl | Section::Tr => {
                let x = scope.index(&e.args[0], Space::M, "first argument")?;
                let u = scope.index(&e.args[1], Space::V, "second argument")?;
                if seen.insert((e.section, x, u), ()).is_some() {
                    return e.pos.err(ParseErrorKind::DuplicatePair(e.args[0].s.clone(), e.args[1].s.clone()));
                }
                if e.section == Section::Tl {
                    d.tl.set(x, u, &scope.vector(&e.comb, Space::M)?).expect("shape");
                } else {
                    d.tr.set(x, u, &scope.vector(&e.comb, Space::V)?).expect("shape");
                }
            }
            Section::Omega | Section::Bv => {
                let a = scope.index(&e.args[0], Space::V, "argument")?;
                let b = scope.index(&e.args[1], Space::V, "argument")?;
                let (i, j, swap) = pair(e, a, b, &mut seen)?;
                let space = if e.section == Section::Omega { Space::M } else { Space::V };
                let v = scope.vector(&e.comb, space)?;
                let v = if swap { -&v } else { v };
                if e.section == Section::Omega {
                    d.omega.set(i, j, &v).expect("shape");
                } else {
                    d.bv.set(i, j, &v).expect("shape");
                }
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn parse_datum(text: &str) -> ParseResult<ExtendingDatum> {
    let doc = parse_doc(text)?;
    forbid(&doc, "a datum", &[Section::Bracket, Section::Tl, Section::Tr, Section::Omega, Section::Bv], true, true)?;
    let (f, names) = header(&doc, None)?;
    let (v_names, vpos) = space_names(&doc, "a datum")?;
    if let Some(n) = v_names.iter().find(|n| names.contains(n)) {
        return vpos.err(ParseErrorKind::Invalid(format!("name {n} used in both M and V")));
    }
    let m = algebra_from(&doc, f, names.clone())?;
    let mut d = ExtendingDatum::zero(m, v_names.clone());
    fill_datum(&doc, &mut d, &Scope { field: f, m: &names, v: &v_names })?;
    Ok(d)
}

/// `space V { ... }` and `tr x v = ...` lines over a given algebra.
pub fn parse_action(text: &str, m: &MalcevAlgebra) -> ParseResult<ModuleAction> {
    let doc = parse_doc(text)?;
    forbid(&doc, "an action", &[Section::Tr], false, true)?;
    let (v_names, vpos) = space_names(&doc, "an action")?;
    if let Some(n) = v_names.iter().find(|n| m.index_of(n).is_some()) {
        return vpos.err(ParseErrorKind::Invalid(format!("name {n} used in both M and V")));
    }
    let mut d = ExtendingDatum::zero(m.clone(), v_names.clone());
    fill_datum(&doc, &mut d, &Scope { field: m.field(), m: m.names(), v: &v_names })?;
    Ok(ModuleAction::new(v_names, d.tr).expect("shapes from the parser"))
}

/// `cocycle [x,y] = <V-combination>` lines over a given algebra and action.
pub fn parse_cocycle(text: &str, m: &MalcevAlgebra, act: &ModuleAction) -> ParseResult<Cocycle> {
    let doc = parse_doc(text)?;
    forbid(&doc, "a cocycle", &[Section::Cocycle], false, false)?;
    let scope = Scope { field: m.field(), m: m.names(), v: &act.v_names };
    let mut w = Cocycle::zero(m, act.dim());
    let mut seen = BTreeMap::new();
    for e in &doc.entries {
        let a = scope.index(&e.args[0], Space::M, "argument")?;
        let b = scope.index(&e.args[1], Space::M, "argument")?;
        let (i, j, swap) = pair(e, a, b, &mut seen)?;
        let v = scope.vector(&e.comb, Space::V)?;
        w.omega.set(i, j, &if swap { -&v } else { v }).expect("shape");
    }
    Ok(w)
}

/// `D x = <M-combination>` lines; column `j` of the result is `D(e_j)`.
pub fn parse_derivation(text: &str, m: &MalcevAlgebra) -> ParseResult<Matrix> {
    let doc = parse_doc(text)?;
    forbid(&doc, "a D", &[Section::D], false, false)?;
    let scope = Scope { field: m.field(), m: m.names(), v: &[] };
    let n = m.dim();
    let mut cols = vec![None; n];
    for e in &doc.entries {
        let x = scope.index(&e.args[0], Space::M, "argument")?;
        if cols[x].is_some() {
            return e.pos.err(ParseErrorKind::DuplicatePair("D".into(), e.args[0].s.clone()));
        }
        cols[x] = Some(scope.vector(&e.comb, Space::M)?);
    }
    let cols: Vec<Vector> = cols.into_iter().map(|c| c.unwrap_or_else(|| m.zero_vector())).collect();
    Ok(Matrix::from_columns(m.field(), n, &cols))
}

/// `name=value,...` over the basis of `m`; unlisted names are zero.
pub fn parse_functional(spec: &str, m: &MalcevAlgebra) -> ParseResult<Vector> {
    let mut v = m.zero_vector();
    let mut seen = vec![false; m.dim()];
    let mut col = 1;
    for part in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let pos = Pos { line: 1, col };
        col += part.chars().count() + 1;
        let Some((name, value)) = part.split_once('=') else {
            return syntax(pos, format!("expected name=value, got {part:?}"));
        };
        let name = name.trim();
        let Some(i) = m.index_of(name) else {
            return pos.err(ParseErrorKind::UnknownBasisName(name.to_string()));
        };
        if std::mem::replace(&mut seen[i], true) {
            return pos.err(ParseErrorKind::DuplicatePair("lambda".into(), name.to_string()));
        }
        v[i] = parse_scalar(value.trim(), m.field()).or_else(|msg| syntax(pos, msg))?;
    }
    Ok(v)
}

/// A single linear combination such as `e1 + 2*e3` over the basis of `m`.
pub fn parse_vector(text: &str, m: &MalcevAlgebra) -> ParseResult<Vector> {
    let toks = lex(text, 1)?;
    let end = Pos { line: 1, col: text.chars().count() + 1 };
    let mut c = Cursor { toks, i: 0, end };
    let comb = c.comb()?;
    c.done()?;
    Scope { field: m.field(), m: m.names(), v: &[] }.vector(&comb, Space::M)
}

/// Inverse of [`parse_functional`]: `e1=1,e3=2/3`, empty for zero.
pub fn format_functional(m: &MalcevAlgebra, v: &Vector) -> String {
    let parts: Vec<String> =
        v.coords().iter().zip(m.names()).filter(|(c, _)| !c.is_zero()).map(|(c, n)| format!("{n}={c}")).collect();
    parts.join(",")
}

/// `-2`, `3/4`, `+1`.
pub fn parse_scalar(s: &str, field: Field) -> std::result::Result<Scalar, String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (n, d) = body.split_once('/').unwrap_or((body, "1"));
    let digits = |t: &str| !t.is_empty() && t.chars().all(|c| c.is_ascii_digit());
    if !digits(n) || !digits(d) {
        return Err(format!("bad scalar {s:?}"));
    }
    let mut num = BigInt::from_str(n).expect("digits");
    if neg {
        num = -num;
    }
    field.from_ratio(&num, &BigInt::from_str(d).expect("digits")).map_err(|_| format!("scalar {s} is not defined in {field}"))
}

/// `2*e1 - e3 + 1/2*e4`, or `0`.
pub fn format_combination(names: &[String], v: &Vector) -> String {
    let mut out = String::new();
    for (c, name) in v.coords().iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            let _ = write!(out, "{mag}*");
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn write_header(out: &mut String, m: &MalcevAlgebra) {
    let _ = writeln!(out, "field {}", m.field());
    let _ = writeln!(out, "dim {}", m.dim());
    let _ = writeln!(out, "basis {}", m.names().join(" "));
    for i in 0..m.dim() {
        for j in i + 1..m.dim() {
            let w = m.basis_bracket(i, j);
            if !w.is_zero() {
                let _ = writeln!(out, "[{},{}] = {}", m.name(i), m.name(j), format_combination(m.names(), &w));
            }
        }
    }
}

pub fn write_algebra(m: &MalcevAlgebra) -> String {
    let mut out = String::new();
    write_header(&mut out, m);
    out
}

fn write_space(out: &mut String, v_names: &[String]) {
    let _ = writeln!(out, "space V {{ basis {} }}", v_names.join(" "));
}

fn write_bilinear(out: &mut String, kw: &str, a: &[String], b: &[String], o: &[String], map: &BilinearMap) {
    for i in 0..a.len() {
        for j in 0..b.len() {
            let w = map.get(i, j);
            if !w.is_zero() {
                let _ = writeln!(out, "{kw} {} {} = {}", a[i], b[j], format_combination(o, &w));
            }
        }
    }
}

fn write_skew(out: &mut String, kw: &str, brackets: bool, a: &[String], o: &[String], map: &SkewMap) {
    for (i, j, w) in map.pairs() {
        if !w.is_zero() {
            let args = if brackets { format!("[{},{}]", a[i], a[j]) } else { format!("{} {}", a[i], a[j]) };
            let _ = writeln!(out, "{kw} {args} = {}", format_combination(o, &w));
        }
    }
}

pub fn write_datum(d: &ExtendingDatum) -> String {
    let mut out = String::new();
    write_header(&mut out, &d.m);
    write_space(&mut out, &d.v_names);
    let (m, v) = (d.m.names(), d.v_names.as_slice());
    write_bilinear(&mut out, "tl", m, v, m, &d.tl);
    write_bilinear(&mut out, "tr", m, v, v, &d.tr);
    write_skew(&mut out, "omega", false, v, m, &d.omega);
    write_skew(&mut out, "bv", true, v, v, &d.bv);
    out
}

pub fn write_action(m: &MalcevAlgebra, act: &ModuleAction) -> String {
    let mut out = String::new();
    write_space(&mut out, &act.v_names);
    write_bilinear(&mut out, "tr", m.names(), &act.v_names, &act.v_names, &act.action);
    out
}

pub fn write_cocycle(m: &MalcevAlgebra, act: &ModuleAction, w: &Cocycle) -> String {
    let mut out = String::new();
    write_skew(&mut out, "cocycle", true, m.names(), &act.v_names, &w.omega);
    out
}

pub fn write_derivation(m: &MalcevAlgebra, d: &Matrix) -> String {
    let mut out = String::new();
    for j in 0..m.dim() {
        let col = d.column(j);
        if !col.is_zero() {
            let _ = writeln!(out, "D {} = {}", m.name(j), format_combination(m.names(), &col));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const M4: &str = "field rational\ndim 4\nbasis e1 e2 e3 e4\n[e1,e2] = e2\n[e1,e3] = e3\n[e1,e4] = -e4\n[e2,e3] = e4\n";

    #[test]
    fn m4_document() {
        let m = parse_algebra(M4).unwrap();
        assert_eq!(m, MalcevAlgebra::m4(Field::Rational));
        assert_eq!(write_algebra(&m), M4);
    }

    #[test]
    fn dim_only_is_abelian() {
        let m = parse_algebra("dim 2\n").unwrap();
        assert!(m.is_abelian());
        assert_eq!(m.names(), ["e1", "e2"]);
    }

    #[test]
    fn diagonal_bracket_rejected() {
        let err = parse_algebra("dim 2\n[e1,e1] = e2\n").unwrap_err();
        assert_eq!((err.line, err.col), (2, 5));
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn swapped_duplicate_rejected() {
        let err = parse_algebra("dim 2\n[e1,e2] = e2\n[e2,e1] = e1\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.kind, ParseErrorKind::DuplicatePair(..)));
    }

    #[test]
    fn swapped_pair_flips_sign() {
        let m = parse_algebra("field gf 5\ndim 2\n[e2,e1] = e2\n").unwrap();
        assert_eq!(m.basis_bracket(0, 1), Vector::from_i64(Field::prime(5).unwrap(), &[0, -1]));
    }

    #[test]
    fn small_characteristic_rejected() {
        let err = parse_algebra("field gf 3\ndim 1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadFieldChar(3));
        assert_eq!((err.line, err.col), (1, 10));
        assert_eq!(parse_algebra("field gf 9\ndim 1\n").unwrap_err().kind, ParseErrorKind::NotPrime(9));
    }

    #[test]
    fn unknown_name_located() {
        let err = parse_algebra("dim 2\n[e1,e2] = 2*e7\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownBasisName("e7".into()));
        assert_eq!((err.line, err.col), (2, 13));
    }

    #[test]
    fn fractions_and_signs() {
        let m = parse_algebra("dim 3\n[e1,e2] = -2/3*e1 + e3 - 1*e3 + 5*e2\n").unwrap();
        assert_eq!(format_combination(m.names(), &m.basis_bracket(0, 1)), "-2/3*e1 + 5*e2");
        let g = parse_algebra_over("dim 2\n[e1,e2] = 1/2*e2\n", Some(Field::prime(5).unwrap())).unwrap();
        assert_eq!(format_combination(g.names(), &g.basis_bracket(0, 1)), "3*e2");
        assert!(parse_algebra_over("field gf 7\ndim 1\n", Some(Field::prime(5).unwrap())).is_err());
    }

    #[test]
    fn extracted_datum_round_trips() {
        let text = "field gf 5\ndim 3\nbasis e1 e2 e4\n[e1,e2] = e2\n[e1,e4] = -e4\nspace V { basis v }\ntl e2 v = e4\ntr e1 v = v\n";
        let d = parse_datum(text).unwrap();
        let out = write_datum(&d);
        assert_eq!(parse_datum(&out).unwrap(), d);
        assert_eq!(out, text.replace("-e4", "4*e4"));
    }

    #[test]
    fn multi_line_space_block() {
        let d = parse_datum("dim 1\nspace V {\n  basis v1 v2\n}\nbv [v1,v2] = v1\n").unwrap();
        assert_eq!(d.v_names, ["v1", "v2"]);
        assert_eq!(d.bv.get(0, 1), Vector::from_i64(Field::Rational, &[1, 0]));
    }

    #[test]
    fn skew_diagonal_and_codomain() {
        let base = "dim 1\nspace V { basis v1 v2 }\n";
        let err = parse_datum(&format!("{base}omega v1 v1 = e1\n")).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        let err = parse_datum(&format!("{base}tr e1 v1 = e1\n")).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::WrongCodomain(_)));
        let err = parse_datum(&format!("{base}tl v1 v1 = e1\n")).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::WrongDomain(_)));
    }

    #[test]
    fn action_cocycle_and_d() {
        let m = parse_algebra(M4).unwrap();
        let act = parse_action("space V { basis u1 u2 }\ntr e1 u1 = u2\n", &m).unwrap();
        assert_eq!(parse_action(&write_action(&m, &act), &m).unwrap(), act);
        let w = parse_cocycle("cocycle [e2,e1] = u1\n", &m, &act).unwrap();
        assert_eq!(parse_cocycle(&write_cocycle(&m, &act, &w), &m, &act).unwrap(), w);
        let d = parse_derivation("D e2 = e4\n", &m).unwrap();
        assert_eq!(d.column(1), m.unit(3));
        assert_eq!(parse_derivation(&write_derivation(&m, &d), &m).unwrap(), d);
        assert!(parse_action("dim 4\nspace V { basis u }\n", &m).is_err());
    }

    #[test]
    fn functional_spec() {
        let m = MalcevAlgebra::m4(Field::prime(5).unwrap());
        let v = parse_functional("e1=1,e4=-1", &m).unwrap();
        assert_eq!(v, Vector::from_i64(m.field(), &[1, 0, 0, 4]));
        assert!(parse_functional("e9=1", &m).is_err());
        assert!(parse_functional("e1", &m).is_err());
    }

    #[test]
    fn lexer_errors() {
        assert!(matches!(parse_algebra("dim 2\n[e1,e2] = 2e2\n").unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse_algebra("dim 2 # two\n[e1,e2] = e2 $\n").unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(parse_algebra("dim 2 # two\n# bracket\n[e1,e2] = e2\n").is_ok());
    }
}
