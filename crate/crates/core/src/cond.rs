//! Typed evaluation of compatibility conditions written as equations.
//!
//! A condition is a string `lhs = rhs` over a small expression language:
//!
//! * variables are single letters; `x y z t` range over `M`, `u v p q w` over `V`;
//! * `[a, b]` is the bracket of `M` or of `V`, chosen by the operand sorts;
//! * `a < b` is `a ⊲ b` (`M x V -> M`), `a > b` is `a ⊳ b` (`M x V -> V`),
//!   both left-associative and binding tighter than `*`;
//! * `om(a, b)`, `D(a)`, `lam(a)`, `r(a)`, `s(a)`, `tl2(a, b)`, `tr2(a, b)`,
//!   `om2(a, b)`, `bv2(a, b)` are the maps supplied by the [`Env`];
//! * `k * a` multiplies by a scalar-valued expression; integer literals are scalars;
//! * a right-hand side of exactly `0` is the zero of the left-hand side's sort.
//!
//! Every expression is sort-checked against the environment when parsed, so an
//! ill-typed transcription is rejected instead of evaluated.

use std::fmt;

use crate::algebra::MalcevAlgebra;
use crate::bilinear::{BilinearMap, SkewMap};
use crate::field::Field;
use crate::linalg::{Matrix, Vector};
use crate::report::{check_tuples, Check, VerificationReport, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    M,
    V,
    K,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::M => "M",
            Sort::V => "V",
            Sort::K => "k",
        })
    }
}

fn var_sort(c: char) -> Option<Sort> {
    match c {
        'x' | 'y' | 'z' | 't' => Some(Sort::M),
        'u' | 'v' | 'p' | 'q' | 'w' => Some(Sort::V),
        _ => None,
    }
}

/// Which way a skew map `om` goes.
#[derive(Clone, Copy, Debug)]
pub enum Omega<'a> {
    /// `V x V -> M`, as in an extending datum.
    OnV(&'a SkewMap),
    /// `M x M -> V`, as in a cocycle extension.
    OnM(&'a SkewMap),
}

/// The maps a condition may refer to. Absent maps make their symbols ill-typed.
#[derive(Clone, Debug)]
pub struct Env<'a> {
    m: &'a MalcevAlgebra,
    v_names: Vec<String>,
    tl: Option<&'a BilinearMap>,
    tr: Option<&'a BilinearMap>,
    om: Option<Omega<'a>>,
    bv: Option<&'a SkewMap>,
    d: Option<&'a Matrix>,
    lam: Option<&'a Vector>,
    r: Option<&'a Matrix>,
    s: Option<&'a Matrix>,
    tl2: Option<&'a BilinearMap>,
    tr2: Option<&'a BilinearMap>,
    om2: Option<&'a SkewMap>,
    bv2: Option<&'a SkewMap>,
}

impl<'a> Env<'a> {
    pub fn new(m: &'a MalcevAlgebra, v_names: Vec<String>) -> Env<'a> {
        Env {
            m,
            v_names,
            tl: None,
            tr: None,
            om: None,
            bv: None,
            d: None,
            lam: None,
            r: None,
            s: None,
            tl2: None,
            tr2: None,
            om2: None,
            bv2: None,
        }
    }

    pub fn tl(mut self, map: &'a BilinearMap) -> Self {
        self.tl = Some(map);
        self
    }

    pub fn tr(mut self, map: &'a BilinearMap) -> Self {
        self.tr = Some(map);
        self
    }

    pub fn omega(mut self, om: Omega<'a>) -> Self {
        self.om = Some(om);
        self
    }

    pub fn bv(mut self, map: &'a SkewMap) -> Self {
        self.bv = Some(map);
        self
    }

    pub fn derivation(mut self, lam: &'a Vector, d: &'a Matrix) -> Self {
        self.lam = Some(lam);
        self.d = Some(d);
        self
    }

    pub fn morphism(mut self, r: &'a Matrix, s: &'a Matrix) -> Self {
        self.r = Some(r);
        self.s = Some(s);
        self
    }

    pub fn target(mut self, tl: &'a BilinearMap, tr: &'a BilinearMap, om: &'a SkewMap, bv: &'a SkewMap) -> Self {
        self.tl2 = Some(tl);
        self.tr2 = Some(tr);
        self.om2 = Some(om);
        self.bv2 = Some(bv);
        self
    }

    fn field(&self) -> Field {
        self.m.field()
    }

    fn dim(&self, s: Sort) -> usize {
        match s {
            Sort::M => self.m.dim(),
            Sort::V => self.v_names.len(),
            Sort::K => 1,
        }
    }

    fn name(&self, s: Sort, i: usize) -> &str {
        match s {
            Sort::M => self.m.name(i),
            Sort::V => &self.v_names[i],
            Sort::K => "1",
        }
    }

    fn signature(&self, op: Op) -> Option<(Vec<Sort>, Sort)> {
        use Sort::*;
        let present = match op {
            Op::BrM => true,
            Op::BrV => self.bv.is_some(),
            Op::Tl => self.tl.is_some(),
            Op::Tr => self.tr.is_some(),
            Op::Om => self.om.is_some(),
            Op::D => self.d.is_some(),
            Op::Lam => self.lam.is_some(),
            Op::R => self.r.is_some(),
            Op::S => self.s.is_some(),
            Op::Tl2 => self.tl2.is_some(),
            Op::Tr2 => self.tr2.is_some(),
            Op::Om2 => self.om2.is_some(),
            Op::Bv2 => self.bv2.is_some(),
        };
        if !present {
            return None;
        }
        Some(match op {
            Op::BrM => (vec![M, M], M),
            Op::BrV | Op::Bv2 => (vec![V, V], V),
            Op::Tl | Op::Tl2 => (vec![M, V], M),
            Op::Tr | Op::Tr2 => (vec![M, V], V),
            Op::Om => match self.om? {
                Omega::OnV(_) => (vec![V, V], M),
                Omega::OnM(_) => (vec![M, M], V),
            },
            Op::Om2 => (vec![V, V], M),
            Op::D => (vec![M], M),
            Op::Lam => (vec![M], K),
            Op::R => (vec![V], M),
            Op::S => (vec![V], V),
        })
    }

    fn apply(&self, op: Op, args: &[Vector]) -> Vector {
        let f = self.field();
        match op {
            Op::BrM => self.m.br(&args[0], &args[1]),
            Op::BrV => self.bv.unwrap().apply(&args[0], &args[1]),
            Op::Bv2 => self.bv2.unwrap().apply(&args[0], &args[1]),
            Op::Tl => self.tl.unwrap().apply(&args[0], &args[1]),
            Op::Tr => self.tr.unwrap().apply(&args[0], &args[1]),
            Op::Tl2 => self.tl2.unwrap().apply(&args[0], &args[1]),
            Op::Tr2 => self.tr2.unwrap().apply(&args[0], &args[1]),
            Op::Om => match self.om.unwrap() {
                Omega::OnV(w) | Omega::OnM(w) => w.apply(&args[0], &args[1]),
            },
            Op::Om2 => self.om2.unwrap().apply(&args[0], &args[1]),
            Op::D => self.d.unwrap().apply(&args[0]),
            Op::Lam => Vector::from_coords_unchecked(f, vec![self.lam.unwrap().dot(&args[0])]),
            Op::R => self.r.unwrap().apply(&args[0]),
            Op::S => self.s.unwrap().apply(&args[0]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    BrM,
    BrV,
    Tl,
    Tr,
    Om,
    D,
    Lam,
    R,
    S,
    Tl2,
    Tr2,
    Om2,
    Bv2,
}

#[derive(Clone, Debug)]
enum Expr {
    Var(usize),
    Lit(i64),
    Zero(Sort),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Scale(Box<Expr>, Box<Expr>),
    Apply(Op, Vec<Expr>),
}

impl Expr {
    fn eval(&self, env: &Env, vals: &[Vector]) -> Vector {
        match self {
            Expr::Var(i) => vals[*i].clone(),
            Expr::Lit(n) => Vector::from_i64(env.field(), &[*n]),
            Expr::Zero(s) => Vector::zero(env.field(), env.dim(*s)),
            Expr::Neg(a) => -&a.eval(env, vals),
            Expr::Add(a, b) => &a.eval(env, vals) + &b.eval(env, vals),
            Expr::Sub(a, b) => &a.eval(env, vals) - &b.eval(env, vals),
            Expr::Scale(k, a) => {
                let k = k.eval(env, vals);
                a.eval(env, vals).scale(&k[0])
            }
            Expr::Apply(op, args) => {
                let vs: Vec<Vector> = args.iter().map(|a| a.eval(env, vals)).collect();
                env.apply(*op, &vs)
            }
        }
    }
}

/// A parse or sort error, with the 0-based character offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.offset, self.message)
    }
}

struct Parser<'e, 'a> {
    chars: Vec<char>,
    pos: usize,
    env: &'e Env<'a>,
    vars: &'e [(char, Sort)],
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser<'_, '_> {
    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { offset: self.pos, message: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> PResult<(Expr, Sort)> {
        let (mut e, s) = self.term()?;
        loop {
            match self.peek() {
                Some(c @ ('+' | '-')) => {
                    self.pos += 1;
                    let at = self.pos;
                    let (r, rs) = self.term()?;
                    if rs != s {
                        return Err(ParseError {
                            offset: at,
                            message: format!("cannot add {s} and {rs}"),
                        });
                    }
                    e = if c == '+' { Expr::Add(Box::new(e), Box::new(r)) } else { Expr::Sub(Box::new(e), Box::new(r)) };
                }
                _ => return Ok((e, s)),
            }
        }
    }

    fn term(&mut self) -> PResult<(Expr, Sort)> {
        if self.peek() == Some('-') {
            self.pos += 1;
            let (e, s) = self.term()?;
            return Ok((Expr::Neg(Box::new(e)), s));
        }
        self.product()
    }

    fn product(&mut self) -> PResult<(Expr, Sort)> {
        let (mut e, mut s) = self.action()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let at = self.pos;
            let (r, rs) = self.action()?;
            match (s, rs) {
                (Sort::K, _) => {
                    e = Expr::Scale(Box::new(e), Box::new(r));
                    s = rs;
                }
                (_, Sort::K) => e = Expr::Scale(Box::new(r), Box::new(e)),
                _ => {
                    return Err(ParseError {
                        offset: at,
                        message: format!("'*' needs a scalar operand, got {s} and {rs}"),
                    })
                }
            }
        }
        Ok((e, s))
    }

    fn action(&mut self) -> PResult<(Expr, Sort)> {
        let (mut e, mut s) = self.atom()?;
        while let Some(c @ ('<' | '>')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let (r, rs) = self.atom()?;
            let op = if c == '<' { Op::Tl } else { Op::Tr };
            let (e2, s2) = self.typed_apply(op, vec![(e, s), (r, rs)], at)?;
            e = e2;
            s = s2;
        }
        Ok((e, s))
    }

    fn typed_apply(&self, op: Op, args: Vec<(Expr, Sort)>, at: usize) -> PResult<(Expr, Sort)> {
        let Some((want, out)) = self.env.signature(op) else {
            return Err(ParseError { offset: at, message: format!("{op:?} is not available here") });
        };
        let got: Vec<Sort> = args.iter().map(|a| a.1).collect();
        if got != want {
            return Err(ParseError {
                offset: at,
                message: format!("{op:?} expects {want:?}, got {got:?}"),
            });
        }
        Ok((Expr::Apply(op, args.into_iter().map(|a| a.0).collect()), out))
    }

    fn atom(&mut self) -> PResult<(Expr, Sort)> {
        let at = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let r = self.expr()?;
                self.expect(')')?;
                Ok(r)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                let op = match (a.1, b.1) {
                    (Sort::M, Sort::M) => Op::BrM,
                    (Sort::V, Sort::V) => Op::BrV,
                    (x, y) => return Err(ParseError { offset: at, message: format!("bracket of {x} and {y}") }),
                };
                self.typed_apply(op, vec![a, b], at)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                Ok((Expr::Lit(s.parse().map_err(|_| ParseError { offset: start, message: "bad integer".into() })?), Sort::K))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                if self.peek() == Some('(') {
                    let op = match ident.as_str() {
                        "om" => Op::Om,
                        "D" => Op::D,
                        "lam" => Op::Lam,
                        "r" => Op::R,
                        "s" => Op::S,
                        "tl2" => Op::Tl2,
                        "tr2" => Op::Tr2,
                        "om2" => Op::Om2,
                        "bv2" => Op::Bv2,
                        _ => return Err(ParseError { offset: start, message: format!("unknown function {ident}") }),
                    };
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while self.peek() == Some(',') {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    return self.typed_apply(op, args, start);
                }
                let mut it = ident.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => match self.vars.iter().position(|v| v.0 == c) {
                        Some(i) => Ok((Expr::Var(i), self.vars[i].1)),
                        None => Err(ParseError { offset: start, message: format!("undeclared variable {c}") }),
                    },
                    _ => Err(ParseError { offset: start, message: format!("unknown identifier {ident}") }),
                }
            }
            _ => self.err("expected an operand"),
        }
    }
}

/// A parsed condition `lhs = rhs` with its variable list.
#[derive(Clone, Debug)]
pub struct Parsed {
    vars: Vec<(char, Sort)>,
    lhs: Expr,
    rhs: Expr,
}

fn declared_vars(vars: &str) -> std::result::Result<Vec<(char, Sort)>, ParseError> {
    vars.split_whitespace()
        .map(|v| {
            let mut cs = v.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => var_sort(c).map(|s| (c, s)).ok_or_else(|| ParseError {
                    offset: 0,
                    message: format!("variable {c} has no sort"),
                }),
                _ => Err(ParseError { offset: 0, message: format!("bad variable {v}") }),
            }
        })
        .collect()
}

pub fn parse(vars: &str, text: &str, env: &Env) -> std::result::Result<Parsed, ParseError> {
    let vars = declared_vars(vars)?;
    let Some(eq) = text.find('=') else {
        return Err(ParseError { offset: text.len(), message: "missing '='".into() });
    };
    let side = |s: &str, base: usize| -> PResult<(Expr, Sort)> {
        let mut p = Parser { chars: s.chars().collect(), pos: 0, env, vars: &vars };
        let r = p.expr().map_err(|mut e| {
            e.offset += base;
            e
        })?;
        if p.peek().is_some() {
            return Err(ParseError { offset: base + p.pos, message: "trailing input".into() });
        }
        Ok(r)
    };
    let (lhs, ls) = side(&text[..eq], 0)?;
    let rhs_text = &text[eq + 1..];
    let rhs = if rhs_text.trim() == "0" {
        Expr::Zero(ls)
    } else {
        let (rhs, rs) = side(rhs_text, eq + 1)?;
        if rs != ls {
            return Err(ParseError { offset: eq, message: format!("sides have sorts {ls} and {rs}") });
        }
        rhs
    };
    Ok(Parsed { vars, lhs, rhs })
}

impl Parsed {
    /// Evaluates both sides on every basis assignment of the variables.
    pub fn check(&self, id: &str, env: &Env) -> Check {
        let sorts: Vec<Sort> = self.vars.iter().map(|v| v.1).collect();
        let dims: Vec<usize> = sorts.iter().map(|&s| env.dim(s)).collect();
        if dims.is_empty() {
            let (l, r) = (self.lhs.eval(env, &[]), self.rhs.eval(env, &[]));
            let failures = usize::from(l != r);
            let ws = if failures > 0 { vec![Witness::new(vec![], vec![], l, r)] } else { vec![] };
            return Check::from_witnesses(id, failures, ws);
        }
        let f = env.field();
        check_tuples(id, &dims, |t| {
            let vals: Vec<Vector> = t.iter().zip(&sorts).map(|(&i, &s)| Vector::unit(f, env.dim(s), i)).collect();
            let l = self.lhs.eval(env, &vals);
            let r = self.rhs.eval(env, &vals);
            (l != r).then(|| {
                let names = t.iter().zip(&sorts).map(|(&i, &s)| env.name(s, i).to_string()).collect();
                Witness::basis(t, names, l, r)
            })
        })
    }
}

/// A transcribed condition. `repair` describes how the evaluated text differs
/// from the printed one, if it does.
#[derive(Clone, Copy, Debug)]
pub struct Condition {
    pub id: &'static str,
    pub vars: &'static str,
    pub text: &'static str,
    pub repair: Option<&'static str>,
}

impl Condition {
    pub const fn new(id: &'static str, vars: &'static str, text: &'static str) -> Condition {
        Condition { id, vars, text, repair: None }
    }

    pub const fn repaired(id: &'static str, vars: &'static str, text: &'static str, note: &'static str) -> Condition {
        Condition { id, vars, text, repair: Some(note) }
    }

    /// Panics if the transcription does not sort-check in `env`.
    pub fn check(&self, env: &Env) -> Check {
        let parsed = parse(self.vars, self.text, env).unwrap_or_else(|e| panic!("condition {} does not parse: {e}", self.id));
        parsed.check(self.id, env).with_repair(self.repair)
    }
}

pub fn check_all(conditions: &[Condition], env: &Env) -> VerificationReport {
    VerificationReport::new(conditions.iter().map(|c| c.check(env)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_names;

    fn m4() -> MalcevAlgebra {
        MalcevAlgebra::m4(Field::Rational)
    }

    #[test]
    fn bracket_sorts_resolve() {
        let a = m4();
        let env = Env::new(&a, default_names("v", 1));
        assert!(parse("x y", "[x,y] = -[y,x]", &env).is_ok());
        // V bracket absent
        assert!(parse("u v", "[u,v] = 0", &env).is_err());
        // mixed bracket is ill-typed
        assert!(parse("x u", "[x,u] = 0", &env).is_err());
    }

    #[test]
    fn actions_are_typed() {
        let a = m4();
        let f = a.field();
        let tl = BilinearMap::zero(f, 4, 1, 4);
        let tr = BilinearMap::zero(f, 4, 1, 1);
        let env = Env::new(&a, default_names("v", 1)).tl(&tl).tr(&tr);
        assert!(parse("x y q", "[x, y<q] = y<(x>q)", &env).is_ok());
        // y<(x<q): the inner term is in M, so ⊲ cannot take it as its V argument
        let e = parse("x y q", "[x, y<q] = y<(x<q)", &env).unwrap_err();
        assert!(e.message.contains("Tl"));
    }

    #[test]
    fn evaluates_anticommutativity_and_jacobiator() {
        let a = m4();
        let env = Env::new(&a, vec![]);
        let ok = parse("x y", "[x,y] = -[y,x]", &env).unwrap().check("anti", &env);
        assert!(ok.passed);
        let jac = parse("x y z", "[[x,y],z] + [[y,z],x] + [[z,x],y] = 0", &env).unwrap().check("jac", &env);
        assert!(!jac.passed);
        assert_eq!(jac.failures, 6);
        assert_eq!(jac.witnesses[0].args, vec!["e1", "e2", "e3"]);
        assert_eq!(jac.witnesses[0].lhs, Vector::from_i64(a.field(), &[0, 0, 0, 3]));
    }

    #[test]
    fn scalars_and_functionals() {
        let a = m4();
        let f = a.field();
        let lam = Vector::from_i64(f, &[1, 0, 0, 0]);
        let d = Matrix::zero(f, 4, 4);
        let env = Env::new(&a, vec![]).derivation(&lam, &d);
        let c = parse("x y", "lam(x)*lam(y)*[x,y] = [lam(x)*x, y*lam(y)]", &env).unwrap();
        assert!(c.check("s", &env).passed);
        let c = parse("x", "2*lam(x) = lam(x) + lam(x)", &env).unwrap();
        assert!(c.check("k", &env).passed);
    }

    #[test]
    fn error_offsets_point_at_token() {
        let a = m4();
        let env = Env::new(&a, vec![]);
        let e = parse("x", "[x, x] = foo(x)", &env).unwrap_err();
        assert_eq!(e.offset, 9);
        assert!(parse("x", "[x, x] + ", &env).is_err());
        assert!(parse("x", "[x, k] = 0", &env).is_err());
    }
}
