//! Text formats: operator expressions, system matrices (`.sys`) and
//! logarithmic charts (`.chart`).
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'|'/'] factor)*        juxtaposition multiplies
//! factor := atom ('^' ['-'] nat)?
//! atom   := integer | var | deriv | '(' expr ')'
//! var    := x | y | z | x<nat>
//! deriv  := d | dx | dy | dz | d<nat>
//! ```
//!
//! Products are noncommutative and read left to right. `a / f` is `a`
//! composed with the inverse of `f`, which must be an invertible function.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Point, Rat, RatFun, UPoly};
use crate::polelattice::{LogLattice, NCChart, PoleModuleElement};
use crate::systems::ConnectionSystem;
use crate::weyl::{UnivarOperator, WeylElement};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Deriv(usize),
    /// Bare `d`, only meaningful in one variable.
    D,
    Sym(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, line0: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (line0, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, k) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
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
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Int(s.parse().unwrap()),
                line: l,
                col: k,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = ident(&word).ok_or_else(|| Error::parse_at(l, k, format!("unknown symbol `{word}`")))?;
            out.push(Spanned { tok, line: l, col: k });
            continue;
        }
        if "+-*/^();".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                line: l,
                col: k,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::parse_at(l, k, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

fn index(rest: &str) -> Option<usize> {
    let k: usize = rest.parse().ok()?;
    (k >= 1 && !rest.starts_with('0')).then(|| k - 1)
}

fn ident(w: &str) -> Option<Tok> {
    Some(match w {
        "x" => Tok::Var(0),
        "y" => Tok::Var(1),
        "z" => Tok::Var(2),
        "d" => Tok::D,
        "dx" => Tok::Deriv(0),
        "dy" => Tok::Deriv(1),
        "dz" => Tok::Deriv(2),
        _ => {
            if let Some(r) = w.strip_prefix('x') {
                Tok::Var(index(r)?)
            } else if let Some(r) = w.strip_prefix('d') {
                Tok::Deriv(index(r)?)
            } else {
                return None;
            }
        }
    })
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Var(usize),
    Deriv(usize),
    D,
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

#[derive(Clone, Debug)]
struct Ast {
    node: Node,
    line: usize,
    col: usize,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.col))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::parse_at(l, c, msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let (line, col) = self.here();
        let mut lhs = if self.eat('-') {
            let t = self.term()?;
            Ast {
                node: Node::Neg(Box::new(t)),
                line,
                col,
            }
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            let (line, col) = self.here();
            let node = if self.eat('+') {
                Node::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.eat('-') {
                Node::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                return Ok(lhs);
            };
            lhs = Ast { node, line, col };
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_) | Tok::Var(_) | Tok::Deriv(_) | Tok::D | Tok::Sym('('))
        )
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        loop {
            let (line, col) = self.here();
            let node = if self.eat('*') {
                Node::Mul(Box::new(lhs), Box::new(self.factor()?))
            } else if self.eat('/') {
                Node::Div(Box::new(lhs), Box::new(self.factor()?))
            } else if self.starts_atom() {
                Node::Mul(Box::new(lhs), Box::new(self.factor()?))
            } else {
                return Ok(lhs);
            };
            lhs = Ast { node, line, col };
        }
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        let (line, col) = self.here();
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek() {
                Some(Tok::Int(k)) => {
                    let k: i64 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    k
                }
                _ => return Err(self.err("expected a natural number exponent")),
            };
            return Ok(Ast {
                node: Node::Pow(Box::new(base), if neg { -e } else { e }),
                line,
                col,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        let (line, col) = self.here();
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        let node = match tok {
            Tok::Int(k) => Node::Int(k),
            Tok::Var(i) => Node::Var(i),
            Tok::Deriv(i) => Node::Deriv(i),
            Tok::D => Node::D,
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                return Ok(e);
            }
            Tok::Sym(c) => return Err(self.err(format!("unexpected `{c}`"))),
        };
        self.pos += 1;
        Ok(Ast { node, line, col })
    }
}

/// Splits on top-level `;` and parses each piece.
fn parse_list(text: &str, line0: usize) -> Result<Vec<Ast>> {
    let toks = lex(text, line0)?;
    let last = text.lines().count().max(1);
    let end = (line0 + last - 1, text.lines().last().map_or(1, |l| l.chars().count() + 1));
    let mut out = Vec::new();
    let mut p = Parser { toks, pos: 0, end };
    loop {
        out.push(p.expr()?);
        if p.pos == p.toks.len() {
            return Ok(out);
        }
        if !p.eat(';') {
            return Err(p.err("expected an operator, `;` or end of input"));
        }
    }
}

fn parse_one(text: &str, line0: usize) -> Result<Ast> {
    let mut v = parse_list(text, line0)?;
    if v.len() != 1 {
        return Err(Error::parse_at(line0, 1, "expected a single expression"));
    }
    Ok(v.pop().unwrap())
}

/// The rings expressions are evaluated in.
trait Ring {
    type E;
    fn constant(&self, c: Rat) -> Self::E;
    fn var(&self, i: usize) -> Res<Self::E>;
    fn deriv(&self, i: usize) -> Res<Self::E>;
    fn bare_d(&self) -> Res<Self::E>;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a ∘ b^-1`
    fn div(&self, a: &Self::E, b: &Self::E) -> Res<Self::E>;
    fn pow(&self, a: &Self::E, e: i64) -> Res<Self::E>;
}

type Res<T> = std::result::Result<T, String>;

fn eval<R: Ring>(ctx: &R, ast: &Ast) -> Result<R::E> {
    let at = |m: String| Error::parse_at(ast.line, ast.col, m);
    Ok(match &ast.node {
        Node::Int(k) => ctx.constant(Rat::from_integer(k.clone())),
        Node::Var(i) => ctx.var(*i).map_err(at)?,
        Node::Deriv(i) => ctx.deriv(*i).map_err(at)?,
        Node::D => ctx.bare_d().map_err(at)?,
        Node::Neg(a) => {
            let v = eval(ctx, a)?;
            ctx.sub(&ctx.constant(Rat::zero()), &v)
        }
        Node::Add(a, b) => ctx.add(&eval(ctx, a)?, &eval(ctx, b)?),
        Node::Sub(a, b) => ctx.sub(&eval(ctx, a)?, &eval(ctx, b)?),
        Node::Mul(a, b) => ctx.mul(&eval(ctx, a)?, &eval(ctx, b)?),
        Node::Div(a, b) => ctx.div(&eval(ctx, a)?, &eval(ctx, b)?).map_err(at)?,
        Node::Pow(a, e) => ctx.pow(&eval(ctx, a)?, *e).map_err(at)?,
    })
}

fn arity(i: usize, n: usize, what: &str) -> Res<()> {
    if i < n {
        Ok(())
    } else {
        Err(format!("{what} {} used with {n} variable(s)", i + 1))
    }
}

struct Univar;

impl Ring for Univar {
    type E = UnivarOperator;
    fn constant(&self, c: Rat) -> UnivarOperator {
        UnivarOperator::multiplier(RatFun::constant(c))
    }
    fn var(&self, i: usize) -> Res<UnivarOperator> {
        arity(i, 1, "variable")?;
        Ok(UnivarOperator::multiplier(RatFun::x()))
    }
    fn deriv(&self, i: usize) -> Res<UnivarOperator> {
        arity(i, 1, "derivation")?;
        Ok(UnivarOperator::d())
    }
    fn bare_d(&self) -> Res<UnivarOperator> {
        Ok(UnivarOperator::d())
    }
    fn add(&self, a: &UnivarOperator, b: &UnivarOperator) -> UnivarOperator {
        a + b
    }
    fn sub(&self, a: &UnivarOperator, b: &UnivarOperator) -> UnivarOperator {
        a - b
    }
    fn mul(&self, a: &UnivarOperator, b: &UnivarOperator) -> UnivarOperator {
        a * b
    }
    fn div(&self, a: &UnivarOperator, b: &UnivarOperator) -> Res<UnivarOperator> {
        let f = as_function(b).ok_or("division only by functions of x")?;
        if f.is_zero() {
            return Err("division by zero".into());
        }
        Ok(a * &UnivarOperator::multiplier(f.inv()))
    }
    fn pow(&self, a: &UnivarOperator, e: i64) -> Res<UnivarOperator> {
        if e >= 0 {
            return Ok(a.pow(e as u32));
        }
        let f = as_function(a).ok_or("negative powers only of functions of x")?;
        if f.is_zero() {
            return Err("division by zero".into());
        }
        Ok(UnivarOperator::multiplier(f.pow(e)))
    }
}

fn as_function(p: &UnivarOperator) -> Option<RatFun> {
    match p.order() {
        None => Some(RatFun::zero()),
        Some(0) => Some(p.coeff(0)),
        _ => None,
    }
}

struct Weyl(usize);

impl Ring for Weyl {
    type E = WeylElement;
    fn constant(&self, c: Rat) -> WeylElement {
        WeylElement::constant(self.0, c)
    }
    fn var(&self, i: usize) -> Res<WeylElement> {
        arity(i, self.0, "variable")?;
        Ok(WeylElement::x(self.0, i))
    }
    fn deriv(&self, i: usize) -> Res<WeylElement> {
        arity(i, self.0, "derivation")?;
        Ok(WeylElement::d(self.0, i))
    }
    fn bare_d(&self) -> Res<WeylElement> {
        if self.0 == 1 {
            Ok(WeylElement::d(1, 0))
        } else {
            Err("`d` is ambiguous in several variables; use dx, dy, dz or d1, d2, ...".into())
        }
    }
    fn add(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        a + b
    }
    fn sub(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        a - b
    }
    fn mul(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        a * b
    }
    fn div(&self, a: &WeylElement, b: &WeylElement) -> Res<WeylElement> {
        let c = weyl_constant(b).ok_or("in the Weyl algebra division is only by nonzero constants")?;
        Ok(a.scale(&(Rat::one() / c)))
    }
    fn pow(&self, a: &WeylElement, e: i64) -> Res<WeylElement> {
        if e >= 0 {
            return Ok(a.pow(e as u32));
        }
        let c = weyl_constant(a).ok_or("negative powers only of nonzero constants")?;
        Ok(WeylElement::constant(self.0, (Rat::one() / c).pow(-e as i32)))
    }
}

fn weyl_constant(w: &WeylElement) -> Option<Rat> {
    let mut it = w.terms();
    let (a, b, c) = it.next()?;
    (it.next().is_none() && a.iter().chain(b).all(|&e| e == 0)).then(|| c.clone())
}

struct Laurent(usize);

impl Ring for Laurent {
    type E = PoleModuleElement;
    fn constant(&self, c: Rat) -> PoleModuleElement {
        PoleModuleElement::monomial(vec![0; self.0], c)
    }
    fn var(&self, i: usize) -> Res<PoleModuleElement> {
        arity(i, self.0, "variable")?;
        let mut a = vec![0; self.0];
        a[i] = 1;
        Ok(PoleModuleElement::monomial(a, Rat::one()))
    }
    fn deriv(&self, _: usize) -> Res<PoleModuleElement> {
        Err("derivations are not allowed in a Laurent polynomial".into())
    }
    fn bare_d(&self) -> Res<PoleModuleElement> {
        self.deriv(0)
    }
    fn add(&self, a: &PoleModuleElement, b: &PoleModuleElement) -> PoleModuleElement {
        a + b
    }
    fn sub(&self, a: &PoleModuleElement, b: &PoleModuleElement) -> PoleModuleElement {
        a - b
    }
    fn mul(&self, a: &PoleModuleElement, b: &PoleModuleElement) -> PoleModuleElement {
        a * b
    }
    fn div(&self, a: &PoleModuleElement, b: &PoleModuleElement) -> Res<PoleModuleElement> {
        let inv = laurent_inverse(b).ok_or("division only by monomials")?;
        Ok(a * &inv)
    }
    fn pow(&self, a: &PoleModuleElement, e: i64) -> Res<PoleModuleElement> {
        let base = if e < 0 {
            laurent_inverse(a).ok_or("negative powers only of monomials")?
        } else {
            a.clone()
        };
        let mut acc = self.constant(Rat::one());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

fn laurent_inverse(m: &PoleModuleElement) -> Option<PoleModuleElement> {
    let mut it = m.terms();
    let (a, c) = it.next()?;
    if it.next().is_some() {
        return None;
    }
    Some(PoleModuleElement::monomial(a.iter().map(|e| -e).collect(), Rat::one() / c))
}

/// One operator in `x` and `d` with rational-function coefficients.
pub fn parse_univar(text: &str) -> Result<UnivarOperator> {
    eval(&Univar, &parse_one(text, 1)?)
}

/// A rational function of `x`.
pub fn parse_ratfun(text: &str) -> Result<RatFun> {
    parse_ratfun_at(text, 1, 1)
}

fn parse_ratfun_at(text: &str, line: usize, col: usize) -> Result<RatFun> {
    let p = eval(&Univar, &parse_one(text, line)?)?;
    as_function(&p).ok_or_else(|| Error::parse_at(line, col, "expected a function of x, found a derivation"))
}

/// Number of variables an expression mentions: the largest index of a
/// variable or derivation, and 1 if only `x`, `d` occur.
pub fn infer_nvars(text: &str) -> Result<usize> {
    let toks = lex(text, 1)?;
    Ok(toks
        .iter()
        .filter_map(|t| match t.tok {
            Tok::Var(i) | Tok::Deriv(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1))
}

/// `;`-separated elements of `A_n`.
pub fn parse_weyl(text: &str, n: usize) -> Result<Vec<WeylElement>> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one variable".into()));
    }
    let ctx = Weyl(n);
    parse_list(text, 1)?.iter().map(|a| eval(&ctx, a)).collect()
}

/// A Laurent polynomial in `n` variables, e.g. `x^-2*y + 1/2`.
pub fn parse_laurent(text: &str, n: usize) -> Result<PoleModuleElement> {
    parse_laurent_at(text, n, 1)
}

fn parse_laurent_at(text: &str, n: usize, line: usize) -> Result<PoleModuleElement> {
    eval(&Laurent(n), &parse_one(text, line)?)
}

/// Meaningful lines with their 1-based numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn keyword<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?;
    (rest.starts_with(char::is_whitespace)).then(|| rest.trim())
}

fn nat(v: &str, line: usize, what: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::parse_at(line, 1, format!("expected a natural number after `{what}`")))
}

fn split_row(row: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in row.char_indices() {
        if c == ';' {
            out.push((start + 1, &row[start..i]));
            start = i + 1;
        }
    }
    out.push((start + 1, &row[start..]));
    out
}

/// `.sys`: `rank m` followed by `m` rows of `;`-separated entries of `A`,
/// where `∂v = v' + A v`.
pub fn parse_system(text: &str) -> Result<ConnectionSystem> {
    let mut lines = content_lines(text);
    let (l0, head) = lines.next().ok_or_else(|| Error::parse_at(1, 1, "empty system file"))?;
    let m = keyword(head, "rank")
        .ok_or_else(|| Error::parse_at(l0, 1, "expected `rank m`"))
        .and_then(|v| nat(v, l0, "rank"))?;
    let mut rows = Vec::new();
    for (ln, line) in lines {
        let cells = split_row(line);
        if cells.len() != m {
            return Err(Error::parse_at(ln, 1, format!("expected {m} entries, found {}", cells.len())));
        }
        rows.push(
            cells
                .into_iter()
                .map(|(col, c)| parse_ratfun_at(c, ln, col))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if rows.len() != m {
        return Err(Error::parse_at(
            text.lines().count().max(1),
            1,
            format!("expected {m} rows, found {}", rows.len()),
        ));
    }
    ConnectionSystem::new(rows)
}

/// `.chart`: `n`, `r`, optional `d`, `rank m`, then one `gamma i` block of
/// `m` rows per coordinate `i = 1..n`; entries are Laurent polynomials.
pub fn parse_chart(text: &str) -> Result<LogLattice> {
    let mut n = None;
    let mut r = None;
    let mut d = None;
    let mut m = None;
    let mut blocks: Vec<(usize, Vec<Vec<PoleModuleElement>>)> = Vec::new();
    for (ln, line) in content_lines(text) {
        if let Some(v) = keyword(line, "n") {
            n = Some(nat(v, ln, "n")?);
        } else if let Some(v) = keyword(line, "r") {
            r = Some(nat(v, ln, "r")?);
        } else if let Some(v) = keyword(line, "d") {
            d = Some(nat(v, ln, "d")?);
        } else if let Some(v) = keyword(line, "rank") {
            m = Some(nat(v, ln, "rank")?);
        } else if let Some(v) = keyword(line, "gamma") {
            let i = nat(v, ln, "gamma")?;
            if i == 0 || n.is_some_and(|n| i > n) {
                return Err(Error::parse_at(ln, 1, format!("no coordinate {i}")));
            }
            blocks.push((i - 1, Vec::new()));
        } else {
            let (nn, mm) = match (n, m) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::parse_at(ln, 1, "matrix rows before `n` and `rank`")),
            };
            let block = blocks
                .last_mut()
                .ok_or_else(|| Error::parse_at(ln, 1, "matrix row outside a `gamma` block"))?;
            let cells = split_row(line);
            if cells.len() != mm {
                return Err(Error::parse_at(ln, 1, format!("expected {mm} entries, found {}", cells.len())));
            }
            block.1.push(
                cells
                    .into_iter()
                    .map(|(_, c)| parse_laurent_at(c, nn, ln))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    let n = n.ok_or_else(|| Error::parse_at(1, 1, "missing `n`"))?;
    let r = r.ok_or_else(|| Error::parse_at(1, 1, "missing `r`"))?;
    let m = m.ok_or_else(|| Error::parse_at(1, 1, "missing `rank`"))?;
    let chart = NCChart::with_shift(n, r, d.unwrap_or(r))?;
    let mut gammas: Vec<Option<Vec<Vec<PoleModuleElement>>>> = vec![None; n];
    for (i, rows) in blocks {
        if rows.len() != m {
            return Err(Error::InvalidInput(format!("gamma {} has {} rows, expected {m}", i + 1, rows.len())));
        }
        if gammas[i].replace(rows).is_some() {
            return Err(Error::InvalidInput(format!("gamma {} given twice", i + 1)));
        }
    }
    // omitted blocks are zero
    let zero = vec![vec![PoleModuleElement::zero(n); m]; m];
    LogLattice::new(chart, gammas.into_iter().map(|g| g.unwrap_or_else(|| zero.clone())).collect())
}

/// `inf`, or a rational number such as `0`, `-1` or `3/2`.
pub fn parse_point(text: &str) -> Result<Point> {
    let t = text.trim();
    if matches!(t, "inf" | "infinity" | "oo") {
        return Ok(Point::Infinity);
    }
    parse_ratfun(t)?
        .as_constant()
        .map(Point::Finite)
        .ok_or_else(|| Error::parse_at(1, 1, format!("`{t}` is not a rational point or `inf`")))
}

/// Parses a polynomial in `x` only, e.g. for point specifications.
pub fn parse_upoly(text: &str) -> Result<UPoly> {
    let f = parse_ratfun(text)?;
    if !f.is_polynomial() {
        return Err(Error::parse_at(1, 1, "expected a polynomial"));
    }
    Ok(f.num().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn operator_examples() {
        let p = parse_univar("x*d - 5").unwrap();
        assert_eq!(p.to_string(), "x*d - 5");
        assert_eq!(parse_univar("d^2 - x").unwrap().to_string(), "d^2 - x");
        // juxtaposition is composition in source order
        assert_eq!(parse_univar("d x").unwrap().to_string(), "x*d + 1");
        assert_eq!(parse_univar("x d").unwrap().to_string(), "x*d");
        assert_eq!(parse_univar("d + 1/(2*x)").unwrap().coeff(0), RatFun::x_pow(-1).scale(&rat(1, 2)));
        assert_eq!(parse_univar("(x + 1)/x^2*d").unwrap().to_string(), "(x + 1)/x^2*d");
        assert_eq!(parse_univar("x^-2").unwrap().coeff(0), RatFun::x_pow(-2));
    }

    #[test]
    fn weyl_generators() {
        let g = parse_weyl("y*dx - 1 ; y^2*dy + x", 2).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].to_string(), "y*dx - 1");
        assert_eq!(g[1].to_string(), "y^2*dy + x");
        assert_eq!(infer_nvars("y*dx - 1 ; y^2*dy + x").unwrap(), 2);
        assert_eq!(infer_nvars("x*d").unwrap(), 1);
        assert_eq!(parse_weyl("dx x", 2).unwrap()[0].to_string(), "x*dx + 1");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_univar("x*d +") {
            Err(Error::Parse { line: 1, column: 6, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_weyl("x*d3", 2) {
            Err(Error::Parse { column: 3, message, .. }) => assert!(message.contains("derivation 3")),
            other => panic!("{other:?}"),
        }
        match parse_univar("x $ 2") {
            Err(Error::Parse { column: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_univar("x/d"), Err(Error::Parse { .. })));
        assert!(matches!(parse_univar("foo"), Err(Error::Parse { .. })));
        assert!(matches!(parse_weyl("d*x", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn system_file() {
        let s = parse_system("# Airy\nrank 2\n0 ; x\n1 ; 0\n").unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.matrix()[0][1], RatFun::x());
        match parse_system("rank 2\n0 ; x\n1\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_system("rank 1\n1/(x") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chart_file() {
        let text = "n 2\nr 2\nrank 1\ngamma 1\n1/2\ngamma 2\n-2/3\n";
        let l = parse_chart(text).unwrap();
        assert_eq!(l.chart, NCChart::new(2, 2).unwrap());
        assert_eq!(l.gammas[1][0][0].to_string(), "-2/3");
        let irr = parse_chart("n 1\nr 1\nrank 1\ngamma 1\nx^-1\n").unwrap();
        assert!(!irr.is_logarithmic());
        assert!(matches!(
            parse_chart("n 2\nr 2\nrank 2\ngamma 1\n0 ; 1\n0 ; 0\ngamma 2\n1 ; 0\n0 ; 0\n"),
            Err(Error::NonIntegrable(_))
        ));
    }

    fn arb_coeff() -> impl Strategy<Value = RatFun> {
        (
            prop::collection::vec(-4i64..5, 0..4),
            prop::collection::vec(-3i64..4, 0..3),
            0usize..3,
            1i64..4,
        )
            .prop_map(|(num, den, xpow, q)| {
                let mut d = vec![1i64];
                d.extend(den);
                let denp = &UPoly::from_ints(&d) * &UPoly::monomial(int(1), xpow);
                let nump = UPoly::from_ints(&num).scale(&rat(1, q));
                if denp.is_zero() {
                    RatFun::from_poly(nump)
                } else {
                    RatFun::new(nump, denp)
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn univar_print_parse_round_trip(cs in prop::collection::vec(arb_coeff(), 0..4)) {
            let p = UnivarOperator::new(cs);
            let text = p.to_string();
            prop_assert_eq!(parse_univar(&text).unwrap(), p, "{}", text);
        }

        #[test]
        fn weyl_print_parse_round_trip(
            terms in prop::collection::vec((prop::collection::vec(0u32..3, 4), -5i64..6, 1i64..4), 0..5)
        ) {
            let mut w = WeylElement::zero(2);
            for (e, c, q) in terms {
                w = &w + &WeylElement::term(2, &e[..2], &e[2..], rat(c, q));
            }
            let text = w.to_string();
            prop_assert_eq!(parse_weyl(&text, 2).unwrap(), vec![w], "{}", text);
        }

        #[test]
        fn laurent_print_parse_round_trip(
            terms in prop::collection::vec((prop::collection::vec(-3i64..3, 3), -5i64..6), 0..5)
        ) {
            let mut f = PoleModuleElement::zero(3);
            for (a, c) in terms {
                f.add_term(a, int(c));
            }
            prop_assert_eq!(parse_laurent(&f.to_string(), 3).unwrap(), f);
        }
    }
}
