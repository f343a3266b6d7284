//! Text syntax for superfunctions, deformations and cochains.
//!
//! Expressions use `x1.., xi1.., th1.., hbar` (or `h`), rational literals,
//! `sqrt(n)`, `sqrt(p/q)`, `sqrt(pi)`, `pi`, `gauss(c)`, `+ - * / ^` and
//! parentheses. Division is only by nonzero rational constants. Everything
//! the `Display` impls print parses back to an equal value.
//!
//! Deformation specs: `c1(zeta=E, kappa=E)`, `c1c(zeta=E, kappa=E, c=E)`,
//! `c3(zeta=E, c3=E)`, `antieven(c=E)`, `antiodd()` and
//! `general(zeta=E, eta=E, h1=E, h2=E)`; omitted arguments default to 0
//! (`kappa` to 1), and an omitted `eta` is solved from the constraints.
//!
//! Cochain specs: `m0`, `anti`, `moyal(E)`, `m1`, `m3`, `mzeta(E)`, `m23`,
//! `jzeta(E)`, `mu`, combined as `a*F + b*G` with scalar prefixes such as
//! `th1*m3` or `(1 + h^2)*mu`.

use num_rational::Rational64;
use num_traits::Signed;
use thiserror::Error;

use crate::cochains::Cochain;
use crate::deformations::{
    build_anti_even, build_anti_odd, build_c1, build_c1c, build_c3, build_general_odd, solve_eta, DeformError,
    Deformation,
};
use crate::scalars::{Coefficient, RadicalNumber, Scalar};
use crate::superfunc::{Ctx, SuperFunction, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("argument '{0}' must be a constant")]
    NotConstant(String),
    #[error(transparent)]
    Deform(#[from] DeformError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(chars[i].1.to_digit(10).unwrap() as u64))
                    .ok_or_else(|| ParseError::new(pos, "number too large"))?;
                i += 1;
            }
            out.push((pos, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^(),=".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::new(pos, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a, Q: Coefficient> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ctx: &'a Ctx,
    _q: std::marker::PhantomData<Q>,
}

impl<'a, Q: Coefficient> Parser<'a, Q> {
    fn new(text: &str, ctx: &'a Ctx) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            end: text.len(),
            ctx,
            _q: std::marker::PhantomData,
        })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), format!("expected '{c}'")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at < self.toks.len() {
            Err(ParseError::new(self.pos(), "expected end of input"))
        } else {
            Ok(())
        }
    }

    fn constant(&self, s: Scalar<Q>) -> SuperFunction<Q> {
        SuperFunction::constant(self.ctx, s)
    }

    fn expr(&mut self) -> Result<SuperFunction<Q>, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add_ref(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub_ref(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SuperFunction<Q>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul_ref(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.unary()?;
                let q = d
                    .as_constant()
                    .and_then(|s| s.as_rational())
                    .filter(|q| !q.is_zero())
                    .ok_or_else(|| ParseError::new(pos, "can only divide by a nonzero rational constant"))?;
                acc = acc.scale(&(Q::one() / q));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SuperFunction<Q>, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg_ref());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<SuperFunction<Q>, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.peek() {
                Some(Tok::Num(n)) => {
                    let n = u32::try_from(*n).map_err(|_| ParseError::new(pos, "exponent too large"))?;
                    self.at += 1;
                    Ok(base.pow(n))
                }
                _ => Err(ParseError::new(pos, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SuperFunction<Q>, ParseError> {
        let pos = self.pos();
        let sctx = self.ctx.scalar_ctx();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(self.constant(Scalar::from_coeff(sctx, Q::from_u64_int(n))))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                self.ident(&name, pos)
            }
            Some(Tok::Op(c)) => Err(ParseError::new(pos, format!("expected a value, found '{c}'"))),
            None => Err(ParseError::new(pos, "expected a value, found end of input")),
        }
    }

    fn ident(&mut self, name: &str, pos: usize) -> Result<SuperFunction<Q>, ParseError> {
        let sctx = self.ctx.scalar_ctx();
        match name {
            "hbar" | "h" => return Ok(self.constant(Scalar::hbar_power(sctx, 1))),
            "pi" => return Ok(self.constant(Scalar::from_radical(sctx, RadicalNumber::pi_half_power(2)))),
            "sqrt" => return self.sqrt(pos),
            "gauss" => {
                self.expect('(')?;
                let inner_pos = self.pos();
                let e = self.expr()?;
                self.expect(')')?;
                let c = e
                    .as_constant()
                    .and_then(|s| s.as_rational())
                    .and_then(|q| to_rational64(&q))
                    .ok_or_else(|| ParseError::new(inner_pos, "gauss weight must be a rational constant"))?;
                return SuperFunction::gauss(self.ctx, c).map_err(|e| ParseError::new(inner_pos, e.to_string()));
            }
            _ => {}
        }
        let var = |prefix: &str| -> Option<usize> {
            name.strip_prefix(prefix)
                .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) && !d.starts_with('0'))
                .and_then(|d| d.parse::<usize>().ok())
        };
        let unknown = || ParseError::new(pos, format!("unknown variable '{name}'"));
        if let Some(j) = var("th") {
            let s = Scalar::theta(sctx, j - 1).map_err(|_| unknown())?;
            return Ok(self.constant(s));
        }
        if let Some(a) = var("xi") {
            return SuperFunction::var(self.ctx, Var::Xi(a - 1)).map_err(|_| unknown());
        }
        if let Some(i) = var("x") {
            return SuperFunction::var(self.ctx, Var::X(i - 1)).map_err(|_| unknown());
        }
        Err(unknown())
    }

    fn sqrt(&mut self, pos: usize) -> Result<SuperFunction<Q>, ParseError> {
        let sctx = self.ctx.scalar_ctx();
        self.expect('(')?;
        if self.peek() == Some(&Tok::Ident("pi".into())) && self.toks.get(self.at + 1).map(|t| &t.1) == Some(&Tok::Op(')')) {
            self.at += 2;
            return Ok(self.constant(Scalar::from_radical(sctx, RadicalNumber::pi_half_power(1))));
        }
        let e = self.expr()?;
        self.expect(')')?;
        let q = e
            .as_constant()
            .and_then(|s| s.as_rational())
            .and_then(|q| to_rational64(&q))
            .filter(|q| !q.is_negative())
            .ok_or_else(|| ParseError::new(pos, "sqrt takes pi or a nonnegative rational"))?;
        let r = RadicalNumber::sqrt_ratio(*q.numer() as u64, *q.denom() as u64);
        Ok(self.constant(Scalar::from_radical(sctx, r)))
    }
}

fn to_rational64<Q: Coefficient>(q: &Q) -> Option<Rational64> {
    // exact for the coefficient fields in use: go through the decimal
    // rendering "p" or "p/q"
    let s = q.to_string();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.trim().parse::<i64>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    let r = Rational64::new(n, d);
    // reject values that only look rational (floating-point fields)
    (Q::from_ratio(*r.numer(), *r.denom()) == *q).then_some(r)
}

/// Parses a superfunction expression in the given context.
pub fn parse_expression<Q: Coefficient>(text: &str, ctx: &Ctx) -> Result<SuperFunction<Q>, ParseError> {
    let mut p = Parser::<Q>::new(text, ctx)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses an expression that must be constant in `z`.
pub fn parse_scalar<Q: Coefficient>(text: &str, ctx: &Ctx) -> Result<Scalar<Q>, ParseError> {
    let e = parse_expression::<Q>(text, ctx)?;
    e.as_constant()
        .ok_or_else(|| ParseError::new(0, format!("'{}' must not depend on x or xi", text.trim())))
}

/// Splits at top-level occurrences of `sep`, returning `(offset, piece)`.
fn split_top(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

/// `name(args)` with balanced parentheses, or a bare `name`.
fn call_form(text: &str) -> Option<(&str, Option<&str>)> {
    let t = text.trim();
    match t.find('(') {
        None => Some((t, None)),
        Some(open) => {
            let name = t[..open].trim();
            if name.is_empty() || !t.ends_with(')') {
                return None;
            }
            let inner = &t[open + 1..t.len() - 1];
            let mut depth = 0i32;
            for c in inner.chars() {
                depth += match c {
                    '(' => 1,
                    ')' => -1,
                    _ => 0,
                };
                if depth < 0 {
                    return None;
                }
            }
            (depth == 0).then_some((name, Some(inner)))
        }
    }
}

fn keyword_args(inner: &str) -> Result<Vec<(String, String)>, ParseError> {
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    split_top(inner, ',')
        .into_iter()
        .map(|(off, piece)| {
            let (k, v) = piece
                .split_once('=')
                .ok_or_else(|| ParseError::new(off, format!("expected key=value, found '{}'", piece.trim())))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// Parses and builds a deformation from its spec string.
pub fn parse_deformation<Q: Coefficient>(text: &str, ctx: &Ctx) -> Result<Deformation<Q>, SpecError> {
    let (name, inner) = call_form(text).ok_or_else(|| ParseError::new(0, "expected name(arguments)"))?;
    let args = keyword_args(inner.unwrap_or(""))?;
    let allowed: &[&str] = match name {
        "c1" => &["zeta", "kappa"],
        "c1c" => &["zeta", "kappa", "c"],
        "c3" => &["zeta", "c3"],
        "antieven" => &["c"],
        "antiodd" => &[],
        "general" => &["zeta", "eta", "h1", "h2"],
        _ => {
            return Err(SpecError::Unknown {
                kind: "deformation",
                name: name.to_string(),
            })
        }
    };
    for (k, _) in &args {
        if !allowed.contains(&k.as_str()) {
            return Err(SpecError::Unknown {
                kind: "argument",
                name: format!("{name}.{k}"),
            });
        }
    }
    let get = |k: &str| args.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
    let func = |k: &str| -> Result<SuperFunction<Q>, SpecError> {
        Ok(match get(k) {
            Some(v) => parse_expression(v, ctx)?,
            None => SuperFunction::zero(ctx),
        })
    };
    let scalar = |k: &str, default: i64| -> Result<Scalar<Q>, SpecError> {
        match get(k) {
            Some(v) => parse_expression::<Q>(v, ctx)?
                .as_constant()
                .ok_or_else(|| SpecError::NotConstant(k.to_string())),
            None => Ok(Scalar::from_int(ctx.scalar_ctx(), default)),
        }
    };
    let d = match name {
        "c1" => build_c1(&func("zeta")?, &scalar("kappa", 1)?)?,
        "c1c" => build_c1c(&func("zeta")?, &scalar("kappa", 1)?, &scalar("c", 0)?)?,
        "c3" => build_c3(&func("zeta")?, &scalar("c3", 0)?)?,
        "antieven" => build_anti_even(ctx, &scalar("c", 0)?)?,
        "antiodd" => build_anti_odd(ctx)?,
        _ => {
            let zeta = func("zeta")?;
            let h1 = scalar("h1", 0)?;
            match get("eta") {
                Some(_) => build_general_odd(&zeta, &func("eta")?, &h1, &scalar("h2", 0)?)?,
                None => {
                    let h2 = get("h2").map(|_| scalar("h2", 0)).transpose()?;
                    let sol = solve_eta(&zeta, &h1, h2.as_ref())?;
                    build_general_odd(&zeta, &sol.eta, &h1, &sol.h2)?
                }
            }
        }
    };
    Ok(d)
}

/// Parses a cochain from the mini-language.
pub fn parse_cochain<Q: Coefficient>(text: &str, ctx: &Ctx) -> Result<Cochain<Q>, SpecError> {
    parse_cochain_at(text, ctx, 0)
}

fn parse_cochain_at<Q: Coefficient>(text: &str, ctx: &Ctx, offset: usize) -> Result<Cochain<Q>, SpecError> {
    let mut parts = Vec::new();
    for (off, piece, negative) in split_sum(text) {
        let c = parse_cochain_term::<Q>(piece, ctx, offset + off)?;
        parts.push(if negative {
            Cochain::scaled(&Scalar::from_int(ctx.scalar_ctx(), -1), &c)
        } else {
            c
        });
    }
    Ok(Cochain::sum(parts).map_err(|e| ParseError::new(offset, e.to_string()))?)
}

/// Splits at top-level binary `+`/`-`.
fn split_sum(text: &str) -> Vec<(usize, &str, bool)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let mut prev: Option<char> = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let binary = matches!(prev, Some(p) if !"*/^(+-".contains(p));
                if binary {
                    out.push((start, &text[start..i], negative));
                    start = i + 1;
                    negative = c == '-';
                } else if prev.is_none() && c == '-' {
                    start = i + 1;
                    negative = true;
                }
            }
            _ => {}
        }
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    out.push((start, &text[start..], negative));
    out
}

fn parse_cochain_term<Q: Coefficient>(text: &str, ctx: &Ctx, offset: usize) -> Result<Cochain<Q>, SpecError> {
    let factors = split_top(text, '*');
    let (last_off, last) = *factors.last().expect("split yields a piece");
    let base = parse_cochain_base::<Q>(last, ctx, offset + last_off)?;
    if factors.len() == 1 {
        return Ok(base);
    }
    let prefix = &text[..last_off - 1];
    let s = parse_expression::<Q>(prefix, ctx)
        .map_err(|e| ParseError::new(offset + e.position, e.message))?
        .as_constant()
        .ok_or_else(|| ParseError::new(offset, "cochain coefficients must be constant"))?;
    Ok(Cochain::scaled(&s, &base))
}

fn parse_cochain_base<Q: Coefficient>(text: &str, ctx: &Ctx, offset: usize) -> Result<Cochain<Q>, SpecError> {
    let t = text.trim();
    if t.starts_with('(') && t.ends_with(')') {
        let lead = text.len() - text.trim_start().len();
        return parse_cochain_at(&t[1..t.len() - 1], ctx, offset + lead + 1);
    }
    let (name, inner) = call_form(t).ok_or_else(|| ParseError::new(offset, format!("malformed cochain '{t}'")))?;
    let arg = |f: fn(&SuperFunction<Q>) -> Cochain<Q>| -> Result<Cochain<Q>, SpecError> {
        let inner = inner.ok_or_else(|| ParseError::new(offset, format!("{name} needs an argument")))?;
        Ok(f(&parse_expression(inner, ctx)?))
    };
    let bare = |c: Cochain<Q>| -> Result<Cochain<Q>, SpecError> {
        match inner {
            None => Ok(c),
            Some(_) => Err(ParseError::new(offset, format!("{name} takes no argument")).into()),
        }
    };
    match name {
        "m0" => bare(Cochain::poisson(ctx)),
        "anti" => bare(Cochain::antibracket(ctx)),
        "m1" => bare(Cochain::m1(ctx)),
        "m3" => bare(Cochain::m3(ctx)),
        "m23" => bare(Cochain::m23(ctx)),
        "mu" => bare(Cochain::mu(ctx)),
        "mzeta" => arg(Cochain::m_zeta),
        "jzeta" => arg(Cochain::j_zeta),
        "moyal" => {
            let inner = inner.ok_or_else(|| ParseError::new(offset, "moyal needs an argument"))?;
            let k = parse_scalar::<Q>(inner, ctx)?;
            Ok(Cochain::moyal(ctx, k))
        }
        _ => Err(SpecError::Unknown {
            kind: "cochain",
            name: name.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superfunc::{weight, SymplecticContext};
    use num_rational::BigRational;

    type F = SuperFunction<BigRational>;

    fn ctx() -> Ctx {
        SymplecticContext::standard(4, 2, 1, 6).unwrap()
    }

    fn p(s: &str) -> F {
        parse_expression(s, &ctx()).unwrap()
    }

    #[test]
    fn basic_expressions() {
        let c = ctx();
        let g = F::gauss(&c, weight(1)).unwrap();
        assert_eq!(p("x1^2 * gauss(1)"), &F::x(&c, 0).pow(2) * &g);
        assert_eq!(p("xi2*xi1"), (&F::xi(&c, 0) * &F::xi(&c, 1)).neg_ref());
        assert_eq!(p("2*x1 - x1"), F::x(&c, 0));
        assert_eq!(p("-x1"), F::x(&c, 0).neg_ref());
        assert_eq!(p("x1/2*4"), F::x(&c, 0).scale_ratio(2, 1));
        assert_eq!(p("sqrt(8)").to_string(), "2*sqrt(2)");
        assert_eq!(p("sqrt(pi)^2").to_string(), "pi");
        assert_eq!(p("hbar^2*th1").to_string(), "h^2*th1");
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_expression::<BigRational>("xi3", &ctx()).unwrap_err();
        assert!(e.message.contains("unknown variable"), "{e}");
        let e = parse_expression::<BigRational>("x1 + * x2", &ctx()).unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_expression::<BigRational>("x1 / x2", &ctx()).unwrap_err();
        assert!(e.message.contains("rational"));
        assert!(parse_expression::<BigRational>("(x1", &ctx()).is_err());
        assert!(parse_expression::<BigRational>("th2", &ctx()).is_err());
    }

    #[test]
    fn rendering_round_trips() {
        for s in [
            "3*x1^2*gauss(1)*xi1*xi2 - 1/2*th1*x2",
            "(1/2 + h^2)*x3*gauss(1/2) + sqrt(2)*pi*xi1",
            "-h*th1 + 7",
        ] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s} -> {f}");
        }
    }

    #[test]
    fn deformation_specs() {
        let c = SymplecticContext::standard(2, 2, 1, 6).unwrap();
        let d = parse_deformation::<BigRational>("antiodd()", &c).unwrap();
        assert_eq!(d.flavor, crate::deformations::Flavor::AntiOdd);
        let c4 = ctx();
        let d = parse_deformation::<BigRational>("c3(zeta=h^2*x1*x2, c3=h^2)", &c4).unwrap();
        assert_eq!(d.flavor, crate::deformations::Flavor::C3);
        assert!(matches!(
            parse_deformation::<BigRational>("c3(zeta=x1*x2)", &c4),
            Err(SpecError::Deform(DeformError::Predicate(_)))
        ));
        assert!(matches!(
            parse_deformation::<BigRational>("c9()", &c4),
            Err(SpecError::Unknown { .. })
        ));
        let w = SymplecticContext::standard(4, 5, 2, 6).unwrap();
        let d = parse_deformation::<BigRational>("general(zeta=xi1, h2=1)", &w).unwrap();
        assert!(d.params.eta.unwrap().is_zero());
    }

    #[test]
    fn cochain_specs() {
        let c = ctx();
        let m = parse_cochain::<BigRational>("m0 + h^2*m3 - th1*m3", &c).unwrap();
        let f = p("x1*gauss(1)*xi1*xi2");
        let g = p("gauss(2)");
        let expect = Cochain::poisson(&c)
            .eval(&[f.clone(), g.clone()])
            .unwrap()
            .add_ref(
                &Cochain::m3(&c)
                    .eval(&[f.clone(), g.clone()])
                    .unwrap()
                    .scale_left(&parse_scalar("h^2 - th1", &c).unwrap()),
            );
        assert_eq!(m.eval(&[f, g]).unwrap(), expect);
        assert!(parse_cochain::<BigRational>("2*(m0 + mzeta(x1*x2))", &c).is_ok());
        assert!(parse_cochain::<BigRational>("m7", &c).is_err());
        assert!(parse_cochain::<BigRational>("x1*m0", &c).is_err());
    }
}
