//! Sparse multivariate polynomials, monomial orders, and the ASCII grammar.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Two grevlex blocks: the first `k` variables, then the rest; any
    /// monomial involving the first block is larger. An elimination order
    /// for the first block.
    Block(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Block(k) => {
                let k = k.min(a.len());
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
        }
    }
}

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a / b`; caller guarantees divisibility.
pub fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// A polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Poly {
        Poly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Scalar) -> Poly {
        debug_assert_eq!(m.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize, field: &FieldSpec) -> Poly {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::monomial(nvars, m, Scalar::one(field))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// Field of the coefficients, unless the polynomial is zero.
    pub fn field(&self) -> Option<FieldSpec> {
        self.terms.values().next().map(Scalar::field)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> Option<&Scalar> {
        self.terms.get(&vec![0; self.nvars])
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| mono_degree(m)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// Indices of variables that occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m[i] > 0)).collect()
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, Scalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &[u32], c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (mono_mul(k, m), x * c)).collect(),
        }
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Poly {
        match self.leading(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let field = match self.field() {
            Some(f) => f,
            None => return if e == 0 { panic!("0^0 without field") } else { self.clone() },
        };
        let mut acc = Poly::constant(self.nvars, Scalar::one(&field));
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let field = point.first().map(Scalar::field).or_else(|| self.field()).expect("field");
        let mut acc = Scalar::zero(&field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; all images share a ring.
    pub fn compose(&self, images: &[Poly], field: &FieldSpec) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::constant(target, Scalar::one(field)), p.clone()]).collect();
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Moves variable `i` to position `map[i]` in a ring of `nvars` variables.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    nm[map[i]] += e;
                }
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm[i] -= 1;
            out.add_term(nm, c * &Scalar::from_i64(&c.field(), m[i] as i64));
        }
        out
    }

    /// Writes the polynomial as a polynomial in variable `i` with
    /// coefficients free of it: `(degree, coefficient)` pairs.
    pub fn coefficients_in(&self, i: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            nm[i] = 0;
            out.entry(m[i]).or_insert_with(|| Poly::zero(self.nvars)).add_term(nm, c.clone());
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(mono_mul(m, n), c * d);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// Coefficient field plus ordered variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: FieldSpec,
    pub vars: Vec<String>,
}

impl Ring {
    pub fn new(field: FieldSpec, vars: impl IntoIterator<Item = impl Into<String>>) -> Ring {
        Ring { field, vars: vars.into_iter().map(Into::into).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i, &self.field)
    }

    pub fn var_named(&self, name: &str) -> Result<Poly> {
        self.index_of(name)
            .map(|i| self.var(i))
            .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly {
        self.constant(Scalar::one(&self.field))
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        Poly::constant(self.nvars(), c)
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(Scalar::from_i64(&self.field, n))
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        let mut p = Parser { ring: self, toks: tokenize(s)?, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(out)
    }

    /// Parses a scalar literal in this ring's field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let r = Ring { field: self.field.clone(), vars: Vec::new() };
        let p = r.parse(s)?;
        Ok(p.constant_term().cloned().unwrap_or_else(|| Scalar::zero(&self.field)))
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: p }
    }

    pub fn fmt_poly(&self, p: &Poly) -> String {
        self.display(p).to_string()
    }

    /// This ring with extra variables appended.
    pub fn extended(&self, extra: impl IntoIterator<Item = impl Into<String>>) -> Ring {
        let mut vars = self.vars.clone();
        vars.extend(extra.into_iter().map(Into::into));
        Ring { field: self.field.clone(), vars }
    }

    /// Embeds a polynomial of this ring into `target` by matching names.
    pub fn embed_into(&self, p: &Poly, target: &Ring) -> Result<Poly> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.index_of(v).ok_or_else(|| Error::InvalidInput(format!("variable {v} missing in target ring"))))
            .collect::<Result<_>>()?;
        Ok(p.remap(&map, target.nvars()))
    }
}

pub struct PolyDisplay<'a> {
    ring: &'a Ring,
    poly: &'a Poly,
}

fn coeff_needs_parens(c: &Scalar) -> bool {
    match c {
        Scalar::QSqrt { a, b, .. } => !num_traits::Zero::is_zero(a) && !num_traits::Zero::is_zero(b),
        _ => false,
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let terms = self.poly.sorted_terms(MonomialOrder::GrevLex);
        for (idx, (m, c)) in terms.iter().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ring.vars[i].clone()
                    } else {
                        format!("{}^{}", self.ring.vars[i], e)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let mut cs = c.to_string();
            let negative = !coeff_needs_parens(c) && cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if coeff_needs_parens(c) {
                cs = format!("({cs})");
            }
            let body = if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono
            } else {
                format!("{cs}*{mono}")
            };
            match (idx, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().unwrap()));
        } else if ch.is_alphabetic() || ch == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[st..i].iter().collect()));
        } else if "+-*/^()[],".contains(ch) {
            out.push(Tok::Sym(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {ch:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v: i64 = n.try_into().map_err(|_| Error::Parse("integer too large".into()))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse("expected integer".into())),
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(Error::Parse("division only by nonzero constants".into()));
                }
                let c = d.constant_term().unwrap().inv()?;
                acc = acc.scale(&c);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.integer()?;
            if e < 0 {
                return Err(Error::Parse("negative exponent".into()));
            }
            if e == 0 {
                return Ok(self.ring.one());
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let field = &self.ring.field;
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.ring.constant(Scalar::from_bigint(field, &n)))
            }
            Some(Tok::Ident(name)) if name == "sqrt" => {
                self.pos += 1;
                self.expect('(')?;
                let d = self.integer()?;
                self.expect(')')?;
                match field {
                    FieldSpec::QSqrt(e) if *e == d => Ok(self.ring.constant(Scalar::sqrt_generator(field).unwrap())),
                    _ => Err(Error::Parse(format!("sqrt({d}) is not in {field}"))),
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.ring.var_named(&name)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut cs = vec![self.integer()?];
                while self.eat(',') {
                    cs.push(self.integer()?);
                }
                self.expect(']')?;
                Ok(self.ring.constant(Scalar::fq_from_coeffs(field, &cs)?))
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_roundtrip() {
        let r = Ring::new(FieldSpec::Q, ["x", "y"]);
        let p = r.parse("x^2 - 3/2*x*y + 1").unwrap();
        assert_eq!(r.fmt_poly(&p), "x^2 - 3/2*x*y + 1");
        assert_eq!(r.parse(&r.fmt_poly(&p)).unwrap(), p);
        let q = r.parse("(x+y)^2 - x*(x+2*y)").unwrap();
        assert_eq!(r.fmt_poly(&q), "y^2");
    }

    #[test]
    fn parse_sqrt_coefficients() {
        let r = Ring::new(FieldSpec::qsqrt(2).unwrap(), ["x"]);
        let p = r.parse("(1+sqrt(2))*x - sqrt(2)").unwrap();
        assert_eq!(r.fmt_poly(&p), "(1+sqrt(2))*x - sqrt(2)");
        assert_eq!(r.parse(&r.fmt_poly(&p)).unwrap(), p);
        assert!(Ring::new(FieldSpec::Q, ["x"]).parse("sqrt(2)*x").is_err());
    }

    #[test]
    fn residues_mod_p() {
        let r = Ring::new(FieldSpec::fp(5).unwrap(), ["x"]);
        let p = r.parse("x - 1").unwrap();
        assert_eq!(r.fmt_poly(&p), "x + 4");
    }

    #[test]
    fn orders() {
        let a = [1, 0, 2];
        let b = [0, 3, 0];
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::GrevLex.cmp(&a, &b), Ordering::Less);
        // x*z vs y^2 in grevlex: y^2 > x*z
        assert_eq!(MonomialOrder::GrevLex.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(MonomialOrder::Block(1).cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
    }

    #[test]
    fn compose_and_eval() {
        let r = Ring::new(FieldSpec::Q, ["x", "y"]);
        let f = r.parse("x*y - 1").unwrap();
        let s = Ring::new(FieldSpec::Q, ["s"]);
        let img = [s.parse("s^2").unwrap(), s.parse("s + 1").unwrap()];
        let g = f.compose(&img, &FieldSpec::Q);
        assert_eq!(s.fmt_poly(&g), "s^3 + s^2 - 1");
        let v = f.eval(&[Scalar::from_i64(&FieldSpec::Q, 2), Scalar::from_i64(&FieldSpec::Q, 3)]);
        assert_eq!(v, Scalar::from_i64(&FieldSpec::Q, 5));
    }
}
