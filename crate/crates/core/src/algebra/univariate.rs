//! Dense univariate polynomials and the supported factorization fragment.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{FieldSpec, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    /// `coeffs` must be nonempty so the field is known.
    pub fn new(coeffs: Vec<Scalar>) -> UniPoly {
        let field = coeffs.first().expect("nonempty coefficient list").field();
        UniPoly::with_field(field, coeffs)
    }

    pub fn with_field(field: FieldSpec, mut coeffs: Vec<Scalar>) -> UniPoly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: &FieldSpec) -> UniPoly {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> UniPoly {
        UniPoly::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> UniPoly {
        UniPoly::new(vec![c])
    }

    pub fn x(field: &FieldSpec) -> UniPoly {
        UniPoly::with_field(field.clone(), vec![Scalar::zero(field), Scalar::one(field)])
    }

    /// `x - r`.
    pub fn linear(r: &Scalar) -> UniPoly {
        UniPoly::new(vec![r.neg(), Scalar::one(&r.field())])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Scalar::zero(&self.field))
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::with_field(self.field.clone(), self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::with_field(self.field.clone(), (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::with_field(self.field.clone(), (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut out = vec![Scalar::zero(&self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::with_field(self.field.clone(), out)
    }

    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dl = d.lead().unwrap().inv().unwrap();
        let dd = d.deg();
        if r.len() <= dd {
            return (UniPoly::zero(&self.field), self.clone());
        }
        let mut q = vec![Scalar::zero(&self.field); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dc);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::with_field(self.field.clone(), q), UniPoly::with_field(self.field.clone(), r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    pub fn exact_div(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        UniPoly::with_field(
            f.clone(),
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &Scalar::from_i64(f, i as i64)).collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(&self.field), |acc, c| &(&acc * x) + c)
    }

    fn pow_mod(&self, e: &BigUint, m: &UniPoly) -> UniPoly {
        let mut result = UniPoly::one(&self.field);
        let mut base = self.rem(m);
        for i in 0..e.bits() {
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        result
    }

    pub fn from_poly(p: &Poly, var: usize, field: &FieldSpec) -> Result<UniPoly> {
        if p.used_vars().iter().any(|&v| v != var) {
            return Err(Error::InvalidInput("polynomial is not univariate".into()));
        }
        let mut c = vec![Scalar::zero(field); p.degree_in(var) as usize + 1];
        for (m, s) in p.terms() {
            c[m[var] as usize] = s.clone();
        }
        Ok(UniPoly::with_field(field.clone(), c))
    }

    pub fn to_poly(&self, nvars: usize, var: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut m = vec![0; nvars];
            m[var] = i as u32;
            p.add_term(m, c.clone());
        }
        p
    }

    /// Distinct roots in the coefficient field, in a deterministic order.
    pub fn roots(&self) -> Vec<Scalar> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out: Vec<Scalar> = self
            .factor()
            .factors
            .into_iter()
            .filter(|f| f.poly.degree() == Some(1))
            .map(|f| f.poly.coeffs[0].neg())
            .collect();
        out.sort_by_key(Scalar::sort_key);
        out
    }

    pub fn factor(&self) -> Factorization {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let unit = self.lead().unwrap().clone();
        let f = self.monic();
        let mut factors = Vec::new();
        for (g, m) in square_free(&f) {
            let pieces = if self.field.is_finite() { factor_sqfree_finite(&g) } else { factor_sqfree_char0(&g) };
            for (poly, status) in pieces {
                factors.push(Factor { poly, multiplicity: m, status });
            }
        }
        factors.sort_by(|a, b| {
            a.poly.deg().cmp(&b.poly.deg()).then_with(|| {
                let ka: Vec<String> = a.poly.coeffs.iter().map(Scalar::sort_key).collect();
                let kb: Vec<String> = b.poly.coeffs.iter().map(Scalar::sort_key).collect();
                ka.cmp(&kb)
            })
        });
        Factorization { unit, factors }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = super::poly::Ring::new(self.field.clone(), ["x"]);
        write!(f, "{}", ring.fmt_poly(&self.to_poly(1, 0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorStatus {
    Irreducible,
    /// Outside the supported fragment; may or may not be irreducible.
    Unfactored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub poly: UniPoly,
    pub multiplicity: usize,
    pub status: FactorStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.factors.iter().all(|f| f.status == FactorStatus::Irreducible)
    }

    pub fn expand(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.unit.clone());
        for f in &self.factors {
            for _ in 0..f.multiplicity {
                acc = acc.mul(&f.poly);
            }
        }
        acc
    }
}

/// Factorization of a univariate element of a multivariate ring.
pub fn uni_factor(f: &Poly, field: &FieldSpec) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let used = f.used_vars();
    if used.len() > 1 {
        return Err(Error::InvalidInput("polynomial is not univariate".into()));
    }
    let var = used.first().copied().unwrap_or(0);
    let u = UniPoly::from_poly(f, var, field)?;
    let fac = u.factor();
    Ok(fac)
}

/// Square-free decomposition of a monic polynomial: `(g_i, i)` with
/// `f = prod g_i^i`.
fn square_free(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    if f.deg() == 0 {
        return Vec::new();
    }
    let p = f.field.characteristic();
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        c = c.exact_div(&y);
        w = y;
    }
    if c.deg() > 0 {
        debug_assert!(p > 0, "leftover content only in characteristic p");
        let root = pth_root(&c, p);
        for (g, m) in square_free(&root) {
            out.push((g, m * p as usize));
        }
    }
    out
}

fn pth_root(f: &UniPoly, p: u64) -> UniPoly {
    let order = f.field.order().unwrap();
    let n = (order as f64).log(p as f64).round() as u32;
    let coeffs = f
        .coeffs
        .iter()
        .step_by(p as usize)
        .map(|c| c.pow(p.pow(n - 1)))
        .collect();
    UniPoly::with_field(f.field.clone(), coeffs)
}

fn factor_sqfree_finite(f: &UniPoly) -> Vec<(UniPoly, FactorStatus)> {
    let q = BigUint::from(f.field.order().unwrap());
    let mut out = Vec::new();
    let x = UniPoly::x(&f.field);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(&q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            for piece in equal_degree(&g, d, &q) {
                out.push((piece, FactorStatus::Irreducible));
            }
        }
        d += 1;
    }
    if rest.deg() > 0 {
        out.push((rest, FactorStatus::Irreducible));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct degree-`d` factors.
fn equal_degree(f: &UniPoly, d: usize, q: &BigUint) -> Vec<UniPoly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field.clone();
    let order = field.order().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let p = field.characteristic();
    loop {
        let a = UniPoly::with_field(
            field.clone(),
            (0..n).map(|_| field.enumerate(rng.gen::<u128>() % order)).collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map to F_2
            let k = (order as f64).log2().round() as u64 * d as u64;
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..k {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            a.pow_mod(&e, f).sub(&UniPoly::one(&field))
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let mut out = equal_degree(&g, d, q);
            out.extend(equal_degree(&f.exact_div(&g), d, q));
            return out;
        }
    }
}

fn factor_sqfree_char0(f: &UniPoly) -> Vec<(UniPoly, FactorStatus)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    for r in rational_root_candidates(f) {
        if rest.deg() == 0 {
            break;
        }
        let s = Scalar::from_rational(&f.field, &r).unwrap();
        if rest.eval(&s).is_zero() {
            let lin = UniPoly::linear(&s);
            rest = rest.exact_div(&lin);
            out.push((lin, FactorStatus::Irreducible));
        }
    }
    match rest.deg() {
        0 => {}
        1 => out.push((rest.monic(), FactorStatus::Irreducible)),
        2 => {
            let (c, b) = (rest.coeff(0), rest.coeff(1));
            let disc = &(&b * &b) - &(&Scalar::from_i64(&f.field, 4) * &c);
            match disc.sqrt() {
                Some(s) => {
                    let two = Scalar::from_i64(&f.field, 2);
                    for r in [(&b.neg() + &s) / two.clone(), (&b.neg() - &s) / two.clone()] {
                        out.push((UniPoly::linear(&r), FactorStatus::Irreducible));
                    }
                }
                None => out.push((rest, FactorStatus::Irreducible)),
            }
        }
        _ => out.push((rest, FactorStatus::Unfactored)),
    }
    out
}

/// Rational numbers that could be roots of `f` (or of its norm over `Q`
/// when `f` has coefficients in `Q(sqrt(d))`). Candidates are omitted when
/// a coefficient is too large to factor by trial division.
fn rational_root_candidates(f: &UniPoly) -> Vec<BigRational> {
    let rational: Vec<BigRational> = match &f.field {
        FieldSpec::QSqrt(_) => {
            let conj = UniPoly::with_field(f.field.clone(), f.coeffs.iter().map(Scalar::conjugate).collect());
            let norm = f.mul(&conj);
            match norm.coeffs.iter().map(Scalar::as_rational).collect::<Option<Vec<_>>>() {
                Some(v) => v,
                None => return Vec::new(),
            }
        }
        _ => f.coeffs.iter().map(|c| c.as_rational().unwrap()).collect(),
    };
    let lcm = rational.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = rational.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut out = Vec::new();
    let lowest = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if lowest > 0 {
        out.push(BigRational::zero());
    }
    let a0 = ints[lowest].abs();
    let an = ints.last().unwrap().abs();
    let (Some(dp), Some(dq)) = (divisors(&a0), divisors(&an)) else {
        return out;
    };
    for p in &dp {
        for q in &dq {
            let r = BigRational::new(p.clone(), q.clone());
            for s in [r.clone(), -r] {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return Some(vec![BigInt::one()]);
    }
    let mut n = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &d * &d <= n && d <= limit {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        if n.to_u64().is_none_or(|v| v > 1_000_000_000_000) {
            return None;
        }
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(field: &FieldSpec, c: &[i64]) -> UniPoly {
        UniPoly::with_field(field.clone(), c.iter().map(|&x| Scalar::from_i64(field, x)).collect())
    }

    #[test]
    fn spec_examples() {
        let q = FieldSpec::Q;
        let f = up(&q, &[-1, 0, 1]).factor();
        assert_eq!(f.factors.len(), 2);
        assert!(f.is_complete());
        assert_eq!(up(&q, &[-1, 0, 1]).roots(), vec![Scalar::from_i64(&q, -1), Scalar::from_i64(&q, 1)]);

        let f5 = FieldSpec::fp(5).unwrap();
        let f = up(&f5, &[1, 0, 1]).factor();
        let lin: Vec<UniPoly> = f.factors.iter().map(|x| x.poly.clone()).collect();
        assert_eq!(lin, vec![up(&f5, &[-3, 1]), up(&f5, &[-2, 1])]);

        let f = up(&q, &[1, 0, 1]).factor();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].status, FactorStatus::Irreducible);
    }

    #[test]
    fn product_reconstructs_input() {
        let f3 = FieldSpec::fp(3).unwrap();
        // (x^2+1)^3 (x+1)^2 x over F3, includes a p-th power
        let a = up(&f3, &[1, 0, 1]);
        let b = up(&f3, &[1, 1]);
        let x = UniPoly::x(&f3);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b).mul(&x).scale(&Scalar::from_i64(&f3, 2));
        let fac = f.factor();
        assert!(fac.is_complete());
        assert_eq!(fac.expand(), f);
        let mult: Vec<usize> = fac.factors.iter().map(|f| f.multiplicity).collect();
        assert_eq!(mult.iter().sum::<usize>(), 6);
    }

    #[test]
    fn characteristic_two_splitting() {
        let f4 = FieldSpec::fq_degree(2, 2).unwrap();
        // x^4 - x splits completely over F4
        let f = up(&f4, &[0, -1, 0, 0, 1]);
        assert_eq!(f.roots().len(), 4);
    }

    #[test]
    fn quadratic_field_roots() {
        let k = FieldSpec::qsqrt(2).unwrap();
        let f = up(&k, &[-2, 0, 1]);
        let r = f.roots();
        assert_eq!(r.len(), 2);
        for s in r {
            assert!(f.eval(&s).is_zero());
        }
        let cubic = up(&FieldSpec::Q, &[-2, 0, 0, 1]).factor();
        assert_eq!(cubic.factors[0].status, FactorStatus::Unfactored);
    }

    #[test]
    fn rational_roots_with_denominators() {
        let q = FieldSpec::Q;
        // (2x - 1)(3x + 2) = 6x^2 + x - 2
        let r = up(&q, &[-2, 1, 6]).roots();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&Scalar::from_rational(&q, &BigRational::new(1.into(), 2.into())).unwrap()));
    }
}
