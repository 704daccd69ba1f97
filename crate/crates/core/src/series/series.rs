//! Truncated generalized power series with explicit precision.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::One;

use super::exponent::Exponent;
use crate::algebra::{FieldSpec, Poly, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: i64 = 12;
pub const HARD_CAP: i64 = 64;

/// Default truncation order and the absolute ceiling on precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub default_order: Exponent,
    pub hard_cap: Exponent,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { default_order: Exponent::int(DEFAULT_PRECISION), hard_cap: Exponent::int(HARD_CAP) }
    }
}

impl PrecisionPolicy {
    pub fn new(default_order: Exponent, hard_cap: Exponent) -> Result<Self> {
        if default_order > hard_cap || hard_cap > Exponent::int(HARD_CAP) {
            return Err(Error::InvalidInput(format!("precision {default_order} exceeds cap {hard_cap}")));
        }
        Ok(PrecisionPolicy { default_order, hard_cap })
    }
}

/// Coefficient ring of a series: a field element or a polynomial over one.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
}

impl Coeff for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

impl Coeff for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: &Scalar) -> Self {
        Poly::scale(self, s)
    }
}

/// `sum c_e t^e + O(t^prec)`, exponents strictly increasing and below
/// `prec`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<C> {
    field: FieldSpec,
    terms: Vec<(Exponent, C)>,
    prec: Exponent,
}

pub type PuiseuxSeries = Series<Scalar>;

fn cap(e: Exponent) -> Exponent {
    e.min(Exponent::int(HARD_CAP))
}

impl<C: Coeff> Series<C> {
    pub fn new(field: FieldSpec, terms: impl IntoIterator<Item = (Exponent, C)>, prec: Exponent) -> Self {
        let prec = cap(prec);
        let mut map: BTreeMap<Exponent, C> = BTreeMap::new();
        for (e, c) in terms {
            if e >= prec {
                continue;
            }
            match map.remove(&e) {
                Some(old) => {
                    let s = old.add(&c);
                    if !s.is_zero() {
                        map.insert(e, s);
                    }
                }
                None => {
                    if !c.is_zero() {
                        map.insert(e, c);
                    }
                }
            }
        }
        Series { field, terms: map.into_iter().collect(), prec }
    }

    pub fn zero(field: FieldSpec, prec: Exponent) -> Self {
        Series { field, terms: Vec::new(), prec: cap(prec) }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn terms(&self) -> &[(Exponent, C)] {
        &self.terms
    }

    pub fn prec(&self) -> Exponent {
        self.prec
    }

    /// No nonzero term is known.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn val(&self) -> Option<Exponent> {
        self.terms.first().map(|t| t.0)
    }

    /// Valuation, or the precision for a series indistinguishable from 0.
    pub fn order(&self) -> Exponent {
        self.val().unwrap_or(self.prec)
    }

    pub fn leading(&self) -> Option<&(Exponent, C)> {
        self.terms.first()
    }

    pub fn coeff(&self, e: Exponent) -> Option<&C> {
        self.terms.iter().find(|t| t.0 == e).map(|t| &t.1)
    }

    pub fn truncate(&self, prec: Exponent) -> Self {
        let prec = prec.min(self.prec);
        Series { field: self.field.clone(), terms: self.terms.iter().filter(|t| t.0 < prec).cloned().collect(), prec }
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = self.prec.min(other.prec);
        Ok(Series::new(self.field.clone(), self.terms.iter().chain(&other.terms).cloned(), prec))
    }

    pub fn neg(&self) -> Self {
        Series { field: self.field.clone(), terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(), prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = (self.prec + other.order()).min(other.prec + self.order());
        let mut acc: BTreeMap<Exponent, C> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = *e1 + *e2;
                if e >= prec {
                    break;
                }
                let p = c1.mul(c2);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&p),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        Ok(Series::new(self.field.clone(), acc, prec))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Series::new(self.field.clone(), self.terms.iter().map(|(e, c)| (*e, c.scale(s))), self.prec)
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        Series::new(self.field.clone(), self.terms.iter().map(|(x, c)| (*x + e, c.clone())), self.prec + e)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series::new(self.field.clone(), self.terms.iter().map(|(e, c)| (*e, f(c))), self.prec)
    }

    pub fn try_map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Series<D>> {
        let terms = self.terms.iter().map(|(e, c)| Ok((*e, f(c)?))).collect::<Result<Vec<_>>>()?;
        Ok(Series::new(self.field.clone(), terms, self.prec))
    }

    pub fn with_prec(&self, prec: Exponent) -> Self {
        Series::new(self.field.clone(), self.terms.iter().cloned(), prec)
    }

    /// Common denominator of all exponents (the ramification index for
    /// rational series).
    pub fn ramification(&self) -> i64 {
        self.terms.iter().fold(1i64, |acc, (e, _)| num_integer::lcm(acc, e.denominator()))
    }

    pub fn has_rational_exponents(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_rational())
    }

    pub fn pow(&self, n: u32, one: C) -> Result<Self> {
        let mut acc = Series::new(self.field.clone(), [(Exponent::zero(), one)], Exponent::int(HARD_CAP));
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl PuiseuxSeries {
    pub fn constant(c: Scalar, prec: Exponent) -> Self {
        Series::new(c.field(), [(Exponent::zero(), c)], prec)
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::constant(Scalar::one(field), Exponent::int(HARD_CAP))
    }

    pub fn monomial(e: Exponent, c: Scalar, prec: Exponent) -> Self {
        Series::new(c.field(), [(e, c)], prec)
    }

    /// Integer-exponent series with integer coefficients; handy for tests
    /// and fixtures.
    pub fn laurent(field: &FieldSpec, terms: &[(i64, i64)], prec: i64) -> Self {
        Series::new(
            field.clone(),
            terms.iter().map(|&(e, c)| (Exponent::int(e), Scalar::from_i64(field, c))),
            Exponent::int(prec),
        )
    }

    /// Multiplicative inverse; the result is known below
    /// `prec(f) - 2 val(f)`.
    pub fn inv(&self) -> Result<Self> {
        let (v, c) = self.leading().cloned().ok_or(Error::ZeroLeadingTerm)?;
        let cinv = c.inv()?;
        // f = c t^v (1 + u)
        let rel = self.prec - v;
        let u = Series::new(
            self.field.clone(),
            self.terms[1..].iter().map(|(e, x)| (*e - v, x * &cinv)),
            rel,
        );
        let minus_u = u.neg();
        let mut acc = Self::constant(Scalar::one(&self.field), rel);
        let mut power = acc.clone();
        loop {
            power = power.mul(&minus_u)?.truncate(rel);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.with_prec(rel).scale(&cinv).shift(-v))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Integer power, negative via the inverse.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        base.pow(n.unsigned_abs() as u32, Scalar::one(&self.field))
    }

    pub fn val_checked(&self) -> Result<Exponent> {
        self.val().ok_or_else(|| {
            Error::PrecisionInsufficient(format!("series is zero to precision {}", self.prec))
        })
    }

    pub fn val_res(&self) -> Result<(Exponent, Scalar)> {
        let v = self.val_checked()?;
        Ok((v, self.res()?))
    }

    /// Residue: the constant coefficient of an integral series.
    pub fn res(&self) -> Result<Scalar> {
        match self.val() {
            Some(v) if v.is_negative() => Err(Error::NegativeValuation(v.to_string())),
            Some(_) => Ok(self.coeff(Exponent::zero()).cloned().unwrap_or_else(|| Scalar::zero(&self.field))),
            None if self.prec.is_positive() => Ok(Scalar::zero(&self.field)),
            None => Err(Error::PrecisionInsufficient(format!("residue unknown below precision {}", self.prec))),
        }
    }

    /// `f(s)` for `val(s) > 0`.
    pub fn subst(&self, s: &Self) -> Result<Self> {
        let (w, lead) = s.leading().cloned().ok_or(Error::ZeroLeadingTerm)?;
        if !w.is_positive() {
            return Err(Error::InvalidInput(format!("substituted series must have positive valuation, got {w}")));
        }
        let linv = lead.inv()?;
        let v = Series::new(self.field.clone(), s.terms[1..].iter().map(|(e, c)| (*e - w, c * &linv)), s.prec - w);
        let field = self.field.clone();
        let lead_pow = |r: Rational64| -> Result<Scalar> { scalar_rational_power(&lead, r, &field) };
        subst_normalized(self, w, &v, lead_pow, Scalar::one(&self.field))
    }

    /// Value at a point where every exponent's coefficient is a scalar:
    /// evaluates a polynomial on a tuple of series.
    pub fn eval_poly(p: &Poly, args: &[PuiseuxSeries], field: &FieldSpec) -> Result<PuiseuxSeries> {
        let mut cache: Vec<Vec<PuiseuxSeries>> = args.iter().map(|a| vec![Self::one(field), a.clone()]).collect();
        let mut acc = Series::zero(field.clone(), Exponent::int(HARD_CAP));
        for (m, c) in p.terms() {
            let mut term = Self::constant(c.clone(), Exponent::int(HARD_CAP));
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&args[i])?;
                    cache[i].push(next);
                }
                term = term.mul(&cache[i][e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// `c^r` for rational `r`, using a deterministic root when `r` is not an
/// integer.
pub fn scalar_rational_power(c: &Scalar, r: Rational64, field: &FieldSpec) -> Result<Scalar> {
    let num = *r.numer();
    let den = *r.denom() as u64;
    let p = field.characteristic();
    if p != 0 && den.is_multiple_of(p) {
        return Err(Error::WildRamification { p, detail: format!("root of order {den}") });
    }
    let base = c.powi(num)?;
    base.nth_root(den)
        .ok_or_else(|| Error::CoefficientFieldTooSmall(format!("{den}-th root of {base} is not in {field}")))
}

fn binomial(e: Rational64, k: u32) -> BigRational {
    let e = BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()));
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (&e - BigRational::from_integer(i.into())) / BigRational::from_integer((i + 1).into());
    }
    acc
}

/// `f(L t^w (1 + v))` with `val(v) > 0`, where `lead_pow(r)` returns
/// `L^r` in the coefficient ring.
pub fn subst_normalized<C: Coeff>(
    f: &PuiseuxSeries,
    w: Exponent,
    v: &Series<C>,
    lead_pow: impl Fn(Rational64) -> Result<C>,
    one: C,
) -> Result<Series<C>> {
    let field = f.field().clone();
    let p = field.characteristic();
    let irr = |e: Exponent| Error::IrrationalExponentInSubstitution(e.to_string());
    for (e, _) in f.terms() {
        let r = e.as_rational().ok_or_else(|| irr(*e))?;
        if p != 0 && (*r.denom() as u64).is_multiple_of(p) {
            return Err(Error::WildRamification { p, detail: format!("exponent {e} has denominator divisible by {p}") });
        }
    }
    if let Some(val_v) = v.val() {
        if !val_v.is_positive() {
            return Err(Error::InvalidInput("correction term must have positive valuation".into()));
        }
    }
    let pf = f.prec().as_rational().ok_or_else(|| irr(f.prec()))?;
    let mut target = w.mul_rational(pf);
    if let Some(emin) = f.val() {
        target = target.min(w.mul_rational(emin.a()) + v.prec());
    }
    let mut acc: Series<C> = Series::zero(field.clone(), target);
    for (e, a) in f.terms() {
        let r = e.a();
        let start = w.mul_rational(r);
        let rel = target - start;
        if !rel.is_positive() {
            continue;
        }
        let vt = v.truncate(rel);
        let mut sum: Series<C> = Series::new(field.clone(), [(Exponent::zero(), one.clone())], rel);
        let mut power = sum.clone();
        let mut k = 0u32;
        loop {
            power = power.mul(&vt)?.truncate(rel);
            k += 1;
            if power.is_zero() {
                break;
            }
            let b = binomial(r, k);
            let bs = Scalar::from_rational(&field, &b).map_err(|_| Error::WildRamification {
                p,
                detail: format!("binomial coefficient of exponent {e} is not p-integral"),
            })?;
            sum = sum.add(&power.scale(&bs))?;
        }
        let lp = lead_pow(r)?;
        let term = sum.map(|c| c.mul(&lp).scale(a)).shift(start);
        acc = acc.add(&term)?;
    }
    Ok(acc.with_prec(target))
}

fn fmt_exp(e: Exponent) -> String {
    if e.is_rational() && e.a().is_integer() {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mut cs = c.to_string();
            let compound = cs.len() > 1 && cs[1..].contains(['+', '-']);
            let negative = !compound && cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            let mono = match *e {
                e if e.is_zero() => String::new(),
                e if e == Exponent::int(1) => "t".into(),
                e => format!("t^{}", fmt_exp(e)),
            };
            let body = match (mono.is_empty(), cs.as_str(), compound) {
                (true, _, _) => cs,
                (false, "1", _) => mono,
                (false, _, true) => format!("({cs})*{mono}"),
                (false, _, false) => format!("{cs}*{mono}"),
            };
            match (i, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        let sep = if self.terms.is_empty() { "" } else { " + " };
        write!(f, "{sep}O(t^{})", fmt_exp(self.prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn product_example() {
        let f = PuiseuxSeries::laurent(&q(), &[(-1, 1), (0, 1)], 12);
        let g = PuiseuxSeries::laurent(&q(), &[(1, 1), (2, -1)], 12);
        let h = f.mul(&g).unwrap();
        assert_eq!(h.terms(), PuiseuxSeries::laurent(&q(), &[(0, 1), (2, -1)], 12).terms());
        assert_eq!(h.prec(), Exponent::int(11));
    }

    #[test]
    fn inverse_examples() {
        let f = PuiseuxSeries::laurent(&q(), &[(0, 1), (1, 1)], 4);
        let inv = f.inv().unwrap();
        assert_eq!(inv, PuiseuxSeries::laurent(&q(), &[(0, 1), (1, -1), (2, 1), (3, -1)], 4));
        let t_inv = PuiseuxSeries::laurent(&q(), &[(-1, 1)], 12);
        assert_eq!(t_inv.inv().unwrap().terms(), PuiseuxSeries::laurent(&q(), &[(1, 1)], 20).terms());
        let two_t2 = PuiseuxSeries::laurent(&q(), &[(2, 2)], 12);
        let i = two_t2.inv().unwrap();
        assert_eq!(i.leading().unwrap().0, Exponent::int(-2));
        assert_eq!(i.leading().unwrap().1, Scalar::from_rational(&q(), &BigRational::new(1.into(), 2.into())).unwrap());
        assert_eq!(Series::zero(q(), Exponent::int(3)).inv(), Err(Error::ZeroLeadingTerm));
    }

    #[test]
    fn val_res_examples() {
        let f = PuiseuxSeries::laurent(&q(), &[(0, 1), (1, 3)], 12);
        assert_eq!(f.val_res().unwrap(), (Exponent::zero(), Scalar::one(&q())));
        let k = FieldSpec::qsqrt(2).unwrap();
        let r = Exponent::parse("sqrt(2)").unwrap();
        let g = PuiseuxSeries::monomial(r, Scalar::one(&k), Exponent::int(12));
        assert_eq!(g.val_res().unwrap(), (r, Scalar::zero(&k)));
        let h = PuiseuxSeries::laurent(&q(), &[(-1, 1), (0, 1)], 12);
        assert_eq!(h.val().unwrap(), Exponent::int(-1));
        assert!(matches!(h.res(), Err(Error::NegativeValuation(_))));
    }

    #[test]
    fn substitution_examples() {
        let s = PuiseuxSeries::laurent(&q(), &[(1, 1), (2, 1)], 8);
        let f = PuiseuxSeries::laurent(&q(), &[(-1, 1)], 12);
        let out = f.subst(&s).unwrap();
        let expect = PuiseuxSeries::laurent(&q(), &[(-1, 1), (0, -1), (1, 1), (2, -1), (3, 1), (4, -1), (5, 1)], 6);
        assert_eq!(out, expect);

        let half = PuiseuxSeries::monomial(Exponent::frac(1, 2), Scalar::one(&q()), Exponent::int(12));
        let r = half.subst(&s).unwrap();
        let sq = r.mul(&r).unwrap();
        assert_eq!(sq.truncate(Exponent::int(6)).terms(), s.truncate(Exponent::int(6)).terms());
        assert_eq!(
            r.coeff(Exponent::frac(5, 2)).unwrap(),
            &Scalar::from_rational(&q(), &BigRational::new((-1).into(), 8.into())).unwrap()
        );

        let k = FieldSpec::qsqrt(2).unwrap();
        let irr = PuiseuxSeries::monomial(Exponent::parse("sqrt(2)").unwrap(), Scalar::one(&k), Exponent::int(12));
        let sk = PuiseuxSeries::laurent(&k, &[(1, 1), (2, 1)], 8);
        assert!(matches!(irr.subst(&sk), Err(Error::IrrationalExponentInSubstitution(_))));
    }

    #[test]
    fn wild_ramification_refused() {
        let f5 = FieldSpec::fp(5).unwrap();
        let f = PuiseuxSeries::monomial(Exponent::frac(1, 5), Scalar::one(&f5), Exponent::int(12));
        let s = PuiseuxSeries::laurent(&f5, &[(1, 1), (2, 1)], 8);
        assert!(matches!(f.subst(&s), Err(Error::WildRamification { .. })));
    }

    #[test]
    fn display() {
        let f = PuiseuxSeries::laurent(&q(), &[(-1, 1), (2, -3)], 5);
        assert_eq!(f.to_string(), "t^-1 - 3*t^2 + O(t^5)");
    }
}
