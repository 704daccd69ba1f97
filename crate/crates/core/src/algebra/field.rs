//! Exact coefficient fields and their elements.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fpoly;
use crate::error::{Error, Result};

/// A finite field `F_p[z]/(m(z))` with `m` monic irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtField {
    p: u64,
    /// Ascending coefficients, monic, degree >= 2.
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.degree() as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Q,
    QSqrt(i64),
    Fp(u64),
    Fq(Arc<ExtField>),
}

fn is_square_i64(d: i64) -> bool {
    d >= 0 && {
        let r = (d as u64).sqrt();
        r * r == d as u64
    }
}

impl FieldSpec {
    pub fn q() -> Self {
        FieldSpec::Q
    }

    pub fn qsqrt(d: i64) -> Result<Self> {
        if d <= 1 || is_square_i64(d) {
            return Err(Error::InvalidField(format!("sqrt({d}): d must be a positive nonsquare")));
        }
        Ok(FieldSpec::QSqrt(d))
    }

    pub fn fp(p: u64) -> Result<Self> {
        if !fpoly::is_prime(p) || p >= 1 << 32 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(FieldSpec::Fp(p))
    }

    /// `modulus` is given with ascending coefficients and must be monic.
    pub fn fq(p: u64, modulus: Vec<u64>) -> Result<Self> {
        FieldSpec::fp(p)?;
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        let modulus = fpoly::trim(modulus);
        if modulus.len() < 3 || modulus.last() != Some(&1) {
            return Err(Error::InvalidField("modulus must be monic of degree >= 2".into()));
        }
        if !fpoly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible mod {p}")));
        }
        Ok(FieldSpec::Fq(Arc::new(ExtField { p, modulus })))
    }

    /// `F_{p^n}` with a deterministically chosen modulus.
    pub fn fq_degree(p: u64, n: usize) -> Result<Self> {
        FieldSpec::fp(p)?;
        match n {
            0 => Err(Error::InvalidField("extension degree 0".into())),
            1 => Ok(FieldSpec::Fp(p)),
            _ => FieldSpec::fq(p, fpoly::find_irreducible(p, n)),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Q | FieldSpec::QSqrt(_) => 0,
            FieldSpec::Fp(p) => *p,
            FieldSpec::Fq(e) => e.p,
        }
    }

    /// Number of elements, or `None` in characteristic zero.
    pub fn order(&self) -> Option<u128> {
        match self {
            FieldSpec::Fp(p) => Some(*p as u128),
            FieldSpec::Fq(e) => Some(e.order()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Element number `k` of a finite field in a fixed enumeration.
    pub fn enumerate(&self, k: u128) -> Scalar {
        match self {
            FieldSpec::Fp(p) => Scalar::Fp { v: (k % *p as u128) as u64, p: *p },
            FieldSpec::Fq(e) => {
                let mut v = k;
                let mut c = Vec::with_capacity(e.degree());
                for _ in 0..e.degree() {
                    c.push((v % e.p as u128) as u64);
                    v /= e.p as u128;
                }
                Scalar::Fq { c, f: e.clone() }
            }
            _ => Scalar::from_i64(self, k as i64),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::QSqrt(d) => write!(f, "Q(sqrt({d}))"),
            FieldSpec::Fp(p) => write!(f, "F{p}"),
            FieldSpec::Fq(e) => write!(f, "F{}^{}", e.p, e.degree()),
        }
    }
}

/// An element of a [`FieldSpec`] in canonical form.
///
/// Arithmetic through the operator traits panics on field mismatch; the
/// `try_*` methods return [`Error::FieldMismatch`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    QSqrt { a: BigRational, b: BigRational, d: i64 },
    Fp { v: u64, p: u64 },
    Fq { c: Vec<u64>, f: Arc<ExtField> },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mod_i64(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

fn mod_big(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl Scalar {
    pub fn zero(field: &FieldSpec) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: &FieldSpec) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: &FieldSpec, n: i64) -> Scalar {
        match field {
            FieldSpec::Q => Scalar::Q(rat(n)),
            FieldSpec::QSqrt(d) => Scalar::QSqrt { a: rat(n), b: BigRational::zero(), d: *d },
            FieldSpec::Fp(p) => Scalar::Fp { v: mod_i64(n, *p), p: *p },
            FieldSpec::Fq(e) => {
                let mut c = vec![0; e.degree()];
                c[0] = mod_i64(n, e.p);
                Scalar::Fq { c, f: e.clone() }
            }
        }
    }

    /// Image of a rational number; fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn from_rational(field: &FieldSpec, r: &BigRational) -> Result<Scalar> {
        match field {
            FieldSpec::Q => Ok(Scalar::Q(r.clone())),
            FieldSpec::QSqrt(d) => Ok(Scalar::QSqrt { a: r.clone(), b: BigRational::zero(), d: *d }),
            _ => {
                let num = Scalar::from_bigint(field, r.numer());
                let den = Scalar::from_bigint(field, r.denom());
                num.try_div(&den)
            }
        }
    }

    pub fn from_bigint(field: &FieldSpec, n: &BigInt) -> Scalar {
        match field {
            FieldSpec::Q => Scalar::Q(BigRational::from_integer(n.clone())),
            FieldSpec::QSqrt(d) => Scalar::QSqrt {
                a: BigRational::from_integer(n.clone()),
                b: BigRational::zero(),
                d: *d,
            },
            FieldSpec::Fp(p) => Scalar::Fp { v: mod_big(n, *p), p: *p },
            FieldSpec::Fq(e) => {
                let mut c = vec![0; e.degree()];
                c[0] = mod_big(n, e.p);
                Scalar::Fq { c, f: e.clone() }
            }
        }
    }

    /// `a + b*sqrt(d)`; only valid in `Q(sqrt(d))`.
    pub fn qsqrt(a: BigRational, b: BigRational, d: i64) -> Scalar {
        Scalar::QSqrt { a, b, d }
    }

    /// The adjoined square root `sqrt(d)`, when the field has one.
    pub fn sqrt_generator(field: &FieldSpec) -> Option<Scalar> {
        match field {
            FieldSpec::QSqrt(d) => Some(Scalar::QSqrt { a: BigRational::zero(), b: BigRational::one(), d: *d }),
            _ => None,
        }
    }

    /// The class of `z` in `F_p[z]/(m)`.
    pub fn fq_generator(field: &FieldSpec) -> Option<Scalar> {
        match field {
            FieldSpec::Fq(e) => {
                let mut c = vec![0; e.degree()];
                c[1] = 1;
                Some(Scalar::Fq { c, f: e.clone() })
            }
            _ => None,
        }
    }

    pub fn fq_from_coeffs(field: &FieldSpec, coeffs: &[i64]) -> Result<Scalar> {
        match field {
            FieldSpec::Fq(e) => {
                if coeffs.len() > e.degree() {
                    return Err(Error::Parse("too many extension coefficients".into()));
                }
                let mut c = vec![0; e.degree()];
                for (i, &x) in coeffs.iter().enumerate() {
                    c[i] = mod_i64(x, e.p);
                }
                Ok(Scalar::Fq { c, f: e.clone() })
            }
            _ => Err(Error::Parse(format!("extension literal outside F_q (field {field})"))),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Q,
            Scalar::QSqrt { d, .. } => FieldSpec::QSqrt(*d),
            Scalar::Fp { p, .. } => FieldSpec::Fp(*p),
            Scalar::Fq { f, .. } => FieldSpec::Fq(f.clone()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.field().characteristic()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::QSqrt { a, b, .. } => a.is_zero() && b.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Fq { c, .. } => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::QSqrt { a, b, .. } => a.is_one() && b.is_zero(),
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Fq { c, .. } => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
        }
    }

    /// The rational value, if this element lies in the prime field of a
    /// characteristic-zero field.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Q(r) => Some(r.clone()),
            Scalar::QSqrt { a, b, .. } if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    /// Integer representative in the prime field of a finite field.
    pub fn as_prime_residue(&self) -> Option<u64> {
        match self {
            Scalar::Fp { v, .. } => Some(*v),
            Scalar::Fq { c, .. } if c[1..].iter().all(|&x| x == 0) => Some(c[0]),
            _ => None,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch(self.field().to_string(), other.field().to_string())
    }

    pub fn same_field(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Q(_), Scalar::Q(_)) => true,
            (Scalar::QSqrt { d, .. }, Scalar::QSqrt { d: e, .. }) => d == e,
            (Scalar::Fp { p, .. }, Scalar::Fp { p: q, .. }) => p == q,
            (Scalar::Fq { f, .. }, Scalar::Fq { f: g, .. }) => Arc::ptr_eq(f, g) || f == g,
            _ => false,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match (self, other) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (Scalar::QSqrt { a, b, d }, Scalar::QSqrt { a: c, b: e, d: d2 }) if d == d2 => {
                Scalar::QSqrt { a: a + c, b: b + e, d: *d }
            }
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, p: q }) if p == q => Scalar::Fp { v: (v + w) % p, p: *p },
            (Scalar::Fq { c, f }, Scalar::Fq { c: c2, f: f2 }) if f == f2 => Scalar::Fq {
                c: c.iter().zip(c2).map(|(x, y)| (x + y) % f.p).collect(),
                f: f.clone(),
            },
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(x) => Scalar::Q(-x),
            Scalar::QSqrt { a, b, d } => Scalar::QSqrt { a: -a, b: -b, d: *d },
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
            Scalar::Fq { c, f } => Scalar::Fq { c: c.iter().map(|x| (f.p - x) % f.p).collect(), f: f.clone() },
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match (self, other) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            (Scalar::QSqrt { a, b, d }, Scalar::QSqrt { a: c, b: e, d: d2 }) if d == d2 => {
                let dd = rat(*d);
                Scalar::QSqrt { a: a * c + dd * b * e, b: a * e + b * c, d: *d }
            }
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, p: q }) if p == q => {
                Scalar::Fp { v: fpoly::mulmod(*v, *w, *p), p: *p }
            }
            (Scalar::Fq { c, f }, Scalar::Fq { c: c2, f: f2 }) if f == f2 => {
                let prod = fpoly::mul(&fpoly::trim(c.clone()), &fpoly::trim(c2.clone()), f.p);
                let r = fpoly::rem(&prod, &f.modulus, f.p);
                let mut out = vec![0; f.degree()];
                out[..r.len()].copy_from_slice(&r);
                Scalar::Fq { c: out, f: f.clone() }
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(x) => Scalar::Q(x.recip()),
            Scalar::QSqrt { a, b, d } => {
                let norm = a * a - rat(*d) * b * b;
                Scalar::QSqrt { a: a / &norm, b: -(b / &norm), d: *d }
            }
            Scalar::Fp { v, p } => Scalar::Fp { v: fpoly::invmod(*v, *p).unwrap(), p: *p },
            Scalar::Fq { c, f } => {
                let inv = fpoly::inv_mod_poly(&fpoly::trim(c.clone()), &f.modulus, f.p)
                    .expect("modulus is irreducible");
                let mut out = vec![0; f.degree()];
                out[..inv.len()].copy_from_slice(&inv);
                Scalar::Fq { c: out, f: f.clone() }
            }
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        if !self.same_field(other) {
            return Err(self.mismatch(other));
        }
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(&self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Galois conjugate `a - b*sqrt(d)` in `Q(sqrt(d))`; identity elsewhere.
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::QSqrt { a, b, d } => Scalar::QSqrt { a: a.clone(), b: -b, d: *d },
            s => s.clone(),
        }
    }

    /// Square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match self {
            Scalar::Q(r) => rational_sqrt(r).map(Scalar::Q),
            Scalar::QSqrt { a, b, d } => {
                if b.is_zero() {
                    if let Some(s) = rational_sqrt(a) {
                        return Some(Scalar::QSqrt { a: s, b: BigRational::zero(), d: *d });
                    }
                    // a = d * s^2 gives s*sqrt(d)
                    return rational_sqrt(&(a / rat(*d)))
                        .map(|s| Scalar::QSqrt { a: BigRational::zero(), b: s, d: *d });
                }
                // (x + y sqrt d)^2 = a + b sqrt d: x^2 = (a +- N)/2, N = sqrt(a^2 - d b^2)
                let n = rational_sqrt(&(a * a - rat(*d) * b * b))?;
                let two = rat(2);
                for cand in [(a + &n) / &two, (a - &n) / &two] {
                    if let Some(x) = rational_sqrt(&cand) {
                        if x.is_zero() {
                            continue;
                        }
                        let y = b / (&two * &x);
                        return Some(Scalar::QSqrt { a: x, b: y, d: *d });
                    }
                }
                None
            }
            _ => crate::algebra::univariate::UniPoly::new(vec![self.neg(), Scalar::zero(&self.field()), Scalar::one(&self.field())])
                .roots()
                .into_iter()
                .next(),
        }
    }

    /// Some `n`-th root inside the field, chosen deterministically.
    pub fn nth_root(&self, n: u64) -> Option<Scalar> {
        if n == 1 || self.is_zero() || self.is_one() {
            return Some(self.clone());
        }
        if n == 2 {
            return self.sqrt();
        }
        if let Scalar::Q(r) = self {
            return rational_nth_root(r, n).map(Scalar::Q);
        }
        let f = self.field();
        let mut coeffs = vec![Scalar::zero(&f); n as usize + 1];
        coeffs[0] = self.neg();
        coeffs[n as usize] = Scalar::one(&f);
        crate::algebra::univariate::UniPoly::new(coeffs).roots().into_iter().next()
    }

    /// Total-order key used only for deterministic tie-breaking.
    pub fn sort_key(&self) -> String {
        match self {
            Scalar::Fp { v, .. } => format!("{v:020}"),
            Scalar::Fq { c, .. } => c.iter().rev().map(|x| format!("{x:020}")).collect(),
            s => s.to_string(),
        }
    }
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub(crate) fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = bigint_sqrt_exact(r.numer())?;
    let d = bigint_sqrt_exact(r.denom())?;
    Some(BigRational::new(n, d))
}

fn rational_nth_root(r: &BigRational, n: u64) -> Option<BigRational> {
    let root = |x: &BigInt| -> Option<BigInt> {
        let neg = x.is_negative();
        if neg && n.is_multiple_of(2) {
            return None;
        }
        let a = x.abs().nth_root(n as u32);
        (num_traits::pow(a.clone(), n as usize) == x.abs()).then(|| if neg { -a } else { a })
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::QSqrt { a, b, d } => {
                if b.is_zero() {
                    return write!(f, "{}", fmt_rational(a));
                }
                let bpart = if b.is_one() {
                    format!("sqrt({d})")
                } else if (-b).is_one() {
                    format!("-sqrt({d})")
                } else {
                    format!("{}*sqrt({d})", fmt_rational(b))
                };
                if a.is_zero() {
                    write!(f, "{bpart}")
                } else if bpart.starts_with('-') {
                    write!(f, "{}{}", fmt_rational(a), bpart)
                } else {
                    write!(f, "{}+{}", fmt_rational(a), bpart)
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Fq { c, .. } => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("scalar {}: {e}", stringify!($m)))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

/// The four field operations exposed as a single checked entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    Neg,
    Inv,
}

pub fn scalar_arith(op: ScalarOp, a: &Scalar, b: Option<&Scalar>) -> Result<Scalar> {
    let need_b = || b.ok_or_else(|| Error::InvalidInput("binary operation needs two operands".into()));
    match op {
        ScalarOp::Add => a.try_add(need_b()?),
        ScalarOp::Mul => a.try_mul(need_b()?),
        ScalarOp::Neg => Ok(a.neg()),
        ScalarOp::Inv => a.inv(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Q(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn spec_examples() {
        let f = FieldSpec::qsqrt(2).unwrap();
        let s = Scalar::sqrt_generator(&f).unwrap();
        let one = Scalar::one(&f);
        let prod = scalar_arith(ScalarOp::Mul, &(&one + &s), Some(&(&one - &s))).unwrap();
        assert_eq!(prod, Scalar::from_i64(&f, -1));

        let f5 = FieldSpec::fp(5).unwrap();
        let inv = scalar_arith(ScalarOp::Inv, &Scalar::from_i64(&f5, 2), None).unwrap();
        assert_eq!(inv, Scalar::from_i64(&f5, 3));

        assert_eq!(scalar_arith(ScalarOp::Add, &q(2, 3), Some(&q(1, 6))).unwrap(), q(5, 6));
    }

    #[test]
    fn errors() {
        let f5 = FieldSpec::fp(5).unwrap();
        assert_eq!(Scalar::zero(&f5).inv(), Err(Error::DivisionByZero));
        assert!(matches!(q(1, 2).try_add(&Scalar::one(&f5)), Err(Error::FieldMismatch(..))));
        assert!(FieldSpec::qsqrt(4).is_err());
        assert!(FieldSpec::fp(6).is_err());
        assert!(FieldSpec::fq(5, vec![1, 0, 1]).is_err());
        assert!(FieldSpec::fq(3, vec![1, 0, 1]).is_ok());
    }

    #[test]
    fn extension_field_inverse_and_norm() {
        let f = FieldSpec::fq(3, vec![1, 0, 1]).unwrap();
        let z = Scalar::fq_generator(&f).unwrap();
        assert_eq!(&z * &z, Scalar::from_i64(&f, -1));
        let w = &z + &Scalar::one(&f);
        assert!((&w * &w.inv().unwrap()).is_one());
        // Frobenius-fixed elements of F9 are F3
        assert_eq!(w.pow(9), w);
    }

    #[test]
    fn square_roots() {
        let f = FieldSpec::qsqrt(2).unwrap();
        let s = Scalar::sqrt_generator(&f).unwrap();
        let x = &(&Scalar::one(&f) + &s) * &(&Scalar::one(&f) + &s);
        let r = x.sqrt().unwrap();
        assert_eq!(&r * &r, x);
        assert_eq!(Scalar::from_i64(&f, 2).sqrt().unwrap(), s);
        assert!(q(2, 1).sqrt().is_none());
        assert_eq!(q(9, 4).sqrt().unwrap(), q(3, 2));
        let f5 = FieldSpec::fp(5).unwrap();
        let r = Scalar::from_i64(&f5, -1).sqrt().unwrap();
        assert_eq!(&r * &r, Scalar::from_i64(&f5, -1));
        assert_eq!(q(-8, 27).nth_root(3).unwrap(), q(-2, 3));
    }

    #[test]
    fn rational_image_in_char_p() {
        let f5 = FieldSpec::fp(5).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(Scalar::from_rational(&f5, &half).unwrap(), Scalar::from_i64(&f5, 3));
        let fifth = BigRational::new(1.into(), 5.into());
        assert_eq!(Scalar::from_rational(&f5, &fifth), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_forms() {
        let f = FieldSpec::qsqrt(3).unwrap();
        let s = Scalar::sqrt_generator(&f).unwrap();
        assert_eq!((&Scalar::from_i64(&f, 1) - &s).to_string(), "1-sqrt(3)");
        assert_eq!(q(-3, 6).to_string(), "-1/2");
        assert_eq!(Scalar::from_i64(&FieldSpec::Fp(5), -1).to_string(), "4");
    }
}
