//! Exponents `a + b*sqrt(d)` with exact ordering.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of `Q` or `Q + Q*sqrt(d)`.
///
/// `d` is 0 whenever `b` is 0, so rational exponents compare equal
/// regardless of the session's `d`. Mixing two different nonzero `d`
/// values panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    a: Rational64,
    b: Rational64,
    d: i64,
}

impl Exponent {
    pub fn rational(a: Rational64) -> Exponent {
        Exponent { a, b: Rational64::zero(), d: 0 }
    }

    pub fn int(n: i64) -> Exponent {
        Exponent::rational(Rational64::from_integer(n))
    }

    pub fn frac(n: i64, den: i64) -> Exponent {
        Exponent::rational(Rational64::new(n, den))
    }

    pub fn zero() -> Exponent {
        Exponent::int(0)
    }

    /// `a + b*sqrt(d)`; `d` must be a positive nonsquare when `b != 0`.
    pub fn with_sqrt(a: Rational64, b: Rational64, d: i64) -> Exponent {
        if b.is_zero() {
            Exponent::rational(a)
        } else {
            Exponent { a, b, d }
        }
    }

    pub fn a(&self) -> Rational64 {
        self.a
    }

    pub fn b(&self) -> Rational64 {
        self.b
    }

    /// The `d` of the irrational part, 0 for rational exponents.
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational64> {
        self.is_rational().then_some(self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn combine_d(self, other: Exponent) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("exponents over different groups: sqrt({x}) vs sqrt({y})"),
        }
    }

    /// Sign of `a + b*sqrt(d)` by exact comparison of squares.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rational64::zero());
        let sb = self.b.cmp(&Rational64::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with d*b^2
        let big = |r: Rational64| (BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        let (an, ad) = big(self.a);
        let (bn, bd) = big(self.b);
        let lhs = &an * &an * &bd * &bd;
        let rhs = BigInt::from(self.d) * &bn * &bn * &ad * &ad;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("sqrt(d) is irrational"),
        }
    }

    pub fn mul_rational(&self, r: Rational64) -> Exponent {
        Exponent::with_sqrt(self.a * r, self.b * r, self.d)
    }

    pub fn mul_int(&self, n: i64) -> Exponent {
        self.mul_rational(Rational64::from_integer(n))
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator(&self) -> i64 {
        self.a.denom().lcm(self.b.denom())
    }

    pub fn min(self, other: Exponent) -> Exponent {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Exponent) -> Exponent {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Floating approximation, for display and heuristics only.
    pub fn approx(&self) -> f64 {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        f(self.a) + f(self.b) * (self.d as f64).sqrt()
    }

    /// Parses `"a/b"`, `"a/b+c/e*sqrt(d)"`, `"sqrt(2)"`, `"-1/2*sqrt(3)"`.
    pub fn parse(s: &str) -> Result<Exponent> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || Error::Parse(format!("bad exponent {s:?}"));
        let Some(idx) = s.find("sqrt(") else {
            return parse_rational(&s).map(Exponent::rational).ok_or_else(err);
        };
        let close = s[idx..].find(')').ok_or_else(err)? + idx;
        if close + 1 != s.len() {
            return Err(err());
        }
        let d: i64 = s[idx + 5..close].parse().map_err(|_| err())?;
        if d <= 1 || d.sqrt() * d.sqrt() == d {
            return Err(Error::Parse(format!("sqrt({d}) is rational or invalid")));
        }
        let before = s[..idx].strip_suffix('*').unwrap_or(&s[..idx]);
        let split = before.char_indices().rev().find(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i);
        let (a_str, b_str) = match split {
            Some(i) => (&before[..i], &before[i..]),
            None => ("", before),
        };
        let a = if a_str.is_empty() { Rational64::zero() } else { parse_rational(a_str).ok_or_else(err)? };
        let b = match b_str {
            "" | "+" => Rational64::one(),
            "-" => -Rational64::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other)).ok_or_else(err)?,
        };
        Ok(Exponent::with_sqrt(a, b, d))
    }
}

fn parse_rational(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.parse().ok()?;
            let d: i64 = d.parse().ok()?;
            (d != 0).then(|| Rational64::new(n, d))
        }
        None => s.parse().ok().map(Rational64::from_integer),
    }
}

fn fmt_rat(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(self.a));
        }
        let b = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if (-self.b).is_one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", fmt_rat(self.b), self.d)
        };
        if self.a.is_zero() {
            write!(f, "{b}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", fmt_rat(self.a), b)
        } else {
            write!(f, "{}+{}", fmt_rat(self.a), b)
        }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        let d = self.combine_d(o);
        Exponent::with_sqrt(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        self + (-o)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Exponent) -> Ordering {
        (*self - *other).sign()
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Exponent) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Exponent {
        Exponent::int(n)
    }
}
