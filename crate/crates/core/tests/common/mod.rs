#![allow(dead_code)]

use mustab::algebra::{FieldSpec, Scalar};
use mustab::curves::{places_at_infinity, Branch, PlaneCurveInput};
use mustab::groups::{GroupElement, GroupScheme};
use mustab::series::{Exponent, PuiseuxSeries};
use num_rational::Rational64;

pub const PREC: i64 = 64;

pub fn laurent(field: &FieldSpec, terms: &[(i64, i64)]) -> PuiseuxSeries {
    PuiseuxSeries::laurent(field, terms, PREC)
}

pub fn branch(scheme: GroupScheme, field: &FieldSpec, entries: &[&[(i64, i64)]]) -> Branch {
    let es = entries.iter().map(|t| laurent(field, t)).collect();
    Branch::new(GroupElement::new(scheme, field.clone(), es).unwrap())
}

pub fn x1(field: &FieldSpec) -> Branch {
    branch(GroupScheme::SL(2), field, &[&[(-1, 1)], &[(0, 1)], &[], &[(1, 1)]])
}

pub fn x2(field: &FieldSpec) -> Branch {
    branch(GroupScheme::SL(2), field, &[&[(-1, 1)], &[], &[(0, 1)], &[(1, 1)]])
}

pub fn cusp() -> Branch {
    branch(GroupScheme::Additive(2), &FieldSpec::Q, &[&[(-2, 1)], &[(-3, 1)]])
}

/// `(t^-1, t^-1 + t^sqrt2)` at precision 16.
pub fn irrational_tail() -> Branch {
    let q = FieldSpec::Q;
    let prec = Exponent::int(16);
    let r = Exponent::with_sqrt(Rational64::from(0), Rational64::from(1), 2);
    let x = PuiseuxSeries::monomial(Exponent::int(-1), Scalar::one(&q), prec);
    let y = x.add(&PuiseuxSeries::monomial(r, Scalar::one(&q), prec)).unwrap();
    Branch::new(GroupElement::new(GroupScheme::Additive(2), q, vec![x, y]).unwrap())
}

pub fn bounded() -> Branch {
    let q = FieldSpec::Q;
    let u = laurent(&q, &[(0, 1), (1, 1)]);
    let z = laurent(&q, &[]);
    Branch::new(GroupElement::new(GroupScheme::SL(2), q, vec![u.clone(), z.clone(), z, u.inv().unwrap()]).unwrap())
}

pub fn f5_circle() -> Vec<Branch> {
    let f5 = FieldSpec::fp(5).unwrap();
    let input = PlaneCurveInput::parse(&f5, "x^2 + y^2 - 1", GroupScheme::Additive(2), &["x", "y"]).unwrap();
    places_at_infinity(&input, 16).unwrap().branches
}

pub fn hyperbola_sl2() -> Vec<Branch> {
    let input = PlaneCurveInput::parse(&FieldSpec::Q, "x*y - 1", GroupScheme::SL(2), &["x", "1", "0", "y"]).unwrap();
    places_at_infinity(&input, 16).unwrap().branches
}

/// Every centered-at-infinity corpus branch, with a label.
pub fn centered_corpus() -> Vec<(String, Branch)> {
    let q = FieldSpec::Q;
    let mut out = vec![("X1".to_string(), x1(&q)), ("X2".to_string(), x2(&q)), ("cusp".to_string(), cusp())];
    for (i, b) in f5_circle().into_iter().enumerate() {
        out.push((format!("F5 circle #{i}"), b));
    }
    out
}
