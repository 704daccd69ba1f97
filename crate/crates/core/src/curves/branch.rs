//! Parameterized curve germs in a group.

use std::collections::HashMap;

use crate::algebra::ideal::monomials_up_to;
use crate::algebra::linalg;
use crate::algebra::{FieldSpec, Ideal, Monomial, MonomialOrder, Poly, Scalar};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupScheme};
use crate::series::{Exponent, PuiseuxSeries};

/// A germ `a(t)` in `G(K)`, standing for the type of `a(t)` over `k`.
#[derive(Debug, Clone)]
pub struct Branch {
    pub param: GroupElement,
    pub ramification: i64,
    /// Zariski closure over `k` when known independently (for branches
    /// produced from a plane curve).
    pub closure: Option<Ideal>,
}

impl Branch {
    pub fn new(param: GroupElement) -> Branch {
        let ramification = param.entries().iter().fold(1, |acc, e| num_integer::lcm(acc, e.ramification()));
        Branch { param, ramification, closure: None }
    }

    pub fn with_closure(mut self, closure: Ideal) -> Branch {
        self.closure = Some(closure);
        self
    }

    pub fn scheme(&self) -> &GroupScheme {
        self.param.scheme()
    }

    pub fn field(&self) -> &FieldSpec {
        self.param.field()
    }

    pub fn entries(&self) -> &[PuiseuxSeries] {
        self.param.entries()
    }

    pub fn has_rational_exponents(&self) -> bool {
        self.entries().iter().all(|e| e.has_rational_exponents())
    }

    /// Lowest exponent appearing in any entry.
    pub fn min_valuation(&self) -> Option<Exponent> {
        self.entries().iter().filter_map(|e| e.val()).min()
    }
}

/// Checks the scheme equations on raw entries.
pub fn validate_branch(scheme: GroupScheme, field: FieldSpec, entries: Vec<PuiseuxSeries>) -> Result<Branch> {
    Ok(Branch::new(GroupElement::new(scheme, field, entries)?))
}

/// Not bounded: some coordinate has a pole.
pub fn is_centered_at_infinity(b: &Branch) -> Result<bool> {
    Ok(!b.param.is_integral()?)
}

/// Polynomial relations of degree at most `degree_bound` among the
/// coordinates of `b`, as a reduced grevlex basis.
///
/// Each truncated entry is treated as the polynomial it displays. The
/// computation is refused when some monomial's known terms could reach
/// its own precision, since a relation found there might only hold
/// modulo the truncation.
pub fn implicitize(b: &Branch, degree_bound: u32) -> Result<Ideal> {
    if degree_bound == 0 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let field = b.field().clone();
    let ring = b.scheme().coord_ring(&field);
    let coords = b.param.coords()?;
    let n = coords.len();
    let tops: Vec<Option<Exponent>> = coords.iter().map(|c| c.terms().last().map(|t| t.0)).collect();

    let monos = monomials_up_to(n, degree_bound);
    let mut series: HashMap<Monomial, PuiseuxSeries> = HashMap::new();
    let mut columns = Vec::with_capacity(monos.len());
    for m in &monos {
        let s = match m.iter().rposition(|&e| e > 0) {
            None => PuiseuxSeries::one(&field),
            Some(i) => {
                let mut prev = m.clone();
                prev[i] -= 1;
                series[&prev].mul(&coords[i])?
            }
        };
        let vanishing = m.iter().zip(&tops).any(|(&e, t)| e > 0 && t.is_none());
        if !vanishing {
            let span = m
                .iter()
                .zip(&tops)
                .filter(|(&e, _)| e > 0)
                .fold(Exponent::zero(), |acc, (&e, t)| acc + t.unwrap().mul_int(e as i64));
            if span >= s.prec() {
                return Err(Error::PrecisionInsufficient(format!(
                    "degree {degree_bound} monomial {} reaches exponent {span} but is known only below {}",
                    ring.fmt_poly(&Poly::monomial(n, m.clone(), Scalar::one(&field))),
                    s.prec()
                )));
            }
        }
        columns.push(s.clone());
        series.insert(m.clone(), s);
    }

    let mut exps: Vec<Exponent> = columns.iter().flat_map(|s| s.terms().iter().map(|t| t.0)).collect();
    exps.sort();
    exps.dedup();
    let row_of: HashMap<Exponent, usize> = exps.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut mat = vec![vec![Scalar::zero(&field); monos.len()]; exps.len()];
    for (j, s) in columns.iter().enumerate() {
        for (e, c) in s.terms() {
            mat[row_of[e]][j] = c.clone();
        }
    }
    let relations: Vec<Poly> = linalg::kernel(&mat, monos.len(), &field)
        .into_iter()
        .map(|v| Poly::from_terms(n, monos.iter().cloned().zip(v)))
        .collect();
    let ideal = Ideal::new(ring, relations);
    if ideal.is_zero() {
        return Ok(ideal);
    }
    Ok(ideal.groebner(MonomialOrder::GrevLex)?.ideal())
}

/// Krull dimension of the degree-bounded closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeDimension {
    pub dim: usize,
    pub certified_up_to: u32,
}

/// `krull_dim(implicitize(b, D))`, or the dimension of a known closure.
///
/// Degrees are tried in increasing order; a nonconstant branch cannot
/// have dimension below 1, so reaching 1 settles the value for every
/// larger bound.
pub fn type_dimension(b: &Branch, degree_bound: u32) -> Result<TypeDimension> {
    if let Some(c) = &b.closure {
        return Ok(TypeDimension { dim: c.krull_dim()?, certified_up_to: degree_bound });
    }
    let floor = usize::from(b.entries().iter().any(|e| e.terms().iter().any(|t| !t.0.is_zero())));
    let mut dim = b.param.coords()?.len();
    for d in 1..=degree_bound {
        dim = implicitize(b, d)?.krull_dim()?;
        if dim <= floor {
            break;
        }
    }
    Ok(TypeDimension { dim, certified_up_to: degree_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;

    fn ls(f: &FieldSpec, terms: &[(i64, i64)], prec: i64) -> PuiseuxSeries {
        PuiseuxSeries::laurent(f, terms, prec)
    }

    #[test]
    fn validation() {
        let q = FieldSpec::Q;
        let b = validate_branch(GroupScheme::SL(2), q.clone(), vec![ls(&q, &[(-1, 1)], 64), ls(&q, &[(0, 1)], 64), ls(&q, &[], 64), ls(&q, &[(1, 1)], 64)]).unwrap();
        assert_eq!(b.ramification, 1);
        assert!(is_centered_at_infinity(&b).unwrap());
        let bad = validate_branch(GroupScheme::SL(2), q.clone(), vec![ls(&q, &[(-1, 1)], 64), ls(&q, &[(0, 1)], 64), ls(&q, &[], 64), ls(&q, &[(1, 2)], 64)]);
        assert!(matches!(bad, Err(Error::NotOnGroup { .. })));
        let cusp = validate_branch(GroupScheme::Additive(2), q.clone(), vec![ls(&q, &[(-2, 1)], 64), ls(&q, &[(-3, 1)], 64)]).unwrap();
        assert!(is_centered_at_infinity(&cusp).unwrap());
    }

    #[test]
    fn implicitize_examples() {
        let q = FieldSpec::Q;
        let add = Ring::new(q.clone(), ["x", "y"]);
        let diag = Branch::new(GroupElement::new(GroupScheme::Additive(2), q.clone(), vec![ls(&q, &[(-1, 1)], 64), ls(&q, &[(-1, 1)], 64)]).unwrap());
        let i = implicitize(&diag, 2).unwrap();
        assert!(i.equals(&Ideal::parse(&add, &["x-y"]).unwrap()).unwrap());

        let cusp = Branch::new(GroupElement::new(GroupScheme::Additive(2), q.clone(), vec![ls(&q, &[(-2, 1)], 64), ls(&q, &[(-3, 1)], 64)]).unwrap());
        let i = implicitize(&cusp, 3).unwrap();
        assert!(i.equals(&Ideal::parse(&add, &["x^3-y^2"]).unwrap()).unwrap());
        assert_eq!(type_dimension(&cusp, 6).unwrap().dim, 1);

        let sl = GroupScheme::SL(2).coord_ring(&q);
        let x1 = Branch::new(GroupElement::new(GroupScheme::SL(2), q.clone(), vec![ls(&q, &[(-1, 1)], 64), ls(&q, &[(0, 1)], 64), ls(&q, &[], 64), ls(&q, &[(1, 1)], 64)]).unwrap());
        let i = implicitize(&x1, 2).unwrap();
        assert!(i.equals(&Ideal::parse(&sl, &["x12-1", "x21", "x11*x22-1"]).unwrap()).unwrap());
        assert_eq!(i.krull_dim().unwrap(), 1);
    }

    #[test]
    fn irrational_exponent_type_has_dimension_two() {
        let k = FieldSpec::qsqrt(2).unwrap();
        let r = Exponent::parse("sqrt(2)").unwrap();
        let x = ls(&k, &[(-1, 1)], 16);
        let y = PuiseuxSeries::new(k.clone(), [(Exponent::int(-1), Scalar::one(&k)), (r, Scalar::one(&k))], Exponent::int(16));
        let b = Branch::new(GroupElement::new(GroupScheme::Additive(2), k.clone(), vec![x.clone(), y]).unwrap());
        assert_eq!(type_dimension(&b, 6).unwrap().dim, 2);
        let reduced = Branch::new(GroupElement::new(GroupScheme::Additive(2), k.clone(), vec![x.clone(), x]).unwrap());
        assert_eq!(type_dimension(&reduced, 6).unwrap().dim, 1);
    }

    #[test]
    fn low_precision_is_refused() {
        let q = FieldSpec::Q;
        let b = Branch::new(GroupElement::new(GroupScheme::Additive(2), q.clone(), vec![ls(&q, &[(-1, 1)], 4), ls(&q, &[(-1, 1), (2, 1)], 4)]).unwrap());
        assert!(matches!(implicitize(&b, 3), Err(Error::PrecisionInsufficient(_))));
    }
}
