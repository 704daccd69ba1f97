//! Tube equivalence: `mu . p = mu . q` witnessed by `a(s) = eps . b(t)`.

use std::fmt;

use super::ansatz::{eval_series, gamma_max, joint_ramification, split_quotient, symbolic_quotient, Ansatz};
use super::solve::{find_point, small_ints, Choice};
use crate::algebra::{Ideal, MonomialOrder, Poly, Scalar};
use crate::curves::Branch;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupScheme};
use crate::series::{Exponent, PuiseuxSeries, HARD_CAP};

/// `a(s(t)) = eps . b(t)` with `eps` infinitesimal.
#[derive(Debug, Clone)]
pub struct TubeCertificate {
    pub reparam: PuiseuxSeries,
    pub correction: GroupElement,
}

impl TubeCertificate {
    pub fn identity(b: &Branch) -> TubeCertificate {
        TubeCertificate {
            reparam: PuiseuxSeries::monomial(Exponent::int(1), Scalar::one(b.field()), Exponent::int(HARD_CAP)),
            correction: GroupElement::identity(b.scheme(), b.field()),
        }
    }

    pub fn is_trivial_reparam(&self) -> bool {
        self.reparam.terms().len() == 1 && self.reparam.terms()[0].0 == Exponent::int(1) && self.reparam.terms()[0].1.is_one()
    }
}

/// First constraint that no reparameterization can meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubeFailure {
    pub exponent: Exponent,
    pub detail: String,
}

impl fmt::Display for TubeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inconsistent at order {}: {}", self.exponent, self.detail)
    }
}

#[derive(Debug, Clone)]
pub enum MuCorrection {
    Certified(TubeCertificate),
    Failure(TubeFailure),
}

impl MuCorrection {
    pub fn certificate(&self) -> Option<&TubeCertificate> {
        match self {
            MuCorrection::Certified(c) => Some(c),
            MuCorrection::Failure(_) => None,
        }
    }
}

/// `a * b^{-1}` in the group law.
pub(crate) fn quotient(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    match a.scheme().base() {
        GroupScheme::Additive(_) => {
            let entries = a.entries().iter().zip(b.entries()).map(|(x, y)| x.sub(y)).collect::<Result<_>>()?;
            GroupElement::unchecked(a.scheme().clone(), a.field().clone(), entries)
        }
        _ => a.mul(&b.inv()?),
    }
}

/// Solves `a(s) = eps . b(t)` order by order for
/// `s = nu^e t (1 + sum c_g t^g)`.
///
/// `s = t` is tried first. Otherwise the coefficients of the quotient
/// at negative exponents must vanish and its constant term must be the
/// identity; the first exponent whose constraints make the system
/// inconsistent is reported as the failure.
pub fn mu_correct(a: &Branch, b: &Branch, order_budget: usize) -> Result<MuCorrection> {
    if a.scheme().base() != b.scheme().base() {
        return Err(Error::InvalidInput(format!("branches live in {} and {}", a.scheme(), b.scheme())));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let field = a.field().clone();
    let direct = quotient(&a.param, &b.param)?;
    if direct.in_mu()? {
        return Ok(MuCorrection::Certified(TubeCertificate { correction: direct, ..TubeCertificate::identity(a) }));
    }
    if !a.has_rational_exponents() {
        let e = a.entries().iter().flat_map(|s| s.terms()).find(|t| !t.0.is_rational()).map(|t| t.0).unwrap();
        return Err(Error::IrrationalExponentInSubstitution(e.to_string()));
    }

    let e = joint_ramification(&a.param, &b.param);
    let ans = Ansatz::new(&field, e, gamma_max(&a.param, &b.param)?, order_budget)?;
    let nv = ans.ring.nvars();
    let quo = symbolic_quotient(&ans, &a.param, &b.param)?;
    let data = split_quotient(&quo, nv)?;
    let ident = b.scheme().identity_coords(&field);

    let mut stages: Vec<(Exponent, Vec<Poly>)> = Vec::new();
    for (ex, _, p) in &data.negative {
        match stages.last_mut() {
            Some((last, v)) if last == ex => v.push(p.clone()),
            _ => stages.push((*ex, vec![p.clone()])),
        }
    }
    let res_eqs: Vec<Poly> = data.residue.iter().zip(&ident).map(|(p, c)| p - &Poly::constant(nv, c.clone())).collect();
    stages.push((Exponent::zero(), res_eqs));

    let all: Vec<Poly> = std::iter::once(ans.unit_relation()).chain(stages.iter().flat_map(|s| s.1.iter().cloned())).collect();
    let system = Ideal::new(ans.ring.clone(), all);
    if system.groebner(MonomialOrder::GrevLex)?.is_unit() {
        let mut acc = vec![ans.unit_relation()];
        for (ex, eqs) in &stages {
            acc.extend(eqs.iter().cloned());
            if Ideal::new(ans.ring.clone(), acc.clone()).is_unit()? {
                let shown: Vec<String> = eqs.iter().map(|p| ans.ring.fmt_poly(p)).collect();
                return Ok(MuCorrection::Failure(TubeFailure { exponent: *ex, detail: format!("{{{}}} = 0 has no solution", shown.join(", ")) }));
            }
        }
        unreachable!("unit ideal without an inconsistent stage");
    }

    let prefs = |var: usize| -> Vec<Scalar> {
        if var >= ans.m() {
            small_ints(&field, &[1, -1, 2, -2, 3])
        } else {
            small_ints(&field, &[0, 1, -1, 2, -2])
        }
    };
    let point = find_point(&system, Choice::Ordered(&prefs))?
        .ok_or_else(|| Error::Inconclusive("constraints are consistent but no k-rational solution was found".into()))?;
    let entries: Vec<PuiseuxSeries> = quo.iter().map(|s| eval_series(s, &point, &field)).collect();
    let eps = GroupElement::unchecked(b.scheme().clone(), field.clone(), entries)?;
    if !eps.in_mu()? {
        return Err(Error::Inconclusive(format!("solution does not give an infinitesimal correction: {eps}")));
    }
    Ok(MuCorrection::Certified(TubeCertificate { reparam: ans.reparam_series(&point), correction: eps }))
}

/// Independent check of a certificate: recomputes `a(s)` numerically and
/// compares with `eps . b(t)` up to the tracked precision.
pub fn check_certificate(a: &Branch, b: &Branch, cert: &TubeCertificate) -> Result<bool> {
    if !cert.correction.in_mu()? {
        return Ok(false);
    }
    let lhs: Vec<PuiseuxSeries> = if cert.is_trivial_reparam() {
        a.entries().to_vec()
    } else {
        a.entries().iter().map(|e| e.subst(&cert.reparam)).collect::<Result<_>>()?
    };
    let rhs = match a.scheme().base() {
        GroupScheme::Additive(_) => {
            cert.correction.entries().iter().zip(b.entries()).map(|(x, y)| x.add(y)).collect::<Result<Vec<_>>>()?
        }
        _ => cert.correction.mul(&b.param)?.entries().to_vec(),
    };
    for (l, r) in lhs.iter().zip(&rhs) {
        let d = l.sub(r)?;
        if !d.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
