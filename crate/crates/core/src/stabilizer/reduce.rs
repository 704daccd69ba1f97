//! Searching a tube for a representative of smaller dimension.

use super::tube::{mu_correct, MuCorrection, TubeCertificate};
use super::Budgets;
use crate::curves::{is_centered_at_infinity, type_dimension, validate_branch, Branch};
use crate::error::{Error, Result};
use crate::groups::GroupScheme;
use crate::series::{Exponent, PuiseuxSeries, HARD_CAP};

/// Degree bound for comparing candidate dimensions.
const REDUCE_DEGREE: u32 = 4;

#[derive(Debug, Clone)]
pub struct Reduction {
    pub branch: Branch,
    /// `input(s) = eps . branch(t)`.
    pub certificate: TubeCertificate,
    pub dim_before: usize,
    pub dim_after: usize,
    pub changed: bool,
    /// Only claimed when the reduced dimension cannot drop further.
    pub certified_minimal: bool,
}

/// Entries with every term above `tau` removed, as exact Laurent
/// polynomials.
fn truncation(a: &Branch, tau: Exponent) -> Vec<PuiseuxSeries> {
    a.entries()
        .iter()
        .map(|s| PuiseuxSeries::new(s.field().clone(), s.terms().iter().filter(|t| t.0 <= tau).cloned(), Exponent::int(HARD_CAP)))
        .collect()
}

/// For SL, scales the first row by `det^{-1}` so the candidate lies on
/// the group again; the factor is infinitesimal whenever the candidate is
/// tube-equivalent.
fn project(scheme: &GroupScheme, mut entries: Vec<PuiseuxSeries>, precision: i64) -> Result<Vec<PuiseuxSeries>> {
    if !matches!(scheme.base(), GroupScheme::SL(_)) {
        return Ok(entries);
    }
    let n = scheme.n();
    let m: Vec<Vec<PuiseuxSeries>> = entries.chunks(n).map(|r| r.to_vec()).collect();
    let det = crate::groups::element::series_det(&m)?;
    if det.terms().len() == 1 && det.terms()[0].0.is_zero() && det.terms()[0].1.is_one() {
        return Ok(entries);
    }
    let inv = det.with_prec(Exponent::int(precision)).inv()?;
    for e in entries.iter_mut().take(n) {
        *e = e.mul(&inv)?;
    }
    Ok(entries)
}

/// Best-effort reduction: truncations of the positive-exponent tails at
/// every threshold are certified with [`mu_correct`] and compared by
/// degree-bounded dimension. The input is returned unchanged when no
/// candidate has smaller dimension.
pub fn mu_reduce(a: &Branch, budgets: &Budgets) -> Result<Reduction> {
    let degree = REDUCE_DEGREE.min(budgets.degree_bound);
    // an infinite tail can keep implicitization from certifying anything;
    // the dimension of the ambient group bounds the type dimension
    let dim_before = match type_dimension(a, degree) {
        Ok(td) => td.dim,
        Err(Error::PrecisionInsufficient(_)) => a.scheme().defining_ideal(a.field())?.krull_dim()?,
        Err(e) => return Err(e),
    };
    let unchanged = |dim: usize| Reduction {
        branch: a.clone(),
        certificate: TubeCertificate::identity(a),
        dim_before: dim,
        dim_after: dim,
        changed: false,
        certified_minimal: dim <= 1,
    };
    if dim_before == 0 {
        return Ok(unchanged(0));
    }
    let floor = usize::from(is_centered_at_infinity(a)?);
    let mut taus = vec![Exponent::zero()];
    for s in a.entries() {
        taus.extend(s.terms().iter().map(|t| t.0).filter(|e| e.is_positive()));
    }
    taus.sort();
    taus.dedup();

    // the shortest certified truncation of equal dimension is kept too
    let mut best: Option<(usize, Branch, TubeCertificate)> = None;
    for tau in taus {
        let Ok(entries) = project(a.scheme(), truncation(a, tau), budgets.precision) else { continue };
        if entries.iter().zip(a.entries()).all(|(x, y)| x.terms() == y.terms()) {
            continue;
        }
        let Ok(cand) = validate_branch(a.scheme().clone(), a.field().clone(), entries) else { continue };
        let cert = match mu_correct(a, &cand, budgets.order_budget) {
            Ok(MuCorrection::Certified(c)) => c,
            _ => continue,
        };
        let Ok(td) = type_dimension(&cand, degree) else { continue };
        let improves = match &best {
            None => td.dim <= dim_before,
            Some(b) => td.dim < b.0,
        };
        if improves {
            best = Some((td.dim, cand, cert));
        }
        if best.as_ref().is_some_and(|b| b.0 <= floor) {
            break;
        }
    }
    Ok(match best {
        Some((dim, branch, certificate)) => {
            Reduction { branch, certificate, dim_before, dim_after: dim, changed: true, certified_minimal: dim <= 1 }
        }
        None => unchanged(dim_before),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldSpec, Scalar};
    use crate::groups::GroupElement;

    fn branch(scheme: GroupScheme, entries: &[&[(i64, i64)]]) -> Branch {
        let q = FieldSpec::Q;
        let es = entries.iter().map(|t| PuiseuxSeries::laurent(&q, t, 64)).collect();
        Branch::new(GroupElement::new(scheme, q, es).unwrap())
    }

    #[test]
    fn reduced_input_is_unchanged() {
        let x1 = branch(GroupScheme::SL(2), &[&[(-1, 1)], &[(0, 1)], &[], &[(1, 1)]]);
        let r = mu_reduce(&x1, &Budgets::default()).unwrap();
        assert!(!r.changed && r.certified_minimal);
        assert_eq!((r.dim_before, r.dim_after), (1, 1));
    }

    #[test]
    fn matrix_tail_is_removed() {
        let q = FieldSpec::Q;
        let a = branch(GroupScheme::SL(2), &[&[(-1, 1)], &[(0, 1), (2, 1)], &[], &[(1, 1)]]);
        let r = mu_reduce(&a, &Budgets::default()).unwrap();
        assert!(r.changed, "dims {} -> {}", r.dim_before, r.dim_after);
        let want = branch(GroupScheme::SL(2), &[&[(-1, 1)], &[(0, 1)], &[], &[(1, 1)]]);
        assert!(r.branch.entries().iter().zip(want.entries()).all(|(x, y)| x.terms() == y.terms()));
        let eps = r.certificate.correction.entries();
        assert_eq!(eps[1].terms(), &[(Exponent::int(1), Scalar::one(&q))]);
        assert!(r.certificate.correction.in_mu().unwrap());
    }

    #[test]
    fn bounded_branch_reduces_to_its_residue() {
        let q = FieldSpec::Q;
        let u = PuiseuxSeries::laurent(&q, &[(0, 1), (1, 1)], 64);
        let a = Branch::new(
            GroupElement::new(GroupScheme::SL(2), q.clone(), vec![u.clone(), PuiseuxSeries::laurent(&q, &[], 64), PuiseuxSeries::laurent(&q, &[], 64), u.inv().unwrap()]).unwrap(),
        );
        let r = mu_reduce(&a, &Budgets::default()).unwrap();
        assert_eq!(r.dim_after, 0);
        assert!(r.branch.param.res().unwrap().is_identity());
    }
}
