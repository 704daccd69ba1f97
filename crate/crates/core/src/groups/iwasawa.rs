//! `G(K) = G(O) B(K)` by column elimination with valuation pivoting.

use super::element::GroupElement;
use super::scheme::GroupScheme;
use crate::error::{Error, Result};
use crate::series::PuiseuxSeries;

/// Factors `a = u * b` with `u` integral and `b` upper triangular.
///
/// Columns are processed left to right. Each column first has the pivot
/// rows of earlier columns cleared, then is scaled by its entry of least
/// valuation (lowest row on ties). The same operations applied as row
/// operations to `b` keep `a = u * b` throughout.
pub fn iwasawa(a: &GroupElement) -> Result<(GroupElement, GroupElement)> {
    let base = a.scheme().base().clone();
    if !matches!(base, GroupScheme::GL(_) | GroupScheme::SL(_)) {
        return Err(Error::InvalidInput(format!("Iwasawa decomposition needs GL or SL, got {}", a.scheme())));
    }
    let n = a.n();
    let field = a.field().clone();
    let mut u: Vec<Vec<PuiseuxSeries>> = a.rows();
    let mut b: Vec<Vec<PuiseuxSeries>> = GroupElement::identity(&base, &field).rows();
    let mut pivots: Vec<usize> = Vec::with_capacity(n);

    for j in 0..n {
        for (i, &r) in pivots.iter().enumerate() {
            let lambda = u[r][j].clone();
            if lambda.is_zero() {
                continue;
            }
            // column j -= lambda * column i ; row i of b += lambda * row j
            for row in u.iter_mut() {
                let v = row[j].sub(&row[i].mul(&lambda)?)?;
                row[j] = v;
            }
            for c in 0..n {
                let v = b[i][c].add(&b[j][c].mul(&lambda)?)?;
                b[i][c] = v;
            }
            // the pivot entry is cleared exactly
            u[r][j] = PuiseuxSeries::zero(field.clone(), u[r][j].prec());
        }
        let pivot = (0..n)
            .filter(|r| !pivots.contains(r))
            .filter_map(|r| u[r][j].val().map(|v| (v, r)))
            .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)))
            .map(|(_, r)| r)
            .ok_or(Error::SingularAtPrecision)?;
        let s = u[pivot][j].clone();
        let sinv = s.inv()?;
        for row in u.iter_mut() {
            let v = row[j].mul(&sinv)?;
            row[j] = v;
        }
        for c in 0..n {
            let v = b[j][c].mul(&s)?;
            b[j][c] = v;
        }
        pivots.push(pivot);
    }

    if matches!(base, GroupScheme::SL(_)) {
        // det u is a unit; move it into b so both factors lie in SL
        let d = crate::groups::element::series_det(&u)?;
        let dinv = d.inv()?;
        for row in u.iter_mut() {
            let v = row[n - 1].mul(&dinv)?;
            row[n - 1] = v;
        }
        for c in 0..n {
            let v = b[n - 1][c].mul(&d)?;
            b[n - 1][c] = v;
        }
    }

    let flat = |m: Vec<Vec<PuiseuxSeries>>| m.into_iter().flatten().collect::<Vec<_>>();
    let u = GroupElement::unchecked(a.scheme().clone(), field.clone(), flat(u))?;
    let b = GroupElement::unchecked(a.scheme().clone(), field, flat(b))?;
    Ok((u, b))
}

/// Whether every entry strictly below the diagonal is zero to precision.
pub fn is_upper_triangular(g: &GroupElement) -> bool {
    let n = g.n();
    (0..n).all(|i| (0..i).all(|j| g.entry(i, j).is_zero()))
}
