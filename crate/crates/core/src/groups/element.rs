//! Points of a group scheme over the series field and over `k`.

use std::fmt;

use super::scheme::GroupScheme;
use crate::algebra::{FieldSpec, Poly, Scalar};
use crate::error::{Error, Result};
use crate::series::{Exponent, PuiseuxSeries, Series, HARD_CAP};

/// A point of `G(K)`: an `n x n` series matrix (row-major) or an
/// `n`-vector for additive groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    scheme: GroupScheme,
    field: FieldSpec,
    entries: Vec<PuiseuxSeries>,
}

/// A `k`-point of a group scheme: entries only (no `y` for GL).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPoint {
    pub scheme: GroupScheme,
    pub field: FieldSpec,
    pub entries: Vec<Scalar>,
}

fn exact() -> Exponent {
    Exponent::int(HARD_CAP)
}

impl GroupElement {
    /// Validates the scheme equations up to precision.
    pub fn new(scheme: GroupScheme, field: FieldSpec, entries: Vec<PuiseuxSeries>) -> Result<GroupElement> {
        let g = GroupElement::unchecked(scheme, field, entries)?;
        g.check_equations()?;
        Ok(g)
    }

    /// Builds without checking equations (shape and field are still checked).
    pub fn unchecked(scheme: GroupScheme, field: FieldSpec, entries: Vec<PuiseuxSeries>) -> Result<GroupElement> {
        if entries.len() != scheme.entry_count() {
            return Err(Error::InvalidInput(format!(
                "{scheme} needs {} entries, got {}",
                scheme.entry_count(),
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| *e.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), e.field().to_string()));
        }
        Ok(GroupElement { scheme, field, entries })
    }

    pub fn identity(scheme: &GroupScheme, field: &FieldSpec) -> GroupElement {
        let entries = scheme.identity_coords(field)[..scheme.entry_count()]
            .iter()
            .map(|c| PuiseuxSeries::constant(c.clone(), exact()))
            .collect();
        GroupElement { scheme: scheme.clone(), field: field.clone(), entries }
    }

    pub fn scheme(&self) -> &GroupScheme {
        &self.scheme
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn entries(&self) -> &[PuiseuxSeries] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.scheme.n()
    }

    pub fn entry(&self, i: usize, j: usize) -> &PuiseuxSeries {
        &self.entries[i * self.n() + j]
    }

    pub fn with_scheme(&self, scheme: GroupScheme) -> GroupElement {
        GroupElement { scheme, field: self.field.clone(), entries: self.entries.clone() }
    }

    /// Smallest precision among the entries.
    pub fn min_prec(&self) -> Exponent {
        self.entries.iter().map(|e| e.prec()).min().unwrap_or_else(exact)
    }

    pub fn truncate(&self, prec: Exponent) -> GroupElement {
        GroupElement { entries: self.entries.iter().map(|e| e.truncate(prec)).collect(), ..self.clone() }
    }

    pub fn det(&self) -> Result<PuiseuxSeries> {
        if !self.scheme.is_matrix() {
            return Ok(PuiseuxSeries::one(&self.field));
        }
        series_det(&self.rows())
    }

    pub fn rows(&self) -> Vec<Vec<PuiseuxSeries>> {
        let n = self.n();
        (0..n).map(|i| self.entries[i * n..(i + 1) * n].to_vec()).collect()
    }

    /// Coordinate values, including `y = det^{-1}` for GL.
    pub fn coords(&self) -> Result<Vec<PuiseuxSeries>> {
        let mut v = self.entries.clone();
        if matches!(self.scheme.base(), GroupScheme::GL(_)) {
            v.push(self.det()?.inv().map_err(|_| Error::SingularAtPrecision)?);
        }
        Ok(v)
    }

    fn check_equations(&self) -> Result<()> {
        let coords = self.coords()?;
        let ring = self.scheme.coord_ring(&self.field);
        for eq in self.scheme.equations(&self.field)? {
            let v = PuiseuxSeries::eval_poly(&eq, &coords, &self.field)?;
            if !v.is_zero() {
                return Err(Error::NotOnGroup { equation: ring.fmt_poly(&eq), residual: v.to_string() });
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.scheme.base() != other.scheme.base() {
            return Err(Error::InvalidInput(format!("cannot multiply {} by {}", self.scheme, other.scheme)));
        }
        let entries = if self.scheme.is_matrix() {
            let n = self.n();
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Series::zero(self.field.clone(), exact());
                    for k in 0..n {
                        acc = acc.add(&self.entry(i, k).mul(other.entry(k, j))?)?;
                    }
                    out.push(acc);
                }
            }
            out
        } else {
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<Result<_>>()?
        };
        Ok(GroupElement { scheme: self.scheme.clone(), field: self.field.clone(), entries })
    }

    pub fn inv(&self) -> Result<GroupElement> {
        let entries = match self.scheme.base() {
            GroupScheme::Additive(_) => self.entries.iter().map(|e| e.neg()).collect(),
            GroupScheme::SL(_) => series_adjugate(&self.rows())?.into_iter().flatten().collect(),
            _ => {
                let dinv = self.det()?.inv().map_err(|_| Error::SingularAtPrecision)?;
                series_adjugate(&self.rows())?
                    .into_iter()
                    .flatten()
                    .map(|e| e.mul(&dinv))
                    .collect::<Result<_>>()?
            }
        };
        Ok(GroupElement { scheme: self.scheme.clone(), field: self.field.clone(), entries })
    }

    /// `g_mul_inv` entry point.
    pub fn mul_inv(op: GroupOp, a: &GroupElement, b: Option<&GroupElement>) -> Result<GroupElement> {
        match op {
            GroupOp::Mul => a.mul(b.ok_or_else(|| Error::InvalidInput("mul needs two operands".into()))?),
            GroupOp::Inv => a.inv(),
        }
    }

    /// All entries have nonnegative valuation and, for matrix groups,
    /// the determinant has valuation 0.
    pub fn is_integral(&self) -> Result<bool> {
        for e in &self.entries {
            match e.val() {
                Some(v) if v.is_negative() => return Ok(false),
                Some(_) => {}
                None if e.prec().is_positive() => {}
                None => {
                    return Err(Error::PrecisionInsufficient(format!("entry known only below {}", e.prec())));
                }
            }
        }
        if self.scheme.is_matrix() {
            let d = self.det()?;
            let v = d.val_checked()?;
            return Ok(v.is_zero());
        }
        Ok(true)
    }

    /// Entrywise residue of an integral point.
    pub fn res(&self) -> Result<KPoint> {
        if !self.is_integral()? {
            return Err(Error::NotIntegral);
        }
        let entries = self.entries.iter().map(|e| e.res()).collect::<Result<_>>()?;
        Ok(KPoint { scheme: self.scheme.clone(), field: self.field.clone(), entries })
    }

    /// Membership in the kernel of the residue map.
    pub fn in_mu(&self) -> Result<bool> {
        if !self.is_integral()? {
            return Ok(false);
        }
        Ok(self.res()?.is_identity())
    }

    /// The point `[[1, x], [0, I]]` of `SL(n+1)` for an additive point.
    pub fn as_unipotent_matrix(&self) -> Result<GroupElement> {
        if self.scheme.is_matrix() {
            return Err(Error::InvalidInput("already a matrix point".into()));
        }
        let n = self.n() + 1;
        let scheme = GroupScheme::SL(n);
        let mut entries = GroupElement::identity(&scheme, &self.field).entries;
        for (j, e) in self.entries.iter().enumerate() {
            entries[j + 1] = e.clone();
        }
        GroupElement::unchecked(scheme, self.field.clone(), entries)
    }

    /// Evaluates a polynomial in the scheme's coordinates at this point.
    pub fn eval(&self, p: &Poly) -> Result<PuiseuxSeries> {
        PuiseuxSeries::eval_poly(p, &self.coords()?, &self.field)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp {
    Mul,
    Inv,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        if self.scheme.is_matrix() {
            let n = self.n();
            let rows: Vec<String> = parts.chunks(n).map(|r| format!("[{}]", r.join(", "))).collect();
            write!(f, "[{}]", rows.join(", "))
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

pub fn series_det(m: &[Vec<PuiseuxSeries>]) -> Result<PuiseuxSeries> {
    let n = m.len();
    match n {
        1 => Ok(m[0][0].clone()),
        2 => m[0][0].mul(&m[1][1])?.sub(&m[0][1].mul(&m[1][0])?),
        _ => {
            let field = m[0][0].field().clone();
            let mut acc = Series::zero(field, exact());
            for j in 0..n {
                let minor: Vec<Vec<PuiseuxSeries>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&series_det(&minor)?)?;
                acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            Ok(acc)
        }
    }
}

pub fn series_adjugate(m: &[Vec<PuiseuxSeries>]) -> Result<Vec<Vec<PuiseuxSeries>>> {
    let n = m.len();
    if n == 1 {
        return Ok(vec![vec![PuiseuxSeries::one(m[0][0].field())]]);
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let minor: Vec<Vec<PuiseuxSeries>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, p)| p.clone()).collect())
                .collect();
            let d = series_det(&minor)?;
            row.push(if (i + j) % 2 == 0 { d } else { d.neg() });
        }
        out.push(row);
    }
    Ok(out)
}

impl KPoint {
    pub fn new(scheme: GroupScheme, field: FieldSpec, entries: Vec<Scalar>) -> Result<KPoint> {
        if entries.len() != scheme.entry_count() {
            return Err(Error::InvalidInput("wrong number of entries".into()));
        }
        let p = KPoint { scheme, field, entries };
        let coords = p.coords()?;
        for eq in p.scheme.equations(&p.field)? {
            if !eq.eval(&coords).is_zero() {
                let ring = p.scheme.coord_ring(&p.field);
                return Err(Error::NotOnGroup { equation: ring.fmt_poly(&eq), residual: eq.eval(&coords).to_string() });
            }
        }
        Ok(p)
    }

    pub fn identity(scheme: &GroupScheme, field: &FieldSpec) -> KPoint {
        let entries = scheme.identity_coords(field)[..scheme.entry_count()].to_vec();
        KPoint { scheme: scheme.clone(), field: field.clone(), entries }
    }

    pub fn is_identity(&self) -> bool {
        self.entries == self.scheme.identity_coords(&self.field)[..self.scheme.entry_count()]
    }

    pub fn det(&self) -> Scalar {
        if !self.scheme.is_matrix() {
            return Scalar::one(&self.field);
        }
        let n = self.scheme.n();
        let m: Vec<Vec<Scalar>> = self.entries.chunks(n).map(|r| r.to_vec()).collect();
        crate::algebra::linalg::det(&m, &self.field)
    }

    /// Coordinates including `y` for GL.
    pub fn coords(&self) -> Result<Vec<Scalar>> {
        let mut v = self.entries.clone();
        if matches!(self.scheme.base(), GroupScheme::GL(_)) {
            v.push(self.det().inv().map_err(|_| Error::SingularAtPrecision)?);
        }
        Ok(v)
    }

    pub fn to_element(&self) -> GroupElement {
        GroupElement {
            scheme: self.scheme.clone(),
            field: self.field.clone(),
            entries: self.entries.iter().map(|c| PuiseuxSeries::constant(c.clone(), exact())).collect(),
        }
    }

    pub fn mul(&self, other: &KPoint) -> Result<KPoint> {
        let e = self.to_element().mul(&other.to_element())?;
        Ok(KPoint { scheme: self.scheme.clone(), field: self.field.clone(), entries: e.entries.iter().map(|s| s.res()).collect::<Result<_>>()? })
    }

    pub fn inv(&self) -> Result<KPoint> {
        let e = self.to_element().inv()?;
        Ok(KPoint { scheme: self.scheme.clone(), field: self.field.clone(), entries: e.entries.iter().map(|s| s.res()).collect::<Result<_>>()? })
    }
}

impl fmt::Display for KPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        if self.scheme.is_matrix() {
            let rows: Vec<String> = parts.chunks(self.scheme.n()).map(|r| format!("[{}]", r.join(", "))).collect();
            write!(f, "[{}]", rows.join(", "))
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    fn ls(terms: &[(i64, i64)]) -> PuiseuxSeries {
        PuiseuxSeries::laurent(&q(), terms, 12)
    }

    fn sl2(e: [&[(i64, i64)]; 4]) -> GroupElement {
        GroupElement::new(GroupScheme::SL(2), q(), e.iter().map(|t| ls(t)).collect()).unwrap()
    }

    #[test]
    fn products_and_inverses() {
        let a = sl2([&[(-1, 1)], &[(0, 1)], &[], &[(1, 1)]]);
        let inv = a.inv().unwrap();
        assert_eq!(inv.entries()[0].terms(), ls(&[(1, 1)]).terms());
        assert_eq!(inv.entries()[1].terms(), ls(&[(0, -1)]).terms());
        assert_eq!(inv.entries()[3].terms(), ls(&[(-1, 1)]).terms());
        let prod = a.mul(&inv).unwrap();
        assert!(prod.in_mu().unwrap());

        let x = GroupElement::new(GroupScheme::Additive(2), q(), vec![ls(&[(-1, 1)]), ls(&[])]).unwrap();
        let y = GroupElement::new(GroupScheme::Additive(2), q(), vec![ls(&[]), ls(&[(1, 1)])]).unwrap();
        let s = x.mul(&y).unwrap();
        assert_eq!(s.entries()[1].terms(), ls(&[(1, 1)]).terms());
    }

    #[test]
    fn integrality_residue_mu() {
        assert!(sl2([&[(0, 1)], &[], &[(1, 1)], &[(0, 1)]]).is_integral().unwrap());
        assert!(!sl2([&[(-1, 1)], &[(0, 1)], &[], &[(1, 1)]]).is_integral().unwrap());
        let g = GroupElement::new(GroupScheme::GL(2), q(), vec![ls(&[(0, 2), (1, 1)]), ls(&[(0, 1)]), ls(&[]), ls(&[(0, 3)])]).unwrap();
        let r = g.res().unwrap();
        assert_eq!(r.entries, [2, 1, 0, 3].map(|x| Scalar::from_i64(&q(), x)).to_vec());
        let d = sl2([&[(-1, 1)], &[], &[], &[(1, 1)]]);
        assert_eq!(d.res(), Err(Error::NotIntegral));

        let one_plus_t = ls(&[(0, 1), (1, 1)]);
        let eps = GroupElement::new(GroupScheme::SL(2), q(), vec![one_plus_t.clone(), ls(&[]), ls(&[]), one_plus_t.inv().unwrap()]).unwrap();
        assert!(eps.in_mu().unwrap());
        assert!(!sl2([&[(0, 1)], &[(0, 1)], &[], &[(0, 1)]]).in_mu().unwrap());
    }

    #[test]
    fn not_on_group() {
        let r = GroupElement::new(GroupScheme::SL(2), q(), vec![ls(&[(-1, 1)]), ls(&[(0, 1)]), ls(&[]), ls(&[(1, 2)])]);
        assert!(matches!(r, Err(Error::NotOnGroup { .. })));
    }
}
