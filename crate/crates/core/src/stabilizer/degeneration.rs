//! Stabilizer from the special fiber of a flat model of `V a(t)^{-1}`.

use std::collections::HashMap;

use super::ansatz::PolySeries;
use super::components::{identity_component, Decomposition};
use super::subgroup::SubgroupDesc;
use super::Budgets;
use crate::algebra::ideal::monomials_up_to;
use crate::algebra::linalg;
use crate::algebra::{FieldSpec, Ideal, Monomial, MonomialOrder, Poly, Ring, Scalar};
use crate::curves::{implicitize, Branch};
use crate::error::{Error, Result};
use crate::groups::GroupScheme;
use crate::series::{Exponent, PuiseuxSeries, HARD_CAP};

/// Echelon passes allowed per input row before giving up.
const SATURATION_STEPS: usize = 256;

/// An `O`-basis of the degree-bounded part of the translated ideal:
/// polynomials in the group coordinates with series coefficients, each of
/// valuation 0, whose residues are linearly independent.
#[derive(Debug, Clone)]
pub struct FlatModel {
    pub ring: Ring,
    pub rows: Vec<PolySeries>,
    pub degree: u32,
}

impl FlatModel {
    pub fn residues(&self) -> Vec<Poly> {
        self.rows.iter().map(|r| r.coeff(Exponent::zero()).cloned().unwrap_or_else(|| self.ring.zero())).collect()
    }

    /// The special fiber: the ideal generated by the residues.
    pub fn fiber(&self) -> Ideal {
        Ideal::new(self.ring.clone(), self.residues())
    }

    fn field(&self) -> &FieldSpec {
        &self.ring.field
    }
}

/// Result of [`stab_degeneration`].
#[derive(Debug, Clone)]
pub struct Degeneration {
    pub model: FlatModel,
    pub fiber: Ideal,
    pub decomposition: Decomposition,
    pub stabilizer: SubgroupDesc,
}

/// Coordinates of `g . a(t)` (or `g + a(t)`) as series in `g`.
fn translation_images(a: &Branch, ring: &Ring) -> Result<Vec<PolySeries>> {
    let field = a.field().clone();
    let nv = ring.nvars();
    let lift = |s: &PuiseuxSeries, p: &Poly| -> PolySeries { s.map(|c| p.scale(c)) };
    let scheme = a.scheme().base();
    Ok(match scheme {
        GroupScheme::Additive(_) => a
            .entries()
            .iter()
            .enumerate()
            .map(|(i, s)| lift(s, &ring.one()).add(&PolySeries::new(field.clone(), [(Exponent::zero(), ring.var(i))], Exponent::int(HARD_CAP))))
            .collect::<Result<_>>()?,
        _ => {
            let n = scheme.n();
            let mut out = Vec::with_capacity(nv);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = PolySeries::zero(field.clone(), Exponent::int(HARD_CAP));
                    for k in 0..n {
                        acc = acc.add(&lift(a.param.entry(k, j), &ring.var(i * n + k)))?;
                    }
                    out.push(acc);
                }
            }
            if matches!(scheme, GroupScheme::GL(_)) {
                out.push(lift(&a.param.det()?.inv()?, &ring.var(nv - 1)));
            }
            out
        }
    })
}

/// A `k`-basis of the polynomials of degree at most `degree` in the
/// ideal, from monomial multiples of a degree-compatible basis.
fn degree_part(v: &Ideal, degree: u32) -> Result<Vec<Poly>> {
    let gb = v.groebner(MonomialOrder::GrevLex)?;
    let n = v.ring.nvars();
    let field = v.field().clone();
    let mut span = Vec::new();
    for g in gb.polys() {
        let dg = g.total_degree();
        if dg > degree {
            continue;
        }
        for m in monomials_up_to(n, degree - dg) {
            span.push(g.mul_monomial(&m, &Scalar::one(&field)));
        }
    }
    if span.is_empty() {
        return Ok(span);
    }
    let (mut mat, monos) = linalg::coefficient_matrix(&span, &field);
    linalg::rref(&mut mat);
    Ok(mat
        .into_iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .map(|r| Poly::from_terms(n, monos.iter().cloned().zip(r)))
        .collect())
}

struct Pivot {
    lm: Monomial,
    lc: Scalar,
    row: PolySeries,
}

/// Adds `row` to the lattice: normalizes to valuation 0, reduces the
/// residue against the pivots, and divides by `t` again whenever the
/// residue vanishes.
fn insert_row(pivots: &mut Vec<Pivot>, mut row: PolySeries) -> Result<()> {
    for _ in 0..SATURATION_STEPS {
        let Some(v) = row.val() else {
            return Err(Error::PrecisionInsufficient(format!("a lattice row vanishes below precision {}", row.prec())));
        };
        row = row.shift(-v);
        loop {
            let res = row.coeff(Exponent::zero()).cloned().unwrap_or_else(|| Poly::zero(0));
            let Some((lm, lc)) = res.leading(MonomialOrder::GrevLex).map(|(m, c)| (m.clone(), c.clone())) else { break };
            match pivots.iter().find(|p| p.lm == lm) {
                Some(p) => {
                    let c = lc.try_div(&p.lc)?;
                    row = row.sub(&p.row.scale(&c))?;
                }
                None => {
                    pivots.push(Pivot { lm, lc, row });
                    return Ok(());
                }
            }
        }
    }
    Err(Error::budget("lattice saturation steps", SATURATION_STEPS))
}

/// The flat model of `V a(t)^{-1}` from the degree `<= degree` part of
/// the ideal of `V`.
pub fn flat_model(a: &Branch, v: &Ideal, degree: u32) -> Result<FlatModel> {
    let field = a.field().clone();
    let ring = a.scheme().coord_ring(&field);
    if v.ring.vars != ring.vars {
        return Err(Error::InvalidInput(format!("closure ideal ring {:?} does not match {}", v.ring.vars, a.scheme())));
    }
    let images = translation_images(a, &ring)?;
    let n = ring.nvars();
    let mut cache: HashMap<Monomial, PolySeries> = HashMap::new();
    cache.insert(vec![0; n], PolySeries::new(field.clone(), [(Exponent::zero(), ring.one())], Exponent::int(HARD_CAP)));
    let mut translate = |m: &Monomial| -> Result<PolySeries> { monomial_image(m, &images, &mut cache) };
    let mut pivots: Vec<Pivot> = Vec::new();
    for f in degree_part(v, degree)? {
        let mut row = PolySeries::zero(field.clone(), Exponent::int(HARD_CAP));
        for (m, c) in f.terms() {
            row = row.add(&translate(m)?.scale(c))?;
        }
        insert_row(&mut pivots, row)?;
    }
    Ok(FlatModel { ring, rows: pivots.into_iter().map(|p| p.row).collect(), degree })
}

fn monomial_image(m: &Monomial, images: &[PolySeries], cache: &mut HashMap<Monomial, PolySeries>) -> Result<PolySeries> {
    if let Some(s) = cache.get(m) {
        return Ok(s.clone());
    }
    let i = m.iter().rposition(|&e| e > 0).unwrap();
    let mut prev = m.clone();
    prev[i] -= 1;
    let s = monomial_image(&prev, images, cache)?.mul(&images[i])?;
    cache.insert(m.clone(), s.clone());
    Ok(s)
}

/// Ideal of the Zariski closure of the branch: the attached closure when
/// present, otherwise implicitization at increasing degree until the
/// ideal repeats at the expected dimension.
pub fn closure_ideal(a: &Branch, budgets: &Budgets) -> Result<Ideal> {
    if let Some(c) = &a.closure {
        return Ok(c.clone());
    }
    let floor = usize::from(a.entries().iter().any(|e| e.terms().iter().any(|t| !t.0.is_zero())));
    let mut prev: Option<Ideal> = None;
    for d in 1..=budgets.degree_bound {
        let i = match implicitize(a, d) {
            Ok(i) => i,
            Err(Error::PrecisionInsufficient(_)) if prev.is_some() => break,
            Err(e) => return Err(e),
        };
        let dim = i.krull_dim()?;
        if let Some(p) = &prev {
            if dim == floor && p.equals(&i)? {
                return Ok(i);
            }
        }
        prev = Some(i);
    }
    prev.ok_or_else(|| Error::InvalidInput("degree bound must be at least 1".into()))
}

/// `Stab(p)` as the identity component of the special fiber.
///
/// The degree of the lattice starts at the largest generator degree of
/// `V` and grows until the fiber ideal repeats or the degree bound is
/// reached.
pub fn stab_degeneration(a: &Branch, v: &Ideal, budgets: &Budgets) -> Result<Degeneration> {
    let scheme = a.scheme().base().clone();
    let field = a.field().clone();
    let eqs = Ideal::new(scheme.coord_ring(&field), scheme.equations(&field)?);
    let v = v.sum(&eqs).groebner(MonomialOrder::GrevLex)?.ideal();
    let start = v.gens().iter().map(|g| g.total_degree()).max().unwrap_or(1).max(1);
    if start > budgets.degree_bound {
        return Err(Error::budget(format!("closure has generators of degree {start}"), budgets.degree_bound as usize));
    }
    let mut model = flat_model(a, &v, start)?;
    let mut fiber = model.fiber();
    for d in start + 1..=budgets.degree_bound {
        let next = flat_model(a, &v, d)?;
        let next_fiber = next.fiber();
        let settled = next_fiber.equals(&fiber)?;
        model = next;
        fiber = next_fiber;
        if settled {
            break;
        }
    }
    let fiber = fiber.groebner(MonomialOrder::GrevLex)?.ideal();
    let decomposition = identity_component(&scheme, &fiber)?;
    let stabilizer = decomposition.identity.clone();
    Ok(Degeneration { model, fiber, decomposition, stabilizer })
}

/// Lifts a `k`-point of the special fiber to a point over `O` on which
/// every model row vanishes below `t^prec`, solving one linear system
/// with the fiber's Jacobian per order.
pub fn hensel_lift(model: &FlatModel, point: &[Scalar], prec: i64) -> Result<Vec<PuiseuxSeries>> {
    let field = model.field().clone();
    let n = model.ring.nvars();
    if point.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} coordinates, got {}", point.len())));
    }
    let residues = model.residues();
    if let Some(r) = residues.iter().find(|r| !r.eval(point).is_zero()) {
        return Err(Error::InvalidInput(format!("point is not on the fiber: {} does not vanish", model.ring.fmt_poly(r))));
    }
    let mut e = 1i64;
    for row in &model.rows {
        if !row.has_rational_exponents() {
            let bad = row.terms().iter().find(|t| !t.0.is_rational()).unwrap().0;
            return Err(Error::IrrationalExponentInSubstitution(bad.to_string()));
        }
        e = num_integer::lcm(e, row.ramification());
    }
    let jac: linalg::Mat = residues.iter().map(|r| (0..n).map(|v| r.derivative(v).eval(point)).collect()).collect();
    let cap = Exponent::int(HARD_CAP);
    let mut lift: Vec<PuiseuxSeries> = point.iter().map(|c| PuiseuxSeries::constant(c.clone(), cap)).collect();
    for k in 1..=prec * e {
        let kappa = Exponent::frac(k, e);
        if kappa >= Exponent::int(prec) {
            break;
        }
        let rhs: Vec<Scalar> =
            model.rows.iter().map(|row| Ok(row_at(row, &lift, &field)?.coeff(kappa).cloned().unwrap_or_else(|| Scalar::zero(&field)).neg())).collect::<Result<_>>()?;
        if rhs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let delta = linalg::solve(&jac, &rhs, &field)
            .ok_or_else(|| Error::Inconclusive(format!("no lift of the point at order {kappa}")))?;
        for (x, d) in lift.iter_mut().zip(delta) {
            *x = x.add(&PuiseuxSeries::monomial(kappa, d, cap))?;
        }
    }
    let target = Exponent::int(prec);
    for row in &model.rows {
        let val = row_at(row, &lift, &field)?;
        if val.prec() < target {
            return Err(Error::PrecisionInsufficient(format!("model row known only below {}", val.prec())));
        }
        if val.terms().iter().any(|(x, _)| *x < target) {
            return Err(Error::Inconclusive(format!("lift leaves a residual of order {}", val.order())));
        }
    }
    Ok(lift.into_iter().map(|s| s.truncate(target)).collect())
}

/// `sum_e t^e p_e(x)` at series arguments.
fn row_at(row: &PolySeries, args: &[PuiseuxSeries], field: &FieldSpec) -> Result<PuiseuxSeries> {
    let mut acc = PuiseuxSeries::zero(field.clone(), row.prec());
    for (ex, p) in row.terms() {
        acc = acc.add(&PuiseuxSeries::eval_poly(p, args, field)?.shift(*ex))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupElement;

    fn branch(scheme: GroupScheme, entries: &[&[(i64, i64)]]) -> Branch {
        let q = FieldSpec::Q;
        let es = entries.iter().map(|t| PuiseuxSeries::laurent(&q, t, 64)).collect();
        Branch::new(GroupElement::new(scheme, q, es).unwrap())
    }

    fn sl2(gens: &[&str]) -> Ideal {
        Ideal::parse(&GroupScheme::SL(2).coord_ring(&FieldSpec::Q), gens).unwrap()
    }

    #[test]
    fn x1_fiber() {
        let x1 = branch(GroupScheme::SL(2), &[&[(-1, 1)], &[(0, 1)], &[], &[(1, 1)]]);
        let b = Budgets::default();
        let v = closure_ideal(&x1, &b).unwrap();
        assert!(v.equals(&sl2(&["x12-1", "x21", "x11*x22-1"])).unwrap());
        let d = stab_degeneration(&x1, &v, &b).unwrap();
        assert!(d.fiber.equals(&sl2(&["x21", "x11-1", "x11*x22-1"])).unwrap(), "{}", d.fiber);
        assert!(d.stabilizer.same_ideal(&SubgroupDesc::parse(&GroupScheme::SL(2), &FieldSpec::Q, &["x11-1", "x21", "x22-1"]).unwrap()).unwrap());
        // the translated ideal contains t g12 + g11 - 1
        let r = &d.model.ring;
        let want = PolySeries::new(
            FieldSpec::Q,
            [(Exponent::zero(), &r.var(0) - &r.one()), (Exponent::int(1), r.var(1))],
            Exponent::int(HARD_CAP),
        );
        assert!(d.model.rows.iter().any(|row| row.terms() == want.terms()));
    }

    #[test]
    fn x2_and_cusp_fibers() {
        let b = Budgets::default();
        let x2 = branch(GroupScheme::SL(2), &[&[(-1, 1)], &[], &[(0, 1)], &[(1, 1)]]);
        let d = stab_degeneration(&x2, &closure_ideal(&x2, &b).unwrap(), &b).unwrap();
        assert!(d.stabilizer.ideal.equals(&sl2(&["x12", "x21", "x11*x22-1"])).unwrap(), "{}", d.stabilizer);
        let cusp = branch(GroupScheme::Additive(2), &[&[(-2, 1)], &[(-3, 1)]]);
        let d = stab_degeneration(&cusp, &closure_ideal(&cusp, &b).unwrap(), &b).unwrap();
        let x = Ideal::parse(&GroupScheme::Additive(2).coord_ring(&FieldSpec::Q), &["x"]).unwrap();
        assert!(d.stabilizer.ideal.equals(&x).unwrap(), "{}", d.stabilizer);
    }

    #[test]
    fn lifting_fiber_points() {
        let q = FieldSpec::Q;
        let x1 = branch(GroupScheme::SL(2), &[&[(-1, 1)], &[(0, 1)], &[], &[(1, 1)]]);
        let b = Budgets::default();
        let d = stab_degeneration(&x1, &closure_ideal(&x1, &b).unwrap(), &b).unwrap();
        let p: Vec<Scalar> = [1, 7, 0, 1].iter().map(|&v| Scalar::from_i64(&q, v)).collect();
        let lift = hensel_lift(&d.model, &p, 8).unwrap();
        for (l, c) in lift.iter().zip(&p) {
            assert_eq!(&l.res().unwrap(), c);
        }
    }
}
