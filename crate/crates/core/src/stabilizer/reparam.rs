//! Stabilizer from reparameterizations: residues of `a(s) a(t)^{-1}` over
//! all `s` that keep the quotient integral.

use super::ansatz::{gamma_max, joint_ramification, split_quotient, symbolic_quotient, Ansatz};
use super::subgroup::{mark_verified, Family, SubgroupDesc};
use super::Budgets;
use crate::algebra::ideal::eliminate_with_budget;
use crate::algebra::{Ideal, MonomialOrder, Poly, Ring, DEFAULT_SPAIR_BUDGET};
use crate::curves::{is_centered_at_infinity, type_dimension, Branch};
use crate::error::{Error, Result};
use crate::groups::{det_of, GroupScheme};

/// Degree bound used for the reducedness check.
const REDUCED_CHECK_DEGREE: u32 = 4;

/// The family `c -> M(c)` with its constraint ideal, in the ansatz ring.
struct RawFamily {
    ans: Ansatz,
    constraints: Vec<Poly>,
    residue: Vec<Poly>,
}

fn raw_family(a: &Branch, budgets: &Budgets) -> Result<RawFamily> {
    let field = a.field().clone();
    let e = joint_ramification(&a.param, &a.param);
    let ans = Ansatz::new(&field, e, gamma_max(&a.param, &a.param)?, budgets.order_budget)?;
    let quo = symbolic_quotient(&ans, &a.param, &a.param)?;
    let data = split_quotient(&quo, ans.ring.nvars())?;
    let constraints: Vec<Poly> = std::iter::once(ans.unit_relation()).chain(data.negative.into_iter().map(|(_, _, p)| p)).collect();
    let gb = Ideal::new(ans.ring.clone(), constraints.iter().cloned()).groebner(MonomialOrder::GrevLex)?;
    if gb.is_unit() {
        return Err(Error::EmptyVariety);
    }
    let residue = data.residue.iter().map(|p| gb.normal_form(p)).collect();
    Ok(RawFamily { ans, constraints: gb.polys().to_vec(), residue })
}

/// `Stab(p)` as the closure of `{res(a(s) a(t)^{-1})}`.
///
/// The negative-exponent coefficients of the symbolic quotient cut out
/// the admissible reparameterizations; the image of the residue map is
/// computed by elimination. Constant branches give the trivial group.
/// A stabilizer smaller than the type dimension means the input was not
/// reduced.
pub fn stab_reparam(a: &Branch, budgets: &Budgets) -> Result<SubgroupDesc> {
    let constant = a.entries().iter().all(|s| s.terms().iter().all(|(e, _)| e.is_zero()));
    if !constant && !is_centered_at_infinity(a)? {
        return Err(Error::NotCenteredAtInfinity);
    }
    if !a.has_rational_exponents() {
        let e = a.entries().iter().flat_map(|s| s.terms()).find(|t| !t.0.is_rational()).map(|t| t.0).unwrap();
        return Err(Error::IrrationalExponentInSubstitution(e.to_string()));
    }
    let field = a.field().clone();
    let scheme = a.scheme().base().clone();
    let raw = raw_family(a, budgets)?;
    let nv = raw.ans.ring.nvars();
    let coords = scheme.coord_names();
    let big = raw.ans.ring.extended(coords.iter().cloned());
    let total = big.nvars();
    let lift: Vec<usize> = (0..nv).collect();
    let mut gens: Vec<Poly> = raw.constraints.iter().map(|p| p.remap(&lift, total)).collect();
    for (i, m) in raw.residue.iter().enumerate() {
        gens.push(&big.var(nv + i) - &m.remap(&lift, total));
    }
    let gl = matches!(scheme, GroupScheme::GL(_));
    if gl {
        let n = scheme.n();
        let m: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| raw.residue[i * n + j].remap(&lift, total)).collect()).collect();
        gens.push(&(&big.var(total - 1) * &det_of(&m, &big)) - &big.one());
    }
    let image = eliminate_with_budget(&Ideal::new(big, gens), &lift, DEFAULT_SPAIR_BUDGET)?;
    let image = Ideal::new(scheme.coord_ring(&field), image.gens().iter().cloned());
    let family = simplify_family(&raw, gl)?;
    let desc = SubgroupDesc::from_ideal(&scheme, &image)?.with_family(family);

    if !constant {
        if let Ok(td) = type_dimension(a, REDUCED_CHECK_DEGREE.min(budgets.degree_bound)) {
            if desc.dim < td.dim {
                return Err(Error::NotReduced(format!(
                    "stabilizer has dimension {} but the type has dimension {} (degree bound {})",
                    desc.dim, td.dim, td.certified_up_to
                )));
            }
        }
    }
    Ok(mark_verified(desc)?.0)
}

/// Keeps only the unknowns the residue depends on, renamed `c1..ck`, with
/// the constraints they inherit by elimination. For GL a last parameter
/// stands for `1/det`.
fn simplify_family(raw: &RawFamily, gl: bool) -> Result<Family> {
    let ring = &raw.ans.ring;
    let nv = ring.nvars();
    let mut used: Vec<usize> = raw.residue.iter().flat_map(|p| p.used_vars()).collect();
    used.sort_unstable();
    used.dedup();
    let drop: Vec<usize> = (0..nv).filter(|i| !used.contains(i)).collect();
    let cons = eliminate_with_budget(&Ideal::new(ring.clone(), raw.constraints.iter().cloned()), &drop, DEFAULT_SPAIR_BUDGET)?;
    let k = used.len();
    let extra = usize::from(gl);
    let names: Vec<String> = (1..=k + extra).map(|i| format!("c{i}")).collect();
    let pring = Ring::new(ring.field.clone(), names);
    let mut map = vec![0usize; nv];
    for (new, &old) in used.iter().enumerate() {
        map[old] = new;
    }
    let width = k + extra;
    let mut constraints: Vec<Poly> = cons.gens().iter().map(|p| p.remap(&(0..k).collect::<Vec<_>>(), width)).collect();
    let mut coords: Vec<Poly> = raw.residue.iter().map(|p| p.remap(&map, width)).collect();
    if gl {
        let n = (coords.len() as f64).sqrt().round() as usize;
        let m: Vec<Vec<Poly>> = (0..n).map(|i| coords[i * n..(i + 1) * n].to_vec()).collect();
        let d = pring.var(k);
        constraints.push(&(&d * &det_of(&m, &pring)) - &pring.one());
        coords.push(d);
    }
    Ok(Family { ring: pring.clone(), constraints: Ideal::new(pring, constraints), coords })
}
