//! Splitting a special fiber into the identity component and its cosets.

use super::subgroup::{mark_verified, SubgroupDesc};
use crate::algebra::{eliminate, uni_factor, Ideal, MonomialOrder, Poly};
use crate::error::{Error, Result};
use crate::groups::GroupScheme;

const MAX_PIECES: usize = 64;

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// The component through the identity, or the whole fiber when the
    /// decomposition is incomplete.
    pub identity: SubgroupDesc,
    pub cosets: Vec<Ideal>,
    /// Krull dimensions, identity component first.
    pub component_dims: Vec<usize>,
    /// Every piece carries a primality certificate.
    pub complete: bool,
    pub equidimensional: bool,
    pub note: Option<String>,
}

impl Decomposition {
    pub fn component_count(&self) -> usize {
        1 + self.cosets.len()
    }
}

/// Splits `fiber` along factors of univariate elements of its basis and
/// of its one-variable elimination ideals, and along monomial factors of
/// basis elements. A piece counts as irreducible only when it is the
/// saturated closure of a graph over free coordinates; if some piece has
/// no such certificate, the whole fiber is returned with
/// `complete = false`.
pub fn identity_component(scheme: &GroupScheme, fiber: &Ideal) -> Result<Decomposition> {
    let field = fiber.field().clone();
    let id = scheme.identity_coords(&field);
    if fiber.gens().iter().any(|g| !g.eval(&id).is_zero()) {
        return Err(Error::InvalidInput("the identity does not lie on the fiber".into()));
    }
    let (pieces, exhausted) = split_all(fiber)?;
    let pieces = drop_embedded(pieces)?;
    let mut certified = !exhausted;
    let mut uncertified = Vec::new();
    for p in &pieces {
        if !is_certified_prime(p)? {
            certified = false;
            uncertified.push(p.to_string());
        }
    }
    let through_id: Vec<usize> = (0..pieces.len()).filter(|&i| pieces[i].gens().iter().all(|g| g.eval(&id).is_zero())).collect();
    if through_id.len() != 1 {
        certified = false;
    }
    if !certified {
        let whole = mark_verified(SubgroupDesc::from_ideal(scheme, fiber)?)?.0;
        let dim = whole.dim;
        let note = if exhausted {
            format!("more than {MAX_PIECES} pieces")
        } else if through_id.len() != 1 {
            format!("{} pieces pass through the identity", through_id.len())
        } else {
            format!("no irreducibility certificate for {}", uncertified.join(", "))
        };
        return Ok(Decomposition {
            identity: whole,
            cosets: Vec::new(),
            component_dims: vec![dim],
            complete: false,
            equidimensional: true,
            note: Some(note),
        });
    }
    let idx = through_id[0];
    let identity = mark_verified(SubgroupDesc::from_ideal(scheme, &pieces[idx])?)?.0;
    let mut component_dims = vec![identity.dim];
    let mut cosets = Vec::new();
    for (i, p) in pieces.into_iter().enumerate() {
        if i != idx {
            component_dims.push(p.krull_dim()?);
            cosets.push(p);
        }
    }
    let equidimensional = component_dims.iter().all(|&d| d == component_dims[0]);
    Ok(Decomposition { identity, cosets, component_dims, complete: true, equidimensional, note: None })
}

fn split_all(fiber: &Ideal) -> Result<(Vec<Ideal>, bool)> {
    let mut work = vec![fiber.clone()];
    let mut done = Vec::new();
    while let Some(i) = work.pop() {
        if done.len() + work.len() > MAX_PIECES {
            done.push(i);
            done.extend(work);
            return Ok((done, true));
        }
        match split_once(&i)? {
            Some(parts) => work.extend(parts),
            None => done.push(i),
        }
    }
    Ok((done, false))
}

fn reduced(i: &Ideal) -> Result<Option<Ideal>> {
    let gb = i.groebner(MonomialOrder::GrevLex)?;
    Ok((!gb.is_unit()).then(|| gb.ideal()))
}

/// `None` when no split applies; pieces with empty variety are dropped.
fn split_once(i: &Ideal) -> Result<Option<Vec<Ideal>>> {
    let Some(i) = reduced(i)? else { return Ok(Some(Vec::new())) };
    let field = i.field().clone();
    let n = i.ring.nvars();
    let with = |extra: Poly| -> Result<Option<Ideal>> { reduced(&i.with_gens([extra])) };
    let collect = |parts: Vec<Poly>| -> Result<Option<Vec<Ideal>>> {
        let mut out = Vec::new();
        for p in parts {
            out.extend(with(p)?);
        }
        Ok(Some(out))
    };

    for f in i.gens() {
        let content: Vec<u32> = (0..n).map(|v| f.terms().map(|(m, _)| m[v]).min().unwrap_or(0)).collect();
        if content.iter().all(|&e| e == 0) {
            continue;
        }
        let is_single_var = f.len() == 1 && content.iter().sum::<u32>() == 1;
        if is_single_var {
            continue;
        }
        let h = Poly::from_terms(n, f.terms().map(|(m, c)| (m.iter().zip(&content).map(|(a, b)| a - b).collect(), c.clone())));
        let mut parts: Vec<Poly> = (0..n).filter(|&v| content[v] > 0).map(|v| i.ring.var(v)).collect();
        if !h.is_constant() {
            parts.push(h);
        }
        return collect(parts);
    }

    let mut univariate: Vec<Poly> = i.gens().iter().filter(|f| f.used_vars().len() == 1).cloned().collect();
    if univariate.is_empty() {
        for v in 0..n {
            let others: Vec<usize> = (0..n).filter(|&w| w != v).collect();
            let e = eliminate(&i, &others)?;
            if let Some(g) = e.gens().iter().find(|g| !g.is_zero()) {
                univariate.push(g.remap(&[v], n));
            }
        }
    }
    for u in univariate {
        let var = u.used_vars()[0];
        let fac = uni_factor(&u, &field)?;
        let total: usize = fac.factors.iter().map(|f| f.multiplicity).sum();
        if fac.factors.len() >= 2 || total >= 2 {
            return collect(fac.factors.iter().map(|f| f.poly.to_poly(n, var)).collect());
        }
    }
    Ok(None)
}

/// Removes duplicates and pieces whose variety lies inside another's.
fn drop_embedded(pieces: Vec<Ideal>) -> Result<Vec<Ideal>> {
    let mut uniq: Vec<Ideal> = Vec::new();
    for p in pieces {
        let mut seen = false;
        for q in &uniq {
            if q.equals(&p)? {
                seen = true;
                break;
            }
        }
        if !seen {
            uniq.push(p);
        }
    }
    let mut out = Vec::new();
    for (i, p) in uniq.iter().enumerate() {
        let mut embedded = false;
        for (j, q) in uniq.iter().enumerate() {
            if i != j && p.contains_ideal(q)? {
                embedded = true;
                break;
            }
        }
        if !embedded {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// `P` is prime when, in some lex order, its basis reads `q_j x_j - r_j`
/// with `q_j, r_j` in the remaining (free) coordinates and `P` is
/// saturated with respect to `prod q_j`: then `P` is the contraction of
/// the graph ideal over `k[free][1/q]`, which is prime.
pub fn is_certified_prime(p: &Ideal) -> Result<bool> {
    let n = p.ring.nvars();
    if p.is_zero() {
        return Ok(true);
    }
    let forward: Vec<usize> = (0..n).collect();
    let backward: Vec<usize> = (0..n).rev().collect();
    for perm in [forward, backward] {
        let permuted = Ideal::new(p.ring.clone(), p.gens().iter().map(|g| g.remap(&perm, n)));
        let gb = permuted.groebner(MonomialOrder::Lex)?;
        if gb.is_unit() {
            return Ok(false);
        }
        let Some(qs) = graph_shape(gb.polys()) else { continue };
        if qs.iter().all(|q| q.is_constant()) {
            return Ok(true);
        }
        let prod = qs.iter().fold(permuted.ring.one(), |acc, q| &acc * q);
        let ext = permuted.ring.extended(["_z"]);
        let lift: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Poly> = gb.polys().iter().map(|g| g.remap(&lift, n + 1)).collect();
        gens.push(&ext.one() - &(&ext.var(n) * &prod.remap(&lift, n + 1)));
        let sat = eliminate(&Ideal::new(ext, gens), &[n])?;
        let base = gb.ideal();
        if base.contains_ideal(&Ideal::new(base.ring.clone(), sat.gens().iter().cloned()))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Coefficients `q_j` when every basis element is linear in its own
/// leading variable, with everything else free.
fn graph_shape(gb: &[Poly]) -> Option<Vec<Poly>> {
    let mut lead_vars = Vec::new();
    for g in gb {
        let (lm, _) = g.leading(MonomialOrder::Lex)?;
        let v = lm.iter().position(|&e| e > 0)?;
        if lm[v] != 1 || g.degree_in(v) != 1 || lead_vars.contains(&v) {
            return None;
        }
        lead_vars.push(v);
    }
    let mut qs = Vec::new();
    for (g, &v) in gb.iter().zip(&lead_vars) {
        let parts = g.coefficients_in(v);
        for part in parts.values() {
            if part.used_vars().iter().any(|u| lead_vars.contains(u)) {
                return None;
            }
        }
        qs.push(parts.get(&1)?.clone());
    }
    Some(qs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    fn sl2(gens: &[&str]) -> Ideal {
        Ideal::parse(&GroupScheme::SL(2).coord_ring(&FieldSpec::Q), gens).unwrap()
    }

    #[test]
    fn irreducible_fiber_is_itself() {
        let torus = sl2(&["x12", "x21", "x11*x22-1"]);
        let d = identity_component(&GroupScheme::SL(2), &torus).unwrap();
        assert!(d.complete && d.cosets.is_empty());
        assert!(d.identity.ideal.equals(&torus).unwrap());
    }

    #[test]
    fn sign_split() {
        let fiber = sl2(&["x21", "(x11-1)*(x11+1)", "x11*x22-1"]);
        let d = identity_component(&GroupScheme::SL(2), &fiber).unwrap();
        assert!(d.complete, "{:?}", d.note);
        assert!(d.identity.ideal.equals(&sl2(&["x21", "x11-1", "x22-1"])).unwrap());
        assert_eq!(d.cosets.len(), 1);
        assert_eq!(d.component_dims, vec![1, 1]);
        assert!(d.equidimensional);
    }

    #[test]
    fn torus_union_its_translate() {
        let torus = sl2(&["x12", "x21", "x11*x22-1"]);
        let anti = sl2(&["x11", "x22", "x12*x21+1"]);
        let union = torus.intersect(&anti).unwrap();
        let d = identity_component(&GroupScheme::SL(2), &union).unwrap();
        assert!(d.complete, "{:?}", d.note);
        assert!(d.identity.ideal.equals(&torus).unwrap());
        assert_eq!(d.cosets.len(), 1);
        assert!(d.cosets[0].equals(&anti).unwrap());
        assert!(d.equidimensional);
    }

    #[test]
    fn prime_certificates() {
        assert!(is_certified_prime(&sl2(&["x11*x22-x12*x21-1"])).unwrap());
        assert!(!is_certified_prime(&sl2(&["x11^2-1"])).unwrap());
        assert!(is_certified_prime(&sl2(&["x11-1", "x21", "x22-1"])).unwrap());
    }
}
