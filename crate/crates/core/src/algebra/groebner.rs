//! Buchberger's algorithm with the Gebauer-Moeller pair criteria.

use std::cmp::Ordering;

use super::field::Scalar;
use super::poly::{mono_degree, mono_div, mono_divides, mono_lcm, mono_mul, Monomial, MonomialOrder, Poly};
use crate::error::{Error, Result};

pub const DEFAULT_SPAIR_BUDGET: usize = 10_000;

/// Terms sorted from largest to smallest monomial.
#[derive(Debug, Clone)]
pub(crate) struct SortedPoly {
    pub terms: Vec<(Monomial, Scalar)>,
}

impl SortedPoly {
    pub fn from_poly(p: &Poly, order: MonomialOrder) -> Self {
        SortedPoly { terms: p.sorted_terms(order) }
    }

    pub fn to_poly(&self, nvars: usize) -> Poly {
        Poly::from_terms(nvars, self.terms.iter().cloned())
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Scalar {
        &self.terms[0].1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn make_monic(&mut self) {
        if self.terms.is_empty() || self.lc().is_one() {
            return;
        }
        let inv = self.lc().inv().expect("nonzero");
        for t in &mut self.terms {
            t.1 = &t.1 * &inv;
        }
    }

    /// `self - c * m * g`, merging in order.
    pub fn sub_scaled(&self, c: &Scalar, m: &[u32], g: &SortedPoly, order: MonomialOrder) -> SortedPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |j: usize| mono_mul(&g.terms[j].0, m);
        let mut gm = if g.terms.is_empty() { None } else { Some(shifted(0)) };
        while i < self.terms.len() || gm.is_some() {
            let ord = match (&gm, self.terms.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(b), Some(a)) => order.cmp(&a.0, b),
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm.take().unwrap(), (c * &g.terms[j].1).neg()));
                    j += 1;
                    gm = (j < g.terms.len()).then(|| shifted(j));
                }
                Ordering::Equal => {
                    let v = &self.terms[i].1 - &(c * &g.terms[j].1);
                    if !v.is_zero() {
                        out.push((gm.take().unwrap(), v));
                    }
                    i += 1;
                    j += 1;
                    gm = (j < g.terms.len()).then(|| shifted(j));
                }
            }
        }
        SortedPoly { terms: out }
    }
}

/// Full reduction of `f` by `basis`; returns the remainder and, when
/// `track` is set, the quotient multipliers `(basis index, c, m)`.
pub(crate) fn reduce(
    f: &SortedPoly,
    basis: &[&SortedPoly],
    order: MonomialOrder,
    mut track: Option<&mut Vec<(usize, Scalar, Monomial)>>,
) -> SortedPoly {
    let mut p = f.clone();
    let mut start = 0;
    while start < p.terms.len() {
        let (m, c) = &p.terms[start];
        let hit = basis.iter().position(|g| !g.is_zero() && mono_divides(g.lm(), m));
        match hit {
            Some(k) => {
                let g = basis[k];
                let q = c / g.lc();
                let mm = mono_div(m, g.lm());
                if let Some(t) = track.as_deref_mut() {
                    t.push((k, q.clone(), mm.clone()));
                }
                let tail = SortedPoly { terms: p.terms[start..].to_vec() };
                let reduced = tail.sub_scaled(&q, &mm, g, order);
                p.terms.truncate(start);
                p.terms.extend(reduced.terms);
            }
            None => start += 1,
        }
    }
    p
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced monic Groebner basis, sorted by increasing leading monomial.
pub fn groebner(gens: &[Poly], order: MonomialOrder, budget: usize) -> Result<Vec<Poly>> {
    let nvars = match gens.first() {
        Some(p) => p.nvars(),
        None => return Ok(Vec::new()),
    };
    let mut polys: Vec<SortedPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // interreduce inputs lightly before starting
    let mut inputs: Vec<SortedPoly> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let mut s = SortedPoly::from_poly(p, order);
            s.make_monic();
            s
        })
        .collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for f in inputs {
        let refs: Vec<&SortedPoly> = polys.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
        let mut h = reduce(&f, &refs, order, None);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        if mono_degree(h.lm()) == 0 {
            return Ok(vec![unit(nvars, &h)]);
        }
        update(&mut polys, &mut active, &mut pairs, h, order);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm, ties by degree then order
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                mono_degree(&pa.lcm).cmp(&mono_degree(&pb.lcm)).then_with(|| order.cmp(&pa.lcm, &pb.lcm))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        processed += 1;
        if processed > budget {
            return Err(Error::budget("S-polynomial pairs", budget));
        }
        let (f, g) = (&polys[pair.i], &polys[pair.j]);
        let mf = mono_div(&pair.lcm, f.lm());
        let mg = mono_div(&pair.lcm, g.lm());
        let one = Scalar::one(&f.lc().field());
        let zero_poly = SortedPoly { terms: Vec::new() };
        let a = zero_poly.sub_scaled(&one.neg(), &mf, f, order);
        let s = a.sub_scaled(&one, &mg, g, order);
        let refs: Vec<&SortedPoly> = polys.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
        let mut h = reduce(&s, &refs, order, None);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        if mono_degree(h.lm()) == 0 {
            return Ok(vec![unit(nvars, &h)]);
        }
        update(&mut polys, &mut active, &mut pairs, h, order);
    }

    // minimalize and interreduce
    let mut basis: Vec<SortedPoly> = polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    basis.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<SortedPoly> = Vec::new();
    for p in basis {
        if !minimal.iter().any(|q| mono_divides(q.lm(), p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&SortedPoly> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p).collect();
        let head = SortedPoly { terms: vec![minimal[k].terms[0].clone()] };
        let tail = SortedPoly { terms: minimal[k].terms[1..].to_vec() };
        let rt = reduce(&tail, &others, order, None);
        let mut full = head;
        full.terms.extend(rt.terms);
        full.make_monic();
        out.push(full.to_poly(nvars));
    }
    Ok(out)
}

fn unit(nvars: usize, h: &SortedPoly) -> Poly {
    Poly::constant(nvars, Scalar::one(&h.lc().field()))
}

fn update(polys: &mut Vec<SortedPoly>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: SortedPoly, _order: MonomialOrder) {
    let hi = polys.len();
    let hlm = h.lm().clone();
    let candidates: Vec<Pair> = (0..hi)
        .filter(|&g| active[g])
        .map(|g| Pair { i: g, j: hi, lcm: mono_lcm(&polys[g].lm().clone(), &hlm) })
        .collect();

    // chain criterion among the new pairs
    let mut kept: Vec<Pair> = Vec::new();
    for (idx, p) in candidates.iter().enumerate() {
        let glm = polys[p.i].lm();
        if coprime(glm, &hlm) {
            kept.push(p.clone());
            continue;
        }
        let dominated = candidates.iter().enumerate().any(|(k, q)| {
            k != idx && mono_divides(&q.lcm, &p.lcm) && (q.lcm != p.lcm || k < idx)
        });
        if !dominated {
            kept.push(p.clone());
        }
    }
    // product criterion
    let fresh: Vec<Pair> = kept.into_iter().filter(|p| !coprime(polys[p.i].lm(), &hlm)).collect();

    // prune old pairs made redundant by h
    pairs.retain(|p| {
        let li = mono_lcm(polys[p.i].lm(), &hlm);
        let lj = mono_lcm(polys[p.j].lm(), &hlm);
        !(mono_divides(&hlm, &p.lcm) && li != p.lcm && lj != p.lcm)
    });
    pairs.extend(fresh);

    for g in 0..hi {
        if active[g] && mono_divides(&hlm, polys[g].lm()) {
            active[g] = false;
        }
    }
    polys.push(h);
    active.push(true);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldSpec;
    use crate::algebra::poly::Ring;

    #[test]
    fn linear_substitution_example() {
        let r = Ring::new(FieldSpec::Q, ["x11", "x21", "x22"]);
        let gens: Vec<Poly> = ["x11-1", "x21", "x11*x22-1"].iter().map(|s| r.parse(s).unwrap()).collect();
        let gb = groebner(&gens, MonomialOrder::Lex, 100).unwrap();
        let shown: Vec<String> = gb.iter().map(|p| r.fmt_poly(p)).collect();
        assert_eq!(shown, ["x22 - 1", "x21", "x11 - 1"]);
    }

    #[test]
    fn twisted_cubic_elimination() {
        let r = Ring::new(FieldSpec::Q, ["x", "y", "z"]);
        let gens: Vec<Poly> = ["y-x^2", "z-x^3"].iter().map(|s| r.parse(s).unwrap()).collect();
        let gb = groebner(&gens, MonomialOrder::Lex, 1000).unwrap();
        let target = r.parse("y^3-z^2").unwrap();
        assert!(gb.iter().any(|g| *g == target || *g == -&target));
    }

    #[test]
    fn unit_ideal() {
        let r = Ring::new(FieldSpec::Q, ["x"]);
        let gens = vec![r.parse("x").unwrap(), r.parse("x+1").unwrap()];
        assert_eq!(groebner(&gens, MonomialOrder::GrevLex, 10).unwrap(), vec![r.one()]);
    }

    #[test]
    fn budget_is_enforced() {
        let r = Ring::new(FieldSpec::Q, ["x", "y", "z"]);
        let gens: Vec<Poly> = ["x^3 - y*z - 1", "y^3 - x*z + 2", "z^3 - x*y - 3"].iter().map(|s| r.parse(s).unwrap()).collect();
        assert!(matches!(groebner(&gens, MonomialOrder::Lex, 1), Err(Error::BudgetExceeded { .. })));
    }
}
