//! Ideals, membership, elimination, dimension.

use std::fmt;

use super::field::{FieldSpec, Scalar};
use super::groebner::{groebner, reduce, SortedPoly, DEFAULT_SPAIR_BUDGET};
use super::poly::{Monomial, MonomialOrder, Poly, Ring};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    pub ring: Ring,
    gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: Ring, gens: impl IntoIterator<Item = Poly>) -> Ideal {
        let gens = gens
            .into_iter()
            .filter(|p| !p.is_zero())
            .inspect(|p| assert_eq!(p.nvars(), ring.nvars(), "generator outside ring"))
            .collect();
        Ideal { ring, gens }
    }

    pub fn zero(ring: Ring) -> Ideal {
        Ideal { ring, gens: Vec::new() }
    }

    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<Ideal> {
        let ps = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring.clone(), ps))
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn field(&self) -> &FieldSpec {
        &self.ring.field
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn with_gens(&self, extra: impl IntoIterator<Item = Poly>) -> Ideal {
        Ideal::new(self.ring.clone(), self.gens.iter().cloned().chain(extra))
    }

    pub fn gen_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| self.ring.fmt_poly(g)).collect()
    }

    pub fn groebner(&self, order: MonomialOrder) -> Result<GroebnerBasis> {
        GroebnerBasis::new(self, order, DEFAULT_SPAIR_BUDGET)
    }

    pub fn groebner_with_budget(&self, order: MonomialOrder, budget: usize) -> Result<GroebnerBasis> {
        GroebnerBasis::new(self, order, budget)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner(MonomialOrder::GrevLex)?.is_unit())
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        let gb = self.groebner(MonomialOrder::GrevLex)?;
        Ok(other.gens.iter().all(|g| gb.contains(g)))
    }

    /// Equality by mutual membership.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        self.with_gens(other.gens.iter().cloned())
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut out = Vec::new();
        for f in &self.gens {
            for g in &other.gens {
                out.push(f * g);
            }
        }
        Ideal::new(self.ring.clone(), out)
    }

    /// `I ∩ J` via `t*I + (1-t)*J` eliminating `t`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        let n = self.ring.nvars();
        let big = Ring::new(self.ring.field.clone(), std::iter::once("_t".to_string()).chain(self.ring.vars.iter().cloned()));
        let shift: Vec<usize> = (1..=n).collect();
        let t = big.var(0);
        let one_minus_t = &big.one() - &t;
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(&t * &f.remap(&shift, n + 1));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.remap(&shift, n + 1));
        }
        let e = eliminate(&Ideal::new(big, gens), &[0])?;
        Ok(Ideal::new(self.ring.clone(), e.gens))
    }

    /// Dimension of the vanishing locus.
    pub fn krull_dim(&self) -> Result<usize> {
        krull_dim(self)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.gen_strings().join(", "))
    }
}

/// A reduced Groebner basis together with its ring and order.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub ring: Ring,
    pub order: MonomialOrder,
    polys: Vec<Poly>,
    sorted: Vec<SortedPoly>,
}

/// Result of dividing by a Groebner basis: `f = sum q_i g_i + remainder`.
#[derive(Debug, Clone)]
pub struct Division {
    pub quotients: Vec<Poly>,
    pub remainder: Poly,
}

impl GroebnerBasis {
    pub fn new(ideal: &Ideal, order: MonomialOrder, budget: usize) -> Result<GroebnerBasis> {
        let polys = groebner(&ideal.gens, order, budget)?;
        Ok(GroebnerBasis::from_reduced(ideal.ring.clone(), order, polys))
    }

    fn from_reduced(ring: Ring, order: MonomialOrder, polys: Vec<Poly>) -> GroebnerBasis {
        let sorted = polys.iter().map(|p| SortedPoly::from_poly(p, order)).collect();
        GroebnerBasis { ring, order, polys, sorted }
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(self.ring.clone(), self.polys.iter().cloned())
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|s| s.lm().clone()).collect()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        let refs: Vec<&SortedPoly> = self.sorted.iter().collect();
        reduce(&SortedPoly::from_poly(f, self.order), &refs, self.order, None).to_poly(self.ring.nvars())
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn divide(&self, f: &Poly) -> Division {
        let n = self.ring.nvars();
        let refs: Vec<&SortedPoly> = self.sorted.iter().collect();
        let mut steps = Vec::new();
        let r = reduce(&SortedPoly::from_poly(f, self.order), &refs, self.order, Some(&mut steps));
        let mut quotients = vec![Poly::zero(n); self.polys.len()];
        for (k, c, m) in steps {
            quotients[k].add_term(m, c);
        }
        Division { quotients, remainder: r.to_poly(n) }
    }
}

/// Membership verdict with the division certificate against the basis.
#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    pub basis: Vec<Poly>,
    pub division: Division,
}

pub fn groebner_basis(ideal: &Ideal, order: MonomialOrder) -> Result<Ideal> {
    Ok(ideal.groebner(order)?.ideal())
}

pub fn ideal_member(f: &Poly, ideal: &Ideal) -> Result<Membership> {
    let gb = ideal.groebner(MonomialOrder::GrevLex)?;
    let division = gb.divide(f);
    Ok(Membership { member: division.remainder.is_zero(), basis: gb.polys.clone(), division })
}

/// `I ∩ k[remaining variables]`, as an ideal of the subring on the
/// remaining variables (in their original relative order).
pub fn eliminate(ideal: &Ideal, drop: &[usize]) -> Result<Ideal> {
    eliminate_with_budget(ideal, drop, DEFAULT_SPAIR_BUDGET)
}

pub fn eliminate_with_budget(ideal: &Ideal, drop: &[usize], budget: usize) -> Result<Ideal> {
    let n = ideal.ring.nvars();
    if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidInput(format!("variable index {bad} out of range")));
    }
    let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
    let sub_ring = Ring::new(ideal.ring.field.clone(), keep.iter().map(|&i| ideal.ring.vars[i].clone()));
    if drop.is_empty() {
        let gb = ideal.groebner_with_budget(MonomialOrder::GrevLex, budget)?;
        return Ok(Ideal::new(sub_ring, gb.polys.iter().cloned()));
    }
    // permute so dropped variables come first
    let mut perm = vec![0usize; n];
    let mut next = 0;
    for &d in drop {
        perm[d] = next;
        next += 1;
    }
    for &k in &keep {
        perm[k] = next;
        next += 1;
    }
    let gens: Vec<Poly> = ideal.gens.iter().map(|g| g.remap(&perm, n)).collect();
    let gb = groebner(&gens, MonomialOrder::Block(drop.len()), budget)?;
    let out = gb
        .into_iter()
        .filter(|g| g.terms().all(|(m, _)| m[..drop.len()].iter().all(|&e| e == 0)))
        .map(|g| Poly::from_terms(keep.len(), g.terms().map(|(m, c)| (m[drop.len()..].to_vec(), c.clone()))));
    Ok(Ideal::new(sub_ring, out))
}

/// Dimension from maximal independent variable sets of the leading ideal.
pub fn krull_dim(ideal: &Ideal) -> Result<usize> {
    let n = ideal.ring.nvars();
    if ideal.is_zero() {
        return Ok(n);
    }
    let gb = ideal.groebner(MonomialOrder::GrevLex)?;
    if gb.is_unit() {
        return Err(Error::EmptyVariety);
    }
    let supports: Vec<u64> = gb
        .leading_monomials()
        .iter()
        .map(|m| m.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (i, _)| acc | 1 << i))
        .collect();
    Ok(max_independent(n, &supports))
}

fn max_independent(n: usize, supports: &[u64]) -> usize {
    fn go(i: usize, n: usize, set: u64, size: usize, supports: &[u64], best: &mut usize) {
        if size + (n - i) <= *best {
            return;
        }
        if i == n {
            *best = size;
            return;
        }
        let with = set | 1 << i;
        if !supports.iter().any(|&s| s & !with == 0) {
            go(i + 1, n, with, size + 1, supports, best);
        }
        go(i + 1, n, set, size, supports, best);
    }
    let mut best = 0;
    go(0, n, 0, 0, supports, &mut best);
    best
}

/// Brute-force membership: is `f` a `k`-combination of `m * g` with
/// `deg(m * g) <= bound`? Sound but incomplete; used as a test oracle.
pub fn bounded_membership(f: &Poly, ideal: &Ideal, bound: u32) -> bool {
    let n = ideal.ring.nvars();
    let mut rows: Vec<Poly> = Vec::new();
    for g in &ideal.gens {
        let room = bound.saturating_sub(g.total_degree());
        if g.total_degree() > bound {
            continue;
        }
        for m in monomials_up_to(n, room) {
            rows.push(g.mul_monomial(&m, &Scalar::one(&ideal.ring.field)));
        }
    }
    super::linalg::in_span(f, &rows, &ideal.ring.field)
}

/// All exponent vectors in `n` variables of total degree at most `d`,
/// sorted by degree.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=d {
        exact_degree(n, deg, &mut vec![0; n], 0, &mut out);
    }
    out
}

fn exact_degree(n: usize, left: u32, cur: &mut Vec<u32>, i: usize, out: &mut Vec<Monomial>) {
    if n == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if i == n - 1 {
        cur[i] = left;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        exact_degree(n, left - e, cur, i + 1, out);
    }
    cur[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Ring {
        Ring::new(FieldSpec::Q, vars.iter().copied())
    }

    #[test]
    fn elimination_examples() {
        let r = ring(&["x", "y", "s"]);
        let i = Ideal::parse(&r, &["x*s^2-1", "y*s^3-1"]).unwrap();
        let e = eliminate(&i, &[2]).unwrap();
        let sub = ring(&["x", "y"]);
        assert_eq!(e.ring, sub);
        let expect = Ideal::parse(&sub, &["x^3-y^2"]).unwrap();
        assert!(e.equals(&expect).unwrap());
        let m = ideal_member(&sub.parse("y^2-x^3").unwrap(), &e).unwrap();
        assert!(m.member);
    }

    #[test]
    fn unit_symbol_elimination() {
        let r = ring(&["x", "g11", "g12", "g21", "g22", "T", "U"]);
        let i = Ideal::parse(&r, &["g11-x*T", "g12-(U-x)", "g21", "g22*x*T-1", "T*U-1"]).unwrap();
        let e = eliminate(&i, &[0]).unwrap();
        let g21 = e.ring.parse("g21").unwrap();
        let det = e.ring.parse("g11*g22-1").unwrap();
        assert!(ideal_member(&g21, &e).unwrap().member);
        assert!(ideal_member(&det, &e).unwrap().member);
    }

    #[test]
    fn membership_certificate_reconstructs() {
        let r = ring(&["g11", "g22"]);
        let i = Ideal::parse(&r, &["g11-1", "g22-1"]).unwrap();
        let f = r.parse("g11*g22-1").unwrap();
        let m = ideal_member(&f, &i).unwrap();
        assert!(m.member);
        let mut acc = r.zero();
        for (q, g) in m.division.quotients.iter().zip(&m.basis) {
            acc = &acc + &(q * g);
        }
        assert_eq!(acc, f);
        let r1 = ring(&["x"]);
        assert!(!ideal_member(&r1.parse("x").unwrap(), &Ideal::parse(&r1, &["x^2"]).unwrap()).unwrap().member);
    }

    #[test]
    fn dimensions() {
        assert_eq!(krull_dim(&Ideal::parse(&ring(&["x", "y"]), &["x^3-y^2"]).unwrap()).unwrap(), 1);
        let r4 = ring(&["x11", "x12", "x21", "x22"]);
        assert_eq!(krull_dim(&Ideal::parse(&r4, &["x11-1", "x21", "x22-1"]).unwrap()).unwrap(), 1);
        assert_eq!(krull_dim(&Ideal::zero(r4.clone())).unwrap(), 4);
        assert_eq!(krull_dim(&Ideal::parse(&r4, &["1"]).unwrap()), Err(Error::EmptyVariety));
    }

    #[test]
    fn intersection_of_lines() {
        let r = ring(&["x", "y"]);
        let a = Ideal::parse(&r, &["x"]).unwrap();
        let b = Ideal::parse(&r, &["y"]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert!(i.equals(&Ideal::parse(&r, &["x*y"]).unwrap()).unwrap());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
    }
}
