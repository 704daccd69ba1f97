//! Subgroups of `G(k)` given by ideals, with optional parameterizations.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::solve::{find_point, Choice};
use crate::algebra::ideal::eliminate_with_budget;
use crate::algebra::linalg;
use crate::algebra::{FieldSpec, Ideal, MonomialOrder, Poly, Ring, Scalar, DEFAULT_SPAIR_BUDGET};
use crate::error::{Error, Result};
use crate::groups::{adjugate_of, GroupScheme, KPoint};

/// `c -> M(c)` on the variety of `constraints`; one polynomial per
/// coordinate of the ambient scheme (including `y` for GL).
#[derive(Debug, Clone)]
pub struct Family {
    pub ring: Ring,
    pub constraints: Ideal,
    pub coords: Vec<Poly>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SubgroupFlags {
    pub verified_subgroup: bool,
    pub solvable: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SubgroupDesc {
    pub scheme: GroupScheme,
    pub field: FieldSpec,
    /// Reduced grevlex basis, including the ambient equations.
    pub ideal: Ideal,
    pub family: Option<Family>,
    pub dim: usize,
    pub flags: SubgroupFlags,
}

impl SubgroupDesc {
    /// Normalizes `ideal` (adds the ambient equations, reduces) and
    /// computes the dimension.
    pub fn from_ideal(scheme: &GroupScheme, ideal: &Ideal) -> Result<SubgroupDesc> {
        let field = ideal.field().clone();
        let ring = scheme.coord_ring(&field);
        if ideal.ring.vars != ring.vars {
            return Err(Error::InvalidInput(format!("ideal ring {:?} does not match {scheme}", ideal.ring.vars)));
        }
        let full = ideal.with_gens(scheme.equations(&field)?);
        let gb = full.groebner(MonomialOrder::GrevLex)?;
        if gb.is_unit() {
            return Err(Error::EmptyVariety);
        }
        let ideal = gb.ideal();
        let dim = ideal.krull_dim()?;
        Ok(SubgroupDesc { scheme: scheme.clone(), field, ideal, family: None, dim, flags: SubgroupFlags::default() })
    }

    pub fn parse(scheme: &GroupScheme, field: &FieldSpec, gens: &[&str]) -> Result<SubgroupDesc> {
        SubgroupDesc::from_ideal(scheme, &Ideal::parse(&scheme.coord_ring(field), gens)?)
    }

    pub fn trivial(scheme: &GroupScheme, field: &FieldSpec) -> Result<SubgroupDesc> {
        let ring = scheme.coord_ring(field);
        let id = scheme.identity_coords(field);
        let gens = (0..ring.nvars()).map(|i| &ring.var(i) - &ring.constant(id[i].clone()));
        SubgroupDesc::from_ideal(scheme, &Ideal::new(ring.clone(), gens))
    }

    pub fn with_family(mut self, family: Family) -> SubgroupDesc {
        self.family = Some(family);
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ideal.ring
    }

    pub fn contains_point(&self, p: &KPoint) -> Result<bool> {
        let c = p.coords()?;
        Ok(self.ideal.gens().iter().all(|g| g.eval(&c).is_zero()))
    }

    /// Equality of ideals by mutual membership.
    pub fn same_ideal(&self, other: &SubgroupDesc) -> Result<bool> {
        self.ideal.equals(&other.ideal)
    }

    /// Random `k`-points found by back-substitution with random free values.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<KPoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = self.scheme.entry_count();
        let mut out = Vec::new();
        let mut tries = 0;
        while out.len() < count && tries < 20 * count + 20 {
            tries += 1;
            if let Some(p) = find_point(&self.ideal, Choice::Random(&mut rng, 4))? {
                out.push(KPoint::new(self.scheme.clone(), self.field.clone(), p[..entries].to_vec())?);
            }
        }
        if out.len() < count {
            return Err(Error::Inconclusive(format!("found only {} of {count} sample points", out.len())));
        }
        Ok(out)
    }

    pub fn classify(&self) -> Result<Classification> {
        classify(self)
    }
}

impl fmt::Display for SubgroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.ideal, self.dim)
    }
}

/// Outcome of [`verify_subgroup`]; `failures` names each failed check.
#[derive(Debug, Clone, Default)]
pub struct SubgroupReport {
    pub identity: bool,
    pub multiplication: bool,
    pub inverse: bool,
    pub family: Option<bool>,
    pub failures: Vec<String>,
}

impl SubgroupReport {
    pub fn is_subgroup(&self) -> bool {
        self.identity && self.multiplication && self.inverse && self.family != Some(false)
    }
}

/// Identity, closure under the group law and inversion, checked by ideal
/// membership over two independent copies of the coordinates; and, when a
/// family is attached, that the ideal vanishes on it.
pub fn verify_subgroup(h: &SubgroupDesc) -> Result<SubgroupReport> {
    let field = &h.field;
    let ring = h.ring();
    let c = ring.nvars();
    let mut rep = SubgroupReport::default();
    let id = h.scheme.identity_coords(field);
    rep.identity = true;
    for g in h.ideal.gens() {
        if !g.eval(&id).is_zero() {
            rep.identity = false;
            rep.failures.push(format!("identity: {} does not vanish", ring.fmt_poly(g)));
        }
    }

    let law = h.scheme.law_ring(field);
    let first: Vec<usize> = (0..c).collect();
    let second: Vec<usize> = (c..2 * c).collect();
    let both = Ideal::new(
        law.clone(),
        h.ideal.gens().iter().map(|g| g.remap(&first, 2 * c)).chain(h.ideal.gens().iter().map(|g| g.remap(&second, 2 * c))),
    );
    let gb2 = both.groebner(MonomialOrder::GrevLex)?;
    let mul = h.scheme.mul_law(field);
    rep.multiplication = true;
    for g in h.ideal.gens() {
        let pulled = g.compose(&mul, field);
        if !gb2.contains(&pulled) {
            rep.multiplication = false;
            rep.failures.push(format!("product: {} not in the ideal of pairs", law.fmt_poly(&pulled)));
        }
    }

    let gb = h.ideal.groebner(MonomialOrder::GrevLex)?;
    let inv = h.scheme.inv_law(field);
    rep.inverse = true;
    for g in h.ideal.gens() {
        let pulled = g.compose(&inv, field);
        if !gb.contains(&pulled) {
            rep.inverse = false;
            rep.failures.push(format!("inverse: {} not in the ideal", ring.fmt_poly(&pulled)));
        }
    }

    if let Some(fam) = &h.family {
        let cg = fam.constraints.groebner(MonomialOrder::GrevLex)?;
        let ok = h.ideal.gens().iter().all(|g| cg.contains(&g.compose(&fam.coords, field)));
        if !ok {
            rep.failures.push("parameterization leaves the ideal".into());
        }
        rep.family = Some(ok);
    }
    Ok(rep)
}

/// Runs [`verify_subgroup`] and records the verdict in the flags.
pub fn mark_verified(mut h: SubgroupDesc) -> Result<(SubgroupDesc, SubgroupReport)> {
    let rep = verify_subgroup(&h)?;
    h.flags.verified_subgroup = rep.is_subgroup();
    Ok((h, rep))
}

fn matrix_of(polys: &[Poly], n: usize) -> Vec<Vec<Poly>> {
    (0..n).map(|i| polys[i * n..(i + 1) * n].to_vec()).collect()
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>], ring: &Ring) -> Vec<Vec<Poly>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(ring.zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j]))).collect())
        .collect()
}

fn kpoint_matrix(p: &KPoint, ring: &Ring) -> Vec<Vec<Poly>> {
    let n = p.scheme.n();
    (0..n).map(|i| (0..n).map(|j| ring.constant(p.entries[i * n + j].clone())).collect()).collect()
}

/// `g H g^{-1}`: the ideal is pulled back along `x -> g^{-1} x g`.
pub fn conjugate_stab(h: &SubgroupDesc, g: &KPoint) -> Result<SubgroupDesc> {
    if g.scheme.base() != h.scheme.base() {
        return Err(Error::InvalidInput(format!("cannot conjugate a subgroup of {} by a point of {}", h.scheme, g.scheme)));
    }
    if !h.scheme.is_matrix() {
        return Ok(h.clone());
    }
    let field = &h.field;
    let ring = h.ring().clone();
    let n = h.scheme.n();
    let ginv = g.inv()?;
    let x = matrix_of(&(0..n * n).map(|i| ring.var(i)).collect::<Vec<_>>(), n);
    let pulled = mat_mul(&mat_mul(&kpoint_matrix(&ginv, &ring), &x, &ring), &kpoint_matrix(g, &ring), &ring);
    let mut images: Vec<Poly> = pulled.into_iter().flatten().collect();
    if ring.nvars() > n * n {
        images.push(ring.var(n * n));
    }
    let ideal = Ideal::new(ring.clone(), h.ideal.gens().iter().map(|f| f.compose(&images, field)));
    let mut out = SubgroupDesc::from_ideal(&h.scheme, &ideal)?;
    out.flags = h.flags;
    if let Some(fam) = &h.family {
        let pr = &fam.ring;
        let m = matrix_of(&fam.coords[..n * n], n);
        let conj = mat_mul(&mat_mul(&kpoint_matrix(g, pr), &m, pr), &kpoint_matrix(&ginv, pr), pr);
        let mut coords: Vec<Poly> = conj.into_iter().flatten().collect();
        coords.extend(fam.coords[n * n..].iter().cloned());
        out.family = Some(Family { ring: pr.clone(), constraints: fam.constraints.clone(), coords });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Trivial,
    Unipotent,
    DiagonalTorus,
    UpperTriangular,
    LowerTriangular,
    VectorSubgroup,
    WholeGroup,
    Unclassified,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Trivial => "trivial",
            Classification::Unipotent => "unipotent",
            Classification::DiagonalTorus => "diagonal torus",
            Classification::UpperTriangular => "Borel-contained (upper triangular)",
            Classification::LowerTriangular => "contained in the lower triangular Borel",
            Classification::VectorSubgroup => "vector subgroup",
            Classification::WholeGroup => "whole group",
            Classification::Unclassified => "unclassified",
        })
    }
}

fn classify(h: &SubgroupDesc) -> Result<Classification> {
    let ring = h.ring();
    let field = &h.field;
    let gb = h.ideal.groebner(MonomialOrder::GrevLex)?;
    let id = h.scheme.identity_coords(field);
    let trivial = (0..ring.nvars()).all(|i| gb.contains(&(&ring.var(i) - &ring.constant(id[i].clone()))));
    if trivial {
        return Ok(Classification::Trivial);
    }
    if gb.ideal().equals(&h.scheme.defining_ideal(field)?)? {
        return Ok(Classification::WholeGroup);
    }
    if !h.scheme.is_matrix() {
        let linear = gb.polys().iter().all(|p| p.total_degree() == 1 && p.constant_term().is_none());
        return Ok(if linear { Classification::VectorSubgroup } else { Classification::Unclassified });
    }
    let n = h.scheme.n();
    let x = matrix_of(&(0..n * n).map(|i| ring.var(i)).collect::<Vec<_>>(), n);
    let mut nil: Vec<Vec<Poly>> = x.clone();
    for (i, row) in nil.iter_mut().enumerate() {
        row[i] = &row[i] - &ring.one();
    }
    let mut pw = nil.clone();
    for _ in 1..n {
        pw = mat_mul(&pw, &nil, ring);
    }
    if pw.iter().flatten().all(|p| gb.contains(p)) {
        return Ok(Classification::Unipotent);
    }
    let off = |keep: &dyn Fn(usize, usize) -> bool| (0..n).all(|i| (0..n).all(|j| !keep(i, j) || gb.contains(&x[i][j])));
    if off(&|i, j| i != j) {
        return Ok(Classification::DiagonalTorus);
    }
    if off(&|i, j| i > j) {
        return Ok(Classification::UpperTriangular);
    }
    if off(&|i, j| i < j) {
        return Ok(Classification::LowerTriangular);
    }
    Ok(Classification::Unclassified)
}

/// Verdict of [`is_solvable`] with the reason it was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solvability {
    pub solvable: bool,
    pub reason: String,
}

fn commutator_polys(scheme: &GroupScheme, field: &FieldSpec) -> (Ring, Vec<Poly>, Vec<Poly>) {
    let law = scheme.law_ring(field);
    let c = scheme.coord_names().len();
    let n = scheme.n();
    let a = matrix_of(&(0..n * n).map(|i| law.var(i)).collect::<Vec<_>>(), n);
    let b = matrix_of(&(c..c + n * n).map(|i| law.var(i)).collect::<Vec<_>>(), n);
    let gl = c > n * n;
    let scale = |m: Vec<Vec<Poly>>, y: Option<Poly>| -> Vec<Vec<Poly>> {
        match y {
            Some(y) => m.into_iter().map(|r| r.into_iter().map(|p| &p * &y).collect()).collect(),
            None => m,
        }
    };
    let ainv = scale(adjugate_of(&a, &law), gl.then(|| law.var(c - 1)));
    let binv = scale(adjugate_of(&b, &law), gl.then(|| law.var(2 * c - 1)));
    let ab = mat_mul(&a, &b, &law);
    let ba = mat_mul(&b, &a, &law);
    let comm = mat_mul(&mat_mul(&ab, &ainv, &law), &binv, &law);
    let mut comm: Vec<Poly> = comm.into_iter().flatten().collect();
    if gl {
        comm.push(law.one());
    }
    let diff: Vec<Poly> = ab.into_iter().flatten().zip(ba.into_iter().flatten()).map(|(p, q)| &p - &q).collect();
    (law, comm, diff)
}

fn pair_ideal(h: &Ideal, law: &Ring) -> Ideal {
    let c = h.ring.nvars();
    let first: Vec<usize> = (0..c).collect();
    let second: Vec<usize> = (c..2 * c).collect();
    Ideal::new(
        law.clone(),
        h.gens().iter().map(|g| g.remap(&first, 2 * c)).chain(h.gens().iter().map(|g| g.remap(&second, 2 * c))),
    )
}

fn is_abelian(scheme: &GroupScheme, ideal: &Ideal) -> Result<bool> {
    if !scheme.is_matrix() {
        return Ok(true);
    }
    let (law, _, diff) = commutator_polys(scheme, ideal.field());
    let gb = pair_ideal(ideal, &law).groebner(MonomialOrder::GrevLex)?;
    Ok(diff.iter().all(|d| gb.contains(d)))
}

fn jacobian_at(polys: &[Poly], vars: std::ops::Range<usize>, point: &[Scalar]) -> linalg::Mat {
    polys.iter().map(|p| vars.clone().map(|v| p.derivative(v).eval(point)).collect()).collect()
}

/// Rank of the differential of the commutator map restricted to
/// `H x H` at a random smooth pair, or `None` if no smooth pair was found.
fn commutator_rank(h: &SubgroupDesc, samples: usize, seed: u64) -> Result<Option<usize>> {
    let field = &h.field;
    let c = h.ring().nvars();
    let (_, comm, _) = commutator_polys(&h.scheme, field);
    let pts = match h.sample_points(2 * samples.max(1), seed) {
        Ok(p) => p,
        Err(Error::Inconclusive(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let tangent = |p: &[Scalar]| -> Option<linalg::Mat> {
        let j = jacobian_at(h.ideal.gens(), 0..c, p);
        let k = linalg::kernel(&j, c, field);
        (k.len() == h.dim).then_some(k)
    };
    for pair in pts.chunks(2) {
        if pair.len() < 2 {
            break;
        }
        let (p, q) = (pair[0].coords()?, pair[1].coords()?);
        let (Some(tp), Some(tq)) = (tangent(&p), tangent(&q)) else { continue };
        let at: Vec<Scalar> = p.iter().chain(q.iter()).cloned().collect();
        let jc = jacobian_at(&comm, 0..2 * c, &at);
        // columns: tangent directions at p (first copy) then at q
        let mut m: linalg::Mat = vec![Vec::new(); jc.len()];
        for v in tp.iter().map(|v| (v, 0)).chain(tq.iter().map(|v| (v, c))) {
            for (r, row) in jc.iter().enumerate() {
                let mut acc = Scalar::zero(field);
                for (k, x) in v.0.iter().enumerate() {
                    acc = &acc + &(&row[v.1 + k] * x);
                }
                m[r].push(acc);
            }
        }
        return Ok(Some(linalg::rank(&m)));
    }
    Ok(None)
}

/// Closure of the image of `H x H` under `map` (polynomials in the law ring).
fn image_closure(scheme: &GroupScheme, source: &Ideal, map: &[Poly], budget: usize) -> Result<Ideal> {
    let field = source.field().clone();
    let names = scheme.coord_names();
    let law = scheme.law_ring(&field);
    let src_n = law.nvars();
    let big = law.extended(names.iter().map(|v| format!("{v}_img")));
    let total = big.nvars();
    let lift: Vec<usize> = (0..src_n).collect();
    let mut gens: Vec<Poly> = pair_ideal(source, &law).gens().iter().map(|g| g.remap(&lift, total)).collect();
    for (i, m) in map.iter().enumerate() {
        gens.push(&big.var(src_n + i) - &m.remap(&lift, total));
    }
    let out = eliminate_with_budget(&Ideal::new(big, gens), &(0..src_n).collect::<Vec<_>>(), budget)?;
    Ok(Ideal::new(scheme.coord_ring(&field), out.gens().iter().cloned()))
}

/// Derived-series test.
///
/// Abelian groups are solvable. When the commutator map has full rank
/// at a smooth pair, the derived subgroup has full dimension and the
/// series stalls at a nontrivial perfect group, so the answer is a
/// certified `false`. Otherwise the derived series is followed through
/// image closures (commutators, then products until the dimension
/// settles) for at most `dim + 1` steps.
pub fn is_solvable(h: &SubgroupDesc, sample_budget: usize, seed: u64) -> Result<Solvability> {
    let field = &h.field;
    if is_abelian(&h.scheme, &h.ideal)? {
        return Ok(Solvability { solvable: true, reason: "abelian".into() });
    }
    if h.dim > 0 {
        if let Some(r) = commutator_rank(h, sample_budget, seed)? {
            if r == h.dim {
                return Ok(Solvability {
                    solvable: false,
                    reason: format!("commutator map has rank {r} = dim at a smooth point; the derived subgroup is not smaller"),
                });
            }
        }
    }
    let (_, comm, _) = commutator_polys(&h.scheme, field);
    let mul = h.scheme.mul_law(field);
    let mut current = h.ideal.clone();
    let mut dim = h.dim;
    for step in 1..=h.dim + 1 {
        let derived = image_closure(&h.scheme, &current, &comm, DEFAULT_SPAIR_BUDGET).map_err(|e| match e {
            Error::BudgetExceeded { .. } => Error::Inconclusive(format!("derived step {step}: {e}")),
            e => e,
        })?;
        let mut group = SubgroupDesc::from_ideal(&h.scheme, &derived)?;
        for _ in 0..=h.dim {
            let next = image_closure(&h.scheme, &group.ideal, &mul, DEFAULT_SPAIR_BUDGET)
                .map_err(|e| Error::Inconclusive(format!("closing derived step {step}: {e}")))?;
            let next = SubgroupDesc::from_ideal(&h.scheme, &next)?;
            if next.dim == group.dim && next.ideal.equals(&group.ideal)? {
                break;
            }
            group = next;
        }
        if group.dim >= dim && step > 1 {
            return Ok(Solvability { solvable: false, reason: format!("derived series stalls in dimension {}", group.dim) });
        }
        if is_abelian(&h.scheme, &group.ideal)? {
            return Ok(Solvability { solvable: true, reason: format!("derived subgroup number {step} is abelian") });
        }
        current = group.ideal.clone();
        dim = group.dim;
    }
    Err(Error::Inconclusive("derived series did not terminate within dim + 1 steps".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2(gens: &[&str]) -> SubgroupDesc {
        SubgroupDesc::parse(&GroupScheme::SL(2), &FieldSpec::Q, gens).unwrap()
    }

    #[test]
    fn verification_examples() {
        for h in [sl2(&["x11-1", "x21", "x22-1"]), sl2(&["x12", "x21", "x11*x22-1"]), sl2(&[])] {
            let r = verify_subgroup(&h).unwrap();
            assert!(r.is_subgroup(), "{h}: {:?}", r.failures);
        }
        let coset = sl2(&["x11-2", "x21", "x12", "x11*x22-1"]);
        let r = verify_subgroup(&coset).unwrap();
        assert!(!r.identity && !r.is_subgroup());
        let not_closed = sl2(&["x11-x12-1", "x21"]);
        assert!(!verify_subgroup(&not_closed).unwrap().is_subgroup());
    }

    #[test]
    fn conjugation_examples() {
        let q = FieldSpec::Q;
        let u = sl2(&["x11-1", "x21", "x22-1"]);
        let id = KPoint::identity(&GroupScheme::SL(2), &q);
        assert!(conjugate_stab(&u, &id).unwrap().same_ideal(&u).unwrap());
        let w = KPoint::new(GroupScheme::SL(2), q.clone(), vec![0, 1, -1, 0].into_iter().map(|v| Scalar::from_i64(&q, v)).collect()).unwrap();
        let lower = conjugate_stab(&u, &w).unwrap();
        assert!(lower.same_ideal(&sl2(&["x11-1", "x12", "x22-1"])).unwrap());
        assert_eq!(lower.dim, 1);
    }

    #[test]
    fn classification() {
        assert_eq!(sl2(&["x11-1", "x21", "x22-1"]).classify().unwrap(), Classification::Unipotent);
        assert_eq!(sl2(&["x12", "x21", "x11*x22-1"]).classify().unwrap(), Classification::DiagonalTorus);
        assert_eq!(sl2(&["x21"]).classify().unwrap(), Classification::UpperTriangular);
        assert_eq!(sl2(&[]).classify().unwrap(), Classification::WholeGroup);
        assert_eq!(sl2(&["x11-1", "x12", "x21", "x22-1"]).classify().unwrap(), Classification::Trivial);
    }

    #[test]
    fn solvability() {
        assert!(is_solvable(&sl2(&["x11-1", "x21", "x22-1"]), 4, 1).unwrap().solvable);
        assert!(is_solvable(&sl2(&["x12", "x21", "x11*x22-1"]), 4, 1).unwrap().solvable);
        let full = is_solvable(&sl2(&[]), 4, 1).unwrap();
        assert!(!full.solvable, "{}", full.reason);
        let borel = is_solvable(&sl2(&["x21"]), 4, 1).unwrap();
        assert!(borel.solvable, "{}", borel.reason);
    }
}
