//! Places at infinity of a plane curve, by rational Newton–Puiseux
//! expansion in the two charts `x = 1/z` and `y = 1/w`.
//!
//! Each step substitutes `s = xi^v s1^q, Y = s1^m (xi^u + Y1)` with
//! `u q - v m = 1`, so coefficients stay in `k` even when the branch is
//! ramified over the chart coordinate.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::branch::{is_centered_at_infinity, Branch};
use crate::algebra::ideal::eliminate;
use crate::algebra::{FieldSpec, Ideal, Poly, Ring, Scalar, UniPoly};
use crate::error::{Error, Result};
use crate::groups::{det_of, GroupElement, GroupScheme};
use crate::series::{Exponent, PuiseuxSeries, HARD_CAP};

const MAX_DEPTH: usize = 48;
const MAX_EXTENSION_DEGREE: usize = 4;

/// An affine plane curve `f(x, y) = 0` with a polynomial map into a group.
#[derive(Debug, Clone)]
pub struct PlaneCurveInput {
    /// `f` lives in `field[x, y]`.
    pub f: Poly,
    pub field: FieldSpec,
    pub scheme: GroupScheme,
    /// One polynomial in `x, y` per group entry (matrix entries for GL/SL).
    pub embedding: Vec<Poly>,
    /// Over a prime field, move to `F_{p^n}` when a place is not rational.
    pub extend_field: bool,
}

impl PlaneCurveInput {
    pub fn parse(field: &FieldSpec, f: &str, scheme: GroupScheme, embedding: &[&str]) -> Result<Self> {
        let ring = curve_ring(field);
        Ok(PlaneCurveInput {
            f: ring.parse(f)?,
            field: field.clone(),
            scheme,
            embedding: embedding.iter().map(|e| ring.parse(e)).collect::<Result<_>>()?,
            extend_field: false,
        })
    }
}

pub fn curve_ring(field: &FieldSpec) -> Ring {
    Ring::new(field.clone(), ["x", "y"])
}

#[derive(Debug, Clone)]
pub struct Places {
    /// Field the branches are defined over; larger than the input field
    /// only when an extension was requested and needed.
    pub field: FieldSpec,
    pub branches: Vec<Branch>,
    /// `false` when irreducibility of `f` could be certified.
    pub trusted_irreducible: bool,
}

/// One branch per place at infinity whose image in the group is
/// centered at infinity, each carrying the Zariski closure of the
/// embedded curve. Precision `prec` applies to the group entries.
pub fn places_at_infinity(input: &PlaneCurveInput, prec: i64) -> Result<Places> {
    match places_over(input, prec) {
        Err(Error::CoefficientFieldTooSmall(msg)) if input.extend_field => {
            let FieldSpec::Fp(p) = input.field else {
                return Err(Error::CoefficientFieldTooSmall(msg));
            };
            for n in 2..=MAX_EXTENSION_DEGREE {
                let big = FieldSpec::fq_degree(p, n)?;
                let lift = |q: &Poly| q.map_coeffs(|c| Scalar::from_i64(&big, c.as_prime_residue().unwrap() as i64));
                let lifted = PlaneCurveInput {
                    f: lift(&input.f),
                    field: big.clone(),
                    scheme: input.scheme.clone(),
                    embedding: input.embedding.iter().map(lift).collect(),
                    extend_field: false,
                };
                match places_over(&lifted, prec) {
                    Err(Error::CoefficientFieldTooSmall(_)) => continue,
                    other => return other,
                }
            }
            Err(Error::CoefficientFieldTooSmall(format!("{msg}; no extension of degree <= {MAX_EXTENSION_DEGREE} suffices")))
        }
        other => other,
    }
}

fn places_over(input: &PlaneCurveInput, prec: i64) -> Result<Places> {
    let field = &input.field;
    let f = &input.f;
    if f.nvars() != 2 || f.is_constant() {
        return Err(Error::InvalidInput("curve must be a nonconstant polynomial in x, y".into()));
    }
    if input.embedding.len() != input.scheme.entry_count() {
        return Err(Error::InvalidInput(format!(
            "embedding has {} entries, {} needs {}",
            input.embedding.len(),
            input.scheme,
            input.scheme.entry_count()
        )));
    }
    let closure = embedded_closure(input)?;
    if closure.is_unit()? {
        return Err(Error::EmptyVariety);
    }
    check_lands_in_group(input)?;

    let target = prec.clamp(1, HARD_CAP);
    let mut raw = Vec::new();
    // chart x = 1/z: every place where x has a pole
    let g1 = chart(f, 0);
    for b in expand_all(&g1, field, true)? {
        raw.push((b, 0usize));
    }
    // chart y = 1/w: places where y has a pole and x stays finite
    let g2 = chart(f, 1);
    for b in expand_all(&g2, field, false)? {
        raw.push((b, 1usize));
    }

    let mut branches = Vec::new();
    for (b, which) in raw {
        let param = realize(&b, which, input, target)?;
        let branch = Branch::new(param).with_closure(closure.clone());
        if is_centered_at_infinity(&branch)? {
            branches.push(branch);
        }
    }
    Ok(Places { field: field.clone(), branches, trusted_irreducible: !certify_irreducible(f, field) })
}

/// Closure of the image: eliminate the curve variables from the graph.
fn embedded_closure(input: &PlaneCurveInput) -> Result<Ideal> {
    let field = &input.field;
    let names = input.scheme.coord_names();
    let big = Ring::new(field.clone(), ["_u".to_string(), "_v".to_string()].into_iter().chain(names.iter().cloned()));
    let n = big.nvars();
    let lift = |p: &Poly| p.remap(&[0, 1], n);
    let mut gens = vec![lift(&input.f)];
    for (i, e) in input.embedding.iter().enumerate() {
        gens.push(&big.var(2 + i) - &lift(e));
    }
    if let GroupScheme::GL(k) = input.scheme.base() {
        let rows: Vec<Vec<Poly>> = (0..*k).map(|i| (0..*k).map(|j| lift(&input.embedding[i * k + j])).collect()).collect();
        let det = det_of(&rows, &big);
        gens.push(&(&big.var(n - 1) * &det) - &big.one());
    }
    eliminate(&Ideal::new(big, gens), &[0, 1])
}

/// Every group equation pulled back along the embedding must vanish on
/// the curve.
fn check_lands_in_group(input: &PlaneCurveInput) -> Result<()> {
    let field = &input.field;
    let ring = curve_ring(field);
    let curve = Ideal::new(ring.clone(), [input.f.clone()]).groebner(crate::algebra::MonomialOrder::GrevLex)?;
    let base = input.scheme.base();
    let mut images = input.embedding.clone();
    let eqs = match base {
        GroupScheme::GL(k) => {
            let rows: Vec<Vec<Poly>> = (0..*k).map(|i| images[i * k..(i + 1) * k].to_vec()).collect();
            let det = det_of(&rows, &ring);
            if curve.contains(&det) {
                return Err(Error::InvalidInput("embedding has vanishing determinant on the curve".into()));
            }
            // the inverse determinant is not polynomial; only the subgroup
            // equations free of it can be checked here
            images.push(ring.zero());
            input.scheme.equations(field)?.into_iter().filter(|e| e.degree_in(images.len() - 1) == 0).collect::<Vec<_>>()
        }
        _ => input.scheme.equations(field)?,
    };
    let coord = input.scheme.coord_ring(field);
    for e in eqs {
        let pulled = e.compose(&images, field);
        if !curve.contains(&pulled) {
            return Err(Error::NotOnGroup { equation: coord.fmt_poly(&e), residual: ring.fmt_poly(&curve.normal_form(&pulled)) });
        }
    }
    Ok(())
}

/// Sparse polynomial in `(s, Y)` with integer `s`-exponents.
type Bivar = BTreeMap<(i64, u32), Scalar>;

/// `s^{deg} f(1/s, Y)` (pole variable `pole`) with the other variable as `Y`.
fn chart(f: &Poly, pole: usize) -> Bivar {
    let other = 1 - pole;
    let d = f.degree_in(pole) as i64;
    let mut g = Bivar::new();
    for (m, c) in f.terms() {
        g.insert((d - m[pole] as i64, m[other]), c.clone());
    }
    g
}

/// A branch in chart coordinates: `z = lam t^e`, `Y = poly(t) + beta t^n Y1`
/// with `Y1` a power series of positive valuation (absent when zero).
#[derive(Debug, Clone)]
struct ChartBranch {
    lam: Scalar,
    e: i64,
    head: BTreeMap<i64, Scalar>,
    beta: Scalar,
    n: i64,
    tail: Option<Bivar>,
}

impl ChartBranch {
    fn start(field: &FieldSpec) -> ChartBranch {
        ChartBranch { lam: Scalar::one(field), e: 1, head: BTreeMap::new(), beta: Scalar::one(field), n: 0, tail: None }
    }

    fn step(&self, xi: &Scalar, q: i64, m: i64, u: i64, v: i64) -> Result<ChartBranch> {
        let xv = xi.powi(v)?;
        let mut head = BTreeMap::new();
        for (k, c) in &self.head {
            add_into(&mut head, q * k, c * &xv.powi(*k)?);
        }
        let bn = &self.beta * &xv.powi(self.n)?;
        add_into(&mut head, q * self.n + m, &bn * &xi.powi(u)?);
        Ok(ChartBranch { lam: &self.lam * &xv.powi(self.e)?, e: q * self.e, head, beta: bn, n: q * self.n + m, tail: None })
    }
}

fn add_into(map: &mut BTreeMap<i64, Scalar>, k: i64, c: Scalar) {
    let s = match map.remove(&k) {
        Some(old) => &old + &c,
        None => c,
    };
    if !s.is_zero() {
        map.insert(k, s);
    }
}

/// All Puiseux roots of `g`; `any_slope` admits roots with poles,
/// otherwise only roots of nonnegative valuation are kept.
fn expand_all(g: &Bivar, field: &FieldSpec, any_slope: bool) -> Result<Vec<ChartBranch>> {
    let mut out = Vec::new();
    expand(g, field, ChartBranch::start(field), if any_slope { i64::MIN } else { 0 }, 0, &mut out)?;
    Ok(out)
}

fn expand(g: &Bivar, field: &FieldSpec, acc: ChartBranch, min_m: i64, depth: usize, out: &mut Vec<ChartBranch>) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::budget("Newton-Puiseux depth (is the curve squarefree?)", MAX_DEPTH));
    }
    if g.is_empty() {
        return Err(Error::InvalidInput("curve polynomial vanishes identically on a chart".into()));
    }
    let low_j = g.keys().map(|k| k.1).min().unwrap();
    if low_j > 1 {
        return Err(Error::InvalidInput("curve polynomial is not squarefree".into()));
    }
    if low_j == 1 {
        // Y = 0 is an exact root
        out.push(acc.clone());
    }
    let pts = lowest_points(g);
    for w in lower_hull(&pts).windows(2) {
        let ((j1, i1), (j2, i2)) = (w[0], w[1]);
        let dj = j2 as i64 - j1 as i64;
        let di = i2 - i1;
        let gg = dj.gcd(&di);
        let (q, m) = (dj / gg, -di / gg);
        if m < min_m {
            continue;
        }
        let p = field.characteristic();
        if p > 0 && (q as u64).is_multiple_of(p) {
            return Err(Error::WildRamification { p, detail: format!("Newton polygon edge with ramification index {q}") });
        }
        let steps = (dj / q) as usize;
        let phi: Vec<Scalar> = (0..=steps)
            .map(|k| {
                let key = (i1 - k as i64 * m, j1 + (k as i64 * q) as u32);
                g.get(&key).cloned().unwrap_or_else(|| Scalar::zero(field))
            })
            .collect();
        let phi = UniPoly::with_field(field.clone(), phi);
        let fact = phi.factor();
        for fac in &fact.factors {
            if fac.poly.degree() == Some(0) {
                continue;
            }
            if fac.poly.degree() != Some(1) {
                return Err(Error::CoefficientFieldTooSmall(format!(
                    "a place at infinity needs a root of {} over {field}",
                    fac.poly
                )));
            }
            let xi = fac.poly.coeffs()[0].neg();
            if xi.is_zero() {
                continue;
            }
            let (u, v) = bezout(q, m);
            let next = acc.step(&xi, q, m, u, v)?;
            let l = q * i1 + m * j1 as i64;
            let g1 = substitute(g, &xi, q, m, u, v, l)?;
            if fac.multiplicity == 1 {
                let mut b = next;
                if g1.keys().any(|k| k.1 == 0) {
                    b.tail = Some(g1);
                }
                out.push(b);
            } else {
                expand(&g1, field, next, 1, depth + 1, out)?;
            }
        }
    }
    Ok(())
}

/// Lowest `s`-exponent per `Y`-degree.
fn lowest_points(g: &Bivar) -> Vec<(u32, i64)> {
    let mut low: BTreeMap<u32, i64> = BTreeMap::new();
    for &(i, j) in g.keys() {
        let e = low.entry(j).or_insert(i);
        *e = (*e).min(i);
    }
    low.into_iter().collect()
}

fn lower_hull(pts: &[(u32, i64)]) -> Vec<(u32, i64)> {
    let mut hull: Vec<(u32, i64)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as i64 - a.0 as i64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// `u q - v m = 1` with `0 <= v < q`, so unramified steps leave the
/// chart coordinate alone.
fn bezout(q: i64, m: i64) -> (i64, i64) {
    let e = q.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    let (u, v) = (e.x, -e.y);
    let k = Integer::div_floor(&v, &q);
    (u - k * m, v - k * q)
}

/// `g(xi^v s^q, s^m (xi^u + Y)) / s^l`.
fn substitute(g: &Bivar, xi: &Scalar, q: i64, m: i64, u: i64, v: i64, l: i64) -> Result<Bivar> {
    let xu = xi.powi(u)?;
    let xv = xi.powi(v)?;
    let field = xi.field();
    let mut out = Bivar::new();
    for (&(i, j), c) in g {
        let base = c * &xv.powi(i)?;
        let se = q * i + m * j as i64 - l;
        debug_assert!(se >= 0);
        for k in 0..=j {
            // coefficient of Y^k in (xu + Y)^j
            let term = &(&base * &binom(j, k, &field)) * &xu.pow((j - k) as u64);
            let key = (se, k);
            let s = match out.remove(&key) {
                Some(old) => &old + &term,
                None => term,
            };
            if !s.is_zero() {
                out.insert(key, s);
            }
        }
    }
    Ok(out)
}

fn binom(n: u32, k: u32, field: &FieldSpec) -> Scalar {
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Scalar::from_bigint(field, &acc)
}

/// Root of positive valuation of `g(s, Y)` with `dg/dY(0, 0) != 0`, by
/// Newton iteration to precision `prec`.
fn newton_root(g: &Bivar, field: &FieldSpec, prec: i64) -> Result<PuiseuxSeries> {
    let s_prec = Exponent::int(prec);
    let by_y: BTreeMap<u32, PuiseuxSeries> = {
        let mut m: BTreeMap<u32, Vec<(i64, i64, Scalar)>> = BTreeMap::new();
        for (&(i, j), c) in g {
            m.entry(j).or_default().push((i, 0, c.clone()));
        }
        m.into_iter()
            .map(|(j, ts)| (j, PuiseuxSeries::new(field.clone(), ts.into_iter().map(|(i, _, c)| (Exponent::int(i), c)), s_prec)))
            .collect()
    };
    let deriv: BTreeMap<u32, PuiseuxSeries> = by_y
        .iter()
        .filter(|(j, _)| **j > 0)
        .map(|(j, c)| (j - 1, c.scale(&Scalar::from_i64(field, *j as i64))))
        .collect();
    let horner = |coeffs: &BTreeMap<u32, PuiseuxSeries>, y: &PuiseuxSeries| -> Result<PuiseuxSeries> {
        let top = coeffs.keys().max().copied().unwrap_or(0);
        let mut acc = PuiseuxSeries::zero(field.clone(), s_prec);
        for j in (0..=top).rev() {
            acc = acc.mul(y)?;
            if let Some(c) = coeffs.get(&j) {
                acc = acc.add(c)?;
            }
        }
        Ok(acc.with_prec(s_prec))
    };
    let mut y = PuiseuxSeries::zero(field.clone(), s_prec);
    for _ in 0..8 {
        let num = horner(&by_y, &y)?;
        if num.is_zero() {
            return Ok(y);
        }
        let den = horner(&deriv, &y)?;
        if den.val() != Some(Exponent::zero()) {
            return Err(Error::InvalidInput("Newton step at a singular root".into()));
        }
        y = y.sub(&num.div(&den)?)?.with_prec(s_prec);
    }
    if horner(&by_y, &y)?.is_zero() {
        Ok(y)
    } else {
        Err(Error::budget("Newton iterations", 8))
    }
}

/// Chart coordinates as series in `t`, then the group entries.
fn realize(b: &ChartBranch, which: usize, input: &PlaneCurveInput, target: i64) -> Result<GroupElement> {
    let field = &input.field;
    let lam_inv = b.lam.inv()?;
    let pole = PuiseuxSeries::monomial(Exponent::int(-b.e), lam_inv, Exponent::int(HARD_CAP));
    let mut inner = target + 2;
    loop {
        let other = match &b.tail {
            None => PuiseuxSeries::new(field.clone(), b.head.iter().map(|(k, c)| (Exponent::int(*k), c.clone())), Exponent::int(HARD_CAP)),
            Some(g) => {
                let y1 = newton_root(g, field, inner)?;
                let head = PuiseuxSeries::new(field.clone(), b.head.iter().map(|(k, c)| (Exponent::int(*k), c.clone())), Exponent::int(HARD_CAP));
                head.add(&y1.scale(&b.beta).shift(Exponent::int(b.n)))?
            }
        };
        let (x, y) = if which == 0 { (pole.clone(), other) } else { (other, pole.clone()) };
        let entries: Vec<PuiseuxSeries> = input
            .embedding
            .iter()
            .map(|e| PuiseuxSeries::eval_poly(e, &[x.clone(), y.clone()], field))
            .collect::<Result<_>>()?;
        let worst = entries.iter().map(|e| e.prec()).min().unwrap_or(Exponent::int(HARD_CAP));
        if b.tail.is_none() || worst >= Exponent::int(target) || inner >= HARD_CAP {
            let entries = entries
                .into_iter()
                .map(|e| if b.tail.is_none() { e } else { e.truncate(Exponent::int(target)) })
                .collect();
            return GroupElement::unchecked(input.scheme.clone(), field.clone(), entries);
        }
        let deficit = (Exponent::int(target) - worst).approx().ceil() as i64;
        inner = (inner + deficit.max(1)).min(HARD_CAP);
    }
}

/// Irreducibility certificates for two easy shapes: linear in one
/// variable with coprime coefficients, or a binomial whose exponent
/// difference is primitive and with no monomial factor.
fn certify_irreducible(f: &Poly, field: &FieldSpec) -> bool {
    for var in 0..2 {
        if f.degree_in(var) == 1 {
            let other = 1 - var;
            let parts = f.coefficients_in(var);
            let a = parts.get(&1).and_then(|p| UniPoly::from_poly(p, other, field).ok());
            let b = parts.get(&0).and_then(|p| UniPoly::from_poly(p, other, field).ok());
            match (a, b) {
                (Some(a), Some(b)) if a.gcd(&b).degree() == Some(0) => return true,
                (Some(a), None) if a.degree() == Some(0) => return true,
                _ => {}
            }
        }
    }
    let ms: Vec<&Vec<u32>> = f.terms().map(|(m, _)| m).collect();
    if ms.len() == 2 {
        let (a, b) = (ms[0], ms[1]);
        let no_common = a[0].min(b[0]) == 0 && a[1].min(b[1]) == 0;
        let dx = (a[0] as i64 - b[0] as i64).abs();
        let dy = (a[1] as i64 - b[1] as i64).abs();
        return no_common && dx.gcd(&dy) == 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(b: &Branch) -> Vec<String> {
        b.entries().iter().map(|e| e.to_string().split(" + O(").next().unwrap().to_string()).collect()
    }

    #[test]
    fn hyperbola_has_two_places() {
        let q = FieldSpec::Q;
        let input = PlaneCurveInput::parse(&q, "x*y - 1", GroupScheme::Additive(2), &["x", "y"]).unwrap();
        let p = places_at_infinity(&input, 12).unwrap();
        assert!(!p.trusted_irreducible);
        let mut got: Vec<Vec<String>> = p.branches.iter().map(entries).collect();
        got.sort();
        assert_eq!(got, vec![vec!["t".to_string(), "t^-1".into()], vec!["t^-1".to_string(), "t".into()]]);
    }

    #[test]
    fn cusp_has_one_ramified_place() {
        let q = FieldSpec::Q;
        let input = PlaneCurveInput::parse(&q, "y^2 - x^3", GroupScheme::Additive(2), &["x", "y"]).unwrap();
        let p = places_at_infinity(&input, 12).unwrap();
        assert!(!p.trusted_irreducible);
        assert_eq!(p.branches.len(), 1);
        assert_eq!(entries(&p.branches[0]), vec!["t^-2", "t^-3"]);
    }

    #[test]
    fn circle_needs_square_root_of_minus_one() {
        let q = FieldSpec::Q;
        let input = PlaneCurveInput::parse(&q, "x^2 + y^2 - 1", GroupScheme::Additive(2), &["x", "y"]).unwrap();
        assert!(matches!(places_at_infinity(&input, 12), Err(Error::CoefficientFieldTooSmall(_))));

        let f5 = FieldSpec::fp(5).unwrap();
        let input = PlaneCurveInput::parse(&f5, "x^2 + y^2 - 1", GroupScheme::Additive(2), &["x", "y"]).unwrap();
        let p = places_at_infinity(&input, 12).unwrap();
        assert!(p.trusted_irreducible);
        assert_eq!(p.branches.len(), 2);
        for b in &p.branches {
            let x = &b.entries()[0];
            let y = &b.entries()[1];
            assert_eq!(x.val(), Some(Exponent::int(-1)));
            let lead = y.leading().unwrap();
            assert_eq!(lead.0, Exponent::int(-1));
            let r = lead.1.as_prime_residue().unwrap();
            assert!(r == 2 || r == 3, "{x} {y}");
            // the parameterization satisfies the curve to the tracked precision
            let f = curve_ring(&f5).parse("x^2 + y^2 - 1").unwrap();
            let v = PuiseuxSeries::eval_poly(&f, &[x.clone(), y.clone()], &f5).unwrap();
            assert!(v.is_zero(), "{v}");
            assert!(v.prec() >= Exponent::int(9));
        }
    }

    #[test]
    fn circle_over_f3_extends_the_field() {
        let f3 = FieldSpec::fp(3).unwrap();
        let mut input = PlaneCurveInput::parse(&f3, "x^2 + y^2 - 1", GroupScheme::Additive(2), &["x", "y"]).unwrap();
        assert!(matches!(places_at_infinity(&input, 8), Err(Error::CoefficientFieldTooSmall(_))));
        input.extend_field = true;
        let p = places_at_infinity(&input, 8).unwrap();
        assert_eq!(p.field.order(), Some(9));
        assert_eq!(p.branches.len(), 2);
    }

    #[test]
    fn artin_schreier_is_wild() {
        let f2 = FieldSpec::fp(2).unwrap();
        let input = PlaneCurveInput::parse(&f2, "y^2 + y + x", GroupScheme::Additive(2), &["x", "y"]).unwrap();
        assert!(matches!(places_at_infinity(&input, 8), Err(Error::WildRamification { p: 2, .. })));
    }

    #[test]
    fn vertical_lines_and_embedding_into_sl2() {
        let q = FieldSpec::Q;
        let input = PlaneCurveInput::parse(&q, "x^2 - 1", GroupScheme::Additive(2), &["x", "y"]).unwrap();
        let p = places_at_infinity(&input, 12).unwrap();
        let mut got: Vec<Vec<String>> = p.branches.iter().map(entries).collect();
        got.sort();
        assert_eq!(got, vec![vec!["-1".to_string(), "t^-1".into()], vec!["1".to_string(), "t^-1".into()]]);

        let input = PlaneCurveInput::parse(&q, "x*y - 1", GroupScheme::SL(2), &["x", "0", "0", "y"]).unwrap();
        let p = places_at_infinity(&input, 12).unwrap();
        assert_eq!(p.branches.len(), 2);
        let closure = p.branches[0].closure.as_ref().unwrap();
        assert_eq!(closure.krull_dim().unwrap(), 1);
        for b in &p.branches {
            assert!(b.param.in_mu().is_ok());
            GroupElement::new(GroupScheme::SL(2), q.clone(), b.entries().to_vec()).unwrap();
        }
    }

    #[test]
    fn embedding_must_land_in_the_group() {
        let q = FieldSpec::Q;
        let input = PlaneCurveInput::parse(&q, "x*y - 1", GroupScheme::SL(2), &["x", "1", "0", "x"]).unwrap();
        assert!(matches!(places_at_infinity(&input, 12), Err(Error::NotOnGroup { .. })));
    }

    #[test]
    fn hull_and_bezout() {
        assert_eq!(lower_hull(&[(0, 0), (1, 2), (2, 3)]), vec![(0, 0), (2, 3)]);
        assert_eq!(lower_hull(&[(0, 2), (1, 0), (2, 2)]), vec![(0, 2), (1, 0), (2, 2)]);
        for (q, m) in [(2, -3), (1, 0), (3, 1), (1, -1)] {
            let (u, v) = bezout(q, m);
            assert_eq!(u * q - v * m, 1);
            assert!((0..q).contains(&v));
        }
    }
}
