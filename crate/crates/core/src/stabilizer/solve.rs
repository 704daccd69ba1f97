//! Finding `k`-points on affine varieties by triangular back-substitution.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FieldSpec, Ideal, MonomialOrder, Poly, Scalar, UniPoly};
use crate::error::{Error, Result};

const NODE_BUDGET: usize = 4000;

/// Value suggestions for unconstrained coordinates.
pub enum Choice<'a> {
    /// Fixed preference list per variable.
    Ordered(&'a dyn Fn(usize) -> Vec<Scalar>),
    /// Random values drawn from small integers (or the whole field when
    /// finite).
    Random(&'a mut ChaCha8Rng, usize),
}

/// A `k`-point of `V(ideal)`, or `None` when the search found none.
///
/// Uses a lex basis: elements involving only `x_i, ..., x_n` cut out the
/// projection, so variables are fixed from the last one upward, taking
/// roots of the univariate gcd when constrained and a suggested value
/// otherwise, with backtracking.
pub fn find_point(ideal: &Ideal, mut choice: Choice<'_>) -> Result<Option<Vec<Scalar>>> {
    let field = ideal.field().clone();
    let n = ideal.ring.nvars();
    let gb = ideal.groebner(MonomialOrder::Lex)?;
    if gb.is_unit() {
        return Ok(None);
    }
    let polys = gb.polys().to_vec();
    let mut vals: Vec<Option<Scalar>> = vec![None; n];
    let mut nodes = 0usize;
    let found = search(&polys, &field, n, n, &mut vals, &mut choice, &mut nodes)?;
    Ok(found.then(|| vals.into_iter().map(|v| v.unwrap()).collect()))
}

fn search(
    polys: &[Poly],
    field: &FieldSpec,
    n: usize,
    i: usize,
    vals: &mut Vec<Option<Scalar>>,
    choice: &mut Choice<'_>,
    nodes: &mut usize,
) -> Result<bool> {
    if i == 0 {
        return Ok(polys.iter().all(|p| p.eval(&vals.iter().map(|v| v.clone().unwrap()).collect::<Vec<_>>()).is_zero()));
    }
    *nodes += 1;
    if *nodes > NODE_BUDGET {
        return Err(Error::budget("point search nodes", NODE_BUDGET));
    }
    let var = i - 1;
    let images: Vec<Poly> = (0..n)
        .map(|j| match &vals[j] {
            Some(v) => Poly::constant(n, v.clone()),
            None => Poly::var(n, j, field),
        })
        .collect();
    let mut g: Option<UniPoly> = None;
    for p in polys {
        if p.used_vars().iter().any(|&v| v < var) {
            continue;
        }
        let q = p.compose(&images, field);
        if q.is_zero() {
            continue;
        }
        let u = UniPoly::from_poly(&q, var, field)?;
        g = Some(match g {
            None => u,
            Some(h) => h.gcd(&u),
        });
    }
    let candidates = match &g {
        Some(h) if h.degree() == Some(0) => return Ok(false),
        Some(h) => h.roots(),
        None => free_values(choice, var, field),
    };
    for c in candidates {
        vals[var] = Some(c);
        if search(polys, field, n, var, vals, choice, nodes)? {
            return Ok(true);
        }
    }
    vals[var] = None;
    Ok(false)
}

fn free_values(choice: &mut Choice<'_>, var: usize, field: &FieldSpec) -> Vec<Scalar> {
    match choice {
        Choice::Ordered(f) => f(var),
        Choice::Random(rng, count) => (0..*count).map(|_| random_scalar(rng, field)).collect(),
    }
}

pub fn random_scalar(rng: &mut ChaCha8Rng, field: &FieldSpec) -> Scalar {
    match field.order() {
        Some(q) => field.enumerate(rng.gen_range(0..q.min(u64::MAX as u128) as u64) as u128),
        None => {
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=4);
            &Scalar::from_i64(field, num) * &Scalar::from_i64(field, den).inv().unwrap()
        }
    }
}

/// Small integers, in the given order, as scalars.
pub fn small_ints(field: &FieldSpec, list: &[i64]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    for &v in list {
        let s = Scalar::from_i64(field, v);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;
    use rand::SeedableRng;

    #[test]
    fn triangular_systems() {
        let q = FieldSpec::Q;
        let r = Ring::new(q.clone(), ["a", "b", "c"]);
        let i = Ideal::parse(&r, &["a*b - 1", "c^2 - 4", "a - c"]).unwrap();
        let zero = |_: usize| small_ints(&FieldSpec::Q, &[0, 1]);
        let p = find_point(&i, Choice::Ordered(&zero)).unwrap().unwrap();
        for g in i.gens() {
            assert!(g.eval(&p).is_zero());
        }
        let none = Ideal::parse(&r, &["a^2 + 1"]).unwrap();
        assert!(find_point(&none, Choice::Ordered(&zero)).unwrap().is_none());
        let unit = Ideal::parse(&r, &["a", "a - 1"]).unwrap();
        assert!(find_point(&unit, Choice::Ordered(&zero)).unwrap().is_none());
    }

    #[test]
    fn random_points_on_sl2() {
        let f5 = FieldSpec::fp(5).unwrap();
        let r = Ring::new(f5.clone(), ["x11", "x12", "x21", "x22"]);
        let i = Ideal::parse(&r, &["x11*x22 - x12*x21 - 1"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let p = find_point(&i, Choice::Random(&mut rng, 6)).unwrap().unwrap();
            assert!(i.gens()[0].eval(&p).is_zero());
        }
    }
}
