//! The symbolic reparameterization `s = nu^e t (1 + sum c_g t^g)` and the
//! quotient `a(s) b(t)^{-1}` with polynomial coefficients in the unknowns.

use crate::algebra::{FieldSpec, Poly, Ring, Scalar};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupScheme};
use crate::series::{subst_normalized, Exponent, PuiseuxSeries, Series, HARD_CAP};

pub(crate) type PolySeries = Series<Poly>;

/// Unknowns `c1..cm` (one per correction exponent), then `nu`, `nu_inv`.
#[derive(Debug, Clone)]
pub(crate) struct Ansatz {
    pub ring: Ring,
    pub gammas: Vec<Exponent>,
    pub e: i64,
}

impl Ansatz {
    /// Correction exponents `1/e, 2/e, ..` up to `gmax`.
    pub fn new(field: &FieldSpec, e: i64, gmax: Exponent, order_budget: usize) -> Result<Ansatz> {
        let count = if gmax.is_positive() { (gmax.approx() * e as f64 + 1e-9).floor() as usize } else { 0 };
        if count > order_budget {
            return Err(Error::budget(format!("reparameterization needs {count} correction orders"), order_budget));
        }
        let gammas: Vec<Exponent> = (1..=count as i64).map(|k| Exponent::frac(k, e)).collect();
        let names = (1..=count).map(|i| format!("c{i}")).chain(["nu".to_string(), "nu_inv".to_string()]);
        Ok(Ansatz { ring: Ring::new(field.clone(), names), gammas, e })
    }

    pub fn m(&self) -> usize {
        self.gammas.len()
    }

    pub fn nu(&self) -> usize {
        self.m()
    }

    pub fn nu_inv(&self) -> usize {
        self.m() + 1
    }

    pub fn unit_relation(&self) -> Poly {
        &(&self.ring.var(self.nu()) * &self.ring.var(self.nu_inv())) - &self.ring.one()
    }

    fn correction(&self) -> PolySeries {
        let field = self.ring.field.clone();
        PolySeries::new(field, self.gammas.iter().enumerate().map(|(i, g)| (*g, self.ring.var(i))), Exponent::int(HARD_CAP))
    }

    /// `f(s)` with symbolic coefficients.
    pub fn subst(&self, f: &PuiseuxSeries) -> Result<PolySeries> {
        let v = self.correction();
        let e = self.e;
        let ring = &self.ring;
        let lead_pow = |r: num_rational::Rational64| -> Result<Poly> {
            let k = r * e;
            if !k.is_integer() {
                return Err(Error::InvalidInput(format!("exponent {r} not in (1/{e})Z")));
            }
            let k = k.to_integer();
            Ok(if k >= 0 { ring.var(self.nu()).pow(k as u32) } else { ring.var(self.nu_inv()).pow((-k) as u32) })
        };
        subst_normalized(f, Exponent::int(1), &v, lead_pow, ring.one())
    }

    /// The numeric reparameterization at a solution point.
    pub fn reparam_series(&self, vals: &[Scalar]) -> PuiseuxSeries {
        let field = self.ring.field.clone();
        let lam = vals[self.nu()].pow(self.e as u64);
        let terms = std::iter::once((Exponent::int(1), lam.clone()))
            .chain(self.gammas.iter().enumerate().map(|(i, g)| (*g + Exponent::int(1), &lam * &vals[i])));
        PuiseuxSeries::new(field, terms, Exponent::int(HARD_CAP))
    }
}

pub(crate) fn constant_series(f: &PuiseuxSeries, nvars: usize) -> PolySeries {
    f.map(|c| Poly::constant(nvars, c.clone()))
}

pub(crate) fn eval_series(s: &PolySeries, vals: &[Scalar], field: &FieldSpec) -> PuiseuxSeries {
    PuiseuxSeries::new(field.clone(), s.terms().iter().map(|(e, p)| (*e, p.eval(vals))), s.prec())
}

/// Common ramification index of the exponents in both points.
pub(crate) fn joint_ramification(a: &GroupElement, b: &GroupElement) -> i64 {
    a.entries().iter().chain(b.entries()).fold(1, |acc, e| num_integer::lcm(acc, e.ramification()))
}

fn min_val(g: &GroupElement) -> Exponent {
    g.entries().iter().filter_map(|e| e.val()).min().unwrap_or(Exponent::zero()).min(Exponent::zero())
}

/// Largest correction exponent that can reach the constant term of the
/// quotient.
pub(crate) fn gamma_max(a: &GroupElement, b: &GroupElement) -> Result<Exponent> {
    Ok(if a.scheme().is_matrix() { -(min_val(a) + min_val(&b.inv()?)) } else { -min_val(a) })
}

/// `a(s) * b(t)^{-1}` in the group law (difference for additive groups),
/// entrywise.
pub(crate) fn symbolic_quotient(ans: &Ansatz, a: &GroupElement, b: &GroupElement) -> Result<Vec<PolySeries>> {
    let nv = ans.ring.nvars();
    let sa: Vec<PolySeries> = a.entries().iter().map(|e| ans.subst(e)).collect::<Result<_>>()?;
    match a.scheme().base() {
        GroupScheme::Additive(_) => sa.iter().zip(b.entries()).map(|(x, y)| x.sub(&constant_series(y, nv))).collect(),
        _ => {
            let n = a.n();
            let binv: Vec<PolySeries> = b.inv()?.entries().iter().map(|e| constant_series(e, nv)).collect();
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = PolySeries::zero(ans.ring.field.clone(), Exponent::int(HARD_CAP));
                    for k in 0..n {
                        acc = acc.add(&sa[i * n + k].mul(&binv[k * n + j])?)?;
                    }
                    out.push(acc);
                }
            }
            Ok(out)
        }
    }
}

/// Coefficients at negative exponents, grouped by exponent, and the
/// constant-term matrix.
pub(crate) struct QuotientData {
    pub negative: Vec<(Exponent, usize, Poly)>,
    pub residue: Vec<Poly>,
}

pub(crate) fn split_quotient(q: &[PolySeries], nvars: usize) -> Result<QuotientData> {
    let mut negative = Vec::new();
    let mut residue = Vec::with_capacity(q.len());
    for (idx, s) in q.iter().enumerate() {
        if !s.prec().is_positive() {
            return Err(Error::PrecisionInsufficient(format!("quotient entry {idx} known only below {}", s.prec())));
        }
        for (e, p) in s.terms() {
            if e.is_negative() {
                negative.push((*e, idx, p.clone()));
            }
        }
        residue.push(s.coeff(Exponent::zero()).cloned().unwrap_or_else(|| Poly::zero(nvars)));
    }
    negative.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
    Ok(QuotientData { negative, residue })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_quotient_matches_hand_expansion() {
        let q = FieldSpec::Q;
        let a = GroupElement::new(
            GroupScheme::Additive(2),
            q.clone(),
            vec![PuiseuxSeries::laurent(&q, &[(-2, 1)], 64), PuiseuxSeries::laurent(&q, &[(-3, 1)], 64)],
        )
        .unwrap();
        let gmax = gamma_max(&a, &a).unwrap();
        assert_eq!(gmax, Exponent::int(3));
        let ans = Ansatz::new(&q, 1, gmax, 16).unwrap();
        let quo = symbolic_quotient(&ans, &a, &a).unwrap();
        let data = split_quotient(&quo, ans.ring.nvars()).unwrap();
        let r = &ans.ring;
        // s^-3 = nu_inv^3 t^-3 (1 + c1 t + c2 t^2 + c3 t^3)^-3
        let lead = data.negative.iter().find(|(e, i, _)| *e == Exponent::int(-3) && *i == 1).unwrap();
        assert_eq!(lead.2, &r.parse("nu_inv^3").unwrap() - &r.one());
        // at c1 = c2 = 0, nu = 1 the residue is (-2 c2 + 3 c1^2, -3 c3 + ...) -> (0, -3 c3)
        let at = |p: &Poly| {
            let v = [Scalar::from_i64(&q, 0), Scalar::from_i64(&q, 0), Scalar::from_i64(&q, 5), Scalar::one(&q), Scalar::one(&q)];
            p.eval(&v)
        };
        assert!(at(&data.residue[0]).is_zero());
        assert_eq!(at(&data.residue[1]), Scalar::from_i64(&q, -15));
    }
}
