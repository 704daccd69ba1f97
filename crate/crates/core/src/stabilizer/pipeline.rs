//! Reduction, both stabilizer algorithms, and the checks run on their
//! output.

use std::fmt;
use std::thread;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::degeneration::{closure_ideal, stab_degeneration, Degeneration};
use super::reduce::{mu_reduce, Reduction};
use super::reparam::stab_reparam;
use super::solve::{find_point, Choice};
use super::subgroup::{conjugate_stab, is_solvable, SubgroupDesc};
use super::tube::{mu_correct, MuCorrection};
use super::Budgets;
use crate::curves::{is_centered_at_infinity, Branch};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupScheme, KPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Reparam,
    Degeneration,
    Both,
}

impl Algorithm {
    pub fn parse(s: &str) -> Result<Algorithm> {
        match s {
            "reparam" => Ok(Algorithm::Reparam),
            "degeneration" => Ok(Algorithm::Degeneration),
            "both" => Ok(Algorithm::Both),
            _ => Err(Error::InvalidInput(format!("unknown algorithm {s:?}; expected reparam, degeneration or both"))),
        }
    }

    fn runs_reparam(self) -> bool {
        self != Algorithm::Degeneration
    }

    fn runs_degeneration(self) -> bool {
        self != Algorithm::Reparam
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Reparam => "reparam",
            Algorithm::Degeneration => "degeneration",
            Algorithm::Both => "both",
        })
    }
}

/// Comparison of the two algorithms' ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    pub equal: bool,
    /// A generator of one ideal outside the other.
    pub separating: Option<String>,
}

#[derive(Debug, Clone)]
pub struct StabilizerRun {
    pub algorithm: Algorithm,
    pub reduction: Reduction,
    pub reparam: Option<Result<SubgroupDesc>>,
    pub degeneration: Option<Result<Degeneration>>,
    pub agreement: Option<Agreement>,
}

impl StabilizerRun {
    /// The reparameterization result when available, else the
    /// degeneration result; the first error otherwise.
    pub fn stabilizer(&self) -> Result<&SubgroupDesc> {
        let deg = self.degeneration.as_ref().map(|r| r.as_ref().map(|d| &d.stabilizer));
        match (self.reparam.as_ref(), deg) {
            (Some(Ok(h)), _) => Ok(h),
            (_, Some(Ok(h))) => Ok(h),
            (Some(Err(e)), _) | (None, Some(Err(e))) => Err(e.clone()),
            (None, None) => Err(Error::InvalidInput("no algorithm was run".into())),
        }
    }

    /// Like [`Self::stabilizer`], but a disagreement between the two
    /// algorithms is an error.
    pub fn agreed_stabilizer(&self) -> Result<&SubgroupDesc> {
        if let Some(Agreement { equal: false, separating }) = &self.agreement {
            return Err(Error::Inconclusive(format!(
                "the two algorithms disagree{}",
                separating.as_ref().map(|s| format!(": {s}")).unwrap_or_default()
            )));
        }
        self.stabilizer()
    }
}

fn compare(a: &SubgroupDesc, b: &SubgroupDesc) -> Result<Agreement> {
    let ga = a.ideal.groebner(crate::algebra::MonomialOrder::GrevLex)?;
    let gb = b.ideal.groebner(crate::algebra::MonomialOrder::GrevLex)?;
    let ring = a.ring();
    if let Some(g) = b.ideal.gens().iter().find(|g| !ga.contains(g)) {
        return Ok(Agreement { equal: false, separating: Some(format!("{} lies in the degeneration ideal only", ring.fmt_poly(g))) });
    }
    if let Some(g) = a.ideal.gens().iter().find(|g| !gb.contains(g)) {
        return Ok(Agreement { equal: false, separating: Some(format!("{} lies in the reparameterization ideal only", ring.fmt_poly(g))) });
    }
    Ok(Agreement { equal: true, separating: None })
}

fn join_worker<T>(h: thread::ScopedJoinHandle<'_, Result<T>>) -> Result<T> {
    h.join().unwrap_or_else(|_| Err(Error::Inconclusive("worker panicked".into())))
}

fn run_degeneration(b: &Branch, budgets: &Budgets) -> Result<Degeneration> {
    let v = closure_ideal(b, budgets)?;
    stab_degeneration(b, &v, budgets)
}

/// Reduces `a` within its tube, then runs the requested algorithms on
/// the reduced branch (concurrently for [`Algorithm::Both`]).
pub fn compute_stabilizer(a: &Branch, algorithm: Algorithm, budgets: &Budgets) -> Result<StabilizerRun> {
    let reduction = mu_reduce(a, budgets)?;
    let b = &reduction.branch;
    let (reparam, degeneration) = thread::scope(|s| {
        let rep = algorithm.runs_reparam().then(|| s.spawn(|| stab_reparam(b, budgets)));
        let deg = algorithm.runs_degeneration().then(|| s.spawn(|| run_degeneration(b, budgets)));
        (rep.map(join_worker), deg.map(join_worker))
    });
    let agreement = match (&reparam, &degeneration) {
        (Some(Ok(h)), Some(Ok(d))) => Some(compare(h, &d.stabilizer)?),
        _ => None,
    };
    Ok(StabilizerRun { algorithm, reduction, reparam, degeneration, agreement })
}

/// `g . a` (or `g + a`) for a constant point `g`; the closure hint is
/// dropped.
pub fn translate_branch(g: &KPoint, a: &Branch) -> Result<Branch> {
    let param = match a.scheme().base() {
        GroupScheme::Additive(_) => {
            let entries = g.to_element().entries().iter().zip(a.entries()).map(|(x, y)| x.add(y)).collect::<Result<_>>()?;
            GroupElement::unchecked(a.scheme().clone(), a.field().clone(), entries)?
        }
        _ => g.to_element().mul(&a.param)?,
    };
    Ok(Branch { param, ramification: a.ramification, closure: None })
}

/// A random `k`-point of the ambient group.
pub fn random_group_point(scheme: &GroupScheme, field: &crate::algebra::FieldSpec, rng: &mut ChaCha8Rng) -> Result<KPoint> {
    let ideal = scheme.defining_ideal(field)?;
    for _ in 0..64 {
        if let Some(p) = find_point(&ideal, Choice::Random(rng, 4))? {
            return KPoint::new(scheme.clone(), field.clone(), p[..scheme.entry_count()].to_vec());
        }
    }
    Err(Error::Inconclusive("no random group point found".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Pass(String),
    /// Carries the failing witness.
    Fail(String),
    Skipped(String),
    Inconclusive(String),
}

impl Check {
    pub fn label(&self) -> &'static str {
        match self {
            Check::Pass(_) => "pass",
            Check::Fail(_) => "fail",
            Check::Skipped(_) => "skipped",
            Check::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Check::Pass(s) | Check::Fail(s) | Check::Skipped(s) | Check::Inconclusive(s) => s,
        }
    }

    pub fn is_failure(&self, strict: bool) -> bool {
        matches!(self, Check::Fail(_)) || (strict && matches!(self, Check::Inconclusive(_)))
    }

    fn from_result(r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check::Inconclusive(e.to_string()))
    }
}

/// Structural properties every computed stabilizer should have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremChecks {
    pub dim_equality: Check,
    pub infinite: Check,
    pub solvable: Check,
    pub conjugation: Check,
    pub bounded_trivial: Check,
    pub soundness: Check,
}

impl TheoremChecks {
    pub fn entries(&self) -> [(&'static str, &Check); 6] {
        [
            ("dim_equality", &self.dim_equality),
            ("infinite", &self.infinite),
            ("solvable", &self.solvable),
            ("conjugation", &self.conjugation),
            ("bounded_trivial", &self.bounded_trivial),
            ("soundness", &self.soundness),
        ]
    }
}

/// Runs the checks for `run`, computed from the branch `a`.
pub fn theorem_checks(a: &Branch, run: &StabilizerRun, budgets: &Budgets) -> TheoremChecks {
    let h = match run.agreed_stabilizer() {
        Ok(h) => h.clone(),
        Err(e) => {
            let c = Check::Inconclusive(format!("no stabilizer: {e}"));
            return TheoremChecks {
                dim_equality: c.clone(),
                infinite: c.clone(),
                solvable: c.clone(),
                conjugation: c.clone(),
                bounded_trivial: c.clone(),
                soundness: c,
            };
        }
    };
    let centered = is_centered_at_infinity(a);
    let b = &run.reduction.branch;
    let dim_p = run.reduction.dim_after;

    let dim_equality = if h.dim == dim_p {
        Check::Pass(format!("dim Stab = {} = dim p", h.dim))
    } else {
        Check::Fail(format!("dim Stab = {} but the reduced type has dimension {dim_p}", h.dim))
    };
    let infinite = match &centered {
        Ok(true) if h.dim >= 1 => Check::Pass(format!("dim Stab = {} >= 1", h.dim)),
        Ok(true) => Check::Fail("the branch is centered at infinity but its stabilizer is finite".into()),
        Ok(false) => Check::Skipped("bounded branch".into()),
        Err(e) => Check::Inconclusive(e.to_string()),
    };
    let bounded_trivial = match &centered {
        Ok(false) => match h.classify() {
            Ok(crate::stabilizer::Classification::Trivial) => Check::Pass("bounded branch, trivial stabilizer".into()),
            Ok(_) => Check::Fail(format!("bounded branch with stabilizer {}", h.ideal)),
            Err(e) => Check::Inconclusive(e.to_string()),
        },
        Ok(true) => Check::Skipped("centered at infinity".into()),
        Err(e) => Check::Inconclusive(e.to_string()),
    };
    let solvable = match is_solvable(&h, budgets.sample_budget, budgets.seed) {
        Ok(s) if s.solvable => Check::Pass(s.reason),
        Ok(s) => Check::Fail(s.reason),
        Err(e) => Check::Inconclusive(e.to_string()),
    };
    let conjugation = Check::from_result(conjugation_check(b, &h, run.algorithm, budgets));
    let soundness = Check::from_result(soundness_check(b, &h, budgets));
    TheoremChecks { dim_equality, infinite, solvable, conjugation, bounded_trivial, soundness }
}

/// `Stab(g p) = g Stab(p) g^{-1}` for one random `g`.
fn conjugation_check(b: &Branch, h: &SubgroupDesc, algorithm: Algorithm, budgets: &Budgets) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(budgets.seed ^ 0xc0);
    let g = random_group_point(b.scheme().base(), b.field(), &mut rng)?;
    let moved = translate_branch(&g, b)?;
    let alg = if algorithm == Algorithm::Both { Algorithm::Reparam } else { algorithm };
    let direct = match alg {
        Algorithm::Degeneration => run_degeneration(&moved, budgets)?.stabilizer,
        _ => stab_reparam(&moved, budgets)?,
    };
    let conj = conjugate_stab(h, &g)?;
    Ok(if direct.same_ideal(&conj)? {
        Check::Pass(format!("g = {g}"))
    } else {
        Check::Fail(format!("g = {g}: Stab(g p) = {} but g Stab g^-1 = {}", direct.ideal, conj.ideal))
    })
}

/// Sampled elements of the stabilizer move the branch within its tube.
fn soundness_check(b: &Branch, h: &SubgroupDesc, budgets: &Budgets) -> Result<Check> {
    let count = if h.dim == 0 { 1 } else { 3 };
    let points = h.sample_points(count, budgets.seed ^ 0x50)?;
    for p in &points {
        let moved = translate_branch(p, b)?;
        match mu_correct(&moved, b, budgets.order_budget)? {
            MuCorrection::Certified(_) => {}
            MuCorrection::Failure(f) => return Ok(Check::Fail(format!("h = {p}: {f}"))),
        }
    }
    Ok(Check::Pass(format!("{} sampled elements certified", points.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::series::PuiseuxSeries;

    #[test]
    fn x1_pipeline() {
        let q = FieldSpec::Q;
        let es = [&[(-1, 1)][..], &[(0, 1)], &[], &[(1, 1)]].iter().map(|t| PuiseuxSeries::laurent(&q, t, 64)).collect();
        let a = Branch::new(GroupElement::new(GroupScheme::SL(2), q, es).unwrap());
        let b = Budgets::default();
        let run = compute_stabilizer(&a, Algorithm::Both, &b).unwrap();
        assert!(run.agreement.as_ref().unwrap().equal);
        let checks = theorem_checks(&a, &run, &b);
        for (name, c) in checks.entries() {
            assert!(matches!(c, Check::Pass(_) | Check::Skipped(_)), "{name}: {c:?}");
        }
    }
}
