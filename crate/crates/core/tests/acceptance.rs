//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use mustab::algebra::{eliminate, FieldSpec, Ideal, Ring, Scalar};
use mustab::curves::{implicitize, is_centered_at_infinity, places_at_infinity, type_dimension, Branch, PlaneCurveInput};
use mustab::groups::{is_upper_triangular, iwasawa, GroupElement, GroupScheme};
use mustab::series::{Exponent, PuiseuxSeries};
use mustab::stabilizer::{
    closure_ideal, compute_stabilizer, conjugate_stab, find_point, hensel_lift, identity_component, is_solvable, mu_correct, mu_reduce,
    random_group_point, stab_degeneration, translate_branch, Algorithm, Budgets, Choice, MuCorrection, StabilizerRun, SubgroupDesc,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took < limit, "{what} took {took:.2?}, limit {limit:?}");
    Ok(())
}

fn budgets() -> Budgets {
    Budgets::default()
}

fn expect_ideal(h: &SubgroupDesc, gens: &[&str], who: &str) -> Result<(), String> {
    let want = ok(SubgroupDesc::parse(h.scheme.base(), &h.field, gens), "parse")?;
    ensure!(ok(h.same_ideal(&want), "membership")?, "{who} returned {h}, expected <{}>", gens.join(", "));
    Ok(())
}

/// Checks each algorithm's output separately against `gens`.
fn both_algorithms(a: &Branch, gens: &[&str], dim: usize) -> Result<StabilizerRun, String> {
    let run = ok(compute_stabilizer(a, Algorithm::Both, &budgets()), "stab")?;
    let rep = ok(run.reparam.clone().unwrap(), "reparameterization")?;
    let deg = ok(run.degeneration.clone().unwrap(), "degeneration")?.stabilizer;
    expect_ideal(&rep, gens, "reparameterization")?;
    expect_ideal(&deg, gens, "degeneration")?;
    ensure!(rep.dim == dim && deg.dim == dim, "dimensions {} and {}, expected {dim}", rep.dim, deg.dim);
    Ok(run)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    both_algorithms(&x1(&FieldSpec::Q), &["x11-1", "x21", "x22-1"], 1)?;
    within(start, Duration::from_secs(10), "X1")?;
    Ok(format!("unipotent by both algorithms, dim 1, {:.2?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    both_algorithms(&x2(&FieldSpec::Q), &["x12", "x21", "x11*x22-1"], 1)?;
    within(start, Duration::from_secs(10), "X2")?;
    Ok(format!("diagonal torus by both algorithms, dim 1, {:.2?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let a = irrational_tail();
    let td = ok(type_dimension(&a, 6), "type_dimension")?;
    ensure!(td.dim == 2, "type dimension {} at D = 6", td.dim);
    let r = ok(mu_reduce(&a, &budgets()), "mu_reduce")?;
    let q = FieldSpec::Q;
    let inv_t = PuiseuxSeries::monomial(Exponent::int(-1), Scalar::one(&q), Exponent::int(64));
    ensure!(r.branch.entries().iter().all(|e| e.terms() == inv_t.terms()), "reduced to {}", r.branch.param);
    let eps = r.certificate.correction.entries();
    let root2 = Exponent::parse("sqrt(2)").unwrap();
    ensure!(eps[0].is_zero() && eps[1].terms() == [(root2, Scalar::one(&q))], "correction {}", r.certificate.correction);
    ensure!(ok(r.certificate.correction.in_mu(), "in_mu")?, "correction is not infinitesimal");
    ensure!(r.certificate.is_trivial_reparam(), "reparameterization {}", r.certificate.reparam);
    let run = ok(compute_stabilizer(&a, Algorithm::Both, &budgets()), "stab")?;
    let h = ok(run.agreed_stabilizer(), "stab")?;
    expect_ideal(h, &["x-y"], "stab")?;
    let reduced = ok(type_dimension(&r.branch, 6), "type_dimension")?;
    ensure!(h.dim == 1 && reduced.dim == 1, "dim Stab {}, reduced type {}", h.dim, reduced.dim);
    within(start, Duration::from_secs(10), "reduction")?;
    Ok(format!("dim 2 -> 1, eps = (0, t^sqrt2), Stab = <x - y>, {:.2?}", start.elapsed()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let input = ok(PlaneCurveInput::parse(&FieldSpec::Q, "x*y - 1", GroupScheme::SL(2), &["x", "1", "0", "y"]), "input")?;
    let places = ok(places_at_infinity(&input, 16), "places")?;
    ensure!(places.branches.len() == 2, "{} branches", places.branches.len());
    let (a, b) = (&places.branches[0], &places.branches[1]);
    for x in [a, b] {
        ensure!(ok(is_centered_at_infinity(x), "centered")?, "a branch is bounded");
    }
    let equivalent = matches!(ok(mu_correct(a, b, 16), "mu_correct")?, MuCorrection::Certified(_));
    ensure!(!equivalent, "the two branches are tube-equivalent");
    within(start, Duration::from_secs(5), "places")?;
    Ok(format!("2 inequivalent branches, {:.2?}", start.elapsed()))
}

struct Corpus {
    runs: Vec<(String, Branch, StabilizerRun)>,
}

impl Corpus {
    fn build() -> Result<Corpus, String> {
        let mut all = centered_corpus();
        all.push(("reduced".into(), irrational_tail()));
        all.push(("bounded".into(), bounded()));
        for (i, b) in hyperbola_sl2().into_iter().enumerate() {
            all.push((format!("hyperbola #{i}"), b));
        }
        all.push(("X1 over F5".into(), x1(&FieldSpec::fp(5).unwrap())));
        let mut runs = Vec::new();
        for (name, b) in all {
            let run = ok(compute_stabilizer(&b, Algorithm::Both, &budgets()), &name)?;
            runs.push((name, b, run));
        }
        Ok(Corpus { runs })
    }

    fn stab(&self, name: &str) -> Result<&SubgroupDesc, String> {
        let (_, _, run) = self.runs.iter().find(|r| r.0 == name).ok_or(format!("no corpus entry {name}"))?;
        ok(run.agreed_stabilizer(), name)
    }
}

fn criterion_5(c: &Corpus) -> Outcome {
    let names: Vec<String> = centered_corpus().into_iter().map(|x| x.0).collect();
    for n in &names {
        let h = c.stab(n)?;
        ensure!(h.dim == 1, "{n}: Krull dimension {}", h.dim);
        ensure!(ok(h.ideal.krull_dim(), n)? == 1, "{n}: ideal dimension differs");
    }
    Ok(format!("dim 1 on {}", names.join(", ")))
}

fn criterion_6(c: &Corpus) -> Outcome {
    let b = budgets();
    for (name, _, _) in &c.runs {
        let h = c.stab(name)?;
        let s = ok(is_solvable(h, b.sample_budget, b.seed), name)?;
        ensure!(s.solvable, "{name}: {}", s.reason);
    }
    let sl2 = ok(SubgroupDesc::parse(&GroupScheme::SL(2), &FieldSpec::Q, &["x11*x22-x12*x21-1"]), "SL2")?;
    let s = ok(is_solvable(&sl2, b.sample_budget, b.seed), "SL2")?;
    ensure!(!s.solvable, "full SL2 reported solvable: {}", s.reason);
    Ok(format!("{} corpus stabilizers solvable; SL2 not ({})", c.runs.len(), s.reason))
}

fn criterion_7() -> Outcome {
    let f5 = ok(FieldSpec::fp(5), "F5")?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b = budgets();
    for (name, a) in [("X1", x1(&f5)), ("X2", x2(&f5))] {
        let base = ok(compute_stabilizer(&a, Algorithm::Both, &b), name)?;
        let h = ok(base.agreed_stabilizer(), name)?.clone();
        for _ in 0..10 {
            let g = ok(random_group_point(&GroupScheme::SL(2), &f5, &mut rng), "random point")?;
            let moved = ok(translate_branch(&g, &a), "translate")?;
            let run = ok(compute_stabilizer(&moved, Algorithm::Both, &b), "stab(g a)")?;
            let direct = ok(run.agreed_stabilizer(), "stab(g a)")?;
            let conj = ok(conjugate_stab(&h, &g), "conjugate")?;
            ensure!(ok(direct.same_ideal(&conj), "membership")?, "{name}, g = {g}: {direct} vs {conj}");
        }
    }
    Ok("10 random g in SL2(F5) on X1 and X2".into())
}

fn criterion_8(c: &Corpus) -> Outcome {
    let h = c.stab("bounded")?;
    expect_ideal(h, &["x11-1", "x12", "x21", "x22-1"], "bounded")?;
    ensure!(h.dim == 0, "dimension {}", h.dim);
    Ok("diag(1+t, (1+t)^-1) has trivial stabilizer".into())
}

fn random_laurent(rng: &mut ChaCha8Rng, field: &FieldSpec) -> PuiseuxSeries {
    let terms: Vec<(i64, i64)> = (0..rng.gen_range(0..3)).map(|_| (rng.gen_range(-3..4), rng.gen_range(-4..5))).collect();
    PuiseuxSeries::laurent(field, &terms, PREC)
}

/// Products of elementary matrices and a monomial diagonal.
fn random_matrix(rng: &mut ChaCha8Rng, scheme: &GroupScheme, field: &FieldSpec) -> GroupElement {
    let n = scheme.n();
    let mut m = GroupElement::identity(scheme, field);
    let mut exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..3)).collect();
    let mut coefs: Vec<Scalar> = (0..n).map(|_| Scalar::from_i64(field, rng.gen_range(1..5))).collect();
    if matches!(scheme, GroupScheme::SL(_)) {
        exps[n - 1] = -exps[..n - 1].iter().sum::<i64>();
        let prod = coefs[..n - 1].iter().fold(Scalar::one(field), |acc, c| acc.try_mul(c).unwrap());
        coefs[n - 1] = prod.inv().unwrap();
    }
    let zero = PuiseuxSeries::zero(field.clone(), Exponent::int(PREC));
    let diag: Vec<PuiseuxSeries> = (0..n * n)
        .map(|k| if k % (n + 1) == 0 { PuiseuxSeries::monomial(Exponent::int(exps[k / (n + 1)]), coefs[k / (n + 1)].clone(), Exponent::int(PREC)) } else { zero.clone() })
        .collect();
    for _ in 0..rng.gen_range(2..5) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let mut e = GroupElement::identity(scheme, field).entries().to_vec();
        e[i * n + j] = random_laurent(rng, field);
        m = m.mul(&GroupElement::new(scheme.clone(), field.clone(), e).unwrap()).unwrap();
    }
    m.mul(&GroupElement::new(scheme.clone(), field.clone(), diag).unwrap()).unwrap()
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fields = [FieldSpec::Q, ok(FieldSpec::fp(5), "F5")?];
    let schemes = [GroupScheme::SL(2), GroupScheme::GL(3)];
    let mut count = 0;
    for case in 0..100 {
        let field = &fields[case % 2];
        let scheme = &schemes[(case / 2) % 2];
        let a = random_matrix(&mut rng, scheme, field);
        let (u, b) = ok(iwasawa(&a), "iwasawa")?;
        let prod = ok(u.mul(&b), "u b")?;
        for (x, y) in prod.entries().iter().zip(a.entries()) {
            let d = ok(x.sub(y), "sub")?;
            ensure!(d.is_zero(), "case {case}: u b differs from the input in {d}");
            ensure!(d.prec() >= Exponent::int(8), "case {case}: product known only below {}", d.prec());
        }
        ensure!(ok(u.is_integral(), "integral")?, "case {case}: u = {u} is not integral");
        ensure!(is_upper_triangular(&b), "case {case}: b = {b} is not upper triangular");
        count += 1;
    }
    within(start, Duration::from_secs(30), "Iwasawa")?;
    Ok(format!("{count} cases over Q and F5 in SL2 and GL3, {:.2?}", start.elapsed()))
}

fn criterion_10() -> Outcome {
    let q = FieldSpec::Q;
    let b = budgets();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (name, a) in [("X1", x1(&q)), ("X2", x2(&q))] {
        let v = ok(closure_ideal(&a, &b), name)?;
        let d = ok(stab_degeneration(&a, &v, &b), name)?;
        let mut lifted = 0;
        while lifted < 20 {
            let Some(p) = ok(find_point(&d.fiber, Choice::Random(&mut rng, 6)), "fiber point")? else { continue };
            let lift = ok(hensel_lift(&d.model, &p, 8), "lift")?;
            for (l, c) in lift.iter().zip(&p) {
                ensure!(ok(l.res(), "res")? == *c, "{name}: residue of the lift differs from {c}");
            }
            // independently: P a lies on the closure of the branch
            let pt = ok(GroupElement::unchecked(a.scheme().clone(), q.clone(), lift.clone()), "point")?;
            let moved = ok(pt.mul(&a.param), "P a")?;
            for g in v.gens() {
                let r = ok(moved.eval(g), "eval")?;
                ensure!(r.is_zero() && r.prec() >= Exponent::int(4), "{name}: generator leaves {r}");
            }
            lifted += 1;
        }
    }
    Ok("20 fiber points each of X1 and X2 lift to precision 8".into())
}

fn criterion_11(c: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = [FieldSpec::Q, ok(FieldSpec::fp(5), "F5")?];
    let agree = |x: &PuiseuxSeries, y: &PuiseuxSeries| x.sub(y).map(|d| d.is_zero()).unwrap_or(false);
    let rand_series = |rng: &mut ChaCha8Rng, f: &FieldSpec| {
        let den = rng.gen_range(1..4);
        let terms: Vec<(Exponent, Scalar)> =
            (0..rng.gen_range(0..5)).map(|_| (Exponent::frac(rng.gen_range(-4..8), den), Scalar::from_i64(f, rng.gen_range(-3..4)))).collect();
        PuiseuxSeries::new(f.clone(), terms, Exponent::int(rng.gen_range(3..10)))
    };
    for case in 0..1000 {
        let f = &fields[case % 2];
        let (a, b, s) = (rand_series(&mut rng, f), rand_series(&mut rng, f), rand_series(&mut rng, f));
        let lhs = a.mul(&b.add(&s).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&s).unwrap()).unwrap();
        ensure!(agree(&lhs, &rhs), "distributivity fails for {a}, {b}, {s}");
        ensure!(agree(&a.mul(&b).unwrap().mul(&s).unwrap(), &a.mul(&b.mul(&s).unwrap()).unwrap()), "associativity fails for {a}, {b}, {s}");
        ensure!(agree(&a.mul(&b).unwrap(), &b.mul(&a).unwrap()), "commutativity fails for {a}, {b}");
        if !a.is_zero() {
            ensure!(agree(&a.mul(&a.inv().unwrap()).unwrap(), &PuiseuxSeries::one(f)), "inverse fails for {a}");
        }
        let (u, w) = (unit_series(&mut rng, f), unit_series(&mut rng, f));
        let r = u.mul(&w).unwrap().res().unwrap();
        ensure!(r == u.res().unwrap().try_mul(&w.res().unwrap()).unwrap(), "res is not multiplicative on {u}, {w}");
    }
    for case in 0..100 {
        let f = &fields[case % 2];
        let g = integral_sl2(&mut rng, f, false);
        let eps = integral_sl2(&mut rng, f, true);
        ensure!(ok(eps.in_mu(), "mu")?, "sampled correction is not infinitesimal");
        let conj = g.mul(&eps).unwrap().mul(&g.inv().unwrap()).unwrap();
        ensure!(ok(conj.in_mu(), "mu")?, "g eps g^-1 = {conj} left mu");
    }
    let cusp_ideal = ok(implicitize(&cusp(), 3), "implicitize")?;
    let ring = Ring::new(FieldSpec::Q, ["u", "x", "y"]);
    let elim = ok(eliminate(&Ideal::parse(&ring, &["x - u^2", "y - u^3"]).unwrap(), &[0]), "eliminate")?;
    let elim = Ideal::new(GroupScheme::Additive(2).coord_ring(&FieldSpec::Q), elim.gens().iter().cloned());
    ensure!(ok(cusp_ideal.equals(&elim), "equals")?, "implicitize {cusp_ideal} vs eliminate {elim}");
    for (name, _, run) in &c.runs {
        let agreement = run.agreement.as_ref().ok_or(format!("{name}: an algorithm failed"))?;
        ensure!(agreement.equal, "{name}: {}", agreement.separating.clone().unwrap_or_default());
    }
    Ok(format!("1000 series cases, 100 mu-normality cases, cusp oracle, {} corpus agreements", c.runs.len()))
}

fn unit_series(rng: &mut ChaCha8Rng, f: &FieldSpec) -> PuiseuxSeries {
    let mut terms: Vec<(i64, i64)> = (0..rng.gen_range(0..3)).map(|_| (rng.gen_range(1..6), rng.gen_range(-3..4))).collect();
    terms.push((0, rng.gen_range(1..5)));
    PuiseuxSeries::laurent(f, &terms, 12)
}

fn integral_sl2(rng: &mut ChaCha8Rng, f: &FieldSpec, infinitesimal: bool) -> GroupElement {
    let low = i64::from(infinitesimal);
    let entry = |rng: &mut ChaCha8Rng| {
        let terms: Vec<(i64, i64)> = (0..rng.gen_range(0..3)).map(|_| (rng.gen_range(low..5), rng.gen_range(-3..4))).collect();
        PuiseuxSeries::laurent(f, &terms, 12)
    };
    let one = PuiseuxSeries::one(f);
    let zero = PuiseuxSeries::zero(f.clone(), Exponent::int(64));
    let sl2 = |e: Vec<PuiseuxSeries>| GroupElement::new(GroupScheme::SL(2), f.clone(), e).unwrap();
    let up = sl2(vec![one.clone(), entry(rng), zero.clone(), one.clone()]);
    let lo = sl2(vec![one.clone(), zero.clone(), entry(rng), one.clone()]);
    let mut d = unit_series(rng, f);
    if infinitesimal {
        d = d.scale(&d.res().unwrap().inv().unwrap());
    }
    let t = sl2(vec![d.clone(), zero.clone(), zero, d.inv().unwrap()]);
    up.mul(&lo).unwrap().mul(&t).unwrap()
}

fn criterion_12(c: &Corpus) -> Outcome {
    let mut checked = 0;
    for (name, _, run) in &c.runs {
        let Some(Ok(d)) = &run.degeneration else { return Err(format!("{name}: no degeneration")) };
        let dec = &d.decomposition;
        ensure!(dec.equidimensional, "{name}: component dimensions {:?}", dec.component_dims);
        checked += 1;
    }
    let q = FieldSpec::Q;
    let ring = GroupScheme::SL(2).coord_ring(&q);
    let parse = |g: &[&str]| Ideal::parse(&ring, g).unwrap();
    let torus = parse(&["x12", "x21", "x11*x22-1"]);
    let anti = parse(&["x11", "x22", "x12*x21+1"]);
    let unip = parse(&["x11-1", "x21", "x22-1"]);
    let neg_unip = parse(&["x11+1", "x21", "x22+1"]);
    let synthetic = [
        parse(&["x21", "(x11-1)*(x11+1)", "x11*x22-1"]),
        ok(torus.intersect(&anti), "intersect")?,
        ok(unip.intersect(&neg_unip), "intersect")?,
    ];
    for (i, fiber) in synthetic.iter().enumerate() {
        let dec = ok(identity_component(&GroupScheme::SL(2), fiber), "identity_component")?;
        ensure!(dec.complete, "synthetic {i}: {:?}", dec.note);
        ensure!(dec.component_count() == 2, "synthetic {i}: {} components", dec.component_count());
        ensure!(dec.equidimensional, "synthetic {i}: dimensions {:?}", dec.component_dims);
        checked += 1;
    }
    Ok(format!("{checked} decompositions equidimensional"))
}

fn main() {
    let corpus = Corpus::build();
    let with_corpus = |f: fn(&Corpus) -> Outcome| -> Outcome {
        match &corpus {
            Ok(c) => f(c),
            Err(e) => Err(format!("corpus: {e}")),
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("X1 stabilizer", criterion_1()),
        ("X2 stabilizer", criterion_2()),
        ("reduction of an irrational tail", criterion_3()),
        ("places of xy - 1", criterion_4()),
        ("dimension one", with_corpus(criterion_5)),
        ("solvability", with_corpus(criterion_6)),
        ("conjugation", criterion_7()),
        ("bounded branch", with_corpus(criterion_8)),
        ("Iwasawa", criterion_9()),
        ("lifting fiber points", criterion_10()),
        ("property suites", with_corpus(criterion_11)),
        ("equidimensionality", with_corpus(criterion_12)),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
