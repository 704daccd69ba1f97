//! Executing one job.

use std::thread;
use std::time::Instant;

use mustab::algebra::Ideal;
use mustab::curves::{places_at_infinity, Branch};
use mustab::groups::{is_upper_triangular, iwasawa};
use mustab::stabilizer::{compute_stabilizer, is_solvable, mark_verified, mu_reduce, theorem_checks, Algorithm, SubgroupDesc};
use mustab::{Error, Result};

use crate::job::{BudgetsJson, Command, JobSpec, Resolved};
use crate::report::*;

/// Command-line settings that override the job file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub budgets: BudgetsJson,
    pub algorithm: Option<Algorithm>,
    pub strict: bool,
}

pub fn cmd_run(job: &JobSpec, over: &Overrides) -> Report {
    let start = Instant::now();
    let mut report = Report {
        job: job.clone(),
        budgets: job.budgets.overlay(over.budgets),
        algorithm: over.algorithm.map(|a| a.to_string()).or_else(|| job.algorithm.clone()).unwrap_or_else(|| "both".into()),
        strict: over.strict,
        exit_code: EXIT_OK,
        error: None,
        results: Results::default(),
        timing_ms: 0,
    };
    let outcome = job.resolve(&over.budgets, over.algorithm).and_then(|r| {
        report.budgets = BudgetsJson::from_budgets(&r.budgets);
        report.algorithm = r.algorithm.to_string();
        execute(job, &r, over.strict, &mut report.results)
    });
    match outcome {
        Ok(code) => report.exit_code = code,
        Err(e) => {
            report.exit_code = exit_code(e.class());
            report.error = Some(ErrorJson::from_error(&e));
        }
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    report
}

/// Fills `out` and returns the exit code for a run without a hard error.
fn execute(job: &JobSpec, r: &Resolved, strict: bool, out: &mut Results) -> Result<i32> {
    match job.command {
        Command::Places => {
            let places = places_at_infinity(&job.curve_input(r)?, r.budgets.precision)?;
            out.field = Some(places.field.to_string());
            out.trusted_irreducible = Some(places.trusted_irreducible);
            out.branches = Some(places.branches.iter().map(BranchJson::from_branch).collect());
            Ok(EXIT_OK)
        }
        Command::Stab => {
            let branches = match job.input {
                Some(crate::job::InputJson::PlaneCurve { .. }) => {
                    let places = places_at_infinity(&job.curve_input(r)?, r.budgets.precision)?;
                    out.field = Some(places.field.to_string());
                    out.trusted_irreducible = Some(places.trusted_irreducible);
                    out.branches = Some(places.branches.iter().map(BranchJson::from_branch).collect());
                    places.branches
                }
                _ => vec![job.branch_input(r)?],
            };
            // branches are independent
            let results: Vec<Result<(StabJson, i32)>> =
                thread::scope(|s| branches.iter().map(|b| s.spawn(move || stab_one(b, r, strict))).collect::<Vec<_>>().into_iter().map(join).collect());
            let mut code = EXIT_OK;
            for res in results {
                let (entry, c) = res?;
                code = code.max(c);
                out.stabilizers.push(entry);
            }
            Ok(code)
        }
        Command::Reduce => {
            let red = mu_reduce(&job.branch_input(r)?, &r.budgets)?;
            out.reduction = Some(ReductionJson::from_reduction(&red));
            Ok(EXIT_OK)
        }
        Command::Iwasawa => {
            let a = job.branch_input(r)?;
            let (u, b) = iwasawa(&a.param)?;
            let product_matches = u.mul(&b)?.entries().iter().zip(a.entries()).all(|(x, y)| x.sub(y).map(|d| d.is_zero()).unwrap_or(false));
            let json = IwasawaJson {
                u: element_json(&u),
                b: element_json(&b),
                product_matches,
                u_integral: u.is_integral()?,
                b_upper_triangular: is_upper_triangular(&b),
            };
            let good = json.product_matches && json.u_integral && json.b_upper_triangular;
            out.iwasawa = Some(json);
            Ok(if good { EXIT_OK } else { EXIT_VERIFICATION })
        }
        Command::Verify => {
            let gens = job.subgroup.as_ref().ok_or_else(|| Error::InvalidInput("verify needs a subgroup ideal".into()))?;
            let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
            let ideal = Ideal::parse(&r.scheme.base().coord_ring(&r.field), &gens)?;
            let (h, rep) = mark_verified(SubgroupDesc::from_ideal(&r.scheme, &ideal)?)?;
            let solvable = rep.is_subgroup().then(|| match is_solvable(&h, r.budgets.sample_budget, r.budgets.seed) {
                Ok(s) if s.solvable => CheckJson { status: "pass".into(), detail: s.reason },
                Ok(s) => CheckJson { status: "fail".into(), detail: s.reason },
                Err(e) => CheckJson { status: "inconclusive".into(), detail: e.to_string() },
            });
            let json = VerificationJson::new(&h, &rep, solvable);
            let good = json.is_subgroup();
            out.verification = Some(json);
            Ok(if good { EXIT_OK } else { EXIT_VERIFICATION })
        }
    }
}

fn join<T>(h: thread::ScopedJoinHandle<'_, Result<T>>) -> Result<T> {
    h.join().unwrap_or_else(|_| Err(Error::Inconclusive("worker panicked".into())))
}

/// A failed algorithm is recorded in the entry rather than aborting the
/// job, so the other algorithm's output is still reported.
fn stab_one(b: &Branch, r: &Resolved, strict: bool) -> Result<(StabJson, i32)> {
    let run = compute_stabilizer(b, r.algorithm, &r.budgets)?;
    let stabilizer = run.agreed_stabilizer();
    let checks = theorem_checks(b, &run, &r.budgets);
    let entry = StabJson {
        branch: BranchJson::from_branch(b),
        reduction: Some(ReductionJson::from_reduction(&run.reduction)),
        stabilizer: stabilizer.as_ref().ok().map(|h| SubgroupJson::from_desc(h)),
        reparam: run.reparam.as_ref().map(|x| Outcome::from_result(x, SubgroupJson::from_desc)),
        degeneration: run.degeneration.as_ref().map(|x| Outcome::from_result(x, DegenerationJson::from_degeneration)),
        agreement: run.agreement.as_ref().map(AgreementJson::from_agreement),
        checks: checks.entries().iter().map(|(n, c)| (n.to_string(), CheckJson::from_check(c))).collect(),
        error: stabilizer.as_ref().err().map(ErrorJson::from_error),
    };
    let code = match stabilizer {
        Err(e) => exit_code(e.class()),
        Ok(_) if entry.checks.values().any(|c| c.is_failure(strict)) => EXIT_VERIFICATION,
        Ok(_) => EXIT_OK,
    };
    Ok((entry, code))
}
