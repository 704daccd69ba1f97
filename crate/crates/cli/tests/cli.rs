use std::process::Command;

use mustab_cli::corpus::{cmd_corpus, fixtures, run_fixture};
use mustab_cli::explain::cmd_explain;
use mustab_cli::job::JobSpec;
use mustab_cli::report::{AgreementJson, Report, EXIT_INVALID, EXIT_OK, EXIT_UNSUPPORTED, EXIT_VERIFICATION};
use mustab_cli::run::{cmd_run, Overrides};

fn job(name: &str) -> JobSpec {
    let f = fixtures().into_iter().find(|f| f.name == name).unwrap();
    JobSpec::from_json(f.job.unwrap()).unwrap()
}

fn run(name: &str) -> Report {
    cmd_run(&job(name), &Overrides::default())
}

#[test]
fn every_fixture_matches_its_expected_output() {
    let results = cmd_corpus(None, &Overrides::default());
    assert_eq!(results.len(), fixtures().len());
    for r in &results {
        assert!(r.passed(), "{}: {:?}", r.name, r.mismatches);
    }
    assert_eq!(results.iter().filter(|r| r.skipped.is_some()).count(), 1);
}

#[test]
fn filter_selects_by_name() {
    let results = cmd_corpus(Some("bounded"), &Overrides::default());
    assert_eq!(results.len(), 1);
    assert_eq!(results[0].name, "bounded");
    assert!(results[0].passed());
}

#[test]
fn report_round_trips() {
    for name in ["x1", "reduced", "iwasawa_gl2", "coset", "hyperbola_places", "q_circle"] {
        let r = run(name);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r, "{name}");
    }
}

#[test]
fn reports_are_deterministic_up_to_timing() {
    for name in ["x2", "f5_circle"] {
        let mut a = run(name);
        let mut b = run(name);
        a.timing_ms = 0;
        b.timing_ms = 0;
        assert_eq!(a.to_json(), b.to_json(), "{name}");
    }
}

#[test]
fn exit_codes_follow_error_classes() {
    assert_eq!(run("x1").exit_code, EXIT_OK);
    assert_eq!(run("q_circle").exit_code, EXIT_UNSUPPORTED);
    assert_eq!(run("coset").exit_code, EXIT_VERIFICATION);
    let mut bad = job("x1");
    bad.input = None;
    let r = cmd_run(&bad, &Overrides::default());
    assert_eq!(r.exit_code, EXIT_INVALID);
    assert!(r.error.is_some());
}

#[test]
fn explain_x1_names_the_unipotent_stabilizer() {
    let text = cmd_explain(&run("x1"));
    assert!(text.contains("unipotent"), "{text}");
    assert!(text.contains("dim p = 1 = dim Stab"), "{text}");
    assert!(text.contains("both algorithms agree"), "{text}");
    assert!(text.contains("[pass] dim_equality"), "{text}");
}

#[test]
fn explain_x2_names_the_torus() {
    let text = cmd_explain(&run("x2"));
    assert!(text.contains("torus"), "{text}");
    assert!(!text.contains("unipotent"), "{text}");
}

#[test]
fn explain_shows_a_disagreement() {
    let mut r = run("x1");
    r.results.stabilizers[0].agreement = Some(AgreementJson { equal: false, separating: Some("x12".into()) });
    let text = cmd_explain(&r);
    assert!(text.contains("DISAGREE"), "{text}");
    assert!(text.contains("separating generator: x12"), "{text}");
    assert!(text.contains("reparameterization: <"), "{text}");
}

#[test]
fn skipped_fixture_is_not_run() {
    let f = fixtures().into_iter().find(|f| f.skip.is_some()).unwrap();
    let r = run_fixture(&f, &Overrides::default());
    assert!(r.report.is_none() && r.skipped.is_some());
}

#[test]
fn binary_exit_codes_and_json_out() {
    let bin = env!("CARGO_BIN_EXE_mustab");
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let out = Command::new(bin).args(["--job", &format!("{dir}/x2.job.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let r = Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.results.stabilizers.len(), 1);

    let out = Command::new(bin).args(["--job", &format!("{dir}/q_circle.job.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_UNSUPPORTED));
    let out = Command::new(bin).args(["--job", &format!("{dir}/coset.job.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_VERIFICATION));
    let out = Command::new(bin).args(["--job", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INVALID));

    let path = std::env::temp_dir().join(format!("mustab-x1-{}.json", std::process::id()));
    let out = Command::new(bin)
        .args(["--job", &format!("{dir}/x1.job.json"), "--json-out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&out.stdout).contains("unipotent"));
    let out = Command::new(bin).args(["--explain", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dim p = 1 = dim Stab"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn precision_override_is_reported() {
    let over = Overrides { budgets: mustab_cli::job::BudgetsJson { precision: Some(20), ..Default::default() }, ..Default::default() };
    let r = cmd_run(&job("x1"), &over);
    assert_eq!(r.exit_code, EXIT_OK);
    assert_eq!(r.budgets.precision, Some(20));
}
