mod common;

use common::*;
use mustab::algebra::FieldSpec;
use mustab::curves::type_dimension;
use mustab::curves::Branch;
use mustab::stabilizer::{compute_stabilizer, theorem_checks, Algorithm, Budgets, SubgroupDesc};

fn run_and_check(label: &str, a: &Branch, want: &[&str]) -> SubgroupDesc {
    let budgets = Budgets::default();
    let run = compute_stabilizer(a, Algorithm::Both, &budgets).unwrap();
    let agreement = run.agreement.clone().unwrap_or_else(|| panic!("{label}: {:?} / {:?}", run.reparam, run.degeneration.as_ref().map(|d| d.as_ref().map(|d| d.fiber.to_string()))));
    assert!(agreement.equal, "{label}: {:?}", agreement.separating);
    let h = run.agreed_stabilizer().unwrap().clone();
    let expected = SubgroupDesc::parse(h.scheme.base(), &h.field, want).unwrap();
    assert!(h.same_ideal(&expected).unwrap(), "{label}: got {h}");
    let checks = theorem_checks(a, &run, &budgets);
    for (name, c) in checks.entries() {
        assert!(!c.is_failure(true), "{label} {name}: {c:?}");
    }
    h
}

#[test]
fn x1_unipotent() {
    let h = run_and_check("X1", &x1(&FieldSpec::Q), &["x11-1", "x21", "x22-1"]);
    assert_eq!(h.dim, 1);
}

#[test]
fn x2_torus() {
    let h = run_and_check("X2", &x2(&FieldSpec::Q), &["x12", "x21", "x11*x22-1"]);
    assert_eq!(h.dim, 1);
}

#[test]
fn cusp_vertical_line() {
    run_and_check("cusp", &cusp(), &["x"]);
}

#[test]
fn irrational_tail_reduces_to_diagonal() {
    let a = irrational_tail();
    assert_eq!(type_dimension(&a, 6).unwrap().dim, 2);
    let h = run_and_check("reduced", &a, &["x-y"]);
    assert_eq!(h.dim, 1);
}

#[test]
fn bounded_branch_is_trivial() {
    run_and_check("bounded", &bounded(), &["x11-1", "x12", "x21", "x22-1"]);
}

#[test]
fn f5_circle_branches() {
    let bs = f5_circle();
    assert_eq!(bs.len(), 2);
    for (i, b) in bs.iter().enumerate() {
        let slope = b.entries()[1].terms()[0].1.clone();
        let want = format!("y-{}*x", slope.as_prime_residue().unwrap());
        let h = run_and_check(&format!("circle {i}"), b, &[&want]);
        assert_eq!(h.dim, 1);
    }
}

// [[x,1],[0,y]]: the place x -> oo has a unipotent stabilizer, the place
// x -> 0 a torus.
#[test]
fn hyperbola_in_sl2() {
    let bs = hyperbola_sl2();
    assert_eq!(bs.len(), 2);
    let x11_pole = |b: &Branch| b.entries()[0].val().unwrap().is_negative();
    let (inf, zero): (Vec<_>, Vec<_>) = bs.iter().partition(|b| x11_pole(b));
    assert_eq!((inf.len(), zero.len()), (1, 1));
    run_and_check("x -> oo", inf[0], &["x11-1", "x21", "x22-1"]);
    run_and_check("x -> 0", zero[0], &["x12", "x21", "x11*x22-1"]);
}
