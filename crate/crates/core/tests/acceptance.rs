//! The acceptance suite: one test per criterion (or tightly coupled group),
//! each printing its pass/fail line. Run with `--nocapture` to see every
//! line regardless of outcome:
//!
//! ```text
//! cargo test --release -p latticegrow-core --test acceptance -- --nocapture
//! ```

use latticegrow_core::harness::run_acceptance;

fn check(filter: &str) {
    let results = run_acceptance(filter);
    assert!(!results.is_empty(), "no criteria matched {filter}");
    let mut failed = Vec::new();
    for r in &results {
        println!("{}", r.line());
        if !r.passed && !r.soft {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}

#[test]
fn a1_exact_survival_formula() {
    check("A1");
}

#[test]
fn a2_oldest_particle_law() {
    check("A2");
}

#[test]
fn a3_limit_convergence() {
    check("A3");
}

#[test]
fn a4_lower_gap_bound() {
    check("A4");
}

#[test]
fn a5_gap_structure_decay() {
    check("A5");
}

#[test]
fn a6_limsup_scaling_diagnostic() {
    // diagnostic band: reported, soft-fail only
    check("A6");
}

#[test]
fn a7_coupling_scheme_uniformity() {
    check("A7");
}

#[test]
fn a8_overshoot_bound_direction() {
    check("A8");
}

#[test]
fn a9_dla_holes_appear_and_grow() {
    check("A9");
}

#[test]
fn a10_geometry_invariants() {
    check("A10");
}

#[test]
fn a11_surgery_forces_a_hole() {
    check("A11");
}
