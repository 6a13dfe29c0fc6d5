use eschenburg::curvature::admits_positive_curvature;
use eschenburg::families::{grid, is_perfect_square, verify_fixture, Family, FixtureReport, FixtureStatus};
use num_bigint::BigInt;
use rayon::prelude::*;

fn run_family(family: Family, range: i64) -> Vec<FixtureReport> {
    family
        .cases()
        .iter()
        .flat_map(|&c| grid(family, c, range, &[]).unwrap().0)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|f| verify_fixture(f, 16))
        .collect()
}

fn assert_no_failures(reports: &[FixtureReport]) {
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| r.status == FixtureStatus::Fail)
        .map(|r| {
            let bad: Vec<String> = r
                .checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| format!("{}: {} vs {}", c.name, c.predicted, c.computed))
                .collect();
            format!(
                "{} case {} {:?}: {}",
                r.fixture.family,
                r.fixture.case,
                r.fixture.free,
                bad.join("; ")
            )
        })
        .collect();
    assert!(
        failures.is_empty(),
        "{} failures, first: {:#?}",
        failures.len(),
        &failures[..failures.len().min(5)]
    );
    assert!(reports.iter().any(|r| r.status == FixtureStatus::Pass));
}

#[test]
fn nonnegative_families_match() {
    let reports = run_family(Family::CorNonnegact, 8);
    assert_no_failures(&reports);
    // Only the flagged case may disagree.
    assert!(reports
        .iter()
        .all(|r| r.status != FixtureStatus::Flagged || r.fixture.case == 2));
}

#[test]
fn smooth_sphere_families_match_and_have_square_orders() {
    let reports = run_family(Family::SmoothSphere, 8);
    assert_no_failures(&reports);
    let mut positive = 0;
    for r in reports
        .iter()
        .filter(|r| r.fixture.case <= 4 && r.status == FixtureStatus::Pass)
    {
        if admits_positive_curvature(&r.fixture.params).unwrap().is_positive() {
            positive += 1;
            let order = r.checks.iter().find(|c| c.name == "stable order").unwrap();
            let k: BigInt = order.computed.parse().unwrap();
            assert!(is_perfect_square(&k), "{}", r.fixture.params);
        }
    }
    assert!(positive > 1000);
}

#[test]
fn two_singular_family_matches() {
    assert_no_failures(&run_family(Family::ExampleTwoSingular, 8));
}

#[test]
fn shifted_stable_order_is_never_square() {
    for k in -200i64..=200 {
        if k == 0 || k.abs() == 2 {
            continue;
        }
        assert!(!is_perfect_square(&BigInt::from((k * k - 4).abs())), "k = {k}");
    }
}
