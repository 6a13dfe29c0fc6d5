//! Sweep every family case over a small parameter box and tally results.
//!
//!     cargo run --example verify_families -- 3

use std::collections::BTreeMap;

use eschenburg::families::{grid, verify_fixture, Family, FixtureStatus};

fn main() {
    let range: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for family in Family::ALL {
        for &case in family.cases() {
            let (fixtures, violations) = grid(family, case, range, &[]).expect("valid case");
            let mut tally: BTreeMap<String, usize> = BTreeMap::new();
            let mut first_fail = None;
            for f in &fixtures {
                let r = verify_fixture(f, 16);
                let key = match &r.status {
                    FixtureStatus::Skipped(why) => format!("skipped ({why})"),
                    s => format!("{s:?}").to_lowercase(),
                };
                if r.status == FixtureStatus::Fail && first_fail.is_none() {
                    first_fail = Some(r);
                }
                *tally.entry(key).or_default() += 1;
            }
            println!(
                "{family} case {case}: {} fixtures, {violations} side-condition violations",
                fixtures.len()
            );
            for (k, n) in &tally {
                println!("    {k}: {n}");
            }
            if let Some(r) = first_fail {
                println!("    first failure {:?} {}", r.fixture.free, r.fixture.params);
                for c in r.checks.iter().filter(|c| !c.ok) {
                    println!("      {}: predicted {} computed {}", c.name, c.predicted, c.computed);
                }
            }
        }
    }
}
