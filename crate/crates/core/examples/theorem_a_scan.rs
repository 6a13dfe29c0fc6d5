//! Box scan with every assertion enabled.
//!
//!     cargo run --release --example theorem_a_scan -- 2

use eschenburg::cli::{render_scan, run_scan, Assertion, ScanConfig};

fn main() {
    let bound = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let cfg = ScanConfig {
        bound,
        assertions: vec![
            Assertion::TheoremAParity,
            Assertion::TheoremASmoothSphere,
            Assertion::SatAgreement,
            Assertion::Squares,
            Assertion::Localization,
        ],
        keep: 5,
        ..Default::default()
    };
    let r = run_scan(&cfg).unwrap();
    print!("{}", render_scan(&r));
    std::process::exit(if r.passed() { 0 } else { 1 });
}
