//! Orbifold cohomology up to degree 24 for a smooth-sphere family member,
//! next to the cohomology of its singular sphere.
//!
//!     cargo run --example cohomology_profile -- 5

use eschenburg::cohomology::{cohomology_profile, localization_report, sphere_cohomology, DEFAULT_STAB_WINDOW};
use eschenburg::families::smooth_sphere_family;
use eschenburg::singular::singular_graph;

fn main() {
    let u: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(-2);
    let t = smooth_sphere_family(1, &[0, u]).unwrap().params;
    println!("{t}");
    let orb = cohomology_profile(&t, 24, DEFAULT_STAB_WINDOW).unwrap();
    let edge = singular_graph(&t).unwrap().containing_edge().unwrap();
    let sphere = sphere_cohomology(&t, edge, 20).unwrap();
    for d in (0..=24).step_by(2) {
        let s = if d >= 6 {
            sphere.groups[d - 4].to_string()
        } else {
            "-".into()
        };
        println!(
            "H^{d:<3} {:<16} sphere H^{:<3} {s}",
            orb.groups[d].to_string(),
            d.saturating_sub(4)
        );
    }
    if let Some(st) = &orb.stable {
        println!("stable {} from degree {}", st.group, st.onset);
    }
    println!("localization holds: {}", localization_report(&t, 24).unwrap().holds);
}
