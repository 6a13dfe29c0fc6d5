//! Curvature decision for a triangle pair, its reduction to coincident
//! entries, and an SVG of the pair.
//!
//!     cargo run --example curvature_triangles > pair.svg

use eschenburg::curvature::{
    admits_positive_curvature, reduce_to_cohomogeneity_two, sat_verdict, triangles, triangles_svg,
};
use eschenburg::TorusParams;

fn main() {
    let t = TorusParams::from_i64([2, 3, 5], [1, 2, 7], [3, -3, 0], [1, -1, 0]).unwrap();
    let v = admits_positive_curvature(&t).unwrap();
    eprintln!("{t}: {v}");
    eprintln!("projection test agrees: {}", sat_verdict(&t).unwrap() == v);
    let red = reduce_to_cohomogeneity_two(&t).unwrap();
    for op in &red.steps {
        eprintln!("  {op}");
    }
    eprintln!("reduced: {}", red.params);
    print!("{}", triangles_svg(&triangles(&t), Some(&v)));
}
