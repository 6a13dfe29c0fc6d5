//! Singular set of a three-point instance, with local groups, as DOT.
//!
//!     cargo run --example singular_graph_dot | dot -Tpng > sigma.png

use eschenburg::singular::{export_dot, parity_census, singular_graph};
use eschenburg::TorusParams;

fn main() {
    let t = TorusParams::from_i64([0, -2, 0], [-2, -1, 1], [0, -2, 2], [-1, 1, 0]).unwrap();
    let g = singular_graph(&t).unwrap();
    for v in g.singular_vertices() {
        eprintln!("{v}: {}", g.vertex(v).isotropy.group);
    }
    let (even, odd) = parity_census(&g);
    eprintln!("{:?}, {even} even and {odd} odd singular vertices", g.shape());
    print!("{}", export_dot(&g));
}
