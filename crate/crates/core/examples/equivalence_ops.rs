//! Normal form, relabeling and effectivization under the equivalence ops.
//!
//!     cargo run --example equivalence_ops

use eschenburg::params::{effectivize, fast_l_sigma, normalize_cohomogeneity_form, EquivalenceOp, VertexId};
use eschenburg::TorusParams;

fn main() {
    let t = TorusParams::from_i64([1, -1, -1], [-1, 0, 0], [1, 1, -1], [0, 1, 0]).unwrap();
    let moved = t
        .apply(&EquivalenceOp::Permute {
            sigma: VertexId::C123,
            tau: VertexId::T12,
        })
        .and_then(|x| {
            x.apply(&EquivalenceOp::Gl2 {
                matrix: [[1, 2], [0, 1]],
            })
        })
        .and_then(|x| x.apply(&EquivalenceOp::shift(3, -1)))
        .unwrap();
    println!("moved       {moved}");
    let n = normalize_cohomogeneity_form(&moved);
    for op in &n.steps {
        println!("  {op}");
    }
    println!("normalized  {}", n.params);
    let r = n.relabeling().unwrap();
    let l = fast_l_sigma(&n.params).unwrap();
    for (i, v) in VertexId::ALL.iter().enumerate() {
        println!(
            "  {:<6} l = {:<4} N = {:<4} original vertex {}",
            v.to_string(),
            l[i].to_string(),
            n.params.vertex_isotropy(*v).n.to_string(),
            r.vertex(*v)
        );
    }

    let doubled = TorusParams::from_i64([2, -2, -2], [-2, 0, 0], [3, 3, -3], [0, 3, 0]).unwrap();
    let e = effectivize(&doubled).unwrap();
    println!("effectivize {doubled} -> {} in {} steps", e.params, e.steps.len());
}
