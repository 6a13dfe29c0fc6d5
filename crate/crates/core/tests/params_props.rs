mod common;

use common::{almost_free_in, equivalence_op, op_word, params_in};
use eschenburg::params::{
    effectivize, fast_l_sigma, is_normalized, normalize_cohomogeneity_form, EdgeId, EquivalenceOp, EquivalenceTrace,
    TorusParams, VertexId,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn n_vertex(t: &TorusParams, v: VertexId) -> BigInt {
    t.vertex_isotropy(v).n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn local_groups_follow_relabeling(t in params_in(5), op in equivalence_op()) {
        let u = t.apply(&op).unwrap();
        let r = op.relabeling().unwrap();
        for v in VertexId::ALL {
            prop_assert_eq!(u.vertex_isotropy(v), t.vertex_isotropy(r.vertex(v)), "vertex {} under {}", v, op);
        }
        for e in EdgeId::ALL {
            prop_assert_eq!(u.edge_isotropy(e), t.edge_isotropy(r.edge(e)), "edge {} under {}", e, op);
        }
    }

    #[test]
    fn words_follow_composed_relabeling(t in params_in(4), word in op_word(5)) {
        let mut trace = EquivalenceTrace::start(&t);
        for op in word {
            trace.push(op).unwrap();
        }
        let r = trace.relabeling().unwrap();
        let mut before: Vec<BigInt> = t.vertex_orders().to_vec();
        let mut after: Vec<BigInt> = trace.params.vertex_orders().to_vec();
        for v in VertexId::ALL {
            prop_assert_eq!(n_vertex(&trace.params, v), n_vertex(&t, r.vertex(v)));
        }
        for e in EdgeId::ALL {
            prop_assert_eq!(trace.params.edge_isotropy(e).n, t.edge_isotropy(r.edge(e)).n);
        }
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn swap_inverts_vertices(t in params_in(6)) {
        let s = t.apply(&EquivalenceOp::Swap).unwrap();
        for v in VertexId::ALL {
            prop_assert_eq!(n_vertex(&s, v), n_vertex(&t, v.inverse()));
        }
    }

    #[test]
    fn group_order_divisibility(t in params_in(6)) {
        let groups = VertexId::ALL.map(|v| t.vertex_isotropy(v)).into_iter()
            .chain(EdgeId::ALL.map(|e| t.edge_isotropy(e)));
        for g in groups {
            if !g.n.is_zero() {
                prop_assert!(g.n.is_multiple_of(&g.g), "g={} N={}", g.g, g.n);
            }
        }
    }

    #[test]
    fn edge_groups_embed_in_endpoints(t in almost_free_in(6)) {
        for e in EdgeId::ALL {
            let ge = t.edge_isotropy(e);
            for v in e.endpoints() {
                let gv = t.vertex_isotropy(v);
                prop_assert!(gv.n.is_multiple_of(&ge.n), "edge {} N={} vertex {} N={}", e, ge.n, v, gv.n);
                prop_assert!(gv.g.is_multiple_of(&ge.g));
            }
        }
    }

    #[test]
    fn almost_free_iff_independent_differences(t in params_in(4)) {
        let independent = VertexId::ALL.iter().all(|&s| {
            let d = |i: usize| (&t.p()[i] - &t.q()[s.apply(i)], &t.a()[i] - &t.b()[s.apply(i)]);
            let (x1, y1) = d(0);
            let (x2, y2) = d(1);
            !(x1 * y2 - x2 * y1).is_zero()
        });
        prop_assert_eq!(t.is_almost_free(), independent);
        prop_assert_eq!(t.is_almost_free(), t.vertex_orders().iter().all(|n| !n.is_zero()));
    }

    #[test]
    fn normalization_reaches_normal_form(t in params_in(6)) {
        let tr = normalize_cohomogeneity_form(&t);
        prop_assert!(is_normalized(&tr.params), "{}", tr.params);
        let mut before: Vec<BigInt> = t.vertex_orders().to_vec();
        let mut after: Vec<BigInt> = tr.params.vertex_orders().to_vec();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn effectivize_divides_orders(t in almost_free_in(4), k in 1i64..=3, j in 1i64..=3) {
        let big = TorusParams::new(
            t.p().clone().map(|x| x * k), t.q().clone().map(|x| x * k),
            t.a().clone().map(|x| x * j), t.b().clone().map(|x| x * j),
        ).unwrap();
        let e = effectivize(&big).unwrap();
        prop_assert!(e.params.is_effective());
        let kernel = eschenburg::params::ineffective_kernel(&big).order().unwrap();
        for v in VertexId::ALL {
            prop_assert_eq!(n_vertex(&e.params, v) * &kernel, n_vertex(&big, v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fast_l_matches_on_normalized(t in params_in(10)) {
        let n = normalize_cohomogeneity_form(&t).params;
        let l = fast_l_sigma(&n).unwrap();
        for (i, v) in VertexId::ALL.iter().enumerate() {
            prop_assert_eq!(l[i].abs(), n_vertex(&n, *v), "{} at {}", n, v);
        }
    }
}
