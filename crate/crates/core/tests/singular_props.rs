mod common;

use common::effective_in;
use eschenburg::params::{EdgeId, TorusParams, VertexId};
use eschenburg::singular::{singular_graph, EdgeClass};
use proptest::prelude::*;

/// Almost-free effective instances with `q_i = q_j` and `b_i = b_j`, or the
/// same for `p` and `a`.
fn cohomogeneity_two() -> impl Strategy<Value = TorusParams> {
    (
        prop::array::uniform3(-5i64..=5),
        prop::array::uniform3(-5i64..=5),
        -5i64..=5,
        -5i64..=5,
        0usize..3,
        any::<bool>(),
    )
        .prop_filter_map("invalid", |(p, a, q, b, k, swap)| {
            let mut qq = [q; 3];
            let mut bb = [b; 3];
            qq[k] = p.iter().sum::<i64>() - 2 * q;
            bb[k] = a.iter().sum::<i64>() - 2 * b;
            let t = TorusParams::from_i64(p, qq, a, bb).ok()?;
            let t = if swap { t.swap() } else { t };
            (t.is_almost_free() && t.is_effective()).then_some(t)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn coincident_entries_give_smooth_spheres(t in cohomogeneity_two()) {
        let g = singular_graph(&t).unwrap();
        for e in &g.edges {
            prop_assert!(!matches!(e.class, EdgeClass::Teardrop | EdgeClass::Football), "{} edge {} {:?}", t, e.edge, e.class);
        }
    }

    #[test]
    fn graph_is_consistent(t in effective_in(5)) {
        let g = singular_graph(&t).unwrap();
        for e in &g.edges {
            prop_assert_eq!(e.endpoints, e.edge.endpoints());
            prop_assert_eq!(e.isotropy.clone(), t.edge_isotropy(e.edge));
            prop_assert_eq!(e.class.in_sigma(), !e.isotropy.group.is_trivial());
        }
        for v in &g.vertices {
            prop_assert_eq!(v.in_sigma, !v.isotropy.group.is_trivial());
        }
    }
}

#[test]
fn adjacency_matches_permutations() {
    for e in EdgeId::ALL {
        let ends = e.endpoints();
        assert_ne!(ends[0], ends[1]);
        for v in ends {
            assert_eq!(v.apply(e.i()), e.j(), "{v} on {e}");
        }
        let others = VertexId::ALL.iter().filter(|v| v.apply(e.i()) == e.j()).count();
        assert_eq!(others, 2);
    }
    for v in VertexId::ALL {
        let incident: Vec<EdgeId> = EdgeId::ALL
            .iter()
            .copied()
            .filter(|e| e.endpoints().contains(&v))
            .collect();
        assert_eq!(incident.len(), 3);
        let mut listed = v.edges().to_vec();
        listed.sort();
        assert_eq!(listed, incident);
    }
}
