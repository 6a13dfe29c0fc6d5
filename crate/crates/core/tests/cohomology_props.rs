mod common;

use common::{almost_free_in, apply_word, equivalence_op, op_word};
use eschenburg::cohomology::{cohomology_group, graded_relation_matrix, relation_polynomials, sphere_cohomology};
use eschenburg::intlinalg::{cokernel, minor_gcd, AbelianGroup};
use eschenburg::params::{EdgeId, TorusParams};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn groups(t: &TorusParams, top: usize) -> Vec<AbelianGroup> {
    (0..=top).map(|d| cohomology_group(t, d).unwrap()).collect()
}

/// Cokernel from determinantal divisors alone.
fn cokernel_by_minors(m: &eschenburg::IntMatrix) -> AbelianGroup {
    let mut factors = Vec::new();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for k in 1..=m.rows().min(m.cols()) {
        let d = minor_gcd(m, k).unwrap();
        if d.is_zero() {
            break;
        }
        factors.push(&d / &prev);
        prev = d;
        rank = k;
    }
    AbelianGroup::from_cyclic_factors(m.rows() - rank, factors)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn odd_degrees_vanish(t in almost_free_in(6)) {
        for d in (1..=13).step_by(2) {
            prop_assert!(cohomology_group(&t, d).unwrap().is_trivial());
        }
    }

    #[test]
    fn groups_are_invariant(t in almost_free_in(5), op in equivalence_op()) {
        let u = t.apply(&op).unwrap();
        prop_assert_eq!(groups(&u, 12), groups(&t, 12), "{} under {}", t, op);
    }

    #[test]
    fn free_actions_look_like_the_flag_manifold(word in op_word(6)) {
        let t = apply_word(&TorusParams::wallach(), &word);
        prop_assert!(t.is_free());
        let g = groups(&t, 16);
        let total: usize = g.iter().map(AbelianGroup::free_rank).sum();
        prop_assert_eq!(total, 6);
        prop_assert!(g[7..].iter().all(AbelianGroup::is_trivial));
        prop_assert!(g.iter().all(|x| x.torsion().is_empty()));
    }

    #[test]
    fn sphere_order_law(t in almost_free_in(6), e in 0usize..9) {
        let e = EdgeId::ALL[e];
        let s = sphere_cohomology(&t, e, 4).unwrap();
        let [u, v] = e.endpoints();
        let product = t.vertex_isotropy(u).n * t.vertex_isotropy(v).n;
        prop_assert_eq!(s.groups[4].order(), Some(product));
    }

    #[test]
    fn minor_formula_matches_snf(t in almost_free_in(6), m in 0usize..=4) {
        let (r2, r3) = relation_polynomials(&t);
        let mat = graded_relation_matrix(&[r2, r3], m);
        prop_assert_eq!(cokernel_by_minors(&mat), cokernel(&mat));
    }
}
