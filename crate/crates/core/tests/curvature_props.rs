mod common;

use common::{almost_free_in, equivalence_op, params_in};
use eschenburg::curvature::{
    admits_positive_curvature, orient, positive_given_orientation, segment_intersects_triangle, separating_axis_check,
    triangles, PlanePoint, Triangle,
};
use eschenburg::params::{effectivize, TorusParams};
use proptest::prelude::*;

fn pt(x: i64, y: i64) -> PlanePoint {
    PlanePoint::new(x, y)
}

fn in_closed_triangle(x: &PlanePoint, t: &Triangle) -> bool {
    let o = [
        orient(&t[0], &t[1], x),
        orient(&t[1], &t[2], x),
        orient(&t[2], &t[0], x),
    ];
    if o.iter().all(|&s| s == 0) {
        // Degenerate triangle: fall back to the exact segment test.
        return segment_intersects_triangle(x, x, t);
    }
    !(o.contains(&1) && o.contains(&-1))
}

/// Whether each orientation has an edge that misses the other triangle.
fn sides(t: &TorusParams) -> (bool, bool) {
    let pair = triangles(t);
    let miss = |moving: &Triangle, fixed: &Triangle| {
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .any(|&(i, j)| !segment_intersects_triangle(&moving[i], &moving[j], fixed))
    };
    (miss(&pair.q, &pair.p), miss(&pair.p, &pair.q))
}

fn scaled(t: &Triangle, k: i64) -> Triangle {
    t.clone().map(|p| PlanePoint { x: p.x * k, y: p.y * k })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn centroid_shared_by_both_triangles(p in prop::array::uniform3((-9i64..=9, -9i64..=9)), q in prop::array::uniform2((-9i64..=9, -9i64..=9))) {
        let sx: i64 = p.iter().map(|v| v.0).sum();
        let sy: i64 = p.iter().map(|v| v.1).sum();
        let q3 = (sx - q[0].0 - q[1].0, sy - q[0].1 - q[1].1);
        // Doubled coordinates keep the midpoint integral.
        let tri: Triangle = p.map(|(x, y)| pt(2 * x, 2 * y));
        let q3d = pt(2 * q3.0, 2 * q3.1);
        if in_closed_triangle(&q3d, &tri) {
            let mid = pt(q[0].0 + q[1].0, q[0].1 + q[1].1);
            prop_assert!(in_closed_triangle(&mid, &tri));
        }
    }

    #[test]
    fn verdict_is_invariant(t in almost_free_in(5), op in equivalence_op()) {
        let u = t.apply(&op).unwrap();
        let (given, swapped) = sides(&t);
        let expect = if matches!(op, eschenburg::EquivalenceOp::Swap) { (swapped, given) } else { (given, swapped) };
        prop_assert_eq!(sides(&u), expect);
        prop_assert_eq!(admits_positive_curvature(&u).unwrap().is_positive(), given || swapped);
        prop_assert_eq!(positive_given_orientation(&t).unwrap().is_some(), given);
    }

    #[test]
    fn verdict_survives_effectivize(t in almost_free_in(4), k in 1i64..=3, j in 1i64..=3) {
        let big = TorusParams::new(
            t.p().clone().map(|x| x * k), t.q().clone().map(|x| x * k),
            t.a().clone().map(|x| x * j), t.b().clone().map(|x| x * j),
        ).unwrap();
        let e = effectivize(&big).unwrap().params;
        prop_assert_eq!(sides(&e), sides(&big));
        prop_assert_eq!(sides(&big), sides(&t));
    }

    #[test]
    fn sat_agrees(t in almost_free_in(8)) {
        prop_assert!(separating_axis_check(&t).unwrap());
    }

    #[test]
    fn degenerate_triangle_is_positive(t in params_in(6), i in 0usize..3, j in 0usize..3, side in any::<bool>()) {
        prop_assume!(i != j);
        let mut f = [t.p().clone(), t.q().clone(), t.a().clone(), t.b().clone()];
        let (x, y) = if side { (0, 2) } else { (1, 3) };
        // Make vertex j equal vertex i, then restore the sums on the other side.
        let (dx, dy) = (&f[x][i] - &f[x][j], &f[y][i] - &f[y][j]);
        f[x][j] = f[x][i].clone();
        f[y][j] = f[y][i].clone();
        let (ox, oy) = if side { (1, 3) } else { (0, 2) };
        f[ox][0] += dx;
        f[oy][0] += dy;
        let [p, q, a, b] = f;
        let u = TorusParams::new(p, q, a, b).unwrap();
        prop_assume!(u.is_almost_free());
        prop_assert!(admits_positive_curvature(&u).unwrap().is_positive(), "{}", u);
    }

    /// A sampled point of an edge found inside the other triangle is an
    /// intersection; the exact test must agree.
    #[test]
    fn sampling_never_contradicts_exact(t in almost_free_in(4)) {
        let pair = triangles(&t);
        for (moving, fixed) in [(&pair.q, &pair.p), (&pair.p, &pair.q)] {
            let big = scaled(fixed, 64);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let hit = (0..=64).any(|s| {
                    let x = &moving[i].x * (64 - s) + &moving[j].x * s;
                    let y = &moving[i].y * (64 - s) + &moving[j].y * s;
                    in_closed_triangle(&PlanePoint { x, y }, &big)
                });
                if hit {
                    prop_assert!(segment_intersects_triangle(&moving[i], &moving[j], fixed));
                }
            }
        }
    }
}
