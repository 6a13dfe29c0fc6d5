#![allow(dead_code)]

use eschenburg::params::{EquivalenceOp, TorusParams, VertexId};
use proptest::prelude::*;

/// Entries in `[-b, b]`; the last entries of `q` and `b` are solved from the
/// sum conditions and must land in range.
pub fn params_in(bound: i64) -> impl Strategy<Value = TorusParams> {
    let t = prop::array::uniform3(-bound..=bound);
    let two = prop::array::uniform2(-bound..=bound);
    (t.clone(), two.clone(), t, two).prop_filter_map("sum out of range", move |(p, q, a, b)| {
        let q3 = p.iter().sum::<i64>() - q[0] - q[1];
        let b3 = a.iter().sum::<i64>() - b[0] - b[1];
        (q3.abs() <= bound && b3.abs() <= bound)
            .then(|| TorusParams::from_i64(p, [q[0], q[1], q3], a, [b[0], b[1], b3]).unwrap())
    })
}

pub fn almost_free_in(bound: i64) -> impl Strategy<Value = TorusParams> {
    params_in(bound).prop_filter("not almost free", TorusParams::is_almost_free)
}

pub fn effective_in(bound: i64) -> impl Strategy<Value = TorusParams> {
    almost_free_in(bound).prop_filter("not effective", TorusParams::is_effective)
}

pub fn vertex() -> impl Strategy<Value = VertexId> {
    prop::sample::select(VertexId::ALL.to_vec())
}

pub const GL2_GENERATORS: [[[i64; 2]; 2]; 8] = [
    [[1, 1], [0, 1]],
    [[1, -1], [0, 1]],
    [[1, 0], [1, 1]],
    [[1, 0], [-2, 1]],
    [[0, 1], [1, 0]],
    [[-1, 0], [0, 1]],
    [[0, -1], [1, 0]],
    [[2, 1], [1, 1]],
];

/// Swap, shift, permute or a unimodular change of basis.
pub fn equivalence_op() -> impl Strategy<Value = EquivalenceOp> {
    prop_oneof![
        Just(EquivalenceOp::Swap),
        (-4i64..=4, -4i64..=4).prop_map(|(d, c)| EquivalenceOp::shift(d, c)),
        (vertex(), vertex()).prop_map(|(sigma, tau)| EquivalenceOp::Permute { sigma, tau }),
        prop::sample::select(GL2_GENERATORS.to_vec()).prop_map(|matrix| EquivalenceOp::Gl2 { matrix }),
    ]
}

pub fn op_word(max_len: usize) -> impl Strategy<Value = Vec<EquivalenceOp>> {
    prop::collection::vec(equivalence_op(), 0..=max_len)
}

pub fn apply_word(t: &TorusParams, word: &[EquivalenceOp]) -> TorusParams {
    word.iter().fold(t.clone(), |acc, op| acc.apply(op).unwrap())
}
