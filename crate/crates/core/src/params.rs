//! Torus parameters `(p, q, a, b)`, isotropy groups, and the equivalence
//! operations that preserve the quotient orbifold.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{gcd_list, smith_normal_form, AbelianGroup, IntMatrix};

pub type Triple = [BigInt; 3];

fn triple(x: [i64; 3]) -> Triple {
    x.map(BigInt::from)
}

fn sum(t: &Triple) -> BigInt {
    t.iter().sum()
}

/// The four integer triples of a two-torus biquotient action on SU(3).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct TorusParams {
    p: Triple,
    q: Triple,
    a: Triple,
    b: Triple,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawParams {
    #[serde(with = "crate::bigjson::triple")]
    p: Triple,
    #[serde(with = "crate::bigjson::triple")]
    q: Triple,
    #[serde(with = "crate::bigjson::triple")]
    a: Triple,
    #[serde(with = "crate::bigjson::triple")]
    b: Triple,
}

impl TryFrom<RawParams> for TorusParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        TorusParams::new(r.p, r.q, r.a, r.b)
    }
}

impl From<TorusParams> for RawParams {
    fn from(t: TorusParams) -> Self {
        RawParams {
            p: t.p,
            q: t.q,
            a: t.a,
            b: t.b,
        }
    }
}

/// Validates the sum conditions `Σp = Σq` and `Σa = Σb`.
pub fn validate(p: Triple, q: Triple, a: Triple, b: Triple) -> Result<TorusParams> {
    TorusParams::new(p, q, a, b)
}

impl TorusParams {
    pub fn new(p: Triple, q: Triple, a: Triple, b: Triple) -> Result<Self> {
        let (ps, qs) = (sum(&p), sum(&q));
        if ps != qs {
            return Err(Error::SumMismatchP { p_sum: ps, q_sum: qs });
        }
        let (as_, bs) = (sum(&a), sum(&b));
        if as_ != bs {
            return Err(Error::SumMismatchA { a_sum: as_, b_sum: bs });
        }
        Ok(TorusParams { p, q, a, b })
    }

    pub fn from_i64(p: [i64; 3], q: [i64; 3], a: [i64; 3], b: [i64; 3]) -> Result<Self> {
        Self::new(triple(p), triple(q), triple(a), triple(b))
    }

    /// Maximal-torus parameters whose quotient is the flag manifold.
    pub fn wallach() -> Self {
        Self::from_i64([1, 0, -1], [0, 0, 0], [0, 1, -1], [0, 0, 0]).expect("valid")
    }

    pub fn p(&self) -> &Triple {
        &self.p
    }

    pub fn q(&self) -> &Triple {
        &self.q
    }

    pub fn a(&self) -> &Triple {
        &self.a
    }

    pub fn b(&self) -> &Triple {
        &self.b
    }

    /// `(p_i - q_j, a_i - b_j)`, zero-based indices.
    fn diff(&self, i: usize, j: usize) -> (BigInt, BigInt) {
        (&self.p[i] - &self.q[j], &self.a[i] - &self.b[j])
    }

    pub fn vertex_isotropy(&self, v: VertexId) -> IsotropyGroup {
        vertex_isotropy(self, v)
    }

    pub fn edge_isotropy(&self, e: EdgeId) -> IsotropyGroup {
        edge_isotropy(self, e)
    }

    /// `N_σ` for all six vertices in `VertexId::ALL` order.
    pub fn vertex_orders(&self) -> [BigInt; 6] {
        VertexId::ALL.map(|v| vertex_n(self, v))
    }

    pub fn is_almost_free(&self) -> bool {
        is_almost_free(self)
    }

    pub fn is_free(&self) -> bool {
        is_free(self)
    }

    pub fn is_effective(&self) -> bool {
        is_effective(self)
    }

    pub fn apply(&self, op: &EquivalenceOp) -> Result<TorusParams> {
        apply_equivalence(self, op)
    }

    pub fn swap(&self) -> TorusParams {
        TorusParams {
            p: self.q.clone(),
            q: self.p.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

impl fmt::Display for TorusParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = |x: &Triple| format!("{},{},{}", x[0], x[1], x[2]);
        write!(f, "p={};q={};a={};b={}", t(&self.p), t(&self.q), t(&self.a), t(&self.b))
    }
}

impl fmt::Debug for TorusParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusParams({self})")
    }
}

/// Parses a comma-separated integer triple such as `1,0,-1`.
pub fn parse_triple(s: &str) -> Result<Triple> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "expected three comma-separated integers, got `{s}`"
        )));
    }
    let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .parse()
            .map_err(|_| Error::Parse(format!("`{p}` is not an integer")))?;
    }
    Ok(out)
}

impl FromStr for TorusParams {
    type Err = Error;

    /// Parses `p=c1,c2,c3;q=...;a=...;b=...` (keys in any order).
    fn from_str(s: &str) -> Result<Self> {
        let mut slots: [Option<Triple>; 4] = Default::default();
        for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
            let idx = match k.trim() {
                "p" => 0,
                "q" => 1,
                "a" => 2,
                "b" => 3,
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            };
            if slots[idx].replace(parse_triple(v)?).is_some() {
                return Err(Error::Parse(format!("duplicate key `{}`", k.trim())));
            }
        }
        let [p, q, a, b] = slots;
        let missing = |k| Error::Parse(format!("missing `{k}`"));
        TorusParams::new(
            p.ok_or_else(|| missing("p"))?,
            q.ok_or_else(|| missing("q"))?,
            a.ok_or_else(|| missing("a"))?,
            b.ok_or_else(|| missing("b"))?,
        )
    }
}

/// A permutation of {1,2,3}, naming one of the six fixed-point vertices.
///
/// Cycle notation: `(123)` sends 1→2, 2→3, 3→1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum VertexId {
    #[serde(rename = "Id")]
    Id,
    #[serde(rename = "(12)")]
    T12,
    #[serde(rename = "(13)")]
    T13,
    #[serde(rename = "(23)")]
    T23,
    #[serde(rename = "(123)")]
    C123,
    #[serde(rename = "(132)")]
    C132,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl VertexId {
    pub const ALL: [VertexId; 6] = [
        VertexId::Id,
        VertexId::T12,
        VertexId::T13,
        VertexId::T23,
        VertexId::C123,
        VertexId::C132,
    ];

    /// Zero-based images `[σ(0), σ(1), σ(2)]`.
    pub fn images(self) -> [usize; 3] {
        match self {
            VertexId::Id => [0, 1, 2],
            VertexId::T12 => [1, 0, 2],
            VertexId::T13 => [2, 1, 0],
            VertexId::T23 => [0, 2, 1],
            VertexId::C123 => [1, 2, 0],
            VertexId::C132 => [2, 0, 1],
        }
    }

    pub fn from_images(img: [usize; 3]) -> Option<VertexId> {
        VertexId::ALL.into_iter().find(|v| v.images() == img)
    }

    /// Zero-based image of `i`.
    pub fn apply(self, i: usize) -> usize {
        self.images()[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: VertexId) -> VertexId {
        let img = [0, 1, 2].map(|i| self.apply(other.apply(i)));
        VertexId::from_images(img).expect("composition of permutations")
    }

    pub fn inverse(self) -> VertexId {
        let mut inv = [0; 3];
        for (i, &j) in self.images().iter().enumerate() {
            inv[j] = i;
        }
        VertexId::from_images(inv).expect("inverse permutation")
    }

    pub fn parity(self) -> Parity {
        match self {
            VertexId::Id | VertexId::C123 | VertexId::C132 => Parity::Even,
            _ => Parity::Odd,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VertexId::Id => "Id",
            VertexId::T12 => "(12)",
            VertexId::T13 => "(13)",
            VertexId::T23 => "(23)",
            VertexId::C123 => "(123)",
            VertexId::C132 => "(132)",
        }
    }

    /// The three edges through this vertex, in `EdgeId::ALL` order.
    pub fn edges(self) -> [EdgeId; 3] {
        [0, 1, 2].map(|i| EdgeId::new(i, self.apply(i)))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        VertexId::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s) || v.name().trim_matches(['(', ')']) == s)
            .ok_or_else(|| Error::Parse(format!("unknown permutation `{s}`")))
    }
}

/// An edge sphere `(i, j)`, stored zero-based; displayed one-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId {
    i: u8,
    j: u8,
}

impl EdgeId {
    pub const ALL: [EdgeId; 9] = {
        let mut out = [EdgeId { i: 0, j: 0 }; 9];
        let mut k = 0;
        while k < 9 {
            out[k] = EdgeId {
                i: (k / 3) as u8,
                j: (k % 3) as u8,
            };
            k += 1;
        }
        out
    };

    /// Zero-based constructor. Panics if an index exceeds 2.
    pub fn new(i: usize, j: usize) -> EdgeId {
        assert!(i < 3 && j < 3, "edge indices are 0..3");
        EdgeId { i: i as u8, j: j as u8 }
    }

    /// One-based constructor, `EdgeId::one_based(1, 1)` is the edge (1,1).
    pub fn one_based(i: usize, j: usize) -> Result<EdgeId> {
        if (1..=3).contains(&i) && (1..=3).contains(&j) {
            Ok(EdgeId::new(i - 1, j - 1))
        } else {
            Err(Error::InvalidArgument(format!("edge ({i},{j}) out of range")))
        }
    }

    pub fn i(self) -> usize {
        self.i as usize
    }

    pub fn j(self) -> usize {
        self.j as usize
    }

    /// The two vertices `σ` with `σ(i) = j`, even one first.
    pub fn endpoints(self) -> [VertexId; 2] {
        let mut it = VertexId::ALL.into_iter().filter(|v| v.apply(self.i()) == self.j());
        let (x, y) = (it.next().expect("two endpoints"), it.next().expect("two endpoints"));
        if x.parity() == Parity::Even {
            [x, y]
        } else {
            [y, x]
        }
    }

    /// The edge joining two distinct vertices, if they are adjacent.
    pub fn joining(u: VertexId, v: VertexId) -> Option<EdgeId> {
        (0..3)
            .find(|&i| u.apply(i) == v.apply(i))
            .filter(|_| u != v)
            .map(|i| EdgeId::new(i, u.apply(i)))
    }

    pub fn label(self) -> String {
        format!("{}{}", self.i + 1, self.j + 1)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

impl FromStr for EdgeId {
    type Err = Error;

    /// Accepts `(1,2)`, `1,2` or `12`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("bad edge `{s}`")))?;
        match digits[..] {
            [i, j] => EdgeId::one_based(i, j),
            _ => Err(Error::Parse(format!("bad edge `{s}`"))),
        }
    }
}

impl Serialize for EdgeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EdgeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Z_g + Z_{N/g}`; `n = 0` marks an infinite stabilizer.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct IsotropyGroup {
    #[serde(with = "crate::bigjson")]
    pub g: BigInt,
    #[serde(with = "crate::bigjson")]
    pub n: BigInt,
    pub group: AbelianGroup,
}

impl IsotropyGroup {
    /// From the two columns `V`, `W` of an integer matrix: `g` is the gcd of
    /// all entries and `N` the gcd of the 2-minors.
    pub fn from_columns(v: &[BigInt], w: &[BigInt]) -> Self {
        let g = gcd_list(v.iter().chain(w));
        let mut n = BigInt::zero();
        'outer: for i in 0..v.len() {
            for j in i + 1..v.len() {
                n = n.gcd(&(&v[i] * &w[j] - &v[j] * &w[i]));
                if n.is_one() {
                    break 'outer;
                }
            }
        }
        Self::from_g_n(g, n)
    }

    fn from_g_n(g: BigInt, n: BigInt) -> Self {
        let second = if n.is_zero() || g.is_zero() {
            BigInt::zero()
        } else {
            &n / &g
        };
        let group = AbelianGroup::from_cyclic_factors(0, [g.clone(), second]);
        IsotropyGroup { g, n, group }
    }

    pub fn is_finite(&self) -> bool {
        !self.n.is_zero()
    }

    pub fn is_trivial(&self) -> bool {
        self.n.is_one()
    }
}

fn vertex_n(t: &TorusParams, v: VertexId) -> BigInt {
    let (x1, y1) = t.diff(0, v.apply(0));
    let (x2, y2) = t.diff(1, v.apply(1));
    (x1 * y2 - x2 * y1).abs()
}

/// Local group at the vertex `∗_σ`.
pub fn vertex_isotropy(t: &TorusParams, v: VertexId) -> IsotropyGroup {
    let (x1, y1) = t.diff(0, v.apply(0));
    let (x2, y2) = t.diff(1, v.apply(1));
    IsotropyGroup::from_columns(&[x1, x2], &[y1, y2])
}

fn others(i: usize) -> [usize; 2] {
    match i {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// Local group along the edge sphere `(i, j)`.
pub fn edge_isotropy(t: &TorusParams, e: EdgeId) -> IsotropyGroup {
    let [i1, i2] = others(e.i());
    let [j1, j2] = others(e.j());
    let pairs = [(i1, j1), (i1, j2), (i2, j1), (i2, j2)];
    let (v, w): (Vec<_>, Vec<_>) = pairs.iter().map(|&(i, j)| t.diff(i, j)).unzip();
    IsotropyGroup::from_columns(&v, &w)
}

/// Off-diagonal index pairs `(i, j)`, `i ≠ j`, in lexicographic order.
pub const OFF_DIAGONAL: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// The 6-vectors `P = (p_i - q_j)` and `A = (a_i - b_j)` over `OFF_DIAGONAL`.
pub fn kernel_vectors(t: &TorusParams) -> (Vec<BigInt>, Vec<BigInt>) {
    OFF_DIAGONAL.iter().map(|&(i, j)| t.diff(i, j)).unzip()
}

/// Subgroup of the torus acting trivially. Infinite (positive free rank)
/// when all 2-minors of `(P | A)` vanish.
pub fn ineffective_kernel(t: &TorusParams) -> AbelianGroup {
    let (p, a) = kernel_vectors(t);
    IsotropyGroup::from_columns(&p, &a).group
}

pub fn is_almost_free(t: &TorusParams) -> bool {
    VertexId::ALL.iter().all(|&v| !vertex_n(t, v).is_zero())
}

pub fn is_free(t: &TorusParams) -> bool {
    VertexId::ALL.iter().all(|&v| vertex_n(t, v).is_one())
}

pub fn is_effective(t: &TorusParams) -> bool {
    ineffective_kernel(t).is_trivial()
}

pub type Mat2 = [[BigInt; 2]; 2];

pub fn mat2(m: [[i64; 2]; 2]) -> Mat2 {
    m.map(|r| r.map(BigInt::from))
}

pub fn det2(m: &Mat2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Operations that produce equivalent parameters.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EquivalenceOp {
    /// `(p, q, a, b) → (q, p, b, a)`.
    Swap,
    /// Add `d` to every entry of `p`, `q` and `c` to every entry of `a`, `b`.
    Shift {
        #[serde(with = "crate::bigjson")]
        d: BigInt,
        #[serde(with = "crate::bigjson")]
        c: BigInt,
    },
    /// `p'_i = p_σ(i)`, `a'_i = a_σ(i)`, `q'_j = q_τ(j)`, `b'_j = b_τ(j)`.
    Permute { sigma: VertexId, tau: VertexId },
    /// `(p', a') = A (p, a)` and `(q', b') = A (q, b)` entrywise, `det A = ±1`.
    Gl2 { matrix: [[i64; 2]; 2] },
    /// Exact division of `p, q` by `pq` and of `a, b` by `ab`.
    Divide {
        #[serde(with = "crate::bigjson")]
        pq: BigInt,
        #[serde(with = "crate::bigjson")]
        ab: BigInt,
    },
}

impl EquivalenceOp {
    pub fn shift(d: i64, c: i64) -> Self {
        EquivalenceOp::Shift {
            d: d.into(),
            c: c.into(),
        }
    }

    /// Vertex/edge relabeling induced by this op, `None` for `Divide`, which
    /// does not preserve local groups.
    pub fn relabeling(&self) -> Option<Relabeling> {
        match self {
            EquivalenceOp::Swap => Some(Relabeling {
                left: VertexId::Id,
                inverted: true,
                right: VertexId::Id,
            }),
            EquivalenceOp::Permute { sigma, tau } => Some(Relabeling {
                left: *tau,
                inverted: false,
                right: sigma.inverse(),
            }),
            EquivalenceOp::Shift { .. } | EquivalenceOp::Gl2 { .. } => Some(Relabeling::identity()),
            EquivalenceOp::Divide { .. } => None,
        }
    }
}

impl fmt::Display for EquivalenceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceOp::Swap => write!(f, "swap"),
            EquivalenceOp::Shift { d, c } => write!(f, "shift(d={d}, c={c})"),
            EquivalenceOp::Permute { sigma, tau } => write!(f, "permute(σ={sigma}, τ={tau})"),
            EquivalenceOp::Gl2 { matrix: m } => {
                write!(f, "gl2([[{}, {}], [{}, {}]])", m[0][0], m[0][1], m[1][0], m[1][1])
            }
            EquivalenceOp::Divide { pq, ab } => write!(f, "divide(pq={pq}, ab={ab})"),
        }
    }
}

/// Maps a vertex of transformed parameters to the vertex of the original
/// parameters carrying the same local group: `ρ ↦ left ∘ ρ^(±1) ∘ right`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Relabeling {
    left: VertexId,
    inverted: bool,
    right: VertexId,
}

impl Relabeling {
    pub fn identity() -> Self {
        Relabeling {
            left: VertexId::Id,
            inverted: false,
            right: VertexId::Id,
        }
    }

    pub fn vertex(&self, new: VertexId) -> VertexId {
        let r = if self.inverted { new.inverse() } else { new };
        self.left.compose(r).compose(self.right)
    }

    pub fn edge(&self, new: EdgeId) -> EdgeId {
        let ri = self.right.inverse();
        if self.inverted {
            EdgeId::new(ri.apply(new.j()), self.left.apply(new.i()))
        } else {
            EdgeId::new(ri.apply(new.i()), self.left.apply(new.j()))
        }
    }

    /// Relabeling for `t → first → second`, given the relabelings of each op.
    pub fn then(&self, second: &Relabeling) -> Relabeling {
        let (a1, b1) = (self.left, self.right);
        let (a2, b2) = (second.left, second.right);
        if self.inverted {
            Relabeling {
                left: a1.compose(b2.inverse()),
                inverted: !second.inverted,
                right: a2.inverse().compose(b1),
            }
        } else {
            Relabeling {
                left: a1.compose(a2),
                inverted: second.inverted,
                right: b2.compose(b1),
            }
        }
    }
}

fn map_pair(x: &Triple, y: &Triple, m: &[[BigInt; 2]; 2]) -> (Triple, Triple) {
    let f = |r: usize| [0, 1, 2].map(|i| &m[r][0] * &x[i] + &m[r][1] * &y[i]);
    (f(0), f(1))
}

pub fn apply_equivalence(t: &TorusParams, op: &EquivalenceOp) -> Result<TorusParams> {
    match op {
        EquivalenceOp::Swap => Ok(t.swap()),
        EquivalenceOp::Shift { d, c } => Ok(TorusParams {
            p: t.p.clone().map(|x| x + d),
            q: t.q.clone().map(|x| x + d),
            a: t.a.clone().map(|x| x + c),
            b: t.b.clone().map(|x| x + c),
        }),
        EquivalenceOp::Permute { sigma, tau } => {
            let s = |x: &Triple| [0, 1, 2].map(|i| x[sigma.apply(i)].clone());
            let u = |x: &Triple| [0, 1, 2].map(|i| x[tau.apply(i)].clone());
            Ok(TorusParams {
                p: s(&t.p),
                a: s(&t.a),
                q: u(&t.q),
                b: u(&t.b),
            })
        }
        EquivalenceOp::Gl2 { matrix } => {
            let m = mat2(*matrix);
            let det = det2(&m);
            if !det.abs().is_one() {
                return Err(Error::NonUnimodular { det });
            }
            let (p, a) = map_pair(&t.p, &t.a, &m);
            let (q, b) = map_pair(&t.q, &t.b, &m);
            Ok(TorusParams { p, q, a, b })
        }
        EquivalenceOp::Divide { pq, ab } => {
            if pq.is_zero() || ab.is_zero() {
                return Err(Error::InvalidArgument("division by zero".into()));
            }
            let div = |x: &Triple, k: &BigInt| -> Result<Triple> {
                if x.iter().all(|v| v.is_multiple_of(k)) {
                    Ok(x.clone().map(|v| v / k))
                } else {
                    Err(Error::InvalidArgument(format!("entries not divisible by {k}")))
                }
            };
            Ok(TorusParams {
                p: div(&t.p, pq)?,
                q: div(&t.q, pq)?,
                a: div(&t.a, ab)?,
                b: div(&t.b, ab)?,
            })
        }
    }
}

/// Parameters together with the ops that produced them from an input.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EquivalenceTrace {
    pub params: TorusParams,
    pub steps: Vec<EquivalenceOp>,
}

impl EquivalenceTrace {
    pub fn start(t: &TorusParams) -> Self {
        EquivalenceTrace {
            params: t.clone(),
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, op: EquivalenceOp) -> Result<()> {
        self.params = apply_equivalence(&self.params, &op)?;
        self.steps.push(op);
        Ok(())
    }

    /// Composite relabeling, `None` if a step was a `Divide`.
    pub fn relabeling(&self) -> Option<Relabeling> {
        self.steps
            .iter()
            .try_fold(Relabeling::identity(), |acc, op| Some(acc.then(&op.relabeling()?)))
    }
}

fn gl2_op(m: &Mat2) -> Result<EquivalenceOp> {
    use num_traits::ToPrimitive;
    let conv = |x: &BigInt| {
        x.to_i64()
            .ok_or_else(|| Error::InvalidArgument(format!("matrix entry {x} exceeds 64 bits")))
    };
    Ok(EquivalenceOp::Gl2 {
        matrix: [[conv(&m[0][0])?, conv(&m[0][1])?], [conv(&m[1][0])?, conv(&m[1][1])?]],
    })
}

pub(crate) fn gl2_step(m: &Mat2) -> Result<EquivalenceOp> {
    gl2_op(m)
}

/// Bezout coefficients `(x, y)` with `a x + b y = 1`; `None` unless coprime.
pub(crate) fn bezout(a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
    let e = a.extended_gcd(b);
    if e.gcd.is_one() {
        Some((e.x, e.y))
    } else if (-&e.gcd).is_one() {
        Some((-e.x, -e.y))
    } else {
        None
    }
}

/// Brings `t` to the shape `p = (c, d, e)`, `q = (c+d+e, 0, 0)`,
/// `b = (0, b2, b3)`.
pub fn normalize_cohomogeneity_form(t: &TorusParams) -> EquivalenceTrace {
    let mut tr = EquivalenceTrace::start(t);
    let dq = &t.q[1] - &t.q[2];
    if !dq.is_zero() {
        let db = &t.b[1] - &t.b[2];
        let g = dq.gcd(&db);
        let alpha = &dq / &g;
        let beta = -&db / &g;
        let (r, s) = bezout(&beta, &-&alpha).expect("coprime after dividing by the gcd");
        let m: Mat2 = [[beta, alpha], [s, r]];
        tr.push(gl2_op(&m).expect("normalizing matrix fits in i64"))
            .expect("unimodular");
    }
    let d = -tr.params.q[1].clone();
    let c = -tr.params.b[0].clone();
    if !d.is_zero() || !c.is_zero() {
        tr.push(EquivalenceOp::Shift { d, c }).expect("shift is total");
    }
    tr
}

pub fn is_normalized(t: &TorusParams) -> bool {
    t.q[1].is_zero() && t.q[2].is_zero() && t.b[0].is_zero()
}

/// Signed values `l_σ` (in `VertexId::ALL` order) for normalized input;
/// `|l_σ| = N_σ`.
pub fn fast_l_sigma(t: &TorusParams) -> Result<[BigInt; 6]> {
    if !is_normalized(t) {
        return Err(Error::NotNormalized);
    }
    let [c, d, e] = &t.p;
    let [a1, a2, _] = &t.a;
    let [_, b2, b3] = &t.b;
    let de = d + e;
    let ce = c + e;
    let l_id = -(&de * (a2 - b2)) - d * a1;
    let l_23 = -(&de * (a2 - b3)) - d * a1;
    let l_132 = c * a2 + &ce * (a1 - b3);
    let l_12 = c * a2 + &ce * (a1 - b2);
    let l_123 = c * (a2 - b3) - d * (a1 - b2);
    let l_13 = c * (a2 - b2) - d * (a1 - b3);
    Ok([l_id, l_12, l_13, l_23, l_123, l_132])
}

/// Equivalent parameters with trivial ineffective kernel and
/// `gcd(p, q) = gcd(a, b) = 1`.
pub fn effectivize(t: &TorusParams) -> Result<EquivalenceTrace> {
    if !is_almost_free(t) {
        return Err(Error::NotAlmostFree);
    }
    let mut tr = EquivalenceTrace::start(t);
    if is_effective(t) {
        return Ok(tr);
    }
    let gpq = gcd_list(t.p.iter().chain(&t.q));
    let gab = gcd_list(t.a.iter().chain(&t.b));
    if !gpq.is_one() || !gab.is_one() {
        tr.push(EquivalenceOp::Divide { pq: gpq, ab: gab })?;
    }
    if !is_effective(&tr.params) {
        let d = -tr.params.p[0].clone();
        let c = -tr.params.a[0].clone();
        if !d.is_zero() || !c.is_zero() {
            tr.push(EquivalenceOp::Shift { d, c })?;
        }
        let (pv, av) = kernel_vectors(&tr.params);
        let entries = pv.into_iter().zip(av).flat_map(|(x, y)| [x, y]).collect();
        let snf = smith_normal_form(&IntMatrix::new(6, 2, entries)?);
        let r = &snf.right;
        let bt: Mat2 = [
            [r.get(0, 0).clone(), r.get(1, 0).clone()],
            [r.get(0, 1).clone(), r.get(1, 1).clone()],
        ];
        tr.push(gl2_op(&bt)?)?;
        let [d1, d2] = [snf.diagonal[0].clone(), snf.diagonal[1].clone()];
        tr.push(EquivalenceOp::Divide { pq: d1, ab: d2 })?;
    }
    debug_assert!(is_effective(&tr.params));
    Ok(tr)
}
