//! Positive-curvature decisions from the planar triangles
//! `Δ_P = {(p_i, a_i)}` and `Δ_Q = {(q_i, b_i)}`, in exact integer geometry.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{bezout, gl2_step, EquivalenceTrace, Mat2, TorusParams};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PlanePoint {
    #[serde(with = "crate::bigjson")]
    pub x: BigInt,
    #[serde(with = "crate::bigjson")]
    pub y: BigInt,
}

impl PlanePoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        PlanePoint {
            x: x.into(),
            y: y.into(),
        }
    }

    fn sub(&self, o: &PlanePoint) -> (BigInt, BigInt) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    fn dot(&self, v: &(BigInt, BigInt)) -> BigInt {
        &self.x * &v.0 + &self.y * &v.1
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub type Triangle = [PlanePoint; 3];

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TrianglePair {
    pub p: Triangle,
    pub q: Triangle,
}

pub fn triangles(t: &TorusParams) -> TrianglePair {
    let mk = |x: &[BigInt; 3], y: &[BigInt; 3]| {
        [0, 1, 2].map(|i| PlanePoint {
            x: x[i].clone(),
            y: y[i].clone(),
        })
    };
    let pair = TrianglePair {
        p: mk(t.p(), t.a()),
        q: mk(t.q(), t.b()),
    };
    debug_assert_eq!(centroid_sum(&pair.p), centroid_sum(&pair.q));
    pair
}

/// Three times the centroid.
pub fn centroid_sum(tri: &Triangle) -> PlanePoint {
    PlanePoint {
        x: tri.iter().map(|p| &p.x).sum(),
        y: tri.iter().map(|p| &p.y).sum(),
    }
}

/// Sign of the determinant of `(b - a, c - a)`.
pub fn orient(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> i8 {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    match (ux * vy - uy * vx).sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// `c` lies in the bounding box of `a, b` (collinearity assumed by callers).
fn in_box(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> bool {
    a.x.clone().min(b.x.clone()) <= c.x
        && c.x <= a.x.clone().max(b.x.clone())
        && a.y.clone().min(b.y.clone()) <= c.y
        && c.y <= a.y.clone().max(b.y.clone())
}

/// Closed segments `[a, b]` and `[c, d]` meet; either may be a point.
pub fn segments_intersect(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint, d: &PlanePoint) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && in_box(a, b, c) && (a != b || a == c))
        || (o2 == 0 && in_box(a, b, d) && (a != b || a == d))
        || (o3 == 0 && in_box(c, d, a) && (c != d || c == a))
        || (o4 == 0 && in_box(c, d, b) && (c != d || c == b))
}

fn point_in_triangle(p: &PlanePoint, t: &Triangle) -> bool {
    let s = [
        orient(&t[0], &t[1], p),
        orient(&t[1], &t[2], p),
        orient(&t[2], &t[0], p),
    ];
    s.iter().all(|&x| x >= 0) || s.iter().all(|&x| x <= 0)
}

/// The two points spanning the hull of three collinear points.
fn collinear_extent(t: &Triangle) -> (&PlanePoint, &PlanePoint) {
    let d = |a: &PlanePoint, b: &PlanePoint| {
        let (x, y) = a.sub(b);
        &x * &x + &y * &y
    };
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let (i, j) = pairs
        .into_iter()
        .max_by_key(|&(i, j)| d(&t[i], &t[j]))
        .expect("three pairs");
    (&t[i], &t[j])
}

/// The closed segment `[s0, s1]` meets the closed convex hull of `tri`.
pub fn segment_intersects_triangle(s0: &PlanePoint, s1: &PlanePoint, tri: &Triangle) -> bool {
    if orient(&tri[0], &tri[1], &tri[2]) == 0 {
        let (u, v) = collinear_extent(tri);
        return segments_intersect(s0, s1, u, v);
    }
    point_in_triangle(s0, tri)
        || point_in_triangle(s1, tri)
        || (0..3).any(|k| segments_intersect(s0, s1, &tri[k], &tri[(k + 1) % 3]))
}

/// Edges of a triangle in witness order: (1,2), (1,3), (2,3), zero-based.
pub const EDGE_ORDER: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    P,
    Q,
}

/// An edge `L(X_i, X_j)` of one triangle, one-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct WitnessEdge {
    pub side: Side,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for WitnessEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::P => "P",
            Side::Q => "Q",
        };
        write!(f, "L({s}{}, {s}{})", self.i, self.j)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CurvatureVerdict {
    /// An edge of `Δ_Q` misses `Δ_P`.
    PositiveAsGiven {
        witness: WitnessEdge,
    },
    /// Only after swapping: an edge of `Δ_P` misses `Δ_Q`.
    PositiveAfterSwap {
        witness: WitnessEdge,
    },
    NotPositive,
}

impl CurvatureVerdict {
    pub fn is_positive(&self) -> bool {
        !matches!(self, CurvatureVerdict::NotPositive)
    }

    pub fn witness(&self) -> Option<WitnessEdge> {
        match self {
            CurvatureVerdict::PositiveAsGiven { witness } | CurvatureVerdict::PositiveAfterSwap { witness } => {
                Some(*witness)
            }
            CurvatureVerdict::NotPositive => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CurvatureVerdict::PositiveAsGiven { .. } => "positive_as_given",
            CurvatureVerdict::PositiveAfterSwap { .. } => "positive_after_swap",
            CurvatureVerdict::NotPositive => "not_positive",
        }
    }
}

impl fmt::Display for CurvatureVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureVerdict::PositiveAsGiven { witness } => write!(f, "positive as given, witness {witness}"),
            CurvatureVerdict::PositiveAfterSwap { witness } => {
                write!(f, "positive after swap, witness {witness}")
            }
            CurvatureVerdict::NotPositive => write!(f, "not positive"),
        }
    }
}

type MissFn<'a> = &'a dyn Fn(&PlanePoint, &PlanePoint, &Triangle, &Triangle) -> bool;

/// First edge of `moving` (in `EDGE_ORDER`) whose segment misses `fixed`.
fn first_missing_edge(moving: &Triangle, fixed: &Triangle, miss: MissFn) -> Option<(usize, usize)> {
    EDGE_ORDER
        .into_iter()
        .find(|&(i, j)| miss(&moving[i], &moving[j], fixed, moving))
}

fn intersection_miss(a: &PlanePoint, b: &PlanePoint, tri: &Triangle, _: &Triangle) -> bool {
    !segment_intersects_triangle(a, b, tri)
}

fn require_almost_free(t: &TorusParams) -> Result<()> {
    if t.is_almost_free() {
        Ok(())
    } else {
        Err(Error::NotAlmostFree)
    }
}

/// First edge of `Δ_Q` (in `EDGE_ORDER`) that misses `Δ_P`, one-based.
pub fn positive_given_orientation(t: &TorusParams) -> Result<Option<WitnessEdge>> {
    require_almost_free(t)?;
    let tp = triangles(t);
    let w = first_missing_edge(&tp.q, &tp.p, &intersection_miss);
    Ok(w.map(|(i, j)| WitnessEdge {
        side: Side::Q,
        i: i + 1,
        j: j + 1,
    }))
}

fn decide(pair: &TrianglePair, miss: MissFn) -> CurvatureVerdict {
    if let Some((i, j)) = first_missing_edge(&pair.q, &pair.p, miss) {
        return CurvatureVerdict::PositiveAsGiven {
            witness: WitnessEdge {
                side: Side::Q,
                i: i + 1,
                j: j + 1,
            },
        };
    }
    if let Some((i, j)) = first_missing_edge(&pair.p, &pair.q, miss) {
        return CurvatureVerdict::PositiveAfterSwap {
            witness: WitnessEdge {
                side: Side::P,
                i: i + 1,
                j: j + 1,
            },
        };
    }
    CurvatureVerdict::NotPositive
}

/// Segment-intersection decision on bare triangles, with no condition on
/// the action they come from.
pub fn triangle_verdict(pair: &TrianglePair) -> CurvatureVerdict {
    decide(pair, &intersection_miss)
}

/// Projection-based decision on bare triangles.
pub fn triangle_sat_verdict(pair: &TrianglePair) -> CurvatureVerdict {
    decide(pair, &segment_separated_by_axis)
}

/// Tries the given orientation, then the swapped one.
pub fn admits_positive_curvature(t: &TorusParams) -> Result<CurvatureVerdict> {
    require_almost_free(t)?;
    Ok(triangle_verdict(&triangles(t)))
}

/// Candidate separating axes for the segment `[s0, s1]` against `tri`:
/// normals and directions of every edge of both triangles and of the
/// segment, plus all point differences. Zero vectors are skipped.
fn candidate_axes(s0: &PlanePoint, s1: &PlanePoint, tri: &Triangle, extra: &Triangle) -> Vec<(BigInt, BigInt)> {
    let pts: Vec<&PlanePoint> = [s0, s1].into_iter().chain(tri.iter()).chain(extra.iter()).collect();
    let mut axes = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (dx, dy) = pts[i].sub(pts[j]);
            if dx.is_zero() && dy.is_zero() {
                continue;
            }
            axes.push((-&dy, dx.clone()));
            axes.push((dx, dy));
        }
    }
    axes
}

fn projections_disjoint(axis: &(BigInt, BigInt), a: &[&PlanePoint], b: &[&PlanePoint]) -> bool {
    let range = |pts: &[&PlanePoint]| {
        let vals: Vec<BigInt> = pts.iter().map(|p| p.dot(axis)).collect();
        let lo = vals.iter().min().expect("nonempty").clone();
        let hi = vals.iter().max().expect("nonempty").clone();
        (lo, hi)
    };
    let (alo, ahi) = range(a);
    let (blo, bhi) = range(b);
    ahi < blo || bhi < alo
}

/// Separating-axis test: the segment misses the triangle iff some
/// candidate axis has strictly disjoint projection intervals.
pub fn segment_separated_by_axis(s0: &PlanePoint, s1: &PlanePoint, tri: &Triangle, other: &Triangle) -> bool {
    let seg = [s0, s1];
    let t: Vec<&PlanePoint> = tri.iter().collect();
    candidate_axes(s0, s1, tri, other)
        .iter()
        .any(|ax| projections_disjoint(ax, &seg, &t))
}

/// Curvature decision by projections alone.
pub fn sat_verdict(t: &TorusParams) -> Result<CurvatureVerdict> {
    require_almost_free(t)?;
    Ok(triangle_sat_verdict(&triangles(t)))
}

/// Runs the projection-based decision and reports whether it matches
/// `admits_positive_curvature` (verdict and witness).
pub fn separating_axis_check(t: &TorusParams) -> Result<bool> {
    Ok(sat_verdict(t)? == admits_positive_curvature(t)?)
}

/// The segment side and the triangle side of a positive verdict.
fn witness_sides(pair: &TrianglePair, w: &WitnessEdge) -> (PlanePoint, PlanePoint, Triangle) {
    let (moving, fixed) = match w.side {
        Side::Q => (&pair.q, &pair.p),
        Side::P => (&pair.p, &pair.q),
    };
    (moving[w.i - 1].clone(), moving[w.j - 1].clone(), fixed.clone())
}

/// A line through two distinct points separating the witness segment from
/// the other triangle: the set not on the line lies strictly on one side,
/// the line's own polygon on the closed other side.
fn separating_line(s0: &PlanePoint, s1: &PlanePoint, tri: &Triangle) -> Option<(PlanePoint, PlanePoint)> {
    if s0 != s1 {
        let signs: Vec<i8> = tri.iter().map(|z| orient(s0, s1, z)).collect();
        if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
            return Some((s0.clone(), s1.clone()));
        }
    }
    for (i, j) in EDGE_ORDER {
        let (x, y) = (&tri[i], &tri[j]);
        if x == y {
            continue;
        }
        let k = 3 - i - j;
        let a = orient(x, y, s0);
        let b = orient(x, y, s1);
        let c = orient(x, y, &tri[k]);
        if a != 0 && a == b && c != a {
            return Some((x.clone(), y.clone()));
        }
    }
    None
}

/// The parameters with a line through two of the six points as separating
/// line, made vertical by a unimodular change of `(p, a)` and `(q, b)`.
/// Afterwards two `p`- or two `q`-entries coincide.
pub fn reduce_to_cohomogeneity_two(t: &TorusParams) -> Result<EquivalenceTrace> {
    let verdict = admits_positive_curvature(t)?;
    let w = verdict.witness().ok_or(Error::NoWitness)?;
    let pair = triangles(t);
    let (s0, s1, tri) = witness_sides(&pair, &w);
    let (x, y) = separating_line(&s0, &s1, &tri).ok_or(Error::NoWitness)?;
    let (dx, dy) = x.sub(&y);
    let g = dx.gcd(&dy);
    let (mut v1, mut v2) = (&dx / &g, &dy / &g);
    if v2.is_negative() || (v2.is_zero() && v1.is_negative()) {
        v1 = -v1;
        v2 = -v2;
    }
    let (m, n) = bezout(&v1, &v2).expect("primitive direction");
    let a: Mat2 = [[v2.clone(), -v1.clone()], [m, n]];
    let mut tr = EquivalenceTrace::start(t);
    let op = gl2_step(&a)?;
    if op
        != (crate::params::EquivalenceOp::Gl2 {
            matrix: [[1, 0], [0, 1]],
        })
    {
        tr.push(op)?;
    }
    Ok(tr)
}

/// `E^7` interval condition in the orientation of the verdict: all entries of
/// the second triple lie outside `[min, max]` of the first.
pub fn interval_condition(first: &[BigInt; 3], second: &[BigInt; 3]) -> bool {
    let lo = first.iter().min().expect("three");
    let hi = first.iter().max().expect("three");
    second.iter().all(|x| x < lo || x > hi)
}

/// Two coincident points in one triangle.
pub fn has_degenerate_triangle(t: &TorusParams) -> bool {
    let pair = triangles(t);
    EDGE_ORDER
        .iter()
        .any(|&(i, j)| pair.p[i] == pair.p[j] || pair.q[i] == pair.q[j])
}

/// SVG plot of both triangles, witness edge in red. Coordinates are exact
/// integers scaled into a fixed viewport.
pub fn triangles_svg(pair: &TrianglePair, verdict: Option<&CurvatureVerdict>) -> String {
    let pts: Vec<&PlanePoint> = pair.p.iter().chain(pair.q.iter()).collect();
    let f = |v: &BigInt| v.to_f64().unwrap_or(0.0);
    let xs: Vec<f64> = pts.iter().map(|p| f(&p.x)).collect();
    let ys: Vec<f64> = pts.iter().map(|p| f(&p.y)).collect();
    let (xmin, xmax) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let (ymin, ymax) = (
        ys.iter().cloned().fold(f64::INFINITY, f64::min),
        ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let span = (xmax - xmin).max(ymax - ymin).max(1.0);
    let (size, margin) = (400.0, 40.0);
    let scale = (size - 2.0 * margin) / span;
    let sx = |x: f64| margin + (x - xmin) * scale;
    let sy = |y: f64| size - margin - (y - ymin) * scale;
    let at = |p: &PlanePoint| (sx(f(&p.x)), sy(f(&p.y)));

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    s.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (tri, color, name) in [(&pair.p, "#1f4fd8", "P"), (&pair.q, "#1a9a3a", "Q")] {
        let poly = tri.iter().map(|p| {
            let (x, y) = at(p);
            format!("{x:.2},{y:.2}")
        });
        let _ = writeln!(
            s,
            "  <polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\" stroke-width=\"2\"/>",
            poly.collect::<Vec<_>>().join(" ")
        );
        for (k, p) in tri.iter().enumerate() {
            let (x, y) = at(p);
            let _ = writeln!(s, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"/>");
            let _ = writeln!(
                s,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{name}{} {}</text>",
                x + 6.0,
                y - 6.0,
                k + 1,
                p
            );
        }
    }
    if let Some(w) = verdict.and_then(|v| v.witness()) {
        let (a, b, _) = witness_sides(pair, &w);
        let ((x1, y1), (x2, y2)) = (at(&a), at(&b));
        let _ = writeln!(
            s,
            "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#d62728\" stroke-width=\"4\"><title>{w}</title></line>"
        );
    }
    if let Some(v) = verdict {
        let _ = writeln!(
            s,
            "  <text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{v}</text>"
        );
    }
    s.push_str("</svg>\n");
    s
}
