//! Classified parameter families bundled with their predicted invariants.
//!
//! Every prediction is recomputed by the engine in [`verify_fixture`];
//! nothing here is trusted on its own.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology_profile, localization_report, DEFAULT_STAB_WINDOW};
use crate::curvature::{admits_positive_curvature, has_degenerate_triangle};
use crate::error::{Error, Result};
use crate::intlinalg::AbelianGroup;
use crate::params::{EdgeId, TorusParams, VertexId};
use crate::singular::{singular_graph, EdgeClass, SingularGraph};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Singular set in one edge, no positive curvature.
    CorNonnegact,
    /// Singular set one smooth sphere with cyclic group.
    SmoothSphere,
    /// Sphere family with two singular endpoints.
    ExampleTwoSingular,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::CorNonnegact, Family::SmoothSphere, Family::ExampleTwoSingular];

    pub fn name(self) -> &'static str {
        match self {
            Family::CorNonnegact => "cor-nonnegact",
            Family::SmoothSphere => "smooth-sphere",
            Family::ExampleTwoSingular => "example-two-singular",
        }
    }

    pub fn cases(self) -> &'static [u8] {
        match self {
            Family::CorNonnegact => &[1, 2, 3, 4],
            Family::SmoothSphere => &[1, 2, 3, 4, 5, 6],
            Family::ExampleTwoSingular => &[1],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureClass {
    Positive,
    NotPositive,
}

/// Predicted low and stable cohomology.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CohomologyPattern {
    pub tag: String,
    pub h6: AbelianGroup,
    /// Expected in every even degree from 8 up to the cap.
    pub stable: AbelianGroup,
}

impl CohomologyPattern {
    /// `H^6 = Z + Z_k`, stable `Z_k^2`.
    pub fn branch_one(k: &BigInt) -> Self {
        let k = k.abs();
        CohomologyPattern {
            tag: "branch-one".into(),
            h6: AbelianGroup::from_cyclic_factors(1, [k.clone()]),
            stable: AbelianGroup::from_cyclic_factors(0, [k.clone(), k]),
        }
    }

    /// `H^6 = Z + Z_gcd(2,k)`, stable `Z_gcd(2,k) + Z_(k^2/gcd(2,k))`.
    pub fn branch_two(k: &BigInt) -> Self {
        let g = k.gcd(&BigInt::from(2));
        CohomologyPattern {
            tag: "branch-two".into(),
            h6: AbelianGroup::from_cyclic_factors(1, [g.clone()]),
            stable: AbelianGroup::from_cyclic_factors(0, [g.clone(), k * k / &g]),
        }
    }

    /// A single singular point `Z_k`: `H^6 = Z`, stable `Z_k`.
    pub fn single_point(k: &BigInt) -> Self {
        CohomologyPattern {
            tag: "single-point".into(),
            h6: AbelianGroup::free(1),
            stable: AbelianGroup::cyclic(k.clone()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Predictions {
    /// Compared in absolute value with `N_Id`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub l_id: Option<BigInt>,
    /// Compared in absolute value with `N_(23)`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub l_23: Option<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub n11: Option<BigInt>,
    /// The singular set is one point with local group `Z_k`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub single_point: Option<BigInt>,
    /// The singular set is one smooth sphere with group `Z_|k|` (empty if `|k| = 1`).
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub smooth_sphere: Option<BigInt>,
    /// Unordered local-group orders at the endpoints of the singular edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint_orders: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub stable_order: Option<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyPattern>,
}

mod opt_big {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => crate::bigjson::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "crate::bigjson")] BigInt);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FamilyFixture {
    pub family: Family,
    pub case: u8,
    /// Free parameters by name, in constructor order.
    pub free: Vec<(String, i64)>,
    pub params: TorusParams,
    pub predictions: Predictions,
    /// Predictions are recorded but mismatches are not failures.
    pub flagged: bool,
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn side(msg: impl Into<String>) -> Error {
    Error::SideConditionViolated(msg.into())
}

fn exact_div(n: i64, d: i64, what: &str) -> Result<i64> {
    if d == 0 {
        return Err(side(format!("{what}: division by zero")));
    }
    if n % d != 0 {
        return Err(side(format!("{what}: {d} does not divide {n}")));
    }
    Ok(n / d)
}

fn params(p: [i64; 3], q: [i64; 3], a: [i64; 3], b: [i64; 3]) -> Result<TorusParams> {
    TorusParams::from_i64(p, q, a, b).map_err(|e| side(format!("displayed parameters invalid: {e}")))
}

fn curvature_rule(t: &TorusParams) -> CurvatureClass {
    if has_degenerate_triangle(t) {
        CurvatureClass::Positive
    } else {
        CurvatureClass::NotPositive
    }
}

fn fixture(
    family: Family,
    case: u8,
    free: &[(&str, i64)],
    params: TorusParams,
    predictions: Predictions,
) -> FamilyFixture {
    FamilyFixture {
        family,
        case,
        free: free.iter().map(|&(n, v)| (n.to_string(), v)).collect(),
        params,
        predictions,
        flagged: false,
    }
}

/// Free parameters of [`cor_nonnegact`], by case:
/// 1: `[b2, b3]`; 2: `[x, y, l, b2]`; 3: `[c, a2, x]`; 4: `[a1, a2, x, l]`.
///
/// Curvature prediction: not positive, except where one triangle has two
/// coincident vertices, which forces positive curvature in one orientation.
pub fn cor_nonnegact(case: u8, v: &[i64]) -> Result<FamilyFixture> {
    let fam = Family::CorNonnegact;
    let want = |n: usize| -> Result<()> {
        if v.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "case {case} takes {n} parameters, got {}",
                v.len()
            )))
        }
    };
    match case {
        1 => {
            want(2)?;
            let (b2, b3) = (v[0], v[1]);
            let t = params([1, -1, -1], [-1, 0, 0], [b2 + b3, 1, -1], [0, b2, b3])?;
            let d = b2 - b3;
            let single = match d.abs() {
                1 => Some(3),
                3 => Some(5),
                _ => None,
            };
            let pred = Predictions {
                l_id: Some(big(2 + b3 - b2)),
                l_23: Some(big(2 + b2 - b3)),
                n11: Some(big(d).gcd(&big(2))),
                single_point: single.map(big),
                curvature: Some(curvature_rule(&t)),
                cohomology: single.map(|k| CohomologyPattern::single_point(&big(k))),
                ..Default::default()
            };
            Ok(fixture(fam, 1, &[("b2", b2), ("b3", b3)], t, pred))
        }
        2 => {
            want(4)?;
            let (x, y, l, b2) = (v[0], v[1], v[2], v[3]);
            if l.abs() != 1 {
                return Err(side("l must be ±1"));
            }
            let main = (x, y) == (-1, -2 * l) || (x, y) == (-2, -l);
            let sub = l == -1 && ((x, y) == (1, 2) || (x, y) == (-2, 1));
            if !main && !sub {
                return Err(side(format!("(x, y) = ({x}, {y}) not allowed for l = {l}")));
            }
            let a1 = exact_div(b2 * (x - 2) + y + 1 - l, x - 1, "a1")?;
            let a3 = exact_div(b2 * (x - 2) - l, x - 1, "a3")?;
            let t = params([1, x - 1, -1], [x - 1, 0, 0], [a1, 1, a3], [0, b2, b2 - y])?;
            let pred = Predictions {
                l_id: Some(big(1 + l - x - y)),
                l_23: Some(big(1 + l + y - x)),
                n11: Some(big(1)),
                single_point: sub.then(|| big(3)),
                curvature: Some(curvature_rule(&t)),
                ..Default::default()
            };
            let mut f = fixture(fam, 2, &[("x", x), ("y", y), ("l", l), ("b2", b2)], t, pred);
            f.flagged = true;
            Ok(f)
        }
        3 => {
            want(3)?;
            let (c, a2, x) = (v[0], v[1], v[2]);
            if c == 0 || a2 == 0 {
                return Err(side("c and a2 must be nonzero"));
            }
            if ![1, -1, 2, -2].contains(&x) {
                return Err(side("x must be ±1 or ±2"));
            }
            let a1 = exact_div(-2 * c * a2, x, "a1")?;
            let b2 = exact_div(-c * a2 + 1, x, "b2")?;
            let b3 = exact_div(-c * a2 - 1, x, "b3")?;
            let two_c_x = exact_div(2 * c, x, "2c/x")?;
            let t = params([c, -x - c, x - c], [-c, 0, 0], [a1, a2, -a2], [0, b2, b3])?;
            let pred = Predictions {
                l_id: Some(big(-two_c_x)),
                l_23: Some(big(two_c_x)),
                n11: Some(big(two_c_x).gcd(&big(2))),
                curvature: Some(curvature_rule(&t)),
                ..Default::default()
            };
            Ok(fixture(fam, 3, &[("c", c), ("a2", a2), ("x", x)], t, pred))
        }
        4 => {
            want(4)?;
            let (a1, a2, x, l) = (v[0], v[1], v[2], v[3]);
            if x.abs() != 1 || l.abs() != 1 {
                return Err(side("x and l must be ±1"));
            }
            if (l, a1) == (1, 2 * a2) {
                return Err(side("(l, a1) = (1, 2 a2) excluded"));
            }
            if l == -1 && (x * a1).abs() == 1 {
                return Err(side("(l, x a1) = (-1, ±1) excluded"));
            }
            let t = params(
                [0, l * x, x],
                [x * (l + 1), 0, 0],
                [a1, a2, a1 - a2],
                [0, a1 + x, a1 - x],
            )?;
            let m = a1 - (l + 1) * a2;
            let delta = a1 - 2 * a2;
            let single = if l == 1 {
                match delta.abs() {
                    1 => Some(3),
                    3 => Some(5),
                    _ => None,
                }
            } else {
                None
            };
            let pred = Predictions {
                l_id: Some(big(x * m + 1 + l)),
                l_23: Some(big(x * m - (1 + l))),
                n11: Some(big(m).gcd(&big(2))),
                single_point: single.map(big),
                curvature: Some(curvature_rule(&t)),
                cohomology: single.map(|k| CohomologyPattern::single_point(&big(k))),
                ..Default::default()
            };
            Ok(fixture(fam, 4, &[("a1", a1), ("a2", a2), ("x", x), ("l", l)], t, pred))
        }
        _ => Err(Error::InvalidArgument(format!("case {case} out of range 1..=4"))),
    }
}

/// Free parameters of [`smooth_sphere_family`], by case:
/// 1, 3: `[s, u]`; 2: `[m, r, c, e]`; 4: `[r, c, e, m]`; 5: `[a2]`; 6: `[a2, x, a1]`.
pub fn smooth_sphere_family(case: u8, v: &[i64]) -> Result<FamilyFixture> {
    let fam = Family::SmoothSphere;
    let want = |n: usize| -> Result<()> {
        if v.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "case {case} takes {n} parameters, got {}",
                v.len()
            )))
        }
    };
    let (t, k, free): (TorusParams, i64, Vec<(&str, i64)>) = match case {
        1 => {
            want(2)?;
            let (s, u) = (v[0], v[1]);
            (
                params([0, 1, -1], [0, 0, 0], [u - 1, s, u + 1 - s], [0, u, u])?,
                1 - u,
                vec![("s", s), ("u", u)],
            )
        }
        2 => {
            want(4)?;
            let (m, r, c, e) = (v[0], v[1], v[2], v[3]);
            let f = exact_div(e * m + 1, c, "(em+1)/c")?;
            let t = params(
                [c, c * r - e, e],
                [c * (r + 1), 0, 0],
                [m * r, m + f, m * (r + 1) - f],
                [0, m * (r + 1), m * (r + 1)],
            )?;
            (t, r, vec![("m", m), ("r", r), ("c", c), ("e", e)])
        }
        3 => {
            want(2)?;
            let (s, u) = (v[0], v[1]);
            (
                params([0, 1, 1], [2, 0, 0], [u + 1, s, u - 1 - s], [0, u, u])?,
                u - 2 * s - 1,
                vec![("s", s), ("u", u)],
            )
        }
        4 => {
            want(4)?;
            let (r, c, e, m) = (v[0], v[1], v[2], v[3]);
            let f = exact_div(1 - e * m, c, "(1-em)/c")?;
            let b = 2 * f + m * (r - 1);
            let t = params(
                [c, e - c * r, e],
                [2 * e + c * (1 - r), 0, 0],
                [2 * f + m * r, f - m, f + m * (r - 1)],
                [0, b, b],
            )?;
            (t, r, vec![("r", r), ("c", c), ("e", e), ("m", m)])
        }
        5 => {
            want(1)?;
            let a2 = v[0];
            (
                params([1, -2, 0], [-1, 0, 0], [-2 * a2, a2, -a2], [0, 1 - a2, -1 - a2])?,
                2,
                vec![("a2", a2)],
            )
        }
        6 => {
            want(3)?;
            let (a2, x, a1) = (v[0], v[1], v[2]);
            if x.abs() != 1 || a1.abs() != 2 {
                return Err(side("|x| = 1 and |a1| = 2 required"));
            }
            (
                params([0, -x, x], [0, 0, 0], [a1, a2, a1 - a2], [0, a1 + x, a1 - x])?,
                2,
                vec![("a2", a2), ("x", x), ("a1", a1)],
            )
        }
        _ => return Err(Error::InvalidArgument(format!("case {case} out of range 1..=6"))),
    };
    let kb = big(k);
    let cohomology = match case {
        3 | 4 => CohomologyPattern::branch_two(&kb),
        _ => CohomologyPattern::branch_one(&kb),
    };
    let pred = Predictions {
        smooth_sphere: Some(kb.abs()),
        stable_order: Some(&kb * &kb),
        curvature: Some(if case <= 4 {
            CurvatureClass::Positive
        } else {
            CurvatureClass::NotPositive
        }),
        cohomology: Some(cohomology),
        ..Default::default()
    };
    Ok(fixture(fam, case, &free, t, pred))
}

/// Sphere family with endpoint groups of orders `|1+k+l|`, `|1-k+l|`.
pub fn example_two_singular(k: i64, u: i64, l: i64) -> Result<FamilyFixture> {
    if k.abs() == 2 {
        return Err(side("k = ±2 excluded"));
    }
    if l.abs() != 1 {
        return Err(side("l must be ±1"));
    }
    let t = params([1, -1, -1], [-1, 0, 0], [l - 1 + 2 * u + k, 1, -l], [0, u, u + k])?;
    let kb = big(k);
    let order = (&kb * &kb - big((1 + l) * (1 + l))).abs();
    let g = kb.gcd(&big(2));
    let mut ends = [(1 + k + l).unsigned_abs(), (1 - k + l).unsigned_abs()];
    ends.sort_unstable();
    let pred = Predictions {
        endpoint_orders: Some(ends),
        stable_order: Some(order.clone()),
        curvature: Some(if l == 1 && k != 0 {
            CurvatureClass::NotPositive
        } else {
            CurvatureClass::Positive
        }),
        cohomology: Some(CohomologyPattern {
            tag: "example-two-singular".into(),
            h6: AbelianGroup::from_cyclic_factors(1, [g.clone()]),
            stable: AbelianGroup::from_cyclic_factors(0, [g.clone(), order / &g]),
        }),
        ..Default::default()
    };
    Ok(fixture(
        Family::ExampleTwoSingular,
        1,
        &[("k", k), ("u", u), ("l", l)],
        t,
        pred,
    ))
}

/// Names of the free parameters of a family case, in constructor order.
pub fn param_names(family: Family, case: u8) -> &'static [&'static str] {
    match (family, case) {
        (Family::CorNonnegact, 1) => &["b2", "b3"],
        (Family::CorNonnegact, 2) => &["x", "y", "l", "b2"],
        (Family::CorNonnegact, 3) => &["c", "a2", "x"],
        (Family::CorNonnegact, _) => &["a1", "a2", "x", "l"],
        (Family::SmoothSphere, 1 | 3) => &["s", "u"],
        (Family::SmoothSphere, 2) => &["m", "r", "c", "e"],
        (Family::SmoothSphere, 4) => &["r", "c", "e", "m"],
        (Family::SmoothSphere, 5) => &["a2"],
        (Family::SmoothSphere, _) => &["a2", "x", "a1"],
        (Family::ExampleTwoSingular, _) => &["k", "u", "l"],
    }
}

pub fn build(family: Family, case: u8, v: &[i64]) -> Result<FamilyFixture> {
    match family {
        Family::CorNonnegact => cor_nonnegact(case, v),
        Family::SmoothSphere => smooth_sphere_family(case, v),
        Family::ExampleTwoSingular => {
            if v.len() != 3 {
                return Err(Error::InvalidArgument("example-two-singular takes [k, u, l]".into()));
            }
            example_two_singular(v[0], v[1], v[2])
        }
    }
}

/// All fixtures of one case with every free parameter in `[-range, range]`,
/// except those pinned in `fixed`. Parameter choices that violate a side
/// condition are counted, not kept.
pub fn grid(family: Family, case: u8, range: i64, fixed: &[(String, i64)]) -> Result<(Vec<FamilyFixture>, usize)> {
    let names = param_names(family, case);
    if let Some((n, _)) = fixed.iter().find(|(n, _)| !names.contains(&n.as_str())) {
        return Err(Error::InvalidArgument(format!(
            "{family} case {case} has no parameter `{n}`"
        )));
    }
    let axes: Vec<Vec<i64>> = names
        .iter()
        .map(|n| match fixed.iter().find(|(m, _)| m == n) {
            Some(&(_, v)) => vec![v],
            None => (-range..=range).collect(),
        })
        .collect();
    let mut out = Vec::new();
    let mut violations = 0;
    for v in axes.into_iter().multi_cartesian_product() {
        match build(family, case, &v) {
            Ok(f) => out.push(f),
            Err(Error::InvalidArgument(e)) => return Err(Error::InvalidArgument(e)),
            Err(_) => violations += 1,
        }
    }
    Ok((out, violations))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub predicted: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum FixtureStatus {
    Pass,
    Fail,
    /// Some flagged prediction differs from the engine.
    Flagged,
    Skipped(String),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FixtureReport {
    pub fixture: FamilyFixture,
    pub checks: Vec<Check>,
    pub status: FixtureStatus,
}

fn check(name: &str, predicted: impl fmt::Display, computed: impl fmt::Display, ok: bool) -> Check {
    Check {
        name: name.into(),
        predicted: predicted.to_string(),
        computed: computed.to_string(),
        ok,
    }
}

fn sigma_summary(g: &SingularGraph) -> String {
    let v: Vec<String> = g
        .singular_vertices()
        .iter()
        .map(|&x| format!("{x}:{}", g.vertex(x).isotropy.group.compact()))
        .collect();
    let e: Vec<String> = g
        .singular_edges()
        .iter()
        .map(|&x| format!("{x}:{}:{:?}", g.edge(x).isotropy.group.compact(), g.edge(x).class))
        .collect();
    format!("vertices [{}] edges [{}]", v.join(", "), e.join(", "))
}

/// Recomputes every prediction of `f` with cohomology up to `max_degree`.
pub fn verify_fixture(f: &FamilyFixture, max_degree: usize) -> FixtureReport {
    let t = &f.params;
    let skip = |why: &str| FixtureReport {
        fixture: f.clone(),
        checks: Vec::new(),
        status: FixtureStatus::Skipped(why.into()),
    };
    if !t.is_almost_free() {
        return skip("not almost free");
    }
    let g = match singular_graph(t) {
        Ok(g) => g,
        Err(e) => return skip(&e.to_string()),
    };
    let p = &f.predictions;
    let mut checks = Vec::new();
    let n = |v: VertexId| t.vertex_isotropy(v).n;
    if let Some(l) = &p.l_id {
        checks.push(check(
            "|l_Id| = N_Id",
            l.abs(),
            n(VertexId::Id),
            l.abs() == n(VertexId::Id),
        ));
    }
    if let Some(l) = &p.l_23 {
        checks.push(check(
            "|l_(23)| = N_(23)",
            l.abs(),
            n(VertexId::T23),
            l.abs() == n(VertexId::T23),
        ));
    }
    if let Some(x) = &p.n11 {
        let got = t.edge_isotropy(EdgeId::new(0, 0)).n;
        checks.push(check("N_11", x, &got, *x == got));
    }
    if let Some(k) = &p.single_point {
        let sv = g.singular_vertices();
        let ok = g.singular_edges().is_empty()
            && sv.len() == 1
            && g.vertex(sv[0]).isotropy.group == AbelianGroup::cyclic(k.clone());
        checks.push(check("single singular point", format!("Z{k}"), sigma_summary(&g), ok));
    }
    if let Some(k) = &p.smooth_sphere {
        let ok = if *k <= BigInt::from(1) {
            g.sigma_is_empty()
        } else {
            let se = g.singular_edges();
            se.len() == 1 && {
                let r = g.edge(se[0]);
                r.class == EdgeClass::SmoothSphere
                    && r.isotropy.group == AbelianGroup::cyclic(k.clone())
                    && g.singular_vertices().iter().all(|v| r.endpoints.contains(v))
            }
        };
        checks.push(check("smooth sphere", format!("Z{k}"), sigma_summary(&g), ok));
    }
    if let Some(ends) = &p.endpoint_orders {
        let got = g.containing_edge().map(|e| {
            let mut o = e
                .endpoints()
                .map(|v| n(v).to_string().parse::<u64>().unwrap_or(u64::MAX));
            o.sort_unstable();
            o
        });
        let shown = match &got {
            Ok(o) => format!("{o:?}"),
            Err(e) => e.to_string(),
        };
        checks.push(check(
            "endpoint orders",
            format!("{ends:?}"),
            shown,
            got.as_ref() == Ok(ends),
        ));
    }
    if let Some(class) = &p.curvature {
        match admits_positive_curvature(t) {
            Ok(v) => {
                let got = if v.is_positive() {
                    CurvatureClass::Positive
                } else {
                    CurvatureClass::NotPositive
                };
                checks.push(check("curvature", format!("{class:?}"), v.label(), got == *class));
            }
            Err(e) => checks.push(check("curvature", format!("{class:?}"), e, false)),
        }
    }
    if p.cohomology.is_some() || p.stable_order.is_some() {
        match cohomology_profile(t, max_degree, DEFAULT_STAB_WINDOW) {
            Ok(prof) => {
                if let Some(c) = &p.cohomology {
                    checks.push(check("H^6", &c.h6, &prof.groups[6], prof.groups[6] == c.h6));
                    let bad = (8..=max_degree).step_by(2).find(|&d| prof.groups[d] != c.stable);
                    let shown = match bad {
                        Some(d) => format!("H^{d} = {}", prof.groups[d]),
                        None => c.stable.to_string(),
                    };
                    checks.push(check(&format!("H^8..H^{max_degree}"), &c.stable, shown, bad.is_none()));
                }
                if let Some(o) = &p.stable_order {
                    let got = prof.groups[max_degree].order();
                    let shown = got.as_ref().map_or("infinite".to_string(), BigInt::to_string);
                    checks.push(check("stable order", o, shown, got.as_ref() == Some(o)));
                }
            }
            Err(e) => checks.push(check("cohomology", "profile", e, false)),
        }
    }
    if p.smooth_sphere.is_some() || p.single_point.is_some() || p.endpoint_orders.is_some() {
        match localization_report(t, max_degree) {
            Ok(r) => {
                let shown = r
                    .first_mismatch
                    .map_or("holds".to_string(), |d| format!("fails in degree {d}"));
                checks.push(check("localization", "holds", shown, r.holds));
            }
            Err(e) => checks.push(check("localization", "holds", e, false)),
        }
    }
    let all_ok = checks.iter().all(|c| c.ok);
    let status = match (all_ok, f.flagged) {
        (true, _) => FixtureStatus::Pass,
        (false, true) => FixtureStatus::Flagged,
        (false, false) => FixtureStatus::Fail,
    };
    FixtureReport {
        fixture: f.clone(),
        checks,
        status,
    }
}

/// `H^8` order is never a perfect square.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}
