//! Orbifold cohomology as graded cokernels of
//! `Z[s,t] / (σ_2(sp + ta) − σ_2(sq + tb), σ_3(sp + ta) − σ_3(sq + tb))`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{cokernel, AbelianGroup, IntMatrix};
use crate::params::{EdgeId, TorusParams};
use crate::singular::singular_graph;

pub const DEFAULT_MAX_DEGREE: usize = 24;
pub const DEFAULT_STAB_WINDOW: usize = 3;

/// Homogeneous polynomial in `s, t`; `coeffs[k]` multiplies `s^(d-k) t^k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HomogeneousPoly2 {
    pub degree: usize,
    #[serde(with = "crate::bigjson::vec")]
    pub coeffs: Vec<BigInt>,
}

impl HomogeneousPoly2 {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a homogeneous polynomial needs a degree".into()));
        }
        Ok(HomogeneousPoly2 {
            degree: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn zero(degree: usize) -> Self {
        HomogeneousPoly2 {
            degree,
            coeffs: vec![BigInt::zero(); degree + 1],
        }
    }

    /// `x s + y t`.
    pub fn linear(x: &BigInt, y: &BigInt) -> Self {
        HomogeneousPoly2 {
            degree: 1,
            coeffs: vec![x.clone(), y.clone()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.degree + o.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    fn combine(&self, o: &Self, sign: i8) -> Self {
        assert_eq!(self.degree, o.degree, "degrees differ");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| if sign > 0 { a + b } else { a - b })
            .collect();
        HomogeneousPoly2 {
            degree: self.degree,
            coeffs,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, 1)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, -1)
    }
}

impl fmt::Display for HomogeneousPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = |v: &str, e: usize| match e {
                0 => String::new(),
                1 => v.to_string(),
                e => format!("{v}^{e}"),
            };
            let m = format!("{}{}", mono("s", d - k), mono("t", k));
            terms.push(if m.is_empty() { c.to_string() } else { format!("{c}{m}") });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + ").replace("+ -", "- "))
        }
    }
}

fn elementary(forms: &[HomogeneousPoly2]) -> Vec<HomogeneousPoly2> {
    // e_0 = 1, then the usual recurrence over the linear forms.
    let mut e: Vec<HomogeneousPoly2> = vec![HomogeneousPoly2 {
        degree: 0,
        coeffs: vec![1.into()],
    }];
    for l in forms {
        let mut next = Vec::with_capacity(e.len() + 1);
        next.push(e[0].clone());
        for k in 1..=e.len() {
            let with = e[k - 1].mul(l);
            next.push(if k < e.len() { e[k].add(&with) } else { with });
        }
        e = next;
    }
    e
}

fn forms(x: &[BigInt], y: &[BigInt]) -> Vec<HomogeneousPoly2> {
    x.iter().zip(y).map(|(a, b)| HomogeneousPoly2::linear(a, b)).collect()
}

/// `(r_2, r_3)`: differences of the second and third elementary symmetric
/// polynomials of the linear forms `s p_i + t a_i` and `s q_i + t b_i`.
pub fn relation_polynomials(t: &TorusParams) -> (HomogeneousPoly2, HomogeneousPoly2) {
    let ep = elementary(&forms(t.p(), t.a()));
    let eq = elementary(&forms(t.q(), t.b()));
    (ep[2].sub(&eq[2]), ep[3].sub(&eq[3]))
}

/// Relations of the edge sphere `(i, j)`: differences of `σ_1` and `σ_2`
/// on the two-component restrictions.
pub fn sphere_relations(t: &TorusParams, e: EdgeId) -> (HomogeneousPoly2, HomogeneousPoly2) {
    let others = |k: usize| -> [usize; 2] {
        match k {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    };
    let pick = |v: &[BigInt; 3], idx: [usize; 2]| [v[idx[0]].clone(), v[idx[1]].clone()];
    let (ii, jj) = (others(e.i()), others(e.j()));
    let ep = elementary(&forms(&pick(t.p(), ii), &pick(t.a(), ii)));
    let eq = elementary(&forms(&pick(t.q(), jj), &pick(t.b(), jj)));
    (ep[1].sub(&eq[1]), ep[2].sub(&eq[2]))
}

/// Matrix of the degree-`m` part of the ideal in the basis
/// `s^m, s^(m-1) t, ..., t^m`. Columns: each relation in order, multiplied
/// by `s^α t^(e-α)` for `α = e, ..., 0` where `e = m - deg r`. Zero
/// relations contribute nothing.
pub fn graded_relation_matrix(relations: &[HomogeneousPoly2], m: usize) -> IntMatrix {
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for r in relations {
        if r.is_zero() || r.degree > m {
            continue;
        }
        let e = m - r.degree;
        for alpha in (0..=e).rev() {
            let shift = e - alpha;
            let mut col = vec![BigInt::zero(); m + 1];
            for (k, c) in r.coeffs.iter().enumerate() {
                col[k + shift] = c.clone();
            }
            cols.push(col);
        }
    }
    let mut mat = IntMatrix::zeros(m + 1, cols.len());
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            mat.set(i, j, v);
        }
    }
    mat
}

fn graded_group(relations: &[HomogeneousPoly2], degree: usize) -> AbelianGroup {
    if degree % 2 == 1 {
        AbelianGroup::trivial()
    } else {
        cokernel(&graded_relation_matrix(relations, degree / 2))
    }
}

fn require_almost_free(t: &TorusParams) -> Result<()> {
    if t.is_almost_free() {
        Ok(())
    } else {
        Err(Error::NotAlmostFree)
    }
}

/// `H^degree` of the orbifold.
pub fn cohomology_group(t: &TorusParams, degree: usize) -> Result<AbelianGroup> {
    require_almost_free(t)?;
    let (r2, r3) = relation_polynomials(t);
    Ok(graded_group(&[r2, r3], degree))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StableGroup {
    pub group: AbelianGroup,
    pub onset: usize,
}

/// Groups in degrees `0..=max_degree` with the detected stable group.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub max_degree: usize,
    pub groups: Vec<AbelianGroup>,
    pub stable: Option<StableGroup>,
}

impl CohomologyProfile {
    fn from_relations(relations: &[HomogeneousPoly2], max_degree: usize, window: usize) -> Self {
        let groups: Vec<AbelianGroup> = (0..=max_degree).map(|d| graded_group(relations, d)).collect();
        let stable = detect_stable(&groups, window);
        CohomologyProfile {
            max_degree,
            groups,
            stable,
        }
    }

    pub fn group(&self, degree: usize) -> Option<&AbelianGroup> {
        self.groups.get(degree)
    }

    /// Free ranks summed over all computed degrees.
    pub fn total_rank(&self) -> usize {
        self.groups.iter().map(AbelianGroup::free_rank).sum()
    }
}

/// Smallest even degree from which all even degrees up to the top agree,
/// provided that run has at least `window` members.
fn detect_stable(groups: &[AbelianGroup], window: usize) -> Option<StableGroup> {
    let top = (groups.len().checked_sub(1)?) & !1;
    let g = &groups[top];
    let mut onset = top;
    while onset >= 2 && groups[onset - 2] == *g {
        onset -= 2;
    }
    let run = (top - onset) / 2 + 1;
    (run >= window.max(1)).then(|| StableGroup {
        group: g.clone(),
        onset,
    })
}

fn check_max_degree(max_degree: usize) -> Result<()> {
    if max_degree % 2 == 1 || max_degree < 8 {
        return Err(Error::InvalidArgument(format!(
            "max degree must be even and at least 8, got {max_degree}"
        )));
    }
    Ok(())
}

pub fn cohomology_profile(t: &TorusParams, max_degree: usize, stab_window: usize) -> Result<CohomologyProfile> {
    require_almost_free(t)?;
    check_max_degree(max_degree)?;
    let (r2, r3) = relation_polynomials(t);
    Ok(CohomologyProfile::from_relations(&[r2, r3], max_degree, stab_window))
}

/// Cohomology of the edge sphere `(i, j)` up to `max_degree` (even).
pub fn sphere_cohomology(t: &TorusParams, e: EdgeId, max_degree: usize) -> Result<CohomologyProfile> {
    if e.endpoints().iter().any(|&v| !t.vertex_isotropy(v).is_finite()) {
        return Err(Error::NotAlmostFree);
    }
    if max_degree % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "max degree must be even, got {max_degree}"
        )));
    }
    let (r1, r2) = sphere_relations(t, e);
    Ok(CohomologyProfile::from_relations(
        &[r1, r2],
        max_degree,
        DEFAULT_STAB_WINDOW,
    ))
}

/// Result of comparing the orbifold with its singular edge sphere.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub edge: EdgeId,
    pub holds: bool,
    /// First degree where the comparison fails.
    pub first_mismatch: Option<usize>,
}

/// Checks `H^0 = Z`, `H^2 = H^4 = Z^2`, vanishing odd degrees and
/// `H^i ≅ H^(i-4)(S^2_e)` for even `6 <= i <= max_degree`, where `e` is the
/// edge containing the singular set.
pub fn localization_report(t: &TorusParams, max_degree: usize) -> Result<LocalizationReport> {
    let g = singular_graph(t)?;
    let edge = g.containing_edge()?;
    let orb = cohomology_profile(t, max_degree.max(8), DEFAULT_STAB_WINDOW)?;
    let sphere = sphere_cohomology(t, edge, max_degree.max(8) - 4)?;
    let expect_low = |d: usize| match d {
        0 => Some(AbelianGroup::free(1)),
        2 | 4 => Some(AbelianGroup::free(2)),
        _ => None,
    };
    let first_mismatch = (0..=max_degree).find(|&d| {
        let h = &orb.groups[d];
        if d % 2 == 1 {
            !h.is_trivial()
        } else if let Some(want) = expect_low(d) {
            *h != want
        } else {
            *h != sphere.groups[d - 4]
        }
    });
    Ok(LocalizationReport {
        edge,
        holds: first_mismatch.is_none(),
        first_mismatch,
    })
}

pub fn localization_check(t: &TorusParams, max_degree: usize) -> Result<bool> {
    Ok(localization_report(t, max_degree)?.holds)
}
