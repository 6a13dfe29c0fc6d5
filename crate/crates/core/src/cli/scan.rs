//! Desk-scale scans over a box of parameters with per-instance assertions.
//!
//! The box holds every instance with `p1 = a1 = 0` and all other entries in
//! `[-B, B]`. By default each orbit under simultaneous permutations and the
//! swap is visited once, through its lexicographically least member inside
//! the box. Raw mode visits every member.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology_profile, localization_report, CohomologyProfile, DEFAULT_STAB_WINDOW};
use crate::curvature::{admits_positive_curvature, sat_verdict};
use crate::families::CohomologyPattern;
use crate::intlinalg::AbelianGroup;
use crate::params::{ineffective_kernel, EdgeId, TorusParams};
use crate::singular::{build_graph, parity_census, EdgeClass, SigmaShape, SingularGraph};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum Assertion {
    /// Positive with nonempty singular set: singular vertices of both parities.
    TheoremAParity,
    /// Positive with exactly two singular vertices: they are joined by a
    /// smooth singular sphere.
    TheoremASmoothSphere,
    /// Projection and intersection decisions agree, witness included.
    SatAgreement,
    /// Singular set inside one edge: orbifold cohomology matches the sphere.
    Localization,
    /// Positive, singular set inside one edge: smooth sphere with cyclic
    /// group `Z_k` and cohomology in one of the two square-order patterns.
    Squares,
}

impl Assertion {
    pub const THEOREM_A: [Assertion; 2] = [Assertion::TheoremAParity, Assertion::TheoremASmoothSphere];

    pub fn name(self) -> &'static str {
        match self {
            Assertion::TheoremAParity => "theorem-a-parity",
            Assertion::TheoremASmoothSphere => "theorem-a-smooth-sphere",
            Assertion::SatAgreement => "sat-agreement",
            Assertion::Localization => "localization",
            Assertion::Squares => "squares",
        }
    }
}

/// Instance predicates applied before assertions and shape reporting.
/// Almost-freeness is always required.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScanFilters {
    pub require_effective: bool,
    pub require_positive: bool,
    pub require_sigma_nonempty: bool,
    /// Exact number of singular vertices.
    pub sigma_vertices: Option<usize>,
}

impl Default for ScanFilters {
    fn default() -> Self {
        ScanFilters {
            require_effective: true,
            require_positive: false,
            require_sigma_nonempty: false,
            sigma_vertices: None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScanConfig {
    pub bound: i64,
    pub filters: ScanFilters,
    pub assertions: Vec<Assertion>,
    /// Visit every box member instead of one per orbit.
    pub raw: bool,
    /// Cohomology cap for `localization` and `squares`.
    pub max_degree: usize,
    /// Extra random instances with entries in `[-sample_bound, sample_bound]`.
    pub samples: usize,
    pub sample_bound: i64,
    pub seed: u64,
    /// Stored examples per list; counts are always complete.
    pub keep: usize,
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            bound: 3,
            filters: ScanFilters::default(),
            assertions: Assertion::THEOREM_A.to_vec(),
            raw: false,
            max_degree: 12,
            samples: 0,
            sample_bound: 8,
            seed: 0,
            keep: 20,
            jobs: 0,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bound < 1 {
            return Err(Error::InvalidArgument("scan bound must be at least 1".into()));
        }
        if self.sample_bound < 1 {
            return Err(Error::InvalidArgument("sample bound must be at least 1".into()));
        }
        if self.max_degree < 8 || self.max_degree % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "max degree must be even and at least 8, got {}",
                self.max_degree
            )));
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub assertion: Assertion,
    pub params: TorusParams,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ScanCounts {
    /// Box members (raw) or orbit representatives visited.
    pub visited: u64,
    pub random_samples: u64,
    pub not_almost_free: u64,
    pub not_effective: u64,
    /// Passed every filter.
    pub selected: u64,
    pub positive: u64,
    /// Shape of the singular set over selected instances, split by verdict.
    pub shapes_positive: BTreeMap<String, u64>,
    pub shapes_not_positive: BTreeMap<String, u64>,
    /// Instances with an edge and endpoint group of equal order that differ.
    pub order_equal_but_distinct: u64,
    /// Instances each assertion was checked on.
    pub checked: BTreeMap<String, u64>,
    pub counterexamples: BTreeMap<String, u64>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RunInfo {
    pub jobs: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema: u32,
    pub config: ScanConfig,
    pub counts: ScanCounts,
    pub counterexamples: Vec<Counterexample>,
    /// Positive instances with exactly three singular points.
    pub three_point_positive: Vec<TorusParams>,
    pub order_equal_but_distinct: Vec<TorusParams>,
    /// Timing and job count; the only nondeterministic part.
    pub run: RunInfo,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.counts.counterexamples.values().all(|&n| n == 0)
    }

    /// Copy with the nondeterministic fields zeroed.
    pub fn without_timing(&self) -> ScanReport {
        let mut r = self.clone();
        r.config.jobs = 0;
        r.run = RunInfo { jobs: 0, elapsed_ms: 0 };
        r
    }
}

/// `[p, q, a, b]` flattened.
type Flat = [i64; 12];

/// Anchored `(p, q)` halves: `p1 = 0`, all entries in `[-b, b]`, equal sums.
fn anchored_halves(b: i64) -> Vec<[i64; 6]> {
    let r = -b..=b;
    let mut out = Vec::new();
    for p2 in r.clone() {
        for p3 in r.clone() {
            for q1 in r.clone() {
                for q2 in r.clone() {
                    let q3 = p2 + p3 - q1 - q2;
                    if q3.abs() <= b {
                        out.push([0, p2, p3, q1, q2, q3]);
                    }
                }
            }
        }
    }
    out
}

fn flat(pq: &[i64; 6], ab: &[i64; 6]) -> Flat {
    let mut f = [0; 12];
    f[..3].copy_from_slice(&pq[..3]);
    f[3..6].copy_from_slice(&pq[3..]);
    f[6..9].copy_from_slice(&ab[..3]);
    f[9..].copy_from_slice(&ab[3..]);
    f
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];

/// Whether `f` is the least member of its orbit that lies in the box.
fn is_canonical(f: &Flat, b: i64) -> bool {
    let (p, q, a, bb) = (&f[0..3], &f[3..6], &f[6..9], &f[9..12]);
    for swap in [false, true] {
        let (p, q, a, bb) = if swap { (q, p, bb, a) } else { (p, q, a, bb) };
        for s in PERMS {
            for t in PERMS {
                let d = p[s[0]];
                let c = a[s[0]];
                let mut g = [0i64; 12];
                for i in 0..3 {
                    g[i] = p[s[i]] - d;
                    g[3 + i] = q[t[i]] - d;
                    g[6 + i] = a[s[i]] - c;
                    g[9 + i] = bb[t[i]] - c;
                }
                if g.iter().all(|x| x.abs() <= b) && g < *f {
                    return false;
                }
            }
        }
    }
    true
}

/// All six `N_σ` nonzero, in `i64`.
fn almost_free_fast(f: &Flat) -> bool {
    PERMS.iter().all(|s| {
        let x1 = f[0] - f[3 + s[0]];
        let y1 = f[6] - f[9 + s[0]];
        let x2 = f[1] - f[3 + s[1]];
        let y2 = f[7] - f[9 + s[1]];
        x1 * y2 - x2 * y1 != 0
    })
}

fn to_params(f: &Flat) -> TorusParams {
    let t = |i: usize| [f[i], f[i + 1], f[i + 2]];
    TorusParams::from_i64(t(0), t(3), t(6), t(9)).expect("box members satisfy the sum conditions")
}

fn shape_key(s: SigmaShape) -> String {
    match s {
        SigmaShape::Empty => "empty".into(),
        SigmaShape::Points(n) => format!("points-{n}"),
        SigmaShape::WithSpheres => "with-spheres".into(),
    }
}

fn append_capped<T>(v: &mut Vec<T>, mut extra: Vec<T>, keep: usize) {
    extra.truncate(keep.saturating_sub(v.len()));
    v.append(&mut extra);
}

#[derive(Default)]
struct Partial {
    counts: ScanCounts,
    counterexamples: Vec<Counterexample>,
    three_point: Vec<TorusParams>,
    oebd: Vec<TorusParams>,
}

impl Partial {
    fn merge(mut self, o: Partial, keep: usize) -> Partial {
        let c = &mut self.counts;
        c.visited += o.counts.visited;
        c.random_samples += o.counts.random_samples;
        c.not_almost_free += o.counts.not_almost_free;
        c.not_effective += o.counts.not_effective;
        c.selected += o.counts.selected;
        c.positive += o.counts.positive;
        c.order_equal_but_distinct += o.counts.order_equal_but_distinct;
        for (dst, src) in [
            (&mut c.shapes_positive, o.counts.shapes_positive),
            (&mut c.shapes_not_positive, o.counts.shapes_not_positive),
            (&mut c.checked, o.counts.checked),
            (&mut c.counterexamples, o.counts.counterexamples),
        ] {
            for (k, v) in src {
                *dst.entry(k).or_default() += v;
            }
        }
        append_capped(&mut self.counterexamples, o.counterexamples, keep);
        append_capped(&mut self.three_point, o.three_point, keep);
        append_capped(&mut self.oebd, o.oebd, keep);
        self
    }

    fn fail(&mut self, cfg: &ScanConfig, assertion: Assertion, t: &TorusParams, detail: String) {
        *self.counts.counterexamples.entry(assertion.name().into()).or_default() += 1;
        if self.counterexamples.len() < cfg.keep {
            self.counterexamples.push(Counterexample {
                assertion,
                params: t.clone(),
                detail,
            });
        }
    }

    fn checked(&mut self, a: Assertion) {
        *self.counts.checked.entry(a.name().into()).or_default() += 1;
    }
}

fn matches_square_pattern(prof: &CohomologyProfile, k: &BigInt) -> bool {
    [CohomologyPattern::branch_one(k), CohomologyPattern::branch_two(k)]
        .iter()
        .any(|pat| prof.groups[6] == pat.h6 && (8..=prof.max_degree).step_by(2).all(|d| prof.groups[d] == pat.stable))
}

fn low_degrees_ok(prof: &CohomologyProfile) -> bool {
    prof.groups[0] == AbelianGroup::free(1)
        && prof.groups[2] == AbelianGroup::free(2)
        && prof.groups[4] == AbelianGroup::free(2)
        && prof.groups.iter().skip(1).step_by(2).all(AbelianGroup::is_trivial)
}

fn check_squares(t: &TorusParams, g: &SingularGraph, e: EdgeId, max_degree: usize) -> Option<String> {
    let r = g.edge(e);
    if g.sigma_is_empty() {
        return None;
    }
    if r.class != EdgeClass::SmoothSphere {
        return Some(format!("edge {} is {:?}, not a smooth sphere", e, r.class));
    }
    if !r.isotropy.g.is_one() {
        return Some(format!("edge group {} is not cyclic", r.isotropy.group));
    }
    let k = r.isotropy.n.clone();
    match cohomology_profile(t, max_degree, DEFAULT_STAB_WINDOW) {
        Ok(prof) if low_degrees_ok(&prof) && matches_square_pattern(&prof, &k) => None,
        Ok(prof) => Some(format!(
            "Z{k} sphere but H^6 = {}, H^8 = {}, H^{} = {}",
            prof.groups[6], prof.groups[8], max_degree, prof.groups[max_degree]
        )),
        Err(e) => Some(e.to_string()),
    }
}

fn visit(cfg: &ScanConfig, f: &Flat, part: &mut Partial) {
    if !almost_free_fast(f) {
        part.counts.not_almost_free += 1;
        return;
    }
    let t = to_params(f);
    let effective = ineffective_kernel(&t).is_trivial();
    if !effective {
        part.counts.not_effective += 1;
        if cfg.filters.require_effective {
            return;
        }
    }
    let verdict = admits_positive_curvature(&t).expect("almost free");
    let positive = verdict.is_positive();
    if cfg.assertions.contains(&Assertion::SatAgreement) {
        part.checked(Assertion::SatAgreement);
        let sat = sat_verdict(&t).expect("almost free");
        if sat != verdict {
            part.fail(
                cfg,
                Assertion::SatAgreement,
                &t,
                format!("intersection: {verdict}; projection: {sat}"),
            );
        }
    }
    let g = build_graph(&t);
    let singular = g.singular_vertices();
    let fl = &cfg.filters;
    if (fl.require_positive && !positive)
        || (fl.require_sigma_nonempty && g.sigma_is_empty())
        || fl.sigma_vertices.is_some_and(|n| n != singular.len())
    {
        return;
    }
    part.counts.selected += 1;
    let shape = g.shape();
    let shapes = if positive {
        part.counts.positive += 1;
        &mut part.counts.shapes_positive
    } else {
        &mut part.counts.shapes_not_positive
    };
    *shapes.entry(shape_key(shape)).or_default() += 1;
    if !g.order_equal_but_distinct().is_empty() {
        part.counts.order_equal_but_distinct += 1;
        if part.oebd.len() < cfg.keep {
            part.oebd.push(t.clone());
        }
    }
    if positive && shape == SigmaShape::Points(3) && part.three_point.len() < cfg.keep {
        part.three_point.push(t.clone());
    }
    let containing = g.containing_edge().ok();
    for &a in &cfg.assertions {
        match a {
            Assertion::SatAgreement => {}
            Assertion::TheoremAParity if positive && !g.sigma_is_empty() => {
                part.checked(a);
                let (even, odd) = parity_census(&g);
                if even == 0 || odd == 0 {
                    part.fail(cfg, a, &t, format!("singular vertices {singular:?} have one parity"));
                }
            }
            Assertion::TheoremASmoothSphere if positive && singular.len() == 2 => {
                part.checked(a);
                let detail = match EdgeId::joining(singular[0], singular[1]) {
                    None => Some(format!("{} and {} are not joined by an edge", singular[0], singular[1])),
                    Some(e) if g.edge(e).class != EdgeClass::SmoothSphere => {
                        Some(format!("joining edge {e} is {:?}", g.edge(e).class))
                    }
                    Some(_) => None,
                };
                if let Some(d) = detail {
                    part.fail(cfg, a, &t, d);
                }
            }
            Assertion::Squares if positive && effective => {
                if let Some(e) = containing {
                    if g.sigma_is_empty() {
                        continue;
                    }
                    part.checked(a);
                    if let Some(d) = check_squares(&t, &g, e, cfg.max_degree) {
                        part.fail(cfg, a, &t, d);
                    }
                }
            }
            Assertion::Localization if effective && containing.is_some() => {
                part.checked(a);
                match localization_report(&t, cfg.max_degree) {
                    Ok(r) if r.holds => {}
                    Ok(r) => part.fail(
                        cfg,
                        a,
                        &t,
                        format!("edge {} fails in degree {:?}", r.edge, r.first_mismatch),
                    ),
                    Err(e) => part.fail(cfg, a, &t, e.to_string()),
                }
            }
            _ => {}
        }
    }
}

/// Seeded random instances with entries in `[-bound, bound]`; the last
/// entries of `q` and `b` are solved from the sum conditions and the draw is
/// repeated until they fall inside the range.
pub fn random_instances(n: usize, bound: i64, seed: u64) -> Vec<[i64; 12]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut f = [0i64; 12];
        for x in f.iter_mut() {
            *x = rng.gen_range(-bound..=bound);
        }
        f[5] = f[0] + f[1] + f[2] - f[3] - f[4];
        f[11] = f[6] + f[7] + f[8] - f[9] - f[10];
        if f[5].abs() <= bound && f[11].abs() <= bound {
            out.push(f);
        }
    }
    out
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Runs the scan. Slices of the box are processed in parallel and merged
/// in slice order, so the report does not depend on the job count.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    cfg.validate()?;
    let start = Instant::now();
    let halves = anchored_halves(cfg.bound);
    let part = with_pool(cfg.jobs, || {
        let boxed = halves
            .par_iter()
            .map(|pq| {
                let mut part = Partial::default();
                for ab in &halves {
                    let f = flat(pq, ab);
                    if !cfg.raw && !is_canonical(&f, cfg.bound) {
                        continue;
                    }
                    part.counts.visited += 1;
                    visit(cfg, &f, &mut part);
                }
                part
            })
            .collect::<Vec<_>>();
        let samples = random_instances(cfg.samples, cfg.sample_bound, cfg.seed);
        let sampled = samples
            .par_chunks(256)
            .map(|chunk| {
                let mut part = Partial::default();
                for f in chunk {
                    part.counts.random_samples += 1;
                    visit(cfg, f, &mut part);
                }
                part
            })
            .collect::<Vec<_>>();
        boxed
            .into_iter()
            .chain(sampled)
            .fold(Partial::default(), |acc, p| acc.merge(p, cfg.keep))
    });
    Ok(ScanReport {
        schema: super::SCHEMA_VERSION,
        config: cfg.clone(),
        counts: part.counts,
        counterexamples: part.counterexamples,
        three_point_positive: part.three_point,
        order_equal_but_distinct: part.oebd,
        run: RunInfo {
            jobs: if cfg.jobs == 0 {
                rayon::current_num_threads()
            } else {
                cfg.jobs
            },
            elapsed_ms: start.elapsed().as_millis(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves_have_equal_sums() {
        let h = anchored_halves(1);
        assert!(h.iter().all(|x| x[0] == 0 && x[1] + x[2] == x[3] + x[4] + x[5]));
        assert!(h.contains(&[0, 1, -1, 0, 0, 0]));
    }

    #[test]
    fn canonical_members_cover_orbits() {
        // Every box member has an in-box orbit member that is canonical.
        let b = 1;
        let h = anchored_halves(b);
        let mut canon = 0;
        for pq in &h {
            for ab in &h {
                if is_canonical(&flat(pq, ab), b) {
                    canon += 1;
                }
            }
        }
        assert!(canon > 0 && canon < h.len() * h.len());
    }

    #[test]
    fn fast_filter_matches_params() {
        for f in random_instances(200, 4, 7) {
            assert_eq!(almost_free_fast(&f), to_params(&f).is_almost_free());
        }
    }

    #[test]
    fn small_scan_is_clean_and_deterministic() {
        let cfg = ScanConfig {
            bound: 1,
            assertions: vec![
                Assertion::TheoremAParity,
                Assertion::TheoremASmoothSphere,
                Assertion::SatAgreement,
                Assertion::Squares,
            ],
            samples: 50,
            jobs: 1,
            ..Default::default()
        };
        let one = run_scan(&cfg).unwrap();
        assert!(one.passed(), "{:?}", one.counterexamples);
        assert!(one.counts.visited > 0);
        assert_eq!(one.counts.random_samples, 50);
        let four = run_scan(&ScanConfig { jobs: 4, ..cfg }).unwrap();
        assert_eq!(one.without_timing(), four.without_timing());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(run_scan(&ScanConfig {
            bound: 0,
            ..Default::default()
        })
        .is_err());
        assert!(run_scan(&ScanConfig {
            max_degree: 9,
            ..Default::default()
        })
        .is_err());
    }
}
