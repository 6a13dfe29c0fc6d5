//! Command-line surface: `analyze`, `scan`, `graph` and `verify`.
//!
//! Exit codes: 0 pass, 1 counterexample or failed prediction, 2 usage or
//! validation error. JSON layouts are described in `docs/schema.md`.

pub mod scan;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::cohomology::{
    cohomology_profile, localization_report, CohomologyProfile, LocalizationReport, DEFAULT_STAB_WINDOW,
};
use crate::curvature::{admits_positive_curvature, triangles, triangles_svg, CurvatureVerdict};
use crate::families::{grid, verify_fixture, Family, FixtureReport, FixtureStatus};
use crate::intlinalg::AbelianGroup;
use crate::params::{ineffective_kernel, parse_triple, TorusParams};
use crate::singular::{build_graph, export_dot, SingularGraph};
use crate::{Error, Result};

pub use scan::{run_scan, Assertion, ScanConfig, ScanFilters, ScanReport};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "eschenburg", version, about = "Exact invariants of Eschenburg orbifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Freeness, singular graph, curvature and cohomology of one instance.
    Analyze(AnalyzeArgs),
    /// Box scan with assertions.
    Scan(ScanArgs),
    /// DOT graph of the singular set, optionally an SVG of the triangles.
    Graph(GraphArgs),
    /// Recompute the predictions of a parameter family over a grid.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true, value_name = "P1,P2,P3")]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "Q1,Q2,Q3")]
    pub q: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "A1,A2,A3")]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "B1,B2,B3")]
    pub b: Option<String>,
    /// Text form `p=..;q=..;a=..;b=..`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["p", "q", "a", "b", "input"])]
    pub params: Option<String>,
    /// JSON file holding `{"p": [..], "q": [..], "a": [..], "b": [..]}`.
    #[arg(long, conflicts_with_all = ["p", "q", "a", "b"])]
    pub input: Option<PathBuf>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<TorusParams> {
        if let Some(s) = &self.params {
            return s.parse();
        }
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            return serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()));
        }
        let need = |name: &str, v: &Option<String>| -> Result<[num_bigint::BigInt; 3]> {
            parse_triple(v.as_deref().ok_or_else(|| Error::Parse(format!("missing --{name}")))?).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("--{name}: {m}")),
                other => other,
            })
        };
        TorusParams::new(
            need("p", &self.p)?,
            need("q", &self.q)?,
            need("a", &self.a)?,
            need("b", &self.b)?,
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 24)]
    pub max_degree: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Box bound B; cost grows roughly like B^10 before orbit reduction.
    #[arg(long = "bound", short = 'B', default_value_t = 3)]
    pub bound: i64,
    /// Assertions to check; defaults to the parity and smooth-sphere checks.
    #[arg(long = "assert", value_enum, value_delimiter = ',')]
    pub assertions: Vec<Assertion>,
    /// Visit every box member instead of one per orbit.
    #[arg(long)]
    pub raw: bool,
    /// Keep instances with a nontrivial ineffective kernel.
    #[arg(long)]
    pub allow_ineffective: bool,
    #[arg(long)]
    pub positive_only: bool,
    #[arg(long)]
    pub sigma_nonempty: bool,
    /// Keep only instances with exactly this many singular vertices.
    #[arg(long)]
    pub sigma_vertices: Option<usize>,
    #[arg(long, default_value_t = 12)]
    pub max_degree: usize,
    /// Extra seeded random instances.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 8)]
    pub sample_bound: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub keep: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ScanArgs {
    pub fn config(&self) -> ScanConfig {
        ScanConfig {
            bound: self.bound,
            filters: ScanFilters {
                require_effective: !self.allow_ineffective,
                require_positive: self.positive_only,
                require_sigma_nonempty: self.sigma_nonempty,
                sigma_vertices: self.sigma_vertices,
            },
            assertions: if self.assertions.is_empty() {
                Assertion::THEOREM_A.to_vec()
            } else {
                self.assertions.clone()
            },
            raw: self.raw,
            max_degree: self.max_degree,
            samples: self.samples,
            sample_bound: self.sample_bound,
            seed: self.seed,
            keep: self.keep,
            jobs: self.jobs,
        }
    }
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// DOT output path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the triangle pair with its witness edge as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// cor-nonnegact, smooth-sphere or example-two-singular.
    pub family: String,
    /// Single case; all cases if absent.
    #[arg(long)]
    pub case: Option<u8>,
    /// Free parameters range over [-range, range].
    #[arg(long, default_value_t = 4)]
    pub range: i64,
    /// Pin a free parameter, `name=value`; repeatable.
    #[arg(long = "fix", value_parser = parse_fix, allow_hyphen_values = true)]
    pub fix: Vec<(String, i64)>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<i64>,
    #[arg(long, default_value_t = 16)]
    pub max_degree: usize,
    /// Print every row and check, not only failures and flags.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_fix(s: &str) -> std::result::Result<(String, i64), String> {
    let (n, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse::<i64>().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((n.trim().to_string(), v))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Freeness {
    pub almost_free: bool,
    pub free: bool,
    pub effective: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub params: TorusParams,
    /// Subgroup of the torus acting trivially.
    pub kernel: AbelianGroup,
    pub freeness: Freeness,
    pub singular_graph: SingularGraph,
    pub curvature: CurvatureVerdict,
    pub cohomology: CohomologyProfile,
    /// Present when the singular set lies in one edge of an effective action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization: Option<LocalizationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub elapsed_ms: u128,
}

fn graph_with_warnings(t: &TorusParams) -> Result<(SingularGraph, Vec<String>)> {
    if !t.is_almost_free() {
        return Err(Error::NotAlmostFree);
    }
    let k = ineffective_kernel(t);
    let warnings = if k.is_trivial() {
        Vec::new()
    } else {
        vec![format!("action is not effective, kernel {k}; local groups include it")]
    };
    Ok((build_graph(t), warnings))
}

pub fn analyze(t: &TorusParams, max_degree: usize) -> Result<AnalysisReport> {
    let start = Instant::now();
    let (graph, warnings) = graph_with_warnings(t)?;
    let cohomology = cohomology_profile(t, max_degree, DEFAULT_STAB_WINDOW)?;
    let curvature = admits_positive_curvature(t)?;
    let kernel = ineffective_kernel(t);
    let localization = if kernel.is_trivial() && graph.containing_edge().is_ok() {
        Some(localization_report(t, max_degree)?)
    } else {
        None
    };
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        params: t.clone(),
        freeness: Freeness {
            almost_free: true,
            free: t.is_free(),
            effective: kernel.is_trivial(),
        },
        kernel,
        singular_graph: graph,
        curvature,
        cohomology,
        localization,
        warnings,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn render_analysis(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(s, "params      {}", r.params);
    let _ = writeln!(s, "kernel      {}", r.kernel);
    let _ = writeln!(
        s,
        "action      almost free: {}, free: {}, effective: {}",
        yn(r.freeness.almost_free),
        yn(r.freeness.free),
        yn(r.freeness.effective)
    );
    for w in &r.warnings {
        let _ = writeln!(s, "warning     {w}");
    }
    let _ = writeln!(s, "vertices");
    for v in &r.singular_graph.vertices {
        let mark = if v.in_sigma { "  singular" } else { "" };
        let parity = format!("{:?}", v.parity).to_lowercase();
        let _ = writeln!(
            s,
            "  {:<6} {:<5} N={:<4} {}{}",
            v.vertex.to_string(),
            parity,
            v.isotropy.n.to_string(),
            v.isotropy.group,
            mark
        );
    }
    let _ = writeln!(s, "edges");
    for e in &r.singular_graph.edges {
        let _ = writeln!(
            s,
            "  {} {:>5} -- {:<6} N={:<4} {:<8} {:?}",
            e.edge,
            e.endpoints[0].to_string(),
            e.endpoints[1].to_string(),
            e.isotropy.n.to_string(),
            e.isotropy.group.to_string(),
            e.class
        );
    }
    let _ = writeln!(s, "sigma       {:?}", r.singular_graph.shape());
    let _ = writeln!(s, "curvature   {}", r.curvature);
    let _ = writeln!(s, "cohomology");
    for (d, g) in r.cohomology.groups.iter().enumerate() {
        let _ = writeln!(s, "  H^{d:<3} {g}");
    }
    match &r.cohomology.stable {
        Some(st) => {
            let _ = writeln!(s, "stable      {} from degree {}", st.group, st.onset);
        }
        None => {
            let _ = writeln!(s, "stable      not detected up to degree {}", r.cohomology.max_degree);
        }
    }
    if let Some(l) = &r.localization {
        let _ = match l.first_mismatch {
            None => writeln!(s, "localization holds on edge {}", l.edge),
            Some(d) => writeln!(s, "localization FAILS on edge {} in degree {d}", l.edge),
        };
    }
    s
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifySummary {
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
    pub skipped: usize,
    pub side_condition_violations: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub family: Family,
    pub cases: Vec<u8>,
    pub range: i64,
    pub fixed: Vec<(String, i64)>,
    pub summary: VerifySummary,
    pub rows: Vec<FixtureReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }
}

/// Grid verification of one family; `case = None` runs every case.
pub fn verify(
    family: Family,
    case: Option<u8>,
    range: i64,
    fixed: &[(String, i64)],
    max_degree: usize,
) -> Result<VerifyReport> {
    if range < 0 {
        return Err(Error::InvalidArgument("range must be nonnegative".into()));
    }
    let cases: Vec<u8> = match case {
        Some(c) if family.cases().contains(&c) => vec![c],
        Some(c) => return Err(Error::InvalidArgument(format!("{family} has no case {c}"))),
        None => family.cases().to_vec(),
    };
    let mut rows = Vec::new();
    let mut violations = 0;
    for &c in &cases {
        let (fixtures, bad) = grid(family, c, range, fixed)?;
        violations += bad;
        use rayon::prelude::*;
        rows.extend(
            fixtures
                .par_iter()
                .map(|f| verify_fixture(f, max_degree))
                .collect::<Vec<_>>(),
        );
    }
    let count = |pred: fn(&FixtureStatus) -> bool| rows.iter().filter(|r| pred(&r.status)).count();
    let summary = VerifySummary {
        pass: count(|s| *s == FixtureStatus::Pass),
        fail: count(|s| *s == FixtureStatus::Fail),
        flagged: count(|s| *s == FixtureStatus::Flagged),
        skipped: count(|s| matches!(s, FixtureStatus::Skipped(_))),
        side_condition_violations: violations,
    };
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        family,
        cases,
        range,
        fixed: fixed.to_vec(),
        summary,
        rows,
    })
}

pub fn render_verify(r: &VerifyReport, all: bool) -> String {
    let mut s = String::new();
    for row in &r.rows {
        let interesting = matches!(row.status, FixtureStatus::Fail | FixtureStatus::Flagged);
        if !all && !interesting {
            continue;
        }
        let free: Vec<String> = row.fixture.free.iter().map(|(n, v)| format!("{n}={v}")).collect();
        let status = match &row.status {
            FixtureStatus::Pass => "PASS".to_string(),
            FixtureStatus::Fail => "FAIL".to_string(),
            FixtureStatus::Flagged => "FLAGGED".to_string(),
            FixtureStatus::Skipped(why) => format!("SKIP ({why})"),
        };
        let _ = writeln!(
            s,
            "{:<8} case {} {:<28} {}",
            status,
            row.fixture.case,
            free.join(" "),
            row.fixture.params
        );
        for c in &row.checks {
            if all || !c.ok {
                let _ = writeln!(
                    s,
                    "    {:<3} {:<22} predicted {:<24} computed {}",
                    if c.ok { "ok" } else { "BAD" },
                    c.name,
                    c.predicted,
                    c.computed
                );
            }
        }
    }
    let m = &r.summary;
    let _ = writeln!(
        s,
        "{} cases {:?}: {} pass, {} fail, {} flagged, {} skipped, {} side-condition violations",
        r.family, r.cases, m.pass, m.fail, m.flagged, m.skipped, m.side_condition_violations
    );
    s
}

pub fn render_scan(r: &ScanReport) -> String {
    let mut s = String::new();
    let c = &r.counts;
    let _ = writeln!(
        s,
        "box B={} ({}), {} visited, {} random samples",
        r.config.bound,
        if r.config.raw { "raw" } else { "orbit representatives" },
        c.visited,
        c.random_samples
    );
    let _ = writeln!(
        s,
        "not almost free {}, not effective {}, selected {}, positive {}",
        c.not_almost_free, c.not_effective, c.selected, c.positive
    );
    let _ = writeln!(s, "positive shapes     {:?}", c.shapes_positive);
    let _ = writeln!(s, "non-positive shapes {:?}", c.shapes_not_positive);
    let _ = writeln!(s, "order-equal but distinct groups: {}", c.order_equal_but_distinct);
    for a in &r.config.assertions {
        let n = c.checked.get(a.name()).copied().unwrap_or(0);
        let bad = c.counterexamples.get(a.name()).copied().unwrap_or(0);
        let _ = writeln!(s, "{:<24} checked {n:>8}  counterexamples {bad}", a.name());
    }
    for x in &r.counterexamples {
        let _ = writeln!(s, "  COUNTEREXAMPLE {} {}: {}", x.assertion.name(), x.params, x.detail);
    }
    let _ = writeln!(
        s,
        "positive with three singular points: {} stored",
        r.three_point_positive.len()
    );
    for t in &r.three_point_positive {
        let _ = writeln!(s, "  {t}");
    }
    let _ = writeln!(s, "elapsed {} ms", r.run.elapsed_ms);
    s
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn run_command(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Analyze(a) => {
            let t = a.params.resolve()?;
            let r = analyze(&t, a.max_degree)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            let text = match a.format {
                Format::Text => render_analysis(&r),
                Format::Json => to_json(&r),
            };
            emit(a.out.as_deref(), &text)?;
            Ok(EXIT_PASS)
        }
        Command::Scan(a) => {
            let r = run_scan(&a.config())?;
            let text = match a.format {
                Format::Text => render_scan(&r),
                Format::Json => to_json(&r),
            };
            emit(a.out.as_deref(), &text)?;
            Ok(if r.passed() { EXIT_PASS } else { EXIT_COUNTEREXAMPLE })
        }
        Command::Graph(a) => {
            let t = a.params.resolve()?;
            let (g, warnings) = graph_with_warnings(&t)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            emit(a.out.as_deref(), &export_dot(&g))?;
            if let Some(path) = &a.svg {
                let verdict = admits_positive_curvature(&t)?;
                let svg = triangles_svg(&triangles(&t), Some(&verdict));
                std::fs::write(path, svg).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            }
            Ok(EXIT_PASS)
        }
        Command::Verify(a) => {
            let family: Family = a.family.parse()?;
            let mut fixed = a.fix.clone();
            for (name, v) in [("k", a.k), ("l", a.l), ("u", a.u)] {
                if let Some(v) = v {
                    fixed.push((name.to_string(), v));
                }
            }
            let r = verify(family, a.case, a.range, &fixed, a.max_degree)?;
            let text = match a.format {
                Format::Text => render_verify(&r, a.all),
                Format::Json => to_json(&r),
            };
            emit(a.out.as_deref(), &text)?;
            Ok(if r.passed() { EXIT_PASS } else { EXIT_COUNTEREXAMPLE })
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match run_command(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wallach_analysis() {
        let r = analyze(&TorusParams::wallach(), 24).unwrap();
        assert!(r.freeness.free && r.freeness.effective);
        assert!(r.singular_graph.sigma_is_empty());
        assert_eq!(r.curvature.label(), "positive_after_swap");
        let ranks: Vec<usize> = r.cohomology.groups[..7].iter().map(AbelianGroup::free_rank).collect();
        assert_eq!(ranks, [1, 0, 2, 0, 2, 0, 1]);
        let back: AnalysisReport = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(back, r);
        assert!(render_analysis(&r).contains("positive after swap"));
    }

    #[test]
    fn smooth_sphere_analysis() {
        let t: TorusParams = "p=0,1,-1;q=0,0,0;a=-3,0,-1;b=0,-2,-2".parse().unwrap();
        let r = analyze(&t, 24).unwrap();
        assert_eq!(r.cohomology.groups[6].to_string(), "Z + Z/3");
        assert_eq!(r.cohomology.stable.as_ref().unwrap().group.to_string(), "Z/3 + Z/3");
        assert!(r.localization.unwrap().holds);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run([
                "eschenburg",
                "analyze",
                "--p",
                "1,2",
                "--q",
                "0,0,0",
                "--a",
                "0,1,-1",
                "--b",
                "0,0,0"
            ]),
            EXIT_USAGE
        );
        assert_eq!(
            run([
                "eschenburg",
                "analyze",
                "--p",
                "1,1,1",
                "--q",
                "1,1,1",
                "--a",
                "0,0,0",
                "--b",
                "0,0,0"
            ]),
            EXIT_USAGE
        );
        assert_eq!(run(["eschenburg", "verify", "no-such-family"]), EXIT_USAGE);
        assert_eq!(run(["eschenburg", "frobnicate"]), EXIT_USAGE);
        assert_eq!(
            run([
                "eschenburg",
                "verify",
                "example-two-singular",
                "--k",
                "3",
                "--l",
                "1",
                "--range",
                "1"
            ]),
            EXIT_PASS
        );
    }

    #[test]
    fn param_sources_agree() {
        let flags = ParamArgs {
            p: Some("1,0,-1".into()),
            q: Some("0,0,0".into()),
            a: Some("0,1,-1".into()),
            b: Some("0,0,0".into()),
            ..Default::default()
        };
        let text = ParamArgs {
            params: Some("p=1,0,-1;q=0,0,0;a=0,1,-1;b=0,0,0".into()),
            ..Default::default()
        };
        assert_eq!(flags.resolve().unwrap(), text.resolve().unwrap());
        assert_eq!(text.resolve().unwrap(), TorusParams::wallach());
        let missing = ParamArgs {
            p: Some("1,0,-1".into()),
            ..Default::default()
        };
        assert!(matches!(missing.resolve(), Err(Error::Parse(_))));
    }

    #[test]
    fn verify_two_singular() {
        let fixed = [("k".to_string(), 3), ("l".to_string(), 1)];
        let r = verify(Family::ExampleTwoSingular, None, 2, &fixed, 12).unwrap();
        assert!(r.passed());
        assert!(r
            .rows
            .iter()
            .all(|row| row.fixture.predictions.stable_order == Some(5.into())));
        assert!(render_verify(&r, true).contains("stable order"));
    }
}
