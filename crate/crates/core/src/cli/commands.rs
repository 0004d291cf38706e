//! One function per subcommand. Each returns the full [`Outcome`]; nothing
//! here prints.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::output;
use super::{Format, Outcome, RunConfig, EXIT_FORBIDDEN, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use crate::closed_form::{self, ClosedFormFamily, FamilyTag, GeneralSweep};
use crate::engine::{self, scale_action, Trajectory};
use crate::error::{Error, Singularity};
use crate::numeric::ExactRational;
use crate::reduction::{self, invariants_by_recurrence, invariants_from_trajectory};
use crate::symmetry::{
    self, determining_check, invariant_annihilation, lsc_residual, GeneratorSpec, LscPoint,
};

/// Range of `n` for the determining and annihilation checks.
const SYMMETRY_INDEX_RANGE: std::ops::RangeInclusive<i64> = 0..=10;
/// Largest `n` at which random symmetry-condition points are drawn.
const SYMMETRY_MAX_N: usize = 10;
const MAX_REDRAWS: usize = 1000;

fn error_outcome(err: Error) -> Outcome {
    let code = match err {
        Error::Forbidden(_) => EXIT_FORBIDDEN,
        _ => EXIT_USAGE,
    };
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {err}\n"),
        code,
    }
}

macro_rules! try_or_exit {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(err) => return error_outcome(err.into()),
        }
    };
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum StatusRecord {
    Completed,
    Singular {
        step: usize,
        factor: String,
    },
    Forbidden {
        step: usize,
        factor: String,
        condition: String,
    },
}

impl StatusRecord {
    fn singular(s: Singularity) -> Self {
        StatusRecord::Singular {
            step: s.step,
            factor: s.factor.to_string(),
        }
    }

    fn csv_row(&self) -> Option<Vec<String>> {
        match self {
            StatusRecord::Completed => None,
            StatusRecord::Singular { step, factor } => {
                Some(vec!["singular-at".into(), step.to_string(), factor.clone()])
            }
            StatusRecord::Forbidden {
                step,
                factor,
                condition,
            } => Some(vec![
                "forbidden".into(),
                step.to_string(),
                factor.clone(),
                condition.clone(),
            ]),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct PointRow {
    n: i64,
    x: ExactRational,
    y: ExactRational,
}

fn trajectory_rows(trajectory: &Trajectory) -> Vec<PointRow> {
    trajectory
        .entries()
        .map(|e| PointRow {
            n: e.n,
            x: e.x.clone(),
            y: e.y.clone(),
        })
        .collect()
}

fn render_points(
    rows: &[PointRow],
    status: &StatusRecord,
    format: Format,
    extra: Option<(&str, &str)>,
) -> String {
    match format {
        Format::Csv => {
            let body = rows
                .iter()
                .map(|r| vec![r.n.to_string(), r.x.to_string(), r.y.to_string()])
                .chain(status.csv_row());
            output::csv(&["n", "x", "y"], body)
        }
        Format::Json => {
            let mut doc = serde_json::Map::new();
            if let Some((key, value)) = extra {
                doc.insert(key.into(), value.into());
            }
            doc.insert("rows".into(), serde_json::to_value(rows).expect("rows"));
            doc.insert(
                "status".into(),
                serde_json::to_value(status).expect("status"),
            );
            output::json(&doc)
        }
    }
}

pub fn simulate(config: &RunConfig, steps: usize, format: Format) -> Outcome {
    let trajectory = try_or_exit!(engine::simulate(
        &config.coefficients,
        &config.initial,
        steps
    ));
    let status = match trajectory.status().singularity() {
        Some(s) => StatusRecord::singular(s),
        None => StatusRecord::Completed,
    };
    let code = if trajectory.status().singularity().is_some() {
        EXIT_FORBIDDEN
    } else {
        EXIT_OK
    };
    Outcome {
        stdout: render_points(&trajectory_rows(&trajectory), &status, format, None),
        stderr: String::new(),
        code,
    }
}

/// `a..b` (inclusive), a single index, or a comma-separated list.
pub fn parse_indices(spec: &str) -> Result<Vec<i64>, Error> {
    let bad = || Error::Domain(format!("malformed index specification {spec:?}"));
    let parse_one = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    let indices = if let Some((from, to)) = spec.split_once("..") {
        let (from, to) = (parse_one(from)?, parse_one(to)?);
        if to < from {
            return Err(bad());
        }
        (from..=to).collect()
    } else {
        spec.split(',')
            .map(parse_one)
            .collect::<Result<Vec<_>, _>>()?
    };
    if indices.is_empty() || indices.iter().any(|&m| m < -1) {
        return Err(bad());
    }
    Ok(indices)
}

pub fn closed_form(
    config: &RunConfig,
    family: &str,
    indices: Option<&str>,
    steps: usize,
    format: Format,
) -> Outcome {
    let family = if family == "auto" {
        ClosedFormFamily::auto(&config.coefficients)
    } else {
        let Some(tag) = FamilyTag::parse(family) else {
            return Outcome::usage(format!("error: unknown family {family:?}\n"));
        };
        try_or_exit!(ClosedFormFamily::new(tag, &config.coefficients))
    };
    let indices = match indices {
        Some(spec) => try_or_exit!(parse_indices(spec)),
        None => (0..=steps as i64).collect(),
    };

    let mut rows = Vec::with_capacity(indices.len());
    let mut status = StatusRecord::Completed;
    for &m in &indices {
        match family.solve(&config.initial, m) {
            Ok((x, y)) => rows.push(PointRow { n: m, x, y }),
            Err(Error::Forbidden(f)) => {
                status = StatusRecord::Forbidden {
                    step: f.singularity.step,
                    factor: f.singularity.factor.to_string(),
                    condition: f.condition,
                };
                break;
            }
            Err(err) => return error_outcome(err),
        }
    }
    let code = match status {
        StatusRecord::Completed => EXIT_OK,
        _ => EXIT_FORBIDDEN,
    };
    let tag = family.tag().as_str();
    Outcome {
        stdout: render_points(&rows, &status, format, Some(("family", tag))),
        stderr: format!("family: {tag}\n"),
        code,
    }
}

/// What one method produced at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Observed {
    Pair(ExactRational, ExactRational),
    Singular(Singularity),
    Failed(String),
}

impl Observed {
    fn from_result(result: Result<(ExactRational, ExactRational), Error>) -> Self {
        match result {
            Ok((x, y)) => Observed::Pair(x, y),
            Err(Error::Forbidden(f)) => Observed::Singular(f.singularity),
            Err(err) => Observed::Failed(err.to_string()),
        }
    }
}

impl fmt::Display for Observed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observed::Pair(x, y) => write!(f, "({x}, {y})"),
            Observed::Singular(s) => write!(f, "{s}"),
            Observed::Failed(e) => write!(f, "error: {e}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub checked: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub method: String,
    pub index: i64,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub steps: usize,
    pub oracle_status: String,
    pub methods: Vec<MethodSummary>,
    pub mismatches: Vec<Mismatch>,
}

impl CompareReport {
    pub fn total_mismatches(&self) -> usize {
        self.mismatches.len()
    }
}

struct Tally<'a> {
    report: &'a mut CompareReport,
    method: String,
    checked: usize,
    mismatches: usize,
}

impl<'a> Tally<'a> {
    fn new(report: &'a mut CompareReport, method: impl Into<String>) -> Self {
        Tally {
            report,
            method: method.into(),
            checked: 0,
            mismatches: 0,
        }
    }

    fn check<T: PartialEq + fmt::Display>(&mut self, index: i64, expected: &T, actual: &T) {
        self.checked += 1;
        if expected != actual {
            self.mismatches += 1;
            self.report.mismatches.push(Mismatch {
                method: self.method.clone(),
                index,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    fn finish(self) {
        self.report.methods.push(MethodSummary {
            method: self.method,
            checked: self.checked,
            mismatches: self.mismatches,
        });
    }
}

struct OptionalSingularity(Option<Singularity>);

impl PartialEq for OptionalSingularity {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl fmt::Display for OptionalSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(s) => write!(f, "{s}"),
            None => f.write_str("none"),
        }
    }
}

/// Exact comparison of direct iteration against every applicable closed
/// form, the invariant pipeline and the forbidden-set scan.
///
/// With `corrupt` set, the general-family value at the last index is
/// perturbed so the harness can be seen to fail.
pub fn compare_report(
    config: &RunConfig,
    steps: usize,
    corrupt: bool,
) -> Result<CompareReport, Error> {
    let quad = &config.coefficients;
    let init = &config.initial;
    let oracle = engine::simulate(quad, init, steps)?;
    let last = oracle.last_index();
    let singularity = oracle.status().singularity();
    let expected_at = |m: i64| -> Observed {
        if m <= last {
            Observed::Pair(
                oracle.x(m).expect("in range").clone(),
                oracle.y(m).expect("in range").clone(),
            )
        } else {
            Observed::Singular(singularity.expect("truncated trajectories are singular"))
        }
    };

    let mut report = CompareReport {
        steps,
        oracle_status: OptionalSingularity(singularity).to_string(),
        methods: Vec::new(),
        mismatches: Vec::new(),
    };

    for family in ClosedFormFamily::applicable(quad) {
        let sweep = match family {
            ClosedFormFamily::General(_) => Some(GeneralSweep::new(quad, init, steps)?),
            _ => None,
        };
        let mut tally = Tally::new(&mut report, format!("closed-form:{}", family.tag()));
        for m in -1..=steps as i64 {
            let result = match &sweep {
                Some(sweep) => sweep.solve(m),
                None => family.solve(init, m),
            };
            let mut actual = Observed::from_result(result);
            if corrupt && family.tag() == FamilyTag::General && m == steps as i64 {
                if let Observed::Pair(x, _) = &mut actual {
                    *x += ExactRational::one();
                }
            }
            tally.check(m, &expected_at(m), &actual);
        }
        tally.finish();
    }

    let from_trajectory = invariants_from_trajectory(&oracle);
    let (u0, v0) = reduction::initial_invariants(init);
    let by_recurrence = invariants_by_recurrence(quad, u0.clone(), v0.clone(), steps)?;

    let mut tally = Tally::new(&mut report, "reduction:recurrence");
    for (n, u, v) in from_trajectory.entries() {
        let expected = Observed::Pair(u.clone(), v.clone());
        let actual = Observed::Pair(
            by_recurrence.u(n).expect("in range").clone(),
            by_recurrence.v(n).expect("in range").clone(),
        );
        tally.check(n as i64, &expected, &actual);
    }
    tally.finish();

    let mut tally = Tally::new(&mut report, "reduction:closed-form");
    for (n, u, v) in from_trajectory.entries() {
        let expected = Observed::Pair(u.clone(), v.clone());
        let actual = Observed::from_result(reduction::invariants_closed_form(quad, &u0, &v0, n));
        tally.check(n as i64, &expected, &actual);
    }
    tally.finish();

    let mut tally = Tally::new(&mut report, "reduction:reconstruct");
    let rebuilt = reduction::reconstruct(init, &by_recurrence, last as usize)?;
    for (expected, actual) in oracle.entries().zip(rebuilt.entries()) {
        tally.check(
            expected.n,
            &Observed::Pair(expected.x.clone(), expected.y.clone()),
            &Observed::Pair(actual.x.clone(), actual.y.clone()),
        );
    }
    let full = reduction::reconstruct(init, &by_recurrence, steps).map(|_| ());
    let full_status = OptionalSingularity(match full {
        Ok(()) => None,
        Err(Error::Forbidden(f)) => Some(f.singularity),
        Err(err) => return Err(err),
    });
    tally.check(
        steps as i64,
        &OptionalSingularity(singularity),
        &full_status,
    );
    tally.finish();

    let mut tally = Tally::new(&mut report, "forbidden-scan");
    let scanned = OptionalSingularity(closed_form::forbidden_scan(quad, init, steps)?);
    tally.check(steps as i64, &OptionalSingularity(singularity), &scanned);
    tally.finish();

    Ok(report)
}

pub fn compare(config: &RunConfig, steps: usize, format: Format, corrupt: bool) -> Outcome {
    let report = try_or_exit!(compare_report(config, steps, corrupt));
    let total = report.total_mismatches();
    let stdout = match format {
        Format::Csv => output::csv(
            &["method", "checked", "mismatches"],
            report.methods.iter().map(|m| {
                vec![
                    m.method.clone(),
                    m.checked.to_string(),
                    m.mismatches.to_string(),
                ]
            }),
        ),
        Format::Json => output::json(&report),
    };
    let mut stderr = String::new();
    for m in &report.mismatches {
        stderr.push_str(&format!(
            "mismatch: {} at {}: expected {}, got {}\n",
            m.method, m.index, m.expected, m.actual
        ));
    }
    stderr.push_str(&format!("{total} mismatches\n"));
    let code = if total > 0 {
        EXIT_MISMATCH
    } else if report.oracle_status != "none" {
        EXIT_FORBIDDEN
    } else {
        EXIT_OK
    };
    Outcome {
        stdout,
        stderr,
        code,
    }
}

/// A rational `p/q` with `p, q` drawn uniformly from `[-9, 9] \ {0}`.
pub fn sample_rational(rng: &mut ChaCha8Rng) -> ExactRational {
    let mut digit = || {
        let k: i64 = rng.gen_range(0..18);
        if k < 9 {
            k - 9
        } else {
            k - 8
        }
    };
    let p = digit();
    let q = digit();
    ExactRational::new(p, q).expect("nonzero denominator")
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub n: i64,
    pub first: ExactRational,
    pub second: ExactRational,
}

#[derive(Debug, Clone, Serialize)]
pub struct LscSample {
    pub sample: usize,
    pub n: usize,
    pub point: [ExactRational; 4],
    pub first: ExactRational,
    pub second: ExactRational,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiniteCheck {
    pub r: ExactRational,
    pub applicable: bool,
    pub trajectory_mismatches: usize,
    pub invariant_mismatches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorReport {
    pub generator: String,
    pub description: String,
    pub determining: Vec<ResidualRow>,
    pub annihilation: Vec<ResidualRow>,
    pub lsc: Vec<LscSample>,
    pub finite: Vec<FiniteCheck>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn resolve_generators(
    name: &str,
    c0: Option<&str>,
    c1: Option<&str>,
) -> Result<Vec<(String, GeneratorSpec)>, Error> {
    let builtin = |n: &str| -> Option<GeneratorSpec> {
        match n {
            "x2" => Some(GeneratorSpec::x2()),
            "x1-paper" => Some(GeneratorSpec::x1_paper()),
            "x1-corrected" => Some(GeneratorSpec::x1_corrected()),
            _ => None,
        }
    };
    match name {
        "all" => Ok(["x2", "x1-corrected", "x1-paper"]
            .into_iter()
            .map(|n| (n.to_string(), builtin(n).expect("builtin")))
            .collect()),
        "custom" => {
            let (Some(c0), Some(c1)) = (c0, c1) else {
                return Err(Error::Domain(
                    "custom generator needs --c0 and --c1".to_string(),
                ));
            };
            let spec =
                GeneratorSpec::from_constants(ExactRational::parse(c0)?, ExactRational::parse(c1)?);
            Ok(vec![(format!("custom(c0={c0},c1={c1})"), spec)])
        }
        other => builtin(other)
            .map(|g| vec![(other.to_string(), g)])
            .ok_or_else(|| Error::Domain(format!("unknown generator {other:?}"))),
    }
}

/// Draws `samples` non-singular points `(n, x_n, x_{n+1}, y_n, y_{n+1})`.
pub fn sample_points(
    config: &RunConfig,
    samples: usize,
    seed: u64,
) -> Result<Vec<(usize, LscPoint)>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut drawn = None;
        for _ in 0..MAX_REDRAWS {
            let n = rng.gen_range(0..=SYMMETRY_MAX_N);
            let point = LscPoint {
                x_n: sample_rational(&mut rng),
                x_next: sample_rational(&mut rng),
                y_n: sample_rational(&mut rng),
                y_next: sample_rational(&mut rng),
            };
            match symmetry::omega(&config.coefficients, n, &point) {
                Ok(_) => {
                    drawn = Some((n, point));
                    break;
                }
                Err(Error::Domain(_)) => continue,
                Err(err) => return Err(err),
            }
        }
        points.push(drawn.ok_or_else(|| {
            Error::Domain(
                "could not draw a non-singular point for the symmetry condition".to_string(),
            )
        })?);
    }
    Ok(points)
}

/// Counts entrywise differences between `scaled` and the image of
/// `base` under the group action.
fn finite_check(
    config: &RunConfig,
    generator: &GeneratorSpec,
    r: &ExactRational,
    steps: usize,
) -> Result<FiniteCheck, Error> {
    let scaled_init = match scale_action(&config.initial, r, generator) {
        Ok(init) => init,
        Err(Error::Domain(_)) => {
            return Ok(FiniteCheck {
                r: r.clone(),
                applicable: false,
                trajectory_mismatches: 0,
                invariant_mismatches: 0,
            })
        }
        Err(err) => return Err(err),
    };
    let base = engine::simulate(&config.coefficients, &config.initial, steps)?;
    let scaled = engine::simulate(&config.coefficients, &scaled_init, steps)?;

    let mut trajectory_mismatches = usize::from(base.status() != scaled.status());
    trajectory_mismatches += base.len().abs_diff(scaled.len());
    for (b, s) in base.entries().zip(scaled.entries()) {
        let power = |e: ExactRational| -> Result<ExactRational, Error> {
            r.pow(
                e.to_i64()
                    .expect("integer exponent checked by scale_action"),
            )
        };
        if &(power(generator.alpha(b.n))? * b.x) != s.x {
            trajectory_mismatches += 1;
        }
        if &(power(generator.lambda(b.n))? * b.y) != s.y {
            trajectory_mismatches += 1;
        }
    }

    let base_inv = invariants_from_trajectory(&base);
    let scaled_inv = invariants_from_trajectory(&scaled);
    let mut invariant_mismatches = base_inv.len().abs_diff(scaled_inv.len());
    for ((_, bu, bv), (_, su, sv)) in base_inv.entries().zip(scaled_inv.entries()) {
        invariant_mismatches += usize::from(bu != su) + usize::from(bv != sv);
    }
    Ok(FiniteCheck {
        r: r.clone(),
        applicable: true,
        trajectory_mismatches,
        invariant_mismatches,
    })
}

/// Scale factors used for the finite group-action check.
pub fn scale_factors() -> [ExactRational; 3] {
    [
        ExactRational::from_integer(2),
        ExactRational::new(3, 2).expect("literal"),
        ExactRational::new(-5, 7).expect("literal"),
    ]
}

pub fn generator_report(
    config: &RunConfig,
    name: &str,
    generator: &GeneratorSpec,
    points: &[(usize, LscPoint)],
    steps: usize,
) -> Result<GeneratorReport, Error> {
    let determining: Vec<ResidualRow> = determining_check(generator, SYMMETRY_INDEX_RANGE)
        .into_iter()
        .map(|r| ResidualRow {
            n: r.n,
            first: r.first,
            second: r.second,
        })
        .collect();
    let annihilation = SYMMETRY_INDEX_RANGE
        .map(|n| {
            invariant_annihilation(generator, n).map(|(first, second)| ResidualRow {
                n,
                first,
                second,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let lsc = points
        .iter()
        .enumerate()
        .map(|(sample, (n, point))| {
            lsc_residual(generator, &config.coefficients, *n, point).map(|(first, second)| {
                LscSample {
                    sample,
                    n: *n,
                    point: [
                        point.x_n.clone(),
                        point.x_next.clone(),
                        point.y_n.clone(),
                        point.y_next.clone(),
                    ],
                    first,
                    second,
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let finite = scale_factors()
        .iter()
        .map(|r| finite_check(config, generator, r, steps))
        .collect::<Result<Vec<_>, _>>()?;

    let zero_rows =
        |rows: &[ResidualRow]| rows.iter().all(|r| r.first.is_zero() && r.second.is_zero());
    let pass = zero_rows(&determining)
        && zero_rows(&annihilation)
        && lsc.iter().all(|s| s.first.is_zero() && s.second.is_zero())
        && finite
            .iter()
            .all(|f| f.trajectory_mismatches == 0 && f.invariant_mismatches == 0);
    let note = (name == "x1-paper").then(|| {
        "x·∂x + y·∂y is not a symmetry: λ_n + α_{n+1} = α_n + λ_{n+1} = 2 for every n; \
         the solution of the determining relations with c0 = 1, c1 = 0 is −x·∂x + y·∂y (x1-corrected)"
            .to_string()
    });
    Ok(GeneratorReport {
        generator: name.to_string(),
        description: generator.to_string(),
        determining,
        annihilation,
        lsc,
        finite,
        pass,
        note,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn verify_symmetry(
    config: &RunConfig,
    generator: &str,
    c0: Option<&str>,
    c1: Option<&str>,
    samples: usize,
    seed: u64,
    steps: usize,
    format: Format,
) -> Outcome {
    let generators = try_or_exit!(resolve_generators(generator, c0, c1));
    let points = try_or_exit!(sample_points(config, samples, seed));
    let reports = try_or_exit!(generators
        .iter()
        .map(|(name, g)| generator_report(config, name, g, &points, steps))
        .collect::<Result<Vec<_>, _>>());

    let stdout = match format {
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = Vec::new();
            let verdict = |ok: bool| if ok { "ok" } else { "nonzero" }.to_string();
            for rep in &reports {
                let g = &rep.generator;
                for (check, list) in [
                    ("determining", &rep.determining),
                    ("annihilation", &rep.annihilation),
                ] {
                    for r in list {
                        rows.push(vec![
                            g.clone(),
                            check.into(),
                            r.n.to_string(),
                            r.n.to_string(),
                            r.first.to_string(),
                            r.second.to_string(),
                            verdict(r.first.is_zero() && r.second.is_zero()),
                        ]);
                    }
                }
                for s in &rep.lsc {
                    rows.push(vec![
                        g.clone(),
                        "lsc".into(),
                        s.sample.to_string(),
                        s.n.to_string(),
                        s.first.to_string(),
                        s.second.to_string(),
                        verdict(s.first.is_zero() && s.second.is_zero()),
                    ]);
                }
                for f in &rep.finite {
                    let result = if !f.applicable {
                        "skipped".to_string()
                    } else {
                        verdict(f.trajectory_mismatches == 0 && f.invariant_mismatches == 0)
                    };
                    rows.push(vec![
                        g.clone(),
                        "finite".into(),
                        f.r.to_string(),
                        String::new(),
                        f.trajectory_mismatches.to_string(),
                        f.invariant_mismatches.to_string(),
                        result,
                    ]);
                }
                if let Some(note) = &rep.note {
                    rows.push(vec![
                        g.clone(),
                        "note".into(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        note.clone(),
                    ]);
                }
                rows.push(vec![
                    g.clone(),
                    "verdict".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    if rep.pass { "PASS" } else { "FAIL" }.into(),
                ]);
            }
            output::csv(
                &[
                    "generator",
                    "check",
                    "index",
                    "n",
                    "first",
                    "second",
                    "result",
                ],
                rows,
            )
        }
        Format::Json => output::json(&reports),
    };
    let stderr: String = reports
        .iter()
        .map(|r| {
            format!(
                "{}: {}\n",
                r.generator,
                if r.pass { "PASS" } else { "FAIL" }
            )
        })
        .collect();
    let code = if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    Outcome {
        stdout,
        stderr,
        code,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ForbiddenReport {
    pub horizon: usize,
    pub family: String,
    pub first_singular: Option<ForbiddenFinding>,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForbiddenFinding {
    pub step: usize,
    pub factor: String,
    pub condition: String,
}

pub fn forbidden_report(config: &RunConfig, horizon: usize) -> Result<ForbiddenReport, Error> {
    let quad = &config.coefficients;
    let init = &config.initial;
    let scanned = closed_form::forbidden_scan(quad, init, horizon)?;
    let oracle = engine::simulate(quad, init, horizon)?
        .status()
        .singularity();
    let family = ClosedFormFamily::auto(quad);
    let mut consistent = scanned == oracle;
    let first_singular = match scanned {
        None => None,
        Some(s) => {
            let condition = match family.solve(init, s.step as i64 + 1) {
                Err(Error::Forbidden(f)) => {
                    consistent &= f.singularity == s;
                    f.condition
                }
                Err(err) => return Err(err),
                Ok(_) => {
                    consistent = false;
                    "closed form did not flag this step".to_string()
                }
            };
            Some(ForbiddenFinding {
                step: s.step,
                factor: s.factor.to_string(),
                condition,
            })
        }
    };
    Ok(ForbiddenReport {
        horizon,
        family: family.tag().to_string(),
        first_singular,
        consistent,
    })
}

pub fn forbidden(config: &RunConfig, horizon: usize, format: Format) -> Outcome {
    let report = try_or_exit!(forbidden_report(config, horizon));
    let stdout = match format {
        Format::Csv => {
            let row = match &report.first_singular {
                Some(f) => vec![
                    f.step.to_string(),
                    f.factor.clone(),
                    f.condition.clone(),
                    report.family.clone(),
                ],
                None => vec![
                    "none".into(),
                    String::new(),
                    String::new(),
                    report.family.clone(),
                ],
            };
            output::csv(&["step", "factor", "condition", "family"], [row])
        }
        Format::Json => output::json(&report),
    };
    let code = if !report.consistent {
        EXIT_MISMATCH
    } else if report.first_singular.is_some() {
        EXIT_FORBIDDEN
    } else {
        EXIT_OK
    };
    let stderr = if report.consistent {
        String::new()
    } else {
        "mismatch: closed-form condition disagrees with direct iteration\n".to_string()
    };
    Outcome {
        stdout,
        stderr,
        code,
    }
}

#[derive(Debug, Clone, Serialize)]
struct ReduceRow {
    n: usize,
    u_traj: ExactRational,
    u_rec: ExactRational,
    u_cf: ExactRational,
    v_traj: ExactRational,
    v_rec: ExactRational,
    v_cf: ExactRational,
}

pub fn reduce(config: &RunConfig, steps: usize, format: Format) -> Outcome {
    let quad = &config.coefficients;
    let trajectory = try_or_exit!(engine::simulate(quad, &config.initial, steps));
    let last = trajectory.last_index() as usize;
    let from_trajectory = invariants_from_trajectory(&trajectory);
    let (u0, v0) = reduction::initial_invariants(&config.initial);
    let by_recurrence = try_or_exit!(invariants_by_recurrence(quad, u0.clone(), v0.clone(), last));

    let mut rows = Vec::with_capacity(last + 1);
    let mut mismatches = 0usize;
    for (n, u, v) in from_trajectory.entries() {
        let (u_cf, v_cf) = try_or_exit!(reduction::invariants_closed_form(quad, &u0, &v0, n));
        let u_rec = by_recurrence.u(n).expect("in range").clone();
        let v_rec = by_recurrence.v(n).expect("in range").clone();
        if *u != u_rec || *u != u_cf || *v != v_rec || *v != v_cf {
            mismatches += 1;
        }
        rows.push(ReduceRow {
            n,
            u_traj: u.clone(),
            u_rec,
            u_cf,
            v_traj: v.clone(),
            v_rec,
            v_cf,
        });
    }
    let status = match trajectory.status().singularity() {
        Some(s) => StatusRecord::singular(s),
        None => StatusRecord::Completed,
    };
    let stdout = match format {
        Format::Csv => output::csv(
            &["n", "U_traj", "U_rec", "U_cf", "V_traj", "V_rec", "V_cf"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.u_traj.to_string(),
                        r.u_rec.to_string(),
                        r.u_cf.to_string(),
                        r.v_traj.to_string(),
                        r.v_rec.to_string(),
                        r.v_cf.to_string(),
                    ]
                })
                .chain(status.csv_row()),
        ),
        Format::Json => output::json(&serde_json::json!({ "rows": rows, "status": status })),
    };
    let code = if mismatches > 0 {
        EXIT_MISMATCH
    } else if trajectory.status().singularity().is_some() {
        EXIT_FORBIDDEN
    } else {
        EXIT_OK
    };
    let stderr = if mismatches > 0 {
        format!("{mismatches} rows disagree\n")
    } else {
        String::new()
    };
    Outcome {
        stdout,
        stderr,
        code,
    }
}
