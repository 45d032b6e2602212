//! Verification driver: runs check suites over the core engine and renders
//! the results as text or JSON.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use hinv_core::clifford::{clifford_relations_hold, h_closure_check, h_det_check, iota_multiplicativity_check};
use hinv_core::constructions::{
    multiplicity_report, verify_independence, verify_invariance, verify_shifted_field, verify_support_filtration, CheckRecord,
    Family, FamilySpec, LambdaMode, ShiftedField, Status,
};
use num::BigRational;
use hinv_core::orbits::{complex_orbit_check, default_zetas, enumerate_strata};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

/// Random composite group elements added to every invariance check.
pub const COMPOSITES: usize = 20;
/// Distinct ζ values fed to the complexified orbit check.
pub const ZETA_COUNT: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    #[value(name = "lemma-d")]
    #[serde(rename = "lemma-d")]
    ShiftedField,
    Invariance,
    Independence,
    Support,
    Orbits,
    ComplexOrbits,
    Multiplicity,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 8] = [
        Suite::Algebra,
        Suite::ShiftedField,
        Suite::Invariance,
        Suite::Independence,
        Suite::Support,
        Suite::Orbits,
        Suite::ComplexOrbits,
        Suite::Multiplicity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::ShiftedField => "lemma-d",
            Suite::Invariance => "invariance",
            Suite::Independence => "independence",
            Suite::Support => "support",
            Suite::Orbits => "orbits",
            Suite::ComplexOrbits => "complex-orbits",
            Suite::Multiplicity => "multiplicity",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// `formal` or a rational `p/q`.
pub fn parse_lambda(s: &str) -> Result<LambdaMode, String> {
    if s.eq_ignore_ascii_case("formal") {
        return Ok(LambdaMode::Formal);
    }
    BigRational::from_str(s.trim())
        .map(LambdaMode::Value)
        .map_err(|_| format!("expected `formal` or a rational p/q, got `{s}`"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub lmax: u32,
    pub lambda: LambdaMode,
    pub seed: u64,
    pub samples: usize,
    pub suites: BTreeSet<Suite>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 3,
            lmax: 4,
            lambda: LambdaMode::Formal,
            seed: 0,
            samples: 100,
            suites: BTreeSet::from([Suite::All]),
        }
    }
}

impl RunConfig {
    fn selected(&self, s: Suite) -> bool {
        self.suites.contains(&Suite::All) || self.suites.contains(&s)
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.n,
            lmax: self.lmax,
            lambda: self.lambda.to_string(),
            seed: self.seed,
            samples: self.samples,
            suites: self.suites.iter().map(|s| s.name().to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub lmax: u32,
    pub lambda: String,
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: ConfigEcho,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: ConfigEcho, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks,
            summary,
        }
    }

    /// 0 when no check failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }
}

/// Wall time per check id; reported in text mode only so JSON stays
/// byte-stable.
pub type Timings = Vec<(String, Duration)>;

type Job = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync>;

fn lambda_two() -> LambdaMode {
    LambdaMode::Value(BigRational::from_integer(2.into()))
}

fn jobs_for(suite: Suite, cfg: &RunConfig) -> Vec<Job> {
    let RunConfig {
        n,
        lmax,
        seed,
        samples,
        ..
    } = cfg.clone();
    let lambda = cfg.lambda.clone();
    let mut jobs: Vec<Job> = Vec::new();
    match suite {
        Suite::Algebra => {
            jobs.push(Box::new(|| {
                vec![CheckRecord::new(
                    "algebra/relations",
                    "ε² = 1, i² = -1 and iε = -εi in the twisted algebra",
                    "relations of the split Clifford algebra",
                )
                .finish(clifford_relations_hold(), json!({}))]
            }));
            jobs.push(Box::new(move || {
                let r = iota_multiplicativity_check(n, samples, seed);
                vec![CheckRecord::new(
                    format!("algebra/iota-multiplicative/n{n}"),
                    format!("ι(xy) = ι(x)ι(y) on {samples} random {n}×{n} matrices"),
                    "real matrix representation is multiplicative",
                )
                .finish(r.failures.is_empty(), json!({ "samples": r.samples, "failures": r.failures }))]
            }));
            jobs.push(Box::new(move || {
                let record = CheckRecord::new(
                    format!("algebra/det/n{n}"),
                    "det ι(g) = 1 for the generators and a general element, symbolically",
                    "H lies in SL(2n, R)",
                );
                vec![match h_det_check(n) {
                    Ok(recs) => {
                        let ok = recs.iter().all(|r| r.passed());
                        let dets: Vec<_> = recs.iter().map(|r| json!({ "element": r.label, "det": r.det.to_string() })).collect();
                        record.finish(ok, json!({ "determinants": dets }))
                    }
                    Err(e) => record.failed_with(&e),
                }]
            }));
            jobs.push(Box::new(move || {
                let r = h_closure_check(n, samples, seed);
                vec![CheckRecord::new(
                    format!("algebra/closure/n{n}"),
                    format!("products of {samples} random pairs of elements of H stay in H"),
                    "H is closed under multiplication",
                )
                .finish(r.failures.is_empty(), json!({ "samples": r.samples, "failures": r.failures }))]
            }));
        }
        Suite::ShiftedField => {
            if n >= 3 {
                jobs.push(Box::new(move || vec![verify_shifted_field(n, ShiftedField::D)]));
            }
            jobs.push(Box::new(|| vec![verify_shifted_field(2, ShiftedField::Dprime)]));
        }
        Suite::Invariance => {
            for spec in invariance_specs(n, lmax, &lambda) {
                jobs.push(Box::new(move || vec![verify_invariance(&spec, COMPOSITES, seed)]));
            }
        }
        Suite::Independence => {
            let specs = if n >= 3 {
                vec![
                    FamilySpec::new(n, Family::T, 0, lambda.clone()),
                    FamilySpec::new(n, Family::Tbar, 0, lambda.clone()),
                ]
            } else {
                vec![FamilySpec::new(2, Family::T2, 0, lambda_two())]
            };
            for spec in specs {
                jobs.push(Box::new(move || vec![verify_independence(&spec, lmax)]));
            }
        }
        Suite::Support => {
            for j in 2..n {
                jobs.push(Box::new(move || vec![verify_support_filtration(n, j, lmax)]));
            }
        }
        Suite::Orbits => {
            jobs.push(Box::new(move || {
                let record = CheckRecord::new(
                    format!("orbits/n{n}"),
                    format!("H has {n} orbits, of dimensions 1, 3, …, {}, acting transitively on each", 2 * n - 1),
                    "orbit stratification of the real projective space",
                );
                vec![match enumerate_strata(n, samples, seed) {
                    Ok(c) => record.finish(c.passed(), serde_json::to_value(&c).unwrap_or_default()),
                    Err(e) => record.failed_with(&e),
                }]
            }));
        }
        Suite::ComplexOrbits => {
            let per_zeta = (samples / 20).max(1);
            jobs.push(Box::new(move || vec![complex_orbit_check(n, &default_zetas(ZETA_COUNT), per_zeta, seed)]));
        }
        Suite::Multiplicity => {
            jobs.push(Box::new(move || multiplicity_report(n, lmax, samples, seed)));
        }
        Suite::All => {}
    }
    jobs
}

/// T and T̄ at the configured λ plus every `T_{λ,j}` when `n ≥ 3`; the
/// two-dimensional family at λ = 2 otherwise.
pub fn invariance_specs(n: usize, lmax: u32, lambda: &LambdaMode) -> Vec<FamilySpec> {
    if n < 3 {
        return vec![FamilySpec::new(2, Family::T2, lmax, lambda_two())];
    }
    let mut specs = vec![
        FamilySpec::new(n, Family::T, lmax, lambda.clone()),
        FamilySpec::new(n, Family::Tbar, lmax, lambda.clone()),
    ];
    specs.extend((2..n).map(|j| FamilySpec::new(n, Family::Tj(j), lmax, lambda.clone())));
    specs
}

/// Runs the selected suites in parallel; unselected suites contribute one
/// skipped record each.
pub fn run_suite(cfg: &RunConfig) -> (Report, Timings) {
    let mut jobs: Vec<Job> = Vec::new();
    let mut skipped = Vec::new();
    for suite in Suite::CONCRETE {
        if cfg.selected(suite) {
            jobs.extend(jobs_for(suite, cfg));
        } else {
            skipped.push(CheckRecord::new(
                format!("{}/*", suite.name()),
                format!("{} suite not selected", suite.name()),
                suite.name(),
            ));
        }
    }
    let results: Vec<(Vec<CheckRecord>, Duration)> = jobs
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let records = job();
            (records, start.elapsed())
        })
        .collect();
    let mut checks = skipped;
    let mut timings = Timings::new();
    for (records, elapsed) in results {
        for r in &records {
            timings.push((r.id.clone(), elapsed));
        }
        checks.extend(records);
    }
    timings.sort();
    (Report::new(cfg.echo(), checks), timings)
}

pub fn emit_report(report: &Report, timings: &Timings, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "hinv {}  n={} lmax={} lambda={} seed={} samples={}",
                report.version,
                report.config.n,
                report.config.lmax,
                report.config.lambda,
                report.config.seed,
                report.config.samples
            );
            for c in &report.checks {
                let status = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                let time = timings
                    .iter()
                    .find(|(id, _)| id == &c.id)
                    .map(|(_, d)| format!(" ({:.1?})", d))
                    .unwrap_or_default();
                let _ = writeln!(out, "{status} {}{time}: {} [{}]", c.id, c.statement, c.claim);
                if c.status == Status::Fail {
                    let _ = writeln!(out, "     {}", c.details);
                }
            }
            let _ = writeln!(
                out,
                "summary: {} pass, {} fail, {} skipped",
                report.summary.pass, report.summary.fail, report.summary.skipped
            );
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(suites: &[Suite]) -> RunConfig {
        RunConfig {
            lmax: 2,
            samples: 10,
            suites: suites.iter().copied().collect(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("formal"), Ok(LambdaMode::Formal));
        assert_eq!(parse_lambda("2"), Ok(lambda_two()));
        assert_eq!(
            parse_lambda("-3/4"),
            Ok(LambdaMode::Value(BigRational::new((-3).into(), 4.into())))
        );
        assert!(parse_lambda("x").is_err());
    }

    #[test]
    fn empty_selection_runs_nothing() {
        let (report, timings) = run_suite(&config(&[]));
        assert_eq!(report.summary.pass + report.summary.fail, 0);
        assert_eq!(report.summary.skipped, Suite::CONCRETE.len());
        assert_eq!(report.exit_code(), 0);
        assert!(timings.is_empty());
    }

    #[test]
    fn selected_suite_passes_and_others_skip() {
        let (report, _) = run_suite(&config(&[Suite::ShiftedField]));
        assert_eq!(report.summary.pass, 2);
        assert_eq!(report.summary.fail, 0);
        assert_eq!(report.summary.skipped, Suite::CONCRETE.len() - 1);
        let ids: Vec<_> = report.checks.iter().map(|c| c.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn failing_check_sets_exit_code() {
        let failing = CheckRecord::new("x/1", "always false", "none").finish(false, json!({ "residual": ["[1] delta(z2)"] }));
        let report = Report::new(config(&[]).echo(), vec![failing]);
        assert_eq!(report.exit_code(), 1);
        let text = emit_report(&report, &Timings::new(), Format::Text);
        assert!(text.contains("FAIL x/1"));
        assert!(text.contains("delta(z2)"));
    }

    #[test]
    fn json_round_trip() {
        let (report, timings) = run_suite(&config(&[Suite::Algebra, Suite::Support]));
        let text = emit_report(&report, &timings, Format::Json);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(emit_report(&back, &Timings::new(), Format::Json), text);
    }
}
