//! Command-line front end: JSON in, JSON out.
//!
//! Every subcommand prints one JSON document on standard output. Exit codes:
//! 0 when no verdict is `Fail` or `Inconsistent`, 1 otherwise, 2 on usage or
//! parse errors. JSON arguments are given inline or as `@path`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::capacity::{comonotonic_additivity_check, CapacitySource};
use crate::collapse::{
    check_convexity, check_law_invariance, check_sublinear_upgrade,
    check_translation_invariance_along, choquet_collapse_scan, collapse_verdict,
    collapse_verdict_cash, pricing_collapse, relevance_dichotomy, risk_collapse, spread_scan,
};
use crate::duality::DEFAULT_M_GRID;
use crate::duality::{
    affine_representation_check, affine_slope, conjugate_auto, conjugate_with, ConjugateMethod,
};
use crate::error::{Error, Result};
use crate::functional::{
    is_frictionless, is_relevant, is_strongly_relevant, EligibleAsset, Functional, FunctionalSpec,
    Kind, DEFAULT_LAMBDA_GRID,
};
use crate::orbit::orbit_span_dimension;
use crate::quantile::rearrangement_bounds;
use crate::space::{RandomVariable, SampleSpace};
use crate::tolerance::Tolerances;
use crate::verdict::{Outcome, Verdict, Witness};

pub const SEED_ENV: &str = "LAWVAR_SEED";
pub const DEFAULT_TRIALS: u64 = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "lawvar",
    version,
    about = "Law-invariant convex functionals on finite uniform spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    ClosedForm,
    Ascent,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rearrangement interval of E[X'Y] over X' equal in law to X.
    Bounds {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Choquet integral of X with respect to a capacity or distortion.
    Choquet {
        #[arg(long)]
        capacity: String,
        #[arg(long)]
        x: String,
    },
    /// Dimension of the span of the permutation orbit of Z.
    OrbitRank {
        #[arg(long)]
        z: String,
    },
    /// Fenchel conjugate of a functional at Y.
    Conjugate {
        #[arg(long)]
        functional: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Collapse classification for one functional.
    CollapseScan {
        #[arg(long)]
        functional: String,
        /// Direction to test; without it the spread scan picks one.
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Run every check of a manifest and print a report.
    Verify {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Also write a markdown summary to this path.
        #[arg(long)]
        md: Option<PathBuf>,
        /// Record the wall-clock time in the report environment.
        #[arg(long)]
        timestamp: bool,
        /// Override the law and invariance tolerances.
        #[arg(long)]
        tol_law: Option<f64>,
    },
    /// Validate and re-emit a saved report.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        md: Option<PathBuf>,
    },
}

/// One check with its parameters, applied to the functionals listed in
/// `functionals` (all of them when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    #[serde(flatten)]
    pub check: Check,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functionals: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    LawInvariance,
    Convexity,
    TranslationInvariance {
        #[serde(rename = "Z")]
        z: RandomVariable,
    },
    AffineSlope {
        #[serde(rename = "Z")]
        z: RandomVariable,
    },
    SublinearUpgrade {
        #[serde(rename = "S")]
        s: Vec<RandomVariable>,
    },
    Collapse {
        #[serde(rename = "Z")]
        z: RandomVariable,
        #[serde(default)]
        cash: bool,
    },
    ChoquetCollapse,
    PricingCollapse {
        #[serde(rename = "Z")]
        z: RandomVariable,
    },
    RiskCollapse {
        #[serde(rename = "S0")]
        s0: f64,
        #[serde(rename = "S1")]
        s1: RandomVariable,
    },
    Relevance,
    StrongRelevance,
    RelevanceDichotomy,
    Frictionless {
        #[serde(rename = "X")]
        x: RandomVariable,
    },
    ComonotonicAdditivity,
    Submodularity,
    AffineRepresentation {
        basis: Vec<RandomVariable>,
        #[serde(rename = "Y")]
        y: RandomVariable,
    },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::LawInvariance => "law_invariance",
            Check::Convexity => "convexity",
            Check::TranslationInvariance { .. } => "translation_invariance",
            Check::AffineSlope { .. } => "affine_slope",
            Check::SublinearUpgrade { .. } => "sublinear_upgrade",
            Check::Collapse { .. } => "collapse",
            Check::ChoquetCollapse => "choquet_collapse",
            Check::PricingCollapse { .. } => "pricing_collapse",
            Check::RiskCollapse { .. } => "risk_collapse",
            Check::Relevance => "relevance",
            Check::StrongRelevance => "strong_relevance",
            Check::RelevanceDichotomy => "relevance_dichotomy",
            Check::Frictionless { .. } => "frictionless",
            Check::ComonotonicAdditivity => "comonotonic_additivity",
            Check::Submodularity => "submodularity",
            Check::AffineRepresentation { .. } => "affine_representation",
        }
    }

    /// Runs the check on `phi`. Precondition failures become `Refused`
    /// verdicts; other errors propagate.
    pub fn run(
        &self,
        phi: &Functional,
        space: SampleSpace,
        trials: u64,
        seed: u64,
        tol: &Tolerances,
    ) -> Result<Verdict> {
        let name = self.name();
        let result = match self {
            Check::LawInvariance => check_law_invariance(phi, space, trials, seed, tol),
            Check::Convexity => check_convexity(phi, space, trials, seed, tol),
            Check::TranslationInvariance { z } => {
                check_translation_invariance_along(phi, z, None, trials, seed, tol)
            }
            Check::AffineSlope { z } => affine_slope(phi, z, &DEFAULT_M_GRID).map(|fit| {
                let outcome = if fit.is_affine(tol.affinity) {
                    Outcome::Pass
                } else {
                    Outcome::NoAffineDirection
                };
                Verdict::new(name, outcome, fit.grid.len() as u64, seed)
                    .with_residual(fit.max_residual)
                    .with_slope(fit.slope)
            }),
            Check::SublinearUpgrade { s } => check_sublinear_upgrade(phi, s, trials, seed, tol),
            Check::Collapse { z, cash: false } => collapse_verdict(phi, z, trials, seed, tol),
            Check::Collapse { z, cash: true } => collapse_verdict_cash(phi, z, trials, seed, tol),
            Check::ChoquetCollapse => capacity_of(phi, name)
                .and_then(|c| choquet_collapse_scan(c, space, trials, seed, tol)),
            Check::PricingCollapse { z } => pricing_collapse(phi, z, trials, seed, tol),
            Check::RiskCollapse { s0, s1 } => EligibleAsset::new(*s0, s1.clone())
                .and_then(|asset| risk_collapse(phi, &asset, trials, seed, tol)),
            Check::Relevance => is_relevant(phi, space, trials, seed),
            Check::StrongRelevance => is_strongly_relevant(phi, space, trials, seed),
            Check::RelevanceDichotomy => relevance_dichotomy(phi, space, trials, seed, tol),
            Check::Frictionless { x } => {
                is_frictionless(phi, x, &DEFAULT_LAMBDA_GRID, tol.frictionless)
            }
            Check::ComonotonicAdditivity => capacity_of(phi, name)
                .and_then(|c| comonotonic_additivity_check(c, space, trials, seed, tol.comonotone)),
            Check::Submodularity => {
                capacity_of(phi, name).and_then(|c| c.submodularity(space.n(), tol.submodular))
            }
            Check::AffineRepresentation { basis, y } => {
                affine_representation_check(phi, basis, y, trials, seed, tol)
            }
        };
        match result {
            Ok(mut v) => {
                v.name = name.to_string();
                Ok(v)
            }
            Err(e) => refused(name, e, seed),
        }
    }
}

fn capacity_of<'a>(phi: &'a Functional, check: &str) -> Result<&'a CapacitySource> {
    match phi.kind() {
        Kind::Choquet(c) => Ok(c),
        _ => Err(Error::precondition(
            check,
            format!("{} is not a Choquet functional", phi.label()),
        )),
    }
}

/// Maps refusals to a `Refused` verdict; other errors pass through.
fn refused(name: &str, e: Error, seed: u64) -> Result<Verdict> {
    match e {
        Error::Precondition {
            reason, witness, ..
        } => {
            let mut v = Verdict::new(name, Outcome::Refused, 0, seed).with_note(reason);
            v.witness = witness.map(|w| *w);
            Ok(v)
        }
        e @ (Error::Unsupported(_) | Error::NotAffine { .. } | Error::NoFiniteCapital(_)) => {
            Ok(Verdict::new(name, Outcome::Refused, 0, seed).with_note(e.to_string()))
        }
        e => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub space: SampleSpace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub functionals: Vec<FunctionalSpec>,
    pub checks: Vec<CheckEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let m: Manifest = serde_json::from_str(&text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let count = self.functionals.len();
        for entry in &self.checks {
            if let Some(idx) = entry
                .functionals
                .as_ref()
                .and_then(|f| f.iter().find(|&&i| i >= count))
            {
                return Err(Error::Parse(format!(
                    "check {} references functional {idx}, but the manifest has {count}",
                    entry.check.name()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch, recorded only on request so that
    /// reports stay byte-identical by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
    pub summary: BTreeMap<Outcome, usize>,
    pub environment: Environment,
}

impl Report {
    pub fn new(verdicts: Vec<Verdict>, environment: Environment) -> Self {
        let summary = summarize(&verdicts);
        Report {
            verdicts,
            summary,
            environment,
        }
    }

    pub fn has_failure(&self) -> bool {
        self.verdicts.iter().any(Verdict::is_failure)
    }

    /// Summary counts equal the verdict multiset.
    pub fn is_consistent(&self) -> bool {
        self.summary == summarize(&self.verdicts)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "# lawvar report\n\nversion {}, seed {}\n\n| # | check | outcome | max residual | trials | note |\n|---|---|---|---|---|---|\n",
            self.environment.version, self.environment.seed
        );
        for (i, v) in self.verdicts.iter().enumerate() {
            s.push_str(&format!(
                "| {i} | {} | {:?} | {:e} | {} | {} |\n",
                v.name,
                v.outcome,
                v.residual(),
                v.trials,
                v.note.as_deref().unwrap_or("").replace('|', "/")
            ));
        }
        s.push_str("\n| outcome | count |\n|---|---|\n");
        for (o, c) in &self.summary {
            s.push_str(&format!("| {o:?} | {c} |\n"));
        }
        s
    }
}

fn summarize(verdicts: &[Verdict]) -> BTreeMap<Outcome, usize> {
    let mut summary: BTreeMap<Outcome, usize> = Outcome::ALL.iter().map(|&o| (o, 0)).collect();
    for v in verdicts {
        *summary.entry(v.outcome).or_default() += 1;
    }
    summary
}

/// Seed precedence: flag, then manifest, then `LAWVAR_SEED`, then 0.
pub fn resolve_seed(flag: Option<u64>, manifest: Option<u64>) -> Result<u64> {
    if let Some(s) = flag.or(manifest) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

/// Runs every check of `manifest` in parallel and assembles the report in
/// manifest order: checks outermost, functionals innermost.
pub fn verify(manifest: &Manifest, seed: u64, trials: u64, tol: &Tolerances) -> Result<Report> {
    manifest.validate()?;
    let functionals = manifest
        .functionals
        .iter()
        .map(|spec| spec.build_with(tol))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for entry in &manifest.checks {
        let targets: Vec<usize> = entry
            .functionals
            .clone()
            .unwrap_or_else(|| (0..functionals.len()).collect());
        for i in targets {
            jobs.push((i, &entry.check));
        }
    }
    let verdicts = jobs
        .par_iter()
        .map(|&(i, check)| {
            let phi = &functionals[i];
            let mut v = check.run(phi, manifest.space, trials, seed, tol)?;
            v.name = format!("{}/{}", phi.label(), v.name);
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(
        verdicts,
        Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp: None,
        },
    ))
}

fn parse_json<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)?,
        None => arg.to_string(),
    };
    Ok(serde_json::from_str(&text)?)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn exit_for(failure: bool) -> i32 {
    i32::from(failure)
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 2 {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Bounds { x, y } => {
            let (x, y): (RandomVariable, RandomVariable) = (parse_json(&x)?, parse_json(&y)?);
            out.write_all(to_json(&rearrangement_bounds(&x, &y)?)?.as_bytes())?;
            Ok(0)
        }
        Command::Choquet { capacity, x } => {
            let c: CapacitySource = parse_json(&capacity)?;
            let x: RandomVariable = parse_json(&x)?;
            let value = c.choquet(&x)?;
            out.write_all(to_json(&serde_json::json!({ "value": value }))?.as_bytes())?;
            Ok(0)
        }
        Command::OrbitRank { z } => {
            let z: RandomVariable = parse_json(&z)?;
            out.write_all(to_json(&orbit_span_dimension(&z))?.as_bytes())?;
            Ok(0)
        }
        Command::Conjugate {
            functional,
            y,
            method,
        } => {
            let spec: FunctionalSpec = parse_json(&functional)?;
            let phi = spec.build()?;
            let y: RandomVariable = parse_json(&y)?;
            let tol = Tolerances::default();
            let result = match method {
                MethodArg::Auto => conjugate_auto(&phi, &y, &tol)?,
                MethodArg::ClosedForm => {
                    conjugate_with(&phi, &y, ConjugateMethod::ClosedForm, &tol)?
                }
                MethodArg::Ascent => conjugate_with(&phi, &y, ConjugateMethod::Ascent, &tol)?,
            };
            out.write_all(to_json(&result)?.as_bytes())?;
            Ok(0)
        }
        Command::CollapseScan {
            functional,
            z,
            n,
            seed,
            trials,
        } => {
            let spec: FunctionalSpec = parse_json(&functional)?;
            let z: Option<RandomVariable> = z.as_deref().map(parse_json).transpose()?;
            let seed = resolve_seed(seed, None)?;
            let verdict =
                collapse_scan(&spec, z.as_ref(), n, seed, trials.unwrap_or(DEFAULT_TRIALS))?;
            out.write_all(to_json(&verdict)?.as_bytes())?;
            Ok(exit_for(verdict.is_failure()))
        }
        Command::Verify {
            manifest,
            seed,
            trials,
            md,
            timestamp,
            tol_law,
        } => {
            let m = Manifest::load(&manifest)?;
            let seed = resolve_seed(seed, m.seed)?;
            let trials = trials.or(m.trials).unwrap_or(DEFAULT_TRIALS);
            let mut tol = m.tolerances.clone().unwrap_or_default();
            if let Some(t) = tol_law {
                tol.law = t;
                tol.invariance = t;
            }
            let mut report = verify(&m, seed, trials, &tol)?;
            if timestamp {
                report.environment.timestamp = Some(
                    SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or_default(),
                );
            }
            emit_report(&report, md.as_deref(), out)
        }
        Command::Report { input, md } => {
            let report: Report = serde_json::from_str(&fs::read_to_string(&input)?)?;
            if !report.is_consistent() {
                return Err(Error::Parse(
                    "report summary does not match its verdicts".into(),
                ));
            }
            emit_report(&report, md.as_deref(), out)
        }
    }
}

fn emit_report(report: &Report, md: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    out.write_all(to_json(report)?.as_bytes())?;
    if let Some(path) = md {
        fs::write(path, report.to_markdown())?;
    }
    Ok(exit_for(report.has_failure()))
}

/// Choquet functionals go through [`choquet_collapse_scan`]. Others use
/// `z` when given; otherwise the spread scan picks the most affine
/// direction and the collapse classification runs along it.
pub fn collapse_scan(
    spec: &FunctionalSpec,
    z: Option<&RandomVariable>,
    n: Option<usize>,
    seed: u64,
    trials: u64,
) -> Result<Verdict> {
    let tol = Tolerances::default();
    let phi = spec.build()?;
    let n = n.or(z.map(RandomVariable::n)).or(phi.atoms()).unwrap_or(10);
    let space = phi.space_or(SampleSpace::new(n)?)?;
    if let (Kind::Choquet(c), None) = (phi.kind(), z) {
        return choquet_collapse_scan(c, space, trials, seed, &tol)
            .or_else(|e| refused("choquet_collapse", e, seed));
    }
    let direction = match z {
        Some(z) => z.clone(),
        None => {
            let scan = spread_scan(&phi, space, trials, seed)?;
            if scan.min_spread > tol.spread * crate::numeric::max_abs(scan.argmin.values()) {
                return Ok(Verdict::new(
                    "collapse",
                    Outcome::NoAffineDirection,
                    scan.directions,
                    seed,
                )
                .with_residual(scan.min_spread)
                .with_witness(
                    Witness::new()
                        .vector("Z", &scan.argmin)
                        .scalar("min spread", scan.min_spread),
                )
                .with_note(format!(
                    "no affine direction among {} directions",
                    scan.directions
                )));
            }
            scan.argmin
        }
    };
    collapse_verdict(&phi, &direction, trials, seed, &tol).or_else(|e| refused("collapse", e, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(
            std::iter::once("lawvar").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bounds_subcommand() {
        let (code, out, _) = run_capture(&["bounds", "--x", "[1,2,3]", "--y", "[1,2,3]"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["lo"].as_f64().unwrap() - 10.0 / 3.0).abs() < 1e-12);
        assert!((v["hi"].as_f64().unwrap() - 14.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn orbit_rank_subcommand() {
        let (code, out, _) = run_capture(&["orbit-rank", "--z", "[1,-1,0]"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rank"], 2);
        assert_eq!(v["classification"], "MeanZeroHyperplane");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["bounds", "--x", "[1,2]"]).0, 2);
        assert_eq!(
            run_capture(&["bounds", "--x", "[1,2]", "--y", "not json"]).0,
            2
        );
        assert_eq!(
            run_capture(&["bounds", "--x", "[1,2]", "--y", "[1,2,3]"]).0,
            2
        );
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(3), Some(5)).unwrap(), 3);
        assert_eq!(resolve_seed(None, Some(5)).unwrap(), 5);
    }

    #[test]
    fn manifest_parses_checks() {
        let m: Manifest = serde_json::from_str(
            r#"{"space": {"n": 3}, "functionals": [{"kind": "entropic", "theta": 1}],
                "checks": [{"check": "law_invariance"}, {"check": "collapse", "Z": [1, 0, 0], "functionals": [0]}]}"#,
        )
        .unwrap();
        assert_eq!(m.checks.len(), 2);
        assert!(serde_json::from_str::<Manifest>(
            r#"{"space": {"n": 3}, "functionals": [], "checks": [{"check": "nonsense"}]}"#
        )
        .is_err());
        let bad: Manifest = serde_json::from_str(
            r#"{"space": {"n": 3}, "functionals": [], "checks": [{"check": "convexity", "functionals": [1]}]}"#,
        )
        .unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn report_round_trip_and_summary() {
        let m: Manifest = serde_json::from_str(
            r#"{"space": {"n": 4}, "functionals": [{"kind": "mean_affine", "a": 2, "b": 1}],
                "checks": [{"check": "convexity"}, {"check": "collapse", "Z": [1, 0, 0, 0]}]}"#,
        )
        .unwrap();
        let report = verify(&m, 7, 50, &Tolerances::default()).unwrap();
        assert!(report.is_consistent());
        assert_eq!(report.summary[&Outcome::Pass], 1);
        assert_eq!(report.summary[&Outcome::CollapseToMean], 1);
        let back: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(back, report);
    }
}
