//! Verification suites: named collections of checks over the library, producing a
//! deterministic, serializable report.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nashmoser::SlbTriple;

mod algebra;
mod flatcalc;
mod flow;
mod foliation;
mod homotopy;
mod schedule;
mod smoothing;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Matrix,
    Skeleton,
    Flow,
    Foliation,
    Homotopy,
    Flatcalc,
    Smoothing,
    Schedule,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Matrix,
        Suite::Skeleton,
        Suite::Flow,
        Suite::Foliation,
        Suite::Homotopy,
        Suite::Flatcalc,
        Suite::Smoothing,
        Suite::Schedule,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Matrix => "matrix",
            Suite::Skeleton => "skeleton",
            Suite::Flow => "flow",
            Suite::Foliation => "foliation",
            Suite::Homotopy => "homotopy",
            Suite::Flatcalc => "flatcalc",
            Suite::Smoothing => "smoothing",
            Suite::Schedule => "schedule",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|v| v.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Settings shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Multiplies every hard tolerance.
    pub tol_scale: f64,
    /// Points per axis of the planar grids (odd).
    pub grid: usize,
    /// Base sample count; individual checks cap or scale it.
    pub samples: usize,
    pub slb: SlbTriple,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            seed: 7,
            tol_scale: 1.0,
            grid: 257,
            samples: 1000,
            slb: SlbTriple::new(1, 21, 167),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol-scale {}", self.tol_scale)));
        }
        if self.grid < 33 || self.grid % 2 == 0 {
            return Err(Error::InvalidParameter(format!("grid {} must be odd and at least 33", self.grid)));
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be positive".into()));
        }
        Ok(())
    }

    /// Generator for one named stream; independent of the other streams.
    pub(crate) fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    /// `samples` clamped to `[lo, hi]`.
    pub(crate) fn count(&self, lo: usize, hi: usize) -> usize {
        self.samples.clamp(lo, hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

impl Relation {
    fn holds(&self, measured: f64, tol: f64) -> bool {
        match self {
            Relation::Le => measured <= tol,
            Relation::Lt => measured < tol,
            Relation::Ge => measured >= tol,
            Relation::Eq => measured == tol,
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        }
    }
}

/// One verified property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// Short description of the identity or estimate being checked.
    pub tag: &'static str,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    /// Hard checks decide the exit status; soft ones are recorded diagnostics.
    pub hard: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    pub hard_failures: usize,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `suite,name,tag,measured,relation,tolerance,hard,pass`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("suite,name,tag,measured,relation,tolerance,hard,pass\n");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{},{},{},{:e},{},{:e},{},{}",
                c.suite,
                csv_field(&c.name),
                csv_field(c.tag),
                c.measured,
                c.relation.symbol(),
                c.tolerance,
                c.hard,
                c.pass
            );
        }
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.hard && !c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Accumulates checks for one suite.
pub(crate) struct Checks {
    suite: &'static str,
    tol_scale: f64,
    list: Vec<Check>,
}

impl Checks {
    fn new(suite: Suite, cfg: &SuiteConfig) -> Self {
        Checks { suite: suite.name(), tol_scale: cfg.tol_scale, list: Vec::new() }
    }

    fn push(&mut self, name: &str, tag: &'static str, measured: f64, rel: Relation, tol: f64, hard: bool) -> &mut Check {
        let pass = rel.holds(measured, tol);
        self.list.push(Check {
            suite: self.suite,
            name: name.to_string(),
            tag,
            measured,
            relation: rel,
            tolerance: tol,
            hard,
            pass,
            note: None,
        });
        self.list.last_mut().unwrap()
    }

    /// Hard `measured <= tol * tol_scale`; NaN fails.
    pub fn le(&mut self, name: &str, tag: &'static str, measured: f64, tol: f64) -> &mut Check {
        let t = tol * self.tol_scale;
        self.push(name, tag, measured, Relation::Le, t, true)
    }

    /// Hard lower bound, not scaled.
    pub fn ge(&mut self, name: &str, tag: &'static str, measured: f64, bound: f64) -> &mut Check {
        self.push(name, tag, measured, Relation::Ge, bound, true)
    }

    /// Hard boolean, recorded as `1 == 1`.
    pub fn holds(&mut self, name: &str, tag: &'static str, ok: bool) -> &mut Check {
        self.push(name, tag, if ok { 1.0 } else { 0.0 }, Relation::Eq, 1.0, true)
    }

    /// Exact equality, not scaled.
    pub fn exact(&mut self, name: &str, tag: &'static str, measured: f64, expected: f64) -> &mut Check {
        self.push(name, tag, measured, Relation::Eq, expected, true)
    }

    /// Recorded diagnostic `measured <= bound`.
    pub fn soft(&mut self, name: &str, tag: &'static str, measured: f64, bound: f64) -> &mut Check {
        self.push(name, tag, measured, Relation::Le, bound, false)
    }

    /// A library call that was expected to succeed failed.
    pub fn error(&mut self, name: &str, tag: &'static str, e: &Error) {
        self.push(name, tag, f64::NAN, Relation::Le, 0.0, true).note = Some(e.to_string());
    }

    /// Runs `f` and records its error as a failed check.
    pub fn guard(&mut self, name: &str, tag: &'static str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.error(name, tag, &e);
        }
    }
}

impl Check {
    pub fn with_note(&mut self, note: impl Into<String>) -> &mut Self {
        self.note = Some(note.into());
        self
    }
}

fn run_one(suite: Suite, cfg: &SuiteConfig) -> Vec<Check> {
    let mut c = Checks::new(suite, cfg);
    match suite {
        Suite::Matrix => algebra::matrix(cfg, &mut c),
        Suite::Skeleton => algebra::skeleton(cfg, &mut c),
        Suite::Flow => flow::run(cfg, &mut c),
        Suite::Foliation => foliation::run(cfg, &mut c),
        Suite::Homotopy => homotopy::run(cfg, &mut c),
        Suite::Flatcalc => flatcalc::run(cfg, &mut c),
        Suite::Smoothing => smoothing::run(cfg, &mut c),
        Suite::Schedule => schedule::run(cfg, &mut c),
        Suite::All => unreachable!(),
    }
    c.list
}

/// Runs the configured suite (or all of them, in a fixed order).
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let suites: Vec<Suite> = match cfg.suite {
        Suite::All => Suite::ALL.to_vec(),
        s => vec![s],
    };
    let checks: Vec<Check> = suites.into_iter().flat_map(|s| run_one(s, cfg)).collect();
    let hard_failures = checks.iter().filter(|c| c.hard && !c.pass).count();
    Ok(Report { schema: SCHEMA, config: *cfg, checks, hard_failures, pass: hard_failures == 0 })
}

/// Max of an iterator of residuals, propagating NaN.
pub(crate) fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}
