//! Named verification suites over seeded random instances.
//!
//! Every suite returns a [`SuiteReport`] whose checks carry the worst residual
//! seen over all trials. Trial `t` draws from `trial_rng(seed, t)`, so reports
//! depend only on `(suite, algebra, trials, seed, tol)` apart from `duration_ms`.

mod algebraic;
mod checks;
mod comparison;
mod measure;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::AlgebraDescriptor;
use crate::error::{Error, Result};
use crate::measures::Measure;

pub use checks::{Bound, Check};

/// The verification suites, in listing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    Lattice,
    Comparison,
    Epm,
    Christensen,
    Traces,
    Ivp,
    Quasilinear,
    Gleason,
    Counterexample,
    UniformContinuity,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Axioms,
        Suite::Lattice,
        Suite::Comparison,
        Suite::Epm,
        Suite::Christensen,
        Suite::Traces,
        Suite::Ivp,
        Suite::Quasilinear,
        Suite::Gleason,
        Suite::Counterexample,
        Suite::UniformContinuity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Lattice => "lattice",
            Suite::Comparison => "comparison",
            Suite::Epm => "epm",
            Suite::Christensen => "christensen",
            Suite::Traces => "traces",
            Suite::Ivp => "ivp",
            Suite::Quasilinear => "quasilinear",
            Suite::Gleason => "gleason",
            Suite::Counterexample => "counterexample",
            Suite::UniformContinuity => "uniform-continuity",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Suite::Axioms => "Jordan identity, JB and JB* norm axioms, fundamental identity, norm chain",
            Suite::Lattice => "orthomodularity, De Morgan, meet/join against the diagonal subspace oracle",
            Suite::Comparison => "exchange symmetries, isoclinic pairs, halving",
            Suite::Epm => "the e_- / e_+ projections and their compression bounds",
            Suite::Christensen => "orthogonal projection pairs with prescribed compressions",
            Suite::Traces => "centre-valued trace axioms and trace comparison",
            Suite::Ivp => "subprojections of prescribed trace over the attainable grid",
            Suite::Quasilinear => "quasi-linear extension, alpha and variation of density measures",
            Suite::Gleason => "linear reconstruction of density measures",
            Suite::Counterexample => "rank-two measures with no linear extension",
            Suite::UniformContinuity => "continuity modulus of normalized density measures",
        }
    }

    pub fn default_algebra(&self) -> &'static str {
        match self {
            Suite::Axioms => "m3",
            Suite::Lattice | Suite::Comparison | Suite::Traces => "m4",
            Suite::Epm => "m6",
            Suite::Christensen => "m8",
            Suite::Ivp => "m3+m6",
            Suite::Quasilinear | Suite::Gleason => "m3",
            Suite::Counterexample => "s2",
            Suite::UniformContinuity => "m5",
        }
    }

    pub fn default_trials(&self) -> usize {
        match self {
            Suite::Axioms | Suite::UniformContinuity => 500,
            Suite::Lattice | Suite::Comparison | Suite::Counterexample => 200,
            Suite::Epm | Suite::Christensen | Suite::Traces | Suite::Quasilinear => 100,
            Suite::Gleason => 50,
            Suite::Ivp => 10,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Inputs of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub algebra: AlgebraDescriptor,
    pub trials: usize,
    pub seed: u64,
    /// Replaces every check's default tolerance; lower-bound checks use it as slack.
    pub tol: Option<f64>,
    /// Measure under test for the measure suites; a built-in or random density otherwise.
    pub measure: Option<Measure>,
}

impl SuiteConfig {
    pub fn new(algebra: AlgebraDescriptor, trials: usize, seed: u64) -> SuiteConfig {
        SuiteConfig { algebra, trials, seed, tol: None, measure: None }
    }

    /// The suite's default algebra and trial count.
    pub fn defaults(suite: Suite, seed: u64) -> SuiteConfig {
        let algebra = suite.default_algebra().parse().expect("default algebras parse");
        SuiteConfig::new(algebra, suite.default_trials(), seed)
    }

    pub fn with_tol(mut self, tol: f64) -> SuiteConfig {
        self.tol = Some(tol);
        self
    }

    pub fn with_measure(mut self, measure: Measure) -> SuiteConfig {
        self.measure = Some(measure);
        self
    }
}

/// Outcome of one suite run. `pass` holds iff every check passes.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub algebra: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub duration_ms: u64,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} on {} (seed {}, {} trials)", self.suite, self.algebra, self.seed, self.trials)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        writeln!(f, "{} in {} ms", if self.pass() { "PASS" } else { "FAIL" }, self.duration_ms)
    }
}

/// Runs one suite.
///
/// Fails with `UnsupportedFactor` or `InvalidParameter` when the algebra (or
/// the supplied measure) does not fit the suite.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut checks = checks::Checks::new(config.tol);
    match suite {
        Suite::Axioms => algebraic::axioms(config, &mut checks)?,
        Suite::Lattice => algebraic::lattice(config, &mut checks)?,
        Suite::Traces => algebraic::traces(config, &mut checks)?,
        Suite::Ivp => algebraic::ivp(config, &mut checks)?,
        Suite::Comparison => comparison::comparison(config, &mut checks)?,
        Suite::Epm => comparison::epm(config, &mut checks)?,
        Suite::Christensen => comparison::christensen(config, &mut checks)?,
        Suite::Quasilinear => measure::quasilinear(config, &mut checks)?,
        Suite::Gleason => measure::gleason(config, &mut checks)?,
        Suite::Counterexample => measure::counterexample(config, &mut checks)?,
        Suite::UniformContinuity => measure::uniform_continuity(config, &mut checks)?,
    }
    let algebra = match (&config.measure, suite) {
        (Some(mu), Suite::Quasilinear | Suite::Gleason | Suite::Counterexample | Suite::UniformContinuity) => {
            mu.descriptor().to_string()
        }
        _ => config.algebra.to_string(),
    };
    let (checks, notes) = checks.finish();
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        algebra,
        seed: config.seed,
        trials: config.trials,
        checks,
        notes,
        duration_ms: start.elapsed().as_millis() as u64,
    })
}
