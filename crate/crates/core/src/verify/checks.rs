use std::fmt;

use serde::Serialize;

use crate::algebra::{min_eigenvalue_unchecked, sa_norm_unchecked, Element};

/// Whether a check caps its residual from above or demands a minimum defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Passes iff `residual ≤ tolerance`; the residual is the worst over all trials.
    Upper,
    /// Passes iff `residual ≥ tolerance`; the residual is the smallest defect observed.
    Lower,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub bound: Bound,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (verdict, cmp) = match (self.pass, self.bound) {
            (true, Bound::Upper) => ("PASS", "<="),
            (false, Bound::Upper) => ("FAIL", ">"),
            (true, Bound::Lower) => ("PASS", ">="),
            (false, Bound::Lower) => ("FAIL", "<"),
        };
        write!(f, "{verdict} {:<32} {:.3e} {cmp} {:.3e}", self.name, self.residual, self.tolerance)
    }
}

const MAX_NOTES: usize = 8;

/// `‖Re x‖ + ‖Im x‖`, within a factor two of the norm and defined on every summand kind.
pub(crate) fn size(x: &Element) -> f64 {
    sa_norm_unchecked(&x.real_part()) + sa_norm_unchecked(&x.imag_part())
}

/// How far a self-adjoint element is from being positive.
pub(crate) fn negativity(x: &Element) -> f64 {
    (-min_eigenvalue_unchecked(&x.real_part())).max(0.0) + sa_norm_unchecked(&x.imag_part())
}

/// Accumulates worst-case residuals by check name, in declaration order.
pub(crate) struct Checks {
    tol: Option<f64>,
    entries: Vec<Check>,
    notes: Vec<String>,
    suppressed: usize,
}

impl Checks {
    pub fn new(tol: Option<f64>) -> Checks {
        Checks { tol, entries: Vec::new(), notes: Vec::new(), suppressed: 0 }
    }

    /// Declares an upper-bound check with its default tolerance.
    pub fn upper(&mut self, name: &str, tolerance: f64) {
        let tolerance = self.tol.unwrap_or(tolerance);
        self.declare(name, tolerance, Bound::Upper, 0.0);
    }

    /// Declares a check that the observed defect stays at least `target − slack`,
    /// with slack `1e-6` unless overridden.
    pub fn lower(&mut self, name: &str, target: f64) {
        let tolerance = target - self.tol.unwrap_or(1e-6);
        self.declare(name, tolerance, Bound::Lower, f64::INFINITY);
    }

    fn declare(&mut self, name: &str, tolerance: f64, bound: Bound, residual: f64) {
        assert!(self.entries.iter().all(|c| c.name != name), "check {name} declared twice");
        self.entries.push(Check { name: name.to_string(), residual, tolerance, pass: false, bound });
    }

    /// Folds one observation into a declared check; NaN counts as a failure.
    pub fn observe(&mut self, name: &str, value: f64) {
        let entry = self.entries.iter_mut().find(|c| c.name == name).unwrap_or_else(|| panic!("undeclared check {name}"));
        entry.residual = match entry.bound {
            Bound::Upper => {
                if value.is_nan() {
                    f64::INFINITY
                } else {
                    entry.residual.max(value)
                }
            }
            Bound::Lower => {
                if value.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    entry.residual.min(value)
                }
            }
        };
    }

    /// Records a failed construction against `name`.
    pub fn fail(&mut self, name: &str, context: impl fmt::Display) {
        let bound = self.entries.iter().find(|c| c.name == name).map(|c| c.bound);
        self.observe(name, if bound == Some(Bound::Lower) { f64::NEG_INFINITY } else { f64::INFINITY });
        self.note(format!("{name}: {context}"));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        if self.notes.len() < MAX_NOTES {
            self.notes.push(note.into());
        } else {
            self.suppressed += 1;
        }
    }

    pub fn finish(mut self) -> (Vec<Check>, Vec<String>) {
        for c in &mut self.entries {
            c.pass = match c.bound {
                Bound::Upper => c.residual <= c.tolerance,
                Bound::Lower => c.residual >= c.tolerance,
            };
        }
        if self.suppressed > 0 {
            self.notes.push(format!("{} further notes suppressed", self.suppressed));
        }
        (self.entries, self.notes)
    }
}
