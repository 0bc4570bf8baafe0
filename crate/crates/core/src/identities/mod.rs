//! Executable checks for the character-sum identities, with moment evaluators.
//!
//! Each registry entry sweeps every parameter point it quantifies over (twists,
//! weights, ring elements) unless a binding pins it, and compares exact values.
//! A check that has no applicable point reports `not-applicable` with the failed
//! hypothesis; it never passes vacuously.

mod checks;
mod context;
mod moments;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::characters::{quadratic_character, MultiplicativeCharacter};
use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};
use crate::Cyc;

pub use moments::{moment, selberg_kuznetsov_sides, weighted_moment, Domain, SkSides, SkTerm};

use context::Ctx;

/// A registry entry.
#[derive(Debug, Clone, Copy)]
pub struct CheckEntry {
    pub id: &'static str,
    pub statement: &'static str,
    pub applicability: &'static str,
    /// Name of the result the identity comes from.
    pub reference: &'static str,
}

pub(crate) type CheckFn = fn(&Ctx, &Bindings) -> Result<Outcome>;

pub fn registry() -> &'static [CheckEntry] {
    &checks::ENTRIES
}

pub fn find_check(id: &str) -> Result<&'static CheckEntry> {
    registry()
        .iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

/// Parameters pinned by the caller. Characters are given by enumeration index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    pub tau: Option<usize>,
    pub chi: Option<usize>,
    pub a: Option<Elem>,
    pub b: Option<Elem>,
}

impl Bindings {
    pub fn with_tau(tau: usize) -> Self {
        Bindings {
            tau: Some(tau),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in [
            ("tau", self.tau),
            ("chi", self.chi),
            ("a", self.a),
            ("b", self.b),
        ] {
            if let Some(v) = v {
                m.insert(k.to_string(), json!(v));
            }
        }
        Value::Object(m)
    }

    fn validate(&self, ring: &Ring) -> Result<()> {
        let units = ring.units().len();
        for c in [self.tau, self.chi].into_iter().flatten() {
            if c >= units {
                return Err(Error::BadCharacter(format!(
                    "multiplicative character index {c} out of range"
                )));
            }
        }
        for x in [self.a, self.b].into_iter().flatten() {
            if x >= ring.size() {
                return Err(Error::BadElement(x));
            }
        }
        Ok(())
    }
}

/// Resolves `trivial`, `quadratic` or `index:k` to a multiplicative character index.
pub fn twist_index(ring: &Ring, twist: &str) -> Result<usize> {
    match twist.trim() {
        "trivial" => Ok(0),
        "quadratic" => Ok(quadratic_character(ring)?.index()),
        other => {
            let k = other
                .strip_prefix("index:")
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| Error::BadCharacter(format!("unknown twist {other:?}")))?;
            MultiplicativeCharacter::from_index(ring, k).map(|c| c.index())
        }
    }
}

/// Which sum the harness self-test corrupts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbTarget {
    /// `K(ψ, ψ)`, the left side of the Selberg–Kuznetsov check at `a = b = 1`.
    Kloosterman,
    /// `K_τ(1)` for every twist.
    Twisted,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    /// Multiply the first summand of the target sum by `ζ_N`.
    pub perturb: Option<PerturbTarget>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        }
    }
}

/// One evaluated parameter point. `ok` is `None` for values reported without a claim.
#[derive(Debug, Clone)]
pub struct Point {
    pub params: BTreeMap<String, Value>,
    pub expected: Option<Cyc>,
    pub actual: Cyc,
    pub ok: Option<bool>,
    pub note: Option<String>,
}

impl Point {
    pub(crate) fn compare(params: BTreeMap<String, Value>, expected: Cyc, actual: Cyc) -> Self {
        let ok = Some(expected == actual);
        Point {
            params,
            expected: Some(expected),
            actual,
            ok,
            note: None,
        }
    }

    pub(crate) fn empirical(params: BTreeMap<String, Value>, actual: Cyc) -> Self {
        Point {
            params,
            expected: None,
            actual,
            ok: None,
            note: None,
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("params".into(), json!(self.params));
        m.insert("actual".into(), cyc_json(&self.actual));
        if let Some(e) = &self.expected {
            m.insert("expected".into(), cyc_json(e));
        }
        if let Some(n) = &self.note {
            m.insert("note".into(), json!(n));
        }
        Value::Object(m)
    }
}

/// Integers print as integers; anything else as `{order, coeffs}`.
fn cyc_json(v: &Cyc) -> Value {
    match v.as_integer() {
        Some(i) => match i64::try_from(&i) {
            Ok(x) => json!(x),
            Err(_) => json!(i.to_string()),
        },
        None => v.to_json(),
    }
}

pub(crate) enum Outcome {
    Points(Vec<Point>),
    NotApplicable {
        reason: String,
        empirical: Vec<Point>,
    },
}

impl Outcome {
    pub(crate) fn na(reason: impl Into<String>) -> Self {
        Outcome::NotApplicable {
            reason: reason.into(),
            empirical: Vec::new(),
        }
    }
}

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub check: String,
    pub ring: String,
    pub bindings: Bindings,
    pub status: Status,
    /// Expected and actual value at the first failing point, or else the first point.
    pub expected: Option<Cyc>,
    pub actual: Option<Cyc>,
    pub points: usize,
    pub witnesses: Vec<Point>,
    pub reason: Option<String>,
    /// Values computed without a claimed closed form.
    pub empirical: Vec<Point>,
}

impl CheckReport {
    fn from_outcome(
        entry: &CheckEntry,
        ring: &Ring,
        bindings: &Bindings,
        outcome: Outcome,
    ) -> Self {
        let mut report = CheckReport {
            check: entry.id.to_string(),
            ring: ring.descriptor().to_string(),
            bindings: bindings.clone(),
            status: Status::NotApplicable,
            expected: None,
            actual: None,
            points: 0,
            witnesses: Vec::new(),
            reason: None,
            empirical: Vec::new(),
        };
        match outcome {
            Outcome::NotApplicable { reason, empirical } => {
                report.reason = Some(reason);
                report.empirical = empirical;
            }
            Outcome::Points(points) => {
                let (claimed, empirical): (Vec<Point>, Vec<Point>) =
                    points.into_iter().partition(|p| p.ok.is_some());
                report.empirical = empirical;
                if claimed.is_empty() {
                    report.reason = Some("no parameter point satisfies the hypotheses".into());
                    return report;
                }
                report.points = claimed.len();
                let failing: Vec<&Point> = claimed.iter().filter(|p| p.ok == Some(false)).collect();
                let shown = failing.first().copied().unwrap_or(&claimed[0]);
                report.expected = shown.expected.clone();
                report.actual = Some(shown.actual.clone());
                report.status = if failing.is_empty() {
                    Status::Pass
                } else {
                    Status::Fail
                };
                report.witnesses = failing.into_iter().take(MAX_WITNESSES).cloned().collect();
            }
        }
        report
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("check".into(), json!(self.check));
        m.insert("ring".into(), json!(self.ring));
        m.insert("bindings".into(), self.bindings.to_json());
        m.insert("status".into(), json!(self.status.as_str()));
        m.insert(
            "expected".into(),
            self.expected.as_ref().map_or(Value::Null, cyc_json),
        );
        m.insert(
            "actual".into(),
            self.actual.as_ref().map_or(Value::Null, cyc_json),
        );
        m.insert("points".into(), json!(self.points));
        m.insert(
            "witnesses".into(),
            Value::Array(self.witnesses.iter().map(Point::to_json).collect()),
        );
        m.insert(
            "reason".into(),
            self.reason.as_ref().map_or(Value::Null, |r| json!(r)),
        );
        m.insert(
            "empirical".into(),
            Value::Array(self.empirical.iter().map(Point::to_json).collect()),
        );
        Value::Object(m)
    }
}

/// Shared per-ring state for a batch of checks.
pub struct Session {
    ctx: Ctx,
}

impl Session {
    pub fn new(ring: &Ring, options: SuiteOptions) -> Self {
        Session {
            ctx: Ctx::new(ring, options),
        }
    }

    pub fn run(&self, id: &str, bindings: &Bindings) -> Result<CheckReport> {
        let entry = find_check(id)?;
        bindings.validate(&self.ctx.ring)?;
        let outcome = if self.ctx.ring.is_zero_ring() {
            Outcome::na("the zero ring carries no sums")
        } else {
            checks::function(entry.id)(&self.ctx, bindings)?
        };
        Ok(CheckReport::from_outcome(
            entry,
            &self.ctx.ring,
            bindings,
            outcome,
        ))
    }

    /// Runs the given checks (all when `filter` is `None`) in registry order.
    pub fn run_all(
        &self,
        filter: Option<&[&str]>,
        bindings: &Bindings,
    ) -> Result<Vec<CheckReport>> {
        let ids: Vec<&str> = match filter {
            Some(ids) => ids
                .iter()
                .map(|id| find_check(id).map(|e| e.id))
                .collect::<Result<_>>()?,
            None => registry().iter().map(|e| e.id).collect(),
        };
        ids.par_iter().map(|id| self.run(id, bindings)).collect()
    }
}

pub fn run_check(id: &str, ring: &Ring, bindings: &Bindings) -> Result<CheckReport> {
    Session::new(ring, SuiteOptions::default()).run(id, bindings)
}

pub fn run_suite(ring: &Ring, filter: Option<&[&str]>) -> Result<Vec<CheckReport>> {
    run_suite_with(ring, filter, SuiteOptions::default())
}

pub fn run_suite_with(
    ring: &Ring,
    filter: Option<&[&str]>,
    options: SuiteOptions,
) -> Result<Vec<CheckReport>> {
    Session::new(ring, options).run_all(filter, &Bindings::default())
}
