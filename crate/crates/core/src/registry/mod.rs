//! The catalogue of identities and the verifier that compares their two
//! sides.

mod build;
mod entries;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::rational::Rat;
use crate::series::{Comparison, ParamSpec, QSeries, SeriesContext, MAX_CAP};

pub use entries::{andrews_onofri, generic_cap, registry, AO_CASES};

/// How an entry is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Qseries,
    PerJFamily,
    PartitionNumeric,
    Positivity,
}

/// Settings shared by every entry of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunParams {
    pub order: i64,
    pub j_max: usize,
    pub z_cap: u32,
    /// Range for numeric and positivity entries; defaults to `order`.
    pub n_max: Option<u32>,
    /// Per-parameter cap overrides. Entries default to their declared minimum.
    pub caps: BTreeMap<String, u32>,
    pub fault: Option<Fault>,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams { order: 40, j_max: 15, z_cap: 10, n_max: None, caps: BTreeMap::new(), fault: None }
    }
}

impl RunParams {
    pub fn with_order(order: i64) -> Self {
        RunParams { order, ..Default::default() }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max.unwrap_or(self.order.max(0) as u32)
    }
}

/// One entry's context: the run settings plus a series context carrying the
/// resolved caps, a wide Laurent floor and the active fault.
pub struct Job<'a> {
    pub params: &'a RunParams,
    pub ctx: SeriesContext,
}

impl Job<'_> {
    pub fn order(&self) -> i64 {
        self.ctx.order()
    }

    pub fn is_fault(&self, f: Fault) -> bool {
        self.ctx.is_fault(f)
    }

    pub fn cap(&self, name: &str) -> Result<u32> {
        let spec = self.ctx.spec();
        Ok(spec.cap(spec.require(name)?))
    }

    /// Same caps and floor with `extra` more orders of headroom.
    pub fn work(&self, extra: i64) -> SeriesContext {
        self.ctx.with_order(self.ctx.order() + extra)
    }
}

/// Two sides compared through `q^upto`.
pub struct Pair {
    pub form: &'static str,
    pub j: Option<usize>,
    pub lhs: QSeries,
    pub rhs: QSeries,
    pub upto: i64,
}

impl Pair {
    pub fn new(form: &'static str, lhs: QSeries, rhs: QSeries, upto: i64) -> Self {
        Pair { form, j: None, lhs, rhs, upto }
    }

    pub fn at(mut self, j: usize) -> Self {
        self.j = Some(j);
        self
    }
}

/// Integer equality at index `n`.
pub struct NumericCase {
    pub form: &'static str,
    pub n: i64,
    pub lhs: i64,
    pub rhs: i64,
}

pub type Caps = fn(&RunParams) -> Vec<(&'static str, u32)>;

pub enum Check {
    Pairs(fn(&Job) -> Result<Vec<Pair>>),
    Numeric(fn(&Job) -> Result<Vec<NumericCase>>),
    /// Coefficients of `q^1 ..= q^n_max` must be positive integers.
    Positive(fn(&Job) -> Result<QSeries>),
}

pub struct IdentityDef {
    pub id: &'static str,
    pub description: &'static str,
    /// Plain-text statement of the identity.
    pub paper_ref: &'static str,
    pub mode: Mode,
    /// Parameters and their minimum caps for a run.
    pub params: Caps,
    pub check: Check,
}

impl IdentityDef {
    pub fn required_caps(&self, p: &RunParams) -> Vec<(&'static str, u32)> {
        (self.params)(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstMismatch {
    pub q_order: i64,
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub paper_ref: String,
    pub order: i64,
    pub caps: BTreeMap<String, u32>,
    pub status: Status,
    pub first_mismatch: Option<FirstMismatch>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub elapsed_ms: u64,
    pub reports: Vec<VerificationReport>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.pass == self.total
    }
}

pub fn lookup(id: &str) -> Result<&'static IdentityDef> {
    registry().iter().find(|d| d.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

pub fn ids() -> Vec<&'static str> {
    registry().iter().map(|d| d.id).collect()
}

fn resolve_caps(def: &IdentityDef, p: &RunParams) -> Result<BTreeMap<String, u32>> {
    let mut caps = BTreeMap::new();
    for (name, min) in def.required_caps(p) {
        let cap = p.caps.get(name).copied().unwrap_or(min);
        if cap < min {
            return Err(Error::Cap(format!("{} needs cap({name}) >= {min}, got {cap}", def.id)));
        }
        if cap > MAX_CAP {
            return Err(Error::Cap(format!("cap({name}) = {cap} exceeds the maximum {MAX_CAP}")));
        }
        caps.insert(name.to_string(), cap);
    }
    Ok(caps)
}

fn context(caps: &BTreeMap<String, u32>, p: &RunParams) -> Result<SeriesContext> {
    let list: Vec<(&str, u32)> = caps.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    let spec = ParamSpec::new(&list)?;
    let max_cap = spec.max_cap() as i64;
    let floor = -(2 * (p.order.max(0) + max_cap) + 64);
    Ok(SeriesContext::new(p.order, spec)?.with_lo_floor(floor)?.with_fault(p.fault))
}

enum Outcome {
    Pass,
    Fail(FirstMismatch),
}

fn run_check(def: &IdentityDef, job: &Job) -> Result<Outcome> {
    match &def.check {
        Check::Pairs(f) => {
            for pair in f(job)? {
                if let Comparison::FirstMismatch(m) = pair.lhs.equal_upto(&pair.rhs, pair.upto)? {
                    return Ok(Outcome::Fail(FirstMismatch {
                        q_order: m.q_order,
                        monomial: m.monomial,
                        lhs: m.lhs.to_string(),
                        rhs: m.rhs.to_string(),
                        j: pair.j,
                        form: Some(pair.form.to_string()),
                    }));
                }
            }
            Ok(Outcome::Pass)
        }
        Check::Numeric(f) => {
            for c in f(job)? {
                if c.lhs != c.rhs {
                    return Ok(Outcome::Fail(FirstMismatch {
                        q_order: c.n,
                        monomial: "1".into(),
                        lhs: c.lhs.to_string(),
                        rhs: c.rhs.to_string(),
                        j: None,
                        form: Some(c.form.to_string()),
                    }));
                }
            }
            Ok(Outcome::Pass)
        }
        Check::Positive(f) => {
            let s = f(job)?;
            match first_nonpositive(&s, job.params.n_max() as i64) {
                Some((n, c)) => Ok(Outcome::Fail(FirstMismatch {
                    q_order: n,
                    monomial: "1".into(),
                    lhs: c.to_string(),
                    rhs: "positive integer".into(),
                    j: None,
                    form: Some("positivity".into()),
                })),
                None => Ok(Outcome::Pass),
            }
        }
    }
}

fn first_nonpositive(s: &QSeries, n_max: i64) -> Option<(i64, Rat)> {
    (1..=n_max).map(|n| (n, s.coeff_const(n))).find(|(_, c)| !c.is_positive() || !c.is_integer())
}

/// Builds both sides of `def` afresh and compares them.
pub fn verify_def(def: &IdentityDef, p: &RunParams) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport {
        id: def.id.to_string(),
        paper_ref: def.paper_ref.to_string(),
        order: p.order,
        caps: BTreeMap::new(),
        status: Status::Error,
        first_mismatch: None,
        elapsed_ms: 0,
        message: None,
    };
    let result = resolve_caps(def, p).and_then(|caps| {
        report.caps = caps.clone();
        let job = Job { params: p, ctx: context(&caps, p)? };
        run_check(def, &job)
    });
    match result {
        Ok(Outcome::Pass) => report.status = Status::Pass,
        Ok(Outcome::Fail(m)) => {
            report.status = Status::Fail;
            report.first_mismatch = Some(m);
        }
        Err(e) => report.message = Some(format!("{}: {e}", def.id)),
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

pub fn verify(id: &str, p: &RunParams) -> Result<VerificationReport> {
    Ok(verify_def(lookup(id)?, p))
}

/// Worker count from `QTAILS_THREADS`, else the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("QTAILS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Verifies the given entries concurrently; reports keep the input order.
pub fn verify_many(defs: &[&IdentityDef], p: &RunParams) -> Summary {
    let start = Instant::now();
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<VerificationReport>>> = defs.iter().map(|_| Mutex::new(None)).collect();
    let workers = thread_count().min(defs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(def) = defs.get(i) else { break };
                let r = verify_def(def, p);
                *slots[i].lock().expect("report slot") = Some(r);
            });
        }
    });
    let reports: Vec<VerificationReport> =
        slots.into_iter().map(|s| s.into_inner().expect("report slot").expect("every entry ran")).collect();
    let count = |st: Status| reports.iter().filter(|r| r.status == st).count();
    Summary {
        total: reports.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        error: count(Status::Error),
        elapsed_ms: start.elapsed().as_millis() as u64,
        reports,
    }
}

pub fn verify_all(p: &RunParams) -> Summary {
    let defs: Vec<&IdentityDef> = registry().iter().collect();
    verify_many(&defs, p)
}

/// Coefficients of the positivity entry together with its report.
#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub report: VerificationReport,
    pub coefficients: Vec<String>,
}

pub fn positivity_check(n_max: u32, fault: Option<Fault>) -> Result<PositivityReport> {
    if n_max < 1 {
        return Err(Error::Domain("positivity needs n_max >= 1".into()));
    }
    let p = RunParams { order: n_max as i64, n_max: Some(n_max), fault, ..Default::default() };
    let def = lookup("T4P")?;
    let report = verify_def(def, &p);
    let Check::Positive(build) = &def.check else { unreachable!("T4P is a positivity entry") };
    let job = Job { params: &p, ctx: context(&BTreeMap::new(), &p)? };
    let s = build(&job)?;
    let coefficients = (0..=n_max as i64).map(|n| s.coeff_const(n).to_string()).collect();
    Ok(PositivityReport { report, coefficients })
}
