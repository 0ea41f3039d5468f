use std::sync::Arc;

use super::qseries::QSeries;
use super::spec::{Mono, ParamSpec};
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::rational::Rat;

/// Target truncation, parameter spec and Laurent floor shared by the
/// builders of one computation.
#[derive(Clone, Debug)]
pub struct SeriesContext {
    order: i64,
    spec: Arc<ParamSpec>,
    lo_floor: i64,
    fault: Option<Fault>,
}

impl SeriesContext {
    /// Context with the default floor `-(order + max cap)`.
    pub fn new(order: i64, spec: Arc<ParamSpec>) -> Result<Self> {
        if order < 0 {
            return Err(Error::Window(format!("order must be nonnegative, got {order}")));
        }
        let lo_floor = -(order + spec.max_cap() as i64);
        Ok(SeriesContext { order, spec, lo_floor, fault: None })
    }

    /// Parameter-free context.
    pub fn plain(order: i64) -> Result<Self> {
        Self::new(order, ParamSpec::empty())
    }

    pub fn with_lo_floor(mut self, lo_floor: i64) -> Result<Self> {
        if lo_floor > 0 {
            return Err(Error::Window(format!("lo_floor must be <= 0, got {lo_floor}")));
        }
        self.lo_floor = lo_floor;
        Ok(self)
    }

    /// Same spec and floor at a different truncation order. Builders use this
    /// for headroom before an operation that lowers precision.
    pub fn with_order(&self, order: i64) -> Self {
        SeriesContext { order: order.max(0), ..self.clone() }
    }

    pub fn with_fault(mut self, fault: Option<Fault>) -> Self {
        self.fault = fault;
        self
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn spec(&self) -> &Arc<ParamSpec> {
        &self.spec
    }

    pub fn lo_floor(&self) -> i64 {
        self.lo_floor
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    pub fn is_fault(&self, f: Fault) -> bool {
        self.fault == Some(f)
    }

    pub fn zero(&self) -> QSeries {
        QSeries::zero(&self.spec, self.lo_floor, self.order)
    }

    pub fn one(&self) -> QSeries {
        self.constant(Rat::one())
    }

    pub fn constant(&self, c: Rat) -> QSeries {
        QSeries::monomial(&self.spec, self.lo_floor, self.order, c, Mono::ONE, 0).expect("q^0 is within any floor")
    }

    /// `c * m * q^k`.
    pub fn monomial(&self, c: Rat, m: Mono, k: i64) -> Result<QSeries> {
        QSeries::monomial(&self.spec, self.lo_floor, self.order, c, m, k)
    }

    /// `q^k`.
    pub fn q_pow(&self, k: i64) -> Result<QSeries> {
        self.monomial(Rat::one(), Mono::ONE, k)
    }

    /// Parameter-free series `sum_i coeffs[i] q^(lo+i)`.
    pub fn from_rats(&self, lo: i64, coeffs: &[Rat]) -> Result<QSeries> {
        QSeries::from_rats(&self.spec, self.lo_floor, lo, self.order, coeffs)
    }

    /// The parameter `name` as a series.
    pub fn param(&self, name: &str) -> Result<QSeries> {
        let i = self.spec.require(name)?;
        self.monomial(Rat::one(), Mono::ONE.with_exp(i, 1), 0)
    }

    /// Monomial `name^e`, checked against the spec.
    pub fn param_mono(&self, name: &str, e: u32) -> Result<Mono> {
        let i = self.spec.require(name)?;
        Ok(Mono::ONE.with_exp(i, e))
    }
}
