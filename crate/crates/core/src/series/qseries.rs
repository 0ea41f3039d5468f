//! Truncated Laurent series in `q` over capped parameter polynomials.
//!
//! A [`QSeries`] stores every coefficient of `q^n` for `lo <= n <= hi`.
//! Coefficients below `lo` are exactly zero and the series is known exactly
//! modulo `q^(hi+1)`. Operations track precision honestly: multiplying by a
//! factor of negative valuation lowers `hi`, and each parameter carries a
//! [`DegreeBound`] saying whether the true object is a polynomial in that
//! parameter or has been cut at its cap.

use std::fmt;
use std::sync::Arc;

use super::poly::{
    constant_term, terms_add, terms_inverse, terms_mul, terms_mul_mono, terms_neg, terms_scale,
    terms_truncate, Accum, ParamPoly, Terms,
};
use super::spec::{Mono, ParamSpec};
use crate::error::{Error, Result};
use crate::rational::Rat;

/// What is known about the dependence on one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeBound {
    /// The true object is a polynomial of at most this degree in the
    /// parameter; every monomial is stored.
    Polynomial(u32),
    /// Coefficients are exact for degrees up to this bound only; higher
    /// degrees were cut by the cap.
    Truncated(u32),
}

impl DegreeBound {
    /// Highest degree that may be stored.
    pub fn stored(self) -> u32 {
        match self {
            DegreeBound::Polynomial(d) | DegreeBound::Truncated(d) => d,
        }
    }

    fn sum(self, other: DegreeBound) -> DegreeBound {
        use DegreeBound::*;
        match (self, other) {
            (Polynomial(a), Polynomial(b)) => Polynomial(a.max(b)),
            (Polynomial(_), Truncated(k)) | (Truncated(k), Polynomial(_)) => Truncated(k),
            (Truncated(a), Truncated(b)) => Truncated(a.min(b)),
        }
    }

    fn product(self, other: DegreeBound, cap: u32) -> DegreeBound {
        use DegreeBound::*;
        match (self, other) {
            (Polynomial(a), Polynomial(b)) if a + b <= cap => Polynomial(a + b),
            (Polynomial(_), Polynomial(_)) => Truncated(cap),
            (Polynomial(_), Truncated(k)) | (Truncated(k), Polynomial(_)) => Truncated(k),
            (Truncated(a), Truncated(b)) => Truncated(a.min(b)),
        }
    }
}

/// First disagreement found by [`QSeries::equal_upto`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub q_order: i64,
    pub exponents: Vec<u32>,
    pub monomial: String,
    pub lhs: Rat,
    pub rhs: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    FirstMismatch(Mismatch),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

#[derive(Clone)]
pub struct QSeries {
    spec: Arc<ParamSpec>,
    floor: i64,
    lo: i64,
    hi: i64,
    coeffs: Vec<Terms>,
    bounds: Vec<DegreeBound>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Neg,
}

fn observed_degrees(spec: &ParamSpec, coeffs: &[Terms]) -> Vec<u32> {
    let mut deg = vec![0; spec.len()];
    for c in coeffs {
        for (m, _) in c {
            for (i, d) in deg.iter_mut().enumerate() {
                *d = (*d).max(m.exp(i));
            }
        }
    }
    deg
}

impl QSeries {
    pub(crate) fn build(
        spec: Arc<ParamSpec>,
        floor: i64,
        lo: i64,
        hi: i64,
        coeffs: Vec<Terms>,
        bounds: Vec<DegreeBound>,
    ) -> Result<QSeries> {
        if hi < lo {
            return Err(Error::Window(format!("empty window [{lo}, {hi}]")));
        }
        if lo < floor {
            return Err(Error::LaurentFloor { exponent: lo, floor });
        }
        debug_assert_eq!(coeffs.len() as i64, hi - lo + 1);
        Ok(QSeries { spec, floor, lo, hi, coeffs, bounds })
    }

    /// Zero series known modulo `q^(hi+1)`.
    pub fn zero(spec: &Arc<ParamSpec>, floor: i64, hi: i64) -> QSeries {
        let lo = hi.min(0);
        QSeries {
            spec: spec.clone(),
            floor,
            lo,
            hi,
            coeffs: vec![Vec::new(); (hi - lo + 1) as usize],
            bounds: vec![DegreeBound::Polynomial(0); spec.len()],
        }
    }

    /// `c * m * q^k` known modulo `q^(hi+1)`; an out-of-cap monomial gives zero.
    pub fn monomial(spec: &Arc<ParamSpec>, floor: i64, hi: i64, c: Rat, m: Mono, k: i64) -> Result<QSeries> {
        if k < floor {
            return Err(Error::LaurentFloor { exponent: k, floor });
        }
        if c.is_zero() || !m.within(spec.caps()) || k > hi {
            let mut z = QSeries::zero(spec, floor, hi);
            if m.within(spec.caps()) {
                z.bounds = (0..spec.len()).map(|i| DegreeBound::Polynomial(m.exp(i))).collect();
            }
            return Ok(z);
        }
        let lo = k.min(0).max(floor);
        let mut coeffs = vec![Vec::new(); (hi - lo + 1) as usize];
        coeffs[(k - lo) as usize] = vec![(m, c)];
        let bounds = (0..spec.len()).map(|i| DegreeBound::Polynomial(m.exp(i))).collect();
        QSeries::build(spec.clone(), floor, lo, hi, coeffs, bounds)
    }

    /// Exact Laurent polynomial `sum_i coeffs[i] q^(lo+i)`, stored modulo
    /// `q^(hi+1)`.
    pub fn from_coeffs(lo: i64, hi: i64, floor: i64, coeffs: &[ParamPoly]) -> Result<QSeries> {
        let spec = coeffs
            .first()
            .map(|c| c.spec().clone())
            .ok_or_else(|| Error::Window("no coefficients given".into()))?;
        let mut stored = vec![Vec::new(); (hi - lo + 1).max(0) as usize];
        for (i, c) in coeffs.iter().enumerate() {
            if c.spec() != &spec {
                return Err(Error::SpecMismatch("coefficients use different specs".into()));
            }
            let n = lo + i as i64;
            if n <= hi {
                stored[i] = c.terms().to_vec();
            }
        }
        let degs = observed_degrees(&spec, &stored);
        let bounds = degs.into_iter().map(DegreeBound::Polynomial).collect();
        QSeries::build(spec, floor, lo, hi, stored, bounds)
    }

    /// Parameter-free Laurent polynomial `sum_i coeffs[i] q^(lo+i)`, stored
    /// modulo `q^(hi+1)`.
    pub fn from_rats(spec: &Arc<ParamSpec>, floor: i64, lo: i64, hi: i64, coeffs: &[Rat]) -> Result<QSeries> {
        let lo = lo.min(hi);
        let stored = (lo..=hi)
            .map(|n| {
                let i = n - lo;
                match coeffs.get(i as usize) {
                    Some(c) if !c.is_zero() => vec![(Mono::ONE, c.clone())],
                    _ => Vec::new(),
                }
            })
            .collect();
        QSeries::build(spec.clone(), floor, lo, hi, stored, vec![DegreeBound::Polynomial(0); spec.len()])
    }

    pub fn spec(&self) -> &Arc<ParamSpec> {
        &self.spec
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn bounds(&self) -> &[DegreeBound] {
        &self.bounds
    }

    fn stored_caps(&self) -> Vec<u32> {
        self.bounds.iter().map(|b| b.stored()).collect()
    }

    pub(crate) fn get(&self, n: i64) -> &[(Mono, Rat)] {
        if n < self.lo || n > self.hi {
            &[]
        } else {
            &self.coeffs[(n - self.lo) as usize]
        }
    }

    /// Coefficient of `q^n` as a parameter polynomial. Panics if `n > hi`,
    /// where the coefficient is unknown.
    pub fn coeff(&self, n: i64) -> ParamPoly {
        assert!(n <= self.hi, "coefficient of q^{n} is beyond the known window (hi = {})", self.hi);
        ParamPoly::from_canonical(self.spec.clone(), self.get(n).to_vec())
    }

    /// Parameter-free part of the coefficient of `q^n`.
    pub fn coeff_const(&self, n: i64) -> Rat {
        assert!(n <= self.hi, "coefficient of q^{n} is beyond the known window (hi = {})", self.hi);
        constant_term(self.get(n))
    }

    /// Coefficient of `m * q^n`.
    pub fn coeff_at(&self, n: i64, m: Mono) -> Rat {
        assert!(n <= self.hi, "coefficient of q^{n} is beyond the known window (hi = {})", self.hi);
        let c = self.get(n);
        match c.binary_search_by(|(k, _)| k.cmp(&m)) {
            Ok(i) => c[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Lowest exponent with a nonzero coefficient, or `hi + 1` for zero.
    pub fn valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .position(|c| !c.is_empty())
            .map(|i| self.lo + i as i64)
            .unwrap_or(self.hi + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Vec::is_empty)
    }

    fn check(&self, other: &QSeries) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!("{:?} vs {:?}", self.spec.names(), other.spec.names())))
        }
    }

    /// Image under the quotient map to a spec with the same names and caps
    /// no larger than the current ones.
    pub fn recap(&self, spec: &Arc<ParamSpec>) -> Result<QSeries> {
        if spec.names() != self.spec.names() {
            return Err(Error::SpecMismatch(format!("{:?} vs {:?}", self.spec.names(), spec.names())));
        }
        if spec.caps().iter().zip(self.spec.caps()).any(|(new, old)| new > old) {
            return Err(Error::Cap("recap cannot raise a cap".into()));
        }
        let bounds: Vec<_> = self
            .bounds
            .iter()
            .zip(spec.caps())
            .map(|(b, &cap)| match *b {
                DegreeBound::Polynomial(d) if d <= cap => DegreeBound::Polynomial(d),
                b => DegreeBound::Truncated(b.stored().min(cap)),
            })
            .collect();
        let caps: Vec<u32> = bounds.iter().map(|b| b.stored()).collect();
        let coeffs = self.coeffs.iter().map(|t| terms_truncate(t, &caps)).collect();
        QSeries::build(spec.clone(), self.floor, self.lo, self.hi, coeffs, bounds)
    }

    /// Drops everything above `q^hi`.
    pub fn truncate(&self, hi: i64) -> Result<QSeries> {
        if hi >= self.hi {
            return Ok(self.clone());
        }
        let lo = self.lo.min(hi);
        let coeffs = (lo..=hi).map(|n| self.get(n).to_vec()).collect();
        QSeries::build(self.spec.clone(), self.floor, lo, hi, coeffs, self.bounds.clone())
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.check(other)?;
        let hi = self.hi.min(other.hi);
        let lo = self.lo.min(other.lo).min(hi);
        let bounds: Vec<_> = self.bounds.iter().zip(&other.bounds).map(|(a, b)| a.sum(*b)).collect();
        let caps: Vec<u32> = bounds.iter().map(|b| b.stored()).collect();
        let trim = caps != self.stored_caps() || caps != other.stored_caps();
        let coeffs = (lo..=hi)
            .map(|n| {
                let s = terms_add(self.get(n), other.get(n));
                if trim {
                    terms_truncate(&s, &caps)
                } else {
                    s
                }
            })
            .collect();
        QSeries::build(self.spec.clone(), self.floor.max(other.floor), lo, hi, coeffs, bounds)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| terms_neg(c)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|t| terms_scale(t, c)).collect(), ..self.clone() }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Result<QSeries> {
        let lo = self.lo + k;
        if lo < self.floor {
            let v = self.valuation();
            if v > self.hi || v + k < self.floor {
                return Err(Error::LaurentFloor { exponent: lo.min(v + k), floor: self.floor });
            }
            // Only leading zeros would cross the floor.
            let trimmed = QSeries::build(
                self.spec.clone(),
                self.floor,
                v,
                self.hi,
                (v..=self.hi).map(|n| self.get(n).to_vec()).collect(),
                self.bounds.clone(),
            )?;
            return trimmed.shift(k);
        }
        Ok(QSeries { lo, hi: self.hi + k, ..self.clone() })
    }

    /// Multiplication by `c * m * q^k`.
    pub fn mul_monomial(&self, c: &Rat, m: Mono, k: i64) -> Result<QSeries> {
        let bounds: Vec<_> = self
            .bounds
            .iter()
            .enumerate()
            .map(|(i, b)| b.product(DegreeBound::Polynomial(m.exp(i)), self.spec.cap(i)))
            .collect();
        let caps: Vec<u32> = bounds.iter().map(|b| b.stored()).collect();
        let coeffs = self.coeffs.iter().map(|t| terms_mul_mono(t, m, c, &caps)).collect();
        QSeries { coeffs, bounds, ..self.clone() }.shift(k)
    }

    /// Multiplication by a `q`-free parameter polynomial.
    pub fn mul_poly(&self, p: &ParamPoly) -> Result<QSeries> {
        if p.spec() != &self.spec {
            return Err(Error::SpecMismatch("polynomial and series specs differ".into()));
        }
        let pdeg = observed_degrees(&self.spec, &[p.terms().to_vec()]);
        let bounds: Vec<_> = self
            .bounds
            .iter()
            .enumerate()
            .map(|(i, b)| b.product(DegreeBound::Polynomial(pdeg[i]), self.spec.cap(i)))
            .collect();
        let caps: Vec<u32> = bounds.iter().map(|b| b.stored()).collect();
        let coeffs = self.coeffs.iter().map(|t| terms_mul(t, p.terms(), &caps, &self.spec)).collect();
        Ok(QSeries { coeffs, bounds, ..self.clone() })
    }

    /// Product; the result is exact modulo `q^(hi+1)` with
    /// `hi = min(s.hi + val(t), t.hi + val(s))`.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check(other)?;
        let (va, vb) = (self.valuation(), other.valuation());
        let hi = (self.hi + vb).min(other.hi + va).min(self.hi.max(other.hi));
        let lo = (va + vb).min(hi);
        let floor = self.floor.max(other.floor);
        let bounds: Vec<_> = self
            .bounds
            .iter()
            .zip(&other.bounds)
            .enumerate()
            .map(|(i, (a, b))| a.product(*b, self.spec.cap(i)))
            .collect();
        let caps: Vec<u32> = bounds.iter().map(|b| b.stored()).collect();
        let mut acc = Accum::new(&self.spec);
        let mut coeffs = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        for n in lo..=hi {
            let i_lo = va.max(n - other.hi);
            let i_hi = self.hi.min(n - vb);
            for i in i_lo..=i_hi {
                let a = self.get(i);
                if a.is_empty() {
                    continue;
                }
                let b = other.get(n - i);
                if b.is_empty() {
                    continue;
                }
                if b.len() == 1 && b[0].0 == Mono::ONE && a[0].0 != Mono::ONE {
                    acc.add_product(b, a, &caps);
                } else {
                    acc.add_product(a, b, &caps);
                }
            }
            coeffs.push(acc.take());
        }
        QSeries::build(self.spec.clone(), floor, lo, hi, coeffs, bounds)
    }

    /// Dispatches the ring operations; `Neg` ignores `other`.
    pub fn apply(op: SeriesOp, s: &QSeries, other: &QSeries) -> Result<QSeries> {
        match op {
            SeriesOp::Add => s.add(other),
            SeriesOp::Mul => s.mul(other),
            SeriesOp::Neg => s.check(other).map(|_| s.neg()),
        }
    }

    /// Multiplicative inverse. The coefficient at the valuation must have a
    /// nonzero parameter-free part. For valuation `v` the result starts at
    /// `q^-v` and is exact up to `hi - 2v`.
    pub fn inverse(&self) -> Result<QSeries> {
        let v = self.valuation();
        if v > self.hi {
            return Err(Error::NotInvertible("series is zero in its known window".into()));
        }
        let bounds: Vec<_> = self
            .bounds
            .iter()
            .enumerate()
            .map(|(i, b)| match b {
                DegreeBound::Polynomial(0) => DegreeBound::Polynomial(0),
                DegreeBound::Polynomial(_) => DegreeBound::Truncated(self.spec.cap(i)),
                t => *t,
            })
            .collect();
        let caps: Vec<u32> = bounds.iter().map(|b| b.stored()).collect();
        let lead_inv = terms_inverse(self.get(v), &caps, &self.spec).ok_or_else(|| {
            Error::NotInvertible(format!("leading coefficient at q^{v} has zero constant term"))
        })?;
        let len = (self.hi - v + 1) as usize;
        let mut out: Vec<Terms> = Vec::with_capacity(len);
        out.push(lead_inv.clone());
        let mut acc = Accum::new(&self.spec);
        for n in 1..len {
            for i in 1..=n {
                let a = self.get(v + i as i64);
                if a.is_empty() || out[n - i].is_empty() {
                    continue;
                }
                acc.add_product(a, &out[n - i], &caps);
            }
            let s = acc.take();
            let t = if s.is_empty() { s } else { terms_neg(&terms_mul(&s, &lead_inv, &caps, &self.spec)) };
            out.push(t);
        }
        QSeries::build(self.spec.clone(), self.floor, -v, self.hi - 2 * v, out, bounds)
    }

    /// Division by the binomial `1 - c*m*q^e`.
    pub fn div_binomial(&self, c: &Rat, m: Mono, e: i64) -> Result<QSeries> {
        if c.is_zero() || !m.within(self.spec.caps()) {
            return Ok(self.clone());
        }
        let param_free = m == Mono::ONE;
        let bounds: Vec<_> = self
            .bounds
            .iter()
            .enumerate()
            .map(|(i, b)| {
                match b {
                    _ if m.exp(i) == 0 => *b,
                    DegreeBound::Truncated(k) => DegreeBound::Truncated(*k),
                    DegreeBound::Polynomial(_) => DegreeBound::Truncated(self.spec.cap(i)),
                }
            })
            .collect();
        let caps: Vec<u32> = bounds.iter().map(|b| b.stored()).collect();
        if e >= 1 {
            // t = s + c m q^e t
            let mut out: Vec<Terms> = Vec::with_capacity(self.coeffs.len());
            for n in self.lo..=self.hi {
                let mut t = terms_truncate(self.get(n), &caps);
                let back = n - e;
                if back >= self.lo {
                    let prev = &out[(back - self.lo) as usize];
                    if !prev.is_empty() {
                        t = terms_add(&t, &terms_mul_mono(prev, m, c, &caps));
                    }
                }
                out.push(t);
            }
            return QSeries::build(self.spec.clone(), self.floor, self.lo, self.hi, out, bounds);
        }
        if !param_free {
            // Nilpotent ratio: the geometric sum stops once m^k leaves the caps.
            let steps = (0..self.spec.len())
                .filter(|&i| m.exp(i) > 0)
                .map(|i| caps[i] / m.exp(i))
                .min()
                .unwrap_or(0);
            let mut total = QSeries { bounds: bounds.clone(), ..self.clone() };
            total.coeffs = total.coeffs.iter().map(|t| terms_truncate(t, &caps)).collect();
            let mut power = total.clone();
            for _ in 0..steps {
                power = power.mul_monomial(c, m, e)?;
                power.bounds = bounds.clone();
                total = total.add(&power)?;
            }
            return Ok(total);
        }
        if e == 0 {
            let one_minus = &Rat::one() - c;
            let inv = one_minus
                .recip()
                .ok_or_else(|| Error::NotInvertible("division by 1 - 1".into()))?;
            return Ok(self.scale(&inv));
        }
        let hi = self.hi + 2 * e.abs() + 1;
        let factor = QSeries::monomial(&self.spec, self.floor, hi, Rat::one(), Mono::ONE, 0)?
            .sub(&QSeries::monomial(&self.spec, self.floor, hi, c.clone(), Mono::ONE, e)?)?;
        self.mul(&factor.inverse()?)
    }

    /// Multiplication by the binomial `1 - c*m*q^e`.
    pub fn mul_binomial(&self, c: &Rat, m: Mono, e: i64) -> Result<QSeries> {
        self.sub(&self.mul_monomial(c, m, e)?)
    }

    /// Formal partial derivative with respect to a parameter.
    pub fn derivative(&self, name: &str) -> Result<QSeries> {
        let i = self.spec.require(name)?;
        let bound = match self.bounds[i] {
            DegreeBound::Polynomial(d) => DegreeBound::Polynomial(d.saturating_sub(1)),
            DegreeBound::Truncated(0) => {
                return Err(Error::Window(format!(
                    "derivative in `{name}` of a series known only at degree 0 has no known coefficient"
                )))
            }
            DegreeBound::Truncated(k) => DegreeBound::Truncated(k - 1),
        };
        let mut bounds = self.bounds.clone();
        bounds[i] = bound;
        let keep = bound.stored();
        let coeffs = self
            .coeffs
            .iter()
            .map(|t| {
                let mut out: Terms = t
                    .iter()
                    .filter(|(m, _)| m.exp(i) >= 1 && m.exp(i) - 1 <= keep)
                    .map(|(m, c)| (m.with_exp(i, m.exp(i) - 1), c * &Rat::from_int(m.exp(i) as i64)))
                    .collect();
                out.sort_by(|a, b| a.0.cmp(&b.0));
                out
            })
            .collect();
        Ok(QSeries { coeffs, bounds, ..self.clone() })
    }

    /// Substitutes `name := c * q^k`.
    ///
    /// The returned window only contains coefficients that are exact for the
    /// true object. For a parameter cut at degree `K`, `k > 0` keeps
    /// coefficients up to `lo + k(K+1) - 1`; `k <= 0` with `c != 0` has no
    /// exact coefficient. For a polynomial of degree `d` and `k < 0` the
    /// window shrinks by `|k| d`.
    pub fn substitute(&self, name: &str, c: &Rat, k: i64) -> Result<QSeries> {
        let i = self.spec.require(name)?;
        let bound = self.bounds[i];
        let stored = bound.stored();
        let (lo, hi) = if c.is_zero() {
            (self.lo, self.hi)
        } else {
            match bound {
                DegreeBound::Polynomial(_) if k >= 0 => (self.lo, self.hi),
                DegreeBound::Polynomial(d) => (self.lo + k * d as i64, self.hi + k * d as i64),
                DegreeBound::Truncated(kk) if k > 0 => (self.lo, self.hi.min(self.lo + k * (kk as i64 + 1) - 1)),
                DegreeBound::Truncated(_) => {
                    return Err(Error::EmptyWindow(format!(
                        "`{name}` was truncated at its cap; substituting {c}*q^{k} leaves no exact coefficient"
                    )))
                }
            }
        };
        if hi < lo {
            return Err(Error::EmptyWindow(format!("window [{lo}, {hi}] after substituting `{name}`")));
        }
        if lo < self.floor {
            return Err(Error::LaurentFloor { exponent: lo, floor: self.floor });
        }
        let powers: Vec<Rat> = (0..=stored).map(|e| c.pow(e)).collect();
        let mut acc = Accum::new(&self.spec);
        let mut buckets: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); (hi - lo + 1) as usize];
        for n in self.lo..=self.hi {
            for (m, v) in self.get(n) {
                let e = m.exp(i);
                let target = n + k * e as i64;
                if target < lo || target > hi {
                    continue;
                }
                let w = v * &powers[e as usize];
                if !w.is_zero() {
                    buckets[(target - lo) as usize].push((m.with_exp(i, 0), w));
                }
            }
        }
        let coeffs = buckets
            .into_iter()
            .map(|b| {
                acc.add_terms(&b);
                acc.take()
            })
            .collect();
        let mut bounds = self.bounds.clone();
        bounds[i] = DegreeBound::Polynomial(0);
        QSeries::build(self.spec.clone(), self.floor, lo, hi, coeffs, bounds)
    }

    /// Compares coefficients of every `q^m` with `m <= n`, over the parameter
    /// monomials known in both series.
    pub fn equal_upto(&self, other: &QSeries, n: i64) -> Result<Comparison> {
        self.check(other)?;
        if n > self.hi || n > other.hi {
            return Err(Error::Window(format!(
                "cannot compare up to q^{n}: exact windows end at q^{} and q^{}",
                self.hi, other.hi
            )));
        }
        let known = |b: &DegreeBound, cap: u32| match b {
            DegreeBound::Polynomial(_) => cap,
            DegreeBound::Truncated(k) => *k,
        };
        let caps: Vec<u32> = self
            .bounds
            .iter()
            .zip(&other.bounds)
            .zip(self.spec.caps())
            .map(|((a, b), &cap)| known(a, cap).min(known(b, cap)))
            .collect();
        for q in self.lo.min(other.lo)..=n {
            let a = terms_truncate(self.get(q), &caps);
            let b = terms_truncate(other.get(q), &caps);
            if a == b {
                continue;
            }
            let diff = terms_add(&a, &terms_neg(&b));
            let m = diff[0].0;
            let find = |t: &[(Mono, Rat)]| {
                t.iter().find(|(k, _)| *k == m).map(|(_, v)| v.clone()).unwrap_or_default()
            };
            return Ok(Comparison::FirstMismatch(Mismatch {
                q_order: q,
                exponents: m.exps(self.spec.len()),
                monomial: self.spec.render(m),
                lhs: find(&a),
                rhs: find(&b),
            }));
        }
        Ok(Comparison::Equal)
    }

    /// Parameter-free coefficients of `q^lo ..= q^n`.
    pub fn const_coeffs(&self, n: i64) -> Vec<Rat> {
        (self.lo..=n.min(self.hi)).map(|k| self.coeff_const(k)).collect()
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.hi == other.hi
            && (self.lo.min(other.lo)..=self.hi).all(|n| self.get(n) == other.get(n))
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[{}..={}]{{", self.lo, self.hi)?;
        let mut first = true;
        for n in self.lo..=self.hi {
            let c = self.get(n);
            if c.is_empty() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let p = ParamPoly::from_canonical(self.spec.clone(), c.to_vec());
            write!(f, "({p})q^{n}")?;
        }
        write!(f, " + O(q^{})}}", self.hi + 1)
    }
}
