//! Polynomials in the declared parameters, reduced modulo `param^(cap+1)`.

use std::fmt;
use std::sync::Arc;

use super::spec::{Mono, ParamSpec};
use crate::error::{Error, Result};
use crate::rational::Rat;

/// Sorted, zero-free term list. The canonical storage for one coefficient.
pub(crate) type Terms = Vec<(Mono, Rat)>;

pub(crate) fn terms_add(a: &[(Mono, Rat)], b: &[(Mono, Rat)]) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let s = &a[i].1 + &b[j].1;
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn terms_neg(a: &[(Mono, Rat)]) -> Terms {
    a.iter().map(|(m, c)| (*m, -c)).collect()
}

pub(crate) fn terms_scale(a: &[(Mono, Rat)], c: &Rat) -> Terms {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(m, v)| (*m, v * c)).collect()
}

/// Multiplies by `c * m`, dropping products outside `caps`. Order is kept
/// because multiplication by a monomial is monotone on packed exponents.
pub(crate) fn terms_mul_mono(a: &[(Mono, Rat)], m: Mono, c: &Rat, caps: &[u32]) -> Terms {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter()
        .filter_map(|(am, v)| {
            let p = am.mul(m);
            p.within(caps).then(|| (p, v * c))
        })
        .collect()
}

pub(crate) fn terms_truncate(a: &[(Mono, Rat)], caps: &[u32]) -> Terms {
    a.iter().filter(|(m, _)| m.within(caps)).cloned().collect()
}

pub(crate) fn constant_term(a: &[(Mono, Rat)]) -> Rat {
    match a.first() {
        Some((m, c)) if *m == Mono::ONE => c.clone(),
        _ => Rat::zero(),
    }
}

/// Dense scratch accumulator over the spec's monomial box.
pub(crate) struct Accum<'a> {
    spec: &'a ParamSpec,
    vals: Vec<Rat>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

impl<'a> Accum<'a> {
    pub(crate) fn new(spec: &'a ParamSpec) -> Self {
        let n = spec.box_size();
        Accum { spec, vals: vec![Rat::zero(); n], mark: vec![false; n], touched: Vec::new() }
    }

    #[inline]
    fn slot(&mut self, m: Mono) -> &mut Rat {
        let idx = self.spec.dense_index(m);
        if !self.mark[idx] {
            self.mark[idx] = true;
            self.touched.push(idx);
        }
        &mut self.vals[idx]
    }

    pub(crate) fn add_terms(&mut self, a: &[(Mono, Rat)]) {
        for (m, c) in a {
            *self.slot(*m) += c;
        }
    }

    /// Accumulates `a * b`, keeping only monomials within `caps`.
    pub(crate) fn add_product(&mut self, a: &[(Mono, Rat)], b: &[(Mono, Rat)], caps: &[u32]) {
        if a.len() == 1 && a[0].0 == Mono::ONE {
            let c = &a[0].1;
            for (m, v) in b {
                self.slot(*m).add_mul(c, v);
            }
            return;
        }
        for (ma, ca) in a {
            if !ma.within(caps) {
                continue;
            }
            for (mb, cb) in b {
                let p = ma.mul(*mb);
                if p.within(caps) {
                    self.slot(p).add_mul(ca, cb);
                }
            }
        }
    }

    /// Returns the accumulated canonical terms and resets the scratch.
    pub(crate) fn take(&mut self) -> Terms {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &idx in &self.touched {
            self.mark[idx] = false;
            let v = std::mem::take(&mut self.vals[idx]);
            if !v.is_zero() {
                out.push((self.spec.mono_at(idx), v));
            }
        }
        self.touched.clear();
        out
    }
}

pub(crate) fn terms_mul(a: &[(Mono, Rat)], b: &[(Mono, Rat)], caps: &[u32], spec: &ParamSpec) -> Terms {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = Accum::new(spec);
    acc.add_product(a, b, caps);
    acc.take()
}

/// Inverse in the quotient ring; `None` when the constant term vanishes.
/// The non-constant part is nilpotent, so the geometric expansion terminates.
pub(crate) fn terms_inverse(a: &[(Mono, Rat)], caps: &[u32], spec: &ParamSpec) -> Option<Terms> {
    let c0 = constant_term(a);
    let c0_inv = c0.recip()?;
    // a = c0 (1 - x)
    let x: Terms = a
        .iter()
        .filter(|(m, _)| *m != Mono::ONE)
        .map(|(m, c)| (*m, -(c * &c0_inv)))
        .collect();
    let mut result: Terms = vec![(Mono::ONE, Rat::one())];
    let mut power = result.clone();
    while !power.is_empty() {
        power = terms_mul(&power, &x, caps, spec);
        result = terms_add(&result, &power);
    }
    Some(terms_scale(&result, &c0_inv))
}

/// Element of `Q[params] / (p_i^(cap_i + 1))`.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamPoly {
    spec: Arc<ParamSpec>,
    terms: Terms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Neg,
}

impl ParamPoly {
    pub fn zero(spec: &Arc<ParamSpec>) -> Self {
        ParamPoly { spec: spec.clone(), terms: Vec::new() }
    }

    pub fn constant(spec: &Arc<ParamSpec>, c: Rat) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(Mono::ONE, c)] };
        ParamPoly { spec: spec.clone(), terms }
    }

    pub fn one(spec: &Arc<ParamSpec>) -> Self {
        Self::constant(spec, Rat::one())
    }

    /// The parameter `name` itself, or zero when its cap is 0.
    pub fn var(spec: &Arc<ParamSpec>, name: &str) -> Result<Self> {
        let i = spec.require(name)?;
        Ok(Self::from_terms(spec, [(Mono::ONE.with_exp(i, 1), Rat::one())]))
    }

    /// Canonicalizes arbitrary terms: merges duplicates, drops zeros and
    /// out-of-cap monomials.
    pub fn from_terms(spec: &Arc<ParamSpec>, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut acc = Accum::new(spec);
        for (m, c) in terms {
            if m.within(spec.caps()) {
                acc.add_terms(&[(m, c)]);
            }
        }
        ParamPoly { spec: spec.clone(), terms: acc.take() }
    }

    pub(crate) fn from_canonical(spec: Arc<ParamSpec>, terms: Terms) -> Self {
        ParamPoly { spec, terms }
    }

    pub fn spec(&self) -> &Arc<ParamSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> Rat {
        match self.terms.binary_search_by(|(k, _)| k.cmp(&m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn constant_term(&self) -> Rat {
        constant_term(&self.terms)
    }

    fn check(&self, other: &ParamPoly) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!("{:?} vs {:?}", self.spec.names(), other.spec.names())))
        }
    }

    pub fn add(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check(other)?;
        Ok(ParamPoly { spec: self.spec.clone(), terms: terms_add(&self.terms, &other.terms) })
    }

    pub fn sub(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly { spec: self.spec.clone(), terms: terms_neg(&self.terms) }
    }

    pub fn mul(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check(other)?;
        let terms = terms_mul(&self.terms, &other.terms, self.spec.caps(), &self.spec);
        Ok(ParamPoly { spec: self.spec.clone(), terms })
    }

    pub fn scale(&self, c: &Rat) -> ParamPoly {
        ParamPoly { spec: self.spec.clone(), terms: terms_scale(&self.terms, c) }
    }

    /// `add`, `mul`, or `neg` (which ignores `r`).
    pub fn apply(op: PolyOp, p: &ParamPoly, r: &ParamPoly) -> Result<ParamPoly> {
        match op {
            PolyOp::Add => p.add(r),
            PolyOp::Mul => p.mul(r),
            PolyOp::Neg => p.check(r).map(|_| p.neg()),
        }
    }

    /// Inverse in the quotient ring; fails when the constant term is zero.
    pub fn inverse(&self) -> Result<ParamPoly> {
        let terms = terms_inverse(&self.terms, self.spec.caps(), &self.spec)
            .ok_or_else(|| Error::NotInvertible("constant term is zero".into()))?;
        Ok(ParamPoly { spec: self.spec.clone(), terms })
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == Mono::ONE {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", self.spec.render(*m))?;
            } else {
                write!(f, "({c})*{}", self.spec.render(*m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}
