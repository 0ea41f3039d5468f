//! Small constructors shared by the registry entries.

use crate::error::Result;
use crate::fault::Fault;
use crate::partition::{self, Constraint, WeightRule};
use crate::qfunc::{pochhammer_finite, pochhammer_finite_inv, QMonomial};
use crate::rational::Rat;
use crate::series::{Mono, QSeries, SeriesContext};

pub(super) fn sign(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(super) fn tri(n: usize) -> i64 {
    (n * (n + 1) / 2) as i64
}

pub(super) fn tri_below(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

/// `c * q^k`.
pub(super) fn qterm(ctx: &SeriesContext, c: i64, k: i64) -> Result<QSeries> {
    ctx.monomial(Rat::from_int(c), Mono::ONE, k)
}

/// `name^e`, or `None` once `e` is past the cap.
pub(super) fn power(ctx: &SeriesContext, name: &str, e: usize) -> Result<Option<Mono>> {
    let i = ctx.spec().require(name)?;
    if e > ctx.spec().cap(i) as usize {
        return Ok(None);
    }
    Ok(Some(Mono::ONE.with_exp(i, e as u32)))
}

/// `c * name^e * q^k`, zero once `e` is past the cap.
pub(super) fn pterm(ctx: &SeriesContext, c: i64, name: &str, e: usize, k: i64) -> Result<QSeries> {
    match power(ctx, name, e)? {
        Some(m) => ctx.monomial(Rat::from_int(c), m, k),
        None => Ok(ctx.zero()),
    }
}

/// `s / (1 - q^e)`.
pub(super) fn over_geom(s: &QSeries, e: i64) -> Result<QSeries> {
    s.div_binomial(&Rat::one(), Mono::ONE, e)
}

/// `s / (1 + q^e)`.
pub(super) fn over_plus(s: &QSeries, e: i64) -> Result<QSeries> {
    s.div_binomial(&Rat::from_int(-1), Mono::ONE, e)
}

/// `1 / (q)_n`.
pub(super) fn q_inv(n: usize, ctx: &SeriesContext) -> Result<QSeries> {
    pochhammer_finite_inv(&QMonomial::q(1), n, 1, ctx)
}

/// `(q)_n`.
pub(super) fn q_fin(n: usize, ctx: &SeriesContext) -> Result<QSeries> {
    pochhammer_finite(&QMonomial::q(1), n, 1, ctx)
}

/// `(-q)_n`.
pub(super) fn negq_fin(n: usize, ctx: &SeriesContext) -> Result<QSeries> {
    pochhammer_finite(&QMonomial::scaled_q(-1, 1), n, 1, ctx)
}

/// `1 / (-q)_n`.
pub(super) fn negq_inv(n: usize, ctx: &SeriesContext) -> Result<QSeries> {
    pochhammer_finite_inv(&QMonomial::scaled_q(-1, 1), n, 1, ctx)
}

pub(super) fn half() -> Rat {
    Rat::new(1, 2)
}

/// `(name * q^shift)_k` for `k = 0, 1, ..`, grown one factor at a time.
pub(super) struct PochSeq {
    mono: Mono,
    shift: i64,
    terms: Vec<QSeries>,
}

impl PochSeq {
    pub(super) fn new(ctx: &SeriesContext, name: &str, shift: i64) -> Result<Self> {
        Ok(PochSeq { mono: ctx.param_mono(name, 1)?, shift, terms: vec![ctx.one()] })
    }

    pub(super) fn get(&mut self, k: usize) -> Result<&QSeries> {
        while self.terms.len() <= k {
            let i = self.terms.len() as i64 - 1;
            let next = self.terms[i as usize].mul_binomial(&Rat::one(), self.mono, self.shift + i)?;
            self.terms.push(next);
        }
        Ok(&self.terms[k])
    }
}

/// `p_1(n)`, unsigned under [`Fault::P1Unsigned`].
pub(super) fn p1(n: u32, ctx: &SeriesContext) -> Result<i64> {
    if ctx.is_fault(Fault::P1Unsigned) {
        partition::p1_count(n)?;
        return partition::weighted_count(n, &Constraint::p1(), WeightRule::Unweighted);
    }
    partition::p1_count(n)
}

/// `tau_o(n) - tau_e(n)`; [`Fault::TauMissingSelf`] leaves out `n` itself.
pub(super) fn tau_diff(n: u32, ctx: &SeriesContext) -> i64 {
    let (o, e) = (partition::tau_odd(n) as i64, partition::tau_even(n) as i64);
    if ctx.is_fault(Fault::TauMissingSelf) && n > 0 {
        if n % 2 == 1 {
            return o - 1 - e;
        }
        return o - (e - 1);
    }
    o - e
}

/// [`partition::sigma_weight`] with the rank sign shifted by one under
/// [`Fault::RankOffByOne`].
pub(super) fn sigma_weight(n: u32, ctx: &SeriesContext) -> Result<i64> {
    if n > 0 && ctx.is_fault(Fault::RankOffByOne) {
        return partition::weighted_count(n, &Constraint::distinct(), WeightRule::RankParityOddMinusEven);
    }
    partition::sigma_weight(n)
}

pub(super) fn sigma2_weight(n: u32, ctx: &SeriesContext) -> Result<i64> {
    if n > 0 && ctx.is_fault(Fault::RankOffByOne) {
        return partition::weighted_count(n, &Constraint::gap(2), WeightRule::RankParityEvenMinusOdd);
    }
    partition::sigma2_weight(n)
}
