use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::series::{QSeries, SeriesContext};

const MAX_TERMS: usize = 1 << 16;

/// A sequence of partial objects converging to `limit`, with a proven lower
/// bound `order_gain(n)` on the q-order of `limit - partial(n)`.
///
/// `partial` is called with increasing `n`, so implementations may cache.
pub struct TailFamily<'a> {
    pub partial: Box<dyn FnMut(usize) -> Result<QSeries> + 'a>,
    pub limit: QSeries,
    pub order_gain: Box<dyn Fn(usize) -> i64 + 'a>,
}

impl<'a> TailFamily<'a> {
    pub fn new(
        limit: QSeries,
        partial: impl FnMut(usize) -> Result<QSeries> + 'a,
        order_gain: impl Fn(usize) -> i64 + 'a,
    ) -> Self {
        TailFamily { partial: Box::new(partial), limit, order_gain: Box::new(order_gain) }
    }

    fn n_max(&self, order: i64) -> Result<usize> {
        (0..MAX_TERMS)
            .find(|&n| (self.order_gain)(n) > order)
            .ok_or_else(|| Error::NonStabilizedTail(format!("order_gain never exceeds {order}")))
    }

    fn term(&mut self, n: usize, order: i64) -> Result<QSeries> {
        let t = self.limit.sub(&(self.partial)(n)?)?.truncate(order)?;
        let gain = (self.order_gain)(n);
        if t.valuation() < gain.min(order + 1) {
            return Err(Error::NonStabilizedTail(format!(
                "term {n} has q-order {} below the claimed bound {gain}",
                t.valuation()
            )));
        }
        Ok(t)
    }
}

/// `sum_{n=0}^{n_max} (limit - partial(n))`, where `n_max` is the least `n`
/// with `order_gain(n) > order`.
pub fn tail_sum(f: &mut TailFamily, ctx: &SeriesContext) -> Result<QSeries> {
    tail_sum_extra(f, 0, ctx)
}

/// As [`tail_sum`], summing `extra` further terms past `n_max`.
pub fn tail_sum_extra(f: &mut TailFamily, extra: usize, ctx: &SeriesContext) -> Result<QSeries> {
    let order = ctx.order();
    let n_max = f.n_max(order)?;
    let last = n_max + extra.max(1);
    let skip = if ctx.is_fault(Fault::TailShort) { n_max.checked_sub(1) } else { None };
    let mut total = ctx.zero();
    for n in 0..=last {
        let t = f.term(n, order)?;
        if n >= n_max && !t.is_zero() {
            return Err(Error::NonStabilizedTail(format!("term {n} past the cutoff {n_max} is nonzero")));
        }
        if Some(n) != skip {
            total = total.add(&t)?;
        }
    }
    Ok(total)
}

/// `sum_{n>=start} term(n)`, where `gain(n)` bounds the q-order of `term(n)`
/// from below. Summation stops at the first `n` with `gain(n) > order`, and
/// that term is checked to vanish.
pub fn sum_until(
    ctx: &SeriesContext,
    start: usize,
    gain: impl Fn(usize) -> i64,
    mut term: impl FnMut(usize) -> Result<QSeries>,
) -> Result<QSeries> {
    let order = ctx.order();
    let mut total = ctx.zero();
    for n in start..start + MAX_TERMS {
        let t = term(n)?.truncate(order)?;
        if gain(n) > order {
            if !t.is_zero() {
                return Err(Error::NonStabilizedTail(format!("term {n} past the order bound is nonzero")));
            }
            return Ok(total);
        }
        total = total.add(&t)?;
    }
    Err(Error::NonStabilizedTail(format!("gain never exceeds {order}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfunc::{pochhammer_finite, pochhammer_infinite, QMonomial};
    use crate::rational::Rat;

    fn distinct_tail<'a>(ctx: &'a SeriesContext) -> TailFamily<'a> {
        let a = QMonomial::scaled_q(-1, 1);
        let limit = pochhammer_infinite(&a, 1, ctx).unwrap();
        TailFamily::new(limit, move |n| pochhammer_finite(&a, n, 1, ctx), |n| n as i64 + 1)
    }

    #[test]
    fn distinct_parts_tail_matches_alternate_form() {
        let ctx = SeriesContext::plain(20).unwrap();
        let lhs = tail_sum(&mut distinct_tail(&ctx), &ctx).unwrap();
        assert_eq!(lhs.coeff_const(1), Rat::one());
        // sum_k k q^k (-q)_{k-1}
        let alt = sum_until(
            &ctx,
            1,
            |k| k as i64,
            |k| {
                let p = pochhammer_finite(&QMonomial::scaled_q(-1, 1), k - 1, 1, &ctx)?;
                p.mul_monomial(&Rat::from_int(k as i64), crate::series::Mono::ONE, k as i64)
            },
        )
        .unwrap();
        assert!(lhs.equal_upto(&alt, 20).unwrap().is_equal());
    }

    #[test]
    fn extra_terms_change_nothing() {
        let ctx = SeriesContext::plain(15).unwrap();
        let a = tail_sum(&mut distinct_tail(&ctx), &ctx).unwrap();
        let b = tail_sum_extra(&mut distinct_tail(&ctx), 5, &ctx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trivial_family() {
        let ctx = SeriesContext::plain(0).unwrap();
        let one = ctx.one();
        let mut f = TailFamily::new(one.clone(), move |_| Ok(one.clone()), |n| n as i64 + 1);
        assert!(tail_sum(&mut f, &ctx).unwrap().is_zero());
    }

    #[test]
    fn wrong_gain_is_caught() {
        let ctx = SeriesContext::plain(10).unwrap();
        let a = QMonomial::scaled_q(-1, 1);
        let limit = pochhammer_infinite(&a, 1, &ctx).unwrap();
        let mut f = TailFamily::new(limit, |n| pochhammer_finite(&a, n, 1, &ctx), |n| 2 * n as i64 + 1);
        assert!(matches!(tail_sum(&mut f, &ctx), Err(Error::NonStabilizedTail(_))));
    }

    #[test]
    fn short_fault_differs() {
        let ctx = SeriesContext::plain(10).unwrap();
        let bad = ctx.clone().with_fault(Some(Fault::TailShort));
        let a = tail_sum(&mut distinct_tail(&ctx), &ctx).unwrap();
        let b = tail_sum(&mut distinct_tail(&bad), &bad).unwrap();
        assert_ne!(a, b);
    }
}
