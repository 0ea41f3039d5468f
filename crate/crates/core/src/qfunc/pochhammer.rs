use super::QMonomial;
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::rational::Rat;
use crate::series::{Mono, QSeries, SeriesContext};

fn check_base(base: i64) -> Result<()> {
    if base < 1 {
        return Err(Error::Domain(format!("Pochhammer base must be a positive integer, got {base}")));
    }
    Ok(())
}

/// Largest `k` with `m^k` inside the caps, or `None` for the empty monomial.
fn nilpotency(m: Mono, ctx: &SeriesContext) -> Option<u32> {
    let spec = ctx.spec();
    (0..spec.len()).filter(|&i| m.exp(i) > 0).map(|i| spec.cap(i) / m.exp(i)).min()
}

fn finite_exps(a: &QMonomial, n: usize, base: i64, ctx: &SeriesContext) -> Vec<i64> {
    let n = if ctx.is_fault(Fault::PochhammerDropLast) { n.saturating_sub(1) } else { n };
    (0..n as i64).map(|i| a.q_exp + base * i).collect()
}

fn infinite_exps(a: &QMonomial, base: i64, ctx: &SeriesContext) -> Result<Vec<i64>> {
    if a.is_param_free() && a.q_exp <= -base {
        return Err(Error::DivergentProduct(format!(
            "({}*q^{};q^{base})_inf has more than one factor of nonpositive q-order",
            a.coeff, a.q_exp
        )));
    }
    // A factor beyond order + (total negative order of the others) cannot
    // reach the window.
    let slack: i64 = (0..).map(|i| a.q_exp + base * i).take_while(|&e| e < 0).map(|e| -e).sum();
    let top = ctx.order() + slack;
    let mut exps: Vec<i64> = (0..).map(|i| a.q_exp + base * i).take_while(|&e| e <= top).collect();
    if ctx.is_fault(Fault::InfiniteProductShort) {
        if let Some(pos) = exps.iter().rposition(|&e| e <= ctx.order()) {
            exps.remove(pos);
        }
    }
    Ok(exps)
}

fn product(a: &QMonomial, exps: &[i64], ctx: &SeriesContext) -> Result<QSeries> {
    if a.is_zero() {
        return Ok(ctx.one());
    }
    let headroom: i64 = exps.iter().filter(|&&e| e < 0).map(|&e| -e).sum();
    let mut s = ctx.with_order(ctx.order() + headroom).one();
    for &e in exps {
        if e + s.valuation().min(0) > s.hi() {
            break;
        }
        s = s.mul_binomial(&a.coeff, a.mono, e)?;
    }
    s.truncate(ctx.order())
}

fn quotient(a: &QMonomial, exps: &[i64], ctx: &SeriesContext) -> Result<QSeries> {
    if a.is_zero() {
        return Ok(ctx.one());
    }
    let steps = nilpotency(a.mono, ctx).unwrap_or(0) as i64;
    let headroom: i64 = exps.iter().filter(|&&e| e < 0).map(|&e| -e * steps).sum();
    let mut s = ctx.with_order(ctx.order() + headroom).one();
    for &e in exps {
        if e + s.valuation().min(0) > s.hi() {
            break;
        }
        s = s.div_binomial(&a.coeff, a.mono, e)?;
    }
    s.truncate(ctx.order())
}

/// `(a; q^base)_n`, the product of `1 - a q^(base*i)` for `0 <= i < n`.
pub fn pochhammer_finite(a: &QMonomial, n: usize, base: i64, ctx: &SeriesContext) -> Result<QSeries> {
    check_base(base)?;
    product(a, &finite_exps(a, n, base, ctx), ctx)
}

/// `1 / (a; q^base)_n`.
pub fn pochhammer_finite_inv(a: &QMonomial, n: usize, base: i64, ctx: &SeriesContext) -> Result<QSeries> {
    check_base(base)?;
    quotient(a, &finite_exps(a, n, base, ctx), ctx)
}

/// `(a; q^base)_inf` as a finite product of every factor that can reach the
/// window.
pub fn pochhammer_infinite(a: &QMonomial, base: i64, ctx: &SeriesContext) -> Result<QSeries> {
    check_base(base)?;
    if a.is_zero() {
        return Ok(ctx.one());
    }
    product(a, &infinite_exps(a, base, ctx)?, ctx)
}

/// `1 / (a; q^base)_inf`.
pub fn pochhammer_infinite_inv(a: &QMonomial, base: i64, ctx: &SeriesContext) -> Result<QSeries> {
    check_base(base)?;
    if a.is_zero() {
        return Ok(ctx.one());
    }
    quotient(a, &infinite_exps(a, base, ctx)?, ctx)
}

/// `(a; q^base)_inf` from Euler's sum
/// `sum_k (-a)^k q^(base k(k-1)/2) / (q^base; q^base)_k`.
pub fn pochhammer_infinite_euler(a: &QMonomial, base: i64, ctx: &SeriesContext) -> Result<QSeries> {
    check_base(base)?;
    if a.is_zero() {
        return Ok(ctx.one());
    }
    if a.is_param_free() && a.q_exp <= -base {
        return Err(Error::DivergentProduct(format!("Euler sum for ({}*q^{};q^{base})_inf", a.coeff, a.q_exp)));
    }
    let n = ctx.order();
    let spec = ctx.spec().clone();
    let kmax = nilpotency(a.mono, ctx).map(|k| k as i64);
    let exp_of = |k: i64| k * a.q_exp + base * k * (k - 1) / 2;
    let mut ks = Vec::new();
    let mut k = 0i64;
    loop {
        if kmax.is_some_and(|m| k > m) {
            break;
        }
        let e = exp_of(k);
        if e > n && a.q_exp + base * k >= 0 {
            break;
        }
        ks.push(k);
        k += 1;
    }
    let headroom = ks.iter().map(|&k| -exp_of(k)).max().unwrap_or(0).max(0);
    let work = ctx.with_order(n + headroom);
    let neg_c = -&a.coeff;
    let mut denom = work.one();
    let mut total = ctx.zero();
    for &k in &ks {
        if k > 0 {
            denom = denom.div_binomial(&Rat::one(), Mono::ONE, base * k)?;
        }
        let mut mono = Mono::ONE;
        for i in 0..spec.len() {
            mono = mono.with_exp(i, a.mono.exp(i) * k as u32);
        }
        let term = denom.mul_monomial(&neg_c.pow(k as u32), mono, exp_of(k))?;
        total = total.add(&term)?;
    }
    total.truncate(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ParamSpec;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn small_products() {
        let ctx = SeriesContext::plain(6).unwrap();
        let q = QMonomial::q(1);
        assert_eq!(pochhammer_finite(&q, 1, 1, &ctx).unwrap().const_coeffs(6), ints(&[1, -1, 0, 0, 0, 0, 0]));
        assert_eq!(pochhammer_finite(&q, 2, 1, &ctx).unwrap().const_coeffs(6), ints(&[1, -1, -1, 1, 0, 0, 0]));
        assert_eq!(pochhammer_finite(&QMonomial::scaled_q(7, -3), 0, 1, &ctx).unwrap(), ctx.one());
        assert!(pochhammer_finite(&q, 2, 0, &ctx).is_err());
    }

    #[test]
    fn euler_pentagonal() {
        let ctx = SeriesContext::plain(12).unwrap();
        let p = pochhammer_infinite(&QMonomial::q(1), 1, &ctx).unwrap();
        let mut expected = vec![0i64; 13];
        for (e, c) in [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)] {
            expected[e] = c;
        }
        assert_eq!(p.const_coeffs(12), ints(&expected));
        assert_eq!(pochhammer_infinite(&QMonomial::zero(), 1, &ctx).unwrap(), ctx.one());
    }

    #[test]
    fn distinct_parts_product() {
        let ctx = SeriesContext::plain(5).unwrap();
        let p = pochhammer_infinite(&QMonomial::scaled_q(-1, 1), 1, &ctx).unwrap();
        assert_eq!(p.const_coeffs(5), ints(&[1, 1, 1, 2, 2, 3]));
    }

    #[test]
    fn divergent_argument() {
        let ctx = SeriesContext::plain(5).unwrap();
        let r = pochhammer_infinite(&QMonomial::q(-1), 1, &ctx);
        assert!(matches!(r, Err(Error::DivergentProduct(_))));
    }

    #[test]
    fn negative_order_argument_keeps_window() {
        let spec = ParamSpec::new(&[("b", 4)]).unwrap();
        let ctx = SeriesContext::new(8, spec).unwrap();
        let bq = QMonomial::param(&ctx, "b", -1).unwrap();
        let p = pochhammer_finite(&bq, 5, 1, &ctx).unwrap();
        assert_eq!(p.hi(), 8);
        assert_eq!(p.lo(), -1);
        let inv = pochhammer_finite_inv(&bq, 5, 1, &ctx).unwrap();
        let one = p.mul(&inv).unwrap();
        assert!(one.equal_upto(&ctx.one(), one.hi()).unwrap().is_equal());
    }

    #[test]
    fn inverse_matches_product() {
        let spec = ParamSpec::new(&[("b", 3)]).unwrap();
        let ctx = SeriesContext::new(15, spec).unwrap();
        for a in [QMonomial::q(1), QMonomial::param(&ctx, "b", 0).unwrap(), QMonomial::scaled_q(-1, 2)] {
            let p = pochhammer_infinite(&a, 2, &ctx).unwrap();
            let inv = pochhammer_infinite_inv(&a, 2, &ctx).unwrap();
            let prod = p.mul(&inv).unwrap();
            assert!(prod.equal_upto(&ctx.one(), 15).unwrap().is_equal());
        }
    }

    #[test]
    fn product_agrees_with_euler_sum() {
        let spec = ParamSpec::new(&[("b", 6), ("d", 6)]).unwrap();
        let ctx = SeriesContext::new(25, spec).unwrap();
        let args = [
            QMonomial::q(1),
            QMonomial::scaled_q(-1, 1),
            QMonomial::param(&ctx, "b", 0).unwrap(),
            QMonomial::param(&ctx, "d", 2).unwrap(),
            QMonomial::param(&ctx, "b", -1).unwrap(),
        ];
        for a in &args {
            for base in [1, 2, 5] {
                let p = pochhammer_infinite(a, base, &ctx).unwrap();
                let e = pochhammer_infinite_euler(a, base, &ctx).unwrap();
                let cmp = p.equal_upto(&e, 25).unwrap();
                assert!(cmp.is_equal(), "{a:?} base {base} {cmp:?} {:?} {:?}", p.bounds(), e.bounds());
            }
        }
    }
}
