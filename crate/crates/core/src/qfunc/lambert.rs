use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::rational::Rat;
use crate::series::{Mono, QSeries, SeriesContext};

/// `sum_{k>=1} q^(a k) / (1 - q^(b k))`.
pub fn lambert(a: i64, b: i64, ctx: &SeriesContext) -> Result<QSeries> {
    if a < 1 || b < 1 {
        return Err(Error::Domain(format!("lambert needs positive a and b, got ({a}, {b})")));
    }
    let n = ctx.order();
    let mut counts = vec![0i64; n.max(0) as usize + 1];
    let first = if ctx.is_fault(Fault::LambertSkipFirst) { 2 } else { 1 };
    let mut k = first;
    while a * k <= n {
        let mut e = a * k;
        while e <= n {
            counts[e as usize] += 1;
            e += b * k;
        }
        k += 1;
    }
    let coeffs: Vec<Rat> = counts.into_iter().map(Rat::from_int).collect();
    ctx.from_rats(0, &coeffs)
}

/// Sums `sign(n) q^(e(n)) / prod_{i<n} (1 - c q^(f(i)))` over `n >= start`
/// while `e(n) <= order`; `e` must be increasing.
fn quotient_sum(
    ctx: &SeriesContext,
    start: i64,
    sign: impl Fn(i64) -> i64,
    e: impl Fn(i64) -> i64,
    c: i64,
    f: impl Fn(i64) -> i64,
) -> Result<QSeries> {
    let mut denom = ctx.one();
    let mut total = ctx.zero();
    let c = Rat::from_int(c);
    let mut n = 0;
    while e(n) <= ctx.order() || n < start {
        if n > 0 {
            denom = denom.div_binomial(&c, Mono::ONE, f(n - 1))?;
        }
        if n >= start {
            total = total.add(&denom.mul_monomial(&Rat::from_int(sign(n)), Mono::ONE, e(n))?)?;
        }
        n += 1;
    }
    Ok(total)
}

/// `sigma(q) = sum_{n>=0} q^(n(n+1)/2) / (-q; q)_n`.
pub fn sigma_series(ctx: &SeriesContext) -> Result<QSeries> {
    let c = if ctx.is_fault(Fault::SigmaWrongSign) { 1 } else { -1 };
    quotient_sum(ctx, 0, |_| 1, |n| n * (n + 1) / 2, c, |i| i + 1)
}

/// `sigma_2(q) = sum_{n>=0} (-1)^n q^(n^2) / (-q; q)_n`.
pub fn sigma2_series(ctx: &SeriesContext) -> Result<QSeries> {
    let signed = !ctx.is_fault(Fault::Sigma2NoSign);
    let sign = move |n: i64| if signed && n % 2 == 1 { -1 } else { 1 };
    quotient_sum(ctx, 0, sign, |n| n * n, -1, |i| i + 1)
}

/// `sigma*(q) = 2 sum_{n>=1} (-1)^n q^(n^2) / (q; q^2)_n`.
pub fn sigma_star_series(ctx: &SeriesContext) -> Result<QSeries> {
    let sign = |n: i64| if n % 2 == 1 { -2 } else { 2 };
    quotient_sum(ctx, 1, sign, |n| n * n, 1, |i| 2 * i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_int(x)).collect()
    }

    fn divisors(n: i64) -> i64 {
        (1..=n).filter(|d| n % d == 0).count() as i64
    }

    #[test]
    fn divisor_counts() {
        let ctx = SeriesContext::plain(60).unwrap();
        let l = lambert(1, 1, &ctx).unwrap();
        assert_eq!(l.coeff_const(0), Rat::zero());
        assert_eq!(l.coeff_const(4), Rat::from_int(3));
        for n in 1..=60 {
            assert_eq!(l.coeff_const(n), Rat::from_int(divisors(n)));
        }
        let even = lambert(2, 2, &ctx).unwrap();
        assert_eq!(even.coeff_const(6), Rat::from_int(2));
        assert_eq!(even.coeff_const(7), Rat::zero());
    }

    #[test]
    fn general_lambert_by_count() {
        let ctx = SeriesContext::plain(40).unwrap();
        for (a, b) in [(1, 2), (2, 1), (3, 2)] {
            let l = lambert(a, b, &ctx).unwrap();
            for n in 0..=40i64 {
                let mut count = 0;
                for k in 1..=40 {
                    for t in 0..=40 {
                        if a * k + b * k * t == n {
                            count += 1;
                        }
                    }
                }
                assert_eq!(l.coeff_const(n), Rat::from_int(count), "({a},{b}) q^{n}");
            }
        }
        assert!(lambert(0, 1, &ctx).is_err());
    }

    #[test]
    fn sigma_examples() {
        let ctx = SeriesContext::plain(6).unwrap();
        let s = sigma_series(&ctx).unwrap();
        assert_eq!(s.const_coeffs(3), ints(&[1, 1, -1, 2]));
        let s2 = sigma2_series(&ctx).unwrap();
        assert_eq!(s2.coeff_const(0), Rat::one());
        assert_eq!(s2.coeff_const(1), Rat::from_int(-1));
        assert_eq!(s2.coeff_const(2), Rat::one());
        let st = sigma_star_series(&ctx).unwrap();
        assert_eq!(st.coeff_const(0), Rat::zero());
        assert_eq!(st.coeff_const(1), Rat::from_int(-2));
    }

    #[test]
    fn faults_change_sigma() {
        let base = SeriesContext::plain(8).unwrap();
        for (f, build) in [
            (Fault::SigmaWrongSign, sigma_series as fn(&SeriesContext) -> Result<QSeries>),
            (Fault::Sigma2NoSign, sigma2_series),
        ] {
            let good = build(&base).unwrap();
            let bad = build(&base.clone().with_fault(Some(f))).unwrap();
            assert_ne!(good, bad);
        }
    }
}
