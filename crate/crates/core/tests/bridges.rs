use qtails_core::partition::{
    distinct_bounded_diff, gen_partitions, p1_count, p2_count, sigma2_weight, sigma_weight, tau_even, tau_odd,
    weighted_gf, Constraint,
};
use qtails_core::qfunc::{
    lambert, pochhammer_finite, pochhammer_finite_inv, pochhammer_infinite_inv, sigma2_series, sigma_series,
    sum_until, QMonomial,
};
use qtails_core::rational::Rat;
use qtails_core::series::{Mono, QSeries, SeriesContext};

fn assert_same(a: &QSeries, b: &QSeries, n: i64) {
    let cmp = a.equal_upto(b, n).unwrap();
    assert!(cmp.is_equal(), "{cmp:?}");
}

fn q_over_binomial(s: &QSeries, c: i64, e: i64) -> QSeries {
    s.div_binomial(&Rat::from_int(c), Mono::ONE, e).unwrap()
}

#[test]
fn p1_generating_function() {
    let ctx = SeriesContext::plain(40).unwrap();
    let gf = weighted_gf(|n| if n == 0 { Ok(0) } else { p1_count(n) }, 40, &ctx).unwrap();
    let series = sum_until(
        &ctx,
        1,
        |m| 2 * m as i64,
        |m| {
            let p = pochhammer_finite(&QMonomial::q(1), m - 1, 2, &ctx)?;
            let p = p.mul_monomial(&Rat::one(), Mono::ONE, 2 * m as i64)?;
            p.div_binomial(&Rat::one(), Mono::ONE, 2 * m as i64)
        },
    )
    .unwrap();
    assert_same(&gf, &series, 40);
}

#[test]
fn p2_generating_function() {
    let ctx = SeriesContext::plain(40).unwrap();
    let gf = weighted_gf(|n| if n == 0 { Ok(0) } else { p2_count(n) }, 40, &ctx).unwrap();
    let series = sum_until(
        &ctx,
        1,
        |n| 2 * n as i64,
        |n| {
            let p = pochhammer_finite_inv(&QMonomial::scaled_q(-1, 1), n - 1, 1, &ctx)?;
            let p = p.mul_monomial(&Rat::one(), Mono::ONE, 2 * n as i64)?;
            Ok(q_over_binomial(&p, 1, 2 * n as i64))
        },
    )
    .unwrap();
    assert_same(&gf, &series, 40);
}

#[test]
fn divisor_parity_generating_function() {
    let ctx = SeriesContext::plain(40).unwrap();
    let gf =
        weighted_gf(|n| Ok(if n == 0 { 0 } else { tau_odd(n) as i64 - tau_even(n) as i64 }), 40, &ctx).unwrap();
    let series = sum_until(&ctx, 1, |n| n as i64, |n| Ok(q_over_binomial(&ctx.q_pow(n as i64)?, -1, n as i64))).unwrap();
    assert_same(&gf, &series, 40);
}

#[test]
fn bounded_distinct_bridge() {
    let ctx = SeriesContext::plain(40).unwrap();
    for j in 0..=12usize {
        let gf = weighted_gf(|m| Ok(distinct_bounded_diff(m, j)), 40, &ctx).unwrap();
        let mut series = ctx.zero();
        for n in 0..=j {
            let n64 = n as i64;
            let sign = if n % 2 == 1 { -1 } else { 1 };
            let t = pochhammer_finite_inv(&QMonomial::q(1), n, 1, &ctx)
                .unwrap()
                .mul_monomial(&Rat::from_int(sign), Mono::ONE, n64 * (n64 + 1) / 2)
                .unwrap();
            series = series.add(&t).unwrap();
        }
        assert_same(&gf, &series, 40);
    }
}

#[test]
fn unconstrained_count() {
    let ctx = SeriesContext::plain(30).unwrap();
    let gf = weighted_gf(|n| Ok(gen_partitions(n, &Constraint::none()).len() as i64), 30, &ctx).unwrap();
    let inv = pochhammer_infinite_inv(&QMonomial::q(1), 1, &ctx).unwrap();
    assert_same(&gf, &inv, 30);
}

#[test]
fn rogers_ramanujan_gap_two() {
    let ctx = SeriesContext::plain(30).unwrap();
    let gf = weighted_gf(|n| Ok(gen_partitions(n, &Constraint::gap(2)).len() as i64), 30, &ctx).unwrap();
    let rr = pochhammer_infinite_inv(&QMonomial::q(1), 5, &ctx)
        .unwrap()
        .mul(&pochhammer_infinite_inv(&QMonomial::q(4), 5, &ctx).unwrap())
        .unwrap();
    assert_same(&gf, &rr, 30);
    let by_residue = weighted_gf(|n| Ok(gen_partitions(n, &Constraint::residues(5, &[1, 4])).len() as i64), 30, &ctx)
        .unwrap();
    assert_same(&by_residue, &rr, 30);
    assert_eq!(rr.coeff_const(7), Rat::from_int(3));
}

#[test]
fn sigma_rank_counts() {
    let ctx = SeriesContext::plain(35).unwrap();
    let s = sigma_series(&ctx).unwrap();
    let s2 = sigma2_series(&ctx).unwrap();
    for n in 1..=35u32 {
        assert_eq!(s.coeff_const(n as i64), Rat::from_int(sigma_weight(n).unwrap()), "sigma q^{n}");
        assert_eq!(s2.coeff_const(n as i64), Rat::from_int(sigma2_weight(n).unwrap()), "sigma2 q^{n}");
    }
}

#[test]
fn lambert_divisor_duality() {
    let ctx = SeriesContext::plain(200).unwrap();
    let l = lambert(1, 1, &ctx).unwrap();
    for n in 1..=200u32 {
        assert_eq!(l.coeff_const(n as i64), Rat::from_int((tau_even(n) + tau_odd(n)) as i64));
    }
}

#[test]
fn distinct_parts_product() {
    let ctx = SeriesContext::plain(25).unwrap();
    let p = qtails_core::qfunc::pochhammer_infinite(&QMonomial::scaled_q(-1, 1), 1, &ctx).unwrap();
    for n in 0..=25u32 {
        assert_eq!(p.coeff_const(n as i64), Rat::from_int(gen_partitions(n, &Constraint::distinct()).len() as i64));
    }
}

#[test]
fn enumeration_is_deterministic() {
    for n in [0, 7, 15] {
        assert_eq!(gen_partitions(n, &Constraint::none()), gen_partitions(n, &Constraint::none()));
    }
}
