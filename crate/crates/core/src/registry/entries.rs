use std::sync::OnceLock;

use super::build::*;
use super::{Check, IdentityDef, Job, Mode, NumericCase, Pair, RunParams};
use crate::error::Result;
use crate::fault::Fault;
use crate::partition::{self, weighted_gf};
use crate::qfunc::{
    lambert, pochhammer_finite, pochhammer_finite_inv, pochhammer_infinite, pochhammer_infinite_inv, sigma2_series,
    sigma_series, sum_until, tail_sum, FiniteT, GaussianTable, QMonomial, TailFamily,
};
use crate::rational::Rat;
use crate::series::{Mono, QSeries, SeriesContext};

fn no_caps(_: &RunParams) -> Vec<(&'static str, u32)> {
    Vec::new()
}

/// `ceil(sqrt(2 * order)) + 2`: `b^r` only meets `q^(r(r-1)/2)`.
pub fn generic_cap(order: i64) -> u32 {
    let target = 2 * order.max(0);
    let mut s = 0i64;
    while s * s < target {
        s += 1;
    }
    s as u32 + 2
}

fn caps_bd(p: &RunParams) -> Vec<(&'static str, u32)> {
    let c = generic_cap(p.order);
    vec![("b", c), ("d", c)]
}

fn caps_b(p: &RunParams) -> Vec<(&'static str, u32)> {
    vec![("b", generic_cap(p.order))]
}

fn caps_d(p: &RunParams) -> Vec<(&'static str, u32)> {
    vec![("d", generic_cap(p.order))]
}

fn caps_bd_j(p: &RunParams) -> Vec<(&'static str, u32)> {
    let c = p.j_max as u32;
    vec![("b", c), ("d", c)]
}

fn caps_d_j(p: &RunParams) -> Vec<(&'static str, u32)> {
    vec![("d", p.j_max as u32)]
}

fn caps_bdz(p: &RunParams) -> Vec<(&'static str, u32)> {
    vec![("b", p.z_cap), ("d", p.z_cap), ("z", p.z_cap)]
}

fn one_pair(form: &'static str, lhs: QSeries, rhs: QSeries, upto: i64) -> Result<Vec<Pair>> {
    Ok(vec![Pair::new(form, lhs, rhs, upto)])
}

// ---- sums of tails over (-q)_n and 1/(q;q^2)_(n+1)

fn distinct_tail(ctx: &SeriesContext) -> Result<QSeries> {
    let a = QMonomial::scaled_q(-1, 1);
    let limit = pochhammer_infinite(&a, 1, ctx)?;
    let mut f = TailFamily::new(limit, |n| pochhammer_finite(&a, n, 1, ctx), |n| n as i64 + 1);
    tail_sum(&mut f, ctx)
}

fn odd_tail(ctx: &SeriesContext) -> Result<QSeries> {
    let a = QMonomial::q(1);
    let limit = pochhammer_infinite_inv(&a, 2, ctx)?;
    let mut f = TailFamily::new(limit, |n| pochhammer_finite_inv(&a, n + 1, 2, ctx), |n| 2 * n as i64 + 3);
    tail_sum(&mut f, ctx)
}

fn r1(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = distinct_tail(ctx)?;
    let p = pochhammer_infinite(&QMonomial::scaled_q(-1, 1), 1, ctx)?;
    let inner = lambert(1, 1, ctx)?.sub(&ctx.constant(half()))?;
    let rhs = p.mul(&inner)?.add(&sigma_series(ctx)?.scale(&half()))?;
    one_pair("rhs", lhs, rhs, job.order())
}

fn r2(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = odd_tail(ctx)?;
    let p = pochhammer_infinite_inv(&QMonomial::q(1), 2, ctx)?;
    let inner = lambert(2, 2, ctx)?.sub(&ctx.constant(half()))?;
    let rhs = p.mul(&inner)?.add(&sigma_series(ctx)?.scale(&half()))?;
    one_pair("rhs", lhs, rhs, job.order())
}

fn a7a(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = distinct_tail(ctx)?;
    let rhs = sum_until(ctx, 1, |k| k as i64, |k| {
        negq_fin(k - 1, ctx)?.mul_monomial(&Rat::from_int(k as i64), Mono::ONE, k as i64)
    })?;
    one_pair("alternate", lhs, rhs, job.order())
}

fn a7b(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = odd_tail(ctx)?;
    let rhs = sum_until(ctx, 0, |k| 2 * k as i64 + 1, |k| {
        pochhammer_finite_inv(&QMonomial::q(1), k + 1, 2, ctx)?.mul_monomial(
            &Rat::from_int(k as i64),
            Mono::ONE,
            2 * k as i64 + 1,
        )
    })?;
    one_pair("alternate", lhs, rhs, job.order())
}

fn sot5rep(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let (a, b) = (QMonomial::q(1), QMonomial::q(4));
    let both = |i: usize, k: usize| -> Result<QSeries> {
        pochhammer_finite_inv(&a, i, 5, ctx)?.mul(&pochhammer_finite_inv(&b, k, 5, ctx)?)
    };
    let limit = pochhammer_infinite_inv(&a, 5, ctx)?.mul(&pochhammer_infinite_inv(&b, 5, ctx)?)?;
    let mut f = TailFamily::new(limit, |n| both(n, n), |n| 5 * n as i64 + 1);
    let lhs = tail_sum(&mut f, ctx)?;
    let k_rat = |k: usize| Rat::from_int(k as i64);
    let first = sum_until(ctx, 1, |k| 5 * k as i64 - 4, |k| {
        both(k, k - 1)?.mul_monomial(&k_rat(k), Mono::ONE, 5 * k as i64 - 4)
    })?;
    let second = sum_until(ctx, 1, |k| 5 * k as i64 - 1, |k| {
        both(k, k)?.mul_monomial(&k_rat(k), Mono::ONE, 5 * k as i64 - 1)
    })?;
    one_pair("rhs", lhs, first.add(&second)?, job.order())
}

fn bdq(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let qi = pochhammer_infinite_inv(&QMonomial::q(1), 1, ctx)?;
    let p = qi.mul(&qi)?;
    let mut f = TailFamily::new(
        p.clone(),
        |n| {
            let x = q_inv(n, ctx)?;
            x.mul(&x)
        },
        |n| n as i64 + 1,
    );
    let lhs = tail_sum(&mut f, ctx)?;
    let alt = sum_until(ctx, 1, tri, |k| over_geom(&qterm(ctx, sign(k), tri(k))?, k as i64))?;
    let rhs = p.mul(&lambert(1, 1, ctx)?.sub(&alt)?)?;
    one_pair("rhs", lhs, rhs, job.order())
}

// ---- two-parameter sums of tails

/// `1 / ((b)_inf (d)_inf)`.
fn bd_limit(ctx: &SeriesContext) -> Result<QSeries> {
    let b = QMonomial::param(ctx, "b", 0)?;
    let d = QMonomial::param(ctx, "d", 0)?;
    pochhammer_infinite_inv(&b, 1, ctx)?.mul(&pochhammer_infinite_inv(&d, 1, ctx)?)
}

fn bd_tail(ctx: &SeriesContext) -> Result<QSeries> {
    let limit = bd_limit(ctx)?;
    let (b, d) = (ctx.param_mono("b", 1)?, ctx.param_mono("d", 1)?);
    let one = Rat::one();
    let mut cur = ctx.one();
    let mut k = 0usize;
    let partial = move |n: usize| -> Result<QSeries> {
        while k < n {
            cur = cur.div_binomial(&one, b, k as i64)?.div_binomial(&one, d, k as i64)?;
            k += 1;
        }
        Ok(cur.clone())
    };
    let mut f = TailFamily::new(limit, partial, |n| n as i64);
    tail_sum(&mut f, ctx)
}

/// `sum_{n>=1} (-x)^n q^(n(n-1)/2) / (1 - q^n)`.
fn theta_lambert(ctx: &SeriesContext, x: &str) -> Result<QSeries> {
    sum_until(ctx, 1, tri_below, |n| over_geom(&pterm(ctx, sign(n), x, n, tri_below(n))?, n as i64))
}

/// `sum_{m>=1} (x/q)_m q^m / (1 - q^m)`.
fn poch_lambert(ctx: &SeriesContext, x: &str) -> Result<QSeries> {
    let mut poch = PochSeq::new(ctx, x, -1)?;
    sum_until(ctx, 1, |m| m as i64 - 1, |m| over_geom(&poch.get(m)?.shift(m as i64)?, m as i64))
}

fn t1(job: &Job) -> Result<Vec<Pair>> {
    let n = job.order();
    let lhs = bd_tail(&job.ctx)?;
    let w = job.work(2);
    let top = w.order();
    let cap_d = job.cap("d")? as usize;
    let mut poch = PochSeq::new(&w, "b", -1)?;
    let mut shifted = Vec::new();
    for m in 1.. {
        if m as i64 - 1 > top {
            break;
        }
        shifted.push(poch.get(m)?.shift(m as i64)?);
    }
    let mut table = GaussianTable::new(top);
    let mut mixed = w.zero();
    for k in (1..=cap_d).take_while(|&k| tri_below(k) <= top) {
        let mut inner = w.zero();
        for (i, s) in shifted.iter().enumerate() {
            let m = i + 1;
            inner = inner.add(&s.mul(&table.series(k + m - 1, m, &w)?)?)?;
        }
        let outer = over_geom(&pterm(&w, sign(k), "d", k, tri_below(k))?, k as i64)?;
        mixed = mixed.add(&outer.mul(&inner)?)?;
    }
    let braces = lambert(1, 1, &w)?
        .sub(&theta_lambert(&w, "d")?)?
        .sub(&poch_lambert(&w, "b")?)?
        .sub(&mixed)?;
    let rhs = bd_limit(&w)?.mul(&braces)?;
    one_pair("rhs", lhs, rhs, n)
}

/// `sum_{n>=1} (-x)^n q^(n(n-1)/2) / ((q)_n (1 - q^n))`.
fn theta_over_q(ctx: &SeriesContext, x: &str) -> Result<QSeries> {
    sum_until(ctx, 1, tri_below, |n| {
        let t = q_inv(n, ctx)?.mul(&pterm(ctx, sign(n), x, n, tri_below(n))?)?;
        over_geom(&t, n as i64)
    })
}

/// `sum_{n,m>=1} (-d)^n (-b)^m q^(n(n-1)/2 + m(m-1)/2) / ((q)_n (q)_m (1 - q^(n+m)))`.
fn double_theta(job: &Job, ctx: &SeriesContext) -> Result<QSeries> {
    let top = ctx.order();
    let (cap_b, cap_d) = (job.cap("b")? as usize, job.cap("d")? as usize);
    let qinv: Vec<QSeries> = (0..=cap_b.max(cap_d)).map(|k| q_inv(k, ctx)).collect::<Result<_>>()?;
    let mut total = ctx.zero();
    for n in (1..=cap_d).take_while(|&n| tri_below(n) <= top) {
        for m in (1..=cap_b).take_while(|&m| tri_below(n) + tri_below(m) <= top) {
            let mono = ctx.param_mono("d", n as u32)?.mul(ctx.param_mono("b", m as u32)?);
            let c = Rat::from_int(sign(n) * sign(m));
            let t = qinv[n].mul(&qinv[m])?.mul_monomial(&c, mono, tri_below(n) + tri_below(m))?;
            total = total.add(&over_geom(&t, (n + m) as i64)?)?;
        }
    }
    Ok(total)
}

fn t1s(job: &Job) -> Result<Vec<Pair>> {
    let n = job.order();
    let lhs = bd_tail(&job.ctx)?;
    let w = job.work(2);
    let p = bd_limit(&w)?;
    let cross = double_theta(job, &w)?;
    let first = theta_over_q(&w, "d")?.add(&theta_over_q(&w, "b")?)?.add(&cross)?;
    let first = p.mul(&first)?.neg();
    let second = lambert(1, 1, &w)?
        .scale(&Rat::from_int(2))
        .sub(&poch_lambert(&w, "d")?)?
        .sub(&poch_lambert(&w, "b")?)?
        .sub(&cross)?;
    let second = p.mul(&second)?;
    Ok(vec![Pair::new("first form", lhs.clone(), first, n), Pair::new("second form", lhs, second, n)])
}

// ---- finite sums T(j) and the sums of products

/// `sum_{j>=1} (-1)^j q^(j(j+1)/2) / (1 - q^j)`.
fn theta_tri(ctx: &SeriesContext) -> Result<QSeries> {
    sum_until(ctx, 1, tri, |j| over_geom(&qterm(ctx, sign(j), tri(j))?, j as i64))
}

/// `sum_{j>=1} q^j / (1 - q^j) T(j)`.
fn weighted_t(ctx: &SeriesContext, t: &mut FiniteT) -> Result<QSeries> {
    sum_until(ctx, 1, |j| j as i64 - 2, |j| over_geom(&t.get(j)?.shift(j as i64)?, j as i64))
}

/// `(x q^n)_inf`.
fn shifted_inf(ctx: &SeriesContext, x: &str, n: usize) -> Result<QSeries> {
    pochhammer_infinite(&QMonomial::param(ctx, x, n as i64)?, 1, ctx)
}

fn q_inf_from(ctx: &SeriesContext, n: usize) -> Result<QSeries> {
    pochhammer_infinite(&QMonomial::q(n as i64), 1, ctx)
}

fn s5(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = sum_until(ctx, 0, |n| n as i64, |n| {
        let q2 = q_inf_from(ctx, n + 1)?;
        shifted_inf(ctx, "b", n)?.mul(&shifted_inf(ctx, "d", n)?)?.sub(&q2.mul(&q2)?)
    })?;
    let w = job.work(2);
    let mut t = FiniteT::unchecked(&w, "b", "d")?;
    let rhs = weighted_t(&w, &mut t)?.sub(&theta_tri(&w)?)?;
    one_pair("rhs", lhs, rhs, job.order())
}

fn c51(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = sum_until(ctx, 0, |n| n as i64, |n| {
        let b = shifted_inf(ctx, "b", n)?;
        let q2 = q_inf_from(ctx, n + 1)?;
        b.mul(&b)?.sub(&q2.mul(&q2)?)
    })?;
    let w = job.work(2);
    let mut t = FiniteT::unchecked(&w, "b", "b")?;
    let rhs = weighted_t(&w, &mut t)?.sub(&theta_tri(&w)?)?;
    one_pair("rhs", lhs, rhs, job.order())
}

/// `sum_n (q^(n+1))_inf ((d q^n)_inf - (q^(n+1))_inf)`.
fn d_tail(ctx: &SeriesContext) -> Result<QSeries> {
    sum_until(ctx, 0, |n| n as i64, |n| {
        let q1 = q_inf_from(ctx, n + 1)?;
        q1.mul(&shifted_inf(ctx, "d", n)?.sub(&q1)?)
    })
}

fn c52(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = d_tail(ctx)?;
    let rhs = sum_until(ctx, 1, tri_below, |j| {
        let e = tri_below(j);
        let num = pterm(ctx, sign(j), "d", j, e)?.sub(&qterm(ctx, sign(j), e + j as i64)?)?;
        over_geom(&num, j as i64)
    })?;
    one_pair("rhs", lhs, rhs, job.order())
}

/// `sum_{j>=1} q^j / (1 - q^j) sum_n (-1)^n [j, n] (d/q)_(j-n) q^(n(n-1)/2)`.
fn d_finite_sum(ctx: &SeriesContext) -> Result<QSeries> {
    let mut poch = PochSeq::new(ctx, "d", -1)?;
    let mut table = GaussianTable::new(ctx.order());
    sum_until(ctx, 1, |j| j as i64 - 1, |j| {
        let mut u = ctx.zero();
        for n in 0..=j {
            let g = table.series(j, n, ctx)?.mul_monomial(&Rat::from_int(sign(n)), Mono::ONE, tri_below(n))?;
            u = u.add(&poch.get(j - n)?.mul(&g)?)?;
        }
        over_geom(&u.shift(j as i64)?, j as i64)
    })
}

fn c53(job: &Job) -> Result<Vec<Pair>> {
    let w = job.work(2);
    let lhs = d_finite_sum(&w)?;
    let rhs = theta_lambert(&w, "d")?;
    one_pair("rhs", lhs, rhs, job.order())
}

fn c53d(job: &Job) -> Result<Vec<Pair>> {
    let lhs = d_tail(&job.ctx)?;
    let w = job.work(2);
    let rhs = d_finite_sum(&w)?.sub(&theta_tri(&w)?)?;
    one_pair("rhs", lhs, rhs, job.order())
}

// ---- the route to the second identity and its partition bridges

fn l31(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = sum_until(ctx, 1, |n| 2 * n as i64, |n| over_geom(&negq_inv(n, ctx)?.shift(2 * n as i64)?, n as i64))?;
    let inner = sum_until(ctx, 1, |m| m as i64, |m| {
        let t = negq_inv(m, ctx)?.shift(m as i64)?;
        over_geom(&over_geom(&t, m as i64)?, m as i64 + 1)
    })?;
    let rhs = over_geom(&qterm(ctx, 1, 1)?, 1)?.sub(&inner.mul_binomial(&Rat::one(), Mono::ONE, 1)?)?;
    one_pair("rhs", lhs, rhs, job.order())
}

/// `sum_{m>=1} (q;q^2)_(m-1) q^(2m) / (1 - q^(2m))`.
fn odd_poch_sum(ctx: &SeriesContext) -> Result<QSeries> {
    sum_until(ctx, 1, |m| 2 * m as i64, |m| {
        let p = pochhammer_finite(&QMonomial::q(1), m - 1, 2, ctx)?.shift(2 * m as i64)?;
        over_geom(&p, 2 * m as i64)
    })
}

/// `sum_{n>=1} q^(2n) / ((-q)_(n-1) (1 - q^(2n)))`.
fn half_band_sum(ctx: &SeriesContext) -> Result<QSeries> {
    sum_until(ctx, 1, |n| 2 * n as i64, |n| over_geom(&negq_inv(n - 1, ctx)?.shift(2 * n as i64)?, 2 * n as i64))
}

/// `sum_{n>=1} q^n / (1 + q^n)`.
fn plus_lambert(ctx: &SeriesContext, start: usize) -> Result<QSeries> {
    sum_until(ctx, start, |n| n as i64, |n| over_plus(&qterm(ctx, 1, n as i64)?, n as i64))
}

fn t2(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let s = odd_poch_sum(&job.work(1))?;
    let lhs = s.mul_binomial(&Rat::one(), Mono::ONE, -1)?;
    let rhs = half_band_sum(ctx)?.sub(&plus_lambert(ctx, 1)?)?;
    one_pair("rhs", lhs, rhs, job.order())
}

fn t3(job: &Job) -> Result<Vec<NumericCase>> {
    let ctx = &job.ctx;
    let top = job.params.n_max();
    let p1: Vec<i64> = (0..=top + 1).map(|n| if n == 0 { Ok(0) } else { p1(n, ctx) }).collect::<Result<_>>()?;
    let p2: Vec<i64> =
        (0..=top).map(|n| if n == 0 { Ok(0) } else { partition::p2_count(n) }).collect::<Result<_>>()?;
    let tau: Vec<i64> = (0..=top).map(|n| tau_diff(n, ctx)).collect();
    let mut cases = Vec::new();
    for n in 1..=top as usize {
        let (lhs, rhs) = (p1[n] - p1[n + 1], p2[n] - tau[n]);
        cases.push(NumericCase { form: "difference", n: n as i64, lhs, rhs });
    }
    let mut running = 0;
    for big in 2..=top as usize {
        running += tau[big - 1] - p2[big - 1];
        cases.push(NumericCase { form: "cumulative", n: big as i64, lhs: p1[big], rhs: running });
    }
    Ok(cases)
}

fn gf1(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = odd_poch_sum(ctx)?;
    let top = job.order() as u32;
    let rhs = weighted_gf(|n| if n == 0 { Ok(0) } else { p1(n, ctx) }, top, ctx)?;
    one_pair("partitions", lhs, rhs, job.order())
}

fn gf2(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = half_band_sum(ctx)?;
    let rhs = weighted_gf(|n| if n == 0 { Ok(0) } else { partition::p2_count(n) }, job.order() as u32, ctx)?;
    one_pair("partitions", lhs, rhs, job.order())
}

fn gf3(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = plus_lambert(ctx, 1)?;
    let rhs = weighted_gf(|n| Ok(if n == 0 { 0 } else { tau_diff(n, ctx) }), job.order() as u32, ctx)?;
    one_pair("divisors", lhs, rhs, job.order())
}

fn aux1(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let x = pochhammer_infinite_inv(&QMonomial::q(1), 2, ctx)?;
    let lhs = x.sub(&ctx.one())?;
    let s = sum_until(ctx, 1, |n| n as i64, |n| negq_inv(n, ctx)?.shift(n as i64))?;
    one_pair("rhs", lhs, x.mul(&s)?, job.order())
}

fn aux2(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let x = pochhammer_infinite_inv(&QMonomial::q(1), 2, ctx)?;
    let s = sum_until(ctx, 1, |n| n as i64, |n| over_geom(&negq_inv(n, ctx)?.shift(n as i64)?, n as i64))?;
    let lhs = x.mul(&s)?;
    let rhs = x.mul(&plus_lambert(ctx, 0)?)?.sub(&sigma_series(ctx)?.scale(&half()))?;
    one_pair("rhs", lhs, rhs, job.order())
}

// ---- concave compositions

fn ccd_first(ctx: &SeriesContext) -> Result<QSeries> {
    let qi = pochhammer_infinite_inv(&QMonomial::q(1), 1, ctx)?;
    let s = sum_until(ctx, 1, tri, |n| over_geom(&qterm(ctx, -sign(n) * n as i64, tri(n))?, n as i64))?;
    qi.mul(&qi)?.mul(&s)
}

fn t4(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let top = job.order();
    let a = ccd_first(ctx)?;
    let qinv: Vec<QSeries> = (0..=top as usize + 1).map(|k| q_inv(k, ctx)).collect::<Result<_>>()?;
    let mut partial = ctx.zero();
    let mut next = 0usize;
    let b = sum_until(ctx, 1, |k| k as i64, |k| {
        while next < k {
            partial = partial.add(&qinv[next].mul(&qinv[next])?)?;
            next += 1;
        }
        over_geom(&partial.shift(k as i64)?, k as i64)
    })?;
    let qi = pochhammer_infinite_inv(&QMonomial::q(1), 1, ctx)?;
    let c = sum_until(ctx, 1, |k| k as i64, |k| {
        let mut inner = ctx.zero();
        for n in 0..k {
            let t = qinv[n].mul_monomial(&Rat::from_int(sign(n)), Mono::ONE, tri_below(n))?;
            inner = inner.add(&over_geom(&t, (k - n) as i64)?)?;
        }
        over_geom(&inner.mul(&q_fin(k, ctx)?)?.shift(k as i64)?, k as i64)
    })?;
    let c = qi.mul(&qi)?.mul(&c)?;
    Ok(vec![Pair::new("second form", a.clone(), b, top), Pair::new("third form", a, c, top)])
}

fn t4p(job: &Job) -> Result<QSeries> {
    let top = job.params.n_max() as i64;
    ccd_first(&job.ctx.with_order(top.max(job.order())))
}

// ---- per-j finite identities

fn sym(job: &Job) -> Result<Vec<Pair>> {
    let jm = job.params.j_max;
    let top = job.order().max((jm * jm.saturating_sub(3) / 2) as i64);
    let c = job.ctx.with_order(top);
    let mut t = FiniteT::new(&c, "b", "d")?;
    let mut s = FiniteT::new(&c, "d", "b")?;
    (0..=jm).map(|j| Ok(Pair::new("swapped", t.get(j)?, s.get(j)?, top).at(j))).collect()
}

fn tj(job: &Job) -> Result<Vec<Pair>> {
    let w = job.work(4);
    let big_j = job.cap("z")? as usize;
    let mut t = FiniteT::new(&w, "b", "d")?;
    let mut lhs = w.zero();
    for j in 0..=big_j {
        let zj = w.param_mono("z", j as u32)?;
        lhs = lhs.add(&t.get(j)?.mul(&q_inv(j, &w)?)?.mul_monomial(&Rat::one(), zj, 0)?)?;
    }
    let z = w.param_mono("z", 1)?;
    let dz = QMonomial::new(Rat::one(), w.param_mono("d", 1)?.mul(z), -1);
    let bz = QMonomial::new(Rat::one(), w.param_mono("b", 1)?.mul(z), -1);
    let rhs = pochhammer_infinite(&dz, 1, &w)?
        .mul(&pochhammer_infinite(&bz, 1, &w)?)?
        .mul(&pochhammer_infinite_inv(&QMonomial::new(Rat::one(), z, 0), 1, &w)?)?;
    one_pair("product", lhs, rhs, job.order())
}

/// Both sides of the Andrews–Onofri identity at `a = q^r`, `b = q^s`,
/// truncated to the context order.
pub fn andrews_onofri(r: i64, s: i64, ctx: &SeriesContext) -> Result<(QSeries, QSeries)> {
    if s < 1 || r < s {
        return Err(crate::Error::Domain(format!("need r >= s >= 1, got ({r}, {s})")));
    }
    let k = (r - s) as usize;
    let w = ctx.with_order(ctx.order() + (r - s) * (r - s + 1) + 2);
    let ratio = QMonomial::q(s - r);
    let with_qm = !ctx.is_fault(Fault::AndrewsOnofriMissingQm);
    let fin: Vec<QSeries> =
        (0..=k).map(|i| pochhammer_finite(&ratio, i, 1, &w)?.mul(&q_inv(i, &w)?)).collect::<Result<_>>()?;
    let mut lhs = w.zero();
    for n in 0..=k {
        for m in 0..=k {
            if n == m {
                continue;
            }
            let e = r * (n + m) as i64 + if with_qm { m as i64 } else { 0 };
            let t = fin[n].mul(&fin[m])?.mul_monomial(&Rat::from_int(n as i64 - m as i64), Mono::ONE, e)?;
            lhs = lhs.add(&t)?;
        }
    }
    let top = pochhammer_infinite(&QMonomial::q(s + 1), 1, &w)?;
    let bottom = pochhammer_infinite_inv(&QMonomial::q(r), 1, &w)?;
    let ratio2 = top.mul(&bottom)?;
    let rhs = qterm(&w, 1, r)?.sub(&qterm(&w, 1, s)?)?.mul(&ratio2.mul(&ratio2)?)?;
    Ok((lhs.truncate(ctx.order())?, rhs.truncate(ctx.order())?))
}

pub const AO_CASES: [(i64, i64); 3] = [(2, 1), (3, 1), (3, 2)];

fn ao(job: &Job) -> Result<Vec<Pair>> {
    let labels = ["a=q^2, b=q", "a=q^3, b=q", "a=q^3, b=q^2"];
    AO_CASES
        .iter()
        .zip(labels)
        .map(|(&(r, s), label)| {
            let (lhs, rhs) = andrews_onofri(r, s, &job.ctx)?;
            Ok(Pair::new(label, lhs, rhs, job.order()))
        })
        .collect()
}

fn aot(job: &Job) -> Result<Vec<Pair>> {
    let n = job.order();
    let jm = job.params.j_max;
    let cap = job.cap("d")? as i64;
    let w = job.work(2 * cap + 8);
    let d = w.param_mono("d", 1)?;
    let qinv: Vec<QSeries> = (0..=jm + 1).map(|k| q_inv(k, &w)).collect::<Result<_>>()?;
    let mut poch = PochSeq::new(&w, "d", -2)?;
    let mut scaled = Vec::with_capacity(jm + 2);
    for k in 0..=jm + 1 {
        scaled.push(poch.get(k)?.mul(&qinv[k])?);
    }
    // B_t = sum_n (2n - t) (d/q^2)_n (d/q^2)_(t-n) q^(t-n) / ((q)_n (q)_(t-n))
    let mut inner = Vec::with_capacity(jm + 2);
    for t in 0..=jm + 1 {
        let mut b = w.zero();
        for m in 0..=t {
            let c = Rat::from_int(2 * m as i64 - t as i64);
            if c.is_zero() {
                continue;
            }
            b = b.add(&scaled[m].mul(&scaled[t - m])?.mul_monomial(&c, Mono::ONE, (t - m) as i64)?)?;
        }
        inner.push(b);
    }
    let mut lhs_t = FiniteT::new(&job.ctx, "d", "d")?;
    let mut pairs = Vec::new();
    for j in 0..=jm {
        let mut s = w.zero();
        for (t, b) in inner.iter().enumerate().take(j + 2) {
            let e = (j as i64 - t as i64) * (j as i64 - t as i64 + 1) / 2;
            let c = Rat::from_int(sign(j + 1 - t));
            s = s.add(&b.mul(&qinv[j + 1 - t])?.mul_monomial(&c, Mono::ONE, e)?)?;
        }
        let rhs = s.div_binomial(&Rat::one(), d, -2)?.mul(&q_fin(j, &w)?)?.truncate(n)?;
        pairs.push(Pair::new("rhs", lhs_t.get(j)?, rhs, n).at(j));
    }
    Ok(pairs)
}

/// `sum_{n<=j} (-1)^n q^(n(n+1)/2) / (q)_n`.
fn alt_tri(j: usize, qinv: &[QSeries]) -> Result<QSeries> {
    let mut s = qinv[0].clone();
    for n in 1..=j {
        s = s.add(&qinv[n].mul_monomial(&Rat::from_int(sign(n)), Mono::ONE, tri(n))?)?;
    }
    Ok(s)
}

/// `sum_{n<=j} c(n) (-1)^n q^(n(n-1)/2) / (q)_n`.
fn alt_tri_below(j: usize, qinv: &[QSeries], c: impl Fn(usize) -> i64) -> Result<QSeries> {
    let mut s = qinv[0].mul_monomial(&Rat::from_int(c(0)), Mono::ONE, 0)?;
    for n in 1..=j {
        s = s.add(&qinv[n].mul_monomial(&Rat::from_int(c(n) * sign(n)), Mono::ONE, tri_below(n))?)?;
    }
    Ok(s)
}

fn q_inverses(job: &Job) -> Result<Vec<QSeries>> {
    (0..=job.params.j_max).map(|k| q_inv(k, &job.ctx)).collect()
}

fn f12(job: &Job) -> Result<Vec<Pair>> {
    let n = job.order();
    let qinv = q_inverses(job)?;
    let mut pairs = Vec::new();
    for j in 0..=job.params.j_max {
        let e1 = alt_tri(j, &qinv)?;
        let e2 = alt_tri_below(j, &qinv, |k| (j + 1 - k) as i64)?;
        let lead = qinv[j].mul_monomial(&Rat::from_int((j as i64 + 1) * sign(j)), Mono::ONE, tri(j))?;
        let e3 = lead.sub(&alt_tri_below(j, &qinv, |k| k as i64)?)?;
        pairs.push(Pair::new("first = second", e1.clone(), e2.clone(), n).at(j));
        pairs.push(Pair::new("first = third", e1, e3.clone(), n).at(j));
        pairs.push(Pair::new("second = third", e2, e3, n).at(j));
    }
    Ok(pairs)
}

fn f2(job: &Job) -> Result<Vec<Pair>> {
    let n = job.order();
    let qinv = q_inverses(job)?;
    (0..=job.params.j_max)
        .map(|j| {
            let lhs = alt_tri_below(j, &qinv, |_| 1)?;
            let rhs = qinv[j].mul_monomial(&Rat::from_int(sign(j)), Mono::ONE, tri(j))?;
            Ok(Pair::new("rhs", lhs, rhs, n).at(j))
        })
        .collect()
}

fn aeao(job: &Job) -> Result<Vec<Pair>> {
    let n = job.order();
    let qinv = q_inverses(job)?;
    (0..=job.params.j_max)
        .map(|j| {
            let lhs = weighted_gf(|m| Ok(partition::distinct_bounded_diff(m, j)), n as u32, &job.ctx)?;
            Ok(Pair::new("partitions", lhs, alt_tri(j, &qinv)?, n).at(j))
        })
        .collect()
}

// ---- sigma functions against rank parity

fn sig(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let rhs = weighted_gf(|n| sigma_weight(n, ctx), job.order() as u32, ctx)?;
    one_pair("partitions", sigma_series(ctx)?, rhs, job.order())
}

fn sig2(job: &Job) -> Result<Vec<Pair>> {
    let ctx = &job.ctx;
    let lhs = sigma2_series(ctx)?.sub(&ctx.one())?;
    let rhs = weighted_gf(|n| if n == 0 { Ok(0) } else { sigma2_weight(n, ctx) }, job.order() as u32, ctx)?;
    one_pair("partitions", lhs, rhs, job.order())
}

macro_rules! entry {
    ($id:expr, $mode:ident, $caps:expr, $check:expr, $desc:expr, $formula:expr) => {
        IdentityDef { id: $id, description: $desc, paper_ref: $formula, mode: Mode::$mode, params: $caps, check: $check }
    };
}

/// Every registered identity, in report order.
pub fn registry() -> &'static [IdentityDef] {
    static REGISTRY: OnceLock<Vec<IdentityDef>> = OnceLock::new();
    REGISTRY.get_or_init(build_registry)
}

fn build_registry() -> Vec<IdentityDef> {
    use Check::{Numeric, Pairs, Positive};
    vec![
        entry!("R1", Qseries, no_caps, Pairs(r1),
            "Sum of tails of (-q)_n with sigma as error term",
            "sum_n ((-q)_inf - (-q)_n) = (-q)_inf (-1/2 + sum_k q^k/(1-q^k)) + sigma(q)/2"),
        entry!("R2", Qseries, no_caps, Pairs(r2),
            "Sum of tails of 1/(q;q^2)_(n+1) with sigma as error term",
            "sum_n (1/(q;q^2)_inf - 1/(q;q^2)_(n+1)) = (1/(q;q^2)_inf)(-1/2 + sum_k q^(2k)/(1-q^(2k))) + sigma(q)/2"),
        entry!("A7a", Qseries, no_caps, Pairs(a7a),
            "Alternate representation of the (-q)_n tail sum",
            "sum_n ((-q)_inf - (-q)_n) = sum_(k>=1) k q^k (-q)_(k-1)"),
        entry!("A7b", Qseries, no_caps, Pairs(a7b),
            "Alternate representation of the 1/(q;q^2)_(n+1) tail sum",
            "sum_n (1/(q;q^2)_inf - 1/(q;q^2)_(n+1)) = sum_(k>=0) k q^(2k+1)/(q;q^2)_(k+1)"),
        entry!("SOT5rep", Qseries, no_caps, Pairs(sot5rep),
            "Tail sum over the residues 1 and 4 mod 5 by largest part",
            "sum_n (1/((q;q^5)_inf (q^4;q^5)_inf) - 1/((q;q^5)_n (q^4;q^5)_n)) = sum_k k q^(5k-4)/((q;q^5)_k (q^4;q^5)_(k-1)) + sum_k k q^(5k-1)/((q;q^5)_k (q^4;q^5)_k)"),
        entry!("BDQ", Qseries, no_caps, Pairs(bdq),
            "Tail sum of 1/(q)_n^2",
            "sum_n (1/(q)_inf^2 - 1/(q)_n^2) = (1/(q)_inf^2)(sum_k q^k/(1-q^k) - sum_(n>=1) (-1)^n q^(n(n+1)/2)/(1-q^n))"),
        entry!("T1", Qseries, caps_bd, Pairs(t1),
            "Two-parameter tail sum of 1/((b)_n (d)_n)",
            "sum_n (1/((b)_inf (d)_inf) - 1/((b)_n (d)_n)) = (1/((b)_inf (d)_inf)) (L - sum_n (-d)^n q^(n(n-1)/2)/(1-q^n) - sum_m (b/q)_m q^m/(1-q^m) - sum_n (-d)^n q^(n(n-1)/2)/(1-q^n) sum_m (q^n)_m (b/q)_m q^m/(q)_m)"),
        entry!("T1S", Qseries, caps_bd, Pairs(t1s),
            "Both symmetric right sides of the two-parameter tail sum",
            "sum_n (1/((b)_inf (d)_inf) - 1/((b)_n (d)_n)) = -(1/((b)_inf (d)_inf))(A(d) + A(b) + X) = (1/((b)_inf (d)_inf))(2L - sum_n (d/q)_n q^n/(1-q^n) - sum_m (b/q)_m q^m/(1-q^m) - X)"),
        entry!("S5", Qseries, caps_bd, Pairs(s5),
            "Sum of tails of products (b q^n)_inf (d q^n)_inf",
            "sum_n ((bq^n)_inf (dq^n)_inf - (q^(n+1))_inf^2) = sum_j q^j/(1-q^j) T(j) - sum_j (-1)^j q^(j(j+1)/2)/(1-q^j)"),
        entry!("C51", Qseries, caps_b, Pairs(c51),
            "Product tail sum at d = b",
            "sum_n ((bq^n)_inf^2 - (q^(n+1))_inf^2) = sum_j q^j/(1-q^j) T(j)|_(d=b) - sum_j (-1)^j q^(j(j+1)/2)/(1-q^j)"),
        entry!("C52", Qseries, caps_d, Pairs(c52),
            "Product tail sum at b = q",
            "sum_n (q^(n+1))_inf ((dq^n)_inf - (q^(n+1))_inf) = sum_j (-1)^j (d^j - q^j) q^(j(j-1)/2)/(1-q^j)"),
        entry!("C53", Qseries, caps_d, Pairs(c53),
            "Finite-sum form of a one-parameter Lambert series",
            "sum_j q^j/(1-q^j) sum_n (-1)^n [j,n] (d/q)_(j-n) q^(n(n-1)/2) = sum_j (-d)^j q^(j(j-1)/2)/(1-q^j)"),
        entry!("C53D", Qseries, caps_d, Pairs(c53d),
            "Product tail sum at d = q, then b renamed d",
            "sum_n (q^(n+1))_inf ((dq^n)_inf - (q^(n+1))_inf) = sum_j q^j/(1-q^j) sum_n (-1)^n [j,n] (d/q)_(j-n) q^(n(n-1)/2) - sum_j (-1)^j q^(j(j+1)/2)/(1-q^j)"),
        entry!("L31", Qseries, no_caps, Pairs(l31),
            "Lemma on q^(2n)/((-q)_n (1-q^n))",
            "sum_(n>=1) q^(2n)/((-q)_n (1-q^n)) = q/(1-q) - (1-q) sum_(m>=1) q^m/((-q)_m (1-q^m)(1-q^(m+1)))"),
        entry!("T2", Qseries, no_caps, Pairs(t2),
            "Combination identity behind the weighted partition theorem",
            "(1 - 1/q) sum_m (q;q^2)_(m-1) q^(2m)/(1-q^(2m)) = sum_n q^(2n)/((-q)_(n-1)(1-q^(2n))) - sum_n q^n/(1+q^n)"),
        entry!("T3", PartitionNumeric, no_caps, Numeric(t3),
            "Weighted partition counts p1, p2 and divisor counts",
            "p1(n) - p1(n+1) = p2(n) + tau_e(n) - tau_o(n); p1(N) = sum_(n<N) (tau_o(n) - tau_e(n) - p2(n))"),
        entry!("GF1", Qseries, no_caps, Pairs(gf1),
            "Generating function of p1",
            "sum_m (q;q^2)_(m-1) q^(2m)/(1-q^(2m)) = sum_n p1(n) q^n"),
        entry!("GF2", Qseries, no_caps, Pairs(gf2),
            "Generating function of p2",
            "sum_n q^(2n)/((-q)_(n-1)(1-q^(2n))) = sum_n p2(n) q^n"),
        entry!("GF3", Qseries, no_caps, Pairs(gf3),
            "Odd minus even divisors",
            "sum_n q^n/(1+q^n) = sum_n (tau_o(n) - tau_e(n)) q^n"),
        entry!("T4", Qseries, no_caps, Pairs(t4),
            "Three expressions for the concave-composition series",
            "(1/(q)_inf^2) sum_n (-1)^(n-1) n q^(n(n+1)/2)/(1-q^n) = sum_k (sum_(n<k) 1/(q)_n^2) q^k/(1-q^k) = (1/(q)_inf^2) sum_k (sum_(n<k) (-1)^n q^(n(n-1)/2)/((q)_n (1-q^(k-n)))) (q)_k q^k/(1-q^k)"),
        entry!("T4P", Positivity, no_caps, Positive(t4p),
            "Positivity of the concave-composition series",
            "[q^n] (1/(q)_inf^2) sum_n (-1)^(n-1) n q^(n(n+1)/2)/(1-q^n) > 0 for n >= 1"),
        entry!("AUX1", Qseries, no_caps, Pairs(aux1),
            "Euler product against a sum over 1/(-q)_n",
            "1/(q;q^2)_inf - 1 = (1/(q;q^2)_inf) sum_(n>=1) q^n/(-q)_n"),
        entry!("AUX2", Qseries, no_caps, Pairs(aux2),
            "Sigma as the defect of a Lambert-type sum",
            "(1/(q;q^2)_inf) sum_(n>=1) q^n/((-q)_n (1-q^n)) = -sigma(q)/2 + (1/(q;q^2)_inf) sum_(n>=0) q^n/(1+q^n)"),
        entry!("SYM", PerJFamily, caps_bd_j, Pairs(sym),
            "Symmetry of the finite sum T(j) in b and d",
            "sum_n [j,n] (b/q)_(j-n) (-d/q)^n q^(n(n-1)/2) = sum_n [j,n] (d/q)_(j-n) (-b/q)^n q^(n(n-1)/2)"),
        entry!("TJ", Qseries, caps_bdz, Pairs(tj),
            "Generating function of T(j)",
            "sum_j T(j) z^j/(q)_j = (dz/q)_inf (bz/q)_inf / (z)_inf"),
        entry!("AO", Qseries, no_caps, Pairs(ao),
            "Andrews-Onofri double sum at a = q^r, b = q^s",
            "sum_(n,m) (n-m)(b/a)_n (b/a)_m a^(n+m) q^m/((q)_n (q)_m) = (a-b)(bq)_inf^2/(a)_inf^2"),
        entry!("AOT", PerJFamily, caps_d_j, Pairs(aot),
            "T(j) at b = d through the Andrews-Onofri expansion",
            "T(j)|_(b=d) = ((q)_j/(1-d/q^2)) sum_t sum_n (2n-t)(d/q^2)_n (d/q^2)_(t-n) (-1)^(j+1-t) q^((t-n)+(j-t)(j-t+1)/2)/((q)_n (q)_(t-n) (q)_(j+1-t))"),
        entry!("F12", PerJFamily, no_caps, Pairs(f12),
            "Three finite sums over distinct-part generating functions",
            "sum_(n<=j) (-1)^n q^(n(n+1)/2)/(q)_n = sum_(n<=j) (j+1-n)(-1)^n q^(n(n-1)/2)/(q)_n = (j+1)(-1)^j q^(j(j+1)/2)/(q)_j - sum_(n<=j) n (-1)^n q^(n(n-1)/2)/(q)_n"),
        entry!("F2", PerJFamily, no_caps, Pairs(f2),
            "Telescoping finite sum",
            "sum_(n<=j) (-1)^n q^(n(n-1)/2)/(q)_n = (-1)^j q^(j(j+1)/2)/(q)_j"),
        entry!("AEAO", PerJFamily, no_caps, Pairs(aeao),
            "Distinct partitions with at most j parts by parity of length",
            "sum_m (a_e(m,j) - a_o(m,j)) q^m = sum_(n<=j) (-1)^n q^(n(n+1)/2)/(q)_n"),
        entry!("SIG", Qseries, no_caps, Pairs(sig),
            "sigma(q) against rank parity of distinct partitions",
            "sigma(q) = sum_n q^(n(n+1)/2)/(-q)_n = sum_n (even-rank minus odd-rank distinct partitions of n) q^n"),
        entry!("SIG2", Qseries, no_caps, Pairs(sig2),
            "sigma_2(q) against rank parity of gap-2 partitions",
            "sigma_2(q) - 1 = sum_(n>=1) (-1)^n q^(n^2)/(-q)_n = sum_(n>=1) (odd-rank minus even-rank gap-2 partitions of n) q^n"),
    ]
}
