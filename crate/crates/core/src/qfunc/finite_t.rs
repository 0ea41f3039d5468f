use super::GaussianTable;
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::rational::Rat;
use crate::series::{Mono, QSeries, SeriesContext};

const HEADROOM: i64 = 2;

/// `T(j) = sum_{n=0}^{j} [j, n] (b/q)_{j-n} (-d/q)^n q^(n(n-1)/2)` for a
/// sequence of `j`, sharing the Pochhammer and Gaussian tables.
#[derive(Debug)]
pub struct FiniteT {
    ctx: SeriesContext,
    work: SeriesContext,
    b: usize,
    d: usize,
    checked: bool,
    poch: Vec<QSeries>,
    gauss: GaussianTable,
}

impl FiniteT {
    /// Builder for parameters `b` and `d` (which may be the same name).
    /// `get(j)` fails unless both caps are at least `j`.
    pub fn new(ctx: &SeriesContext, b: &str, d: &str) -> Result<Self> {
        let spec = ctx.spec();
        let (b, d) = (spec.require(b)?, spec.require(d)?);
        let work = ctx.with_order(ctx.order() + HEADROOM);
        Ok(FiniteT {
            ctx: ctx.clone(),
            poch: vec![work.one()],
            gauss: GaussianTable::new(work.order()),
            work,
            b,
            d,
            checked: true,
        })
    }

    /// As [`FiniteT::new`], but monomials beyond the caps are dropped instead
    /// of rejected.
    pub fn unchecked(ctx: &SeriesContext, b: &str, d: &str) -> Result<Self> {
        Ok(FiniteT { checked: false, ..Self::new(ctx, b, d)? })
    }

    /// `(b/q)_k`.
    fn poch(&mut self, k: usize) -> Result<&QSeries> {
        let b = Mono::ONE.with_exp(self.b, 1);
        while self.poch.len() <= k {
            let i = self.poch.len() as i64 - 1;
            let next = self.poch.last().expect("nonempty").mul_binomial(&Rat::one(), b, i - 1)?;
            self.poch.push(next);
        }
        Ok(&self.poch[k])
    }

    pub fn get(&mut self, j: usize) -> Result<QSeries> {
        let spec = self.ctx.spec().clone();
        if self.checked {
            for i in [self.b, self.d] {
                if (spec.cap(i) as usize) < j {
                    return Err(Error::Cap(format!(
                        "T({j}) needs cap {j} for {}, have {}",
                        spec.names()[i],
                        spec.cap(i)
                    )));
                }
            }
        }
        let with_power = !self.ctx.is_fault(Fault::FiniteTMissingPower);
        let mut total = self.work.zero();
        for n in 0..=j {
            let g = self.gauss.series(j, n, &self.work)?;
            let p = self.poch(j - n)?.clone();
            let sign = if n % 2 == 1 { -Rat::one() } else { Rat::one() };
            let n = n as i64;
            let e = if with_power { n * (n - 1) / 2 } else { 0 } - n;
            let dn = Mono::ONE.with_exp(self.d, n.min(127) as u32);
            if n > spec.cap(self.d) as i64 {
                continue;
            }
            let term = p.mul(&g)?.mul_monomial(&sign, dn, e)?;
            total = total.add(&term)?;
        }
        total.truncate(self.ctx.order())
    }
}

/// `T(j)` in parameters named `b` and `d`.
pub fn finite_t(j: usize, ctx: &SeriesContext) -> Result<QSeries> {
    FiniteT::new(ctx, "b", "d")?.get(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ParamSpec;

    fn ctx(order: i64, cap: u32) -> SeriesContext {
        SeriesContext::new(order, ParamSpec::new(&[("b", cap), ("d", cap)]).unwrap()).unwrap()
    }

    #[test]
    fn small_cases() {
        let c = ctx(6, 2);
        assert_eq!(finite_t(0, &c).unwrap(), c.one());
        let t1 = finite_t(1, &c).unwrap();
        let b = c.param_mono("b", 1).unwrap();
        let d = c.param_mono("d", 1).unwrap();
        let expected = c
            .one()
            .sub(&c.monomial(Rat::one(), b, -1).unwrap())
            .unwrap()
            .sub(&c.monomial(Rat::one(), d, -1).unwrap())
            .unwrap();
        assert!(t1.equal_upto(&expected, 6).unwrap().is_equal());
    }

    #[test]
    fn cap_error() {
        assert!(matches!(finite_t(3, &ctx(6, 2)), Err(Error::Cap(_))));
    }

    #[test]
    fn symmetric_in_b_and_d() {
        let c = ctx(40, 15);
        let mut t = FiniteT::new(&c, "b", "d").unwrap();
        let mut s = FiniteT::new(&c, "d", "b").unwrap();
        for j in 0..=15 {
            assert_eq!(t.get(j).unwrap(), s.get(j).unwrap(), "T({j})");
        }
    }

    #[test]
    fn laurent_floor() {
        let c = ctx(30, 8);
        for j in 0..=8 {
            let t = finite_t(j, &c).unwrap();
            assert!(t.valuation() >= -2, "T({j})");
        }
    }

    #[test]
    fn shared_name() {
        let c = SeriesContext::new(20, ParamSpec::new(&[("b", 6)]).unwrap()).unwrap();
        let mut t = FiniteT::new(&c, "b", "b").unwrap();
        let b = c.param_mono("b", 1).unwrap();
        let expected = c.one().sub(&c.monomial(Rat::from_int(2), b, -1).unwrap()).unwrap();
        assert!(t.get(1).unwrap().equal_upto(&expected, 20).unwrap().is_equal());
    }
}
