//! Standard q-objects built on the series engine.

mod finite_t;
mod gaussian;
mod lambert;
mod pochhammer;
mod tails;

pub use finite_t::{finite_t, FiniteT};
pub use gaussian::{gaussian_binomial, GaussianTable};
pub use lambert::{lambert, sigma2_series, sigma_series, sigma_star_series};
pub use pochhammer::{
    pochhammer_finite, pochhammer_finite_inv, pochhammer_infinite, pochhammer_infinite_euler, pochhammer_infinite_inv,
};
pub use tails::{sum_until, tail_sum, tail_sum_extra, TailFamily};

use crate::error::Result;
use crate::rational::Rat;
use crate::series::{Mono, SeriesContext};

/// A single term `coeff * params * q^q_exp`, used as the argument of
/// Pochhammer symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMonomial {
    pub coeff: Rat,
    pub mono: Mono,
    pub q_exp: i64,
}

impl QMonomial {
    pub fn new(coeff: Rat, mono: Mono, q_exp: i64) -> Self {
        if coeff.is_zero() {
            return QMonomial { coeff, mono: Mono::ONE, q_exp: 0 };
        }
        QMonomial { coeff, mono, q_exp }
    }

    /// `q^k`.
    pub fn q(k: i64) -> Self {
        QMonomial::new(Rat::one(), Mono::ONE, k)
    }

    /// `c * q^k`.
    pub fn scaled_q(c: i64, k: i64) -> Self {
        QMonomial::new(Rat::from_int(c), Mono::ONE, k)
    }

    /// `name * q^k`.
    pub fn param(ctx: &SeriesContext, name: &str, k: i64) -> Result<Self> {
        Ok(QMonomial::new(Rat::one(), ctx.param_mono(name, 1)?, k))
    }

    pub fn zero() -> Self {
        QMonomial::new(Rat::zero(), Mono::ONE, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_param_free(&self) -> bool {
        self.mono == Mono::ONE
    }

    pub fn neg(&self) -> Self {
        QMonomial::new(-&self.coeff, self.mono, self.q_exp)
    }
}
