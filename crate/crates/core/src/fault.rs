//! Deliberate single-primitive perturbations, used to show that the
//! registry is sensitive to each building block.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Fault {
    /// Drops the `q^m` factor from the double sum of the Andrews–Onofri identity.
    AndrewsOnofriMissingQm,
    /// Finite Pochhammer products omit their last factor.
    PochhammerDropLast,
    /// Infinite Pochhammer products stop one factor early.
    InfiniteProductShort,
    /// Lambert sums skip their first term.
    LambertSkipFirst,
    /// Gaussian binomials lose their top coefficient.
    GaussianDropTop,
    /// `sigma(q)` uses `(q;q)_n` instead of `(-q;q)_n` in the denominator.
    SigmaWrongSign,
    /// `sigma_2(q)` drops its alternating sign.
    Sigma2NoSign,
    /// Tail sums stop one term early.
    TailShort,
    /// The finite sum `T(j)` uses `(-d/q)^n` without `q^(n(n-1)/2)`.
    FiniteTMissingPower,
    /// Partition weight for `p_1` ignores the sign of odd parts.
    P1Unsigned,
    /// Divisor counter treats `n` itself as not a divisor.
    TauMissingSelf,
    /// Rank-parity weights use the largest part minus the number of parts minus one.
    RankOffByOne,
}

impl Fault {
    pub const ALL: [Fault; 12] = [
        Fault::AndrewsOnofriMissingQm,
        Fault::PochhammerDropLast,
        Fault::InfiniteProductShort,
        Fault::LambertSkipFirst,
        Fault::GaussianDropTop,
        Fault::SigmaWrongSign,
        Fault::Sigma2NoSign,
        Fault::TailShort,
        Fault::FiniteTMissingPower,
        Fault::P1Unsigned,
        Fault::TauMissingSelf,
        Fault::RankOffByOne,
    ];
}
