//! Brute-force partition enumeration and the weighted counts used as
//! independent oracles.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::series::{QSeries, SeriesContext};

/// Parts in nonincreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> Option<u32> {
        self.parts.first().copied()
    }

    /// Multiplicity of the largest part.
    pub fn largest_multiplicity(&self) -> usize {
        match self.largest() {
            Some(l) => self.parts.iter().take_while(|&&p| p == l).count(),
            None => 0,
        }
    }

    pub fn odd_parts(&self) -> usize {
        self.parts.iter().filter(|&&p| p % 2 == 1).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("+"))
    }
}

/// Largest part minus the number of parts.
pub fn rank(p: &Partition) -> Result<i64> {
    match p.largest() {
        Some(l) => Ok(l as i64 - p.len() as i64),
        None => Err(Error::Domain("rank of the empty partition is undefined".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn holds(self, x: u32) -> bool {
        (x % 2 == 0) == (self == Parity::Even)
    }
}

/// `num * L / den + add` for the largest part `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub num: i64,
    pub den: i64,
    pub add: i64,
}

impl Affine {
    pub const fn new(num: i64, den: i64, add: i64) -> Self {
        Affine { num, den, add }
    }

    fn at(self, l: u32) -> Option<i64> {
        let x = self.num * l as i64;
        (x % self.den == 0).then(|| x / self.den + self.add)
    }
}

/// Closed interval of forbidden part sizes whose endpoints depend on the
/// largest part. A partition whose largest part makes an endpoint fractional
/// is rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    pub from: Affine,
    pub to: Affine,
}

/// Independent restrictions on a partition; unset fields impose nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub distinct: bool,
    pub distinct_below_largest: bool,
    pub min_gap: Option<u32>,
    pub residues: Option<(u32, Vec<u32>)>,
    pub largest_parity: Option<Parity>,
    pub sub_largest_parity: Option<Parity>,
    pub band: Option<Band>,
    pub max_parts: Option<usize>,
}

impl Constraint {
    pub fn none() -> Self {
        Constraint::default()
    }

    pub fn distinct() -> Self {
        Constraint { distinct: true, ..Default::default() }
    }

    pub fn gap(g: u32) -> Self {
        Constraint { min_gap: Some(g), ..Default::default() }
    }

    pub fn residues(m: u32, set: &[u32]) -> Self {
        Constraint { residues: Some((m, set.to_vec())), ..Default::default() }
    }

    /// Largest part even, possibly repeated; the others odd, distinct and
    /// different from the largest part minus one.
    pub fn p1() -> Self {
        Constraint {
            distinct_below_largest: true,
            largest_parity: Some(Parity::Even),
            sub_largest_parity: Some(Parity::Odd),
            band: Some(Band { from: Affine::new(1, 1, -1), to: Affine::new(1, 1, -1) }),
            ..Default::default()
        }
    }

    /// Largest part `2k`, possibly repeated, and no part in `[k, 2k-1]`.
    pub fn p2() -> Self {
        Constraint {
            largest_parity: Some(Parity::Even),
            band: Some(Band { from: Affine::new(1, 2, 0), to: Affine::new(1, 1, -1) }),
            ..Default::default()
        }
    }

    fn part_allowed(&self, x: u32) -> bool {
        match &self.residues {
            Some((m, set)) => set.contains(&(x % m)),
            None => true,
        }
    }

    pub fn satisfies(&self, p: &Partition) -> bool {
        let parts = p.parts();
        if let Some(k) = self.max_parts {
            if parts.len() > k {
                return false;
            }
        }
        if !parts.iter().all(|&x| self.part_allowed(x)) {
            return false;
        }
        for w in parts.windows(2) {
            let gap = w[0] - w[1];
            if self.distinct && gap == 0 {
                return false;
            }
            if self.min_gap.is_some_and(|g| gap < g) {
                return false;
            }
        }
        let Some(l) = p.largest() else { return true };
        if self.largest_parity.is_some_and(|par| !par.holds(l)) {
            return false;
        }
        let below = &parts[p.largest_multiplicity()..];
        if self.distinct_below_largest && below.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if let Some(par) = self.sub_largest_parity {
            if !below.iter().all(|&x| par.holds(x)) {
                return false;
            }
        }
        if let Some(band) = self.band {
            let (Some(a), Some(b)) = (band.from.at(l), band.to.at(l)) else { return false };
            if parts.iter().any(|&x| (a..=b).contains(&(x as i64))) {
                return false;
            }
        }
        true
    }
}

/// Partitions of `n` satisfying `c`, in lexicographically decreasing order.
pub fn gen_partitions(n: u32, c: &Constraint) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    descend(n, n, c, &mut cur, &mut out);
    out
}

fn descend(rest: u32, max: u32, c: &Constraint, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        let p = Partition { parts: cur.clone() };
        if c.satisfies(&p) {
            out.push(p);
        }
        return;
    }
    if c.max_parts.is_some_and(|k| cur.len() >= k) {
        return;
    }
    for x in (1..=max.min(rest)).rev() {
        if !c.part_allowed(x) {
            continue;
        }
        let next_max = match (c.distinct, c.min_gap) {
            (_, Some(g)) if g > 0 => x.saturating_sub(g),
            (true, _) => x - 1,
            _ => x,
        };
        cur.push(x);
        descend(rest - x, next_max, c, cur, out);
        cur.pop();
    }
}

/// How each partition is signed in a weighted count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightRule {
    RankParityEvenMinusOdd,
    RankParityOddMinusEven,
    NegOnePowOddParts,
    NegOnePowPartsMinusLargestMultiplicity,
    Unweighted,
}

fn neg_one_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl WeightRule {
    pub fn weight(self, p: &Partition) -> Result<i64> {
        Ok(match self {
            WeightRule::RankParityEvenMinusOdd => neg_one_pow(rank(p)?),
            WeightRule::RankParityOddMinusEven => -neg_one_pow(rank(p)?),
            WeightRule::NegOnePowOddParts => neg_one_pow(p.odd_parts() as i64),
            WeightRule::NegOnePowPartsMinusLargestMultiplicity => {
                neg_one_pow(p.len() as i64 - p.largest_multiplicity() as i64)
            }
            WeightRule::Unweighted => 1,
        })
    }
}

/// Sum of `w` over the partitions of `n` satisfying `c`.
pub fn weighted_count(n: u32, c: &Constraint, w: WeightRule) -> Result<i64> {
    gen_partitions(n, c).iter().map(|p| w.weight(p)).sum()
}

fn positive(n: u32, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain(format!("{what} is defined for n >= 1")));
    }
    Ok(())
}

/// Signed count `(-1)^(odd parts)` over the partitions of [`Constraint::p1`].
pub fn p1_count(n: u32) -> Result<i64> {
    positive(n, "p1")?;
    weighted_count(n, &Constraint::p1(), WeightRule::NegOnePowOddParts)
}

/// Signed count `(-1)^(parts - multiplicity of largest)` over the
/// partitions of [`Constraint::p2`].
pub fn p2_count(n: u32) -> Result<i64> {
    positive(n, "p2")?;
    weighted_count(n, &Constraint::p2(), WeightRule::NegOnePowPartsMinusLargestMultiplicity)
}

pub fn tau_even(n: u32) -> u64 {
    (1..=n).filter(|d| n % d == 0 && d % 2 == 0).count() as u64
}

pub fn tau_odd(n: u32) -> u64 {
    (1..=n).filter(|d| n % d == 0 && d % 2 == 1).count() as u64
}

/// Distinct-part partitions of `m` with at most `j` parts, counted `+1` for
/// an even number of parts and `-1` for odd.
pub fn distinct_bounded_diff(m: u32, j: usize) -> i64 {
    let c = Constraint { distinct: true, max_parts: Some(j), ..Default::default() };
    gen_partitions(m, &c).iter().map(|p| neg_one_pow(p.len() as i64)).sum()
}

/// Even-rank minus odd-rank distinct-part partitions of `n`; `1` at `n = 0`.
pub fn sigma_weight(n: u32) -> Result<i64> {
    if n == 0 {
        return Ok(1);
    }
    weighted_count(n, &Constraint::distinct(), WeightRule::RankParityEvenMinusOdd)
}

/// Odd-rank minus even-rank partitions of `n` into parts differing by at
/// least 2, for `n >= 1`.
pub fn sigma2_weight(n: u32) -> Result<i64> {
    positive(n, "the gap-2 rank count")?;
    weighted_count(n, &Constraint::gap(2), WeightRule::RankParityOddMinusEven)
}

/// `sum_{n=0}^{n_max} count(n) q^n`, exact through `q^n_max`.
pub fn weighted_gf(count: impl Fn(u32) -> Result<i64>, n_max: u32, ctx: &SeriesContext) -> Result<QSeries> {
    if n_max as i64 > ctx.order() {
        return Err(Error::Window(format!("n_max {n_max} exceeds the context order {}", ctx.order())));
    }
    let coeffs = (0..=n_max).map(|n| count(n).map(Rat::from_int)).collect::<Result<Vec<_>>>()?;
    ctx.with_order(n_max as i64).from_rats(0, &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(v: &[Partition]) -> Vec<Vec<u32>> {
        v.iter().map(|p| p.parts().to_vec()).collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(parts(&gen_partitions(0, &Constraint::distinct())), vec![Vec::<u32>::new()]);
        assert_eq!(parts(&gen_partitions(4, &Constraint::distinct())), vec![vec![4], vec![3, 1]]);
        assert_eq!(
            parts(&gen_partitions(7, &Constraint::gap(2))),
            vec![vec![7], vec![6, 1], vec![5, 2]]
        );
        assert_eq!(gen_partitions(5, &Constraint::none()).len(), 7);
        let all = gen_partitions(6, &Constraint::none());
        for w in all.windows(2) {
            assert!(w[0].parts() > w[1].parts());
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&Partition::new(vec![1]).unwrap()).unwrap(), 0);
        assert_eq!(rank(&Partition::new(vec![1, 6]).unwrap()).unwrap(), 4);
        assert_eq!(rank(&Partition::new(vec![2, 1]).unwrap()).unwrap(), 0);
        assert!(rank(&Partition::empty()).is_err());
    }

    #[test]
    fn weighted_counts() {
        assert_eq!(p1_count(6).unwrap(), 2);
        assert_eq!(p1_count(7).unwrap(), -1);
        assert_eq!(p2_count(6).unwrap(), 3);
        assert_eq!(p1_count(1).unwrap(), 0);
        assert!(p1_count(0).is_err());
        assert!(p2_count(0).is_err());
        let p1_six = parts(&gen_partitions(6, &Constraint::p1()));
        assert_eq!(p1_six, vec![vec![6], vec![2, 2, 2]]);
        let p2_six = parts(&gen_partitions(6, &Constraint::p2()));
        assert_eq!(p2_six, vec![vec![6], vec![4, 1, 1], vec![2, 2, 2]]);
    }

    #[test]
    fn divisors() {
        assert_eq!((tau_even(6), tau_odd(6)), (2, 2));
        assert_eq!((tau_even(1), tau_odd(1)), (0, 1));
        assert_eq!((tau_even(8), tau_odd(8)), (3, 1));
    }

    #[test]
    fn bounded_diff() {
        assert_eq!(distinct_bounded_diff(0, 0), 1);
        assert_eq!(distinct_bounded_diff(1, 1), -1);
        assert_eq!(distinct_bounded_diff(3, 2), 0);
        assert_eq!(distinct_bounded_diff(3, 1), -1);
    }

    #[test]
    fn theorem_identity() {
        for n in 1..=40u32 {
            let lhs = p1_count(n).unwrap() - p1_count(n + 1).unwrap();
            let rhs = p2_count(n).unwrap() + tau_even(n) as i64 - tau_odd(n) as i64;
            assert_eq!(lhs, rhs, "n = {n}");
        }
        let p2: Vec<i64> = (1..=40u32).map(|n| p2_count(n).unwrap()).collect();
        for big_n in 2..=40u32 {
            let sum: i64 = (1..big_n)
                .map(|n| tau_odd(n) as i64 - tau_even(n) as i64 - p2[n as usize - 1])
                .sum();
            assert_eq!(p1_count(big_n).unwrap(), sum, "N = {big_n}");
        }
    }

    #[test]
    fn sigma_weights() {
        assert_eq!(sigma_weight(0).unwrap(), 1);
        assert_eq!(sigma_weight(3).unwrap(), 2);
        assert_eq!(sigma2_weight(1).unwrap(), -1);
        assert_eq!(sigma2_weight(2).unwrap(), 1);
    }

    #[test]
    fn band_rejects_fractional_endpoints() {
        let p = Partition::new(vec![5, 1]).unwrap();
        let c = Constraint { band: Constraint::p2().band, ..Default::default() };
        assert!(!c.satisfies(&p));
        assert!(c.satisfies(&Partition::new(vec![6, 2]).unwrap()));
        assert!(!c.satisfies(&Partition::new(vec![6, 3]).unwrap()));
    }

    #[test]
    fn gf_window() {
        let ctx = SeriesContext::plain(10).unwrap();
        assert!(weighted_gf(|_| Ok(0), 10, &ctx).unwrap().is_zero());
        assert!(weighted_gf(|_| Ok(0), 11, &ctx).is_err());
        let gf = weighted_gf(|n| if n == 0 { Ok(0) } else { p1_count(n) }, 7, &ctx).unwrap();
        assert_eq!(gf.coeff_const(6), Rat::from_int(2));
        assert_eq!(gf.coeff_const(7), Rat::from_int(-1));
    }
}
