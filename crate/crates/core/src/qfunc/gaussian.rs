use crate::error::Result;
use crate::fault::Fault;
use crate::rational::Rat;
use crate::series::{QSeries, SeriesContext};

/// Rows of Gaussian binomials `[j, n]` modulo `q^(order+1)`, grown on demand
/// with the Pascal rule `[j, n] = [j-1, n-1] + q^n [j-1, n]`.
#[derive(Clone, Debug)]
pub struct GaussianTable {
    order: usize,
    rows: Vec<Vec<Vec<Rat>>>,
}

impl GaussianTable {
    pub fn new(order: i64) -> Self {
        GaussianTable { order: order.max(0) as usize, rows: vec![vec![vec![Rat::one()]]] }
    }

    pub fn order(&self) -> i64 {
        self.order as i64
    }

    fn grow(&mut self, j: usize) {
        while self.rows.len() <= j {
            let prev = self.rows.last().expect("row 0 is always present");
            let jj = prev.len();
            let mut row = Vec::with_capacity(jj + 1);
            for n in 0..=jj {
                let len = (n * (jj - n) + 1).min(self.order + 1);
                let mut c = vec![Rat::zero(); len];
                if n > 0 {
                    for (i, v) in prev[n - 1].iter().enumerate().take(len) {
                        c[i] = v.clone();
                    }
                }
                if n < jj {
                    for (i, v) in prev[n].iter().enumerate() {
                        if i + n >= len {
                            break;
                        }
                        c[i + n] = &c[i + n] + v;
                    }
                }
                row.push(c);
            }
            self.rows.push(row);
        }
    }

    /// Coefficients of `[j, n]` from `q^0`, at most `order + 1` of them.
    pub fn coeffs(&mut self, j: usize, n: usize) -> &[Rat] {
        if n > j {
            return &[];
        }
        self.grow(j);
        &self.rows[j][n]
    }

    pub fn series(&mut self, j: usize, n: usize, ctx: &SeriesContext) -> Result<QSeries> {
        let mut c = self.coeffs(j, n).to_vec();
        c.truncate(ctx.order().max(0) as usize + 1);
        if ctx.is_fault(Fault::GaussianDropTop) && n <= j {
            let top = n * (j - n);
            if top > 0 && top < c.len() {
                c[top] = Rat::zero();
            }
        }
        ctx.from_rats(0, &c)
    }
}

/// `[j, n]` as a parameter-free series; zero when `n > j`.
pub fn gaussian_binomial(j: usize, n: usize, ctx: &SeriesContext) -> Result<QSeries> {
    if n > j {
        return Ok(ctx.zero());
    }
    let order = ctx.order().min((n * (j - n)) as i64);
    GaussianTable::new(order).series(j, n, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfunc::{pochhammer_finite, pochhammer_finite_inv, QMonomial};

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn examples() {
        let ctx = SeriesContext::plain(10).unwrap();
        assert_eq!(gaussian_binomial(5, 0, &ctx).unwrap(), ctx.one());
        assert_eq!(gaussian_binomial(2, 1, &ctx).unwrap().const_coeffs(2), ints(&[1, 1, 0]));
        assert_eq!(gaussian_binomial(4, 2, &ctx).unwrap().const_coeffs(5), ints(&[1, 1, 2, 1, 1, 0]));
        assert!(gaussian_binomial(2, 3, &ctx).unwrap().is_zero());
    }

    #[test]
    fn symmetric_nonnegative_exact_degree() {
        let order = 25 * 25 / 4 + 1;
        let ctx = SeriesContext::plain(order).unwrap();
        let mut table = GaussianTable::new(order);
        for j in 0..=25usize {
            for n in 0..=j {
                let a = table.series(j, n, &ctx).unwrap();
                let b = table.series(j, j - n, &ctx).unwrap();
                assert_eq!(a, b, "[{j},{n}]");
                let deg = (n * (j - n)) as i64;
                assert!(!a.coeff_const(deg).is_zero());
                assert!(a.coeff_const(deg + 1).is_zero());
                for c in a.const_coeffs(order) {
                    assert!(c.is_integer() && !c.is_negative());
                }
            }
        }
    }

    #[test]
    fn agrees_with_product_formula() {
        let ctx = SeriesContext::plain(30).unwrap();
        let q = QMonomial::q(1);
        let mut table = GaussianTable::new(30);
        for j in 0..=10usize {
            for n in 0..=j {
                let num = pochhammer_finite(&q, j, 1, &ctx).unwrap();
                let d1 = pochhammer_finite_inv(&q, n, 1, &ctx).unwrap();
                let d2 = pochhammer_finite_inv(&q, j - n, 1, &ctx).unwrap();
                let oracle = num.mul(&d1).unwrap().mul(&d2).unwrap();
                let g = table.series(j, n, &ctx).unwrap();
                assert!(g.equal_upto(&oracle, 30).unwrap().is_equal(), "[{j},{n}]");
            }
        }
    }

    #[test]
    fn drop_top_fault_changes_result() {
        let ctx = SeriesContext::plain(10).unwrap().with_fault(Some(Fault::GaussianDropTop));
        assert_eq!(gaussian_binomial(4, 2, &ctx).unwrap().const_coeffs(4), ints(&[1, 1, 2, 1, 0]));
    }
}
