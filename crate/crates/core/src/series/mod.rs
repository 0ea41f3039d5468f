//! Exact arithmetic for truncated Laurent series in `q` whose coefficients
//! are capped multivariate polynomials over the rationals.

mod context;
mod poly;
mod qseries;
mod spec;

pub use context::SeriesContext;
pub use poly::{ParamPoly, PolyOp};
pub use qseries::{Comparison, DegreeBound, Mismatch, QSeries, SeriesOp};
pub use spec::{Mono, ParamSpec, MAX_CAP, MAX_PARAMS};

#[cfg(test)]
mod tests;
