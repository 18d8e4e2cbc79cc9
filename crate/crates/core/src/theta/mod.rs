//! Theta functions, truncated q-series and the scalars built from them.

pub mod check;
pub mod coeff;
pub mod expr;
pub mod functions;
pub mod scalar;
pub mod series;
pub mod symbols;

pub use check::{Mode, Verifier};
pub use coeff::{int, rat, Coeff, ExponentVector, LaurentPoly, Rational};
pub use expr::{equal_at, EvalCache, ThetaExpr, ThetaMonomial};
pub use functions::{evaluate, pfun, qfun, theta, theta_eval, theta_series, EvaluationPoint};
pub use scalar::{EvalScalar, Scalar, SeriesContext, SymScalar};
pub use series::{QSeries, EXACT};
pub use symbols::{LatticeVector, LinearMap, SymbolKind, SymbolTable};
