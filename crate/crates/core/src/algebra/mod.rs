//! Exact arithmetic over Q(i) and Q(i)(z), the system text format, and the
//! numeric evaluation layer.

pub mod approx;
pub mod field;
pub mod gaussian;
pub mod matrix;
pub mod numeric;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scaled;

pub use approx::{eval_at, ComplexApprox};
pub use field::Field;
pub use gaussian::GaussianRational;
pub use matrix::{conjugate_matrix, derivative, ExactMatrix, Matrix, RatFuncMatrix};
pub use parse::{format_matrix, format_ratfunc, parse_expr, parse_system};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
