//! Linear differential systems `w' = A(z) w` over C(z) and R(z).
//!
//! The crate covers exact arithmetic in Q(i)(z), truncated power-series
//! solutions at ordinary points, numerical monodromy along polygonal loops,
//! descent of systems from C(z) to R(z), and realization of prescribed
//! conjugate-symmetric monodromy by Fuchsian systems.

pub mod algebra;
pub mod descent;
pub mod error;
pub mod linalg;
pub mod monodromy;
pub mod realize;
pub mod series;

pub use error::{Error, ErrorKind, Result};
