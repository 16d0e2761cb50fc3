//! Numerical monodromy: loops, continuation and representations.

pub mod continuation;
pub mod loops;
pub mod rep;

pub use continuation::{continue_along, continue_along_exact, Continuation, ContinuationOptions, FloatSystem, LocalSystem};
pub use loops::{standard_loops, Loop, LoopKind, StandardLoops};
pub use rep::{check_conjugation_formula, monodromy_rep, monodromy_rep_with, infinity_order, product_around_all, ConjugationReport, MonodromyRep};
