//! Free-probability subordination toolkit.
//!
//! Exact noncommutative derivation algebra ([`ncalg`]), traces on free products
//! ([`freeprob`]), Cauchy and ψ transforms ([`transforms`]), subordination solvers
//! ([`subord`]), circular Hilbert transform quadrature ([`hilbreg`]), random-matrix
//! validation ([`rmt`]) and the command-line front end ([`cli`]).

pub mod ncalg;
pub mod scalar;
pub mod freeprob;
pub mod transforms;
pub mod subord;
pub mod hilbreg;
pub mod report;
pub mod rmt;
pub mod suites;
pub mod cli;
