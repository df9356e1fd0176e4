//! Parameter sets of points in self-similar Cantor sets.
//!
//! For an alphabet size `m ≥ 2` and `λ ∈ (0, 1/m]` let
//! `K_λ = { Σ d_i λ^i : d_i ∈ {0, …, m−1} }`. Given `x ∈ (0, 1)` this crate
//! studies `Λ(x) = { λ : x ∈ K_λ }`: its nested interval covers, thickness
//! estimates, interleaving with other parameter sets, and dimension
//! estimates. All set-theoretic decisions are made with exact rationals.

pub mod cli;
pub mod coding;
pub mod dimension;
pub mod error;
pub mod exact_arith;
pub mod lambda_set;
pub mod report;
pub mod thickness;

pub use error::{Error, Result};
pub use exact_arith::Rational;
