//! Zeros of the weight-2 Eisenstein series `Ẽ_N = (N·E₂(Nτ) − E₂(τ))/(N − 1)`
//! on `Γ₀(N)` for `N = 2, 3, 5, 7`, determined by exact computation.
//!
//! The pipeline:
//! - [`qseries`] builds exact rational q-expansions of `E₂, E₄, E₆, Ẽ_N`;
//! - [`graded`] rediscovers and verifies the monic relation of `Ẽ_N` over `C[E₄, E₆]`;
//! - [`evaluate`] encloses series values with proven tail bounds;
//! - [`geometry`] enumerates candidate points and relocates points out of reach;
//! - [`certify`] decides ZERO / NONZERO at each candidate by interval exclusion.

pub mod exactnum;
pub mod qseries;
pub mod graded;
pub mod evaluate;
pub mod geometry;
pub mod certify;
