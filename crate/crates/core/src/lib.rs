//! The generalized Walsh (Chrestenson) system of order `a`: exact evaluation,
//! a fast radix-`a` transform, Dirichlet kernels and Lebesgue constants,
//! greedy approximants, and an explicit `L^1` function whose greedy
//! approximants do not converge.

pub mod cli;
pub mod counterexample;
pub mod error;
pub mod greedy;
pub mod io;
pub mod kernels;
pub mod radix;
pub mod sum;
pub mod transform;
pub mod walsh;

pub use error::{Error, Result};
pub use radix::{adic_digits, digits, AdicCell, DigitVector, Limits, Order};
pub use transform::{forward, inverse, naive_forward, Spectrum};
pub use walsh::{rademacher_exponent, sample_walsh, walsh_exponent, StepFunction, ZaExponent};
