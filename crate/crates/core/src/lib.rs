//! Bound states of the Razavy bistable potential.
//!
//! The library evaluates the scaled potential
//! `V(x) = (xi^2/8) cosh 4x - (m+1) xi cosh 2x - xi^2/8`, maps the reduced
//! Schroedinger equation onto the confluent Heun equation, and computes the
//! bound-state spectrum with independent finite-difference and Numerov
//! backends plus an optional Heun-variable shooting check.
//!
//! Everything is plain `f64` on explicit grids; all solvers are deterministic.

pub mod eigen;
pub mod heun;
pub mod potential;
pub mod sample;

pub use potential::PotentialParams;
