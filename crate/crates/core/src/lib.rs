//! Approximation pipeline for active-time scheduling with laminar job windows.
//!
//! The pipeline solves a node-indexed LP exactly, pushes fractional openings
//! down the window tree, rounds them to an integral opening that opens at most
//! `9/5` times the LP value, and certifies the result with a max-flow check.
//! Brute-force optima, integrality-gap instances and the hardness gadgets
//! live alongside as test oracles and instance transforms.

pub mod feasibility;
pub mod generators;
pub mod hardness;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod pipeline;
pub mod rounding;
pub mod transform;
