//! Solver and verification suite for a three-stage nomination-and-election
//! game with insider and outsider politicians.
//!
//! The crate computes closed-form subgame-perfect equilibria (platforms,
//! winners, rents), validates them against a brute-force discretized grid
//! oracle, and reproduces the model's policy-polarization and welfare
//! comparative statics.

pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod model;
pub mod oracle;
