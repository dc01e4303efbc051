//! Approximation algorithms and bounds for the quantum Max Cut Hamiltonian
//!
//! `H_G = Σ_{ij} w_ij (I − X_iX_j − Y_iY_j − Z_iZ_j) / 2` on a weighted graph `G`.
//!
//! The crate provides
//!
//! - [`graph`]: weighted graphs and the combinatorial subroutines (spanning
//!   trees, 2-colorings, Δ+1 edge colorings, triangle counts, the
//!   matching/forest decomposition);
//! - [`oracle`]: exact state-vector evaluation for small instances
//!   (largest eigenvalue, variational-state simulation, brute-force Max Cut);
//! - [`sdp`]: the Max Cut SDP solved by low-rank coordinate ascent, with
//!   hyperplane and rank-3 projection rounding;
//! - [`states`]: product, pair-product (singlet matching) and basis-state
//!   candidates with closed-form energies;
//! - [`bounds`]: efficiently computable upper bounds on `‖H_G‖`;
//! - [`circuit`]: the commuting-gate variational circuit with closed-form
//!   per-edge energies;
//! - [`report`] and [`generate`]: the CLI harness and random instances.

pub mod bounds;
pub mod circuit;
pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod sdp;
pub mod states;

pub use error::{Error, Result};
pub use graph::WeightedGraph;
