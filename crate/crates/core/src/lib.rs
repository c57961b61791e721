//! Constructs, solves and verifies graph-to-manifold reductions for linear and
//! quadratic programs over Stiefel, Grassmann and flag manifolds.
//!
//! Each reduction maps a combinatorial quantity of a small graph (stability
//! number, max-cut, clique number) onto an optimization problem over a matrix
//! manifold. The crate builds those instances, solves them exactly using the
//! structure that the reductions force on feasible points, and checks the
//! resulting identities in exact rational arithmetic. A Riemannian gradient
//! ascent provides a structure-free numerical cross-check, and
//! [`closedform::solve_flag_lp`] solves unconstrained linear programs over flag
//! manifolds in polynomial time.
//!
//! The runnable programs under `examples/` walk through each capability:
//!
//! ```bash
//! cargo run -p manifold-hardness --example graph_oracles
//! cargo run -p manifold-hardness --example stiefel_lp_stability
//! cargo run -p manifold-hardness --example grassmann_feasibility
//! cargo run -p manifold-hardness --example flag_feasibility
//! cargo run -p manifold-hardness --example stiefel_qp_maxcut
//! cargo run -p manifold-hardness --example flag_qp_clique
//! cargo run -p manifold-hardness --example closed_form_flag_lp
//! cargo run -p manifold-hardness --example riemannian_cross_check
//! cargo run -p manifold-hardness --example integer_rounding
//! cargo run -p manifold-hardness --example instance_files
//! ```

pub mod cli;
pub mod closedform;
pub mod error;
pub mod graphs;
pub mod manifolds;
pub mod matrix;
pub mod rational;
pub mod reductions;
pub mod riemannian;
pub mod rng;

pub use error::{Error, Result};
pub use graphs::{Certificate, CertificateKind, Graph};
pub use manifolds::{FlagSignature, ManifoldDescriptor};
pub use matrix::{Matrix, SymmetricMatrix};
pub use rational::Rational;
pub use reductions::{Instance, LinearInstance, QuadraticInstance};
