//! Closed and exact function calculus on the lattice Fock space.
//!
//! A constant-coefficient vector field D_0 = Σ_k a_k ∂_k on Gaussian L²
//! splits its closed functions into constants plus the closure of the exact
//! ones. This crate realizes that calculus at finite truncation: multi-index
//! combinatorics and orbit bookkeeping, Hermite expansions, closedness
//! verification, exact-function generators, the transport operator
//! T c(z) = Σ_k a_k c(z - ke) with its masked spectral inverse, and the
//! orbit-graph cocycle view of closedness for the gradient field.
//!
//! Start from the runnable examples, one per capability:
//!
//! ```bash
//! cargo run --example orbits            # multi-index coding, orbits, cone forms, regions
//! cargo run --example hermite_calculus  # expansions, evaluation, quadrature inner products
//! cargo run --example closedness        # symbolic and coefficient closedness checks
//! cargo run --example exact_functions   # exact generators, both constructions
//! cargo run --example symbol_roots      # unit-circle roots of the transport symbol
//! cargo run --example masked_solve      # spectral solve with a root-avoiding mask
//! cargo run --example approximation     # staged approximation of closed by exact
//! cargo run --example orbit_graph       # the cocycle view of closedness
//! ```
//!
//! The same pipelines are scriptable through the thin `fockforms` binary
//! (`orbits`, `check-closed`, `gen-exact`, `roots`, `approximate`, `graph`,
//! `validate`).

pub mod error;
pub mod exactgen;
pub mod field;
pub mod graph;
pub mod hermite;
pub mod multiindex;
pub mod symmetry;
pub mod transport;

pub mod cli;

pub use error::{Error, Result};
pub use field::{CoefficientField, VectorField};
pub use hermite::HermiteExpansion;
pub use multiindex::{LatticePoint, MultiIndex};
