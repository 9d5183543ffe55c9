//! Exact solvers for optimal and t-restricted optimal graph pebbling,
//! together with the constructions (lexicographic products, the H_m family,
//! quotients, the OPN-to-ROPN reduction), solvability certificates, and a
//! claim re-verification harness.

pub mod certificates;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod solver;

pub use engine::{Distribution, Move, MoveSequence};
pub use error::{Error, Result};
pub use graph::Graph;
