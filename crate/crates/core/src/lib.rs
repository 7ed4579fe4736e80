//! Self-organization hierarchies of prime integer relations and the things
//! built on top of them.
//!
//! - [`relations`]: ±1 sign sequences over integers, vanishing signed power
//!   sums, and the dyadic hierarchy they form.
//! - [`geometry`]: the exact piecewise-polynomial pattern stack obtained by
//!   repeatedly integrating the ±δ step function, its per-level metrics, the
//!   level-4 renormalization, and SVG/CSV export.
//! - [`complexity`]: quadratic-trace complexity scores of strategy matrices
//!   and normalized distance matrices.
//! - [`tsp`]: the multi-agent TSP heuristic whose agents switch between
//!   random and greedy moves under a success threshold and a PTM rule.
//! - [`experiment`]: v sweeps, concavity detection, and the linear fit of
//!   algorithm complexity against problem complexity.
//!
//! Everything is deterministic: the same inputs and seeds give byte-identical
//! outputs regardless of thread count.

pub mod complexity;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod relations;
pub mod rng;
pub mod tsp;

pub use error::{Error, Result};
