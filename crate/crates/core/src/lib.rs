//! Algorithms and decision procedures for allocating indivisible chores.
//!
//! The crate is organized around a small data model ([`instance`]) shared by:
//!
//! - [`properties`]: checkers for equitability, envy-freeness, and Pareto
//!   optimality, each returning a verdict plus a violation witness;
//! - [`greedy`]: polynomial-time constructive algorithms;
//! - [`market`]: a Fisher-market algorithm computing allocations that are
//!   equitable up to one chore and Pareto optimal;
//! - [`leximin`]: an exact leximin solver via branch and bound;
//! - [`egalitarian`]: a randomized allocator built on an exact-rational LP
//!   and a lottery decomposition;
//! - [`oracle`]: brute-force enumeration for ground truth on small instances;
//! - [`data`]: JSON serialization, synthetic generation, and survey-style
//!   ingestion.

pub mod data;
pub mod egalitarian;
pub mod fixtures;
pub mod greedy;
pub mod instance;
pub mod leximin;
pub mod market;
pub mod oracle;
pub mod properties;

pub use instance::{Allocation, FractionalAllocation, Instance, Rational, UtilityProfile};
