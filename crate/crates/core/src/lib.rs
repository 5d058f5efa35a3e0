//! Matroid intersection in the independence-oracle model.
//!
//! Two matroids over the ground set `0..n` are accessed only through
//! [`IndependenceOracle`] queries. The crate provides an approximation
//! algorithm built on layered refinement of partial augmenting sets, an exact
//! hybrid solver, a Cunningham-style reference solver and an exhaustive
//! checker for small instances.

pub mod augset;
pub mod error;
pub mod exchange;
pub mod instance;
pub mod oracle;
pub mod refine;
pub mod set;
pub mod solvers;

pub use error::{MatroidError, SolverError};
pub use exchange::{
    augment_path, compute_distance_layers, find_augmenting_path, find_exchange, AugmentingPath, CommonSet,
    DistanceLayers, OraclePair, PathSearch, StDistance,
};
pub use oracle::{
    checked_matroid_axioms, rank, CountingOracle, ExplicitFamily, GraphicMatroid, IndependenceOracle, LinearMatroidGf2,
    PartitionMatroid, UniformMatroid,
};
pub use set::{ElementId, ElementSet};
