//! Haplotype inference by pure parsimony.
//!
//! Given a set of genotypes (strings over {0,1,2}), find a smallest set of
//! haplotypes (binary strings) such that every genotype is resolved by a
//! pair of them. This crate provides the resolution algebra, compatibility
//! graphs, two search-space representations with an incrementally maintained
//! cost function, several local search metaheuristics, a cardinality
//! reduction procedure, constructive initializers, and a branch-and-bound
//! exact solver for small instances.

pub mod error;
pub mod exact;
pub mod graph;
pub mod init;
pub mod io;
pub mod model;
pub mod neighborhood;
pub mod reduce;
pub mod search;
pub mod seed;
pub mod solution;

pub use error::{Error, Result};
pub use model::{Genotype, Haplotype, Instance};
pub use search::{Algorithm, SearchParams, SearchReport};
pub use solution::{
    CompleteSolution, CostVector, CostWeights, IncompleteSolution, Representation, Solution,
};
