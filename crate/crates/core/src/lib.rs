//! Fair division of indivisible items under connectivity constraints.
//!
//! Items are the vertices of an undirected graph and every agent must receive a connected
//! bundle. The crate decides and constructs proportional, complete envy-free and maximin
//! share allocations: polynomial-time algorithms on paths, stars and trees, and an
//! exhaustive oracle for everything else.

pub mod cli;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matching;
pub mod mms_tree;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{classify, GraphClass, ItemGraph, RootedTreeView};
pub use model::{Allocation, AgentSpec, AgentTypePartition, Instance, VertexSet};
pub use oracle::OracleBudget;
pub use rational::Rational;
pub use report::{Method, Problem, SolveReport};
