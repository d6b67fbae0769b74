//! Discrete vector calculus on finite simple graphs.
//!
//! Everything is expressed in the coordinates fixed by the [`TangentGraph`]:
//! a vector field is one real coefficient per directed edge, a scalar field one
//! real value per vertex. On top of those coordinates the crate provides the
//! gradient, divergence, Laplacian and first-order operators, boundary integral
//! identities, Green's functions, circulation constraints over every simple
//! cycle, the (non-local) curl projector, the Helmholtz–Hodge decomposition and
//! a Runge–Kutta integrator for Maxwell's equations on a graph.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, randomized
//! verification suites and the command-line tool live in the `graphcalc` crate.
#![no_std]
#![deny(rust_2018_idioms)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod cycles;
pub mod field;
pub mod graph;
pub mod hodge;
pub mod maxwell;
pub mod numerics;
pub mod operators;
pub mod theorems;

#[cfg(test)]
pub(crate) mod fixtures;

pub use cycles::{circulation_system, simple_cycles, CirculationSystem, CycleSet, Walk};
pub use error::Error;
pub use field::{ScalarField, VectorField};
pub use graph::{BoundarySpec, DirectedEdge, Graph, SubgraphSpec, TangentGraph, VertexId};
pub use hodge::{DimensionReport, ExactSequenceReport, Hodge, HodgeDecomposition, SubspaceBasis, SubspaceRole};
pub use maxwell::{ConstraintReport, EMState, Sources, Trajectory};
pub use numerics::{DenseMatrix, RankPolicy};
pub use operators::{Calculus, OperatorMatrix, OperatorRole};
pub use theorems::{IdentityReport, Side};

pub type Result<T> = core::result::Result<T, Error>;
