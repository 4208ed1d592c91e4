//! Iterative LP rounding for k-edge-connected spanning subgraphs and
//! multigraphs, with exact rational LPs and structural certification.

pub mod certification;
pub mod error;
pub mod graph;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod requirement;
pub mod rounding;
pub mod separation;

pub use error::{Error, Result};
pub use graph::{CapacityVector, Edge, Multigraph, VertexSet};
pub use rational::Rational;
pub use requirement::{DegreeState, PairCheck, Requirement, SetFunction};
pub use rounding::{IterationObserver, NoObserver, Procedure, RoundingOptions, RoundingTrace, Solution, SolutionMode};
pub use separation::{FractionalSolution, SeparationVerdict};
pub use certification::{LaminarBasis, UncrossWitness, VerifyReport};
pub use instance::Instance;
