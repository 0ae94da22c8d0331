//! Diagram combinatorics and the quantum-group encoding of the distinguished cycle.

mod diagram;
mod encode;

pub use diagram::{
    arrow_target, coxeter_length, diagram_length, diagram_to_permutation, ArrowDirection, Diagram, Permutation,
};
pub use encode::{
    apply_braid_word, braid_eigen_check, chain_vertex_singular, cycle_braid_operator, decomposition_dims,
    encode_chain_vertex, encode_cycle, path_count, singular_check, CycleForm, CycleVector, WordOrder,
};

use thiserror::Error;

use crate::braiding::BraidError;
use crate::repcore::RepError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CycleError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("point ({i},{j}) is not a source of an arrow for n = {n}")]
    PointOutOfRange { i: usize, j: usize, n: usize },
    #[error("{0:?} is not a permutation")]
    NotBijection(Vec<usize>),
    #[error("braiding with the factor at the origin is not allowed")]
    ForbiddenSlot,
    #[error("PR at slot {slot} does not act by a scalar; image: {residual}")]
    NotEigenvector { slot: usize, residual: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
