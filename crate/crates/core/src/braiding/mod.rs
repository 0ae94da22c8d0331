//! Tensor products, the comultiplication action and the R-matrix.

mod rmatrix;
mod tensor;
mod vector;

pub use rmatrix::{
    build_dual_r, build_r, compute_d, compute_d_listing, default_depth, drops_up_to, string_pair_checks,
    triangularity_registry, StringPairCheck,
    BlockPart, BraidOperator, Intertwiner, RBlock, RaiseFirst, RaiseSecond, Triangularity, DEFAULT_TRIANGULARITY,
};
pub use tensor::{
    coproduct_act, coproduct_act_with, is_singular, is_zero_mod_kernel, tensor_dual_image, TensorFactor,
    TensorVector,
};
pub use vector::{
    lr_tensor_vector, permutation_matrix, pr_projector_decomposition, vector_rep_r, yang_baxter_braid,
    yang_baxter_qybe, PrSpectrum,
};

use thiserror::Error;

use crate::exactq::ExactError;
use crate::registry::UnknownStrategy;
use crate::repcore::{Drop, RepError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BraidError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Convention(#[from] UnknownStrategy),
    #[error("R-matrix block at drop {drop:?} could not be solved: {source}")]
    Solve { drop: Drop, source: ExactError },
    #[error("tensor factors do not match")]
    FactorMismatch,
    #[error("slot {slot} needs two adjacent factors, vector has {factors}")]
    SlotOutOfRange { slot: usize, factors: usize },
    #[error("factors at slot {slot} do not carry the operator's highest weights")]
    WeightMismatch { slot: usize },
    #[error("factors at slot {slot} mix dual and non-dual modules")]
    MixedDuality { slot: usize },
    #[error("weight drop of height {height} exceeds the depth bound {depth}")]
    DepthExceeded { height: u32, depth: u32 },
    #[error("word uses a root outside the operator's root set")]
    LetterOutsideRoots,
    #[error("dual vector at drop {drop:?} does not vanish on the kernel of the form")]
    NotInRestrictedDual { drop: Drop },
    #[error("coefficient {0} is not a Laurent polynomial")]
    NonPolynomial(String),
    #[error("coefficient l_{index} = {value} is negative")]
    NegativeCoefficient { index: usize, value: i64 },
    #[error("value depends on the listing order")]
    ListingDependent,
    #[error("invalid Young diagram: {0}")]
    InvalidDiagram(String),
    #[error("dimension error: {0}")]
    Dimension(String),
}
