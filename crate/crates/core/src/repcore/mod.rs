//! Root data, weights, Verma modules on free f-word bases, generator actions
//! and the contravariant form.

mod form;
mod irrep;
mod module;
mod weight;

use thiserror::Error;

pub use form::{
    content_of, contravariant_form, dual_image, equal_in_L, gram_matrix, gram_rank, gram_rank_table, words_of_weight,
    GramRankRow, ShapovalovForm,
};
pub use irrep::{add_root, sub_root, DualIrrep, Drop, IrrepBlock, IrrepSpace, WeightModule};
pub use module::{act, act_e, act_f, act_k, act_on_dual, weight_of, FWord, Generator, ModuleVector};
pub use weight::{parse_rational, RootData, Weight};

use crate::exactq::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("rank n = {0} is not supported (need n >= 1)")]
    InvalidRank(usize),
    #[error("root index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("operation needs a non-dual vector")]
    DualInput,
    #[error("operation needs a dual vector")]
    NonDualInput,
    #[error("vectors have different highest weights")]
    HighestWeightMismatch,
    #[error("cannot combine dual and non-dual vectors")]
    DualMismatch,
    #[error("word {0} does not have the requested weight")]
    WrongWeight(FWord),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Exact(ExactError),
}
