//! The hypergeometric form on the cycle and its numerical integration.

mod form;
mod integrals;
mod quadrature;

pub use form::{
    eval_form, fd_jacobian, tau_coordinates, tau_pointwise_check, tau_transform, FormSpec, PointwiseCheck,
    TPoint, TauTransform,
};
pub use integrals::{
    asymptotic_closed_form, asymptotic_coefficient, beta_check, dirichlet_simplex, euler_beta, gamma_ratio,
    integrate_zonal, pairings_from_weight, z_independence, AsymptoticCheck, BetaCheck, QuadratureSpec,
    ZonalIntegrand, ZonalResult,
};
pub use quadrature::{
    gauss_jacobi, quadrature_registry, tanh_sinh_rule, GaussJacobiTensor, Interval, MonteCarlo, NestedIntegrand,
    Node, QuadConfig, QuadEstimate, QuadratureScheme, Rule1d, TanhSinh,
};

use thiserror::Error;

use crate::registry::UnknownStrategy;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperError {
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("point lies outside the cycle")]
    OutsideDelta,
    #[error("coordinates in one row coincide")]
    CoincidentPoints,
    #[error("row {row} of tau sums to {sum}, not 1")]
    RowSum { row: usize, sum: f64 },
    #[error("weights are not the affine-killed choice")]
    NotAffineKilled,
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("Gamma pole at argument {argument}")]
    GammaPole { argument: f64 },
    #[error("quadrature did not converge: value {fine}, refinement reference {coarse:?}, error {error:e}")]
    Nonconvergence { fine: f64, coarse: Option<f64>, error: f64 },
    #[error(transparent)]
    Strategy(#[from] UnknownStrategy),
}
