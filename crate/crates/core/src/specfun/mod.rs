//! Special functions: complex gamma, the Gauss hypergeometric series, branch
//! powers on the closed upper half-plane, local bases of the underlying
//! second-order ODE and the connection matrices that continue the
//! distinguished solution pair across charts.

mod basis;
mod connection;
mod gamma;
mod series;
mod sigma;

pub use basis::{basis_at, classify_region, BasisEval, EvalRegion, ExponentSet};
pub use connection::{connection_matrices, ConnectionMatrices};
pub use gamma::{gamma, gamma_real};
pub use series::{
    branch_pow_1mz, branch_pow_z, branch_pow_zm1, hyp2f1, upper_half_arg, SeriesSum,
};
pub use sigma::{sigma_global, sigma_in_region, wronskian_reference, SigmaEval};
