//! Minimal disks in Euclidean space bounded by three oriented lines, and the
//! constant-mean-curvature-1 "cousin" surfaces they generate in hyperbolic
//! space.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] — complex gamma, Gauss hypergeometric series, branch powers
//!   on the closed upper half-plane, local solution bases of the relevant
//!   hypergeometric equation and the connection matrices between them.
//! * [`geometry`] — oriented lines, signed distances, the invariants of a
//!   triple of pairwise skew lines and the reconstruction of a representative
//!   triple from its invariants.
//! * [`solver`] — the Hopf quadratic, the sign ε, the three-quadric period
//!   system in (p, q, r), its scan-and-bisect solver and the normalisation of
//!   the spinor scale factors (λ, μ).
//! * [`surface`] — Weierstrass evaluation (spinors, Gauss map, fundamental
//!   forms), adaptive Gauss–Kronrod path integration, grid meshing with
//!   boundary-line fitting, end-parameter recovery and OBJ/PLY export.
//! * [`trinoid`] — hyperbolic three-ended surfaces: growth data, closed-form
//!   period solutions, the holomorphic frame ODE, half-space/ball models,
//!   asymptotic boundary points, end-embeddedness tests and mesh export.
//! * [`cli`] — configuration files, verification reports and the command
//!   entry points used by the `threelines` binary.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod solver;
pub mod surface;
pub mod specfun;
pub mod trinoid;

pub use error::{Error, Result};
