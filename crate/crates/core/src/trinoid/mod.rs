//! Three-ended constant-mean-curvature-one surfaces in hyperbolic
//! three-space (trinoids), built as cousins of the minimal surfaces bounded
//! by three lines.
//!
//! The pipeline: growth data (μ0, μ1, μ∞) → admissibility and degeneracy
//! checks → closed-form period solutions → a holomorphic frame integrated
//! from the Weierstrass data → points in the half-space and ball models →
//! meshes with boundary-plane diagnostics and end-embeddedness probes.

pub mod embed;
pub mod frame;
pub mod gauss;
pub mod mesh;
pub mod spec;

pub use embed::{
    embeddedness_check, exact_profile, growth_readoff, schwarzian_profile, EndEmbeddedness,
};
pub use mesh::{
    double_mesh, end_probe_points, fit_boundary_planes, plane_distance, reflect_point,
    trinoid_diagnostics, trinoid_mesh, write_trinoid_obj, write_trinoid_ply, ModelKind,
    PlaneFit, PlaneKind, TrinoidDiagnostics, TrinoidMesh, TrinoidVertex,
};
pub use frame::{
    ball_point, continue_frame, cousin_point, halfspace_matrix, hyperbolic_gauss_numeric,
    integrate_bryant, BryantFrame, HyperbolicPoint, Mat2, Mobius,
};
pub use gauss::{
    boundary_distinctness, chordal_distance, gauss_at_ends, hyperbolic_gauss,
    DistinctnessReport, DISTINCT_TOL,
};
pub use spec::{
    closed_forms, control_evaluator, degeneracy_quartic, growth_check, sign_product,
    trinoid_evaluator, trinoid_pqr, trinoid_quartics, trinoid_rhs, ClosedForms,
    GrowthCheck, TrinoidEnds, TrinoidSolution, TrinoidSpec,
};
