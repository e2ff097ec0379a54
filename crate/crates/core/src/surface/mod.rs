//! The minimal-surface pipeline: pointwise Weierstrass evaluation, path
//! integration of the immersion, and mesh generation with boundary tagging.

mod evaluator;
mod mesh;
pub mod quad;

pub use evaluator::{
    EndAsymptotics, EndIndex, SpinorPoint, WeierstrassEvaluator, BASEPOINT, PATH_CLEARANCE,
};
pub use mesh::{
    fd_mean_curvature, fit_boundary_lines, generate_mesh, write_obj, write_ply, CurvatureProbe,
    MeshVertex, SurfaceMesh, Window,
};
pub(crate) use mesh::build_grid_walk;
