//! Conformal-grid mesh of the immersion: incremental path integration along
//! a spanning tree of grid edges, triangulation, boundary tagging, the
//! finite-difference mean-curvature probe, boundary line fitting, and
//! OBJ/PLY export.

use crate::error::{Error, Result};
use crate::geometry::OrientedLine;
use crate::linalg::{sym3_eigen, Vec3};
use crate::solver::RootClass;
use crate::surface::evaluator::WeierstrassEvaluator;
use crate::surface::quad::integrate_segment;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use std::io::Write as _;

/// Rectangle in the upper half-plane (y0 ≥ 0).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window { x0: -2.0, x1: 3.0, y0: 0.0, y1: 2.5 }
    }
}

/// One mesh vertex: domain point, position, unit normal.
#[derive(Debug, Clone, Copy)]
pub struct MeshVertex {
    pub z: Complex64,
    pub x: Vec3,
    pub normal: Vec3,
}

/// Triangulated immersion of the grid with tagged boundary rows.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub vertices: Vec<MeshVertex>,
    pub faces: Vec<[u32; 3]>,
    /// Vertex indices on the real-axis segments (−∞,0), (0,1), (1,∞), each
    /// ordered by increasing Re z.
    pub boundary: [Vec<u32>; 3],
    /// Accumulated quadrature error estimate over the spanning tree.
    pub integration_error: f64,
    /// Grid spacing.
    pub h: f64,
    pub(crate) index: HashMap<(i64, i64), u32>,
}

const PER_EDGE_TOL: f64 = 1e-11;

/// Conformal-grid skeleton shared by the Euclidean and hyperbolic meshes:
/// grid points, a breadth-first spanning tree rooted near the basepoint,
/// cell triangulation, and tagged boundary rows.
#[derive(Debug, Clone)]
pub(crate) struct GridWalk {
    pub nodes: Vec<Complex64>,
    pub index: HashMap<(i64, i64), u32>,
    /// Spanning-tree edges (parent, child) in breadth-first order, so a
    /// parent's value is always available before its children are visited.
    pub tree: Vec<(u32, u32)>,
    pub faces: Vec<[u32; 3]>,
    pub boundary: [Vec<u32>; 3],
    pub h: f64,
}

/// Lay out the grid of `resolution` cells across the window, excluding
/// disks of radius `r_excl` around the given points, and walk it
/// breadth-first from the included vertex nearest the basepoint.
pub(crate) fn build_grid_walk(
    resolution: usize,
    window: &Window,
    exclusions: &[Complex64],
    r_excl: f64,
) -> Result<GridWalk> {
    if resolution < 2 {
        return Err(Error::invalid("mesh resolution must be at least 2"));
    }
    if !(window.x1 > window.x0) || !(window.y1 > window.y0) || window.y0 < 0.0 {
        return Err(Error::invalid(
            "window must satisfy x0 < x1, 0 <= y0 < y1 (upper half-plane)",
        ));
    }
    let base = super::evaluator::BASEPOINT;
    if base.re < window.x0 || base.re > window.x1 || base.im < window.y0 || base.im > window.y1 {
        return Err(Error::invalid("window must contain the basepoint i"));
    }
    let h = (window.x1 - window.x0) / (resolution as f64);
    let rows = ((window.y1 - window.y0) / h).round().max(1.0) as i64;
    let cols = resolution as i64;

    let grid_z = |i: i64, j: i64| {
        Complex64::new(window.x0 + (i as f64) * h, window.y0 + (j as f64) * h)
    };
    let included = |i: i64, j: i64| -> bool {
        if i < 0 || i > cols || j < 0 || j > rows {
            return false;
        }
        let z = grid_z(i, j);
        exclusions.iter().all(|w| (z - w).norm() >= r_excl)
    };

    // Root of the spanning tree: the included grid vertex nearest the
    // basepoint.
    let mut root = None;
    let mut best = f64::INFINITY;
    for j in 0..=rows {
        for i in 0..=cols {
            if included(i, j) {
                let d = (grid_z(i, j) - base).norm();
                if d < best {
                    best = d;
                    root = Some((i, j));
                }
            }
        }
    }
    let root = root.ok_or_else(|| Error::invalid("window contains no admissible grid vertices"))?;

    let mut index: HashMap<(i64, i64), u32> = HashMap::new();
    let mut nodes: Vec<Complex64> = Vec::new();
    let mut tree: Vec<(u32, u32)> = Vec::new();
    index.insert(root, 0);
    nodes.push(grid_z(root.0, root.1));
    let mut queue: VecDeque<(i64, i64)> = VecDeque::new();
    queue.push_back(root);
    while let Some((i, j)) = queue.pop_front() {
        let from_id = index[&(i, j)];
        for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
            let nb = (i + di, j + dj);
            if !included(nb.0, nb.1) || index.contains_key(&nb) {
                continue;
            }
            let id = nodes.len() as u32;
            index.insert(nb, id);
            nodes.push(grid_z(nb.0, nb.1));
            tree.push((from_id, id));
            queue.push_back(nb);
        }
    }

    // Faces per grid cell; cells with three reachable corners contribute a
    // single triangle along the exclusion rim. All windings are
    // counterclockwise in the z-chart.
    let mut faces: Vec<[u32; 3]> = Vec::new();
    for j in 0..rows {
        for i in 0..cols {
            let v00 = index.get(&(i, j)).copied();
            let v10 = index.get(&(i + 1, j)).copied();
            let v11 = index.get(&(i + 1, j + 1)).copied();
            let v01 = index.get(&(i, j + 1)).copied();
            match (v00, v10, v11, v01) {
                (Some(a), Some(b), Some(c), Some(d)) => {
                    faces.push([a, b, c]);
                    faces.push([a, c, d]);
                }
                (Some(a), Some(b), Some(c), None) => faces.push([a, b, c]),
                (Some(a), Some(b), None, Some(d)) => faces.push([a, b, d]),
                (Some(a), None, Some(c), Some(d)) => faces.push([a, c, d]),
                (None, Some(b), Some(c), Some(d)) => faces.push([b, c, d]),
                _ => {}
            }
        }
    }

    // Boundary tags: only meaningful when the window sits on the real axis.
    let mut boundary: [Vec<u32>; 3] = Default::default();
    if window.y0.abs() < 1e-14 {
        for i in 0..=cols {
            if let Some(&id) = index.get(&(i, 0)) {
                let x = nodes[id as usize].re;
                let seg = if x < 0.0 {
                    0
                } else if x < 1.0 {
                    1
                } else {
                    2
                };
                boundary[seg].push(id);
            }
        }
    }

    Ok(GridWalk { nodes, index, tree, faces, boundary, h })
}

/// Build the mesh: vertices on the conformal grid of `resolution` cells
/// across the window, excluding disks of radius `r_excl` around the
/// punctures (and around a double root of φ, if any), positions integrated
/// edge-by-edge along a breadth-first spanning tree rooted near the
/// basepoint.
pub fn generate_mesh(
    ev: &WeierstrassEvaluator,
    resolution: usize,
    window: &Window,
    r_excl: f64,
) -> Result<SurfaceMesh> {
    let mut exclusions = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    if ev.phi.class == RootClass::RealDouble {
        exclusions.push(ev.phi.roots.0);
    }
    let walk = build_grid_walk(resolution, window, &exclusions, r_excl)?;

    let mut vertices: Vec<MeshVertex> = Vec::with_capacity(walk.nodes.len());
    let mut integration_error = 0.0f64;
    let root_z = walk.nodes[0];
    vertices.push(MeshVertex {
        z: root_z,
        x: ev.immerse(root_z)?,
        normal: ev.gauss_map(root_z)?,
    });
    for &(from, to) in &walk.tree {
        let from_z = walk.nodes[from as usize];
        let to_z = walk.nodes[to as usize];
        let quad = integrate_segment(&|w| ev.integrand(w), from_z, to_z, PER_EDGE_TOL)?;
        integration_error += quad.error;
        let to_x = vertices[from as usize].x
            + Vec3::new(quad.value[0].re, quad.value[1].re, quad.value[2].re);
        debug_assert_eq!(vertices.len(), to as usize);
        vertices.push(MeshVertex { z: to_z, x: to_x, normal: ev.gauss_map(to_z)? });
    }

    Ok(SurfaceMesh {
        vertices,
        faces: walk.faces,
        boundary: walk.boundary,
        integration_error,
        h: walk.h,
        index: walk.index,
    })
}

/// Outcome of the interior minimality probe.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvatureProbe {
    pub count: usize,
    pub mean_abs: f64,
    pub max_abs: f64,
}

/// Finite-difference mean curvature from mesh positions at probe vertices:
/// H = ⟨x_uu + x_vv, N⟩ / (|x_u|² + |x_v|²) with fourth-order central
/// differences on the conformal grid and the stored analytic normals, so
/// the stencil truncation decays like h⁴ under refinement. Probes require
/// the full five-point axis stencils plus the inner diagonals, and stand
/// clear of the punctures, the roots of φ, and the slow point e^{iπ/3}.
pub fn fd_mean_curvature(ev: &WeierstrassEvaluator, mesh: &SurfaceMesh) -> Result<CurvatureProbe> {
    let corner = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    let roots = [ev.phi.roots.0, ev.phi.roots.1];
    let mut count = 0usize;
    let mut sum = 0.0f64;
    let mut max = 0.0f64;
    let at = |key: &(i64, i64)| mesh.index.get(key).map(|&id| mesh.vertices[id as usize]);
    for (&(i, j), &id) in &mesh.index {
        let v = mesh.vertices[id as usize];
        let z = v.z;
        if z.norm().min((z - 1.0).norm()) < 0.4 {
            continue;
        }
        if roots.iter().any(|r| (z - r).norm() < 0.3) {
            continue;
        }
        if (z - corner).norm() < 0.05 {
            continue;
        }
        let stencil: Option<Vec<MeshVertex>> = [
            (i - 2, j),
            (i - 1, j),
            (i + 1, j),
            (i + 2, j),
            (i, j - 2),
            (i, j - 1),
            (i, j + 1),
            (i, j + 2),
        ]
        .iter()
        .map(at)
        .collect();
        let Some(s) = stencil else { continue };
        // Also require the inner diagonal neighbours so probes sit
        // strictly inside the meshed region.
        if [(i - 1, j - 1), (i + 1, j - 1), (i - 1, j + 1), (i + 1, j + 1)]
            .iter()
            .any(|k| at(k).is_none())
        {
            continue;
        }
        let h = mesh.h;
        let c = v.x;
        // f'' ≈ (−f₋₂ + 16f₋₁ − 30f₀ + 16f₁ − f₂)/(12h²), error O(h⁴);
        // f'  ≈ (f₋₂ − 8f₋₁ + 8f₁ − f₂)/(12h), error O(h⁴).
        let d2 = |m2: Vec3, m1: Vec3, p1: Vec3, p2: Vec3| {
            (m1 * 16.0 + p1 * 16.0 - m2 - p2 - c * 30.0) * (1.0 / (12.0 * h * h))
        };
        let d1 = |m2: Vec3, m1: Vec3, p1: Vec3, p2: Vec3| {
            (m2 - m1 * 8.0 + p1 * 8.0 - p2) * (1.0 / (12.0 * h))
        };
        let lap = d2(s[0].x, s[1].x, s[2].x, s[3].x) + d2(s[4].x, s[5].x, s[6].x, s[7].x);
        let xu = d1(s[0].x, s[1].x, s[2].x, s[3].x);
        let xv = d1(s[4].x, s[5].x, s[6].x, s[7].x);
        let denom = xu.dot(xu) + xv.dot(xv);
        if denom <= 0.0 {
            continue;
        }
        let h_fd = lap.dot(v.normal) / denom;
        count += 1;
        sum += h_fd.abs();
        max = max.max(h_fd.abs());
    }
    if count == 0 {
        return Err(Error::numerical("no admissible probe vertices for the curvature check"));
    }
    Ok(CurvatureProbe { count, mean_abs: sum / (count as f64), max_abs: max })
}

/// Principal-component line fit of one boundary segment's vertices.
/// Returns the oriented line (direction following increasing Re z) and the
/// transverse-to-longitudinal singular value ratio.
fn fit_segment(mesh: &SurfaceMesh, seg: usize) -> Result<(OrientedLine, f64)> {
    let ids = &mesh.boundary[seg];
    if ids.len() < 8 {
        return Err(Error::numerical(format!(
            "boundary segment {} has too few vertices ({}) for a line fit",
            seg + 1,
            ids.len()
        )));
    }
    let pts: Vec<Vec3> = ids.iter().map(|&id| mesh.vertices[id as usize].x).collect();
    let n = pts.len() as f64;
    let centroid = pts.iter().fold(Vec3::ZERO, |a, p| a + *p) * (1.0 / n);
    let mut cov = [[0.0f64; 3]; 3];
    for p in &pts {
        let d = *p - centroid;
        let d = [d.x, d.y, d.z];
        for r in 0..3 {
            for c in 0..3 {
                cov[r][c] += d[r] * d[c];
            }
        }
    }
    let (eigenvalues, eigenvectors) = sym3_eigen(cov);
    // Ascending eigenvalues: the largest axis is the line direction; the
    // middle one bounds the worst transverse spread.
    let ratio = (eigenvalues[1].max(0.0) / eigenvalues[2].max(1e-300)).sqrt();
    let mut dir = Vec3::new(eigenvectors[0][2], eigenvectors[1][2], eigenvectors[2][2]);
    // Orient along increasing Re z.
    let span = *pts.last().unwrap() - pts[0];
    if dir.dot(span) < 0.0 {
        dir = -dir;
    }
    Ok((OrientedLine::new(centroid, dir)?, ratio))
}

/// Fit all three boundary lines; the k-th line is the image of the k-th
/// real-axis segment, oriented by increasing Re z.
pub fn fit_boundary_lines(mesh: &SurfaceMesh) -> Result<([OrientedLine; 3], [f64; 3])> {
    let (l1, r1) = fit_segment(mesh, 0)?;
    let (l2, r2) = fit_segment(mesh, 1)?;
    let (l3, r3) = fit_segment(mesh, 2)?;
    Ok(([l1, l2, l3], [r1, r2, r3]))
}

/// Write Wavefront OBJ with unit normals; boundary segments are recorded as
/// `# seg k: i j ...` comment lines (1-based vertex indices).
pub fn write_obj(mesh: &SurfaceMesh, path: &std::path::Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# {} vertices, {} faces", mesh.vertices.len(), mesh.faces.len())?;
    for v in &mesh.vertices {
        writeln!(out, "v {:.9} {:.9} {:.9}", v.x.x, v.x.y, v.x.z)?;
    }
    for v in &mesh.vertices {
        writeln!(out, "vn {:.9} {:.9} {:.9}", v.normal.x, v.normal.y, v.normal.z)?;
    }
    for f in &mesh.faces {
        writeln!(
            out,
            "f {}//{} {}//{} {}//{}",
            f[0] + 1,
            f[0] + 1,
            f[1] + 1,
            f[1] + 1,
            f[2] + 1,
            f[2] + 1
        )?;
    }
    for (k, ids) in mesh.boundary.iter().enumerate() {
        for chunk in ids.chunks(32) {
            let list: Vec<String> = chunk.iter().map(|id| (id + 1).to_string()).collect();
            writeln!(out, "# seg {}: {}", k + 1, list.join(" "))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Write binary little-endian PLY (positions + normals, triangle faces).
pub fn write_ply(mesh: &SurfaceMesh, path: &std::path::Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(
        out,
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\n\
         property float x\nproperty float y\nproperty float z\n\
         property float nx\nproperty float ny\nproperty float nz\n\
         element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.faces.len()
    )?;
    for v in &mesh.vertices {
        for val in [v.x.x, v.x.y, v.x.z, v.normal.x, v.normal.y, v.normal.z] {
            out.write_all(&(val as f32).to_le_bytes())?;
        }
    }
    for f in &mesh.faces {
        out.write_all(&[3u8])?;
        for idx in f {
            out.write_all(&(*idx as i32).to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}
