//! Hyperbolic mesh of the cousin surface: frame integration over the grid
//! spanning tree, half-space and ball coordinates, boundary-plane fits with
//! reflection doubling, end probes, diagnostics, and export.
//!
//! The three boundary arcs are planar curvature lines; each lies in a
//! totally geodesic plane, which in the half-space model is either a
//! hemisphere centered on the ideal boundary or a vertical Euclidean
//! plane. For closing period data all three planes coincide and one
//! reflection doubles the fundamental piece into the full surface.

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::solver::RootClass;
use crate::surface::quad::plan_path;
use crate::surface::{
    build_grid_walk, EndIndex, WeierstrassEvaluator, Window, BASEPOINT, PATH_CLEARANCE,
};
use crate::trinoid::embed::{embeddedness_check, growth_readoff};
use crate::trinoid::frame::{
    ball_point, continue_frame, cousin_point, hyperbolic_gauss_numeric, integrate_bryant,
    BryantFrame, HyperbolicPoint, Mat2,
};
use crate::trinoid::gauss::boundary_distinctness;
use crate::trinoid::spec::{growth_check, TrinoidSpec};
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write as _;

/// One vertex of the hyperbolic mesh in both models.
#[derive(Debug, Clone, Copy)]
pub struct TrinoidVertex {
    pub z: Complex64,
    pub point: HyperbolicPoint,
    pub ball: Vec3,
}

/// Triangulated cousin surface with tagged boundary rows.
#[derive(Debug, Clone)]
pub struct TrinoidMesh {
    pub vertices: Vec<TrinoidVertex>,
    pub faces: Vec<[u32; 3]>,
    /// Vertex indices on the real-axis segments (−∞,0), (0,1), (1,∞).
    pub boundary: [Vec<u32>; 3],
    /// max |det F − 1| over all vertex frames.
    pub det_drift: f64,
    pub h: f64,
}

/// Integrate the frame over the grid spanning tree and convert every
/// vertex to half-space and ball coordinates.
pub fn trinoid_mesh(
    ev: &WeierstrassEvaluator,
    resolution: usize,
    window: &Window,
    r_excl: f64,
) -> Result<TrinoidMesh> {
    let mut exclusions = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    if ev.phi().class == RootClass::RealDouble {
        exclusions.push(ev.phi().roots.0);
    }
    let walk = build_grid_walk(resolution, window, &exclusions, r_excl)?;

    let mut frames: Vec<Mat2> = Vec::with_capacity(walk.nodes.len());
    let root_path = plan_path(BASEPOINT, walk.nodes[0], PATH_CLEARANCE)?;
    frames.push(integrate_bryant(ev, &root_path)?.f);
    for &(from, to) in &walk.tree {
        debug_assert_eq!(frames.len(), to as usize);
        let parent = BryantFrame { f: frames[from as usize], z: walk.nodes[from as usize] };
        frames.push(continue_frame(ev, &parent, walk.nodes[to as usize])?.f);
    }

    let mut det_drift = 0.0f64;
    let mut vertices = Vec::with_capacity(walk.nodes.len());
    for (&z, f) in walk.nodes.iter().zip(&frames) {
        let frame = BryantFrame { f: *f, z };
        det_drift = det_drift.max(frame.det_drift());
        let point = cousin_point(&frame)?;
        vertices.push(TrinoidVertex { z, point, ball: ball_point(&point) });
    }
    Ok(TrinoidMesh {
        vertices,
        faces: walk.faces,
        boundary: walk.boundary,
        det_drift,
        h: walk.h,
    })
}

/// A totally geodesic plane of the half-space model.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum PlaneKind {
    /// Hemisphere |y − (c, 0)| = R centered on the ideal boundary.
    Hemisphere { center: (f64, f64), radius: f64 },
    /// Vertical plane over the boundary line through `point` along
    /// `direction` (unit complex).
    Vertical { point: (f64, f64), direction: (f64, f64) },
}

/// A fitted plane with its worst hyperbolic-sine distance over the points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlaneFit {
    pub kind: PlaneKind,
    pub residual: f64,
}

fn hemisphere_fit(pts: &[(Complex64, f64)]) -> Option<PlaneFit> {
    // Center the horizontal coordinates for conditioning.
    let n = pts.len() as f64;
    let mean = pts.iter().fold(Complex64::new(0.0, 0.0), |a, p| a + p.0) / n;
    // Least squares for |w − c|² + y3² = R², linear in (c1, c2, d) with
    // d = R² − |c|²: rows [2x, 2y, 1] · u = |w|² + y3².
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (w, y3) in pts {
        let d = w - mean;
        let row = [2.0 * d.re, 2.0 * d.im, 1.0];
        let s = d.norm_sqr() + y3 * y3;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * s;
        }
    }
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-10 {
        return None;
    }
    let solve = |k: usize| {
        let mut a = m;
        for (i, row) in a.iter_mut().enumerate() {
            row[k] = rhs[i];
        }
        (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
            / det
    };
    let (c1, c2, d) = (solve(0), solve(1), solve(2));
    let r2 = d + c1 * c1 + c2 * c2;
    if r2 <= 1e-12 {
        return None;
    }
    let radius = r2.sqrt();
    let center = mean + Complex64::new(c1, c2);
    let mut residual = 0.0f64;
    for (w, y3) in pts {
        let rho2 = (w - center).norm_sqr() + y3 * y3;
        let sinh_d = (rho2 - r2).abs() / (2.0 * radius * y3);
        residual = residual.max(sinh_d.asinh());
    }
    Some(PlaneFit {
        kind: PlaneKind::Hemisphere { center: (center.re, center.im), radius },
        residual,
    })
}

fn vertical_fit(pts: &[(Complex64, f64)]) -> PlaneFit {
    let n = pts.len() as f64;
    let mean = pts.iter().fold(Complex64::new(0.0, 0.0), |a, p| a + p.0) / n;
    let (mut sxx, mut sxy, mut syy) = (0.0f64, 0.0f64, 0.0f64);
    for (w, _) in pts {
        let d = w - mean;
        sxx += d.re * d.re;
        sxy += d.re * d.im;
        syy += d.im * d.im;
    }
    // Principal axis of the 2×2 covariance.
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let mut dir = Complex64::from_polar(1.0, theta);
    // Deterministic orientation for comparisons.
    if dir.re < 0.0 || (dir.re == 0.0 && dir.im < 0.0) {
        dir = -dir;
    }
    let mut residual = 0.0f64;
    for (w, y3) in pts {
        let offset = ((w - mean) * dir.conj()).im.abs();
        residual = residual.max((offset / y3).asinh());
    }
    PlaneFit {
        kind: PlaneKind::Vertical { point: (mean.re, mean.im), direction: (dir.re, dir.im) },
        residual,
    }
}

fn fit_plane(pts: &[(Complex64, f64)]) -> Result<PlaneFit> {
    if pts.len() < 8 {
        return Err(Error::numerical(format!(
            "boundary segment has too few vertices ({}) for a plane fit",
            pts.len()
        )));
    }
    let vertical = vertical_fit(pts);
    Ok(match hemisphere_fit(pts) {
        Some(h) if h.residual <= vertical.residual => h,
        _ => vertical,
    })
}

/// Fit the geodesic plane of each boundary arc.
pub fn fit_boundary_planes(mesh: &TrinoidMesh) -> Result<[PlaneFit; 3]> {
    let collect = |seg: usize| -> Vec<(Complex64, f64)> {
        mesh.boundary[seg]
            .iter()
            .map(|&id| {
                let v = &mesh.vertices[id as usize];
                (v.point.w, v.point.y3)
            })
            .collect()
    };
    Ok([
        fit_plane(&collect(0))?,
        fit_plane(&collect(1))?,
        fit_plane(&collect(2))?,
    ])
}

/// Scale-normalized distance between two fitted planes; zero when they
/// describe the same geodesic plane. Mismatched kinds compare as far.
pub fn plane_distance(a: &PlaneFit, b: &PlaneFit) -> f64 {
    match (&a.kind, &b.kind) {
        (
            PlaneKind::Hemisphere { center: ca, radius: ra },
            PlaneKind::Hemisphere { center: cb, radius: rb },
        ) => {
            let dc = Complex64::new(ca.0 - cb.0, ca.1 - cb.1).norm();
            (dc + (ra - rb).abs()) / (1.0 + 0.5 * (ra + rb))
        }
        (
            PlaneKind::Vertical { point: pa, direction: da },
            PlaneKind::Vertical { point: pb, direction: db },
        ) => {
            let ua = Complex64::new(da.0, da.1);
            let ub = Complex64::new(db.0, db.1);
            let dir = (ua - ub).norm().min((ua + ub).norm());
            let off_a = ((Complex64::new(pb.0 - pa.0, pb.1 - pa.1)) * ua.conj()).im.abs();
            let off_b = ((Complex64::new(pa.0 - pb.0, pa.1 - pb.1)) * ub.conj()).im.abs();
            dir + off_a.max(off_b)
        }
        _ => f64::INFINITY,
    }
}

/// Reflect a half-space point across a geodesic plane (sphere inversion or
/// Euclidean mirror).
pub fn reflect_point(p: &HyperbolicPoint, plane: &PlaneKind) -> HyperbolicPoint {
    match plane {
        PlaneKind::Hemisphere { center, radius } => {
            let c = Complex64::new(center.0, center.1);
            let dw = p.w - c;
            let rho2 = dw.norm_sqr() + p.y3 * p.y3;
            let s = radius * radius / rho2;
            HyperbolicPoint { w: c + s * dw, y3: s * p.y3 }
        }
        PlaneKind::Vertical { point, direction } => {
            let m = Complex64::new(point.0, point.1);
            let u = Complex64::new(direction.0, direction.1);
            HyperbolicPoint { w: m + u * ((p.w - m) / u).conj(), y3: p.y3 }
        }
    }
}

/// Double the fundamental piece by one reflection: the mirrored copy is
/// appended with reversed face orientation. Boundary tags keep pointing at
/// the original piece.
pub fn double_mesh(mesh: &TrinoidMesh, plane: &PlaneKind) -> TrinoidMesh {
    let n = mesh.vertices.len() as u32;
    let mut vertices = mesh.vertices.clone();
    for v in &mesh.vertices {
        let point = reflect_point(&v.point, plane);
        vertices.push(TrinoidVertex { z: v.z.conj(), point, ball: ball_point(&point) });
    }
    let mut faces = mesh.faces.clone();
    for f in &mesh.faces {
        faces.push([f[0] + n, f[2] + n, f[1] + n]);
    }
    TrinoidMesh {
        vertices,
        faces,
        boundary: mesh.boundary.clone(),
        det_drift: mesh.det_drift,
        h: mesh.h,
    }
}

/// Boundary values of the frame-level boundary map at the three punctures.
/// The map extends across each puncture, so its value a local distance r
/// away deviates linearly in r; probing at r and 2r/3 and extrapolating
/// removes the linear term. Values near ∞ are extrapolated in the inverted
/// chart.
pub fn end_probe_points(
    ev: &WeierstrassEvaluator,
    r: f64,
) -> Result<[Complex64; 3]> {
    if !(1.5e-3..=0.5).contains(&r) {
        return Err(Error::invalid(format!(
            "end probe radius {r} outside the supported range [1.5e-3, 0.5]"
        )));
    }
    let probe = |z: Complex64| -> Result<Complex64> {
        let clearance = PATH_CLEARANCE.min(0.4 * r);
        let path = plan_path(BASEPOINT, z, clearance)?;
        let frame = integrate_bryant(ev, &path)?;
        hyperbolic_gauss_numeric(ev, &frame)
    };
    // Local charts: z near 0 and 1, ζ = −1/z near ∞; the probe points sit
    // at local radius r and 2r/3 on the same ray in each chart.
    let pairs = [
        (Complex64::new(0.0, r), Complex64::new(0.0, 2.0 * r / 3.0)),
        (Complex64::new(1.0, r), Complex64::new(1.0, 2.0 * r / 3.0)),
        (Complex64::new(0.0, 1.0 / r), Complex64::new(0.0, 1.5 / r)),
    ];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (k, &(z_far, z_near)) in pairs.iter().enumerate() {
        let v_far = probe(z_far)?;
        let v_near = probe(z_near)?;
        // Eliminate the O(r) term: with radii r and 2r/3 the limit is
        // 3·v(2r/3) − 2·v(r).
        let extrapolate = |a: Complex64, b: Complex64| 3.0 * b - 2.0 * a;
        out[k] = if v_far.norm() > 1.0 || !v_far.is_finite() {
            let inv = |v: Complex64| {
                if v.is_finite() {
                    1.0 / v
                } else {
                    Complex64::new(0.0, 0.0)
                }
            };
            1.0 / extrapolate(inv(v_far), inv(v_near))
        } else {
            extrapolate(v_far, v_near)
        };
    }
    Ok(out)
}

/// Summary report of one trinoid build.
#[derive(Debug, Clone, Serialize)]
pub struct TrinoidDiagnostics {
    pub growths: [f64; 3],
    /// Growths recovered from the quadratic-differential fit at each end.
    pub growth_readoff: [f64; 3],
    pub in_k: bool,
    pub nondegenerate: bool,
    pub umehara_equivalent: bool,
    pub eps: i8,
    pub solution: [f64; 3],
    /// Boundary-map values probed near the punctures, as (re, im).
    pub boundary_points: [(f64, f64); 3],
    pub distinct: [bool; 3],
    pub embedded: [bool; 3],
    pub det_drift: f64,
    pub plane_residual: f64,
    pub plane_coincidence: f64,
}

/// Assemble the diagnostics of a built mesh: growth read-offs, boundary
/// probes, distinctness, embeddedness, and the plane fits.
pub fn trinoid_diagnostics(
    spec: &TrinoidSpec,
    ev: &WeierstrassEvaluator,
    mesh: &TrinoidMesh,
) -> Result<TrinoidDiagnostics> {
    let check = growth_check(spec);
    let mut readoff = [0.0f64; 3];
    for (k, end) in [EndIndex::Zero, EndIndex::One, EndIndex::Infinity]
        .into_iter()
        .enumerate()
    {
        readoff[k] = growth_readoff(ev, end)?;
    }
    let probes = end_probe_points(ev, 2e-3)?;
    let distinct = boundary_distinctness(spec)?;
    let mut embedded = [false; 3];
    for (k, end) in [EndIndex::Zero, EndIndex::One, EndIndex::Infinity]
        .into_iter()
        .enumerate()
    {
        embedded[k] = embeddedness_check(ev, end)?.embedded;
    }
    let fits = fit_boundary_planes(mesh)?;
    let plane_residual = fits.iter().fold(0.0f64, |a, f| a.max(f.residual));
    let plane_coincidence = [
        plane_distance(&fits[0], &fits[1]),
        plane_distance(&fits[0], &fits[2]),
        plane_distance(&fits[1], &fits[2]),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let s = ev.solution();
    Ok(TrinoidDiagnostics {
        growths: spec.growths(),
        growth_readoff: readoff,
        in_k: check.in_k,
        nondegenerate: check.nondegenerate,
        umehara_equivalent: check.umehara_equivalent,
        eps: ev.eps(),
        solution: [s.p, s.q, s.r],
        boundary_points: [
            (probes[0].re, probes[0].im),
            (probes[1].re, probes[1].im),
            (probes[2].re, probes[2].im),
        ],
        distinct: distinct.distinct,
        embedded,
        det_drift: mesh.det_drift,
        plane_residual,
        plane_coincidence,
    })
}

/// Which model's coordinates to export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    HalfSpace,
    Ball,
}

fn model_coords(v: &TrinoidVertex, model: ModelKind) -> [f64; 3] {
    match model {
        ModelKind::HalfSpace => [v.point.w.re, v.point.w.im, v.point.y3],
        ModelKind::Ball => [v.ball.x, v.ball.y, v.ball.z],
    }
}

/// Write a Wavefront OBJ of the mesh in the chosen model; boundary rows are
/// recorded as `# seg k:` comments.
pub fn write_trinoid_obj(
    mesh: &TrinoidMesh,
    model: ModelKind,
    path: &std::path::Path,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let name = match model {
        ModelKind::HalfSpace => "half-space",
        ModelKind::Ball => "ball",
    };
    writeln!(
        out,
        "# {} model, {} vertices, {} faces",
        name,
        mesh.vertices.len(),
        mesh.faces.len()
    )?;
    for v in &mesh.vertices {
        let [x, y, z] = model_coords(v, model);
        writeln!(out, "v {x:.9} {y:.9} {z:.9}")?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    for (k, seg) in mesh.boundary.iter().enumerate() {
        let ids: Vec<String> = seg.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(out, "# seg {}: {}", k + 1, ids.join(" "))?;
    }
    Ok(())
}

/// Write a binary little-endian PLY of the mesh in the chosen model.
pub fn write_trinoid_ply(
    mesh: &TrinoidMesh,
    model: ModelKind,
    path: &std::path::Path,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(
        out,
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\n\
         property float x\nproperty float y\nproperty float z\n\
         element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.faces.len()
    )?;
    for v in &mesh.vertices {
        for c in model_coords(v, model) {
            out.write_all(&(c as f32).to_le_bytes())?;
        }
    }
    for f in &mesh.faces {
        out.write_all(&[3u8])?;
        for &i in f {
            out.write_all(&(i as i32).to_le_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trinoid::frame::Mobius;
    use crate::trinoid::gauss::{chordal_distance, gauss_at_ends, hyperbolic_gauss};
    use crate::trinoid::spec::{control_evaluator, trinoid_evaluator};

    fn spec_06() -> TrinoidSpec {
        TrinoidSpec::new(0.6, 0.6, 0.6).unwrap()
    }

    fn small_mesh(ev: &WeierstrassEvaluator) -> TrinoidMesh {
        trinoid_mesh(ev, 64, &Window::default(), 0.05).unwrap()
    }

    #[test]
    fn symmetric_trinoid_mesh_closes_on_one_plane() {
        let ev = trinoid_evaluator(&spec_06(), false).unwrap();
        let mesh = small_mesh(&ev);
        assert!(mesh.det_drift < 1e-8, "det drift {}", mesh.det_drift);
        for seg in &mesh.boundary {
            assert!(seg.len() >= 8, "boundary row too short: {}", seg.len());
        }
        for v in &mesh.vertices {
            assert!(v.point.y3 > 0.0);
            let norm = (v.ball.x * v.ball.x + v.ball.y * v.ball.y + v.ball.z * v.ball.z).sqrt();
            assert!(norm < 1.0, "ball vertex at norm {norm}");
        }
        let fits = fit_boundary_planes(&mesh).unwrap();
        for f in &fits {
            assert!(f.residual < 1e-5, "plane residual {}", f.residual);
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let d = plane_distance(&fits[a], &fits[b]);
            assert!(d < 1e-4, "planes {a} and {b} differ by {d}: {fits:?}");
        }
    }

    #[test]
    fn control_planes_do_not_coincide() {
        let ev = control_evaluator(&spec_06(), false).unwrap();
        let mesh = small_mesh(&ev);
        let fits = fit_boundary_planes(&mesh).unwrap();
        // The arcs are still planar curvature lines...
        for f in &fits {
            assert!(f.residual < 1e-4, "plane residual {}", f.residual);
        }
        // ...but the planes disagree, so no single reflection closes the
        // surface.
        let worst = [
            plane_distance(&fits[0], &fits[1]),
            plane_distance(&fits[0], &fits[2]),
            plane_distance(&fits[1], &fits[2]),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        assert!(worst > 1e-3, "planes nearly coincide: {worst}");
    }

    #[test]
    fn growth_readoff_matches_the_spec() {
        let spec = spec_06();
        let ev = trinoid_evaluator(&spec, false).unwrap();
        for (k, end) in [EndIndex::Zero, EndIndex::One, EndIndex::Infinity]
            .into_iter()
            .enumerate()
        {
            let g = growth_readoff(&ev, end).unwrap();
            assert!(
                (g - spec.growths()[k]).abs() < 1e-8,
                "end {end:?}: read off growth {g}"
            );
            // The asymptotic-distance fit recovers the same growth at its
            // coarser design accuracy.
            let fit = ev.fit_end_asymptotics(end).unwrap();
            let lift = match end {
                EndIndex::Zero => ev.ends().alpha,
                EndIndex::One => ev.ends().gamma,
                EndIndex::Infinity => ev.ends().beta,
            };
            let mu_hat =
                (1.0 + 2.0 * fit.fitted * lift / std::f64::consts::PI).sqrt();
            assert!(
                (mu_hat - spec.mu()[k]).abs() < 1e-6,
                "end {end:?}: fitted {mu_hat}"
            );
        }
    }

    #[test]
    fn end_probes_approach_the_boundary_map() {
        let ev = trinoid_evaluator(&spec_06(), false).unwrap();
        let phi = ev.phi().clone();
        // Normalization Möbius fitted at interior points.
        let fit_z = [
            Complex64::new(-0.5, 0.6),
            Complex64::new(0.5, 0.9),
            Complex64::new(1.5, 0.6),
        ];
        let mut src = [Complex64::new(0.0, 0.0); 3];
        let mut dst = [Complex64::new(0.0, 0.0); 3];
        for (k, &z) in fit_z.iter().enumerate() {
            let path = plan_path(BASEPOINT, z, PATH_CLEARANCE).unwrap();
            let frame = integrate_bryant(&ev, &path).unwrap();
            src[k] = hyperbolic_gauss(z, &phi);
            dst[k] = hyperbolic_gauss_numeric(&ev, &frame).unwrap();
        }
        let m = Mobius::from_three_points(src, dst).unwrap();
        let targets = gauss_at_ends(&phi).map(|g| m.apply(g));
        let probes = end_probe_points(&ev, 1.5e-3).unwrap();
        for k in 0..3 {
            let d = chordal_distance(probes[k], targets[k]);
            assert!(
                d < 1e-3,
                "end {k}: probe {} vs limit {} (chordal {d})",
                probes[k],
                targets[k]
            );
        }
    }

    #[test]
    fn doubling_mirrors_the_piece() {
        let ev = trinoid_evaluator(&spec_06(), false).unwrap();
        let mesh = small_mesh(&ev);
        let fits = fit_boundary_planes(&mesh).unwrap();
        let doubled = double_mesh(&mesh, &fits[0].kind);
        assert_eq!(doubled.vertices.len(), 2 * mesh.vertices.len());
        assert_eq!(doubled.faces.len(), 2 * mesh.faces.len());
        // Reflection is isometric: mirrored vertices stay in the model and
        // boundary vertices stay (approximately) fixed.
        for v in &doubled.vertices {
            assert!(v.point.y3 > 0.0);
        }
        for seg in &mesh.boundary {
            for &id in seg {
                let orig = &mesh.vertices[id as usize];
                let refl = &doubled.vertices[id as usize + mesh.vertices.len()];
                let dw = (orig.point.w - refl.point.w).norm();
                let dy = (orig.point.y3 - refl.point.y3).abs();
                assert!(
                    dw + dy < 1e-4,
                    "boundary vertex moved by {} under reflection",
                    dw + dy
                );
            }
        }
    }

    #[test]
    fn diagnostics_summarize_the_symmetric_trinoid() {
        let spec = spec_06();
        let ev = trinoid_evaluator(&spec, false).unwrap();
        let mesh = small_mesh(&ev);
        let d = trinoid_diagnostics(&spec, &ev, &mesh).unwrap();
        assert!(d.in_k && d.nondegenerate && d.umehara_equivalent);
        assert_eq!(d.eps, 1);
        assert_eq!(d.distinct, [true, true, true]);
        assert_eq!(d.embedded, [true, true, true]);
        assert!(d.det_drift < 1e-8);
        assert!(d.plane_residual < 1e-5);
        assert!(d.plane_coincidence < 1e-4);
        for k in 0..3 {
            assert!((d.growth_readoff[k] - d.growths[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn writers_emit_both_models() {
        let ev = trinoid_evaluator(&spec_06(), false).unwrap();
        let mesh = trinoid_mesh(&ev, 16, &Window::default(), 0.05).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let obj = dir.path().join("t.halfspace.obj");
        let ply = dir.path().join("t.ball.ply");
        write_trinoid_obj(&mesh, ModelKind::HalfSpace, &obj).unwrap();
        write_trinoid_ply(&mesh, ModelKind::Ball, &ply).unwrap();
        let text = std::fs::read_to_string(&obj).unwrap();
        assert_eq!(
            text.lines().filter(|l| l.starts_with("v ")).count(),
            mesh.vertices.len()
        );
        assert_eq!(
            text.lines().filter(|l| l.starts_with("f ")).count(),
            mesh.faces.len()
        );
        let bytes = std::fs::read(&ply).unwrap();
        let header_end = bytes
            .windows(11)
            .position(|w| w == b"end_header\n")
            .unwrap()
            + 11;
        assert_eq!(
            bytes.len() - header_end,
            mesh.vertices.len() * 12 + mesh.faces.len() * 13
        );
    }
}
