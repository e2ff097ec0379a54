//! Oriented lines in R^3 and the invariants of a triple of pairwise skew
//! lines.
//!
//! A triple (D1, D2, D3) of pairwise non-parallel, non-intersecting oriented
//! lines is classified up to direct isometry by seven numbers: three angle
//! invariants in (0, 1) (in units of π), three signed distances, and a
//! chirality sign. The admissible open region K for the angles is cut out by
//! four strict inequalities. `classify_triple` measures the invariants,
//! `lines_from_config` rebuilds a representative triple, and `frame_angles`
//! derives the two auxiliary rotation angles θ, θ̂ used by the period
//! conditions.

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use serde::{Deserialize, Serialize};

const PARALLEL_TOL: f64 = 1e-12;
const DIST_TOL: f64 = 1e-12;
const K_MARGIN: f64 = 1e-12;

/// A line with a unit direction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OrientedLine {
    pub point: Vec3,
    pub direction: Vec3,
}

impl OrientedLine {
    pub fn new(point: Vec3, direction: Vec3) -> Result<Self> {
        let direction = direction
            .normalized()
            .ok_or_else(|| Error::invalid("line direction must be nonzero"))?;
        Ok(OrientedLine { point, direction })
    }
}

/// Unit vector v(L1, L2) = u1 × (-u2) / ‖u1 × u2‖ associated to an ordered
/// pair of non-parallel oriented lines.
pub fn associated_vector(l1: &OrientedLine, l2: &OrientedLine) -> Result<Vec3> {
    let cross = l1.direction.cross(l2.direction);
    let n = cross.norm();
    if n < PARALLEL_TOL {
        return Err(Error::invalid("associated vector of (nearly) parallel lines"));
    }
    Ok(-cross * (1.0 / n))
}

/// Signed distance D(L1, L2) = ⟨p2 - p1, v(L1, L2)⟩; zero exactly when the
/// lines intersect.
pub fn signed_distance(l1: &OrientedLine, l2: &OrientedLine) -> Result<f64> {
    let v = associated_vector(l1, l2)?;
    Ok((l2.point - l1.point).dot(v))
}

/// The seven invariants of an admissible triple. `dist_a`, `dist_b`,
/// `dist_c` follow the end-parameter sign convention: dist_a = -D(D1, D2),
/// dist_b = -D(D3, D1), dist_c = -D(D2, D3).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TripleConfig {
    pub alpha0: f64,
    pub beta0: f64,
    pub gamma0: f64,
    #[serde(rename = "A")]
    pub dist_a: f64,
    #[serde(rename = "B")]
    pub dist_b: f64,
    #[serde(rename = "C")]
    pub dist_c: f64,
    pub eps0: i8,
}

/// Strict membership of (α0, β0, γ0) in the admissible angle region K:
/// all three in (0, 1), α0+β0+γ0 > 1 and each "one against two" sum < 1.
pub fn in_angle_region(alpha0: f64, beta0: f64, gamma0: f64) -> bool {
    let open = |x: f64| x > K_MARGIN && x < 1.0 - K_MARGIN;
    open(alpha0)
        && open(beta0)
        && open(gamma0)
        && alpha0 + beta0 + gamma0 > 1.0 + K_MARGIN
        && -alpha0 + beta0 + gamma0 < 1.0 - K_MARGIN
        && alpha0 - beta0 + gamma0 < 1.0 - K_MARGIN
        && alpha0 + beta0 - gamma0 < 1.0 - K_MARGIN
}

fn angle_over_pi(u: Vec3, w: Vec3) -> f64 {
    u.dot(w).clamp(-1.0, 1.0).acos() / std::f64::consts::PI
}

/// Measure the invariants of a triple; errors on parallel or intersecting
/// pairs, coplanar directions, or angles outside K.
pub fn classify_triple(lines: &[OrientedLine; 3]) -> Result<TripleConfig> {
    let [d1, d2, d3] = lines;
    let alpha0 = angle_over_pi(d1.direction, -d2.direction);
    let beta0 = angle_over_pi(d3.direction, -d1.direction);
    let gamma0 = angle_over_pi(d2.direction, -d3.direction);

    let da = -signed_distance(d1, d2)?;
    let db = -signed_distance(d3, d1)?;
    let dc = -signed_distance(d2, d3)?;
    for (name, v) in [("D1,D2", da), ("D3,D1", db), ("D2,D3", dc)] {
        if v.abs() < DIST_TOL {
            return Err(Error::invalid(format!("lines {name} (nearly) intersect")));
        }
    }

    let det = Vec3::triple(d1.direction, d2.direction, d3.direction);
    if det.abs() < PARALLEL_TOL {
        return Err(Error::invalid("line directions are (nearly) coplanar"));
    }

    if !in_angle_region(alpha0, beta0, gamma0) {
        return Err(Error::invalid(format!(
            "angle invariants ({alpha0:.6}, {beta0:.6}, {gamma0:.6}) lie outside the admissible region"
        )));
    }

    Ok(TripleConfig {
        alpha0,
        beta0,
        gamma0,
        dist_a: da,
        dist_b: db,
        dist_c: dc,
        eps0: if det > 0.0 { 1 } else { -1 },
    })
}

/// Build a representative triple realising the given invariants:
/// D2 is the x1-axis oriented along -e1, D1 runs through (0, 0, -A), and D3
/// is placed by two translations fixing the remaining two distances.
pub fn lines_from_config(cfg: &TripleConfig) -> Result<[OrientedLine; 3]> {
    use std::f64::consts::PI;
    if !in_angle_region(cfg.alpha0, cfg.beta0, cfg.gamma0) {
        return Err(Error::invalid(
            "configuration angles lie outside the admissible region",
        ));
    }
    if cfg.eps0 != 1 && cfg.eps0 != -1 {
        return Err(Error::invalid("eps0 must be +1 or -1"));
    }
    for (name, v) in [("A", cfg.dist_a), ("B", cfg.dist_b), ("C", cfg.dist_c)] {
        if v.abs() < DIST_TOL || !v.is_finite() {
            return Err(Error::invalid(format!("distance {name} must be nonzero")));
        }
    }

    let (sa, ca) = (PI * cfg.alpha0).sin_cos();
    let cb = (PI * cfg.beta0).cos();
    let cg = (PI * cfg.gamma0).cos();

    let u1 = Vec3::new(ca, sa, 0.0);
    let u2 = -Vec3::EX;
    let x = cg;
    let y = (cb + ca * cg) / sa;
    let z2 = 1.0 - x * x - y * y;
    if z2 <= 1e-14 {
        return Err(Error::invalid(
            "angle invariants admit no spatial direction frame (boundary of the admissible region)",
        ));
    }
    let u3 = Vec3::new(x, -y, f64::from(cfg.eps0) * z2.sqrt());

    let d1 = OrientedLine::new(Vec3::new(0.0, 0.0, -cfg.dist_a), u1)?;
    let d2 = OrientedLine::new(Vec3::ZERO, u2)?;

    // Place D3: start at the origin, then shift along w = u1 × u3 to realise
    // D(D3, D1) = -B (the distance is affine in the shift), then along u1 to
    // realise D(D2, D3) = -C. The second shift leaves D(D3, D1) unchanged
    // because the associated vector of (D3, D1) is orthogonal to u1.
    let w = u1
        .cross(u3)
        .normalized()
        .ok_or_else(|| Error::invalid("u1 and u3 are (nearly) parallel"))?;
    let probe = |p: Vec3| -> Result<f64> {
        signed_distance(&OrientedLine { point: p, direction: u3 }, &d1)
    };
    let f0 = probe(Vec3::ZERO)?;
    let f1 = probe(w)?;
    let slope = f1 - f0;
    if slope.abs() < PARALLEL_TOL {
        return Err(Error::invalid("degenerate placement for the third line"));
    }
    let s = (-cfg.dist_b - f0) / slope;
    let base = w * s;

    let probe2 = |p: Vec3| -> Result<f64> {
        signed_distance(&d2, &OrientedLine { point: p, direction: u3 })
    };
    let g0 = probe2(base)?;
    let g1 = probe2(base + u1)?;
    let slope2 = g1 - g0;
    if slope2.abs() < PARALLEL_TOL {
        return Err(Error::invalid("degenerate placement for the third line"));
    }
    let s2 = (-cfg.dist_c - g0) / slope2;
    let d3 = OrientedLine::new(base + u1 * s2, u3)?;

    Ok([d1, d2, d3])
}

/// The auxiliary rotation angles θ and θ̂ of a configuration. Signs of
/// sin θ, sin θ̂ (hence of t = tan θ/2, t̂ = tan θ̂/2) equal eps0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrameAngles {
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub t: f64,
    pub cos_theta_hat: f64,
    pub sin_theta_hat: f64,
    pub t_hat: f64,
}

pub fn frame_angles(cfg: &TripleConfig) -> Result<FrameAngles> {
    use std::f64::consts::PI;
    if !in_angle_region(cfg.alpha0, cfg.beta0, cfg.gamma0) {
        return Err(Error::invalid(
            "configuration angles lie outside the admissible region",
        ));
    }
    let (sa, ca) = (PI * cfg.alpha0).sin_cos();
    let (sb, cb) = (PI * cfg.beta0).sin_cos();
    let (sg, cg) = (PI * cfg.gamma0).sin_cos();
    let e = f64::from(cfg.eps0);

    let cos_theta = (cb + ca * cg) / (sa * sg);
    let cos_theta_hat = (cg + ca * cb) / (sa * sb);
    for (name, c) in [("θ", cos_theta), ("θ̂", cos_theta_hat)] {
        if c.abs() >= 1.0 - 1e-14 {
            return Err(Error::invalid(format!(
                "frame angle {name} degenerates (|cos| ≥ 1)"
            )));
        }
    }
    let sin_theta = e * (1.0 - cos_theta * cos_theta).sqrt();
    let sin_theta_hat = e * (1.0 - cos_theta_hat * cos_theta_hat).sqrt();
    Ok(FrameAngles {
        cos_theta,
        sin_theta,
        t: sin_theta / (1.0 + cos_theta),
        cos_theta_hat,
        sin_theta_hat,
        t_hat: sin_theta_hat / (1.0 + cos_theta_hat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symmetric_config() -> TripleConfig {
        TripleConfig {
            alpha0: 0.6,
            beta0: 0.6,
            gamma0: 0.6,
            dist_a: 1.0,
            dist_b: 1.0,
            dist_c: 1.0,
            eps0: 1,
        }
    }

    fn random_config(rng: &mut ChaCha8Rng) -> TripleConfig {
        loop {
            let a = rng.gen_range(0.05..0.95);
            let b = rng.gen_range(0.05..0.95);
            let g = rng.gen_range(0.05..0.95);
            if !in_angle_region(a, b, g) {
                continue;
            }
            let dist = |r: &mut ChaCha8Rng| {
                let mag = r.gen_range(0.2..2.0);
                if r.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            };
            return TripleConfig {
                alpha0: a,
                beta0: b,
                gamma0: g,
                dist_a: dist(rng),
                dist_b: dist(rng),
                dist_c: dist(rng),
                eps0: if rng.gen_bool(0.5) { 1 } else { -1 },
            };
        }
    }

    fn assert_configs_close(a: &TripleConfig, b: &TripleConfig, tol_angle: f64, tol_dist: f64) {
        assert!((a.alpha0 - b.alpha0).abs() < tol_angle, "alpha0");
        assert!((a.beta0 - b.beta0).abs() < tol_angle, "beta0");
        assert!((a.gamma0 - b.gamma0).abs() < tol_angle, "gamma0");
        assert!(
            (a.dist_a - b.dist_a).abs() <= tol_dist * b.dist_a.abs(),
            "A: {} vs {}",
            a.dist_a,
            b.dist_a
        );
        assert!(
            (a.dist_b - b.dist_b).abs() <= tol_dist * b.dist_b.abs(),
            "B: {} vs {}",
            a.dist_b,
            b.dist_b
        );
        assert!(
            (a.dist_c - b.dist_c).abs() <= tol_dist * b.dist_c.abs(),
            "C: {} vs {}",
            a.dist_c,
            b.dist_c
        );
        assert_eq!(a.eps0, b.eps0, "eps0");
    }

    #[test]
    fn signed_distance_orientation_flip() {
        // Flipping the orientation of one line flips the associated vector
        // and hence the sign of the distance.
        let l1 = OrientedLine::new(Vec3::ZERO, Vec3::EX).unwrap();
        let l2 = OrientedLine::new(Vec3::new(0.0, 0.0, 2.0), Vec3::EY).unwrap();
        let d = signed_distance(&l1, &l2).unwrap();
        let l2r = OrientedLine::new(l2.point, -l2.direction).unwrap();
        let dr = signed_distance(&l1, &l2r).unwrap();
        assert!((d + dr).abs() < 1e-15);
        // ⟨p2-p1, v⟩ with v = x̂ × (-ŷ) = -ẑ gives -2.
        assert!((d + 2.0).abs() < 1e-15);
    }

    #[test]
    fn signed_distance_is_isometry_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let q = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let u = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (Some(_), Some(_)) = (u.normalized(), v.normalized()) else {
                continue;
            };
            let Ok(l1) = OrientedLine::new(p, u) else { continue };
            let Ok(l2) = OrientedLine::new(q, v) else { continue };
            let Ok(d) = signed_distance(&l1, &l2) else { continue };
            // Rotate both lines about the z-axis by a random angle + translate.
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (s, c) = ang.sin_cos();
            let rot = |w: Vec3| Vec3::new(c * w.x - s * w.y, s * w.x + c * w.y, w.z);
            let t = Vec3::new(0.3, -1.2, 0.8);
            let m1 = OrientedLine::new(rot(l1.point) + t, rot(l1.direction)).unwrap();
            let m2 = OrientedLine::new(rot(l2.point) + t, rot(l2.direction)).unwrap();
            let dm = signed_distance(&m1, &m2).unwrap();
            assert!((d - dm).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_symmetric_configuration() {
        let cfg = symmetric_config();
        let lines = lines_from_config(&cfg).unwrap();
        let back = classify_triple(&lines).unwrap();
        assert_configs_close(&back, &cfg, 1e-12, 1e-12);
    }

    #[test]
    fn round_trip_random_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let cfg = random_config(&mut rng);
            let lines = match lines_from_config(&cfg) {
                Ok(l) => l,
                Err(_) => continue, // boundary-adjacent draw
            };
            let back = classify_triple(&lines).unwrap();
            assert_configs_close(&back, &cfg, 1e-9, 1e-9);
        }
    }

    #[test]
    fn mirror_image_flips_distances_and_chirality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let cfg = random_config(&mut rng);
            let Ok(lines) = lines_from_config(&cfg) else { continue };
            let refl = |v: Vec3| Vec3::new(v.x, v.y, -v.z);
            let mirrored = [
                OrientedLine::new(refl(lines[0].point), refl(lines[0].direction)).unwrap(),
                OrientedLine::new(refl(lines[1].point), refl(lines[1].direction)).unwrap(),
                OrientedLine::new(refl(lines[2].point), refl(lines[2].direction)).unwrap(),
            ];
            let back = classify_triple(&mirrored).unwrap();
            let expect = TripleConfig {
                dist_a: -cfg.dist_a,
                dist_b: -cfg.dist_b,
                dist_c: -cfg.dist_c,
                eps0: -cfg.eps0,
                ..cfg
            };
            assert_configs_close(&back, &expect, 1e-9, 1e-9);
        }
    }

    #[test]
    fn frame_angle_signs_follow_chirality() {
        for eps0 in [1i8, -1] {
            let cfg = TripleConfig { eps0, ..symmetric_config() };
            let fa = frame_angles(&cfg).unwrap();
            assert_eq!(fa.sin_theta > 0.0, eps0 > 0);
            assert_eq!(fa.t > 0.0, eps0 > 0);
            assert_eq!(fa.sin_theta_hat > 0.0, eps0 > 0);
            // cos θ = (c + c²)/s² for the all-0.6 case.
            use std::f64::consts::PI;
            let c = (0.6 * PI).cos();
            let s = (0.6 * PI).sin();
            assert!((fa.cos_theta - (c + c * c) / (s * s)).abs() < 1e-15);
        }
    }

    #[test]
    fn frame_angles_match_the_representative_triple() {
        // θ is the angle of the rotation taking the associated vector of
        // (D2, D3) around u2 to -e3, θ̂ likewise for (D3, D1) around u1;
        // check cos against direct dot products on the representative.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let cfg = random_config(&mut rng);
            let Ok(lines) = lines_from_config(&cfg) else { continue };
            let fa = frame_angles(&cfg).unwrap();
            let v23 = associated_vector(&lines[1], &lines[2]).unwrap();
            let v31 = associated_vector(&lines[2], &lines[0]).unwrap();
            let v12 = associated_vector(&lines[0], &lines[1]).unwrap();
            // v12 is -e3 by construction.
            assert!((v12 + Vec3::EZ).norm() < 1e-12);
            assert!((v23.dot(-Vec3::EZ) - fa.cos_theta).abs() < 1e-12);
            assert!((v31.dot(-Vec3::EZ) - fa.cos_theta_hat).abs() < 1e-12);
            // Signed sines about the rotation axes u2 and u1.
            let s23 = v23.cross(-Vec3::EZ).dot(lines[1].direction);
            let s31 = v31.cross(-Vec3::EZ).dot(lines[0].direction);
            assert!(
                (s23.abs() - fa.sin_theta.abs()).abs() < 1e-12,
                "|sin θ| mismatch"
            );
            assert!(
                (s31.abs() - fa.sin_theta_hat.abs()).abs() < 1e-12,
                "|sin θ̂| mismatch"
            );
        }
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        // Intersecting lines.
        let l1 = OrientedLine::new(Vec3::ZERO, Vec3::EX).unwrap();
        let l2 = OrientedLine::new(Vec3::ZERO, Vec3::EY).unwrap();
        let l3 = OrientedLine::new(Vec3::new(0.0, 0.0, 1.0), Vec3::EZ).unwrap();
        assert!(classify_triple(&[l1, l2, l3]).is_err());
        // Angles outside K.
        let cfg = TripleConfig {
            alpha0: 0.2,
            beta0: 0.2,
            gamma0: 0.2,
            ..symmetric_config()
        };
        assert!(lines_from_config(&cfg).is_err());
        // Zero distance.
        let cfg = TripleConfig { dist_a: 0.0, ..symmetric_config() };
        assert!(lines_from_config(&cfg).is_err());
    }
}
