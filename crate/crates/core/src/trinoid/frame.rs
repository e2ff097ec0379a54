//! The holomorphic frame of the cousin surface and the hyperbolic models.
//!
//! The frame F solves F⁻¹dF = (i/ch)·[[k1k2, −k2²], [k1², −k1k2]] dz with
//! ch = z²(z−1)²; the coefficient matrix is trace-free (det F is constant)
//! and holomorphic across the spinor zeros, and the upper half-plane is
//! simply connected, so F is path-independent. F maps to hyperbolic space
//! through the Hermitian square M = FF*: in half-space coordinates
//! (w, y3) = (M21/M11, 1/M11). The ODE is integrated with an adaptive
//! Dormand–Prince 5(4) pair; determinant drift is kept as a diagnostic and
//! never renormalized away.

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::surface::WeierstrassEvaluator;
use num_complex::Complex64;
use serde::Serialize;

pub type Mat2 = [[Complex64; 2]; 2];

pub const MAT2_ID: Mat2 = {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[one, zero], [zero, one]]
};

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_det(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mat_norm(m: &Mat2) -> f64 {
    m.iter()
        .flatten()
        .fold(0.0f64, |a, v| a.max(v.re.abs()).max(v.im.abs()))
}

/// The frame at a point, carried along a path from the normalization point.
#[derive(Debug, Clone, Copy)]
pub struct BryantFrame {
    pub f: Mat2,
    pub z: Complex64,
}

impl BryantFrame {
    pub fn identity(z: Complex64) -> Self {
        BryantFrame { f: MAT2_ID, z }
    }

    /// |det F − 1|: the accumulated integration drift.
    pub fn det_drift(&self) -> f64 {
        (mat_det(&self.f) - 1.0).norm()
    }
}

/// Frame ODE coefficient at z (the matrix multiplying dz on the right).
fn coefficient(ev: &WeierstrassEvaluator, z: Complex64) -> Result<Mat2> {
    let s = ev.spinor_point(z)?;
    let t = z * (z - 1.0);
    let ch = t * t;
    if ch.norm() < 1e-30 {
        return Err(Error::numerical(format!(
            "frame coefficient singular at z = {z}"
        )));
    }
    let i_ch = Complex64::i() / ch;
    Ok([
        [i_ch * s.k1 * s.k2, -i_ch * s.k2 * s.k2],
        [i_ch * s.k1 * s.k1, -i_ch * s.k1 * s.k2],
    ])
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 0.2;
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Local step error target for the 5(4) pair.
pub const STEP_TOL: f64 = 1e-10;
const MAX_STEPS: usize = 20_000;

fn add_scaled(base: &Mat2, terms: &[(f64, &Mat2)], h: f64) -> Mat2 {
    let mut out = *base;
    for (c, m) in terms {
        let ch = h * c;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += ch * m[i][j];
            }
        }
    }
    out
}

/// Integrate dF = F·coefficient·dz along the straight segment [za, zb].
fn rk_segment(
    ev: &WeierstrassEvaluator,
    f0: Mat2,
    za: Complex64,
    zb: Complex64,
) -> Result<Mat2> {
    let delta = zb - za;
    if delta.norm() == 0.0 {
        return Ok(f0);
    }
    // Parametrize by t ∈ [0, 1]: dF/dt = F · coefficient(za + tΔ) · Δ.
    let rhs = |f: &Mat2, t: f64| -> Result<Mat2> {
        let a = coefficient(ev, za + t * delta)?;
        let mut out = mat_mul(f, &a);
        for row in &mut out {
            for v in row.iter_mut() {
                *v *= delta;
            }
        }
        Ok(out)
    };

    let mut f = f0;
    let mut t = 0.0f64;
    let mut h = 0.25f64;
    let mut k1 = rhs(&f, 0.0)?;
    let mut steps = 0;
    while t < 1.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::numerical(
                "frame integration exceeded the step budget",
            ));
        }
        h = h.min(1.0 - t);
        if h < 1e-13 {
            return Err(Error::numerical("frame integration step underflow"));
        }
        let k2 = rhs(&add_scaled(&f, &[(A21, &k1)], h), t + C[1] * h)?;
        let k3 = rhs(&add_scaled(&f, &[(A3[0], &k1), (A3[1], &k2)], h), t + C[2] * h)?;
        let k4 = rhs(
            &add_scaled(&f, &[(A4[0], &k1), (A4[1], &k2), (A4[2], &k3)], h),
            t + C[3] * h,
        )?;
        let k5 = rhs(
            &add_scaled(
                &f,
                &[(A5[0], &k1), (A5[1], &k2), (A5[2], &k3), (A5[3], &k4)],
                h,
            ),
            t + C[4] * h,
        )?;
        let k6 = rhs(
            &add_scaled(
                &f,
                &[
                    (A6[0], &k1),
                    (A6[1], &k2),
                    (A6[2], &k3),
                    (A6[3], &k4),
                    (A6[4], &k5),
                ],
                h,
            ),
            t + C[5] * h,
        )?;
        // 5th-order solution (B5[1] = B5[6] = 0).
        let f5 = add_scaled(
            &f,
            &[
                (B5[0], &k1),
                (B5[2], &k3),
                (B5[3], &k4),
                (B5[4], &k5),
                (B5[5], &k6),
            ],
            h,
        );
        let k7 = rhs(&f5, t + C[6] * h)?;
        let f4 = add_scaled(
            &f,
            &[
                (B4[0], &k1),
                (B4[2], &k3),
                (B4[3], &k4),
                (B4[4], &k5),
                (B4[5], &k6),
                (B4[6], &k7),
            ],
            h,
        );
        let mut err = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                err = err.max((f5[i][j] - f4[i][j]).norm());
            }
        }
        let scale = STEP_TOL * (1.0 + mat_norm(&f));
        if err <= scale {
            t += h;
            f = f5;
            k1 = k7; // first-same-as-last
        } else {
            k1 = rhs(&f, t)?;
        }
        let ratio = if err > 0.0 { scale / err } else { 10.0 };
        h *= (0.9 * ratio.powf(0.2)).clamp(0.2, 5.0);
    }
    Ok(f)
}

/// Integrate the frame from the identity along a polyline.
pub fn integrate_bryant(
    ev: &WeierstrassEvaluator,
    path: &[Complex64],
) -> Result<BryantFrame> {
    let Some(&start) = path.first() else {
        return Err(Error::invalid("frame path must contain at least one point"));
    };
    let mut frame = BryantFrame::identity(start);
    for pair in path.windows(2) {
        frame = continue_frame(ev, &frame, pair[1])?;
    }
    Ok(frame)
}

/// Carry an existing frame along the straight segment to `to`.
pub fn continue_frame(
    ev: &WeierstrassEvaluator,
    frame: &BryantFrame,
    to: Complex64,
) -> Result<BryantFrame> {
    let f = rk_segment(ev, frame.f, frame.z, to)?;
    Ok(BryantFrame { f, z: to })
}

/// A point of the upper half-space model: (y1 + iy2, y3) with y3 > 0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HyperbolicPoint {
    pub w: Complex64,
    pub y3: f64,
}

/// Convert a frame to the half-space model through M = FF*:
/// w = M21/M11, y3 = 1/M11.
pub fn cousin_point(frame: &BryantFrame) -> Result<HyperbolicPoint> {
    let f = &frame.f;
    let m11 = f[0][0].norm_sqr() + f[0][1].norm_sqr();
    let m21 = f[1][0] * f[0][0].conj() + f[1][1] * f[0][1].conj();
    let m22 = f[1][0].norm_sqr() + f[1][1].norm_sqr();
    let det = m11 * m22 - m21.norm_sqr();
    if m11 < 1e-12 || det <= 0.0 {
        return Err(Error::numerical(format!(
            "frame square is not positive definite at z = {} (M11 = {m11:.3e}, det = {det:.3e})",
            frame.z
        )));
    }
    Ok(HyperbolicPoint { w: m21 / m11, y3: 1.0 / m11 })
}

/// The Hermitian matrix a half-space point came from (unit determinant).
pub fn halfspace_matrix(p: &HyperbolicPoint) -> Mat2 {
    let m11 = Complex64::new(1.0 / p.y3, 0.0);
    let m21 = p.w / p.y3;
    let m22 = Complex64::new(p.y3 + p.w.norm_sqr() / p.y3, 0.0);
    [[m11, m21.conj()], [m21, m22]]
}

/// Map a half-space point to the unit-ball model; the half-space origin of
/// the model maps to the center and y3 → ∞ maps toward (0, 0, 1).
pub fn ball_point(p: &HyperbolicPoint) -> Vec3 {
    let (y1, y2, y3) = (p.w.re, p.w.im, p.y3);
    let denom = y1 * y1 + y2 * y2 + (y3 + 1.0) * (y3 + 1.0);
    Vec3::new(
        2.0 * y1 / denom,
        2.0 * y2 / denom,
        (y1 * y1 + y2 * y2 + y3 * y3 - 1.0) / denom,
    )
}

/// The frame-level boundary map: the Möbius action of F on the secondary
/// Gauss map g = k2/k1, evaluated from the spinors directly.
pub fn hyperbolic_gauss_numeric(
    ev: &WeierstrassEvaluator,
    frame: &BryantFrame,
) -> Result<Complex64> {
    let s = ev.spinor_point(frame.z)?;
    let f = &frame.f;
    let num = f[0][0] * s.k2 + f[0][1] * s.k1;
    let den = f[1][0] * s.k2 + f[1][1] * s.k1;
    if den.norm() == 0.0 {
        return Ok(Complex64::new(f64::INFINITY, 0.0));
    }
    Ok(num / den)
}

/// A Möbius transformation, stored projectively.
#[derive(Debug, Clone, Copy)]
pub struct Mobius {
    pub m: Mat2,
}

fn three_point_matrix(p: [Complex64; 3]) -> Result<Mat2> {
    let finite = |w: Complex64| w.re.is_finite() && w.im.is_finite();
    let [z1, z2, z3] = p;
    // The map (z1, z2, z3) → (0, 1, ∞), with infinities by limits.
    let m = match (finite(z1), finite(z2), finite(z3)) {
        (true, true, true) => [
            [z2 - z3, -z1 * (z2 - z3)],
            [z2 - z1, -z3 * (z2 - z1)],
        ],
        (false, true, true) => [
            [Complex64::new(0.0, 0.0), z2 - z3],
            [Complex64::new(1.0, 0.0), -z3],
        ],
        (true, false, true) => [
            [Complex64::new(1.0, 0.0), -z1],
            [Complex64::new(1.0, 0.0), -z3],
        ],
        (true, true, false) => [
            [Complex64::new(1.0, 0.0), -z1],
            [Complex64::new(0.0, 0.0), z2 - z1],
        ],
        _ => return Err(Error::invalid("Möbius fit needs at most one infinite point")),
    };
    if mat_det(&m).norm() < 1e-24 {
        return Err(Error::invalid("Möbius fit points are not pairwise distinct"));
    }
    Ok(m)
}

impl Mobius {
    /// The transformation sending the three source points to the three
    /// destination points (each triple pairwise distinct; at most one
    /// infinity per triple).
    pub fn from_three_points(src: [Complex64; 3], dst: [Complex64; 3]) -> Result<Mobius> {
        let ts = three_point_matrix(src)?;
        let td = three_point_matrix(dst)?;
        let adj = [[td[1][1], -td[0][1]], [-td[1][0], td[0][0]]];
        let mut m = mat_mul(&adj, &ts);
        let scale = mat_norm(&m);
        if scale == 0.0 {
            return Err(Error::numerical("degenerate Möbius fit"));
        }
        for row in &mut m {
            for v in row.iter_mut() {
                *v /= scale;
            }
        }
        Ok(Mobius { m })
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let finite = z.re.is_finite() && z.im.is_finite();
        let (num, den) = if finite {
            (self.m[0][0] * z + self.m[0][1], self.m[1][0] * z + self.m[1][1])
        } else {
            (self.m[0][0], self.m[1][0])
        };
        if den.norm() == 0.0 {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        num / den
    }
}
