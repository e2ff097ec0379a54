//! The globally continued solution pair σ = (σ1, σ2) and its Wronskian.
//!
//! σ is the Near0 basis continued across the whole domain (the closed upper
//! half-plane minus the two punctures) through the connection matrices. Its
//! Wronskian σ1 σ2' − σ1' σ2 = α z^{α-1} (1-z)^{γ-1} is the primary
//! cross-chart consistency invariant.

use super::basis::{basis_at, classify_region, BasisEval, EvalRegion, ExponentSet};
use super::connection::ConnectionMatrices;
use super::series::{branch_pow_1mz, branch_pow_z};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Globally continued pair at one point.
#[derive(Debug, Clone, Copy)]
pub struct SigmaEval {
    pub sigma: [Complex64; 2],
    pub dsigma: [Complex64; 2],
    pub d2sigma: [Complex64; 2],
    pub region: EvalRegion,
    pub converged: bool,
    pub max_tail: f64,
}

/// Minimum distance from the punctures accepted by `sigma_global`.
pub const PUNCTURE_GUARD: f64 = 1e-8;

/// Radius around the slow point inside which `sigma_global` switches from
/// direct summation to a Taylor step off an anchor outside the disk.
const SLOW_POINT_NEAR: f64 = 0.03;
/// Distance from the slow point at which the anchor evaluation is placed.
const SLOW_POINT_ANCHOR: f64 = 0.08;
/// Order of the Taylor step; with both poles at distance ~1 and steps of
/// length <= `SLOW_POINT_ANCHOR`, term k decays like 0.09^k.
const TAYLOR_ORDER: usize = 36;

/// The one interior point of the upper half-plane where |z| = |z - 1| = 1,
/// so every chart's series argument has modulus close to 1 and direct
/// summation needs more terms than the cap allows.
fn slow_point() -> Complex64 {
    Complex64::new(0.5, 0.866_025_403_784_438_6)
}

fn check_domain(z: Complex64) -> Result<()> {
    if z.im < -1e-9 * (1.0 + z.norm()) {
        return Err(Error::invalid(format!(
            "point {z} lies below the real axis"
        )));
    }
    if z.norm() < PUNCTURE_GUARD || (z - 1.0).norm() < PUNCTURE_GUARD {
        return Err(Error::invalid(format!(
            "point {z} is within {PUNCTURE_GUARD:.0e} of a puncture"
        )));
    }
    Ok(())
}

fn combine(region: EvalRegion, conn: &ConnectionMatrices, b: &BasisEval) -> SigmaEval {
    let rows: [[Complex64; 2]; 2] = match region {
        EvalRegion::Near0 => [
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ],
        EvalRegion::Near1 => [
            [conn.nu[0][0].into(), conn.nu[0][1].into()],
            [conn.nu[1][0].into(), conn.nu[1][1].into()],
        ],
        EvalRegion::NearInf => conn.nu_hat,
    };
    let mix = |v: [Complex64; 2], row: &[Complex64; 2]| row[0] * v[0] + row[1] * v[1];
    SigmaEval {
        sigma: [mix(b.w, &rows[0]), mix(b.w, &rows[1])],
        dsigma: [mix(b.dw, &rows[0]), mix(b.dw, &rows[1])],
        d2sigma: [mix(b.d2w, &rows[0]), mix(b.d2w, &rows[1])],
        region,
        converged: b.converged,
        max_tail: b.max_tail,
    }
}

/// Advance σ from a converged anchor evaluation at `za` to the nearby
/// point `z` through the power series the differential equation induces
/// about `za`. The equation has its only singularities at the punctures,
/// about one unit away, so the step converges at machine precision.
fn taylor_step(x: &ExponentSet, anchor: &SigmaEval, za: Complex64, z: Complex64) -> SigmaEval {
    let u = z - za;
    let qc = Complex64::from(x.s3(-1, -1, -1) * x.s3(-1, 1, -1));
    // Coefficient series about za for P = (1-α)/z + (1-γ)/(z-1) and
    // Q = qc/(z(z-1)) = qc (1/(z-1) - 1/z), via the geometric series of
    // each simple pole: 1/(za + u) = Σ (-1)^k u^k / za^{k+1}.
    let mut pk = [Complex64::default(); TAYLOR_ORDER];
    let mut qk = [Complex64::default(); TAYLOR_ORDER];
    let mut inv0 = 1.0 / za;
    let mut inv1 = 1.0 / (za - 1.0);
    for k in 0..TAYLOR_ORDER {
        pk[k] = (1.0 - x.alpha) * inv0 + (1.0 - x.gamma) * inv1;
        qk[k] = qc * (inv1 - inv0);
        inv0 *= -1.0 / za;
        inv1 *= -1.0 / (za - 1.0);
    }
    let pz = (1.0 - x.alpha) / z + (1.0 - x.gamma) / (z - 1.0);
    let qz = qc / (z * (z - 1.0));

    let mut out = *anchor;
    let mut tail = anchor.max_tail;
    for j in 0..2 {
        // w = Σ c_k u^k with c_0, c_1 from the anchor and the rest from
        // (k+2)(k+1) c_{k+2} = -Σ_{i<=k} [(i+1) c_{i+1} P_{k-i} + c_i Q_{k-i}].
        let m = TAYLOR_ORDER + 2;
        let mut c = vec![Complex64::default(); m];
        c[0] = anchor.sigma[j];
        c[1] = anchor.dsigma[j];
        for k in 0..TAYLOR_ORDER {
            let mut acc = Complex64::default();
            for i in 0..=k {
                acc += (i as f64 + 1.0) * c[i + 1] * pk[k - i] + c[i] * qk[k - i];
            }
            c[k + 2] = -acc / ((k as f64 + 2.0) * (k as f64 + 1.0));
        }
        let mut w = c[m - 1];
        for k in (0..m - 1).rev() {
            w = w * u + c[k];
        }
        let mut dw = (m as f64 - 1.0) * c[m - 1];
        for k in (1..m - 1).rev() {
            dw = dw * u + (k as f64) * c[k];
        }
        tail = tail.max((c[m - 1] * u.powu(m as u32 - 1)).norm() / (1.0 + w.norm()));
        out.sigma[j] = w;
        out.dsigma[j] = dw;
        // The second derivative follows from the equation at z itself.
        out.d2sigma[j] = -(pz * dw + qz * w);
    }
    out.converged = anchor.converged && tail <= 1e-12;
    out.max_tail = tail;
    out
}

/// σ and derivatives at z, chart chosen by `classify_region`.
///
/// Near the slow point the chart series stall, so the value is carried in
/// from an anchor on the ray through z by [`taylor_step`].
pub fn sigma_global(
    x: &ExponentSet,
    conn: &ConnectionMatrices,
    z: Complex64,
) -> Result<SigmaEval> {
    check_domain(z)?;
    let sp = slow_point();
    let d = (z - sp).norm();
    if d < SLOW_POINT_NEAR {
        let dir = if d < 1e-12 {
            Complex64::new(0.0, 1.0)
        } else {
            (z - sp) / d
        };
        let za = sp + SLOW_POINT_ANCHOR * dir;
        let region = classify_region(za);
        let b = basis_at(x, region, za)?;
        let anchor = combine(region, conn, &b);
        return Ok(taylor_step(x, &anchor, za, z));
    }
    let region = classify_region(z);
    let b = basis_at(x, region, z)?;
    Ok(combine(region, conn, &b))
}

/// σ forced through a specific chart (for overlap testing).
pub fn sigma_in_region(
    x: &ExponentSet,
    conn: &ConnectionMatrices,
    region: EvalRegion,
    z: Complex64,
) -> Result<SigmaEval> {
    check_domain(z)?;
    let b = basis_at(x, region, z)?;
    Ok(combine(region, conn, &b))
}

/// Closed form of the Wronskian σ1 σ2' − σ1' σ2 = α z^{α-1} (1-z)^{γ-1}.
pub fn wronskian_reference(x: &ExponentSet, z: Complex64) -> Complex64 {
    x.alpha * branch_pow_z(z, x.alpha - 1.0) * branch_pow_1mz(z, x.gamma - 1.0)
}
