//! The boundary map of the cousin surface and end-distinctness tests.
//!
//! Up to an isometry of hyperbolic space, the cousin's boundary map is the
//! rational function G°(z) = z + (a1−a2)²/(2(2z − a1 − a2)) built from the
//! roots a1, a2 of the Hopf polynomial φ. Its values at the three punctures
//! are the ideal boundary points the ends converge to; two ends share a
//! boundary point exactly when the corresponding quadratic expression in
//! the growth parameters vanishes.

use crate::error::{Error, Result};
use crate::solver::{build_phi, EndParams, PhiPolynomial};
use crate::trinoid::spec::TrinoidSpec;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Two ends are declared to share a boundary point when the quadratic test
/// is below this.
pub const DISTINCT_TOL: f64 = 1e-9;

/// Chordal distance on the Riemann sphere, 2|u − v| / √((1+|u|²)(1+|v|²));
/// non-finite values are treated as the point at infinity.
pub fn chordal_distance(u: Complex64, v: Complex64) -> f64 {
    let finite = |w: Complex64| w.re.is_finite() && w.im.is_finite();
    match (finite(u), finite(v)) {
        (true, true) => {
            2.0 * (u - v).norm() / ((1.0 + u.norm_sqr()) * (1.0 + v.norm_sqr())).sqrt()
        }
        (true, false) => 2.0 / (1.0 + u.norm_sqr()).sqrt(),
        (false, true) => 2.0 / (1.0 + v.norm_sqr()).sqrt(),
        (false, false) => 0.0,
    }
}

/// G°(z) from the Hopf polynomial. Returns the point at infinity (a
/// non-finite value) at the pole z = (a1 + a2)/2; collapses to the identity
/// when φ has a double root.
pub fn hyperbolic_gauss(z: Complex64, phi: &PhiPolynomial) -> Complex64 {
    let s = -phi.c1 / phi.c2;
    let d2 = s * s - 4.0 * phi.c0 / phi.c2;
    if d2.abs() < 1e-14 {
        return z;
    }
    let denom = 2.0 * (2.0 * z - s);
    if denom.norm() == 0.0 {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    z + d2 / denom
}

/// Boundary points of the three ends: (G°(0), G°(1), G°(∞)); the last is
/// always the point at infinity in this normalization.
pub fn gauss_at_ends(phi: &PhiPolynomial) -> [Complex64; 3] {
    let zero = hyperbolic_gauss(Complex64::new(0.0, 0.0), phi);
    let one = hyperbolic_gauss(Complex64::new(1.0, 0.0), phi);
    [zero, one, Complex64::new(f64::INFINITY, 0.0)]
}

/// Hopf polynomial for growth data alone (no admissibility requirement):
/// weights (lift² − 1)/4 at each end.
pub fn spec_phi(spec: &TrinoidSpec) -> Result<PhiPolynomial> {
    let [alpha, beta, gamma] = spec.lifts();
    let dist = |l: f64| 2.0 * PI * (l * l - 1.0) / (4.0 * l);
    let ends = EndParams::new(alpha, beta, gamma, dist(alpha), dist(beta), dist(gamma), 1)?;
    build_phi(&ends)
}

/// Which pairs of ends converge to distinct boundary points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistinctnessReport {
    /// Quadratic tests for the pairs (0,1), (0,∞), (1,∞):
    /// 1−μ0²−μ1²+μ∞², 1−μ0²+μ1²−μ∞², 1+μ0²−μ1²−μ∞².
    pub tests: [f64; 3],
    /// tests[k] nonzero (beyond [`DISTINCT_TOL`]).
    pub distinct: [bool; 3],
    /// Boundary points (G°(0), G°(1), G°(∞)).
    pub gauss_points: [(f64, f64); 3],
    /// Chordal distances between the boundary points, same pair order.
    pub chordal: [f64; 3],
}

/// Evaluate the three pair tests and the boundary points. At most one test
/// can vanish; all three vanishing simultaneously is impossible for valid
/// growth data and reported as a numerical error.
pub fn boundary_distinctness(spec: &TrinoidSpec) -> Result<DistinctnessReport> {
    let (m0, m1, mi) = (
        spec.mu0 * spec.mu0,
        spec.mu1 * spec.mu1,
        spec.mu_inf * spec.mu_inf,
    );
    let tests = [
        1.0 - m0 - m1 + mi,
        1.0 - m0 + m1 - mi,
        1.0 + m0 - m1 - mi,
    ];
    if tests.iter().all(|t| t.abs() < 1e-12) {
        return Err(Error::numerical(
            "all three boundary coincidence tests vanish; growth data is degenerate",
        ));
    }
    let distinct = tests.map(|t| t.abs() > DISTINCT_TOL);
    let phi = spec_phi(spec)?;
    let g = gauss_at_ends(&phi);
    let chordal = [
        chordal_distance(g[0], g[1]),
        chordal_distance(g[0], g[2]),
        chordal_distance(g[1], g[2]),
    ];
    Ok(DistinctnessReport {
        tests,
        distinct,
        gauss_points: g.map(|p| (p.re, p.im)),
        chordal,
    })
}
