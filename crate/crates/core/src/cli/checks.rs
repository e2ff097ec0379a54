//! Reusable verification measurements: sampled identity checks, product
//! identities of the connection coefficients, period residuals, and the
//! report schema they feed.

use crate::cli::config::Tolerances;
use crate::error::Result;
use crate::solver::EndParams;
use crate::specfun::{
    sigma_global, sigma_in_region, wronskian_reference, ConnectionMatrices, EvalRegion,
    ExponentSet,
};
use crate::surface::quad::plan_path;
use crate::surface::{WeierstrassEvaluator, BASEPOINT, PATH_CLEARANCE};
use crate::trinoid::integrate_bryant;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::io::Write as _;

/// One row of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    /// Ideal value of the measurement (always 0 for error measures).
    pub target: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    /// An error-type check: passes when the measured error is finite and
    /// within tolerance of zero.
    pub fn error(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckRow {
            name: name.into(),
            target: 0.0,
            measured,
            tolerance,
            pass: measured.is_finite() && measured.abs() <= tolerance,
        }
    }
}

/// The report `verify` emits.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// Seed of the randomized sampled checks.
    pub seed: u64,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckRow>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(seed: u64, tolerances: Tolerances, checks: Vec<CheckRow>) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        VerificationReport { seed, tolerances, checks, overall }
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// One sampled pointwise measurement (for the CSV dump).
#[derive(Debug, Clone, Copy)]
pub struct SampleRow {
    pub check: &'static str,
    pub z: Complex64,
    pub error: f64,
}

/// Write sampled checks as CSV: check, re_z, im_z, error.
pub fn write_samples_csv(path: &std::path::Path, rows: &[SampleRow]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "check,re_z,im_z,error")?;
    for r in rows {
        writeln!(out, "{},{:.17e},{:.17e},{:.6e}", r.check, r.z.re, r.z.im, r.error)?;
    }
    Ok(())
}

/// Draw a sample point in the closed upper half plane, away from the
/// punctures and the real axis.
fn sample_z(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-2.5..3.5), rng.gen_range(0.05..2.5));
        if z.norm() > 0.05 && (z - 1.0).norm() > 0.05 {
            return z;
        }
    }
}

/// Relative Wronskian error σ1 σ2' − σ1' σ2 against the closed form at `n`
/// random points. Returns the maximum and the per-point rows.
pub fn wronskian_samples(
    x: &ExponentSet,
    conn: &ConnectionMatrices,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, Vec<SampleRow>)> {
    let mut rows = Vec::with_capacity(n);
    let mut max = 0.0f64;
    for _ in 0..n {
        let z = sample_z(rng);
        let s = sigma_global(x, conn, z)?;
        let w = s.sigma[0] * s.dsigma[1] - s.dsigma[0] * s.sigma[1];
        let want = wronskian_reference(x, z);
        let err = (w - want).norm() / want.norm().max(1e-30);
        max = max.max(err);
        rows.push(SampleRow { check: "wronskian", z, error: err });
    }
    Ok((max, rows))
}

/// Maximum relative disagreement of σ and σ' between charts on fixed
/// points of the three pairwise overlaps.
pub fn overlap_samples(
    x: &ExponentSet,
    conn: &ConnectionMatrices,
) -> Result<(f64, Vec<SampleRow>)> {
    let c = Complex64::new;
    let pairs: [(EvalRegion, EvalRegion, [Complex64; 3]); 3] = [
        (
            EvalRegion::Near0,
            EvalRegion::Near1,
            [c(0.55, 0.25), c(0.4, 0.4), c(0.62, 0.05)],
        ),
        (
            EvalRegion::Near1,
            EvalRegion::NearInf,
            [c(1.6, 0.5), c(1.2, 0.8), c(1.9, 0.15)],
        ),
        (
            EvalRegion::Near0,
            EvalRegion::NearInf,
            [c(-0.8, 0.55), c(-0.95, 0.2), c(-0.7, 0.75)],
        ),
    ];
    let mut rows = Vec::new();
    let mut max = 0.0f64;
    for (ra, rb, pts) in pairs {
        for z in pts {
            let a = sigma_in_region(x, conn, ra, z)?;
            let b = sigma_in_region(x, conn, rb, z)?;
            let mut err = 0.0f64;
            for j in 0..2 {
                err = err.max(
                    (a.sigma[j] - b.sigma[j]).norm() / (1.0 + a.sigma[j].norm()),
                );
                err = err.max(
                    (a.dsigma[j] - b.dsigma[j]).norm() / (1.0 + a.dsigma[j].norm()),
                );
            }
            max = max.max(err);
            rows.push(SampleRow { check: "overlap", z, error: err });
        }
    }
    Ok((max, rows))
}

/// Relative defects of the two product identities
/// ν12 ν21 = −t² ν11 ν22 and ν̂12 ν̂21 = −t̂² ν̂11 ν̂22.
pub fn connection_products(conn: &ConnectionMatrices, t: f64, t_hat: f64) -> (f64, f64) {
    let lhs = conn.nu[0][1] * conn.nu[1][0];
    let rhs = -t * t * conn.nu[0][0] * conn.nu[1][1];
    let plain = (lhs - rhs).abs() / rhs.abs().max(1e-30);
    let lhs_hat = conn.nu_hat[0][1] * conn.nu_hat[1][0];
    let rhs_hat = -t_hat * t_hat * conn.nu_hat[0][0] * conn.nu_hat[1][1];
    let hat = (lhs_hat - rhs_hat).norm() / rhs_hat.norm().max(1e-30);
    (plain, hat)
}

/// Worst residual of the period system p² − α²(p+q+r)² = ε·w (and cyclic)
/// for a given triple.
pub fn period_residual(ends: &EndParams, eps: i8, pqr: [f64; 3]) -> f64 {
    let [p, q, r] = pqr;
    let y = p + q + r;
    let w = ends.weights();
    let angles = [ends.alpha, ends.beta, ends.gamma];
    let vals = [p, q, r];
    (0..3)
        .map(|k| {
            (vals[k] * vals[k] - angles[k] * angles[k] * y * y - f64::from(eps) * w[k]).abs()
        })
        .fold(0.0, f64::max)
}

/// Integrate the frame along a closed sample loop through all three chart
/// regions and report the determinant drift.
pub fn det_drift_sample(ev: &WeierstrassEvaluator) -> Result<f64> {
    let waypoints = [
        BASEPOINT,
        Complex64::new(-1.5, 0.8),
        Complex64::new(0.5, 2.2),
        Complex64::new(2.5, 0.8),
        BASEPOINT,
    ];
    let mut path = vec![BASEPOINT];
    for legs in waypoints.windows(2) {
        let leg = plan_path(legs[0], legs[1], PATH_CLEARANCE)?;
        path.extend_from_slice(&leg[1..]);
    }
    Ok(integrate_bryant(ev, &path)?.det_drift())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{frame_angles, TripleConfig};
    use crate::specfun::connection_matrices;
    use crate::trinoid::{trinoid_evaluator, trinoid_rhs, TrinoidSpec};
    use rand::SeedableRng;

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

    #[test]
    fn wronskian_and_overlap_samples_are_tight() {
        let x = ExponentSet::new(0.6, 0.6, 0.6).unwrap();
        let conn = connection_matrices(&x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (max_w, rows) = wronskian_samples(&x, &conn, 120, &mut rng).unwrap();
        assert_eq!(rows.len(), 120);
        assert!(max_w < 1e-10, "wronskian max {max_w:.3e}");
        let (max_o, rows) = overlap_samples(&x, &conn).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(max_o < 1e-10, "overlap max {max_o:.3e}");
    }

    #[test]
    fn connection_product_identities_hold() {
        // Principal lifts of the symmetric configuration.
        let cfg = symmetric_config();
        let fa = frame_angles(&cfg).unwrap();
        let x = ExponentSet::new(0.6, 0.6, 0.6).unwrap();
        let conn = connection_matrices(&x).unwrap();
        let (plain, hat) = connection_products(&conn, fa.t, fa.t_hat);
        assert!(plain < 1e-13, "plain product defect {plain:.3e}");
        assert!(hat < 1e-13, "hat product defect {hat:.3e}");

        // Non-principal lifts from a trinoid with growths off (0, 1).
        let spec = TrinoidSpec::new(1.4, 0.6, 2.6).unwrap();
        let te = trinoid_rhs(&spec).unwrap();
        let fa = frame_angles(&te.cfg).unwrap();
        let x = ExponentSet::new(te.ends.alpha, te.ends.beta, te.ends.gamma).unwrap();
        let conn = connection_matrices(&x).unwrap();
        let (plain, hat) = connection_products(&conn, fa.t, fa.t_hat);
        assert!(plain < 1e-12, "lifted plain defect {plain:.3e}");
        assert!(hat < 1e-12, "lifted hat defect {hat:.3e}");
    }

    #[test]
    fn residual_flags_a_perturbed_triple() {
        let spec = TrinoidSpec::new(0.6, 0.6, 0.6).unwrap();
        let te = trinoid_rhs(&spec).unwrap();
        let sol = crate::trinoid::trinoid_pqr(&spec).unwrap();
        let good = [sol.solution.p, sol.solution.q, sol.solution.r];
        assert!(period_residual(&te.ends, te.eps, good) < 1e-12);
        let bad = [good[0] + 1e-3, good[1], good[2]];
        let res = period_residual(&te.ends, te.eps, bad);
        assert!(res > 1e-4, "perturbed residual {res:.3e}");
    }

    #[test]
    fn sample_loop_preserves_the_determinant() {
        let spec = TrinoidSpec::new(0.6, 0.6, 0.6).unwrap();
        let ev = trinoid_evaluator(&spec, false).unwrap();
        let drift = det_drift_sample(&ev).unwrap();
        assert!(drift < 1e-9, "det drift {drift:.3e}");
    }
}
