//! End data, the quadratic polynomial φ, and the real period system.
//!
//! A configuration together with a choice of angle lifts determines end data
//! (α, β, γ, A, B, C, ε0). The closing conditions reduce to a real system in
//! (p, q, r): p² − α²(p+q+r)² = εAα/2π, and cyclically for (q, β, B) and
//! (r, γ, C). `solve_pqr` finds all solutions by a bracketed scan over the
//! eight sign branches; the linear change of variables to the spinor
//! coefficients (a, b, c) and the end weights of the log-linear term Λ̂ are
//! provided alongside.

use crate::error::{Error, Result};
use crate::geometry::TripleConfig;
use crate::specfun::ConnectionMatrices;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

const INT_TOL: f64 = 1e-12;
const LIFT_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;
const SCAN_POINTS: usize = 4096;

/// Reduce r modulo 2 into (-1, 1].
pub fn reduce_mod2(r: f64) -> f64 {
    let mut m = r.rem_euclid(2.0);
    if m > 1.0 {
        m -= 2.0;
    }
    m
}

/// End data: angle lifts with |[α]| = α0 etc., signed distances, chirality.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EndParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub dist_a: f64,
    pub dist_b: f64,
    pub dist_c: f64,
    pub eps0: i8,
}

impl EndParams {
    /// Direct constructor; rejects integer angles and zero weights.
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        dist_a: f64,
        dist_b: f64,
        dist_c: f64,
        eps0: i8,
    ) -> Result<Self> {
        for (name, v) in [("α", alpha), ("β", beta), ("γ", gamma)] {
            if (v - v.round()).abs() < INT_TOL {
                return Err(Error::invalid(format!(
                    "angle {name} = {v} is (nearly) an integer"
                )));
            }
        }
        for (name, v) in [("A", dist_a), ("B", dist_b), ("C", dist_c)] {
            if v.abs() < INT_TOL || !v.is_finite() {
                return Err(Error::invalid(format!("distance {name} must be nonzero")));
            }
        }
        if eps0 != 1 && eps0 != -1 {
            return Err(Error::invalid("eps0 must be +1 or -1"));
        }
        Ok(EndParams { alpha, beta, gamma, dist_a, dist_b, dist_c, eps0 })
    }

    /// End data with the minimal lifts α = α0, β = β0, γ = γ0.
    pub fn from_config(cfg: &TripleConfig) -> Result<Self> {
        EndParams::new(
            cfg.alpha0,
            cfg.beta0,
            cfg.gamma0,
            cfg.dist_a,
            cfg.dist_b,
            cfg.dist_c,
            cfg.eps0,
        )
    }

    /// End data with explicit lifts, validated against the configuration
    /// angles: |[lift]| must equal the angle invariant (mod-2 reduction).
    pub fn with_lifts(cfg: &TripleConfig, lifts: [f64; 3]) -> Result<Self> {
        for (name, lift, angle) in [
            ("α", lifts[0], cfg.alpha0),
            ("β", lifts[1], cfg.beta0),
            ("γ", lifts[2], cfg.gamma0),
        ] {
            if (reduce_mod2(lift).abs() - angle).abs() > LIFT_TOL {
                return Err(Error::invalid(format!(
                    "lift {name} = {lift} is not congruent to ±{angle} mod 2"
                )));
            }
        }
        EndParams::new(
            lifts[0],
            lifts[1],
            lifts[2],
            cfg.dist_a,
            cfg.dist_b,
            cfg.dist_c,
            cfg.eps0,
        )
    }

    /// The three weights (Aα/2π, Bβ/2π, Cγ/2π).
    pub fn weights(&self) -> [f64; 3] {
        [
            self.dist_a * self.alpha / (2.0 * PI),
            self.dist_b * self.beta / (2.0 * PI),
            self.dist_c * self.gamma / (2.0 * PI),
        ]
    }
}

/// Nature of the root pair of φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootClass {
    ConjugatePair,
    RealDistinct,
    RealDouble,
}

/// The real quadratic φ(z) = (Bβ/2π)z(z−1) − (Aα/2π)(z−1) + (Cγ/2π)z,
/// stored as c2 z² + c1 z + c0 with its roots and scaled discriminant
/// δ = (2π)²(c1² − 4 c2 c0).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiPolynomial {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub delta: f64,
    pub roots: (Complex64, Complex64),
    pub class: RootClass,
}

impl PhiPolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.c2 * z + self.c1) * z + self.c0
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        2.0 * self.c2 * z + self.c1
    }

    pub fn second_deriv(&self) -> f64 {
        2.0 * self.c2
    }

    /// Discriminant c1² − 4 c2 c0 (unscaled).
    pub fn disc(&self) -> f64 {
        self.delta / (4.0 * PI * PI)
    }
}

/// Build φ from end data. The leading coefficient Bβ/2π is nonzero for any
/// valid end data, so φ is genuinely quadratic.
pub fn build_phi(ends: &EndParams) -> Result<PhiPolynomial> {
    let [wa, wb, wc] = ends.weights();
    let c2 = wb;
    let c1 = -wb - wa + wc;
    let c0 = wa;
    if c2.abs() < 1e-300 {
        return Err(Error::invalid("φ degenerates: Bβ = 0"));
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let delta = (2.0 * PI) * (2.0 * PI) * disc;
    let (roots, class) = if disc < 0.0 {
        let im = (-disc).sqrt() / (2.0 * c2);
        let re = -c1 / (2.0 * c2);
        let upper = Complex64::new(re, im.abs());
        let lower = Complex64::new(re, -im.abs());
        ((upper, lower), RootClass::ConjugatePair)
    } else if disc == 0.0 {
        let r = Complex64::new(-c1 / (2.0 * c2), 0.0);
        ((r, r), RootClass::RealDouble)
    } else {
        // Stable form: avoid cancellation in the smaller root.
        let sq = disc.sqrt();
        let qq = -0.5 * (c1 + c1.signum() * sq);
        let (r1, r2) = (qq / c2, c0 / qq);
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        (
            (Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)),
            RootClass::RealDistinct,
        )
    };
    Ok(PhiPolynomial { c2, c1, c0, delta, roots, class })
}

/// The closed criterion for a conjugate root pair: the three weights share a
/// sign and the square roots of their magnitudes satisfy the strict triangle
/// inequalities.
pub fn conjugate_pair_criterion(ends: &EndParams) -> bool {
    let w = ends.weights();
    let same_sign = w.iter().all(|v| *v > 0.0) || w.iter().all(|v| *v < 0.0);
    if !same_sign {
        return false;
    }
    let s: Vec<f64> = w.iter().map(|v| v.abs().sqrt()).collect();
    s[0] < s[1] + s[2] && s[1] < s[0] + s[2] && s[2] < s[0] + s[1]
}

/// One solution of the period system, with its sign branch and scan root.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PqrSolution {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// p + q + r at the scan root.
    pub y: f64,
    pub branch: [i8; 3],
    pub residual: f64,
}

fn radicand(angle: f64, rhs: f64, y: f64) -> f64 {
    angle * angle * y * y + rhs
}

fn branch_value(angles: [f64; 3], rhs: [f64; 3], signs: [i8; 3], y: f64) -> Option<f64> {
    let mut sum = -y;
    for k in 0..3 {
        let rad = radicand(angles[k], rhs[k], y);
        if rad < 0.0 {
            return None;
        }
        sum += f64::from(signs[k]) * rad.sqrt();
    }
    Some(sum)
}

fn max_residual(angles: [f64; 3], rhs: [f64; 3], p: f64, q: f64, r: f64) -> f64 {
    let s = p + q + r;
    let vals = [p, q, r];
    (0..3)
        .map(|k| (vals[k] * vals[k] - angles[k] * angles[k] * s * s - rhs[k]).abs())
        .fold(0.0, f64::max)
}

/// Solve the period system p² − α²(p+q+r)² = rhs_a (and cyclic) for the
/// given right-hand sides. Returns one representative per ± pair, sorted by
/// scan root then branch. Every returned solution has residual ≤ 1e-10.
pub fn solve_pqr(angles: [f64; 3], rhs: [f64; 3]) -> Result<Vec<PqrSolution>> {
    let max_sqrt = rhs.iter().map(|v| v.abs().sqrt()).fold(0.0, f64::max);
    // Domain endpoints: zeros of the radicands (for negative right-hand
    // sides); branch roots can sit exactly there.
    let mut endpoints: Vec<f64> = Vec::new();
    for k in 0..3 {
        if rhs[k] < 0.0 {
            let y0 = (-rhs[k]).sqrt() / angles[k].abs();
            endpoints.push(y0);
            endpoints.push(-y0);
        }
    }
    let span = 10.0 * (1.0 + max_sqrt);
    let span = endpoints
        .iter()
        .fold(span, |acc, e| acc.max(1.5 * e.abs() + 1.0));

    let mut nodes: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| -span + 2.0 * span * (i as f64) / (SCAN_POINTS as f64))
        .collect();
    nodes.extend_from_slice(&endpoints);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup();

    let scale = 1.0 + rhs.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut raw: Vec<PqrSolution> = Vec::new();
    let mut push_root = |y: f64, signs: [i8; 3]| {
        let mut vals = [0.0; 3];
        for k in 0..3 {
            let rad = radicand(angles[k], rhs[k], y).max(0.0);
            vals[k] = f64::from(signs[k]) * rad.sqrt();
        }
        let res = max_residual(angles, rhs, vals[0], vals[1], vals[2]);
        if res <= RESIDUAL_TOL * scale {
            raw.push(PqrSolution {
                p: vals[0],
                q: vals[1],
                r: vals[2],
                y,
                branch: signs,
                residual: res,
            });
        }
    };

    for sa in [1i8, -1] {
        for sb in [1i8, -1] {
            for sc in [1i8, -1] {
                let signs = [sa, sb, sc];
                let mut prev: Option<(f64, f64)> = None;
                for &y in &nodes {
                    let Some(f) = branch_value(angles, rhs, signs, y) else {
                        prev = None;
                        continue;
                    };
                    if f.abs() <= 1e-12 * scale {
                        push_root(y, signs);
                        prev = Some((y, f));
                        continue;
                    }
                    if let Some((y0, f0)) = prev {
                        if f0 * f < 0.0 {
                            // Bisection; the branch is continuous on the
                            // bracket since both ends are in its domain.
                            let (mut lo, mut hi, mut flo) = (y0, y, f0);
                            for _ in 0..200 {
                                let mid = 0.5 * (lo + hi);
                                let fm = branch_value(angles, rhs, signs, mid)
                                    .ok_or_else(|| Error::numerical("branch left its domain"))?;
                                if flo * fm <= 0.0 {
                                    hi = mid;
                                } else {
                                    lo = mid;
                                    flo = fm;
                                }
                                if hi - lo < 1e-15 * (1.0 + mid.abs()) {
                                    break;
                                }
                            }
                            push_root(0.5 * (lo + hi), signs);
                        }
                    }
                    prev = Some((y, f));
                }
            }
        }
    }

    // Deduplicate modulo the simultaneous sign flip (p,q,r) → (−p,−q,−r);
    // the representative has its first nonzero of (y, p, q, r) positive.
    let canon = |s: &PqrSolution| -> PqrSolution {
        let lead = [s.y, s.p, s.q, s.r]
            .into_iter()
            .find(|v| v.abs() > 1e-13)
            .unwrap_or(1.0);
        if lead < 0.0 {
            PqrSolution {
                p: -s.p,
                q: -s.q,
                r: -s.r,
                y: -s.y,
                branch: [-s.branch[0], -s.branch[1], -s.branch[2]],
                residual: s.residual,
            }
        } else {
            *s
        }
    };
    let mut out: Vec<PqrSolution> = Vec::new();
    for s in raw.iter().map(|s| canon(s)) {
        let dup = out.iter().any(|t| {
            (t.p - s.p).abs() + (t.q - s.q).abs() + (t.r - s.r).abs() < 1e-8 * scale
        });
        if !dup {
            out.push(s);
        }
    }
    out.sort_by(|a, b| {
        a.y.partial_cmp(&b.y)
            .unwrap()
            .then_with(|| a.branch.cmp(&b.branch))
    });
    Ok(out)
}

/// Solve the period system for end data, with ε already applied to the
/// right-hand sides: rhs_k = ε · weight_k.
pub fn solve_pqr_for_ends(ends: &EndParams, eps: i8) -> Result<Vec<PqrSolution>> {
    let w = ends.weights();
    let e = f64::from(eps);
    solve_pqr(
        [ends.alpha, ends.beta, ends.gamma],
        [e * w[0], e * w[1], e * w[2]],
    )
}

/// Spinor polynomial coefficients (a, b, c) from (p, q, r):
/// a = p − α(p+q+r), b = q − (1−α−γ)(p+q+r), c = 2(p+q+r).
pub fn abc_from_pqr(p: f64, q: f64, r: f64, alpha: f64, gamma: f64) -> (f64, f64, f64) {
    let s = p + q + r;
    (p - alpha * s, q - (1.0 - alpha - gamma) * s, 2.0 * s)
}

/// Inverse change of variables: p = a + (α/2)c, q = b + ((1−α−γ)/2)c,
/// r = −a − b + (γ/2)c.
pub fn pqr_from_abc(a: f64, b: f64, c: f64, alpha: f64, gamma: f64) -> (f64, f64, f64) {
    (
        a + 0.5 * alpha * c,
        b + 0.5 * (1.0 - alpha - gamma) * c,
        -a - b + 0.5 * gamma * c,
    )
}

/// The sign ε = sign(ε0 ν11 / (α ν21)) fixing which of the two ± systems the
/// period conditions select.
pub fn epsilon_sign(eps0: i8, alpha: f64, nu: &ConnectionMatrices) -> Result<i8> {
    let (n11, n21) = (nu.nu[0][0], nu.nu[1][0]);
    if n21.abs() < 1e-300 || n11.abs() < 1e-300 {
        return Err(Error::numerical("degenerate connection coefficients"));
    }
    let v = f64::from(eps0) * n11 / (alpha * n21);
    Ok(if v > 0.0 { 1 } else { -1 })
}

/// The spinor scaling: μ = +√(t ν11 / (ε α ν21)) and λ = −ε i α μ. The
/// radicand is positive whenever ε was produced by `epsilon_sign` for the
/// configuration that produced t.
pub fn normalize_lambda_mu(
    eps: i8,
    alpha: f64,
    t: f64,
    nu: &ConnectionMatrices,
) -> Result<(Complex64, f64)> {
    let radicand = t * nu.nu[0][0] / (f64::from(eps) * alpha * nu.nu[1][0]);
    if !(radicand > 0.0) {
        return Err(Error::numerical(format!(
            "non-positive radicand {radicand:.3e} for the spinor scaling"
        )));
    }
    let mu = radicand.sqrt();
    let lambda = Complex64::new(0.0, -f64::from(eps) * alpha * mu);
    Ok((lambda, mu))
}

/// Weights of the log-linear term at z = 0 and z = 1:
/// Λ̂(0) = ε(p+q+r)[(γ²−β²)(2p+q+r) + (1−α²)(q−r)],
/// Λ̂(1) = ε(p+q+r)[(α²−β²)(p+q+2r) + (1−γ²)(q−p)].
/// The value attached to the end at infinity is Λ̂(1) − Λ̂(0).
pub fn hat_lambda_values(
    eps: i8,
    angles: [f64; 3],
    p: f64,
    q: f64,
    r: f64,
) -> (f64, f64) {
    let [alpha, beta, gamma] = angles;
    let s = p + q + r;
    let e = f64::from(eps);
    let at0 = e * s * ((gamma * gamma - beta * beta) * (2.0 * p + q + r) + (1.0 - alpha * alpha) * (q - r));
    let at1 = e * s * ((alpha * alpha - beta * beta) * (p + q + 2.0 * r) + (1.0 - gamma * gamma) * (q - p));
    (at0, at1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{frame_angles, TripleConfig};
    use crate::specfun::{connection_matrices, ExponentSet};
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

    #[test]
    fn mod2_reduction() {
        assert!((reduce_mod2(2.6) - 0.6).abs() < 1e-15);
        assert!((reduce_mod2(-0.6) + 0.6).abs() < 1e-15);
        assert_eq!(reduce_mod2(1.0), 1.0);
        assert!((reduce_mod2(-1.4) - 0.6).abs() < 1e-15);
        assert!((reduce_mod2(1.4) + 0.6).abs() < 1e-15);
        assert_eq!(reduce_mod2(0.0), 0.0);
    }

    #[test]
    fn lift_validation() {
        let cfg = symmetric_config();
        assert!(EndParams::with_lifts(&cfg, [2.6, 0.6, 0.6]).is_ok());
        assert!(EndParams::with_lifts(&cfg, [-1.4, 0.6, -0.6]).is_ok());
        assert!(EndParams::with_lifts(&cfg, [0.7, 0.6, 0.6]).is_err());
        assert!(EndParams::with_lifts(&cfg, [1.6, 0.6, 0.6]).is_err());
    }

    #[test]
    fn phi_symmetric_case() {
        let ends = EndParams::from_config(&symmetric_config()).unwrap();
        let phi = build_phi(&ends).unwrap();
        // All weights equal k = 0.6/2π, so φ = k(z² − z + 1) with roots
        // (1 ± i√3)/2 and δ = −3·(0.6)².
        let k = 0.6 / (2.0 * PI);
        assert!((phi.c2 - k).abs() < 1e-15);
        assert!((phi.c1 + k).abs() < 1e-15);
        assert!((phi.c0 - k).abs() < 1e-15);
        assert!((phi.delta + 3.0 * 0.36).abs() < 1e-12);
        assert_eq!(phi.class, RootClass::ConjugatePair);
        let expect = Complex64::new(0.5, 0.5 * 3.0_f64.sqrt());
        assert!((phi.roots.0 - expect).norm() < 1e-14);
        assert!((phi.roots.1 - expect.conj()).norm() < 1e-14);
        // The roots really are roots.
        assert!(phi.eval(phi.roots.0).norm() < 1e-16);
    }

    #[test]
    fn conjugate_criterion_matches_discriminant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut both_seen = (false, false);
        for _ in 0..500 {
            let ends = EndParams::new(
                rng.gen_range(0.05..0.95),
                rng.gen_range(0.05..0.95),
                rng.gen_range(0.05..0.95),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                1,
            );
            let Ok(ends) = ends else { continue };
            let Ok(phi) = build_phi(&ends) else { continue };
            if phi.delta.abs() < 1e-12 {
                continue;
            }
            let conj = conjugate_pair_criterion(&ends);
            assert_eq!(conj, phi.delta < 0.0, "ends {ends:?}");
            if conj {
                both_seen.0 = true;
            } else {
                both_seen.1 = true;
            }
        }
        assert!(both_seen.0 && both_seen.1);
    }

    #[test]
    fn pqr_abc_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (alpha, gamma) = (rng.gen_range(0.05..2.95), rng.gen_range(0.05..2.95));
            let (a, b, c) = (
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let (p, q, r) = pqr_from_abc(a, b, c, alpha, gamma);
            let (a2, b2, c2) = abc_from_pqr(p, q, r, alpha, gamma);
            assert!((a - a2).abs() < 1e-12);
            assert!((b - b2).abs() < 1e-12);
            assert!((c - c2).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_system_solutions() {
        // For α = β = γ = 0.6 and all right-hand sides k = 0.6/2π, the
        // solutions mod sign are the three one-negative patterns
        // (y, y, −y), (y, −y, y), (−y, y, y) with y = √(k/0.64).
        let k = 0.6 / (2.0 * PI);
        let sols = solve_pqr([0.6, 0.6, 0.6], [k, k, k]).unwrap();
        assert_eq!(sols.len(), 3, "sols: {sols:?}");
        let y = (k / 0.64).sqrt();
        for s in &sols {
            assert!(s.residual <= 1e-10);
            assert!((s.y.abs() - y).abs() < 1e-12, "y = {}", s.y);
            let mag_ok = [s.p, s.q, s.r].iter().all(|v| (v.abs() - y).abs() < 1e-12);
            assert!(mag_ok, "solution {s:?}");
            let negs = [s.p, s.q, s.r].iter().filter(|v| **v < 0.0).count();
            assert_eq!(negs, 1, "solution {s:?}");
        }
        // Distinct patterns.
        let pats: Vec<[bool; 3]> = sols
            .iter()
            .map(|s| [s.p < 0.0, s.q < 0.0, s.r < 0.0])
            .collect();
        assert!(pats.contains(&[true, false, false]));
        assert!(pats.contains(&[false, true, false]));
        assert!(pats.contains(&[false, false, true]));

        // Frozen values from the all-0.6 case.
        let first = sols.iter().find(|s| s.r < 0.0).unwrap();
        assert!((first.y - 0.386274202023189580).abs() < 1e-12);
        let (a, b, c) = abc_from_pqr(first.p, first.q, first.r, 0.6, 0.6);
        assert!((a - 0.154509680809275832).abs() < 1e-12);
        assert!((b - 0.463529042427827496).abs() < 1e-12);
        assert!((c - 0.772548404046379161).abs() < 1e-12);
    }

    #[test]
    fn scan_picks_up_domain_endpoint_roots() {
        // With a negative right-hand side the branch domain has endpoints at
        // the radicand zeros; construct a case whose root sits exactly
        // there: p² − α²y² = rhs_a with p = 0 forces y = √(−rhs_a)/α, and
        // picking the other two right-hand sides accordingly makes
        // (0, q, r) with q + r = y a solution.
        let (alpha, beta, gamma) = (0.5, 0.4, 0.3);
        let y0: f64 = 2.0;
        let rhs_a = -(alpha * alpha) * y0 * y0; // p = 0 at y0
        let q = 1.5;
        let r = y0 - q;
        let rhs_b = q * q - beta * beta * y0 * y0;
        let rhs_c = r * r - gamma * gamma * y0 * y0;
        let sols = solve_pqr([alpha, beta, gamma], [rhs_a, rhs_b, rhs_c]).unwrap();
        let hit = sols.iter().any(|s| {
            (s.p - 0.0).abs() < 1e-9 && (s.q - q).abs() < 1e-9 && (s.r - r).abs() < 1e-9
        });
        assert!(hit, "missing endpoint root; got {sols:?}");
    }

    #[test]
    fn residuals_verified_against_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let angles = [
                rng.gen_range(0.1..0.9),
                rng.gen_range(0.1..0.9),
                rng.gen_range(0.1..0.9),
            ];
            let rhs = [
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
            ];
            let sols = solve_pqr(angles, rhs).unwrap();
            for s in &sols {
                assert!(
                    max_residual(angles, rhs, s.p, s.q, s.r) <= 1e-10,
                    "residual too large for {s:?}"
                );
            }
        }
    }

    #[test]
    fn hat_lambda_difference_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let angles = [
                rng.gen_range(0.1..2.9),
                rng.gen_range(0.1..2.9),
                rng.gen_range(0.1..2.9),
            ];
            let (p, q, r) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            for eps in [1i8, -1] {
                let (l0, l1) = hat_lambda_values(eps, angles, p, q, r);
                let [alpha, beta, gamma] = angles;
                let s = p + q + r;
                let diff = f64::from(eps)
                    * s
                    * ((alpha * alpha - gamma * gamma) * (p + 2.0 * q + r)
                        + (1.0 - beta * beta) * (r - p));
                assert!(
                    (l1 - l0 - diff).abs() < 1e-12 * (1.0 + l0.abs() + l1.abs()),
                    "difference identity"
                );
            }
        }
    }

    #[test]
    fn spinor_scaling_is_consistent() {
        for eps0 in [1i8, -1] {
            let cfg = TripleConfig { eps0, ..symmetric_config() };
            let fa = frame_angles(&cfg).unwrap();
            let exps = ExponentSet::new(0.6, 0.6, 0.6).unwrap();
            let nu = connection_matrices(&exps).unwrap();
            let eps = epsilon_sign(eps0, 0.6, &nu).unwrap();
            let (lambda, mu) = normalize_lambda_mu(eps, 0.6, fa.t, &nu).unwrap();
            assert!(mu > 0.0);
            // λ = −ε i α μ.
            assert!((lambda - Complex64::new(0.0, -f64::from(eps) * 0.6 * mu)).norm() < 1e-15);
            // λ² μ² relates back to the defining radicand: λ²μ² = −ε²α²μ⁴.
            let lm = lambda * lambda * mu * mu;
            assert!((lm.re + 0.36 * mu.powi(4)).abs() < 1e-12);
            assert!(lm.im.abs() < 1e-15);
        }
    }
}
