//! Trinoid growth data: admissibility checks, the closed-form period
//! solutions, and evaluators for trinoid Weierstrass data.
//!
//! A trinoid is specified by three positive non-integer reals (μ0, μ1, μ∞);
//! the ends at 0, 1, ∞ have growths 1−μ0, 1−μ1, 1−μ∞. The angle lifts are
//! α = ±μ0, β = ±μ∞, γ = ±μ1 with the sign fixed by the congruence
//! α ∈ |[μ0]| + 2ℤ, and the signed distances follow from the closing
//! condition Aα/2π = (α²−1)/4 (cyclically for B, C). With those right-hand
//! sides the period system has closed-form solutions built from three
//! quartics (U, V, W) and the eight-fold product Π = ∏(1 ± α ± β ± γ):
//! δ² = −1/(4Π), and the admissible ("good") solution is ±(Uδ, Vδ, Wδ)
//! when δ is real (Π < 0, the ε = +1 system) or ±(iUδ, iVδ, iWδ) when δ is
//! imaginary (Π > 0, the ε = −1 system). The ε = −1 system additionally
//! always carries the three real half-solutions (½, ½, −½), (½, −½, ½),
//! (−½, ½, ½); these never annihilate the log-linear weights Λ̂ unless a
//! collision degeneracy occurs, which makes them useful as non-embedded
//! controls.

use crate::error::{Error, Result};
use crate::geometry::{frame_angles, in_angle_region, TripleConfig};
use crate::solver::{
    epsilon_sign, hat_lambda_values, reduce_mod2, EndParams, PqrSolution,
};
use crate::specfun::{connection_matrices, ExponentSet};
use crate::surface::WeierstrassEvaluator;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const INT_TOL: f64 = 1e-9;
/// |d(μ)| below this flags the double-root (singular-trinoid) degeneracy.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Growth data of a three-ended surface: ends of growth 1−μ at 0, 1, ∞.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrinoidSpec {
    pub mu0: f64,
    pub mu1: f64,
    pub mu_inf: f64,
}

/// The congruence-fixed lift: +μ when [μ] > 0, else −μ, so that the lift
/// always lies in |[μ]| + 2ℤ.
fn lift(mu: f64) -> f64 {
    if reduce_mod2(mu) > 0.0 {
        mu
    } else {
        -mu
    }
}

impl TrinoidSpec {
    /// Validates positivity and non-integrality; admissibility of the angle
    /// invariants is reported by [`growth_check`] and enforced by the
    /// solution pipeline.
    pub fn new(mu0: f64, mu1: f64, mu_inf: f64) -> Result<Self> {
        for (name, v) in [("mu0", mu0), ("mu1", mu1), ("mu_inf", mu_inf)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be a positive real")));
            }
            if (v - v.round()).abs() < INT_TOL {
                return Err(Error::invalid(format!(
                    "{name} = {v} is (nearly) an integer"
                )));
            }
        }
        Ok(TrinoidSpec { mu0, mu1, mu_inf })
    }

    pub fn mu(&self) -> [f64; 3] {
        [self.mu0, self.mu1, self.mu_inf]
    }

    /// End growths (1−μ0, 1−μ1, 1−μ∞).
    pub fn growths(&self) -> [f64; 3] {
        [1.0 - self.mu0, 1.0 - self.mu1, 1.0 - self.mu_inf]
    }

    /// Angle invariants (α0, β0, γ0) = (|[μ0]|, |[μ∞]|, |[μ1]|); note the
    /// end at ∞ carries β and the end at 1 carries γ.
    pub fn angle_invariants(&self) -> [f64; 3] {
        [
            reduce_mod2(self.mu0).abs(),
            reduce_mod2(self.mu_inf).abs(),
            reduce_mod2(self.mu1).abs(),
        ]
    }

    /// Angle lifts (α, β, γ) = (±μ0, ±μ∞, ±μ1) per the congruence rule.
    pub fn lifts(&self) -> [f64; 3] {
        [lift(self.mu0), lift(self.mu_inf), lift(self.mu1)]
    }
}

/// Outcome of the admissibility checks on growth data.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthCheck {
    /// (|[μ0]|, |[μ1]|, |[μ∞]|) lies in the admissible angle region.
    pub in_k: bool,
    /// The degeneracy quartic d(μ) is nonzero (no double root of φ).
    pub nondegenerate: bool,
    /// cos²(πμ0)+cos²(πμ1)+cos²(πμ∞)+2cos(πμ0)cos(πμ1)cos(πμ∞) < 1.
    pub umehara: bool,
    /// The trigonometric test and the region test agree (they are
    /// equivalent for all positive non-integer μ).
    pub umehara_equivalent: bool,
    /// d(μ) = μ0⁴+μ1⁴+μ∞⁴ − 2(μ0²μ1²+μ0²μ∞²+μ1²μ∞²) + 2(μ0²+μ1²+μ∞²) − 3.
    pub degeneracy: f64,
}

/// The degeneracy quartic d(μ); it equals −(U+V+W), which in turn is
/// 16·(c1²−4c2c0) for the quadratic φ built from the matched weights
/// (equivalently, −4 times the discriminant of the doubled form −2φ), so
/// d = 0 exactly when φ has a double root.
pub fn degeneracy_quartic(mu: [f64; 3]) -> f64 {
    let [u, v, w] = [mu[0] * mu[0], mu[1] * mu[1], mu[2] * mu[2]];
    u * u + v * v + w * w - 2.0 * (u * v + u * w + v * w) + 2.0 * (u + v + w) - 3.0
}

/// Evaluate both admissibility tests and the degeneracy quartic.
pub fn growth_check(spec: &TrinoidSpec) -> GrowthCheck {
    let [a0, b0, g0] = spec.angle_invariants();
    let in_k = in_angle_region(a0, g0, b0);
    let degeneracy = degeneracy_quartic(spec.mu());
    let (c0, c1, ci) = (
        (PI * spec.mu0).cos(),
        (PI * spec.mu1).cos(),
        (PI * spec.mu_inf).cos(),
    );
    let umehara = c0 * c0 + c1 * c1 + ci * ci + 2.0 * c0 * c1 * ci < 1.0;
    GrowthCheck {
        in_k,
        nondegenerate: degeneracy.abs() > DEGENERACY_TOL,
        umehara,
        umehara_equivalent: umehara == in_k,
        degeneracy,
    }
}

/// The quartics (U, V, W) of the closed-form solution:
/// U = −3α⁴ + 2(1+β²+γ²)α² + β⁴ + γ⁴ − 2(β²+γ²+β²γ²) + 1, and cyclically
/// in (α, β, γ) for V and W.
pub fn trinoid_quartics(alpha: f64, beta: f64, gamma: f64) -> [f64; 3] {
    let (a, b, c) = (alpha * alpha, beta * beta, gamma * gamma);
    let quartic = |x: f64, y: f64, z: f64| {
        -3.0 * x * x + 2.0 * (1.0 + y + z) * x + y * y + z * z - 2.0 * (y + z + y * z) + 1.0
    };
    [quartic(a, b, c), quartic(b, c, a), quartic(c, a, b)]
}

/// The product Π = ∏(1 ± α ± β ± γ) over all eight sign choices; even in
/// each argument, so lift signs do not matter.
pub fn sign_product(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let mut prod = 1.0;
    for i in 0..8 {
        let sa = if i & 4 != 0 { 1.0 } else { -1.0 };
        let sb = if i & 2 != 0 { 1.0 } else { -1.0 };
        let sc = if i & 1 != 0 { 1.0 } else { -1.0 };
        prod *= 1.0 + sa * alpha + sb * beta + sc * gamma;
    }
    prod
}

/// The closed-form solution sets of the two trinoid period systems for the
/// given angle lifts (pure arithmetic; no admissibility requirement).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosedForms {
    pub quartics: [f64; 3],
    pub pi_product: f64,
    /// The admissible solution (real), sign-canonicalized.
    pub good: [f64; 3],
    /// Sign ε of the system the good solution solves: +1 when Π < 0
    /// (δ real), −1 when Π > 0 (δ imaginary).
    pub good_eps: i8,
    /// |δ| where δ² = −1/(4Π).
    pub delta_abs: f64,
    /// The three half-solutions, always real solutions of the ε = −1 system.
    pub half: [[f64; 3]; 3],
}

fn canonical_sign(v: [f64; 3]) -> [f64; 3] {
    let y = v[0] + v[1] + v[2];
    let lead = [y, v[0], v[1], v[2]]
        .into_iter()
        .find(|x| x.abs() > 1e-13)
        .unwrap_or(1.0);
    if lead < 0.0 {
        [-v[0], -v[1], -v[2]]
    } else {
        v
    }
}

/// Compute the closed forms from angle lifts. Rejects Π = 0 (an integer
/// exponent degeneracy).
pub fn closed_forms(alpha: f64, beta: f64, gamma: f64) -> Result<ClosedForms> {
    let quartics = trinoid_quartics(alpha, beta, gamma);
    let pi_product = sign_product(alpha, beta, gamma);
    if pi_product.abs() < 1e-12 {
        return Err(Error::invalid(
            "Π = ∏(1 ± α ± β ± γ) vanishes: integer exponent degeneracy",
        ));
    }
    let delta_abs = (0.25 / pi_product.abs()).sqrt();
    let (good_eps, scale) = if pi_product < 0.0 {
        // δ real: (Uδ, Vδ, Wδ) solves the ε = +1 system.
        (1i8, delta_abs)
    } else {
        // δ = i|δ|: (iUδ, iVδ, iWδ) = −|δ|(U, V, W) solves the ε = −1 system.
        (-1i8, -delta_abs)
    };
    let good = canonical_sign([
        quartics[0] * scale,
        quartics[1] * scale,
        quartics[2] * scale,
    ]);
    let half = [
        [0.5, 0.5, -0.5],
        [0.5, -0.5, 0.5],
        [-0.5, 0.5, 0.5],
    ];
    Ok(ClosedForms { quartics, pi_product, good, good_eps, delta_abs, half })
}

/// End data synthesized from growth data: angle lifts, closing-condition
/// distances, and the chirality ε0 chosen so the connection data selects
/// the system sign the good solution needs.
#[derive(Debug, Clone)]
pub struct TrinoidEnds {
    pub spec: TrinoidSpec,
    pub lifts: [f64; 3],
    pub cfg: TripleConfig,
    pub ends: EndParams,
    /// System sign ε = −sign(Π) selected by the synthesized ε0.
    pub eps: i8,
    pub pi_product: f64,
}

/// Build the trinoid end data (lifts, distances A, B, C with weight
/// (lift²−1)/4, matching ε0). Requires the angle invariants in the
/// admissible region.
pub fn trinoid_rhs(spec: &TrinoidSpec) -> Result<TrinoidEnds> {
    let [a0, b0, g0] = spec.angle_invariants();
    if !in_angle_region(a0, b0, g0) {
        return Err(Error::invalid(format!(
            "growth data ({}, {}, {}): angle invariants ({a0:.6}, {g0:.6}, {b0:.6}) \
             lie outside the admissible region",
            spec.mu0, spec.mu1, spec.mu_inf
        )));
    }
    let [alpha, beta, gamma] = spec.lifts();
    let dist = |l: f64| 2.0 * PI * (l * l - 1.0) / (4.0 * l);
    let (da, db, dc) = (dist(alpha), dist(beta), dist(gamma));

    let exps = ExponentSet::new(alpha, beta, gamma)?;
    let pi_product = exps.pi_product;
    if pi_product.abs() < 1e-12 {
        return Err(Error::invalid("Π vanishes: integer exponent degeneracy"));
    }
    let eps_req: i8 = if pi_product < 0.0 { 1 } else { -1 };
    let nu = connection_matrices(&exps)?;
    // ε = sign(ε0·ν11/(α·ν21)); choose ε0 to hit eps_req.
    let s = if nu.nu[0][0] / (alpha * nu.nu[1][0]) > 0.0 { 1i8 } else { -1i8 };
    let eps0 = eps_req * s;

    let cfg = TripleConfig {
        alpha0: a0,
        beta0: b0,
        gamma0: g0,
        dist_a: da,
        dist_b: db,
        dist_c: dc,
        eps0,
    };
    let ends = EndParams::with_lifts(&cfg, [alpha, beta, gamma])?;
    debug_assert_eq!(epsilon_sign(eps0, alpha, &nu)?, eps_req);
    Ok(TrinoidEnds { spec: *spec, lifts: [alpha, beta, gamma], cfg, ends, eps: eps_req, pi_product })
}

/// The admissible closed-form period solution, verified against the system
/// and the log-linear weights.
#[derive(Debug, Clone, Serialize)]
pub struct TrinoidSolution {
    pub solution: PqrSolution,
    /// Sign of the system the solution solves.
    pub eps: i8,
    pub quartics: [f64; 3],
    pub pi_product: f64,
    /// δ with δ² = −1/(4Π): real for Π < 0, imaginary for Π > 0.
    pub delta: Complex64,
    /// Both log-linear weights Λ̂(0), Λ̂(1); vanish for the good solution.
    pub hat_lambda: (f64, f64),
    /// False when d(μ) ≈ 0 (double root of φ; the trinoid has one singular
    /// point but the solution formulas still apply).
    pub nondegenerate: bool,
}

/// Compute the good solution for growth data and verify it: system
/// residuals and |Λ̂| both below 1e−10.
pub fn trinoid_pqr(spec: &TrinoidSpec) -> Result<TrinoidSolution> {
    let te = trinoid_rhs(spec)?;
    let [alpha, beta, gamma] = te.lifts;
    let cf = closed_forms(alpha, beta, gamma)?;
    debug_assert_eq!(cf.good_eps, te.eps);
    let [p, q, r] = cf.good;
    let y = p + q + r;

    let w = te.ends.weights();
    let angles = [alpha, beta, gamma];
    let vals = [p, q, r];
    let e = f64::from(te.eps);
    let mut residual = 0.0f64;
    for k in 0..3 {
        residual = residual
            .max((vals[k] * vals[k] - angles[k] * angles[k] * y * y - e * w[k]).abs());
    }
    let scale = 1.0 + w.iter().fold(0.0f64, |a, v| a.max(v.abs())) + y * y;
    if residual > 1e-10 * scale {
        return Err(Error::numerical(format!(
            "closed-form solution residual {residual:.2e} exceeds 1e-10"
        )));
    }
    let hat = hat_lambda_values(te.eps, angles, p, q, r);
    if hat.0.abs() > 1e-10 * scale || hat.1.abs() > 1e-10 * scale {
        return Err(Error::numerical(format!(
            "good solution does not annihilate the log-linear weights: \
             Λ̂(0) = {:.2e}, Λ̂(1) = {:.2e}",
            hat.0, hat.1
        )));
    }

    let delta = if cf.pi_product < 0.0 {
        Complex64::new(cf.delta_abs, 0.0)
    } else {
        Complex64::new(0.0, cf.delta_abs)
    };
    let branch = [p, q, r].map(|v| if v >= 0.0 { 1i8 } else { -1i8 });
    Ok(TrinoidSolution {
        solution: PqrSolution { p, q, r, y, branch, residual },
        eps: te.eps,
        quartics: cf.quartics,
        pi_product: cf.pi_product,
        delta,
        hat_lambda: hat,
        nondegenerate: degeneracy_quartic(spec.mu()).abs() > DEGENERACY_TOL,
    })
}

/// Evaluator for trinoid end data with an explicitly chosen system sign and
/// period solution.
fn evaluator_for(
    spec: &TrinoidSpec,
    eps_req: i8,
    solution: PqrSolution,
    flip: bool,
) -> Result<WeierstrassEvaluator> {
    let te = trinoid_rhs(spec)?;
    let cfg = if te.eps == eps_req {
        te.cfg
    } else {
        // Flip the chirality to flip the selected system sign.
        TripleConfig { eps0: -te.cfg.eps0, ..te.cfg }
    };
    let frame = frame_angles(&cfg)?;
    let ends = EndParams::with_lifts(&cfg, te.lifts)?;
    WeierstrassEvaluator::from_ends_with_solution(ends, frame, solution, flip)
}

/// Evaluator for the trinoid immersion: trinoid end data with the good
/// closed-form solution.
pub fn trinoid_evaluator(spec: &TrinoidSpec, flip: bool) -> Result<WeierstrassEvaluator> {
    let ts = trinoid_pqr(spec)?;
    evaluator_for(spec, ts.eps, ts.solution, flip)
}

/// Evaluator for the non-embedded control: the half-solution (½, ½, −½) of
/// the ε = −1 system with the same end data. Its cousin has an embedded end
/// at 1 but non-embedded ends at 0 and ∞ (unless a collision degeneracy
/// makes it coincide with the good solution).
pub fn control_evaluator(spec: &TrinoidSpec, flip: bool) -> Result<WeierstrassEvaluator> {
    let solution = PqrSolution {
        p: 0.5,
        q: 0.5,
        r: -0.5,
        y: 0.5,
        branch: [1, 1, -1],
        residual: 0.0,
    };
    evaluator_for(spec, -1, solution, flip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_pqr_for_ends;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symmetric_spec() -> TrinoidSpec {
        TrinoidSpec::new(0.6, 0.6, 0.6).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(TrinoidSpec::new(0.6, 0.6, 0.6).is_ok());
        assert!(TrinoidSpec::new(2.6, 0.6, 0.6).is_ok());
        assert!(TrinoidSpec::new(1.0, 0.6, 0.6).is_err());
        assert!(TrinoidSpec::new(0.6, 3.0, 0.6).is_err());
        assert!(TrinoidSpec::new(-0.6, 0.6, 0.6).is_err());
        assert!(TrinoidSpec::new(0.6, 0.6, 0.0).is_err());
    }

    #[test]
    fn lift_congruence_rule() {
        assert_eq!(lift(0.6), 0.6);
        assert_eq!(lift(2.6), 2.6);
        assert_eq!(lift(1.4), -1.4);
        assert_eq!(lift(3.4), -3.4);
        let spec = TrinoidSpec::new(1.4, 0.6, 2.6).unwrap();
        assert_eq!(spec.lifts(), [-1.4, 2.6, 0.6]);
        for a in spec.angle_invariants() {
            assert!((a - 0.6).abs() < 1e-12);
        }
        // Each lift lies in |[μ]| + 2ℤ.
        for (l, a) in spec.lifts().iter().zip([0.6, 0.6, 0.6]) {
            let k = (l - a) / 2.0;
            assert!((k - k.round()).abs() < 1e-12, "lift {l} not in {a} + 2Z");
        }
    }

    #[test]
    fn growth_flags_on_reference_triples() {
        let g = growth_check(&symmetric_spec());
        assert!(g.in_k && g.nondegenerate && g.umehara && g.umehara_equivalent);
        assert!((g.degeneracy + 1.2288).abs() < 1e-12);

        let g = growth_check(&TrinoidSpec::new(0.2, 0.2, 0.2).unwrap());
        assert!(!g.in_k && !g.umehara && g.umehara_equivalent);

        let g = growth_check(&TrinoidSpec::new(0.5, 0.5, 0.5).unwrap());
        assert!((g.degeneracy + 27.0 / 16.0).abs() < 1e-14);
        assert!(g.nondegenerate);
    }

    #[test]
    fn umehara_test_agrees_with_region_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..2000 {
            let draw = |r: &mut ChaCha8Rng| {
                loop {
                    let v: f64 = r.gen_range(0.02..2.98);
                    if (v - v.round()).abs() > 1e-3 {
                        return v;
                    }
                }
            };
            let spec =
                TrinoidSpec::new(draw(&mut rng), draw(&mut rng), draw(&mut rng)).unwrap();
            let g = growth_check(&spec);
            assert!(
                g.umehara_equivalent,
                "tests disagree at μ = {:?}: in_k {}, umehara {}",
                spec.mu(),
                g.in_k,
                g.umehara
            );
        }
    }

    #[test]
    fn rhs_reproduces_the_condition() {
        let te = trinoid_rhs(&symmetric_spec()).unwrap();
        assert_eq!(te.lifts, [0.6, 0.6, 0.6]);
        let expected_dist = 2.0 * PI * (0.36 - 1.0) / 2.4;
        assert!((te.ends.dist_a - expected_dist).abs() < 1e-14);
        for w in te.ends.weights() {
            assert!((w + 0.16).abs() < 1e-15, "weight {w}");
        }
        assert_eq!(te.eps, 1);
        // Out-of-region growth data is rejected.
        assert!(trinoid_rhs(&TrinoidSpec::new(0.2, 0.2, 0.2).unwrap()).is_err());
    }

    #[test]
    fn quartics_and_product_on_pinned_triples() {
        let [u, v, w] = trinoid_quartics(0.6, 0.6, 0.6);
        assert!((u - 0.4096).abs() < 1e-14);
        assert!((v - 0.4096).abs() < 1e-14);
        assert!((w - 0.4096).abs() < 1e-14);
        assert!((sign_product(0.6, 0.6, 0.6) + 0.58720256).abs() < 1e-12);

        let [u, v, w] = trinoid_quartics(2.6, 0.6, 0.6);
        assert!((u + 114.2784).abs() < 1e-10);
        assert!((v - 33.1776).abs() < 1e-10);
        assert!((w - 33.1776).abs() < 1e-10);
        assert!((sign_product(2.6, 0.6, 0.6) - 428.07066624).abs() < 1e-8);

        // Lift signs do not matter.
        assert!((sign_product(-1.4, 0.6, 0.6) - sign_product(1.4, 0.6, 0.6)).abs() < 1e-12);
    }

    #[test]
    fn quartic_sum_equals_minus_degeneracy() {
        // U + V + W = −d(μ) for the squared-value identification, any lifts.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let (a, b, g) = (
                rng.gen_range(0.05..2.95),
                rng.gen_range(0.05..2.95),
                rng.gen_range(0.05..2.95),
            );
            let sum: f64 = trinoid_quartics(a, b, g).iter().sum();
            // μ ordering: α ↔ μ0, γ ↔ μ1, β ↔ μ∞; d is symmetric anyway.
            let d = degeneracy_quartic([a, g, b]);
            assert!(
                (sum + d).abs() < 1e-10 * (1.0 + sum.abs()),
                "identity fails at ({a}, {b}, {g}): {sum} vs {}",
                -d
            );
        }
    }

    #[test]
    fn closed_form_solves_the_period_system() {
        // Symmetric case: Π < 0, ε = +1, all components equal.
        let ts = trinoid_pqr(&symmetric_spec()).unwrap();
        assert_eq!(ts.eps, 1);
        assert!(ts.nondegenerate);
        assert!(ts.delta.im == 0.0 && ts.delta.re > 0.0);
        let s = &ts.solution;
        assert!((s.p - s.q).abs() < 1e-15 && (s.q - s.r).abs() < 1e-15);
        let expect = 0.4096 * (0.25 / 0.58720256f64).sqrt();
        assert!((s.p - expect).abs() < 1e-14, "p = {}", s.p);
        assert!(s.residual <= 1e-12);
        assert!(ts.hat_lambda.0.abs() < 1e-14 && ts.hat_lambda.1.abs() < 1e-14);

        // μ0 = 2.6: Π > 0, ε = −1, asymmetric signs.
        let ts = trinoid_pqr(&TrinoidSpec::new(2.6, 0.6, 0.6).unwrap()).unwrap();
        assert_eq!(ts.eps, -1);
        assert!(ts.delta.re == 0.0 && ts.delta.im > 0.0);
        let s = &ts.solution;
        assert!(s.p > 0.0 && s.q < 0.0 && s.r < 0.0);
        assert!((s.q - s.r).abs() < 1e-14);
        assert!(ts.hat_lambda.0.abs() < 1e-10 && ts.hat_lambda.1.abs() < 1e-10);
    }

    #[test]
    fn scan_recovers_the_closed_forms() {
        let close = |a: &[f64; 3], b: &PqrSolution| {
            (a[0] - b.p).abs() + (a[1] - b.q).abs() + (a[2] - b.r).abs() < 1e-9
        };
        // Symmetric case: ε = +1 carries exactly the good solution; ε = −1
        // carries exactly the three half-solutions.
        let te = trinoid_rhs(&symmetric_spec()).unwrap();
        let cf = closed_forms(0.6, 0.6, 0.6).unwrap();
        let plus = solve_pqr_for_ends(&te.ends, 1).unwrap();
        assert_eq!(plus.len(), 1, "{plus:?}");
        assert!(close(&cf.good, &plus[0]));
        let minus = solve_pqr_for_ends(&te.ends, -1).unwrap();
        assert_eq!(minus.len(), 3, "{minus:?}");
        for h in cf.half {
            let hc = canonical_sign(h);
            assert!(minus.iter().any(|s| close(&hc, s)), "missing {hc:?}");
        }

        // μ0 = 2.6: Π > 0, so ε = +1 has no real solution and ε = −1 has
        // the three half-solutions plus the good one.
        let spec = TrinoidSpec::new(2.6, 0.6, 0.6).unwrap();
        let te = trinoid_rhs(&spec).unwrap();
        let cf = closed_forms(2.6, 0.6, 0.6).unwrap();
        let plus = solve_pqr_for_ends(&te.ends, 1).unwrap();
        assert!(plus.is_empty(), "{plus:?}");
        let minus = solve_pqr_for_ends(&te.ends, -1).unwrap();
        assert_eq!(minus.len(), 4, "{minus:?}");
        assert!(minus.iter().any(|s| close(&cf.good, s)));
        for h in cf.half {
            let hc = canonical_sign(h);
            assert!(minus.iter().any(|s| close(&hc, s)), "missing {hc:?}");
        }
    }

    #[test]
    fn collision_degeneracy_meets_a_half_solution() {
        // With 1 − α² − β² + γ² = 0 the closed form collides with
        // (½, ½, −½): take α = 0.8, γ = 0.7, β² = 1 − 0.64 + 0.49.
        let beta = 0.85f64.sqrt();
        let cf = closed_forms(0.8, beta, 0.7).unwrap();
        assert_eq!(cf.good_eps, -1, "Π = {}", cf.pi_product);
        let d: f64 = (0..3).map(|k| (cf.good[k] - cf.half[0][k]).abs()).sum();
        assert!(d < 1e-12, "good {:?} vs half {:?}", cf.good, cf.half[0]);
    }

    #[test]
    fn evaluator_carries_trinoid_data() {
        let ev = trinoid_evaluator(&symmetric_spec(), false).unwrap();
        assert_eq!(ev.eps(), 1);
        for w in ev.ends().weights() {
            assert!((w + 0.16).abs() < 1e-15);
        }
        // φ = −Φ/2 has roots (1 ± i√3)/2.
        let root = Complex64::new(0.5, 0.5 * 3.0f64.sqrt());
        assert!((ev.phi().roots.0 - root).norm() < 1e-14);
        // The spinor invariant matches iφ on trinoid data too.
        let z = Complex64::new(0.4, 0.9);
        let w = ev.w_invariant(z).unwrap();
        let target = Complex64::i() * ev.phi().eval(z);
        assert!((w - target).norm() < 1e-9 * (1.0 + target.norm()));
    }

    #[test]
    fn control_evaluator_uses_the_opposite_system() {
        let ev = control_evaluator(&symmetric_spec(), false).unwrap();
        assert_eq!(ev.eps(), -1);
        let s = ev.solution();
        assert_eq!((s.p, s.q, s.r), (0.5, 0.5, -0.5));
        // Same Hopf polynomial as the good trinoid (weights are shared).
        let good = trinoid_evaluator(&symmetric_spec(), false).unwrap();
        assert!((ev.phi().c2 - good.phi().c2).abs() < 1e-15);
        assert!((ev.phi().c1 - good.phi().c1).abs() < 1e-15);
        assert!((ev.phi().c0 - good.phi().c0).abs() < 1e-15);
    }

    #[test]
    fn higher_growth_evaluator_also_builds() {
        let spec = TrinoidSpec::new(2.6, 0.6, 0.6).unwrap();
        let ev = trinoid_evaluator(&spec, false).unwrap();
        assert_eq!(ev.eps(), -1);
        let z = Complex64::new(0.3, 1.1);
        let w = ev.w_invariant(z).unwrap();
        let target = Complex64::i() * ev.phi().eval(z);
        assert!(
            (w - target).norm() < 1e-8 * (1.0 + target.norm()),
            "{w} vs {target}"
        );
    }
}
