//! Exponent bookkeeping and local solution bases.
//!
//! For angle data (α, β, γ) the eight half-integer combinations
//! s(±,±,±) = (1 ± α ± β ± γ)/2 drive everything: the hypergeometric
//! parameters of the local bases at the three singular points 0, 1, ∞ and
//! the gamma factors of the connection matrices. Admissible data keep all
//! eight away from integers.

use super::series::{branch_pow_1mz, branch_pow_z, hyp2f1_with_derivs, SeriesSum};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// The three evaluation charts, named for the singular point they expand
/// about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EvalRegion {
    Near0,
    Near1,
    NearInf,
}

/// Chart selector: the smallest of |z|, |z-1| and 1/|z| wins; ties prefer
/// Near1 when its series can converge (|z-1| ≤ 1), then Near0. Points on
/// |z| = 1 away from 1 land in NearInf and are evaluated through the Pfaff
/// transformation.
pub fn classify_region(z: Complex64) -> EvalRegion {
    let d0 = z.norm();
    let d1 = (z - 1.0).norm();
    let dinf = if d0 > 0.0 { 1.0 / d0 } else { f64::INFINITY };
    let m = d0.min(d1).min(dinf);
    if d1 <= m && d1 <= 1.0 {
        EvalRegion::Near1
    } else if d0 <= m && d0 < 1.0 {
        EvalRegion::Near0
    } else {
        EvalRegion::NearInf
    }
}

/// Angles and their eight derived exponents.
#[derive(Debug, Clone, Copy)]
pub struct ExponentSet {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// s[4*ia + 2*ib + ic] = (1 + sa*α + sb*β + sc*γ)/2 with bit 1 ↔ sign +.
    pub s: [f64; 8],
    /// Π = Π_± (1 ± α ± β ± γ) = 2^8 Π s.
    pub pi_product: f64,
}

const INT_TOL: f64 = 1e-12;

fn integer_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

impl ExponentSet {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} is not finite")));
            }
            if integer_distance(v) < INT_TOL {
                return Err(Error::invalid(format!(
                    "angle {name} = {v} is within {INT_TOL:.0e} of an integer"
                )));
            }
        }
        let mut s = [0.0f64; 8];
        let mut pi_product = 1.0f64;
        for (i, sv) in s.iter_mut().enumerate() {
            let sa = if i & 4 != 0 { 1.0 } else { -1.0 };
            let sb = if i & 2 != 0 { 1.0 } else { -1.0 };
            let sc = if i & 1 != 0 { 1.0 } else { -1.0 };
            let v = 1.0 + sa * alpha + sb * beta + sc * gamma;
            *sv = v / 2.0;
            pi_product *= v;
            if integer_distance(v / 2.0) < INT_TOL {
                return Err(Error::invalid(format!(
                    "exponent (1 {} α {} β {} γ)/2 = {} is within {INT_TOL:.0e} of an integer",
                    if sa > 0.0 { "+" } else { "-" },
                    if sb > 0.0 { "+" } else { "-" },
                    if sc > 0.0 { "+" } else { "-" },
                    v / 2.0
                )));
            }
        }
        Ok(ExponentSet {
            alpha,
            beta,
            gamma,
            s,
            pi_product,
        })
    }

    /// s(sa, sb, sc) with each sign ±1.
    pub fn s3(&self, sa: i8, sb: i8, sc: i8) -> f64 {
        let idx = (usize::from(sa > 0) << 2) | (usize::from(sb > 0) << 1) | usize::from(sc > 0);
        self.s[idx]
    }
}

/// A local basis pair with first and second derivatives.
#[derive(Debug, Clone, Copy)]
pub struct BasisEval {
    pub w: [Complex64; 2],
    pub dw: [Complex64; 2],
    pub d2w: [Complex64; 2],
    pub converged: bool,
    pub max_tail: f64,
}

struct Acc {
    converged: bool,
    max_tail: f64,
}

impl Acc {
    fn new() -> Self {
        Acc {
            converged: true,
            max_tail: 0.0,
        }
    }
    fn push(&mut self, s: &SeriesSum) {
        self.converged &= s.converged;
        self.max_tail = self.max_tail.max(s.tail);
    }
}

/// Evaluate the local basis pair of the given chart at z.
///
/// Chart applicability: Near0 needs |z| < 1 or |z/(z-1)| < 1; Near1 needs
/// |1-z| < 1 or |(1-z)/(-z)| < 1; NearInf needs |1/z| < 1 or |1/(1-z)| < 1.
/// Outside of that the series cannot converge in any admissible form and an
/// error is returned.
pub fn basis_at(x: &ExponentSet, region: EvalRegion, z: Complex64) -> Result<BasisEval> {
    let (alpha, _beta, gamma) = (x.alpha, x.beta, x.gamma);
    let mut acc = Acc::new();
    let out = match region {
        EvalRegion::Near0 => {
            let (f0, f1, f2) = hyp2f1_with_derivs(x.s3(-1, -1, -1), x.s3(-1, 1, -1), 1.0 - alpha, z)?;
            let (g0, g1, g2) = hyp2f1_with_derivs(x.s3(1, -1, -1), x.s3(1, 1, -1), 1.0 + alpha, z)?;
            for s in [&f0, &f1, &f2, &g0, &g1, &g2] {
                acc.push(s);
            }
            let za = branch_pow_z(z, alpha);
            let za1 = branch_pow_z(z, alpha - 1.0);
            let za2 = branch_pow_z(z, alpha - 2.0);
            BasisEval {
                w: [f0.value, za * g0.value],
                dw: [f1.value, alpha * za1 * g0.value + za * g1.value],
                d2w: [
                    f2.value,
                    alpha * (alpha - 1.0) * za2 * g0.value
                        + 2.0 * alpha * za1 * g1.value
                        + za * g2.value,
                ],
                converged: acc.converged,
                max_tail: acc.max_tail,
            }
        }
        EvalRegion::Near1 => {
            let u = Complex64::new(1.0, 0.0) - z;
            let (f0, f1, f2) = hyp2f1_with_derivs(x.s3(-1, -1, -1), x.s3(-1, 1, -1), 1.0 - gamma, u)?;
            let (g0, g1, g2) = hyp2f1_with_derivs(x.s3(-1, -1, 1), x.s3(-1, 1, 1), 1.0 + gamma, u)?;
            for s in [&f0, &f1, &f2, &g0, &g1, &g2] {
                acc.push(s);
            }
            let ug = branch_pow_1mz(z, gamma);
            let ug1 = branch_pow_1mz(z, gamma - 1.0);
            let ug2 = branch_pow_1mz(z, gamma - 2.0);
            // d/dz = -d/du
            BasisEval {
                w: [f0.value, ug * g0.value],
                dw: [-f1.value, -gamma * ug1 * g0.value - ug * g1.value],
                d2w: [
                    f2.value,
                    gamma * (gamma - 1.0) * ug2 * g0.value
                        + 2.0 * gamma * ug1 * g1.value
                        + ug * g2.value,
                ],
                converged: acc.converged,
                max_tail: acc.max_tail,
            }
        }
        EvalRegion::NearInf => {
            let u = Complex64::new(1.0, 0.0) / z;
            let s1 = x.s3(-1, -1, -1);
            let s2 = x.s3(-1, 1, -1);
            let (f0, f1, f2) = hyp2f1_with_derivs(s1, x.s3(1, -1, -1), 1.0 - x.beta, u)?;
            let (g0, g1, g2) = hyp2f1_with_derivs(s2, x.s3(1, 1, -1), 1.0 + x.beta, u)?;
            for s in [&f0, &f1, &f2, &g0, &g1, &g2] {
                acc.push(s);
            }
            let w_of = |s: f64, h0: Complex64| branch_pow_z(z, -s) * h0;
            // w(z) = z^{-s} F(1/z); chain rule with du/dz = -z^{-2}.
            let dw_of = |s: f64, h0: Complex64, h1: Complex64| {
                -s * branch_pow_z(z, -s - 1.0) * h0 - branch_pow_z(z, -s - 2.0) * h1
            };
            let d2w_of = |s: f64, h0: Complex64, h1: Complex64, h2: Complex64| {
                s * (s + 1.0) * branch_pow_z(z, -s - 2.0) * h0
                    + (2.0 * s + 2.0) * branch_pow_z(z, -s - 3.0) * h1
                    + branch_pow_z(z, -s - 4.0) * h2
            };
            BasisEval {
                w: [w_of(s1, f0.value), w_of(s2, g0.value)],
                dw: [dw_of(s1, f0.value, f1.value), dw_of(s2, g0.value, g1.value)],
                d2w: [
                    d2w_of(s1, f0.value, f1.value, f2.value),
                    d2w_of(s2, g0.value, g1.value, g2.value),
                ],
                converged: acc.converged,
                max_tail: acc.max_tail,
            }
        }
    };
    Ok(out)
}
