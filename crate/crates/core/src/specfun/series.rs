//! Gauss hypergeometric series and branch powers on the closed upper
//! half-plane.
//!
//! Branch conventions: for z in the closed upper half-plane with
//! z = ρ e^{iθ}, θ in [0, π], we set z^κ = ρ^κ e^{iκθ}, and likewise for
//! (z-1)^κ using the argument of z-1. The third power is defined by
//! (1-z)^κ := e^{-iπκ} (z-1)^κ, which is real and positive for real z < 1
//! and coincides with the principal branch of (1-z)^κ on the upper
//! half-plane.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Result of summing a power series: value, number of terms consumed,
/// whether the stopping rule was met before the term cap, and an estimate
/// of the truncated tail magnitude.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: Complex64,
    pub terms: usize,
    pub converged: bool,
    pub tail: f64,
}

/// Hard cap on series length; beyond this the sum is returned with
/// `converged = false` and a tail estimate instead of failing.
pub const SERIES_TERM_CAP: usize = 10_000;
const SERIES_REL_EPS: f64 = 1e-16;

fn near_nonpositive_integer(x: f64, tol: f64) -> bool {
    x < 0.5 && (x - x.round()).abs() < tol
}

/// The Gauss series F(a, b; c; z) = Σ (a)_n (b)_n / ((c)_n n!) z^n, summed
/// directly. Requires |z| < 1 and c away from non-positive integers. The
/// stopping rule asks for two consecutive terms below 1e-16 of the running
/// sum, which guards against a single transient small term when a Pochhammer
/// factor passes near zero.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: Complex64) -> Result<SeriesSum> {
    if near_nonpositive_integer(c, 1e-12) {
        return Err(Error::invalid(format!(
            "hypergeometric parameter c = {c} is (nearly) a non-positive integer"
        )));
    }
    if z.norm() >= 1.0 {
        return Err(Error::invalid(format!(
            "hypergeometric series argument |z| = {} is not inside the unit disk",
            z.norm()
        )));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_streak = 0u32;
    let mut n = 0usize;
    let mut last_ratio = 0.0f64;
    while n < SERIES_TERM_CAP {
        let nf = n as f64;
        let ratio = z * ((a + nf) * (b + nf)) / ((c + nf) * (nf + 1.0));
        term *= ratio;
        sum += term;
        last_ratio = ratio.norm();
        n += 1;
        if term.norm() <= SERIES_REL_EPS * sum.norm() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(SeriesSum {
                    value: sum,
                    terms: n,
                    converged: true,
                    tail: tail_bound(term.norm(), last_ratio),
                });
            }
        } else {
            small_streak = 0;
        }
    }
    Ok(SeriesSum {
        value: sum,
        terms: n,
        converged: false,
        tail: tail_bound(term.norm(), last_ratio),
    })
}

/// Geometric tail bound from the last term and the last term ratio.
fn tail_bound(last_term: f64, ratio: f64) -> f64 {
    let q = ratio.min(0.999_999);
    last_term * q / (1.0 - q)
}

const ARG_EPS: f64 = 1e-9;

/// Argument of z normalised to [0, π]. Arguments a hair below 0 or below -π
/// (from rounding of points meant to sit on the real axis) are clamped to
/// the boundary; genuinely lower-half-plane points are a caller bug.
pub fn upper_half_arg(z: Complex64) -> f64 {
    let t = z.arg();
    if t >= 0.0 {
        t
    } else if t >= -ARG_EPS {
        0.0
    } else if t <= -PI + ARG_EPS {
        PI
    } else {
        debug_assert!(false, "argument {z} lies strictly below the real axis");
        if t > -PI / 2.0 {
            0.0
        } else {
            PI
        }
    }
}

/// z^κ with arg z taken in [0, π].
pub fn branch_pow_z(z: Complex64, kappa: f64) -> Complex64 {
    let rho = z.norm();
    let theta = upper_half_arg(z);
    Complex64::from_polar(rho.powf(kappa), kappa * theta)
}

/// (z-1)^κ with arg(z-1) taken in [0, π].
pub fn branch_pow_zm1(z: Complex64, kappa: f64) -> Complex64 {
    branch_pow_z(z - 1.0, kappa)
}

/// (1-z)^κ := e^{-iπκ} (z-1)^κ — real positive for real z < 1; equal to the
/// principal branch of (1-z)^κ on the closed upper half-plane.
pub fn branch_pow_1mz(z: Complex64, kappa: f64) -> Complex64 {
    Complex64::from_polar(1.0, -PI * kappa) * branch_pow_zm1(z, kappa)
}

/// F(a, b; c; z) through whichever of the direct series or the Pfaff
/// transformation
///   F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
/// has the smaller argument. The transformation is an exact identity of the
/// principal-branch continuation on the upper half-plane (which is the
/// branch convention used throughout), so this only extends the region of
/// fast convergence; near |z| = 1 with |z-1| > 1 it is the only convergent
/// route.
pub(crate) fn hyp2f1_auto(a: f64, b: f64, c: f64, z: Complex64) -> Result<SeriesSum> {
    let w = z / (z - 1.0);
    if w.norm() < z.norm() {
        let inner = hyp2f1(a, c - b, c, w)?;
        // Principal branch: the Pfaff route is only taken for |z-1| > 1, and
        // chart arguments then keep 1-z off the negative real ray, where the
        // principal power agrees with the upper-half-plane convention. (The
        // series argument itself may lie in the lower half-plane when the
        // chart variable is 1-z or 1/z, so the UHP-only helpers don't apply.)
        let pref = (Complex64::new(1.0, 0.0) - z).powc(Complex64::new(-a, 0.0));
        Ok(SeriesSum {
            value: pref * inner.value,
            terms: inner.terms,
            converged: inner.converged,
            tail: pref.norm() * inner.tail,
        })
    } else {
        hyp2f1(a, b, c, z)
    }
}

/// F, F' and F'' at z via parameter shifts:
/// F'(a,b;c;z)  = (ab/c) F(a+1,b+1;c+1;z),
/// F''(a,b;c;z) = (a(a+1)b(b+1))/(c(c+1)) F(a+2,b+2;c+2;z).
pub(crate) fn hyp2f1_with_derivs(
    a: f64,
    b: f64,
    c: f64,
    z: Complex64,
) -> Result<(SeriesSum, SeriesSum, SeriesSum)> {
    let f0 = hyp2f1_auto(a, b, c, z)?;
    let mut f1 = hyp2f1_auto(a + 1.0, b + 1.0, c + 1.0, z)?;
    let k1 = a * b / c;
    f1.value *= k1;
    f1.tail *= k1.abs();
    let mut f2 = hyp2f1_auto(a + 2.0, b + 2.0, c + 2.0, z)?;
    let k2 = a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0));
    f2.value *= k2;
    f2.tail *= k2.abs();
    Ok((f0, f1, f2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// 40-digit reference values (mpmath): ((a, b, c), (z_re, z_im)) -> F.
    const ORACLE: [((f64, f64, f64), (f64, f64), (f64, f64)); 8] = [
        ((1.0, 1.0, 2.0), (0.5, 0.0), (1.386_294_361_119_890_618_8, 0.0)),
        (
            (0.25, -0.35, 0.8),
            (0.3, 0.4),
            (0.970_478_083_786_947_603_45, -0.049_804_370_374_154_020_795),
        ),
        (
            (-0.45, 0.95, 1.6),
            (-0.7, 0.2),
            (1.166_985_862_962_601_696_4, -0.042_533_035_542_587_912_852),
        ),
        (
            (0.05, 0.65, 0.4),
            (0.1, 0.85),
            (0.978_013_799_582_790_921_11, 0.058_011_017_286_971_959_889),
        ),
        (
            (1.35, -1.15, 2.4),
            (-0.5, -0.3),
            (1.328_758_680_088_839_634_4, 0.202_912_699_319_680_815_27),
        ),
        ((0.5, 0.5, 1.5), (0.9, 0.0), (1.316_609_847_527_586_051_6, 0.0)),
        (
            (-0.2, 1.3, 0.35),
            (0.55, 0.35),
            (0.627_911_053_993_621_261_48, -0.604_103_502_971_435_274_65),
        ),
        (
            (2.2, 0.4, 1.1),
            (-0.25, 0.6),
            (0.723_683_888_923_117_946_96, 0.239_435_136_732_873_633_4),
        ),
    ];

    #[test]
    fn direct_series_matches_oracle() {
        for &((a, b, c), (zr, zi), (fr, fi)) in ORACLE.iter() {
            let got = hyp2f1(a, b, c, c64(zr, zi)).unwrap();
            assert!(got.converged);
            let want = c64(fr, fi);
            let rel = (got.value - want).norm() / want.norm();
            assert!(
                rel < 2e-14,
                "2F1({a},{b};{c};{zr}+{zi}i) rel err {rel:.3e} after {} terms",
                got.terms
            );
        }
    }

    #[test]
    fn derivative_matches_oracle() {
        // d/dz 2F1(0.25,-0.35;0.8;z) at z = 0.3+0.4i (mpmath reference).
        let (_, f1, _) = hyp2f1_with_derivs(0.25, -0.35, 0.8, c64(0.3, 0.4)).unwrap();
        let want = c64(-0.118_177_104_680_341_93, -0.027_422_210_312_181_799);
        assert!((f1.value - want).norm() < 1e-15 + want.norm() * 1e-13);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(hyp2f1(0.3, 0.4, 0.5, c64(1.0, 0.0)).is_err());
        assert!(hyp2f1(0.3, 0.4, 0.5, c64(0.8, 0.7)).is_err());
        assert!(hyp2f1(0.3, 0.4, -2.0, c64(0.1, 0.0)).is_err());
        assert!(hyp2f1(0.3, 0.4, 0.5, c64(0.3, 0.0)).is_ok());
    }

    #[test]
    fn branch_power_frozen_values() {
        // z^κ at z = -1, κ = 1/2: ρ = 1, θ = π -> e^{iπ/2} = i.
        let v = branch_pow_z(c64(-1.0, 0.0), 0.5);
        assert!((v - c64(0.0, 1.0)).norm() < 1e-15);
        // (1-z)^κ at z = 4, κ = 1/2: e^{-iπ/2}·√3 = -i√3.
        let v = branch_pow_1mz(c64(4.0, 0.0), 0.5);
        assert!((v - c64(0.0, -3.0_f64.sqrt())).norm() < 1e-14);
        // (1-z)^κ real positive for real z < 1.
        let v = branch_pow_1mz(c64(0.25, 0.0), 0.37);
        assert!(v.im.abs() < 1e-15 && v.re > 0.0);
        assert!((v.re - 0.75_f64.powf(0.37)).abs() < 1e-15);
        // z^a z^b = z^{a+b} on the chosen branch.
        let z = c64(-0.7, 0.4);
        let lhs = branch_pow_z(z, 0.3) * branch_pow_z(z, -0.8);
        let rhs = branch_pow_z(z, -0.5);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn tiny_negative_imaginary_parts_clamp_to_the_axis() {
        let a = branch_pow_z(c64(2.0, -1e-13), 0.6);
        let b = branch_pow_z(c64(2.0, 0.0), 0.6);
        assert!((a - b).norm() < 1e-12);
        let a = branch_pow_z(c64(-2.0, -1e-13), 0.6);
        let b = branch_pow_z(c64(-2.0, 0.0), 0.6);
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn pfaff_route_agrees_with_direct_series_on_the_overlap() {
        // Points where both |z| < 1 and |z/(z-1)| < 1 converge.
        let pts = [c64(-0.4, 0.3), c64(-0.8, 0.1), c64(-0.1, 0.6), c64(-0.3, 0.0)];
        for &z in pts.iter() {
            let direct = hyp2f1(0.45, -0.85, 1.6, z).unwrap().value;
            let w = z / (z - 1.0);
            assert!(w.norm() < z.norm(), "test point {z} should prefer Pfaff");
            let auto = hyp2f1_auto(0.45, -0.85, 1.6, z).unwrap().value;
            assert!(
                (direct - auto).norm() <= direct.norm() * 1e-13,
                "Pfaff mismatch at {z}"
            );
        }
    }

    #[test]
    fn pfaff_converges_on_the_unit_circle_away_from_one() {
        // z = i has |z| = 1 (direct series near-useless) but |z/(z-1)| ≈ 0.707.
        let z = c64(0.0, 1.0);
        let s = hyp2f1_auto(0.45, -0.85, 1.6, z).unwrap();
        assert!(s.converged && s.terms < 500);
        // Compare against the near-argument continuation from just inside.
        let zin = c64(0.0, 0.999_999);
        let sin_ = hyp2f1_auto(0.45, -0.85, 1.6, zin).unwrap();
        assert!((s.value - sin_.value).norm() < 1e-5);
    }
}
