//! End-embeddedness probes for the cousin surface.
//!
//! The boundary map of the cousin has Schwarzian S(G) = S(g) − 2q° with
//! q° = −φ/ch, a single-valued rational profile with at worst double poles
//! at the punctures. An end is embedded exactly when its boundary map
//! extends across the puncture, i.e. when the double- and simple-pole
//! Laurent coefficients of the profile vanish there. The probe samples the
//! profile on a circle around the puncture (upper half only — the profile
//! has real coefficients, so the lower half follows by conjugation) and
//! reads the pole coefficients off a small discrete Fourier transform;
//! deeper negative bins must be empty and serve as a noise gate.

use crate::error::{Error, Result};
use crate::solver::PhiPolynomial;
use crate::surface::{EndIndex, WeierstrassEvaluator};
use num_complex::Complex64;
use serde::Serialize;

/// Pole coefficients below this declare the end embedded.
pub const EMBED_TOL: f64 = 1e-5;
/// Samples on the probe circle (24 evaluated, 24 by conjugate symmetry).
const N_SAMPLES: usize = 48;

/// The pre-Schwarzian of the secondary Gauss map, w = φ'/φ − 2k'/k, using
/// whichever spinor component the caller selected (both give the same
/// Schwarzian; the larger one is numerically safer).
fn pre_schwarzian(ev: &WeierstrassEvaluator, z: Complex64, use_k1: bool) -> Result<Complex64> {
    let s = ev.spinor_point(z)?;
    let (k, dk) = if use_k1 { (s.k1, s.dk1) } else { (s.k2, s.dk2) };
    if k.norm() == 0.0 {
        return Err(Error::numerical(format!("spinor vanishes at z = {z}")));
    }
    let phi = ev.phi();
    Ok(phi.deriv(z) / phi.eval(z) - 2.0 * dk / k)
}

/// The profile f(z) = S(g) − 2q° = w' − w²/2 + 2φ/ch at z, with w' by a
/// fourth-order central difference of step h.
pub fn schwarzian_profile(
    ev: &WeierstrassEvaluator,
    z: Complex64,
    h: f64,
) -> Result<Complex64> {
    let s = ev.spinor_point(z)?;
    let use_k1 = s.k1.norm() >= s.k2.norm();
    let w = pre_schwarzian(ev, z, use_k1)?;
    let wp2 = pre_schwarzian(ev, z + 2.0 * h, use_k1)?;
    let wp1 = pre_schwarzian(ev, z + h, use_k1)?;
    let wm1 = pre_schwarzian(ev, z - h, use_k1)?;
    let wm2 = pre_schwarzian(ev, z - 2.0 * h, use_k1)?;
    let dw = (-wp2 + 8.0 * wp1 - 8.0 * wm1 + wm2) / (12.0 * h);
    let t = z * (z - 1.0);
    let ch = t * t;
    Ok(dw - 0.5 * w * w + 2.0 * ev.phi().eval(z) / ch)
}

/// Laurent data of a probe: pole coefficients and the noise gate.
#[derive(Debug, Clone, Copy)]
pub struct LaurentPoles {
    pub c_m2: Complex64,
    pub c_m1: Complex64,
    /// Largest magnitude among the (analytically empty) bins c_{−3}…c_{−6}.
    pub noise: f64,
}

/// Extract c_{−2} and c_{−1} of a real-coefficient local function by
/// sampling the upper half of the circle |u| = r around `center` and
/// completing the lower half by conjugation. The sample angles are offset
/// by half a step so no sample lands on the real axis.
pub fn laurent_pole_coefficients<F>(f: F, center: Complex64, r: f64) -> Result<LaurentPoles>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let n = N_SAMPLES;
    let mut samples = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n / 2 {
        let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
        let u = Complex64::from_polar(r, theta);
        samples[j] = f(center + u)?;
        samples[n - 1 - j] = samples[j].conj();
    }
    let bin = |k: i32| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, fj) in samples.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            acc += fj * Complex64::from_polar(1.0, -f64::from(k) * theta);
        }
        acc / n as f64
    };
    let coeff = |k: i32| bin(k) / r.powi(k);
    let noise = (3..=6).fold(0.0f64, |a, k| a.max(coeff(-k).norm()));
    Ok(LaurentPoles { c_m2: coeff(-2), c_m1: coeff(-1), noise })
}

/// Outcome of the embeddedness probe at one end.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EndEmbeddedness {
    pub end: EndIndex,
    /// |c_{−2}| of the profile at the puncture.
    pub c_m2: f64,
    /// |c_{−1}| of the profile at the puncture.
    pub c_m1: f64,
    pub embedded: bool,
    pub noise: f64,
    /// Probe radius actually used (adapted to nearby branch points).
    pub radius: f64,
}

/// Probe one end of the surface the evaluator describes. The probe circle
/// stays well inside the annulus bounded by the nearest root of φ (branch
/// point of the profile) and the neighboring puncture.
pub fn embeddedness_check(
    ev: &WeierstrassEvaluator,
    end: EndIndex,
) -> Result<EndEmbeddedness> {
    let (r1, r2) = ev.phi().roots;
    // Distance from the puncture to the profile's other singularities,
    // measured in the local chart.
    let clearance = match end {
        EndIndex::Zero => r1.norm().min(r2.norm()).min(1.0),
        EndIndex::One => (r1 - 1.0).norm().min((r2 - 1.0).norm()).min(1.0),
        EndIndex::Infinity => (1.0 / r1.norm()).min(1.0 / r2.norm()).min(1.0),
    };
    let r = (0.45 * clearance).min(0.3);
    if r < 5e-3 {
        return Err(Error::numerical(format!(
            "end {end:?}: a branch point sits {clearance:.2e} from the puncture; \
             the probe annulus is too thin"
        )));
    }
    let poles = match end {
        EndIndex::Zero | EndIndex::One => {
            let h = r / 300.0;
            let center = match end {
                EndIndex::Zero => Complex64::new(0.0, 0.0),
                _ => Complex64::new(1.0, 0.0),
            };
            laurent_pole_coefficients(
                |z| schwarzian_profile(ev, z, h),
                center,
                r,
            )?
        }
        EndIndex::Infinity => {
            // Work in the chart ζ = −1/z; the profile is a quadratic
            // differential, so it picks up ζ^{−4}.
            laurent_pole_coefficients(
                |zeta| {
                    let z = -1.0 / zeta;
                    let h = z.norm() / 300.0;
                    let f = schwarzian_profile(ev, z, h)?;
                    Ok(f / (zeta * zeta * zeta * zeta))
                },
                Complex64::new(0.0, 0.0),
                r,
            )?
        }
    };
    let (c_m2, c_m1) = (poles.c_m2.norm(), poles.c_m1.norm());
    if poles.noise > 1e-6 * (1.0 + c_m2 + c_m1) {
        return Err(Error::numerical(format!(
            "end {end:?}: Laurent extraction did not converge (noise {:.2e})",
            poles.noise
        )));
    }
    Ok(EndEmbeddedness {
        end,
        c_m2,
        c_m1,
        embedded: c_m2 < EMBED_TOL && c_m1 < EMBED_TOL,
        noise: poles.noise,
        radius: r,
    })
}

/// Read the growth 1 − μ̂ of one end off the order-−2 Laurent coefficient
/// of the quadratic profile q° = −φ/ch, computed pointwise from the
/// spinor Wronskian (not from the stored polynomial). The coefficient is
/// −w with w the end weight, so μ̂² = 1 + 4w; the extraction is spectrally
/// accurate, so the result matches the end data far below 1e−8 when the
/// evaluator realizes it.
pub fn growth_readoff(ev: &WeierstrassEvaluator, end: EndIndex) -> Result<f64> {
    let quad = |z: Complex64| -> Result<Complex64> {
        let s = ev.spinor_point(z)?;
        let w = s.k1 * s.dk2 - s.dk1 * s.k2;
        let t = z * (z - 1.0);
        // q° = −φ/ch and the Wronskian is iφ, so q° = i·W/ch.
        Ok(Complex64::i() * w / (t * t))
    };
    let r = 0.3;
    let poles = match end {
        EndIndex::Zero => {
            laurent_pole_coefficients(quad, Complex64::new(0.0, 0.0), r)?
        }
        EndIndex::One => {
            laurent_pole_coefficients(quad, Complex64::new(1.0, 0.0), r)?
        }
        EndIndex::Infinity => laurent_pole_coefficients(
            |zeta| Ok(quad(-1.0 / zeta)? / (zeta * zeta * zeta * zeta)),
            Complex64::new(0.0, 0.0),
            r,
        )?,
    };
    let scale = 1.0 + poles.c_m2.norm() + poles.c_m1.norm();
    if poles.noise > 1e-9 * scale || poles.c_m2.im.abs() > 1e-9 * scale {
        return Err(Error::numerical(format!(
            "end {end:?}: profile coefficient extraction did not converge \
             (noise {:.2e}, Im c₋₂ = {:.2e})",
            poles.noise, poles.c_m2.im
        )));
    }
    let mu_sq = 1.0 - 4.0 * poles.c_m2.re;
    if mu_sq <= 0.0 {
        return Err(Error::numerical(format!(
            "end {end:?}: profile coefficient {:.6} gives no real growth",
            poles.c_m2.re
        )));
    }
    Ok(1.0 - mu_sq.sqrt())
}

/// The closed-form profile for end data with angle lifts (α, β, γ) and
/// log-linear weights (Λ̂(0), Λ̂(1)):
/// f = (Φ + 2φ)/ch + Λ/(φ·z(z−1)) + 3φ''/φ − (3/2)(φ'/φ)²,
/// with Φ the quadratic taking (1−α²)/2, (1−γ²)/2, (1−β²)/2 at 0, 1, ∞ and
/// Λ the linear interpolant of the log-linear weights. For period data
/// satisfying the closing condition the first term vanishes identically;
/// for the good solution Λ vanishes too and only the branch-point part
/// survives.
pub fn exact_profile(
    phi: &PhiPolynomial,
    lifts: [f64; 3],
    hat: (f64, f64),
) -> impl Fn(Complex64) -> Complex64 + '_ {
    let [alpha, beta, gamma] = lifts;
    let (p0, p1, pinf) = (
        0.5 * (1.0 - alpha * alpha),
        0.5 * (1.0 - gamma * gamma),
        0.5 * (1.0 - beta * beta),
    );
    let b = p1 - pinf - p0;
    move |z: Complex64| {
        let t = z * (z - 1.0);
        let ch = t * t;
        let big_phi = (pinf * z + b) * z + p0;
        let tphi = big_phi + 2.0 * phi.eval(z);
        let lam = hat.0 * (1.0 - z) + hat.1 * z;
        let p = phi.eval(z);
        let dp = phi.deriv(z);
        let ddp = phi.second_deriv();
        tphi / ch + lam / (p * t) + 3.0 * ddp / p - 1.5 * (dp / p) * (dp / p)
    }
}
