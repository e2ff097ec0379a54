//! Pointwise Weierstrass data for the minimal immersion: the spinors K1, K2
//! built from the global hypergeometric pair, their normalized versions
//! k1 = λ⁻¹K1 and k2 = μK2, the Gauss map, fundamental forms, and the end
//! asymptotics of the Hopf differential.
//!
//! Everything is driven by the end data (α, β, γ, A, B, C, ε0): the period
//! solver fixes the polynomial coefficients (a, b, c), the connection
//! matrices fix the sign ε and the scalings (λ, μ), and the central
//! invariant k1k2′ − k1′k2 = iφ(z) ties the spinors to the Hopf quadratic φ.

use crate::error::{Error, Result};
use crate::geometry::{frame_angles, FrameAngles, TripleConfig};
use crate::linalg::Vec3;
use crate::solver::{
    abc_from_pqr, build_phi, epsilon_sign, normalize_lambda_mu, solve_pqr_for_ends, EndParams,
    PhiPolynomial, PqrSolution,
};
use crate::specfun::{
    branch_pow_1mz, branch_pow_z, connection_matrices, sigma_global, ConnectionMatrices,
    ExponentSet,
};
use crate::surface::quad::{integrate_polyline, plan_path};
use num_complex::Complex64;

/// Default basepoint of the immersion.
pub const BASEPOINT: Complex64 = Complex64 { re: 0.0, im: 1.0 };
/// Planning clearance around the punctures for integration paths.
pub const PATH_CLEARANCE: f64 = 0.01;

/// The spinors and their z-derivatives at a point.
#[derive(Debug, Clone, Copy)]
pub struct SpinorPoint {
    pub k1: Complex64,
    pub k2: Complex64,
    pub dk1: Complex64,
    pub dk2: Complex64,
}

/// Which puncture an end lives at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EndIndex {
    Zero,
    One,
    Infinity,
}

/// Fitted end weight of the Hopf differential: Q ~ i·(Aα/2π)·ζ⁻² dζ² in the
/// end's local coordinate ζ.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct EndAsymptotics {
    pub end: EndIndex,
    /// Recovered distance parameter (A, C or B for ends 0, 1, ∞).
    pub fitted: f64,
    /// The angle lift used in the normalization.
    pub angle: f64,
    /// |estimate(r = 1e-3) − fitted|.
    pub residual: f64,
}

/// Immutable pointwise evaluator for one solved configuration.
#[derive(Debug, Clone)]
pub struct WeierstrassEvaluator {
    pub(crate) ends: EndParams,
    pub(crate) exps: ExponentSet,
    pub(crate) nu: ConnectionMatrices,
    pub(crate) frame: FrameAngles,
    pub(crate) eps: i8,
    pub(crate) solution: PqrSolution,
    pub(crate) abc: (f64, f64, f64),
    pub(crate) lambda: Complex64,
    pub(crate) mu: Complex64,
    pub(crate) phi: PhiPolynomial,
    pub(crate) flip: bool,
    /// Translation fixing the image of (0,1) onto the x1-axis.
    pub(crate) x_offset: Vec3,
}

impl WeierstrassEvaluator {
    /// Build the evaluator for a configuration: solve the period system,
    /// pick the `solution_index`-th solution (sorted), fix (λ, μ), and
    /// normalize the translation so the image of (0, 1) is the x1-axis.
    /// `flip` applies the rotation by π about the x3-axis ((g, ω) → (−g, −ω)).
    pub fn from_config(
        cfg: &TripleConfig,
        lifts: Option<[f64; 3]>,
        solution_index: usize,
        flip: bool,
    ) -> Result<Self> {
        let ends = match lifts {
            Some(l) => EndParams::with_lifts(cfg, l)?,
            None => EndParams::from_config(cfg)?,
        };
        let frame = frame_angles(cfg)?;
        Self::from_ends(ends, frame, solution_index, flip)
    }

    /// Build from end data plus the frame angles of the underlying
    /// configuration (the trinoid pipeline arrives here with synthesized
    /// end data).
    pub fn from_ends(
        ends: EndParams,
        frame: FrameAngles,
        solution_index: usize,
        flip: bool,
    ) -> Result<Self> {
        let exps = ExponentSet::new(ends.alpha, ends.beta, ends.gamma)?;
        let nu = connection_matrices(&exps)?;
        let eps = epsilon_sign(ends.eps0, ends.alpha, &nu)?;
        let solutions = solve_pqr_for_ends(&ends, eps)?;
        if solutions.is_empty() {
            return Err(Error::numerical("the period system has no solutions"));
        }
        let solution = *solutions.get(solution_index).ok_or_else(|| {
            Error::invalid(format!(
                "solution index {solution_index} out of range ({} found)",
                solutions.len()
            ))
        })?;
        Self::assemble(ends, frame, exps, nu, eps, solution, flip)
    }

    /// Build from an explicitly supplied period solution (the trinoid
    /// pipeline arrives here with a closed-form solution). The solution
    /// must solve the period system for the ε the connection data selects.
    pub fn from_ends_with_solution(
        ends: EndParams,
        frame: FrameAngles,
        solution: PqrSolution,
        flip: bool,
    ) -> Result<Self> {
        let exps = ExponentSet::new(ends.alpha, ends.beta, ends.gamma)?;
        let nu = connection_matrices(&exps)?;
        let eps = epsilon_sign(ends.eps0, ends.alpha, &nu)?;
        let [wa, wb, wc] = ends.weights();
        let y = solution.p + solution.q + solution.r;
        let res = [
            solution.p * solution.p - ends.alpha * ends.alpha * y * y - f64::from(eps) * wa,
            solution.q * solution.q - ends.beta * ends.beta * y * y - f64::from(eps) * wb,
            solution.r * solution.r - ends.gamma * ends.gamma * y * y - f64::from(eps) * wc,
        ];
        let scale = 1.0 + wa.abs().max(wb.abs()).max(wc.abs()) + y * y;
        if res.iter().any(|r| r.abs() > 1e-8 * scale) {
            return Err(Error::invalid(format!(
                "supplied (p, q, r) does not solve the ε = {eps} period system \
                 (residuals {:.2e}, {:.2e}, {:.2e})",
                res[0], res[1], res[2]
            )));
        }
        Self::assemble(ends, frame, exps, nu, eps, solution, flip)
    }

    fn assemble(
        ends: EndParams,
        frame: FrameAngles,
        exps: ExponentSet,
        nu: ConnectionMatrices,
        eps: i8,
        solution: PqrSolution,
        flip: bool,
    ) -> Result<Self> {
        let abc = abc_from_pqr(solution.p, solution.q, solution.r, ends.alpha, ends.gamma);
        let (lambda0, mu0) = normalize_lambda_mu(eps, ends.alpha, frame.t, &nu)?;
        let (lambda, mu) = if flip {
            (lambda0 * Complex64::i(), Complex64::new(0.0, mu0))
        } else {
            (lambda0, Complex64::new(mu0, 0.0))
        };
        let phi = build_phi(&ends)?;
        let mut ev = WeierstrassEvaluator {
            ends,
            exps,
            nu,
            frame,
            eps,
            solution,
            abc,
            lambda,
            mu,
            phi,
            flip,
            x_offset: Vec3::ZERO,
        };
        // The image of (0,1) runs parallel to the x1-axis; translate its
        // transverse position to zero.
        let probe = ev.immerse(Complex64::new(0.5, 0.0))?;
        ev.x_offset = Vec3::new(0.0, probe.y, probe.z);
        Ok(ev)
    }

    pub fn ends(&self) -> &EndParams {
        &self.ends
    }

    pub fn phi(&self) -> &PhiPolynomial {
        &self.phi
    }

    pub fn eps(&self) -> i8 {
        self.eps
    }

    pub fn solution(&self) -> &PqrSolution {
        &self.solution
    }

    pub fn abc(&self) -> (f64, f64, f64) {
        self.abc
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn frame(&self) -> &FrameAngles {
        &self.frame
    }

    pub fn flipped(&self) -> bool {
        self.flip
    }

    /// The un-normalized spinors (K1, K2, K1′, K2′):
    /// K_j = z^{(1−α)/2}(1−z)^{(1−γ)/2}·[(a+bz)σ_j + c z(1−z)σ_j′].
    pub fn spinor_k(&self, z: Complex64) -> Result<([Complex64; 2], [Complex64; 2])> {
        let sig = sigma_global(&self.exps, &self.nu, z)?;
        if !sig.converged {
            return Err(Error::numerical(format!(
                "hypergeometric series not converged at z = {z} (tail {:.2e})",
                sig.max_tail
            )));
        }
        let (a, b, c) = self.abc;
        let one = Complex64::new(1.0, 0.0);
        let prefactor = branch_pow_z(z, 0.5 * (1.0 - self.ends.alpha))
            * branch_pow_1mz(z, 0.5 * (1.0 - self.ends.gamma));
        let dlog_prefactor =
            0.5 * (1.0 - self.ends.alpha) / z - 0.5 * (1.0 - self.ends.gamma) / (one - z);
        let lin = a + b * z;
        let zz = z * (one - z);
        let mut k = [Complex64::new(0.0, 0.0); 2];
        let mut dk = [Complex64::new(0.0, 0.0); 2];
        for j in 0..2 {
            let m = lin * sig.sigma[j] + c * zz * sig.dsigma[j];
            let dm = b * sig.sigma[j]
                + lin * sig.dsigma[j]
                + c * (one - 2.0 * z) * sig.dsigma[j]
                + c * zz * sig.d2sigma[j];
            k[j] = prefactor * m;
            dk[j] = prefactor * (dlog_prefactor * m + dm);
        }
        Ok((k, dk))
    }

    /// The normalized spinors k1 = λ⁻¹K1, k2 = μK2 and their derivatives.
    pub fn spinor_point(&self, z: Complex64) -> Result<SpinorPoint> {
        let (k, dk) = self.spinor_k(z)?;
        let li = 1.0 / self.lambda;
        let pt = SpinorPoint {
            k1: li * k[0],
            k2: self.mu * k[1],
            dk1: li * dk[0],
            dk2: self.mu * dk[1],
        };
        let scale = pt.k1.norm_sqr() + pt.k2.norm_sqr();
        if scale < 1e-24 {
            return Err(Error::numerical(format!(
                "singular point at z = {z}: both spinors vanish (double root of the Hopf polynomial)"
            )));
        }
        Ok(pt)
    }

    /// k1k2′ − k1′k2; equals iφ(z) identically for solved end data.
    pub fn w_invariant(&self, z: Complex64) -> Result<Complex64> {
        let s = self.spinor_point(z)?;
        Ok(s.k1 * s.dk2 - s.dk1 * s.k2)
    }

    /// Weierstrass data (g, ω/dz, Q/dz²). Near poles of g use
    /// `spinor_point` directly; the returned g is k2/k1 as computed.
    pub fn weierstrass_at(&self, z: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        let s = self.spinor_point(z)?;
        let one = Complex64::new(1.0, 0.0);
        let chart = z * z * (z - one) * (z - one);
        let g = s.k2 / s.k1;
        let omega = s.k1 * s.k1 / chart;
        let q = (s.k1 * s.dk2 - s.dk1 * s.k2) / chart;
        Ok((g, omega, q))
    }

    /// The ℂ³ immersion integrand (1−g², i(1+g²), 2g)·ω/dz computed
    /// projectively from the spinors.
    pub fn integrand(&self, z: Complex64) -> Result<[Complex64; 3]> {
        let s = self.spinor_point(z)?;
        let one = Complex64::new(1.0, 0.0);
        let chart = z * z * (z - one) * (z - one);
        let k1sq = s.k1 * s.k1;
        let k2sq = s.k2 * s.k2;
        Ok([
            (k1sq - k2sq) / chart,
            Complex64::i() * (k1sq + k2sq) / chart,
            2.0 * s.k1 * s.k2 / chart,
        ])
    }

    /// The unit normal (stereographic image of g).
    pub fn gauss_map(&self, z: Complex64) -> Result<Vec3> {
        let s = self.spinor_point(z)?;
        let cross = s.k1.conj() * s.k2;
        let denom = s.k1.norm_sqr() + s.k2.norm_sqr();
        Ok(Vec3::new(
            2.0 * cross.re / denom,
            2.0 * cross.im / denom,
            (s.k2.norm_sqr() - s.k1.norm_sqr()) / denom,
        ))
    }

    /// Conformal factor of the first fundamental form (I = coeff·|dz|²) and
    /// the second fundamental form [[−2ReQ, 2ImQ], [2ImQ, 2ReQ]] in the
    /// (Re z, Im z) chart.
    pub fn first_second_forms(&self, z: Complex64) -> Result<(f64, [[f64; 2]; 2])> {
        let s = self.spinor_point(z)?;
        let one = Complex64::new(1.0, 0.0);
        let chart = (z * (z - one)).norm_sqr();
        let i_coeff = (s.k1.norm_sqr() + s.k2.norm_sqr()).powi(2) / (chart * chart);
        let q = (s.k1 * s.dk2 - s.dk1 * s.k2) / (z * z * (z - one) * (z - one));
        let (e, f) = (-2.0 * q.re, 2.0 * q.im);
        Ok((i_coeff, [[e, f], [f, -e]]))
    }

    /// Integrate the immersion from the basepoint along a planned path.
    /// The global translation puts the image of (0, 1) on the x1-axis.
    pub fn immerse(&self, z: Complex64) -> Result<Vec3> {
        let path = plan_path(BASEPOINT, z, PATH_CLEARANCE)?;
        self.immerse_along(&path)
    }

    /// Integrate the immersion along an explicit polyline from the
    /// basepoint (the first waypoint must be the basepoint).
    pub fn immerse_along(&self, path: &[Complex64]) -> Result<Vec3> {
        if path.first() != Some(&BASEPOINT) {
            return Err(Error::invalid("immersion path must start at the basepoint"));
        }
        let quad = integrate_polyline(&|w| self.integrand(w), path, 1e-9)?;
        if quad.error > 1e-8 {
            return Err(Error::numerical(format!(
                "immersion quadrature error estimate {:.2e} exceeds 1e-8",
                quad.error
            )));
        }
        Ok(Vec3::new(
            quad.value[0].re,
            quad.value[1].re,
            quad.value[2].re,
        ) - self.x_offset)
    }

    /// Recover the end weight from the decay of the Hopf differential:
    /// Q·ζ²·2π/(i·angle) → distance parameter in the end's local coordinate
    /// ζ, Richardson-extrapolated over radii 1e-3 and 1e-4.
    pub fn fit_end_asymptotics(&self, end: EndIndex) -> Result<EndAsymptotics> {
        let one = Complex64::new(1.0, 0.0);
        let angle = match end {
            EndIndex::Zero => self.ends.alpha,
            EndIndex::One => self.ends.gamma,
            EndIndex::Infinity => self.ends.beta,
        };
        let estimate = |r: f64| -> Result<Complex64> {
            let z = match end {
                EndIndex::Zero => Complex64::new(0.0, r),
                EndIndex::One => one + Complex64::new(0.0, r),
                EndIndex::Infinity => Complex64::new(0.0, 1.0 / r),
            };
            // φ_num = (k1k2′ − k1′k2)/i; Q·ζ² reduces to φ_num over the
            // complementary chart factor.
            let phi_num = self.w_invariant(z)? / Complex64::i();
            let denom = match end {
                EndIndex::Zero => (z - one) * (z - one),
                EndIndex::One => z * z,
                EndIndex::Infinity => (z - one) * (z - one),
            };
            Ok(2.0 * std::f64::consts::PI * phi_num / (angle * denom))
        };
        let (r1, r2) = (1e-3, 1e-4);
        let f1 = estimate(r1)?;
        let f2 = estimate(r2)?;
        let extrapolated = (r1 * f2 - r2 * f1) / (r1 - r2);
        if !extrapolated.re.is_finite() {
            return Err(Error::numerical("end asymptotics fit did not converge"));
        }
        let fitted = extrapolated.re;
        Ok(EndAsymptotics {
            end,
            fitted,
            angle,
            residual: (f1 - extrapolated).norm() + extrapolated.im.abs(),
        })
    }
}
