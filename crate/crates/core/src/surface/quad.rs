//! Adaptive Gauss–Kronrod quadrature along segments and polylines in ℂ, and
//! path planning that detours around the two punctures.
//!
//! The 15-point Kronrod rule with embedded 7-point Gauss rule supplies the
//! error estimate; segments are bisected until the estimate meets the local
//! budget. Integrands are ℂ³-valued (the three immersion coordinates are
//! integrated together).

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Kronrod abscissae for the 15-point rule (positive half, descending; the
/// even-index entries interleave the embedded 7-point Gauss abscissae).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Gauss weights for the embedded 7-point rule (abscissae XGK[1], XGK[3],
/// XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

pub type VecC3 = [Complex64; 3];

fn add(a: VecC3, b: VecC3) -> VecC3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: VecC3, s: Complex64) -> VecC3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn max_norm(a: &VecC3) -> f64 {
    a.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Result of a quadrature: value, accumulated error estimate, evaluation
/// count.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: VecC3,
    pub error: f64,
    pub evals: usize,
}

fn kronrod_pass<F>(f: &F, a: Complex64, b: Complex64) -> Result<(VecC3, f64, usize)>
where
    F: Fn(Complex64) -> Result<VecC3>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = [Complex64::new(0.0, 0.0); 3];
    let mut k_sum = zero;
    let mut g_sum = zero;
    let mut evals = 0usize;
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let vals = if j == 7 {
            let v = f(center)?;
            evals += 1;
            scale(v, Complex64::new(1.0, 0.0))
        } else {
            let v1 = f(center + half * x)?;
            let v2 = f(center - half * x)?;
            evals += 2;
            add(v1, v2)
        };
        k_sum = add(k_sum, scale(vals, Complex64::new(wk, 0.0)));
        if j % 2 == 1 || j == 7 {
            let wg = WG[j / 2];
            g_sum = add(g_sum, scale(vals, Complex64::new(wg, 0.0)));
        }
    }
    let k_val = scale(k_sum, half);
    let g_val = scale(g_sum, half);
    let err = max_norm(&[k_val[0] - g_val[0], k_val[1] - g_val[1], k_val[2] - g_val[2]]);
    Ok((k_val, err, evals))
}

/// Integrate f along the straight segment [a, b], bisecting until the
/// Gauss/Kronrod discrepancy on each piece is below tol · (1 + |piece|).
pub fn integrate_segment<F>(f: &F, a: Complex64, b: Complex64, tol: f64) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<VecC3>,
{
    fn go<F>(
        f: &F,
        a: Complex64,
        b: Complex64,
        tol: f64,
        depth: usize,
        out: &mut QuadResult,
    ) -> Result<()>
    where
        F: Fn(Complex64) -> Result<VecC3>,
    {
        let (val, err, evals) = kronrod_pass(f, a, b)?;
        out.evals += evals;
        if err <= tol * (1.0 + max_norm(&val)) || depth >= 28 {
            if depth >= 28 && err > 1e3 * tol * (1.0 + max_norm(&val)) {
                return Err(Error::numerical(format!(
                    "quadrature failed to converge on [{a}, {b}] (estimate {err:.3e})"
                )));
            }
            out.value = add(out.value, val);
            out.error += err;
            return Ok(());
        }
        let mid = 0.5 * (a + b);
        go(f, a, mid, 0.5 * tol, depth + 1, out)?;
        go(f, mid, b, 0.5 * tol, depth + 1, out)
    }
    let mut out = QuadResult {
        value: [Complex64::new(0.0, 0.0); 3],
        error: 0.0,
        evals: 0,
    };
    go(f, a, b, tol, 0, &mut out)?;
    Ok(out)
}

/// Integrate along a polyline given by waypoints.
pub fn integrate_polyline<F>(f: &F, path: &[Complex64], tol: f64) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<VecC3>,
{
    if path.len() < 2 {
        return Ok(QuadResult {
            value: [Complex64::new(0.0, 0.0); 3],
            error: 0.0,
            evals: 0,
        });
    }
    let total_len: f64 = path.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    let mut out = QuadResult {
        value: [Complex64::new(0.0, 0.0); 3],
        error: 0.0,
        evals: 0,
    };
    for w in path.windows(2) {
        let frac = ((w[1] - w[0]).norm() / total_len).max(1e-3);
        let seg = integrate_segment(f, w[0], w[1], tol * frac)?;
        out.value = add(out.value, seg.value);
        out.error += seg.error;
        out.evals += seg.evals;
    }
    Ok(out)
}

/// Minimal distance from point w to the segment [a, b].
fn segment_distance(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = ((w - a).re * ab.re + (w - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (w - (a + ab * t)).norm()
}

/// Plan a path from `from` to `to` that keeps a clearance around the
/// punctures 0 and 1: straight where possible, with a circular detour
/// (sampled as a polyline) around any puncture the straight segment would
/// graze. Both endpoints must clear the punctures by at least 1e-3.
pub fn plan_path(from: Complex64, to: Complex64, clearance: f64) -> Result<Vec<Complex64>> {
    let punctures = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    for &w in &punctures {
        for (name, z) in [("start", from), ("end", to)] {
            if (z - w).norm() < 1e-3 {
                return Err(Error::invalid(format!(
                    "path {name} point {z} is within 1e-3 of the puncture {w}"
                )));
            }
        }
    }
    let mut path = vec![from];
    let mut current = from;
    // Process punctures in the order they are met along the segment.
    let ab = to - from;
    let mut hits: Vec<(f64, Complex64, f64)> = Vec::new();
    for &w in &punctures {
        // Effective clearance: never larger than the endpoint distances.
        let c = clearance
            .min(0.999 * (from - w).norm())
            .min(0.999 * (to - w).norm())
            .max(1e-3);
        if segment_distance(from, to, w) >= c {
            continue;
        }
        let t_foot = ((w - from).re * ab.re + (w - from).im * ab.im) / ab.norm_sqr();
        hits.push((t_foot, w, c));
    }
    hits.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    for (_, w, c) in hits {
        // Intersection parameters of the segment with the circle |z−w| = c.
        let d = from - w;
        let aa = ab.norm_sqr();
        let bb = 2.0 * (d.re * ab.re + d.im * ab.im);
        let cc = d.norm_sqr() - c * c;
        let disc = bb * bb - 4.0 * aa * cc;
        if disc <= 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        let t1 = ((-bb - sq) / (2.0 * aa)).clamp(0.0, 1.0);
        let t2 = ((-bb + sq) / (2.0 * aa)).clamp(0.0, 1.0);
        if t2 - t1 < 1e-12 {
            continue;
        }
        let p1 = from + ab * t1;
        let p2 = from + ab * t2;
        let th1 = (p1 - w).arg();
        let th2 = (p2 - w).arg();
        // Two candidate sweeps; take the one whose midpoint sits higher in
        // the upper half-plane (the domain of the immersion).
        let sweep_ccw = {
            let mut d = th2 - th1;
            if d < 0.0 {
                d += std::f64::consts::TAU;
            }
            d
        };
        let sweep_cw = sweep_ccw - std::f64::consts::TAU;
        let mid_im = |sweep: f64| (w + Complex64::from_polar(c, th1 + 0.5 * sweep)).im;
        let sweep = if mid_im(sweep_ccw) >= mid_im(sweep_cw) {
            sweep_ccw
        } else {
            sweep_cw
        };
        let steps = (sweep.abs() / (std::f64::consts::PI / 8.0)).ceil().max(1.0) as usize;
        if current != p1 {
            path.push(p1);
        }
        for k in 1..=steps {
            let th = th1 + sweep * (k as f64) / (steps as f64);
            path.push(w + Complex64::from_polar(c, th));
        }
        current = *path.last().unwrap();
    }
    if current != to {
        path.push(to);
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn wrap(f: impl Fn(Complex64) -> Complex64) -> impl Fn(Complex64) -> Result<VecC3> {
        move |z| Ok([f(z), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    #[test]
    fn rule_weights_sum_to_two() {
        let k: f64 = WGK.iter().take(7).map(|w| 2.0 * w).sum::<f64>() + WGK[7];
        assert!((k - 2.0).abs() < 1e-13);
        let g: f64 = WG.iter().take(3).map(|w| 2.0 * w).sum::<f64>() + WG[3];
        assert!((g - 2.0).abs() < 1e-13);
    }

    #[test]
    fn polynomial_exactness() {
        // K15 integrates polynomials up to degree 22 exactly; check z^9 and
        // z^21 on a slanted complex segment against the antiderivative.
        for n in [9u32, 21] {
            let f = wrap(move |z: Complex64| z.powu(n));
            let (a, b) = (c(-0.3, 0.2), c(1.1, 1.7));
            let got = integrate_segment(&f, a, b, 1e-12).unwrap();
            let exact = (b.powu(n + 1) - a.powu(n + 1)) / (f64::from(n) + 1.0);
            assert!(
                (got.value[0] - exact).norm() < 1e-12 * (1.0 + exact.norm()),
                "degree {n}"
            );
        }
    }

    #[test]
    fn exponential_segment() {
        let f = wrap(|z: Complex64| z.exp());
        let (a, b) = (c(0.0, 0.0), c(1.0, 2.0));
        let got = integrate_segment(&f, a, b, 1e-13).unwrap();
        let exact = b.exp() - a.exp();
        assert!((got.value[0] - exact).norm() < 1e-13 * exact.norm());
        assert!(got.error < 1e-10);
    }

    #[test]
    fn adaptive_near_singularity() {
        // 1/(z − w) along a segment passing close to (but not through) w;
        // exact value is the difference of principal logs since the segment
        // stays in a half-plane around the branch cut's complement.
        let w = c(0.5, -0.02);
        let f = wrap(move |z: Complex64| 1.0 / (z - w));
        let (a, b) = (c(0.0, 0.1), c(1.0, 0.1));
        let got = integrate_segment(&f, a, b, 1e-12).unwrap();
        let exact = (b - w).ln() - (a - w).ln();
        assert!((got.value[0] - exact).norm() < 1e-10);
    }

    #[test]
    fn polyline_matches_single_segment_for_holomorphic_integrand() {
        let f = wrap(|z: Complex64| (z * z + c(1.0, 0.5)).exp() * z.sin());
        let a = c(0.3, 1.0);
        let b = c(2.0, 0.4);
        let direct = integrate_segment(&f, a, b, 1e-13).unwrap();
        let detour = integrate_polyline(&f, &[a, c(1.0, 2.0), c(1.8, 1.5), b], 1e-13).unwrap();
        assert!((direct.value[0] - detour.value[0]).norm() < 1e-11);
    }

    #[test]
    fn path_planner_clears_punctures() {
        // A segment running just above the real axis grazes both punctures;
        // the planned path must detour and keep the clearance.
        let from = c(-1.0, 0.002);
        let to = c(2.0, 0.002);
        let path = plan_path(from, to, 0.01).unwrap();
        assert!(path.len() > 2, "expected a detour, got {path:?}");
        for w in path.windows(2) {
            for p in [c(0.0, 0.0), c(1.0, 0.0)] {
                let d = segment_distance(w[0], w[1], p);
                assert!(d >= 0.9 * 0.01 * (std::f64::consts::PI / 16.0).cos(), "clearance {d}");
            }
        }
        assert_eq!(*path.first().unwrap(), from);
        assert_eq!(*path.last().unwrap(), to);

        // A clear segment stays a single segment.
        let path = plan_path(c(0.0, 1.0), c(0.5, 0.5), 0.01).unwrap();
        assert_eq!(path.len(), 2);

        // Endpoints too close to a puncture are rejected.
        assert!(plan_path(c(0.0005, 0.0), c(0.0, 1.0), 0.01).is_err());
    }

    #[test]
    fn detour_preserves_holomorphic_integrals() {
        // For an integrand holomorphic near the puncture the detour changes
        // nothing; compare a grazing path with a wide bypass.
        let f = wrap(|z: Complex64| z.cos() * (0.3 * z).exp());
        let from = c(-1.0, 0.002);
        let to = c(2.0, 0.002);
        let planned = plan_path(from, to, 0.01).unwrap();
        let got = integrate_polyline(&f, &planned, 1e-13).unwrap();
        let wide = integrate_polyline(&f, &[from, c(1.0, 1.2), to], 1e-13).unwrap();
        assert!((got.value[0] - wide.value[0]).norm() < 1e-10);
    }
}
