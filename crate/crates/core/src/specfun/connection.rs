//! Connection matrices between the local bases.
//!
//! The distinguished solution pair σ = (σ1, σ2) is defined by the Near0
//! basis; on the other charts it is ν·(near-1 basis) and ν̂·(near-∞ basis).
//! The entries are ratios of gamma values in the eight exponents; ν is real,
//! ν̂ carries unit-modulus phases e^{iπs}.

use super::basis::ExponentSet;
use super::gamma::gamma_real;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct ConnectionMatrices {
    /// σ (Near0 continuation) = nu · near-1 basis. Real entries.
    pub nu: [[f64; 2]; 2],
    /// σ (Near0 continuation) = nu_hat · near-∞ basis.
    pub nu_hat: [[Complex64; 2]; 2],
}

fn checked_gamma(arg: f64, what: &str) -> Result<f64> {
    if arg < 0.5 {
        let d = (arg - arg.round()).abs();
        if d < 1e-10 {
            return Err(Error::invalid(format!(
                "gamma argument {what} = {arg} is within 1e-10 of a pole"
            )));
        }
    }
    Ok(gamma_real(arg))
}

fn phase(s: f64) -> Complex64 {
    Complex64::from_polar(1.0, PI * s)
}

pub fn connection_matrices(x: &ExponentSet) -> Result<ConnectionMatrices> {
    let (a, b, g) = (x.alpha, x.beta, x.gamma);

    let g1ma = checked_gamma(1.0 - a, "1-α")?;
    let g1pa = checked_gamma(1.0 + a, "1+α")?;
    let gg = checked_gamma(g, "γ")?;
    let gmg = checked_gamma(-g, "-γ")?;
    let gb = checked_gamma(b, "β")?;
    let gmb = checked_gamma(-b, "-β")?;

    let gs = |sa: i8, sb: i8, sc: i8| -> Result<f64> {
        let v = x.s3(sa, sb, sc);
        checked_gamma(v, "s(·,·,·)")
    };

    let nu = [
        [
            g1ma * gg / (gs(-1, -1, 1)? * gs(-1, 1, 1)?),
            g1ma * gmg / (gs(-1, -1, -1)? * gs(-1, 1, -1)?),
        ],
        [
            g1pa * gg / (gs(1, -1, 1)? * gs(1, 1, 1)?),
            g1pa * gmg / (gs(1, -1, -1)? * gs(1, 1, -1)?),
        ],
    ];

    let nu_hat = [
        [
            phase(x.s3(-1, -1, -1)) * g1ma * gb / (gs(-1, 1, -1)? * gs(-1, 1, 1)?),
            phase(x.s3(-1, 1, -1)) * g1ma * gmb / (gs(-1, -1, -1)? * gs(-1, -1, 1)?),
        ],
        [
            phase(x.s3(1, -1, -1)) * g1pa * gb / (gs(1, 1, -1)? * gs(1, 1, 1)?),
            phase(x.s3(1, 1, -1)) * g1pa * gmb / (gs(1, -1, -1)? * gs(1, -1, 1)?),
        ],
    ];

    Ok(ConnectionMatrices { nu, nu_hat })
}
