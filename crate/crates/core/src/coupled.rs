//! Two oscillators with bilinear coupling `lambda x1 x2`, reduced to the
//! first oscillator in the coupled ground state.
//!
//! The reduced matrix is used in its dimensionless form; only the mixing
//! parameters `eta` and `vartheta` enter the decoherence measure.

use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::gaussian::Gaussian1D;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledParams {
    pub m: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub lambda: f64,
}

impl CoupledParams {
    pub fn new(m: f64, omega1: f64, omega2: f64, lambda: f64) -> Result<Self> {
        let p = CoupledParams { m, omega1, omega2, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        finite(self.m, "m")?;
        finite(self.omega1, "omega1")?;
        finite(self.omega2, "omega2")?;
        finite(self.lambda, "lambda")?;
        if !(self.m > 0.0 && self.omega1 > 0.0 && self.omega2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "m, omega1, omega2 must be positive (got {}, {}, {})",
                self.m, self.omega1, self.omega2
            )));
        }
        let gap = self.stability_gap();
        if !(gap > 0.0) {
            return Err(Error::CouplingTooStrong(gap));
        }
        Ok(())
    }

    /// `m^2 w1^2 w2^2 - lambda^2`
    pub fn stability_gap(&self) -> f64 {
        (self.m * self.omega1 * self.omega2).powi(2) - self.lambda * self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mixing {
    pub eta: f64,
    pub vartheta: f64,
}

impl Mixing {
    /// `cosh^2 eta - sinh^2 eta cos^2 2 vartheta`, written as
    /// `1 + sinh^2 eta sin^2 2 vartheta` so the unmixed case is exactly one.
    fn gamma_delta(&self) -> f64 {
        let s = self.eta.sinh() * (2.0 * self.vartheta).sin();
        1.0 + s * s
    }
}

pub fn mixing(p: &CoupledParams) -> Result<Mixing> {
    p.validate()?;
    let m = p.m;
    let (w1s, w2s) = (p.omega1 * p.omega1, p.omega2 * p.omega2);
    let split = (m * m * (w1s - w2s).powi(2) + 4.0 * p.lambda * p.lambda).sqrt();
    let e_eta = (m * (w1s + w2s) + split) / (2.0 * p.stability_gap().sqrt());
    let vartheta = 0.5 * (2.0 * p.lambda).atan2(m * (w2s - w1s));
    Ok(Mixing { eta: e_eta.ln(), vartheta })
}

pub fn coupled_delta_qd(p: &CoupledParams) -> Result<f64> {
    let mx = mixing(p)?;
    Ok(0.5 / mx.gamma_delta().sqrt())
}

/// Reduced state of oscillator 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedReduced {
    /// `cosh eta - sinh eta cos 2 vartheta`
    pub width_d: f64,
    /// `cosh^2 eta - sinh^2 eta cos^2 2 vartheta`, at least one.
    pub gamma_delta_mix: f64,
    pub eta: f64,
    pub vartheta: f64,
}

impl MixedReduced {
    /// `(1/(pi D))^{1/2} exp[-(x_c^2 + G x_d^2)/D]`; no `x_c x_d` term, so
    /// the classical-correlation measure is infinite.
    pub fn to_gaussian(&self) -> Result<Gaussian1D> {
        let inv = 1.0 / self.width_d;
        Gaussian1D::new(
            (inv / std::f64::consts::PI).sqrt(),
            inv,
            self.gamma_delta_mix * inv,
            Complex64::new(0.0, 0.0),
        )
    }
}

pub fn coupled_reduced(p: &CoupledParams) -> Result<MixedReduced> {
    let mx = mixing(p)?;
    let width_d = mx.eta.cosh() - mx.eta.sinh() * (2.0 * mx.vartheta).cos();
    Ok(MixedReduced {
        width_d,
        gamma_delta_mix: mx.gamma_delta(),
        eta: mx.eta,
        vartheta: mx.vartheta,
    })
}
