//! The single amplified oscillator, mass `m e^{-gamma t/m}`.
//!
//! Every quantity is the Caldirola-Kanai one with `gamma -> -gamma`; the
//! reduced frequency is unchanged since it depends on `gamma^2`.

use num_complex::Complex64;

use crate::ck::{self, Dispersions, ModeFunction, OscillatorParams};
use crate::error::Result;
use crate::gaussian::Gaussian1D;

/// The growing mode `v(t) = e^{+gamma t/2m} e^{-i Omega t} / sqrt(2 hbar m Omega)`.
///
/// Its Wronskian carries the weight `hbar m e^{-gamma t/m}`, which is what
/// [`ModeFunction::wronskian`] computes when handed `p.reversed()`.
pub fn v_mode(p: &OscillatorParams, t: f64) -> Result<ModeFunction> {
    ck::mode_function(&p.reversed(), t)
}

pub fn amplified_wavefunction(p: &OscillatorParams, n: usize, y: f64, t: f64) -> Result<Complex64> {
    ck::wavefunction_n(&p.reversed(), n, y, t)
}

/// `<y^2>` grows as `e^{gamma t/m}`, `<p_y^2>` shrinks.
pub fn amplified_dispersions(p: &OscillatorParams, t: f64) -> Result<Dispersions> {
    ck::dispersions(&p.reversed(), t)
}

pub fn amplified_density(p: &OscillatorParams, t: f64) -> Result<Gaussian1D> {
    ck::ck_density(&p.reversed(), t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifiedMeasures {
    pub delta_qd: f64,
    pub delta_cc: f64,
}

/// `delta_QD = 1/2` and `delta_CC = (m Omega)^2 e^{-gamma t/m} / (hbar |gamma|)`,
/// infinite at `gamma = 0`.
pub fn amplified_measures(p: &OscillatorParams, t: f64) -> Result<AmplifiedMeasures> {
    let g = amplified_density(p, t)?;
    Ok(AmplifiedMeasures { delta_qd: g.delta_qd()?, delta_cc: g.delta_cc()? })
}
