//! Caldirola-Kanai oscillator: a single mode with mass `m e^{gamma t/m}`.
//!
//! Everything here is closed form, built from the underdamped mode function
//! `u(t) = e^{-gamma t/2m} e^{-i Omega t} / sqrt(2 hbar m Omega)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::gaussian::Gaussian1D;

/// Largest Hermite order accepted by [`wavefunction_n`].
pub const MAX_HERMITE_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub m: f64,
    pub gamma: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    /// Validated parameters; the damping must be strictly underdamped.
    pub fn new(m: f64, gamma: f64, omega: f64, hbar: f64) -> Result<Self> {
        let p = OscillatorParams { m, gamma, omega, hbar };
        p.validate()?;
        Ok(p)
    }

    /// Natural units, `hbar = 1`.
    pub fn natural(m: f64, gamma: f64, omega: f64) -> Result<Self> {
        Self::new(m, gamma, omega, 1.0)
    }

    /// Frequency from the spring constant, `omega = sqrt(k/m)`.
    pub fn from_spring(m: f64, k: f64, gamma: f64, hbar: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!("spring constant k = {k} must be positive")));
        }
        Self::new(m, gamma, (k / m).sqrt(), hbar)
    }

    pub fn validate(&self) -> Result<()> {
        finite(self.m, "m")?;
        finite(self.gamma, "gamma")?;
        finite(self.omega, "omega")?;
        finite(self.hbar, "hbar")?;
        if !(self.m > 0.0) {
            return Err(Error::InvalidParameter(format!("mass m = {} must be positive", self.m)));
        }
        if !(self.omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega = {} must be positive", self.omega)));
        }
        if !(self.hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar = {} must be positive", self.hbar)));
        }
        let bound = 2.0 * self.m * self.omega;
        if !(self.gamma.abs() < bound) {
            return Err(Error::Regime { gamma: self.gamma.abs(), bound });
        }
        Ok(())
    }

    /// The same oscillator with the damping sign flipped.
    pub fn reversed(&self) -> Self {
        OscillatorParams { gamma: -self.gamma, ..*self }
    }

    /// `gamma t / m`.
    pub fn damping_exponent(&self, t: f64) -> f64 {
        self.gamma * t / self.m
    }

    /// `m Omega / hbar`.
    pub fn m_omega_over_hbar(&self) -> Result<f64> {
        Ok(self.m * omega_reduced(self)? / self.hbar)
    }
}

/// `Omega = sqrt(omega^2 - (gamma/2m)^2)`.
pub fn omega_reduced(p: &OscillatorParams) -> Result<f64> {
    p.validate()?;
    let g = p.gamma / (2.0 * p.m);
    Ok((p.omega * p.omega - g * g).sqrt())
}

/// Value of a mode function and its time derivative at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub u: Complex64,
    pub u_dot: Complex64,
    pub t: f64,
}

impl ModeFunction {
    /// `hbar m e^{gamma t/m} (u_dot* u - u_dot u*)`; equals `i` for a
    /// correctly normalized mode.
    pub fn wronskian(&self, p: &OscillatorParams) -> Complex64 {
        let w = self.u_dot.conj() * self.u - self.u_dot * self.u.conj();
        p.hbar * p.m * p.damping_exponent(self.t).exp() * w
    }
}

pub fn mode_function(p: &OscillatorParams, t: f64) -> Result<ModeFunction> {
    finite(t, "t")?;
    let omega_r = omega_reduced(p)?;
    let amp = (-p.gamma * t / (2.0 * p.m)).exp() / (2.0 * p.hbar * p.m * omega_r).sqrt();
    let u = amp * Complex64::from_polar(1.0, -omega_r * t);
    let rate = Complex64::new(-p.gamma / (2.0 * p.m), -omega_r);
    Ok(ModeFunction { u, u_dot: rate * u, t })
}

/// Physicists' Hermite polynomials `H_0..=H_n` at `z` by upward recurrence.
pub fn hermite(n: usize, z: f64) -> Result<Vec<f64>> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::HermiteOrder(n));
    }
    let mut h = Vec::with_capacity(n + 1);
    h.push(1.0);
    if n >= 1 {
        h.push(2.0 * z);
    }
    for k in 1..n {
        let next = 2.0 * z * h[k] - 2.0 * k as f64 * h[k - 1];
        h.push(next);
    }
    Ok(h)
}

/// Number-state wave function `Psi_n(x, t)`.
pub fn wavefunction_n(p: &OscillatorParams, n: usize, x: f64, t: f64) -> Result<Complex64> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::HermiteOrder(n));
    }
    finite(x, "x")?;
    finite(t, "t")?;
    let omega_r = omega_reduced(p)?;
    let growth = p.damping_exponent(t).exp();
    let scale = p.m * omega_r * growth / p.hbar;
    let z = scale.sqrt() * x;
    let hn = hermite(n, z)?[n];
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let norm = (scale / PI).powf(0.25) * (-0.5 * (n as f64 * 2f64.ln() + log_fact)).exp();
    let phase = Complex64::from_polar(1.0, -(n as f64 + 0.5) * omega_r * t);
    let chirp = Complex64::new(p.m * omega_r / (2.0 * p.hbar), p.gamma / (4.0 * p.hbar));
    let gauss = (-growth * chirp * (x * x)).exp();
    Ok(norm * hn * phase * gauss)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersions {
    /// `<x^2>`
    pub x2: f64,
    /// `<p^2>`
    pub p2: f64,
}

pub fn dispersions(p: &OscillatorParams, t: f64) -> Result<Dispersions> {
    finite(t, "t")?;
    let omega_r = omega_reduced(p)?;
    let growth = p.damping_exponent(t).exp();
    Ok(Dispersions {
        x2: p.hbar / (2.0 * p.m * omega_r * growth),
        p2: p.hbar * p.m * p.omega * p.omega * growth / (2.0 * omega_r),
    })
}

/// `Delta x Delta p = hbar omega / (2 Omega)`, constant in time.
pub fn uncertainty(p: &OscillatorParams) -> Result<f64> {
    let omega_r = omega_reduced(p)?;
    Ok(p.hbar * p.omega / (2.0 * omega_r))
}

/// `<H>` at time `t`, assembled from the dispersions with the
/// time-dependent mass.
pub fn energy_at(p: &OscillatorParams, t: f64) -> Result<f64> {
    let d = dispersions(p, t)?;
    let mass = p.m * p.damping_exponent(t).exp();
    Ok(d.p2 / (2.0 * mass) + 0.5 * mass * p.omega * p.omega * d.x2)
}

/// Ground-state energy expectation; time independent, `hbar omega^2 / (2 Omega)`.
pub fn energy_expectation(p: &OscillatorParams) -> Result<f64> {
    energy_at(p, 0.0)
}

/// The printed closed form `hbar omega^2 / Omega`, kept for comparison.
pub fn energy_expectation_paper(p: &OscillatorParams) -> Result<f64> {
    let omega_r = omega_reduced(p)?;
    Ok(p.hbar * p.omega * p.omega / omega_r)
}

/// Density matrix `Psi_0(x') Psi_0*(x)` of the ground state.
pub fn ck_density(p: &OscillatorParams, t: f64) -> Result<Gaussian1D> {
    finite(t, "t")?;
    let omega_r = omega_reduced(p)?;
    let growth = p.damping_exponent(t).exp();
    let g = p.m * omega_r * growth / p.hbar;
    let mu = Complex64::new(0.0, p.gamma * growth / p.hbar);
    Gaussian1D::new((g / PI).sqrt(), g, g, mu)
}

/// Printed closed form `(m Omega)^2 e^{gamma t/m} / (hbar gamma)`; infinite at
/// zero damping.
pub fn delta_cc_paper(p: &OscillatorParams, t: f64) -> Result<f64> {
    let omega_r = omega_reduced(p)?;
    if p.gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((p.m * omega_r).powi(2) * p.damping_exponent(t).exp() / (p.hbar * p.gamma.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(gamma: f64) -> OscillatorParams {
        OscillatorParams::natural(1.0, gamma, 1.0).unwrap()
    }

    #[test]
    fn reduced_frequency() {
        assert_eq!(omega_reduced(&unit(0.0)).unwrap(), 1.0);
        assert!((omega_reduced(&unit(1.0)).unwrap() - 0.8660254037844386).abs() < 1e-15);
        assert!(matches!(OscillatorParams::natural(1.0, 2.0, 1.0), Err(Error::Regime { .. })));
        assert!(matches!(OscillatorParams::natural(1.0, -2.5, 1.0), Err(Error::Regime { .. })));
        assert!(OscillatorParams::natural(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn spring_constant() {
        let p = OscillatorParams::from_spring(2.0, 8.0, 0.0, 1.0).unwrap();
        assert_eq!(p.omega, 2.0);
    }

    #[test]
    fn mode_at_origin() {
        let u = mode_function(&unit(1.0), 0.0).unwrap();
        assert!((u.u.re - 0.7598356856515925).abs() < 1e-15);
        assert_eq!(u.u.im, 0.0);
    }

    #[test]
    fn wronskian_is_i() {
        let p = unit(1.0);
        for t in [0.0, 1.0, 5.0] {
            let w = mode_function(&p, t).unwrap().wronskian(&p);
            assert!((w - Complex64::i()).norm() < 1e-12, "t = {t}: {w}");
        }
    }

    #[test]
    fn hermite_low_orders() {
        let h = hermite(4, 0.5).unwrap();
        assert_eq!(h, vec![1.0, 1.0, -1.0, -5.0, 1.0]);
        assert!(matches!(hermite(65, 0.0), Err(Error::HermiteOrder(65))));
    }

    #[test]
    fn ground_state_prefactor() {
        let p = unit(1.0);
        let v = wavefunction_n(&p, 0, 0.0, 0.0).unwrap();
        assert!((v.re - 0.7245947611626322).abs() < 1e-14);
        for t in [0.0, 0.7, 3.0] {
            assert_eq!(wavefunction_n(&p, 1, 0.0, t).unwrap().norm(), 0.0);
        }
        assert!(wavefunction_n(&p, 65, 0.0, 0.0).is_err());
    }

    #[test]
    fn dispersion_values() {
        let d = dispersions(&unit(1.0), 0.0).unwrap();
        assert!((d.x2 - 0.5773502691896258).abs() < 1e-15);
        assert!((d.p2 - 0.5773502691896258).abs() < 1e-15);
        let d0 = dispersions(&unit(0.0), 3.0).unwrap();
        assert!((d0.x2 - 0.5).abs() < 1e-15 && (d0.p2 - 0.5).abs() < 1e-15);
        let e = dispersions(&unit(1.0), 1.0).unwrap();
        assert!((e.x2 / d.x2 - (-1.0f64).exp()).abs() < 1e-15);
        assert!((e.p2 / d.p2 - 1f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn constants_of_motion() {
        let p = unit(1.0);
        let u = uncertainty(&p).unwrap();
        assert!((u - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(uncertainty(&unit(0.0)).unwrap(), 0.5);
        for t in [0.0, 1.0, 3.0] {
            let d = dispersions(&p, t).unwrap();
            assert!(((d.x2 * d.p2).sqrt() - u).abs() < 1e-12);
        }
        let e0 = energy_at(&p, 0.0).unwrap();
        assert!((e0 - energy_at(&p, 7.0).unwrap()).abs() < 1e-12);
        assert!((e0 - 0.5773502691896258).abs() < 1e-15);
        assert_eq!(energy_expectation(&unit(0.0)).unwrap(), 0.5);
        assert!((energy_expectation_paper(&p).unwrap() - 2.0 * e0).abs() < 1e-15);
    }

    #[test]
    fn density_coefficients() {
        let g = ck_density(&unit(1.0), 0.0).unwrap();
        assert!((g.gamma_c - 0.8660254037844386).abs() < 1e-15);
        assert_eq!(g.gamma_c, g.gamma_delta);
        assert_eq!(g.gamma_mu, Complex64::new(0.0, 1.0));
        assert_eq!(g.delta_qd().unwrap(), 0.5);
        assert!((g.trace().unwrap() - 1.0).abs() < 1e-15);
        assert!((g.delta_cc().unwrap() - 0.75).abs() < 1e-12);
        let g0 = ck_density(&unit(0.0), 2.0).unwrap();
        assert_eq!(g0.gamma_mu, Complex64::new(0.0, 0.0));
        assert_eq!(g0.delta_cc().unwrap(), f64::INFINITY);
    }

    #[test]
    fn delta_cc_growth() {
        let p = unit(1.0);
        let c0 = ck_density(&p, 0.0).unwrap().delta_cc().unwrap();
        let c1 = ck_density(&p, 1.0).unwrap().delta_cc().unwrap();
        assert!((c1 - 0.75 * 1f64.exp()).abs() < 1e-12);
        assert!((c1 / c0 - 1f64.exp()).abs() < 1e-12);
        assert!((delta_cc_paper(&p, 1.0).unwrap() - c1).abs() < 1e-12);
    }
}
