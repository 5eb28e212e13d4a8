//! The two-mode Bateman-Feshbach-Tikochinsky oscillator: a damped mode x
//! and an amplified mode y exchanging energy.
//!
//! Its density matrix is taken in the Gaussian form of [`Gaussian2D`]; the
//! six complex coefficients obey a closed ODE system ([`ode_rhs`]) with a
//! two-parameter family of stationary points ([`particular_solution`]).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::ck::{omega_reduced, OscillatorParams};
use crate::error::{finite, Error, Result};
use crate::gaussian::{Gaussian1D, Gaussian2D};

/// Coefficient moduli above this are treated as a blow-up.
pub const BLOW_UP_MODULUS: f64 = 1e12;

/// Margin below one half for calling a state decohered.
pub const DECOHERENCE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BftCoefficients {
    pub a: Complex64,
    pub a1: Complex64,
    pub b: Complex64,
    pub b1: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub t: f64,
}

/// Time derivatives of the six coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BftRates {
    pub a: Complex64,
    pub a1: Complex64,
    pub b: Complex64,
    pub b1: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl BftRates {
    pub fn max_modulus(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn to_array(self) -> [Complex64; 6] {
        [self.a, self.a1, self.b, self.b1, self.c, self.d]
    }
}

impl BftCoefficients {
    fn to_array(self) -> [Complex64; 6] {
        [self.a, self.a1, self.b, self.b1, self.c, self.d]
    }

    fn from_array(v: [Complex64; 6], t: f64) -> Self {
        BftCoefficients { a: v[0], a1: v[1], b: v[2], b1: v[3], c: v[4], d: v[5], t }
    }

    /// Zero-dissipation ground state of both normal modes,
    /// `A = B = m omega / 2 hbar`, all mixing terms zero.
    pub fn zero_dissipation(p: &OscillatorParams) -> Self {
        let a = Complex64::from(p.m * p.omega / (2.0 * p.hbar));
        let z = Complex64::default();
        BftCoefficients { a, a1: z, b: a, b1: z, c: z, d: z, t: 0.0 }
    }

    /// `max(|A - B*|, |A1 - B1*|)`: distance from the time-reversal
    /// symmetric family.
    pub fn symmetry_defect(&self) -> f64 {
        (self.a - self.b.conj()).norm().max((self.a1 - self.b1.conj()).norm())
    }

    pub fn max_modulus(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest componentwise modulus of the difference, ignoring `t`.
    pub fn max_difference(&self, other: &BftCoefficients) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// The unnormalized two-mode kernel at time `t`.
    pub fn to_gaussian(&self, p: &OscillatorParams, t: f64) -> Gaussian2D {
        Gaussian2D {
            norm: 1.0,
            a: self.a,
            a1: self.a1,
            b: self.b,
            b1: self.b1,
            c: self.c,
            d: self.d,
            damping_exponent: p.damping_exponent(t),
        }
    }
}

/// Right-hand side of the coefficient equations.
pub fn ode_rhs(cf: &BftCoefficients, p: &OscillatorParams) -> Result<BftRates> {
    let omega_r = omega_reduced(p)?;
    Ok(rhs(cf.to_array(), p.hbar / p.m, p.m * omega_r * omega_r / p.hbar))
}

fn rhs(v: [Complex64; 6], k: f64, potential: f64) -> BftRates {
    let [a, a1, b, b1, c, d] = v;
    let i = Complex64::i();
    BftRates {
        a: i * k * (2.0 * a * c - a1 * d.conj()),
        b: i * k * (2.0 * b * c - b1 * d),
        a1: i * 2.0 * k * (a * d - a.conj() * d.conj()),
        b1: i * 2.0 * k * (b * d.conj() - b.conj() * d),
        c: i * k * (4.0 * a * b + c * c - a1 * b1 - d.conj() * d) - i * potential,
        d: i * 2.0 * k * (a1 * b - a.conj() * b1),
    }
}

/// Fixed step for [`integrate`]: `1e-3 m / max(hbar |A|, m Omega)`.
pub fn default_dt(cf: &BftCoefficients, p: &OscillatorParams) -> Result<f64> {
    let omega_r = omega_reduced(p)?;
    Ok(1e-3 * p.m / (p.hbar * cf.a.norm()).max(p.m * omega_r))
}

/// Per-sample normalizability report for an integrated trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleAssessment {
    pub t: f64,
    pub normalizable: bool,
    /// Relative imaginary part of the kernel trace; zero when Hermitian.
    pub trace_imaginary_defect: f64,
    pub symmetry_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<BftCoefficients>,
    pub dt: f64,
    /// Max coefficient difference at the final time between the run at
    /// `dt` and a run at `dt/2`.
    pub error_estimate: f64,
}

impl Trajectory {
    pub fn last(&self) -> &BftCoefficients {
        self.samples.last().expect("trajectory is never empty")
    }

    /// Flags, rather than rejects, samples outside the normalizable
    /// Hermitian family.
    pub fn assess(&self, p: &OscillatorParams) -> Vec<SampleAssessment> {
        self.samples
            .iter()
            .map(|cf| {
                let g = cf.to_gaussian(p, cf.t);
                let (normalizable, defect) = match g.trace_imaginary_defect() {
                    Ok(d) => (true, d),
                    Err(_) => (false, f64::NAN),
                };
                SampleAssessment {
                    t: cf.t,
                    normalizable,
                    trace_imaginary_defect: defect,
                    symmetry_defect: cf.symmetry_defect(),
                }
            })
            .collect()
    }
}

/// Classical fixed-step RK4 from `cf0.t` to `t_end`. The step is shrunk
/// slightly so the last sample lands on `t_end`.
pub fn integrate(cf0: &BftCoefficients, p: &OscillatorParams, t_end: f64, dt: f64) -> Result<Trajectory> {
    finite(t_end, "t_end")?;
    finite(dt, "dt")?;
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt = {dt} must be positive")));
    }
    if !(t_end > cf0.t) {
        return Err(Error::InvalidParameter(format!("t_end = {t_end} must exceed t0 = {}", cf0.t)));
    }
    let samples = rk4_run(cf0, p, t_end, dt)?;
    let half = rk4_run(cf0, p, t_end, 0.5 * dt)?;
    let error_estimate = samples.last().unwrap().max_difference(half.last().unwrap());
    let span = t_end - cf0.t;
    let steps = (samples.len() - 1) as f64;
    Ok(Trajectory { samples, dt: span / steps, error_estimate })
}

fn rk4_run(cf0: &BftCoefficients, p: &OscillatorParams, t_end: f64, dt: f64) -> Result<Vec<BftCoefficients>> {
    let omega_r = omega_reduced(p)?;
    let k = p.hbar / p.m;
    let potential = p.m * omega_r * omega_r / p.hbar;
    let span = t_end - cf0.t;
    let steps = (span / dt).ceil().max(1.0);
    if steps > 1e8 {
        return Err(Error::StepUnderflow { t: cf0.t, dt });
    }
    let steps = steps as usize;
    let h = span / steps as f64;
    if h <= 4.0 * f64::EPSILON * cf0.t.abs().max(t_end.abs()).max(1.0) {
        return Err(Error::StepUnderflow { t: cf0.t, dt: h });
    }
    let f = |v: [Complex64; 6]| rhs(v, k, potential).to_array();
    let axpy = |v: &[Complex64; 6], s: f64, w: &[Complex64; 6]| {
        let mut out = *v;
        for (o, wi) in out.iter_mut().zip(w) {
            *o += s * wi;
        }
        out
    };

    let mut out = Vec::with_capacity(steps + 1);
    out.push(*cf0);
    let mut v = cf0.to_array();
    for n in 0..steps {
        let k1 = f(v);
        let k2 = f(axpy(&v, 0.5 * h, &k1));
        let k3 = f(axpy(&v, 0.5 * h, &k2));
        let k4 = f(axpy(&v, h, &k3));
        for j in 0..6 {
            v[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = if n + 1 == steps { t_end } else { cf0.t + (n + 1) as f64 * h };
        let next = BftCoefficients::from_array(v, t);
        if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || next.max_modulus() > BLOW_UP_MODULUS {
            let last = *out.last().unwrap();
            return Err(Error::BlowUp { t, last: Box::new(last) });
        }
        out.push(next);
    }
    Ok(out)
}

/// The stationary family, parameterized by `D = |D| e^{i theta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticularSpec {
    pub d_abs: f64,
    pub theta: f64,
    pub params: OscillatorParams,
}

impl ParticularSpec {
    /// `theta` must lie in the open interval `(pi/2, 3 pi/2)` so that
    /// `A + A* > 0`.
    pub fn new(d_abs: f64, theta: f64, params: OscillatorParams) -> Result<Self> {
        let s = ParticularSpec { d_abs, theta, params };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        finite(self.d_abs, "d_abs")?;
        finite(self.theta, "theta")?;
        self.params.validate()?;
        if self.d_abs < 0.0 {
            return Err(Error::InvalidParameter(format!("|D| = {} must be non-negative", self.d_abs)));
        }
        if !(self.theta > FRAC_PI_2 && self.theta < 3.0 * FRAC_PI_2) {
            return Err(Error::NonNormalizable(format!(
                "theta = {} outside (pi/2, 3pi/2): A + A* = -2|A|cos(theta) must be positive",
                self.theta
            )));
        }
        Ok(())
    }

    /// The image under `x <-> y`, `gamma -> -gamma`, `D -> D*`; theta maps to
    /// `2 pi - theta`, which stays inside the admissible interval.
    pub fn mirrored(&self) -> Self {
        ParticularSpec { d_abs: self.d_abs, theta: 2.0 * PI - self.theta, params: self.params.reversed() }
    }

    pub fn d(&self) -> Complex64 {
        Complex64::from_polar(self.d_abs, self.theta)
    }
}

/// `A = B* = [(m Omega / 2 hbar)^2 + |D|^2/4]^{1/2} e^{i(pi - theta)}`,
/// `D = |D| e^{i theta}`, `A1 = B1 = C = 0`.
pub fn particular_solution(spec: &ParticularSpec) -> Result<BftCoefficients> {
    spec.validate()?;
    let k = spec.params.m_omega_over_hbar()?;
    let modulus = (0.25 * k * k + 0.25 * spec.d_abs * spec.d_abs).sqrt();
    let a = Complex64::from_polar(modulus, PI - spec.theta);
    let z = Complex64::default();
    Ok(BftCoefficients { a, a1: z, b: a.conj(), b1: z, c: z, d: spec.d(), t: 0.0 })
}

/// Normalized two-mode density at time `t`.
pub fn density(cf: &BftCoefficients, p: &OscillatorParams, t: f64) -> Result<Gaussian2D> {
    finite(t, "t")?;
    p.validate()?;
    cf.to_gaussian(p, t).normalized()
}

/// `(1/pi) [(A + A*)^2 - (D + D*)^2 / 4]^{1/2}` for the stationary family.
pub fn paper_norm(cf: &BftCoefficients) -> f64 {
    let s = 2.0 * cf.a.re;
    let h = 2.0 * cf.d.re;
    (s * s - 0.25 * h * h).sqrt() / PI
}

pub fn reduced_damped(spec: &ParticularSpec, t: f64) -> Result<Gaussian1D> {
    let cf = particular_solution(spec)?;
    density(&cf, &spec.params, t)?.reduce_over_y()
}

pub fn reduced_amplified(spec: &ParticularSpec, t: f64) -> Result<Gaussian1D> {
    let cf = particular_solution(spec)?;
    density(&cf, &spec.params, t)?.reduce_over_x()
}

/// Closed-form reduced coefficients `(G_c, G_d, G_mu)` of the damped
/// subsystem, written directly in terms of `A` and `D`.
pub fn reduced_gammas_closed_form(spec: &ParticularSpec, t: f64) -> Result<(f64, f64, Complex64)> {
    let cf = particular_solution(spec)?;
    let e = spec.params.damping_exponent(t).exp();
    let (a, d) = (cf.a, cf.d);
    let s = a + a.conj();
    let gc = e * (s - (d + d.conj()).powi(2) / (4.0 * s));
    let gd = e * (s - (d - d.conj()).powi(2) / (4.0 * s));
    let gmu = e * -2.0 * ((a - a.conj()) + (d * d - d.conj() * d.conj()) / (4.0 * s));
    Ok((gc.re, gd.re, gmu))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperMeasures {
    pub delta_qd_paper: f64,
    pub delta_cc_paper: f64,
}

/// The printed closed forms, evaluated verbatim:
/// `dQD = 1/2 sqrt(k^2 / (k^2 cos^2 theta + |D|^2))` and
/// `dCC = 1/2 |cot theta| (k^2 cos^2 theta + |D|^2)` with `k = m Omega / hbar`.
pub fn paper_measures(spec: &ParticularSpec) -> Result<PaperMeasures> {
    spec.validate()?;
    let k = spec.params.m_omega_over_hbar()?;
    let cos = spec.theta.cos();
    let denom = k * k * cos * cos + spec.d_abs * spec.d_abs;
    Ok(PaperMeasures {
        delta_qd_paper: 0.5 * (k * k / denom).sqrt(),
        delta_cc_paper: 0.5 * (cos / spec.theta.sin()).abs() * denom,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub decohered: bool,
    pub correlated: bool,
    pub classical: bool,
}

impl Verdict {
    pub fn from_measures(delta_qd: f64, delta_cc: f64) -> Self {
        let decohered = delta_qd < 0.5 - DECOHERENCE_MARGIN;
        let correlated = delta_cc < 1.0;
        Verdict { decohered, correlated, classical: decohered && correlated }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classicality {
    pub delta_qd: f64,
    pub delta_cc: f64,
    pub paper: PaperMeasures,
    /// Verdict from the definition-based measures of the reduced state.
    pub verdict: Verdict,
    /// Verdict from the printed closed forms.
    pub paper_verdict: Verdict,
}

pub fn classicality_check(spec: &ParticularSpec, t: f64) -> Result<Classicality> {
    let red = reduced_damped(spec, t)?;
    let delta_qd = red.delta_qd()?;
    let delta_cc = red.delta_cc()?;
    let paper = paper_measures(spec)?;
    Ok(Classicality {
        delta_qd,
        delta_cc,
        paper,
        verdict: Verdict::from_measures(delta_qd, delta_cc),
        paper_verdict: Verdict::from_measures(paper.delta_qd_paper, paper.delta_cc_paper),
    })
}
