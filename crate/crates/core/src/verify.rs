//! Named invariant checks with measured defects, grouped in suites.
//!
//! The oracle helpers are public so the test suites can reuse them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amplified;
use crate::bft::{self, BftCoefficients, ParticularSpec};
use crate::ck::{self, OscillatorParams};
use crate::coupled::{self, CoupledParams};
use crate::error::{Error, Result};
use crate::gaussian::{Axis, Gaussian1D};
use crate::grid::{self, Grid1D};

/// Seed of every randomized check.
pub const SEED: u64 = 0x5eed_0d0c;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ck,
    Bft,
    Amplified,
    Coupled,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ck" => Ok(Suite::Ck),
            "bft" => Ok(Suite::Bft),
            "amplified" => Ok(Suite::Amplified),
            "coupled" => Ok(Suite::Coupled),
            "all" => Ok(Suite::All),
            _ => Err(Error::Config(format!("unknown suite '{s}' (ck, bft, amplified, coupled, all)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub defect: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `defect <= tolerance`; a NaN defect fails.
    pub fn bound(name: &str, defect: f64, tolerance: f64) -> Self {
        let outcome = if defect <= tolerance { Outcome::Pass } else { Outcome::Fail };
        Check { name: name.into(), outcome, defect, tolerance, detail: String::new() }
    }

    pub fn info(name: &str, detail: String) -> Self {
        Check { name: name.into(), outcome: Outcome::Info, defect: 0.0, tolerance: 0.0, detail }
    }

    pub fn error(name: &str, e: &Error) -> Self {
        Check {
            name: name.into(),
            outcome: Outcome::Fail,
            defect: f64::INFINITY,
            tolerance: 0.0,
            detail: e.to_string(),
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.outcome {
            Outcome::Info => write!(f, "INFO  {}  {}", self.name, self.detail),
            o => {
                let tag = if o == Outcome::Pass { "PASS" } else { "FAIL" };
                write!(f, "{tag}  {}  defect={:.3e}  tol={:.1e}", self.name, self.defect, self.tolerance)?;
                if !self.detail.is_empty() {
                    write!(f, "  {}", self.detail)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.iter().filter(|c| c.outcome != Outcome::Info).count(), failed)
    }
}

pub fn verify(suite: Suite) -> Report {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Ck | Suite::All) {
        checks.extend(ck_suite());
    }
    if matches!(suite, Suite::Amplified | Suite::All) {
        checks.extend(amplified_suite());
    }
    if matches!(suite, Suite::Bft | Suite::All) {
        checks.extend(bft_suite());
    }
    if matches!(suite, Suite::Coupled | Suite::All) {
        checks.extend(coupled_suite());
    }
    Report { checks }
}

fn run(name: &str, tol: f64, f: impl FnOnce() -> Result<f64>) -> Check {
    match f() {
        Ok(defect) => Check::bound(name, defect, tol),
        Err(e) => Check::error(name, &e),
    }
}

// ---------------------------------------------------------------- oracles

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

/// Underdamped parameters with `|gamma| <= 0.9 * 2 m omega`.
pub fn random_oscillator(rng: &mut impl Rng) -> OscillatorParams {
    let m = rng.random_range(0.5..2.0);
    let omega = rng.random_range(0.5..2.0);
    let gamma = rng.random_range(-0.9..0.9) * 2.0 * m * omega;
    let hbar = rng.random_range(0.5..1.5);
    OscillatorParams { m, gamma, omega, hbar }
}

/// `|D|` in `[0, 10]`, theta at least 0.05 inside the admissible interval.
pub fn random_spec(rng: &mut impl Rng) -> ParticularSpec {
    let d_abs = rng.random_range(0.0..10.0);
    let theta = rng.random_range(FRAC_PI_2 + 0.05..3.0 * FRAC_PI_2 - 0.05);
    let m = rng.random_range(0.5..2.0);
    let omega = rng.random_range(0.5..2.0);
    let gamma = rng.random_range(-0.8..0.8) * 2.0 * m * omega;
    ParticularSpec { d_abs, theta, params: OscillatorParams { m, gamma, omega, hbar: 1.0 } }
}

/// A spec whose reduced state a 128-node grid over 16 sigma can resolve:
/// `|D| <= 3 m Omega/hbar` and `delta_QD >= 0.15`, so the off-diagonal
/// coherence length stays above a few grid spacings.
pub fn resolvable_spec(rng: &mut impl Rng) -> ParticularSpec {
    loop {
        let mut s = random_spec(rng);
        let k = s.params.m * ck::omega_reduced(&s.params).unwrap_or(1.0) / s.params.hbar;
        s.d_abs = rng.random_range(0.0..3.0) * k;
        if bft::reduced_damped(&s, 0.0).and_then(|g| g.delta_qd()).is_ok_and(|d| d >= 0.15) {
            return s;
        }
    }
}

/// A grid spanning `sigmas` standard deviations of the diagonal either side.
pub fn grid_for(g: &Gaussian1D, sigmas: f64, n: usize) -> Result<Grid1D> {
    Grid1D::symmetric(sigmas * g.diagonal_variance().sqrt(), n)
}

/// `|grid purity / 2 - delta_QD|` for a closed-form one-mode state.
pub fn grid_purity_defect(g: &Gaussian1D, n: usize) -> Result<f64> {
    let gdm = grid::discretize1d(g, &grid_for(g, 8.0, n)?);
    Ok((0.5 * gdm.purity() - g.delta_qd()?).abs())
}

/// Largest `|W - i|` over `samples` times in `[0, t_max]`.
pub fn wronskian_defect(p: &OscillatorParams, t_max: f64, samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        let u = ck::mode_function(p, t)?;
        worst = worst.max((u.wronskian(p) - Complex64::i()).norm());
    }
    Ok(worst)
}

/// Central-difference residual of `u'' + (gamma/m) u' + omega^2 u = 0`
/// at `t`, step `1e-4 min(1/omega, m/|gamma|)`, in units of `omega^2 |u|`.
/// Pass `p.reversed()` for the growing mode.
pub fn eom_residual(p: &OscillatorParams, t: f64) -> Result<f64> {
    let scale = if p.gamma == 0.0 { 1.0 / p.omega } else { (1.0 / p.omega).min(p.m / p.gamma.abs()) };
    let h = 1e-4 * scale;
    let u = |s: f64| ck::mode_function(p, s).map(|m| m.u);
    let (um, u0, up) = (u(t - h)?, u(t)?, u(t + h)?);
    let acc = (up - 2.0 * u0 + um) / (h * h);
    let vel = (up - um) / (2.0 * h);
    Ok((acc + (p.gamma / p.m) * vel + p.omega * p.omega * u0).norm() / (p.omega * p.omega * u0.norm()))
}

/// `|u(t)|^2` by fixed-step RK4 on the mode equation from `u(0), u'(0)`.
pub fn rk4_mode_modulus(p: &OscillatorParams, t: f64, steps: usize) -> Result<f64> {
    let m0 = ck::mode_function(p, 0.0)?;
    let f = |y: [Complex64; 2]| [y[1], -(p.gamma / p.m) * y[1] - p.omega * p.omega * y[0]];
    let h = t / steps as f64;
    let mut y = [m0.u, m0.u_dot];
    let add = |a: [Complex64; 2], b: [Complex64; 2], s: f64| [a[0] + b[0] * s, a[1] + b[1] * s];
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(add(y, k1, 0.5 * h));
        let k3 = f(add(y, k2, 0.5 * h));
        let k4 = f(add(y, k3, h));
        for i in 0..2 {
            y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }
    }
    Ok(y[0].norm_sqr())
}

/// Pointwise relative error of `Psi_0(x') Psi_0*(x)` against the closed-form
/// density on a grid of `n` nodes spanning 6 sigma.
pub fn outer_product_defect(p: &OscillatorParams, t: f64, n: usize) -> Result<f64> {
    let g = ck::ck_density(p, t)?;
    let grid = grid_for(&g, 6.0, n)?;
    let mut worst: f64 = 0.0;
    for xp in grid.nodes() {
        for x in grid.nodes() {
            let psi = ck::wavefunction_n(p, 0, xp, t)? * ck::wavefunction_n(p, 0, x, t)?.conj();
            let exact = g.evaluate(xp, x)?;
            worst = worst.max((psi - exact).norm() / exact.norm());
        }
    }
    Ok(worst)
}

/// Largest rate component of the particular solution over an
/// `n x n` grid of `|D| in [0, 10]`, `theta` 0.05 inside the interval.
pub fn fixed_point_defect(p: &OscillatorParams, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d_abs = 10.0 * i as f64 / (n - 1) as f64;
            let theta = FRAC_PI_2 + 0.05 + (PI - 0.1) * j as f64 / (n - 1) as f64;
            let spec = ParticularSpec::new(d_abs, theta, *p)?;
            let cf = bft::particular_solution(&spec)?;
            worst = worst.max(bft::ode_rhs(&cf, p)?.max_modulus());
        }
    }
    Ok(worst)
}

/// Two-mode grid with `n` nodes per axis spanning `sigmas` standard
/// deviations of each reduced diagonal.
pub fn two_mode_grids(spec: &ParticularSpec, t: f64, sigmas: f64, n: usize) -> Result<(Grid1D, Grid1D)> {
    let gx = grid_for(&bft::reduced_damped(spec, t)?, sigmas, n)?;
    let gy = grid_for(&bft::reduced_amplified(spec, t)?, sigmas, n)?;
    Ok((gx, gy))
}

/// `|grid trace - 1|` of the normalized density, `n^2` nodes over 8 sigma.
pub fn grid_trace_defect(spec: &ParticularSpec, t: f64, n: usize) -> Result<f64> {
    let cf = bft::particular_solution(spec)?;
    let g = bft::density(&cf, &spec.params, t)?;
    let (gx, gy) = two_mode_grids(spec, t, 8.0, n)?;
    Ok((grid::trace2d_grid(&g, &gx, &gy) - 1.0).abs())
}

/// Pointwise relative error of the grid partial trace against the
/// closed-form reduction (`over = Y` keeps the damped mode).
pub fn reduction_defect(spec: &ParticularSpec, t: f64, over: Axis, n: usize) -> Result<f64> {
    let cf = bft::particular_solution(spec)?;
    let g = bft::density(&cf, &spec.params, t)?;
    let (gx, gy) = two_mode_grids(spec, t, 8.0, n)?;
    let exact = match over {
        Axis::Y => bft::reduced_damped(spec, t)?,
        Axis::X => bft::reduced_amplified(spec, t)?,
    };
    grid::partial_trace_streaming(&g, &gx, &gy, over).max_relative_error(&exact, 1e-8)
}

/// Componentwise mirror defect between the amplified reduction and the
/// damped reduction of the mirrored spec.
pub fn mirror_defect(spec: &ParticularSpec, t: f64) -> Result<f64> {
    let a = bft::reduced_amplified(spec, t)?;
    let b = bft::reduced_damped(&spec.mirrored(), t)?;
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(1.0);
    Ok(rel(a.norm, b.norm)
        .max(rel(a.gamma_c, b.gamma_c))
        .max(rel(a.gamma_delta, b.gamma_delta))
        .max((a.gamma_mu - b.gamma_mu).norm() / a.gamma_mu.norm().max(1.0)))
}

/// A state off the stationary family: the particular solution with `A`
/// (and `B = A*`) shifted.
pub fn perturbed_state(spec: &ParticularSpec, shift: Complex64) -> Result<BftCoefficients> {
    let mut cf = bft::particular_solution(spec)?;
    cf.a += shift;
    cf.b = cf.a.conj();
    Ok(cf)
}

/// Observed RK4 order from three integrations at `dt, dt/2, dt/4`.
pub fn rk4_order(cf: &BftCoefficients, p: &OscillatorParams, t_end: f64, dt: f64) -> Result<f64> {
    let end = |h: f64| bft::integrate(cf, p, t_end, h).map(|tr| *tr.last());
    let (a, b, c) = (end(dt)?, end(0.5 * dt)?, end(0.25 * dt)?);
    Ok((a.max_difference(&b) / b.max_difference(&c)).log2())
}

/// The reference stationary state: `|D| = 2`, `theta = 3 pi/4`, `m Omega/hbar = 1`.
pub fn reference_spec() -> ParticularSpec {
    ParticularSpec {
        d_abs: 2.0,
        theta: 0.75 * PI,
        params: OscillatorParams { m: 1.0, gamma: 0.0, omega: 1.0, hbar: 1.0 },
    }
}

// ----------------------------------------------------------------- suites

fn ck_suite() -> Vec<Check> {
    let mut rng = rng();
    let params: Vec<OscillatorParams> = (0..8).map(|_| random_oscillator(&mut rng)).collect();
    let unit = OscillatorParams { m: 1.0, gamma: 1.0, omega: 1.0, hbar: 1.0 };
    let mut out = vec![
        run("ck.delta_qd.closed_form", 0.0, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                for t in [0.0, 1.0, 5.0] {
                    worst = worst.max((ck::ck_density(p, t)?.delta_qd()? - 0.5).abs());
                }
            }
            Ok(worst)
        }),
        run("ck.delta_qd.grid_purity", 1e-10, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                for t in [0.0, 1.0, 5.0] {
                    worst = worst.max(grid_purity_defect(&ck::ck_density(p, t)?, 128)?);
                }
            }
            Ok(worst)
        }),
        run("ck.delta_cc.growth", 1e-10, || {
            let mut worst: f64 = 0.0;
            for p in params.iter().filter(|p| p.gamma != 0.0) {
                let d0 = ck::ck_density(p, 0.0)?.delta_cc()?;
                for t in [1.0, 2.5, 5.0] {
                    let ratio = ck::ck_density(p, t)?.delta_cc()? / d0;
                    worst = worst.max((ratio / p.damping_exponent(t).exp() - 1.0).abs());
                }
            }
            Ok(worst)
        }),
        run("ck.delta_cc.reference", 1e-12, || Ok((ck::ck_density(&unit, 0.0)?.delta_cc()? - 0.75).abs())),
        run("ck.wronskian", 1e-12, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                worst = worst.max(wronskian_defect(p, 10.0 * p.m / p.gamma.abs().max(1.0), 100)?);
            }
            Ok(worst)
        }),
        run("ck.eom_residual", 1e-6, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                for t in [0.0, 0.7, 3.0] {
                    worst = worst.max(eom_residual(p, t)?);
                }
            }
            Ok(worst)
        }),
        run("ck.mode.rk4", 1e-10, || {
            let exact = ck::mode_function(&unit, 1.0)?.u.norm_sqr();
            Ok((rk4_mode_modulus(&unit, 1.0, 1000)? - exact).abs())
        }),
        run("ck.density.outer_product", 1e-6, || {
            let mut worst: f64 = 0.0;
            for p in params.iter().take(3) {
                worst = worst.max(outer_product_defect(p, 1.0, 48)?);
            }
            Ok(worst)
        }),
        run("ck.uncertainty.constant", 1e-12, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                let u = ck::uncertainty(p)?;
                for k in 0..=20 {
                    let d = ck::dispersions(p, 0.5 * k as f64)?;
                    worst = worst.max(((d.x2 * d.p2).sqrt() - u).abs() / u);
                }
            }
            Ok(worst)
        }),
        run("ck.energy.constant", 1e-12, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                let e = ck::energy_expectation(p)?;
                let derived = p.hbar * p.omega * p.omega / (2.0 * ck::omega_reduced(p)?);
                worst = worst.max((e - derived).abs() / e);
                for k in 0..=20 {
                    worst = worst.max((ck::energy_at(p, 0.5 * k as f64)? - e).abs() / e);
                }
            }
            Ok(worst)
        }),
        run("ck.grid.spectrum", 1e-8, || {
            let g = ck::ck_density(&params[0], 1.0)?;
            let s = grid::spectrum_check(&grid::discretize1d(&g, &grid_for(&g, 8.0, 128)?))?;
            Ok((-s.min_eig).max(0.0).max((s.trace - 1.0).abs()).max((s.purity - 1.0).abs()))
        }),
    ];
    match (ck::energy_expectation(&unit), ck::energy_expectation_paper(&unit)) {
        (Ok(e), Ok(ep)) => out.push(Check::info(
            "paper_discrepancy.energy",
            format!("m=omega=hbar=gamma=1: computed <H> = {e:.9} (hbar omega^2/2 Omega), printed form gives {ep:.9}"),
        )),
        (Err(e), _) | (_, Err(e)) => out.push(Check::error("paper_discrepancy.energy", &e)),
    }
    out
}

fn amplified_suite() -> Vec<Check> {
    let mut rng = rng();
    let params: Vec<OscillatorParams> = (0..8).map(|_| random_oscillator(&mut rng)).collect();
    let unit = OscillatorParams { m: 1.0, gamma: 1.0, omega: 1.0, hbar: 1.0 };
    vec![
        run("amplified.mirror.mode", 1e-14, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                for t in [0.0, 0.5, 2.0] {
                    let v = amplified::v_mode(p, t)?;
                    let u = ck::mode_function(&OscillatorParams { gamma: -p.gamma, ..*p }, t)?;
                    worst = worst.max((v.u - u.u).norm()).max((v.u_dot - u.u_dot).norm());
                }
            }
            Ok(worst)
        }),
        run("amplified.mirror.wavefunction", 1e-14, || {
            let mut worst: f64 = 0.0;
            let mut r = rng.clone();
            for _ in 0..50 {
                let p = &params[r.random_range(0..params.len())];
                let (y, t) = (r.random_range(-3.0..3.0), r.random_range(0.0..4.0));
                let a = amplified::amplified_wavefunction(p, 0, y, t)?;
                let b = ck::wavefunction_n(&OscillatorParams { gamma: -p.gamma, ..*p }, 0, y, t)?;
                worst = worst.max((a - b).norm());
            }
            Ok(worst)
        }),
        run("amplified.wronskian", 1e-12, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                worst = worst.max(wronskian_defect(&p.reversed(), 10.0 * p.m / p.gamma.abs().max(1.0), 100)?);
            }
            Ok(worst)
        }),
        run("amplified.eom_residual", 1e-6, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                for t in [0.0, 0.7, 3.0] {
                    worst = worst.max(eom_residual(&p.reversed(), t)?);
                }
            }
            Ok(worst)
        }),
        run("amplified.mode.rk4", 1e-10, || {
            let exact = amplified::v_mode(&unit, 1.0)?.u.norm_sqr();
            Ok((rk4_mode_modulus(&unit.reversed(), 1.0, 1000)? - exact).abs() / exact)
        }),
        run("amplified.normalization", 1e-8, || {
            let g = amplified::amplified_density(&unit, 2.0)?;
            let grid = grid_for(&g, 8.0, 256)?;
            let w = grid.weights();
            let total: f64 = grid
                .nodes()
                .iter()
                .zip(&w)
                .map(|(&y, &wi)| amplified::amplified_wavefunction(&unit, 0, y, 2.0).map(|z| wi * z.norm_sqr()))
                .sum::<Result<f64>>()?;
            Ok((total - 1.0).abs())
        }),
        run("amplified.delta_qd", 0.0, || {
            let mut worst: f64 = 0.0;
            for p in &params {
                for t in [0.0, 1.0, 5.0] {
                    worst = worst.max((amplified::amplified_measures(p, t)?.delta_qd - 0.5).abs());
                }
            }
            Ok(worst)
        }),
        run("amplified.delta_cc.decreasing", 0.0, || {
            // count of non-decreasing steps for gamma > 0
            let mut bad = 0.0;
            for p in params.iter().filter(|p| p.gamma > 0.0) {
                let mut prev = f64::INFINITY;
                for k in 0..=20 {
                    let d = amplified::amplified_measures(p, 0.25 * k as f64)?.delta_cc;
                    if !(d < prev) {
                        bad += 1.0;
                    }
                    prev = d;
                }
            }
            Ok(bad)
        }),
        run("amplified.delta_cc.reference", 1e-12, || {
            Ok((amplified::amplified_measures(&unit, 0.0)?.delta_cc - 0.75).abs())
        }),
    ]
}

fn bft_suite() -> Vec<Check> {
    let mut rng = rng();
    let specs: Vec<ParticularSpec> = (0..10).map(|_| random_spec(&mut rng)).collect();
    let gridded: Vec<ParticularSpec> = (0..4).map(|_| resolvable_spec(&mut rng)).collect();
    let damped = OscillatorParams { m: 1.0, gamma: 0.6, omega: 1.2, hbar: 1.0 };
    let reference = reference_spec();
    let mut out = vec![
        run("bft.particular.fixed_point", 1e-13, || {
            let mut worst = fixed_point_defect(&damped, 20)?;
            worst = worst.max(fixed_point_defect(&reference.params, 20)?);
            Ok(worst)
        }),
        run("bft.density.paper_norm", 1e-12, || {
            let mut worst: f64 = 0.0;
            for s in &specs {
                let cf = bft::particular_solution(s)?;
                let g = bft::density(&cf, &s.params, 0.0)?;
                worst = worst.max((g.norm - bft::paper_norm(&cf)).abs() / g.norm);
            }
            Ok(worst)
        }),
        run("bft.density.grid_trace", 1e-6, || {
            let mut worst: f64 = 0.0;
            for s in &gridded {
                for t in [0.0, 1.0, 3.0] {
                    worst = worst.max(grid_trace_defect(s, t, 128)?);
                }
            }
            Ok(worst)
        }),
        run("bft.reduce.damped.grid", 1e-5, || {
            let mut worst: f64 = 0.0;
            for s in gridded.iter().take(2) {
                worst = worst.max(reduction_defect(s, 1.0, Axis::Y, 128)?);
            }
            Ok(worst)
        }),
        run("bft.reduce.amplified.grid", 1e-5, || {
            let mut worst: f64 = 0.0;
            for s in gridded.iter().take(2) {
                worst = worst.max(reduction_defect(s, 1.0, Axis::X, 128)?);
            }
            Ok(worst)
        }),
        run("bft.reduce.closed_form", 1e-12, || {
            let mut worst: f64 = 0.0;
            for s in &specs {
                let g = bft::reduced_damped(s, 1.5)?;
                let (gc, gd, gm) = bft::reduced_gammas_closed_form(s, 1.5)?;
                worst = worst
                    .max((g.gamma_c - gc).abs() / gc)
                    .max((g.gamma_delta - gd).abs() / gd)
                    .max((g.gamma_mu - gm).norm() / gm.norm().max(1.0));
            }
            Ok(worst)
        }),
        run("bft.reduce.same_delta_qd", 1e-12, || {
            let mut worst: f64 = 0.0;
            for s in &specs {
                for t in [0.0, 1.0, 5.0] {
                    let a = bft::reduced_damped(s, t)?.delta_qd()?;
                    let b = bft::reduced_amplified(s, t)?.delta_qd()?;
                    worst = worst.max((a - b).abs());
                }
            }
            Ok(worst)
        }),
        run("bft.reduce.grid_purity", 1e-10, || {
            let mut worst: f64 = 0.0;
            for s in &gridded {
                worst = worst.max(grid_purity_defect(&bft::reduced_damped(s, 1.0)?, 128)?);
            }
            Ok(worst)
        }),
        run("bft.mirror_symmetry", 1e-12, || {
            let mut worst: f64 = 0.0;
            let mut r = rng.clone();
            for _ in 0..50 {
                let s = random_spec(&mut r);
                worst = worst.max(mirror_defect(&s, r.random_range(0.0..3.0))?);
            }
            Ok(worst)
        }),
        run("bft.delta_qd.bound", 0.0, || {
            let mut worst = f64::NEG_INFINITY;
            for s in &specs {
                worst = worst.max(bft::reduced_damped(s, 0.7)?.delta_qd()? - 0.5);
            }
            Ok(worst.max(0.0))
        }),
        run("bft.classicality.decohered", 0.1, || {
            let s = ParticularSpec::new(5.0, FRAC_PI_2 + 0.05, reference.params)?;
            let c = bft::classicality_check(&s, 0.0)?;
            Ok(if c.verdict.decohered { c.delta_qd } else { f64::INFINITY })
        }),
        run("bft.classicality.pure", 0.0, || {
            let s = ParticularSpec::new(0.0, PI, reference.params)?;
            Ok((bft::classicality_check(&s, 0.0)?.delta_qd - 0.5).abs())
        }),
        run("bft.integrate.fixed_point", 1e-10, || {
            let cf = bft::particular_solution(&ParticularSpec::new(1.5, 2.4, damped)?)?;
            let tr = bft::integrate(&cf, &damped, 2.0, 0.01)?;
            Ok(tr.last().max_difference(&BftCoefficients { t: 2.0, ..cf }))
        }),
        run("bft.integrate.trace", 1e-7, || {
            let spec = ParticularSpec::new(2.0, 0.75 * PI, damped)?;
            let cf = perturbed_state(&spec, Complex64::new(0.05, 0.02))?;
            let t_end = 5.0 * damped.m / damped.gamma.max(1.0);
            let tr = bft::integrate(&cf, &damped, t_end, 0.01)?;
            let mut worst: f64 = 0.0;
            for s in tr.samples.iter().step_by(50) {
                worst = worst.max((bft::density(s, &damped, s.t)?.trace()? - 1.0).abs());
            }
            Ok(worst)
        }),
        run("bft.rk4.order", 0.2, || {
            let spec = ParticularSpec::new(2.0, 0.75 * PI, damped)?;
            let cf = perturbed_state(&spec, Complex64::new(0.05, 0.02))?;
            Ok((rk4_order(&cf, &damped, 5.0, 0.04)? - 4.0).abs())
        }),
        run("bft.lvn.order", 0.1, || {
            let cf = bft::particular_solution(&reference)?;
            let (_, _, order) = grid::lvn_order(&cf, &reference.params, 0.0, &Grid1D::symmetric(1.5, 16)?, 0.05)?;
            Ok((order - 2.0).abs())
        }),
    ];
    // Second-order truncation on a unit-width state is about 4.8e-4 at
    // h = 0.05; the residual bound is checked at h = 0.02.
    out.push(run("bft.lvn.residual", 1e-4, || {
        let cf = bft::particular_solution(&reference)?;
        grid::lvn_residual(&cf, &reference.params, 0.0, &Grid1D::symmetric(1.5, 16)?, 0.02)
    }));
    out.extend(paper_mode_entries(&reference));
    out
}

fn paper_mode_entries(spec: &ParticularSpec) -> Vec<Check> {
    let entry = |name: &str, f: &dyn Fn() -> Result<String>| match f() {
        Ok(detail) => Check::info(name, detail),
        Err(e) => Check::error(name, &e),
    };
    vec![
        entry("paper_discrepancy.delta_qd", &|| {
            let c = bft::classicality_check(spec, 0.0)?;
            Ok(format!(
                "|D|=2 theta=3pi/4 m Omega/hbar=1: definition {:.9}, printed form {:.9}",
                c.delta_qd, c.paper.delta_qd_paper
            ))
        }),
        entry("paper_discrepancy.delta_cc", &|| {
            let c = bft::classicality_check(spec, 0.0)?;
            let later = bft::classicality_check(&ParticularSpec { params: OscillatorParams { gamma: 0.5, omega: 1.0625f64.sqrt(), ..spec.params }, ..*spec }, 2.0)?;
            Ok(format!(
                "definition {:.9}, printed form {:.9}; printed form has no time dependence (definition at gamma=0.5, t=2: {:.9})",
                c.delta_cc, c.paper.delta_cc_paper, later.delta_cc
            ))
        }),
    ]
}

fn coupled_suite() -> Vec<Check> {
    let mut checks = vec![
        run("coupled.uncoupled", 0.0, || {
            let mut worst: f64 = 0.0;
            for (w1, w2) in [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (0.3, 5.0)] {
                worst = worst.max((coupled::coupled_delta_qd(&CoupledParams::new(1.0, w1, w2, 0.0)?)? - 0.5).abs());
            }
            Ok(worst)
        }),
        run("coupled.delta_qd.bound", 0.0, || {
            let mut worst = f64::NEG_INFINITY;
            for i in 0..50 {
                for j in 0..50 {
                    let (w1, w2) = (0.1 + 0.1 * i as f64, 0.1 + 0.1 * j as f64);
                    let lmax = w1 * w2;
                    for k in 0..20 {
                        let lambda = lmax * (-0.99 + 1.98 * k as f64 / 19.0);
                        let d = coupled::coupled_delta_qd(&CoupledParams::new(1.0, w1, w2, lambda)?)?;
                        worst = worst.max(d - 0.5);
                    }
                }
            }
            Ok(worst.max(0.0))
        }),
        run("coupled.delta_cc.inf", 0.0, || {
            let mut bad = 0.0;
            for lambda in [0.0, 0.2, -0.5, 0.9] {
                let g = coupled::coupled_reduced(&CoupledParams::new(1.0, 1.0, 1.3, lambda)?)?.to_gaussian()?;
                if g.delta_cc()? != f64::INFINITY {
                    bad += 1.0;
                }
            }
            Ok(bad)
        }),
        run("coupled.continuity", 1e-6, || {
            let d = |l: f64| coupled::coupled_delta_qd(&CoupledParams::new(1.0, 1.0, 1.5, l)?);
            Ok((d(1e-7)? - d(0.0)?).abs())
        }),
        run("coupled.grid_purity", 1e-10, || {
            let g = coupled::coupled_reduced(&CoupledParams::new(1.0, 1.0, 1.0, 0.5)?)?.to_gaussian()?;
            grid_purity_defect(&g, 128)
        }),
    ];
    checks.push(match coupled::mixing(&CoupledParams { m: 1.0, omega1: 1.0, omega2: 1.0, lambda: 0.5 }) {
        Ok(mx) => Check::bound("coupled.mixing.equal_frequencies", (mx.vartheta - 0.25 * PI).abs(), 1e-15)
            .with_detail(format!("eta = {:.9}", mx.eta)),
        Err(e) => Check::error("coupled.mixing.equal_frequencies", &e),
    });
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_formatting() {
        let c = Check::bound("x.y", 1e-15, 1e-13);
        assert_eq!(c.outcome, Outcome::Pass);
        assert!(c.to_string().starts_with("PASS  x.y"));
        assert_eq!(Check::bound("x", f64::NAN, 1.0).outcome, Outcome::Fail);
        let r = Report { checks: vec![c, Check::info("paper_discrepancy.x", "a".into())] };
        assert!(r.passed());
    }

    #[test]
    fn oracle_values() {
        let unit = OscillatorParams { m: 1.0, gamma: 1.0, omega: 1.0, hbar: 1.0 };
        let exact = (-1f64).exp() / 3f64.sqrt();
        assert!((rk4_mode_modulus(&unit, 1.0, 1000).unwrap() - exact).abs() < 1e-10);
        assert!(eom_residual(&unit, 1.0).unwrap() < 1e-6);
        assert!(fixed_point_defect(&unit, 5).unwrap() < 1e-13);
    }
}
