//! Gaussian density matrices in coordinate representation.
//!
//! A one-mode state is written in the centre/relative coordinates
//! `x_c = (x' + x)/2`, `x_d = (x' - x)/2` as
//!
//! ```text
//! rho(x', x) = norm * exp(-G_c x_c^2 - G_d x_d^2 - G_mu x_c x_d)
//! ```
//!
//! and a two-mode state uses the damped/amplified block form with the
//! `e^{+E}` / `e^{-E}` time factors on the x and y blocks.

use num_complex::Complex64;

use crate::error::{finite, Error, Result};

/// Relative tolerance used when a coefficient that should be real picks up
/// an imaginary part through cancellation.
const REAL_TOL: f64 = 1e-9;

/// Whether a one-mode Gaussian respects `G_c <= G_d` (purity at most one).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Physicality {
    Physical,
    /// `G_c > G_d`: purity exceeds one. Flagged, not rejected, because
    /// exploratory trajectories may pass through such states.
    PurityAboveOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian1D {
    pub norm: f64,
    pub gamma_c: f64,
    pub gamma_delta: f64,
    /// Purely imaginary for Hermitian states.
    pub gamma_mu: Complex64,
}

impl Gaussian1D {
    pub fn new(norm: f64, gamma_c: f64, gamma_delta: f64, gamma_mu: Complex64) -> Result<Self> {
        finite(norm, "norm")?;
        finite(gamma_c, "gamma_c")?;
        finite(gamma_delta, "gamma_delta")?;
        finite(gamma_mu.re, "gamma_mu")?;
        finite(gamma_mu.im, "gamma_mu")?;
        Ok(Gaussian1D { norm, gamma_c, gamma_delta, gamma_mu })
    }

    /// Same exponent, normalized to unit trace.
    pub fn normalized(gamma_c: f64, gamma_delta: f64, gamma_mu: Complex64) -> Result<Self> {
        let g = Gaussian1D::new(1.0, gamma_c, gamma_delta, gamma_mu)?;
        let tr = g.trace()?;
        Ok(Gaussian1D { norm: 1.0 / tr, ..g })
    }

    /// Builds the state from the exponent written in the original
    /// coordinates, `rho = norm * exp(-(alpha x'^2 + beta x' x + kappa x^2))`.
    ///
    /// Fails when the centre/relative coefficients are not real, i.e. the
    /// kernel is not Hermitian.
    pub fn from_primed_form(
        norm: f64,
        alpha: Complex64,
        beta: Complex64,
        kappa: Complex64,
    ) -> Result<Self> {
        let gc = alpha + beta + kappa;
        let gd = alpha - beta + kappa;
        let gmu = 2.0 * (alpha - kappa);
        for g in [gc, gd] {
            if g.im.abs() > REAL_TOL * g.norm().max(1.0) {
                return Err(Error::NonHermitian { defect: g.im.abs() });
            }
        }
        Gaussian1D::new(norm, gc.re, gd.re, gmu)
    }

    pub fn evaluate(&self, x_prime: f64, x: f64) -> Result<Complex64> {
        finite(x_prime, "x'")?;
        finite(x, "x")?;
        Ok(self.kernel(x_prime, x))
    }

    /// Unchecked evaluation for hot loops.
    #[inline]
    pub(crate) fn kernel(&self, x_prime: f64, x: f64) -> Complex64 {
        let xc = 0.5 * (x_prime + x);
        let xd = 0.5 * (x_prime - x);
        let expo = -self.gamma_c * xc * xc - self.gamma_delta * xd * xd - self.gamma_mu * (xc * xd);
        self.norm * Complex64::from(expo).exp()
    }

    pub fn trace(&self) -> Result<f64> {
        if !(self.gamma_c > 0.0) {
            return Err(Error::NonNormalizable(format!(
                "gamma_c = {} must be positive",
                self.gamma_c
            )));
        }
        Ok(self.norm * (std::f64::consts::PI / self.gamma_c).sqrt())
    }

    /// `Tr rho^2`; requires unit trace.
    pub fn purity(&self) -> Result<f64> {
        let tr = self.trace()?;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Unnormalized { trace: tr });
        }
        if !(self.gamma_delta > 0.0) {
            return Err(Error::NonNormalizable(format!(
                "gamma_delta = {} must be positive",
                self.gamma_delta
            )));
        }
        Ok(self.norm * self.norm * std::f64::consts::PI / (self.gamma_c * self.gamma_delta).sqrt())
    }

    /// Decoherence measure `1/2 sqrt(G_c / G_d)`; one half for pure states.
    pub fn delta_qd(&self) -> Result<f64> {
        if !(self.gamma_delta > 0.0) {
            return Err(Error::NonNormalizable(format!(
                "gamma_delta = {} must be positive",
                self.gamma_delta
            )));
        }
        if self.gamma_c < 0.0 {
            return Err(Error::NonNormalizable(format!(
                "gamma_c = {} must be non-negative",
                self.gamma_c
            )));
        }
        Ok(0.5 * (self.gamma_c / self.gamma_delta).sqrt())
    }

    /// Classical-correlation measure `G_c G_d / |G_mu|`. Infinite when
    /// `G_mu = 0`.
    pub fn delta_cc(&self) -> Result<f64> {
        if !(self.gamma_c > 0.0 && self.gamma_delta > 0.0) {
            return Err(Error::NonNormalizable(format!(
                "gamma_c = {}, gamma_delta = {}",
                self.gamma_c, self.gamma_delta
            )));
        }
        let mu = self.gamma_mu.norm();
        if mu == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.gamma_c * self.gamma_delta / mu)
    }

    pub fn physicality(&self) -> Physicality {
        if self.gamma_c <= self.gamma_delta {
            Physicality::Physical
        } else {
            Physicality::PurityAboveOne
        }
    }

    /// Position variance of the diagonal `rho(x, x)`.
    pub fn diagonal_variance(&self) -> f64 {
        0.5 / self.gamma_c
    }

    pub fn scaled(&self, factor: f64) -> Gaussian1D {
        Gaussian1D {
            norm: self.norm * factor.sqrt(),
            gamma_c: self.gamma_c * factor,
            gamma_delta: self.gamma_delta * factor,
            gamma_mu: self.gamma_mu * factor,
        }
    }
}

/// Which subsystem of a two-mode state to integrate out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Two-mode Gaussian density matrix
///
/// ```text
/// rho(x', y', x, y) = norm * exp[ -e^{+E}(A* x'^2 + A1 x' x + A x^2)
///                                 -e^{-E}(B* y'^2 + B1 y' y + B y^2)
///                                 -C (x' y' + x y) - D x' y - D* x y' ]
/// ```
///
/// with `E = damping_exponent = gamma t / m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian2D {
    pub norm: f64,
    pub a: Complex64,
    pub a1: Complex64,
    pub b: Complex64,
    pub b1: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub damping_exponent: f64,
}

impl Gaussian2D {
    pub fn evaluate(&self, x_prime: f64, y_prime: f64, x: f64, y: f64) -> Result<Complex64> {
        for (v, n) in [(x_prime, "x'"), (y_prime, "y'"), (x, "x"), (y, "y")] {
            finite(v, n)?;
        }
        Ok(self.kernel(x_prime, y_prime, x, y))
    }

    #[inline]
    pub(crate) fn kernel(&self, xp: f64, yp: f64, x: f64, y: f64) -> Complex64 {
        self.norm * (-self.exponent(xp, yp, x, y)).exp()
    }

    /// The quadratic form `Q` with `rho = norm * exp(-Q)`.
    #[inline]
    pub fn exponent(&self, xp: f64, yp: f64, x: f64, y: f64) -> Complex64 {
        let ex = self.damping_exponent.exp();
        let ey = 1.0 / ex;
        ex * (self.a.conj() * (xp * xp) + self.a1 * (xp * x) + self.a * (x * x))
            + ey * (self.b.conj() * (yp * yp) + self.b1 * (yp * y) + self.b * (y * y))
            + self.c * (xp * yp + x * y)
            + self.d * (xp * y)
            + self.d.conj() * (x * yp)
    }

    /// Coefficients of the diagonal form `Q(x, y, x, y) = sx x^2 + sy y^2 + 2 h x y`
    /// without the time factors.
    fn diagonal_block(&self) -> (Complex64, Complex64, Complex64) {
        let sx = self.a.conj() + self.a1 + self.a;
        let sy = self.b.conj() + self.b1 + self.b;
        let h = self.c + 0.5 * (self.d + self.d.conj());
        (sx, sy, h)
    }

    /// Fails unless the real part of the diagonal quadratic form is
    /// positive definite.
    pub fn check_normalizable(&self) -> Result<()> {
        let (sx, sy, h) = self.diagonal_block();
        if !(sx.re > 0.0 && sy.re > 0.0 && sx.re * sy.re - h.re * h.re > 0.0) {
            return Err(Error::NonNormalizable(format!(
                "diagonal form not positive definite: sx = {sx}, sy = {sy}, h = {h}"
            )));
        }
        Ok(())
    }

    /// `pi / sqrt(det M)` for the diagonal form; the trace of the kernel
    /// with unit norm. The `e^{+-E}` factors cancel in the determinant.
    pub fn diagonal_integral(&self) -> Result<Complex64> {
        self.check_normalizable()?;
        let (sx, sy, h) = self.diagonal_block();
        let det = sx * sy - h * h;
        Ok(Complex64::from(std::f64::consts::PI) / det.sqrt())
    }

    pub fn trace(&self) -> Result<f64> {
        Ok(self.norm * self.diagonal_integral()?.re)
    }

    /// Relative size of the imaginary part of the trace; zero for
    /// Hermitian kernels.
    pub fn trace_imaginary_defect(&self) -> Result<f64> {
        let z = self.diagonal_integral()?;
        Ok(z.im.abs() / z.norm())
    }

    /// Same coefficients with `norm` chosen so that the trace is one.
    pub fn normalized(self) -> Result<Self> {
        let z = self.diagonal_integral()?;
        if !(z.re > 0.0) {
            return Err(Error::NonNormalizable(format!("diagonal integral {z}")));
        }
        Ok(Gaussian2D { norm: 1.0 / z.re, ..self })
    }

    /// Reduced state of the x subsystem: set `y' = y` and integrate over y
    /// by completing the square.
    pub fn reduce_over_y(&self) -> Result<Gaussian1D> {
        let ex = self.damping_exponent.exp();
        let s = (self.b.conj() + self.b1 + self.b) / ex;
        if !(s.re > 0.0) {
            return Err(Error::NonNormalizable(format!("y-integral diverges: s = {s}")));
        }
        // linear term in y: (C + D) x' + (C + D*) x
        let lp = self.c + self.d;
        let l = self.c + self.d.conj();
        let four_s = 4.0 * s;
        let alpha = ex * self.a.conj() - lp * lp / four_s;
        let beta = ex * self.a1 - 2.0 * lp * l / four_s;
        let kappa = ex * self.a - l * l / four_s;
        let norm = self.norm * real_prefactor(s)?;
        Gaussian1D::from_primed_form(norm, alpha, beta, kappa)
    }

    /// Reduced state of the y subsystem: set `x' = x` and integrate over x.
    pub fn reduce_over_x(&self) -> Result<Gaussian1D> {
        let ex = self.damping_exponent.exp();
        let ey = 1.0 / ex;
        let s = ex * (self.a.conj() + self.a1 + self.a);
        if !(s.re > 0.0) {
            return Err(Error::NonNormalizable(format!("x-integral diverges: s = {s}")));
        }
        // linear term in x: (C + D*) y' + (C + D) y
        let lp = self.c + self.d.conj();
        let l = self.c + self.d;
        let four_s = 4.0 * s;
        let alpha = ey * self.b.conj() - lp * lp / four_s;
        let beta = ey * self.b1 - 2.0 * lp * l / four_s;
        let kappa = ey * self.b - l * l / four_s;
        let norm = self.norm * real_prefactor(s)?;
        Gaussian1D::from_primed_form(norm, alpha, beta, kappa)
    }

    pub fn reduce(&self, over: Axis) -> Result<Gaussian1D> {
        match over {
            Axis::Y => self.reduce_over_y(),
            Axis::X => self.reduce_over_x(),
        }
    }
}

/// `sqrt(pi / s)`, which must be real for a Hermitian kernel.
fn real_prefactor(s: Complex64) -> Result<f64> {
    let z = (Complex64::from(std::f64::consts::PI) / s).sqrt();
    if z.im.abs() > REAL_TOL * z.norm() {
        return Err(Error::NonHermitian { defect: z.im.abs() });
    }
    Ok(z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit() -> Gaussian1D {
        Gaussian1D::new(1.0 / PI.sqrt(), 1.0, 1.0, Complex64::new(0.0, 0.0)).unwrap()
    }

    #[test]
    fn evaluate_at_origin_and_diagonal() {
        let g = unit();
        assert!((g.evaluate(0.0, 0.0).unwrap().re - 0.564189583547756).abs() < 1e-12);
        let v = g.evaluate(1.0, 1.0).unwrap();
        assert!((v.re - (-1.0f64).exp() / PI.sqrt()).abs() < 1e-15);
        assert!((v.re - 0.207554).abs() < 1e-6);
    }

    #[test]
    fn mu_term_vanishes_on_antidiagonal() {
        let g = Gaussian1D { gamma_mu: Complex64::new(0.0, -1.0), ..unit() };
        let v = g.evaluate(1.0, -1.0).unwrap();
        let expected = (-g.gamma_delta).exp() / PI.sqrt();
        assert!((v - Complex64::from(expected)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_nan() {
        assert!(matches!(unit().evaluate(f64::NAN, 0.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn trace_examples() {
        let g = Gaussian1D::new(1.0, PI, 1.0, Complex64::default()).unwrap();
        assert!((g.trace().unwrap() - 1.0).abs() < 1e-15);
        let g = Gaussian1D::new(2.0, 1.0, 1.0, Complex64::default()).unwrap();
        assert!((g.trace().unwrap() - 2.0 * PI.sqrt()).abs() < 1e-14);
        let bad = Gaussian1D::new(1.0, 0.0, 1.0, Complex64::default()).unwrap();
        assert!(matches!(bad.trace(), Err(Error::NonNormalizable(_))));
    }

    #[test]
    fn purity_requires_unit_trace() {
        let g = Gaussian1D::new(2.0, 1.0, 1.0, Complex64::default()).unwrap();
        assert!(matches!(g.purity(), Err(Error::Unnormalized { .. })));
        let g = Gaussian1D::normalized(0.7, 0.7, Complex64::new(0.0, 3.0)).unwrap();
        assert!((g.purity().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn delta_qd_limits() {
        let g = Gaussian1D::normalized(1e-300, 2.0, Complex64::default()).unwrap();
        assert!(g.delta_qd().unwrap() < 1e-100);
        let g = Gaussian1D::new(1.0, 0.0, 2.0, Complex64::default()).unwrap();
        assert_eq!(g.delta_qd().unwrap(), 0.0);
        let g = Gaussian1D::new(1.0, 1.0, 0.0, Complex64::default()).unwrap();
        assert!(g.delta_qd().is_err());
    }

    #[test]
    fn delta_cc_infinite_without_mu() {
        assert_eq!(unit().delta_cc().unwrap(), f64::INFINITY);
        let g = Gaussian1D { gamma_mu: Complex64::new(0.0, 4.0), ..unit() };
        assert_eq!(g.delta_cc().unwrap(), 0.25);
    }

    #[test]
    fn physicality_flag() {
        let g = Gaussian1D::normalized(2.0, 1.0, Complex64::default()).unwrap();
        assert_eq!(g.physicality(), Physicality::PurityAboveOne);
        assert_eq!(unit().physicality(), Physicality::Physical);
    }

    fn sample2d() -> Gaussian2D {
        Gaussian2D {
            norm: 1.0,
            a: Complex64::new(1.0, 0.4),
            a1: Complex64::new(0.2, 0.0),
            b: Complex64::new(0.9, -0.3),
            b1: Complex64::new(0.1, 0.0),
            c: Complex64::new(0.15, 0.0),
            d: Complex64::new(-0.3, 0.5),
            damping_exponent: 0.4,
        }
        .normalized()
        .unwrap()
    }

    #[test]
    fn hermitian_two_mode_kernel() {
        let g = sample2d();
        let p = g.evaluate(0.3, -0.2, 0.1, 0.7).unwrap();
        let q = g.evaluate(0.1, 0.7, 0.3, -0.2).unwrap();
        assert!((p - q.conj()).norm() < 1e-15);
        assert!((g.evaluate(0.0, 0.0, 0.0, 0.0).unwrap().re - g.norm).abs() < 1e-15);
    }

    #[test]
    fn trace_independent_of_damping_exponent() {
        let g = sample2d();
        let shifted = Gaussian2D { damping_exponent: 1.7, ..g };
        assert!((g.trace().unwrap() - 1.0).abs() < 1e-14);
        assert!((shifted.trace().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reductions_preserve_trace() {
        let g = sample2d();
        for axis in [Axis::X, Axis::Y] {
            let r = g.reduce(axis).unwrap();
            assert!((r.trace().unwrap() - 1.0).abs() < 1e-12, "{axis:?}");
            assert!(r.gamma_mu.re.abs() < 1e-12);
        }
    }

    #[test]
    fn non_normalizable_form_rejected() {
        let g = Gaussian2D { a: Complex64::new(-1.0, 0.0), ..sample2d() };
        assert!(matches!(g.trace(), Err(Error::NonNormalizable(_))));
    }

    #[test]
    fn complex_c_is_not_hermitian() {
        let g = Gaussian2D { c: Complex64::new(0.0, 0.2), ..sample2d() };
        assert!(g.trace_imaginary_defect().unwrap() > 1e-3);
    }
}
