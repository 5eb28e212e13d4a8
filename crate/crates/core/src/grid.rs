//! Brute-force oracle: density matrices sampled on coordinate grids.
//!
//! Nothing here uses the closed-form traces or reductions; kernels are
//! point-sampled and integrated with the trapezoidal rule, which converges
//! spectrally for Gaussians on grids that reach into the tails.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bft::{ode_rhs, BftCoefficients};
use crate::ck::{omega_reduced, OscillatorParams};
use crate::error::{finite, Error, Result};
use crate::gaussian::{Axis, Gaussian1D, Gaussian2D};

/// Largest `nx * ny` for which a dense two-mode kernel is materialized.
pub const MAX_DENSE_TWO_MODE: usize = 2304;

/// Half-width of the grid, in standard deviations, below which coverage
/// is reported as insufficient.
pub const COVERAGE_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        finite(x_min, "x_min")?;
        finite(x_max, "x_max")?;
        if !(x_min < x_max) {
            return Err(Error::Grid(format!("x_min = {x_min} must be below x_max = {x_max}")));
        }
        if n < 16 {
            return Err(Error::Grid(format!("n = {n} must be at least 16")));
        }
        Ok(Grid1D { x_min, x_max, n })
    }

    /// `[-half_width, half_width]` with `n` nodes.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Trapezoidal weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }

    pub fn covers(&self, sigma: f64) -> bool {
        self.x_min <= -COVERAGE_SIGMAS * sigma && self.x_max >= COVERAGE_SIGMAS * sigma
    }
}

/// A sampled density matrix. One-mode matrices are `n x n`; two-mode ones
/// are `(nx ny) x (nx ny)` with the y index running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDM {
    pub values: DMatrix<Complex64>,
    pub axes: Vec<Grid1D>,
    /// Quadrature weight per row/column index.
    pub weights: Vec<f64>,
    /// False when the sampled state is wider than the grid.
    pub coverage_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub min_eig: f64,
    pub trace: f64,
    pub purity: f64,
    pub eigenvalues: Vec<f64>,
}

impl GridDM {
    /// A bare matrix with unit weights, e.g. for checking the spectrum of
    /// a discrete density matrix.
    pub fn from_matrix(values: DMatrix<Complex64>) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::AxisMismatch(format!("{}x{} is not square", values.nrows(), values.ncols())));
        }
        let n = values.nrows();
        Ok(GridDM { values, axes: Vec::new(), weights: vec![1.0; n], coverage_ok: true })
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.weights[i] * self.values[(i, i)].re).sum()
    }

    /// `sum_ij w_i w_j rho_ij rho_ji`
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                acc += self.weights[i] * self.weights[j] * (self.values[(i, j)] * self.values[(j, i)]).re;
            }
        }
        acc
    }

    /// `max |rho_ij - conj(rho_ji)|`
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.values[(i, j)] - self.values[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise deviation from a closed-form one-mode state,
    /// relative to `max(|rho|, floor * peak)`.
    pub fn max_relative_error(&self, g: &Gaussian1D, floor: f64) -> Result<f64> {
        let grid = self.single_axis()?;
        let nodes = grid.nodes();
        let peak = self.max_modulus();
        let mut worst: f64 = 0.0;
        for (j, &x) in nodes.iter().enumerate() {
            for (i, &xp) in nodes.iter().enumerate() {
                let exact = g.kernel(xp, x);
                let err = (self.values[(i, j)] - exact).norm() / exact.norm().max(floor * peak);
                worst = worst.max(err);
            }
        }
        Ok(worst)
    }

    fn single_axis(&self) -> Result<&Grid1D> {
        match self.axes.as_slice() {
            [g] => Ok(g),
            other => Err(Error::AxisMismatch(format!("expected one axis, found {}", other.len()))),
        }
    }
}

pub fn discretize1d(g: &Gaussian1D, grid: &Grid1D) -> GridDM {
    let nodes = grid.nodes();
    let values = DMatrix::from_fn(grid.n, grid.n, |i, j| g.kernel(nodes[i], nodes[j]));
    let coverage_ok = g.gamma_c > 0.0 && grid.covers(g.diagonal_variance().sqrt());
    GridDM { values, axes: vec![*grid], weights: grid.weights(), coverage_ok }
}

/// Samples an arbitrary kernel `f(x', x)`.
pub fn discretize_fn(grid: &Grid1D, f: impl Fn(f64, f64) -> Complex64) -> GridDM {
    let nodes = grid.nodes();
    let values = DMatrix::from_fn(grid.n, grid.n, |i, j| f(nodes[i], nodes[j]));
    GridDM { values, axes: vec![*grid], weights: grid.weights(), coverage_ok: true }
}

/// Dense two-mode kernel; limited to [`MAX_DENSE_TWO_MODE`] points per side.
pub fn discretize2d(g: &Gaussian2D, gx: &Grid1D, gy: &Grid1D) -> Result<GridDM> {
    let dim = gx.n * gy.n;
    if dim > MAX_DENSE_TWO_MODE {
        return Err(Error::Grid(format!(
            "dense two-mode kernel of {dim} points per side exceeds {MAX_DENSE_TWO_MODE}"
        )));
    }
    let xs = gx.nodes();
    let ys = gy.nodes();
    let (wx, wy) = (gx.weights(), gy.weights());
    let values = DMatrix::from_fn(dim, dim, |r, c| {
        let (i, k) = (r / gy.n, r % gy.n);
        let (j, l) = (c / gy.n, c % gy.n);
        g.kernel(xs[i], ys[k], xs[j], ys[l])
    });
    let weights = (0..dim).map(|r| wx[r / gy.n] * wy[r % gy.n]).collect();
    Ok(GridDM { values, axes: vec![*gx, *gy], weights, coverage_ok: true })
}

/// Partial trace of a dense two-mode [`GridDM`].
pub fn partial_trace_grid(gdm: &GridDM, over: Axis) -> Result<GridDM> {
    let (gx, gy) = match gdm.axes.as_slice() {
        [gx, gy] => (*gx, *gy),
        other => {
            return Err(Error::AxisMismatch(format!("partial trace needs two axes, found {}", other.len())))
        }
    };
    if gdm.dim() != gx.n * gy.n {
        return Err(Error::AxisMismatch(format!("dimension {} != {} x {}", gdm.dim(), gx.n, gy.n)));
    }
    let (keep, traced) = match over {
        Axis::Y => (gx, gy),
        Axis::X => (gy, gx),
    };
    let tw = traced.weights();
    let index = |kept: usize, tr: usize| match over {
        Axis::Y => kept * gy.n + tr,
        Axis::X => tr * gy.n + kept,
    };
    let values = DMatrix::from_fn(keep.n, keep.n, |i, j| {
        (0..traced.n).map(|k| tw[k] * gdm.values[(index(i, k), index(j, k))]).sum()
    });
    Ok(GridDM { values, axes: vec![keep], weights: keep.weights(), coverage_ok: gdm.coverage_ok })
}

/// Partial trace of a two-mode Gaussian sampled on the fly; never forms the
/// `(nx ny)^2` kernel, so it scales to fine grids.
pub fn partial_trace_streaming(g: &Gaussian2D, gx: &Grid1D, gy: &Grid1D, over: Axis) -> GridDM {
    let (keep, traced) = match over {
        Axis::Y => (gx, gy),
        Axis::X => (gy, gx),
    };
    let kn = keep.nodes();
    let tn = traced.nodes();
    let tw = traced.weights();
    let columns: Vec<Vec<Complex64>> = (0..keep.n)
        .into_par_iter()
        .map(|j| {
            (0..keep.n)
                .map(|i| {
                    tn.iter()
                        .zip(&tw)
                        .map(|(&s, &w)| {
                            w * match over {
                                Axis::Y => g.kernel(kn[i], s, kn[j], s),
                                Axis::X => g.kernel(s, kn[i], s, kn[j]),
                            }
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    let values = DMatrix::from_fn(keep.n, keep.n, |i, j| columns[j][i]);
    GridDM { values, axes: vec![*keep], weights: keep.weights(), coverage_ok: true }
}

/// Trapezoidal trace of a two-mode kernel.
pub fn trace2d_grid(g: &Gaussian2D, gx: &Grid1D, gy: &Grid1D) -> f64 {
    let xs = gx.nodes();
    let ys = gy.nodes();
    let (wx, wy) = (gx.weights(), gy.weights());
    xs.par_iter()
        .zip(wx.par_iter())
        .map(|(&x, &w1)| {
            ys.iter().zip(&wy).map(|(&y, &w2)| w1 * w2 * g.kernel(x, y, x, y).re).sum::<f64>()
        })
        .sum()
}

/// Eigen-decomposition of the weighted kernel `sqrt(w) rho sqrt(w)`.
pub fn spectrum_check(gdm: &GridDM) -> Result<Spectrum> {
    let peak = gdm.max_modulus().max(f64::MIN_POSITIVE);
    let defect = gdm.hermiticity_defect();
    if defect > 1e-10 * peak {
        return Err(Error::NonHermitian { defect });
    }
    let n = gdm.dim();
    let sw: Vec<f64> = gdm.weights.iter().map(|w| w.sqrt()).collect();
    let k = DMatrix::from_fn(n, n, |i, j| {
        let v = 0.5 * (gdm.values[(i, j)] + gdm.values[(j, i)].conj());
        v * (sw[i] * sw[j])
    });
    let eig = k.symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum {
        min_eig: eigenvalues.iter().copied().fold(f64::INFINITY, f64::min),
        trace: eigenvalues.iter().sum(),
        purity: eigenvalues.iter().map(|l| l * l).sum(),
        eigenvalues,
    })
}

/// Least-squares fit of `ln rho = ln N - G_c x_c^2 - G_d x_d^2 - G_mu x_c x_d`
/// to a sampled one-mode kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub norm: f64,
    pub gamma_c: Complex64,
    pub gamma_delta: Complex64,
    pub gamma_mu: Complex64,
    /// Largest absolute residual of the fit in `ln rho`.
    pub residual: f64,
}

impl ExponentFit {
    pub fn to_gaussian(&self) -> Result<Gaussian1D> {
        Gaussian1D::new(self.norm, self.gamma_c.re, self.gamma_delta.re, self.gamma_mu)
    }
}

/// Samples below `cutoff * peak` are excluded. The phase is unwrapped along
/// each row starting from the diagonal.
pub fn fit_exponent(gdm: &GridDM, cutoff: f64) -> Result<ExponentFit> {
    let grid = gdm.single_axis()?;
    let nodes = grid.nodes();
    let peak = gdm.max_modulus();
    let keep = |z: Complex64| z.norm() >= cutoff * peak;
    let mut rows: Vec<[f64; 4]> = Vec::new();
    let mut log_mod: Vec<f64> = Vec::new();
    let mut phase: Vec<f64> = Vec::new();
    let n = grid.n;
    for i in 0..n {
        if !keep(gdm.values[(i, i)]) {
            continue;
        }
        for dir in [1isize, -1] {
            let mut prev = gdm.values[(i, i)].arg();
            let mut j = i as isize;
            if dir == -1 {
                j -= 1;
            }
            while j >= 0 && (j as usize) < n {
                let z = gdm.values[(i, j as usize)];
                if !keep(z) {
                    break;
                }
                let mut a = z.arg();
                while a - prev > std::f64::consts::PI {
                    a -= 2.0 * std::f64::consts::PI;
                }
                while a - prev < -std::f64::consts::PI {
                    a += 2.0 * std::f64::consts::PI;
                }
                prev = a;
                let (xp, x) = (nodes[i], nodes[j as usize]);
                let xc = 0.5 * (xp + x);
                let xd = 0.5 * (xp - x);
                rows.push([1.0, -xc * xc, -xd * xd, -xc * xd]);
                log_mod.push(z.norm().ln());
                phase.push(a);
                j += dir;
            }
        }
    }
    if rows.len() < 8 {
        return Err(Error::Grid(format!("only {} samples above cutoff", rows.len())));
    }
    let design = DMatrix::from_fn(rows.len(), 4, |r, c| rows[r][c]);
    let svd = design.clone().svd(true, true);
    let solve = |rhs: &[f64]| -> Result<DVector<f64>> {
        svd.solve(&DVector::from_column_slice(rhs), 1e-14)
            .map_err(|e| Error::Grid(format!("least squares failed: {e}")))
    };
    let re = solve(&log_mod)?;
    let im = solve(&phase)?;
    let fitted_re = &design * &re;
    let fitted_im = &design * &im;
    let residual = (0..rows.len())
        .map(|r| (fitted_re[r] - log_mod[r]).abs().max((fitted_im[r] - phase[r]).abs()))
        .fold(0.0, f64::max);
    Ok(ExponentFit {
        norm: re[0].exp(),
        gamma_c: Complex64::new(re[1], im[1]),
        gamma_delta: Complex64::new(re[2], im[2]),
        gamma_mu: Complex64::new(re[3], im[3]),
        residual,
    })
}

/// Max-norm residual of the coordinate-space Liouville-von Neumann equation
///
/// ```text
/// i hbar d/dt rho = [ -(hbar^2/m)(d_x'd_y' - d_x d_y)
///                     + i (hbar gamma / 2m)(x' d_x' - y' d_y' + x d_x - y d_y)
///                     + m Omega^2 (x' y' - x y) ] rho
/// ```
///
/// for the normalized Gaussian built from `cf` at time `t`. Spatial
/// derivatives are central differences with step `h`; the time derivative
/// is analytic, driven by [`ode_rhs`]. Samples are the 4-D tensor product
/// of `grid`.
pub fn lvn_residual(cf: &BftCoefficients, p: &OscillatorParams, t: f64, grid: &Grid1D, h: f64) -> Result<f64> {
    finite(h, "h")?;
    if !(h > 0.0) {
        return Err(Error::Grid(format!("finite-difference step h = {h} must be positive")));
    }
    let omega_r = omega_reduced(p)?;
    let g = crate::bft::density(cf, p, t)?;
    let rates = ode_rhs(cf, p)?;
    let width = min_width(&g);
    if h > 0.5 * width {
        return Err(Error::GridTooCoarse(format!("h = {h} exceeds half the narrowest width {width}")));
    }

    let e_rate = p.gamma / p.m;
    let ex = g.damping_exponent.exp();
    let ey = 1.0 / ex;
    let dlog_norm = log_norm_rate(&g, &rates);
    let q_dot = |xp: f64, yp: f64, x: f64, y: f64| -> Complex64 {
        let xb = cf.a.conj() * (xp * xp) + cf.a1 * (xp * x) + cf.a * (x * x);
        let yb = cf.b.conj() * (yp * yp) + cf.b1 * (yp * y) + cf.b * (y * y);
        let xbd = rates.a.conj() * (xp * xp) + rates.a1 * (xp * x) + rates.a * (x * x);
        let ybd = rates.b.conj() * (yp * yp) + rates.b1 * (yp * y) + rates.b * (y * y);
        e_rate * (ex * xb - ey * yb)
            + ex * xbd
            + ey * ybd
            + rates.c * (xp * yp + x * y)
            + rates.d * (xp * y)
            + rates.d.conj() * (x * yp)
    };

    let (hbar, m) = (p.hbar, p.m);
    let i = Complex64::i();
    let pot = m * omega_r * omega_r;
    let nodes = grid.nodes();
    let rho = |xp: f64, yp: f64, x: f64, y: f64| g.kernel(xp, yp, x, y);
    let points: Vec<(f64, f64)> =
        nodes.iter().flat_map(|&a| nodes.iter().map(move |&b| (a, b))).collect();

    let worst = points
        .par_iter()
        .map(|&(xp, yp)| {
            let mut worst: f64 = 0.0;
            for &x in &nodes {
                for &y in &nodes {
                    let r0 = rho(xp, yp, x, y);
                    let lhs = i * hbar * r0 * (dlog_norm - q_dot(xp, yp, x, y));
                    let mixed_primed = (rho(xp + h, yp + h, x, y) - rho(xp + h, yp - h, x, y)
                        - rho(xp - h, yp + h, x, y)
                        + rho(xp - h, yp - h, x, y))
                        / (4.0 * h * h);
                    let mixed = (rho(xp, yp, x + h, y + h) - rho(xp, yp, x + h, y - h)
                        - rho(xp, yp, x - h, y + h)
                        + rho(xp, yp, x - h, y - h))
                        / (4.0 * h * h);
                    let d_xp = (rho(xp + h, yp, x, y) - rho(xp - h, yp, x, y)) / (2.0 * h);
                    let d_yp = (rho(xp, yp + h, x, y) - rho(xp, yp - h, x, y)) / (2.0 * h);
                    let d_x = (rho(xp, yp, x + h, y) - rho(xp, yp, x - h, y)) / (2.0 * h);
                    let d_y = (rho(xp, yp, x, y + h) - rho(xp, yp, x, y - h)) / (2.0 * h);
                    let rhs = -(hbar * hbar / m) * (mixed_primed - mixed)
                        + i * (hbar * p.gamma / (2.0 * m)) * (xp * d_xp - yp * d_yp + x * d_x - y * d_y)
                        + pot * (xp * yp - x * y) * r0;
                    worst = worst.max((lhs - rhs).norm());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// `d ln(norm) / dt` for `norm = 1 / Re(pi / sqrt(det M))`.
fn log_norm_rate(g: &Gaussian2D, r: &crate::bft::BftRates) -> f64 {
    let sx = g.a.conj() + g.a1 + g.a;
    let sy = g.b.conj() + g.b1 + g.b;
    let hh = g.c + 0.5 * (g.d + g.d.conj());
    let sx_dot = r.a.conj() + r.a1 + r.a;
    let sy_dot = r.b.conj() + r.b1 + r.b;
    let h_dot = r.c + 0.5 * (r.d + r.d.conj());
    let det = sx * sy - hh * hh;
    let det_dot = sx_dot * sy + sx * sy_dot - 2.0 * hh * h_dot;
    let z = Complex64::from(std::f64::consts::PI) / det.sqrt();
    let z_dot = -0.5 * z * det_dot / det;
    -z_dot.re / z.re
}

/// Narrowest Gaussian width among the four coordinates, from the
/// diagonal curvature of the exponent.
fn min_width(g: &Gaussian2D) -> f64 {
    let ex = g.damping_exponent.exp();
    let curv = [ex * g.a.re, (g.b.re) / ex].into_iter().map(|c| c.abs()).fold(0.0, f64::max);
    if curv > 0.0 {
        (0.5 / curv).sqrt()
    } else {
        f64::INFINITY
    }
}

/// Observed convergence order of [`lvn_residual`] under `h -> h/2`.
pub fn lvn_order(cf: &BftCoefficients, p: &OscillatorParams, t: f64, grid: &Grid1D, h: f64) -> Result<(f64, f64, f64)> {
    let coarse = lvn_residual(cf, p, t, grid, h)?;
    let fine = lvn_residual(cf, p, t, grid, 0.5 * h)?;
    Ok((coarse, fine, (coarse / fine).log2()))
}
