// Re-derive the closed forms numerically: discretize the two-mode density,
// trace out one mode on a grid, and compare with the analytic reduction.

use std::f64::consts::PI;

use qdo::bft::{self, ParticularSpec};
use qdo::ck::OscillatorParams;
use qdo::grid;
use qdo::verify::{grid_for, two_mode_grids};
use qdo::Axis;

pub fn run_example() -> qdo::Result<()> {
    let p = OscillatorParams::natural(1.0, 0.4, 1.0)?;
    let spec = ParticularSpec::new(1.0, 0.8 * PI, p)?;
    let t = 1.0;
    let g = bft::density(&bft::particular_solution(&spec)?, &p, t)?;
    let (gx, gy) = two_mode_grids(&spec, t, 8.0, 128)?;

    println!("grid trace = {:.12}", grid::trace2d_grid(&g, &gx, &gy));
    let exact = bft::reduced_damped(&spec, t)?;
    let reduced = grid::partial_trace_streaming(&g, &gx, &gy, Axis::Y);
    println!("partial trace vs closed form: max rel err = {:.2e}", reduced.max_relative_error(&exact, 1e-8)?);

    let fit = grid::fit_exponent(&reduced, 1e-6)?;
    println!("fitted G_c = {:.8} (exact {:.8})", fit.gamma_c.re, exact.gamma_c);
    println!("fitted G_d = {:.8} (exact {:.8})", fit.gamma_delta.re, exact.gamma_delta);

    let one = grid::discretize1d(&exact, &grid_for(&exact, 8.0, 96)?);
    let s = grid::spectrum_check(&one)?;
    println!("spectrum: min eig {:.2e}, purity {:.10} vs 2 delta_QD {:.10}", s.min_eig, s.purity, 2.0 * exact.delta_qd()?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("grid example");
}
