// Finite-difference residual of the coordinate-space Liouville-von Neumann
// equation for a stationary state, and an RK4 run of the coefficient
// equations from a perturbed state.

use std::f64::consts::PI;

use num_complex::Complex64;
use qdo::bft::{self, ParticularSpec};
use qdo::ck::OscillatorParams;
use qdo::grid::{self, Grid1D};
use qdo::verify::{perturbed_state, rk4_order};

pub fn run_example() -> qdo::Result<()> {
    let p = OscillatorParams::natural(1.0, 0.0, 1.0)?;
    let spec = ParticularSpec::new(2.0, 0.75 * PI, p)?;
    let cf = bft::particular_solution(&spec)?;
    let samples = Grid1D::symmetric(1.5, 16)?;
    for h in [0.1, 0.05, 0.025] {
        println!("h = {h:<6} residual = {:.3e}", grid::lvn_residual(&cf, &p, 0.0, &samples, h)?);
    }

    let damped = OscillatorParams::natural(1.0, 0.6, 1.2)?;
    let start = perturbed_state(&ParticularSpec::new(2.0, 0.75 * PI, damped)?, Complex64::new(0.05, 0.02))?;
    let traj = bft::integrate(&start, &damped, 5.0, 0.01)?;
    let flagged = traj.assess(&damped).iter().filter(|s| !s.normalizable).count();
    println!(
        "integrated {} steps, error estimate {:.2e}, non-normalizable samples {flagged}",
        traj.samples.len() - 1,
        traj.error_estimate
    );
    println!("observed RK4 order {:.3}", rk4_order(&start, &damped, 5.0, 0.04)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("lvn example");
}
