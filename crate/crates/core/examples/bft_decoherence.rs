// Stationary states of the two-mode dual system and the reduced state of
// the damped mode, across the (|D|, theta) plane.

use std::f64::consts::PI;

use qdo::bft::{self, ParticularSpec};
use qdo::ck::OscillatorParams;

pub fn run_example() -> qdo::Result<()> {
    let p = OscillatorParams::natural(1.0, 0.0, 1.0)?;
    let spec = ParticularSpec::new(2.0, 0.75 * PI, p)?;
    let cf = bft::particular_solution(&spec)?;
    println!("A = {:.6}, fixed-point rate {:.1e}", cf.a, bft::ode_rhs(&cf, &p)?.max_modulus());

    let red = bft::reduced_damped(&spec, 0.0)?;
    println!(
        "reduced: G_c = {:.6}  G_d = {:.6}  G_mu = {:.6}i  purity = {:.6}",
        red.gamma_c,
        red.gamma_delta,
        red.gamma_mu.im,
        red.purity()?
    );

    println!("{:>6} {:>6} {:>10} {:>10} {:>10} {:>10}  dec  cor", "|D|", "theta", "dQD", "dQD*", "dCC", "dCC*");
    for d_abs in [0.0, 1.0, 5.0] {
        for theta in [PI / 2.0 + 0.05, 0.75 * PI, 0.95 * PI] {
            let c = bft::classicality_check(&ParticularSpec::new(d_abs, theta, p)?, 0.0)?;
            println!(
                "{d_abs:>6.2} {theta:>6.3} {:>10.5} {:>10.5} {:>10.4} {:>10.4}  {:<4} {}",
                c.delta_qd,
                c.paper.delta_qd_paper,
                c.delta_cc,
                c.paper.delta_cc_paper,
                c.verdict.decohered,
                c.verdict.correlated
            );
        }
    }
    println!("(* = printed closed form)");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("bft example");
}
