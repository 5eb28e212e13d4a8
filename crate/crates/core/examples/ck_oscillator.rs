// Caldirola-Kanai ground state: the decoherence measure stays at 1/2 while
// the classical-correlation measure grows as e^{gamma t/m}.

use qdo::ck::{self, OscillatorParams};

pub fn run_example() -> qdo::Result<()> {
    let p = OscillatorParams::natural(1.0, 0.5, 1.0)?;
    println!("Omega = {:.6}", ck::omega_reduced(&p)?);
    println!("dx dp = {:.6}  <H> = {:.6}", ck::uncertainty(&p)?, ck::energy_expectation(&p)?);
    println!("{:>5} {:>10} {:>12} {:>12}", "t", "|u|^2", "delta_QD", "delta_CC");
    for t in [0.0, 1.0, 2.0, 5.0, 10.0] {
        let u = ck::mode_function(&p, t)?;
        let rho = ck::ck_density(&p, t)?;
        println!("{t:>5.1} {:>10.6} {:>12.6} {:>12.4}", u.u.norm_sqr(), rho.delta_qd()?, rho.delta_cc()?);
    }
    // first excited state at x = 0.3
    let psi1 = ck::wavefunction_n(&p, 1, 0.3, 1.0)?;
    println!("Psi_1(0.3, 1) = {:.6} {:+.6}i", psi1.re, psi1.im);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("ck example");
}
