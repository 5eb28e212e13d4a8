// Ground state of two bilinearly coupled oscillators: the reduced state of
// one of them decoheres as the coupling mixes the normal modes.

use qdo::coupled::{self, CoupledParams};

pub fn run_example() -> qdo::Result<()> {
    for (w2, lambda) in [(1.0, 0.0), (1.0, 0.5), (1.0, 0.99), (2.0, 0.5), (2.0, 1.9)] {
        let p = CoupledParams::new(1.0, 1.0, w2, lambda)?;
        let mx = coupled::mixing(&p)?;
        let r = coupled::coupled_reduced(&p)?;
        println!(
            "omega2 = {w2}  lambda = {lambda:<5}  eta = {:.4}  vartheta = {:.4}  delta_QD = {:.6}  delta_CC = {}",
            mx.eta,
            mx.vartheta,
            coupled::coupled_delta_qd(&p)?,
            r.to_gaussian()?.delta_cc()?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("coupled example");
}
