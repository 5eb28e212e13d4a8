// The amplified oscillator mirrors the damped one under gamma -> -gamma:
// delta_QD stays 1/2 and delta_CC decays, so correlations become classical
// without any decoherence.

use qdo::amplified;
use qdo::ck::OscillatorParams;

pub fn run_example() -> qdo::Result<()> {
    let p = OscillatorParams::natural(1.0, 1.0, 1.0)?;
    for t in [0.0, 1.0, 3.0, 10.0] {
        let v = amplified::v_mode(&p, t)?;
        let d = amplified::amplified_dispersions(&p, t)?;
        let m = amplified::amplified_measures(&p, t)?;
        println!(
            "t = {t:>4.1}  |v|^2 = {:>10.4}  <y^2> = {:>10.4}  delta_QD = {}  delta_CC = {:.3e}",
            v.u.norm_sqr(),
            d.x2,
            m.delta_qd,
            m.delta_cc
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("amplified example");
}
