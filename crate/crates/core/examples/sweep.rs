// A (|D|, theta) sweep of the stationary family written as CSV, the same
// table `qdo sweep bft --vary ...` produces.

use qdo::config::{RunConfig, Scenario, SweepAxis};
use qdo::{report, runner};

pub fn run_example() -> qdo::Result<()> {
    let mut cfg = RunConfig::new(Scenario::Bft);
    cfg.params.momega = Some(1.0);
    cfg.sweep.push(SweepAxis::parse("d_abs=0..10:6")?);
    cfg.sweep.push(SweepAxis::parse("theta=1.6207963..4.6623890:4")?);
    let rows = runner::sweep(&cfg)?;
    let classical = rows.iter().filter(|r| r.verdict.classical).count();
    println!("{} rows, {classical} classical", rows.len());
    report::write_csv(&rows[..3], std::io::stdout().lock())?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sweep example");
}
