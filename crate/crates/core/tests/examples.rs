mod ck_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ck_oscillator.rs"));
}
mod amplified_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/amplified.rs"));
}
mod bft_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bft_decoherence.rs"));
}
mod coupled_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coupled_mixing.rs"));
}
mod grid_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/grid_oracle.rs"));
}
mod lvn_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lvn_residual.rs"));
}
mod sweep_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sweep.rs"));
}

#[test]
fn ck_example_runs() {
    ck_example::run_example().expect("ck example should run");
}

#[test]
fn amplified_example_runs() {
    amplified_example::run_example().expect("amplified example should run");
}

#[test]
fn bft_example_runs() {
    bft_example::run_example().expect("bft example should run");
}

#[test]
fn coupled_example_runs() {
    coupled_example::run_example().expect("coupled example should run");
}

#[test]
fn grid_example_runs() {
    grid_example::run_example().expect("grid example should run");
}

#[test]
fn lvn_example_runs() {
    lvn_example::run_example().expect("lvn example should run");
}

#[test]
fn sweep_example_runs() {
    sweep_example::run_example().expect("sweep example should run");
}
