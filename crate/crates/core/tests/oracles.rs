use std::f64::consts::PI;

use num_complex::Complex64;

use qdo::amplified;
use qdo::bft::{self, BftCoefficients, ParticularSpec};
use qdo::ck::{self, OscillatorParams};
use qdo::grid::{self, Grid1D};
use qdo::verify::{self, grid_for};
use qdo::{Axis, Error};

fn unit(gamma: f64) -> OscillatorParams {
    OscillatorParams::natural(1.0, gamma, 1.0).unwrap()
}

#[test]
fn reference_reduced_state() {
    let g = bft::reduced_damped(&verify::reference_spec(), 0.0).unwrap();
    assert!((g.gamma_c - 0.316228).abs() < 1e-6);
    assert!((g.gamma_delta - 2.846050).abs() < 1e-6);
    assert!((g.gamma_mu - Complex64::new(0.0, -0.632456)).norm() < 1e-6);
    assert!((g.purity().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    let spec = verify::reference_spec();
    let cf = bft::particular_solution(&spec).unwrap();
    let norm = bft::density(&cf, &spec.params, 0.0).unwrap().norm;
    assert!((norm - 0.225079).abs() < 1e-6);
    assert!((bft::paper_norm(&cf) - norm).abs() < 1e-12);
    let pm = bft::paper_measures(&verify::reference_spec()).unwrap();
    assert!((pm.delta_qd_paper - 0.235702).abs() < 1e-6);
    assert!((pm.delta_cc_paper - 2.25).abs() < 1e-12);
}

#[test]
fn mode_modulus_against_rk4() {
    let p = unit(1.0);
    let rk = verify::rk4_mode_modulus(&p, 1.0, 2000).unwrap();
    assert!((rk - 0.2123953).abs() < 1e-7);
    let rv = verify::rk4_mode_modulus(&p.reversed(), 1.0, 2000).unwrap();
    assert!((rv - 1.569401).abs() < 1e-6);
    assert!((amplified::v_mode(&p, 1.0).unwrap().u.norm_sqr() - rv).abs() < 1e-10);
}

#[test]
fn equations_of_motion() {
    for g in [-1.5, -0.3, 0.0, 0.8, 1.9] {
        let p = unit(g);
        for t in [0.0, 0.5, 2.0, 6.0] {
            assert!(verify::eom_residual(&p, t).unwrap() < 1e-6);
            assert!(verify::eom_residual(&p.reversed(), t).unwrap() < 1e-6);
        }
    }
}

#[test]
fn outer_product_matches_density() {
    for g in [0.0, 0.7, -1.2] {
        assert!(verify::outer_product_defect(&unit(g), 1.5, 40).unwrap() < 1e-6);
    }
}

#[test]
fn ck_grid_purity() {
    let p = OscillatorParams::new(1.3, 0.9, 0.8, 0.7).unwrap();
    for t in [0.0, 1.0, 5.0] {
        let g = ck::ck_density(&p, t).unwrap();
        assert!(verify::grid_purity_defect(&g, 128).unwrap() < 1e-10);
        let gdm = grid::discretize1d(&g, &grid_for(&g, 8.0, 128).unwrap());
        assert!(gdm.hermiticity_defect() < 1e-14);
        assert!((gdm.trace() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn two_mode_grid_agrees_with_closed_forms() {
    let p = OscillatorParams::natural(1.0, 0.5, 1.1).unwrap();
    let spec = ParticularSpec::new(1.2, 0.85 * PI, p).unwrap();
    for t in [0.0, 1.0, 5.0] {
        assert!(verify::grid_trace_defect(&spec, t, 128).unwrap() < 1e-6);
        assert!(verify::reduction_defect(&spec, t, Axis::Y, 128).unwrap() < 1e-5);
        assert!(verify::reduction_defect(&spec, t, Axis::X, 128).unwrap() < 1e-5);
    }
}

#[test]
fn dense_and_streaming_partial_traces_agree() {
    let p = OscillatorParams::natural(1.0, 0.3, 1.0).unwrap();
    let spec = ParticularSpec::new(0.8, 0.7 * PI, p).unwrap();
    let g = bft::density(&bft::particular_solution(&spec).unwrap(), &p, 0.5).unwrap();
    let (gx, gy) = verify::two_mode_grids(&spec, 0.5, 6.0, 40).unwrap();
    let dense = grid::discretize2d(&g, &gx, &gy).unwrap();
    assert!(dense.hermiticity_defect() < 1e-14);
    for over in [Axis::X, Axis::Y] {
        let a = grid::partial_trace_grid(&dense, over).unwrap();
        let b = grid::partial_trace_streaming(&g, &gx, &gy, over);
        assert!((&a.values - &b.values).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-13);
        assert!((a.trace() - dense.trace()).abs() < 1e-8);
    }
    let too_big = Grid1D::symmetric(3.0, 64).unwrap();
    assert!(matches!(grid::discretize2d(&g, &too_big, &too_big), Err(Error::Grid(_))));
}

#[test]
fn exponent_fit_recovers_gammas() {
    let spec = verify::reference_spec();
    let exact = bft::reduced_damped(&spec, 0.0).unwrap();
    let gdm = grid::discretize1d(&exact, &grid_for(&exact, 6.0, 64).unwrap());
    let fit = grid::fit_exponent(&gdm, 1e-8).unwrap();
    assert!((fit.gamma_c.re - exact.gamma_c).abs() < 1e-8);
    assert!((fit.gamma_delta.re - exact.gamma_delta).abs() < 1e-8);
    assert!((fit.gamma_mu - exact.gamma_mu).norm() < 1e-8);
}

#[test]
fn integration_keeps_invariant_symmetry() {
    // A1 = B1 = 0, C imaginary, A D real: the family closed under the flow
    let p = OscillatorParams::natural(1.0, 0.4, 1.0).unwrap();
    let spec = ParticularSpec::new(1.5, 0.8 * PI, p).unwrap();
    let mut cf = bft::particular_solution(&spec).unwrap();
    cf.a *= 1.05;
    cf.b = cf.a.conj();
    cf.c = Complex64::new(0.0, 0.1);
    assert!((cf.a * cf.d).im.abs() < 1e-15);
    let traj = bft::integrate(&cf, &p, 5.0, 0.01).unwrap();
    let worst = traj.samples.iter().map(BftCoefficients::symmetry_defect).fold(0.0, f64::max);
    assert!(worst < 1e-8, "symmetry defect {worst}");
    assert!(traj.assess(&p).iter().all(|s| s.normalizable));
}

#[test]
fn integrated_density_is_normalized() {
    let p = OscillatorParams::natural(1.0, 0.6, 1.2).unwrap();
    let spec = ParticularSpec::new(2.0, 0.75 * PI, p).unwrap();
    let cf = verify::perturbed_state(&spec, Complex64::new(0.05, 0.02)).unwrap();
    let t_end = 5.0 * p.m / p.gamma.max(1.0);
    let traj = bft::integrate(&cf, &p, t_end, 0.01).unwrap();
    for s in traj.samples.iter().step_by(25) {
        let g = bft::density(s, &p, s.t).unwrap();
        assert!((g.trace().unwrap() - 1.0).abs() < 1e-7);
    }
}

#[test]
fn rk4_convergence_order() {
    let p = OscillatorParams::natural(1.0, 0.6, 1.2).unwrap();
    let spec = ParticularSpec::new(2.0, 0.75 * PI, p).unwrap();
    let cf = verify::perturbed_state(&spec, Complex64::new(0.05, 0.02)).unwrap();
    let order = verify::rk4_order(&cf, &p, 5.0, 0.04).unwrap();
    assert!((3.8..=4.2).contains(&order), "order {order}");
}

#[test]
fn lvn_residual_is_second_order() {
    let spec = verify::reference_spec();
    let cf = bft::particular_solution(&spec).unwrap();
    let samples = Grid1D::symmetric(1.5, 16).unwrap();
    let (coarse, fine, order) = grid::lvn_order(&cf, &spec.params, 0.0, &samples, 0.1).unwrap();
    assert!(fine < coarse);
    assert!((order - 2.0).abs() < 0.1, "order {order}");
    assert!(grid::lvn_residual(&cf, &spec.params, 0.0, &samples, 0.02).unwrap() < 1e-4);
    // a non-stationary coefficient set is not a solution
    let mut off = cf;
    off.c = Complex64::new(0.0, 0.3);
    assert!(grid::lvn_residual(&off, &spec.params, 0.0, &samples, 0.02).unwrap() > 1e-2);
}
