//! Scenario evaluation: one [`ResultRow`] per (sweep point, time).

use rayon::prelude::*;

use crate::amplified;
use crate::bft::{self, Verdict};
use crate::ck::{self, OscillatorParams};
use crate::config::{Model, ParamBlock, RunConfig};
use crate::coupled;
use crate::error::{Error, Result};
use crate::gaussian::{Gaussian1D, Physicality};
use crate::report::{ResultRow, RowParams};

/// Tolerance of the per-row self check `purity = 2 delta_QD`.
pub const ROW_CHECK_TOL: f64 = 1e-10;

/// Evaluate a configuration. With an empty sweep this is a single-point run.
pub fn run(cfg: &RunConfig) -> Result<Vec<ResultRow>> {
    sweep(cfg)
}

/// Cartesian product of the sweep axes times the time grid. Points are
/// evaluated in parallel; rows come back in sweep-index order, times
/// innermost.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let times = cfg.time.times();
    let points = cfg.points();
    let per_point: Vec<Result<Vec<ResultRow>>> = points
        .par_iter()
        .map(|block| point_rows(cfg, block, &times).map_err(|e| with_context(block, e)))
        .collect();
    let mut rows = Vec::with_capacity(cfg.row_count());
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

fn with_context(block: &ParamBlock, e: Error) -> Error {
    let values: Vec<String> =
        block.present().iter().filter_map(|n| block.get(n).map(|v| format!("{n}={v}"))).collect();
    let context = if values.is_empty() { "defaults".to_string() } else { values.join(" ") };
    Error::AtPoint { context: format!("at {context}"), source: Box::new(e) }
}

fn point_rows(cfg: &RunConfig, block: &ParamBlock, times: &[f64]) -> Result<Vec<ResultRow>> {
    let model = block.resolve(cfg.scenario)?;
    times.iter().map(|&t| row(&model, t)).collect()
}

fn osc_params(p: &OscillatorParams) -> RowParams {
    RowParams { m: Some(p.m), omega: Some(p.omega), gamma: Some(p.gamma), hbar: Some(p.hbar), ..Default::default() }
}

/// Compute one row for a resolved model at time `t`.
pub fn row(model: &Model, t: f64) -> Result<ResultRow> {
    let (params, g, paper_qd, paper_cc, energy, energy_paper, uncertainty) = match model {
        Model::Ck(p) => {
            let g = ck::ck_density(p, t)?;
            let e = (ck::energy_at(p, t)?, ck::energy_expectation_paper(p)?, ck::uncertainty(p)?);
            (osc_params(p), g, 0.5, ck::delta_cc_paper(p, t)?, Some(e.0), Some(e.1), Some(e.2))
        }
        Model::Amplified(p) => {
            let g = amplified::amplified_density(p, t)?;
            let r = p.reversed();
            let e = (ck::energy_at(&r, t)?, ck::energy_expectation_paper(&r)?, ck::uncertainty(&r)?);
            (osc_params(p), g, 0.5, ck::delta_cc_paper(&r, t)?, Some(e.0), Some(e.1), Some(e.2))
        }
        Model::Bft(spec) => {
            let g = bft::reduced_damped(spec, t)?;
            let pm = bft::paper_measures(spec)?;
            let mut rp = osc_params(&spec.params);
            rp.d_abs = Some(spec.d_abs);
            rp.theta = Some(spec.theta);
            (rp, g, pm.delta_qd_paper, pm.delta_cc_paper, None, None, None)
        }
        Model::Coupled(cp) => {
            let g = coupled::coupled_reduced(cp)?.to_gaussian()?;
            let rp = RowParams {
                m: Some(cp.m),
                omega1: Some(cp.omega1),
                omega2: Some(cp.omega2),
                lambda: Some(cp.lambda),
                ..Default::default()
            };
            (rp, g, coupled::coupled_delta_qd(cp)?, f64::INFINITY, None, None, None)
        }
    };
    let scenario = match model {
        Model::Ck(_) => crate::config::Scenario::Ck,
        Model::Amplified(_) => crate::config::Scenario::Amplified,
        Model::Bft(_) => crate::config::Scenario::Bft,
        Model::Coupled(_) => crate::config::Scenario::Coupled,
    };
    let delta_qd = g.delta_qd()?;
    let delta_cc = g.delta_cc()?;
    let purity = g.purity()?;
    Ok(ResultRow {
        scenario,
        params,
        t,
        delta_qd,
        delta_qd_paper: paper_qd,
        delta_cc,
        delta_cc_paper: paper_cc,
        gamma_c: g.gamma_c,
        gamma_delta: g.gamma_delta,
        gamma_mu_im: g.gamma_mu.im,
        purity,
        energy,
        energy_paper,
        uncertainty,
        verdict: Verdict::from_measures(delta_qd, delta_cc),
        paper_verdict: Verdict::from_measures(paper_qd, paper_cc),
        status: status(&g, delta_qd, purity),
    })
}

fn status(g: &Gaussian1D, delta_qd: f64, purity: f64) -> String {
    if g.physicality() != Physicality::Physical {
        "purity_above_one".into()
    } else if (purity - 2.0 * delta_qd).abs() > ROW_CHECK_TOL {
        "purity_mismatch".into()
    } else {
        "ok".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Scenario, SweepAxis, TimeSpec};

    #[test]
    fn ck_time_series() {
        let mut c = RunConfig::new(Scenario::Ck);
        c.params.gamma = Some(1.0);
        c.time = TimeSpec::parse("0:5:0.1").unwrap();
        let rows = run(&c).unwrap();
        assert_eq!(rows.len(), 51);
        assert!(rows.iter().all(|r| r.delta_qd == 0.5 && r.status == "ok"));
        assert!((rows[0].delta_cc - 0.75).abs() < 1e-12);
    }

    #[test]
    fn bft_reference_row() {
        let mut c = RunConfig::new(Scenario::Bft);
        c.params.d_abs = Some(2.0);
        c.params.theta = Some(2.356194);
        c.params.momega = Some(1.0);
        let rows = run(&c).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].delta_qd - 1.0 / 6.0).abs() < 1e-6);
        assert!((rows[0].delta_qd_paper - 0.235702).abs() < 1e-6);
    }

    #[test]
    fn coupled_uncoupled() {
        let c = RunConfig::new(Scenario::Coupled);
        let r = &run(&c).unwrap()[0];
        assert_eq!(r.delta_qd, 0.5);
        assert_eq!(r.delta_cc, f64::INFINITY);
    }

    #[test]
    fn gamma_sweep_hits_inf_at_zero() {
        let mut c = RunConfig::new(Scenario::Ck);
        c.sweep.push(SweepAxis::parse("gamma=-0.5,0,0.5").unwrap());
        let rows = sweep(&c).unwrap();
        let inf: Vec<bool> = rows.iter().map(|r| r.delta_cc.is_infinite()).collect();
        assert_eq!(inf, vec![false, true, false]);
    }

    #[test]
    fn regime_error_carries_point() {
        let mut c = RunConfig::new(Scenario::Ck);
        c.sweep.push(SweepAxis::parse("gamma=0,3").unwrap());
        let e = sweep(&c).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("gamma=3"));
    }
}
