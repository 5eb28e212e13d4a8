//! Run configuration: scenario, parameters, time grid, sweep axes, output.
//!
//! A configuration can come from a TOML file, from command-line flags, or
//! both; flag values override file values key by key.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::bft::ParticularSpec;
use crate::ck::OscillatorParams;
use crate::coupled::CoupledParams;
use crate::error::{Error, Result};

/// Sweeps larger than this are rejected before any work is done.
pub const MAX_ROWS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Ck,
    Bft,
    Amplified,
    Coupled,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Ck => "ck",
            Scenario::Bft => "bft",
            Scenario::Amplified => "amplified",
            Scenario::Coupled => "coupled",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ck" => Ok(Scenario::Ck),
            "bft" => Ok(Scenario::Bft),
            "amplified" => Ok(Scenario::Amplified),
            "coupled" => Ok(Scenario::Coupled),
            _ => Err(Error::Config(format!("unknown scenario '{s}' (ck, bft, amplified, coupled)"))),
        }
    }

    /// Parameter names accepted for this scenario.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Scenario::Ck | Scenario::Amplified => &["m", "omega", "k", "gamma", "hbar"],
            Scenario::Bft => &["m", "omega", "k", "gamma", "hbar", "d_abs", "theta", "momega"],
            Scenario::Coupled => &["m", "omega1", "omega2", "lambda", "hbar"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Raw, possibly partial parameter values.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamBlock {
    pub m: Option<f64>,
    pub omega: Option<f64>,
    pub k: Option<f64>,
    pub gamma: Option<f64>,
    pub hbar: Option<f64>,
    pub d_abs: Option<f64>,
    pub theta: Option<f64>,
    pub momega: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub lambda: Option<f64>,
}

impl ParamBlock {
    fn slot(&mut self, name: &str) -> Option<&mut Option<f64>> {
        Some(match name {
            "m" => &mut self.m,
            "omega" => &mut self.omega,
            "k" => &mut self.k,
            "gamma" => &mut self.gamma,
            "hbar" => &mut self.hbar,
            "d_abs" => &mut self.d_abs,
            "theta" => &mut self.theta,
            "momega" => &mut self.momega,
            "omega1" => &mut self.omega1,
            "omega2" => &mut self.omega2,
            "lambda" => &mut self.lambda,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = self.slot(name).ok_or_else(|| Error::Config(format!("unknown parameter '{name}'")))?;
        *slot = Some(value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.clone().slot(name).and_then(|s| *s)
    }

    /// Names that carry a value.
    pub fn present(&self) -> Vec<&'static str> {
        let all = [
            ("m", self.m),
            ("omega", self.omega),
            ("k", self.k),
            ("gamma", self.gamma),
            ("hbar", self.hbar),
            ("d_abs", self.d_abs),
            ("theta", self.theta),
            ("momega", self.momega),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("lambda", self.lambda),
        ];
        all.into_iter().filter(|(_, v)| v.is_some()).map(|(n, _)| n).collect()
    }

    /// `self` with every value present in `over` replaced.
    pub fn overridden_by(&self, over: &ParamBlock) -> ParamBlock {
        let mut out = self.clone();
        let pick = |a: Option<f64>, b: Option<f64>| b.or(a);
        out.m = pick(self.m, over.m);
        out.omega = pick(self.omega, over.omega);
        out.k = pick(self.k, over.k);
        out.gamma = pick(self.gamma, over.gamma);
        out.hbar = pick(self.hbar, over.hbar);
        out.d_abs = pick(self.d_abs, over.d_abs);
        out.theta = pick(self.theta, over.theta);
        out.momega = pick(self.momega, over.momega);
        out.omega1 = pick(self.omega1, over.omega1);
        out.omega2 = pick(self.omega2, over.omega2);
        out.lambda = pick(self.lambda, over.lambda);
        out
    }

    pub fn check_names(&self, scenario: Scenario) -> Result<()> {
        for name in self.present() {
            if !scenario.params().contains(&name) {
                return Err(Error::Config(format!("parameter '{name}' does not apply to {}", scenario.name())));
            }
        }
        Ok(())
    }

    /// Resolve to validated model parameters, filling defaults
    /// (`m = omega = hbar = 1`, `gamma = 0`, `|D| = 0`, `theta = pi`,
    /// `omega1 = omega2 = 1`, `lambda = 0`).
    pub fn resolve(&self, scenario: Scenario) -> Result<Model> {
        self.check_names(scenario)?;
        match scenario {
            Scenario::Ck => Ok(Model::Ck(self.oscillator()?)),
            Scenario::Amplified => Ok(Model::Amplified(self.oscillator()?)),
            Scenario::Bft => {
                let p = self.oscillator()?;
                let spec = ParticularSpec::new(
                    self.d_abs.unwrap_or(0.0),
                    self.theta.unwrap_or(std::f64::consts::PI),
                    p,
                )?;
                Ok(Model::Bft(spec))
            }
            Scenario::Coupled => Ok(Model::Coupled(CoupledParams::new(
                self.m.unwrap_or(1.0),
                self.omega1.unwrap_or(1.0),
                self.omega2.unwrap_or(1.0),
                self.lambda.unwrap_or(0.0),
            )?)),
        }
    }

    fn oscillator(&self) -> Result<OscillatorParams> {
        let gamma = self.gamma.unwrap_or(0.0);
        if self.k.is_some() && self.omega.is_some() {
            return Err(Error::Config("give either k or omega, not both".into()));
        }
        if let Some(mo) = self.momega {
            if self.m.is_some() || self.omega.is_some() || self.k.is_some() || self.hbar.is_some() {
                return Err(Error::Config("momega fixes m = hbar = 1 and omega; drop m, omega, k and hbar".into()));
            }
            if !(mo > 0.0) {
                return Err(Error::InvalidParameter(format!("momega = {mo} must be positive")));
            }
            return OscillatorParams::new(1.0, gamma, (mo * mo + 0.25 * gamma * gamma).sqrt(), 1.0);
        }
        let m = self.m.unwrap_or(1.0);
        let hbar = self.hbar.unwrap_or(1.0);
        match self.k {
            Some(k) => OscillatorParams::from_spring(m, k, gamma, hbar),
            None => OscillatorParams::new(m, gamma, self.omega.unwrap_or(1.0), hbar),
        }
    }
}

/// Validated parameters of one scenario point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Ck(OscillatorParams),
    Amplified(OscillatorParams),
    Bft(ParticularSpec),
    Coupled(CoupledParams),
}

/// `start:end:step`, both ends inclusive, or a single instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSpec {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for TimeSpec {
    fn default() -> Self {
        TimeSpec { start: 0.0, end: 0.0, step: 0.0 }
    }
}

impl TimeSpec {
    pub fn single(t: f64) -> Self {
        TimeSpec { start: t, end: t, step: 0.0 }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match parts.as_slice() {
            [t] => TimeSpec::single(parse_real(t, "t")?),
            [a, b, c] => TimeSpec { start: parse_real(a, "t start")?, end: parse_real(b, "t end")?, step: parse_real(c, "t step")? },
            _ => return Err(Error::Config(format!("time spec '{s}' must be 't' or 'start:end:step'"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.start == self.end && self.step == 0.0 {
            return Ok(());
        }
        if !(self.step > 0.0) || !(self.end >= self.start) {
            return Err(Error::Config(format!(
                "time spec {}:{}:{} is not monotone (need end >= start and step > 0)",
                self.start, self.end, self.step
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        if self.step == 0.0 {
            return 1;
        }
        ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: String,
    pub values: Vec<f64>,
}

impl SweepAxis {
    /// `name=v1,v2,...` or `name=lo..hi:n` (n evenly spaced points, ends included).
    pub fn parse(s: &str) -> Result<Self> {
        let (name, rhs) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("sweep '{s}' must look like name=v1,v2 or name=lo..hi:n")))?;
        Ok(SweepAxis { param: name.trim().to_string(), values: parse_values(rhs)? })
    }
}

fn parse_values(rhs: &str) -> Result<Vec<f64>> {
    if let Some((range, n)) = rhs.split_once(':') {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| Error::Config(format!("range '{rhs}' must look like lo..hi:n")))?;
        let (lo, hi) = (parse_real(lo, "range start")?, parse_real(hi, "range end")?);
        let n: usize = n.trim().parse().map_err(|_| Error::Config(format!("range point count '{n}' is not an integer")))?;
        return Ok(linspace(lo, hi, n));
    }
    rhs.split(',').map(|v| parse_real(v, "sweep value")).collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// A real number; angles in degrees are refused outright.
pub fn parse_real(s: &str, what: &str) -> Result<f64> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if t.contains('°') || lower.ends_with("deg") || lower.ends_with("degrees") {
        return Err(Error::Config(format!("{what} '{t}': angles are taken in radians only")));
    }
    t.parse::<f64>().map_err(|_| Error::Config(format!("{what} '{t}' is not a number")))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputSpec {
    pub format: Format,
    /// `None` writes to stdout.
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub params: ParamBlock,
    pub time: TimeSpec,
    pub sweep: Vec<SweepAxis>,
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn new(scenario: Scenario) -> Self {
        RunConfig {
            scenario,
            params: ParamBlock::default(),
            time: TimeSpec::default(),
            sweep: Vec::new(),
            output: OutputSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.check_names(self.scenario)?;
        self.time.validate()?;
        let mut seen = Vec::new();
        for axis in &self.sweep {
            if !self.scenario.params().contains(&axis.param.as_str()) {
                return Err(Error::Config(format!(
                    "sweep parameter '{}' does not apply to {}",
                    axis.param,
                    self.scenario.name()
                )));
            }
            if seen.contains(&axis.param) {
                return Err(Error::Config(format!("sweep parameter '{}' given twice", axis.param)));
            }
            if axis.values.is_empty() {
                return Err(Error::Config(format!("sweep parameter '{}' has no values", axis.param)));
            }
            seen.push(axis.param.clone());
        }
        let rows = self.row_count();
        if rows > MAX_ROWS {
            return Err(Error::Config(format!("sweep would produce {rows} rows (limit {MAX_ROWS})")));
        }
        Ok(())
    }

    /// Rows the run will emit, saturating on overflow.
    pub fn row_count(&self) -> usize {
        self.sweep
            .iter()
            .fold(self.time.len(), |acc, a| acc.saturating_mul(a.values.len()))
    }

    /// Parameter blocks of the sweep's Cartesian product, last axis fastest.
    pub fn points(&self) -> Vec<ParamBlock> {
        let mut out = vec![self.params.clone()];
        for axis in &self.sweep {
            out = out
                .into_iter()
                .flat_map(|base| {
                    axis.values.iter().map(move |&v| {
                        let mut b = base.clone();
                        // names were validated against the scenario
                        let _ = b.set(&axis.param, v);
                        b
                    })
                })
                .collect();
        }
        out
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: FileConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.into_config()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scenario: Scenario,
    #[serde(default)]
    params: ParamBlock,
    t: Option<FileTime>,
    #[serde(default)]
    sweep: Vec<FileSweep>,
    #[serde(default)]
    output: FileOutput,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FileTime {
    Instant(f64),
    Spec(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSweep {
    param: String,
    values: Option<Vec<f64>>,
    range: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    format: Option<Format>,
    path: Option<PathBuf>,
}

impl FileConfig {
    fn into_config(self) -> Result<RunConfig> {
        let time = match self.t {
            None => TimeSpec::default(),
            Some(FileTime::Instant(t)) => TimeSpec::single(t),
            Some(FileTime::Spec(s)) => TimeSpec::parse(&s)?,
        };
        let sweep = self
            .sweep
            .into_iter()
            .map(|s| {
                let values = match (s.values, s.range) {
                    (Some(v), None) => v,
                    (None, Some(r)) => parse_values(&r)?,
                    _ => {
                        return Err(Error::Config(format!("sweep '{}' needs exactly one of values or range", s.param)))
                    }
                };
                Ok(SweepAxis { param: s.param, values })
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = RunConfig {
            scenario: self.scenario,
            params: self.params,
            time,
            sweep,
            output: OutputSpec { format: self.output.format.unwrap_or_default(), path: self.output.path },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_specs() {
        let t = TimeSpec::parse("0:5:0.1").unwrap();
        assert_eq!(t.len(), 51);
        assert_eq!(*t.times().last().unwrap(), 5.0);
        assert_eq!(TimeSpec::parse("2.5").unwrap().times(), vec![2.5]);
        assert!(TimeSpec::parse("5:0:0.1").is_err());
        assert!(TimeSpec::parse("0:5:0").is_err());
        assert!(TimeSpec::parse("0:5").is_err());
    }

    #[test]
    fn degrees_rejected() {
        assert!(matches!(parse_real("90deg", "theta"), Err(Error::Config(m)) if m.contains("radians")));
        assert!(parse_real("135°", "theta").is_err());
        assert_eq!(parse_real(" 2.356194 ", "theta").unwrap(), 2.356194);
    }

    #[test]
    fn sweep_axes() {
        let a = SweepAxis::parse("gamma=-0.5,0,0.5").unwrap();
        assert_eq!(a.values, vec![-0.5, 0.0, 0.5]);
        let b = SweepAxis::parse("d_abs=0..10:5").unwrap();
        assert_eq!(b.values, vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        assert!(SweepAxis::parse("theta").is_err());
    }

    #[test]
    fn cartesian_order_and_limits() {
        let mut c = RunConfig::new(Scenario::Bft);
        c.sweep.push(SweepAxis::parse("d_abs=1,2").unwrap());
        c.sweep.push(SweepAxis::parse("theta=2,3,4").unwrap());
        c.validate().unwrap();
        let pts = c.points();
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[1].d_abs, pts[1].theta), (Some(1.0), Some(3.0)));
        assert_eq!((pts[3].d_abs, pts[3].theta), (Some(2.0), Some(2.0)));

        c.sweep[0] = SweepAxis { param: "lambda".into(), values: vec![0.0] };
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut big = RunConfig::new(Scenario::Ck);
        big.time = TimeSpec::parse("0:1000:0.001").unwrap();
        big.sweep.push(SweepAxis::parse("gamma=0,0.1").unwrap());
        assert!(big.validate().is_err());
    }

    #[test]
    fn resolution_rules() {
        let mut b = ParamBlock { momega: Some(1.0), gamma: Some(1.0), ..Default::default() };
        let Model::Bft(spec) = b.resolve(Scenario::Bft).unwrap() else { panic!() };
        assert!((spec.params.m_omega_over_hbar().unwrap() - 1.0).abs() < 1e-15);
        b.m = Some(2.0);
        assert!(matches!(b.resolve(Scenario::Bft), Err(Error::Config(_))));

        let mut k = ParamBlock { k: Some(4.0), ..Default::default() };
        let Model::Ck(p) = k.resolve(Scenario::Ck).unwrap() else { panic!() };
        assert_eq!(p.omega, 2.0);
        k.omega = Some(2.0);
        assert!(k.resolve(Scenario::Ck).is_err());

        let wrong = ParamBlock { lambda: Some(0.1), ..Default::default() };
        assert!(wrong.resolve(Scenario::Ck).is_err());
    }

    #[test]
    fn toml_and_override() {
        let c = RunConfig::from_toml(
            r#"
scenario = "bft"
t = "0:1:0.5"
[params]
d_abs = 2.0
theta = 2.356194
momega = 1.0
[[sweep]]
param = "d_abs"
range = "0..4:3"
[output]
format = "json"
"#,
        )
        .unwrap();
        assert_eq!(c.row_count(), 9);
        assert_eq!(c.output.format, Format::Json);
        let flags = ParamBlock { theta: Some(3.0), ..Default::default() };
        let merged = c.params.overridden_by(&flags);
        assert_eq!((merged.theta, merged.d_abs), (Some(3.0), Some(2.0)));
        assert!(RunConfig::from_toml("scenario = \"ck\"\n[params]\nmass = 1.0\n").is_err());
    }
}
