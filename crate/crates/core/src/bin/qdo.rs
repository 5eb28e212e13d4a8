use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdo::config::{parse_real, Format, ParamBlock, RunConfig, Scenario, SweepAxis, TimeSpec};
use qdo::verify::{verify, Suite};
use qdo::{report, runner, Error};

#[derive(Parser)]
#[command(name = "qdo", version, about = "Decoherence and classical correlation of quantum damped oscillators")]
struct Cli {
    /// Output file, or `csv` / `json` to write that format to stdout
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Reduced Planck constant (default 1)
    #[arg(long, global = true, allow_hyphen_values = true)]
    hbar: Option<String>,
    /// TOML run configuration; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Caldirola-Kanai oscillator
    Ck(Osc),
    /// Two-mode dual system, stationary family
    Bft(Bft),
    /// Amplified oscillator
    Amplified(Osc),
    /// Bilinearly coupled pair
    Coupled(Coupled),
    /// Cartesian parameter sweep
    Sweep(Sweep),
    /// Run the invariant suites
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Args, Default)]
struct Osc {
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Spring constant, omega = sqrt(k/m)
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// `t` or `start:end:step`
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
}

#[derive(Args, Default)]
struct Bft {
    #[command(flatten)]
    osc: Osc,
    #[arg(long = "d-abs", allow_hyphen_values = true)]
    d_abs: Option<String>,
    /// Phase of D in radians
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Sets m = hbar = 1 and omega so that m Omega / hbar equals this value
    #[arg(long, allow_hyphen_values = true)]
    momega: Option<String>,
}

#[derive(Args, Default)]
struct Coupled {
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

#[derive(Args)]
struct Sweep {
    /// ck, bft, amplified or coupled; may come from --config instead
    scenario: Option<String>,
    #[command(flatten)]
    bft: Bft,
    #[arg(long, allow_hyphen_values = true)]
    omega1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// `name=v1,v2,...` or `name=lo..hi:n`; repeatable
    #[arg(long, allow_hyphen_values = true)]
    vary: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> qdo::Result<u8> {
    let (scenario, flags, time, vary) = match &cli.command {
        Command::Verify { suite } => {
            let report = verify(Suite::parse(suite)?);
            println!("{report}");
            return Ok(if report.passed() { 0 } else { 3 });
        }
        Command::Ck(o) => (Some(Scenario::Ck), osc_block(o)?, o.t.clone(), vec![]),
        Command::Amplified(o) => (Some(Scenario::Amplified), osc_block(o)?, o.t.clone(), vec![]),
        Command::Bft(b) => (Some(Scenario::Bft), bft_block(b)?, b.osc.t.clone(), vec![]),
        Command::Coupled(c) => {
            let mut p = ParamBlock::default();
            set(&mut p, "m", &c.m)?;
            set(&mut p, "omega1", &c.omega1)?;
            set(&mut p, "omega2", &c.omega2)?;
            set(&mut p, "lambda", &c.lambda)?;
            (Some(Scenario::Coupled), p, None, vec![])
        }
        Command::Sweep(s) => {
            let mut p = bft_block(&s.bft)?;
            set(&mut p, "omega1", &s.omega1)?;
            set(&mut p, "omega2", &s.omega2)?;
            set(&mut p, "lambda", &s.lambda)?;
            let scenario = s.scenario.as_deref().map(Scenario::parse).transpose()?;
            (scenario, p, s.bft.osc.t.clone(), s.vary.clone())
        }
    };

    let mut flags = flags;
    set(&mut flags, "hbar", &cli.hbar)?;

    let mut cfg = match &cli.config {
        Some(path) => {
            let file = RunConfig::from_file(path)?;
            if let Some(s) = scenario {
                if s != file.scenario {
                    return Err(Error::Config(format!(
                        "command is {} but {} configures {}",
                        s.name(),
                        path.display(),
                        file.scenario.name()
                    )));
                }
            }
            file
        }
        None => RunConfig::new(
            scenario.ok_or_else(|| Error::Config("sweep needs a scenario or --config".into()))?,
        ),
    };
    cfg.params = cfg.params.overridden_by(&flags);
    if let Some(t) = time {
        cfg.time = TimeSpec::parse(&t)?;
    }
    for v in &vary {
        let axis = SweepAxis::parse(v)?;
        cfg.sweep.retain(|a| a.param != axis.param);
        cfg.sweep.push(axis);
    }
    apply_output(&mut cfg, cli.out.as_deref(), cli.format.as_deref())?;

    let rows = runner::sweep(&cfg)?;
    let mut buf = Vec::new();
    report::write_rows(&rows, cfg.output.format, &mut buf)?;
    match &cfg.output.path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(&buf)?;
            w.flush()?;
        }
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(0)
}

fn apply_output(cfg: &mut RunConfig, out: Option<&str>, format: Option<&str>) -> qdo::Result<()> {
    match out {
        Some("csv") => cfg.output = qdo::config::OutputSpec { format: Format::Csv, path: None },
        Some("json") => cfg.output = qdo::config::OutputSpec { format: Format::Json, path: None },
        Some(path) => {
            cfg.output.path = Some(PathBuf::from(path));
            if path.ends_with(".json") || path.ends_with(".jsonl") {
                cfg.output.format = Format::Json;
            }
        }
        None => {}
    }
    match format {
        Some("csv") => cfg.output.format = Format::Csv,
        Some("json") => cfg.output.format = Format::Json,
        Some(f) => return Err(Error::Config(format!("unknown format '{f}' (csv, json)"))),
        None => {}
    }
    Ok(())
}

fn set(p: &mut ParamBlock, name: &str, value: &Option<String>) -> qdo::Result<()> {
    if let Some(v) = value {
        p.set(name, parse_real(v, name)?)?;
    }
    Ok(())
}

fn osc_block(o: &Osc) -> qdo::Result<ParamBlock> {
    let mut p = ParamBlock::default();
    set(&mut p, "m", &o.m)?;
    set(&mut p, "omega", &o.omega)?;
    set(&mut p, "k", &o.k)?;
    set(&mut p, "gamma", &o.gamma)?;
    Ok(p)
}

fn bft_block(b: &Bft) -> qdo::Result<ParamBlock> {
    let mut p = osc_block(&b.osc)?;
    set(&mut p, "d_abs", &b.d_abs)?;
    set(&mut p, "theta", &b.theta)?;
    set(&mut p, "momega", &b.momega)?;
    Ok(p)
}
