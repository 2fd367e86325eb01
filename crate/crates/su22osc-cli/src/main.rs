mod config;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::RunConfig;
use runner::Suite;

/// Verification suites for the oscillator representations of su(2,2).
#[derive(Parser, Debug)]
#[command(name = "su22osc", version)]
struct Cli {
    #[arg(value_enum)]
    check: Suite,
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "nmax")]
    n_max: Option<u32>,
    /// Comma-separated rapidities.
    #[arg(long)]
    beta: Option<String>,
    /// Comma-separated chiralities.
    #[arg(long)]
    kappa: Option<String>,
    /// Positive rational P/Q.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    cutoff: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn configure(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let overrides = [("beta", &cli.beta), ("kappa", &cli.kappa), ("epsilon", &cli.epsilon)];
    for (key, v) in overrides {
        if let Some(v) = v {
            cfg.set(key, v)?;
        }
    }
    if let Some(n) = cli.n_max {
        cfg.n_max = n;
    }
    if let Some(t) = cli.tolerance {
        cfg.tolerance = t;
    }
    if let Some(c) = cli.cutoff {
        cfg.cutoff = c;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match configure(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if cfg.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = runner::run(cli.check, &cfg);
    for r in &out.reports {
        println!("{} {} ({} ms)", if r.pass { "PASS" } else { "FAIL" }, r.check_name, r.runtime_ms);
    }
    if let Err(e) = runner::write_outputs(&out, &cfg.output_dir) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
