mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use commands::Output;

fn run(cli: &Cli) -> Result<i32> {
    let common = cli.command.common();
    if let Some(k) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let start = Instant::now();
    let out = match &cli.command {
        Command::Analyze(a) => commands::analyze(a)?,
        Command::Lasso(a) => commands::lasso(a)?,
        Command::Recover(a) => commands::recover(a)?,
        Command::Implications(a) => commands::implications(a)?,
        Command::Montecarlo(a) => commands::montecarlo(a)?,
        Command::Generate(a) => commands::generate_cmd(a)?,
    };
    let (text, code) = match out {
        Output::Text(t) => (t, 0),
        Output::Json(result, code) => {
            let wall = (!common.no_timing).then(|| start.elapsed().as_secs_f64());
            let report = json!({
                "meta": {
                    "tool": "lasso-audit",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": cli.command.name(),
                    "config": &cli.command,
                    "solver": commands::solver_config(common),
                    "seed": common.seed,
                    "wall_time_seconds": wall,
                    "exit_code": code,
                },
                "result": result,
            });
            (serde_json::to_string_pretty(&report)? + "\n", code)
        }
    };
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
