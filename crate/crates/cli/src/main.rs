use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use nilgrowth_cli::args::Command;
use nilgrowth_cli::cache::{now_unix, write_atomic, CacheEntry, RunConfig};
use nilgrowth_cli::commands::{execute, Output};

#[derive(Parser)]
#[command(name = "nilgrowth", version, about = "Word growth and residual finiteness growth of nilpotent groups")]
struct Cli {
    /// Write the result to this file (atomically) instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand)]
enum Action {
    #[command(flatten)]
    Direct(Command),
    /// Run the command described by a TOML config, reusing cached results
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn emit(body: &[u8], output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_plot(svg: &[u8], path: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = path {
        write_atomic(path, svg).with_context(|| format!("writing plot {}", path.display()))?;
    }
    Ok(())
}

fn run_direct(command: &Command, output: Option<&Path>) -> Result<bool> {
    let out = execute(command)?;
    if let Some(svg) = &out.plot {
        emit_plot(svg.as_bytes(), command.plot_path())?;
    }
    emit(out.body.as_bytes(), output)?;
    Ok(out.success)
}

fn run_config(path: &Path, output: Option<&Path>) -> Result<bool> {
    let config = RunConfig::load(path)?;
    let command = &config.run;
    let entry = CacheEntry::new(&config.resolved_cache_dir(), command)?;
    let result_name = format!("result.{}", command.format().extension());
    if let Some(cached) = entry.lookup()? {
        eprintln!("cache hit: {}", entry.hash);
        let mut success = true;
        for (name, bytes) in &cached.files {
            match name.as_str() {
                "plot.svg" => emit_plot(bytes, command.plot_path())?,
                "status" => success = bytes.as_slice() == b"ok",
                n if n == result_name => emit(bytes, output)?,
                _ => {}
            }
        }
        return Ok(success);
    }
    eprintln!("cache miss: {}", entry.hash);
    let started = now_unix();
    let Output { body, success, plot, .. } = execute(command)?;
    let mut files = vec![(result_name, body.clone().into_bytes())];
    if let Some(svg) = &plot {
        files.push(("plot.svg".to_string(), svg.clone().into_bytes()));
        emit_plot(svg.as_bytes(), command.plot_path())?;
    }
    let status: &[u8] = if success { b"ok" } else { b"failed" };
    files.push(("status".to_string(), status.to_vec()));
    entry.store(command, started, &files)?;
    emit(body.as_bytes(), output)?;
    Ok(success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.as_deref();
    let result = match &cli.action {
        Action::Direct(command) => run_direct(command, output),
        Action::Run { config } => run_config(config, output),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
