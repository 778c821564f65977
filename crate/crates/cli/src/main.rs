// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use biq_cli::commands::{cmd_bounds, cmd_entpower, cmd_fidelity, cmd_variation, inspect_channel};
use biq_cli::family::parse_target;
use biq_cli::validate::{channel_report, run_suite, QUICK_SAMPLES};
use biq_cli::{ChannelSpec, CliError, CliResult, FamilyOptions, Format, Grid, RunConfig, DEFAULT_SEED};
use biq_core::sampling::DEFAULT_SAMPLES;
use biq_core::KrausChannel;

#[derive(Parser)]
#[command(name = "biq", version, about = "Fidelity and entangling-power experiments for two-qubit channels")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base seed for every random stream.
    #[arg(long, global = true, env = "BIQ_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Monte Carlo samples per estimate.
    #[arg(long, global = true)]
    samples: Option<u64>,

    /// Output format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ChannelArgs {
    /// Zoo family name or channel JSON file.
    #[arg(long)]
    channel: String,

    /// Parameter grid `start:end:n`; multiples of pi are accepted (`0:2pi:17`).
    #[arg(long)]
    param: Option<Grid>,

    /// Coupling g of the CZ evolution.
    #[arg(long, default_value_t = 1.5)]
    g: f64,

    /// Dephasing rate Gamma.
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
}

#[derive(Subcommand)]
enum Command {
    /// F_avg, F_prod and the fidelity bias over a parameter grid.
    Fidelity {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Unitary target: identity, cz or a JSON matrix of [re, im] pairs.
        #[arg(long)]
        target: Option<String>,
    },
    /// Entangling powers e_C, e_N, e_L, e_C2 with the analytic bounds.
    Entpower {
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// e_C against its two-copy lower and upper bounds.
    Bounds {
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// Orbit variation of the concurrence over a (param, theta) grid.
    Variation {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Schmidt angle grid on [0, pi/4].
        #[arg(long, default_value = "0:pi/4:33")]
        theta: Grid,
    },
    /// Runs the invariant and property suite, or checks one channel file.
    Validate {
        /// Use 10^4 samples per estimate.
        #[arg(long)]
        quick: bool,
        /// Validate this channel JSON file instead of running the suite.
        #[arg(long)]
        channel: Option<PathBuf>,
    },
    /// Channel inspection and export.
    Channel {
        #[command(subcommand)]
        action: ChannelAction,
    },
}

#[derive(Subcommand)]
enum ChannelAction {
    /// Validation report and analytic fidelities.
    Inspect {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Parameter value.
        #[arg(long, default_value = "0")]
        at: String,
    },
    /// Kraus operators as channel JSON.
    Export {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Parameter value.
        #[arg(long, default_value = "0")]
        at: String,
    },
}

fn spec(args: &ChannelArgs, seed: u64) -> CliResult<(ChannelSpec, Grid)> {
    let spec = ChannelSpec::parse(&args.channel, FamilyOptions { coupling: args.g, rate: args.rate, seed })?;
    let grid = args.param.unwrap_or_else(|| spec.default_grid());
    Ok((spec, grid))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialisation cannot fail");
    s.push('\n');
    s
}

fn run(cli: Cli) -> CliResult<()> {
    let c = &cli.common;
    if let Some(threads) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))?;
    }
    let samples = c.samples.unwrap_or(DEFAULT_SAMPLES);
    let config = || RunConfig::new(c.seed, samples, c.format, c.out.clone());
    let out = c.out.as_deref();
    match &cli.command {
        Command::Fidelity { channel, target } => {
            let (spec, grid) = spec(channel, c.seed)?;
            let target = target.as_ref().map(|t| parse_target(t).map(|u| (t.as_str(), u))).transpose()?;
            let table = cmd_fidelity(&spec, &grid, target.as_ref().map(|(n, u)| (*n, u)), &config()?)?;
            table.write(c.format, out)
        }
        Command::Entpower { channel } => {
            let (spec, grid) = spec(channel, c.seed)?;
            cmd_entpower(&spec, &grid, &config()?)?.write(c.format, out)
        }
        Command::Bounds { channel } => {
            let (spec, grid) = spec(channel, c.seed)?;
            cmd_bounds(&spec, &grid, &config()?)?.write(c.format, out)
        }
        Command::Variation { channel, theta } => {
            let (spec, grid) = spec(channel, c.seed)?;
            cmd_variation(&spec, &grid, theta, &config()?)?.write(c.format, out)
        }
        Command::Validate { quick, channel } => {
            let report = match channel {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                    let ch = KrausChannel::from_json(&text)
                        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
                    channel_report(&path.display().to_string(), &ch)
                }
                None => {
                    let n = if *quick { QUICK_SAMPLES } else { samples };
                    RunConfig::new(c.seed, n, c.format, None)?;
                    run_suite(c.seed, n)?
                }
            };
            emit(&to_json(&report), out)?;
            if report.passed {
                Ok(())
            } else {
                let worst: Vec<String> = report
                    .checks
                    .iter()
                    .filter(|k| !k.passed)
                    .map(|k| format!("{} (statistic {:e} > {:e}: {})", k.name, k.statistic, k.threshold, k.detail))
                    .collect();
                Err(CliError::Validation(worst.join("; ")))
            }
        }
        Command::Channel { action } => match action {
            ChannelAction::Inspect { channel, at } => {
                let x = biq_cli::config::parse_value(at)?;
                let spec = match load_channel_raw(&channel.channel)? {
                    Some(ch) => {
                        let report = channel_report(&channel.channel, &ch);
                        emit(&to_json(&ch.validate()), out)?;
                        return if report.passed {
                            Ok(())
                        } else {
                            Err(CliError::Validation(format!(
                                "completeness residual {:e}",
                                ch.completeness_residual()
                            )))
                        };
                    }
                    None => spec(channel, c.seed)?.0,
                };
                let (inspection, _) = inspect_channel(&spec, x)?;
                emit(&to_json(&inspection), out)
            }
            ChannelAction::Export { channel, at } => {
                let x = biq_cli::config::parse_value(at)?;
                let (spec, _) = spec(channel, c.seed)?;
                let mut text = spec.at(x)?.to_json_pretty();
                text.push('\n');
                emit(&text, out)
            }
        },
    }
}

/// Reads a channel file without the trace-preservation check, or `None` for zoo names.
fn load_channel_raw(name: &str) -> CliResult<Option<KrausChannel>> {
    if biq_cli::Family::from_name(name).is_some() {
        return Ok(None);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path)?;
    let ch = KrausChannel::from_json(&text).map_err(|e| CliError::Validation(format!("{name}: {e}")))?;
    Ok(Some(ch))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("biq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
