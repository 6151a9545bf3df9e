//! `qfound`: runs the scenario engines and property suites and prints a
//! deterministic report.
//!
//! Exit status is 0 when every check passes, 1 when any check fails or a
//! computation errors, and 2 for invalid arguments.

mod commands;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, ValueEnum};
use serde_json::json;

use report::{EmittedReport, Section};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Ghz,
    MachZehnder,
    Linearity,
    Signaling,
    Tomography,
    Boost,
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Ghz => "ghz",
            Command::MachZehnder => "mach-zehnder",
            Command::Linearity => "linearity",
            Command::Signaling => "signaling",
            Command::Tomography => "tomography",
            Command::Boost => "boost",
            Command::All => "all",
        }
    }
}

/// Order in which `all` runs the individual commands.
const ALL: [Command; 6] = [
    Command::Ghz,
    Command::MachZehnder,
    Command::Linearity,
    Command::Signaling,
    Command::Tomography,
    Command::Boost,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(
    name = "qfound",
    version,
    about = "Quantum-foundations scenario engines and property checks"
)]
struct RunConfig {
    /// What to run.
    #[arg(value_enum)]
    command: Command,

    /// Seed for every randomized check.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Random trials per linearity, Born-rule, compound and tomography check.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,

    /// Interferometer phase grid size (at least 2 for mach-zehnder).
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    phases: u64,

    #[arg(long, value_enum, env = "QFOUND_FORMAT", default_value = "json")]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run_one(cmd: Command, cfg: &RunConfig) -> qfound_core::Result<Section> {
    match cmd {
        Command::Ghz => commands::ghz(),
        Command::MachZehnder => commands::mach_zehnder(cfg.phases as usize),
        Command::Linearity => commands::linearity(cfg.seed, cfg.trials as usize),
        Command::Signaling => commands::signaling(cfg.seed),
        Command::Tomography => commands::tomography(cfg.seed, cfg.trials as usize),
        Command::Boost => commands::boost(),
        Command::All => unreachable!("expanded by caller"),
    }
}

fn run(cfg: &RunConfig) -> qfound_core::Result<EmittedReport> {
    let cmds: Vec<Command> = if cfg.command == Command::All {
        ALL.to_vec()
    } else {
        vec![cfg.command]
    };
    let sections = cmds
        .into_iter()
        .map(|c| run_one(c, cfg))
        .collect::<qfound_core::Result<Vec<_>>>()?;
    let config = json!({
        "command": cfg.command.name(),
        "seed": cfg.seed,
        "trials": cfg.trials,
        "phases": cfg.phases,
        "format": match cfg.format {
            Format::Json => "json",
            Format::Tsv => "tsv",
        },
    });
    Ok(EmittedReport {
        command: cfg.command.name(),
        config,
        sections,
    })
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    if matches!(cfg.command, Command::MachZehnder | Command::All) && cfg.phases < 2 {
        RunConfig::command()
            .error(
                ErrorKind::ValueValidation,
                "--phases must be at least 2 for mach-zehnder",
            )
            .exit();
    }

    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = match cfg.format {
        Format::Json => report.render_json(),
        Format::Tsv => report.render_tsv(),
    };
    let written = match &cfg.output {
        Some(path) => fs::write(path, &text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(1);
    }

    let failures: Vec<_> = report.failures().collect();
    if failures.is_empty() {
        return ExitCode::SUCCESS;
    }
    for (section, c) in failures {
        eprintln!(
            "FAIL {section}.{}: value {} (required {} {})",
            c.name, c.value, c.relation, c.bound
        );
    }
    ExitCode::from(1)
}
