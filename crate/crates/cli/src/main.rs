//! `softgrip`: batch command-line front end for the gripper model.

mod commands;
mod config;
mod error;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use crate::config::{Config, GlobalArgs};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "softgrip", version, about = "Tri-finger soft gripper kinematics, calibration and grasp planning")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poses of all three fingers at one bend angle
    Fk {
        /// Bend angle (rad)
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// Backbone point, 0 = root, 1 = tip
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        xi: f64,
    },
    /// Pressure command for a bend angle and a stiffness or P1 target
    #[command(group(ArgGroup::new("target").required(true).args(["p1", "stiffness"])))]
    Command {
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// Stiffness-PMA pressure (bar)
        #[arg(long, allow_hyphen_values = true)]
        p1: Option<f64>,
        /// Bending stiffness (Nm/rad)
        #[arg(long, allow_hyphen_values = true)]
        stiffness: Option<f64>,
    },
    /// Close the fingers on an object and plan the pressures
    #[command(group(ArgGroup::new("target").required(true).args(["p1", "stiffness"])))]
    Grasp {
        /// Object JSON, inline or as a file path
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        p1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        stiffness: Option<f64>,
    },
    /// Fingertip loci over the full bend range
    Workspace {
        /// Number of bend angles (at least 2)
        #[arg(short = 'n', value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        /// Write to this file instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Calibration grid tools
    Calib {
        #[command(subcommand)]
        action: CalibAction,
    },
}

#[derive(Debug, Subcommand)]
enum CalibAction {
    /// Load and validate a calibration CSV
    Validate {
        /// File to check (defaults to the configured calibration)
        path: Option<PathBuf>,
    },
    /// Pressure pairs that hold one bend angle
    Iso {
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// P1 samples (bar); defaults to the grid's P1 knots
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p1: Vec<f64>,
    },
    /// Bend angle produced by a pressure pair
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        p1: f64,
        #[arg(long, allow_hyphen_values = true)]
        p2: f64,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = Config::resolve(&cli.global)?;
    match cli.command {
        Command::Fk { phi, xi } => commands::fk(&cfg, phi, xi),
        Command::Command { phi, p1, stiffness } => {
            commands::command(&cfg, phi, commands::target(p1, stiffness))
        }
        Command::Grasp {
            object,
            p1,
            stiffness,
        } => commands::grasp(&cfg, &object, commands::target(p1, stiffness)),
        Command::Workspace { n, output } => {
            let body = commands::workspace(&cfg, n as usize)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, body).map_err(|e| {
                        CliError::new("io", format!("cannot write {}: {e}", path.display()))
                    })?;
                    Ok(String::new())
                }
                None => Ok(body),
            }
        }
        Command::Calib { action } => match action {
            CalibAction::Validate { path } => commands::calib_validate(&cfg, path.as_deref()),
            CalibAction::Iso { phi, p1 } => commands::calib_iso(&cfg, phi, &p1),
            CalibAction::Invert { p1, p2 } => commands::calib_invert(&cfg, p1, p2),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprintln!("{}", CliError::usage("missing subcommand; try --help"));
                return ExitCode::from(2);
            }
            let message = e.to_string();
            let summary: Vec<&str> = message
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty() && !l.starts_with("For more information"))
                .collect();
            let first = summary.join(" ");
            let first = first.trim_start_matches("error: ");
            eprintln!("{}", CliError::usage(first));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
