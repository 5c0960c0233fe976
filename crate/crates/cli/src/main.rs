mod batch;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qf_core::error::Error;

#[derive(Parser)]
#[command(name = "qf", version, about = "Quandle cocycle invariants and truncated fundamental classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Planar diagram structure.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Finite quandle tables.
    #[command(subcommand)]
    Quandle(QuandleCmd),
    /// Colorings of a diagram by a finite quandle.
    #[command(subcommand)]
    Color(ColorCmd),
    /// State sums and pairings.
    #[command(subcommand)]
    Invariant(InvariantCmd),
    /// Rack or quandle homology of a finite quandle.
    Homology {
        quandle: String,
        #[arg(long, default_value = "quandle")]
        theory: String,
        #[arg(long)]
        degree: usize,
    },
    /// Finite groups with subgroup families.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Truncated-simplex representative of the fundamental class of a
    /// parabolic coloring.
    Fundclass {
        pd: String,
        coloring: String,
        /// Basepoint `a,b`; coordinates are rationals, or power-basis
        /// coefficients joined by `:` (e.g. `0:1` for the generator).
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Square-free `d` for Q(sqrt d); defaults to the field in the file.
        #[arg(long, allow_hyphen_values = true)]
        field: Option<i64>,
        /// Overrides the color of the unbounded region.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Runs every job of a manifest and writes one aggregated report.
    Batch {
        manifest: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum DiagramCmd {
    Faces { pd: String },
}

#[derive(Subcommand)]
enum QuandleCmd {
    Check { spec: String },
    Build { spec: String },
}

#[derive(Subcommand)]
enum ColorCmd {
    Enum {
        pd: String,
        quandle: String,
        /// Also complete each coloring to a shadow coloring with this
        /// unbounded-region color.
        #[arg(long)]
        shadow: Option<usize>,
    },
}

#[derive(Subcommand)]
enum InvariantCmd {
    Statesum {
        pd: String,
        quandle: String,
        cocycle: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 0)]
        x0: usize,
    },
    Pairing22 {
        pd: String,
        quandle: String,
        theta: String,
        #[arg(long)]
        k1: usize,
        #[arg(long, default_value_t = 0)]
        x0: usize,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Malnormal { group: String, subgroups: String },
    CocycleCheck { group: String, cocycle: String },
}

/// Failure of a subcommand: exit 2 for bad input, 3 for exhausted budgets.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

pub type CmdResult = std::result::Result<Value, Failure>;

fn dispatch(cmd: Command) -> CmdResult {
    use commands::*;
    match cmd {
        Command::Diagram(DiagramCmd::Faces { pd }) => diagram_faces(&pd),
        Command::Quandle(QuandleCmd::Check { spec }) => quandle_check(&spec),
        Command::Quandle(QuandleCmd::Build { spec }) => quandle_build(&spec),
        Command::Color(ColorCmd::Enum { pd, quandle, shadow }) => color_enum(&pd, &quandle, shadow),
        Command::Invariant(InvariantCmd::Statesum { pd, quandle, cocycle, modulus, x0 }) => {
            statesum(&pd, &quandle, &cocycle, modulus, x0)
        }
        Command::Invariant(InvariantCmd::Pairing22 { pd, quandle, theta, k1, x0 }) => {
            pairing22(&pd, &quandle, &theta, k1, x0)
        }
        Command::Homology { quandle, theory, degree } => homology(&quandle, &theory, degree),
        Command::Group(GroupCmd::Malnormal { group, subgroups }) => malnormal(&group, &subgroups),
        Command::Group(GroupCmd::CocycleCheck { group, cocycle }) => cocycle_check(&group, &cocycle),
        Command::Fundclass { pd, coloring, p, field, x0 } => fundclass(&pd, &coloring, &p, field, x0.as_deref()),
        Command::Batch { manifest, out } => batch::run(&manifest, out.as_deref()),
    }
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&json!({ "error": e.kind().to_string(), "detail": e.to_string().trim() }));
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.command) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            emit(&json!({ "error": msg }));
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            emit(&json!({ "error": msg, "budget": true }));
            ExitCode::from(3)
        }
    }
}
