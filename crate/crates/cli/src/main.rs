mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::{Format, RunConfig};
use report::{Outcome, Report};

/// Arithmetic proof workbench: formulas, codes, proof checking,
/// representation and the diagonal sentence.
#[derive(Parser)]
#[command(name = "arith", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula (literal or file) and print its canonical form.
    Parse { input: String },
    /// Code of a formula, or of a proof file with --proof.
    Encode {
        input: String,
        #[arg(long)]
        proof: bool,
    },
    /// Formula (or proof, with --proof) coded by a decimal number.
    Decode {
        code: String,
        #[arg(long)]
        proof: bool,
    },
    /// Check a proof file under --system.
    CheckProof { file: PathBuf },
    /// Compare bounded derivations of PP, PP+ and PA.
    DiffSystems {
        /// One formula per line; without it two seeds come from --seed.
        seeds: Option<PathBuf>,
    },
    /// Build the diagonal sentence and sample candidate proofs of it.
    BuildGus,
    /// Check one instance of a represented library function.
    VerifyRepresentation {
        function: String,
        #[arg(long, value_delimiter = ',', required = true)]
        args: Vec<u64>,
        #[arg(long)]
        expected: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Encode { .. } => "encode",
            Command::Decode { .. } => "decode",
            Command::CheckProof { .. } => "check-proof",
            Command::DiffSystems { .. } => "diff-systems",
            Command::BuildGus => "build-gus",
            Command::VerifyRepresentation { .. } => "verify-representation",
        }
    }

    fn input(&self) -> Value {
        match self {
            Command::Parse { input } => json!({ "input": input }),
            Command::Encode { input, proof } => json!({ "input": input, "proof": proof }),
            Command::Decode { code, proof } => json!({ "code": code, "proof": proof }),
            Command::CheckProof { file } => json!({ "file": file }),
            Command::DiffSystems { seeds } => json!({ "seeds": seeds }),
            Command::BuildGus => json!({}),
            Command::VerifyRepresentation { function, args, expected } => {
                json!({ "function": function, "args": args, "expected": expected })
            }
        }
    }

    fn run(&self, config: &RunConfig) -> Outcome {
        let result = match self {
            Command::Parse { input } => commands::cmd_parse(config, input),
            Command::Encode { input, proof } => commands::cmd_encode(config, input, *proof),
            Command::Decode { code, proof } => commands::cmd_decode(config, code, *proof),
            Command::CheckProof { file } => commands::cmd_check_proof(config, file),
            Command::DiffSystems { seeds } => commands::cmd_diff_systems(config, seeds.as_deref()),
            Command::BuildGus => commands::cmd_build_gus(config),
            Command::VerifyRepresentation { function, args, expected } => {
                commands::cmd_verify_representation(config, function, args, *expected)
            }
        };
        result.unwrap_or_else(|failure| failure)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = cli.command.run(&cli.config);
    let report = Report {
        command: cli.command.name(),
        input: cli.command.input(),
        config: &cli.config,
        result: outcome.result,
        diagnostics: outcome.diagnostics,
        exit: outcome.exit,
        exit_code: outcome.exit.code(),
        duration_ms: (start.elapsed().as_secs_f64() * 1e6).round() / 1e3,
    };
    let text = match cli.config.format {
        Format::Json => report.json() + "\n",
        Format::Markdown => report.markdown(),
    };
    // a closed pipe is not an error of the command
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(outcome.exit.code() as u8)
}
