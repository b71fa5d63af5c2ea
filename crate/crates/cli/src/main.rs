//! JSON-in/JSON-out command-line front end: classification, isomorphism
//! decision, class enumeration, presentation emission, verification, and
//! cocycle tables. Requests arrive on stdin, responses leave on stdout;
//! flags only select the subcommand and adjust enumeration guards.
//!
//! Exit codes: 0 success, 2 invalid input, 3 unsupported characteristic,
//! 4 resource guard exceeded, 5 internal verification failure.

mod requests;

use clap::{Parser, Subcommand};
use pencilform::Error;
use std::io::Read;
use std::process::ExitCode;

const ENV_MAX_ENUM: &str = "PENCILFORM_MAX_ENUM";

#[derive(Parser)]
#[command(
    name = "pencilform",
    about = "Classify pairs of skew-symmetric forms over F_p and work with the groups they present",
    version
)]
struct Cli {
    /// Override the enumeration guards (group sweeps, polynomial
    /// enumeration) with an explicit limit. The environment variable
    /// PENCILFORM_MAX_ENUM does the same; the flag wins.
    #[arg(long, global = true)]
    max_enum: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a skew pair: invariants, weak-canonical
    /// invariants, and the congruence transform, from a tuple on stdin.
    Canon,
    /// Decide whether two tuples present isomorphic groups; emits a
    /// certificate when one is found.
    Iso,
    /// Enumerate the weak-congruence classes for given p and m.
    Classes,
    /// Presentation of the group for a class function (or the
    /// single-bottom k/l form).
    Present {
        /// Emit the fixed text format instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Rebuild the group model for a class function and replay its
    /// presentation inside it.
    Verify,
    /// Cocycle table of a skew form, with the recovered form.
    Cocycle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = cli
        .max_enum
        .or_else(|| {
            std::env::var(ENV_MAX_ENUM)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(pencilform::weakcong::DEFAULT_ORBIT_LIMIT);

    let mut input = String::new();
    if std::io::Read::by_ref(&mut std::io::stdin())
        .read_to_string(&mut input)
        .is_err()
    {
        eprintln!("error: stdin is not valid UTF-8");
        return ExitCode::from(2);
    }

    let outcome = match cli.command {
        Command::Canon => requests::cmd_canon(&input),
        Command::Iso => requests::cmd_iso(&input, limit),
        Command::Classes => requests::cmd_classes(&input, limit),
        Command::Present { text } => requests::cmd_present(&input, text),
        Command::Verify => requests::cmd_verify(&input),
        Command::Cocycle => requests::cmd_cocycle(&input),
    };

    match outcome {
        Ok(body) => {
            print!("{body}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::UnsupportedCharacteristic => 3,
        Error::ResourceGuard { .. } => 4,
        Error::Internal(_) => 5,
        _ => 2,
    }
}
