//! Command-line front end for transfer-ideal analyses of finite abelian
//! p-groups.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 resource bound exceeded.

pub mod descriptor;
pub mod render;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trideal::ideals::SubgroupPolicy;
use trideal::transchromatic::DEFAULT_MAX_TUPLES;
use trideal::Execution;

use descriptor::Descriptor;
use report::{analyze, build_group, list_subgroups, AnalyzeOptions};
use verify::{run_verify, Scope, Shape, VerifyOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BOUND: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Bound(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Io(_) => EXIT_USAGE,
            Self::Bound(_) => EXIT_BOUND,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Bound(m) | Self::Io(m) => f.write_str(m),
        }
    }
}

impl From<trideal::Error> for CliError {
    fn from(e: trideal::Error) -> Self {
        match e {
            trideal::Error::BoundExceeded { .. } => Self::Bound(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<descriptor::DescriptorError> for CliError {
    fn from(e: descriptor::DescriptorError) -> Self {
        Self::Usage(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    AllProper,
    Maximal,
}

impl From<PolicyArg> for SubgroupPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::AllProper => SubgroupPolicy::AllProper,
            PolicyArg::Maximal => SubgroupPolicy::MaximalOnly,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "trideal",
    version,
    about = "Transfer ideals in character rings of finite abelian p-groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Which proper subgroups generate the transfer ideal.
    #[arg(long, global = true, value_enum, default_value = "maximal")]
    pub policy: PolicyArg,

    /// Upper bound on the number of tuples in a decomposition.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TUPLES)]
    pub max_tuples: usize,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Evaluate batches on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quotient structure and torsion checks for one group, e.g. `2^1x2^1`.
    Analyze {
        group: String,
        /// Also decompose over tuples at this height.
        #[arg(long)]
        height: Option<u32>,
        /// Refuse groups larger than this.
        #[arg(long, default_value_t = 256)]
        max_order: u64,
    },
    /// Per-tuple quotients over `A^(height-1)` and the p-torsion verdict.
    Decompose {
        group: String,
        #[arg(long)]
        height: u32,
        #[arg(long, default_value_t = 256)]
        max_order: u64,
    },
    /// List all subgroups with generators.
    Subgroups {
        group: String,
        #[arg(long, default_value_t = 256)]
        max_order: u64,
    },
    /// Run claim suites over all abelian p-groups in a range.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5])]
        primes: Vec<u64>,
        /// Largest group order in the family.
        #[arg(long, default_value_t = 128)]
        max_order: u64,
        /// Restrict the family to cyclic or non-cyclic groups.
        #[arg(long, value_enum, default_value = "any")]
        shape: Shape,
    },
}

/// Output text plus exit code for one invocation.
pub struct Outcome {
    pub output: String,
    pub exit_code: u8,
}

fn serialize<T: Serialize>(value: &T, json: bool) -> Result<String, CliError> {
    let tree = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    if json {
        let mut s = serde_json::to_string_pretty(&tree).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(render::render(&tree))
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let execution = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let analyze_opts = |max_order: u64, height: Option<u32>| AnalyzeOptions {
        policy: cli.policy.into(),
        max_order,
        max_tuples: cli.max_tuples,
        height,
        execution,
    };
    let ok = |output| Outcome {
        output,
        exit_code: EXIT_OK,
    };
    match &cli.command {
        Command::Analyze {
            group,
            height,
            max_order,
        } => {
            let g = build_group(&Descriptor::parse(group)?, *max_order)?;
            let report = analyze(&g, &analyze_opts(*max_order, *height))?;
            Ok(ok(serialize(&report, cli.json)?))
        }
        Command::Decompose {
            group,
            height,
            max_order,
        } => {
            if *height == 0 {
                return Err(CliError::Usage("--height must be at least 1".to_string()));
            }
            let g = build_group(&Descriptor::parse(group)?, *max_order)?;
            let report = analyze(&g, &analyze_opts(*max_order, Some(*height)))?;
            Ok(ok(serialize(&report, cli.json)?))
        }
        Command::Subgroups { group, max_order } => {
            let g = build_group(&Descriptor::parse(group)?, *max_order)?;
            Ok(ok(serialize(&list_subgroups(&g)?, cli.json)?))
        }
        Command::Verify {
            scope,
            primes,
            max_order,
            shape,
        } => {
            let summary = run_verify(&VerifyOptions {
                scope: *scope,
                primes: primes.clone(),
                max_order: *max_order,
                shape: *shape,
                execution,
            })?;
            let exit_code = if summary.all_passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILED
            };
            Ok(Outcome {
                output: serialize(&summary, cli.json)?,
                exit_code,
            })
        }
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = execute(&cli).and_then(|o| {
        match &cli.out {
            Some(path) => std::fs::write(path, &o.output)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(o.output.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
        Ok(o.exit_code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
