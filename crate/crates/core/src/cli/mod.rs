//! Command-line front end.
//!
//! Every command reads one JSON instance (or a JSON array of instances, which
//! is processed as a batch) and writes one JSON value to standard output.
//! Failures are reported as `{"error": "..."}` with a nonzero exit status.

mod commands;
pub mod generate;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::distmodel::DEFAULT_STATE_BUDGET;
use crate::error::{Error, Result};
use crate::unitdemand::{BuyerModel, PurchaseRule, TieBreak};

#[derive(Debug, Parser)]
#[command(name = "bayes-pricing", version, about = "Exact Bayesian pricing and hardness reductions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Read the instance from a file ("-" for standard input).
    #[arg(long, global = true, conflicts_with = "json")]
    pub input: Option<PathBuf>,
    /// Inline JSON instance.
    #[arg(long, global = true)]
    pub json: Option<String>,
    /// Print a human-readable summary to standard error.
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Seed for sampling commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Maximum number of distinct states in the sum-distribution DP.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_BUDGET)]
    pub budget: usize,
    /// Tie-breaking among items of equal utility.
    #[arg(long, global = true, value_enum, default_value_t = TieArg::Expensive)]
    pub tie: TieArg,
    /// Whether the buyer purchases at zero utility.
    #[arg(long, global = true, value_enum, default_value_t = PurchaseArg::Weak)]
    pub purchase: PurchaseArg,
    /// Worker threads for batch input.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Add decimal renderings under an "approx" key.
    #[arg(long, global = true)]
    pub approx: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Expensive,
    Cheapest,
    Index,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PurchaseArg {
    Strict,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Subsetsum,
    Sqrtsum,
    Soap,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal price for a sum of two-point attributes.
    SolveSoap {
        /// Include the revenue at every support point.
        #[arg(long)]
        curve: bool,
        /// Also estimate the optimal revenue by sampling (needs --seed).
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Optimal grand-bundle price for additive two-point item values.
    SolveBundle {
        #[arg(long)]
        curve: bool,
    },
    /// Best item pricing for a unit-demand buyer over candidate prices.
    SolveUnitdemand,
    /// Expected revenue of a given unit-demand price vector.
    EvalPricing,
    /// Count subsets reaching the target sum through the two-price oracle.
    ReduceCount {
        /// Include the full oracle transcript.
        #[arg(long)]
        transcript: bool,
    },
    /// Decide a sum-of-square-roots instance through the value construction.
    ReduceSqrtsumValues,
    /// Decide a sum-of-square-roots instance through the probability construction.
    ReduceSqrtsumProbs,
    /// Check the two-price property of the counting construction at one p.
    VerifyThm1 {
        /// Probability parameter, overriding a "p" field in the input.
        #[arg(long)]
        p: Option<String>,
    },
    /// Generate a random instance.
    GenInstance {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Largest integer (or attribute value) drawn.
        #[arg(long, alias = "maxval")]
        max: u64,
        #[arg(long)]
        exclude_equal: bool,
    },
}

impl GlobalOpts {
    pub fn buyer_model(&self) -> BuyerModel {
        let tie = match self.tie {
            TieArg::Expensive => TieBreak::MostExpensive,
            TieArg::Cheapest => TieBreak::Cheapest,
            TieArg::Index => TieBreak::LowestIndex,
        };
        let purchase = match self.purchase {
            PurchaseArg::Strict => PurchaseRule::StrictlyPositive,
            PurchaseArg::Weak => PurchaseRule::WeaklyPositive,
        };
        BuyerModel::new(tie, purchase)
    }

    fn read_input(&self) -> Result<Value> {
        let text = match (&self.json, &self.input) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) if p.as_os_str() != "-" => std::fs::read_to_string(p)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?,
            _ => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
                s
            }
        };
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn error_json(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

/// Parses `argv` (including the program name), executes the command and
/// returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(err, "{e}");
            if code != 0 {
                let _ = writeln!(out, "{}", json!({ "error": e.kind().to_string() }));
            }
            return code;
        }
    };
    let (value, code, summary) = execute(&cli);
    if cli.opts.verbose {
        for line in summary {
            let _ = writeln!(err, "{line}");
        }
    }
    let _ = writeln!(out, "{value}");
    code
}

/// Output value, exit status and verbose summary lines.
fn execute(cli: &Cli) -> (Value, i32, Vec<String>) {
    if let Command::GenInstance { kind, n, max, exclude_equal } = &cli.command {
        return match commands::gen_instance(&cli.opts, *kind, *n, *max, *exclude_equal) {
            Ok((v, s)) => (v, 0, vec![s]),
            Err(e) => (error_json(&e), e.exit_code(), vec![e.to_string()]),
        };
    }
    let input = match cli.opts.read_input() {
        Ok(v) => v,
        Err(e) => return (error_json(&e), e.exit_code(), vec![e.to_string()]),
    };
    let one = |v: Value| commands::dispatch(&cli.command, &cli.opts, v);
    match input {
        Value::Array(batch) => {
            let results: Vec<Result<(Value, String)>> = if cli.opts.jobs > 1 {
                match rayon::ThreadPoolBuilder::new().num_threads(cli.opts.jobs).build() {
                    Ok(pool) => pool.install(|| batch.into_par_iter().map(one).collect()),
                    Err(e) => {
                        let e = Error::InvalidInstance(format!("cannot start workers: {e}"));
                        return (error_json(&e), e.exit_code(), vec![e.to_string()]);
                    }
                }
            } else {
                batch.into_iter().map(one).collect()
            };
            let mut code = 0;
            let mut values = Vec::with_capacity(results.len());
            let mut summary = Vec::with_capacity(results.len());
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok((v, s)) => {
                        values.push(v);
                        summary.push(format!("[{i}] {s}"));
                    }
                    Err(e) => {
                        code = code.max(e.exit_code());
                        values.push(error_json(&e));
                        summary.push(format!("[{i}] {e}"));
                    }
                }
            }
            (Value::Array(values), code, summary)
        }
        v => match one(v) {
            Ok((v, s)) => (v, 0, vec![s]),
            Err(e) => (error_json(&e), e.exit_code(), vec![e.to_string()]),
        },
    }
}
