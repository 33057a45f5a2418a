//! `tabipol`: interpolation from clausal tableaux on the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 no proof found within
//! the budget, 3 input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "tabipol",
    version,
    about = "Craig-Lyndon and access interpolation from clausal tableaux"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finds a closed tableau for a formula, or for `F ∧ ¬G` given two files.
    Prove {
        premise: PathBuf,
        conclusion: Option<PathBuf>,
        /// Use the definitional clausal forms of relativized inputs (needs both files).
        #[arg(long)]
        definitional: bool,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Prints the clausal form of a sentence.
    Clausify {
        input: PathBuf,
        /// Definitional clausification of a relativized sentence for the given side.
        #[arg(long, value_enum)]
        definitional: Option<DefSide>,
    },
    /// Craig-Lyndon interpolant of `F ⊨ G`.
    Interpolate {
        premise: PathBuf,
        conclusion: PathBuf,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        craig: CraigFlags,
    },
    /// Horn interpolant of `F ⊨ G` for a Horn sentence `F`.
    InterpolateHorn {
        premise: PathBuf,
        conclusion: PathBuf,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        craig: CraigFlags,
    },
    /// Access interpolant of relativized sentences with `F ⊨ G`.
    AccessInterpolate {
        premise: PathBuf,
        conclusion: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Restructures a ground closed tableau.
    Transform {
        #[arg(value_enum)]
        procedure: Procedure,
        tableau: PathBuf,
        /// Relativized premise; with `--conclusion` it supplies the contiguity
        /// pairs and is required by `to-aci`.
        #[arg(long)]
        premise: Option<PathBuf>,
        #[arg(long)]
        conclusion: Option<PathBuf>,
        /// Literal for `leaf-only` (repeatable); defaults to every negative label.
        #[arg(long = "literal")]
        literals: Vec<String>,
        /// Pair `L1;L2` for `contiguous` (repeatable).
        #[arg(long = "pair")]
        pairs: Vec<String>,
        /// Print the transformation trace after the tableau.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Checks a candidate interpolant `H` for `F ⊨ G`.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        premise: PathBuf,
        conclusion: PathBuf,
        candidate: PathBuf,
        #[command(flatten)]
        budget: BudgetFlags,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BudgetFlags {
    /// Iterative deepening bound.
    #[arg(long, default_value_t = 12)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_inferences: u64,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
}

#[derive(Args, Debug, Clone)]
pub struct RunFlags {
    #[command(flatten)]
    pub budget: BudgetFlags,
    #[arg(long, value_enum)]
    pub prover: Option<Prover>,
    /// Skip the verification of the result.
    #[arg(long)]
    pub no_verify: bool,
    /// Also print the proof tableau.
    #[arg(long)]
    pub show_proof: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct CraigFlags {
    /// Ground a proof variable with a term, `X=term` (repeatable); others get `k`.
    #[arg(long = "ground")]
    pub grounding: Vec<String>,
    #[arg(long, value_enum, default_value_t = SidePref::Red)]
    pub side_policy: SidePref,
    /// Quantify terms of the grounding constant existentially.
    #[arg(long)]
    pub k_in_red: bool,
    /// Add axioms for the equality predicate `eq`.
    #[arg(long)]
    pub equality: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prover {
    Connection,
    Hyper,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Indented rendering.
    Text,
    /// JSON tree format.
    Tree,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefSide {
    L,
    R,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SidePref {
    Red,
    Blue,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Procedure {
    Eager,
    Regular,
    LeafOnly,
    Contiguous,
    ToAci,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyKind {
    CraigLyndon,
    Access,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                commands::INPUT_ERROR
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = std::io::stdout().lock();
    match commands::run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
