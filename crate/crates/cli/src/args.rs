use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kchlint", version, about = "Find and fix hallucinated library calls in Python snippets")]
pub struct Cli {
    /// Extra manifest layered over the bundled ones; repeatable, merged left to right.
    #[arg(long = "kb", value_name = "MANIFEST", global = true)]
    pub kb: Vec<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Report wall time.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report diagnostics. Exit 0 when clean, 1 when anything is found.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Apply suggested repairs.
    Fix {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        mode: FixMode,
        /// Also apply intent-based rewrites.
        #[arg(long)]
        fix_intent: bool,
    },
    /// Score a labelled dataset directory.
    Eval {
        dataset: PathBuf,
        #[arg(long)]
        fix_intent: bool,
    },
    /// Inspect and combine manifests.
    Kb {
        #[command(subcommand)]
        action: KbCommand,
    },
}

#[derive(Debug, Clone, Copy, Args)]
#[group(multiple = false)]
pub struct FixMode {
    /// Print the fixed source (default).
    #[arg(long)]
    pub stdout: bool,
    /// Print a unified diff.
    #[arg(long)]
    pub diff: bool,
    /// Rewrite the files.
    #[arg(long)]
    pub in_place: bool,
}

#[derive(Debug, Subcommand)]
pub enum KbCommand {
    /// Load manifests and report schema errors.
    Validate {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
    },
    /// Merge manifests left to right into one document.
    Merge {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List a library's version and callables.
    Show { library: String },
}
