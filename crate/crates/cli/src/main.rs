use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flzero_core::{HornMode, ReasonerOptions};

mod bench;
mod commands;
mod error;

use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "flzero",
    version,
    about = "Subsumption and classification for FL0 and FL-bottom TBoxes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether SUB is subsumed by SUP; prints yes or no.
    Subsume {
        tbox: PathBuf,
        sub: String,
        sup: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print every named subsumer of NAME, one per line.
    Subsumers {
        tbox: PathBuf,
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print the subsumer set of every name and a checksum line.
    Classify {
        tbox: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Rewrite a TBox file.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        input: PathBuf,
        output: PathBuf,
    },
    /// Time a reasoning task over a directory of .flo files; TSV on stdout.
    Bench {
        corpus: PathBuf,
        #[arg(value_enum)]
        task: Task,
        /// Write K positive and K negative test pairs per ontology first.
        #[arg(long, value_name = "K")]
        generate_tests: Option<usize>,
        /// Seed for test-pair sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    /// Normal form.
    Normalize,
    /// Normal form without top and bottom.
    Reduce,
    /// OWL subset with existentials read as value restrictions.
    Flip,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Subsume,
    Classify,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Horn {
    Auto,
    Force,
    Off,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Worker threads for classification (default: machine parallelism).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    #[arg(long)]
    no_ancestor_blocking: bool,
    #[arg(long)]
    no_role_filtering: bool,
    #[arg(long)]
    no_cache: bool,
    /// Same as --threads 1.
    #[arg(long)]
    no_multithreading: bool,
    #[arg(long, value_enum, default_value = "auto")]
    horn: Horn,
    /// Time limit in seconds.
    #[arg(long, value_name = "SECONDS")]
    timeout: Option<f64>,
    /// Abort a saturation run after N completion steps.
    #[arg(long, value_name = "N")]
    step_limit: Option<u64>,
    /// Write the final tree of the run from the queried name.
    #[arg(long, value_name = "PATH")]
    dump_model: Option<PathBuf>,
    /// Write the compiled network.
    #[arg(long, value_name = "PATH")]
    dump_rete: Option<PathBuf>,
}

impl Flags {
    pub fn timeout(&self) -> Result<Option<Duration>, CliError> {
        match self.timeout {
            None => Ok(None),
            Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Duration::from_secs_f64(s))),
            Some(s) => Err(CliError::Usage(format!("invalid timeout {s}"))),
        }
    }

    pub fn options(&self) -> Result<ReasonerOptions, CliError> {
        let mut opts = ReasonerOptions::default();
        if let Some(n) = self.threads {
            opts.threads = n;
        }
        if self.no_multithreading {
            opts.threads = 1;
        }
        opts.ancestor_blocking = !self.no_ancestor_blocking;
        opts.role_filtering = !self.no_role_filtering;
        opts.global_caching = !self.no_cache;
        opts.horn = match self.horn {
            Horn::Auto => HornMode::Auto,
            Horn::Force => HornMode::Force,
            Horn::Off => HornMode::Off,
        };
        opts.timeout = self.timeout()?;
        opts.step_limit = self.step_limit;
        opts.validate()?;
        Ok(opts)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Subsume { tbox, sub, sup, flags } => commands::subsume(&tbox, &sub, &sup, &flags),
        Command::Subsumers { tbox, name, flags } => commands::subsumers(&tbox, &name, &flags),
        Command::Classify { tbox, flags } => commands::classify(&tbox, &flags),
        Command::Transform { kind, input, output } => commands::transform(kind, &input, &output),
        Command::Bench {
            corpus,
            task,
            generate_tests,
            seed,
            flags,
        } => bench::run(&corpus, task, generate_tests, seed, &flags),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(error::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("flzero: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
