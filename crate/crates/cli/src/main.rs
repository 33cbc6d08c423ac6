//! `shiftlab`: command-line front end for the subshift engine.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shiftlab_core::budget::DEFAULT_BUDGET;
use shiftlab_core::{AdmissibilityLevel, SearchConfig};

use crate::commands::CliError;
use crate::report::Output;

/// Exit code for malformed input or arguments.
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "shiftlab",
    version,
    about = "Symbolic dynamics over Z^d and free groups"
)]
struct Cli {
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Search-node budget per phase.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Print timing to stderr.
    #[arg(long, global = true)]
    progress: bool,
    /// Write emitted certificates to this file, one JSON object per line.
    #[arg(long, global = true)]
    cert: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct SpecArg {
    /// Subshift file, or `zoo:<name>` for a catalogued system.
    pub spec: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Side {
    /// Outer set `A·F`.
    Right,
    /// Outer set `F·A`.
    Left,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Auto,
    Search,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count admissible patterns on a window.
    Count {
        #[command(flatten)]
        spec: SpecArg,
        /// `ball:n`, `box:n` or `set:[...]`.
        #[arg(long)]
        window: String,
        /// `local:r` or `exact-z`.
        #[arg(long, default_value = "local:0")]
        level: AdmissibilityLevel,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Entropy series over windows; CSV columns `window,size,count,rate[,oracle]`.
    Entropy {
        #[command(flatten)]
        spec: SpecArg,
        /// Comma-separated windows; a bare number `n` means `box:n`.
        #[arg(long)]
        windows: String,
        #[arg(long, default_value = "local:0")]
        level: AdmissibilityLevel,
        /// Add the transfer-matrix entropy as an `oracle` column (Z only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Memory-set check for one triple, or a strong-TMP scan.
    Tmp {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "A")]
        inner: Option<String>,
        #[arg(long = "B")]
        outer: Option<String>,
        #[arg(long)]
        window: Option<String>,
        /// Margin `F` for a scan; requires `--scan`.
        #[arg(long, requires = "scan", conflicts_with_all = ["inner", "outer", "window"])]
        margin: Option<String>,
        /// Support `A` to scan; repeatable.
        #[arg(long, requires = "margin")]
        scan: Vec<String>,
        /// Scan windows are `B·B_growth`.
        #[arg(long, default_value_t = 1)]
        growth: u32,
        #[arg(long, value_enum, default_value_t = Side::Right)]
        side: Side,
        #[arg(long, default_value = "local:0")]
        level: AdmissibilityLevel,
    },
    /// Search for two patterns on `A` sharing a context on the window.
    Asym {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "A")]
        inner: String,
        #[arg(long)]
        window: String,
        #[arg(long, default_value = "local:0")]
        level: AdmissibilityLevel,
    },
    /// Search for a finite perturbation of a constant background.
    Homoclinic {
        #[command(flatten)]
        spec: SpecArg,
        /// Background symbol name.
        #[arg(long, default_value = "0")]
        background: String,
        #[arg(long)]
        radius: u32,
        /// Check margin; defaults to the rule diameter.
        #[arg(long)]
        margin: Option<u32>,
    },
    /// Largest independence set of cylinders inside an ambient window.
    Indep {
        #[command(flatten)]
        spec: SpecArg,
        /// Cylinder pattern `g=s;g=s`; repeatable. Defaults to every symbol at the identity.
        #[arg(long)]
        cylinder: Vec<String>,
        #[arg(long)]
        ambient: String,
        #[arg(long, default_value = "local:0")]
        level: AdmissibilityLevel,
    },
    /// Count labelings of the n-cycle with few forbidden-word violations.
    Microstates {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        /// Allowed violations.
        #[arg(long, conflicts_with = "delta")]
        beta: Option<u64>,
        /// Allow `floor(delta^2 n)` violations.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Recheck every certificate in a file.
    Verify { file: PathBuf },
    /// Catalogued systems.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZooAction {
    /// Names and summaries.
    List,
    /// The subshift file of an entry.
    Dump { name: String },
    /// Run the expectations of one entry, or of all.
    Check { name: Option<String> },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    let cfg = SearchConfig::with_budget(cli.budget);
    let start = Instant::now();
    let result = commands::run(&cli.command, &cfg);
    if cli.progress {
        eprintln!(
            "shiftlab: finished in {:.3}s",
            start.elapsed().as_secs_f64()
        );
    }
    match result {
        Ok(done) => {
            match &done.output {
                Output::Json(v) => {
                    println!("{}", serde_json::to_string_pretty(v).expect("JSON value"))
                }
                Output::Text(t) => print!("{t}"),
            }
            if let Some(path) = &cli.cert {
                let body: String = done
                    .certificates
                    .iter()
                    .map(|c| c.to_line() + "\n")
                    .collect();
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::from(done.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use shiftlab_core::Error as E;
        match self {
            CliError::Input(_) => EXIT_USAGE,
            CliError::Core(E::Budget { .. }) => 4,
            CliError::Core(E::EntropyUndefined | E::Rejected(_)) => 1,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Failed(_) => 1,
        }
    }
}
