mod commands;
mod output;
mod range;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use binsum::{Error, DEFAULT_PRECISION};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::{Format, Renderer};

/// Exact computation and verification for weighted binomial sums
/// `f(m, a, r) = (1+a)^(-r) sum_{i<=r} C(m,i) a^i`.
#[derive(Parser, Debug, Serialize)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Working precision in bits for floating values
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,

    /// Significant digits when rendering decimals
    #[arg(long, global = true, default_value_t = 20)]
    digits: usize,
}

/// Parameter lists accept `lo:hi` (inclusive), single values and commas.
#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct Ranges {
    /// Sequence length parameter m
    #[arg(long)]
    pub m: Option<String>,
    /// Weight a; rationals such as 5/2 or 2.5 are exact
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Sequence values f(m, a, 0..=m)
    Seq {
        #[command(flatten)]
        ranges: Ranges,
    },
    /// Observed against predicted peak over a grid of m and integer a
    Peak {
        #[command(flatten)]
        ranges: Ranges,
    },
    /// Run named checks over swept ranges (`all` runs every check)
    Verify {
        #[arg(required = true)]
        ids: Vec<String>,
        #[command(flatten)]
        ranges: Ranges,
    },
    /// Coefficient table of the P/Q polynomial tower up to --n
    Pq {
        #[command(flatten)]
        ranges: Ranges,
    },
    /// Probability mass function and moments
    Dist {
        #[command(flatten)]
        ranges: Ranges,
    },
    /// Scaled peak value against its limit along an m schedule
    Asym {
        #[command(flatten)]
        ranges: Ranges,
    },
    /// Reed–Muller parameters [n, k, d] and kd/n
    Rm {
        #[command(flatten)]
        ranges: Ranges,
        /// Orders r (default 0..=m)
        #[arg(long)]
        r: Option<String>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    if err.is_fatal() {
        1
    } else {
        2
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let precision = cli.common.precision;
    let output = match &cli.command {
        Command::Seq { ranges } => commands::seq(ranges)?,
        Command::Peak { ranges } => commands::peak(ranges)?,
        Command::Verify { ids, ranges } => commands::verify(ids, ranges)?,
        Command::Pq { ranges } => commands::pq(ranges)?,
        Command::Dist { ranges } => commands::dist(ranges)?,
        Command::Asym { ranges } => commands::asym(ranges, precision)?,
        Command::Rm { ranges, r } => commands::rm(ranges, r.as_deref())?,
    };
    let renderer = Renderer { format: cli.common.format, digits: cli.common.digits };
    let config = serde_json::to_value(cli).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let io_err = |e: anyhow::Error| Error::InvalidParameter(format!("cannot write report: {e}"));
    match &cli.common.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_err(e.into()))?;
            let mut w = BufWriter::new(file);
            renderer.render(&mut w, &output, &config).map_err(io_err)?;
            w.flush().map_err(|e| io_err(e.into()))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            renderer.render(&mut w, &output, &config).map_err(io_err)?;
        }
    }
    Ok(output.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
