//! `littlewood`: command-line front end for the randomized Littlewood
//! experiments.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use littlewood_core::experiment::parse_count;
use littlewood_core::{Error, Precision, PsiSpec, ShiftStream, DEFAULT_BUDGET};

use output::Format;

const PSI_HELP: &str = "psi family: paper:DELTA for (1+DELTA)/(n ln(n+1)), constant:C, or custom:v1,v2,... (nonincreasing table, 0 past its end)";

#[derive(Debug, Parser)]
#[command(name = "littlewood", version, about = "Randomized Littlewood conjecture experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed of the random shift stream (and of Monte Carlo sampling).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Maximum number of elementary tests (membership tests or statistic terms).
    #[arg(long, global = true, value_parser = count, default_value_t = DEFAULT_BUDGET as u64)]
    pub budget: u64,
    #[arg(long, global = true, value_parser = precision, default_value = "double")]
    pub precision: Precision,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Replace the shift stream by gamma = delta = 0 (not random).
    #[arg(long, global = true, hide = true)]
    pub debug_zero_shifts: bool,
}

impl Global {
    pub fn shifts(&self) -> ShiftStream {
        if self.debug_zero_shifts {
            ShiftStream::zero()
        } else {
            ShiftStream::new(self.seed)
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and Monte Carlo area of A_n.
    Area(AreaArgs),
    /// Coverage sweeps and cover certificates.
    Cover(CoverArgs),
    /// Running minimum of n ln n |n alpha - gamma_n| |n beta - delta_n|.
    Liminf(LiminfArgs),
    /// Many (point, seed) trajectories with fractions and quantiles.
    Batch(BatchArgs),
    /// Divergence-condition trace, records and the feasible epsilon range.
    Condition(ConditionArgs),
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    #[arg(long, value_parser = psi, help = PSI_HELP)]
    pub psi: PsiSpec,
    #[arg(long, value_parser = count)]
    pub n: u64,
    #[arg(long, value_parser = count, default_value = "1000000")]
    pub samples: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Full,
    Shrunk,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    /// Largest region index.
    #[arg(long = "N", value_parser = count)]
    pub n: u64,
    #[arg(long, value_parser = psi, help = PSI_HELP)]
    pub psi: PsiSpec,
    /// Grid: Q for the lattice (a/Q, b/Q), or spacing:H.
    #[arg(long, default_value = "256")]
    pub grid: String,
    /// Lattice offset eta in [0, 1), in units of the pitch.
    #[arg(long, default_value_t = 0.0)]
    pub offset: f64,
    #[arg(long, value_enum, default_value_t = TargetArg::Full)]
    pub target: TargetArg,
    /// Certify the cover with a separation-radius grid (ignores --grid).
    #[arg(long)]
    pub certify: bool,
    /// Smallest region index M in the union M <= m <= N.
    #[arg(long = "from", value_parser = count, default_value = "1")]
    pub from: u64,
    /// Relative safety margin on the certificate spacing.
    #[arg(long, default_value_t = littlewood_core::coverage::CERTIFICATE_MARGIN)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct LiminfArgs {
    #[arg(long, requires = "beta", conflicts_with = "named", allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, requires = "alpha", allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// A symbolic pair such as golden,silver or 1/3,cbrt2.
    #[arg(long, required_unless_present = "alpha")]
    pub named: Option<String>,
    #[arg(long = "N", value_parser = count)]
    pub n: u64,
    /// Emit every STRIDE-th n; defaults to about a thousand rows.
    #[arg(long, value_parser = count)]
    pub stride: Option<u64>,
    /// Add unshifted and n ln^2 n columns.
    #[arg(long)]
    pub compare_deterministic: bool,
    /// Recorded in run records only; the statistic does not involve psi.
    #[arg(long, value_parser = psi, default_value = "paper:0.5")]
    pub psi: PsiSpec,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// random:COUNT[:SEED], an explicit pair, or a named pair.
    #[arg(long)]
    pub points: String,
    /// Shift seeds: A..B (inclusive) or a comma list.
    #[arg(long, value_parser = seeds, default_value = "0..9")]
    pub seeds: Seeds,
    #[arg(long = "N", value_parser = count)]
    pub n: u64,
    #[arg(long, default_value_t = 1.5)]
    pub threshold: f64,
    #[arg(long, value_parser = psi, default_value = "paper:0.5")]
    pub psi: PsiSpec,
}

#[derive(Debug, Args)]
pub struct ConditionArgs {
    #[arg(long, value_parser = psi, required_unless_present = "feasible", help = PSI_HELP)]
    pub psi: Option<PsiSpec>,
    #[arg(long, required_unless_present = "feasible")]
    pub epsilon: Option<f64>,
    #[arg(long = "Nmax", value_parser = count, required_unless_present = "feasible")]
    pub n_max: Option<u64>,
    /// Print the epsilon interval for which the paper family diverges.
    #[arg(long, requires = "delta")]
    pub feasible: bool,
    #[arg(long)]
    pub delta: Option<f64>,
}

fn count(s: &str) -> Result<u64, String> {
    parse_count(s).ok_or_else(|| format!("expected a nonnegative integer, got {s:?}"))
}

fn psi(s: &str) -> Result<PsiSpec, String> {
    s.parse::<PsiSpec>().map_err(|e| e.to_string())
}

fn precision(s: &str) -> Result<Precision, String> {
    s.parse::<Precision>().map_err(|e| e.to_string())
}

#[derive(Clone, Debug)]
pub struct Seeds(pub Vec<u64>);

fn seeds(s: &str) -> Result<Seeds, String> {
    let bad = || format!("expected A..B or a comma list of seeds, got {s:?}");
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (count(a.trim())?, count(b.trim())?);
        if a > b {
            return Err(bad());
        }
        return Ok(Seeds((a..=b).collect()));
    }
    s.split(',').map(|t| count(t.trim()).map_err(|_| bad())).collect::<Result<_, _>>().map(Seeds)
}

/// How a successful run ended.
pub enum Outcome {
    Done,
    /// A meaningful negative verdict: uncovered points or a failed certificate.
    Negative,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot start {t} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
