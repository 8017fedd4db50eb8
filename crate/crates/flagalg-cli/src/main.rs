//! Command-line verification harness for subspace lattices with a full flag.

mod config;
mod report;
mod suites;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Format, RawConfig, RunConfig, Suite};

#[derive(Parser)]
#[command(name = "flagalg", version, about = "Exact verification suites for flag-adapted subspace lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice enumeration, location buckets and covering structure.
    LatticeStats,
    /// Rook placements, sigma classification and kappa identities.
    CombinCheck,
    /// Relations between L_m, R_m, K_m and the location projectors.
    VerifyH,
    /// Joint eigenspaces, character cross-check and the decomposition table.
    Decompose,
    /// Chevalley generators, evaluation modules and intertwiners.
    VerifyUq,
    /// Run several suites in dependency order.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run every suite.
    #[arg(long)]
    all: bool,
    /// Suites to run: lattice, combin, h, decompose, uq or all.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Opts {
    /// Field size.
    #[arg(long, global = true, default_value_t = 2)]
    q: u64,
    /// Ambient dimension N.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Monic irreducible modulus "c0,c1,...,1", coefficients low to high.
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Evaluation parameters "a1,...,aN"; rationals "p/r" accepted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    alphas: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,
    /// Omit timing fields so that output is reproducible byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Largest lattice to enumerate.
    #[arg(long, global = true, env = "FLAGALG_MAX_SIZE", default_value_t = 200_000)]
    max_size: u128,
    /// Fail when a class outside general position turns out reducible.
    #[arg(long, global = true)]
    require_irreducible: bool,
}

fn suites_for(command: &Command) -> Result<Vec<Suite>, config::ConfigError> {
    Ok(match command {
        Command::LatticeStats => vec![Suite::Lattice],
        Command::CombinCheck => vec![Suite::Combin],
        Command::VerifyH => vec![Suite::H],
        Command::Decompose => vec![Suite::Decompose],
        Command::VerifyUq => vec![Suite::Uq],
        Command::Run(args) => {
            let mut out = Vec::new();
            if args.all {
                out.extend(Suite::ALL);
            }
            for s in &args.suite {
                out.extend(Suite::parse(s)?);
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = &cli.opts;
    let format = if o.json {
        Format::Json
    } else {
        match o.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    };
    let cfg = suites_for(&cli.command).and_then(|suites| {
        RunConfig::validate(RawConfig {
            q: o.q,
            n: o.n,
            modulus: o.modulus.as_deref(),
            alphas: o.alphas.as_deref(),
            suites,
            format,
            timing: !o.no_timing,
            max_size: o.max_size,
            require_irreducible: o.require_irreducible,
        })
    });
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = suites::run_suite(&cfg);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = report::emit(&report, cfg.format, &mut out).and_then(|_| out.flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
