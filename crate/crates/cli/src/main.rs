mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{C4Model, MomentsMode, Output};
use config::{load_config, FileConfig, Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] expcarm::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(expcarm::Error::Domain(_)) => "domain",
            CliError::Core(expcarm::Error::Capacity(_)) => "capacity",
            CliError::Core(expcarm::Error::Precision(_)) => "precision",
            CliError::Core(expcarm::Error::Certification(_)) => "certification",
            CliError::Core(expcarm::Error::Overflow(_)) => "overflow",
            CliError::Core(expcarm::Error::Bracket(_)) => "bracket",
            CliError::Core(_) | CliError::Io(_) | CliError::Json(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
        }
    }
}

/// Arithmetic functions of exponential type, their Dirichlet series and
/// exponent-pair bounds.
#[derive(Parser, Debug)]
#[command(name = "expcarm", version)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Working precision in bits [default: 256].
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Exponent-pair search depth, at most 12 [default: 6].
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Euler-product prime cutoff [default: 1000].
    #[arg(long, global = true)]
    cutoff: Option<u64>,
    /// Largest sieve segment, in entries.
    #[arg(long, global = true)]
    memory_cap: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key = value config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Values of lambda, lambda-e[r], phi-e or tau at n or on lo..hi.
    Eval {
        function: String,
        #[arg(num_args = 1..=2)]
        args: Vec<String>,
    },
    /// Exact partial sums S(x') at checkpoints.
    Sum {
        /// Function id or r for lambda-e_r.
        function: String,
        x: u64,
        /// Comma-separated checkpoints.
        #[arg(long)]
        checkpoints: Option<String>,
        /// Add a log grid with this many points per decade.
        #[arg(long)]
        per_decade: Option<u32>,
    },
    /// Vanishing order of G's local factor; exits nonzero below the requirement.
    VerifySeries { function: String },
    /// Residue main term as JSON.
    MainTerm { function: String },
    /// S(x) - M(x) on a log grid with a fitted exponent.
    Residual {
        function: String,
        #[arg(long, default_value_t = 4)]
        from: u32,
        #[arg(long, default_value_t = 7)]
        to: u32,
        #[arg(long, default_value_t = 10)]
        per_decade: u32,
        /// Use the maximum of |S - M| over each grid block.
        #[arg(long)]
        envelope: bool,
    },
    /// Exponent pairs.
    Ep {
        #[command(subcommand)]
        op: EpOp,
    },
    /// Krätzel's hypotheses and exponent for four divisor exponents.
    Kratzel {
        /// a1,a2,a3,a4
        exponents: String,
        #[arg(long, default_value = "H2005")]
        seed: String,
        /// Process word applied to the seed.
        #[arg(long, default_value = "")]
        word: String,
        /// Read condition 3b literally.
        #[arg(long)]
        literal: bool,
    },
    /// Moment bounds m(σ).
    Moments {
        #[arg(value_enum)]
        mode: MomentsMode,
        sigmas: Vec<String>,
    },
    /// The constant C4 from the Hölder balance.
    C4 {
        #[arg(long, value_enum, default_value = "table")]
        model: C4Model,
    },
}

#[derive(Subcommand, Debug)]
enum EpOp {
    /// Apply a word of A/B processes to a seed.
    Word {
        word: String,
        #[arg(long, default_value = "H2005")]
        seed: String,
    },
    /// Minimize (ak+bl+c)/(dk+el+f) over reachable pairs.
    Optimize {
        /// a,b,c,d,e,f
        #[arg(long, allow_hyphen_values = true)]
        objective: String,
        /// u,v,w meaning uk + vl + w >= 0; repeatable.
        #[arg(long = "constraint", allow_hyphen_values = true)]
        constraints: Vec<String>,
        /// Comma-separated seeds [default: all].
        #[arg(long)]
        seeds: Option<String>,
    },
    /// Exponent-pair bound for μ(σ).
    Mu { sigma: String },
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Output, CliError> {
    match &cli.command {
        Command::Eval { function, args } => commands::eval(function, args, cfg),
        Command::Sum { function, x, checkpoints, per_decade } => {
            commands::sum(function, *x, checkpoints.as_deref(), *per_decade, cfg)
        }
        Command::VerifySeries { function } => commands::verify_series(function),
        Command::MainTerm { function } => commands::main_term_cmd(function, cfg),
        Command::Residual { function, from, to, per_decade, envelope } => {
            commands::residual_cmd(function, *from, *to, *per_decade, *envelope, cfg)
        }
        Command::Ep { op } => match op {
            EpOp::Word { word, seed } => commands::ep_word(word, seed),
            EpOp::Optimize { objective, constraints, seeds } => {
                commands::ep_optimize(objective, constraints, seeds.as_deref(), cfg)
            }
            EpOp::Mu { sigma } => commands::ep_mu(sigma, cfg),
        },
        Command::Kratzel { exponents, seed, word, literal } => commands::kratzel(exponents, seed, word, *literal),
        Command::Moments { mode, sigmas } => commands::moments(*mode, sigmas, cfg),
        Command::C4 { model } => commands::c4(*model, cfg),
    }
}

fn render(out: &Output, format: Format) -> Result<String, CliError> {
    match (format, &out.csv) {
        (Format::Csv, Some(csv)) => Ok(csv.clone()),
        (Format::Csv, None) => Err(CliError::Usage("this command has no CSV form".into())),
        (Format::Json, _) => Ok(serde_json::to_string_pretty(&out.json)? + "\n"),
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let flags = FileConfig {
        precision: cli.precision,
        memory_cap: cli.memory_cap,
        cutoff: cli.cutoff,
        depth: cli.depth,
        format: cli.format,
        threads: cli.threads,
    };
    let file = match &cli.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::merge(&flags, &file)?;
    if let Some(n) = cfg.threads {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = run(cli, &cfg)?;
    let text = render(&out, cfg.format.unwrap_or(out.default_format))?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    if let Some(note) = &out.note {
        eprintln!("{note}");
    }
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let record = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{record}");
            ExitCode::from(2)
        }
    }
}
