mod figures;
mod grid;
mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsteg::codec::{
    code_for, decode_message, encode_message, fock_symbols, rank, unrank, BitString,
    ConstantWeightCode, MessageWord,
};
use qsteg::rng;
use qsteg::verify::{self, Suite, VerifyConfig};

use figures::{Figure, FigureConfig, Optimize};
use grid::Grid;
use table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "qsteg",
    version,
    about = "Thermal-noise steganography: coding, rates and figure data"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Mean photon numbers as start:stop:step (inclusive) or one value.
    #[arg(long, global = true, env = "QSTEG_NBAR_GRID")]
    nbar_grid: Option<Grid>,
    /// Prior of bit 1.
    #[arg(long, global = true, env = "QSTEG_F")]
    f: Option<f64>,
    /// Priors of bit 1 for the figures that sweep them.
    #[arg(long, global = true, env = "QSTEG_F_GRID")]
    f_grid: Option<Grid>,
    /// Local-oscillator amplitude; defaults to 100·√max(n̄, 1).
    #[arg(long, global = true, env = "QSTEG_BETA")]
    beta: Option<f64>,
    /// Monte-Carlo samples per grid point.
    #[arg(long, global = true, env = "QSTEG_SAMPLES", default_value_t = 100_000)]
    samples: usize,
    #[arg(long, global = true, env = "QSTEG_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true, env = "QSTEG_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "QSTEG_FORMAT", value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Map a message to a constant-weight codeword.
    Encode {
        /// Decimal or 0b-prefixed binary literal.
        #[arg(long)]
        value: String,
        /// Treat the value as a 1-based rank and size the code to it.
        #[arg(long)]
        rank_mode: bool,
        #[arg(long, env = "QSTEG_NBAR")]
        nbar: f64,
        /// Message length in bits; defaults to the literal's length.
        #[arg(long)]
        bits: Option<usize>,
    },
    /// Recover the rank and message value of a codeword.
    Decode {
        #[arg(long)]
        codeword: String,
        /// Reject codewords whose zero count does not match this n̄.
        #[arg(long, env = "QSTEG_NBAR")]
        nbar: Option<f64>,
        /// Message length in bits; the codeword must match the code for it.
        #[arg(long, requires = "nbar")]
        bits: Option<usize>,
    },
    /// Write the data table behind a figure.
    Figure {
        #[arg(value_enum)]
        name: Figure,
        /// Report the best prior per n̄ instead of sweeping f (fig4, fig6).
        #[arg(long, value_enum)]
        optimize: Option<Optimize>,
        /// Normalised cutoffs for fig3.
        #[arg(long, env = "QSTEG_RC_GRID")]
        rc_grid: Option<Grid>,
        /// Amplitude pairs averaged per point for the pairwise schemes.
        #[arg(long, env = "QSTEG_PAIRS", default_value_t = qsteg::rates::DEFAULT_PAIRS)]
        pairs: usize,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Ensembles per point for the fidelity suite.
        #[arg(long, default_value_t = 2000)]
        ensembles: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Codec,
    Fidelity,
    TraceDistance,
    Markov,
    Helstrom,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Codec => vec![Suite::Codec],
            SuiteArg::Fidelity => vec![Suite::Fidelity],
            SuiteArg::TraceDistance => vec![Suite::TraceDistance],
            SuiteArg::Markov => vec![Suite::Markov],
            SuiteArg::Helstrom => vec![Suite::Helstrom],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] qsteg::Error),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0} verification check(s) failed")]
    Verification(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Library(_) => 2,
            CliError::Io { .. } | CliError::Verification(_) => 1,
        }
    }
}

fn emit(global: &GlobalOpts, text: &str) -> Result<(), CliError> {
    match &global.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join_positions(bits: &BitString, symbol: bool) -> String {
    let positions: Vec<String> = bits
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == symbol)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    positions.join(",")
}

fn cmd_encode(
    global: &GlobalOpts,
    value: &str,
    rank_mode: bool,
    nbar: f64,
    bits: Option<usize>,
) -> Result<String, CliError> {
    let literal = MessageWord::parse(value)?;
    let (code, word) = if rank_mode {
        let code = ConstantWeightCode::for_rank(nbar, literal.value())?;
        let word = unrank(literal.value(), &code)?;
        (code, word)
    } else {
        let msg = match bits {
            Some(b) => MessageWord::new(literal.value().clone(), b)?,
            None => literal,
        };
        let code = code_for(nbar, msg.bit_length())?;
        let word = encode_message(&msg, &code)?;
        (code, word)
    };
    let photons = fock_symbols(&word, nbar, &mut rng::stream(global.seed, 0));
    let photons: Vec<String> = photons.iter().map(u64::to_string).collect();
    Ok(format!(
        "length={}\nzeros={}\nweight={}\ncodeword={word}\nvacuum_positions={}\nphoton_positions={}\nphotons={}\n",
        code.length(),
        code.zeros(),
        code.weight(),
        join_positions(&word, false),
        join_positions(&word, true),
        photons.join(","),
    ))
}

fn cmd_decode(codeword: &str, nbar: Option<f64>, bits: Option<usize>) -> Result<String, CliError> {
    let word: BitString = codeword.trim().parse()?;
    if word.is_empty() {
        return Err(CliError::Usage("empty codeword".into()));
    }
    let code = match (nbar, bits) {
        (Some(n), Some(b)) => code_for(n, b)?,
        (Some(n), None) => ConstantWeightCode::thermal(word.len(), n)?,
        _ => ConstantWeightCode::of(&word),
    };
    let r = rank(&word, &code)?;
    let bit_length = bits.unwrap_or_else(|| (&r - 1u32).bits().max(1) as usize);
    let msg = decode_message(&word, &code, bit_length)?;
    Ok(format!("rank={r}\nvalue={}\n", msg.value()))
}

fn cmd_verify(global: &GlobalOpts, suite: SuiteArg, ensembles: usize) -> Result<String, CliError> {
    if global.samples == 0 || ensembles == 0 {
        return Err(CliError::Usage(
            "samples and ensembles must be at least 1".into(),
        ));
    }
    let cfg = VerifyConfig {
        seed: global.seed,
        samples: global.samples,
        ensembles,
    };
    let mut out = String::new();
    let mut failures = 0;
    for s in suite.suites() {
        let report = verify::run(s, &cfg)?;
        for check in &report.checks {
            out.push_str(&format!("[{}] {check}\n", s.name()));
            failures += usize::from(!check.pass);
        }
    }
    print!("{out}");
    if failures > 0 {
        return Err(CliError::Verification(failures));
    }
    Ok(String::new())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let global = &cli.global;
    let text = match cli.command {
        Command::Encode {
            value,
            rank_mode,
            nbar,
            bits,
        } => cmd_encode(global, &value, rank_mode, nbar, bits)?,
        Command::Decode {
            codeword,
            nbar,
            bits,
        } => cmd_decode(&codeword, nbar, bits)?,
        Command::Figure {
            name,
            optimize,
            rc_grid,
            pairs,
        } => {
            if global.samples == 0 || pairs == 0 {
                return Err(CliError::Usage(
                    "samples and pairs must be at least 1".into(),
                ));
            }
            let cfg = FigureConfig {
                n_bar_grid: global.nbar_grid.clone(),
                f: global.f,
                f_grid: global.f_grid.clone(),
                rc_grid,
                beta: global.beta,
                samples: global.samples,
                pairs,
                seed: global.seed,
                optimize,
            };
            figures::build(name, &cfg)?.render(global.format)
        }
        Command::Verify { suite, ensembles } => cmd_verify(global, suite, ensembles)?,
    };
    if !text.is_empty() {
        emit(global, &text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
