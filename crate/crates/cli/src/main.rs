use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use pcmll::grammar::{derive, Lexicon, LexiconError};
use pcmll::normalize::normalize;
use pcmll::render::{render_latex, render_text};
use pcmll::{check_in, check_subformula_property, format_proof_file, parse_formula, parse_proof_file, Mode, ParseError, ProofFile};

#[derive(Parser)]
#[command(name = "pcmll", version, about = "Check, normalize and render natural deduction proofs; parse with a categorial lexicon")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every rule of a proof file against the kernel.
    Check { file: PathBuf },
    /// Normalize a proof and print the result in the proof file format.
    Normalize {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Print one line per rewrite step on stderr.
        #[arg(long)]
        trace: bool,
        /// Maximum number of steps; defaults to ten times the squared size.
        #[arg(long)]
        fuel: Option<usize>,
    },
    /// Check the sub-formula property.
    Subformula { file: PathBuf },
    /// Derive a sentence from a lexicon with merge and move.
    Derive {
        lexicon: PathBuf,
        sentence: String,
        goal: String,
        /// Maximum number of merge and move steps.
        #[arg(long, default_value_t = 12)]
        bound: usize,
        /// Print at most this many derivations.
        #[arg(long)]
        limit: Option<usize>,
        /// Print the kernel proof of each derivation instead of its tree.
        #[arg(long)]
        expand: bool,
    },
    /// Print a proof tree.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lambek,
    Pcmll,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Lambek => Mode::Lambek,
            ModeArg::Pcmll => Mode::Pcmll,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
}

/// Failures reported with exit status 2.
#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{source}", .path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", .path.display())]
    Lexicon { path: PathBuf, source: LexiconError },
    #[error("goal: {0}")]
    Goal(ParseError),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load(path: &Path) -> Result<ProofFile, CliError> {
    parse_proof_file(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns whether the command succeeded logically.
fn run(cmd: Command, out: &mut impl Write, err: &mut impl Write) -> Result<bool, CliError> {
    let io = |e| CliError::Io { path: "<stdout>".into(), source: e };
    match cmd {
        Command::Check { file } => {
            let f = load(&file)?;
            match check_in(&f.proof, &f.signature) {
                Ok(()) => writeln!(out, "OK").map_err(io)?,
                Err(v) => {
                    writeln!(out, "{v}").map_err(io)?;
                    return Ok(false);
                }
            }
        }
        Command::Normalize { file, mode, trace, fuel } => {
            let f = load(&file)?;
            if let Err(v) = check_in(&f.proof, &f.signature) {
                writeln!(err, "input is not a proof: {v}").map_err(io)?;
                return Ok(false);
            }
            let outcome = match normalize(&f.proof, mode.into(), fuel) {
                Ok(o) => o,
                Err(e) => {
                    writeln!(err, "{e}").map_err(io)?;
                    return Ok(false);
                }
            };
            if trace {
                write!(err, "{}", outcome.trace()).map_err(io)?;
            }
            let normal = ProofFile { signature: f.signature, proof: outcome.proof.clone() };
            write!(out, "{}", format_proof_file(&normal)).map_err(io)?;
            if outcome.fuel_exhausted {
                writeln!(err, "fuel exhausted after {} steps", outcome.steps.len()).map_err(io)?;
                return Ok(false);
            }
            if !outcome.normal {
                writeln!(err, "the strategy stopped before reaching a normal form").map_err(io)?;
                return Ok(false);
            }
        }
        Command::Subformula { file } => {
            let f = load(&file)?;
            match check_subformula_property(&f.proof) {
                Ok(()) => writeln!(out, "OK").map_err(io)?,
                Err(vs) => {
                    for v in vs {
                        writeln!(out, "{v}").map_err(io)?;
                    }
                    return Ok(false);
                }
            }
        }
        Command::Derive { lexicon, sentence, goal, bound, limit, expand } => {
            let lex = Lexicon::parse(&read(&lexicon)?).map_err(|source| CliError::Lexicon { path: lexicon.clone(), source })?;
            let goal = parse_formula(&goal).map_err(CliError::Goal)?;
            let words: Vec<&str> = sentence.split_whitespace().collect();
            let found = derive(&lex, &words, &goal, bound);
            if found.is_empty() {
                writeln!(out, "no parse").map_err(io)?;
                return Ok(false);
            }
            let shown = limit.unwrap_or(found.len()).min(found.len());
            for (i, d) in found.iter().take(shown).enumerate() {
                if i > 0 {
                    writeln!(out).map_err(io)?;
                }
                writeln!(out, "# derivation {} of {}: {} merges, {} moves", i + 1, found.len(), d.merges(), d.moves()).map_err(io)?;
                if expand {
                    let file = ProofFile { signature: lex.signature(), proof: d.expand() };
                    write!(out, "{}", format_proof_file(&file)).map_err(io)?;
                } else {
                    writeln!(out, "{d}").map_err(io)?;
                }
            }
        }
        Command::Render { file, format } => {
            let f = load(&file)?;
            let text = match format {
                Format::Text => render_text(&f.proof),
                Format::Latex => render_latex(&f.proof),
            };
            write!(out, "{text}").map_err(io)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    match run(cli.command, &mut out, &mut err) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = writeln!(err, "pcmll: {e}");
            ExitCode::from(2)
        }
    }
}
