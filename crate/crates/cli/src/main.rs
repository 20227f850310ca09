use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use invlex::bench::{self, BenchConfig, BenchError};
use invlex::decode::Decoded;
use invlex::exit;
use invlex::tokens::{records, write_jsonl};
use invlex_core::json::{json_rules, json_sort_tokens, PipelineError};
use invlex_core::PrintableTokens;

#[derive(Parser)]
#[command(name = "invlex", version, about = "Lex, print back and sort JSON with round-trip guarantees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Lex a file and write its tokens as JSON Lines.
    Lex {
        #[arg(long, value_enum, default_value = "json")]
        preset: Preset,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check that printing the lexed tokens gives the input back.
    Roundtrip {
        #[arg(long, value_enum, default_value = "json")]
        preset: Preset,
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Sort a JSON array of flat objects by their integer "id" field.
    JsonSort {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a benchmark experiment and write CSV.
    Bench {
        #[arg(long)]
        experiment: String,
        /// Comma separated sizes; defaults depend on the experiment.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(5..))]
        reps: u32,
        #[arg(long, default_value_t = 3)]
        warmup: u32,
        #[arg(long, env = "INVLEX_SEED", default_value_t = 42)]
        seed: u64,
        /// Directory of .json files to use instead of generated inputs
        /// (json-lex and rpath-check).
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn read(path: &Path) -> Result<Decoded, ExitCode> {
    fs::read(path).map(|b| Decoded::new(&b)).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(exit::IO)
    })
}

fn lex(input: &Path, output: &Path) -> Result<(), ExitCode> {
    let decoded = read(input)?;
    let rules = json_rules();
    let (tokens, suffix) = rules.lex(&decoded.chars);
    let written = fs::File::create(output)
        .and_then(|f| write_jsonl(BufWriter::new(f), &records(&rules, &tokens, &decoded)));
    if let Err(e) = written {
        eprintln!("error: cannot write {}: {e}", output.display());
        return Err(ExitCode::from(exit::IO));
    }
    if !suffix.is_empty() {
        let offset = decoded.byte_offset(decoded.chars.len() - suffix.len());
        eprintln!("error: {}: no rule matches at byte offset {offset}", input.display());
        return Err(ExitCode::from(exit::UNLEXABLE));
    }
    println!("{} tokens", tokens.len());
    Ok(())
}

fn roundtrip(input: &Path) -> Result<(), ExitCode> {
    let decoded = read(input)?;
    let rules = json_rules();
    let (tokens, suffix) = rules.lex(&decoded.chars);
    let mut printed = rules.print(&tokens);
    printed.extend_from_slice(suffix);
    if printed != decoded.chars {
        eprintln!("error: printing the tokens does not give the input back");
        return Err(ExitCode::from(exit::ROUNDTRIP));
    }
    match PrintableTokens::mk_printable_tokens(&rules, tokens) {
        Some(pt) => {
            let out = pt.print();
            let (relexed, rest) = rules.lex(&out);
            if !rest.is_empty() || relexed != pt.tokens() {
                eprintln!("error: printable tokens do not lex back to themselves");
                return Err(ExitCode::from(exit::ROUNDTRIP));
            }
            println!("ok: {} tokens, printable", pt.len());
        }
        None => println!("ok: tokens are not separable, only print after lex checked"),
    }
    Ok(())
}

fn json_sort(input: &Path, output: &Path) -> Result<(), ExitCode> {
    let decoded = read(input)?;
    let rules = json_rules();
    let sorted = json_sort_tokens(&rules, &decoded.chars).map_err(|e| {
        let code = match e {
            PipelineError::Unlexable(i) => {
                eprintln!(
                    "error: {}: no rule matches at byte offset {}",
                    input.display(),
                    decoded.byte_offset(i)
                );
                return ExitCode::from(exit::UNLEXABLE);
            }
            PipelineError::NotPrintable(_) => exit::NOT_PRINTABLE,
            PipelineError::Split(_) => exit::SHAPE,
            PipelineError::Rebuild(_) => exit::REBUILD,
        };
        eprintln!("error: {}: {e}", input.display());
        ExitCode::from(code)
    })?;
    let text: String = sorted.print().into_iter().collect();
    fs::write(output, text).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", output.display());
        ExitCode::from(exit::IO)
    })
}

fn bench_cmd(experiment: &str, cfg: BenchConfig, output: &Path) -> Result<(), ExitCode> {
    let records = bench::run(experiment, &cfg).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(match e {
            BenchError::UnknownExperiment(_) => exit::USAGE,
            BenchError::Mismatch { .. } => exit::ROUNDTRIP,
            BenchError::Input(_) | BenchError::Io(_) => exit::IO,
        })
    })?;
    let written = fs::File::create(output)
        .and_then(|f| bench::write_csv(BufWriter::new(f), experiment, &cfg, &records));
    written.map_err(|e| {
        eprintln!("error: cannot write {}: {e}", output.display());
        ExitCode::from(exit::IO)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(exit::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Lex {
            preset: Preset::Json,
            input,
            output,
        } => lex(&input, &output),
        Command::Roundtrip {
            preset: Preset::Json,
            input,
        } => roundtrip(&input),
        Command::JsonSort { input, output } => json_sort(&input, &output),
        Command::Bench {
            experiment,
            sizes,
            reps,
            warmup,
            seed,
            corpus,
            output,
        } => {
            let cfg = BenchConfig {
                sizes,
                reps: reps as usize,
                warmup: warmup as usize,
                seed,
                corpus,
                ..BenchConfig::default()
            };
            bench_cmd(&experiment, cfg, &output)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
