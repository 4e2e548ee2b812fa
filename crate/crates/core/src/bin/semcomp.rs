use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semcomp::channel::{ber_sweep, parse_snr_grid, write_ber_csv};
use semcomp::compressor::CompressorId;
use semcomp::corpus::synth::{generate_corpus, Genre};
use semcomp::corpus::{load_corpus, markov_entropy, split_corpus, AlphabetPolicy, Corpus, CorpusRole, LoadMode, LoadOptions};
use semcomp::ncc::{ncc_bound, JointStrategy};
use semcomp::pipeline::{parse_schemes, report_fig4, sweep, write_fig4_csv, SweepConfig};

/// Compression bounds and coded text transmission experiments. All output is
/// CSV, written to --out or stdout.
#[derive(Parser)]
#[command(name = "semcomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Markov entropy rate of a corpus.
    Entropy {
        /// Corpus directory, text file or synth:<genre>
        corpus: String,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[command(flatten)]
        common: Common,
    },
    /// NCC of a held-out split given the rest of the corpus.
    Ncc {
        /// Corpus directory, text file or synth:<genre>
        corpus: String,
        #[arg(long, default_value = "deflate")]
        compressor: CompressorId,
        #[arg(long, default_value_t = 0.1)]
        test_fraction: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// conditioning or concatenation
        #[arg(long, default_value = "conditioning")]
        mode: JointStrategy,
        #[command(flatten)]
        common: Common,
    },
    /// Uncoded BPSK bit error rate over AWGN.
    Ber {
        #[arg(long, default_value = "0:10:2", allow_hyphen_values = true)]
        snr_grid: String,
        #[arg(long, default_value_t = 1_000_000)]
        bits: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coded bits per word against Eb/N0 with optimized parity.
    Sweep {
        /// Corpus directory, text file or synth:<genre>
        corpus: String,
        #[arg(long, default_value = "fixed5+rs,huffman+rs,deflate+rs,context+ldpc")]
        schemes: String,
        #[arg(long, default_value = "0:10:2", allow_hyphen_values = true)]
        snr_grid: String,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        test_fraction: f64,
        #[command(flatten)]
        common: Common,
    },
    /// NCC, Markov entropy and achieved context-coder rate per corpus.
    Fig4 {
        /// Corpora (directories, files or synth:<genre>), space or comma separated.
        #[arg(required = true, num_args = 1..)]
        corpora: Vec<String>,
        #[arg(long, default_value = "context3")]
        compressor: CompressorId,
        #[arg(long, default_value_t = 0.1)]
        test_fraction: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// One document per line instead of one per file.
    #[arg(long)]
    lines: bool,
    /// Reject characters outside the 32-symbol alphabet instead of mapping them.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self, spec: &str) -> semcomp::Result<(String, Corpus)> {
        if let Some(genre) = spec.strip_prefix("synth:") {
            let genre = Genre::ALL
                .into_iter()
                .find(|g| g.name() == genre)
                .ok_or_else(|| semcomp::Error::Unknown { kind: "genre", name: genre.to_string() })?;
            return Ok((genre.name().to_string(), generate_corpus(genre, 2024, 50, 2000)));
        }
        let options = LoadOptions {
            mode: if self.lines { LoadMode::PerLine } else { LoadMode::PerFile },
            policy: if self.strict { AlphabetPolicy::Strict } else { AlphabetPolicy::Lenient },
        };
        let name = Path::new(spec).file_stem().map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned());
        Ok((name, load_corpus(spec, CorpusRole::Knowledge, options)?))
    }
}

fn output(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Entropy { corpus, order, common } => {
            let (_, corpus) = common.load(&corpus)?;
            let h = markov_entropy(&corpus, order)?;
            let mut out = output(common.out.as_deref())?;
            writeln!(out, "order,bits_per_char\n{order},{h:.6}")?;
            out.flush()?;
        }
        Command::Ncc { corpus, compressor, test_fraction, seed, mode, common } => {
            let (_, corpus) = common.load(&corpus)?;
            let (knowledge, test) = split_corpus(&corpus, test_fraction, seed)?;
            let report = ncc_bound(compressor, &test, &knowledge, mode)?;
            let mut out = output(common.out.as_deref())?;
            report.write_csv(&mut out)?;
            out.flush()?;
        }
        Command::Ber { snr_grid, bits, seed, out } => {
            let estimates = ber_sweep(&parse_snr_grid(&snr_grid)?, bits, seed)?;
            let mut out = output(out.as_deref())?;
            write_ber_csv(&mut out, &estimates)?;
            out.flush()?;
        }
        Command::Sweep { corpus, schemes, snr_grid, eps, trials, seed, test_fraction, common } => {
            let (_, corpus) = common.load(&corpus)?;
            let config = SweepConfig { snr_grid: parse_snr_grid(&snr_grid)?, epsilon: eps, trials, seed, test_fraction, ..SweepConfig::default() };
            let report = sweep(&parse_schemes(&schemes)?, &corpus, &config)?;
            let mut out = output(common.out.as_deref())?;
            report.write_csv(&mut out)?;
            out.flush()?;
            if report.all_infeasible() {
                eprintln!("semcomp: no scheme met the target at any SNR");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Fig4 { corpora, compressor, test_fraction, seed, common } => {
            let named = corpora
                .iter()
                .flat_map(|c| c.split(','))
                .filter(|c| !c.is_empty())
                .map(|c| common.load(c))
                .collect::<semcomp::Result<Vec<_>>>()?;
            let rows = report_fig4(&named, compressor, test_fraction, seed)?;
            let mut out = output(common.out.as_deref())?;
            write_fig4_csv(&mut out, &rows)?;
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("semcomp: {e}");
            ExitCode::from(1)
        }
    }
}
