use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lcs_approx::exact::{ed_banded_with, lcs_exact_capped, BandConfig, DEFAULT_MAX_CELLS};
use lcs_approx::harness::{
    bench_scaling, generate, ingest, run_experiment, write_jsonl, Algorithm, AlphabetMode,
    ExperimentConfig, Family, IngestOptions, InstanceSpec, Layout,
};
use lcs_approx::{lcs_approx, BandedExactEd, ConstantSchedule, Result, SolveConfig, SolveMode};

#[derive(Parser)]
#[command(
    name = "lcsapx",
    version,
    about = "Approximate longest common subsequence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Equal,
    Binary,
    Reduce,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => SolveMode::Auto,
            ModeArg::Equal => SolveMode::Equal,
            ModeArg::Binary => SolveMode::Binary,
            ModeArg::Reduce => SolveMode::Reduce,
        }
    }
}

#[derive(clap::Args)]
struct InputArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// `auto` or the alphabet's symbols in id order, e.g. `ACGT`.
    #[arg(long, default_value = "auto")]
    alphabet: String,
    /// Treat whitespace and newlines as symbols.
    #[arg(long)]
    keep_whitespace: bool,
}

impl InputArgs {
    fn load(&self) -> Result<(lcs_approx::SymbolString, lcs_approx::SymbolString)> {
        let options = IngestOptions {
            alphabet: self.alphabet.parse::<AlphabetMode>()?,
            keep_whitespace: self.keep_whitespace,
        };
        ingest(&self.a, &self.b, &options)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Approximate the LCS of two files.
    Approx {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Subalphabet size for the reduction.
        #[arg(long, default_value_t = 2)]
        ell: usize,
        /// `default` or a JSON file with the schedule constants.
        #[arg(long, default_value = "default")]
        schedule: String,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact LCS and insertion/deletion distance.
    Exact {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: u64,
    },
    /// Generate an instance pair as PREFIX_a.txt and PREFIX_b.txt.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated symbol weights (skewed-random).
        #[arg(long, value_delimiter = ',')]
        skew: Option<Vec<f64>>,
        #[arg(long)]
        edits: Option<usize>,
        #[arg(long)]
        block: Option<usize>,
        /// `shuffled` or `blocks` (case-portfolio).
        #[arg(long)]
        layout: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run a JSON experiment config and write JSON lines.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time an algorithm over increasing sizes.
    Bench {
        #[arg(long)]
        algo: String,
        /// Comma-separated ascending sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        family: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn load_schedule(arg: &str) -> Result<Option<ConstantSchedule>> {
    if arg == "default" {
        return Ok(None);
    }
    Ok(Some(serde_json::from_slice(&fs::read(arg)?)?))
}

fn run(cli: Cli) -> Result<()> {
    let ed = BandedExactEd;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Approx {
            input,
            mode,
            ell,
            schedule,
            json,
        } => {
            let (a, b) = input.load()?;
            let config = SolveConfig {
                mode: mode.into(),
                ell,
                schedule: load_schedule(&schedule)?,
            };
            let report = lcs_approx(&a, &b, &config, &ed)?;
            let subsequence: Vec<u8> = report
                .answer
                .witness
                .pairs()
                .iter()
                .map(|&(i, _)| a.alphabet().byte_of(a.ids()[i]))
                .collect();
            writeln!(out, "length\t{}", report.len())?;
            writeln!(out, "path\t{}", report.path)?;
            writeln!(
                out,
                "guarantee\t{}",
                serde_json::to_value(report.guarantee)?
                    .as_str()
                    .unwrap_or("")
            )?;
            writeln!(
                out,
                "subsequence\t{}",
                String::from_utf8_lossy(&subsequence)
            )?;
            if let Some(path) = json {
                let mut w = BufWriter::new(File::create(path)?);
                serde_json::to_writer_pretty(&mut w, &report)?;
                w.write_all(b"\n")?;
                w.flush()?;
            }
        }
        Command::Exact { input, max_cells } => {
            let (a, b) = input.load()?;
            let (lcs, _) = lcs_exact_capped(&a, &b, max_cells)?;
            let ed = ed_banded_with(
                &a,
                &b,
                &BandConfig {
                    max_cells,
                    ..BandConfig::default()
                },
            )?;
            writeln!(out, "lcs\t{lcs}")?;
            writeln!(out, "ed\t{}", ed.distance)?;
        }
        Command::Gen {
            family,
            n,
            m,
            s,
            seed,
            out: prefix,
            skew,
            edits,
            block,
            layout,
            alpha,
        } => {
            let spec = InstanceSpec {
                family: family.parse()?,
                n,
                m,
                s,
                seed,
                skew,
                edits,
                block,
                layout: layout.map(|l| l.parse::<Layout>()).transpose()?,
                alpha,
            };
            let (a, b) = generate(&spec)?;
            let name = prefix
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default();
            let path_a = prefix.with_file_name(format!("{name}_a.txt"));
            let path_b = prefix.with_file_name(format!("{name}_b.txt"));
            fs::write(&path_a, a.to_bytes())?;
            fs::write(&path_b, b.to_bytes())?;
            writeln!(out, "{}\n{}", path_a.display(), path_b.display())?;
        }
        Command::Experiment { config, out: path } => {
            let config: ExperimentConfig = serde_json::from_slice(&fs::read(config)?)?;
            let records = run_experiment(&config, &ed)?;
            write_jsonl(&records, BufWriter::new(File::create(path)?))?;
            writeln!(out, "{} records", records.len())?;
        }
        Command::Bench {
            algo,
            sizes,
            family,
            seed,
            s,
            repeats,
            json,
        } => {
            let algorithm: Algorithm = algo.parse()?;
            let family: Family = family.parse()?;
            let template = InstanceSpec::new(family, 1, s, seed);
            let table = bench_scaling(algorithm, &sizes, &template, repeats, &ed)?;
            writeln!(out, "n\tseconds\tlength")?;
            for row in &table.rows {
                writeln!(out, "{}\t{:.6}\t{}", row.n, row.seconds, row.length)?;
            }
            writeln!(out, "slope\t{:.3}", table.slope)?;
            if let Some(path) = json {
                fs::write(path, serde_json::to_vec_pretty(&table)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = if e.is_internal() {
                "internal error"
            } else {
                "error"
            };
            eprintln!("{kind}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
