use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use charsum_lab::commands::{self, Report};
use charsum_lab::experiment::{ReportRow, COLUMNS};
use charsum_lab::output::{write_json, Table};
use charsum_lab::setspec::{read_arg, SetSpec};
use charsum_lab::{run_experiment, ExperimentConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Character sums over sets with small doubling: computations and checks.
///
/// Set arguments are JSON, inline or as `@file`:
/// `{"p":101,"gap":{"a0":1,"gens":[1],"H":[10]}}` or `{"p":101,"elements":[1,2,3]}`.
#[derive(Debug, Parser)]
#[command(name = "charsum-lab", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; `sweep` and `paley` default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Overrides the seed of a sweep config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// The bilinear sum over A x B.
    Sum {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// The 2r-th moment check for I = [1, n].
    Davenport {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        /// Length n of I = [1, n].
        #[arg(long)]
        interval: u64,
        #[arg(long)]
        r: u32,
    },
    /// Multiplicative energies and the system count.
    Energy {
        #[arg(long)]
        p: u64,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: Option<String>,
        /// Count solutions through 0 in B instead of removing it.
        #[arg(long)]
        with_zeros: bool,
        #[arg(long)]
        report_e3_bound: bool,
    },
    /// Clique and independence numbers of Paley graphs.
    Paley {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Step-by-step verification for A inside a progression P.
    ProofTrace {
        /// The containing progression, as a set with a "gap" field.
        #[arg(long = "P")]
        gap: String,
        /// Defaults to all of P.
        #[arg(long = "A")]
        a: Option<String>,
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        d: u32,
        #[arg(long = "c-of-k", default_value_t = 1.0)]
        c_of_k: f64,
    },
    /// Runs an experiment config and emits one row per cell.
    Sweep {
        /// Config JSON, inline or `@file`.
        #[arg(long)]
        config: String,
    },
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<R: Report>(cli: &Cli, default: Format, report: &R) -> Result<()> {
    let mut w = sink(&cli.out)?;
    match cli.format.unwrap_or(default) {
        Format::Json => write_json(&mut w, report)?,
        Format::Csv => report.table().write_to(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Sum { p, d, a, b } => {
            let r = commands::sum(*p, *d, &SetSpec::parse(a)?, &SetSpec::parse(b)?)?;
            emit(&cli, Format::Json, &r)
        }
        Cmd::Davenport { p, d, interval, r } => emit(
            &cli,
            Format::Json,
            &commands::davenport(*p, *d, *interval, *r)?,
        ),
        Cmd::Energy {
            p,
            a,
            b,
            with_zeros,
            report_e3_bound,
        } => {
            let b = b.as_deref().map(SetSpec::parse).transpose()?;
            let r = commands::energy(
                *p,
                &SetSpec::parse(a)?,
                b.as_ref(),
                *with_zeros,
                *report_e3_bound,
            )?;
            emit(&cli, Format::Json, &r)
        }
        Cmd::Paley { primes } => emit(&cli, Format::Csv, &commands::paley(primes)?),
        Cmd::ProofTrace {
            gap,
            a,
            b,
            d,
            c_of_k,
        } => {
            let a = a.as_deref().map(SetSpec::parse).transpose()?;
            let r = commands::trace(
                &SetSpec::parse(gap)?,
                a.as_ref(),
                &SetSpec::parse(b)?,
                *d,
                *c_of_k,
            )?;
            emit(&cli, Format::Json, &r)
        }
        Cmd::Sweep { config } => {
            let mut cfg = ExperimentConfig::from_json(&read_arg(config)?)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let outcome = run_experiment(&cfg, cli.workers)?;
            for s in &outcome.skipped {
                eprintln!(
                    "skipped p={} A={} B={}: {}",
                    s.p, s.family_a, s.family_b, s.reason
                );
            }
            let mut w = sink(&cli.out)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => write_json(&mut w, &outcome)?,
                Format::Csv => {
                    let mut t = Table::new(&COLUMNS);
                    outcome
                        .rows
                        .iter()
                        .map(ReportRow::record)
                        .for_each(|r| t.push(r));
                    t.write_to(&mut w)?;
                }
            }
            w.flush()?;
            Ok(())
        }
    }
}
