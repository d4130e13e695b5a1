use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use citenv_core::{
    cmd_batch, cmd_compare, cmd_map, cmd_split, Error, ExternalReferences, Mode, RunConfig, Threshold,
};

/// Journal citation environment maps from an aggregated citation matrix.
#[derive(Debug, Parser)]
#[command(name = "citenv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Map one or more seed journals.
    Map {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        year: i32,
        /// Seed journal id; repeat for several seeds.
        #[arg(long = "seed", required = true)]
        seeds: Vec<String>,
    },
    /// Map every registered journal and write summary.tsv.
    Batch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        year: i32,
    },
    /// Compare a seed's environment between two years.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: String,
        /// Give exactly twice: first the earlier year, then the later one.
        #[arg(long = "year", num_args = 1, required = true)]
        years: Vec<i32>,
    },
    /// Split a journal's references into self, other domestic and international.
    Split {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        year: i32,
        #[arg(long)]
        seed: String,
        /// References to journals outside the database.
        #[arg(long, allow_negative_numbers = true)]
        international: Option<i64>,
        /// All references, domestic and international.
        #[arg(long, allow_negative_numbers = true)]
        total: Option<i64>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Journal registry CSV.
    #[arg(long)]
    registry: PathBuf,
    /// Citation edge CSV.
    #[arg(long)]
    edges: PathBuf,
    #[arg(long, default_value = "cited")]
    mode: Mode,
    /// Membership threshold as a fraction of the seed's total.
    #[arg(long, default_value = "0.01")]
    threshold: Threshold,
    #[arg(long, default_value_t = 0.2)]
    min_cosine: f64,
    /// Drop single-citation cells before mapping.
    #[arg(long)]
    suppress_singles: bool,
    #[arg(long, default_value_t = 42)]
    layout_seed: u64,
    /// Display units per unit share for ellipse radii.
    #[arg(long, default_value_t = 100.0)]
    scale: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Common {
    fn config(self, year: i32) -> RunConfig {
        RunConfig {
            mode: self.mode,
            threshold: self.threshold,
            min_cosine: self.min_cosine,
            suppress_singles: self.suppress_singles,
            layout_seed: self.layout_seed,
            scale: self.scale,
            ..RunConfig::new(self.registry, self.edges, year, self.out)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Map { common, year, seeds } => {
            let config = common.config(year);
            for seed in &seeds {
                let outcome = cmd_map(&config, seed)?;
                for w in &outcome.warnings {
                    eprintln!("warning: {w}");
                }
                println!("{}\t{} members\t{} edges", outcome.dir.display(), outcome.members, outcome.edges);
            }
        }
        Command::Batch { common, year } => {
            let config = common.config(year);
            let summary = cmd_batch(&config)?;
            let degenerate = summary.rows.iter().filter(|r| r.degenerate).count();
            println!(
                "{}\t{} seeds\t{} degenerate\t{} failed",
                config.out.join("summary.tsv").display(),
                summary.rows.len(),
                degenerate,
                summary.failures()
            );
        }
        Command::Compare { common, seed, years } => {
            let [from, to] = years[..] else {
                return Err(Error::Validation(format!("compare needs two --year values, got {}", years.len())));
            };
            let config = common.config(from);
            print!("{}", cmd_compare(&config, &seed, from, to)?.to_table());
        }
        Command::Split { common, year, seed, international, total } => {
            let config = common.config(year);
            let external = ExternalReferences::from_signed(international, total)?;
            print!("{}", cmd_split(&config, &seed, external)?.to_table());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
