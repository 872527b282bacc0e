use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dclab::lab::{run, Experiment, ExperimentConfig, GrowthChoice};
use dclab::rational::parse_rational;
use dclab::{DcError, Rational};

/// Runs one distributional-chaos experiment and writes its CSV, JSON and SVG
/// artifacts. Exit status: 0 pass, 1 tolerance failure, 2 usage error.
#[derive(Debug, Parser)]
#[command(name = "dclab", version)]
struct Cli {
    /// lemma34, dc2scan, dc2half, dc1set, horseshoe, gehman,
    /// generalized-comb or classify
    #[arg(value_parser = parse_experiment)]
    experiment: Experiment,
    /// JSON config; flags given on the command line take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    levels: Option<u32>,
    /// May be repeated or comma-separated
    #[arg(long = "delta", value_parser = parse_rationals)]
    delta: Vec<Vec<Rational>>,
    /// Number of x1 grid points
    #[arg(long)]
    grid: Option<usize>,
    /// pow2sq, factorial or custom:<file>
    #[arg(long, value_parser = parse_growth)]
    growth: Option<GrowthChoice>,
    #[arg(long)]
    prefix_blocks: Option<usize>,
    #[arg(long)]
    alphabet: Option<u8>,
    #[arg(long)]
    depth: Option<usize>,
    /// Comma-separated forbidden words
    #[arg(long, value_delimiter = ',')]
    forbidden: Option<Vec<String>>,
    /// The two cylinder words of the horseshoe test
    #[arg(long, value_delimiter = ',')]
    words: Option<Vec<String>>,
    /// Comma-separated spike bases per level
    #[arg(long, value_delimiter = ',')]
    bases: Option<Vec<u64>>,
    /// Spine positions; may be repeated or comma-separated
    #[arg(long = "x1", value_parser = parse_rationals)]
    x1: Vec<Vec<Rational>>,
    /// Comma-separated seed words for the scrambled points
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<String>>,
    /// Distance series file for classify
    #[arg(long)]
    series: Option<PathBuf>,
    #[arg(long, value_parser = parse_one_rational)]
    diameter: Option<Rational>,
    #[arg(long, value_parser = parse_one_rational)]
    tol: Option<Rational>,
    /// Output directory (overridden by DCLAB_OUT)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    Experiment::from_name(s).map_err(|e| e.to_string())
}

fn parse_one_rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(parse_one_rational).collect()
}

fn parse_growth(s: &str) -> Result<GrowthChoice, String> {
    GrowthChoice::parse(s).map_err(|e| e.to_string())
}

fn set<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, DcError> {
    let mut c = match &cli.config {
        Some(path) => {
            let c = ExperimentConfig::load(path)?;
            if c.experiment != cli.experiment {
                return Err(DcError::Config(format!(
                    "config is for {}, command line asks for {}",
                    c.experiment, cli.experiment
                )));
            }
            c
        }
        None => ExperimentConfig::new(cli.experiment),
    };
    let flat = |v: Vec<Vec<Rational>>| (!v.is_empty()).then(|| v.into_iter().flatten().collect());
    set(&mut c.levels, cli.levels);
    set(&mut c.deltas, flat(cli.delta));
    set(&mut c.grid, cli.grid);
    set(&mut c.growth, cli.growth);
    set(&mut c.prefix_blocks, cli.prefix_blocks);
    set(&mut c.alphabet, cli.alphabet);
    set(&mut c.depth, cli.depth);
    set(&mut c.forbidden, cli.forbidden);
    set(&mut c.words, cli.words);
    set(&mut c.bases, cli.bases);
    set(&mut c.x1, flat(cli.x1));
    set(&mut c.seeds, cli.seeds);
    set(&mut c.series, cli.series);
    set(&mut c.diameter, cli.diameter);
    set(&mut c.tol, cli.tol);
    set(&mut c.out, cli.out);
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = build_config(cli).and_then(|c| run(&c));
    match report {
        Ok(report) => {
            for c in &report.checks {
                println!(
                    "{} {}: expected {}, observed {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.expected,
                    c.observed
                );
            }
            for a in &report.artifacts {
                println!("wrote {a}");
            }
            eprintln!("finished in {:.3} s", report.duration.as_secs_f64());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("dclab: {e}");
            ExitCode::from(2)
        }
    }
}
