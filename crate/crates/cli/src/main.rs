use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mqknot::fox::{alexander_matrix, alexander_polynomial};
use mqknot::freegroup::{chain_check, derived_depth, lemma_check, Word};
use mqknot::indices::{kpq_classify, mq_bounds, nakanishi_analysis, IndexBounds, IndexReport, KnotFacts};
use mqknot::laurent::{default_battery, DEFAULT_MAX_FACTOR_DEGREE, DEFAULT_PRIMES};
use mqknot::notation::{goeritz_determinant, parse_braid, parse_pd, wirtinger_presentation, KnotDiagram};
use mqknot::tables::{emit_reports, emit_section4, load_dataset, reproduce_section4, run_pipeline, Format, PipelineConfig};
use mqknot::Exec;

#[derive(Parser)]
#[command(name = "mqknot", version, about = "Alexander invariants and Nakanishi/MQ index bounds for knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
    #[arg(long, conflicts_with = "braid")]
    pd: Option<String>,
    /// Braid closure, e.g. "braid(2; 1 1 1)"
    #[arg(long)]
    braid: Option<String>,
}

impl Input {
    fn diagram(&self) -> Result<KnotDiagram> {
        match (&self.pd, &self.braid) {
            (Some(pd), None) => Ok(parse_pd(pd)?),
            (None, Some(b)) => Ok(parse_braid(b)?),
            _ => bail!("give exactly one of --pd or --braid"),
        }
    }
}

#[derive(Args, Clone)]
struct Output {
    #[arg(long, default_value = "text")]
    format: String,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Battery {
    /// Comma-separated primes for the specialization battery
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES.to_vec())]
    primes: Vec<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a diagram and print its Wirtinger presentation
    Parse(Input),
    /// Print the Alexander polynomial
    Alexander(Input),
    /// Bounds on the Nakanishi index with elementary-ideal certificates
    Nakanishi {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        battery: Battery,
    },
    /// MQ-index bounds for one diagram, or for every record of a dataset
    Mq {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Restrict a dataset run to this knot
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        fibered: Option<bool>,
        #[arg(long)]
        u: Option<u32>,
        #[arg(long)]
        rank: Option<u32>,
        #[arg(long)]
        tunnel: Option<u32>,
        /// Literature upper bound on the MQ index
        #[arg(long)]
        hint: Option<u32>,
        #[command(flatten)]
        battery: Battery,
        #[command(flatten)]
        output: Output,
    },
    /// Connected sums of (2,p) and (2,q) torus knots; without -p/-q sweeps
    /// p, q in {±3, ±5, ±7, ±9}
    Kpq {
        #[arg(short, long, allow_hyphen_values = true)]
        p: Option<i64>,
        #[arg(short, long, allow_hyphen_values = true)]
        q: Option<i64>,
        #[command(flatten)]
        battery: Battery,
    },
    /// Random instances of the commutator splitting identity and of
    /// iterated splitting chains
    LemmaCheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Position of a free-group word in the derived series
    DerivedDepth {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Free group rank; defaults to the largest generator used
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Classify a ten-crossing table and compare with the expected lists
    Section4 {
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        battery: Battery,
        #[command(flatten)]
        output: Output,
    },
    /// Run the pipeline over a dataset and write every report
    Emit {
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        battery: Battery,
        #[command(flatten)]
        output: Output,
    },
}

enum Outcome {
    Ok,
    Mismatch,
}

fn write_out(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn config(battery: &Battery) -> PipelineConfig {
    PipelineConfig { primes: battery.primes.clone(), ..PipelineConfig::default() }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Parse(input) => {
            let d = input.diagram()?;
            let p = wirtinger_presentation(&d);
            println!("crossings: {}", d.crossing_count());
            println!("edges: {}", d.arc_count());
            println!("writhe: {}", d.writhe());
            println!("pd: {d}");
            println!("presentation: {p}");
            println!("determinant: {}", goeritz_determinant(&d)?);
        }
        Command::Alexander(input) => {
            let d = input.diagram()?;
            let a = alexander_matrix(&wirtinger_presentation(&d))?;
            println!("{}", alexander_polynomial(&a));
        }
        Command::Nakanishi { input, battery } => {
            let d = input.diagram()?;
            let a = alexander_matrix(&wirtinger_presentation(&d))?;
            let delta = alexander_polynomial(&a);
            let specs = default_battery(&delta, &battery.primes, DEFAULT_MAX_FACTOR_DEGREE);
            let n = nakanishi_analysis(&a, &specs, Exec::default())?;
            println!("delta: {delta}");
            println!("m: {}", n.bounds);
            println!("reduced presentation: {}x{}", n.reduced.rows(), n.reduced.cols());
            for (k, s) in n.statuses.iter().enumerate() {
                println!("E_{k}: {s}");
            }
        }
        Command::Mq { input, dataset, name, fibered, u, rank, tunnel, hint, battery, output } => {
            let format: Format = output.format.parse()?;
            let reports: Vec<IndexReport> = if let Some(path) = dataset {
                let mut records = load_dataset(&path)?;
                if let Some(n) = &name {
                    records.retain(|r| &r.name == n);
                    if records.is_empty() {
                        bail!("no record named {n} in {}", path.display());
                    }
                }
                let out = run_pipeline(&records, &config(&battery));
                for f in &out.failures {
                    eprintln!("{}: {}", f.name, f.error);
                }
                out.reports
            } else {
                let d = input.diagram()?;
                let a = alexander_matrix(&wirtinger_presentation(&d))?;
                let delta = alexander_polynomial(&a);
                let specs = default_battery(&delta, &battery.primes, DEFAULT_MAX_FACTOR_DEGREE);
                let m = nakanishi_analysis(&a, &specs, Exec::default())?.bounds;
                let facts = KnotFacts {
                    fibered,
                    unknotting: u,
                    rank,
                    tunnel,
                    nontrivial: !delta.is_one() || u.is_some_and(|u| u >= 1),
                    hint_upper: hint,
                };
                let (bounds, rules) = mq_bounds(m, &facts)?;
                vec![IndexReport::new(name.unwrap_or_else(|| "K".into()), delta, m, bounds, fibered, rules)]
            };
            write_out(&output, &emit_reports(&reports, format))?;
        }
        Command::Kpq { p, q, battery } => {
            let pairs: Vec<(i64, i64)> = match (p, q) {
                (Some(p), Some(q)) => vec![(p, q)],
                (None, None) => {
                    let vals = [-9, -7, -5, -3, 3, 5, 7, 9];
                    vals.iter().flat_map(|&p| vals.iter().map(move |&q| (p, q))).collect()
                }
                _ => bail!("give both -p and -q, or neither"),
            };
            let mut ok = true;
            for (p, q) in pairs {
                let r = kpq_classify(p, q, &battery.primes)?;
                let expected = if gcd(p.unsigned_abs(), q.unsigned_abs()) == 1 { 1 } else { 2 };
                let pass = r.m_bounds() == IndexBounds::exact(expected) && r.a_bounds() == IndexBounds::exact(expected);
                ok &= pass;
                println!("K({p},{q}): m = {}, a = {}, expected {expected}{}", r.m_bounds(), r.a_bounds(), if pass { "" } else { "  MISMATCH" });
            }
            if !ok {
                return Ok(Outcome::Mismatch);
            }
        }
        Command::LemmaCheck { seed, iters, levels, sequential } => {
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            let lemma = lemma_check(seed, iters, exec);
            let chain = chain_check(seed, iters, levels, exec);
            println!("{lemma}");
            println!("{chain}");
            if !lemma.all_passed() || chain.passed != iters {
                return Ok(Outcome::Mismatch);
            }
        }
        Command::DerivedDepth { word, depth, rank } => {
            let w: Word = word.parse()?;
            let rank = rank.unwrap_or_else(|| w.max_generator().map_or(1, |g| g + 1));
            println!("{}", derived_depth(&w, rank, depth)?);
        }
        Command::Section4 { dataset, battery, output } => {
            let format: Format = output.format.parse()?;
            let records = load_dataset(&dataset)?;
            let out = run_pipeline(&records, &config(&battery));
            for f in &out.failures {
                eprintln!("{}: {}", f.name, f.error);
            }
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let s = reproduce_section4(&out.reports);
            write_out(&output, &emit_section4(&s, format))?;
            if !s.mismatches.is_empty() || !out.failures.is_empty() {
                return Ok(Outcome::Mismatch);
            }
        }
        Command::Emit { dataset, battery, output } => {
            let format: Format = output.format.parse()?;
            let records = load_dataset(&dataset)?;
            let out = run_pipeline(&records, &config(&battery));
            for f in &out.failures {
                eprintln!("{}: {}", f.name, f.error);
            }
            write_out(&output, &emit_reports(&out.reports, format))?;
            if !out.failures.is_empty() {
                return Ok(Outcome::Mismatch);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli).map_err(|e| anyhow!(e)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
