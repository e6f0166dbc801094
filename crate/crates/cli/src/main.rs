//! `rtmaps`: enumerate forests, apply rooted tree maps, and emit verified
//! MZV relations as JSON lines.
//!
//! Exit codes: 0 when everything verified, 1 on a verification failure,
//! 2 on a usage or parse error.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use rtmaps::acceptance::{self, Options, CRITERIA};
use rtmaps::forest::{enumerate_forests, Forest};
use rtmaps::hopf::{antipode, coproduct};
use rtmaps::mzvnum::PrecisionContext;
use rtmaps::relations::{relation_tasks, RelationBuilder, VerifyMode};
use rtmaps::stuffle::KawashimaSpace;
use rtmaps::treemap::TreeMaps;
use rtmaps::words::Poly;

#[derive(Parser)]
#[command(name = "rtmaps", version, about = "Rooted tree maps and the MZV relations they induce")]
struct Cli {
    /// Working precision of numerical checks, in decimal digits.
    #[arg(long, global = true, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..=2000))]
    digits: u32,
    /// Series truncation depth; defaults to four terms per digit.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    terms: Option<u32>,
    /// A numeric residual below this counts as zero.
    #[arg(long, global = true, default_value_t = 1e-25)]
    tolerance: f64,
    /// Worker threads for `relations` (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all forests with the given number of nodes.
    Enumerate { degree: usize },
    /// Print the coproduct of a forest.
    Coproduct {
        forest: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the antipode of a forest.
    Antipode {
        forest: String,
        #[arg(long)]
        json: bool,
    },
    /// Apply the map of a forest to a word.
    Apply {
        forest: String,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Emit one relation per (forest, admissible word) as JSON lines.
    Relations {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        max_degree: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=12))]
        max_weight: u64,
        #[arg(long, value_enum, default_value_t = Verify::Both)]
        verify: Verify,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Comma-separated criterion numbers; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Exact,
    Numeric,
    Both,
    None,
}

impl From<Verify> for VerifyMode {
    fn from(v: Verify) -> Self {
        match v {
            Verify::Exact => VerifyMode::Exact,
            Verify::Numeric => VerifyMode::Numeric,
            Verify::Both => VerifyMode::Both,
            Verify::None => VerifyMode::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    /// Flip the sign of the `t ⊗ 𝕀` term in the coproduct.
    CoproductSign,
}

enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<rtmaps::Error> for Failure {
    fn from(e: rtmaps::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        // a closed pipe is not worth a complaint
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_forest(s: &str) -> Result<Forest, Failure> {
    s.parse().map_err(|e| Failure::Usage(format!("forest {s:?}: {e}")))
}

fn parse_poly(s: &str) -> Result<Poly, Failure> {
    Poly::parse_word(s).map_err(|e| Failure::Usage(format!("word {s:?}: {e}")))
}

fn json_line<T: serde::Serialize + ?Sized>(out: &mut impl Write, v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string(v).map_err(io::Error::other)?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = match cli.terms {
        Some(t) => PrecisionContext::new(cli.digits, t),
        None => PrecisionContext::for_digits(cli.digits),
    };
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return Err(Failure::Usage("--tolerance must be positive".into()));
    }
    let mut out = BufWriter::new(io::stdout());
    match cli.command {
        Command::Enumerate { degree } => {
            if degree > 12 {
                return Err(Failure::Usage("degree above 12 is not supported".into()));
            }
            let forests = enumerate_forests(degree);
            for f in &forests {
                writeln!(out, "{f}")?;
            }
            let noun = if forests.len() == 1 { "forest" } else { "forests" };
            writeln!(out, "# {} {noun}", forests.len())?;
        }
        Command::Coproduct { forest, json } => {
            let d = coproduct(&parse_forest(&forest)?);
            if json {
                json_line(&mut out, &d.to_triples())?;
            } else {
                writeln!(out, "{d}")?;
            }
        }
        Command::Antipode { forest, json } => {
            let s = antipode(&parse_forest(&forest)?);
            if json {
                json_line(&mut out, &s.to_pairs())?;
            } else {
                writeln!(out, "{s}")?;
            }
        }
        Command::Apply { forest, word, json } => {
            let f = parse_forest(&forest)?;
            let p = parse_poly(&word)?;
            let img = TreeMaps::global().apply(&f, &p);
            if json {
                json_line(&mut out, &img.to_pairs())?;
            } else {
                writeln!(out, "{img}")?;
            }
        }
        Command::Relations { max_degree, max_weight, verify } => {
            let mode = VerifyMode::from(verify);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let failed = pool.install(|| {
                relations(&mut out, max_degree as usize, max_weight as usize, mode, ctx, cli.tolerance)
            })?;
            out.flush()?;
            if failed > 0 {
                eprintln!("{failed} relation(s) failed verification");
                return Err(Failure::Verification);
            }
        }
        Command::Selftest { only, inject_fault } => {
            let mut opts = Options { ctx, tolerance: cli.tolerance, ..Options::default() };
            if let Some(Fault::CoproductSign) = inject_fault {
                opts.coproduct = acceptance::corrupted_coproduct;
            }
            let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=CRITERIA.len() as u8).contains(&i)) {
                return Err(Failure::Usage(format!("no criterion {bad}")));
            }
            let mut all_ok = true;
            for id in ids {
                let r = acceptance::run(id, &opts);
                writeln!(out, "{r}")?;
                out.flush()?;
                all_ok &= r.ok();
            }
            if !all_ok {
                return Err(Failure::Verification);
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Streams records in task order; returns the number that failed.
fn relations(
    out: &mut impl Write,
    max_degree: usize,
    max_weight: usize,
    mode: VerifyMode,
    ctx: PrecisionContext,
    tolerance: f64,
) -> Result<usize, Failure> {
    if mode.exact() {
        // build each space once, up front
        (3..=max_weight + max_degree).into_par_iter().for_each(|n| {
            KawashimaSpace::cached(n);
        });
    }
    let builder = RelationBuilder::new(TreeMaps::global(), mode, ctx, tolerance);
    let tasks = relation_tasks(max_degree, max_weight);
    let mut failed = 0;
    for chunk in tasks.chunks(64) {
        let records: Vec<_> = chunk.par_iter().map(|(f, w)| builder.record(f, w)).collect();
        for r in records {
            let r = r?;
            failed += r.failed() as usize;
            json_line(out, &r)?;
        }
    }
    Ok(failed)
}
