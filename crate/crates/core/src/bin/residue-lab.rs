use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::json;

use residue_lab::bounds;
use residue_lab::charsum::{char_sum_quadratic_with, quadratic_chi_table, scan_quadratic_windows};
use residue_lab::energy::{additive_energy, multiplicative_energy};
use residue_lab::field::{Class, PrimeContext};
use residue_lab::fpset::FpSet;
use residue_lab::gaps::{consecutive_pair_coverage, gap_stats, s_of_h_with, Wrap};
use residue_lab::harness::writer::render_csv;
use residue_lab::harness::{
    optimality_probe, run_suite, write_reports, HarnessError, Row, SweepConfig, SUITES,
};
use residue_lab::report::BoundCheck;
use residue_lab::shifted::{q_set, weil_check, ShiftPattern};
use residue_lab::structure::search_gap_in_r;

const DEFAULT_CONFIG: &str = "\
primes.lo = 100
primes.hi = 400
suites = weil, gaps, charsum, splitting, packing, rplus, covering, energy, quadrun, pairs
seed = 1
suite.weil.patterns = 50
";

#[derive(Parser)]
#[command(
    name = "residue-lab",
    version,
    about = "Exact experiments on quadratic residues mod p"
)]
struct Cli {
    /// Prime modulus
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Sweep configuration file (key = value lines)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for report files
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads
    #[arg(long, global = true, env = "RESIDUE_LAB_JOBS")]
    jobs: Option<usize>,
    /// Leave the generated_at line out of reports
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residue and non-residue counts; the sets themselves with --sets
    Tables {
        #[arg(long)]
        sets: bool,
    },
    /// Run statistics of R and N and the consecutive-pair coverage
    Gaps,
    /// Packing number S(h) of R, N or Q_{a,a+1}
    Sh {
        #[arg(long)]
        h: u64,
        /// R, N or Q
        #[arg(long, default_value = "R")]
        target: String,
        /// a in Q_{a,a+1}
        #[arg(long, default_value_t = 0)]
        a: u64,
        /// Forbid windows that wrap past p-1
        #[arg(long)]
        linear: bool,
    },
    /// Additive and multiplicative energy of A (and B)
    Energy {
        /// Elements as `1,2,3` or a literal `p=<p>; {1,2,3}`
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
    },
    /// Size of a shifted residue/non-residue intersection against p/2^{k+1} + k√p
    WeilCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        shifts: Vec<u64>,
        /// One of R/N per factor, unshifted factor first; all R by default
        #[arg(long)]
        classes: Option<String>,
    },
    /// Sums of χ((x+a)(x+a+1)) over s+1..s+h; every h when --h is absent
    Charsum {
        #[arg(long, default_value_t = 0)]
        a: u64,
        #[arg(long, default_value_t = 0)]
        s: u64,
        #[arg(long)]
        h: Option<u64>,
    },
    /// Search for a large proper GAP inside R
    Gapsearch {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 100)]
        budget: u64,
    },
    /// |R⁺_{[h]}| at the probe window for each C
    Probe {
        #[arg(long = "c", value_delimiter = ',', default_values_t = vec![1.0, 4.0, 16.0])]
        c: Vec<f64>,
    },
    /// Run the configured sweep and write report.csv, report.json and data/
    Verify {
        /// List the available suites and exit
        #[arg(long)]
        list: bool,
    },
}

enum Failure {
    Config(String),
    Io(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e.exit_code() {
            3 => Failure::Io(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn write_stdout(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(bytes).and_then(|_| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Failure::Io(e.to_string())),
    }
}

macro_rules! out {
    ($($arg:tt)*) => {
        write_stdout(format!("{}\n", format_args!($($arg)*)).as_bytes())?
    };
}

fn config_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn context(cli: &Cli) -> Result<PrimeContext, Failure> {
    let p = cli
        .p
        .ok_or_else(|| config_err("--p is required for this subcommand"))?;
    PrimeContext::new(p).map_err(config_err)
}

fn parse_set(p: u64, text: &str) -> Result<FpSet, Failure> {
    if text.contains('{') {
        let set: FpSet = text.parse().map_err(config_err)?;
        if set.p() != p {
            return Err(config_err(format!(
                "set literal has p = {}, expected {p}",
                set.p()
            )));
        }
        return Ok(set);
    }
    let elems = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(config_err))
        .collect::<Result<Vec<_>, _>>()?;
    FpSet::try_from_elements(p, elems).map_err(config_err)
}

fn timestamp(cli: &Cli) -> Option<String> {
    if cli.no_timestamp {
        return None;
    }
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Some(secs.to_string())
}

/// Prints rows as CSV and writes report files when --out is given.
/// Returns whether every pass-flagged row passed.
fn emit(cli: &Cli, suite: &str, checks: Vec<BoundCheck>) -> Result<bool, Failure> {
    let rows: Vec<Row> = checks
        .into_iter()
        .map(|check| Row {
            suite: suite.to_string(),
            check,
        })
        .collect();
    let ok = rows.iter().all(|r| !r.check.failed());
    let csv = render_csv(&rows, None)?;
    write_stdout(&csv)?;
    if let Some(dir) = &cli.out {
        write_reports(dir, &rows, timestamp(cli).as_deref())?;
    }
    Ok(ok)
}

fn print_json(value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    out!("{text}");
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Tables { sets } => {
            let ctx = context(cli)?;
            out!("p={}", ctx.p());
            out!("residues={}", ctx.residues().len());
            out!("nonresidues={}", ctx.nonresidues().len());
            if *sets {
                out!("R: {}", ctx.residues());
                out!("N: {}", ctx.nonresidues());
            }
            Ok(true)
        }
        Command::Gaps => {
            let ctx = context(cli)?;
            let stats = gap_stats(&ctx);
            let pairs = consecutive_pair_coverage(&ctx).ok();
            print_json(&json!({
                "stats": stats,
                "burgess_rhs": bounds::burgess_rhs(ctx.p()),
                "pair_coverage": pairs,
            }))?;
            Ok(true)
        }
        Command::Sh {
            h,
            target,
            a,
            linear,
        } => {
            let ctx = context(cli)?;
            let q;
            let set = match target.as_str() {
                "R" => ctx.residues(),
                "N" => ctx.nonresidues(),
                "Q" => {
                    q = q_set(&ctx, *a, a + 1, Class::R).map_err(config_err)?;
                    &q
                }
                other => return Err(config_err(format!("unknown target {other:?}"))),
            };
            let wrap = if *linear { Wrap::Linear } else { Wrap::Cyclic };
            let res = s_of_h_with(set, *h, target, wrap).map_err(config_err)?;
            out!("value={}", res.value);
            out!("witness: {}", res.witness);
            Ok(true)
        }
        Command::Energy { a, b } => {
            let ctx = context(cli)?;
            let a = parse_set(ctx.p(), a)?;
            let b = match b {
                Some(b) => parse_set(ctx.p(), b)?,
                None => a.clone(),
            };
            let add = additive_energy(&a, &b).map_err(config_err)?;
            let mul = multiplicative_energy(&a, &b).map_err(config_err)?;
            out!("additive_energy={}", add.value);
            out!("multiplicative_energy={}", mul.value);
            Ok(true)
        }
        Command::WeilCheck { shifts, classes } => {
            let ctx = context(cli)?;
            let classes: Vec<Class> = match classes {
                Some(text) => text
                    .chars()
                    .map(|c| {
                        Class::from_symbol(c).ok_or_else(|| config_err(format!("bad class {c:?}")))
                    })
                    .collect::<Result<_, _>>()?,
                None => vec![Class::R; shifts.len() + 1],
            };
            let pattern =
                ShiftPattern::normalized(ctx.p(), shifts, &classes).map_err(config_err)?;
            emit(cli, "weil", vec![weil_check(&ctx, &pattern)])
        }
        Command::Charsum { a, s, h } => {
            let ctx = context(cli)?;
            let d_star = gap_stats(&ctx).d_star;
            let check = match h {
                Some(h) => {
                    if *h < 1 || *h > ctx.p() {
                        return Err(config_err(format!("h must lie in 1..={}", ctx.p())));
                    }
                    char_sum_quadratic_with(&ctx, d_star, *a, *s, *h)
                }
                None => {
                    let scan = scan_quadratic_windows(&quadratic_chi_table(&ctx), d_star, *a, *s);
                    char_sum_quadratic_with(&ctx, d_star, *a, *s, scan.worst_h)
                        .with_exact_pass(scan.failures == 0)
                }
            };
            emit(cli, "charsum", vec![check])
        }
        Command::Gapsearch { rank, budget } => {
            let ctx = context(cli)?;
            let seed = cli.seed.unwrap_or(0);
            let found = search_gap_in_r(&ctx, *rank, *budget, seed).map_err(config_err)?;
            eprintln!("gap: {}", found.gap);
            emit(cli, "gapsearch", vec![found.check])
        }
        Command::Probe { c } => {
            let ctx = context(cli)?;
            let checks = c
                .iter()
                .map(|&c| optimality_probe(&ctx, c))
                .collect::<Result<Vec<_>, _>>()?;
            emit(cli, "probe", checks)
        }
        Command::Verify { list } => {
            if *list {
                for s in SUITES {
                    out!("{:<10} {}", s.name, s.summary);
                }
                return Ok(true);
            }
            let mut cfg = match &cli.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    SweepConfig::parse(&text)?
                }
                None => SweepConfig::parse(DEFAULT_CONFIG)?,
            };
            if let Some(p) = cli.p {
                cfg.primes = Some((p, p));
            }
            if cli.seed.is_some() {
                cfg.seed = cli.seed;
            }
            if cli.jobs.is_some() {
                cfg.jobs = cli.jobs;
            }
            let out = cli
                .out
                .clone()
                .or_else(|| cfg.out.clone())
                .unwrap_or_else(|| PathBuf::from("reports"));
            let summary = run_suite(&cfg)?;
            write_reports(Path::new(&out), &summary.rows, timestamp(cli).as_deref())?;
            eprintln!(
                "{} rows, {} failed; reports in {}",
                summary.rows.len(),
                summary.failures,
                out.display()
            );
            Ok(summary.failures == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
