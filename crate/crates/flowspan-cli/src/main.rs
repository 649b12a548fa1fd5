use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use flowspan::algorithms::{
    ld0_worst_schedule, ld_schedule, ld_schedules, li_schedule, TieBreakPolicy, DEFAULT_TIE_CAP,
};
use flowspan::caseanalysis::{verify_bound_with, CaseOptions, DEFAULT_CASE_CAP};
use flowspan::oracle::{makespan_ratio_with, solve, OracleOptions, DEFAULT_BUDGET};
use flowspan::par::{with_threads, Parallelism};
use flowspan::search::{hunt, ld0_family, tight_family, write_csv, Heuristic, HuntOptions};
use flowspan::{ld_bound, li_bound, Instance, Rational};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;

/// Exact LD/LI/LD0 schedules, FM optima and LP case analysis.
///
/// Exit codes: 0 success or PASS, 1 bound violated or FAIL, 2 usage or input
/// error, 3 budget or cap exhausted with unresolved work.
#[derive(Parser, Debug)]
#[command(name = "flowspan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a heuristic schedule and print it as JSON.
    Schedule {
        #[arg(long, value_enum)]
        algo: Algo,
        /// Instance file: {"m": M, "p": [..]} with integers or "a/b" strings.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// LD only: list every tie resolution instead of the default one.
        #[arg(long, value_enum)]
        ties: Option<Ties>,
        /// Maximum number of LD schedules listed with --ties enumerate.
        #[arg(long, default_value_t = DEFAULT_TIE_CAP)]
        tie_cap: usize,
    },
    /// Compute the optimal FM makespan and a witness schedule.
    Oracle {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Node budget for the branch and bound.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Worst LD makespan, optimum and their ratio.
    Ratio {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print a named instance family member as instance JSON.
    Family {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        m: usize,
    },
    /// Exhaustively check integer instances against a ratio bound.
    Hunt {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Largest processing time.
        #[arg(long)]
        lmax: u64,
        /// Ratio bound as "a/b"; defaults to (5m-2)/(4m-1), or (5m-4)/(4m-3) for LI.
        #[arg(long)]
        bound: Option<Rational>,
        #[arg(long, value_enum, default_value = "ld-worst")]
        heuristic: HeuristicArg,
        /// Mark instances whose ratio reaches k/(k-1) as NON-MINIMAL.
        #[arg(long)]
        filter_kk1: bool,
        /// Also check instances that are integer multiples of smaller ones.
        #[arg(long)]
        all: bool,
        /// Oracle node budget per instance.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the per-instance CSV report here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Verify a ratio bound by solving every case LP of an (m, k) shape.
    Cases {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: Rational,
        /// Refuse shapes needing more LPs than this.
        #[arg(long, default_value_t = DEFAULT_CASE_CAP)]
        cap: u128,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the JSON bundle of cases, solutions and certificates here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Ld,
    Li,
    Ld0worst,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Ties {
    Enumerate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Tight,
    Ld0,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HeuristicArg {
    LdWorst,
    Li,
    Ld0Worst,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::LdWorst => Heuristic::LdWorst,
            HeuristicArg::Li => Heuristic::Li,
            HeuristicArg::Ld0Worst => Heuristic::Ld0Worst,
        }
    }
}

fn read_instance(path: &Path) -> Result<Arc<Instance>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = Instance::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Arc::new(inst))
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parallelism(jobs: usize) -> Parallelism {
    if jobs == 1 {
        Parallelism::Sequential
    } else {
        Parallelism::available()
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Schedule { algo, input, ties, tie_cap } => {
            let inst = read_instance(&input)?;
            match (algo, ties) {
                (Algo::Ld, Some(Ties::Enumerate)) => {
                    let all = ld_schedules(&inst, TieBreakPolicy::EnumerateAll, tie_cap)?;
                    let worst = all.iter().map(|s| s.makespan()).max().expect("at least one schedule");
                    let schedules: Vec<_> = all.iter().map(|s| s.to_output()).collect();
                    print_json(&json!({
                        "algo": "ld",
                        "ties": "enumerate",
                        "worst_makespan": worst,
                        "schedules": schedules,
                    }))?;
                }
                (_, Some(Ties::Enumerate)) => bail!("--ties enumerate only applies to --algo ld"),
                (algo, None) => {
                    let (name, s) = match algo {
                        Algo::Ld => ("ld", ld_schedule(&inst)),
                        Algo::Li => ("li", li_schedule(&inst)),
                        Algo::Ld0worst => ("ld0worst", ld0_worst_schedule(&inst)),
                    };
                    print_json(&json!({ "algo": name, "schedule": s.to_output(), "makespan": s.makespan() }))?;
                }
            }
            Ok(0)
        }
        Command::Oracle { input, budget } => {
            let inst = read_instance(&input)?;
            let res = solve(&inst, &OracleOptions { budget, ..OracleOptions::default() })?;
            print_json(&json!({
                "makespan": res.makespan,
                "nodes": res.nodes,
                "witness": res.witness.to_output(),
            }))?;
            Ok(0)
        }
        Command::Ratio { input, budget } => {
            let inst = read_instance(&input)?;
            let r = makespan_ratio_with(&inst, &OracleOptions { budget, ..OracleOptions::default() })?;
            print_json(&json!({
                "m": inst.m(),
                "k": inst.k(),
                "worst_ld": r.worst_ld,
                "optimum": r.optimum,
                "ratio": r.ratio,
                "bound": ld_bound(inst.m()),
            }))?;
            Ok(0)
        }
        Command::Family { kind, m } => {
            let inst = match kind {
                Kind::Tight => tight_family(m)?,
                Kind::Ld0 => ld0_family(m)?,
            };
            println!("{}", inst.to_json());
            Ok(0)
        }
        Command::Hunt { m, k, lmax, bound, heuristic, filter_kk1, all, budget, jobs, out } => {
            let heuristic = Heuristic::from(heuristic);
            let bound = bound.unwrap_or_else(|| match heuristic {
                Heuristic::Li => li_bound(m),
                _ => ld_bound(m),
            });
            let opts = HuntOptions {
                heuristic,
                primitive_only: !all,
                filter_kk1,
                budget,
                parallelism: parallelism(jobs),
            };
            let report = with_threads(jobs, || hunt(m, k, lmax, &bound, &opts))?;
            if let Some(path) = out {
                let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_csv(&report.rows, io::BufWriter::new(file))?;
            }
            println!("{}", report.summary());
            if let Some(note) = &report.disclaimer {
                println!("note: {note}");
            }
            if report.has_violation() {
                println!("FAIL");
                Ok(EXIT_FAIL)
            } else if report.unresolved > 0 {
                println!("UNRESOLVED");
                Ok(EXIT_UNRESOLVED)
            } else {
                println!("PASS");
                Ok(0)
            }
        }
        Command::Cases { m, k, bound, cap, jobs, out } => {
            let opts = CaseOptions { cap, parallelism: parallelism(jobs) };
            let report = with_threads(jobs, || verify_bound_with(m, k, &bound, &opts))?;
            if let Some(path) = out {
                let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = io::BufWriter::new(file);
                serde_json::to_writer_pretty(&mut w, &report)?;
                w.flush()?;
            }
            println!("{}", report.summary());
            if report.passed() {
                println!("PASS");
                Ok(0)
            } else {
                println!("FAIL");
                Ok(EXIT_FAIL)
            }
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<flowspan::Error>() {
        Some(
            flowspan::Error::BudgetExceeded { .. }
            | flowspan::Error::TieExplosion { .. }
            | flowspan::Error::CaseCapExceeded { .. },
        ) => EXIT_UNRESOLVED,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
