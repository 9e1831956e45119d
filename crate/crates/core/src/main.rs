use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use x3sat::corpus;
use x3sat::formula::{evaluate_formula, FormulaState, TotalAssignment};
use x3sat::harness::{self, campaign, compare, shrink, Comparison, DisagreementKind, GenConfig};
use x3sat::io::{self, parse_report, write_report, write_trace, Report, X3fDocument};
use x3sat::oracle::{brute_force, dpll_solve, OracleVerdict};
use x3sat::salum::{scan, OrderingKind, OrderingPolicy, PolarityOrder, SalumOutcome};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_UNVERIFIED: u8 = 30;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "x3sat",
    version,
    about = "Exactly-one-in-three SAT: propagation procedure, oracles and differential harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct PolicyArgs {
    /// lex, revlex, freq or fixed:<id,id,...>
    #[arg(long, default_value = "lex", value_parser = parse_order)]
    order: OrderingKind,
    #[arg(long, default_value = "pos", value_parser = parse_polarity)]
    polarity: PolarityOrder,
}

impl PolicyArgs {
    fn policy(&self) -> Result<OrderingPolicy, CliError> {
        OrderingPolicy::new(self.order.clone(), self.polarity).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Salum,
    Dpll,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "salum")]
        algorithm: Algorithm,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Run the propagation procedure and write its event trace.
    Trace {
        file: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the procedure against the oracle on generated formulas.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        num: u64,
        #[arg(long)]
        vars: u32,
        #[arg(long)]
        clauses: u32,
        #[arg(long, default_value_t = 1)]
        width2: u32,
        #[arg(long, default_value_t = 1)]
        width3: u32,
        #[arg(long)]
        report_dir: Option<PathBuf>,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Minimize a disagreement report in place.
    Shrink { report: PathBuf },
    /// Check a total assignment such as `0,0,1,0,1`.
    Verify { file: PathBuf, assignment: String },
    /// Write the built-in counterexample family as `.x3f` files.
    Corpus {
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_order(s: &str) -> Result<OrderingKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_polarity(s: &str) -> Result<PolarityOrder, String> {
    s.parse().map_err(|e| format!("{e}"))
}

enum CliError {
    Usage(String),
    Parse(String),
    /// A report that no longer reproduces its disagreement.
    Stale(String),
}

impl CliError {
    fn exit(&self) -> ExitCode {
        let (code, msg) = match self {
            CliError::Usage(m) => (EXIT_USAGE, m),
            CliError::Parse(m) => (EXIT_PARSE, m),
            CliError::Stale(m) => (1, m),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<FormulaState, CliError> {
    io::parse(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn lits_line(prefix: &str, lits: impl IntoIterator<Item = x3sat::Literal>) -> String {
    let mut s = prefix.to_string();
    for l in lits {
        s.push_str(&format!(" {l}"));
    }
    s.push_str(" 0");
    s
}

fn solve(file: &Path, algorithm: Algorithm, policy: &PolicyArgs) -> Result<u8, CliError> {
    let f = load(file)?;
    match algorithm {
        Algorithm::Salum => {
            let policy = policy.policy()?;
            println!("c policy {policy}");
            match scan(&f, &policy).outcome {
                SalumOutcome::ClaimedSat { minterm, .. } => {
                    println!("s SATISFIABLE");
                    println!("{}", lits_line("m", minterm.sorted_literals()));
                    match harness::audit_claim(&f, &minterm) {
                        Some(m) => {
                            println!("v {}", m.to_csv());
                            Ok(EXIT_SAT)
                        }
                        None => {
                            println!("c UNVERIFIED: no model extends the claimed minterm");
                            Ok(EXIT_UNVERIFIED)
                        }
                    }
                }
                SalumOutcome::ClaimedUnsat => {
                    println!("s UNSATISFIABLE");
                    match dpll_solve(&f) {
                        OracleVerdict::Unsat => Ok(EXIT_UNSAT),
                        OracleVerdict::Sat(m) => {
                            println!("c UNVERIFIED: oracle model {}", m.to_csv());
                            Ok(EXIT_UNVERIFIED)
                        }
                    }
                }
            }
        }
        Algorithm::Dpll => match dpll_solve(&f) {
            OracleVerdict::Sat(m) => {
                println!("s SATISFIABLE");
                println!("v {}", m.to_csv());
                Ok(EXIT_SAT)
            }
            OracleVerdict::Unsat => {
                println!("s UNSATISFIABLE");
                Ok(EXIT_UNSAT)
            }
        },
        Algorithm::Brute => {
            let models = brute_force(&f).map_err(|e| CliError::Usage(e.to_string()))?;
            if models.is_empty() {
                println!("s UNSATISFIABLE");
                return Ok(EXIT_UNSAT);
            }
            println!("s SATISFIABLE");
            println!("c {} models", models.len());
            for m in models.models() {
                println!("v {}", m.to_csv());
            }
            Ok(EXIT_SAT)
        }
    }
}

fn trace(file: &Path, policy: &PolicyArgs, out: &Path) -> Result<u8, CliError> {
    let f = load(file)?;
    let policy = policy.policy()?;
    let verdict = scan(&f, &policy);
    let header = vec![format!("policy {policy}"), format!("input {}", file.display())];
    write(out, &write_trace(&verdict.trace, &header))?;
    let claim = if verdict.outcome.is_claimed_sat() {
        "SATISFIABLE"
    } else {
        "UNSATISFIABLE"
    };
    println!("c {} events written to {}", verdict.trace.len(), out.display());
    println!("s {claim}");
    Ok(0)
}

fn slug(policy: &OrderingPolicy) -> String {
    policy.to_string().replace(['/', ':'], "-").replace(',', "_")
}

#[allow(clippy::too_many_arguments)]
fn fuzz(
    seed: u64,
    num: u64,
    vars: u32,
    clauses: u32,
    weights: (u32, u32),
    report_dir: Option<&Path>,
    jobs: Option<usize>,
) -> Result<u8, CliError> {
    let configs: Vec<GenConfig> = (0..num)
        .map(|i| GenConfig {
            seed: seed.wrapping_add(i),
            num_vars: vars,
            num_clauses: clauses,
            clause_width_weights: weights,
        })
        .collect();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = pool
        .install(|| campaign(&configs))
        .map_err(|e| CliError::Usage(e.to_string()))?;

    if let Some(dir) = report_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    }
    let mut count = 0usize;
    for (run, d) in report.disagreements() {
        count += 1;
        println!("d {} {} {:?}", run.seed, run.policy, d.kind);
        if let Some(dir) = report_dir {
            let path = dir.join(format!("seed{}-{}.x3r", run.seed, slug(&run.policy)));
            write(&path, &write_report(&Report::from_disagreement(d)))?;
        }
    }
    println!("c runs {}", report.runs.len());
    println!("disagreements {count}");
    Ok(0)
}

fn shrink_report(path: &Path) -> Result<u8, CliError> {
    let text = String::from_utf8(read(path)?)
        .map_err(|_| CliError::Parse(format!("{}: not UTF-8", path.display())))?;
    let report = parse_report(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let formula = report.document.formula.clone();
    let d = match compare(&formula, &report.policy) {
        Comparison::Disagreement(d)
            if d.salum_outcome.is_claimed_sat() == report.salum_sat
                && d.oracle_outcome.is_sat() == report.oracle_sat =>
        {
            d
        }
        _ => {
            return Err(CliError::Stale(format!(
                "{} does not reproduce its recorded disagreement",
                path.display()
            )))
        }
    };
    let small = shrink(&d).map_err(|e| CliError::Stale(e.to_string()))?;
    let mut out = Report::from_disagreement(&small);
    out.document = X3fDocument {
        formula: small.formula.clone(),
        symbols: report.document.symbols,
    };
    write(path, &write_report(&out))?;
    let kind = match small.kind {
        DisagreementKind::FalseUnsat => "false-unsat".to_string(),
        DisagreementKind::FalseSat(r) => format!("false-sat ({r:?})"),
    };
    println!(
        "c {kind}: {} clauses / {} literals -> {} clauses / {} literals",
        formula.clauses().len(),
        formula.literal_count(),
        small.formula.clauses().len(),
        small.formula.literal_count()
    );
    Ok(0)
}

fn verify(file: &Path, csv: &str) -> Result<u8, CliError> {
    let f = load(file)?;
    let values = csv
        .split(',')
        .map(|t| match t.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(CliError::Usage(format!("bad assignment value `{other}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = TotalAssignment::new(values);
    let ok = evaluate_formula(&m, &f).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("s {}", if ok { "VALID" } else { "INVALID" });
    Ok(if ok { 0 } else { 1 })
}

fn write_corpus(dir: &Path) -> Result<u8, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    for entry in corpus::entries() {
        let path = dir.join(format!("{}.x3f", entry.name));
        write(&path, &entry.render())?;
        println!("c wrote {}", path.display());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve {
            file,
            algorithm,
            policy,
        } => solve(file, *algorithm, policy),
        Command::Trace { file, policy, out } => trace(file, policy, out),
        Command::Fuzz {
            seed,
            num,
            vars,
            clauses,
            width2,
            width3,
            report_dir,
            jobs,
        } => fuzz(
            *seed,
            *num,
            *vars,
            *clauses,
            (*width2, *width3),
            report_dir.as_deref(),
            *jobs,
        ),
        Command::Shrink { report } => shrink_report(report),
        Command::Verify { file, assignment } => verify(file, assignment),
        Command::Corpus { out } => write_corpus(out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => e.exit(),
    }
}
