//! `ksub`: command-line front end for exact k-submodular verification,
//! minimization and min-max certificates.
//!
//! Exit codes: 0 success, 1 the checked property is false (a witness is
//! printed), 2 usage, input or parse error, 3 enumeration budget exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ksub::domain::DEFAULT_CAP;
use ksub::format::{parse_instance, write_sum, write_table};
use ksub::function::{
    brute_force_min, check_k_modular, check_k_submodular, check_k_supermodular, check_pairwise,
};
use ksub::generate::{gen_random_table, gen_rejection, gen_unary_in, DEFAULT_RANGE};
use ksub::minmax::{max_dual, max_dual_integer, verify_minmax, MinMaxOutcome};
use ksub::multimatroid::{gen_free_rank, rank_is_k_submodular};
use ksub::polyhedron::verify_ft;
use ksub::{Error, Function, Rational, Scalar, Verdict, ViolationWitness};

#[derive(Parser)]
#[command(name = "ksub", version, about = "Exact k-submodular verification and min-max certificates")]
struct Cli {
    /// Largest number of labelings or labeling pairs any command may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    budget: u128,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive k-submodularity, k-supermodularity, k-modularity and
    /// pairwise checks.
    Check {
        /// Instance file (`ksub 1` or `ksum 1`), or `-` for stdin.
        file: PathBuf,
        /// Which property decides the exit code.
        #[arg(long, value_enum, default_value_t = Mode::Sub)]
        mode: Mode,
    },
    /// Exhaustive minimum and first minimizer.
    Minimize {
        file: PathBuf,
        /// Also certify the minimum with a dual vector.
        #[arg(long)]
        certificate: bool,
    },
    /// Optimal signed dual vector.
    Dual {
        file: PathBuf,
        /// Restrict to integral vectors (integer instances only).
        #[arg(long)]
        integer: bool,
    },
    /// Cross-check the minimum against the epigraph LP over the polyhedron
    /// without pair rows.
    VerifyFt { file: PathBuf },
    /// Check the k-matroid rank axioms and their k-submodularity consequence.
    Multimatroid { file: PathBuf },
    /// Write a seeded instance to stdout or `--output`.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Values are drawn from `[-range, range]`.
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: i64,
        /// Rank cap for `--kind rank`; unlimited when omitted.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sub,
    Super,
    Modular,
    Pairwise,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Sum of k-submodular unary terms, in term format.
    Unary,
    /// Rejection-sampled k-submodular table.
    Random,
    /// Uniform table, usually not k-submodular.
    Uniform,
    /// Free rank function `min(|supp T|, cap)`.
    Rank,
}

/// Failures that end the command with a nonzero code.
enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(message)) => {
            eprintln!("error: {message}; raise --budget to allow it");
            ExitCode::from(3)
        }
    }
}

fn load(path: &PathBuf, budget: u128) -> Result<Function, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        text
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    let f: Function = parse_instance(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(f.with_cap(budget))
}

/// Shifts `f` so that `f(0) = 0`, warning when that changes anything.
fn normalized(f: Function) -> Function {
    if f.is_normalized() {
        return f;
    }
    eprintln!(
        "warning: f(0) = {}; reporting values for f - f(0)",
        f.value_at_zero()
    );
    f.normalize()
}

fn print_verdict(out: &mut impl Write, name: &str, verdict: &Verdict<ViolationWitness<Rational>>) -> io::Result<()> {
    match verdict {
        Verdict::Holds => writeln!(out, "{name}: holds"),
        Verdict::Fails(w) => writeln!(out, "{name}: fails {w}"),
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    let budget = cli.budget;
    match cli.command {
        Command::Check { file, mode } => {
            let f = load(&file, budget)?;
            let verdicts = [
                (Mode::Sub, "k-submodular", check_k_submodular(&f)?),
                (Mode::Super, "k-supermodular", check_k_supermodular(&f)?),
                (Mode::Modular, "k-modular", check_k_modular(&f)?),
                (Mode::Pairwise, "pairwise", check_pairwise(&f)?),
            ];
            let mut decided = true;
            for (m, name, verdict) in &verdicts {
                print_verdict(out, name, verdict)?;
                if *m == mode {
                    decided = verdict.holds();
                }
            }
            Ok(decided)
        }
        Command::Minimize { file, certificate } => {
            let f = load(&file, budget)?;
            if !certificate {
                let (value, argmin) = brute_force_min(&f)?;
                writeln!(out, "min {value}")?;
                writeln!(out, "argmin {argmin}")?;
                return Ok(true);
            }
            match verify_minmax(&normalized(f))? {
                MinMaxOutcome::Certified {
                    certificate,
                    brute_force_argmin,
                } => {
                    writeln!(out, "min {}", certificate.value)?;
                    writeln!(out, "argmin {brute_force_argmin}")?;
                    write!(out, "{certificate}")?;
                    Ok(true)
                }
                MinMaxOutcome::Discrepancy(d) => {
                    write!(out, "{d}")?;
                    Ok(false)
                }
            }
        }
        Command::Dual { file, integer } => {
            let f = normalized(load(&file, budget)?);
            let optimum = if integer { max_dual_integer(&f)? } else { max_dual(&f)? };
            match optimum {
                Some(d) => {
                    writeln!(out, "dual {}", d.objective)?;
                    writeln!(out, "{}", d.vector)?;
                    Ok(true)
                }
                None => {
                    writeln!(out, "dual infeasible")?;
                    Ok(false)
                }
            }
        }
        Command::VerifyFt { file } => {
            let report = verify_ft(&normalized(load(&file, budget)?))?;
            write!(out, "{report}")?;
            Ok(report.holds())
        }
        Command::Multimatroid { file } => {
            let r = load(&file, budget)?;
            if let Some(v) = r.table()?.iter().find(|v| !v.is_integral()) {
                return Err(Failure::Usage(format!("rank value {v} is not an integer")));
            }
            let report = rank_is_k_submodular(&r)?;
            write!(out, "{report}")?;
            Ok(report.axioms.holds())
        }
        Command::Generate {
            kind,
            k,
            n,
            seed,
            range,
            cap,
            output,
        } => {
            let text = match kind {
                Kind::Unary => write_sum(&gen_unary_in::<Rational>(k, n, range, seed)?)?,
                Kind::Random => {
                    write_table(&gen_rejection::<Rational>(k, n, range, seed)?.function.with_cap(budget))?
                }
                Kind::Uniform => {
                    write_table(&gen_random_table::<Rational>(k, n, range, seed)?.with_cap(budget))?
                }
                Kind::Rank => write_table(
                    &gen_free_rank::<Rational>(k, n, cap)?
                        .into_function()
                        .with_cap(budget),
                )?,
            };
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(true)
        }
    }
}
