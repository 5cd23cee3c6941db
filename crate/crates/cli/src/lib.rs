//! The `impcirc` command line: run programs, compare and normalize terms,
//! render diagrams and run the law suites.

pub mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use impcirc_core::bimp::{find_regrading, Evaluator, Model, RegradedSide, StandardModel};
use impcirc_core::lang::{self, compile, typecheck, Context, LangError};
use impcirc_core::normalform::factorize;
use impcirc_core::suites::{verify_all, SuiteReport};
use impcirc_core::terms::{parse_term, SexprError};
use impcirc_core::{BimpError, GradedTerm, Rational};

pub const DEFAULT_MAX_WIRES: usize = 14;
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(name = "impcirc", version, about = "Exact semantics for imprecise probabilistic circuits")]
pub struct Cli {
    /// Refuse to build matrices wider than this many wires.
    #[arg(long, env = "IMPCIRC_MAX_WIRES", default_value_t = DEFAULT_MAX_WIRES, global = true)]
    pub max_wires: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a program and print one distribution per branch.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        /// Print probabilities rounded to this many decimals (pretty only).
        #[arg(long)]
        decimals: Option<usize>,
    },
    /// Print the type and grade of a program.
    Typecheck { file: PathBuf },
    /// Compare two terms. `.imp` files are compiled first.
    CheckEq {
        a: PathBuf,
        b: PathBuf,
        /// Look for a grading morphism relating the two.
        #[arg(long)]
        up_to_regrading: bool,
    },
    /// Print a term as knights followed by a plain circuit.
    Normalize { file: PathBuf },
    /// Run the randomized law, axiom and normal form suites.
    VerifyLaws {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random instances per check; 0 skips them.
        #[arg(long, default_value_t = 500)]
        size: usize,
    },
    /// Write a Graphviz diagram of a term or program.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}", path = .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}", path = .path.display())]
    Term {
        path: PathBuf,
        source: SexprError,
    },
    #[error("{path}: {source}", path = .path.display())]
    Program { path: PathBuf, source: LangError },
    #[error(transparent)]
    Eval(#[from] BimpError),
    #[error("{0} suite check(s) failed")]
    Suites(usize),
}

impl CliError {
    /// 1 for diagnostics about the input, 2 for IO.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn is_program(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "imp")
}

fn program(path: &Path) -> Result<lang::Expr, CliError> {
    lang::parse(&read(path)?).map_err(|e| CliError::Program {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

/// Reads an s-expression term, or compiles a closed `.imp` program.
pub fn load_term(path: &Path) -> Result<GradedTerm, CliError> {
    if is_program(path) {
        let e = program(path)?;
        let te = typecheck(&e, &Context::new()).map_err(|e| CliError::Program {
            path: path.to_path_buf(),
            source: e.into(),
        })?;
        return Ok(compile(&te));
    }
    parse_term(&read(path)?).map_err(|source| CliError::Term {
        path: path.to_path_buf(),
        source,
    })
}

/// Exact decimal rounding, half away from zero.
pub fn decimal(p: &Rational, places: usize) -> String {
    let ten = Rational::from_integer(10.into());
    let mut scaled = p.clone();
    for _ in 0..places {
        scaled *= &ten;
    }
    let digits = scaled.round().to_integer().to_string();
    let (sign, digits) = match digits.strip_prefix('-') {
        Some(d) => ("-", d.to_string()),
        None => ("", digits),
    };
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    format!("{sign}{int}.{frac}")
}

pub fn execute(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let ev = Evaluator::default().with_max_wires(cli.max_wires);
    let io = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match &cli.command {
        Command::Run {
            file,
            format,
            decimals,
        } => {
            let e = program(file)?;
            let report = lang::run_with(&e, &ev).map_err(|source| CliError::Program {
                path: file.clone(),
                source,
            })?;
            match (format, decimals) {
                (Format::Json, _) => writeln!(out, "{}", report.to_json_string()),
                (Format::Pretty, None) => write!(out, "{report}"),
                (Format::Pretty, Some(d)) => write!(out, "{}", report.pretty_with(&|p| decimal(p, *d))),
            }
            .map_err(io)
        }
        Command::Typecheck { file } => {
            let e = program(file)?;
            let te = typecheck(&e, &Context::new()).map_err(|e| CliError::Program {
                path: file.clone(),
                source: e.into(),
            })?;
            writeln!(out, "type: {}\ngrade: {}", te.ty, te.grade).map_err(io)
        }
        Command::CheckEq {
            a,
            b,
            up_to_regrading,
        } => {
            let (s, t) = (load_term(a)?, load_term(b)?);
            let verdict = check_eq(&ev, &s, &t, *up_to_regrading)?;
            writeln!(out, "{verdict}").map_err(io)
        }
        Command::Normalize { file } => {
            let f = factorize(&load_term(file)?).map_err(BimpError::from)?;
            let knights = GradedTerm::par(GradedTerm::id(f.arity), GradedTerm::knights(f.grade));
            writeln!(out, "{knights}").map_err(io)?;
            writeln!(out, "{}", f.zero_part).map_err(io)
        }
        Command::VerifyLaws { seed, size } => verify_laws(StandardModel, *seed, *size, out),
        Command::Render { file, out: target } => {
            let term = load_term(file)?;
            term.validate(&impcirc_core::GradedSignature::imp_circ())
                .map_err(BimpError::from)?;
            let dot = render::Diagram::from_term(&term).to_dot();
            fs::write(target, dot).map_err(|source| CliError::Io {
                path: target.clone(),
                source,
            })?;
            writeln!(out, "wrote {}", target.display()).map_err(io)
        }
    }
}

/// Outcome of `check-eq`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// Equal after regrading one side.
    EqualUpTo(impcirc_core::bimp::RegradingWitness),
    NotEqual,
    NotComparable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Equal => f.write_str("equal"),
            Verdict::EqualUpTo(w) => {
                let side = match w.side {
                    RegradedSide::Right => "B",
                    RegradedSide::Left => "A",
                };
                write!(f, "equal up to regrading: {} applied to {side}", w.injection)
            }
            Verdict::NotEqual => f.write_str("not-equal"),
            Verdict::NotComparable => f.write_str("not-comparable"),
        }
    }
}

pub fn check_eq<M: Model>(
    ev: &Evaluator<M>,
    s: &GradedTerm,
    t: &GradedTerm,
    up_to_regrading: bool,
) -> Result<Verdict, CliError> {
    let (fs, ft) = (ev.eval(s)?, ev.eval(t)?);
    let (ps, pt) = (fs.profile(), ft.profile());
    if ps.arity != pt.arity || ps.coarity != pt.coarity {
        return Ok(Verdict::NotComparable);
    }
    if !up_to_regrading {
        return Ok(match (ps.grade == pt.grade, fs == ft) {
            (false, _) => Verdict::NotComparable,
            (true, true) => Verdict::Equal,
            (true, false) => Verdict::NotEqual,
        });
    }
    Ok(match find_regrading(&fs, &ft) {
        Some(w) if w.injection.is_identity() => Verdict::Equal,
        Some(w) => Verdict::EqualUpTo(w),
        None => Verdict::NotEqual,
    })
}

/// Runs every suite under `model` and prints one line per check. Fails if
/// any check does.
pub fn verify_laws<M: Model>(
    model: M,
    seed: u64,
    size: usize,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let reports = verify_all(model, seed, size);
    print_reports(&reports, out).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    let failed = reports
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| !c.ok())
        .count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Suites(failed))
    }
}

fn print_reports(reports: &[SuiteReport], out: &mut impl Write) -> std::io::Result<()> {
    for r in reports {
        writeln!(out, "{}:", r.suite)?;
        for c in &r.checks {
            writeln!(out, "  {c}")?;
            for f in &c.failures {
                writeln!(out, "      {f}")?;
            }
        }
    }
    let (checks, failed) = reports.iter().flat_map(|r| &r.checks).fold((0, 0), |(n, f), c| {
        (n + 1, f + usize::from(!c.ok()))
    });
    writeln!(out, "{} checks, {failed} failed", checks)
}
