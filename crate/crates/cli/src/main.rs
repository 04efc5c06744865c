//! `tel`: check formulas on lasso words, query cohorts, translate, rewrite
//! and build the undecidability encodings.
//!
//! Exit status: 0 when every result is definite, 2 when any is unknown,
//! 1 on error (including usage errors).

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tel_core::cohort::{ingest_csv, run_query, Bin, IngestOptions, NaiveDate, Positions};
use tel_core::encode::{pcp_encode_with_budget, pcp_witness, BuchiAutomaton, PcpInstance, DEFAULT_NODE_BUDGET};
use tel_core::rewrite::{self, Rewritten, DEFAULT_SIZE_GUARD};
use tel_core::syntax::{formula_to_json, parse_formula, parse_ltl, parse_tcl};
use tel_core::translate::{ltl_to_tel, tcl_to_tel};
use tel_core::{evaluate, Alphabet, Env, EvalConfig, Formula, LassoWord, Mode, Truth3};

#[derive(Parser)]
#[command(name = "tel", version, about = "Temporal Ensemble Logic over discrete time")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a lasso word such as `a;b | c`.
    Check {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        word: String,
        /// Quantifier bound (default ℓ + 2p + 8).
        #[arg(long)]
        bound: Option<u64>,
        /// Treat a quantifier the bound could not settle as settled.
        #[arg(long)]
        assume_complete: bool,
        /// How to read the word; `{…}` sets imply props.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Comma-separated alphabet (default: the word's symbols).
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        position: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check a closed formula on every subject of an event CSV.
    Query {
        #[arg(long)]
        formula: String,
        /// CSV with header `subject_id,time,code`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "none")]
        bin: Bin,
        /// First day of bin 1 (default: each subject's earliest event).
        #[arg(long)]
        origin: Option<NaiveDate>,
        /// Evaluate position 1 only.
        #[arg(long)]
        first_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        assume_complete: bool,
    },
    /// Translate an LTL or TCL formula into TEL.
    Translate {
        #[arg(long, value_enum)]
        from: Source,
        /// Formula text; read from stdin when absent.
        formula: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a formula with the equational axioms.
    Simplify {
        /// Formula text; read from stdin when absent.
        formula: Option<String>,
        #[arg(long, value_enum, default_value_t = Op::Simplify)]
        op: Op,
        /// Alphabet for `negation-free` (default: the formula's atoms).
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<String>>,
        #[arg(long, default_value_t = DEFAULT_SIZE_GUARD)]
        size_guard: usize,
        /// Print `{formula, trace}` as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Büchi automaton (JSON) to its run and acceptance formulas.
    EncodeBuchi {
        automaton: PathBuf,
        #[arg(long, value_enum, default_value_t = Part::Both)]
        part: Part,
        #[arg(long)]
        json: bool,
    },
    /// PCP instance (JSON) to the formula satisfiable iff it has a solution.
    EncodePcp {
        instance: PathBuf,
        /// Largest formula, in nodes, that will be built.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// The layout word of a 1-based index sequence.
    PcpWitness {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Letters,
    Props,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Ltl,
    Tcl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Simplify,
    NormalizeShifts,
    NegationFree,
    Expand,
    UnfoldExists,
    UnfoldForall,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Part {
    Runs,
    Acceptance,
    Both,
}

fn text_or_stdin(text: Option<String>) -> Result<String> {
    match text {
        Some(t) => Ok(t),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s.trim().to_string())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_formula(f: &Formula, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&formula_to_json(f)).expect("values serialize"));
    } else {
        println!("{f}");
    }
}

fn exit_for(definite: bool) -> ExitCode {
    ExitCode::from(if definite { 0 } else { 2 })
}

fn config(bound: Option<u64>, assume_complete: bool) -> EvalConfig {
    let cfg = EvalConfig::default().assuming_complete(assume_complete);
    match bound {
        Some(b) => cfg.with_bound(b),
        None => cfg,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { formula, word, bound, assume_complete, mode, alphabet, position, json } => {
            let mode = mode.map(|m| match m {
                ModeArg::Letters => Mode::Letters,
                ModeArg::Props => Mode::Props,
            });
            let w = match alphabet {
                Some(symbols) => {
                    let mode = mode.unwrap_or(if word.contains('{') { Mode::Props } else { Mode::Letters });
                    LassoWord::parse(&word, &Alphabet::new(symbols, mode)?)?
                }
                None => LassoWord::parse_inferring(&word, mode)?,
            };
            let phi = parse_formula(&formula, None)?;
            let free: Vec<String> = phi.free_vars().into_iter().collect();
            if !free.is_empty() {
                bail!("free variables {free:?}; quantify them");
            }
            let cfg = config(bound, assume_complete);
            let e = evaluate(&w, position, &phi, &Env::new(), &cfg)?;
            if json {
                let witness: serde_json::Map<String, serde_json::Value> =
                    e.witness.iter().map(|(x, k)| (x.clone(), json!(k))).collect();
                let out = json!({
                    "truth": e.truth,
                    "witness": witness,
                    "stats": e.stats,
                    "config": {"bound": cfg.bound_for(&w), "assume_complete": assume_complete},
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("{}", e.truth);
                for (x, k) in &e.witness {
                    println!("{x} = {k}");
                }
            }
            Ok(exit_for(e.truth != Truth3::Unknown))
        }
        Command::Query { formula, data, bin, origin, first_only, format, bound, assume_complete } => {
            let phi = parse_formula(&formula, None)?;
            let cohort = ingest_csv(&data, &IngestOptions { bin, origin })?;
            let positions = if first_only { Positions::FirstOnly } else { Positions::All };
            let report = run_query(&phi, &cohort, &config(bound, assume_complete), positions)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Tsv => print!("{}", report.to_tsv()),
            }
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::Translate { from, formula, json } => {
            let text = text_or_stdin(formula)?;
            let f = match from {
                Source::Ltl => ltl_to_tel(&parse_ltl(&text)?),
                Source::Tcl => tcl_to_tel(&parse_tcl(&text)?),
            };
            print_formula(&f, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Simplify { formula, op, alphabet, size_guard, trace } => {
            let f = parse_formula(&text_or_stdin(formula)?, None)?;
            let out: Rewritten = match op {
                Op::Simplify => rewrite::simplify_traced(&f),
                Op::NormalizeShifts => rewrite::normalize_shifts_traced(&f),
                Op::NegationFree => {
                    let symbols = alphabet.unwrap_or_else(|| f.atoms().into_iter().collect());
                    rewrite::negation_free_traced(&f, &Alphabet::letters(symbols)?)
                }
                Op::Expand => rewrite::expand_constant_modalities_traced(&f, size_guard),
                Op::UnfoldExists => rewrite::unfold_exists_traced(&f)?,
                Op::UnfoldForall => rewrite::unfold_forall_traced(&f)?,
            };
            if trace {
                let doc = json!({"formula": out.formula.to_string(), "trace": out.trace});
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("{}", out.formula);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::EncodeBuchi { automaton, part, json } => {
            let a = BuchiAutomaton::from_json(&read(&automaton)?)?;
            let f = match part {
                Part::Runs => a.encode_runs(),
                Part::Acceptance => a.encode_acceptance(),
                Part::Both => a.encode_runs().and(a.encode_acceptance()),
            };
            print_formula(&f, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::EncodePcp { instance, budget, json } => {
            let inst = PcpInstance::from_json(&read(&instance)?)?;
            print_formula(&pcp_encode_with_budget(&inst, budget)?, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::PcpWitness { instance, indices } => {
            let inst = PcpInstance::from_json(&read(&instance)?)?;
            println!("{}", pcp_witness(&inst, &indices)?.to_literal());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
