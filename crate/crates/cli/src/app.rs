//! Command-line front end. Exit status: 0 resolved, 2 unresolved or
//! exhausted, 1 usage, parse or I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cwb_core::dovetail::{
    race_observed, totalize_mu_observed, BoundedCheck, Builtin, Certifier, CertTick, Entrant, GFunction, MuProblem,
    RaceResult, TotalizedValue,
};
use cwb_core::godel::{beta, beta_enumerate_consistent, beta_fit};
use cwb_core::guard::guarded_run_traced;
use cwb_core::proofs::{check_proof, enumerate_proofs, parse_formula, parse_proof, Enumeration, ProofEnumerator, Verdict};
use cwb_core::universe::{
    classify_property, compare_superposition, measure, measure_series, predict_next, MeasurementResult, Prediction,
    PropertyTable,
};
use cwb_core::{GodelNumber, GuardOptions, MachineSpec, RunOutcome};

use crate::corpus::{corpus, CorpusParams};
use crate::formats::{parse_log, parse_machine, parse_sequence, parse_table, render_log, render_machine};

#[derive(Debug, Parser)]
#[command(name = "cwb", version, about = "Computability workbench")]
pub struct Cli {
    /// Step budget (per machine for `run`, global for races)
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for random corpus generation
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write a per-step or per-tick trace to this file
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one machine under the loop guard
    Run {
        machine: PathBuf,
        /// Input symbols, one per character or whitespace-separated
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        no_guard: bool,
    },
    /// Race machines round-robin
    Race {
        #[arg(required = true)]
        machines: Vec<PathBuf>,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        no_guard: bool,
    },
    /// Totalize μy (g(args, y) = 0) by racing T1, T2 and T3
    Totalize {
        /// Built-in g: abs-diff-square, const-zero, const-one, linear-plus-one
        #[arg(long, required_unless_present = "g_machine", conflicts_with = "g_machine")]
        g: Option<String>,
        /// Machine file computing g on unary input
        #[arg(long)]
        g_machine: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        args: Vec<u64>,
        /// `proof`, `bounded:<cap>` or `none`
        #[arg(long, default_value = "proof")]
        certifier: String,
    },
    /// β-function fitting and evaluation
    Beta {
        #[command(subcommand)]
        op: BetaOp,
    },
    /// Measure a property of a table
    Measure {
        table: PathBuf,
        /// Property name or Gödel number
        #[arg(long)]
        k: String,
        #[arg(long, required_unless_present = "count", conflicts_with = "count")]
        t: Option<u64>,
        /// Measure t = 0..count and print the log
        #[arg(long)]
        count: Option<u64>,
        #[arg(long, default_value = "p")]
        particle: String,
    },
    /// Classify a measurement log
    Classify {
        log: PathBuf,
        #[arg(long, default_value_t = cwb_core::universe::DEFAULT_WINDOW)]
        window: usize,
    },
    /// Merge two logs chronologically
    Superpose {
        a: PathBuf,
        b: PathBuf,
        /// Also print next-value estimates for the merge and both parts
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = 20)]
        bound: u64,
    },
    /// Next-value estimate from consistent β-functions
    Predict {
        log: PathBuf,
        #[arg(long)]
        bound: u64,
    },
    /// Check a proof file
    Check {
        proof: PathBuf,
        /// Formula to prove; defaults to the last line
        #[arg(long)]
        target: Option<String>,
    },
    /// Search for a proof by enumeration
    Prove {
        #[arg(long)]
        target: String,
    },
    /// Generate seeded random machines
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 3)]
        symbols: usize,
        /// Directory to write `R0000.tm`, … into
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum BetaOp {
    /// Fit (b, c) to a sequence file
    Fit { seq: PathBuf },
    /// Evaluate b mod (1 + (i+1)·c)
    Eval {
        #[arg(long)]
        b: GodelNumber,
        #[arg(long)]
        c: GodelNumber,
        #[arg(long)]
        i: u64,
    },
    /// List consistent (b, c) in 0..=B × 1..=B
    Consistent {
        seq: PathBuf,
        #[arg(long)]
        bound: u64,
    },
}

const RESOLVED: i32 = 0;
const UNRESOLVED: i32 = 2;
const FAILURE: i32 = 1;

/// Parses `argv` and runs the command, writing results to `out` and
/// diagnostics to `err`.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { FAILURE } else { RESOLVED };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            FAILURE
        }
    }
}

struct Ctx<'o> {
    out: &'o mut dyn Write,
    format: Format,
}

impl Ctx<'_> {
    /// A one-line result; `tsv` turns its spaces into tabs.
    fn result(&mut self, line: impl std::fmt::Display) -> Result<()> {
        let line = line.to_string();
        let line = match self.format {
            Format::Text => line,
            Format::Tsv => line.replace(' ', "\t"),
        };
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn raw(&mut self, text: &str) -> Result<()> {
        self.out.write_all(text.as_bytes())?;
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_machine(path: &Path) -> Result<MachineSpec> {
    parse_machine(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_table(path: &Path) -> Result<PropertyTable> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let src = read(path)?;
    parse_table(&src, |p: &str| fs::read_to_string(dir.join(p)).map_err(|e| format!("cannot read {p}: {e}")))
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn budget(cli: &Cli, default: u64) -> Result<u64> {
    match cli.budget.unwrap_or(default) {
        0 => bail!("--budget must be at least 1"),
        b => Ok(b),
    }
}

struct TraceFile(Option<fs::File>);

impl TraceFile {
    fn open(path: Option<&Path>) -> Result<Self> {
        Ok(TraceFile(match path {
            Some(p) => Some(fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
            None => None,
        }))
    }

    fn line(&mut self, l: impl std::fmt::Display) {
        if let Some(f) = self.0.as_mut() {
            let _ = writeln!(f, "{l}");
        }
    }
}

/// A certifier that never produces a certificate.
struct Never(u64);

impl Certifier for Never {
    fn tick(&mut self) -> CertTick {
        self.0 += 1;
        CertTick::Pending
    }

    fn ticks(&self) -> u64 {
        self.0
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mut ctx = Ctx { out, format: cli.format };
    match &cli.command {
        Command::Run { machine, input, no_guard } => {
            let spec = load_machine(machine)?;
            let input = spec.parse_input(input)?;
            let b = budget(cli, 10_000)?;
            let options = if *no_guard { GuardOptions::unguarded(b) } else { GuardOptions::guarded(b) };
            let mut trace = TraceFile::open(cli.trace.as_deref())?;
            let outcome = guarded_run_traced(&spec, &input, options, |l| trace.line(l))?;
            ctx.result(&outcome)?;
            Ok(if matches!(outcome, RunOutcome::BudgetExhausted { .. }) { UNRESOLVED } else { RESOLVED })
        }
        Command::Race { machines, input, no_guard } => {
            let specs = machines.iter().map(|p| load_machine(p)).collect::<Result<Vec<_>>>()?;
            let b = budget(cli, 10_000)?;
            let options = if *no_guard { GuardOptions::unguarded(u64::MAX) } else { GuardOptions::guarded(u64::MAX) };
            let entrants = specs
                .iter()
                .map(|s| Ok(Entrant::machine(s, &s.parse_input(input)?, options)?))
                .collect::<Result<Vec<_>>>()?;
            let mut trace = TraceFile::open(cli.trace.as_deref())?;
            let result = race_observed(entrants, b, |e| trace.line(e))?;
            ctx.result(&result)?;
            Ok(if matches!(result, RaceResult::AllExhausted { .. }) { UNRESOLVED } else { RESOLVED })
        }
        Command::Totalize { g, g_machine, args, certifier } => {
            let b = budget(cli, 100_000)?;
            let (problem, builtin) = match (g, g_machine) {
                (Some(id), _) => {
                    let builtin = Builtin::from_id(id).ok_or_else(|| anyhow!("unknown g `{id}`"))?;
                    (builtin.problem(args.clone(), b)?, Some(builtin))
                }
                (None, Some(path)) => {
                    let g = GFunction::Machine { spec: Arc::new(load_machine(path)?), arity: None };
                    (MuProblem::new(g, args.clone(), b)?, None)
                }
                (None, None) => bail!("one of --g or --g-machine is required"),
            };
            let cert: Box<dyn Certifier> = match (certifier.as_str(), builtin) {
                ("proof", Some(builtin)) => Box::new(ProofEnumerator::new(builtin.target(&problem.args))),
                ("proof", None) => bail!("--certifier proof needs a built-in g; use bounded:<cap> or none"),
                ("none", _) => Box::new(Never(0)),
                (other, _) => {
                    let cap = other
                        .strip_prefix("bounded:")
                        .and_then(|c| c.parse().ok())
                        .ok_or_else(|| anyhow!("unknown certifier `{other}`"))?;
                    Box::new(BoundedCheck::new(problem.clone(), cap))
                }
            };
            let mut trace = TraceFile::open(cli.trace.as_deref())?;
            let value = totalize_mu_observed(&problem, cert, b, |e| trace.line(e))?;
            ctx.result(value)?;
            Ok(if matches!(value, TotalizedValue::Unresolved { .. }) { UNRESOLVED } else { RESOLVED })
        }
        Command::Beta { op } => {
            match op {
                BetaOp::Fit { seq } => {
                    let values = parse_sequence(&read(seq)?).map_err(|e| anyhow!("{}: {e}", seq.display()))?;
                    ctx.result(beta_fit(&values)?)?;
                }
                BetaOp::Eval { b, c, i } => ctx.result(beta(&b.0, &c.0, *i))?,
                BetaOp::Consistent { seq, bound } => {
                    let values = parse_sequence(&read(seq)?).map_err(|e| anyhow!("{}: {e}", seq.display()))?;
                    for (b, c) in beta_enumerate_consistent(&values, *bound) {
                        ctx.raw(&format!("{b}\t{c}\n"))?;
                    }
                }
            }
            Ok(RESOLVED)
        }
        Command::Measure { table, k, t, count, particle } => {
            let table = load_table(table)?;
            let code = if k.bytes().all(|c| c.is_ascii_digit()) { k.parse::<GodelNumber>()? } else { table.code(k)? };
            let b = budget(cli, 10_000)?;
            if let Some(count) = count {
                let log = measure_series(&table, particle, &code, *count, b)?;
                ctx.raw(&render_log(&log))?;
                return Ok(RESOLVED);
            }
            let r = measure(&table, &code, t.expect("clap requires --t"), b)?;
            ctx.result(&r)?;
            Ok(if matches!(r, MeasurementResult::Unresolved { .. }) { UNRESOLVED } else { RESOLVED })
        }
        Command::Classify { log, window } => {
            let log = parse_log(&read(log)?).map_err(|e| anyhow!("{}: {e}", log.display()))?;
            ctx.result(classify_property(&log, *window)?)?;
            Ok(RESOLVED)
        }
        Command::Superpose { a, b, compare, bound } => {
            let la = parse_log(&read(a)?).map_err(|e| anyhow!("{}: {e}", a.display()))?;
            let lb = parse_log(&read(b)?).map_err(|e| anyhow!("{}: {e}", b.display()))?;
            let report = compare_superposition(&la, &lb, *bound)?;
            ctx.raw(&render_log(&report.merged))?;
            if *compare {
                for (label, p) in [("merged", &report.merged_prediction), ("first", &report.first), ("second", &report.second)] {
                    ctx.raw(&format!("# {label} consistent={}\n", p.consistent))?;
                    write_prediction(&mut ctx, p)?;
                }
            }
            Ok(RESOLVED)
        }
        Command::Predict { log, bound } => {
            let log = parse_log(&read(log)?).map_err(|e| anyhow!("{}: {e}", log.display()))?;
            if log.is_empty() {
                bail!("cannot predict from an empty log");
            }
            let p = predict_next(&log, *bound);
            write_prediction(&mut ctx, &p)?;
            Ok(if p.consistent == 0 { UNRESOLVED } else { RESOLVED })
        }
        Command::Check { proof, target } => {
            let p = parse_proof(&read(proof)?).map_err(|e| anyhow!("{}: {e}", proof.display()))?;
            let target = match target {
                Some(t) => parse_formula(t).map_err(|e| anyhow!("--target: {e}"))?,
                None => p.conclusion().cloned().ok_or_else(|| anyhow!("{}: proof has no lines", proof.display()))?,
            };
            let v = check_proof(&p, &target);
            ctx.result(&v)?;
            Ok(if v == Verdict::Valid { RESOLVED } else { UNRESOLVED })
        }
        Command::Prove { target } => {
            let target = parse_formula(target).map_err(|e| anyhow!("--target: {e}"))?;
            match enumerate_proofs(budget(cli, 10_000)?, &target) {
                Enumeration::Found { proof, ticks } => {
                    ctx.result(format!("FOUND ticks={ticks}"))?;
                    ctx.raw(&proof.to_string())?;
                    Ok(RESOLVED)
                }
                Enumeration::Exhausted { ticks } => {
                    ctx.result(format!("EXHAUSTED ticks={ticks}"))?;
                    Ok(UNRESOLVED)
                }
            }
        }
        Command::Corpus { count, states, symbols, out } => {
            let params = CorpusParams { seed: cli.seed.unwrap_or(0), count: *count, max_states: *states, max_symbols: *symbols };
            let machines = corpus(params);
            match out {
                Some(dir) => {
                    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
                    for m in &machines {
                        let name = format!("{}.tm", m.name());
                        fs::write(dir.join(&name), render_machine(m)).with_context(|| format!("cannot write {name}"))?;
                        ctx.raw(&format!("{name}\n"))?;
                    }
                }
                None => {
                    for (i, m) in machines.iter().enumerate() {
                        if i > 0 {
                            ctx.raw("\n")?;
                        }
                        ctx.raw(&render_machine(m))?;
                    }
                }
            }
            Ok(RESOLVED)
        }
    }
}

fn write_prediction(ctx: &mut Ctx<'_>, p: &Prediction) -> Result<()> {
    for e in p.ranked() {
        ctx.raw(&format!("{}\t{}\t{}\n", e.value, e.count, e.probability))?;
    }
    Ok(())
}
