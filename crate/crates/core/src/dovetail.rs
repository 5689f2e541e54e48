//! Fair races of searchers and the μ-operator totalizer.
//!
//! A race steps its entrants round-robin, one tick each per round, in entrant
//! order. The first entrant to halt or self-terminate in a way it accepts
//! wins; an entrant that finishes in any other way is retired and skipped
//! from then on. Every tick costs one global step.
//!
//! [`totalize_mu`] races three searchers for `μy (g(args, y) = 0)`:
//!
//! * `T1` looks for the least `y` with `g(args, y) = 0` and wins by halting.
//! * `T2` looks for a `y` with `g(args, y) ≠ 0`. Its halting is not a
//!   signal; it wins only by self-terminating, which happens when the
//!   machine computing `g` loops detectably.
//! * `T3` drives a [`Certifier`] for `∀y H(args, y)`, where `H` represents
//!   `g(args, y) = 0`, and wins when a certificate is found.
//!
//! `T1` winning gives [`TotalizedValue::Defined`]; `T2` or `T3` winning
//! assigns the default value 0 with its provenance in
//! [`TotalizedValue::DefaultTotal`]; running out of global budget gives
//! [`TotalizedValue::Unresolved`].

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::guard::{guarded_run, GuardOptions, GuardedRun};
use crate::proofs::{Formula, ProofEnumerator, Term, Var};
use crate::tm::{MachineSpec, RunOutcome, Symbol, TmError};

/// Value assigned when a tuple is totalized by default.
pub const DEFAULT_VALUE: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tick {
    Running,
    Halted { output: Option<u64> },
    SelfTerminated { cycle_entry_step: u64, period: u64 },
    Exhausted,
}

/// Anything the scheduler can advance one unit at a time. After a tick other
/// than [`Tick::Running`] the searcher is not ticked again.
pub trait Searcher {
    fn tick(&mut self) -> Tick;
    /// Units of work done so far, in the searcher's own measure.
    fn steps(&self) -> u64;
}

/// A guarded machine run as a searcher; one tick is one machine step.
pub struct MachineSearcher<'a> {
    run: GuardedRun<'a>,
}

impl<'a> MachineSearcher<'a> {
    pub fn new(spec: &'a MachineSpec, input: &[Symbol], options: GuardOptions) -> Result<Self, TmError> {
        Ok(MachineSearcher { run: GuardedRun::new(spec, input, options)? })
    }
}

impl Searcher for MachineSearcher<'_> {
    fn tick(&mut self) -> Tick {
        let spec = self.run.spec();
        match self.run.turn() {
            None => Tick::Running,
            Some(RunOutcome::Halted { last, .. }) => Tick::Halted { output: spec.unary_output(last) },
            Some(&RunOutcome::SelfTerminated { cycle_entry_step, period }) => {
                Tick::SelfTerminated { cycle_entry_step, period }
            }
            Some(RunOutcome::BudgetExhausted { .. }) => Tick::Exhausted,
        }
    }

    fn steps(&self) -> u64 {
        self.run.steps()
    }
}

/// Which finishes make an entrant the winner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Accepts {
    pub halt: bool,
    pub self_terminate: bool,
}

impl Accepts {
    pub const BOTH: Accepts = Accepts { halt: true, self_terminate: true };
    pub const HALT: Accepts = Accepts { halt: true, self_terminate: false };
    pub const SELF_TERMINATE: Accepts = Accepts { halt: false, self_terminate: true };
}

pub struct Entrant<'a> {
    pub searcher: Box<dyn Searcher + 'a>,
    pub accepts: Accepts,
}

impl<'a> Entrant<'a> {
    pub fn new(searcher: impl Searcher + 'a, accepts: Accepts) -> Self {
        Entrant { searcher: Box::new(searcher), accepts }
    }

    pub fn machine(spec: &'a MachineSpec, input: &[Symbol], options: GuardOptions) -> Result<Self, TmError> {
        Ok(Entrant::new(MachineSearcher::new(spec, input, options)?, Accepts::BOTH))
    }
}

/// Per-entrant state; the count is ticks received.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running(u64),
    Halted(u64),
    SelfTerminated(u64),
    Exhausted(u64),
}

impl Status {
    pub fn ticks(self) -> u64 {
        match self {
            Status::Running(n) | Status::Halted(n) | Status::SelfTerminated(n) | Status::Exhausted(n) => n,
        }
    }

    pub fn is_running(self) -> bool {
        matches!(self, Status::Running(_))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Running(n) => write!(f, "running:{n}"),
            Status::Halted(n) => write!(f, "halted:{n}"),
            Status::SelfTerminated(n) => write!(f, "self-terminated:{n}"),
            Status::Exhausted(n) => write!(f, "exhausted:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Halted,
    SelfTerminated { cycle_entry_step: u64, period: u64 },
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Halted => f.write_str("HALTED"),
            Resolution::SelfTerminated { .. } => f.write_str("SELF-TERMINATED"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaceOutcome {
    pub winner: usize,
    pub resolution: Resolution,
    /// Unary reading of the winner's tape, for halted winners.
    pub output: Option<u64>,
    pub winner_local_steps: u64,
    pub global_steps: u64,
    pub standings: Vec<Status>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RaceResult {
    Resolved(RaceOutcome),
    AllExhausted { global_steps: u64, standings: Vec<Status> },
}

impl fmt::Display for RaceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RaceResult::Resolved(o) => write!(
                f,
                "WINNER machine={} resolution={} local_steps={} global_steps={}",
                o.winner, o.resolution, o.winner_local_steps, o.global_steps
            ),
            RaceResult::AllExhausted { global_steps, .. } => write!(f, "ALL-EXHAUSTED global_steps={global_steps}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DovetailError {
    #[error("a race needs at least one entrant")]
    EmptyRace,
    #[error("g takes {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Machine(#[from] TmError),
}

/// One scheduled tick: `round<TAB>machine<TAB>status`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RaceEvent {
    pub round: u64,
    pub machine: usize,
    pub status: Status,
}

impl fmt::Display for RaceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.round, self.machine, self.status)
    }
}

pub fn race(entrants: Vec<Entrant<'_>>, global_budget: u64) -> Result<RaceResult, DovetailError> {
    race_observed(entrants, global_budget, |_| {})
}

/// [`race`], reporting every tick to `observer`.
pub fn race_observed(
    mut entrants: Vec<Entrant<'_>>,
    global_budget: u64,
    mut observer: impl FnMut(&RaceEvent),
) -> Result<RaceResult, DovetailError> {
    if entrants.is_empty() {
        return Err(DovetailError::EmptyRace);
    }
    let mut standings = alloc::vec![Status::Running(0); entrants.len()];
    let mut global = 0u64;
    let mut round = 0u64;
    while global < global_budget && standings.iter().any(|s| s.is_running()) {
        for (machine, e) in entrants.iter_mut().enumerate() {
            if global >= global_budget {
                break;
            }
            let Status::Running(n) = standings[machine] else { continue };
            global += 1;
            let n = n + 1;
            let tick = e.searcher.tick();
            let status = match tick {
                Tick::Running => Status::Running(n),
                Tick::Halted { .. } => Status::Halted(n),
                Tick::SelfTerminated { .. } => Status::SelfTerminated(n),
                Tick::Exhausted => Status::Exhausted(n),
            };
            standings[machine] = status;
            observer(&RaceEvent { round, machine, status });
            let won = match tick {
                Tick::Halted { output } if e.accepts.halt => Some((Resolution::Halted, output)),
                Tick::SelfTerminated { cycle_entry_step, period } if e.accepts.self_terminate => {
                    Some((Resolution::SelfTerminated { cycle_entry_step, period }, None))
                }
                _ => None,
            };
            if let Some((resolution, output)) = won {
                return Ok(RaceResult::Resolved(RaceOutcome {
                    winner: machine,
                    resolution,
                    output,
                    winner_local_steps: e.searcher.steps(),
                    global_steps: global,
                    standings,
                }));
            }
        }
        round += 1;
    }
    Ok(RaceResult::AllExhausted { global_steps: global, standings })
}

pub type ClosedG = Arc<dyn Fn(&[u64]) -> u64 + Send + Sync>;

/// The function under the μ-operator, applied to `(x_1, …, x_n, y)`.
#[derive(Clone)]
pub enum GFunction {
    /// `arity` counts the `x` arguments; `None` accepts any number.
    Closed { arity: Option<usize>, eval: ClosedG },
    /// Reads the tuple in unary and leaves `g` in unary.
    Machine { spec: Arc<MachineSpec>, arity: Option<usize> },
}

impl GFunction {
    pub fn closed(arity: Option<usize>, eval: impl Fn(&[u64]) -> u64 + Send + Sync + 'static) -> Self {
        GFunction::Closed { arity, eval: Arc::new(eval) }
    }

    pub fn arity(&self) -> Option<usize> {
        match self {
            GFunction::Closed { arity, .. } | GFunction::Machine { arity, .. } => *arity,
        }
    }
}

impl fmt::Debug for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFunction::Closed { arity, .. } => f.debug_struct("Closed").field("arity", arity).finish_non_exhaustive(),
            GFunction::Machine { spec, arity } => {
                f.debug_struct("Machine").field("spec", &spec.name()).field("arity", arity).finish()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct MuProblem {
    pub g: GFunction,
    pub args: Vec<u64>,
    /// Cap on each searcher's own steps.
    pub search_budget: u64,
}

impl MuProblem {
    pub fn new(g: GFunction, args: Vec<u64>, search_budget: u64) -> Result<Self, DovetailError> {
        if let Some(expected) = g.arity().filter(|&a| a != args.len()) {
            return Err(DovetailError::ArityMismatch { expected, got: args.len() });
        }
        Ok(MuProblem { g, args, search_budget })
    }

    fn tuple(&self, y: u64) -> Vec<u64> {
        let mut t = self.args.clone();
        t.push(y);
        t
    }
}

/// Scans `y = 0, 1, …` for the first value whose zero-ness is `want_zero`.
/// A closed `g` costs one step per evaluation; a machine `g` costs one step
/// per machine step, and a detected loop inside it self-terminates the
/// searcher. Malformed machine output exhausts it.
pub struct MuSearcher<'a> {
    problem: &'a MuProblem,
    want_zero: bool,
    y: u64,
    steps: u64,
    inner: Option<GuardedRun<'a>>,
}

impl<'a> MuSearcher<'a> {
    fn new(problem: &'a MuProblem, want_zero: bool) -> Self {
        MuSearcher { problem, want_zero, y: 0, steps: 0, inner: None }
    }

    fn found(&mut self, value: u64) -> Tick {
        if (value == 0) == self.want_zero {
            Tick::Halted { output: Some(self.y) }
        } else {
            self.y += 1;
            Tick::Running
        }
    }
}

impl Searcher for MuSearcher<'_> {
    fn tick(&mut self) -> Tick {
        if self.steps >= self.problem.search_budget {
            return Tick::Exhausted;
        }
        self.steps += 1;
        match &self.problem.g {
            GFunction::Closed { eval, .. } => {
                let v = eval(&self.problem.tuple(self.y));
                self.found(v)
            }
            GFunction::Machine { spec, .. } => {
                if self.inner.is_none() {
                    let input = match spec.unary_input(&self.problem.tuple(self.y)) {
                        Ok(i) => i,
                        Err(_) => return Tick::Exhausted,
                    };
                    match GuardedRun::new(spec, &input, GuardOptions::guarded(u64::MAX)) {
                        Ok(run) => self.inner = Some(run),
                        Err(_) => return Tick::Exhausted,
                    }
                }
                let run = self.inner.as_mut().expect("inner run present");
                let tick = match run.turn() {
                    None => return Tick::Running,
                    Some(RunOutcome::Halted { last, .. }) => match spec.unary_output(last) {
                        Some(v) => Ok(v),
                        None => Err(Tick::Exhausted),
                    },
                    Some(&RunOutcome::SelfTerminated { cycle_entry_step, period }) => {
                        Err(Tick::SelfTerminated { cycle_entry_step, period })
                    }
                    Some(RunOutcome::BudgetExhausted { .. }) => Err(Tick::Exhausted),
                };
                self.inner = None;
                match tick {
                    Ok(v) => self.found(v),
                    Err(t) => t,
                }
            }
        }
    }

    fn steps(&self) -> u64 {
        self.steps
    }
}

/// Halts with the least `y` such that `g(args, y) = 0`.
pub fn build_t1(p: &MuProblem) -> MuSearcher<'_> {
    MuSearcher::new(p, true)
}

/// Halts with the least `y` such that `g(args, y) ≠ 0`.
pub fn build_t2(p: &MuProblem) -> MuSearcher<'_> {
    MuSearcher::new(p, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertTick {
    Pending,
    Found,
    Exhausted,
}

/// Incremental search for a certificate that `g(args, y) = 0` for every `y`.
pub trait Certifier {
    fn tick(&mut self) -> CertTick;
    fn ticks(&self) -> u64;
}

impl Certifier for ProofEnumerator {
    fn tick(&mut self) -> CertTick {
        match ProofEnumerator::tick(self) {
            Some(_) => CertTick::Found,
            None => CertTick::Pending,
        }
    }

    fn ticks(&self) -> u64 {
        ProofEnumerator::ticks(self)
    }
}

/// Checks `g(args, y) = 0` for `y < cap`, one instance per tick, and reports
/// a certificate once all pass. A machine `g` is run to completion within the
/// problem's search budget on each tick.
pub struct BoundedCheck {
    problem: MuProblem,
    cap: u64,
    next: u64,
}

impl BoundedCheck {
    pub fn new(problem: MuProblem, cap: u64) -> Self {
        BoundedCheck { problem, cap, next: 0 }
    }

    fn value(&self, y: u64) -> Option<u64> {
        let t = self.problem.tuple(y);
        match &self.problem.g {
            GFunction::Closed { eval, .. } => Some(eval(&t)),
            GFunction::Machine { spec, .. } => {
                let input = spec.unary_input(&t).ok()?;
                match guarded_run(spec, &input, self.problem.search_budget).ok()? {
                    RunOutcome::Halted { last, .. } => spec.unary_output(&last),
                    _ => None,
                }
            }
        }
    }
}

impl Certifier for BoundedCheck {
    fn tick(&mut self) -> CertTick {
        if self.next >= self.cap {
            return CertTick::Found;
        }
        let y = self.next;
        self.next += 1;
        match self.value(y) {
            Some(0) if self.next == self.cap => CertTick::Found,
            Some(0) => CertTick::Pending,
            _ => CertTick::Exhausted,
        }
    }

    fn ticks(&self) -> u64 {
        self.next
    }
}

/// Searcher driving a certifier; one step is one certifier tick.
pub struct CertifierSearcher<'c> {
    certifier: Box<dyn Certifier + 'c>,
    budget: u64,
}

impl Searcher for CertifierSearcher<'_> {
    fn tick(&mut self) -> Tick {
        if self.certifier.ticks() >= self.budget {
            return Tick::Exhausted;
        }
        match self.certifier.tick() {
            CertTick::Pending => Tick::Running,
            CertTick::Found => Tick::Halted { output: None },
            CertTick::Exhausted => Tick::Exhausted,
        }
    }

    fn steps(&self) -> u64 {
        self.certifier.ticks()
    }
}

pub fn build_t3<'c>(p: &MuProblem, certifier: Box<dyn Certifier + 'c>) -> CertifierSearcher<'c> {
    CertifierSearcher { certifier, budget: p.search_budget }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefaultVia {
    T2SelfTerminate,
    T3Certificate,
}

impl fmt::Display for DefaultVia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefaultVia::T2SelfTerminate => "T2-self-terminate",
            DefaultVia::T3Certificate => "T3-certificate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotalizedValue {
    Defined { y: u64 },
    DefaultTotal { via: DefaultVia },
    Unresolved { global_steps: u64 },
}

impl TotalizedValue {
    /// The value the totalized function takes, if any.
    pub fn value(&self) -> Option<u64> {
        match self {
            TotalizedValue::Defined { y } => Some(*y),
            TotalizedValue::DefaultTotal { .. } => Some(DEFAULT_VALUE),
            TotalizedValue::Unresolved { .. } => None,
        }
    }
}

impl fmt::Display for TotalizedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TotalizedValue::Defined { y } => write!(f, "DEFINED y={y} via=T1"),
            TotalizedValue::DefaultTotal { via } => write!(f, "DEFAULT-TOTAL value={DEFAULT_VALUE} via={via}"),
            TotalizedValue::Unresolved { global_steps } => write!(f, "UNRESOLVED global_steps={global_steps}"),
        }
    }
}

/// Races `T1`, `T2` and `T3` in that order.
pub fn totalize_mu(p: &MuProblem, certifier: Box<dyn Certifier + '_>, global_budget: u64) -> Result<TotalizedValue, DovetailError> {
    totalize_mu_observed(p, certifier, global_budget, |_| {})
}

pub fn totalize_mu_observed(
    p: &MuProblem,
    certifier: Box<dyn Certifier + '_>,
    global_budget: u64,
    observer: impl FnMut(&RaceEvent),
) -> Result<TotalizedValue, DovetailError> {
    let entrants = alloc::vec![
        Entrant::new(build_t1(p), Accepts::HALT),
        Entrant::new(build_t2(p), Accepts::SELF_TERMINATE),
        Entrant::new(build_t3(p, certifier), Accepts::HALT),
    ];
    Ok(match race_observed(entrants, global_budget, observer)? {
        RaceResult::Resolved(o) => match o.winner {
            0 => TotalizedValue::Defined { y: o.output.expect("T1 halts with a witness") },
            1 => TotalizedValue::DefaultTotal { via: DefaultVia::T2SelfTerminate },
            _ => TotalizedValue::DefaultTotal { via: DefaultVia::T3Certificate },
        },
        RaceResult::AllExhausted { global_steps, .. } => TotalizedValue::Unresolved { global_steps },
    })
}

/// Named `g` functions with the formula `H(args, y)` representing
/// `g(args, y) = 0`, where `y` is the variable `x0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// `|x − y·y|`
    AbsDiffSquare,
    /// `0`, any arity
    ConstZero,
    /// `1`, any arity
    ConstOne,
    /// `x + y + 1`
    LinearPlusOne,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::AbsDiffSquare, Builtin::ConstZero, Builtin::ConstOne, Builtin::LinearPlusOne];

    pub fn id(self) -> &'static str {
        match self {
            Builtin::AbsDiffSquare => "abs-diff-square",
            Builtin::ConstZero => "const-zero",
            Builtin::ConstOne => "const-one",
            Builtin::LinearPlusOne => "linear-plus-one",
        }
    }

    pub fn from_id(id: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.id() == id)
    }

    pub fn g(self) -> GFunction {
        match self {
            Builtin::AbsDiffSquare => GFunction::closed(Some(1), |t| {
                let (x, y) = (t[0] as u128, t[1] as u128);
                u64::try_from(x.abs_diff(y * y)).unwrap_or(u64::MAX)
            }),
            Builtin::ConstZero => GFunction::closed(None, |_| 0),
            Builtin::ConstOne => GFunction::closed(None, |_| 1),
            Builtin::LinearPlusOne => GFunction::closed(Some(1), |t| t[0].saturating_add(t[1]).saturating_add(1)),
        }
    }

    pub fn representing(self, args: &[u64]) -> Formula {
        let y = Term::Var(Var(0));
        let x = || Term::numeral(args.first().copied().unwrap_or(0));
        match self {
            Builtin::AbsDiffSquare => Formula::eq(x(), Term::times(y.clone(), y)),
            Builtin::ConstZero => Formula::eq(Term::Zero, Term::Zero),
            Builtin::ConstOne => Formula::eq(Term::numeral(1), Term::Zero),
            Builtin::LinearPlusOne => Formula::eq(Term::succ(Term::plus(x(), y)), Term::Zero),
        }
    }

    /// `∀y H(args, y)`, the certifier's target.
    pub fn target(self, args: &[u64]) -> Formula {
        Formula::forall(Var(0), self.representing(args))
    }

    pub fn problem(self, args: Vec<u64>, search_budget: u64) -> Result<MuProblem, DovetailError> {
        MuProblem::new(self.g(), args, search_budget)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Totalizes a built-in with the proof enumerator as certifier.
pub fn totalize_builtin(b: Builtin, args: Vec<u64>, global_budget: u64) -> Result<TotalizedValue, DovetailError> {
    let p = b.problem(args, global_budget)?;
    let certifier = ProofEnumerator::new(b.target(&p.args));
    totalize_mu(&p, Box::new(certifier), global_budget)
}
