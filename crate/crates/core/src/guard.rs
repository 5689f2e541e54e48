//! Guarded execution with exact repeat detection.
//!
//! Every instantaneous description visited is reduced to its
//! [`CanonicalKey`] and recorded with the step at which it first occurred.
//! Reaching a key that was already recorded means the deterministic machine
//! has entered a cycle it can never leave, so the run stops with
//! [`RunOutcome::SelfTerminated`]. Machines whose tape keeps growing never
//! repeat a key; they run until the budget and report
//! [`RunOutcome::BudgetExhausted`].

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;
use hashbrown::HashMap;

use crate::tm::{CanonicalKey, Engine, MachineSpec, RunOutcome, Symbol, TmError};

/// First-occurrence index of canonical keys seen during one run.
#[derive(Debug, Clone, Default)]
pub struct HistoryIndex {
    seen: HashMap<CanonicalKey, u64>,
    capacity: Option<usize>,
}

impl HistoryIndex {
    pub fn new(capacity: Option<usize>) -> Self {
        HistoryIndex { seen: HashMap::new(), capacity }
    }

    /// Returns the earliest step at which `key` was seen, recording `step` if
    /// the key is new. Once the capacity is reached new keys are no longer
    /// recorded, which can only delay or miss detection.
    pub fn observe(&mut self, key: CanonicalKey, step: u64) -> Option<u64> {
        if let Some(&first) = self.seen.get(&key) {
            return Some(first);
        }
        if self.capacity.is_none_or(|cap| self.seen.len() < cap) {
            self.seen.insert(key, step);
        }
        None
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuardOptions {
    /// Steps the machine may take.
    pub budget: u64,
    /// Whether repeats are detected at all. Disabled, the runner behaves like
    /// [`crate::tm::run`].
    pub guard: bool,
    pub history_capacity: Option<usize>,
}

impl GuardOptions {
    pub fn guarded(budget: u64) -> Self {
        GuardOptions { budget, guard: true, history_capacity: None }
    }

    pub fn unguarded(budget: u64) -> Self {
        GuardOptions { budget, guard: false, history_capacity: None }
    }
}

/// One trace record: `step<TAB>state<TAB>canonical-tape<TAB>head-offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine<'a> {
    pub step: u64,
    pub state: &'a str,
    pub tape: String,
    pub head_offset: i64,
}

impl fmt::Display for TraceLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.step, self.state, self.tape, self.head_offset)
    }
}

pub type TraceSink<'s> = Box<dyn FnMut(&TraceLine<'_>) + 's>;

/// Resumable guarded run. [`GuardedRun::turn`] performs one step and then
/// inspects the resulting configuration, so a run can be interleaved with
/// others; [`GuardedRun::finish`] drives it to completion.
pub struct GuardedRun<'a> {
    engine: Engine<'a>,
    history: HistoryIndex,
    options: GuardOptions,
    started: bool,
    outcome: Option<RunOutcome>,
    trace: Option<TraceSink<'a>>,
}

impl<'a> GuardedRun<'a> {
    pub fn new(spec: &'a MachineSpec, input: &[Symbol], options: GuardOptions) -> Result<Self, TmError> {
        Ok(GuardedRun {
            engine: Engine::new(spec, input)?,
            history: HistoryIndex::new(options.history_capacity),
            options,
            started: false,
            outcome: None,
            trace: None,
        })
    }

    pub fn with_trace(mut self, sink: impl FnMut(&TraceLine<'_>) + 'a) -> Self {
        self.trace = Some(Box::new(sink));
        self
    }

    pub fn spec(&self) -> &'a MachineSpec {
        self.engine.spec()
    }

    pub fn steps(&self) -> u64 {
        self.engine.steps
    }

    pub fn outcome(&self) -> Option<&RunOutcome> {
        self.outcome.as_ref()
    }

    pub fn history(&self) -> &HistoryIndex {
        &self.history
    }

    // Order matters: halting beats repetition, repetition beats the budget.
    fn inspect(&mut self) -> Option<RunOutcome> {
        let steps = self.engine.steps;
        let key = (self.options.guard || self.trace.is_some()).then(|| self.engine.key());
        if let (Some(sink), Some(key)) = (self.trace.as_mut(), key.as_ref()) {
            let spec = self.engine.spec();
            sink(&TraceLine {
                step: steps,
                state: spec.state_name(key.state),
                tape: key.render_tape(spec),
                head_offset: key.head_offset,
            });
        }
        if self.engine.transition().is_none() {
            return Some(RunOutcome::Halted { steps, last: self.engine.configuration() });
        }
        if self.options.guard {
            if let Some(first) = self.history.observe(key.expect("key computed when guarded"), steps) {
                return Some(RunOutcome::SelfTerminated { cycle_entry_step: first, period: steps - first });
            }
        }
        if steps >= self.options.budget {
            return Some(RunOutcome::BudgetExhausted { steps, last: self.engine.configuration() });
        }
        None
    }

    /// Advances by one step. The first turn also inspects the start
    /// configuration, so a machine that is halted from the outset resolves
    /// without stepping.
    pub fn turn(&mut self) -> Option<&RunOutcome> {
        if self.outcome.is_none() && !self.started {
            self.started = true;
            self.outcome = self.inspect();
        }
        if self.outcome.is_none() {
            self.engine.advance();
            self.outcome = self.inspect();
        }
        self.outcome.as_ref()
    }

    pub fn finish(mut self) -> RunOutcome {
        while self.turn().is_none() {}
        self.outcome.take().expect("turn returned an outcome")
    }
}

/// Runs `spec` on `input`, self-terminating on the first repeated canonical
/// configuration.
pub fn guarded_run(spec: &MachineSpec, input: &[Symbol], budget: u64) -> Result<RunOutcome, TmError> {
    Ok(GuardedRun::new(spec, input, GuardOptions::guarded(budget))?.finish())
}

/// [`guarded_run`] with explicit options and a per-configuration trace sink.
pub fn guarded_run_traced(
    spec: &MachineSpec,
    input: &[Symbol],
    options: GuardOptions,
    sink: impl FnMut(&TraceLine<'_>),
) -> Result<RunOutcome, TmError> {
    Ok(GuardedRun::new(spec, input, options)?.with_trace(sink).finish())
}
