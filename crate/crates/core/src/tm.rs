//! Deterministic single-tape Turing machines.
//!
//! The tape is two-way infinite. A [`Configuration`] stores only non-blank
//! cells, and [`canonicalize`] reduces a configuration to a key that forgets
//! absolute cell positions, so two configurations that differ by a uniform
//! shift of the tape and head compare equal.
//!
//! Transitions are quintuples `(state, read) -> (write, move, next)` with
//! moves `L`, `R` and `S`. A configuration whose `(state, read)` pair has no
//! transition is *stuck*, and stuck is treated as halting.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Index into a machine's alphabet. `Symbol(0)` is always the blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u8);

impl Symbol {
    pub const BLANK: Symbol = Symbol(0);

    pub fn is_blank(self) -> bool {
        self == Self::BLANK
    }
}

/// Index into a machine's state list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Move> {
        match c {
            'L' => Some(Move::Left),
            'R' => Some(Move::Right),
            'S' => Some(Move::Stay),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub write: Symbol,
    pub movement: Move,
    pub next: State,
}

/// Name of the stroke symbol used by the unary numeric convention.
pub const STROKE: &str = "1";

const MAX_SYMBOLS: usize = u8::MAX as usize + 1;
const MAX_STATES: usize = u16::MAX as usize + 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("duplicate transition for ({state}, {symbol})")]
    DuplicateTransition { state: String, symbol: String },
    #[error("transition keyed on halting state {state}")]
    TransitionFromHalting { state: String },
    #[error("no start state declared")]
    MissingStart,
    #[error("alphabet exceeds {MAX_SYMBOLS} symbols")]
    TooManySymbols,
    #[error("machine exceeds {MAX_STATES} states")]
    TooManyStates,
    #[error("empty identifier")]
    EmptyName,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TmError {
    #[error("state index {0} is not declared by the machine")]
    UnknownState(u16),
    #[error("input symbol {symbol:?} at position {position} is not in the alphabet")]
    InvalidInput { position: usize, symbol: String },
    #[error("machine has no {STROKE:?} symbol for unary numerals")]
    NoStrokeSymbol,
}

/// A validated deterministic Turing machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSpec {
    name: String,
    symbols: Vec<String>,
    states: Vec<String>,
    start: State,
    halting: Vec<bool>,
    // Row-major by state, indexed by symbol.
    table: Vec<Option<Transition>>,
}

impl MachineSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.symbols[s.0 as usize]
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.states[q.0 as usize]
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name).map(|i| Symbol(i as u8))
    }

    pub fn state(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name).map(|i| State(i as u16))
    }

    pub fn blank_name(&self) -> &str {
        &self.symbols[0]
    }

    pub fn symbols(&self) -> impl Iterator<Item = (Symbol, &str)> {
        self.symbols.iter().enumerate().map(|(i, s)| (Symbol(i as u8), s.as_str()))
    }

    pub fn states(&self) -> impl Iterator<Item = (State, &str)> {
        self.states.iter().enumerate().map(|(i, s)| (State(i as u16), s.as_str()))
    }

    pub fn halting_states(&self) -> impl Iterator<Item = State> + '_ {
        self.halting.iter().enumerate().filter(|(_, h)| **h).map(|(i, _)| State(i as u16))
    }

    pub fn contains_state(&self, q: State) -> bool {
        (q.0 as usize) < self.states.len()
    }

    pub fn is_halting(&self, q: State) -> bool {
        self.halting[q.0 as usize]
    }

    pub fn transition(&self, q: State, s: Symbol) -> Option<&Transition> {
        self.table[q.0 as usize * self.symbols.len() + s.0 as usize].as_ref()
    }

    /// All transitions in (state, symbol) order.
    pub fn transitions(&self) -> impl Iterator<Item = (State, Symbol, &Transition)> {
        let width = self.symbols.len();
        self.table.iter().enumerate().filter_map(move |(i, t)| {
            t.as_ref().map(|t| (State((i / width) as u16), Symbol((i % width) as u8), t))
        })
    }

    /// Splits `input` into symbols. Whitespace-separated tokens are used when
    /// the input contains whitespace, otherwise each character is a symbol.
    pub fn parse_input(&self, input: &str) -> Result<Vec<Symbol>, TmError> {
        let lookup = |position: usize, tok: &str| {
            self.symbol(tok).ok_or_else(|| TmError::InvalidInput { position, symbol: tok.to_string() })
        };
        if input.contains(char::is_whitespace) {
            input.split_whitespace().enumerate().map(|(i, t)| lookup(i, t)).collect()
        } else {
            let mut buf = [0u8; 4];
            input.chars().enumerate().map(|(i, c)| lookup(i, c.encode_utf8(&mut buf))).collect()
        }
    }

    pub fn check_input(&self, input: &[Symbol]) -> Result<(), TmError> {
        match input.iter().position(|s| s.0 as usize >= self.symbols.len()) {
            Some(position) => Err(TmError::InvalidInput {
                position,
                symbol: alloc::format!("#{}", input[position].0),
            }),
            None => Ok(()),
        }
    }

    /// Unary input for a tuple of naturals: `k` becomes `k + 1` strokes and
    /// arguments are separated by one blank.
    pub fn unary_input(&self, args: &[u64]) -> Result<Vec<Symbol>, TmError> {
        let stroke = self.symbol(STROKE).ok_or(TmError::NoStrokeSymbol)?;
        let mut out = Vec::new();
        for (i, &k) in args.iter().enumerate() {
            if i > 0 {
                out.push(Symbol::BLANK);
            }
            out.extend(core::iter::repeat_n(stroke, k as usize + 1));
        }
        Ok(out)
    }

    /// Reads a unary numeral off a final configuration: the non-blank part of
    /// the tape must be one contiguous block of `n >= 1` strokes, read as
    /// `n - 1`.
    pub fn unary_output(&self, c: &Configuration) -> Option<u64> {
        let stroke = self.symbol(STROKE)?;
        let key = canonicalize(c);
        if key.tape.is_empty() || key.tape.iter().any(|&s| s != stroke) {
            return None;
        }
        Some(key.tape.len() as u64 - 1)
    }
}

/// Incremental construction of a [`MachineSpec`]. Names are interned on first
/// use; the blank is always symbol 0.
#[derive(Debug, Clone)]
pub struct MachineBuilder {
    name: String,
    symbols: Vec<String>,
    states: Vec<String>,
    start: Option<State>,
    halting: Vec<State>,
    rules: BTreeMap<(State, Symbol), Transition>,
}

impl MachineBuilder {
    pub fn new(name: &str, blank: &str) -> Self {
        MachineBuilder {
            name: name.to_string(),
            symbols: vec![blank.to_string()],
            states: Vec::new(),
            start: None,
            halting: Vec::new(),
            rules: BTreeMap::new(),
        }
    }

    pub fn symbol(&mut self, name: &str) -> Result<Symbol, SpecError> {
        if name.is_empty() {
            return Err(SpecError::EmptyName);
        }
        if let Some(i) = self.symbols.iter().position(|s| s == name) {
            return Ok(Symbol(i as u8));
        }
        if self.symbols.len() == MAX_SYMBOLS {
            return Err(SpecError::TooManySymbols);
        }
        self.symbols.push(name.to_string());
        Ok(Symbol((self.symbols.len() - 1) as u8))
    }

    pub fn state(&mut self, name: &str) -> Result<State, SpecError> {
        if name.is_empty() {
            return Err(SpecError::EmptyName);
        }
        if let Some(i) = self.states.iter().position(|s| s == name) {
            return Ok(State(i as u16));
        }
        if self.states.len() == MAX_STATES {
            return Err(SpecError::TooManyStates);
        }
        self.states.push(name.to_string());
        Ok(State((self.states.len() - 1) as u16))
    }

    pub fn start(&mut self, name: &str) -> Result<&mut Self, SpecError> {
        self.start = Some(self.state(name)?);
        Ok(self)
    }

    pub fn halt(&mut self, name: &str) -> Result<&mut Self, SpecError> {
        let q = self.state(name)?;
        if !self.halting.contains(&q) {
            self.halting.push(q);
        }
        Ok(self)
    }

    pub fn rule(
        &mut self,
        state: &str,
        read: &str,
        write: &str,
        movement: Move,
        next: &str,
    ) -> Result<&mut Self, SpecError> {
        let q = self.state(state)?;
        let r = self.symbol(read)?;
        let w = self.symbol(write)?;
        let n = self.state(next)?;
        if self.rules.contains_key(&(q, r)) {
            return Err(SpecError::DuplicateTransition { state: state.to_string(), symbol: read.to_string() });
        }
        self.rules.insert((q, r), Transition { write: w, movement, next: n });
        Ok(self)
    }

    pub fn build(&self) -> Result<MachineSpec, SpecError> {
        let start = self.start.ok_or(SpecError::MissingStart)?;
        let mut halting = vec![false; self.states.len()];
        for q in &self.halting {
            halting[q.0 as usize] = true;
        }
        let width = self.symbols.len();
        let mut table = vec![None; self.states.len() * width];
        for (&(q, s), t) in &self.rules {
            if halting[q.0 as usize] {
                return Err(SpecError::TransitionFromHalting { state: self.states[q.0 as usize].clone() });
            }
            table[q.0 as usize * width + s.0 as usize] = Some(*t);
        }
        Ok(MachineSpec {
            name: self.name.clone(),
            symbols: self.symbols.clone(),
            states: self.states.clone(),
            start,
            halting,
            table,
        })
    }
}

/// An instantaneous description: control state, sparse tape, head, step count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: State,
    tape: BTreeMap<i64, Symbol>,
    pub head: i64,
    pub step: u64,
}

impl Configuration {
    /// Builds a configuration, dropping blank cells.
    pub fn new(state: State, cells: impl IntoIterator<Item = (i64, Symbol)>, head: i64, step: u64) -> Self {
        let tape = cells.into_iter().filter(|(_, s)| !s.is_blank()).collect();
        Configuration { state, tape, head, step }
    }

    /// Start configuration: input at cells `0..len`, head on cell 0.
    pub fn initial(spec: &MachineSpec, input: &[Symbol]) -> Self {
        Self::new(spec.start(), input.iter().enumerate().map(|(i, &s)| (i as i64, s)), 0, 0)
    }

    pub fn tape(&self) -> &BTreeMap<i64, Symbol> {
        &self.tape
    }

    pub fn read(&self) -> Symbol {
        self.tape.get(&self.head).copied().unwrap_or(Symbol::BLANK)
    }

    fn write(&mut self, s: Symbol) {
        if s.is_blank() {
            self.tape.remove(&self.head);
        } else {
            self.tape.insert(self.head, s);
        }
    }
}

/// Translation-invariant form of a configuration. The step count is not part
/// of the key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub state: State,
    /// Cells from the leftmost to the rightmost non-blank, interior blanks kept.
    pub tape: Vec<Symbol>,
    /// Head position relative to the leftmost non-blank cell; 0 on a blank tape.
    pub head_offset: i64,
}

impl CanonicalKey {
    /// Concatenated symbol names of the trimmed tape.
    pub fn render_tape(&self, spec: &MachineSpec) -> String {
        self.tape.iter().map(|&s| spec.symbol_name(s)).collect()
    }
}

pub fn canonicalize(c: &Configuration) -> CanonicalKey {
    let (Some((&left, _)), Some((&right, _))) = (c.tape.first_key_value(), c.tape.last_key_value()) else {
        return CanonicalKey { state: c.state, tape: Vec::new(), head_offset: 0 };
    };
    let mut tape = vec![Symbol::BLANK; (right - left + 1) as usize];
    for (&i, &s) in &c.tape {
        tape[(i - left) as usize] = s;
    }
    CanonicalKey { state: c.state, tape, head_offset: c.head - left }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Next(Configuration),
    /// No transition for the current (state, symbol); counts as halting.
    Stuck,
    AlreadyHalted,
}

pub fn step(spec: &MachineSpec, c: &Configuration) -> Result<StepResult, TmError> {
    if !spec.contains_state(c.state) {
        return Err(TmError::UnknownState(c.state.0));
    }
    if spec.is_halting(c.state) {
        return Ok(StepResult::AlreadyHalted);
    }
    let Some(t) = spec.transition(c.state, c.read()) else {
        return Ok(StepResult::Stuck);
    };
    let mut next = c.clone();
    next.write(t.write);
    next.head += t.movement.delta();
    next.state = t.next;
    next.step += 1;
    Ok(StepResult::Next(next))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted { steps: u64, last: Configuration },
    SelfTerminated { cycle_entry_step: u64, period: u64 },
    BudgetExhausted { steps: u64, last: Configuration },
}

impl RunOutcome {
    pub fn steps(&self) -> u64 {
        match self {
            RunOutcome::Halted { steps, .. } | RunOutcome::BudgetExhausted { steps, .. } => *steps,
            RunOutcome::SelfTerminated { cycle_entry_step, period } => cycle_entry_step + period,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Halted { steps, .. } => write!(f, "HALTED steps={steps}"),
            RunOutcome::SelfTerminated { cycle_entry_step, period } => {
                write!(f, "SELF-TERMINATED cycle_entry={cycle_entry_step} period={period}")
            }
            RunOutcome::BudgetExhausted { steps, .. } => write!(f, "BUDGET-EXHAUSTED steps={steps}"),
        }
    }
}

/// Unguarded execution: halts, gets stuck, or runs out of budget. Never
/// reports self-termination.
pub fn run(spec: &MachineSpec, input: &[Symbol], budget: u64) -> Result<RunOutcome, TmError> {
    let mut engine = Engine::new(spec, input)?;
    loop {
        if engine.transition().is_none() {
            return Ok(RunOutcome::Halted { steps: engine.steps, last: engine.configuration() });
        }
        if engine.steps >= budget {
            return Ok(RunOutcome::BudgetExhausted { steps: engine.steps, last: engine.configuration() });
        }
        engine.advance();
    }
}

/// Dense-tape stepping engine shared by the runners. Semantically identical
/// to repeated [`step`] on a [`Configuration`].
#[derive(Debug, Clone)]
pub(crate) struct Engine<'a> {
    spec: &'a MachineSpec,
    pub(crate) state: State,
    cells: Vec<Symbol>,
    // Vector index of tape cell 0.
    origin: i64,
    pub(crate) head: i64,
    pub(crate) steps: u64,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(spec: &'a MachineSpec, input: &[Symbol]) -> Result<Self, TmError> {
        spec.check_input(input)?;
        let mut cells = input.to_vec();
        if cells.is_empty() {
            cells.push(Symbol::BLANK);
        }
        Ok(Engine { spec, state: spec.start(), cells, origin: 0, head: 0, steps: 0 })
    }

    pub(crate) fn spec(&self) -> &'a MachineSpec {
        self.spec
    }

    fn read(&self) -> Symbol {
        let i = self.head + self.origin;
        if i < 0 || i >= self.cells.len() as i64 {
            Symbol::BLANK
        } else {
            self.cells[i as usize]
        }
    }

    /// The transition that the next step would take, or `None` if the
    /// machine is halted or stuck.
    pub(crate) fn transition(&self) -> Option<&'a Transition> {
        if self.spec.is_halting(self.state) {
            return None;
        }
        self.spec.transition(self.state, self.read())
    }

    pub(crate) fn advance(&mut self) {
        let t = *self.transition().expect("advance on a halted machine");
        let mut i = self.head + self.origin;
        if i < 0 {
            let grow = (self.cells.len().max(16) as i64).max(-i);
            let mut cells = vec![Symbol::BLANK; grow as usize];
            cells.extend_from_slice(&self.cells);
            self.cells = cells;
            self.origin += grow;
            i += grow;
        } else if i >= self.cells.len() as i64 {
            let new_len = (self.cells.len() * 2).max(i as usize + 1);
            self.cells.resize(new_len, Symbol::BLANK);
        }
        self.cells[i as usize] = t.write;
        self.head += t.movement.delta();
        self.state = t.next;
        self.steps += 1;
    }

    fn nonblank_span(&self) -> Option<(usize, usize)> {
        let first = self.cells.iter().position(|s| !s.is_blank())?;
        let last = self.cells.iter().rposition(|s| !s.is_blank())?;
        Some((first, last))
    }

    pub(crate) fn key(&self) -> CanonicalKey {
        match self.nonblank_span() {
            None => CanonicalKey { state: self.state, tape: Vec::new(), head_offset: 0 },
            Some((first, last)) => CanonicalKey {
                state: self.state,
                tape: self.cells[first..=last].to_vec(),
                head_offset: self.head + self.origin - first as i64,
            },
        }
    }

    pub(crate) fn configuration(&self) -> Configuration {
        let origin = self.origin;
        Configuration::new(
            self.state,
            self.cells.iter().enumerate().map(|(i, &s)| (i as i64 - origin, s)),
            self.head,
            self.steps,
        )
    }
}

/// Small reference machines used throughout the tests and documentation.
pub mod samples {
    use super::{MachineBuilder, MachineSpec, Move};

    /// Start state is halting; alphabet `_ a b 1`.
    pub fn halt0() -> MachineSpec {
        let mut b = MachineBuilder::new("HALT0", "_");
        for s in ["a", "b", "1"] {
            b.symbol(s).unwrap();
        }
        b.start("h").unwrap().halt("h").unwrap();
        b.build().unwrap()
    }

    /// On blank: write `1`, stay, enter halting state `h`.
    pub fn write1() -> MachineSpec {
        let mut b = MachineBuilder::new("WRITE1", "_");
        b.start("q0").unwrap().halt("h").unwrap();
        b.rule("q0", "_", "1", Move::Stay, "h").unwrap();
        b.build().unwrap()
    }

    /// On blank: write blank, move right, same state.
    pub fn right_forever() -> MachineSpec {
        let mut b = MachineBuilder::new("RIGHT_FOREVER", "_");
        b.start("q0").unwrap().halt("h").unwrap();
        b.rule("q0", "_", "_", Move::Right, "q0").unwrap();
        b.build().unwrap()
    }

    /// Sweeps right over a block of strokes, appends one, sweeps back, and
    /// repeats. The block grows without bound.
    pub fn unary_counter() -> MachineSpec {
        let mut b = MachineBuilder::new("UNARY_COUNTER", "_");
        b.start("r").unwrap().halt("h").unwrap();
        b.rule("r", "1", "1", Move::Right, "r").unwrap();
        b.rule("r", "_", "1", Move::Left, "l").unwrap();
        b.rule("l", "1", "1", Move::Left, "l").unwrap();
        b.rule("l", "_", "_", Move::Right, "r").unwrap();
        b.build().unwrap()
    }

    /// Writes `strokes` ones left to right, then halts.
    pub fn emit_strokes(strokes: usize) -> MachineSpec {
        let mut b = MachineBuilder::new("EMIT", "_");
        b.start("w0").unwrap().halt("h").unwrap();
        for i in 0..strokes {
            let from = alloc::format!("w{i}");
            let to = if i + 1 == strokes { alloc::string::String::from("h") } else { alloc::format!("w{}", i + 1) };
            b.rule(&from, "_", "1", Move::Right, &to).unwrap();
        }
        b.symbol("1").unwrap();
        b.build().unwrap()
    }
}
