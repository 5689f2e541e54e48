//! Proof search over justification strings.
//!
//! A candidate is a token string: lines separated by [`Tok::Sep`], each line
//! a schema token followed by its arguments in prefix form, `Mp <idx> <idx>`
//! or `Gen <idx> <var>`. A line index `k` is [`Tok::Index`] followed by `k`
//! primes; the variable `x_k` is [`Tok::Var`] followed by `k` primes. The
//! formulas of a candidate are computed from its justifications.
//!
//! Candidates are visited by increasing token count, then lexicographically
//! in the order of [`Tok`]'s variants. Only well-formed strings are
//! candidates; each one visited costs one tick.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::axioms::{Arg, ArgKind, Schema};
use super::check::{check_proof, Justification, ProofObject};
use super::syntax::{Formula, Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tok {
    Zero,
    Succ,
    Plus,
    Times,
    Var,
    Prime,
    Eq,
    Not,
    Implies,
    ForAll,
    Schema(Schema),
    Mp,
    Gen,
    Index,
    Sep,
}

impl Tok {
    /// Every token, in enumeration order.
    pub fn all() -> Vec<Tok> {
        let mut v = vec![
            Tok::Zero,
            Tok::Succ,
            Tok::Plus,
            Tok::Times,
            Tok::Var,
            Tok::Prime,
            Tok::Eq,
            Tok::Not,
            Tok::Implies,
            Tok::ForAll,
        ];
        v.extend(Schema::ALL.iter().map(|&s| Tok::Schema(s)));
        v.extend([Tok::Mp, Tok::Gen, Tok::Index, Tok::Sep]);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Tail,
    Line,
    Term,
    Formula,
    Var,
    Idx,
    Primes,
}

impl Item {
    fn min_len(self) -> usize {
        match self {
            Item::Tail | Item::Primes => 0,
            Item::Line => 2,
            Item::Formula => 3,
            Item::Term | Item::Var | Item::Idx => 1,
        }
    }
}

fn kind_item(k: ArgKind) -> Item {
    match k {
        ArgKind::Formula => Item::Formula,
        ArgKind::Term => Item::Term,
        ArgKind::Var => Item::Var,
    }
}

/// Advances the pushdown stack by `tok`; `false` if `tok` cannot come next.
fn consume(stack: &mut Vec<Item>, tok: Tok) -> bool {
    loop {
        match stack.last() {
            Some(Item::Primes) if tok == Tok::Prime => return true,
            Some(Item::Tail) if tok == Tok::Sep => {
                stack.push(Item::Line);
                return true;
            }
            Some(Item::Primes | Item::Tail) => {
                stack.pop();
            }
            _ => break,
        }
    }
    let Some(top) = stack.pop() else { return false };
    let push: &[Item] = match (top, tok) {
        (Item::Line, Tok::Schema(s)) => {
            stack.extend(s.signature().iter().rev().map(|&k| kind_item(k)));
            return true;
        }
        (Item::Line, Tok::Mp) => &[Item::Idx, Item::Idx],
        (Item::Line, Tok::Gen) => &[Item::Var, Item::Idx],
        (Item::Term, Tok::Zero) => &[],
        (Item::Term | Item::Var, Tok::Var) | (Item::Idx, Tok::Index) => &[Item::Primes],
        (Item::Term, Tok::Succ) => &[Item::Term],
        (Item::Term, Tok::Plus | Tok::Times) | (Item::Formula, Tok::Eq) => &[Item::Term, Item::Term],
        (Item::Formula, Tok::Not) => &[Item::Formula],
        (Item::Formula, Tok::Implies) => &[Item::Formula, Item::Formula],
        (Item::Formula, Tok::ForAll) => &[Item::Formula, Item::Var],
        _ => return false,
    };
    stack.extend_from_slice(push);
    true
}

/// Whether exactly `r` more tokens can complete `stack`.
fn feasible(stack: &[Item], r: usize) -> bool {
    let min: usize = stack.iter().map(|i| i.min_len()).sum();
    if stack.contains(&Item::Primes) || stack.iter().any(|&i| i != Item::Tail) {
        r >= min
    } else {
        // a lone tail is empty or a separator plus a whole line
        r == 0 || r >= 3
    }
}

#[derive(Debug, Clone)]
struct Frame {
    stack: Vec<Item>,
    next: usize,
}

/// Resumable cursor over well-formed candidate strings.
#[derive(Debug, Clone)]
pub struct CandidateCursor {
    alphabet: Vec<Tok>,
    len: usize,
    path: Vec<Frame>,
    toks: Vec<Tok>,
}

impl Default for CandidateCursor {
    fn default() -> Self {
        Self::new()
    }
}

impl CandidateCursor {
    pub fn new() -> Self {
        CandidateCursor { alphabet: Tok::all(), len: 0, path: Vec::new(), toks: Vec::new() }
    }

    /// Token count of the candidates currently being produced.
    pub fn length(&self) -> usize {
        self.len
    }
}

impl Iterator for CandidateCursor {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        loop {
            if self.path.is_empty() {
                self.len += 1;
                self.toks.clear();
                self.path.push(Frame { stack: vec![Item::Tail, Item::Line], next: 0 });
                if !feasible(&self.path[0].stack, self.len) {
                    self.path.clear();
                    continue;
                }
            }
            let r = self.len - self.toks.len();
            let frame = self.path.last_mut().expect("non-empty path");
            if r == 0 {
                let out = Candidate { tokens: self.toks.clone() };
                self.path.pop();
                self.toks.pop();
                return Some(out);
            }
            let Some(&tok) = self.alphabet.get(frame.next) else {
                self.path.pop();
                self.toks.pop();
                continue;
            };
            frame.next += 1;
            let mut stack = frame.stack.clone();
            if consume(&mut stack, tok) && feasible(&stack, r - 1) {
                self.toks.push(tok);
                self.path.push(Frame { stack, next: 0 });
            }
        }
    }
}

/// A well-formed token string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub tokens: Vec<Tok>,
}

struct TokReader<'t> {
    toks: &'t [Tok],
    pos: usize,
}

impl TokReader<'_> {
    fn take(&mut self) -> Tok {
        let t = self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn primes(&mut self) -> u32 {
        let mut k = 0;
        while self.toks.get(self.pos) == Some(&Tok::Prime) {
            self.pos += 1;
            k += 1;
        }
        k
    }

    fn term(&mut self) -> Term {
        match self.take() {
            Tok::Zero => Term::Zero,
            Tok::Var => Term::Var(Var(self.primes())),
            Tok::Succ => Term::succ(self.term()),
            Tok::Plus => Term::plus(self.term(), self.term()),
            _ => Term::times(self.term(), self.term()),
        }
    }

    fn formula(&mut self) -> Formula {
        match self.take() {
            Tok::Eq => Formula::eq(self.term(), self.term()),
            Tok::Not => Formula::not(self.formula()),
            Tok::Implies => Formula::implies(self.formula(), self.formula()),
            _ => {
                self.take();
                let x = Var(self.primes());
                Formula::forall(x, self.formula())
            }
        }
    }

    fn index(&mut self) -> usize {
        self.take();
        self.primes() as usize
    }

    fn line(&mut self) -> Justification {
        match self.take() {
            Tok::Schema(schema) => {
                let args = schema
                    .signature()
                    .iter()
                    .map(|k| match k {
                        ArgKind::Formula => Arg::Formula(self.formula()),
                        ArgKind::Term => Arg::Term(self.term()),
                        ArgKind::Var => {
                            self.take();
                            Arg::Var(Var(self.primes()))
                        }
                    })
                    .collect();
                Justification::Axiom { schema, args }
            }
            Tok::Mp => Justification::ModusPonens(self.index(), self.index()),
            _ => {
                let i = self.index();
                self.take();
                Justification::Generalization(i, Var(self.primes()))
            }
        }
    }
}

impl Candidate {
    pub fn justifications(&self) -> Vec<Justification> {
        let mut r = TokReader { toks: &self.tokens, pos: 0 };
        let mut out = vec![r.line()];
        while r.pos < self.tokens.len() {
            r.take();
            out.push(r.line());
        }
        out
    }

    /// The candidate as a proof object, if every justification applies.
    pub fn proof(&self) -> Option<ProofObject> {
        ProofObject::from_justifications(self.justifications()).ok()
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, j) in self.justifications().iter().enumerate() {
            if n > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

/// Suspendable search for a proof of a fixed target.
#[derive(Debug, Clone)]
pub struct ProofEnumerator {
    target: Formula,
    cursor: CandidateCursor,
    ticks: u64,
}

impl ProofEnumerator {
    pub fn new(target: Formula) -> Self {
        ProofEnumerator { target, cursor: CandidateCursor::new(), ticks: 0 }
    }

    pub fn target(&self) -> &Formula {
        &self.target
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    /// Checks the next candidate.
    pub fn tick(&mut self) -> Option<ProofObject> {
        let c = self.cursor.next()?;
        self.ticks += 1;
        let p = c.proof()?;
        check_proof(&p, &self.target).is_valid().then_some(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    /// `ticks` counts candidates checked, the successful one included.
    Found { proof: ProofObject, ticks: u64 },
    Exhausted { ticks: u64 },
}

pub fn enumerate_proofs(budget: u64, target: &Formula) -> Enumeration {
    let mut e = ProofEnumerator::new(target.clone());
    while e.ticks() < budget {
        if let Some(proof) = e.tick() {
            return Enumeration::Found { proof, ticks: e.ticks() };
        }
    }
    Enumeration::Exhausted { ticks: e.ticks() }
}
