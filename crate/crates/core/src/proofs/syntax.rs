//! Terms and formulas of first-order arithmetic with a prefix serialization.
//!
//! Serialization alphabet, in code order: `0 S + * v ' = ~ > A`. The variable
//! `x_k` is written `v` followed by `k` primes, so `x0 = v`, `x2 = v''`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt;

use crate::godel::{decode_string, encode_string, Alphabet, GodelNumber};

/// Characters of the serialization, in the order that fixes their codes.
pub const FORMULA_ALPHABET: &str = "0S+*v'=~>A";

pub fn formula_alphabet() -> Alphabet {
    Alphabet::new(FORMULA_ALPHABET).expect("alphabet has distinct symbols")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("v")?;
        for _ in 0..self.0 {
            f.write_str("'")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Zero,
    Var(Var),
    Succ(Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
}

impl Term {
    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Times(Box::new(a), Box::new(b))
    }

    /// `S…S0` with `n` successors.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    pub fn contains(&self, x: Var) -> bool {
        match self {
            Term::Zero => false,
            Term::Var(v) => *v == x,
            Term::Succ(t) => t.contains(x),
            Term::Plus(a, b) | Term::Times(a, b) => a.contains(x) || b.contains(x),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Zero => {}
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::Succ(t) => t.vars(out),
            Term::Plus(a, b) | Term::Times(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn substitute(&self, x: Var, r: &Term) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::Var(v) if *v == x => r.clone(),
            Term::Var(v) => Term::Var(*v),
            Term::Succ(t) => Term::succ(t.substitute(x, r)),
            Term::Plus(a, b) => Term::plus(a.substitute(x, r), b.substitute(x, r)),
            Term::Times(a, b) => Term::times(a.substitute(x, r), b.substitute(x, r)),
        }
    }

    fn write_prefix(&self, out: &mut String) {
        match self {
            Term::Zero => out.push('0'),
            Term::Var(v) => write_var(*v, out),
            Term::Succ(t) => {
                out.push('S');
                t.write_prefix(out);
            }
            Term::Plus(a, b) | Term::Times(a, b) => {
                out.push(if matches!(self, Term::Plus(..)) { '+' } else { '*' });
                a.write_prefix(out);
                b.write_prefix(out);
            }
        }
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        self.write_prefix(&mut s);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(Var, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(x: Var, f: Formula) -> Formula {
        Formula::ForAll(x, Box::new(f))
    }

    pub fn is_free(&self, x: Var) -> bool {
        match self {
            Formula::Eq(a, b) => a.contains(x) || b.contains(x),
            Formula::Not(f) => f.is_free(x),
            Formula::Implies(a, b) => a.is_free(x) || b.is_free(x),
            Formula::ForAll(y, f) => *y != x && f.is_free(x),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut all = BTreeSet::new();
        self.all_vars(&mut all);
        all.into_iter().filter(|&v| self.is_free(v)).collect()
    }

    fn all_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Formula::Not(f) => f.all_vars(out),
            Formula::Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::ForAll(y, f) => {
                out.insert(*y);
                f.all_vars(out);
            }
        }
    }

    /// Replaces the free occurrences of `x` by `r`. No renaming is done; use
    /// [`Formula::free_for`] first when capture matters.
    pub fn substitute(&self, x: Var, r: &Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(x, r), b.substitute(x, r)),
            Formula::Not(f) => Formula::not(f.substitute(x, r)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(x, r), b.substitute(x, r)),
            Formula::ForAll(y, f) if *y == x => Formula::ForAll(*y, f.clone()),
            Formula::ForAll(y, f) => Formula::forall(*y, f.substitute(x, r)),
        }
    }

    /// True when no free occurrence of `x` lies under a quantifier binding a
    /// variable of `r`.
    pub fn free_for(&self, r: &Term, x: Var) -> bool {
        let mut vars = BTreeSet::new();
        r.vars(&mut vars);
        self.free_for_inner(&vars, x, false)
    }

    fn free_for_inner(&self, vars: &BTreeSet<Var>, x: Var, captured: bool) -> bool {
        match self {
            Formula::Eq(a, b) => !captured || !(a.contains(x) || b.contains(x)),
            Formula::Not(f) => f.free_for_inner(vars, x, captured),
            Formula::Implies(a, b) => a.free_for_inner(vars, x, captured) && b.free_for_inner(vars, x, captured),
            Formula::ForAll(y, _) if *y == x => true,
            Formula::ForAll(y, f) => f.free_for_inner(vars, x, captured || vars.contains(y)),
        }
    }

    fn write_prefix(&self, out: &mut String) {
        match self {
            Formula::Eq(a, b) => {
                out.push('=');
                a.write_prefix(out);
                b.write_prefix(out);
            }
            Formula::Not(f) => {
                out.push('~');
                f.write_prefix(out);
            }
            Formula::Implies(a, b) => {
                out.push('>');
                a.write_prefix(out);
                b.write_prefix(out);
            }
            Formula::ForAll(x, f) => {
                out.push('A');
                write_var(*x, out);
                f.write_prefix(out);
            }
        }
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        self.write_prefix(&mut s);
        s
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn write_var(v: Var, out: &mut String) {
    out.push('v');
    out.extend(core::iter::repeat_n('\'', v.0 as usize));
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected {expected} at offset {position}")]
pub struct SyntaxError {
    pub position: usize,
    pub expected: &'static str,
}

struct Reader<'s> {
    chars: &'s [u8],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Option<u8> {
        let c = self.chars.get(self.pos).copied();
        self.pos += c.is_some() as usize;
        c
    }

    fn fail<T>(&self, expected: &'static str) -> Result<T, SyntaxError> {
        Err(SyntaxError { position: self.pos, expected })
    }

    fn var_tail(&mut self) -> Var {
        let mut k = 0;
        while self.chars.get(self.pos) == Some(&b'\'') {
            self.pos += 1;
            k += 1;
        }
        Var(k)
    }

    fn var(&mut self) -> Result<Var, SyntaxError> {
        match self.next() {
            Some(b'v') => Ok(self.var_tail()),
            _ => self.fail("variable"),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.next() {
            Some(b'0') => Ok(Term::Zero),
            Some(b'v') => Ok(Term::Var(self.var_tail())),
            Some(b'S') => Ok(Term::succ(self.term()?)),
            Some(b'+') => Ok(Term::plus(self.term()?, self.term()?)),
            Some(b'*') => Ok(Term::times(self.term()?, self.term()?)),
            _ => self.fail("term"),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        match self.next() {
            Some(b'=') => Ok(Formula::Eq(self.term()?, self.term()?)),
            Some(b'~') => Ok(Formula::not(self.formula()?)),
            Some(b'>') => Ok(Formula::implies(self.formula()?, self.formula()?)),
            Some(b'A') => {
                let x = self.var()?;
                Ok(Formula::forall(x, self.formula()?))
            }
            _ => self.fail("formula"),
        }
    }

    fn finish<T>(&self, value: T) -> Result<T, SyntaxError> {
        if self.pos == self.chars.len() {
            Ok(value)
        } else {
            self.fail("end of input")
        }
    }
}

pub fn parse_formula(s: &str) -> Result<Formula, SyntaxError> {
    let mut r = Reader { chars: s.as_bytes(), pos: 0 };
    let f = r.formula()?;
    r.finish(f)
}

pub fn parse_term(s: &str) -> Result<Term, SyntaxError> {
    let mut r = Reader { chars: s.as_bytes(), pos: 0 };
    let t = r.term()?;
    r.finish(t)
}

pub fn parse_var(s: &str) -> Result<Var, SyntaxError> {
    let mut r = Reader { chars: s.as_bytes(), pos: 0 };
    let v = r.var()?;
    r.finish(v)
}

pub fn godel_number_formula(f: &Formula) -> GodelNumber {
    encode_string(&formula_alphabet(), &f.serialize()).expect("serialization uses the formula alphabet")
}

/// `None` unless `g` numbers a well-formed formula.
pub fn formula_from_godel_number(g: &GodelNumber) -> Option<Formula> {
    parse_formula(&decode_string(&formula_alphabet(), g)?).ok()
}
