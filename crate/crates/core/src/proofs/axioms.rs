use alloc::vec::Vec;
use core::fmt;

use super::syntax::{Formula, Term, Var};

/// Axiom schemas of the presentation. See the module documentation of
/// [`crate::proofs`] for the instance each one produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Schema {
    A1,
    A2,
    A3,
    A4,
    A5,
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgKind {
    Formula,
    Term,
    Var,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arg {
    Formula(Formula),
    Term(Term),
    Var(Var),
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Formula(x) => x.fmt(f),
            Arg::Term(t) => t.fmt(f),
            Arg::Var(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("schema {schema} takes {expected} arguments")]
    Arity { schema: Schema, expected: usize },
    #[error("argument {index} of {schema} has the wrong kind")]
    Kind { schema: Schema, index: usize },
    #[error("term is not free for the variable in {schema}")]
    NotFreeFor { schema: Schema },
    #[error("quantified variable occurs free in the antecedent of {schema}")]
    VariableFree { schema: Schema },
}

impl Schema {
    pub const ALL: [Schema; 14] = [
        Schema::A1,
        Schema::A2,
        Schema::A3,
        Schema::A4,
        Schema::A5,
        Schema::S1,
        Schema::S2,
        Schema::S3,
        Schema::S4,
        Schema::S5,
        Schema::S6,
        Schema::S7,
        Schema::S8,
        Schema::S9,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Schema::A1 => "A1",
            Schema::A2 => "A2",
            Schema::A3 => "A3",
            Schema::A4 => "A4",
            Schema::A5 => "A5",
            Schema::S1 => "S1",
            Schema::S2 => "S2",
            Schema::S3 => "S3",
            Schema::S4 => "S4",
            Schema::S5 => "S5",
            Schema::S6 => "S6",
            Schema::S7 => "S7",
            Schema::S8 => "S8",
            Schema::S9 => "S9",
        }
    }

    pub fn from_id(id: &str) -> Option<Schema> {
        Schema::ALL.into_iter().find(|s| s.id() == id)
    }

    pub fn signature(self) -> &'static [ArgKind] {
        use ArgKind::*;
        match self {
            Schema::A1 | Schema::A3 => &[Formula, Formula],
            Schema::A2 => &[Formula, Formula, Formula],
            Schema::A4 => &[Var, Formula, Term],
            Schema::A5 => &[Var, Formula, Formula],
            Schema::S1 => &[Term, Term, Term],
            Schema::S2 | Schema::S4 | Schema::S6 | Schema::S8 => &[Term, Term],
            Schema::S3 | Schema::S5 | Schema::S7 => &[Term],
            Schema::S9 => &[Var, Formula],
        }
    }

    /// The axiom this schema yields for `args`.
    pub fn instance(self, args: &[Arg]) -> Result<Formula, InstanceError> {
        let sig = self.signature();
        if args.len() != sig.len() {
            return Err(InstanceError::Arity { schema: self, expected: sig.len() });
        }
        let mut formulas = Vec::new();
        let mut terms = Vec::new();
        let mut vars = Vec::new();
        for (index, (arg, kind)) in args.iter().zip(sig).enumerate() {
            match (arg, kind) {
                (Arg::Formula(f), ArgKind::Formula) => formulas.push(f.clone()),
                (Arg::Term(t), ArgKind::Term) => terms.push(t.clone()),
                (Arg::Var(v), ArgKind::Var) => vars.push(*v),
                _ => return Err(InstanceError::Kind { schema: self, index }),
            }
        }
        let f = |i: usize| formulas[i].clone();
        let t = |i: usize| terms[i].clone();
        let imp = Formula::implies;
        let eq = Formula::eq;
        Ok(match self {
            Schema::A1 => imp(f(0), imp(f(1), f(0))),
            Schema::A2 => imp(imp(f(0), imp(f(1), f(2))), imp(imp(f(0), f(1)), imp(f(0), f(2)))),
            Schema::A3 => {
                let (b, c) = (f(0), f(1));
                imp(imp(Formula::not(c.clone()), Formula::not(b.clone())), imp(imp(Formula::not(c.clone()), b), c))
            }
            Schema::A4 => {
                let (x, b, r) = (vars[0], f(0), t(0));
                if !b.free_for(&r, x) {
                    return Err(InstanceError::NotFreeFor { schema: self });
                }
                imp(Formula::forall(x, b.clone()), b.substitute(x, &r))
            }
            Schema::A5 => {
                let (x, b, c) = (vars[0], f(0), f(1));
                if b.is_free(x) {
                    return Err(InstanceError::VariableFree { schema: self });
                }
                imp(Formula::forall(x, imp(b.clone(), c.clone())), imp(b, Formula::forall(x, c)))
            }
            Schema::S1 => imp(eq(t(0), t(1)), imp(eq(t(0), t(2)), eq(t(1), t(2)))),
            Schema::S2 => imp(eq(t(0), t(1)), eq(Term::succ(t(0)), Term::succ(t(1)))),
            Schema::S3 => Formula::not(eq(Term::Zero, Term::succ(t(0)))),
            Schema::S4 => imp(eq(Term::succ(t(0)), Term::succ(t(1))), eq(t(0), t(1))),
            Schema::S5 => eq(Term::plus(t(0), Term::Zero), t(0)),
            Schema::S6 => eq(Term::plus(t(0), Term::succ(t(1))), Term::succ(Term::plus(t(0), t(1)))),
            Schema::S7 => eq(Term::times(t(0), Term::Zero), Term::Zero),
            Schema::S8 => eq(Term::times(t(0), Term::succ(t(1))), Term::plus(Term::times(t(0), t(1)), t(0))),
            Schema::S9 => {
                let (x, b) = (vars[0], f(0));
                let base = b.substitute(x, &Term::Zero);
                let step = Formula::forall(x, imp(b.clone(), b.substitute(x, &Term::succ(Term::Var(x)))));
                imp(base, imp(step, Formula::forall(x, b)))
            }
        })
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}
