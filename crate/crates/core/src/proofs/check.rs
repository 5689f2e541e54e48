use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::axioms::{Arg, InstanceError, Schema};
use super::syntax::{Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    Axiom { schema: Schema, args: Vec<Arg> },
    /// `ModusPonens(i, j)`: line `i` is `B`, line `j` is `B → C`.
    ModusPonens(usize, usize),
    Generalization(usize, Var),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { schema, args } => {
                f.write_str(schema.id())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
            Justification::ModusPonens(i, j) => write!(f, "MP {i} {j}"),
            Justification::Generalization(i, x) => write!(f, "GEN {i} {x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

/// A sequence of justified lines. Line indices are 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ProofObject {
    pub lines: Vec<ProofLine>,
}

impl ProofObject {
    pub fn new(lines: Vec<ProofLine>) -> Self {
        ProofObject { lines }
    }

    /// Builds a proof from justifications alone, computing each line's
    /// formula. Fails at the first line whose justification does not apply.
    pub fn from_justifications(justs: Vec<Justification>) -> Result<ProofObject, (usize, Reason)> {
        let mut formulas: Vec<Formula> = Vec::with_capacity(justs.len());
        for (line, j) in justs.iter().enumerate() {
            formulas.push(derive_formula(&formulas, j).map_err(|r| (line, r))?);
        }
        Ok(ProofObject {
            lines: formulas.into_iter().zip(justs).map(|(formula, justification)| ProofLine { formula, justification }).collect(),
        })
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// Renders the text format, one `<index>. <formula> ; <justification>` per line.
impl fmt::Display for ProofObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{i}. {} ; {}", l.formula, l.justification)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Reason {
    #[error("proof has no lines")]
    EmptyProof,
    #[error("cites line {cited}, which is not earlier")]
    ForwardReference { cited: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("formula is not the cited axiom instance")]
    AxiomMismatch,
    #[error("cited line {0} is not an implication")]
    NotAnImplication(usize),
    #[error("antecedent of line {major} is not line {minor}")]
    AntecedentMismatch { minor: usize, major: usize },
    #[error("formula is not the consequent of line {0}")]
    ConclusionMismatch(usize),
    #[error("formula is not the generalization of line {0}")]
    GeneralizationMismatch(usize),
    #[error("last line is not the target")]
    TargetMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid { line: usize, reason: Reason },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("VALID"),
            Verdict::Invalid { line, reason } => write!(f, "INVALID line={line} reason={reason}"),
        }
    }
}

fn cite(earlier: &[Formula], i: usize) -> Result<&Formula, Reason> {
    earlier.get(i).ok_or(Reason::ForwardReference { cited: i })
}

/// The formula `j` justifies given the formulas of the earlier lines.
pub fn derive_formula(earlier: &[Formula], j: &Justification) -> Result<Formula, Reason> {
    match j {
        Justification::Axiom { schema, args } => Ok(schema.instance(args)?),
        Justification::ModusPonens(i, k) => {
            let minor = cite(earlier, *i)?;
            match cite(earlier, *k)? {
                Formula::Implies(b, c) if **b == *minor => Ok((**c).clone()),
                Formula::Implies(..) => Err(Reason::AntecedentMismatch { minor: *i, major: *k }),
                _ => Err(Reason::NotAnImplication(*k)),
            }
        }
        Justification::Generalization(i, x) => Ok(Formula::forall(*x, cite(earlier, *i)?.clone())),
    }
}

/// One forward pass: each line must be exactly what its justification yields
/// from earlier lines, and the last line must be `target`.
pub fn check_proof(p: &ProofObject, target: &Formula) -> Verdict {
    if p.lines.is_empty() {
        return Verdict::Invalid { line: 0, reason: Reason::EmptyProof };
    }
    let mut earlier: Vec<Formula> = Vec::with_capacity(p.lines.len());
    for (line, l) in p.lines.iter().enumerate() {
        let derived = match derive_formula(&earlier, &l.justification) {
            Ok(f) => f,
            Err(reason) => return Verdict::Invalid { line, reason },
        };
        if derived != l.formula {
            let reason = match &l.justification {
                Justification::Axiom { .. } => Reason::AxiomMismatch,
                Justification::ModusPonens(_, k) => Reason::ConclusionMismatch(*k),
                Justification::Generalization(i, _) => Reason::GeneralizationMismatch(*i),
            };
            return Verdict::Invalid { line, reason };
        }
        earlier.push(derived);
    }
    if p.lines.last().map(|l| &l.formula) != Some(target) {
        return Verdict::Invalid { line: p.lines.len() - 1, reason: Reason::TargetMismatch };
    }
    Verdict::Valid
}

/// Compact character serialization used for Gödel numbering proofs.
///
/// Lines are joined by `|`; a line is `<formula>:<justification>`. An axiom
/// is `a` followed by one `'` per schema position, then `,<arg>` per
/// argument; `m<idx><idx>` and `g<idx><var>` are the rules, where an index `k`
/// is `i` followed by `k` primes.
pub const PROOF_ALPHABET: &str = "0S+*v'=~>A:,|amgi";

pub(crate) fn proof_alphabet() -> crate::godel::Alphabet {
    crate::godel::Alphabet::new(PROOF_ALPHABET).expect("alphabet has distinct symbols")
}

fn push_index(out: &mut String, k: usize) {
    out.push('i');
    out.extend(core::iter::repeat_n('\'', k));
}

pub fn serialize_proof(p: &ProofObject) -> String {
    let mut out = String::new();
    for (n, l) in p.lines.iter().enumerate() {
        if n > 0 {
            out.push('|');
        }
        out.push_str(&l.formula.serialize());
        out.push(':');
        match &l.justification {
            Justification::Axiom { schema, args } => {
                out.push('a');
                let pos = Schema::ALL.iter().position(|s| s == schema).unwrap_or(0);
                out.extend(core::iter::repeat_n('\'', pos));
                for a in args {
                    out.push(',');
                    match a {
                        Arg::Formula(f) => out.push_str(&f.serialize()),
                        Arg::Term(t) => out.push_str(&t.serialize()),
                        Arg::Var(v) => out.push_str(&alloc::format!("{v}")),
                    }
                }
            }
            Justification::ModusPonens(i, j) => {
                out.push('m');
                push_index(&mut out, *i);
                push_index(&mut out, *j);
            }
            Justification::Generalization(i, x) => {
                out.push('g');
                push_index(&mut out, *i);
                out.push_str(&alloc::format!("{x}"));
            }
        }
    }
    out
}

fn primes(s: &str) -> (usize, &str) {
    let rest = s.trim_start_matches('\'');
    (s.len() - rest.len(), rest)
}

fn parse_index(s: &str) -> Option<(usize, &str)> {
    primes(s.strip_prefix('i')?).into()
}

fn parse_line(s: &str) -> Option<ProofLine> {
    use super::syntax::{parse_formula, parse_term, parse_var};
    let (f, j) = s.split_once(':')?;
    let formula = parse_formula(f).ok()?;
    let justification = if let Some(rest) = j.strip_prefix('a') {
        let (pos, rest) = primes(rest);
        let schema = *Schema::ALL.get(pos)?;
        let parts: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.strip_prefix(',')?.split(',').collect() };
        if parts.len() != schema.signature().len() {
            return None;
        }
        let mut args = Vec::new();
        for (p, kind) in parts.into_iter().zip(schema.signature()) {
            args.push(match kind {
                super::axioms::ArgKind::Formula => Arg::Formula(parse_formula(p).ok()?),
                super::axioms::ArgKind::Term => Arg::Term(parse_term(p).ok()?),
                super::axioms::ArgKind::Var => Arg::Var(parse_var(p).ok()?),
            });
        }
        Justification::Axiom { schema, args }
    } else if let Some(rest) = j.strip_prefix('m') {
        let (i, rest) = parse_index(rest)?;
        let (k, rest) = parse_index(rest)?;
        rest.is_empty().then_some(Justification::ModusPonens(i, k))?
    } else {
        let (i, rest) = parse_index(j.strip_prefix('g')?)?;
        Justification::Generalization(i, parse_var(rest).ok()?)
    };
    Some(ProofLine { formula, justification })
}

pub fn deserialize_proof(s: &str) -> Option<ProofObject> {
    if s.is_empty() {
        return Some(ProofObject::default());
    }
    s.split('|').map(parse_line).collect::<Option<Vec<_>>>().map(ProofObject::new)
}

pub fn godel_number_proof(p: &ProofObject) -> crate::GodelNumber {
    crate::godel::encode_string(&proof_alphabet(), &serialize_proof(p)).expect("serialization uses the proof alphabet")
}

pub fn proof_from_godel_number(x: &crate::GodelNumber) -> Option<ProofObject> {
    deserialize_proof(&crate::godel::decode_string(&proof_alphabet(), x)?)
}

/// `xBy`: `x` numbers a proof object whose conclusion is the formula numbered
/// by `y`.
pub fn proves(x: &crate::GodelNumber, y: &crate::GodelNumber) -> bool {
    let (Some(p), Some(target)) = (proof_from_godel_number(x), super::syntax::formula_from_godel_number(y)) else {
        return false;
    };
    check_proof(&p, &target).is_valid()
}
