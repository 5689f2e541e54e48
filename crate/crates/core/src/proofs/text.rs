use alloc::string::String;
use alloc::vec::Vec;

use super::axioms::{Arg, ArgKind, Schema};
use super::check::{Justification, ProofLine, ProofObject};
use super::syntax::{parse_formula, parse_term, parse_var, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofParseError {
    #[error("line {line}: expected `<index>. <formula> ; <justification>`")]
    Shape { line: usize },
    #[error("line {line}: expected index {expected}")]
    Index { line: usize, expected: usize },
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: SyntaxError },
    #[error("line {line}: unknown justification `{word}`")]
    UnknownRule { line: usize, word: String },
    #[error("line {line}: {rule} takes {expected} arguments")]
    Arity { line: usize, rule: String, expected: usize },
    #[error("line {line}: `{word}` is not a line index")]
    BadIndex { line: usize, word: String },
}

/// Parses the text format. Error line numbers are 1-based file lines.
pub fn parse_proof(src: &str) -> Result<ProofObject, ProofParseError> {
    let mut lines = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, just) = body.split_once(';').ok_or(ProofParseError::Shape { line })?;
        let (idx, formula) = head.trim().split_once('.').ok_or(ProofParseError::Shape { line })?;
        if idx.trim().parse::<usize>().ok() != Some(lines.len()) {
            return Err(ProofParseError::Index { line, expected: lines.len() });
        }
        let formula = parse_formula(formula.trim()).map_err(|source| ProofParseError::Syntax { line, source })?;
        let justification = parse_justification(just, line)?;
        lines.push(ProofLine { formula, justification });
    }
    Ok(ProofObject::new(lines))
}

fn parse_justification(s: &str, line: usize) -> Result<Justification, ProofParseError> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let Some((&rule, rest)) = words.split_first() else {
        return Err(ProofParseError::Shape { line });
    };
    let arity = |expected: usize| {
        if rest.len() == expected {
            Ok(())
        } else {
            Err(ProofParseError::Arity { line, rule: rule.into(), expected })
        }
    };
    let index = |w: &str| w.parse::<usize>().map_err(|_| ProofParseError::BadIndex { line, word: w.into() });
    let syntax = |source| ProofParseError::Syntax { line, source };
    match rule {
        "MP" => {
            arity(2)?;
            Ok(Justification::ModusPonens(index(rest[0])?, index(rest[1])?))
        }
        "GEN" => {
            arity(2)?;
            Ok(Justification::Generalization(index(rest[0])?, parse_var(rest[1]).map_err(syntax)?))
        }
        _ => {
            let schema = Schema::from_id(rule).ok_or_else(|| ProofParseError::UnknownRule { line, word: rule.into() })?;
            arity(schema.signature().len())?;
            let args = rest
                .iter()
                .zip(schema.signature())
                .map(|(w, kind)| match kind {
                    ArgKind::Formula => parse_formula(w).map(Arg::Formula),
                    ArgKind::Term => parse_term(w).map(Arg::Term),
                    ArgKind::Var => parse_var(w).map(Arg::Var),
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(syntax)?;
            Ok(Justification::Axiom { schema, args })
        }
    }
}
