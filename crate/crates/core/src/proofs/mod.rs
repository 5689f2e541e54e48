//! A small Hilbert-style presentation of first-order arithmetic, proof
//! objects with explicit justifications, their checking relation, and a
//! resumable proof enumerator.
//!
//! # Calculus
//!
//! Metavariables: `B, C, D` formulas, `t, r, s` terms, `x` a variable.
//! `B[x:=t]` is capture-avoiding substitution of `t` for the free
//! occurrences of `x`; an instance whose substitution would capture is
//! rejected, not renamed.
//!
//! | id | arguments | axiom |
//! |----|-----------|-------|
//! | A1 | B, C | `B → (C → B)` |
//! | A2 | B, C, D | `(B → (C → D)) → ((B → C) → (B → D))` |
//! | A3 | B, C | `(¬C → ¬B) → ((¬C → B) → C)` |
//! | A4 | x, B, t | `∀x B → B[x:=t]`, `t` free for `x` in `B` |
//! | A5 | x, B, C | `∀x (B → C) → (B → ∀x C)`, `x` not free in `B` |
//! | S1 | t, r, s | `t = r → (t = s → r = s)` |
//! | S2 | t, r | `t = r → St = Sr` |
//! | S3 | t | `¬(0 = St)` |
//! | S4 | t, r | `St = Sr → t = r` |
//! | S5 | t | `t + 0 = t` |
//! | S6 | t, r | `t + Sr = S(t + r)` |
//! | S7 | t | `t · 0 = 0` |
//! | S8 | t, r | `t · Sr = (t · r) + t` |
//! | S9 | x, B | `B[x:=0] → (∀x (B → B[x:=Sx]) → ∀x B)` |
//!
//! Rules: modus ponens `MP i j` (line `i` is `B`, line `j` is `B → C`,
//! conclude `C`) and generalization `GEN i x` (line `i` is `B`, conclude
//! `∀x B`). Line indices are 0-based and must point strictly backwards.
//!
//! # Text format
//!
//! One line per proof line: `<index>. <formula> ; <justification>`, where the
//! formula is in prefix serialization and the justification is
//! `<schema id> <args…>`, `MP i j` or `GEN i x`. Blank lines and `#` comments
//! are ignored.

mod axioms;
mod check;
mod enumerate;
mod syntax;
mod text;

pub use axioms::{Arg, ArgKind, InstanceError, Schema};
pub use check::{
    check_proof, derive_formula, deserialize_proof, godel_number_proof, proof_from_godel_number, proves,
    serialize_proof, Justification, ProofLine, ProofObject, Reason, Verdict, PROOF_ALPHABET,
};
pub use enumerate::{enumerate_proofs, Candidate, CandidateCursor, Enumeration, ProofEnumerator, Tok};
pub use syntax::{
    formula_alphabet, formula_from_godel_number, godel_number_formula, parse_formula, parse_term, parse_var,
    Formula, SyntaxError, Term, Var, FORMULA_ALPHABET,
};
pub use text::{parse_proof, ProofParseError};
