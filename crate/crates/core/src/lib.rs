//! Computability workbench core.
//!
//! Pure algorithms only, usable without `std`:
//!
//! * [`tm`]: deterministic Turing machines on a two-way infinite tape, with
//!   translation-invariant canonical instantaneous descriptions.
//! * [`guard`]: guarded execution that records every instantaneous
//!   description and self-terminates on a canonical repeat.
//! * [`godel`]: prime-power Gödel numbering and the β-function
//!   `b mod (1 + (i+1)·c)` with Chinese-remainder fitting.
//! * [`universe`]: property tables, measurement logs, classification,
//!   superposition and next-value estimation over bounded (b, c) boxes.
//! * [`dovetail`]: fair round-robin races of searchers and the μ-operator
//!   totalizer built from them.
//! * [`proofs`]: terms, formulas, a fixed Peano presentation, a linear proof
//!   checker and a resumable proof enumerator.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dovetail;
pub mod godel;
pub mod guard;
pub mod proofs;
pub mod tm;
pub mod universe;

pub use godel::{BetaParams, GodelNumber};
pub use guard::{guarded_run, GuardOptions};
pub use tm::{canonicalize, run, step, CanonicalKey, Configuration, MachineSpec, RunOutcome};
