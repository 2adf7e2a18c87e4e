//! Structural congruence, decided by comparing canonical forms.

use thiserror::Error;

use super::nameless::{canonical_process, canonical_system};
use super::{Process, System, Term};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot compare a process with a system for congruence")]
pub struct LevelMismatch;

/// Decides structural congruence of two terms at the same level.
pub fn congruent(t: &Term, u: &Term) -> Result<bool, LevelMismatch> {
    match (t, u) {
        (Term::Process(p), Term::Process(q)) => Ok(congruent_process(p, q)),
        (Term::System(s), Term::System(r)) => Ok(congruent_system(s, r)),
        _ => Err(LevelMismatch),
    }
}

pub fn congruent_process(p: &Process, q: &Process) -> bool {
    canonical_process(p) == canonical_process(q)
}

pub fn congruent_system(s: &System, r: &System) -> bool {
    canonical_system(s) == canonical_system(r)
}
