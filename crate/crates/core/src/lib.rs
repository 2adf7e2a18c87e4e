//! Compiler and analysis toolkit for translating a subset of BPMN 2.0
//! diagrams into Privacy Calculus terms.
//!
//! The pipeline: parse BPMN XML into a typed diagram model ([`bpmn`]),
//! validate the structural conventions the translation relies on,
//! convert flow nodes to calculus terms via the flow patterns
//! ([`convert`]), execute terms under the labelled transition semantics
//! ([`semantics`]), and emit a Maude-style module for downstream policy
//! checking ([`emit`]).

pub mod bpmn;
pub mod calculus;
pub mod cli;
pub mod convert;
pub mod emit;
pub mod semantics;

pub use calculus::{Group, Label, Name, PrivType, Process, RoleKind, System, Term};
