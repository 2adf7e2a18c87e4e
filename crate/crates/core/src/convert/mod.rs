//! Translation of validated diagrams into Privacy Calculus terms: the
//! flow patterns as reusable combinators and the per-element conversions
//! built on them.

use std::collections::{BTreeMap, BTreeSet};

use crate::bpmn::Violation;
use crate::calculus::{Group, Name, PrivType, System};

mod diagram;
mod element;
mod patterns;


pub use diagram::{convert_collaboration, convert_process};
pub use patterns::{join_pattern, split_pattern, sync_pattern, JoinKind, SplitKind};

/// Everything the conversion needs beyond the diagram itself: names for
/// tokens and fresh channels, group/purpose per process, and message
/// details per (real or phantom) message flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionConfig {
    pub token_type_name: String,
    pub token_value_name: String,
    pub fresh_prefix: String,
    /// Keyed by process or participant id.
    pub process_meta: BTreeMap<String, ProcessMeta>,
    /// Keyed by message-flow id.
    pub message_meta: BTreeMap<String, MessageMeta>,
    /// Phantom message flows, keyed by the flow node they attach to.
    pub phantoms: BTreeMap<String, PhantomMeta>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessMeta {
    pub group: Group,
    pub purpose: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageMeta {
    pub message_name: String,
    pub message_type: PrivType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhantomMeta {
    pub channel: String,
    pub message_name: String,
    pub message_type: PrivType,
}

/// The converted system together with the typing context of its free
/// names and every identifier that needs a declaration downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionOutput {
    pub system: System,
    pub context: BTreeMap<Name, PrivType>,
    pub declarations: Declarations,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Declarations {
    pub groups: BTreeSet<String>,
    pub purposes: BTreeSet<String>,
    pub basic_types: BTreeSet<String>,
    /// Context variables with their value domains.
    pub context_vars: BTreeMap<String, Vec<String>>,
    pub process_vars: BTreeSet<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConvertError {
    #[error("a flow pattern needs at least one flow")]
    EmptyFlows,
    #[error("m-of-n join needs 1 <= m <= n, got m = {m}, n = {n}")]
    BadM { m: usize, n: usize },
    #[error("node '{0}' needs a message flow (real or phantom) but none is configured")]
    MissingMessageMeta(String),
    #[error("no group/purpose configured for '{0}'")]
    MissingGroup(String),
    #[error("missing configuration: {0}")]
    MissingMeta(String),
    #[error("diagram has {} validation issue(s), first: {}", .0.len(), first_violation(.0))]
    ValidationRequired(Vec<Violation>),
    #[error("token value name '{0}' is already used by a diagram element")]
    TokenNameClash(String),
    #[error("condition on flow '{flow}' compares against '{value}', which is not in the domain of the message type")]
    GuardValueOutsideDomain { flow: String, value: String },
    #[error("end event '{node}' uses message name '{name}' for more than one message flow")]
    DuplicateMessageName { node: String, name: String },
}

fn first_violation(v: &[Violation]) -> String {
    v.first()
        .map(|v| format!("{} {}", v.code, v.node_or_flow))
        .unwrap_or_default()
}

/// Deterministic source of fresh names: `prefix` plus a monotone decimal
/// counter starting at 1, skipping anything in the avoid set or issued
/// earlier.
#[derive(Debug, Clone)]
pub struct FreshNames {
    prefix: String,
    counter: u32,
    avoid: BTreeSet<String>,
}

impl FreshNames {
    pub fn new(prefix: impl Into<String>, avoid: BTreeSet<String>) -> Self {
        FreshNames { prefix: prefix.into(), counter: 0, avoid }
    }

    /// Issues the next fresh name, additionally avoiding `also_avoid`
    /// (typically the free names of the continuation the name must not
    /// capture).
    pub fn fresh(&mut self, also_avoid: &BTreeSet<String>) -> Name {
        loop {
            self.counter += 1;
            let candidate = format!("{}{}", self.prefix, self.counter);
            if !self.avoid.contains(&candidate) && !also_avoid.contains(&candidate) {
                self.avoid.insert(candidate.clone());
                return Name::free(candidate);
            }
        }
    }
}
