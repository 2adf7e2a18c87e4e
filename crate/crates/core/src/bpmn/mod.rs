//! Typed model of the supported BPMN 2.0 subset: diagrams, processes,
//! flow nodes, sequence and message flows, plus the structural validator
//! that enforces the conventions the conversion relies on.

use std::collections::{BTreeMap, BTreeSet};

mod parse;
mod validate;

#[cfg(test)]
mod tests;

pub use parse::parse_diagram;
pub use validate::validate;

/// A parsed diagram: a single process or a collaboration of pools.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagram {
    SingleProcess(ProcessGraph),
    Collaboration { participants: Vec<Participant>, message_flows: Vec<MessageFlow> },
}

/// A pool: either a process diagram or an opaque black box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub id: String,
    pub name: Option<String>,
    pub body: ParticipantBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParticipantBody {
    Process(ProcessGraph),
    BlackBox,
}

/// Flow nodes and sequence flows of a process or sub-process body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessGraph {
    pub id: String,
    pub nodes: BTreeMap<String, FlowNode>,
    pub sequence_flows: Vec<SequenceFlow>,
    /// Id of the enclosing sub-process node, for sub-process bodies.
    pub parent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNode {
    pub id: String,
    pub name: Option<String>,
    pub kind: FlowNodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowNodeKind {
    StartEvent { is_message: bool },
    EndEvent { is_message: bool },
    IntermediateCatchEvent,
    IntermediateThrowEvent,
    Task { task_kind: TaskKind },
    ParallelGateway,
    ExclusiveGateway,
    SubProcess { body: ProcessGraph, multi_instance_parallel: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Abstract,
    Send,
    Receive,
    User,
    Manual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFlow {
    pub id: String,
    pub source: String,
    pub target: String,
    pub condition: Option<Condition>,
}

/// A guard on a sequence flow leaving a Receive Task: compares the
/// received message to a constant value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub message: String,
    pub op: CondOp,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondOp {
    Eq,
    Neq,
}

/// A message edge between pools. Endpoints are node ids or participant
/// ids. Phantom flows are not drawn in the diagram; they are synthesized
/// from configuration for nodes that require a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageFlow {
    pub id: String,
    pub source: String,
    pub target: String,
    pub phantom: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub node_or_flow: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationCode {
    StartHasIn,
    EndHasOut,
    MissingStart,
    MissingEnd,
    TaskMultiIn,
    TaskMultiMsg,
    SubprocMultiIn,
    SubprocMsgflow,
    IntermediateMultiIn,
    GatewayDegenerate,
    ExclusiveNotConverging,
    CondNotFromReceive,
    MsgflowSamePool,
    OrphanNode,
    BackwardFlow,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::StartHasIn => "START_HAS_IN",
            ViolationCode::EndHasOut => "END_HAS_OUT",
            ViolationCode::MissingStart => "MISSING_START",
            ViolationCode::MissingEnd => "MISSING_END",
            ViolationCode::TaskMultiIn => "TASK_MULTI_IN",
            ViolationCode::TaskMultiMsg => "TASK_MULTI_MSG",
            ViolationCode::SubprocMultiIn => "SUBPROC_MULTI_IN",
            ViolationCode::SubprocMsgflow => "SUBPROC_MSGFLOW",
            ViolationCode::IntermediateMultiIn => "INTERMEDIATE_MULTI_IN",
            ViolationCode::GatewayDegenerate => "GATEWAY_DEGENERATE",
            ViolationCode::ExclusiveNotConverging => "EXCLUSIVE_NOT_CONVERGING",
            ViolationCode::CondNotFromReceive => "COND_NOT_FROM_RECEIVE",
            ViolationCode::MsgflowSamePool => "MSGFLOW_SAME_POOL",
            ViolationCode::OrphanNode => "ORPHAN_NODE",
            ViolationCode::BackwardFlow => "BACKWARD_FLOW",
        }
    }
}

impl std::fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BpmnError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("unresolved reference to '{id}'")]
    UnresolvedReference { id: String },
    #[error("unsupported element: {kind} (id '{id}')")]
    UnsupportedElement { kind: String, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown node '{0}'")]
pub struct UnknownNode(pub String);

impl ProcessGraph {
    /// All start event node ids, in ascending id order.
    pub fn start_events(&self) -> Vec<&FlowNode> {
        self.nodes
            .values()
            .filter(|n| matches!(n.kind, FlowNodeKind::StartEvent { .. }))
            .collect()
    }

    pub fn end_events(&self) -> Vec<&FlowNode> {
        self.nodes
            .values()
            .filter(|n| matches!(n.kind, FlowNodeKind::EndEvent { .. }))
            .collect()
    }

    pub fn incoming(&self, node: &str) -> Vec<&SequenceFlow> {
        self.sequence_flows.iter().filter(|f| f.target == node).collect()
    }

    pub fn outgoing(&self, node: &str) -> Vec<&SequenceFlow> {
        self.sequence_flows.iter().filter(|f| f.source == node).collect()
    }
}

/// Forward closure over sequence flows from `start`, including `start`.
pub fn reachable_from(p: &ProcessGraph, start: &str) -> Result<BTreeSet<String>, UnknownNode> {
    if !p.nodes.contains_key(start) {
        return Err(UnknownNode(start.to_string()));
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![start.to_string()];
    while let Some(n) = stack.pop() {
        if !seen.insert(n.clone()) {
            continue;
        }
        for f in &p.sequence_flows {
            if f.source == n && !seen.contains(&f.target) {
                stack.push(f.target.clone());
            }
        }
    }
    Ok(seen)
}
