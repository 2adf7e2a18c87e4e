//! Structural validation of parsed diagrams against the conventions the
//! conversion relies on. Violations are data, not failures: the full
//! list is always returned.

use std::collections::{BTreeMap, HashMap};

use super::parse::{resolve_endpoint, Endpoint};
use super::{
    Diagram, FlowNodeKind, MessageFlow, Participant, ParticipantBody, ProcessGraph, TaskKind,
    Violation, ViolationCode,
};

/// Checks every rule of the closed violation set and returns all
/// violations found, ordered by code and then by the offending id.
pub fn validate(d: &Diagram) -> Vec<Violation> {
    let mut out = vec![];
    match d {
        Diagram::SingleProcess(p) => validate_graph(p, &mut out),
        Diagram::Collaboration { participants, message_flows } => {
            for p in participants {
                if let ParticipantBody::Process(g) = &p.body {
                    validate_graph(g, &mut out);
                }
            }
            validate_message_flows(participants, message_flows, &mut out);
        }
    }
    out.sort_by(|a, b| (a.code, &a.node_or_flow).cmp(&(b.code, &b.node_or_flow)));
    out
}

fn push(out: &mut Vec<Violation>, code: ViolationCode, id: &str, message: String) {
    out.push(Violation { code, node_or_flow: id.to_string(), message });
}

fn validate_graph(g: &ProcessGraph, out: &mut Vec<Violation>) {
    let mut in_deg: HashMap<&str, usize> = HashMap::new();
    let mut out_deg: HashMap<&str, usize> = HashMap::new();
    for f in &g.sequence_flows {
        *out_deg.entry(f.source.as_str()).or_insert(0) += 1;
        *in_deg.entry(f.target.as_str()).or_insert(0) += 1;
    }
    let deg = |m: &HashMap<&str, usize>, id: &str| m.get(id).copied().unwrap_or(0);

    let has_start = !g.start_events().is_empty();
    if !has_start {
        push(
            out,
            ViolationCode::MissingStart,
            &g.id,
            format!("process '{}' has no start event", g.id),
        );
    }
    if g.end_events().is_empty() {
        push(
            out,
            ViolationCode::MissingEnd,
            &g.id,
            format!("process '{}' has no end event", g.id),
        );
    }

    for node in g.nodes.values() {
        let ins = deg(&in_deg, &node.id);
        let outs = deg(&out_deg, &node.id);
        // Set when a more specific rule already covered this node's
        // missing incoming flow, to avoid double-reporting it as orphan.
        let mut in_degree_flagged = false;
        match &node.kind {
            FlowNodeKind::StartEvent { .. } => {
                if ins > 0 {
                    push(
                        out,
                        ViolationCode::StartHasIn,
                        &node.id,
                        format!("start event '{}' has an incoming sequence flow", node.id),
                    );
                }
            }
            FlowNodeKind::EndEvent { .. } => {
                if outs > 0 {
                    push(
                        out,
                        ViolationCode::EndHasOut,
                        &node.id,
                        format!("end event '{}' has an outgoing sequence flow", node.id),
                    );
                }
            }
            FlowNodeKind::Task { .. } => {
                if ins != 1 {
                    in_degree_flagged = true;
                    push(
                        out,
                        ViolationCode::TaskMultiIn,
                        &node.id,
                        format!("task '{}' has {ins} incoming sequence flows, expected 1", node.id),
                    );
                }
            }
            FlowNodeKind::SubProcess { body, .. } => {
                if ins != 1 {
                    in_degree_flagged = true;
                    push(
                        out,
                        ViolationCode::SubprocMultiIn,
                        &node.id,
                        format!(
                            "sub-process '{}' has {ins} incoming sequence flows, expected 1",
                            node.id
                        ),
                    );
                }
                validate_graph(body, out);
            }
            FlowNodeKind::IntermediateCatchEvent | FlowNodeKind::IntermediateThrowEvent => {
                if ins > 1 {
                    push(
                        out,
                        ViolationCode::IntermediateMultiIn,
                        &node.id,
                        format!(
                            "intermediate event '{}' has {ins} incoming sequence flows",
                            node.id
                        ),
                    );
                }
            }
            FlowNodeKind::ParallelGateway | FlowNodeKind::ExclusiveGateway => {
                if ins == 0 || outs == 0 {
                    in_degree_flagged = true;
                    push(
                        out,
                        ViolationCode::GatewayDegenerate,
                        &node.id,
                        format!(
                            "gateway '{}' needs incoming and outgoing flows ({ins} in, {outs} out)",
                            node.id
                        ),
                    );
                }
                if matches!(node.kind, FlowNodeKind::ExclusiveGateway) && outs > 1 {
                    push(
                        out,
                        ViolationCode::ExclusiveNotConverging,
                        &node.id,
                        format!(
                            "exclusive gateway '{}' has {outs} outgoing flows; only converging \
                             exclusive gateways are supported",
                            node.id
                        ),
                    );
                }
            }
        }
        let is_start = matches!(node.kind, FlowNodeKind::StartEvent { .. });
        if !is_start && ins == 0 && !in_degree_flagged && has_start {
            push(
                out,
                ViolationCode::OrphanNode,
                &node.id,
                format!("node '{}' has no incoming sequence flow and is not a start event", node.id),
            );
        }
    }

    for f in &g.sequence_flows {
        if f.condition.is_some() {
            let from_receive = matches!(
                g.nodes.get(&f.source).map(|n| &n.kind),
                Some(FlowNodeKind::Task { task_kind: TaskKind::Receive })
            );
            if !from_receive {
                push(
                    out,
                    ViolationCode::CondNotFromReceive,
                    &f.id,
                    format!("conditional flow '{}' does not leave a receive task", f.id),
                );
            }
        }
    }

    if let Some(flow_id) = find_back_edge(g) {
        push(
            out,
            ViolationCode::BackwardFlow,
            &flow_id,
            format!("sequence flow '{flow_id}' closes a cycle"),
        );
    }
}

/// Finds one sequence flow closing a cycle, if any, by depth-first
/// search from every node in ascending id order.
fn find_back_edge(g: &ProcessGraph) -> Option<String> {
    let mut succ: BTreeMap<&str, Vec<&super::SequenceFlow>> = BTreeMap::new();
    for f in &g.sequence_flows {
        succ.entry(f.source.as_str()).or_default().push(f);
    }
    // Colors: 0 unvisited, 1 on stack, 2 done.
    fn visit<'a>(
        v: &'a str,
        succ: &BTreeMap<&'a str, Vec<&'a super::SequenceFlow>>,
        color: &mut HashMap<&'a str, u8>,
    ) -> Option<String> {
        color.insert(v, 1);
        if let Some(flows) = succ.get(v) {
            for f in flows {
                match color.get(f.target.as_str()).copied().unwrap_or(0) {
                    1 => return Some(f.id.clone()),
                    0 => {
                        if let Some(hit) = visit(f.target.as_str(), succ, color) {
                            return Some(hit);
                        }
                    }
                    _ => {}
                }
            }
        }
        color.insert(v, 2);
        None
    }
    let mut color = HashMap::new();
    for id in g.nodes.keys() {
        if color.get(id.as_str()).copied().unwrap_or(0) == 0 {
            if let Some(hit) = visit(id, &succ, &mut color) {
                return Some(hit);
            }
        }
    }
    None
}

fn validate_message_flows(
    participants: &[Participant],
    message_flows: &[MessageFlow],
    out: &mut Vec<Violation>,
) {
    let pool_of = |id: &str| -> Option<String> {
        participants
            .iter()
            .find(|p| {
                p.id == id
                    || matches!(&p.body, ParticipantBody::Process(g) if contains(g, id))
            })
            .map(|p| p.id.clone())
    };
    let mut msg_in: HashMap<&str, usize> = HashMap::new();
    let mut msg_out: HashMap<&str, usize> = HashMap::new();
    for mf in message_flows {
        if let (Some(a), Some(b)) = (pool_of(&mf.source), pool_of(&mf.target)) {
            if a == b {
                push(
                    out,
                    ViolationCode::MsgflowSamePool,
                    &mf.id,
                    format!("message flow '{}' connects two nodes of pool '{a}'", mf.id),
                );
            }
        }
        *msg_out.entry(mf.source.as_str()).or_insert(0) += 1;
        *msg_in.entry(mf.target.as_str()).or_insert(0) += 1;
        for end in [&mf.source, &mf.target] {
            if let Some(Endpoint::Node) = resolve_endpoint(participants, end) {
                if let Some(node) = find_node(participants, end) {
                    if matches!(node, FlowNodeKind::SubProcess { .. }) {
                        push(
                            out,
                            ViolationCode::SubprocMsgflow,
                            &mf.id,
                            format!("message flow '{}' attaches to sub-process '{end}'", mf.id),
                        );
                    }
                }
            }
        }
    }
    for p in participants {
        let ParticipantBody::Process(g) = &p.body else { continue };
        for_each_node(g, &mut |node_id, kind| {
            if matches!(kind, FlowNodeKind::Task { .. }) {
                let ins = msg_in.get(node_id).copied().unwrap_or(0);
                let outs = msg_out.get(node_id).copied().unwrap_or(0);
                if ins > 1 || outs > 1 {
                    push(
                        out,
                        ViolationCode::TaskMultiMsg,
                        node_id,
                        format!("task '{node_id}' has {ins} incoming and {outs} outgoing message flows"),
                    );
                }
            }
        });
    }
}

fn contains(g: &ProcessGraph, id: &str) -> bool {
    g.nodes.contains_key(id)
        || g.nodes.values().any(|n| match &n.kind {
            FlowNodeKind::SubProcess { body, .. } => contains(body, id),
            _ => false,
        })
}

fn find_node<'a>(participants: &'a [Participant], id: &str) -> Option<&'a FlowNodeKind> {
    fn in_graph<'a>(g: &'a ProcessGraph, id: &str) -> Option<&'a FlowNodeKind> {
        if let Some(n) = g.nodes.get(id) {
            return Some(&n.kind);
        }
        g.nodes.values().find_map(|n| match &n.kind {
            FlowNodeKind::SubProcess { body, .. } => in_graph(body, id),
            _ => None,
        })
    }
    participants.iter().find_map(|p| match &p.body {
        ParticipantBody::Process(g) => in_graph(g, id),
        ParticipantBody::BlackBox => None,
    })
}

fn for_each_node(g: &ProcessGraph, f: &mut impl FnMut(&str, &FlowNodeKind)) {
    for n in g.nodes.values() {
        f(&n.id, &n.kind);
        if let FlowNodeKind::SubProcess { body, .. } = &n.kind {
            for_each_node(body, f);
        }
    }
}
