//! BPMN 2.0 XML reader for the supported subset.
//!
//! Elements are matched by local name so that namespace prefixes do not
//! matter. Element kinds outside the subset are reported as
//! `UnsupportedElement` rather than silently dropped; unknown attributes
//! are ignored.

use std::collections::BTreeMap;

use quick_xml::events::Event;
use quick_xml::Reader;

use super::{
    BpmnError, CondOp, Condition, Diagram, FlowNode, FlowNodeKind, MessageFlow, Participant,
    ParticipantBody, ProcessGraph, SequenceFlow, TaskKind,
};

/// A generic element tree, enough structure to interpret the subset.
struct Elem {
    name: String,
    attrs: BTreeMap<String, String>,
    text: String,
    children: Vec<Elem>,
}

impl Elem {
    fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.get(key).map(String::as_str)
    }

    fn id(&self) -> String {
        self.attr("id").unwrap_or("").to_string()
    }

    fn child(&self, name: &str) -> Option<&Elem> {
        self.children.iter().find(|c| c.name == name)
    }

    fn has_child(&self, name: &str) -> bool {
        self.child(name).is_some()
    }
}

fn read_tree(xml: &[u8]) -> Result<Elem, BpmnError> {
    let mut reader = Reader::from_reader(xml);
    reader.config_mut().trim_text(true);
    let mut buf = Vec::new();
    let mut stack: Vec<Elem> = vec![];
    let mut root: Option<Elem> = None;
    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| BpmnError::MalformedXml(e.to_string()))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let name = String::from_utf8_lossy(e.local_name().as_ref()).into_owned();
                let mut attrs = BTreeMap::new();
                for attr in e.attributes() {
                    let attr = attr.map_err(|e| BpmnError::MalformedXml(e.to_string()))?;
                    let key = String::from_utf8_lossy(attr.key.local_name().as_ref()).into_owned();
                    let value = attr
                        .unescape_value()
                        .map_err(|e| BpmnError::MalformedXml(e.to_string()))?
                        .into_owned();
                    attrs.insert(key, value);
                }
                stack.push(Elem { name, attrs, text: String::new(), children: vec![] });
                // Empty elements produce no End event, so close at once.
                if matches!(event, Event::Empty(_)) {
                    close_top(&mut stack, &mut root);
                }
            }
            Event::End(_) => close_top(&mut stack, &mut root),
            Event::Text(t) => {
                if let Some(top) = stack.last_mut() {
                    let text = t
                        .unescape()
                        .map_err(|e| BpmnError::MalformedXml(e.to_string()))?;
                    top.text.push_str(text.trim());
                }
            }
            Event::CData(t) => {
                if let Some(top) = stack.last_mut() {
                    top.text.push_str(String::from_utf8_lossy(&t).trim());
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if !stack.is_empty() {
        return Err(BpmnError::MalformedXml("unclosed element".into()));
    }
    root.ok_or_else(|| BpmnError::MalformedXml("empty document".into()))
}

fn close_top(stack: &mut Vec<Elem>, root: &mut Option<Elem>) {
    if let Some(done) = stack.pop() {
        match stack.last_mut() {
            Some(parent) => parent.children.push(done),
            None => *root = Some(done),
        }
    }
}

/// Parses a BPMN XML document into a [`Diagram`].
pub fn parse_diagram(xml: &[u8]) -> Result<Diagram, BpmnError> {
    let root = read_tree(xml)?;
    if root.name == "process" {
        return Ok(Diagram::SingleProcess(parse_process(&root, None)?));
    }
    let definitions = &root;
    let collaboration = definitions.children.iter().find(|c| c.name == "collaboration");
    let processes: Vec<&Elem> =
        definitions.children.iter().filter(|c| c.name == "process").collect();
    for child in &definitions.children {
        if child.name == "choreography" {
            return Err(BpmnError::UnsupportedElement {
                kind: "choreography".into(),
                id: child.id(),
            });
        }
    }
    match collaboration {
        Some(collab) => parse_collaboration(collab, &processes),
        None => match processes.as_slice() {
            [single] => Ok(Diagram::SingleProcess(parse_process(single, None)?)),
            [] => Err(BpmnError::MalformedXml("no process or collaboration element".into())),
            _ => Err(BpmnError::UnsupportedElement {
                kind: "multiple processes without a collaboration".into(),
                id: processes[1].id(),
            }),
        },
    }
}

fn parse_collaboration(collab: &Elem, processes: &[&Elem]) -> Result<Diagram, BpmnError> {
    let by_id: BTreeMap<String, &Elem> =
        processes.iter().map(|p| (p.id(), *p)).collect();
    let mut participants = vec![];
    let mut message_flows = vec![];
    for child in &collab.children {
        match child.name.as_str() {
            "participant" => {
                let id = child.id();
                let body = match child.attr("processRef") {
                    Some(pref) => {
                        let proc = by_id.get(pref).ok_or_else(|| BpmnError::UnresolvedReference {
                            id: pref.to_string(),
                        })?;
                        ParticipantBody::Process(parse_process(proc, None)?)
                    }
                    None => ParticipantBody::BlackBox,
                };
                participants.push(Participant {
                    id,
                    name: child.attr("name").map(str::to_string),
                    body,
                });
            }
            "messageFlow" => {
                let id = child.id();
                let source = require_attr(child, "sourceRef")?;
                let target = require_attr(child, "targetRef")?;
                message_flows.push(MessageFlow { id, source, target, phantom: false });
            }
            "documentation" | "extensionElements" => {}
            other => {
                return Err(BpmnError::UnsupportedElement {
                    kind: other.to_string(),
                    id: child.id(),
                })
            }
        }
    }
    // Referential integrity of message-flow endpoints; pool-to-pool
    // flows are outside the subset (a flow must touch a flow node).
    for mf in &message_flows {
        let src = resolve_endpoint(&participants, &mf.source);
        let tgt = resolve_endpoint(&participants, &mf.target);
        match (src, tgt) {
            (None, _) => {
                return Err(BpmnError::UnresolvedReference { id: mf.source.clone() })
            }
            (_, None) => {
                return Err(BpmnError::UnresolvedReference { id: mf.target.clone() })
            }
            (Some(Endpoint::Pool), Some(Endpoint::Pool)) => {
                return Err(BpmnError::UnsupportedElement {
                    kind: "messageFlow between two pools".into(),
                    id: mf.id.clone(),
                })
            }
            _ => {}
        }
    }
    Ok(Diagram::Collaboration { participants, message_flows })
}

pub(super) enum Endpoint {
    Pool,
    Node,
}

/// Resolves a message-flow endpoint to a participant or a flow node in
/// any participant, searching sub-process bodies too.
pub(super) fn resolve_endpoint(participants: &[Participant], id: &str) -> Option<Endpoint> {
    for p in participants {
        if p.id == id {
            return Some(Endpoint::Pool);
        }
        if let ParticipantBody::Process(g) = &p.body {
            if graph_contains(g, id) {
                return Some(Endpoint::Node);
            }
        }
    }
    None
}

fn graph_contains(g: &ProcessGraph, id: &str) -> bool {
    g.nodes.contains_key(id)
        || g.nodes.values().any(|n| match &n.kind {
            FlowNodeKind::SubProcess { body, .. } => graph_contains(body, id),
            _ => false,
        })
}

fn require_attr(e: &Elem, key: &str) -> Result<String, BpmnError> {
    e.attr(key)
        .map(str::to_string)
        .ok_or_else(|| BpmnError::MalformedXml(format!("element '{}' lacks {key}", e.id())))
}

fn parse_process(proc: &Elem, parent: Option<&str>) -> Result<ProcessGraph, BpmnError> {
    let mut nodes = BTreeMap::new();
    let mut sequence_flows = vec![];
    for child in &proc.children {
        let id = child.id();
        let name = child.attr("name").map(str::to_string);
        let kind = match child.name.as_str() {
            "startEvent" => FlowNodeKind::StartEvent { is_message: message_event(child)? },
            "endEvent" => FlowNodeKind::EndEvent { is_message: message_event(child)? },
            "intermediateCatchEvent" => {
                require_message_event(child)?;
                FlowNodeKind::IntermediateCatchEvent
            }
            "intermediateThrowEvent" => {
                require_message_event(child)?;
                FlowNodeKind::IntermediateThrowEvent
            }
            "task" => task_kind(child, TaskKind::Abstract)?,
            "sendTask" => task_kind(child, TaskKind::Send)?,
            "receiveTask" => task_kind(child, TaskKind::Receive)?,
            "userTask" => task_kind(child, TaskKind::User)?,
            "manualTask" => task_kind(child, TaskKind::Manual)?,
            "parallelGateway" => gateway(child, FlowNodeKind::ParallelGateway)?,
            "exclusiveGateway" => gateway(child, FlowNodeKind::ExclusiveGateway)?,
            "subProcess" => {
                if child.has_child("standardLoopCharacteristics") {
                    return Err(BpmnError::UnsupportedElement {
                        kind: "standardLoopCharacteristics".into(),
                        id,
                    });
                }
                let multi = match child.child("multiInstanceLoopCharacteristics") {
                    Some(mi) => mi.attr("isSequential") != Some("true"),
                    None => false,
                };
                let body = parse_process(child, Some(&id))?;
                FlowNodeKind::SubProcess { body, multi_instance_parallel: multi }
            }
            "sequenceFlow" => {
                let source = require_attr(child, "sourceRef")?;
                let target = require_attr(child, "targetRef")?;
                let condition = match child.child("conditionExpression") {
                    Some(c) => Some(parse_condition(&c.text, &id)?),
                    None => None,
                };
                sequence_flows.push(SequenceFlow { id, source, target, condition });
                continue;
            }
            "documentation" | "extensionElements" | "multiInstanceLoopCharacteristics" => continue,
            // Everything else (lanes, data objects/stores, boundary
            // events, complex/inclusive/event-based gateways, call
            // activities, non-subset task kinds, ...) is outside the
            // subset.
            other => {
                return Err(BpmnError::UnsupportedElement { kind: other.to_string(), id })
            }
        };
        nodes.insert(id.clone(), FlowNode { id, name, kind });
    }
    for f in &sequence_flows {
        for end in [&f.source, &f.target] {
            if !nodes.contains_key(end) {
                return Err(BpmnError::UnresolvedReference { id: end.clone() });
            }
        }
    }
    Ok(ProcessGraph {
        id: proc.id(),
        nodes,
        sequence_flows,
        parent: parent.map(str::to_string),
    })
}

fn task_kind(child: &Elem, kind: TaskKind) -> Result<FlowNodeKind, BpmnError> {
    for marker in ["standardLoopCharacteristics", "multiInstanceLoopCharacteristics"] {
        if child.has_child(marker) {
            return Err(BpmnError::UnsupportedElement {
                kind: format!("{marker} on a task"),
                id: child.id(),
            });
        }
    }
    Ok(FlowNodeKind::Task { task_kind: kind })
}

fn gateway(child: &Elem, kind: FlowNodeKind) -> Result<FlowNodeKind, BpmnError> {
    if child.attr("default").is_some() {
        return Err(BpmnError::UnsupportedElement {
            kind: "default flow".into(),
            id: child.id(),
        });
    }
    Ok(kind)
}

/// True when the event carries a message definition; any other event
/// definition kind is outside the subset.
fn message_event(e: &Elem) -> Result<bool, BpmnError> {
    let mut is_message = false;
    for c in &e.children {
        if c.name == "messageEventDefinition" {
            is_message = true;
        } else if c.name.ends_with("EventDefinition") {
            return Err(BpmnError::UnsupportedElement { kind: c.name.clone(), id: e.id() });
        }
    }
    Ok(is_message)
}

fn require_message_event(e: &Elem) -> Result<(), BpmnError> {
    if message_event(e)? {
        Ok(())
    } else {
        Err(BpmnError::UnsupportedElement {
            kind: "intermediate event without a message definition".into(),
            id: e.id(),
        })
    }
}

/// Parses condition text of the exact shape `<msgname> == <value>` or
/// `<msgname> != <value>`.
fn parse_condition(text: &str, flow_id: &str) -> Result<Condition, BpmnError> {
    let (op, parts) = if let Some(p) = text.split_once("==") {
        (CondOp::Eq, p)
    } else if let Some(p) = text.split_once("!=") {
        (CondOp::Neq, p)
    } else {
        return Err(BpmnError::UnsupportedElement {
            kind: format!("condition expression '{text}'"),
            id: flow_id.to_string(),
        });
    };
    let message = parts.0.trim();
    let value = parts.1.trim();
    if message.is_empty()
        || value.is_empty()
        || message.contains(char::is_whitespace)
        || value.contains(char::is_whitespace)
    {
        return Err(BpmnError::UnsupportedElement {
            kind: format!("condition expression '{text}'"),
            id: flow_id.to_string(),
        });
    }
    Ok(Condition { message: message.to_string(), op, value: value.to_string() })
}
