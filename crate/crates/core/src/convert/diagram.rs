//! Conversion of whole processes and collaborations.

use std::collections::{BTreeMap, BTreeSet};

use crate::bpmn::{
    reachable_from, validate, Diagram, FlowNode, FlowNodeKind, MessageFlow, Participant,
    ParticipantBody, ProcessGraph, TaskKind,
};
use crate::calculus::{free_names, Group, Name, PrivType, Process, System, Term};

use super::element::{convert_node, Binding, NodeCtx};
use super::patterns::{split_pattern, SplitKind};
use super::{
    ConversionConfig, ConversionOutput, ConvertError, Declarations, FreshNames, MessageMeta,
    ProcessMeta,
};

/// Converts a validated single process to a lifted system per the
/// process conversion rule: flow binders around a choice over start
/// events of the parallel composition of all reachable nodes.
pub fn convert_process(p: &ProcessGraph, cfg: &ConversionConfig) -> Result<System, ConvertError> {
    let diagram = Diagram::SingleProcess(p.clone());
    let violations = validate(&diagram);
    if !violations.is_empty() {
        return Err(ConvertError::ValidationRequired(violations));
    }
    let mut cx = Ctx::new(&diagram, cfg)?;
    cx.convert_single(p).map(|(system, _)| system)
}

/// Converts a validated diagram of either kind and assembles the typing
/// context and declarations for emission.
pub fn convert_collaboration(
    d: &Diagram,
    cfg: &ConversionConfig,
) -> Result<ConversionOutput, ConvertError> {
    let violations = validate(d);
    if !violations.is_empty() {
        return Err(ConvertError::ValidationRequired(violations));
    }
    let mut cx = Ctx::new(d, cfg)?;
    let system = match d {
        Diagram::SingleProcess(p) => {
            let (system, meta) = cx.convert_single(p)?;
            cx.note_meta(&meta);
            system
        }
        Diagram::Collaboration { participants, message_flows } => {
            cx.convert_pools(participants, message_flows)?
        }
    };
    cx.assemble(system)
}

struct Ctx<'a> {
    cfg: &'a ConversionConfig,
    fresh: FreshNames,
    /// Real message flows incident to each node, ascending by flow id.
    real_in: BTreeMap<String, Vec<Binding>>,
    real_out: BTreeMap<String, Vec<Binding>>,
    /// Phantom channels actually used, with their message types.
    phantom_used: BTreeMap<String, PrivType>,
    /// Message types used anywhere (for declarations and value typing).
    types_used: Vec<PrivType>,
    groups_used: BTreeSet<Group>,
    purposes_used: BTreeSet<String>,
    process_vars: BTreeSet<String>,
}

impl<'a> Ctx<'a> {
    fn new(d: &Diagram, cfg: &'a ConversionConfig) -> Result<Self, ConvertError> {
        let idents = diagram_identifiers(d, cfg);
        if idents.contains(&cfg.token_value_name) {
            return Err(ConvertError::TokenNameClash(cfg.token_value_name.clone()));
        }
        let mut avoid = idents;
        avoid.insert(cfg.token_value_name.clone());
        avoid.insert(cfg.token_type_name.clone());
        let mut cx = Ctx {
            cfg,
            fresh: FreshNames::new(cfg.fresh_prefix.clone(), avoid),
            real_in: BTreeMap::new(),
            real_out: BTreeMap::new(),
            phantom_used: BTreeMap::new(),
            types_used: vec![PrivType::basic(&cfg.token_type_name)],
            groups_used: BTreeSet::new(),
            purposes_used: BTreeSet::new(),
            process_vars: BTreeSet::new(),
        };
        if let Diagram::Collaboration { message_flows, .. } = d {
            let mut flows: Vec<&MessageFlow> = message_flows.iter().collect();
            flows.sort_by(|a, b| a.id.cmp(&b.id));
            for mf in flows {
                let meta = cx.message_meta(&mf.id)?;
                let binding = Binding {
                    channel: Name::free(&mf.id),
                    message: meta.message_name.clone(),
                    ty: meta.message_type.clone(),
                };
                cx.types_used.push(meta.message_type.clone());
                cx.real_out.entry(mf.source.clone()).or_default().push(binding.clone());
                cx.real_in.entry(mf.target.clone()).or_default().push(binding);
            }
        }
        Ok(cx)
    }

    fn message_meta(&self, flow_id: &str) -> Result<&'a MessageMeta, ConvertError> {
        self.cfg
            .message_meta
            .get(flow_id)
            .ok_or_else(|| ConvertError::MissingMeta(format!("messages.{flow_id}")))
    }

    fn meta_for(&self, keys: &[&str]) -> Result<ProcessMeta, ConvertError> {
        for key in keys {
            if let Some(m) = self.cfg.process_meta.get(*key) {
                return Ok(m.clone());
            }
        }
        Err(ConvertError::MissingGroup(keys.join("/")))
    }

    fn note_meta(&mut self, meta: &ProcessMeta) {
        self.groups_used.insert(meta.group.clone());
        self.purposes_used.insert(meta.purpose.clone());
    }

    fn convert_single(&mut self, p: &ProcessGraph) -> Result<(System, ProcessMeta), ConvertError> {
        let meta = self.meta_for(&[&p.id])?;
        self.groups_used.insert(meta.group.clone());
        self.purposes_used.insert(meta.purpose.clone());
        let body = self.convert_graph(p, &meta.group, None)?;
        Ok((System::lift(meta.group.clone(), meta.purpose.clone(), body), meta))
    }

    fn convert_pools(
        &mut self,
        participants: &[Participant],
        message_flows: &[MessageFlow],
    ) -> Result<System, ConvertError> {
        let mut sorted: Vec<&Participant> = participants.iter().collect();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let mut systems = vec![];
        let mut group_of_pool: BTreeMap<String, Group> = BTreeMap::new();
        for p in sorted {
            let meta = match &p.body {
                ParticipantBody::Process(g) => self.meta_for(&[&p.id, &g.id])?,
                ParticipantBody::BlackBox => self.meta_for(&[&p.id])?,
            };
            self.note_meta(&meta);
            group_of_pool.insert(p.id.clone(), meta.group.clone());
            let body = match &p.body {
                ParticipantBody::Process(g) => self.convert_graph(g, &meta.group, None)?,
                ParticipantBody::BlackBox => {
                    let var = process_var_name(&meta.group);
                    self.process_vars.insert(var.clone());
                    Process::Var { id: var }
                }
            };
            systems.push(System::lift(meta.group.clone(), meta.purpose.clone(), body));
        }
        let mut system = System::par_all(systems);

        let pool_of = |endpoint: &str| -> Option<&str> {
            participants
                .iter()
                .find(|p| {
                    p.id == endpoint
                        || matches!(&p.body, ParticipantBody::Process(g) if graph_contains(g, endpoint))
                })
                .map(|p| p.id.as_str())
        };
        let mut flows: Vec<&MessageFlow> = message_flows.iter().collect();
        flows.sort_by(|a, b| a.id.cmp(&b.id));
        let mut union_groups = vec![];
        for mf in flows.iter().rev() {
            let src_pool = pool_of(&mf.source)
                .ok_or_else(|| ConvertError::MissingMeta(format!("pool of '{}'", mf.source)))?;
            let tgt_pool = pool_of(&mf.target)
                .ok_or_else(|| ConvertError::MissingMeta(format!("pool of '{}'", mf.target)))?;
            // Orient the union by pool id so both directions of traffic
            // between the same two pools share one group.
            let (first, second) =
                if src_pool <= tgt_pool { (src_pool, tgt_pool) } else { (tgt_pool, src_pool) };
            let union =
                Group::union(group_of_pool[first].clone(), group_of_pool[second].clone());
            let meta = self.message_meta(&mf.id)?;
            system = System::new_name(
                &mf.id,
                PrivType::group(union.clone(), meta.message_type.clone()),
                system,
            );
            union_groups.push(union);
        }
        // Binders were added innermost-last, so reverse back to flow
        // order and bind each distinct union group once, outermost.
        union_groups.reverse();
        let mut seen = BTreeSet::new();
        let distinct: Vec<Group> = union_groups
            .into_iter()
            .filter(|g| seen.insert(g.clone()))
            .collect();
        for g in distinct.into_iter().rev() {
            self.groups_used.insert(g.clone());
            system = System::group_bind(g, system);
        }
        Ok(system)
    }

    /// The §process-rule body for one graph; `sub_cont` is the parallel
    /// split handed to end events of sub-process bodies.
    fn convert_graph(
        &mut self,
        g: &ProcessGraph,
        group: &Group,
        sub_cont: Option<&Process>,
    ) -> Result<Process, ConvertError> {
        let starts = g.start_events();
        if starts.is_empty() {
            return Err(ConvertError::ValidationRequired(vec![]));
        }
        let mut union_reach: BTreeSet<String> = BTreeSet::new();
        let mut summands = vec![];
        for e in &starts {
            let reach = reachable_from(g, &e.id).expect("start event exists in its graph");
            let mut factors = vec![];
            for id in &reach {
                factors.push(self.convert_one(g, &g.nodes[id], group, sub_cont)?);
            }
            union_reach.extend(reach);
            summands.push(Process::par_all(factors));
        }
        let mut body = Process::choice_all(summands);
        let flow_ty = PrivType::group(group.clone(), PrivType::basic(&self.cfg.token_type_name));
        let mut flows: Vec<&str> = g
            .sequence_flows
            .iter()
            .filter(|f| union_reach.contains(&f.source))
            .map(|f| f.id.as_str())
            .collect();
        flows.sort();
        for f in flows.iter().rev() {
            body = Process::new_name(*f, flow_ty.clone(), body);
        }
        Ok(body)
    }

    fn convert_one(
        &mut self,
        g: &ProcessGraph,
        node: &FlowNode,
        group: &Group,
        sub_cont: Option<&Process>,
    ) -> Result<Process, ConvertError> {
        let mut incoming: Vec<&str> = g.incoming(&node.id).iter().map(|f| f.id.as_str()).collect();
        incoming.sort();
        let mut out_flows: Vec<_> = g.outgoing(&node.id);
        out_flows.sort_by(|a, b| a.id.cmp(&b.id));
        let outgoing: Vec<(Name, Option<crate::bpmn::Condition>)> = out_flows
            .iter()
            .map(|f| (Name::free(&f.id), f.condition.clone()))
            .collect();

        let msg_in = self.bindings_for(node, true)?;
        let msg_out = self.bindings_for(node, false)?;

        let sub_body = match &node.kind {
            FlowNodeKind::SubProcess { body, .. } => {
                let outs: Vec<Name> = outgoing.iter().map(|(f, _)| f.clone()).collect();
                let cont = split_pattern(
                    SplitKind::Parallel,
                    &outs,
                    &Name::free(&self.cfg.token_value_name),
                )?;
                Some(self.convert_graph(body, group, Some(&cont))?)
            }
            _ => None,
        };

        let token_name = self.cfg.token_value_name.clone();
        let token_type = self.cfg.token_type_name.clone();
        let mut ctx = NodeCtx {
            incoming: incoming.iter().map(|f| Name::free(*f)).collect(),
            outgoing,
            msg_in,
            msg_out,
            group,
            token_name: &token_name,
            token_type: &token_type,
            sub_cont: sub_cont.cloned(),
            sub_body,
            fresh: &mut self.fresh,
        };
        convert_node(node, &mut ctx)
    }

    /// Real message bindings for a node, falling back to the configured
    /// phantom flow when the node's kind requires a message in this
    /// direction and none is drawn.
    fn bindings_for(&mut self, node: &FlowNode, incoming: bool) -> Result<Vec<Binding>, ConvertError> {
        let real = if incoming { &self.real_in } else { &self.real_out };
        if let Some(bindings) = real.get(&node.id) {
            if !bindings.is_empty() {
                return Ok(bindings.clone());
            }
        }
        let required = matches!(
            (&node.kind, incoming),
            (FlowNodeKind::StartEvent { is_message: true }, true)
                | (FlowNodeKind::EndEvent { is_message: true }, false)
                | (FlowNodeKind::IntermediateCatchEvent, true)
                | (FlowNodeKind::IntermediateThrowEvent, false)
                | (FlowNodeKind::Task { task_kind: TaskKind::Receive }, true)
                | (FlowNodeKind::Task { task_kind: TaskKind::Send }, false)
        );
        if !required {
            return Ok(vec![]);
        }
        let ph = self
            .cfg
            .phantoms
            .get(&node.id)
            .ok_or_else(|| ConvertError::MissingMessageMeta(node.id.clone()))?;
        self.phantom_used.insert(ph.channel.clone(), ph.message_type.clone());
        self.types_used.push(ph.message_type.clone());
        Ok(vec![Binding {
            channel: Name::free(&ph.channel),
            message: ph.message_name.clone(),
            ty: ph.message_type.clone(),
        }])
    }

    /// Builds the typing context of the system's free names and the
    /// declaration lists for emission.
    fn assemble(self, system: System) -> Result<ConversionOutput, ConvertError> {
        let mut declarations = Declarations::default();
        for g in &self.groups_used {
            for atom in g.atoms() {
                declarations.groups.insert(atom.to_string());
            }
        }
        declarations.purposes = self.purposes_used.clone();
        declarations.process_vars = self.process_vars.clone();
        let mut value_types: BTreeMap<String, PrivType> = BTreeMap::new();
        for ty in &self.types_used {
            collect_type(ty, &mut declarations, &mut value_types);
        }

        let mut context = BTreeMap::new();
        for name in free_names(&Term::System(system.clone())) {
            let ty = if let Some(ty) = self.phantom_used.get(&name.base) {
                ty.clone()
            } else if let Some(ty) = value_types.get(&name.base) {
                ty.clone()
            } else {
                return Err(ConvertError::MissingMeta(format!(
                    "type for free name '{name}'"
                )));
            };
            context.insert(name, ty);
        }
        Ok(ConversionOutput { system, context, declarations })
    }
}

fn collect_type(
    ty: &PrivType,
    declarations: &mut Declarations,
    value_types: &mut BTreeMap<String, PrivType>,
) {
    match ty {
        PrivType::Basic { id } => {
            declarations.basic_types.insert(id.clone());
        }
        PrivType::ContextVar { id, domain } => {
            declarations.context_vars.insert(id.clone(), domain.clone());
            for v in domain {
                value_types.entry(v.clone()).or_insert_with(|| ty.clone());
            }
        }
        PrivType::GroupType { group, inner } => {
            for atom in group.atoms() {
                declarations.groups.insert(atom.to_string());
            }
            collect_type(inner, declarations, value_types);
        }
    }
}

/// Variable standing for an unknown black-box process, named after its
/// group (union atoms joined with underscores).
fn process_var_name(group: &Group) -> String {
    let atoms: Vec<String> = group.atoms().iter().map(|a| a.to_string()).collect();
    format!("P_{}", atoms.join("_"))
}

fn graph_contains(g: &ProcessGraph, id: &str) -> bool {
    g.nodes.contains_key(id)
        || g.nodes.values().any(|n| match &n.kind {
            FlowNodeKind::SubProcess { body, .. } => graph_contains(body, id),
            _ => false,
        })
}

/// Every identifier a diagram or its configuration introduces; the token
/// value name must not collide with any of these.
fn diagram_identifiers(d: &Diagram, cfg: &ConversionConfig) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn walk(g: &ProcessGraph, out: &mut BTreeSet<String>) {
        out.insert(g.id.clone());
        for n in g.nodes.values() {
            out.insert(n.id.clone());
            if let FlowNodeKind::SubProcess { body, .. } = &n.kind {
                walk(body, out);
            }
        }
        for f in &g.sequence_flows {
            out.insert(f.id.clone());
            if let Some(c) = &f.condition {
                out.insert(c.message.clone());
                out.insert(c.value.clone());
            }
        }
    }
    match d {
        Diagram::SingleProcess(p) => walk(p, &mut out),
        Diagram::Collaboration { participants, message_flows } => {
            for p in participants {
                out.insert(p.id.clone());
                if let ParticipantBody::Process(g) = &p.body {
                    walk(g, &mut out);
                }
            }
            for mf in message_flows {
                out.insert(mf.id.clone());
            }
        }
    }
    for m in cfg.message_meta.values() {
        out.insert(m.message_name.clone());
    }
    for ph in cfg.phantoms.values() {
        out.insert(ph.channel.clone());
        out.insert(ph.message_name.clone());
    }
    for meta in cfg.process_meta.values() {
        for atom in meta.group.atoms() {
            out.insert(atom.to_string());
        }
        out.insert(meta.purpose.clone());
    }
    out
}
