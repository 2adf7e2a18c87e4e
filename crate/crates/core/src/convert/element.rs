//! Per-element conversion of flow nodes, built on the flow patterns.

use crate::bpmn::{CondOp, Condition, FlowNode, FlowNodeKind, TaskKind};
use crate::calculus::{Group, Name, PrivType, Process};

use super::patterns::{join_pattern, split_pattern, JoinKind, SplitKind};
use super::{ConvertError, FreshNames};

/// A resolved message flow incident to a node: the channel it travels
/// on, the message name bound or created, and the message type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct Binding {
    pub channel: Name,
    pub message: String,
    pub ty: PrivType,
}

/// Everything element conversion needs to know about one node.
pub(super) struct NodeCtx<'a> {
    /// Incoming sequence flow channels, ascending by id.
    pub incoming: Vec<Name>,
    /// Outgoing sequence flow channels with optional guards, ascending.
    pub outgoing: Vec<(Name, Option<Condition>)>,
    pub msg_in: Vec<Binding>,
    pub msg_out: Vec<Binding>,
    pub group: &'a Group,
    pub token_name: &'a str,
    pub token_type: &'a str,
    /// For end events inside a sub-process: the parallel split of the
    /// sub-process's own outgoing flows.
    pub sub_cont: Option<Process>,
    /// For sub-process nodes: the already-converted body.
    pub sub_body: Option<Process>,
    pub fresh: &'a mut FreshNames,
}

impl NodeCtx<'_> {
    fn token(&self) -> Name {
        Name::free(self.token_name)
    }

    fn token_ty(&self) -> PrivType {
        PrivType::basic(self.token_type)
    }

    fn outflow_names(&self) -> Vec<Name> {
        self.outgoing.iter().map(|(f, _)| f.clone()).collect()
    }

    fn input_token(&self, chan: &Name, cont: Process) -> Process {
        Process::input(chan.clone(), self.token_name, self.token_ty(), cont)
    }

    fn single_incoming(&self, node: &str) -> Result<Name, ConvertError> {
        match self.incoming.as_slice() {
            [e] => Ok(e.clone()),
            _ => Err(ConvertError::MissingMeta(format!(
                "node '{node}' must have exactly one incoming sequence flow"
            ))),
        }
    }

    fn join(&mut self, kind: JoinKind, cont: Process) -> Result<Process, ConvertError> {
        join_pattern(
            kind,
            &self.incoming,
            cont,
            self.token_name,
            self.token_type,
            self.group,
            self.fresh,
        )
    }
}

pub(super) fn convert_node(node: &FlowNode, ctx: &mut NodeCtx) -> Result<Process, ConvertError> {
    match &node.kind {
        FlowNodeKind::StartEvent { is_message } => start_event(node, *is_message, ctx),
        FlowNodeKind::EndEvent { is_message } => end_event(node, *is_message, ctx),
        FlowNodeKind::IntermediateCatchEvent => intermediate(node, true, ctx),
        FlowNodeKind::IntermediateThrowEvent => intermediate(node, false, ctx),
        FlowNodeKind::ParallelGateway => {
            let split = split_pattern(SplitKind::Parallel, &ctx.outflow_names(), &ctx.token())?;
            ctx.join(JoinKind::NofN, split)
        }
        FlowNodeKind::ExclusiveGateway => {
            let split = split_pattern(SplitKind::Parallel, &ctx.outflow_names(), &ctx.token())?;
            ctx.join(JoinKind::Choice, split)
        }
        FlowNodeKind::Task { task_kind } => task(node, *task_kind, ctx),
        FlowNodeKind::SubProcess { multi_instance_parallel, .. } => {
            let e1 = ctx.single_incoming(&node.id)?;
            let body = ctx
                .sub_body
                .take()
                .expect("sub-process body must be converted before the node");
            let body = if *multi_instance_parallel { Process::repl(body) } else { body };
            Ok(ctx.input_token(&e1, body))
        }
    }
}

/// Start Event: choice over incoming message flows, then token creation,
/// then parallel split. Without message flows the choice is dropped.
fn start_event(
    node: &FlowNode,
    is_message: bool,
    ctx: &mut NodeCtx,
) -> Result<Process, ConvertError> {
    let split = split_pattern(SplitKind::Parallel, &ctx.outflow_names(), &ctx.token())?;
    let core = Process::new_name(ctx.token_name, ctx.token_ty(), split);
    if !is_message {
        return Ok(core);
    }
    if ctx.msg_in.is_empty() {
        return Err(ConvertError::MissingMessageMeta(node.id.clone()));
    }
    Ok(Process::choice_all(
        ctx.msg_in
            .iter()
            .map(|b| Process::input(b.channel.clone(), &b.message, b.ty.clone(), core.clone()))
            .collect(),
    ))
}

/// End Event: n-of-n join over incoming flows, then (for message end
/// events) one freshly created message per outgoing message flow. The
/// terminal of the last message output (or the whole continuation when
/// there are no messages) is the enclosing sub-process's split, if any.
fn end_event(
    node: &FlowNode,
    is_message: bool,
    ctx: &mut NodeCtx,
) -> Result<Process, ConvertError> {
    if is_message && ctx.msg_out.is_empty() {
        return Err(ConvertError::MissingMessageMeta(node.id.clone()));
    }
    for (i, b) in ctx.msg_out.iter().enumerate() {
        if ctx.msg_out[..i].iter().any(|o| o.message == b.message) {
            return Err(ConvertError::DuplicateMessageName {
                node: node.id.clone(),
                name: b.message.clone(),
            });
        }
    }
    let terminal = ctx.sub_cont.clone().unwrap_or(Process::Empty);
    let d = if ctx.msg_out.is_empty() {
        terminal
    } else {
        let last = ctx.msg_out.len() - 1;
        Process::par_all(
            ctx.msg_out
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let end = if i == last { terminal.clone() } else { Process::Empty };
                    Process::new_name(
                        &b.message,
                        b.ty.clone(),
                        Process::output(b.channel.clone(), Name::free(&b.message), end),
                    )
                })
                .collect(),
        )
    };
    ctx.join(JoinKind::NofN, d)
}

fn intermediate(node: &FlowNode, catch: bool, ctx: &mut NodeCtx) -> Result<Process, ConvertError> {
    let e1 = ctx.single_incoming(&node.id)?;
    let split = split_pattern(SplitKind::Parallel, &ctx.outflow_names(), &ctx.token())?;
    let inner = if catch {
        let b = ctx
            .msg_in
            .first()
            .ok_or_else(|| ConvertError::MissingMessageMeta(node.id.clone()))?;
        Process::input(b.channel.clone(), &b.message, b.ty.clone(), split)
    } else {
        let b = ctx
            .msg_out
            .first()
            .ok_or_else(|| ConvertError::MissingMessageMeta(node.id.clone()))?;
        Process::new_name(
            &b.message,
            b.ty.clone(),
            Process::output(b.channel.clone(), Name::free(&b.message), split),
        )
    };
    Ok(ctx.input_token(&e1, inner))
}

/// Task: token in, optional message in, internal work (except for
/// send/receive tasks), optional freshly created message out, guarded
/// parallel split of the outgoing flows.
fn task(node: &FlowNode, kind: TaskKind, ctx: &mut NodeCtx) -> Result<Process, ConvertError> {
    let e1 = ctx.single_incoming(&node.id)?;
    let recv = ctx.msg_in.first().cloned();
    let send = ctx.msg_out.first().cloned();
    if kind == TaskKind::Receive && recv.is_none() {
        return Err(ConvertError::MissingMessageMeta(node.id.clone()));
    }
    if kind == TaskKind::Send && send.is_none() {
        return Err(ConvertError::MissingMessageMeta(node.id.clone()));
    }
    if ctx.outgoing.is_empty() {
        return Err(ConvertError::EmptyFlows);
    }

    let token = ctx.token();
    let mut sends = vec![];
    for (f, cond) in &ctx.outgoing {
        let out = Process::output(f.clone(), token.clone(), Process::Empty);
        sends.push(match cond {
            None => out,
            Some(c) => {
                let b = recv.as_ref().ok_or_else(|| {
                    ConvertError::MissingMessageMeta(node.id.clone())
                })?;
                check_guard(&b.ty, c, f)?;
                let m = Name::free(&b.message);
                let v = Name::free(&c.value);
                match c.op {
                    CondOp::Eq => Process::cond(m, v, out, Process::Empty),
                    CondOp::Neq => Process::cond(m, v, Process::Empty, out),
                }
            }
        });
    }
    let mut chain = Process::par_all(sends);
    if let Some(b) = &send {
        chain = Process::new_name(
            &b.message,
            b.ty.clone(),
            Process::output(b.channel.clone(), Name::free(&b.message), chain),
        );
    }
    if matches!(kind, TaskKind::Abstract | TaskKind::User | TaskKind::Manual) {
        chain = Process::silent(chain);
    }
    if let Some(b) = &recv {
        chain = Process::input(b.channel.clone(), &b.message, b.ty.clone(), chain);
    }
    Ok(ctx.input_token(&e1, chain))
}

/// A guard can only compare a context-variable message against one of
/// its domain values.
fn check_guard(ty: &PrivType, c: &Condition, flow: &Name) -> Result<(), ConvertError> {
    match ty {
        PrivType::ContextVar { domain, .. } if domain.iter().any(|v| v == &c.value) => Ok(()),
        _ => Err(ConvertError::GuardValueOutsideDomain {
            flow: flow.base.clone(),
            value: c.value.clone(),
        }),
    }
}
