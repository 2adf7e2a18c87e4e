//! The flow patterns as reusable combinators: Sequence (as the
//! degenerate case of the others), Parallel split, Exclusive choice,
//! Choice, Synchronisation, n-of-n and m-of-n synchronisation.

use std::collections::BTreeSet;

use crate::calculus::{free_names_process, Group, Name, PrivType, Process};

use super::{ConvertError, FreshNames};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Parallel,
    Exclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinKind {
    /// Any one trigger enables the continuation; the rest are dropped.
    Choice,
    /// All n triggers are consumed before the continuation starts.
    NofN,
    /// Exactly m of n triggers enable the continuation; all n are
    /// eventually consumed.
    MofN { m: usize },
}

fn token_type(token_type_name: &str) -> PrivType {
    PrivType::basic(token_type_name)
}

/// Outgoing side: sends the token on every outflow, in parallel or as an
/// exclusive choice. A single outflow degenerates to the Sequence
/// pattern.
pub fn split_pattern(
    kind: SplitKind,
    outflows: &[Name],
    token: &Name,
) -> Result<Process, ConvertError> {
    if outflows.is_empty() {
        return Err(ConvertError::EmptyFlows);
    }
    let sends: Vec<Process> = outflows
        .iter()
        .map(|f| Process::output(f.clone(), token.clone(), Process::Empty))
        .collect();
    Ok(match kind {
        SplitKind::Parallel => Process::par_all(sends),
        SplitKind::Exclusive => Process::choice_all(sends),
    })
}

/// Incoming side: consumes triggers from the inflows and then runs
/// `cont`. A single inflow degenerates to the Sequence pattern. The
/// fresh helper channels of NofN/MofN are drawn from `fresh` and are
/// guaranteed not to capture free names of `cont`.
pub fn join_pattern(
    kind: JoinKind,
    inflows: &[Name],
    cont: Process,
    token_name: &str,
    token_type_name: &str,
    group: &Group,
    fresh: &mut FreshNames,
) -> Result<Process, ConvertError> {
    let n = inflows.len();
    if n == 0 {
        return Err(ConvertError::EmptyFlows);
    }
    let tok_ty = token_type(token_type_name);
    let token = Name::free(token_name);
    let input = |chan: &Name, cont: Process| {
        Process::input(chan.clone(), token_name, tok_ty.clone(), cont)
    };
    let trigger = |chan: &Name, helper: &Name| {
        input(chan, Process::output(helper.clone(), token.clone(), Process::Empty))
    };
    let cont_free: BTreeSet<String> = free_names_process(&cont)
        .into_iter()
        .map(|n| n.base)
        .collect();
    let helper_ty = PrivType::group(group.clone(), tok_ty.clone());
    match kind {
        JoinKind::Choice => Ok(Process::choice_all(
            inflows.iter().map(|f| input(f, cont.clone())).collect(),
        )),
        JoinKind::NofN => {
            if n == 1 {
                return Ok(input(&inflows[0], cont));
            }
            let h = fresh.fresh(&cont_free);
            let mut chain = cont;
            for _ in 0..n {
                chain = input(&h, chain);
            }
            let mut ops = vec![chain];
            ops.extend(inflows.iter().map(|f| trigger(f, &h)));
            Ok(Process::new_name(h.base.clone(), helper_ty, Process::par_all(ops)))
        }
        JoinKind::MofN { m } => {
            if m < 1 || m > n {
                return Err(ConvertError::BadM { m, n });
            }
            let h = fresh.fresh(&cont_free);
            let r = fresh.fresh(&cont_free);
            let mut tail = Process::Empty;
            for _ in 0..(n - m) {
                tail = input(&h, tail);
            }
            tail = Process::output(r.clone(), token.clone(), tail);
            for _ in 0..m {
                tail = input(&h, tail);
            }
            let mut ops = vec![input(&r, cont)];
            ops.extend(inflows.iter().map(|f| trigger(f, &h)));
            ops.push(tail);
            Ok(Process::new_name(
                h.base.clone(),
                helper_ty.clone(),
                Process::new_name(r.base.clone(), helper_ty, Process::par_all(ops)),
            ))
        }
    }
}

/// The plain Synchronisation pattern: consumes the triggers strictly in
/// the given order. Not used by element conversion (it is order-biased
/// and deadlock-prone); provided as a combinator for completeness.
pub fn sync_pattern(
    inflows: &[Name],
    cont: Process,
    token_name: &str,
    token_type_name: &str,
) -> Result<Process, ConvertError> {
    if inflows.is_empty() {
        return Err(ConvertError::EmptyFlows);
    }
    let tok_ty = token_type(token_type_name);
    let mut p = cont;
    for f in inflows.iter().rev() {
        p = Process::input(f.clone(), token_name, tok_ty.clone(), p);
    }
    Ok(p)
}
