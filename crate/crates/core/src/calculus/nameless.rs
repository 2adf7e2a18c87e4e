//! A nameless (de Bruijn) intermediate form.
//!
//! Alpha-equivalent terms convert to structurally equal nameless terms,
//! which makes alpha-canonicalization and congruence normalization plain
//! tree rewrites. Canonical named terms use the reserved binder bases
//! `#0`, `#1`, ... assigned in pre-order.

use super::print::{print_process, print_system};
use super::{Name, Process, PrivType, System, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum NlName {
    /// De Bruijn index over all enclosing binders, innermost = 0.
    Bound(u32),
    /// A free name, indices relative to the term root.
    Free(Name),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum NlProcess {
    Empty,
    Input { subject: NlName, ty: PrivType, cont: Box<NlProcess> },
    Output { subject: NlName, object: NlName, cont: Box<NlProcess> },
    Silent { cont: Box<NlProcess> },
    New { ty: PrivType, cont: Box<NlProcess> },
    Par { left: Box<NlProcess>, right: Box<NlProcess> },
    Choice { left: Box<NlProcess>, right: Box<NlProcess> },
    Cond { scrutinee: NlName, value: NlName, then_p: Box<NlProcess>, else_p: Box<NlProcess> },
    Repl { body: Box<NlProcess> },
    Var { id: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum NlSystem {
    Empty,
    New { ty: PrivType, cont: Box<NlSystem> },
    Par { left: Box<NlSystem>, right: Box<NlSystem> },
    GroupBind { role: super::Group, cont: Box<NlSystem> },
    Lift { group: super::Group, purpose: String, body: NlProcess },
}

/// Binder stack during conversion to nameless form, outermost first.
fn to_nl_name(n: &Name, stack: &[String]) -> NlName {
    let mut skip = n.index;
    for (dist, base) in stack.iter().rev().enumerate() {
        if *base == n.base {
            if skip == 0 {
                return NlName::Bound(dist as u32);
            }
            skip -= 1;
        }
    }
    NlName::Free(Name::new(n.base.clone(), skip))
}

fn to_nl_process(p: &Process, stack: &mut Vec<String>) -> NlProcess {
    match p {
        Process::Empty => NlProcess::Empty,
        Process::Var { id } => NlProcess::Var { id: id.clone() },
        Process::Input { subject, binder_base, ty, cont } => {
            let subject = to_nl_name(subject, stack);
            stack.push(binder_base.clone());
            let cont = to_nl_process(cont, stack);
            stack.pop();
            NlProcess::Input { subject, ty: ty.clone(), cont: Box::new(cont) }
        }
        Process::Output { subject, object, cont } => NlProcess::Output {
            subject: to_nl_name(subject, stack),
            object: to_nl_name(object, stack),
            cont: Box::new(to_nl_process(cont, stack)),
        },
        Process::Silent { cont } => {
            NlProcess::Silent { cont: Box::new(to_nl_process(cont, stack)) }
        }
        Process::NewName { base, ty, cont } => {
            stack.push(base.clone());
            let cont = to_nl_process(cont, stack);
            stack.pop();
            NlProcess::New { ty: ty.clone(), cont: Box::new(cont) }
        }
        Process::Par { left, right } => NlProcess::Par {
            left: Box::new(to_nl_process(left, stack)),
            right: Box::new(to_nl_process(right, stack)),
        },
        Process::Choice { left, right } => NlProcess::Choice {
            left: Box::new(to_nl_process(left, stack)),
            right: Box::new(to_nl_process(right, stack)),
        },
        Process::Cond { scrutinee, value, then_p, else_p } => NlProcess::Cond {
            scrutinee: to_nl_name(scrutinee, stack),
            value: to_nl_name(value, stack),
            then_p: Box::new(to_nl_process(then_p, stack)),
            else_p: Box::new(to_nl_process(else_p, stack)),
        },
        Process::Repl { body } => NlProcess::Repl { body: Box::new(to_nl_process(body, stack)) },
    }
}

fn to_nl_system(s: &System, stack: &mut Vec<String>) -> NlSystem {
    match s {
        System::Empty => NlSystem::Empty,
        System::NewName { base, ty, cont } => {
            stack.push(base.clone());
            let cont = to_nl_system(cont, stack);
            stack.pop();
            NlSystem::New { ty: ty.clone(), cont: Box::new(cont) }
        }
        System::Par { left, right } => NlSystem::Par {
            left: Box::new(to_nl_system(left, stack)),
            right: Box::new(to_nl_system(right, stack)),
        },
        System::GroupBind { role, cont } => NlSystem::GroupBind {
            role: role.clone(),
            cont: Box::new(to_nl_system(cont, stack)),
        },
        System::Lift { group, purpose, body } => NlSystem::Lift {
            group: group.clone(),
            purpose: purpose.clone(),
            body: to_nl_process(body, stack),
        },
    }
}

/// Converts back to a named term. Binders are assigned `#0`, `#1`, ... in
/// pre-order; a dangling bound index (possible only when rendering a
/// subterm for ordering purposes) is shown with the reserved base `^`.
struct Namer {
    next: u32,
}

impl Namer {
    fn fresh(&mut self) -> String {
        let n = self.next;
        self.next += 1;
        format!("#{n}")
    }
}

fn from_nl_name(n: &NlName, stack: &[String]) -> Name {
    match n {
        NlName::Bound(j) => {
            let j = *j as usize;
            if j < stack.len() {
                let pos = stack.len() - 1 - j;
                let base = &stack[pos];
                // Index counts nearer binders of the same base; canonical
                // bases are unique so this is normally 0.
                let index = stack[pos + 1..].iter().filter(|b| *b == base).count() as u32;
                Name::new(base.clone(), index)
            } else {
                Name::new("^", (j - stack.len()) as u32)
            }
        }
        NlName::Free(n) => {
            let index = n.index + stack.iter().filter(|b| **b == n.base).count() as u32;
            Name::new(n.base.clone(), index)
        }
    }
}

fn from_nl_process(p: &NlProcess, stack: &mut Vec<String>, namer: &mut Namer) -> Process {
    match p {
        NlProcess::Empty => Process::Empty,
        NlProcess::Var { id } => Process::Var { id: id.clone() },
        NlProcess::Input { subject, ty, cont } => {
            let subject = from_nl_name(subject, stack);
            let base = namer.fresh();
            stack.push(base.clone());
            let cont = from_nl_process(cont, stack, namer);
            stack.pop();
            Process::Input { subject, binder_base: base, ty: ty.clone(), cont: Box::new(cont) }
        }
        NlProcess::Output { subject, object, cont } => Process::Output {
            subject: from_nl_name(subject, stack),
            object: from_nl_name(object, stack),
            cont: Box::new(from_nl_process(cont, stack, namer)),
        },
        NlProcess::Silent { cont } => {
            Process::Silent { cont: Box::new(from_nl_process(cont, stack, namer)) }
        }
        NlProcess::New { ty, cont } => {
            let base = namer.fresh();
            stack.push(base.clone());
            let cont = from_nl_process(cont, stack, namer);
            stack.pop();
            Process::NewName { base, ty: ty.clone(), cont: Box::new(cont) }
        }
        NlProcess::Par { left, right } => Process::Par {
            left: Box::new(from_nl_process(left, stack, namer)),
            right: Box::new(from_nl_process(right, stack, namer)),
        },
        NlProcess::Choice { left, right } => Process::Choice {
            left: Box::new(from_nl_process(left, stack, namer)),
            right: Box::new(from_nl_process(right, stack, namer)),
        },
        NlProcess::Cond { scrutinee, value, then_p, else_p } => Process::Cond {
            scrutinee: from_nl_name(scrutinee, stack),
            value: from_nl_name(value, stack),
            then_p: Box::new(from_nl_process(then_p, stack, namer)),
            else_p: Box::new(from_nl_process(else_p, stack, namer)),
        },
        NlProcess::Repl { body } => {
            Process::Repl { body: Box::new(from_nl_process(body, stack, namer)) }
        }
    }
}

fn from_nl_system(s: &NlSystem, stack: &mut Vec<String>, namer: &mut Namer) -> System {
    match s {
        NlSystem::Empty => System::Empty,
        NlSystem::New { ty, cont } => {
            let base = namer.fresh();
            stack.push(base.clone());
            let cont = from_nl_system(cont, stack, namer);
            stack.pop();
            System::NewName { base, ty: ty.clone(), cont: Box::new(cont) }
        }
        NlSystem::Par { left, right } => System::Par {
            left: Box::new(from_nl_system(left, stack, namer)),
            right: Box::new(from_nl_system(right, stack, namer)),
        },
        NlSystem::GroupBind { role, cont } => System::GroupBind {
            role: role.clone(),
            cont: Box::new(from_nl_system(cont, stack, namer)),
        },
        NlSystem::Lift { group, purpose, body } => System::Lift {
            group: group.clone(),
            purpose: purpose.clone(),
            body: from_nl_process(body, stack, namer),
        },
    }
}

/// Total order on nameless processes: the printed form of the locally
/// renamed subterm. Deterministic and stable under sibling reordering.
fn process_key(p: &NlProcess) -> String {
    let named = from_nl_process(p, &mut Vec::new(), &mut Namer { next: 0 });
    print_process(&named)
}

fn system_key(s: &NlSystem) -> String {
    let named = from_nl_system(s, &mut Vec::new(), &mut Namer { next: 0 });
    print_system(&named)
}

fn flatten_par(p: NlProcess, out: &mut Vec<NlProcess>) {
    match p {
        NlProcess::Par { left, right } => {
            flatten_par(*left, out);
            flatten_par(*right, out);
        }
        NlProcess::Empty => {}
        other => out.push(other),
    }
}

fn flatten_choice(p: NlProcess, out: &mut Vec<NlProcess>) {
    match p {
        NlProcess::Choice { left, right } => {
            flatten_choice(*left, out);
            flatten_choice(*right, out);
        }
        other => out.push(other),
    }
}

fn rebuild<T>(mut ops: Vec<T>, empty: T, par: &impl Fn(T, T) -> T) -> T {
    match ops.len() {
        0 => empty,
        1 => ops.pop().unwrap(),
        _ => {
            let first = ops.remove(0);
            par(first, rebuild(ops, empty, par))
        }
    }
}

fn simplify_process(p: NlProcess) -> NlProcess {
    match p {
        NlProcess::Empty => NlProcess::Empty,
        NlProcess::Var { id } => NlProcess::Var { id },
        NlProcess::Input { subject, ty, cont } => NlProcess::Input {
            subject,
            ty,
            cont: Box::new(simplify_process(*cont)),
        },
        NlProcess::Output { subject, object, cont } => NlProcess::Output {
            subject,
            object,
            cont: Box::new(simplify_process(*cont)),
        },
        NlProcess::Silent { cont } => {
            NlProcess::Silent { cont: Box::new(simplify_process(*cont)) }
        }
        NlProcess::New { ty, cont } => {
            let cont = simplify_process(*cont);
            if cont == NlProcess::Empty {
                NlProcess::Empty
            } else {
                NlProcess::New { ty, cont: Box::new(cont) }
            }
        }
        NlProcess::Par { left, right } => {
            let mut ops = Vec::new();
            flatten_par(simplify_process(*left), &mut ops);
            flatten_par(simplify_process(*right), &mut ops);
            ops.sort_by_key(process_key);
            rebuild(ops, NlProcess::Empty, &|l, r| NlProcess::Par {
                left: Box::new(l),
                right: Box::new(r),
            })
        }
        NlProcess::Choice { left, right } => {
            let mut ops = Vec::new();
            flatten_choice(simplify_process(*left), &mut ops);
            flatten_choice(simplify_process(*right), &mut ops);
            ops.sort_by_key(process_key);
            ops.dedup();
            rebuild(ops, NlProcess::Empty, &|l, r| NlProcess::Choice {
                left: Box::new(l),
                right: Box::new(r),
            })
        }
        NlProcess::Cond { scrutinee, value, then_p, else_p } => NlProcess::Cond {
            scrutinee,
            value,
            then_p: Box::new(simplify_process(*then_p)),
            else_p: Box::new(simplify_process(*else_p)),
        },
        NlProcess::Repl { body } => {
            let body = simplify_process(*body);
            if body == NlProcess::Empty {
                NlProcess::Empty
            } else {
                NlProcess::Repl { body: Box::new(body) }
            }
        }
    }
}

fn flatten_sys_par(s: NlSystem, out: &mut Vec<NlSystem>) {
    match s {
        NlSystem::Par { left, right } => {
            flatten_sys_par(*left, out);
            flatten_sys_par(*right, out);
        }
        NlSystem::Empty => {}
        other => out.push(other),
    }
}

fn simplify_system(s: NlSystem) -> NlSystem {
    match s {
        NlSystem::Empty => NlSystem::Empty,
        NlSystem::New { ty, cont } => {
            let cont = simplify_system(*cont);
            if cont == NlSystem::Empty {
                NlSystem::Empty
            } else {
                NlSystem::New { ty, cont: Box::new(cont) }
            }
        }
        NlSystem::Par { left, right } => {
            let mut ops = Vec::new();
            flatten_sys_par(simplify_system(*left), &mut ops);
            flatten_sys_par(simplify_system(*right), &mut ops);
            ops.sort_by_key(system_key);
            rebuild(ops, NlSystem::Empty, &|l, r| NlSystem::Par {
                left: Box::new(l),
                right: Box::new(r),
            })
        }
        NlSystem::GroupBind { role, cont } => {
            let cont = simplify_system(*cont);
            if cont == NlSystem::Empty {
                NlSystem::Empty
            } else {
                NlSystem::GroupBind { role, cont: Box::new(cont) }
            }
        }
        NlSystem::Lift { group, purpose, body } => {
            let body = simplify_process(body);
            if body == NlProcess::Empty {
                NlSystem::Empty
            } else {
                NlSystem::Lift { group, purpose, body }
            }
        }
    }
}

/// Canonical alpha-representative: binder bases rewritten to the reserved
/// `#k` scheme in pre-order. Two terms are alpha-equivalent iff their
/// canonical forms are structurally equal.
pub fn alpha_canonical(t: &Term) -> Term {
    match t {
        Term::Process(p) => {
            let nl = to_nl_process(p, &mut Vec::new());
            Term::Process(from_nl_process(&nl, &mut Vec::new(), &mut Namer { next: 0 }))
        }
        Term::System(s) => {
            let nl = to_nl_system(s, &mut Vec::new());
            Term::System(from_nl_system(&nl, &mut Vec::new(), &mut Namer { next: 0 }))
        }
    }
}

/// Congruence normal form: alpha-canonical, parallel/choice flattened and
/// sorted, choice operands deduplicated, inert subterms removed. Two terms
/// are structurally congruent iff their canonical forms are equal.
pub fn canonical(t: &Term) -> Term {
    match t {
        Term::Process(p) => Term::Process(canonical_process(p)),
        Term::System(s) => Term::System(canonical_system(s)),
    }
}

pub(crate) fn canonical_process(p: &Process) -> Process {
    let nl = simplify_process(to_nl_process(p, &mut Vec::new()));
    from_nl_process(&nl, &mut Vec::new(), &mut Namer { next: 0 })
}

pub(crate) fn canonical_system(s: &System) -> System {
    let nl = simplify_system(to_nl_system(s, &mut Vec::new()));
    from_nl_system(&nl, &mut Vec::new(), &mut Namer { next: 0 })
}
