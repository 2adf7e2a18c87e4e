//! Concrete-syntax printer.
//!
//! Parentheses are minimal: unary forms (prefixes, `!`, `(new ...)`, `if`)
//! bind tighter than `|` and `+`, which share a precedence level; mixed
//! parallel/choice is always parenthesized.

use super::{Group, Label, Name, Process, PrivType, System, Term};

pub fn print_type(t: &PrivType) -> String {
    match t {
        PrivType::Basic { id } => id.clone(),
        PrivType::ContextVar { id, domain } => format!("{id}{{{}}}", domain.join(",")),
        PrivType::GroupType { group, inner } => match group {
            Group::Atom { .. } => format!("{}[{}]", group, print_type(inner)),
            Group::Union { .. } => format!("({})[{}]", group, print_type(inner)),
        },
    }
}

/// Prints a process as a unary-level operand: parallel and choice get
/// wrapped in parentheses.
fn process_operand(p: &Process) -> String {
    match p {
        Process::Par { .. } | Process::Choice { .. } => format!("({})", print_process(p)),
        _ => print_process(p),
    }
}

pub fn print_process(p: &Process) -> String {
    match p {
        Process::Empty => "0".to_string(),
        Process::Var { id } => id.clone(),
        Process::Input { subject, binder_base, ty, cont } => {
            format!("{subject}({binder_base}:{}).{}", print_type(ty), process_operand(cont))
        }
        Process::Output { subject, object, cont } => {
            format!("{subject}!<{object}>.{}", process_operand(cont))
        }
        Process::Silent { cont } => format!("tau.{}", process_operand(cont)),
        Process::NewName { base, ty, cont } => {
            format!("(new {base}:{}){}", print_type(ty), process_operand(cont))
        }
        Process::Par { left, right } => {
            let l = match left.as_ref() {
                Process::Choice { .. } => format!("({})", print_process(left)),
                Process::Par { .. } => print_process(left),
                _ => process_operand(left),
            };
            let r = match right.as_ref() {
                Process::Choice { .. } => format!("({})", print_process(right)),
                Process::Par { .. } => print_process(right),
                _ => process_operand(right),
            };
            format!("{l} | {r}")
        }
        Process::Choice { left, right } => {
            let l = match left.as_ref() {
                Process::Par { .. } => format!("({})", print_process(left)),
                Process::Choice { .. } => print_process(left),
                _ => process_operand(left),
            };
            let r = match right.as_ref() {
                Process::Par { .. } => format!("({})", print_process(right)),
                Process::Choice { .. } => print_process(right),
                _ => process_operand(right),
            };
            format!("{l} + {r}")
        }
        Process::Cond { scrutinee, value, then_p, else_p } => {
            format!(
                "if {scrutinee}={value} then {} else {}",
                process_operand(then_p),
                process_operand(else_p)
            )
        }
        Process::Repl { body } => format!("!{}", process_operand(body)),
    }
}

fn system_operand(s: &System) -> String {
    match s {
        System::Par { .. } => format!("({})", print_system(s)),
        _ => print_system(s),
    }
}

pub fn print_system(s: &System) -> String {
    match s {
        System::Empty => "0".to_string(),
        System::NewName { base, ty, cont } => {
            format!("(new {base}:{}){}", print_type(ty), system_operand(cont))
        }
        System::Par { left, right } => {
            let l = match left.as_ref() {
                System::Par { .. } => print_system(left),
                _ => system_operand(left),
            };
            let r = match right.as_ref() {
                System::Par { .. } => print_system(right),
                _ => system_operand(right),
            };
            format!("{l} || {r}")
        }
        System::GroupBind { role, cont } => {
            format!("(group {role}){}", system_operand(cont))
        }
        System::Lift { group, purpose, body } => {
            format!("[{group},{purpose}]{{{}}}", print_process(body))
        }
    }
}

pub fn print_term(t: &Term) -> String {
    match t {
        Term::Process(p) => print_process(p),
        Term::System(s) => print_system(s),
    }
}

pub fn print_label(l: &Label) -> String {
    match l {
        Label::Tau => "tau".to_string(),
        Label::In { chan, binder_base } => format!("{chan}?{binder_base}"),
        Label::Out { chan, object } => format!("{chan}!{object}"),
        Label::BoundOut { chan, object_base, ty } => {
            format!("{chan}!(new {object_base}:{})", print_type(ty))
        }
    }
}

#[allow(dead_code)]
pub fn print_name(n: &Name) -> String {
    n.to_string()
}
