//! Free names, CINNI substitution, and index shifting.
//!
//! All operations walk the term with a map from base identifier to the
//! number of enclosing binders of that base. An occurrence `(b, n)` under
//! `k` enclosing `b`-binders is bound when `n < k` and otherwise denotes
//! the outer name `(b, n - k)`.

use std::collections::{BTreeSet, HashMap};

use super::{Label, Name, Process, System, Term};

#[derive(Default, Clone)]
struct Depths(HashMap<String, u32>);

impl Depths {
    fn get(&self, base: &str) -> u32 {
        self.0.get(base).copied().unwrap_or(0)
    }

    fn enter(&mut self, base: &str) {
        *self.0.entry(base.to_string()).or_insert(0) += 1;
    }

    fn leave(&mut self, base: &str) {
        let d = self.0.get_mut(base).expect("unbalanced binder traversal");
        *d -= 1;
    }
}

/// Maps every name occurrence through `f`, which receives the occurrence
/// and the enclosing binder depths. Binder bases themselves are untouched.
fn map_process(p: &Process, depths: &mut Depths, f: &impl Fn(&Name, &Depths) -> Name) -> Process {
    match p {
        Process::Empty => Process::Empty,
        Process::Var { id } => Process::Var { id: id.clone() },
        Process::Input { subject, binder_base, ty, cont } => {
            let subject = f(subject, depths);
            depths.enter(binder_base);
            let cont = map_process(cont, depths, f);
            depths.leave(binder_base);
            Process::Input {
                subject,
                binder_base: binder_base.clone(),
                ty: ty.clone(),
                cont: Box::new(cont),
            }
        }
        Process::Output { subject, object, cont } => Process::Output {
            subject: f(subject, depths),
            object: f(object, depths),
            cont: Box::new(map_process(cont, depths, f)),
        },
        Process::Silent { cont } => Process::Silent { cont: Box::new(map_process(cont, depths, f)) },
        Process::NewName { base, ty, cont } => {
            depths.enter(base);
            let cont = map_process(cont, depths, f);
            depths.leave(base);
            Process::NewName { base: base.clone(), ty: ty.clone(), cont: Box::new(cont) }
        }
        Process::Par { left, right } => Process::Par {
            left: Box::new(map_process(left, depths, f)),
            right: Box::new(map_process(right, depths, f)),
        },
        Process::Choice { left, right } => Process::Choice {
            left: Box::new(map_process(left, depths, f)),
            right: Box::new(map_process(right, depths, f)),
        },
        Process::Cond { scrutinee, value, then_p, else_p } => Process::Cond {
            scrutinee: f(scrutinee, depths),
            value: f(value, depths),
            then_p: Box::new(map_process(then_p, depths, f)),
            else_p: Box::new(map_process(else_p, depths, f)),
        },
        Process::Repl { body } => Process::Repl { body: Box::new(map_process(body, depths, f)) },
    }
}

fn map_system(s: &System, depths: &mut Depths, f: &impl Fn(&Name, &Depths) -> Name) -> System {
    match s {
        System::Empty => System::Empty,
        System::NewName { base, ty, cont } => {
            depths.enter(base);
            let cont = map_system(cont, depths, f);
            depths.leave(base);
            System::NewName { base: base.clone(), ty: ty.clone(), cont: Box::new(cont) }
        }
        System::Par { left, right } => System::Par {
            left: Box::new(map_system(left, depths, f)),
            right: Box::new(map_system(right, depths, f)),
        },
        System::GroupBind { role, cont } => System::GroupBind {
            role: role.clone(),
            cont: Box::new(map_system(cont, depths, f)),
        },
        System::Lift { group, purpose, body } => System::Lift {
            group: group.clone(),
            purpose: purpose.clone(),
            body: map_process(body, depths, &|n, d| f(n, d)),
        },
    }
}

fn visit_process(p: &Process, depths: &mut Depths, f: &mut impl FnMut(&Name, &Depths)) {
    match p {
        Process::Empty | Process::Var { .. } => {}
        Process::Input { subject, binder_base, cont, .. } => {
            f(subject, depths);
            depths.enter(binder_base);
            visit_process(cont, depths, f);
            depths.leave(binder_base);
        }
        Process::Output { subject, object, cont } => {
            f(subject, depths);
            f(object, depths);
            visit_process(cont, depths, f);
        }
        Process::Silent { cont } => visit_process(cont, depths, f),
        Process::NewName { base, cont, .. } => {
            depths.enter(base);
            visit_process(cont, depths, f);
            depths.leave(base);
        }
        Process::Par { left, right } | Process::Choice { left, right } => {
            visit_process(left, depths, f);
            visit_process(right, depths, f);
        }
        Process::Cond { scrutinee, value, then_p, else_p } => {
            f(scrutinee, depths);
            f(value, depths);
            visit_process(then_p, depths, f);
            visit_process(else_p, depths, f);
        }
        Process::Repl { body } => visit_process(body, depths, f),
    }
}

fn visit_system(s: &System, depths: &mut Depths, f: &mut impl FnMut(&Name, &Depths)) {
    match s {
        System::Empty => {}
        System::NewName { base, cont, .. } => {
            depths.enter(base);
            visit_system(cont, depths, f);
            depths.leave(base);
        }
        System::Par { left, right } => {
            visit_system(left, depths, f);
            visit_system(right, depths, f);
        }
        System::GroupBind { cont, .. } => visit_system(cont, depths, f),
        System::Lift { body, .. } => visit_process(body, depths, f),
    }
}

fn resolve_free(n: &Name, depths: &Depths) -> Option<Name> {
    let k = depths.get(&n.base);
    if n.index >= k {
        Some(Name::new(n.base.clone(), n.index - k))
    } else {
        None
    }
}

/// Free names of a term, with indices normalized to the outermost scope.
pub fn free_names(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    let mut depths = Depths::default();
    let mut collect = |n: &Name, d: &Depths| {
        if let Some(outer) = resolve_free(n, d) {
            out.insert(outer);
        }
    };
    match t {
        Term::Process(p) => visit_process(p, &mut depths, &mut collect),
        Term::System(s) => visit_system(s, &mut depths, &mut collect),
    }
    out
}

pub fn free_names_process(p: &Process) -> BTreeSet<Name> {
    free_names(&Term::Process(p.clone()))
}

pub fn free_names_system(s: &System) -> BTreeSet<Name> {
    free_names(&Term::System(s.clone()))
}

/// Free names of a transition label. Input and bound-output binders are
/// bound, not free.
pub fn free_names_label(l: &Label) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    match l {
        Label::Tau => {}
        Label::In { chan, .. } | Label::BoundOut { chan, .. } => {
            out.insert(chan.clone());
        }
        Label::Out { chan, object } => {
            out.insert(chan.clone());
            out.insert(object.clone());
        }
    }
    out
}

/// Bound names of a transition label, as outer-scope names.
pub fn bound_names_label(l: &Label) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    match l {
        Label::In { binder_base, .. } => {
            out.insert(Name::free(binder_base.clone()));
        }
        Label::BoundOut { object_base, .. } => {
            out.insert(Name::free(object_base.clone()));
        }
        _ => {}
    }
    out
}

fn map_term(t: &Term, f: &impl Fn(&Name, &Depths) -> Name) -> Term {
    let mut depths = Depths::default();
    match t {
        Term::Process(p) => Term::Process(map_process(p, &mut depths, f)),
        Term::System(s) => Term::System(map_system(s, &mut depths, f)),
    }
}

/// Capture-avoiding substitution `[b/a]`: every free occurrence denoting
/// the outer name `a` is replaced by (an index-adjusted spelling of) `b`.
pub fn subst(t: &Term, a: &Name, b: &Name) -> Term {
    map_term(t, &|n, d| {
        match resolve_free(n, d) {
            Some(outer) if outer == *a => {
                // b, as seen from under the enclosing binders.
                Name::new(b.base.clone(), b.index + d.get(&b.base))
            }
            _ => n.clone(),
        }
    })
}

pub fn subst_process(p: &Process, a: &Name, b: &Name) -> Process {
    match subst(&Term::Process(p.clone()), a, b) {
        Term::Process(p) => p,
        Term::System(_) => unreachable!(),
    }
}

pub fn subst_system(s: &System, a: &Name, b: &Name) -> System {
    match subst(&Term::System(s.clone()), a, b) {
        Term::System(s) => s,
        Term::Process(_) => unreachable!(),
    }
}

/// CINNI instantiation `[base := z]`: the outer name `base~0` becomes `z`
/// and every other free occurrence of `base` has its index decremented.
/// Used when an input binder is consumed at communication time.
pub(crate) fn instantiate(t: &Term, base: &str, z: &Name) -> Term {
    map_term(t, &|n, d| {
        if n.base != base {
            return n.clone();
        }
        match resolve_free(n, d) {
            Some(outer) if outer.index == 0 => Name::new(z.base.clone(), z.index + d.get(&z.base)),
            Some(_) => Name::new(n.base.clone(), n.index - 1),
            None => n.clone(),
        }
    })
}

/// `⇓base`: decrement the index of every free occurrence of `base`, not
/// going below 0.
pub fn shift_down(t: &Term, base: &str) -> Term {
    map_term(t, &|n, d| {
        if n.base != base {
            return n.clone();
        }
        match resolve_free(n, d) {
            Some(outer) => {
                let new_outer = outer.index.saturating_sub(1);
                Name::new(n.base.clone(), new_outer + d.get(base))
            }
            None => n.clone(),
        }
    })
}

/// `⇓base` on a label.
pub fn shift_down_label(l: &Label, base: &str) -> Label {
    let down = |n: &Name| {
        if n.base == base {
            Name::new(n.base.clone(), n.index.saturating_sub(1))
        } else {
            n.clone()
        }
    };
    match l {
        Label::Tau => Label::Tau,
        Label::In { chan, binder_base } => Label::In {
            chan: down(chan),
            binder_base: binder_base.clone(),
        },
        Label::Out { chan, object } => Label::Out { chan: down(chan), object: down(object) },
        Label::BoundOut { chan, object_base, ty } => Label::BoundOut {
            chan: down(chan),
            object_base: object_base.clone(),
            ty: ty.clone(),
        },
    }
}

/// Every base identifier occurring in the term, as a binder or in a name.
pub fn all_bases(t: &Term) -> BTreeSet<String> {
    fn proc(p: &Process, out: &mut BTreeSet<String>) {
        match p {
            Process::Empty | Process::Var { .. } => {}
            Process::Input { subject, binder_base, cont, .. } => {
                out.insert(subject.base.clone());
                out.insert(binder_base.clone());
                proc(cont, out);
            }
            Process::Output { subject, object, cont } => {
                out.insert(subject.base.clone());
                out.insert(object.base.clone());
                proc(cont, out);
            }
            Process::Silent { cont } => proc(cont, out),
            Process::NewName { base, cont, .. } => {
                out.insert(base.clone());
                proc(cont, out);
            }
            Process::Par { left, right } | Process::Choice { left, right } => {
                proc(left, out);
                proc(right, out);
            }
            Process::Cond { scrutinee, value, then_p, else_p } => {
                out.insert(scrutinee.base.clone());
                out.insert(value.base.clone());
                proc(then_p, out);
                proc(else_p, out);
            }
            Process::Repl { body } => proc(body, out),
        }
    }
    fn sys(s: &System, out: &mut BTreeSet<String>) {
        match s {
            System::Empty => {}
            System::NewName { base, cont, .. } => {
                out.insert(base.clone());
                sys(cont, out);
            }
            System::Par { left, right } => {
                sys(left, out);
                sys(right, out);
            }
            System::GroupBind { cont, .. } => sys(cont, out),
            System::Lift { body, .. } => proc(body, out),
        }
    }
    let mut out = BTreeSet::new();
    match t {
        Term::Process(p) => proc(p, &mut out),
        Term::System(s) => sys(s, &mut out),
    }
    out
}
