//! Late labelled transition semantics: one-step transition enumeration,
//! bounded breadth-first state-space exploration, and maximal-trace
//! extraction.
//!
//! The congruence rule is realized by normalization: `step` canonicalizes
//! its argument before deriving transitions and canonicalizes every
//! target, so closure under structural congruence is automatic for the
//! normal forms produced.
//!
//! Input and bound-output labels carry a binder. The binder name is a
//! placeholder chosen fresh with respect to the whole term, which makes
//! the side condition of the (Par) rule hold by construction and lets
//! (Comm) instantiate the input continuation with a plain substitution.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::calculus::{
    canonical, free_names, free_names_label, print_label, print_term, print_type, shift_down_label,
    subst, Label, Name, PrivType, Process, System, Term,
};
use crate::calculus::{all_bases, bound_names_label, instantiate};


/// A one-step transition: a label and the canonical form of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub label: Label,
    pub target: Term,
}

/// A bounded fragment of the transition system reachable from a root term.
///
/// States are canonical terms, identified by index; `edges` hold
/// `(source, label, target)` triples. `truncated` is set when a limit
/// stopped exploration before the fragment was complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    pub states: Vec<Term>,
    pub edges: Vec<(usize, Label, usize)>,
    pub root: usize,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("transition graph contains a cycle")]
    GraphCyclic,
    #[error("transition graph was truncated by exploration limits")]
    GraphTruncated,
}

/// Placeholder allocation for binders stripped by (In) and (Open).
///
/// In a canonical term every binder base is unique, so the base itself is
/// a valid placeholder unless it also occurs free at the root; in that
/// case primes are appended until the candidate occurs nowhere in the
/// term.
struct Placeholders {
    root_free: BTreeSet<String>,
    all: BTreeSet<String>,
}

impl Placeholders {
    fn for_term(t: &Term) -> Self {
        let root_free = free_names(t).into_iter().map(|n| n.base).collect();
        Placeholders { root_free, all: all_bases(t) }
    }

    fn pick(&self, binder_base: &str) -> String {
        if !self.root_free.contains(binder_base) {
            return binder_base.to_string();
        }
        let mut candidate = format!("{binder_base}'");
        while self.all.contains(&candidate) {
            candidate.push('\'');
        }
        candidate
    }
}

/// All one-step transitions of a term under the rules of the late
/// semantics, deduplicated up to alpha-equivalence and returned in a
/// deterministic order. Targets are canonical.
pub fn step(t: &Term) -> Vec<Transition> {
    let c = canonical(t);
    let ph = Placeholders::for_term(&c);
    let raw: Vec<(Label, Term)> = match &c {
        Term::Process(p) => proc_step(p, &ph)
            .into_iter()
            .map(|(l, p)| (l, Term::Process(p)))
            .collect(),
        Term::System(s) => sys_step(s, &ph)
            .into_iter()
            .map(|(l, s)| (l, Term::System(s)))
            .collect(),
    };
    let mut out: Vec<Transition> = raw
        .into_iter()
        .map(|(label, target)| Transition { label, target: canonical(&target) })
        .collect();
    out.sort_by(|a, b| {
        (print_label(&a.label), print_term(&a.target))
            .cmp(&(print_label(&b.label), print_term(&b.target)))
    });
    let mut seen = BTreeSet::new();
    out.retain(|tr| seen.insert(alpha_key(tr)));
    out
}

/// A key identifying a transition up to renaming of the label binder.
fn alpha_key(tr: &Transition) -> String {
    match &tr.label {
        Label::Tau => format!("tau {}", print_term(&tr.target)),
        Label::Out { chan, object } => {
            format!("out {chan} {object} {}", print_term(&tr.target))
        }
        Label::In { chan, binder_base } => {
            let renamed = subst(&tr.target, &Name::free(binder_base.clone()), &Name::free("?"));
            format!("in {chan} {}", print_term(&canonical(&renamed)))
        }
        Label::BoundOut { chan, object_base, ty } => {
            let renamed = subst(&tr.target, &Name::free(object_base.clone()), &Name::free("?"));
            format!(
                "bout {chan} {} {}",
                print_type(ty),
                print_term(&canonical(&renamed))
            )
        }
    }
}

fn proc_step(p: &Process, ph: &Placeholders) -> Vec<(Label, Process)> {
    match p {
        Process::Empty | Process::Var { .. } => vec![],
        Process::Input { subject, binder_base, cont, .. } => {
            let pb = ph.pick(binder_base);
            let target = instantiate_process(cont, binder_base, &Name::free(pb.clone()));
            vec![(Label::In { chan: subject.clone(), binder_base: pb }, target)]
        }
        Process::Output { subject, object, cont } => vec![(
            Label::Out { chan: subject.clone(), object: object.clone() },
            (**cont).clone(),
        )],
        Process::Silent { cont } => vec![(Label::Tau, (**cont).clone())],
        Process::Repl { body } => proc_step(body, ph)
            .into_iter()
            .map(|(l, p1)| (l, Process::par(p1, Process::Repl { body: body.clone() })))
            .collect(),
        Process::Choice { left, right } => {
            let mut out = proc_step(left, ph);
            out.extend(proc_step(right, ph));
            out
        }
        Process::Cond { scrutinee, value, then_p, else_p } => {
            if scrutinee == value {
                proc_step(then_p, ph)
            } else {
                proc_step(else_p, ph)
            }
        }
        Process::NewName { base, ty, cont } => restrict(
            proc_step(cont, ph),
            base,
            ty,
            ph,
            |b, t, p| Process::new_name(b, t, p),
            instantiate_process,
        ),
        Process::Par { left, right } => par_rules(
            left,
            right,
            proc_step(left, ph),
            proc_step(right, ph),
            Process::par,
            |b, t, p| Process::new_name(b, t, p),
            subst_p,
            free_names_p,
        ),
    }
}

fn sys_step(s: &System, ph: &Placeholders) -> Vec<(Label, System)> {
    match s {
        System::Empty => vec![],
        System::Lift { group, purpose, body } => proc_step(body, ph)
            .into_iter()
            .map(|(l, p1)| (l, System::lift(group.clone(), purpose.clone(), p1)))
            .collect(),
        System::GroupBind { role, cont } => sys_step(cont, ph)
            .into_iter()
            .map(|(l, s1)| (l, System::group_bind(role.clone(), s1)))
            .collect(),
        System::NewName { base, ty, cont } => restrict(
            sys_step(cont, ph),
            base,
            ty,
            ph,
            |b, t, s| System::new_name(b, t, s),
            instantiate_system,
        ),
        System::Par { left, right } => par_rules(
            left,
            right,
            sys_step(left, ph),
            sys_step(right, ph),
            System::par,
            |b, t, s| System::new_name(b, t, s),
            subst_s,
            free_names_s,
        ),
    }
}

/// The (Open) and (ResN) rules over a restriction `(new base:ty)cont`.
///
/// In the transitions of the standalone continuation, the free name
/// `base~0` denotes the restricted name and `base~j` (j >= 1) denotes the
/// outer `base~(j-1)`, which is why labels passing through are shifted
/// down.
fn restrict<T: Clone>(
    inner: Vec<(Label, T)>,
    base: &str,
    ty: &PrivType,
    ph: &Placeholders,
    new_name: impl Fn(&str, PrivType, T) -> T,
    inst: impl Fn(&T, &str, &Name) -> T,
) -> Vec<(Label, T)> {
    let restricted = Name::free(base);
    let mut out = vec![];
    for (l, t1) in inner {
        match &l {
            Label::Out { chan, object } if *object == restricted => {
                if *chan == restricted {
                    continue;
                }
                let pb = ph.pick(base);
                let chan = shift_base(chan, base);
                let target = inst(&t1, base, &Name::free(pb.clone()));
                out.push((
                    Label::BoundOut { chan, object_base: pb, ty: ty.clone() },
                    target,
                ));
            }
            _ if free_names_label(&l).contains(&restricted) => {}
            _ => out.push((
                shift_down_label(&l, base),
                new_name(base, ty.clone(), t1),
            )),
        }
    }
    out
}

fn shift_base(n: &Name, base: &str) -> Name {
    if n.base == base {
        Name::new(n.base.clone(), n.index - 1)
    } else {
        n.clone()
    }
}

/// The (Par), (Comm) and (Close) rules over a parallel composition.
#[allow(clippy::too_many_arguments)]
fn par_rules<T: Clone>(
    left: &T,
    right: &T,
    lsteps: Vec<(Label, T)>,
    rsteps: Vec<(Label, T)>,
    par: impl Fn(T, T) -> T,
    new_name: impl Fn(&str, PrivType, T) -> T,
    subst: impl Fn(&T, &Name, &Name) -> T,
    free: impl Fn(&T) -> BTreeSet<Name>,
) -> Vec<(Label, T)> {
    let mut out = vec![];
    for (l, t1) in &lsteps {
        debug_assert!(
            bound_names_label(l).is_disjoint(&free(right)),
            "(Par) side condition violated by placeholder allocation"
        );
        out.push((l.clone(), par(t1.clone(), right.clone())));
    }
    for (l, t2) in &rsteps {
        debug_assert!(
            bound_names_label(l).is_disjoint(&free(left)),
            "(Par) side condition violated by placeholder allocation"
        );
        out.push((l.clone(), par(left.clone(), t2.clone())));
    }
    let mut sync = |ins: &[(Label, T)], outs: &[(Label, T)], in_left: bool| {
        for (li, ti) in ins {
            let Label::In { chan: xi, binder_base } = li else { continue };
            let a = Name::free(binder_base.clone());
            for (lo, to) in outs {
                match lo {
                    Label::Out { chan, object } if chan == xi => {
                        let ti = subst(ti, &a, object);
                        let target = if in_left {
                            par(ti, to.clone())
                        } else {
                            par(to.clone(), ti)
                        };
                        out.push((Label::Tau, target));
                    }
                    Label::BoundOut { chan, object_base, ty } if chan == xi => {
                        let b0 = Name::free(object_base.clone());
                        let ti = subst(ti, &a, &b0);
                        let body = if in_left {
                            par(ti, to.clone())
                        } else {
                            par(to.clone(), ti)
                        };
                        let target = new_name(object_base, ty.clone(), body);
                        debug_assert!(
                            !free(&target).contains(&b0),
                            "(Close) must rebind the extruded name"
                        );
                        out.push((Label::Tau, target));
                    }
                    _ => {}
                }
            }
        }
    };
    sync(&lsteps, &rsteps, true);
    sync(&rsteps, &lsteps, false);
    out
}

fn subst_p(p: &Process, a: &Name, b: &Name) -> Process {
    match subst(&Term::Process(p.clone()), a, b) {
        Term::Process(p) => p,
        Term::System(_) => unreachable!(),
    }
}

fn subst_s(s: &System, a: &Name, b: &Name) -> System {
    match subst(&Term::System(s.clone()), a, b) {
        Term::System(s) => s,
        Term::Process(_) => unreachable!(),
    }
}

fn instantiate_process(p: &Process, base: &str, z: &Name) -> Process {
    match instantiate(&Term::Process(p.clone()), base, z) {
        Term::Process(p) => p,
        Term::System(_) => unreachable!(),
    }
}

fn instantiate_system(s: &System, base: &str, z: &Name) -> System {
    match instantiate(&Term::System(s.clone()), base, z) {
        Term::System(s) => s,
        Term::Process(_) => unreachable!(),
    }
}

fn free_names_p(p: &Process) -> BTreeSet<Name> {
    free_names(&Term::Process(p.clone()))
}

fn free_names_s(s: &System) -> BTreeSet<Name> {
    free_names(&Term::System(s.clone()))
}

/// Breadth-first closure of `step` from the canonical form of `t`,
/// deduplicating states by canonical-form equality. Stops and sets
/// `truncated` when either limit is reached.
pub fn explore(t: &Term, max_states: usize, max_depth: usize) -> TransitionGraph {
    explore_filtered(t, max_states, max_depth, false)
}

/// Like [`explore`] but keeps only internal (tau) transitions.
pub fn explore_tau(t: &Term, max_states: usize, max_depth: usize) -> TransitionGraph {
    explore_filtered(t, max_states, max_depth, true)
}

fn explore_filtered(t: &Term, max_states: usize, max_depth: usize, tau_only: bool) -> TransitionGraph {
    assert!(max_states >= 1 && max_depth >= 1, "exploration limits must be at least 1");
    let root = canonical(t);
    let mut states = vec![root.clone()];
    let mut index: HashMap<String, usize> = HashMap::new();
    index.insert(print_term(&root), 0);
    let mut edges = vec![];
    let mut truncated = false;
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    queue.push_back((0, 0));
    while let Some((src, depth)) = queue.pop_front() {
        let transitions: Vec<Transition> = step(&states[src])
            .into_iter()
            .filter(|tr| !tau_only || tr.label == Label::Tau)
            .collect();
        if transitions.is_empty() {
            continue;
        }
        if depth == max_depth {
            truncated = true;
            continue;
        }
        for tr in transitions {
            let key = print_term(&tr.target);
            let dst = match index.get(&key) {
                Some(&i) => i,
                None => {
                    if states.len() == max_states {
                        truncated = true;
                        continue;
                    }
                    let i = states.len();
                    states.push(tr.target.clone());
                    index.insert(key, i);
                    queue.push_back((i, depth + 1));
                    i
                }
            };
            edges.push((src, tr.label, dst));
        }
    }
    edges.sort_by(|a, b| {
        (a.0, print_label(&a.1), a.2).cmp(&(b.0, print_label(&b.1), b.2))
    });
    edges.dedup();
    TransitionGraph { states, edges, root: 0, truncated }
}

/// All root-to-sink label sequences of an acyclic, complete graph,
/// deduplicated and ordered lexicographically by printed labels.
pub fn maximal_traces(g: &TransitionGraph) -> Result<Vec<Vec<Label>>, TraceError> {
    if g.truncated {
        return Err(TraceError::GraphTruncated);
    }
    let mut succ: BTreeMap<usize, Vec<(Label, usize)>> = BTreeMap::new();
    for (s, l, d) in &g.edges {
        succ.entry(*s).or_default().push((l.clone(), *d));
    }
    if has_cycle(g.states.len(), &succ) {
        return Err(TraceError::GraphCyclic);
    }
    let mut traces = vec![];
    let mut prefix = vec![];
    collect_traces(g.root, &succ, &mut prefix, &mut traces);
    let mut keyed: Vec<(Vec<String>, Vec<Label>)> = traces
        .into_iter()
        .map(|t| (t.iter().map(print_label).collect(), t))
        .collect();
    keyed.sort();
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

fn has_cycle(n: usize, succ: &BTreeMap<usize, Vec<(Label, usize)>>) -> bool {
    // Colors: 0 unvisited, 1 on stack, 2 done.
    fn visit(v: usize, succ: &BTreeMap<usize, Vec<(Label, usize)>>, color: &mut [u8]) -> bool {
        color[v] = 1;
        if let Some(next) = succ.get(&v) {
            for (_, d) in next {
                if color[*d] == 1 {
                    return true;
                }
                if color[*d] == 0 && visit(*d, succ, color) {
                    return true;
                }
            }
        }
        color[v] = 2;
        false
    }
    let mut color = vec![0u8; n];
    (0..n).any(|v| color[v] == 0 && visit(v, succ, &mut color))
}

fn collect_traces(
    v: usize,
    succ: &BTreeMap<usize, Vec<(Label, usize)>>,
    prefix: &mut Vec<Label>,
    out: &mut Vec<Vec<Label>>,
) {
    match succ.get(&v) {
        None => out.push(prefix.clone()),
        Some(next) if next.is_empty() => out.push(prefix.clone()),
        Some(next) => {
            for (l, d) in next {
                prefix.push(l.clone());
                collect_traces(*d, succ, prefix, out);
                prefix.pop();
            }
        }
    }
}
