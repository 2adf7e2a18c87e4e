//! The Privacy Calculus term language: a two-level (process/system) AST
//! with CINNI-indexed names, substitution, alpha-canonicalization,
//! structural congruence, and a concrete syntax.

mod congruence;
mod names;
mod nameless;
mod parse;
mod print;


pub use congruence::{congruent, congruent_process, congruent_system, LevelMismatch};
pub use names::{
    bound_names_label, free_names, free_names_label, free_names_process, free_names_system,
    shift_down, shift_down_label, subst, subst_process, subst_system,
};
pub use nameless::{alpha_canonical, canonical};
pub use parse::{parse_process, parse_system, parse_term, parse_type, SyntaxError};
pub use print::{print_label, print_process, print_system, print_term, print_type};

pub(crate) use names::{all_bases, instantiate};

/// A CINNI-indexed name: a base identifier plus a natural index.
///
/// Index `n` means "skip `n` enclosing binders of the same base"; a name
/// whose index exceeds the number of enclosing same-base binders is free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name {
    pub base: String,
    pub index: u32,
}

impl Name {
    pub fn new(base: impl Into<String>, index: u32) -> Self {
        Name { base: base.into(), index }
    }

    /// Name with index 0, the common case.
    pub fn free(base: impl Into<String>) -> Self {
        Name::new(base, 0)
    }
}

impl std::fmt::Display for Name {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.index == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}~{}", self.base, self.index)
        }
    }
}

/// The kind of an atomic group: a concrete user or a role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoleKind {
    User,
    Role,
}

/// A group: an atom (user or role) or a union of groups.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Atom { id: String, role_kind: RoleKind },
    Union { left: Box<Group>, right: Box<Group> },
}

impl Group {
    pub fn role(id: impl Into<String>) -> Self {
        Group::Atom { id: id.into(), role_kind: RoleKind::Role }
    }

    pub fn user(id: impl Into<String>) -> Self {
        Group::Atom { id: id.into(), role_kind: RoleKind::User }
    }

    /// Union of two groups; `G ∪ G` collapses to `G`.
    pub fn union(left: Group, right: Group) -> Self {
        if left == right {
            left
        } else {
            Group::Union { left: Box::new(left), right: Box::new(right) }
        }
    }

    /// All atomic operands, left to right.
    pub fn atoms(&self) -> Vec<&Group> {
        match self {
            Group::Atom { .. } => vec![self],
            Group::Union { left, right } => {
                let mut v = left.atoms();
                v.extend(right.atoms());
                v
            }
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Group::Atom { id, .. } => write!(f, "{id}"),
            Group::Union { left, right } => write!(f, "{left}+{right}"),
        }
    }
}

/// A Privacy Calculus type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrivType {
    /// A basic type, e.g. the distinguished token type.
    Basic { id: String },
    /// A context variable with its finite domain of values.
    ContextVar { id: String, domain: Vec<String> },
    /// `G[T]`: a channel usable by group `G` carrying messages of type `T`.
    GroupType { group: Group, inner: Box<PrivType> },
}

impl PrivType {
    pub fn basic(id: impl Into<String>) -> Self {
        PrivType::Basic { id: id.into() }
    }

    pub fn group(group: Group, inner: PrivType) -> Self {
        PrivType::GroupType { group, inner: Box::new(inner) }
    }
}

/// A process-level term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    Empty,
    /// `x(y:T).P` — receive `y` of type `T` on `x`, binding `y` in the continuation.
    Input { subject: Name, binder_base: String, ty: PrivType, cont: Box<Process> },
    /// `x!<y>.P`
    Output { subject: Name, object: Name, cont: Box<Process> },
    /// `tau.P`
    Silent { cont: Box<Process> },
    /// `(new x:T)P`
    NewName { base: String, ty: PrivType, cont: Box<Process> },
    Par { left: Box<Process>, right: Box<Process> },
    Choice { left: Box<Process>, right: Box<Process> },
    /// `if x=v then P else Q`
    Cond { scrutinee: Name, value: Name, then_p: Box<Process>, else_p: Box<Process> },
    /// `!P`
    Repl { body: Box<Process> },
    /// A process variable, used as a black-box participant placeholder.
    Var { id: String },
}

/// A system-level term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum System {
    Empty,
    NewName { base: String, ty: PrivType, cont: Box<System> },
    Par { left: Box<System>, right: Box<System> },
    /// `(group R)S`
    GroupBind { role: Group, cont: Box<System> },
    /// `[G,u]{P}` — process `P` runs on behalf of group `G` for purpose `u`.
    Lift { group: Group, purpose: String, body: Process },
}

/// Either level of the term language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Process(Process),
    System(System),
}

/// A transition label of the late semantics.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Tau,
    /// `x?b` — input on `x`, binding `b` (late: no object yet).
    In { chan: Name, binder_base: String },
    /// `x!y`
    Out { chan: Name, object: Name },
    /// `x!(new b:T)` — output extruding the restricted name `b` of type `T`.
    BoundOut { chan: Name, object_base: String, ty: PrivType },
}

impl Process {
    pub fn input(subject: Name, binder: impl Into<String>, ty: PrivType, cont: Process) -> Self {
        Process::Input { subject, binder_base: binder.into(), ty, cont: Box::new(cont) }
    }

    pub fn output(subject: Name, object: Name, cont: Process) -> Self {
        Process::Output { subject, object, cont: Box::new(cont) }
    }

    pub fn silent(cont: Process) -> Self {
        Process::Silent { cont: Box::new(cont) }
    }

    pub fn new_name(base: impl Into<String>, ty: PrivType, cont: Process) -> Self {
        Process::NewName { base: base.into(), ty, cont: Box::new(cont) }
    }

    pub fn par(left: Process, right: Process) -> Self {
        Process::Par { left: Box::new(left), right: Box::new(right) }
    }

    pub fn choice(left: Process, right: Process) -> Self {
        Process::Choice { left: Box::new(left), right: Box::new(right) }
    }

    pub fn cond(scrutinee: Name, value: Name, then_p: Process, else_p: Process) -> Self {
        Process::Cond {
            scrutinee,
            value,
            then_p: Box::new(then_p),
            else_p: Box::new(else_p),
        }
    }

    pub fn repl(body: Process) -> Self {
        Process::Repl { body: Box::new(body) }
    }

    /// Right-nested parallel composition of the operands; empty list gives `0`.
    pub fn par_all(mut ops: Vec<Process>) -> Process {
        match ops.len() {
            0 => Process::Empty,
            1 => ops.pop().unwrap(),
            _ => {
                let first = ops.remove(0);
                Process::par(first, Process::par_all(ops))
            }
        }
    }

    /// Right-nested choice of the operands; empty list gives `0`.
    pub fn choice_all(mut ops: Vec<Process>) -> Process {
        match ops.len() {
            0 => Process::Empty,
            1 => ops.pop().unwrap(),
            _ => {
                let first = ops.remove(0);
                Process::choice(first, Process::choice_all(ops))
            }
        }
    }
}

impl System {
    pub fn new_name(base: impl Into<String>, ty: PrivType, cont: System) -> Self {
        System::NewName { base: base.into(), ty, cont: Box::new(cont) }
    }

    pub fn par(left: System, right: System) -> Self {
        System::Par { left: Box::new(left), right: Box::new(right) }
    }

    pub fn group_bind(role: Group, cont: System) -> Self {
        System::GroupBind { role, cont: Box::new(cont) }
    }

    pub fn lift(group: Group, purpose: impl Into<String>, body: Process) -> Self {
        System::Lift { group, purpose: purpose.into(), body }
    }

    pub fn par_all(mut ops: Vec<System>) -> System {
        match ops.len() {
            0 => System::Empty,
            1 => ops.pop().unwrap(),
            _ => {
                let first = ops.remove(0);
                System::par(first, System::par_all(ops))
            }
        }
    }
}

impl From<Process> for Term {
    fn from(p: Process) -> Self {
        Term::Process(p)
    }
}

impl From<System> for Term {
    fn from(s: System) -> Self {
        Term::System(s)
    }
}

impl std::fmt::Display for Process {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print::print_process(self))
    }
}

impl std::fmt::Display for System {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print::print_system(self))
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Term::Process(p) => write!(f, "{p}"),
            Term::System(s) => write!(f, "{s}"),
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print_label(self))
    }
}
