//! A machine for weak head reduction: an active term, an argument stack,
//! and a single global environment of delayed substitutions. Variables are
//! resolved by copying the environment entry with freshly renamed binders.
//!
//! The stack, environment and transition labels defined here are shared by
//! the stronger machines in [`crate::bmam`] and [`crate::exam`].

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::strategies;
use crate::syntax::{Address, Name, NameSupply, Term};
use crate::trace::{Outcome, Trace, TraceStep};

/// Argument stack; the front is the top.
pub type Stack = VecDeque<Term>;

pub fn render_stack(stack: &Stack) -> String {
    if stack.is_empty() {
        "ε".to_string()
    } else {
        stack
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(" : ")
    }
}

/// The global environment: delayed substitutions, most recent first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Env(pub VecDeque<(Name, Term)>);

impl Env {
    pub fn new() -> Env {
        Env(VecDeque::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.0.iter().any(|(y, _)| y == x)
    }

    pub fn lookup(&self, x: &Name) -> Option<&Term> {
        self.0.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn push_front(&mut self, x: Name, t: Term) {
        self.0.push_front((x, t));
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Term)> {
        self.0.iter()
    }

    /// Domain names in entry order (most recent first).
    pub fn dom(&self) -> Vec<&Name> {
        self.0.iter().map(|(x, _)| x).collect()
    }

    /// Entries have pairwise distinct names and no entry's name occurs in
    /// its own term or any later (older) term.
    pub fn local_scope_ok(&self) -> bool {
        let mut position = std::collections::BTreeMap::new();
        for (i, (x, _)) in self.0.iter().enumerate() {
            if position.insert(x, i).is_some() {
                return false;
            }
        }
        for (j, (_, t)) in self.0.iter().enumerate() {
            for y in t.free_vars() {
                if let Some(&i) = position.get(&y) {
                    if i <= j {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The name-lookup graph has no cycle; returns a name on one otherwise.
    pub fn acyclicity(&self) -> Result<(), Name> {
        fn visit<'a>(
            env: &'a Env,
            x: &'a Name,
            open: &mut Vec<&'a Name>,
            done: &mut std::collections::BTreeSet<&'a Name>,
        ) -> Result<(), Name> {
            if done.contains(x) {
                return Ok(());
            }
            if open.contains(&x) {
                return Err(x.clone());
            }
            if let Some(t) = env.lookup(x) {
                open.push(x);
                for y in t.free_vars() {
                    if let Some((dep, _)) = env.0.iter().find(|(n, _)| *n == y) {
                        visit(env, dep, open, done)?;
                    }
                }
                open.pop();
            }
            done.insert(x);
            Ok(())
        }
        let mut done = std::collections::BTreeSet::new();
        for (x, _) in self.0.iter() {
            visit(self, x, &mut Vec::new(), &mut done)?;
        }
        Ok(())
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let rendered: Vec<String> = self
            .0
            .iter()
            .map(|(x, t)| format!("[{x}:={t}]"))
            .collect();
        write!(f, "{}", rendered.join(" : "))
    }
}

/// Transition labels across all three machines. `Beta` is the only
/// beta-transition; everything else is overhead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    SeaApp,
    Beta,
    Sub,
    SeaLam,
    SeaVar,
    /// Switch from evaluation to backtracking (▼▲).
    SwitchBack,
    /// Leave backtracking to evaluate the next argument (▲▼).
    SwitchEval,
    /// Rebuild an abstraction while backtracking (▲λ).
    BackLam,
    /// Rebuild an application from the dump while backtracking (▲@).
    BackApp,
}

impl Label {
    pub fn is_beta(self) -> bool {
        self == Label::Beta
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::SeaApp => "sea_@",
            Label::Beta => "beta",
            Label::Sub => "sub",
            Label::SeaLam => "sea_λ",
            Label::SeaVar => "sea_v",
            Label::SwitchBack => "▼▲",
            Label::SwitchEval => "▲▼",
            Label::BackLam => "▲λ",
            Label::BackApp => "▲@",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MamState {
    pub active: Term,
    pub stack: Stack,
    pub env: Env,
    pub supply: NameSupply,
}

impl MamState {
    pub fn render_fields(&self) -> Vec<(String, String)> {
        vec![
            ("active".to_string(), self.active.to_string()),
            ("stack".to_string(), render_stack(&self.stack)),
            ("env".to_string(), self.env.to_string()),
        ]
    }
}

/// Initial supply for a machine run: above every index in the input so
/// later allocations are globally fresh.
pub fn init_supply(t: &Term) -> NameSupply {
    NameSupply::starting_at(t.max_name_index() + 1)
}

/// Well-named initialization. Inputs that are already well-named are kept
/// as they are (the identity is a well-named renaming); others get a fresh
/// renaming.
pub fn well_named_copy(t: &Term, supply: &mut NameSupply) -> Term {
    if t.is_well_named() {
        t.clone()
    } else {
        t.rename_fresh(supply)
    }
}

pub fn init(t: &Term) -> MamState {
    let mut supply = init_supply(t);
    let active = well_named_copy(t, &mut supply);
    MamState { active, stack: Stack::new(), env: Env::new(), supply }
}

/// One machine transition, or `None` when the state is final (an
/// abstraction with an empty stack, or a variable not bound by the
/// environment).
pub fn step(s: &MamState) -> Option<(Label, MamState)> {
    match &s.active {
        Term::App(f, a) => {
            let mut next = s.clone();
            next.active = (**f).clone();
            next.stack.push_front((**a).clone());
            Some((Label::SeaApp, next))
        }
        Term::Lam(x, b) => {
            let mut next = s.clone();
            let u = next.stack.pop_front()?;
            next.env.push_front(x.clone(), u);
            next.active = (**b).clone();
            Some((Label::Beta, next))
        }
        Term::Var(x) => {
            let t = s.env.lookup(x)?.clone();
            let mut next = s.clone();
            next.active = t.rename_fresh(&mut next.supply);
            Some((Label::Sub, next))
        }
    }
}

/// Substitute the environment into a term, most recent entry first.
pub fn term_under_env(t: &Term, env: &Env) -> Term {
    let mut cur = t.clone();
    for (x, u) in env.iter() {
        cur = cur.subst(x, u);
    }
    cur
}

pub fn stack_under_env(stack: &Stack, env: &Env) -> Stack {
    stack.iter().map(|t| term_under_env(t, env)).collect()
}

/// Fold a stack onto a term as applications, top first.
pub fn apply_stack(t: Term, stack: &Stack) -> Term {
    stack.iter().fold(t, |acc, u| Term::app(acc, u.clone()))
}

/// Environment-first read-back of a state to the term it represents.
pub fn readback(s: &MamState) -> Term {
    let t = term_under_env(&s.active, &s.env);
    let stack = stack_under_env(&s.stack, &s.env);
    apply_stack(t, &stack)
}

/// The beta-redex position that a `Beta` transition from this state
/// contracts in the read-back.
pub fn beta_redex_addr(s: &MamState) -> Option<Address> {
    match &s.active {
        Term::Lam(..) if !s.stack.is_empty() => Some(Address::lefts(s.stack.len() - 1)),
        _ => None,
    }
}

/// Constructor count over every component.
pub fn state_size(s: &MamState) -> usize {
    s.active.size()
        + s.stack.iter().map(Term::size).sum::<usize>()
        + s.env.iter().map(|(_, t)| t.size()).sum::<usize>()
}

/// Run the machine for at most `fuel` transitions (and within the state
/// size budget), recording a trace with per-step snapshots when
/// `snapshots` is set.
pub fn run(t: &Term, fuel: u64, snapshots: bool) -> (Trace, MamState) {
    let mut s = init(t);
    let mut trace = Trace::new_mam(t.clone(), fuel);
    loop {
        let over_budget = trace.steps.len() % 32 == 31
            && state_size(&s) > crate::exam::STATE_SIZE_BUDGET;
        if trace.steps.len() as u64 >= fuel || over_budget {
            trace.finish(Outcome::FuelExhausted, readback(&s).to_string(), None);
            return (trace, s);
        }
        match step(&s) {
            None => {
                let snap = snapshots.then(|| s.render_fields());
                trace.finish(Outcome::Final, readback(&s).to_string(), snap);
                return (trace, s);
            }
            Some((label, next)) => {
                let redex_addr = label.is_beta().then(|| beta_redex_addr(&s)).flatten();
                trace.push(TraceStep {
                    label,
                    job: None,
                    redex_addr,
                    snapshot: snapshots.then(|| s.render_fields()),
                });
                s = next;
            }
        }
    }
}

/// Local-scope and freshness checks for a reachable state, mirroring the
/// environment invariants of the stronger machines.
pub fn env_invariant_ok(s: &MamState) -> bool {
    s.env.local_scope_ok()
}

/// Iterate weak head steps with the reference stepper; returns the normal
/// form and the step count.
pub fn whnf_reference(t: &Term, fuel: u64) -> Option<(Term, u64)> {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        match strategies::whnf_step(&cur) {
            strategies::StepOutcome::Normal => return Some((cur, steps)),
            strategies::StepOutcome::Reduced { next, .. } => {
                if steps >= fuel {
                    return None;
                }
                cur = next;
                steps += 1;
            }
        }
    }
}
