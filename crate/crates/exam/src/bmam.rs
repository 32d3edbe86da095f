//! The backtracking extension of the weak-head machine to strong normal
//! forms. Search enters abstraction bodies (recording binders on an
//! abstraction stack) and, once a sub-term is finished, backtracks through
//! a dump of application frames to find the next argument to evaluate.
//! It implements leftmost reduction and serves as the baseline the jumping
//! machine is measured against.

use std::fmt;

use crate::mam::{render_stack, well_named_copy, Env, Label, Stack};
use crate::strategies;
use crate::syntax::{Name, NameSupply, Term};
use crate::trace::{Outcome, Trace, TraceStep};

/// Binders entered and not yet rebuilt; the back is the innermost.
pub type AbsStack = Vec<Name>;

/// A suspended application context: the abstraction stack at the time, the
/// finished function part, and the arguments still to process.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub abs: AbsStack,
    pub term: Term,
    pub stack: Stack,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Searching for redexes and evaluating.
    Eval,
    /// Walking back out of a finished sub-term.
    Back,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Eval => write!(f, "▼"),
            Phase::Back => write!(f, "▲"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BmamState {
    pub abs: AbsStack,
    pub active: Term,
    pub stack: Stack,
    pub dump: Vec<Frame>,
    pub env: Env,
    pub phase: Phase,
    pub supply: NameSupply,
}

impl BmamState {
    pub fn render_fields(&self) -> Vec<(String, String)> {
        let abs = if self.abs.is_empty() {
            "ε".to_string()
        } else {
            self.abs.iter().map(Name::to_string).collect::<Vec<_>>().join(":")
        };
        let dump = if self.dump.is_empty() {
            "ε".to_string()
        } else {
            self.dump
                .iter()
                .rev()
                .map(|f| {
                    let a = if f.abs.is_empty() {
                        "ε".to_string()
                    } else {
                        f.abs.iter().map(Name::to_string).collect::<Vec<_>>().join(":")
                    };
                    format!("({}, {}, {})", a, f.term, render_stack(&f.stack))
                })
                .collect::<Vec<_>>()
                .join(" : ")
        };
        vec![
            ("abs".to_string(), abs),
            ("active".to_string(), self.active.to_string()),
            ("stack".to_string(), render_stack(&self.stack)),
            ("dump".to_string(), dump),
            ("env".to_string(), self.env.to_string()),
            ("phase".to_string(), self.phase.to_string()),
        ]
    }
}

pub fn init(t: &Term) -> BmamState {
    let mut supply = crate::mam::init_supply(t);
    let active = well_named_copy(t, &mut supply);
    BmamState {
        abs: AbsStack::new(),
        active,
        stack: Stack::new(),
        dump: Vec::new(),
        env: Env::new(),
        phase: Phase::Eval,
        supply,
    }
}

/// Final states backtrack with nothing left: empty stack, empty
/// abstraction stack, empty dump.
pub fn is_final(s: &BmamState) -> bool {
    s.phase == Phase::Back && s.stack.is_empty() && s.abs.is_empty() && s.dump.is_empty()
}

/// One transition, or `None` on final states. Exactly one row applies to
/// any non-final state.
pub fn step(s: &BmamState) -> Option<(Label, BmamState)> {
    let mut next = s.clone();
    match s.phase {
        Phase::Eval => match &s.active {
            Term::App(f, a) => {
                next.active = (**f).clone();
                next.stack.push_front((**a).clone());
                Some((Label::SeaApp, next))
            }
            Term::Lam(x, b) => match next.stack.pop_front() {
                Some(u) => {
                    next.env.push_front(x.clone(), u);
                    next.active = (**b).clone();
                    Some((Label::Beta, next))
                }
                None => {
                    next.abs.push(x.clone());
                    next.active = (**b).clone();
                    Some((Label::SeaLam, next))
                }
            },
            Term::Var(x) => match s.env.lookup(x) {
                Some(t) => {
                    let t = t.clone();
                    next.active = t.rename_fresh(&mut next.supply);
                    Some((Label::Sub, next))
                }
                None => {
                    next.phase = Phase::Back;
                    Some((Label::SwitchBack, next))
                }
            },
        },
        Phase::Back => {
            if let Some(u) = next.stack.pop_front() {
                // suspend the finished function part and evaluate the next
                // argument from scratch
                next.dump.push(Frame {
                    abs: std::mem::take(&mut next.abs),
                    term: std::mem::replace(&mut next.active, u),
                    stack: std::mem::take(&mut next.stack),
                });
                next.phase = Phase::Eval;
                return Some((Label::SwitchEval, next));
            }
            if let Some(x) = next.abs.pop() {
                next.active = Term::Lam(x, Box::new(next.active));
                return Some((Label::BackLam, next));
            }
            if let Some(frame) = next.dump.pop() {
                next.abs = frame.abs;
                next.stack = frame.stack;
                next.active = Term::app(frame.term, next.active);
                return Some((Label::BackApp, next));
            }
            None
        }
    }
}

/// The phase-▲ invariant: the active term is beta-normal and fully
/// resolved against the environment.
pub fn back_phase_invariant_ok(s: &BmamState) -> bool {
    if s.phase != Phase::Back {
        return true;
    }
    strategies::is_normal(&s.active)
        && s.active.free_vars().iter().all(|x| !s.env.contains(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotFinal;

impl fmt::Display for NotFinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "state is not final")
    }
}

impl std::error::Error for NotFinal {}

/// The computed normal form of a final state.
pub fn result(s: &BmamState) -> Result<Term, NotFinal> {
    if is_final(s) {
        Ok(s.active.clone())
    } else {
        Err(NotFinal)
    }
}

/// Constructor count over every component.
pub fn state_size(s: &BmamState) -> usize {
    s.active.size()
        + s.stack.iter().map(Term::size).sum::<usize>()
        + s.env.iter().map(|(_, t)| t.size()).sum::<usize>()
        + s.dump
            .iter()
            .map(|f| f.term.size() + f.stack.iter().map(Term::size).sum::<usize>())
            .sum::<usize>()
}

pub fn run(t: &Term, fuel: u64, snapshots: bool) -> (Trace, BmamState) {
    let mut s = init(t);
    let mut trace = Trace::new_bmam(t.clone(), fuel);
    loop {
        let over_budget = trace.steps.len() % 32 == 31
            && state_size(&s) > crate::exam::STATE_SIZE_BUDGET;
        if trace.steps.len() as u64 >= fuel || over_budget {
            trace.finish(Outcome::FuelExhausted, s.active.to_string(), None);
            return (trace, s);
        }
        match step(&s) {
            None => {
                let snap = snapshots.then(|| s.render_fields());
                trace.finish(Outcome::Final, s.active.to_string(), snap);
                return (trace, s);
            }
            Some((label, next)) => {
                trace.push(TraceStep {
                    label,
                    job: None,
                    redex_addr: None,
                    snapshot: snapshots.then(|| s.render_fields()),
                });
                s = next;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::strategies::{normalize, Picker};

    fn labels_of(trace: &Trace) -> Vec<Label> {
        trace.steps.iter().map(|s| s.label).collect()
    }

    #[test]
    fn init_is_well_named() {
        for src in ["x", "\\x. x", "(\\x. x) (\\x. x x)"] {
            let s = init(&parse(src).unwrap());
            assert!(s.active.is_well_named());
            assert_eq!(s.phase, Phase::Eval);
            assert!(s.abs.is_empty() && s.stack.is_empty() && s.dump.is_empty());
        }
    }

    #[test]
    fn hand_run_identity_abstraction() {
        // \x. x: enter the binder, switch to backtracking, rebuild
        let (trace, s) = run(&parse("\\x. x").unwrap(), 10, false);
        assert_eq!(
            labels_of(&trace),
            vec![Label::SeaLam, Label::SwitchBack, Label::BackLam]
        );
        assert_eq!(result(&s).unwrap(), parse("\\x. x").unwrap());
    }

    #[test]
    fn hand_run_neutral_application() {
        // x y: search, switch, evaluate the argument, rebuild the application
        let (trace, s) = run(&parse("x y").unwrap(), 10, false);
        assert_eq!(
            labels_of(&trace),
            vec![
                Label::SeaApp,
                Label::SwitchBack,
                Label::SwitchEval,
                Label::SwitchBack,
                Label::BackApp
            ]
        );
        assert_eq!(result(&s).unwrap(), parse("x y").unwrap());
    }

    #[test]
    fn hand_run_identity_redex() {
        let (trace, s) = run(&parse("(\\x. x) y").unwrap(), 10, false);
        assert_eq!(
            labels_of(&trace),
            vec![Label::SeaApp, Label::Beta, Label::Sub, Label::SwitchBack]
        );
        assert_eq!(result(&s).unwrap(), parse("y").unwrap());
        assert_eq!(trace.beta_count, 1);
    }

    #[test]
    fn argument_under_binder_backtracks_correctly() {
        // \a. x y: the argument evaluation must not see the outer binder
        let (trace, s) = run(&parse("\\a. x y").unwrap(), 20, false);
        assert_eq!(trace.outcome, Outcome::Final);
        assert_eq!(result(&s).unwrap(), parse("\\a. x y").unwrap());
    }

    #[test]
    fn outermost_loop_is_never_entered() {
        // the looping argument is erased by the head steps
        let t = parse("(\\x. \\y. x) z ((\\w. w w) (\\w. w w))").unwrap();
        let (trace, s) = run(&t, 50, false);
        assert_eq!(trace.outcome, Outcome::Final);
        assert_eq!(result(&s).unwrap(), parse("z").unwrap());
        assert_eq!(trace.beta_count, 2);
    }

    #[test]
    fn omega_exhausts_fuel() {
        let omega = parse("(\\w. w w) (\\w. w w)").unwrap();
        let (trace, _) = run(&omega, 60, false);
        assert_eq!(trace.outcome, Outcome::FuelExhausted);
    }

    #[test]
    fn back_phase_states_are_normal() {
        let t = parse("x ((\\y. y) z) (\\q. q w)").unwrap();
        let mut s = init(&t);
        while let Some((_, next)) = step(&s) {
            assert!(back_phase_invariant_ok(&next));
            s = next;
        }
    }

    #[test]
    fn agrees_with_leftmost_reference() {
        for src in [
            "x ((\\y. y) z)",
            "(\\x. x x) (\\y. y)",
            "\\a. (\\b. b) a ((\\c. c c) d)",
            "x ((\\y. y) z) ((\\w. w w) z)",
        ] {
            let t = parse(src).unwrap();
            let (nf, count) = normalize(&t, Picker::Leftmost, 500).unwrap();
            let (trace, s) = run(&t, 5000, false);
            assert_eq!(trace.outcome, Outcome::Final, "{src}");
            assert!(result(&s).unwrap().alpha_eq(&nf), "{src}");
            assert_eq!(trace.beta_count, count, "{src}");
        }
    }

    #[test]
    fn determinism() {
        let t = parse("x ((\\y. y) z)").unwrap();
        let (t1, _) = run(&t, 100, false);
        let (t2, _) = run(&t, 100, false);
        assert_eq!(t1, t2);
    }
}
