//! Executable property suites tying the machines to the reference
//! strategies: read-back transparency of overhead steps, beta projection
//! and reflection, the overhead measure laws, the one-step diamond,
//! the reachable-state invariants, three-way differential agreement,
//! leftmost addressing, least-level addressing, and fairness.

use std::fmt;

use crate::bmam;
use crate::exam::{self, ExamState, StepInfo};
use crate::gen::{gen_terms, GenMode};
use crate::mam;
use crate::pools::{self, PoolTemplate, TemplateKind};
use crate::strategies::{self, Picker};
use crate::syntax::Term;
use crate::trace::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Transparency,
    Projection,
    Reflection,
    Measure,
    Diamond,
    Invariants,
    Differential,
    Leftmost,
    Level,
    Fair,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 10] = [
        SuiteKind::Transparency,
        SuiteKind::Projection,
        SuiteKind::Reflection,
        SuiteKind::Measure,
        SuiteKind::Diamond,
        SuiteKind::Invariants,
        SuiteKind::Differential,
        SuiteKind::Leftmost,
        SuiteKind::Level,
        SuiteKind::Fair,
    ];
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteKind::Transparency => "transparency",
            SuiteKind::Projection => "projection",
            SuiteKind::Reflection => "reflection",
            SuiteKind::Measure => "measure",
            SuiteKind::Diamond => "diamond",
            SuiteKind::Invariants => "invariants",
            SuiteKind::Differential => "differential",
            SuiteKind::Leftmost => "leftmost",
            SuiteKind::Level => "level",
            SuiteKind::Fair => "fair",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for SuiteKind {
    type Err = String;

    fn from_str(s: &str) -> Result<SuiteKind, String> {
        SuiteKind::ALL
            .iter()
            .copied()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Outcome of one suite: how many terms were exercised, how many
/// individual checks ran, and the failures (term plus detail).
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub cases: usize,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: SuiteKind) -> SuiteReport {
        SuiteReport { suite, cases: 0, checks: 0, failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, detail: String) {
        self.failures.push(detail);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(
                f,
                "suite {}: pass ({} cases, {} checks)",
                self.suite, self.cases, self.checks
            )
        } else {
            writeln!(
                f,
                "suite {}: FAIL ({} cases, {} checks, {} failures)",
                self.suite,
                self.cases,
                self.checks,
                self.failures.len()
            )?;
            for failure in self.failures.iter().take(5) {
                writeln!(f, "  {failure}")?;
            }
            if self.failures.len() > 5 {
                writeln!(f, "  ... and {} more", self.failures.len() - 5)?;
            }
            Ok(())
        }
    }
}

/// Mixed open/closed corpus for the suites.
pub fn corpus(count: usize, size: usize, seed: u64) -> Vec<Term> {
    let closed = gen_terms(count / 2, size, seed, GenMode::Closed);
    let open = gen_terms(count - count / 2, size, seed ^ 0x9e37_79b9, GenMode::Open);
    closed.into_iter().chain(open).collect()
}

/// Step the machine to completion (or fuel), handing every transition to
/// the callback as (pre-state, step info, post-state). Returns the last
/// state, the beta count, and whether the run finished.
pub fn walk_exam<F>(
    t: &Term,
    kind: TemplateKind,
    seed: u64,
    fuel: u64,
    mut on_step: F,
) -> (ExamState, u64, bool)
where
    F: FnMut(&ExamState, &StepInfo, &ExamState),
{
    let mut s = exam::init(t, kind, seed);
    let mut betas = 0;
    for i in 0..fuel {
        if exam::is_final(&s) {
            return (s, betas, true);
        }
        if i % 32 == 31 && exam::state_size(&s) > exam::STATE_SIZE_BUDGET {
            return (s, betas, false);
        }
        let pick = s.pool.choose().expect("non-empty pool offers a job");
        let (info, next) = exam::step(&s, pick).expect("chosen job steps");
        if info.label.is_beta() {
            betas += 1;
        }
        on_step(&s, &info, &next);
        s = next;
    }
    let finished = exam::is_final(&s);
    (s, betas, finished)
}

const MACHINE_FUEL: u64 = 200_000;
const REFERENCE_FUEL: u64 = 2_000;

fn readback_unchanged(report: &mut SuiteReport, t: &Term, pre: &ExamState, info: &StepInfo, post: &ExamState) {
    use crate::mam::Label;
    let before = exam::readback(pre);
    let after = exam::readback(post);
    report.checks += 1;
    match info.label {
        Label::Beta => {}
        Label::Sub => {
            // the on-the-fly renaming moves binder names, so the read-back
            // is preserved up to alpha here and on the nose elsewhere
            let same = match (before.to_term(), after.to_term()) {
                (Some(b), Some(a)) => b.alpha_eq(&a),
                _ => before == after,
            };
            if !same {
                report.fail(format!("term {t}: sub step changed the read-back"));
            }
        }
        _ => {
            if before != after {
                report.fail(format!(
                    "term {t}: overhead step {} changed the read-back from {before} to {after}",
                    info.label
                ));
            }
        }
    }
}

fn suite_transparency(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Transparency);
    for t in corpus(count, size, seed) {
        report.cases += 1;
        for (kind, s) in [(TemplateKind::Stack, 0), (TemplateKind::Set, seed)] {
            walk_exam(&t, kind, s, 2_000, |pre, info, post| {
                readback_unchanged(&mut report, &t, pre, info, post);
            });
        }
        // the weak-head machine obeys the same discipline
        let mut s = mam::init(&t);
        for _ in 0..2_000 {
            let Some((label, next)) = mam::step(&s) else { break };
            report.checks += 1;
            let before = mam::readback(&s);
            let after = mam::readback(&next);
            let ok = match label {
                crate::mam::Label::Beta => true,
                crate::mam::Label::Sub => before.alpha_eq(&after),
                _ => before == after,
            };
            if !ok {
                report.fail(format!("term {t}: weak-head overhead step changed the read-back"));
            }
            s = next;
        }
    }
    report
}

fn suite_projection(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Projection);
    for t in corpus(count, size, seed) {
        report.cases += 1;
        for (kind, s) in [(TemplateKind::Stack, 0), (TemplateKind::Set, seed)] {
            walk_exam(&t, kind, s, 2_000, |pre, info, post| {
                let Some(addr) = &info.redex_addr else { return };
                report.checks += 1;
                let Some(before) = exam::readback_term(pre) else {
                    report.fail(format!("term {t}: pre-state read-back has holes"));
                    return;
                };
                if !strategies::external_redexes(&before).contains(addr) {
                    report.fail(format!(
                        "term {t}: beta at {addr} is not external in {before}"
                    ));
                    return;
                }
                let contracted = strategies::contract(&before, addr).expect("external redex");
                match exam::readback_term(post) {
                    Some(after) if after == contracted => {}
                    _ => report.fail(format!(
                        "term {t}: beta at {addr} did not project onto the contraction"
                    )),
                }
                if kind == TemplateKind::Stack {
                    let leftmost = strategies::leftmost_redex_addr(&before);
                    if leftmost.as_ref() != Some(addr) {
                        report.fail(format!(
                            "term {t}: stack-template beta at {addr} is not the leftmost redex"
                        ));
                    }
                }
            });
        }
    }
    report
}

/// Sample reachable states along a set-template run.
fn sample_states(t: &Term, seed: u64, fuel: u64) -> Vec<ExamState> {
    let mut states = Vec::new();
    let mut s = exam::init(t, TemplateKind::Set, seed);
    states.push(s.clone());
    for i in 0..fuel {
        if exam::is_final(&s) || (i % 32 == 31 && exam::state_size(&s) > exam::STATE_SIZE_BUDGET)
        {
            break;
        }
        let pick = s.pool.choose().expect("non-empty pool");
        s = exam::step(&s, pick).expect("chosen job steps").1;
        states.push(s.clone());
    }
    states
}

fn suite_reflection(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Reflection);
    for t in corpus(count, size, seed) {
        report.cases += 1;
        for state in sample_states(&t, seed, 300).into_iter().step_by(7) {
            let (onf, _) = exam::o_normalize(state);
            let Some(read) = exam::readback_term(&onf) else {
                report.fail(format!("term {t}: o-normal state reads back with holes"));
                continue;
            };
            let ext = strategies::external_redexes(&read);
            if exam::is_final(&onf) {
                report.checks += 1;
                if !ext.is_empty() {
                    report.fail(format!("term {t}: final state reads back to non-normal {read}"));
                }
                continue;
            }
            for addr in ext.iter() {
                report.checks += 1;
                let contracted = strategies::contract(&read, addr).expect("external redex");
                let mut matched = false;
                for (name, label) in exam::enabled(&onf) {
                    if !label.is_beta() {
                        report.fail(format!("term {t}: o-normal state has overhead move {label}"));
                        continue;
                    }
                    let (info, next) = exam::step(&onf, name).expect("enabled beta");
                    if info.redex_addr.as_ref() == Some(addr) {
                        match exam::readback_term(&next) {
                            Some(after) if after == contracted => matched = true,
                            _ => {}
                        }
                    }
                }
                if !matched {
                    report.fail(format!(
                        "term {t}: no enabled beta contracts the external redex at {addr} of {read}"
                    ));
                }
            }
        }
    }
    report
}

fn suite_measure(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Measure);
    for t in corpus(count, size.min(14), seed) {
        report.cases += 1;
        walk_exam(&t, TemplateKind::Set, seed, 400, |pre, info, post| {
            let (Ok(before), Ok(after)) = (exam::overhead_measure(pre), exam::overhead_measure(post))
            else {
                return; // measure overflow: law not checkable on this state
            };
            report.checks += 1;
            if info.label.is_beta() {
                return;
            }
            if before != after + 1 {
                report.fail(format!(
                    "term {t}: overhead step {} moved the measure {before} -> {after}",
                    info.label
                ));
            }
        });
        // measure is zero exactly on overhead-normal states
        for state in sample_states(&t, seed ^ 1, 120).into_iter().step_by(9) {
            if let Ok(m) = exam::overhead_measure(&state) {
                report.checks += 1;
                if (m == 0) != exam::is_overhead_normal(&state) {
                    report.fail(format!(
                        "term {t}: measure {m} disagrees with overhead-normality"
                    ));
                }
            }
        }
    }
    report
}

fn suite_diamond(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Diamond);
    let mut sampled = 0usize;
    for t in corpus(count, size, seed) {
        report.cases += 1;
        for state in sample_states(&t, seed, 200) {
            let names = state.pool.names();
            if names.len() < 2 {
                continue;
            }
            sampled += 1;
            let succs: Vec<_> = names
                .iter()
                .map(|&n| (n, exam::step(&state, n).expect("set template steps any job").1))
                .collect();
            for (i, (n1, s1)) in succs.iter().enumerate() {
                for (n2, s2) in succs.iter().skip(i + 1) {
                    if s1 == s2 {
                        continue;
                    }
                    report.checks += 1;
                    match exam::diamond_close(s1, *n1, s2, *n2) {
                        Some((c1, c2)) if exam::state_equiv_up_to_names(&c1, &c2) => {}
                        _ => report.fail(format!(
                            "term {t}: successors by {n1} and {n2} do not close"
                        )),
                    }
                }
            }
            if sampled >= 400 {
                return report;
            }
        }
    }
    report
}

fn suite_invariants(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Invariants);
    for t in corpus(count, size, seed) {
        report.cases += 1;
        for (kind, s) in [(TemplateKind::Stack, 0), (TemplateKind::Set, seed)] {
            let initial = exam::init(&t, kind, s);
            let r = exam::validate_invariants(&initial);
            report.checks += 1;
            if !r.ok() {
                report.fail(format!("term {t}: initial state violates invariants: {r}"));
            }
            walk_exam(&t, kind, s, 1_000, |_, _, post| {
                report.checks += 1;
                let r = exam::validate_invariants(post);
                if !r.ok() {
                    report.fail(format!("term {t}: {r}"));
                }
            });
        }
    }
    report
}

/// The three-way agreement on one term; `None` when some party did not
/// finish within its fuel.
pub fn differential_case(t: &Term, set_seeds: &[u64]) -> Option<Result<(), String>> {
    let (reference, ref_steps) = match strategies::normalize(t, Picker::Leftmost, REFERENCE_FUEL) {
        Ok(r) => r,
        Err(_) => return None,
    };
    let (stack_trace, stack_final) = exam::run(t, TemplateKind::Stack, 0, MACHINE_FUEL, false);
    if stack_trace.outcome != Outcome::Final {
        return None;
    }
    let stack_term = exam::final_term(&stack_final).expect("final state");
    if !stack_term.alpha_eq(&reference) {
        return Some(Err(format!(
            "term {t}: stack machine got {stack_term}, leftmost reference got {reference}"
        )));
    }
    if stack_trace.beta_count != ref_steps {
        return Some(Err(format!(
            "term {t}: stack machine used {} betas, leftmost reference {ref_steps}",
            stack_trace.beta_count
        )));
    }
    let (bmam_trace, bmam_final) = bmam::run(t, MACHINE_FUEL, false);
    if bmam_trace.outcome != Outcome::Final {
        return None;
    }
    let bmam_term = bmam::result(&bmam_final).expect("final state");
    if !bmam_term.alpha_eq(&reference) || bmam_trace.beta_count != ref_steps {
        return Some(Err(format!(
            "term {t}: backtracking machine got {bmam_term} in {} betas, expected {reference} in {ref_steps}",
            bmam_trace.beta_count
        )));
    }
    for &s in set_seeds {
        let (set_trace, set_final) = exam::run(t, TemplateKind::Set, s, MACHINE_FUEL, false);
        if set_trace.outcome != Outcome::Final {
            return Some(Err(format!(
                "term {t}: set machine (seed {s}) ran out of fuel on a normalizing term"
            )));
        }
        let set_term = exam::final_term(&set_final).expect("final state");
        if !set_term.alpha_eq(&reference) || set_trace.beta_count != ref_steps {
            return Some(Err(format!(
                "term {t}: set machine (seed {s}) got {set_term} in {} betas, expected {reference} in {ref_steps}",
                set_trace.beta_count
            )));
        }
    }
    Some(Ok(()))
}

fn suite_differential(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Differential);
    let seeds: Vec<u64> = (0..4).map(|i| seed.wrapping_add(i)).collect();
    for t in corpus(count, size, seed) {
        report.cases += 1;
        match differential_case(&t, &seeds) {
            None => {}
            Some(Ok(())) => report.checks += 1,
            Some(Err(e)) => report.fail(e),
        }
    }
    report
}

fn suite_leftmost(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Leftmost);
    for t in corpus(count, size, seed) {
        report.cases += 1;
        walk_exam(&t, TemplateKind::Stack, 0, 2_000, |pre, info, _| {
            // whenever the front job is beta-ready, its hole extended under
            // the remaining stack is exactly the leftmost redex position
            let Some(addr) = &info.redex_addr else { return };
            report.checks += 1;
            let Some(read) = exam::readback_term(pre) else {
                report.fail(format!("term {t}: read-back has holes"));
                return;
            };
            match strategies::leftmost_redex_addr(&read) {
                Some(leftmost) if &leftmost == addr => {}
                other => report.fail(format!(
                    "term {t}: front-job redex at {addr} but leftmost position is {other:?}"
                )),
            }
        });
    }
    report
}

fn suite_level(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Level);
    for t in corpus(count, size, seed) {
        report.cases += 1;
        report.checks += 1;
        if !pools::level_trace_check(&t, 2_000) {
            report.fail(format!(
                "term {t}: least-level machine contracted a non-minimal redex"
            ));
        }
    }
    report
}

fn suite_fair(count: usize, seed: u64, size: usize) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Fair);
    for t in corpus(count, size, seed) {
        report.cases += 1;
        report.checks += 1;
        if !pools::fair_progress_check(&t, 600) {
            report.fail(format!("term {t}: a job starved under the fair template"));
        }
    }
    report
}

pub fn run_suite(kind: SuiteKind, count: usize, seed: u64, size: usize) -> SuiteReport {
    match kind {
        SuiteKind::Transparency => suite_transparency(count, seed, size),
        SuiteKind::Projection => suite_projection(count, seed, size),
        SuiteKind::Reflection => suite_reflection(count, seed, size),
        SuiteKind::Measure => suite_measure(count, seed, size),
        SuiteKind::Diamond => suite_diamond(count, seed, size),
        SuiteKind::Invariants => suite_invariants(count, seed, size),
        SuiteKind::Differential => suite_differential(count, seed, size),
        SuiteKind::Leftmost => suite_leftmost(count, seed, size),
        SuiteKind::Level => suite_level(count, seed, size),
        SuiteKind::Fair => suite_fair(count, seed, size),
    }
}
