//! The jumping machine for strong evaluation. A state is an approximant of
//! the normal form (a named multi-context), a pool of named jobs sharing
//! one global environment, and a name supply. Each job is a weak-head
//! machine in flight; finished spines and entered abstractions move into
//! the approximant, and each argument of a finished spine becomes a fresh
//! job. Which job runs next is entirely up to the pool template.
//!
//! Besides the machine itself this module houses its read-back, the
//! reachable-state invariant validators, the overhead measure, environment
//! and state equivalence, and the one-step diamond closure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::mam::{apply_stack, stack_under_env, term_under_env, Env, Label, Stack};
use crate::pools::{Pool, PoolError, PoolTemplate, TemplateKind};
use crate::syntax::{Address, HoleName, MultiCtx, Name, NameSupply, NodeTag, Term};
use crate::trace::{Outcome, Trace, TraceStep};

/// A named pair of a term and an argument stack: one weak-head evaluation
/// task, scheduled by the pool.
#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub name: HoleName,
    pub term: Term,
    pub stack: Stack,
}

impl Job {
    pub fn new(name: HoleName, term: Term) -> Job {
        Job { name, term, stack: Stack::new() }
    }

    pub fn render(&self) -> String {
        format!("({}, {}){}", self.term, crate::mam::render_stack(&self.stack), self.name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExamState {
    pub approx: MultiCtx,
    pub pool: Pool,
    pub env: Env,
    pub supply: NameSupply,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExamError {
    Pool(PoolError),
    NotFinal,
}

impl fmt::Display for ExamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExamError::Pool(e) => write!(f, "{e}"),
            ExamError::NotFinal => write!(f, "state is not final"),
        }
    }
}

impl std::error::Error for ExamError {}

impl From<PoolError> for ExamError {
    fn from(e: PoolError) -> ExamError {
        ExamError::Pool(e)
    }
}

/// What a step did: its label, the job that performed it, and for beta
/// steps the address of the contracted redex in the read-back.
#[derive(Clone, Debug, PartialEq)]
pub struct StepInfo {
    pub label: Label,
    pub job: HoleName,
    pub redex_addr: Option<Address>,
}

fn init_state(t: &Term, make_pool: impl FnOnce(Job) -> Pool) -> ExamState {
    let mut supply = NameSupply::new();
    let hole = supply.fresh_hole();
    supply.raise_above(t.max_name_index());
    let active = crate::mam::well_named_copy(t, &mut supply);
    ExamState {
        approx: MultiCtx::hole(hole),
        pool: make_pool(Job::new(hole, active)),
        env: Env::new(),
        supply,
    }
}

/// A single-hole approximant over a one-job pool holding a well-named copy
/// of `t`.
pub fn init(t: &Term, template: TemplateKind, seed: u64) -> ExamState {
    init_state(t, |job| Pool::new(template, seed, job))
}

pub fn init_with_pool(t: &Term, make_pool: impl FnOnce(Job) -> Pool) -> ExamState {
    init_state(t, make_pool)
}

/// The transition a job's shape triggers.
pub fn job_label(job: &Job, env: &Env) -> Label {
    match &job.term {
        Term::App(..) => Label::SeaApp,
        Term::Lam(..) if !job.stack.is_empty() => Label::Beta,
        Term::Lam(..) => Label::SeaLam,
        Term::Var(x) if env.contains(x) => Label::Sub,
        Term::Var(_) => Label::SeaVar,
    }
}

/// The selectable jobs and their labels, in name order. Empty iff the pool
/// is empty.
pub fn enabled(s: &ExamState) -> Vec<(HoleName, Label)> {
    let mut names = s.pool.selectable();
    names.sort();
    names
        .into_iter()
        .filter_map(|n| s.pool.get(n).map(|job| (n, job_label(job, &s.env))))
        .collect()
}

/// The redex position in the read-back contracted by a beta step of `job`:
/// the job's hole, then left under the remaining stack entries.
fn beta_addr(approx: &MultiCtx, job: &Job) -> Option<Address> {
    let hole = approx.hole_address(job.name)?;
    Some(hole.join(&Address::lefts(job.stack.len() - 1)))
}

/// Perform the transition of the job named `pick`. Fails if the template's
/// selection relation does not offer that job.
pub fn step(s: &ExamState, pick: HoleName) -> Result<(StepInfo, ExamState), ExamError> {
    let mut next = s.clone();
    let mut job = next.pool.select(pick)?;
    let label = job_label(&job, &next.env);
    let mut redex_addr = None;
    match label {
        Label::SeaApp => {
            let (f, a) = match job.term {
                Term::App(f, a) => (*f, *a),
                _ => unreachable!(),
            };
            job.term = f;
            job.stack.push_front(a);
            next.pool.drop_job(job)?;
        }
        Label::Beta => {
            redex_addr = beta_addr(&s.approx, &job);
            let (x, b) = match job.term {
                Term::Lam(x, b) => (x, *b),
                _ => unreachable!(),
            };
            let u = job.stack.pop_front().expect("beta needs a stacked argument");
            next.env.push_front(x, u);
            job.term = b;
            next.pool.drop_job(job)?;
        }
        Label::Sub => {
            let x = match &job.term {
                Term::Var(x) => x.clone(),
                _ => unreachable!(),
            };
            let t = next.env.lookup(&x).expect("sub needs a bound variable").clone();
            job.term = t.rename_fresh(&mut next.supply);
            next.pool.drop_job(job)?;
        }
        Label::SeaLam => {
            let (x, b) = match job.term {
                Term::Lam(x, b) => (x, *b),
                _ => unreachable!(),
            };
            let filler = MultiCtx::Lam(x, Box::new(MultiCtx::hole(job.name)));
            next.approx = next.approx.plug(job.name, &filler);
            job.term = b;
            next.pool.drop_job(job)?;
        }
        Label::SeaVar => {
            let (x, stack) = match job.term {
                Term::Var(x) => (x, job.stack),
                _ => unreachable!(),
            };
            let mut filler = MultiCtx::Var(x);
            let mut children = Vec::with_capacity(stack.len());
            for arg in stack {
                let fresh = next.supply.fresh_hole();
                filler = MultiCtx::App(Box::new(filler), Box::new(MultiCtx::hole(fresh)));
                children.push(Job::new(fresh, arg));
            }
            next.approx = next.approx.plug(pick, &filler);
            next.pool.add_jobs(children)?;
        }
        _ => unreachable!("pool jobs only trigger the five job labels"),
    }
    Ok((StepInfo { label, job: pick, redex_addr }, next))
}

/// Read a state back to a multi-context: apply the environment to every
/// job, fold each job's stack, and plug the results into the approximant.
/// On reachable states the result is hole-free.
pub fn readback(s: &ExamState) -> MultiCtx {
    let mut ctx = s.approx.clone();
    for job in s.pool.support() {
        let term = term_under_env(&job.term, &s.env);
        let stack = stack_under_env(&job.stack, &s.env);
        ctx = ctx.plug_term(job.name, &apply_stack(term, &stack));
    }
    ctx
}

/// Read back as a term; `None` if holes remain (unreachable states only).
pub fn readback_term(s: &ExamState) -> Option<Term> {
    readback(s).to_term()
}

/// Final states are exactly the empty-pool states.
pub fn is_final(s: &ExamState) -> bool {
    s.pool.names().is_empty()
}

/// The finished normal form of a final state.
pub fn final_term(s: &ExamState) -> Result<Term, ExamError> {
    if !is_final(s) {
        return Err(ExamError::NotFinal);
    }
    Ok(s.approx.to_term().expect("final approximant is hole-free"))
}

// ---------------------------------------------------------------------------
// Invariants

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    Uniqueness,
    Freshness,
    Bijection,
    Freeness,
    LocalScope,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::Uniqueness => "uniqueness",
            Clause::Freshness => "freshness",
            Clause::Bijection => "bijection",
            Clause::Freeness => "freeness",
            Clause::LocalScope => "local scope",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, Default)]
pub struct InvariantReport {
    pub violations: Vec<(Clause, String)>,
}

impl InvariantReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, clause: Clause) -> bool {
        self.violations.iter().any(|(c, _)| *c == clause)
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "all invariants hold");
        }
        for (clause, detail) in &self.violations {
            writeln!(f, "{clause}: {detail}")?;
        }
        Ok(())
    }
}

/// Check the five reachable-state invariants: no repeated hole names,
/// pairwise distinct binding occurrences, hole/job bijection, approximant
/// free variables disjoint from the environment domain, and local scope
/// for binders in jobs and environment entries.
pub fn validate_invariants(s: &ExamState) -> InvariantReport {
    let mut report = InvariantReport::default();

    let holes = s.approx.hole_names();
    let hole_set: BTreeSet<HoleName> = holes.iter().copied().collect();
    if hole_set.len() != holes.len() {
        report.violations.push((
            Clause::Uniqueness,
            format!("repeated hole names in approximant {}", s.approx),
        ));
    }

    // every binding occurrence in the state, by component
    let mut binding: Vec<(Name, String)> = Vec::new();
    for x in s.approx.binders() {
        binding.push((x, "approximant".into()));
    }
    for job in s.pool.support() {
        for x in job.term.binders() {
            binding.push((x, format!("job {}", job.name)));
        }
        for item in &job.stack {
            for x in item.binders() {
                binding.push((x, format!("job {} stack", job.name)));
            }
        }
    }
    for (x, t) in s.env.iter() {
        binding.push((x.clone(), "environment domain".into()));
        for y in t.binders() {
            binding.push((y, format!("environment entry [{x}:=..]")));
        }
    }
    let mut seen: BTreeMap<&Name, &String> = BTreeMap::new();
    for (x, what) in &binding {
        if let Some(prev) = seen.insert(x, what) {
            report.violations.push((
                Clause::Freshness,
                format!("binding occurrence {x} appears in both {prev} and {what}"),
            ));
        }
    }

    let pool_names: BTreeSet<HoleName> = s.pool.names().into_iter().collect();
    if hole_set != pool_names {
        report.violations.push((
            Clause::Bijection,
            format!(
                "approximant holes {:?} differ from pool names {:?}",
                hole_set, pool_names
            ),
        ));
    }

    let fv_approx = s.approx.free_vars();
    for x in &fv_approx {
        if s.env.contains(x) {
            report.violations.push((
                Clause::Freeness,
                format!("approximant free variable {x} is bound by the environment"),
            ));
        }
    }

    if !s.env.local_scope_ok() {
        report.violations.push((
            Clause::LocalScope,
            format!("environment ordering violates local scope: {}", s.env),
        ));
    }
    // binders inside jobs or environment terms must not occur elsewhere
    let mut inner_binders: BTreeSet<Name> = BTreeSet::new();
    for job in s.pool.support() {
        inner_binders.extend(job.term.binders());
        for item in &job.stack {
            inner_binders.extend(item.binders());
        }
    }
    for (_, t) in s.env.iter() {
        inner_binders.extend(t.binders());
    }
    let mut free_everywhere: BTreeSet<Name> = fv_approx;
    for job in s.pool.support() {
        free_everywhere.extend(job.term.free_vars());
        for item in &job.stack {
            free_everywhere.extend(item.free_vars());
        }
    }
    for (_, t) in s.env.iter() {
        free_everywhere.extend(t.free_vars());
    }
    for x in inner_binders.intersection(&free_everywhere) {
        report.violations.push((
            Clause::LocalScope,
            format!("binder {x} occurs outside the abstraction that introduces it"),
        ));
    }

    report
}

// ---------------------------------------------------------------------------
// Overhead measure

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureError {
    CyclicEnv(Name),
    /// The value is finite (the environment is acyclic) but too large to
    /// compute within the work budget.
    Budget,
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::CyclicEnv(x) => write!(f, "environment cycle through {x}"),
            MeasureError::Budget => write!(f, "measure too large to compute"),
        }
    }
}

impl std::error::Error for MeasureError {}

fn job_measure<'a>(
    term: &'a Term,
    stack: &mut Vec<&'a Term>,
    env: &'a Env,
    work: &mut u64,
) -> Result<u64, MeasureError> {
    *work = work.checked_sub(1).ok_or(MeasureError::Budget)?;
    match term {
        Term::Lam(_, b) => {
            if stack.is_empty() {
                Ok(1 + job_measure(b, stack, env, work)?)
            } else {
                Ok(0)
            }
        }
        Term::App(f, a) => {
            stack.push(a);
            let inner = job_measure(f, stack, env, work);
            stack.pop();
            Ok(1 + inner?)
        }
        Term::Var(x) => match env.lookup(x) {
            Some(t) => Ok(1 + job_measure(t, stack, env, work)?),
            None => {
                let args = std::mem::take(stack);
                let mut total = 1u64;
                for arg in args {
                    total += job_measure(arg, &mut Vec::new(), env, work)?;
                }
                Ok(total)
            }
        },
    }
}

const MEASURE_WORK_BUDGET: u64 = 200_000;

/// The overhead left in one job: how many overhead transitions it can
/// still make before its next beta (or its end). Total because the
/// environment is acyclic, which is checked first.
pub fn job_overhead_measure(job: &Job, env: &Env) -> Result<u64, MeasureError> {
    env.acyclicity().map_err(MeasureError::CyclicEnv)?;
    // working stack keeps its top at the end
    let mut stack: Vec<&Term> = job.stack.iter().rev().collect();
    let mut work = MEASURE_WORK_BUDGET;
    job_measure(&job.term, &mut stack, env, &mut work)
}

/// Sum of the job measures over the pool support; each overhead
/// transition decreases it by exactly one.
pub fn overhead_measure(s: &ExamState) -> Result<u64, MeasureError> {
    s.env.acyclicity().map_err(MeasureError::CyclicEnv)?;
    let mut total = 0u64;
    let mut work = MEASURE_WORK_BUDGET;
    for job in s.pool.support() {
        let mut stack: Vec<&Term> = job.stack.iter().rev().collect();
        total += job_measure(&job.term, &mut stack, &s.env, &mut work)?;
    }
    Ok(total)
}

/// True when no overhead transition is enabled: every job is an
/// abstraction facing a non-empty stack.
pub fn is_overhead_normal(s: &ExamState) -> bool {
    enabled(s).iter().all(|(_, l)| l.is_beta())
}

/// Drive the state to its overhead normal form, stepping only overhead
/// transitions (in job-name order). Terminates because the measure drops
/// by one each step.
pub fn o_normalize(mut s: ExamState) -> (ExamState, u64) {
    let mut steps = 0;
    loop {
        let next = enabled(&s)
            .into_iter()
            .find(|(_, label)| !label.is_beta());
        match next {
            None => return (s, steps),
            Some((name, _)) => {
                let (_, after) = step(&s, name).expect("enabled job steps");
                s = after;
                steps += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Environment and state equivalence

/// Canonical representative of an environment modulo swapping adjacent
/// independent entries: a greedy topological order of the occurs-in
/// dependency, ties broken by binder name.
pub fn env_canonical(env: &Env) -> Env {
    let entries: Vec<&(Name, Term)> = env.iter().collect();
    let n = entries.len();
    let dependent = |i: usize, j: usize| {
        let (xi, ti) = entries[i];
        let (xj, tj) = entries[j];
        xi == xj || ti.free_vars().contains(xj) || tj.free_vars().contains(xi)
    };
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut out = Env::new();
    let mut ordered: Vec<(Name, Term)> = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let mut best: Option<usize> = None;
        for (slot, &p) in remaining.iter().enumerate() {
            let blocked = remaining[..slot].iter().any(|&q| dependent(q, p));
            if blocked {
                continue;
            }
            best = match best {
                None => Some(slot),
                Some(b) if entries[p].0 < entries[remaining[b]].0 => Some(slot),
                keep => keep,
            };
        }
        let slot = best.expect("an unblocked entry always exists");
        let p = remaining.remove(slot);
        ordered.push(entries[p].clone());
    }
    for (x, t) in ordered.into_iter().rev() {
        out.push_front(x, t);
    }
    out
}

/// Equivalence class of an environment under independent adjacent swaps.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvClass {
    pub canonical: Env,
}

impl EnvClass {
    pub fn of(env: &Env) -> EnvClass {
        EnvClass { canonical: env_canonical(env) }
    }
}

/// The least equivalence permuting adjacent entries `[x:=t] : [y:=u]` with
/// `x` not in `u` and `y` not in `t`.
pub fn env_equiv(e1: &Env, e2: &Env) -> bool {
    env_canonical(e1) == env_canonical(e2)
}

fn support_map(pool: &Pool) -> BTreeMap<HoleName, (&Term, &Stack)> {
    pool.support()
        .into_iter()
        .map(|j| (j.name, (&j.term, &j.stack)))
        .collect()
}

/// Same approximant, pools with equal support, equivalent environments.
pub fn state_equiv(s1: &ExamState, s2: &ExamState) -> bool {
    s1.approx == s2.approx
        && support_map(&s1.pool) == support_map(&s2.pool)
        && env_equiv(&s1.env, &s2.env)
}

fn rename_term(t: &Term, map: &BTreeMap<Name, Name>) -> Term {
    match t {
        Term::Var(x) => Term::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
        Term::Lam(x, b) => Term::Lam(
            map.get(x).cloned().unwrap_or_else(|| x.clone()),
            Box::new(rename_term(b, map)),
        ),
        Term::App(f, a) => Term::app(rename_term(f, map), rename_term(a, map)),
    }
}

fn rename_ctx(c: &MultiCtx, vars: &BTreeMap<Name, Name>, holes: &BTreeMap<HoleName, HoleName>) -> MultiCtx {
    match c {
        MultiCtx::Var(x) => MultiCtx::Var(vars.get(x).cloned().unwrap_or_else(|| x.clone())),
        MultiCtx::Hole(h) => MultiCtx::Hole(holes.get(h).copied().unwrap_or(*h)),
        MultiCtx::Lam(x, b) => MultiCtx::Lam(
            vars.get(x).cloned().unwrap_or_else(|| x.clone()),
            Box::new(rename_ctx(b, vars, holes)),
        ),
        MultiCtx::App(f, a) => MultiCtx::App(
            Box::new(rename_ctx(f, vars, holes)),
            Box::new(rename_ctx(a, vars, holes)),
        ),
    }
}

type CanonicalJob = (u64, Term, Vec<Term>);

/// Rendering of a state with machine-chosen names canonicalized: hole
/// names are numbered in approximant order, and binders occurring in the
/// approximant or the jobs get canonical names in traversal order.
/// Environment entries are left as they are, modulo the canonical order.
fn canonical_rendering(s: &ExamState) -> (MultiCtx, Vec<CanonicalJob>, Env) {
    let mut holes: BTreeMap<HoleName, HoleName> = BTreeMap::new();
    for h in s.approx.hole_names() {
        let id = holes.len() as u64;
        holes.entry(h).or_insert(HoleName(id));
    }
    let mut vars: BTreeMap<Name, Name> = BTreeMap::new();
    let alloc = |x: &Name, vars: &mut BTreeMap<Name, Name>| {
        if !vars.contains_key(x) {
            let canon = Name::indexed("ζ", vars.len() as u64);
            vars.insert(x.clone(), canon);
        }
    };
    for x in s.approx.binders() {
        alloc(&x, &mut vars);
    }
    let mut jobs: Vec<&Job> = s.pool.support();
    jobs.sort_by_key(|j| holes.get(&j.name).copied().unwrap_or(j.name));
    for job in &jobs {
        for x in job.term.binders() {
            alloc(&x, &mut vars);
        }
        for item in &job.stack {
            for x in item.binders() {
                alloc(&x, &mut vars);
            }
        }
    }
    let approx = rename_ctx(&s.approx, &vars, &holes);
    let rendered_jobs = jobs
        .iter()
        .map(|j| {
            (
                holes.get(&j.name).copied().unwrap_or(j.name).0,
                rename_term(&j.term, &vars),
                j.stack.iter().map(|t| rename_term(t, &vars)).collect(),
            )
        })
        .collect();
    (approx, rendered_jobs, env_canonical(&s.env))
}

/// State equivalence up to the machine's choice of fresh names: holes and
/// binders allocated by the supply are compared through a canonical
/// renaming, environments through their canonical order.
pub fn state_equiv_up_to_names(s1: &ExamState, s2: &ExamState) -> bool {
    canonical_rendering(s1) == canonical_rendering(s2)
}

/// Close a diamond span: `s1` and `s2` are distinct one-step successors of
/// `s` by jobs `j1` and `j2`. Stepping the opposite job on each side lands
/// in equivalent states; returns the pair, or `None` if a closing step is
/// not available (never on valid inputs).
pub fn diamond_close(
    s1: &ExamState,
    j1: HoleName,
    s2: &ExamState,
    j2: HoleName,
) -> Option<(ExamState, ExamState)> {
    let (_, s1c) = step(s1, j2).ok()?;
    let (_, s2c) = step(s2, j1).ok()?;
    Some((s1c, s2c))
}

// ---------------------------------------------------------------------------
// Addresses

/// Constructors at `addr` in the approximant and in the read-back. They
/// agree whenever the approximant does not have a hole there.
pub fn node_tags_at(s: &ExamState, addr: &Address) -> Option<(NodeTag, NodeTag)> {
    let in_approx = s.approx.subterm_at(addr)?.node_tag();
    let in_readback = readback(s).subterm_at(addr)?.node_tag();
    Some((in_approx, in_readback))
}

// ---------------------------------------------------------------------------
// Running

pub fn render_fields(s: &ExamState) -> Vec<(String, String)> {
    vec![
        ("approx".to_string(), s.approx.to_string()),
        ("pool".to_string(), s.pool.render()),
        ("env".to_string(), s.env.to_string()),
    ]
}

/// Constructor count over every component; the run loops abort when this
/// exceeds [`STATE_SIZE_BUDGET`].
pub fn state_size(s: &ExamState) -> usize {
    let mut total = s.approx.size();
    for job in s.pool.support() {
        total += job.term.size();
        total += job.stack.iter().map(Term::size).sum::<usize>();
    }
    total += s.env.iter().map(|(_, t)| t.size()).sum::<usize>();
    total
}

/// Substitution copies can grow states without bound; runs beyond this
/// report exhausted fuel.
pub const STATE_SIZE_BUDGET: usize = 60_000;

/// Run from an initialized state until the pool empties or `fuel` (or the
/// state size budget) runs out, letting the pool choose each step.
pub fn run_from(mut s: ExamState, mut trace: Trace, fuel: u64, snapshots: bool) -> (Trace, ExamState) {
    loop {
        if is_final(&s) {
            let snap = snapshots.then(|| render_fields(&s));
            trace.finish(Outcome::Final, s.approx.to_string(), snap);
            return (trace, s);
        }
        let over_budget =
            trace.steps.len() % 32 == 31 && state_size(&s) > STATE_SIZE_BUDGET;
        if trace.steps.len() as u64 >= fuel || over_budget {
            let snap = snapshots.then(|| render_fields(&s));
            trace.finish(Outcome::FuelExhausted, readback(&s).to_string(), snap);
            return (trace, s);
        }
        let pick = s.pool.choose().expect("non-empty pool offers a job");
        let snapshot = snapshots.then(|| render_fields(&s));
        let (info, next) = step(&s, pick).expect("chosen job is selectable");
        trace.push(TraceStep {
            label: info.label,
            job: Some(info.job),
            redex_addr: info.redex_addr,
            snapshot,
        });
        s = next;
    }
}

pub fn run(t: &Term, template: TemplateKind, seed: u64, fuel: u64, snapshots: bool) -> (Trace, ExamState) {
    let s = init(t, template, seed);
    let trace = Trace::new_exam(t.clone(), template, seed, fuel);
    run_from(s, trace, fuel, snapshots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::strategies;

    fn set_state(src: &str) -> ExamState {
        init(&parse(src).unwrap(), TemplateKind::Set, 0)
    }

    #[test]
    fn init_shape() {
        let s = set_state("x");
        assert_eq!(s.approx, MultiCtx::hole(HoleName(0)));
        assert_eq!(s.pool.names(), vec![HoleName(0)]);
        assert!(s.env.is_empty());
        assert_eq!(enabled(&s), vec![(HoleName(0), Label::SeaVar)]);
        // read-back of the initial state is the input term
        let t = parse("(\\x. x y) (z (\\w. w))").unwrap();
        let s = init(&t, TemplateKind::Set, 0);
        assert!(readback_term(&s).unwrap().alpha_eq(&t));
        // the supply sits strictly above every name in the initial job
        assert!(s.supply.counter() > s.pool.support()[0].term.max_name_index());
    }

    #[test]
    fn sea_var_with_empty_stack_plugs_bare_variable() {
        let s = set_state("x");
        let (info, next) = step(&s, HoleName(0)).unwrap();
        assert_eq!(info.label, Label::SeaVar);
        assert!(is_final(&next));
        assert_eq!(final_term(&next).unwrap(), parse("x").unwrap());
    }

    #[test]
    fn selection_must_be_offered() {
        let s = set_state("x y");
        assert!(step(&s, HoleName(9)).is_err());
    }

    #[test]
    fn readback_transparent_on_overhead_steps() {
        let t = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
        let mut s = init(&t, TemplateKind::Stack, 0);
        for _ in 0..40 {
            if is_final(&s) {
                break;
            }
            let (name, label) = enabled(&s)[0];
            let before = readback(&s);
            let (_, next) = step(&s, name).unwrap();
            let after = readback(&next);
            match label {
                Label::Beta => assert_ne!(before, after),
                Label::Sub => {
                    let b = before.to_term().unwrap();
                    let a = after.to_term().unwrap();
                    assert!(b.alpha_eq(&a));
                }
                _ => assert_eq!(before, after),
            }
            s = next;
        }
        assert!(is_final(&s));
        assert_eq!(final_term(&s).unwrap(), parse("x z (z z)").unwrap());
    }

    #[test]
    fn beta_addresses_are_external() {
        let t = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
        let mut s = init(&t, TemplateKind::Set, 42);
        loop {
            if is_final(&s) {
                break;
            }
            let pick = s.pool.choose().unwrap();
            let before = readback_term(&s).unwrap();
            let (info, next) = step(&s, pick).unwrap();
            if let Some(addr) = &info.redex_addr {
                assert!(strategies::external_redexes(&before).contains(addr));
                let contracted = strategies::contract(&before, addr).unwrap();
                assert_eq!(contracted, readback_term(&next).unwrap());
            }
            s = next;
        }
    }

    #[test]
    fn invariants_hold_along_a_run() {
        let t = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
        let mut s = init(&t, TemplateKind::Set, 7);
        loop {
            let report = validate_invariants(&s);
            assert!(report.ok(), "{report}");
            if is_final(&s) {
                break;
            }
            let pick = s.pool.choose().unwrap();
            s = step(&s, pick).unwrap().1;
        }
    }

    #[test]
    fn invariant_negative_controls() {
        // duplicated hole in the approximant
        let mut s = set_state("x y");
        let h = s.approx.hole_names()[0];
        s.approx = MultiCtx::App(
            Box::new(MultiCtx::hole(h)),
            Box::new(MultiCtx::hole(h)),
        );
        assert!(validate_invariants(&s).violates(Clause::Uniqueness));

        // self-referential environment entry
        let mut s = set_state("x y");
        s.env.push_front(Name::new("q"), parse("q").unwrap());
        assert!(validate_invariants(&s).violates(Clause::LocalScope));

        // approximant free variable captured by the environment
        let mut s = set_state("x");
        s.approx = MultiCtx::App(
            Box::new(MultiCtx::Var(Name::new("q"))),
            Box::new(MultiCtx::hole(HoleName(0))),
        );
        s.env.push_front(Name::new("q"), parse("z").unwrap());
        assert!(validate_invariants(&s).violates(Clause::Freeness));
    }

    #[test]
    fn measure_examples() {
        // a beta-ready job measures 0
        let env = Env::new();
        let mut job = Job::new(HoleName(0), parse("\\x. x").unwrap());
        job.stack.push_front(parse("u").unwrap());
        assert_eq!(job_overhead_measure(&job, &env), Ok(0));

        // (x y, ε) with an empty environment measures 3
        let job = Job::new(HoleName(1), parse("x y").unwrap());
        assert_eq!(job_overhead_measure(&job, &env), Ok(3));

        // cyclic environments are rejected
        let mut env = Env::new();
        env.push_front(Name::new("x"), parse("x x").unwrap());
        let job = Job::new(HoleName(2), parse("x").unwrap());
        assert!(matches!(
            job_overhead_measure(&job, &env),
            Err(MeasureError::CyclicEnv(_))
        ));
    }

    #[test]
    fn measure_counts_overhead_steps() {
        let t = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
        let mut s = init(&t, TemplateKind::Stack, 0);
        loop {
            if is_final(&s) {
                break;
            }
            let before = overhead_measure(&s).unwrap();
            let (name, label) = enabled(&s)[0];
            let (_, next) = step(&s, name).unwrap();
            let after = overhead_measure(&next).unwrap();
            if !label.is_beta() {
                assert_eq!(before, after + 1, "overhead step at measure {before}");
            }
            s = next;
        }
        // o-normal iff measure is zero, on a few states of another run
        let t = parse("(\\a. a a) ((\\b. b) c)").unwrap();
        let s = init(&t, TemplateKind::Set, 3);
        let (onf, _) = o_normalize(s);
        assert!(is_overhead_normal(&onf));
        assert_eq!(overhead_measure(&onf).unwrap(), 0);
    }

    #[test]
    fn env_equiv_examples() {
        let mut e1 = Env::new();
        e1.push_front(Name::new("y"), parse("b").unwrap());
        e1.push_front(Name::new("x"), parse("a").unwrap());
        let mut e2 = Env::new();
        e2.push_front(Name::new("x"), parse("a").unwrap());
        e2.push_front(Name::new("y"), parse("b").unwrap());
        assert!(env_equiv(&e1, &e2));
        assert!(env_equiv(&e1, &e1));

        // dependent entries do not commute
        let mut d1 = Env::new();
        d1.push_front(Name::new("y"), parse("z").unwrap());
        d1.push_front(Name::new("x"), parse("y").unwrap());
        let mut d2 = Env::new();
        d2.push_front(Name::new("x"), parse("y").unwrap());
        d2.push_front(Name::new("y"), parse("z").unwrap());
        assert!(!env_equiv(&d1, &d2));
    }

    #[test]
    fn diamond_on_disjoint_jobs() {
        // reach the two-job state of x ((\y. y) z) ((\w. w w) z)
        let t = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
        let mut s = init(&t, TemplateKind::Set, 0);
        for _ in 0..3 {
            let name = enabled(&s)[0].0;
            s = step(&s, name).unwrap().1;
        }
        let en = enabled(&s);
        assert_eq!(en.len(), 2);
        let (j1, j2) = (en[0].0, en[1].0);
        let s1 = step(&s, j1).unwrap().1;
        let s2 = step(&s, j2).unwrap().1;
        let (c1, c2) = diamond_close(&s1, j1, &s2, j2).unwrap();
        assert!(state_equiv_up_to_names(&c1, &c2));
        // overhead steps on disjoint jobs commute on the nose
        assert!(state_equiv(&c1, &c2));
    }

    #[test]
    fn node_tags_agree_outside_holes() {
        let t = parse("x ((\\y. y) z) ((\\w. w w) z)").unwrap();
        let mut s = init(&t, TemplateKind::Stack, 0);
        for _ in 0..3 {
            let name = enabled(&s)[0].0;
            s = step(&s, name).unwrap().1;
        }
        // approximant is now x ⟨·⟩α1 ⟨·⟩α2
        let (a, r) = node_tags_at(&s, &"ll".parse().unwrap()).unwrap();
        assert_eq!((a, r), (NodeTag::Var, NodeTag::Var));
        let (a, r) = node_tags_at(&s, &Address::root()).unwrap();
        assert_eq!(a, NodeTag::App);
        assert_eq!(r, NodeTag::App);
        let (a, _) = node_tags_at(&s, &"r".parse().unwrap()).unwrap();
        assert_eq!(a, NodeTag::Hole);
    }

    #[test]
    fn final_states_read_back_to_normal_forms() {
        let t = parse("x ((\\y. y) z)").unwrap();
        let (trace, s) = run(&t, TemplateKind::Set, 5, 100, false);
        assert_eq!(trace.outcome, Outcome::Final);
        assert!(is_final(&s));
        let f = final_term(&s).unwrap();
        assert!(strategies::is_normal(&f));
        assert_eq!(readback_term(&s).unwrap(), f);
    }
}
