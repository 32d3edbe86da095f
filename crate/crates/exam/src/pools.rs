//! Concrete pool templates behind one behavioral interface: create, name,
//! support, select, drop, add, plus the template's own choice of the next
//! job. The template decides the strategy the machine implements: a set
//! with seeded random choice, a stack (leftmost), a level-ordered list, a
//! round-robin list, and an interactive pool driven by a callback.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exam::{self, Job};
use crate::strategies;
use crate::syntax::{HoleName, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemplateKind {
    #[serde(rename = "set")]
    Set,
    #[serde(rename = "stack")]
    Stack,
    #[serde(rename = "least-level")]
    LeastLevel,
    #[serde(rename = "fair")]
    Fair,
    #[serde(rename = "interactive")]
    Interactive,
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TemplateKind::Set => "set",
            TemplateKind::Stack => "stack",
            TemplateKind::LeastLevel => "least-level",
            TemplateKind::Fair => "fair",
            TemplateKind::Interactive => "interactive",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for TemplateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<TemplateKind, String> {
        match s {
            "set" => Ok(TemplateKind::Set),
            "stack" => Ok(TemplateKind::Stack),
            "least-level" => Ok(TemplateKind::LeastLevel),
            "fair" => Ok(TemplateKind::Fair),
            "interactive" => Ok(TemplateKind::Interactive),
            _ => Err(format!(
                "unknown template {s:?} (expected set, stack, least-level, fair or interactive)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoolError {
    NameCollision(HoleName),
    NotSelectable(HoleName),
}

impl fmt::Display for PoolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoolError::NameCollision(n) => write!(f, "job name {n} is already in the pool"),
            PoolError::NotSelectable(n) => write!(f, "job {n} is not offered for selection"),
        }
    }
}

impl std::error::Error for PoolError {}

/// The pool interface. `names`/`support` expose the content, `select`
/// removes an offered job, `drop_job` returns a previously selected job,
/// `add_jobs` inserts a list of new jobs preserving its order, and
/// `choose` is the template's own pick among the selectable jobs.
///
/// Support algebra: selecting removes exactly the named job; dropping and
/// adding insert, and both require the name to be absent. A non-empty pool
/// always offers at least one selectable job.
pub trait PoolTemplate {
    fn names(&self) -> Vec<HoleName>;
    fn support(&self) -> Vec<&Job>;
    fn get(&self, name: HoleName) -> Option<&Job>;
    fn selectable(&self) -> Vec<HoleName>;
    fn select(&mut self, name: HoleName) -> Result<Job, PoolError>;
    fn drop_job(&mut self, job: Job) -> Result<(), PoolError>;
    fn add_jobs(&mut self, jobs: Vec<Job>) -> Result<(), PoolError>;
    fn choose(&mut self) -> Option<HoleName>;
    fn len(&self) -> usize {
        self.names().len()
    }
    fn is_empty(&self) -> bool {
        self.names().is_empty()
    }
}

fn guard_absent(names: &[HoleName], job: &Job) -> Result<(), PoolError> {
    if names.contains(&job.name) {
        Err(PoolError::NameCollision(job.name))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Set template: any job may be selected; the pick is seeded-random.

#[derive(Clone, Debug)]
pub struct SetPool {
    jobs: BTreeMap<HoleName, Job>,
    rng: ChaCha8Rng,
}

impl SetPool {
    pub fn new(seed: u64, first: Job) -> SetPool {
        let mut jobs = BTreeMap::new();
        jobs.insert(first.name, first);
        SetPool { jobs, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl PartialEq for SetPool {
    fn eq(&self, other: &SetPool) -> bool {
        self.jobs == other.jobs
    }
}

impl PoolTemplate for SetPool {
    fn names(&self) -> Vec<HoleName> {
        self.jobs.keys().copied().collect()
    }

    fn support(&self) -> Vec<&Job> {
        self.jobs.values().collect()
    }

    fn get(&self, name: HoleName) -> Option<&Job> {
        self.jobs.get(&name)
    }

    fn selectable(&self) -> Vec<HoleName> {
        self.names()
    }

    fn select(&mut self, name: HoleName) -> Result<Job, PoolError> {
        self.jobs.remove(&name).ok_or(PoolError::NotSelectable(name))
    }

    fn drop_job(&mut self, job: Job) -> Result<(), PoolError> {
        if self.jobs.contains_key(&job.name) {
            return Err(PoolError::NameCollision(job.name));
        }
        self.jobs.insert(job.name, job);
        Ok(())
    }

    fn add_jobs(&mut self, jobs: Vec<Job>) -> Result<(), PoolError> {
        for job in jobs {
            self.drop_job(job)?;
        }
        Ok(())
    }

    fn choose(&mut self) -> Option<HoleName> {
        let names = self.names();
        names.choose(&mut self.rng).copied()
    }
}

// ---------------------------------------------------------------------------
// List templates: stack, least-level and fair differ only in where drop
// and add insert.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ListPolicy {
    /// Drop on the front, add on the front: selection works like a stack.
    Stack,
    /// Drop on the front, add at the back: new jobs (one level deeper)
    /// wait behind every current job.
    Level,
    /// Drop and add at the back: round robin.
    Fair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ListPool {
    jobs: VecDeque<Job>,
    policy: ListPolicy,
}

impl ListPool {
    fn new(policy: ListPolicy, first: Job) -> ListPool {
        ListPool { jobs: VecDeque::from([first]), policy }
    }

    pub fn stack(first: Job) -> ListPool {
        ListPool::new(ListPolicy::Stack, first)
    }

    pub fn least_level(first: Job) -> ListPool {
        ListPool::new(ListPolicy::Level, first)
    }

    pub fn fair(first: Job) -> ListPool {
        ListPool::new(ListPolicy::Fair, first)
    }

    /// Job names front to back.
    pub fn order(&self) -> Vec<HoleName> {
        self.jobs.iter().map(|j| j.name).collect()
    }
}

impl PoolTemplate for ListPool {
    fn names(&self) -> Vec<HoleName> {
        self.order()
    }

    fn support(&self) -> Vec<&Job> {
        self.jobs.iter().collect()
    }

    fn get(&self, name: HoleName) -> Option<&Job> {
        self.jobs.iter().find(|j| j.name == name)
    }

    fn selectable(&self) -> Vec<HoleName> {
        self.jobs.front().map(|j| j.name).into_iter().collect()
    }

    fn select(&mut self, name: HoleName) -> Result<Job, PoolError> {
        match self.jobs.front() {
            Some(front) if front.name == name => Ok(self.jobs.pop_front().unwrap()),
            _ => Err(PoolError::NotSelectable(name)),
        }
    }

    fn drop_job(&mut self, job: Job) -> Result<(), PoolError> {
        guard_absent(&self.names(), &job)?;
        match self.policy {
            ListPolicy::Stack | ListPolicy::Level => self.jobs.push_front(job),
            ListPolicy::Fair => self.jobs.push_back(job),
        }
        Ok(())
    }

    fn add_jobs(&mut self, jobs: Vec<Job>) -> Result<(), PoolError> {
        for job in &jobs {
            guard_absent(&self.names(), job)?;
        }
        match self.policy {
            ListPolicy::Stack => {
                for job in jobs.into_iter().rev() {
                    self.jobs.push_front(job);
                }
            }
            ListPolicy::Level | ListPolicy::Fair => {
                for job in jobs {
                    self.jobs.push_back(job);
                }
            }
        }
        Ok(())
    }

    fn choose(&mut self) -> Option<HoleName> {
        self.jobs.front().map(|j| j.name)
    }
}

// ---------------------------------------------------------------------------
// Interactive template: the set selection relation with the pick delegated
// to a callback, so a front end can bind it to a prompt and tests to a
// script.

/// What the chooser sees for each selectable job.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiceItem {
    pub name: HoleName,
    pub term: String,
    pub stack_depth: usize,
}

pub type Chooser = Arc<Mutex<dyn FnMut(&[ChoiceItem]) -> HoleName + Send>>;

/// A chooser that replays a fixed script of picks.
pub fn scripted_chooser(picks: Vec<HoleName>) -> Chooser {
    let mut queue: VecDeque<HoleName> = picks.into();
    Arc::new(Mutex::new(move |items: &[ChoiceItem]| {
        queue
            .pop_front()
            .unwrap_or_else(|| items.first().expect("choice over an empty pool").name)
    }))
}

#[derive(Clone)]
pub struct InteractivePool {
    jobs: VecDeque<Job>,
    chooser: Chooser,
}

impl InteractivePool {
    pub fn new(first: Job, chooser: Chooser) -> InteractivePool {
        InteractivePool { jobs: VecDeque::from([first]), chooser }
    }
}

impl fmt::Debug for InteractivePool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InteractivePool").field("jobs", &self.jobs).finish()
    }
}

impl PartialEq for InteractivePool {
    fn eq(&self, other: &InteractivePool) -> bool {
        self.jobs == other.jobs
    }
}

impl PoolTemplate for InteractivePool {
    fn names(&self) -> Vec<HoleName> {
        self.jobs.iter().map(|j| j.name).collect()
    }

    fn support(&self) -> Vec<&Job> {
        self.jobs.iter().collect()
    }

    fn get(&self, name: HoleName) -> Option<&Job> {
        self.jobs.iter().find(|j| j.name == name)
    }

    fn selectable(&self) -> Vec<HoleName> {
        self.names()
    }

    fn select(&mut self, name: HoleName) -> Result<Job, PoolError> {
        match self.jobs.iter().position(|j| j.name == name) {
            Some(i) => Ok(self.jobs.remove(i).unwrap()),
            None => Err(PoolError::NotSelectable(name)),
        }
    }

    fn drop_job(&mut self, job: Job) -> Result<(), PoolError> {
        guard_absent(&self.names(), &job)?;
        self.jobs.push_back(job);
        Ok(())
    }

    fn add_jobs(&mut self, jobs: Vec<Job>) -> Result<(), PoolError> {
        for job in jobs {
            self.drop_job(job)?;
        }
        Ok(())
    }

    fn choose(&mut self) -> Option<HoleName> {
        if self.jobs.is_empty() {
            return None;
        }
        let items: Vec<ChoiceItem> = self
            .jobs
            .iter()
            .map(|j| ChoiceItem {
                name: j.name,
                term: j.term.to_string(),
                stack_depth: j.stack.len(),
            })
            .collect();
        let pick = (self.chooser.lock().expect("chooser not poisoned"))(&items);
        Some(pick)
    }
}

// ---------------------------------------------------------------------------
// Dispatch

#[derive(Clone, Debug, PartialEq)]
pub enum Pool {
    Set(SetPool),
    Stack(ListPool),
    Level(ListPool),
    Fair(ListPool),
    Interactive(InteractivePool),
}

impl Pool {
    /// Build a pool of the given kind around the initial job. The
    /// interactive kind gets a chooser that always takes the first
    /// selectable job; build one explicitly to attach a real chooser.
    pub fn new(kind: TemplateKind, seed: u64, first: Job) -> Pool {
        match kind {
            TemplateKind::Set => Pool::Set(SetPool::new(seed, first)),
            TemplateKind::Stack => Pool::Stack(ListPool::stack(first)),
            TemplateKind::LeastLevel => Pool::Level(ListPool::least_level(first)),
            TemplateKind::Fair => Pool::Fair(ListPool::fair(first)),
            TemplateKind::Interactive => {
                Pool::Interactive(InteractivePool::new(first, scripted_chooser(Vec::new())))
            }
        }
    }

    pub fn interactive(first: Job, chooser: Chooser) -> Pool {
        Pool::Interactive(InteractivePool::new(first, chooser))
    }

    pub fn kind(&self) -> TemplateKind {
        match self {
            Pool::Set(_) => TemplateKind::Set,
            Pool::Stack(_) => TemplateKind::Stack,
            Pool::Level(_) => TemplateKind::LeastLevel,
            Pool::Fair(_) => TemplateKind::Fair,
            Pool::Interactive(_) => TemplateKind::Interactive,
        }
    }

    fn inner(&self) -> &dyn PoolTemplate {
        match self {
            Pool::Set(p) => p,
            Pool::Stack(p) | Pool::Level(p) | Pool::Fair(p) => p,
            Pool::Interactive(p) => p,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn PoolTemplate {
        match self {
            Pool::Set(p) => p,
            Pool::Stack(p) | Pool::Level(p) | Pool::Fair(p) => p,
            Pool::Interactive(p) => p,
        }
    }

    /// Sets render in braces, lists front to back.
    pub fn render(&self) -> String {
        let jobs: Vec<String> = self.support().iter().map(|j| j.render()).collect();
        match self {
            Pool::Set(_) | Pool::Interactive(_) => {
                if jobs.is_empty() {
                    "∅".to_string()
                } else {
                    format!("{{{}}}", jobs.join(", "))
                }
            }
            _ => {
                if jobs.is_empty() {
                    "ε".to_string()
                } else {
                    jobs.join(" : ")
                }
            }
        }
    }
}

impl PoolTemplate for Pool {
    fn names(&self) -> Vec<HoleName> {
        self.inner().names()
    }

    fn support(&self) -> Vec<&Job> {
        self.inner().support()
    }

    fn get(&self, name: HoleName) -> Option<&Job> {
        self.inner().get(name)
    }

    fn selectable(&self) -> Vec<HoleName> {
        self.inner().selectable()
    }

    fn select(&mut self, name: HoleName) -> Result<Job, PoolError> {
        self.inner_mut().select(name)
    }

    fn drop_job(&mut self, job: Job) -> Result<(), PoolError> {
        self.inner_mut().drop_job(job)
    }

    fn add_jobs(&mut self, jobs: Vec<Job>) -> Result<(), PoolError> {
        self.inner_mut().add_jobs(jobs)
    }

    fn choose(&mut self) -> Option<HoleName> {
        self.inner_mut().choose()
    }
}

// ---------------------------------------------------------------------------
// Template-level behavior checks

/// Run the least-level machine on `t` and verify that every beta step
/// contracts a redex of minimal level in the read-back of its pre-state.
pub fn level_trace_check(t: &Term, fuel: u64) -> bool {
    let mut s = exam::init(t, TemplateKind::LeastLevel, 0);
    for _ in 0..fuel {
        if exam::is_final(&s) {
            return true;
        }
        let pick = s.pool.choose().expect("non-empty pool");
        let before = match exam::readback_term(&s) {
            Some(t) => t,
            None => return false,
        };
        let (info, next) = match exam::step(&s, pick) {
            Ok(r) => r,
            Err(_) => return false,
        };
        if let Some(addr) = &info.redex_addr {
            if !strategies::least_level_redexes(&before).contains(addr) {
                return false;
            }
        }
        s = next;
    }
    true
}

/// Run the machine with the given template for `budget` steps and verify
/// no job starves: a job in a pool of n jobs is selected (or consumed)
/// within the next n steps.
pub fn progress_check(t: &Term, kind: TemplateKind, budget: u64) -> bool {
    let mut s = exam::init(t, kind, 0);
    let mut pending: Vec<(HoleName, u64)> = Vec::new();
    for step_index in 0..budget {
        if exam::is_final(&s) {
            return true;
        }
        let names = s.pool.names();
        let deadline = step_index + names.len() as u64;
        for name in &names {
            if !pending.iter().any(|(n, _)| n == name) {
                pending.push((*name, deadline));
            }
        }
        let pick = s.pool.choose().expect("non-empty pool");
        pending.retain(|(n, _)| *n != pick);
        if pending.iter().any(|(_, d)| *d < step_index + 1) {
            return false;
        }
        s = match exam::step(&s, pick) {
            Ok((_, next)) => next,
            Err(_) => return false,
        };
        // jobs consumed by the step (not re-offered) count as served
        let still: Vec<HoleName> = s.pool.names();
        pending.retain(|(n, _)| still.contains(n));
    }
    true
}

/// No starvation under the fair template within the budget.
pub fn fair_progress_check(t: &Term, budget: u64) -> bool {
    progress_check(t, TemplateKind::Fair, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use rand::Rng;

    fn job(id: u64, src: &str) -> Job {
        Job::new(HoleName(id), parse(src).unwrap())
    }

    #[test]
    fn new_pool_has_singleton_support() {
        for kind in [
            TemplateKind::Set,
            TemplateKind::Stack,
            TemplateKind::LeastLevel,
            TemplateKind::Fair,
            TemplateKind::Interactive,
        ] {
            let p = Pool::new(kind, 0, job(0, "x"));
            assert_eq!(p.names(), vec![HoleName(0)], "{kind}");
            assert_eq!(p.support().len(), 1);
        }
    }

    #[test]
    fn stack_add_preserves_list_order() {
        let mut p = ListPool::stack(job(0, "x"));
        let selected = p.select(HoleName(0)).unwrap();
        assert_eq!(selected.name, HoleName(0));
        p.add_jobs(vec![job(1, "a"), job(2, "b")]).unwrap();
        assert_eq!(p.order(), vec![HoleName(1), HoleName(2)]);
        // first added is selected first
        assert_eq!(p.choose(), Some(HoleName(1)));
        // only the front is selectable
        assert!(p.select(HoleName(2)).is_err());
    }

    #[test]
    fn level_add_appends_behind_existing_jobs() {
        let mut p = ListPool::least_level(job(0, "x"));
        let j = p.select(HoleName(0)).unwrap();
        p.drop_job(j).unwrap();
        p.add_jobs(vec![job(1, "a"), job(2, "b")]).unwrap();
        assert_eq!(p.order(), vec![HoleName(0), HoleName(1), HoleName(2)]);
        // drop goes back on top
        let j = p.select(HoleName(0)).unwrap();
        p.drop_job(j).unwrap();
        assert_eq!(p.order(), vec![HoleName(0), HoleName(1), HoleName(2)]);
    }

    #[test]
    fn fair_drop_goes_to_the_back() {
        let mut p = ListPool::fair(job(0, "x"));
        p.add_jobs(vec![job(1, "a")]).unwrap();
        let j = p.select(HoleName(0)).unwrap();
        p.drop_job(j).unwrap();
        assert_eq!(p.order(), vec![HoleName(1), HoleName(0)]);
    }

    #[test]
    fn collisions_are_rejected() {
        let mut p = Pool::new(TemplateKind::Set, 0, job(0, "x"));
        assert_eq!(
            p.drop_job(job(0, "y")),
            Err(PoolError::NameCollision(HoleName(0)))
        );
        assert!(p.add_jobs(vec![job(1, "a"), job(1, "b")]).is_err());
    }

    #[test]
    fn set_choice_is_seeded_and_reproducible() {
        let build = |seed| {
            let mut p = Pool::new(TemplateKind::Set, seed, job(0, "x"));
            p.add_jobs(vec![job(1, "a"), job(2, "b"), job(3, "c")]).unwrap();
            (0..10).map(|_| p.choose().unwrap().0).collect::<Vec<u64>>()
        };
        assert_eq!(build(5), build(5));
    }

    #[test]
    fn interactive_chooser_drives_selection() {
        let chooser = scripted_chooser(vec![HoleName(2), HoleName(1)]);
        let mut p = Pool::interactive(job(1, "a"), chooser);
        p.add_jobs(vec![job(2, "b")]).unwrap();
        assert_eq!(p.choose(), Some(HoleName(2)));
        let j = p.select(HoleName(2)).unwrap();
        p.drop_job(j).unwrap();
        assert_eq!(p.choose(), Some(HoleName(1)));
    }

    #[test]
    fn support_algebra_against_a_model() {
        // random select/drop/add sequences keep support equal to a set model
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for kind in [
            TemplateKind::Set,
            TemplateKind::Stack,
            TemplateKind::LeastLevel,
            TemplateKind::Fair,
            TemplateKind::Interactive,
        ] {
            let mut pool = Pool::new(kind, 1, job(0, "x"));
            let mut model: BTreeMap<HoleName, ()> = BTreeMap::from([(HoleName(0), ())]);
            let mut held: Vec<Job> = Vec::new();
            let mut next_id = 1u64;
            for _ in 0..200 {
                // the choice constraint: a non-empty pool offers a job
                if !pool.is_empty() {
                    assert!(!pool.selectable().is_empty(), "{kind}");
                    assert!(pool.choose().is_some());
                }
                match rng.gen_range(0..3) {
                    0 => {
                        if let Some(&name) = pool.selectable().first() {
                            let j = pool.select(name).unwrap();
                            model.remove(&name);
                            held.push(j);
                        }
                    }
                    1 => {
                        if let Some(j) = held.pop() {
                            model.insert(j.name, ());
                            pool.drop_job(j).unwrap();
                        }
                    }
                    _ => {
                        let j = job(next_id, "y");
                        next_id += 1;
                        model.insert(j.name, ());
                        pool.add_jobs(vec![j]).unwrap();
                    }
                }
                let names: BTreeMap<HoleName, ()> =
                    pool.names().into_iter().map(|n| (n, ())).collect();
                assert_eq!(names, model, "{kind}");
                assert_eq!(pool.support().len(), model.len());
            }
        }
    }

    #[test]
    fn level_machine_prefers_shallow_redexes() {
        // the leftmost redex sits at level 2, the other at level 1
        let t = parse("x (x ((\\a. a) y)) ((\\b. b) z)").unwrap();
        assert!(level_trace_check(&t, 200));
    }

    #[test]
    fn fair_serves_everyone_stack_starves() {
        // first argument loops, second terminates
        let t = parse("x ((\\w. w w) (\\w. w w)) ((\\a. a) y)").unwrap();
        assert!(fair_progress_check(&t, 120));
        assert!(!progress_check(&t, TemplateKind::Stack, 120));
        // single job is trivially fair
        assert!(fair_progress_check(&parse("\\q. q").unwrap(), 50));
    }
}
