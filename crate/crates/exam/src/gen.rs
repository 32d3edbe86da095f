//! Seeded random term generation for differential and property testing.
//! Sizes count `Lam` and `App` constructors. Weights are tuned so that
//! roughly 40% of closed terms of size ≤ 20 normalize within fuel 500;
//! open terms draw free variables from a small fixed set to exercise
//! neutral spines.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    Closed,
    Open,
}

impl std::str::FromStr for GenMode {
    type Err = String;

    fn from_str(s: &str) -> Result<GenMode, String> {
        match s {
            "closed" => Ok(GenMode::Closed),
            "open" => Ok(GenMode::Open),
            _ => Err(format!("unknown mode {s:?} (expected closed or open)")),
        }
    }
}

const BINDER_BASES: [&str; 6] = ["x", "y", "z", "w", "v", "u"];
const FREE_VARS: [&str; 3] = ["a", "b", "c"];

fn gen_sized(rng: &mut ChaCha8Rng, size: usize, bound: &mut Vec<Name>, mode: GenMode) -> Term {
    if size == 0 {
        // leaf: a bound variable, or one of the fixed free names in open mode
        let open_choices = if mode == GenMode::Open { FREE_VARS.len() } else { 0 };
        let total = bound.len() + open_choices;
        debug_assert!(total > 0, "leaf without any variable in scope");
        let i = rng.gen_range(0..total);
        return if i < bound.len() {
            Term::Var(bound[i].clone())
        } else {
            Term::var(FREE_VARS[i - bound.len()])
        };
    }
    let must_bind = bound.is_empty() && mode == GenMode::Closed;
    let lam = must_bind || rng.gen_bool(0.35);
    if lam {
        let base = BINDER_BASES[bound.len() % BINDER_BASES.len()];
        let binder = Name::new(base);
        bound.push(binder.clone());
        let body = gen_sized(rng, size - 1, bound, mode);
        bound.pop();
        Term::Lam(binder, Box::new(body))
    } else if size >= 5 && rng.gen_bool(0.45) {
        // seed a looping self-application; plain uniform terms of these
        // sizes almost never diverge
        let base = BINDER_BASES[bound.len() % BINDER_BASES.len()];
        let dup = |b: &Name| Term::Lam(b.clone(), Box::new(Term::app(Term::Var(b.clone()), Term::Var(b.clone()))));
        let binder = Name::new(base);
        Term::app(dup(&binder), dup(&binder))
    } else if size >= 3 && rng.gen_bool(0.25) {
        // self-application of one random subterm
        let d = gen_sized(rng, (size - 1) / 2, bound, mode);
        Term::app(d.clone(), d)
    } else {
        let left = rng.gen_range(0..size);
        let right = size - 1 - left;
        // generate the function part first so application spines vary
        let f = gen_sized(rng, left, bound, mode);
        let a = gen_sized(rng, right, bound, mode);
        Term::app(f, a)
    }
}

pub fn gen_term(rng: &mut ChaCha8Rng, size: usize, mode: GenMode) -> Term {
    let target = rng.gen_range(1..=size.max(1));
    gen_sized(rng, target, &mut Vec::new(), mode)
}

/// A reproducible corpus: `count` terms of size at most `size`.
pub fn gen_terms(count: usize, size: usize, seed: u64, mode: GenMode) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| gen_term(&mut rng, size, mode)).collect()
}
