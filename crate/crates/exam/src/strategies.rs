//! Machine-free reference reducers and redex enumerators, used as oracles
//! for the machines: weak head, leftmost, external and least-level
//! reduction, plus normal-form predicates and a diamond-closure check.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Address, Dir, Term};

/// Addresses of beta-redexes inside a subject term.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RedexSet(pub BTreeSet<Address>);

impl RedexSet {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &Address) -> bool {
        self.0.contains(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Address> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl FromIterator<Address> for RedexSet {
    fn from_iter<I: IntoIterator<Item = Address>>(iter: I) -> Self {
        RedexSet(iter.into_iter().collect())
    }
}

/// Result of a deterministic stepper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Reduced { next: Term, at: Address },
    Normal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotARedex {
    pub at: Address,
}

impl fmt::Display for NotARedex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no beta-redex at address {}", self.at)
    }
}

impl std::error::Error for NotARedex {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuelExhausted;

impl fmt::Display for FuelExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fuel exhausted")
    }
}

impl std::error::Error for FuelExhausted {}

/// Neutral terms: a variable applied to normal forms.
pub fn is_neutral(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, a) => is_neutral(f) && is_normal(a),
        Term::Lam(..) => false,
    }
}

/// Normal forms: neutral terms closed under abstraction.
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Lam(_, b) => is_normal(b),
        _ => is_neutral(t),
    }
}

/// Every beta-redex address, in pre-order (node before children, function
/// before argument).
pub fn all_redexes(t: &Term) -> Vec<Address> {
    fn go(t: &Term, path: &mut Vec<Dir>, out: &mut Vec<Address>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(_, b) => {
                path.push(Dir::B);
                go(b, path, out);
                path.pop();
            }
            Term::App(f, a) => {
                if matches!(**f, Term::Lam(..)) {
                    out.push(Address(path.clone()));
                }
                path.push(Dir::L);
                go(f, path, out);
                path.pop();
                path.push(Dir::R);
                go(a, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Contract the beta-redex at `a`, leaving everything else unchanged.
pub fn contract(t: &Term, a: &Address) -> Result<Term, NotARedex> {
    fn go(t: &Term, dirs: &[Dir], full: &Address) -> Result<Term, NotARedex> {
        match dirs.split_first() {
            None => match t {
                Term::App(f, arg) => match &**f {
                    Term::Lam(x, body) => Ok(body.subst(x, arg)),
                    _ => Err(NotARedex { at: full.clone() }),
                },
                _ => Err(NotARedex { at: full.clone() }),
            },
            Some((d, rest)) => match (d, t) {
                (Dir::L, Term::App(f, arg)) => {
                    Ok(Term::app(go(f, rest, full)?, (**arg).clone()))
                }
                (Dir::R, Term::App(f, arg)) => {
                    Ok(Term::app((**f).clone(), go(arg, rest, full)?))
                }
                (Dir::B, Term::Lam(x, b)) => {
                    Ok(Term::Lam(x.clone(), Box::new(go(b, rest, full)?)))
                }
                _ => Err(NotARedex { at: full.clone() }),
            },
        }
    }
    go(t, &a.0, a)
}

/// Address of the weak-head redex: the redex found by walking the left
/// spine, never entering arguments or abstraction bodies.
pub fn whnf_redex_addr(t: &Term) -> Option<Address> {
    fn go(t: &Term, depth: usize) -> Option<Address> {
        match t {
            Term::App(f, _) => {
                if matches!(**f, Term::Lam(..)) {
                    Some(Address::lefts(depth))
                } else {
                    go(f, depth + 1)
                }
            }
            _ => None,
        }
    }
    go(t, 0)
}

/// One step of weak head reduction, or `Normal` if the head is an
/// abstraction or a variable spine.
pub fn whnf_step(t: &Term) -> StepOutcome {
    match whnf_redex_addr(t) {
        Some(a) => {
            let next = contract(t, &a).expect("weak-head address is a redex");
            StepOutcome::Reduced { next, at: a }
        }
        None => StepOutcome::Normal,
    }
}

/// Address of the leftmost-outermost redex.
pub fn leftmost_redex_addr(t: &Term) -> Option<Address> {
    fn go(t: &Term, path: &mut Vec<Dir>) -> Option<Address> {
        match t {
            Term::Var(_) => None,
            Term::Lam(_, b) => {
                path.push(Dir::B);
                let r = go(b, path);
                path.pop();
                r
            }
            Term::App(f, a) => {
                if matches!(**f, Term::Lam(..)) {
                    return Some(Address(path.clone()));
                }
                path.push(Dir::L);
                if let Some(r) = go(f, path) {
                    return Some(r);
                }
                path.pop();
                path.push(Dir::R);
                let r = go(a, path);
                path.pop();
                r
            }
        }
    }
    go(t, &mut Vec::new())
}

/// One step of leftmost-outermost reduction.
pub fn leftmost_step(t: &Term) -> StepOutcome {
    match leftmost_redex_addr(t) {
        Some(a) => {
            let next = contract(t, &a).expect("leftmost address is a redex");
            StepOutcome::Reduced { next, at: a }
        }
        None => StepOutcome::Normal,
    }
}

/// The redexes reachable through an external context: under any prefix of
/// abstractions, either the head redex of an applicative spine, or
/// hereditarily inside the arguments of a variable-headed spine.
pub fn external_redexes(t: &Term) -> RedexSet {
    fn spine<'a>(t: &'a Term, args: &mut Vec<&'a Term>) -> &'a Term {
        match t {
            Term::App(f, a) => {
                let head = spine(f, args);
                args.push(a);
                head
            }
            _ => t,
        }
    }
    fn go(t: &Term, path: &mut Vec<Dir>, out: &mut BTreeSet<Address>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(_, b) => {
                path.push(Dir::B);
                go(b, path, out);
                path.pop();
            }
            Term::App(..) => {
                let mut args = Vec::new();
                let head = spine(t, &mut args);
                let n = args.len();
                match head {
                    Term::Lam(..) => {
                        // head redex: the application node applying the
                        // abstraction to its first argument
                        let mut addr = path.clone();
                        addr.extend(std::iter::repeat_n(Dir::L, n - 1));
                        out.insert(Address(addr));
                    }
                    Term::Var(_) => {
                        for (i, arg) in args.iter().enumerate() {
                            // argument i+1 sits at l^(n-i-1) r
                            let extra = n - i - 1;
                            path.extend(std::iter::repeat_n(Dir::L, extra));
                            path.push(Dir::R);
                            go(arg, path, out);
                            path.pop();
                            path.truncate(path.len() - extra);
                        }
                    }
                    _ => unreachable!("spine head is not an application"),
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    RedexSet(out)
}

/// Level of the redex at `a`: the number of arguments the redex is
/// contained in, i.e. the number of `r` letters in the address.
pub fn redex_level(t: &Term, a: &Address) -> Result<usize, NotARedex> {
    let sub = t.subterm_at(a).ok_or(NotARedex { at: a.clone() })?;
    match sub {
        Term::App(f, _) if matches!(**f, Term::Lam(..)) => Ok(a.level()),
        _ => Err(NotARedex { at: a.clone() }),
    }
}

/// The redexes of minimal level; empty iff the term is normal.
pub fn least_level_redexes(t: &Term) -> RedexSet {
    let all = all_redexes(t);
    let min = match all.iter().map(Address::level).min() {
        Some(m) => m,
        None => return RedexSet::default(),
    };
    all.into_iter().filter(|a| a.level() == min).collect()
}

/// Which redex a normalizing loop picks at each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Picker {
    Leftmost,
    /// Uniformly random external redex, from the given seed.
    External { seed: u64 },
    /// Uniformly random least-level redex, from the given seed.
    LeastLevel { seed: u64 },
}

/// Terms larger than this abort a normalizing loop with `FuelExhausted`;
/// beta can square a term's size at every step.
pub const TERM_SIZE_BUDGET: usize = 30_000;

/// Iterate the chosen stepper until a normal form or until `fuel` steps or
/// the size budget have been spent. Exhausted fuel is a budget signal, not
/// a divergence proof.
pub fn normalize(t: &Term, picker: Picker, fuel: u64) -> Result<(Term, u64), FuelExhausted> {
    let mut rng = match picker {
        Picker::Leftmost => None,
        Picker::External { seed } | Picker::LeastLevel { seed } => {
            Some(ChaCha8Rng::seed_from_u64(seed))
        }
    };
    let mut cur = t.clone();
    let mut steps = 0u64;
    loop {
        let candidates: Vec<Address> = match picker {
            Picker::Leftmost => leftmost_redex_addr(&cur).into_iter().collect(),
            Picker::External { .. } => external_redexes(&cur).0.into_iter().collect(),
            Picker::LeastLevel { .. } => least_level_redexes(&cur).0.into_iter().collect(),
        };
        if candidates.is_empty() {
            return Ok((cur, steps));
        }
        if steps == fuel || cur.size() > TERM_SIZE_BUDGET {
            return Err(FuelExhausted);
        }
        let at = match &mut rng {
            None => candidates[0].clone(),
            Some(rng) => candidates.choose(rng).unwrap().clone(),
        };
        cur = contract(&cur, &at).expect("picked address is a redex");
        steps += 1;
    }
}

/// Check the one-step diamond over a set of redexes of `t`: any two
/// distinct one-step reducts close in exactly one step each. Closure is
/// compared up to alpha.
pub fn diamond_check(t: &Term, redexes: &RedexSet) -> bool {
    let addrs: Vec<&Address> = redexes.iter().collect();
    for (i, a1) in addrs.iter().enumerate() {
        for a2 in addrs.iter().skip(i + 1) {
            let u1 = match contract(t, a1) {
                Ok(u) => u,
                Err(_) => return false,
            };
            let u2 = match contract(t, a2) {
                Ok(u) => u,
                Err(_) => return false,
            };
            if u1 == u2 {
                continue;
            }
            // distinct external redexes live in disjoint subtrees, so each
            // survives the other step at its own address
            let ext1 = external_redexes(&u1);
            let ext2 = external_redexes(&u2);
            if !ext1.contains(a2) || !ext2.contains(a1) {
                return false;
            }
            let r1 = contract(&u1, a2).expect("surviving redex");
            let r2 = contract(&u2, a1).expect("surviving redex");
            if !r1.alpha_eq(&r2) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn addr(s: &str) -> Address {
        s.parse().unwrap()
    }

    #[test]
    fn normal_form_grammar() {
        let t = parse("x y").unwrap();
        assert!(is_neutral(&t) && is_normal(&t));
        let t = parse("\\x. x").unwrap();
        assert!(is_normal(&t) && !is_neutral(&t));
        let t = parse("x ((\\y. y) z)").unwrap();
        assert!(!is_neutral(&t) && !is_normal(&t));
        assert_eq!(all_redexes(&t).len(), 1);
    }

    #[test]
    fn is_normal_matches_redex_enumeration() {
        for s in ["x", "\\x. x y", "x ((\\y. y) z)", "(\\x. x) (\\y. y)"] {
            let t = parse(s).unwrap();
            assert_eq!(is_normal(&t), all_redexes(&t).is_empty(), "{s}");
        }
    }

    #[test]
    fn contract_examples() {
        let t = parse("(\\x. x) y").unwrap();
        assert_eq!(contract(&t, &addr("ε")).unwrap(), parse("y").unwrap());

        let t = parse("z ((\\x. x) y)").unwrap();
        assert_eq!(contract(&t, &addr("r")).unwrap(), parse("z y").unwrap());

        // head step of (\x.\y.x) z Ω
        let t = parse("(\\x. \\y. x) z ((\\w. w w) (\\w. w w))").unwrap();
        let r = contract(&t, &addr("l")).unwrap();
        assert_eq!(r, parse("(\\y. z) ((\\w. w w) (\\w. w w))").unwrap());

        assert!(contract(&t, &addr("r")).is_ok());
        assert!(contract(&t, &addr("ll")).is_err());
    }

    #[test]
    fn whnf_examples() {
        // (\x. t) u r steps to t{x:=u} r
        let t = parse("(\\x. x x) u r").unwrap();
        match whnf_step(&t) {
            StepOutcome::Reduced { next, at } => {
                assert_eq!(next, parse("(u u) r").unwrap());
                assert_eq!(at, addr("l"));
            }
            StepOutcome::Normal => panic!("expected a weak head step"),
        }
        // no reduction inside arguments or under binders
        assert_eq!(whnf_step(&parse("r ((\\x. x) u)").unwrap()), StepOutcome::Normal);
        assert_eq!(whnf_step(&parse("\\y. (\\x. x) u").unwrap()), StepOutcome::Normal);
    }

    #[test]
    fn leftmost_examples() {
        let t = parse("y ((\\x. x x) u)").unwrap();
        match leftmost_step(&t) {
            StepOutcome::Reduced { next, .. } => {
                assert_eq!(next, parse("y (u u)").unwrap());
            }
            _ => panic!(),
        }
        // x (I y) (I z) steps to x y (I z)
        let t = parse("x ((\\a. a) y) ((\\a. a) z)").unwrap();
        match leftmost_step(&t) {
            StepOutcome::Reduced { next, at } => {
                assert_eq!(next, parse("x y ((\\a. a) z)").unwrap());
                assert_eq!(at, addr("lr"));
            }
            _ => panic!(),
        }
        assert_eq!(leftmost_step(&parse("\\x. x").unwrap()), StepOutcome::Normal);
    }

    #[test]
    fn external_examples() {
        // both argument redexes of x (I y) (I z) are external
        let t = parse("x ((\\a. a) y) ((\\a. a) z)").unwrap();
        let ext = external_redexes(&t);
        assert_eq!(ext, RedexSet::from_iter([addr("lr"), addr("r")]));

        // only the head redex of (\x.\y.x) z Ω is external
        let t = parse("(\\x. \\y. x) z ((\\w. w w) (\\w. w w))").unwrap();
        let ext = external_redexes(&t);
        assert_eq!(ext, RedexSet::from_iter([addr("l")]));

        assert!(external_redexes(&parse("\\x. x y").unwrap()).is_empty());
    }

    #[test]
    fn leftmost_is_external() {
        for s in [
            "x ((\\a. a) y) ((\\a. a) z)",
            "(\\x. \\y. x) z ((\\w. w w) (\\w. w w))",
            "\\q. q ((\\a. a) ((\\b. b) c))",
        ] {
            let t = parse(s).unwrap();
            if let StepOutcome::Reduced { at, .. } = leftmost_step(&t) {
                assert!(external_redexes(&t).contains(&at), "{s}");
            }
        }
    }

    #[test]
    fn level_examples() {
        let t = parse("(\\x. x) y").unwrap();
        assert_eq!(redex_level(&t, &addr("ε")).unwrap(), 0);

        let t = parse("(\\x. \\y. x) z ((\\w. w w) (\\w. w w))").unwrap();
        assert_eq!(redex_level(&t, &addr("r")).unwrap(), 1);
        assert_eq!(redex_level(&t, &addr("l")).unwrap(), 0);
        assert!(redex_level(&t, &addr("ll")).is_err());

        // in x (x (I y)) (I z) the leftmost redex I y has level 2, I z level 1
        let t = parse("x (x ((\\a. a) y)) ((\\b. b) z)").unwrap();
        assert_eq!(redex_level(&t, &addr("lrr")).unwrap(), 2);
        assert_eq!(redex_level(&t, &addr("r")).unwrap(), 1);
        assert_eq!(least_level_redexes(&t), RedexSet::from_iter([addr("r")]));
    }

    #[test]
    fn least_level_examples() {
        let t = parse("x ((\\a. a) y) ((\\a. a) z)").unwrap();
        assert_eq!(
            least_level_redexes(&t),
            RedexSet::from_iter([addr("lr"), addr("r")])
        );
        assert!(least_level_redexes(&parse("\\x. x").unwrap()).is_empty());
    }

    #[test]
    fn normalize_examples() {
        let t = parse("(\\x. \\y. x) z ((\\w. w w) (\\w. w w))").unwrap();
        let (nf, steps) = normalize(&t, Picker::Leftmost, 10).unwrap();
        assert_eq!(nf, parse("z").unwrap());
        assert_eq!(steps, 2);

        let omega = parse("(\\w. w w) (\\w. w w)").unwrap();
        assert_eq!(normalize(&omega, Picker::Leftmost, 50), Err(FuelExhausted));

        for seed in 0..5 {
            let t = parse("x ((\\a. a) y) ((\\a. a) z)").unwrap();
            let (nf, steps) = normalize(&t, Picker::External { seed }, 10).unwrap();
            assert_eq!(nf, parse("x y z").unwrap());
            assert_eq!(steps, 2);
        }
    }

    #[test]
    fn diamond_examples() {
        let t = parse("x ((\\a. a) y) ((\\a. a) z)").unwrap();
        assert!(diamond_check(&t, &external_redexes(&t)));

        // singleton set is vacuous
        let t = parse("(\\x. x) y").unwrap();
        assert!(diamond_check(&t, &external_redexes(&t)));
    }

    #[test]
    fn diamond_holds_on_random_external_sets() {
        use crate::gen::{gen_terms, GenMode};
        // spines under a free head make every argument redex external
        let args = gen_terms(210, 8, 31, GenMode::Open);
        let mut branching = 0;
        for chunk in args.chunks(3) {
            let t = Term::apps(Term::var("h"), chunk.iter().cloned());
            let ext = external_redexes(&t);
            if ext.len() >= 2 {
                branching += 1;
            }
            assert!(diamond_check(&t, &ext), "{t}");
            let under = Term::lam("q", t);
            assert!(diamond_check(&under, &external_redexes(&under)), "{under}");
        }
        assert!(branching > 20, "only {branching} branching spines");
    }

    #[test]
    fn random_external_reductions_have_leftmost_length() {
        use crate::gen::{gen_terms, GenMode};
        let mut compared = 0;
        for t in gen_terms(60, 12, 17, GenMode::Open) {
            let Ok((nf, steps)) = normalize(&t, Picker::Leftmost, 200) else {
                continue;
            };
            compared += 1;
            for seed in [0, 1, 2] {
                let (nf2, steps2) = normalize(&t, Picker::External { seed }, 400)
                    .expect("external reduction normalizes whenever leftmost does");
                assert!(nf2.alpha_eq(&nf), "{t}");
                assert_eq!(steps2, steps, "{t}");
            }
        }
        assert!(compared > 20);
    }

    #[test]
    fn least_level_never_extends_a_shallower_redex() {
        use crate::gen::{gen_terms, GenMode};
        for t in gen_terms(120, 14, 23, GenMode::Open) {
            let all = all_redexes(&t);
            for a in least_level_redexes(&t).iter() {
                for b in &all {
                    if b != a && a.strip_prefix(b).is_some() {
                        assert!(b.level() >= a.level(), "{t}: {a} under {b}");
                    }
                }
            }
        }
    }
}
