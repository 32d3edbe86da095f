//! Terms, names, named multi-contexts, addresses, and the basic operations
//! on them: free variables, capture-avoiding substitution, alpha-equivalence,
//! fresh renaming, well-namedness, sub-term lookup.

use std::collections::BTreeSet;
use std::fmt;

/// A variable name: a letter base plus a numeric suffix. Index 0 means
/// "no suffix"; `x` and `x#3` are distinct names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name {
    pub base: String,
    pub index: u64,
}

impl Name {
    pub fn new(base: &str) -> Name {
        Name { base: base.to_string(), index: 0 }
    }

    pub fn indexed(base: &str, index: u64) -> Name {
        Name { base: base.to_string(), index }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}#{}", self.base, self.index)
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The name of a hole in a multi-context, printed `α3`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HoleName(pub u64);

impl fmt::Display for HoleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α{}", self.0)
    }
}

impl fmt::Debug for HoleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Monotone counter handing out fresh name indices and fresh hole ids.
/// Once raised above every index occurring in a run's components, nothing
/// it yields can collide with an existing name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NameSupply {
    counter: u64,
}

impl NameSupply {
    pub fn new() -> NameSupply {
        NameSupply { counter: 0 }
    }

    pub fn starting_at(counter: u64) -> NameSupply {
        NameSupply { counter }
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Raise the counter so future allocations exceed `index`.
    pub fn raise_above(&mut self, index: u64) {
        self.counter = self.counter.max(index + 1);
    }

    fn next(&mut self) -> u64 {
        let n = self.counter;
        self.counter += 1;
        n
    }

    pub fn fresh_name(&mut self, base: &str) -> Name {
        Name { base: base.to_string(), index: self.next() }
    }

    pub fn fresh_hole(&mut self) -> HoleName {
        HoleName(self.next())
    }
}

impl Default for NameSupply {
    fn default() -> Self {
        NameSupply::new()
    }
}

/// A pure lambda-term. Also serves as a pre-term when bound names are
/// taken literally (the machines work on pre-terms).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Lam(Name, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Name::new(name))
    }

    pub fn lam(binder: &str, body: Term) -> Term {
        Term::Lam(Name::new(binder), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-folded application `f a1 .. an`.
    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    /// Number of `Lam` and `App` constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        fn go(t: &Term, scope: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match t {
                Term::Var(x) => {
                    if !scope.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Term::Lam(x, b) => {
                    scope.push(x.clone());
                    go(b, scope, out);
                    scope.pop();
                }
                Term::App(f, a) => {
                    go(f, scope, out);
                    go(a, scope, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Single-scan check that `x` has a free occurrence.
    pub fn occurs_free(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Lam(y, b) => y != x && b.occurs_free(x),
            Term::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
        }
    }

    /// All binder names, in traversal order (with repetitions).
    pub fn binders(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_binders(&mut out);
        out
    }

    fn collect_binders(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(_) => {}
            Term::Lam(x, b) => {
                out.push(x.clone());
                b.collect_binders(out);
            }
            Term::App(f, a) => {
                f.collect_binders(out);
                a.collect_binders(out);
            }
        }
    }

    /// True iff all binders are pairwise distinct.
    pub fn is_well_named(&self) -> bool {
        let binders = self.binders();
        let set: BTreeSet<&Name> = binders.iter().collect();
        set.len() == binders.len()
    }

    /// Largest name index occurring anywhere in the term.
    pub fn max_name_index(&self) -> u64 {
        match self {
            Term::Var(x) => x.index,
            Term::Lam(x, b) => x.index.max(b.max_name_index()),
            Term::App(f, a) => f.max_name_index().max(a.max_name_index()),
        }
    }

    /// Capture-avoiding substitution `t{x := u}`. Binders are renamed only
    /// when they would actually capture a free variable of `u`; renames draw
    /// from a supply raised above every index in `t` and `u`.
    pub fn subst(&self, x: &Name, u: &Term) -> Term {
        let mut supply =
            NameSupply::starting_at(self.max_name_index().max(u.max_name_index()) + 1);
        let fv_u = u.free_vars();
        self.subst_in(x, u, &fv_u, &mut supply)
    }

    fn subst_in(&self, x: &Name, u: &Term, fv_u: &BTreeSet<Name>, supply: &mut NameSupply) -> Term {
        match self {
            Term::Var(y) => {
                if y == x {
                    u.clone()
                } else {
                    self.clone()
                }
            }
            Term::App(f, a) => Term::app(
                f.subst_in(x, u, fv_u, supply),
                a.subst_in(x, u, fv_u, supply),
            ),
            Term::Lam(y, b) => {
                if y == x || !b.occurs_free(x) {
                    self.clone()
                } else if fv_u.contains(y) {
                    let fresh = supply.fresh_name(&y.base);
                    let renamed = b.replace_free(y, &fresh);
                    Term::Lam(fresh, Box::new(renamed.subst_in(x, u, fv_u, supply)))
                } else {
                    Term::Lam(y.clone(), Box::new(b.subst_in(x, u, fv_u, supply)))
                }
            }
        }
    }

    /// Replace free occurrences of `from` by the variable `to`. Only safe
    /// when `to` is fresh for the term.
    fn replace_free(&self, from: &Name, to: &Name) -> Term {
        match self {
            Term::Var(y) => {
                if y == from {
                    Term::Var(to.clone())
                } else {
                    self.clone()
                }
            }
            Term::Lam(y, b) => {
                if y == from {
                    self.clone()
                } else {
                    Term::Lam(y.clone(), Box::new(b.replace_free(from, to)))
                }
            }
            Term::App(f, a) => Term::app(f.replace_free(from, to), a.replace_free(from, to)),
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(
            a: &Term,
            b: &Term,
            la: &mut Vec<(Name, u32)>,
            lb: &mut Vec<(Name, u32)>,
            lvl: u32,
        ) -> bool {
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => {
                    let ix = la.iter().rev().find(|(n, _)| n == x).map(|(_, l)| *l);
                    let iy = lb.iter().rev().find(|(n, _)| n == y).map(|(_, l)| *l);
                    match (ix, iy) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Lam(x, ta), Term::Lam(y, tb)) => {
                    la.push((x.clone(), lvl));
                    lb.push((y.clone(), lvl));
                    let r = go(ta, tb, la, lb, lvl + 1);
                    la.pop();
                    lb.pop();
                    r
                }
                (Term::App(f, s), Term::App(g, t)) => {
                    go(f, g, la, lb, lvl) && go(s, t, la, lb, lvl)
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new(), 0)
    }

    /// A well-named copy whose binders are all freshly allocated from
    /// `supply`. Free variables are untouched.
    pub fn rename_fresh(&self, supply: &mut NameSupply) -> Term {
        fn go(t: &Term, map: &mut Vec<(Name, Name)>, supply: &mut NameSupply) -> Term {
            match t {
                Term::Var(x) => match map.iter().rev().find(|(from, _)| from == x) {
                    Some((_, to)) => Term::Var(to.clone()),
                    None => t.clone(),
                },
                Term::Lam(x, b) => {
                    let fresh = supply.fresh_name(&x.base);
                    map.push((x.clone(), fresh.clone()));
                    let body = go(b, map, supply);
                    map.pop();
                    Term::Lam(fresh, Box::new(body))
                }
                Term::App(f, a) => Term::app(go(f, map, supply), go(a, map, supply)),
            }
        }
        go(self, &mut Vec::new(), supply)
    }

    pub fn subterm_at(&self, addr: &Address) -> Option<&Term> {
        let mut cur = self;
        for d in &addr.0 {
            cur = match (d, cur) {
                (Dir::L, Term::App(f, _)) => f,
                (Dir::R, Term::App(_, a)) => a,
                (Dir::B, Term::Lam(_, b)) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn node_tag(&self) -> NodeTag {
        match self {
            Term::Var(_) => NodeTag::Var,
            Term::Lam(..) => NodeTag::Lam,
            Term::App(..) => NodeTag::App,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Var(x) => write!(f, "{x}"),
                Term::Lam(x, b) => {
                    write!(f, "\\{x}. ")?;
                    go(b, f)
                }
                Term::App(fun, arg) => {
                    if matches!(**fun, Term::Lam(..)) {
                        write!(f, "(")?;
                        go(fun, f)?;
                        write!(f, ")")?;
                    } else {
                        go(fun, f)?;
                    }
                    write!(f, " ")?;
                    if matches!(**arg, Term::Var(_)) {
                        go(arg, f)
                    } else {
                        write!(f, "(")?;
                        go(arg, f)?;
                        write!(f, ")")
                    }
                }
            }
        }
        go(self, f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Constructor kind at a tree node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeTag {
    Var,
    Lam,
    App,
    Hole,
}

/// One step of a path into a term: left of an application, right of an
/// application, or under a binder.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dir {
    L,
    R,
    B,
}

/// A path over the alphabet {l, r, λ}; empty is the root.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(pub Vec<Dir>);

impl Address {
    pub fn root() -> Address {
        Address(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, d: Dir) -> Address {
        let mut path = self.0.clone();
        path.push(d);
        Address(path)
    }

    pub fn join(&self, other: &Address) -> Address {
        let mut path = self.0.clone();
        path.extend(other.0.iter().copied());
        Address(path)
    }

    /// `l^n`: descend n times into function position.
    pub fn lefts(n: usize) -> Address {
        Address(vec![Dir::L; n])
    }

    /// Number of `r` letters: how many arguments the position is under.
    pub fn level(&self) -> usize {
        self.0.iter().filter(|d| **d == Dir::R).count()
    }

    pub fn strip_prefix(&self, prefix: &Address) -> Option<Address> {
        if self.0.len() < prefix.0.len() || self.0[..prefix.0.len()] != prefix.0[..] {
            return None;
        }
        Some(Address(self.0[prefix.0.len()..].to_vec()))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for d in &self.0 {
            match d {
                Dir::L => write!(f, "l")?,
                Dir::R => write!(f, "r")?,
                Dir::B => write!(f, "λ")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Address {
    type Err = String;

    fn from_str(s: &str) -> Result<Address, String> {
        if s == "ε" || s.is_empty() {
            return Ok(Address::root());
        }
        let mut path = Vec::new();
        for c in s.chars() {
            path.push(match c {
                'l' => Dir::L,
                'r' => Dir::R,
                'λ' | 'b' => Dir::B,
                _ => return Err(format!("invalid address letter {c:?}")),
            });
        }
        Ok(Address(path))
    }
}

/// A named multi-context: a term with zero or more named holes.
#[derive(Clone, PartialEq, Eq)]
pub enum MultiCtx {
    Var(Name),
    Hole(HoleName),
    Lam(Name, Box<MultiCtx>),
    App(Box<MultiCtx>, Box<MultiCtx>),
}

impl MultiCtx {
    pub fn hole(h: HoleName) -> MultiCtx {
        MultiCtx::Hole(h)
    }

    pub fn from_term(t: &Term) -> MultiCtx {
        match t {
            Term::Var(x) => MultiCtx::Var(x.clone()),
            Term::Lam(x, b) => MultiCtx::Lam(x.clone(), Box::new(MultiCtx::from_term(b))),
            Term::App(f, a) => MultiCtx::App(
                Box::new(MultiCtx::from_term(f)),
                Box::new(MultiCtx::from_term(a)),
            ),
        }
    }

    /// A term, if the context has no holes.
    pub fn to_term(&self) -> Option<Term> {
        match self {
            MultiCtx::Var(x) => Some(Term::Var(x.clone())),
            MultiCtx::Hole(_) => None,
            MultiCtx::Lam(x, b) => Some(Term::Lam(x.clone(), Box::new(b.to_term()?))),
            MultiCtx::App(f, a) => Some(Term::app(f.to_term()?, a.to_term()?)),
        }
    }

    /// Capture-allowing substitution of every hole named `h` by `filler`.
    pub fn plug(&self, h: HoleName, filler: &MultiCtx) -> MultiCtx {
        match self {
            MultiCtx::Var(_) => self.clone(),
            MultiCtx::Hole(g) => {
                if *g == h {
                    filler.clone()
                } else {
                    self.clone()
                }
            }
            MultiCtx::Lam(x, b) => MultiCtx::Lam(x.clone(), Box::new(b.plug(h, filler))),
            MultiCtx::App(f, a) => {
                MultiCtx::App(Box::new(f.plug(h, filler)), Box::new(a.plug(h, filler)))
            }
        }
    }

    pub fn plug_term(&self, h: HoleName, t: &Term) -> MultiCtx {
        self.plug(h, &MultiCtx::from_term(t))
    }

    /// Hole names in left-to-right occurrence order (with repetitions,
    /// should the context be ill-formed).
    pub fn hole_names(&self) -> Vec<HoleName> {
        let mut out = Vec::new();
        self.collect_holes(&mut out);
        out
    }

    fn collect_holes(&self, out: &mut Vec<HoleName>) {
        match self {
            MultiCtx::Var(_) => {}
            MultiCtx::Hole(h) => out.push(*h),
            MultiCtx::Lam(_, b) => b.collect_holes(out),
            MultiCtx::App(f, a) => {
                f.collect_holes(out);
                a.collect_holes(out);
            }
        }
    }

    pub fn hole_address(&self, h: HoleName) -> Option<Address> {
        fn go(c: &MultiCtx, h: HoleName, path: &mut Vec<Dir>) -> bool {
            match c {
                MultiCtx::Var(_) => false,
                MultiCtx::Hole(g) => *g == h,
                MultiCtx::Lam(_, b) => {
                    path.push(Dir::B);
                    if go(b, h, path) {
                        return true;
                    }
                    path.pop();
                    false
                }
                MultiCtx::App(f, a) => {
                    path.push(Dir::L);
                    if go(f, h, path) {
                        return true;
                    }
                    path.pop();
                    path.push(Dir::R);
                    if go(a, h, path) {
                        return true;
                    }
                    path.pop();
                    false
                }
            }
        }
        let mut path = Vec::new();
        if go(self, h, &mut path) {
            Some(Address(path))
        } else {
            None
        }
    }

    pub fn subterm_at(&self, addr: &Address) -> Option<&MultiCtx> {
        let mut cur = self;
        for d in &addr.0 {
            cur = match (d, cur) {
                (Dir::L, MultiCtx::App(f, _)) => f,
                (Dir::R, MultiCtx::App(_, a)) => a,
                (Dir::B, MultiCtx::Lam(_, b)) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn node_tag(&self) -> NodeTag {
        match self {
            MultiCtx::Var(_) => NodeTag::Var,
            MultiCtx::Hole(_) => NodeTag::Hole,
            MultiCtx::Lam(..) => NodeTag::Lam,
            MultiCtx::App(..) => NodeTag::App,
        }
    }

    /// Number of `Lam` and `App` constructors.
    pub fn size(&self) -> usize {
        match self {
            MultiCtx::Var(_) | MultiCtx::Hole(_) => 0,
            MultiCtx::Lam(_, b) => 1 + b.size(),
            MultiCtx::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Free variables; hole names are not variables.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        fn go(c: &MultiCtx, scope: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match c {
                MultiCtx::Var(x) => {
                    if !scope.contains(x) {
                        out.insert(x.clone());
                    }
                }
                MultiCtx::Hole(_) => {}
                MultiCtx::Lam(x, b) => {
                    scope.push(x.clone());
                    go(b, scope, out);
                    scope.pop();
                }
                MultiCtx::App(f, a) => {
                    go(f, scope, out);
                    go(a, scope, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn binders(&self) -> Vec<Name> {
        match self {
            MultiCtx::Var(_) | MultiCtx::Hole(_) => Vec::new(),
            MultiCtx::Lam(x, b) => {
                let mut out = vec![x.clone()];
                out.extend(b.binders());
                out
            }
            MultiCtx::App(f, a) => {
                let mut out = f.binders();
                out.extend(a.binders());
                out
            }
        }
    }

    /// The approximant grammar: variable-headed spines and holes, closed
    /// under abstraction; holes never occur in function position.
    pub fn is_approximant(&self) -> bool {
        match self {
            MultiCtx::Hole(_) => true,
            MultiCtx::Lam(_, b) => b.is_approximant(),
            _ => self.is_rigid_approximant(),
        }
    }

    fn is_rigid_approximant(&self) -> bool {
        match self {
            MultiCtx::Var(_) => true,
            MultiCtx::App(f, a) => f.is_rigid_approximant() && a.is_approximant(),
            _ => false,
        }
    }
}

impl fmt::Display for MultiCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(c: &MultiCtx, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match c {
                MultiCtx::Var(x) => write!(f, "{x}"),
                MultiCtx::Hole(h) => write!(f, "⟨·⟩{h}"),
                MultiCtx::Lam(x, b) => {
                    write!(f, "\\{x}. ")?;
                    go(b, f)
                }
                MultiCtx::App(fun, arg) => {
                    if matches!(**fun, MultiCtx::Lam(..)) {
                        write!(f, "(")?;
                        go(fun, f)?;
                        write!(f, ")")?;
                    } else {
                        go(fun, f)?;
                    }
                    write!(f, " ")?;
                    if matches!(**arg, MultiCtx::Var(_) | MultiCtx::Hole(_)) {
                        go(arg, f)
                    } else {
                        write!(f, "(")?;
                        go(arg, f)?;
                        write!(f, ")")
                    }
                }
            }
        }
        go(self, f)
    }
}

impl fmt::Debug for MultiCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    #[test]
    fn name_printing() {
        assert_eq!(n("x").to_string(), "x");
        assert_eq!(Name::indexed("x", 7).to_string(), "x#7");
        assert_ne!(n("x"), Name::indexed("x", 1));
    }

    #[test]
    fn free_vars_examples() {
        assert!(parse("\\x. x").unwrap().free_vars().is_empty());
        let t = parse("\\x. \\y. x y z").unwrap();
        assert_eq!(t.free_vars(), BTreeSet::from([n("z")]));
        let t = parse("x (\\x. x)").unwrap();
        assert_eq!(t.free_vars(), BTreeSet::from([n("x")]));
    }

    #[test]
    fn subst_identity_and_shadowing() {
        let u = parse("u u").unwrap();
        assert_eq!(Term::var("x").subst(&n("x"), &u), u);
        let id = parse("\\x. x").unwrap();
        assert_eq!(id.subst(&n("y"), &Term::var("z")), id);
    }

    #[test]
    fn subst_renames_on_capture() {
        // (\x. \y. z){z := x y} renames both binders away from {x, y}
        let t = parse("\\x. \\y. z").unwrap();
        let u = parse("x y").unwrap();
        let r = t.subst(&n("z"), &u);
        let expected = Term::Lam(
            Name::indexed("x", 1),
            Box::new(Term::Lam(
                Name::indexed("y", 2),
                Box::new(parse("x y").unwrap()),
            )),
        );
        assert_eq!(r, expected);
        assert!(r.alpha_eq(&parse("\\a. \\b. x y").unwrap()));
    }

    #[test]
    fn subst_free_vars_bound() {
        // free_vars(t{x:=u}) = (free_vars(t) \ {x}) ∪ free_vars(u) when x free in t
        let t = parse("x (\\y. x z)").unwrap();
        let u = parse("w w").unwrap();
        let r = t.subst(&n("x"), &u);
        let expected: BTreeSet<Name> = BTreeSet::from([n("z"), n("w")]);
        assert_eq!(r.free_vars(), expected);
    }

    #[test]
    fn alpha_eq_examples() {
        assert!(parse("\\x. x").unwrap().alpha_eq(&parse("\\y. y").unwrap()));
        assert!(!parse("\\x. \\y. x")
            .unwrap()
            .alpha_eq(&parse("\\y. \\x. x").unwrap()));
        assert!(!Term::var("x").alpha_eq(&Term::var("y")));
    }

    #[test]
    fn rename_fresh_single_binder() {
        let mut supply = NameSupply::starting_at(7);
        let t = parse("\\x. x").unwrap();
        let r = t.rename_fresh(&mut supply);
        assert_eq!(
            r,
            Term::Lam(
                Name::indexed("x", 7),
                Box::new(Term::Var(Name::indexed("x", 7)))
            )
        );
        assert_eq!(supply.counter(), 8);
    }

    #[test]
    fn rename_fresh_well_named_and_alpha() {
        let t = parse("(\\x. x) (\\x. x x)").unwrap();
        assert!(!t.is_well_named());
        let mut supply = NameSupply::starting_at(1);
        let r = t.rename_fresh(&mut supply);
        assert!(r.is_well_named());
        assert!(r.alpha_eq(&t));
        // free variables untouched
        assert_eq!(Term::var("y").rename_fresh(&mut supply), Term::var("y"));
    }

    #[test]
    fn well_named_examples() {
        assert!(parse("(\\x. x) (\\y. y y)").unwrap().is_well_named());
        assert!(!parse("(\\x. x) (\\x. x x)").unwrap().is_well_named());
        assert!(Term::var("x").is_well_named());
    }

    #[test]
    fn subterm_at_examples() {
        let t = parse("x y").unwrap();
        assert_eq!(t.subterm_at(&Address::root()), Some(&t));
        assert_eq!(t.subterm_at(&"l".parse().unwrap()), Some(&Term::var("x")));
        let lam = parse("\\x. x").unwrap();
        assert_eq!(lam.subterm_at(&"r".parse().unwrap()), None);
    }

    #[test]
    fn subterm_at_prefix_composes() {
        let t = parse("(\\x. x y) (z w)").unwrap();
        let a: Address = "l".parse().unwrap();
        let b: Address = "lλ".parse().unwrap();
        let rest = b.strip_prefix(&a).unwrap();
        assert_eq!(t.subterm_at(&b), t.subterm_at(&a).unwrap().subterm_at(&rest));
    }

    #[test]
    fn address_display_roundtrip() {
        for s in ["ε", "l", "lrλ", "λλl"] {
            let a: Address = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert_eq!("lrλr".parse::<Address>().unwrap().level(), 2);
    }

    #[test]
    fn approximant_grammar() {
        let a0 = HoleName(0);
        let a1 = HoleName(1);
        // x ⟨·⟩0 ⟨·⟩1
        let spine = MultiCtx::App(
            Box::new(MultiCtx::App(
                Box::new(MultiCtx::Var(n("x"))),
                Box::new(MultiCtx::hole(a0)),
            )),
            Box::new(MultiCtx::hole(a1)),
        );
        assert!(spine.is_approximant());
        assert!(MultiCtx::Lam(n("x"), Box::new(MultiCtx::hole(a0))).is_approximant());
        // hole in function position is not an approximant
        let bad = MultiCtx::App(Box::new(MultiCtx::hole(a0)), Box::new(MultiCtx::Var(n("x"))));
        assert!(!bad.is_approximant());
    }

    #[test]
    fn plug_is_capture_allowing() {
        // plugging x under \x binds it
        let c = MultiCtx::Lam(n("x"), Box::new(MultiCtx::hole(HoleName(0))));
        let plugged = c.plug_term(HoleName(0), &Term::var("x"));
        let t = plugged.to_term().unwrap();
        assert_eq!(t, parse("\\x. x").unwrap());
    }

    #[test]
    fn hole_addresses() {
        let c = MultiCtx::App(
            Box::new(MultiCtx::Var(n("x"))),
            Box::new(MultiCtx::Lam(n("y"), Box::new(MultiCtx::hole(HoleName(3))))),
        );
        assert_eq!(c.hole_address(HoleName(3)), Some("rλ".parse().unwrap()));
        assert_eq!(c.hole_address(HoleName(4)), None);
        assert_eq!(c.hole_names(), vec![HoleName(3)]);
    }
}
