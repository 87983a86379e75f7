//! Shared AST for ordinary formulas, contexts and contextual formulas of
//! propositional logic, LTL, CTL and the modal mu-calculus.
//!
//! A single node kind covers all four logics; per-logic well-formedness is
//! checked separately so that the reductions and the CTL/LTL-to-mu
//! translations can rewrite across logics. Core formulas are kept in negation
//! normal form: negation occurs only as [`Kind::NegAtom`]. The query
//! connectives `!`, `->`, `<->` live above the core and are removed by
//! [`to_nnf`] (except for the top-level connective of an equivalence or
//! entailment query, which the reductions handle homomorphically).

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Prefix of fresh atoms standing for context subformulas.
pub const CTX_ATOM_PREFIX: &str = "_ctx_";
/// Prefix of fresh atoms standing for free mu-calculus variables.
pub const FV_ATOM_PREFIX: &str = "_fv_";

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: impl AsRef<str>) -> Self {
                $name(Arc::from(s.as_ref()))
            }
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), self.0)
            }
        }

        impl<T: AsRef<str>> From<T> for $name {
            fn from(s: T) -> Self {
                $name::new(s)
            }
        }
    };
}

name_type!(
    /// An atomic proposition.
    Atom
);
name_type!(
    /// A mu-calculus fixpoint variable.
    Var
);
name_type!(
    /// A context variable; `c[phi]` applies the context bound to `c`.
    CtxVar
);

impl Atom {
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(CTX_ATOM_PREFIX) || self.0.starts_with(FV_ATOM_PREFIX)
    }
}

/// The four supported logics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    Prop,
    Ltl,
    Ctl,
    Mu,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::Prop => "prop",
            Logic::Ltl => "ltl",
            Logic::Ctl => "ctl",
            Logic::Mu => "mu",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether holes may occur under negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Monotonic,
    NonMonotonic,
}

#[derive(Clone, PartialEq, Eq)]
pub enum Kind {
    True,
    False,
    Atom(Atom),
    NegAtom(Atom),
    Var(Var),
    And(Formula, Formula),
    Or(Formula, Formula),
    // Query layer (and non-monotonic contexts): eliminated by `to_nnf`.
    Not(Formula),
    Implies(Formula, Formula),
    Iff(Formula, Formula),
    // Mu-calculus.
    Diamond(Formula),
    Boxm(Formula),
    Mu(Var, Formula),
    Nu(Var, Formula),
    // LTL.
    Next(Formula),
    Until(Formula, Formula),
    WeakUntil(Formula, Formula),
    Globally(Formula),
    Finally(Formula),
    // CTL.
    Au(Formula, Formula),
    Aw(Formula, Formula),
    Eu(Formula, Formula),
    Ew(Formula, Formula),
    Ax(Formula),
    Ex(Formula),
    Ag(Formula),
    Af(Formula),
    Eg(Formula),
    Ef(Formula),
    // Contexts.
    Hole,
    Apply(CtxVar, Formula),
}

struct FNode {
    hash: u64,
    kind: Kind,
}

/// An immutable formula. Cheap to clone; subtrees are shared.
#[derive(Clone)]
pub struct Formula {
    node: Arc<FNode>,
}

fn mix(mut h: u64, v: u64) -> u64 {
    h ^= v;
    h = h.wrapping_mul(0x100000001b3);
    h ^= h >> 29;
    h
}

fn str_hash(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.as_bytes() {
        h = mix(h, *b as u64);
    }
    h
}

fn tag_of(kind: &Kind) -> u64 {
    use Kind::*;
    match kind {
        True => 1,
        False => 2,
        Atom(_) => 3,
        NegAtom(_) => 4,
        Var(_) => 5,
        And(..) => 6,
        Or(..) => 7,
        Not(_) => 8,
        Implies(..) => 9,
        Iff(..) => 10,
        Diamond(_) => 11,
        Boxm(_) => 12,
        Mu(..) => 13,
        Nu(..) => 14,
        Next(_) => 15,
        Until(..) => 16,
        WeakUntil(..) => 17,
        Globally(_) => 18,
        Finally(_) => 19,
        Au(..) => 20,
        Aw(..) => 21,
        Eu(..) => 22,
        Ew(..) => 23,
        Ax(_) => 24,
        Ex(_) => 25,
        Ag(_) => 26,
        Af(_) => 27,
        Eg(_) => 28,
        Ef(_) => 29,
        Hole => 30,
        Apply(..) => 31,
    }
}

impl Formula {
    fn mk(kind: Kind) -> Formula {
        let mut h = mix(0x9e3779b97f4a7c15, tag_of(&kind));
        match &kind {
            Kind::Atom(a) | Kind::NegAtom(a) => h = mix(h, str_hash(a.as_str())),
            Kind::Var(v) => h = mix(h, str_hash(v.as_str())),
            Kind::Mu(v, b) | Kind::Nu(v, b) => {
                h = mix(h, str_hash(v.as_str()));
                h = mix(h, b.node.hash);
            }
            Kind::Apply(c, b) => {
                h = mix(h, str_hash(c.as_str()));
                h = mix(h, b.node.hash);
            }
            _ => {
                for c in children_of(&kind) {
                    h = mix(h, c.node.hash);
                }
            }
        }
        Formula { node: Arc::new(FNode { hash: h, kind }) }
    }

    pub fn kind(&self) -> &Kind {
        &self.node.kind
    }

    fn ptr(&self) -> *const FNode {
        Arc::as_ptr(&self.node)
    }

    // Constructors.
    pub fn t() -> Formula {
        Formula::mk(Kind::True)
    }
    pub fn f() -> Formula {
        Formula::mk(Kind::False)
    }
    pub fn atom(a: impl Into<Atom>) -> Formula {
        Formula::mk(Kind::Atom(a.into()))
    }
    pub fn neg_atom(a: impl Into<Atom>) -> Formula {
        Formula::mk(Kind::NegAtom(a.into()))
    }
    pub fn var(v: impl Into<Var>) -> Formula {
        Formula::mk(Kind::Var(v.into()))
    }
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::And(l, r))
    }
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Or(l, r))
    }
    pub fn not(x: Formula) -> Formula {
        Formula::mk(Kind::Not(x))
    }
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Implies(l, r))
    }
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Iff(l, r))
    }
    pub fn diamond(x: Formula) -> Formula {
        Formula::mk(Kind::Diamond(x))
    }
    pub fn boxm(x: Formula) -> Formula {
        Formula::mk(Kind::Boxm(x))
    }
    pub fn mu(v: impl Into<Var>, b: Formula) -> Formula {
        Formula::mk(Kind::Mu(v.into(), b))
    }
    pub fn nu(v: impl Into<Var>, b: Formula) -> Formula {
        Formula::mk(Kind::Nu(v.into(), b))
    }
    pub fn next(x: Formula) -> Formula {
        Formula::mk(Kind::Next(x))
    }
    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Until(l, r))
    }
    pub fn weak_until(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::WeakUntil(l, r))
    }
    pub fn globally(x: Formula) -> Formula {
        Formula::mk(Kind::Globally(x))
    }
    pub fn finally(x: Formula) -> Formula {
        Formula::mk(Kind::Finally(x))
    }
    pub fn au(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Au(l, r))
    }
    pub fn aw(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Aw(l, r))
    }
    pub fn eu(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Eu(l, r))
    }
    pub fn ew(l: Formula, r: Formula) -> Formula {
        Formula::mk(Kind::Ew(l, r))
    }
    pub fn ax(x: Formula) -> Formula {
        Formula::mk(Kind::Ax(x))
    }
    pub fn ex(x: Formula) -> Formula {
        Formula::mk(Kind::Ex(x))
    }
    pub fn ag(x: Formula) -> Formula {
        Formula::mk(Kind::Ag(x))
    }
    pub fn af(x: Formula) -> Formula {
        Formula::mk(Kind::Af(x))
    }
    pub fn eg(x: Formula) -> Formula {
        Formula::mk(Kind::Eg(x))
    }
    pub fn ef(x: Formula) -> Formula {
        Formula::mk(Kind::Ef(x))
    }
    pub fn hole() -> Formula {
        Formula::mk(Kind::Hole)
    }
    pub fn apply(c: impl Into<CtxVar>, arg: Formula) -> Formula {
        Formula::mk(Kind::Apply(c.into(), arg))
    }

    /// Conjunction with true/false absorption; `true` for an empty iterator.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut acc: Option<Formula> = None;
        for x in items {
            if let Kind::True = x.kind() {
                continue;
            }
            if let Kind::False = x.kind() {
                return Formula::f();
            }
            acc = Some(match acc {
                None => x,
                Some(a) => Formula::and(a, x),
            });
        }
        acc.unwrap_or_else(Formula::t)
    }

    /// Implication with constant folding on the already-built operands.
    pub fn implies_fold(l: Formula, r: Formula) -> Formula {
        match (l.kind(), r.kind()) {
            (Kind::True, _) => r,
            (Kind::False, _) => Formula::t(),
            (_, Kind::True) => Formula::t(),
            _ if l == r => Formula::t(),
            _ => Formula::implies(l, r),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self.kind(), Kind::True)
    }
    pub fn is_false(&self) -> bool {
        matches!(self.kind(), Kind::False)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.node, &other.node) {
            return true;
        }
        self.node.hash == other.node.hash && self.node.kind == other.node.kind
    }
}
impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.node.hash);
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn children_of(kind: &Kind) -> Vec<&Formula> {
    use Kind::*;
    match kind {
        True | False | Atom(_) | NegAtom(_) | Var(_) | Hole => vec![],
        Not(x) | Diamond(x) | Boxm(x) | Next(x) | Globally(x) | Finally(x) | Ax(x) | Ex(x)
        | Ag(x) | Af(x) | Eg(x) | Ef(x) => vec![x],
        Mu(_, x) | Nu(_, x) | Apply(_, x) => vec![x],
        And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r) | Until(l, r) | WeakUntil(l, r)
        | Au(l, r) | Aw(l, r) | Eu(l, r) | Ew(l, r) => vec![l, r],
    }
}

impl Formula {
    pub fn children(&self) -> Vec<&Formula> {
        children_of(self.kind())
    }

    /// Rebuild this node with new children (same kind, same order).
    pub fn with_children(&self, mut cs: Vec<Formula>) -> Formula {
        use Kind::*;
        let mut next = || cs.remove(0);
        match self.kind() {
            True | False | Atom(_) | NegAtom(_) | Var(_) | Hole => self.clone(),
            Not(_) => Formula::not(next()),
            Diamond(_) => Formula::diamond(next()),
            Boxm(_) => Formula::boxm(next()),
            Next(_) => Formula::next(next()),
            Globally(_) => Formula::globally(next()),
            Finally(_) => Formula::finally(next()),
            Ax(_) => Formula::ax(next()),
            Ex(_) => Formula::ex(next()),
            Ag(_) => Formula::ag(next()),
            Af(_) => Formula::af(next()),
            Eg(_) => Formula::eg(next()),
            Ef(_) => Formula::ef(next()),
            Mu(v, _) => Formula::mu(v.clone(), next()),
            Nu(v, _) => Formula::nu(v.clone(), next()),
            Apply(c, _) => Formula::apply(c.clone(), next()),
            And(..) => Formula::and(next(), next()),
            Or(..) => Formula::or(next(), next()),
            Implies(..) => Formula::implies(next(), next()),
            Iff(..) => Formula::iff(next(), next()),
            Until(..) => Formula::until(next(), next()),
            WeakUntil(..) => Formula::weak_until(next(), next()),
            Au(..) => Formula::au(next(), next()),
            Aw(..) => Formula::aw(next(), next()),
            Eu(..) => Formula::eu(next(), next()),
            Ew(..) => Formula::ew(next(), next()),
        }
    }

    /// Preorder traversal of the syntax tree (shared subtrees visited once
    /// per occurrence is avoided by the `memo` guard: each distinct subtree
    /// is visited once).
    pub fn for_each_unique(&self, f: &mut impl FnMut(&Formula)) {
        let mut seen: HashSet<*const FNode> = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(x) = stack.pop() {
            if !seen.insert(x.ptr()) {
                continue;
            }
            f(&x);
            for c in x.children() {
                stack.push(c.clone());
            }
        }
    }

    /// Number of syntax-tree nodes. A binder `mu X. phi` counts 2 (operator
    /// plus variable) and a context application `c[phi]` counts 2 (variable
    /// plus application); every other node counts 1. Computed on the shared
    /// DAG, so it is cheap even for reduction outputs whose unshared tree
    /// would be huge. Saturates at `u64::MAX`.
    pub fn size(&self) -> u64 {
        let mut memo: HashMap<*const FNode, u64> = HashMap::new();
        self.size_memo(&mut memo)
    }

    fn size_memo(&self, memo: &mut HashMap<*const FNode, u64>) -> u64 {
        if let Some(v) = memo.get(&self.ptr()) {
            return *v;
        }
        let own: u64 = match self.kind() {
            Kind::Mu(..) | Kind::Nu(..) | Kind::Apply(..) => 2,
            _ => 1,
        };
        let mut total = own;
        for c in self.children() {
            total = total.saturating_add(c.size_memo(memo));
        }
        memo.insert(self.ptr(), total);
        total
    }

    /// Number of hole occurrences, counted on the tree (DAG-memoized).
    pub fn hole_count(&self) -> u64 {
        let mut memo: HashMap<*const FNode, u64> = HashMap::new();
        fn go(x: &Formula, memo: &mut HashMap<*const FNode, u64>) -> u64 {
            if let Some(v) = memo.get(&x.ptr()) {
                return *v;
            }
            let v = if matches!(x.kind(), Kind::Hole) {
                1
            } else {
                x.children().iter().map(|c| go(c, memo)).sum()
            };
            memo.insert(x.ptr(), v);
            v
        }
        go(self, &mut memo)
    }

    pub fn has_hole(&self) -> bool {
        self.hole_count() > 0
    }

    pub fn has_apply(&self) -> bool {
        let mut found = false;
        self.for_each_unique(&mut |x| {
            if matches!(x.kind(), Kind::Apply(..)) {
                found = true;
            }
        });
        found
    }

    pub fn has_query_nodes(&self) -> bool {
        let mut found = false;
        self.for_each_unique(&mut |x| {
            if matches!(x.kind(), Kind::Not(_) | Kind::Implies(..) | Kind::Iff(..)) {
                found = true;
            }
        });
        found
    }

    /// All atoms, sorted by name.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.for_each_unique(&mut |x| match x.kind() {
            Kind::Atom(a) | Kind::NegAtom(a) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    /// Context variables in preorder of first occurrence.
    pub fn ctx_vars(&self) -> Vec<CtxVar> {
        let mut out: Vec<CtxVar> = Vec::new();
        fn go(x: &Formula, out: &mut Vec<CtxVar>) {
            if let Kind::Apply(c, _) = x.kind() {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
            for ch in x.children() {
                go(ch, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// All variable names occurring anywhere (free, bound or as binders).
    pub fn all_var_names(&self) -> HashSet<Var> {
        let mut out = HashSet::new();
        self.for_each_unique(&mut |x| match x.kind() {
            Kind::Var(v) => {
                out.insert(v.clone());
            }
            Kind::Mu(v, _) | Kind::Nu(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }
}

/// Fill every hole of `ctx` with `arg`; all other structure is preserved.
/// Context applications inside `ctx` are left alone (contexts contain holes,
/// not applications, but the reduction composes contexts bottom-up so filled
/// arguments may contain anything).
pub fn fill(ctx: &Formula, arg: &Formula) -> Formula {
    let mut memo: HashMap<*const FNode, Formula> = HashMap::new();
    fn go(x: &Formula, arg: &Formula, memo: &mut HashMap<*const FNode, Formula>) -> Formula {
        if let Some(v) = memo.get(&x.ptr()) {
            return v.clone();
        }
        let out = match x.kind() {
            Kind::Hole => arg.clone(),
            _ => {
                let cs: Vec<Formula> = x.children().iter().map(|c| go(c, arg, memo)).collect();
                if cs.iter().zip(x.children()).all(|(a, b)| a.ptr() == b.ptr()) {
                    x.clone()
                } else {
                    x.with_children(cs)
                }
            }
        };
        memo.insert(x.ptr(), out.clone());
        out
    }
    go(ctx, arg, &mut memo)
}

/// A finite binding of context variables to contexts (Kripke-style
/// instantiation). Total on the context variables of the formula it is
/// applied to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Instantiation {
    bindings: BTreeMap<CtxVar, Formula>,
}

impl Instantiation {
    pub fn new() -> Self {
        Instantiation::default()
    }

    pub fn bind(&mut self, c: impl Into<CtxVar>, ctx: Formula) -> &mut Self {
        self.bindings.insert(c.into(), ctx);
        self
    }

    pub fn get(&self, c: &CtxVar) -> Option<&Formula> {
        self.bindings.get(c)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CtxVar, &Formula)> {
        self.bindings.iter()
    }

    /// Apply the instantiation bottom-up: `c[psi]` becomes the context bound
    /// to `c` with every hole filled by the instantiated `psi`; every other
    /// node is mapped homomorphically.
    pub fn instantiate(&self, phi: &Formula) -> Result<Formula> {
        let mut memo: HashMap<*const FNode, Formula> = HashMap::new();
        self.inst_memo(phi, &mut memo)
    }

    fn inst_memo(
        &self,
        x: &Formula,
        memo: &mut HashMap<*const FNode, Formula>,
    ) -> Result<Formula> {
        if let Some(v) = memo.get(&x.ptr()) {
            return Ok(v.clone());
        }
        let out = match x.kind() {
            Kind::Apply(c, arg) => {
                let ctx = self
                    .bindings
                    .get(c)
                    .ok_or_else(|| Error::UnboundContextVariable(c.as_str().into()))?;
                let arg = self.inst_memo(arg, memo)?;
                fill(ctx, &arg)
            }
            _ => {
                let mut cs = Vec::new();
                for c in x.children() {
                    cs.push(self.inst_memo(c, memo)?);
                }
                if cs.iter().zip(x.children()).all(|(a, b)| a.ptr() == b.ptr()) {
                    x.clone()
                } else {
                    x.with_children(cs)
                }
            }
        };
        memo.insert(x.ptr(), out.clone());
        Ok(out)
    }
}

/// Free mu-calculus variables: variables not under a binder for them.
/// Context applications do not bind across the hole boundary, so the free
/// variables of `c[psi]` are those of `psi`.
pub fn free_vars(phi: &Formula) -> BTreeSet<Var> {
    fn go(x: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match x.kind() {
            Kind::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Kind::Mu(v, b) | Kind::Nu(v, b) => {
                bound.push(v.clone());
                go(b, bound, out);
                bound.pop();
            }
            _ => {
                for c in x.children() {
                    go(c, bound, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(phi, &mut Vec::new(), &mut out);
    out
}

/// Capture-avoiding substitution of free variables. Values are expected to
/// be closed (the only use is the fixpoint substitution); bound occurrences
/// are never replaced.
pub fn subst_vars(phi: &Formula, map: &BTreeMap<Var, Formula>) -> Formula {
    fn go(x: &Formula, map: &BTreeMap<Var, Formula>, shadow: &mut Vec<Var>) -> Formula {
        match x.kind() {
            Kind::Var(v) => {
                if !shadow.contains(v) {
                    if let Some(val) = map.get(v) {
                        return val.clone();
                    }
                }
                x.clone()
            }
            Kind::Mu(v, b) | Kind::Nu(v, b) => {
                shadow.push(v.clone());
                let nb = go(b, map, shadow);
                shadow.pop();
                match x.kind() {
                    Kind::Mu(..) => Formula::mu(v.clone(), nb),
                    _ => Formula::nu(v.clone(), nb),
                }
            }
            _ => {
                let cs: Vec<Formula> = x.children().iter().map(|c| go(c, map, shadow)).collect();
                x.with_children(cs)
            }
        }
    }
    go(phi, map, &mut Vec::new())
}

/// Rename binders so that every variable is bound by at most one fixpoint
/// operator and no variable occurs both bound and free. Deterministic:
/// left-to-right traversal, clashing binders get the first unused suffixed
/// name (`X` becomes `X1`, `X2`, ...).
pub fn rename_apart(phi: &Formula) -> Formula {
    let free: BTreeSet<Var> = free_vars(phi);
    let mut used: HashSet<Var> = phi.all_var_names();
    let mut seen: HashSet<Var> = HashSet::new();

    fn fresh(base: &Var, used: &mut HashSet<Var>) -> Var {
        let mut k = 1u32;
        loop {
            let cand = Var::new(format!("{}{}", base.as_str(), k));
            if !used.contains(&cand) {
                used.insert(cand.clone());
                return cand;
            }
            k += 1;
        }
    }

    fn go(
        x: &Formula,
        env: &mut Vec<(Var, Var)>,
        free: &BTreeSet<Var>,
        used: &mut HashSet<Var>,
        seen: &mut HashSet<Var>,
    ) -> Formula {
        match x.kind() {
            Kind::Var(v) => {
                for (from, to) in env.iter().rev() {
                    if from == v {
                        return Formula::var(to.clone());
                    }
                }
                x.clone()
            }
            Kind::Mu(v, b) | Kind::Nu(v, b) => {
                let clash = seen.contains(v) || free.contains(v);
                let name = if clash { fresh(v, used) } else { v.clone() };
                seen.insert(name.clone());
                env.push((v.clone(), name.clone()));
                let nb = go(b, env, free, used, seen);
                env.pop();
                match x.kind() {
                    Kind::Mu(..) => Formula::mu(name, nb),
                    _ => Formula::nu(name, nb),
                }
            }
            _ => {
                let cs: Vec<Formula> = x
                    .children()
                    .iter()
                    .map(|c| go(c, env, free, used, seen))
                    .collect();
                x.with_children(cs)
            }
        }
    }

    go(phi, &mut Vec::new(), &free, &mut used, &mut seen)
}

/// The unique fixpoint subformula binding `x` in a renamed-apart formula.
pub fn binder_of(phi: &Formula, x: &Var) -> Result<Formula> {
    fn go(f: &Formula, x: &Var) -> Option<Formula> {
        match f.kind() {
            Kind::Mu(v, _) | Kind::Nu(v, _) if v == x => Some(f.clone()),
            _ => f.children().iter().find_map(|c| go(c, x)),
        }
    }
    go(phi, x).ok_or_else(|| Error::NotBound(x.as_str().into()))
}

/// Binders of `phi` in preorder. Preorder is a valid "ascending" order for
/// the fixpoint-substitution and fixpoint-valuation constructions: a binder
/// whose variable occurs free in another binder's subformula always encloses
/// it, hence precedes it in preorder.
pub fn binders_preorder(phi: &Formula) -> Vec<(Var, Formula)> {
    let mut out = Vec::new();
    fn go(x: &Formula, out: &mut Vec<(Var, Formula)>) {
        if let Kind::Mu(v, _) | Kind::Nu(v, _) = x.kind() {
            out.push((v.clone(), x.clone()));
        }
        for c in x.children() {
            go(c, out);
        }
    }
    go(phi, &mut out);
    out
}

/// Negation normal form. Pushes `!`, `->`, `<->` down to atoms using the
/// standard dualities; `G`/`F` and their CTL variants stay first-class.
/// In monotonic mode a hole or context application under an odd number of
/// negations is an error; in non-monotonic mode the negation is kept on the
/// application (contexts are opaque).
pub fn to_nnf(phi: &Formula, mode: Mode) -> Result<Formula> {
    fn pos(x: &Formula, mode: Mode, dual: &mut Vec<Var>) -> Result<Formula> {
        Ok(match x.kind() {
            Kind::Not(a) => neg(a, mode, dual)?,
            Kind::Implies(l, r) => Formula::or(neg(l, mode, dual)?, pos(r, mode, dual)?),
            Kind::Iff(l, r) => {
                let a = Formula::or(neg(l, mode, dual)?, pos(r, mode, dual)?);
                let b = Formula::or(neg(r, mode, dual)?, pos(l, mode, dual)?);
                Formula::and(a, b)
            }
            Kind::Mu(v, b) => {
                let nb = pos(b, mode, dual)?;
                Formula::mu(v.clone(), nb)
            }
            Kind::Nu(v, b) => {
                let nb = pos(b, mode, dual)?;
                Formula::nu(v.clone(), nb)
            }
            _ => {
                let mut cs = Vec::new();
                for c in x.children() {
                    cs.push(pos(c, mode, dual)?);
                }
                x.with_children(cs)
            }
        })
    }

    fn neg(x: &Formula, mode: Mode, dual: &mut Vec<Var>) -> Result<Formula> {
        Ok(match x.kind() {
            Kind::True => Formula::f(),
            Kind::False => Formula::t(),
            Kind::Atom(a) => Formula::neg_atom(a.clone()),
            Kind::NegAtom(a) => Formula::atom(a.clone()),
            // Dualized fixpoint variables stay positive; a negated variable
            // bound outside the negation scope has no NNF.
            Kind::Var(v) => {
                if dual.contains(v) {
                    Formula::var(v.clone())
                } else {
                    return Err(Error::NonMonotonicFixpoint(v.as_str().into()));
                }
            }
            Kind::Not(a) => pos(a, mode, dual)?,
            Kind::And(l, r) => Formula::or(neg(l, mode, dual)?, neg(r, mode, dual)?),
            Kind::Or(l, r) => Formula::and(neg(l, mode, dual)?, neg(r, mode, dual)?),
            Kind::Implies(l, r) => Formula::and(pos(l, mode, dual)?, neg(r, mode, dual)?),
            Kind::Iff(l, r) => {
                let a = Formula::and(pos(l, mode, dual)?, neg(r, mode, dual)?);
                let b = Formula::and(pos(r, mode, dual)?, neg(l, mode, dual)?);
                Formula::or(a, b)
            }
            Kind::Next(a) => Formula::next(neg(a, mode, dual)?),
            Kind::Until(l, r) => {
                let nl = neg(l, mode, dual)?;
                let nr = neg(r, mode, dual)?;
                Formula::weak_until(nr.clone(), Formula::and(nl, nr))
            }
            Kind::WeakUntil(l, r) => {
                let nl = neg(l, mode, dual)?;
                let nr = neg(r, mode, dual)?;
                Formula::until(nr.clone(), Formula::and(nl, nr))
            }
            Kind::Globally(a) => Formula::finally(neg(a, mode, dual)?),
            Kind::Finally(a) => Formula::globally(neg(a, mode, dual)?),
            Kind::Au(l, r) => {
                let nl = neg(l, mode, dual)?;
                let nr = neg(r, mode, dual)?;
                Formula::ew(nr.clone(), Formula::and(nl, nr))
            }
            Kind::Aw(l, r) => {
                let nl = neg(l, mode, dual)?;
                let nr = neg(r, mode, dual)?;
                Formula::eu(nr.clone(), Formula::and(nl, nr))
            }
            Kind::Eu(l, r) => {
                let nl = neg(l, mode, dual)?;
                let nr = neg(r, mode, dual)?;
                Formula::aw(nr.clone(), Formula::and(nl, nr))
            }
            Kind::Ew(l, r) => {
                let nl = neg(l, mode, dual)?;
                let nr = neg(r, mode, dual)?;
                Formula::au(nr.clone(), Formula::and(nl, nr))
            }
            Kind::Ax(a) => Formula::ex(neg(a, mode, dual)?),
            Kind::Ex(a) => Formula::ax(neg(a, mode, dual)?),
            Kind::Ag(a) => Formula::ef(neg(a, mode, dual)?),
            Kind::Ef(a) => Formula::ag(neg(a, mode, dual)?),
            Kind::Af(a) => Formula::eg(neg(a, mode, dual)?),
            Kind::Eg(a) => Formula::af(neg(a, mode, dual)?),
            Kind::Diamond(a) => Formula::boxm(neg(a, mode, dual)?),
            Kind::Boxm(a) => Formula::diamond(neg(a, mode, dual)?),
            Kind::Mu(v, b) => {
                dual.push(v.clone());
                let nb = neg(b, mode, dual)?;
                dual.pop();
                Formula::nu(v.clone(), nb)
            }
            Kind::Nu(v, b) => {
                dual.push(v.clone());
                let nb = neg(b, mode, dual)?;
                dual.pop();
                Formula::mu(v.clone(), nb)
            }
            Kind::Hole => match mode {
                Mode::Monotonic => return Err(Error::NonMonotonicHole),
                Mode::NonMonotonic => Formula::not(Formula::hole()),
            },
            Kind::Apply(c, arg) => match mode {
                Mode::Monotonic => return Err(Error::NonMonotonicHole),
                Mode::NonMonotonic => {
                    Formula::not(Formula::apply(c.clone(), pos(arg, mode, dual)?))
                }
            },
        })
    }

    pos(phi, mode, &mut Vec::new())
}

/// True when the formula is in core NNF: no `->`/`<->` anywhere and `!` only
/// as part of a negated atom (in non-monotonic mode also directly on a hole
/// or context application).
pub fn is_nnf_core(phi: &Formula, mode: Mode) -> bool {
    let mut ok = true;
    phi.for_each_unique(&mut |x| match x.kind() {
        Kind::Implies(..) | Kind::Iff(..) => ok = false,
        Kind::Not(inner) => {
            let allowed = matches!(inner.kind(), Kind::Hole | Kind::Apply(..))
                && mode == Mode::NonMonotonic;
            if !allowed {
                ok = false;
            }
        }
        _ => {}
    });
    ok
}

/// Per-logic well-formedness. `allow_query` admits `!`, `->`, `<->` nodes;
/// `allow_context` admits holes and context applications.
pub fn validate(phi: &Formula, logic: Logic, allow_query: bool, allow_context: bool) -> Result<()> {
    fn bad(op: &str, logic: Logic) -> Error {
        Error::Logic {
            span: crate::error::SourceSpan::new(0, 0, 0, 0),
            op: op.into(),
            logic: logic.name().into(),
        }
    }

    let mut err: Option<Error> = None;
    phi.for_each_unique(&mut |x| {
        if err.is_some() {
            return;
        }
        let kind = x.kind();
        let name = op_name(kind);
        let ok = match kind {
            Kind::True | Kind::False | Kind::Atom(_) | Kind::NegAtom(_) | Kind::And(..)
            | Kind::Or(..) => true,
            Kind::Not(_) | Kind::Implies(..) | Kind::Iff(..) => allow_query,
            Kind::Hole | Kind::Apply(..) => allow_context,
            Kind::Next(_) | Kind::Until(..) | Kind::WeakUntil(..) | Kind::Globally(_)
            | Kind::Finally(_) => logic == Logic::Ltl,
            Kind::Au(..) | Kind::Aw(..) | Kind::Eu(..) | Kind::Ew(..) | Kind::Ax(_)
            | Kind::Ex(_) | Kind::Ag(_) | Kind::Af(_) | Kind::Eg(_) | Kind::Ef(_) => {
                logic == Logic::Ctl
            }
            Kind::Var(_) | Kind::Mu(..) | Kind::Nu(..) | Kind::Diamond(_) | Kind::Boxm(_) => {
                logic == Logic::Mu
            }
        };
        if !ok {
            err = Some(bad(name, logic));
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn op_name(kind: &Kind) -> &'static str {
    use Kind::*;
    match kind {
        True => "true",
        False => "false",
        Atom(_) => "atom",
        NegAtom(_) => "!atom",
        Var(_) => "variable",
        And(..) => "&",
        Or(..) => "|",
        Not(_) => "!",
        Implies(..) => "->",
        Iff(..) => "<->",
        Diamond(_) => "<.>",
        Boxm(_) => "[.]",
        Mu(..) => "mu",
        Nu(..) => "nu",
        Next(_) => "X",
        Until(..) => "U",
        WeakUntil(..) => "W",
        Globally(_) => "G",
        Finally(_) => "F",
        Au(..) => "A(U)",
        Aw(..) => "A(W)",
        Eu(..) => "E(U)",
        Ew(..) => "E(W)",
        Ax(_) => "AX",
        Ex(_) => "EX",
        Ag(_) => "AG",
        Af(_) => "AF",
        Eg(_) => "EG",
        Ef(_) => "EF",
        Hole => "@hole",
        Apply(..) => "c[..]",
    }
}

/// Infer the logic from the operators present. `Ok(None)` means purely
/// propositional (ambiguous); an error means operators of several logics are
/// mixed.
pub fn infer_logic(phi: &Formula) -> Result<Option<Logic>> {
    let mut ltl = false;
    let mut ctl = false;
    let mut mu = false;
    phi.for_each_unique(&mut |x| match x.kind() {
        Kind::Next(_) | Kind::Until(..) | Kind::WeakUntil(..) | Kind::Globally(_)
        | Kind::Finally(_) => ltl = true,
        Kind::Au(..) | Kind::Aw(..) | Kind::Eu(..) | Kind::Ew(..) | Kind::Ax(_) | Kind::Ex(_)
        | Kind::Ag(_) | Kind::Af(_) | Kind::Eg(_) | Kind::Ef(_) => ctl = true,
        Kind::Var(_) | Kind::Mu(..) | Kind::Nu(..) | Kind::Diamond(_) | Kind::Boxm(_) => mu = true,
        _ => {}
    });
    match (ltl, ctl, mu) {
        (false, false, false) => Ok(None),
        (true, false, false) => Ok(Some(Logic::Ltl)),
        (false, true, false) => Ok(Some(Logic::Ctl)),
        (false, false, true) => Ok(Some(Logic::Mu)),
        _ => Err(Error::LogicMismatch),
    }
}

/// Checks that every hole and context application occurs under an even
/// number of negations. The top-level query connectives introduced by
/// `build_query` are not negations for this purpose: `<->` is handled by the
/// reductions homomorphically.
pub fn holes_positive(phi: &Formula) -> bool {
    fn go(x: &Formula, negated: bool) -> bool {
        match x.kind() {
            Kind::Hole | Kind::Apply(..) => {
                if negated {
                    return false;
                }
                x.children().iter().all(|c| go(c, false))
            }
            Kind::Not(a) => go(a, !negated),
            Kind::Implies(l, r) => go(l, !negated) && go(r, negated),
            Kind::Iff(l, r) => {
                // Both polarities.
                go(l, true) && go(l, false) && go(r, true) && go(r, false)
            }
            _ => x.children().iter().all(|c| go(c, negated)),
        }
    }
    go(phi, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn fill_examples() {
        // fill(G ., p) = G p
        let ctx = Formula::globally(Formula::hole());
        assert_eq!(fill(&ctx, &p()), Formula::globally(p()));
        // fill(., phi) = phi
        assert_eq!(fill(&Formula::hole(), &q()), q());
        // fill((. & p) | (q -> .), p) = (p & p) | (q -> p)
        let ctx = Formula::or(
            Formula::and(Formula::hole(), p()),
            Formula::implies(q(), Formula::hole()),
        );
        let want = Formula::or(Formula::and(p(), p()), Formula::implies(q(), p()));
        assert_eq!(fill(&ctx, &p()), want);
        // empty-hole context is unchanged
        assert_eq!(fill(&p(), &q()), p());
    }

    #[test]
    fn instantiate_paper_example() {
        // sigma(c1) = G ., sigma(c2) = (. & q)
        // phi = p U c1[(p | c1[q]) W c2[!p | q]]
        // sigma(phi) = p U G((p | G q) W ((!p | q) & q))
        let mut sigma = Instantiation::new();
        sigma.bind("c1", Formula::globally(Formula::hole()));
        sigma.bind("c2", Formula::and(Formula::hole(), q()));
        let inner = Formula::weak_until(
            Formula::or(p(), Formula::apply("c1", q())),
            Formula::apply("c2", Formula::or(Formula::neg_atom("p"), q())),
        );
        let phi = Formula::until(p(), Formula::apply("c1", inner));
        let want = Formula::until(
            p(),
            Formula::globally(Formula::weak_until(
                Formula::or(p(), Formula::globally(q())),
                Formula::and(Formula::or(Formula::neg_atom("p"), q()), q()),
            )),
        );
        assert_eq!(sigma.instantiate(&phi).unwrap(), want);
    }

    #[test]
    fn instantiate_no_contexts_is_identity() {
        let sigma = Instantiation::new();
        let phi = Formula::and(p(), Formula::until(q(), p()));
        assert_eq!(sigma.instantiate(&phi).unwrap(), phi);
    }

    #[test]
    fn instantiate_constant_context() {
        let mut sigma = Instantiation::new();
        sigma.bind("c", Formula::f());
        let phi = Formula::apply("c", p());
        assert_eq!(sigma.instantiate(&phi).unwrap(), Formula::f());
    }

    #[test]
    fn instantiate_unbound_errors() {
        let sigma = Instantiation::new();
        let phi = Formula::apply("c", p());
        assert!(matches!(
            sigma.instantiate(&phi),
            Err(Error::UnboundContextVariable(_))
        ));
    }

    #[test]
    fn free_vars_examples() {
        // mu X. <.> X is closed
        let phi = Formula::mu("X", Formula::diamond(Formula::var("X")));
        assert!(free_vars(&phi).is_empty());
        // c[X] with X unbound -> {X}
        let phi = Formula::apply("c", Formula::var("X"));
        assert_eq!(
            free_vars(&phi),
            [Var::new("X")].into_iter().collect::<BTreeSet<_>>()
        );
        // mu X. (X & Y) -> {Y}
        let phi = Formula::mu("X", Formula::and(Formula::var("X"), Formula::var("Y")));
        assert_eq!(
            free_vars(&phi),
            [Var::new("Y")].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn rename_apart_examples() {
        // mu X.(<.>X | mu X.[.]X) -> mu X.(<.>X | mu X1.[.]X1)
        let inner = Formula::mu("X", Formula::boxm(Formula::var("X")));
        let phi = Formula::mu(
            "X",
            Formula::or(Formula::diamond(Formula::var("X")), inner),
        );
        let want = Formula::mu(
            "X",
            Formula::or(
                Formula::diamond(Formula::var("X")),
                Formula::mu("X1", Formula::boxm(Formula::var("X1"))),
            ),
        );
        assert_eq!(rename_apart(&phi), want);

        // already apart -> unchanged
        let phi = Formula::mu("X", Formula::or(Formula::var("X"), Formula::nu("Y", p())));
        assert_eq!(rename_apart(&phi), phi);

        // mu X.X & nu X.X -> mu X.X & nu X1.X1
        let phi = Formula::and(
            Formula::mu("X", Formula::var("X")),
            Formula::nu("X", Formula::var("X")),
        );
        let want = Formula::and(
            Formula::mu("X", Formula::var("X")),
            Formula::nu("X1", Formula::var("X1")),
        );
        assert_eq!(rename_apart(&phi), want);
    }

    #[test]
    fn rename_apart_avoids_free_names() {
        // X free and X bound elsewhere: the binder must move away from X.
        let phi = Formula::and(
            Formula::var("X"),
            Formula::mu("X", Formula::var("X")),
        );
        let renamed = rename_apart(&phi);
        let want = Formula::and(
            Formula::var("X"),
            Formula::mu("X1", Formula::var("X1")),
        );
        assert_eq!(renamed, want);
    }

    #[test]
    fn binder_of_examples() {
        let phi = Formula::mu("X", Formula::diamond(Formula::var("X")));
        assert_eq!(binder_of(&phi, &Var::new("X")).unwrap(), phi);

        let inner = Formula::mu("X", Formula::or(Formula::var("Y"), Formula::var("X")));
        let phi = Formula::nu("Y", Formula::and(p(), inner.clone()));
        assert_eq!(binder_of(&phi, &Var::new("X")).unwrap(), inner);

        let phi = Formula::and(p(), q());
        assert!(matches!(
            binder_of(&phi, &Var::new("X")),
            Err(Error::NotBound(_))
        ));
    }

    #[test]
    fn nnf_until_duality() {
        // !(p U q) -> !q W (!p & !q)
        let phi = Formula::not(Formula::until(p(), q()));
        let np = Formula::neg_atom("p");
        let nq = Formula::neg_atom("q");
        let want = Formula::weak_until(nq.clone(), Formula::and(np, nq));
        assert_eq!(to_nnf(&phi, Mode::Monotonic).unwrap(), want);
    }

    #[test]
    fn nnf_double_negation() {
        let phi = Formula::not(Formula::not(p()));
        assert_eq!(to_nnf(&phi, Mode::Monotonic).unwrap(), p());
    }

    #[test]
    fn nnf_gf_duality() {
        // !(p & GF q) -> !p | FG !q
        let phi = Formula::not(Formula::and(
            p(),
            Formula::globally(Formula::finally(q())),
        ));
        let want = Formula::or(
            Formula::neg_atom("p"),
            Formula::finally(Formula::globally(Formula::neg_atom("q"))),
        );
        assert_eq!(to_nnf(&phi, Mode::Monotonic).unwrap(), want);
    }

    #[test]
    fn nnf_mu_dualization() {
        // !(mu X. p | <.>X) = nu X. !p & [.]X
        let phi = Formula::not(Formula::mu(
            "X",
            Formula::or(p(), Formula::diamond(Formula::var("X"))),
        ));
        let want = Formula::nu(
            "X",
            Formula::and(Formula::neg_atom("p"), Formula::boxm(Formula::var("X"))),
        );
        assert_eq!(to_nnf(&phi, Mode::Monotonic).unwrap(), want);
    }

    #[test]
    fn nnf_rejects_negated_hole_in_monotonic_mode() {
        let phi = Formula::not(Formula::apply("c", p()));
        assert!(matches!(
            to_nnf(&phi, Mode::Monotonic),
            Err(Error::NonMonotonicHole)
        ));
        let kept = to_nnf(&phi, Mode::NonMonotonic).unwrap();
        assert_eq!(kept, Formula::not(Formula::apply("c", p())));
    }

    #[test]
    fn size_conventions() {
        assert_eq!(p().size(), 1);
        // c[q]: apply counts 2
        assert_eq!(Formula::apply("c", q()).size(), 3);
        // mu X. X: binder counts 2
        assert_eq!(Formula::mu("X", Formula::var("X")).size(), 3);
        assert_eq!(Formula::implies(p(), q()).size(), 3);
    }

    #[test]
    fn holes_positive_check() {
        let guard = Formula::implies(
            Formula::implies(Formula::hole(), p()),
            Formula::atom("r"),
        );
        // hole under two implication-lefts is positive
        assert!(holes_positive(&guard));
        assert!(!holes_positive(&Formula::not(Formula::hole())));
        assert!(!holes_positive(&Formula::implies(Formula::hole(), p())));
    }
}
