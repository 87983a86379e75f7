//! Finite Kripke structures, the mu-calculus fixpoint evaluator, fixpoint
//! valuations, the CTL-to-mu and lasso-LTL-to-mu translations, and direct
//! CTL/LTL evaluators used as cross-check oracles.

use crate::error::{Error, Result};
use crate::formula::{binders_preorder, Atom, Formula, Kind, Var};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

/// A set of states, as a bitset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateSet {
    blocks: Vec<u64>,
    n: usize,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet { blocks: vec![0; n.div_ceil(64)], n }
    }

    pub fn full(n: usize) -> Self {
        let mut s = StateSet { blocks: vec![!0u64; n.div_ceil(64)], n };
        s.mask_tail();
        s
    }

    fn mask_tail(&mut self) {
        if self.n % 64 != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << (self.n % 64)) - 1;
            }
        }
    }

    pub fn insert(&mut self, s: usize) {
        self.blocks[s / 64] |= 1 << (s % 64);
    }

    pub fn remove(&mut self, s: usize) {
        self.blocks[s / 64] &= !(1 << (s % 64));
    }

    pub fn contains(&self, s: usize) -> bool {
        self.blocks[s / 64] & (1 << (s % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|b| *b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a | b)
            .collect();
        StateSet { blocks, n: self.n }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a & b)
            .collect();
        StateSet { blocks, n: self.n }
    }

    pub fn complement(&self) -> Self {
        let mut s = StateSet {
            blocks: self.blocks.iter().map(|b| !b).collect(),
            n: self.n,
        };
        s.mask_tail();
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|s| self.contains(*s))
    }
}

/// Finite total transition system with initial states and labeling.
#[derive(Clone, Debug)]
pub struct KripkeStructure {
    pub atoms: Vec<Atom>,
    /// Per-state label bitmask over `atoms` (at most 64 atoms).
    pub labels: Vec<u64>,
    pub succs: Vec<Vec<u32>>,
    pub initial: Vec<u32>,
}

impl KripkeStructure {
    pub fn new(
        n: usize,
        edges: &[(u32, u32)],
        initial: &[u32],
        labels: &[&[&str]],
    ) -> Result<Self> {
        let mut atoms: Vec<Atom> = Vec::new();
        let mut masks = vec![0u64; n];
        for (s, atoms_of_s) in labels.iter().enumerate() {
            for a in *atoms_of_s {
                let atom = Atom::new(*a);
                let idx = match atoms.iter().position(|x| *x == atom) {
                    Some(i) => i,
                    None => {
                        atoms.push(atom);
                        atoms.len() - 1
                    }
                };
                if idx >= 64 {
                    return Err(Error::Unsupported("more than 64 atoms in a model".into()));
                }
                masks[s] |= 1 << idx;
            }
        }
        let mut succs = vec![Vec::new(); n];
        for (a, b) in edges {
            succs[*a as usize].push(*b);
        }
        let k = KripkeStructure {
            atoms,
            labels: masks,
            succs,
            initial: initial.to_vec(),
        };
        k.check_total()?;
        Ok(k)
    }

    pub fn n_states(&self) -> usize {
        self.labels.len()
    }

    pub fn check_total(&self) -> Result<()> {
        for (s, succ) in self.succs.iter().enumerate() {
            if succ.is_empty() {
                return Err(Error::ModelFormat {
                    line: 0,
                    msg: format!("state {s} has no successor (structures must be total)"),
                });
            }
        }
        Ok(())
    }

    pub fn atom_index(&self, a: &Atom) -> Option<usize> {
        self.atoms.iter().position(|x| x == a)
    }

    pub fn atom_set(&self, a: &Atom) -> StateSet {
        let n = self.n_states();
        let mut out = StateSet::empty(n);
        if let Some(idx) = self.atom_index(a) {
            for s in 0..n {
                if self.labels[s] & (1 << idx) != 0 {
                    out.insert(s);
                }
            }
        }
        out
    }

    pub fn has_atom(&self, s: usize, a: &Atom) -> bool {
        self.atom_index(a)
            .is_some_and(|i| self.labels[s] & (1 << i) != 0)
    }

    /// Existential predecessor: states with some successor in `t`.
    pub fn pre_exists(&self, t: &StateSet) -> StateSet {
        let n = self.n_states();
        let mut out = StateSet::empty(n);
        for s in 0..n {
            if self.succs[s].iter().any(|x| t.contains(*x as usize)) {
                out.insert(s);
            }
        }
        out
    }

    /// Universal predecessor: states with all successors in `t`.
    pub fn pre_forall(&self, t: &StateSet) -> StateSet {
        let n = self.n_states();
        let mut out = StateSet::empty(n);
        for s in 0..n {
            if self.succs[s].iter().all(|x| t.contains(*x as usize)) {
                out.insert(s);
            }
        }
        out
    }

    /// Extend with fresh atoms labeled by the given state sets; existing
    /// labels are preserved.
    pub fn extend_labels(&self, extra: &[(Atom, StateSet)]) -> Result<KripkeStructure> {
        let mut k = self.clone();
        for (atom, set) in extra {
            if k.atom_index(atom).is_some() {
                return Err(Error::Unsupported(format!(
                    "atom {atom} already labeled in the structure"
                )));
            }
            let idx = k.atoms.len();
            if idx >= 64 {
                return Err(Error::Unsupported("more than 64 atoms in a model".into()));
            }
            k.atoms.push(atom.clone());
            for s in set.iter() {
                k.labels[s] |= 1 << idx;
            }
        }
        Ok(k)
    }
}

/// `Gamma(U)`: the states of `U` from which only `U`-states are reachable.
/// `[[AG phi]] = Gamma([[phi]])`.
pub fn gamma(k: &KripkeStructure, u: &StateSet) -> StateSet {
    let mut v = u.clone();
    loop {
        let next = u.intersect(&k.pre_forall(&v));
        if next == v {
            return v;
        }
        v = next;
    }
}

pub type Valuation = BTreeMap<Var, StateSet>;

/// Fixpoint variables must occur positively inside their own binder for the
/// Knaster-Tarski iteration to be meaningful; query connectives make this
/// worth checking. Polarity is relative to the binder, so negations above
/// the whole fixpoint formula are fine.
fn check_positivity(phi: &Formula) -> Result<()> {
    fn local(x: &Formula, v: &Var, pos: bool, both: bool) -> Result<()> {
        match x.kind() {
            Kind::Var(w) => {
                if w == v && (!pos || both) {
                    return Err(Error::NonMonotonicFixpoint(v.as_str().into()));
                }
                Ok(())
            }
            Kind::Mu(w, _) | Kind::Nu(w, _) if w == v => Ok(()), // shadowed
            Kind::Not(a) => local(a, v, !pos, both),
            Kind::Implies(l, r) => {
                local(l, v, !pos, both)?;
                local(r, v, pos, both)
            }
            Kind::Iff(l, r) => {
                local(l, v, pos, true)?;
                local(r, v, pos, true)
            }
            _ => {
                for c in x.children() {
                    local(c, v, pos, both)?;
                }
                Ok(())
            }
        }
    }
    let mut err = None;
    phi.for_each_unique(&mut |x| {
        if err.is_some() {
            return;
        }
        if let Kind::Mu(v, b) | Kind::Nu(v, b) = x.kind() {
            if let Err(e) = local(b, v, true, false) {
                err = Some(e);
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Exact mu-calculus semantics by Knaster-Tarski iteration. Query
/// connectives are evaluated via set complement.
pub fn mc_eval(k: &KripkeStructure, eta: &Valuation, phi: &Formula) -> Result<StateSet> {
    check_positivity(phi)?;
    let mut env: Vec<(Var, StateSet)> = eta.iter().map(|(v, s)| (v.clone(), s.clone())).collect();
    eval_mu(k, &mut env, phi)
}

fn eval_mu(k: &KripkeStructure, env: &mut Vec<(Var, StateSet)>, phi: &Formula) -> Result<StateSet> {
    let n = k.n_states();
    Ok(match phi.kind() {
        Kind::True => StateSet::full(n),
        Kind::False => StateSet::empty(n),
        Kind::Atom(a) => k.atom_set(a),
        Kind::NegAtom(a) => k.atom_set(a).complement(),
        Kind::Var(v) => {
            let found = env.iter().rev().find(|(tv, _)| tv == v);
            match found {
                Some((_, s)) => s.clone(),
                None => return Err(Error::UnboundVariable(v.as_str().into())),
            }
        }
        Kind::And(l, r) => eval_mu(k, env, l)?.intersect(&eval_mu(k, env, r)?),
        Kind::Or(l, r) => eval_mu(k, env, l)?.union(&eval_mu(k, env, r)?),
        Kind::Not(x) => eval_mu(k, env, x)?.complement(),
        Kind::Implies(l, r) => eval_mu(k, env, l)?
            .complement()
            .union(&eval_mu(k, env, r)?),
        Kind::Iff(l, r) => {
            let a = eval_mu(k, env, l)?;
            let b = eval_mu(k, env, r)?;
            a.intersect(&b)
                .union(&a.complement().intersect(&b.complement()))
        }
        Kind::Diamond(x) => k.pre_exists(&eval_mu(k, env, x)?),
        Kind::Boxm(x) => k.pre_forall(&eval_mu(k, env, x)?),
        Kind::Mu(v, body) => {
            let mut cur = StateSet::empty(n);
            loop {
                env.push((v.clone(), cur.clone()));
                let next = eval_mu(k, env, body)?;
                env.pop();
                if next == cur {
                    break cur;
                }
                cur = next;
            }
        }
        Kind::Nu(v, body) => {
            let mut cur = StateSet::full(n);
            loop {
                env.push((v.clone(), cur.clone()));
                let next = eval_mu(k, env, body)?;
                env.pop();
                if next == cur {
                    break cur;
                }
                cur = next;
            }
        }
        other => {
            return Err(Error::Unsupported(format!(
                "mc_eval: operator `{}` is not mu-calculus",
                crate::formula::op_name(other)
            )))
        }
    })
}

/// `K` satisfies a closed formula when every initial state does.
pub fn satisfies(k: &KripkeStructure, phi: &Formula) -> Result<bool> {
    if k.initial.is_empty() {
        return Err(Error::ModelFormat {
            line: 0,
            msg: "satisfaction needs a nonempty set of initial states".into(),
        });
    }
    let set = mc_eval(k, &Valuation::new(), phi)?;
    Ok(k.initial.iter().all(|s| set.contains(*s as usize)))
}

/// The unique fixpoint valuation: `eta(X) = [[alpha X. phi_X]]_eta` for
/// every bound `X`, built in binder order (outermost first by default).
pub fn fixpoint_valuation(k: &KripkeStructure, phi: &Formula) -> Result<Valuation> {
    fixpoint_valuation_with_order(k, &binders_preorder(phi))
}

/// Same, but with an explicit linearization of the binders. Any order where
/// each binder's free variables come earlier gives the same valuation.
pub fn fixpoint_valuation_with_order(
    k: &KripkeStructure,
    binders: &[(Var, Formula)],
) -> Result<Valuation> {
    let mut eta = Valuation::new();
    for (v, binder) in binders {
        let val = mc_eval(k, &eta, binder)?;
        eta.insert(v.clone(), val);
    }
    Ok(eta)
}

// ---------------------------------------------------------------------------
// Translations into the mu-calculus.

struct FreshVars {
    counter: u32,
}

impl FreshVars {
    fn next(&mut self) -> Var {
        let v = Var::new(format!("Z{}", self.counter));
        self.counter += 1;
        v
    }
}

/// Syntax-guided CTL-to-mu translation. Context applications and holes are
/// translated homomorphically, so it applies to contextual formulas and
/// contexts too.
pub fn ctl_to_mu(phi: &Formula) -> Formula {
    let mut fresh = FreshVars { counter: 0 };
    tr_ctl(phi, &mut fresh)
}

fn tr_ctl(phi: &Formula, fresh: &mut FreshVars) -> Formula {
    use Formula as F;
    match phi.kind() {
        Kind::Au(a, b) => {
            let (ta, tb) = (tr_ctl(a, fresh), tr_ctl(b, fresh));
            let z = fresh.next();
            F::mu(z.clone(), F::or(F::and(F::boxm(F::var(z)), ta), tb))
        }
        Kind::Aw(a, b) => {
            let (ta, tb) = (tr_ctl(a, fresh), tr_ctl(b, fresh));
            let z = fresh.next();
            F::nu(z.clone(), F::or(F::and(F::boxm(F::var(z)), ta), tb))
        }
        Kind::Eu(a, b) => {
            let (ta, tb) = (tr_ctl(a, fresh), tr_ctl(b, fresh));
            let z = fresh.next();
            F::mu(z.clone(), F::or(F::and(F::diamond(F::var(z)), ta), tb))
        }
        Kind::Ew(a, b) => {
            let (ta, tb) = (tr_ctl(a, fresh), tr_ctl(b, fresh));
            let z = fresh.next();
            F::nu(z.clone(), F::or(F::and(F::diamond(F::var(z)), ta), tb))
        }
        Kind::Ax(a) => F::boxm(tr_ctl(a, fresh)),
        Kind::Ex(a) => F::diamond(tr_ctl(a, fresh)),
        Kind::Ag(a) => {
            let ta = tr_ctl(a, fresh);
            let z = fresh.next();
            F::nu(z.clone(), F::and(F::boxm(F::var(z)), ta))
        }
        Kind::Af(a) => {
            let ta = tr_ctl(a, fresh);
            let z = fresh.next();
            F::mu(z.clone(), F::or(F::boxm(F::var(z)), ta))
        }
        Kind::Eg(a) => {
            let ta = tr_ctl(a, fresh);
            let z = fresh.next();
            F::nu(z.clone(), F::and(F::diamond(F::var(z)), ta))
        }
        Kind::Ef(a) => {
            let ta = tr_ctl(a, fresh);
            let z = fresh.next();
            F::mu(z.clone(), F::or(F::diamond(F::var(z)), ta))
        }
        _ => {
            let cs: Vec<Formula> = phi.children().iter().map(|c| tr_ctl(c, fresh)).collect();
            phi.with_children(cs)
        }
    }
}

/// LTL-to-mu translation, sound on lassos only: `X`, `U`, `W`, `G`, `F` are
/// translated as `AX`, `AU`, `AW`, `AG`, `AF`.
pub fn ltl_to_mu_lasso(phi: &Formula) -> Formula {
    let mut fresh = FreshVars { counter: 0 };
    tr_ltl(phi, &mut fresh)
}

fn tr_ltl(phi: &Formula, fresh: &mut FreshVars) -> Formula {
    use Formula as F;
    match phi.kind() {
        Kind::Next(a) => F::boxm(tr_ltl(a, fresh)),
        Kind::Until(a, b) => {
            let (ta, tb) = (tr_ltl(a, fresh), tr_ltl(b, fresh));
            let z = fresh.next();
            F::mu(z.clone(), F::or(F::and(F::boxm(F::var(z)), ta), tb))
        }
        Kind::WeakUntil(a, b) => {
            let (ta, tb) = (tr_ltl(a, fresh), tr_ltl(b, fresh));
            let z = fresh.next();
            F::nu(z.clone(), F::or(F::and(F::boxm(F::var(z)), ta), tb))
        }
        Kind::Globally(a) => {
            let ta = tr_ltl(a, fresh);
            let z = fresh.next();
            F::nu(z.clone(), F::and(F::boxm(F::var(z)), ta))
        }
        Kind::Finally(a) => {
            let ta = tr_ltl(a, fresh);
            let z = fresh.next();
            F::mu(z.clone(), F::or(F::boxm(F::var(z)), ta))
        }
        _ => {
            let cs: Vec<Formula> = phi.children().iter().map(|c| tr_ltl(c, fresh)).collect();
            phi.with_children(cs)
        }
    }
}

// ---------------------------------------------------------------------------
// Direct evaluators (oracles).

/// Standard CTL labeling algorithm, independent of the mu translation.
pub fn eval_ctl_direct(k: &KripkeStructure, phi: &Formula) -> Result<StateSet> {
    let n = k.n_states();
    Ok(match phi.kind() {
        Kind::True => StateSet::full(n),
        Kind::False => StateSet::empty(n),
        Kind::Atom(a) => k.atom_set(a),
        Kind::NegAtom(a) => k.atom_set(a).complement(),
        Kind::And(l, r) => eval_ctl_direct(k, l)?.intersect(&eval_ctl_direct(k, r)?),
        Kind::Or(l, r) => eval_ctl_direct(k, l)?.union(&eval_ctl_direct(k, r)?),
        Kind::Not(x) => eval_ctl_direct(k, x)?.complement(),
        Kind::Implies(l, r) => eval_ctl_direct(k, l)?
            .complement()
            .union(&eval_ctl_direct(k, r)?),
        Kind::Iff(l, r) => {
            let a = eval_ctl_direct(k, l)?;
            let b = eval_ctl_direct(k, r)?;
            a.intersect(&b)
                .union(&a.complement().intersect(&b.complement()))
        }
        Kind::Ax(x) => k.pre_forall(&eval_ctl_direct(k, x)?),
        Kind::Ex(x) => k.pre_exists(&eval_ctl_direct(k, x)?),
        Kind::Au(a, b) => {
            let (sa, sb) = (eval_ctl_direct(k, a)?, eval_ctl_direct(k, b)?);
            lfp(n, |z| sb.union(&sa.intersect(&k.pre_forall(z))))
        }
        Kind::Aw(a, b) => {
            let (sa, sb) = (eval_ctl_direct(k, a)?, eval_ctl_direct(k, b)?);
            gfp(n, |z| sb.union(&sa.intersect(&k.pre_forall(z))))
        }
        Kind::Eu(a, b) => {
            let (sa, sb) = (eval_ctl_direct(k, a)?, eval_ctl_direct(k, b)?);
            lfp(n, |z| sb.union(&sa.intersect(&k.pre_exists(z))))
        }
        Kind::Ew(a, b) => {
            let (sa, sb) = (eval_ctl_direct(k, a)?, eval_ctl_direct(k, b)?);
            gfp(n, |z| sb.union(&sa.intersect(&k.pre_exists(z))))
        }
        Kind::Ag(x) => {
            let sx = eval_ctl_direct(k, x)?;
            gfp(n, |z| sx.intersect(&k.pre_forall(z)))
        }
        Kind::Af(x) => {
            let sx = eval_ctl_direct(k, x)?;
            lfp(n, |z| sx.union(&k.pre_forall(z)))
        }
        Kind::Eg(x) => {
            let sx = eval_ctl_direct(k, x)?;
            gfp(n, |z| sx.intersect(&k.pre_exists(z)))
        }
        Kind::Ef(x) => {
            let sx = eval_ctl_direct(k, x)?;
            lfp(n, |z| sx.union(&k.pre_exists(z)))
        }
        other => {
            return Err(Error::Unsupported(format!(
                "eval_ctl_direct: `{}` is not CTL",
                crate::formula::op_name(other)
            )))
        }
    })
}

fn lfp(n: usize, f: impl Fn(&StateSet) -> StateSet) -> StateSet {
    let mut cur = StateSet::empty(n);
    loop {
        let next = f(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn gfp(n: usize, f: impl Fn(&StateSet) -> StateSet) -> StateSet {
    let mut cur = StateSet::full(n);
    loop {
        let next = f(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

// ---------------------------------------------------------------------------
// Lassos.

/// A Kripke structure in which every state has exactly one successor: a
/// finite stem running into a nonempty cycle. Positions carry label masks
/// over `atoms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub atoms: Vec<Atom>,
    pub stem: Vec<u64>,
    pub cycle: Vec<u64>,
}

impl Lasso {
    pub fn new(atoms: Vec<Atom>, stem: Vec<u64>, cycle: Vec<u64>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::ModelFormat {
                line: 0,
                msg: "lasso cycle must be nonempty".into(),
            });
        }
        if atoms.len() > 64 {
            return Err(Error::Unsupported("more than 64 atoms in a model".into()));
        }
        Ok(Lasso { atoms, stem, cycle })
    }

    pub fn positions(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn label(&self, pos: usize) -> u64 {
        if pos < self.stem.len() {
            self.stem[pos]
        } else {
            self.cycle[pos - self.stem.len()]
        }
    }

    pub fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.stem.len()
        }
    }

    pub fn has_atom(&self, pos: usize, a: &Atom) -> bool {
        match self.atoms.iter().position(|x| x == a) {
            Some(i) => self.label(pos) & (1 << i) != 0,
            None => false,
        }
    }

    pub fn as_kripke(&self) -> KripkeStructure {
        let n = self.positions();
        let mut succs = vec![Vec::new(); n];
        for (p, succ) in succs.iter_mut().enumerate() {
            succ.push(self.next_pos(p) as u32);
        }
        KripkeStructure {
            atoms: self.atoms.clone(),
            labels: (0..n).map(|p| self.label(p)).collect(),
            succs,
            initial: vec![0],
        }
    }

    pub fn render(&self) -> String {
        let fmt_pos = |mask: u64| {
            let names: Vec<&str> = self
                .atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.as_str())
                .collect();
            format!("{{{}}}", names.join(","))
        };
        let stem: Vec<String> = self.stem.iter().map(|m| fmt_pos(*m)).collect();
        let cycle: Vec<String> = self.cycle.iter().map(|m| fmt_pos(*m)).collect();
        format!("stem [{}] cycle [{}]", stem.join(" "), cycle.join(" "))
    }
}

/// Truth of an LTL formula at every position of a lasso, bottom-up with
/// fixpoint passes over the finitely many positions.
pub fn eval_lasso_all(lasso: &Lasso, phi: &Formula) -> Result<Vec<bool>> {
    let mut memo: HashMap<Formula, Vec<bool>> = HashMap::new();
    fn go(
        lasso: &Lasso,
        phi: &Formula,
        memo: &mut HashMap<Formula, Vec<bool>>,
    ) -> Result<Vec<bool>> {
        if let Some(t) = memo.get(phi) {
            return Ok(t.clone());
        }
        let n = lasso.positions();
        let table = match phi.kind() {
            Kind::True => vec![true; n],
            Kind::False => vec![false; n],
            Kind::Atom(a) => (0..n).map(|p| lasso.has_atom(p, a)).collect(),
            Kind::NegAtom(a) => (0..n).map(|p| !lasso.has_atom(p, a)).collect(),
            Kind::And(l, r) => {
                let (a, b) = (go(lasso, l, memo)?, go(lasso, r, memo)?);
                (0..n).map(|p| a[p] && b[p]).collect()
            }
            Kind::Or(l, r) => {
                let (a, b) = (go(lasso, l, memo)?, go(lasso, r, memo)?);
                (0..n).map(|p| a[p] || b[p]).collect()
            }
            Kind::Not(x) => {
                let a = go(lasso, x, memo)?;
                (0..n).map(|p| !a[p]).collect()
            }
            Kind::Implies(l, r) => {
                let (a, b) = (go(lasso, l, memo)?, go(lasso, r, memo)?);
                (0..n).map(|p| !a[p] || b[p]).collect()
            }
            Kind::Iff(l, r) => {
                let (a, b) = (go(lasso, l, memo)?, go(lasso, r, memo)?);
                (0..n).map(|p| a[p] == b[p]).collect()
            }
            Kind::Next(x) => {
                let a = go(lasso, x, memo)?;
                (0..n).map(|p| a[lasso.next_pos(p)]).collect()
            }
            Kind::Until(l, r) => {
                let (a, b) = (go(lasso, l, memo)?, go(lasso, r, memo)?);
                fixpoint_table(lasso, false, |t, p| b[p] || (a[p] && t[lasso.next_pos(p)]))
            }
            Kind::WeakUntil(l, r) => {
                let (a, b) = (go(lasso, l, memo)?, go(lasso, r, memo)?);
                fixpoint_table(lasso, true, |t, p| b[p] || (a[p] && t[lasso.next_pos(p)]))
            }
            Kind::Globally(x) => {
                let a = go(lasso, x, memo)?;
                fixpoint_table(lasso, true, |t, p| a[p] && t[lasso.next_pos(p)])
            }
            Kind::Finally(x) => {
                let a = go(lasso, x, memo)?;
                fixpoint_table(lasso, false, |t, p| a[p] || t[lasso.next_pos(p)])
            }
            other => {
                return Err(Error::Unsupported(format!(
                    "eval_lasso: `{}` is not LTL",
                    crate::formula::op_name(other)
                )))
            }
        };
        memo.insert(phi.clone(), table.clone());
        Ok(table)
    }
    go(lasso, phi, &mut memo)
}

fn fixpoint_table(lasso: &Lasso, init: bool, step: impl Fn(&[bool], usize) -> bool) -> Vec<bool> {
    let n = lasso.positions();
    let mut cur = vec![init; n];
    loop {
        let mut next = vec![false; n];
        for p in (0..n).rev() {
            next[p] = step(&cur, p);
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Truth of an LTL formula at one position of a lasso.
pub fn eval_lasso_direct(lasso: &Lasso, phi: &Formula, pos: usize) -> Result<bool> {
    Ok(eval_lasso_all(lasso, phi)?[pos])
}

// ---------------------------------------------------------------------------
// Text format.

pub enum Model {
    Kripke(KripkeStructure),
    Lasso(Lasso),
}

/// Parse the model text format: `states N`, `init i j ...`, `edge a b`,
/// `label s p q ...`; lassos use `stem i j ...` / `cycle i j ...` instead of
/// `edge`/`init`. `#` starts a line comment. Reserved atom names are allowed
/// here so reduction output can be evaluated against hand-written models.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut n_states: Option<usize> = None;
    let mut init: Vec<u32> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut labels: Vec<(usize, Vec<String>)> = Vec::new();
    let mut stem: Option<Vec<usize>> = None;
    let mut cycle: Option<Vec<usize>> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap();
        let lineno = lineno + 1;
        let parse_num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::ModelFormat {
                line: lineno,
                msg: format!("expected a number, got `{s}`"),
            })
        };
        let missing = |what: &str| Error::ModelFormat { line: lineno, msg: what.into() };
        match head {
            "states" => {
                let v = parts.next().ok_or_else(|| missing("states needs a count"))?;
                n_states = Some(parse_num(v)?);
            }
            "init" => {
                for p in parts {
                    init.push(parse_num(p)? as u32);
                }
            }
            "edge" => {
                let a = parse_num(parts.next().ok_or_else(|| missing("edge needs two states"))?)?;
                let b = parse_num(parts.next().ok_or_else(|| missing("edge needs two states"))?)?;
                edges.push((a as u32, b as u32));
            }
            "label" => {
                let s =
                    parse_num(parts.next().ok_or_else(|| missing("label needs a state"))?)?;
                labels.push((s, parts.map(|p| p.to_string()).collect()));
            }
            "stem" => {
                let mut v = Vec::new();
                for p in parts {
                    v.push(parse_num(p)?);
                }
                stem = Some(v);
            }
            "cycle" => {
                let mut v = Vec::new();
                for p in parts {
                    v.push(parse_num(p)?);
                }
                cycle = Some(v);
            }
            other => {
                return Err(Error::ModelFormat {
                    line: lineno,
                    msg: format!("unknown directive `{other}`"),
                })
            }
        }
    }

    let n = n_states.ok_or(Error::ModelFormat {
        line: 0,
        msg: "missing `states N` header".into(),
    })?;
    for (s, _) in labels.iter() {
        if *s >= n {
            return Err(Error::ModelFormat {
                line: 0,
                msg: format!("label refers to state {s} but there are only {n} states"),
            });
        }
    }

    let mut atoms: Vec<Atom> = Vec::new();
    let mut masks = vec![0u64; n];
    for (s, names) in labels.iter() {
        for name in names {
            let atom = Atom::new(name);
            let idx = match atoms.iter().position(|x| *x == atom) {
                Some(i) => i,
                None => {
                    atoms.push(atom);
                    atoms.len() - 1
                }
            };
            if idx >= 64 {
                return Err(Error::Unsupported("more than 64 atoms in a model".into()));
            }
            masks[*s] |= 1 << idx;
        }
    }

    if stem.is_some() || cycle.is_some() {
        let stem = stem.unwrap_or_default();
        let cycle = cycle.unwrap_or_default();
        for s in stem.iter().chain(cycle.iter()) {
            if *s >= n {
                return Err(Error::ModelFormat {
                    line: 0,
                    msg: format!("lasso refers to state {s} but there are only {n} states"),
                });
            }
        }
        let lasso = Lasso::new(
            atoms,
            stem.iter().map(|s| masks[*s]).collect(),
            cycle.iter().map(|s| masks[*s]).collect(),
        )?;
        return Ok(Model::Lasso(lasso));
    }

    for (a, b) in &edges {
        if *a as usize >= n || *b as usize >= n {
            return Err(Error::ModelFormat {
                line: 0,
                msg: format!("edge ({a},{b}) out of range"),
            });
        }
    }
    let mut succs = vec![Vec::new(); n];
    for (a, b) in edges {
        succs[a as usize].push(b);
    }
    let k = KripkeStructure { atoms, labels: masks, succs, initial: init };
    k.check_total()?;
    Ok(Model::Kripke(k))
}

pub fn render_state_set(set: &StateSet) -> String {
    let mut out = String::from("{");
    let mut first = true;
    for s in set.iter() {
        if !first {
            out.push_str(", ");
        }
        let _ = write!(out, "{s}");
        first = false;
    }
    out.push('}');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    fn two_cycle() -> KripkeStructure {
        // 0 -> 1 -> 0, 0 labeled {p}, 1 labeled {}
        KripkeStructure::new(2, &[(0, 1), (1, 0)], &[0], &[&["p"], &[]]).unwrap()
    }

    #[test]
    fn atom_semantics() {
        let k = two_cycle();
        let set = mc_eval(&k, &Valuation::new(), &F::atom("p")).unwrap();
        assert!(set.contains(0) && !set.contains(1));
    }

    #[test]
    fn extremal_fixpoints() {
        let k = two_cycle();
        let mu = F::mu("X", F::var("X"));
        let nu = F::nu("X", F::var("X"));
        assert!(mc_eval(&k, &Valuation::new(), &mu).unwrap().is_empty());
        assert_eq!(mc_eval(&k, &Valuation::new(), &nu).unwrap(), StateSet::full(2));
    }

    #[test]
    fn ag_on_two_cycle_is_empty() {
        // AG p = nu X.([.]X & p); state 1 lacks p, so no state satisfies it.
        // Cross-checked against the reachability operator Gamma.
        let k = two_cycle();
        let agp = F::nu("X", F::and(F::boxm(F::var("X")), F::atom("p")));
        let got = mc_eval(&k, &Valuation::new(), &agp).unwrap();
        assert!(got.is_empty());
        let oracle = gamma(&k, &mc_eval(&k, &Valuation::new(), &F::atom("p")).unwrap());
        assert_eq!(got, oracle);
    }

    #[test]
    fn satisfies_examples() {
        let k = KripkeStructure::new(1, &[(0, 0)], &[0], &[&["p"]]).unwrap();
        let agp = F::nu("X", F::and(F::boxm(F::var("X")), F::atom("p")));
        assert!(satisfies(&k, &agp).unwrap());
        assert!(satisfies(&k, &F::t()).unwrap());
    }

    #[test]
    fn fixpoint_valuation_definition() {
        let k = two_cycle();
        let phi = F::mu("X", F::diamond(F::var("X")));
        let eta = fixpoint_valuation(&k, &phi).unwrap();
        let direct = mc_eval(&k, &Valuation::new(), &phi).unwrap();
        assert_eq!(eta[&Var::new("X")], direct);

        let no_binders = F::and(F::atom("p"), F::t());
        assert!(fixpoint_valuation(&k, &no_binders).unwrap().is_empty());
    }

    #[test]
    fn ctl_translation_examples() {
        // T(A(p U q)) = mu Z0.(([.]Z0 & p) | q)
        let t = ctl_to_mu(&F::au(F::atom("p"), F::atom("q")));
        let want = F::mu(
            "Z0",
            F::or(F::and(F::boxm(F::var("Z0")), F::atom("p")), F::atom("q")),
        );
        assert_eq!(t, want);
        assert_eq!(ctl_to_mu(&F::atom("p")), F::atom("p"));
        // T(c[psi]) = c[T psi]
        let t = ctl_to_mu(&F::apply("c", F::au(F::atom("p"), F::atom("q"))));
        match t.kind() {
            Kind::Apply(c, arg) => {
                assert_eq!(c.as_str(), "c");
                assert!(matches!(arg.kind(), Kind::Mu(..)));
            }
            _ => panic!("expected apply"),
        }
    }

    #[test]
    fn ltl_translation_examples() {
        let t = ltl_to_mu_lasso(&F::until(F::atom("p"), F::atom("q")));
        let want = F::mu(
            "Z0",
            F::or(F::and(F::boxm(F::var("Z0")), F::atom("p")), F::atom("q")),
        );
        assert_eq!(t, want);
        let t = ltl_to_mu_lasso(&F::globally(F::atom("p")));
        let want = F::nu("Z0", F::and(F::boxm(F::var("Z0")), F::atom("p")));
        assert_eq!(t, want);
    }

    #[test]
    fn lasso_eval_gf() {
        // stem [], cycle [{p}, {}]: GF p true everywhere, FG p false.
        let lasso = Lasso::new(vec![Atom::new("p")], vec![], vec![1, 0]).unwrap();
        let gfp = F::globally(F::finally(F::atom("p")));
        assert!(eval_lasso_all(&lasso, &gfp).unwrap().iter().all(|b| *b));
        let fgp = F::finally(F::globally(F::atom("p")));
        assert!(eval_lasso_all(&lasso, &fgp).unwrap().iter().all(|b| !*b));
    }

    #[test]
    fn lasso_matches_mu_translation() {
        let lasso = Lasso::new(vec![Atom::new("p")], vec![0], vec![1, 0]).unwrap();
        let phi = F::until(F::t(), F::atom("p"));
        let direct = eval_lasso_all(&lasso, &phi).unwrap();
        let k = lasso.as_kripke();
        let viamu = mc_eval(&k, &Valuation::new(), &ltl_to_mu_lasso(&phi)).unwrap();
        for p in 0..lasso.positions() {
            assert_eq!(direct[p], viamu.contains(p));
        }
    }

    #[test]
    fn ew_all_p() {
        let k = KripkeStructure::new(2, &[(0, 1), (1, 0)], &[0], &[&["p"], &["p"]]).unwrap();
        let set = eval_ctl_direct(&k, &F::ew(F::atom("p"), F::atom("p"))).unwrap();
        assert_eq!(set, StateSet::full(2));
    }

    #[test]
    fn parse_kripke_text() {
        let text = "# demo\nstates 2\ninit 0\nedge 0 1\nedge 1 1\nlabel 0 p q\nlabel 1 q\n";
        let Model::Kripke(k) = parse_model(text).unwrap() else {
            panic!("expected kripke")
        };
        assert_eq!(k.n_states(), 2);
        assert!(k.has_atom(0, &Atom::new("p")));
        assert!(k.has_atom(1, &Atom::new("q")));
        assert!(!k.has_atom(1, &Atom::new("p")));
        assert_eq!(k.initial, vec![0]);
    }

    #[test]
    fn parse_lasso_text() {
        let text = "states 3\nstem 0\ncycle 1 2\nlabel 0 p\nlabel 2 q\n";
        let Model::Lasso(l) = parse_model(text).unwrap() else {
            panic!("expected lasso")
        };
        assert_eq!(l.stem.len(), 1);
        assert_eq!(l.cycle.len(), 2);
        assert!(l.has_atom(0, &Atom::new("p")));
        assert!(l.has_atom(2, &Atom::new("q")));
    }

    #[test]
    fn totality_enforced() {
        let text = "states 2\ninit 0\nedge 0 1\n";
        assert!(matches!(parse_model(text), Err(Error::ModelFormat { .. })));
    }
}
