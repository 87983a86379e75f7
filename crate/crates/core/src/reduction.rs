//! The two reductions from contextual validity to ordinary validity:
//! context-subformula extraction, decontextualization, the fixpoint
//! substitution, the canonical instantiation for each logic, and the
//! polynomial equivalid formula, plus the query construction for
//! equivalence and entailment claims.

use crate::error::{Error, Result};
use crate::formula::{
    binders_preorder, free_vars, rename_apart, subst_vars, to_nnf, Atom, CtxVar, Formula,
    Instantiation, Kind, Logic, Mode, Var, CTX_ATOM_PREFIX, FV_ATOM_PREFIX,
};
use std::collections::{BTreeMap, HashMap, HashSet};

/// One context subformula `c[psi]`, with its fresh atom.
#[derive(Debug, Clone)]
pub struct ContextOccurrence {
    pub var: CtxVar,
    pub arg: Formula,
    pub atom: Atom,
    /// Whether some position of this occurrence is maximal (not nested
    /// inside another occurrence's argument).
    pub maximal: bool,
}

/// Everything the reductions derive from a contextual formula.
#[derive(Debug, Clone)]
pub struct ReductionArtifacts {
    /// The input, renamed apart; fresh atoms refer to this version.
    pub phi: Formula,
    /// All context subformulas, grouped by context variable (variables in
    /// preorder of first occurrence, occurrences in preorder).
    pub consub: Vec<ContextOccurrence>,
    /// The decontextualization: maximal occurrences replaced by their atoms.
    pub decon: Formula,
    /// Fresh atom for every variable occurring free in some argument.
    pub freevar_atoms: BTreeMap<Var, Atom>,
    /// Closed formula for every bound variable (fixpoint substitution over
    /// the decontextualized binder bodies).
    pub fixpoint_subst: BTreeMap<Var, Formula>,
}

/// All context subformulas of a renamed-apart formula, deduplicated by
/// (variable, argument), grouped by variable, in deterministic preorder.
pub fn context_subformulas(phi: &Formula) -> Vec<ContextOccurrence> {
    let phi = rename_apart(phi);
    collect_consub(&phi)
}

fn collect_consub(phi: &Formula) -> Vec<ContextOccurrence> {
    // Discovery order, then regrouped by context variable.
    let mut found: Vec<(CtxVar, Formula, bool)> = Vec::new();
    fn walk(x: &Formula, inside: bool, found: &mut Vec<(CtxVar, Formula, bool)>) {
        if let Kind::Apply(c, arg) = x.kind() {
            match found
                .iter_mut()
                .find(|(v, a, _)| v == c && a == arg)
            {
                Some(entry) => entry.2 |= !inside,
                None => found.push((c.clone(), arg.clone(), !inside)),
            }
            walk(arg, true, found);
        } else {
            for ch in x.children() {
                walk(ch, inside, found);
            }
        }
    }
    walk(phi, false, &mut found);

    let mut var_order: Vec<CtxVar> = Vec::new();
    for (c, _, _) in &found {
        if !var_order.contains(c) {
            var_order.push(c.clone());
        }
    }
    let mut out = Vec::new();
    for c in var_order {
        let mut k = 0usize;
        for (v, arg, maximal) in &found {
            if *v == c {
                out.push(ContextOccurrence {
                    var: c.clone(),
                    arg: arg.clone(),
                    atom: Atom::new(format!("{CTX_ATOM_PREFIX}{}_{k}", c.as_str())),
                    maximal: *maximal,
                });
                k += 1;
            }
        }
    }
    out
}

type AtomTable = HashMap<(CtxVar, Formula), Atom>;

fn atom_table(consub: &[ContextOccurrence]) -> AtomTable {
    consub
        .iter()
        .map(|o| ((o.var.clone(), o.arg.clone()), o.atom.clone()))
        .collect()
}

/// Replace every maximal context subformula of `x` by its fresh atom.
/// "Maximal" is relative to `x` itself, so applying this to an occurrence's
/// argument produces the guard formula for nested occurrences.
fn decon_deep(x: &Formula, atoms: &AtomTable) -> Formula {
    match x.kind() {
        Kind::Apply(c, arg) => {
            let atom = atoms
                .get(&(c.clone(), arg.clone()))
                .expect("occurrence registered during collection");
            Formula::atom(atom.clone())
        }
        _ => {
            let cs: Vec<Formula> = x.children().iter().map(|c| decon_deep(c, atoms)).collect();
            x.with_children(cs)
        }
    }
}

/// Decontextualize: compute the fresh-atom tables, the decontextualization
/// and the fixpoint substitution of its binder skeleton.
pub fn decontextualize(phi: &Formula) -> ReductionArtifacts {
    let phi = rename_apart(phi);
    let consub = collect_consub(&phi);
    let atoms = atom_table(&consub);
    let decon = decon_deep(&phi, &atoms);

    let mut fvs: HashSet<Var> = HashSet::new();
    for occ in &consub {
        for v in free_vars(&occ.arg) {
            fvs.insert(v);
        }
    }
    let freevar_atoms: BTreeMap<Var, Atom> = fvs
        .into_iter()
        .map(|v| {
            let a = Atom::new(format!("{FV_ATOM_PREFIX}{}", v.as_str()));
            (v, a)
        })
        .collect();

    // Fixpoint substitution over the decontextualized binder bodies, in
    // ascending (outermost-first) order; earlier entries are already closed
    // when substituted into later ones.
    let mut fixpoint_subst: BTreeMap<Var, Formula> = BTreeMap::new();
    for (v, binder) in binders_preorder(&phi) {
        let body = match binder.kind() {
            Kind::Mu(_, b) | Kind::Nu(_, b) => b.clone(),
            _ => unreachable!(),
        };
        let decon_body = decon_deep(&body, &atoms);
        let closed_body = subst_vars(&decon_body, &fixpoint_subst);
        let closed = match binder.kind() {
            Kind::Mu(..) => Formula::mu(v.clone(), closed_body),
            _ => Formula::nu(v.clone(), closed_body),
        };
        fixpoint_subst.insert(v, closed);
    }

    ReductionArtifacts { phi, consub, decon, freevar_atoms, fixpoint_subst }
}

/// The fixpoint substitution of a closed ordinary mu-calculus formula:
/// for each bound `X` a closed formula semantically equal to its binder.
pub fn fixpoint_substitution(phi: &Formula) -> BTreeMap<Var, Formula> {
    decontextualize(phi).fixpoint_subst
}

impl ReductionArtifacts {
    /// Guard formula for an occurrence: the decontextualization of its
    /// argument (inner occurrences become their atoms).
    pub fn arg_bar(&self, occ: &ContextOccurrence) -> Formula {
        decon_deep(&occ.arg, &atom_table(&self.consub))
    }

    /// `arg_bar` with the fixpoint substitution applied: free variables
    /// replaced by closed formulas (mu-calculus canonical instantiation).
    pub fn arg_star(&self, occ: &ContextOccurrence) -> Formula {
        subst_vars(&self.arg_bar(occ), &self.fixpoint_subst)
    }

    /// `arg_bar` with free variables replaced by their fresh atoms
    /// (mu-calculus equivalid formula).
    pub fn arg_plus(&self, occ: &ContextOccurrence) -> Formula {
        subst_vars(&self.arg_bar(occ), &self.freevar_map())
    }

    fn freevar_map(&self) -> BTreeMap<Var, Formula> {
        self.freevar_atoms
            .iter()
            .map(|(v, a)| (v.clone(), Formula::atom(a.clone())))
            .collect()
    }

    /// Occurrences of one context variable, in order.
    pub fn occurrences_of(&self, c: &CtxVar) -> Vec<&ContextOccurrence> {
        self.consub.iter().filter(|o| o.var == *c).collect()
    }

    /// Context variables in first-occurrence order.
    pub fn vars(&self) -> Vec<CtxVar> {
        let mut out = Vec::new();
        for o in &self.consub {
            if !out.contains(&o.var) {
                out.push(o.var.clone());
            }
        }
        out
    }
}

struct FreshMuVars {
    used: HashSet<Var>,
    counter: u32,
}

impl FreshMuVars {
    fn for_formula(phi: &Formula) -> Self {
        FreshMuVars { used: phi.all_var_names(), counter: 0 }
    }

    fn next(&mut self) -> Var {
        loop {
            let v = Var::new(format!("Z{}", self.counter));
            self.counter += 1;
            if !self.used.contains(&v) {
                self.used.insert(v.clone());
                return v;
            }
        }
    }
}

/// `AG psi` as the mu-calculus abbreviation `nu Z. ([.]Z & psi)` with a
/// fresh variable per use.
fn ag_mu(psi: Formula, fresh: &mut FreshMuVars) -> Formula {
    let z = fresh.next();
    Formula::nu(z.clone(), Formula::and(Formula::boxm(Formula::var(z)), psi))
}

fn guard_implication(hole_guard: Formula, bar: Formula, mode: Mode) -> Formula {
    let _ = hole_guard;
    match mode {
        Mode::Monotonic => Formula::implies(Formula::hole(), bar),
        Mode::NonMonotonic => Formula::iff(Formula::hole(), bar),
    }
}

/// The canonical instantiation: for each context variable `c`, the
/// conjunction over its occurrences `c[psi]` of a guarded implication
/// `(wrap(hole -> psi_bar)) -> p_{c[psi]}`, where the wrap is nothing for
/// propositional logic, `G` for LTL, `AG` for CTL, and the `nu`-encoded
/// `AG` for the mu-calculus (which also closes the guard with the fixpoint
/// substitution). Non-monotonic mode uses `<->` inside the guard.
pub fn canonical_instantiation(phi: &Formula, logic: Logic, mode: Mode) -> Instantiation {
    let art = decontextualize(phi);
    canonical_instantiation_of(&art, logic, mode)
}

pub fn canonical_instantiation_of(
    art: &ReductionArtifacts,
    logic: Logic,
    mode: Mode,
) -> Instantiation {
    let mut fresh = FreshMuVars::for_formula(&art.phi);
    let mut sigma = Instantiation::new();
    for c in art.vars() {
        let mut conjunction: Option<Formula> = None;
        for occ in art.occurrences_of(&c) {
            let bar = match logic {
                Logic::Mu => art.arg_star(occ),
                _ => art.arg_bar(occ),
            };
            let inner = guard_implication(Formula::hole(), bar, mode);
            let guard = match logic {
                Logic::Prop => inner,
                Logic::Ltl => Formula::globally(inner),
                Logic::Ctl => Formula::ag(inner),
                Logic::Mu => ag_mu(inner, &mut fresh),
            };
            let conjunct = Formula::implies(guard, Formula::atom(occ.atom.clone()));
            conjunction = Some(match conjunction {
                None => conjunct,
                Some(acc) => Formula::and(acc, conjunct),
            });
        }
        sigma.bind(c, conjunction.unwrap_or_else(Formula::t));
    }
    sigma
}

/// Instantiate the formula with its canonical instantiation; fails with
/// `BlowupLimit` when the resulting syntax tree exceeds the node budget
/// (nested contexts blow up at least factorially).
pub fn canonical_reduction(
    phi: &Formula,
    logic: Logic,
    mode: Mode,
    node_budget: u64,
) -> Result<Formula> {
    let art = decontextualize(phi);
    let sigma = canonical_instantiation_of(&art, logic, mode);
    let reduced = sigma.instantiate(&art.phi)?;
    let size = reduced.size();
    if size > node_budget {
        return Err(Error::BlowupLimit { size, budget: node_budget });
    }
    Ok(reduced)
}

/// Validity-vs-satisfiability flavour of the equivalid formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReductionTarget {
    #[default]
    Validity,
    Satisfiability,
}

/// The polynomial equivalid formula: the pair premise over same-variable
/// occurrences (reflexive pairs included in the range; tautological
/// conjuncts fold away), the mu-calculus free-variable clauses, and the
/// decontextualization as conclusion. Validity mode joins premise and
/// conclusion with `->`, satisfiability mode with `&`.
pub fn equivalid_formula(
    phi: &Formula,
    logic: Logic,
    mode: Mode,
    target: ReductionTarget,
) -> Formula {
    let art = decontextualize(phi);
    equivalid_formula_of(&art, logic, mode, target)
}

pub fn equivalid_formula_of(
    art: &ReductionArtifacts,
    logic: Logic,
    mode: Mode,
    target: ReductionTarget,
) -> Formula {
    let mut fresh = FreshMuVars::for_formula(&art.phi);
    let mut conjuncts: Vec<Formula> = Vec::new();

    let wrap = |x: Formula, fresh: &mut FreshMuVars| -> Formula {
        if x.is_true() || x.is_false() {
            return x;
        }
        match logic {
            Logic::Prop => x,
            Logic::Ltl => Formula::globally(x),
            Logic::Ctl => Formula::ag(x),
            Logic::Mu => ag_mu(x, fresh),
        }
    };

    for c in art.vars() {
        let occs = art.occurrences_of(&c);
        for o1 in &occs {
            for o2 in &occs {
                let (b1, b2) = match logic {
                    Logic::Mu => (art.arg_plus(o1), art.arg_plus(o2)),
                    _ => (art.arg_bar(o1), art.arg_bar(o2)),
                };
                let inner = match mode {
                    Mode::Monotonic => Formula::implies_fold(b1, b2),
                    Mode::NonMonotonic => {
                        if b1 == b2 {
                            Formula::t()
                        } else {
                            Formula::iff(b1, b2)
                        }
                    }
                };
                let pair = Formula::implies_fold(
                    Formula::atom(o1.atom.clone()),
                    Formula::atom(o2.atom.clone()),
                );
                let body = Formula::implies_fold(wrap(inner, &mut fresh), pair);
                let conjunct = wrap(body, &mut fresh);
                if !conjunct.is_true() {
                    conjuncts.push(conjunct);
                }
            }
        }
    }

    if logic == Logic::Mu {
        for (v, atom) in &art.freevar_atoms {
            // AG(p_X <-> alpha X. body+), with the binder body
            // decontextualized and its other free variables replaced by
            // their fresh atoms.
            let binder = crate::formula::binder_of(&art.phi, v)
                .expect("free argument variables are bound in the formula");
            let body = match binder.kind() {
                Kind::Mu(_, b) | Kind::Nu(_, b) => b.clone(),
                _ => unreachable!(),
            };
            let atoms = atom_table(&art.consub);
            let decon_body = decon_deep(&body, &atoms);
            let mut map = art
                .freevar_atoms
                .iter()
                .map(|(y, a)| (y.clone(), Formula::atom(a.clone())))
                .collect::<BTreeMap<_, _>>();
            map.remove(v);
            let plus_body = subst_vars(&decon_body, &map);
            let clause_binder = match binder.kind() {
                Kind::Mu(..) => Formula::mu(v.clone(), plus_body),
                _ => Formula::nu(v.clone(), plus_body),
            };
            let clause = Formula::iff(Formula::atom(atom.clone()), clause_binder);
            conjuncts.push(wrap(clause, &mut fresh));
        }
    }

    let premise = Formula::and_all(conjuncts);
    let conclusion = match logic {
        Logic::Mu => subst_vars(&art.decon, &art.freevar_map()),
        _ => art.decon.clone(),
    };
    match target {
        ReductionTarget::Validity => Formula::implies_fold(premise, conclusion),
        ReductionTarget::Satisfiability => {
            if premise.is_true() {
                conclusion
            } else {
                Formula::and(premise, conclusion)
            }
        }
    }
}

/// The kind of claim being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Valid,
    Sat,
    Equiv,
    Implies,
}

/// Build the query formula for a claim: `equiv` becomes `lhs <-> rhs`,
/// `implies` becomes `lhs -> rhs`, `valid`/`sat` keep the formula. The
/// sides are brought into negation normal form; the top-level query
/// connective stays and is handled homomorphically by the reductions.
pub fn build_query(
    kind: QueryKind,
    lhs: &Formula,
    rhs: Option<&Formula>,
    mode: Mode,
) -> Result<Formula> {
    let joined = match kind {
        QueryKind::Equiv => {
            let rhs = rhs.ok_or(Error::LogicMismatch)?;
            Formula::iff(lhs.clone(), rhs.clone())
        }
        QueryKind::Implies => {
            let rhs = rhs.ok_or(Error::LogicMismatch)?;
            Formula::implies(lhs.clone(), rhs.clone())
        }
        QueryKind::Valid | QueryKind::Sat => lhs.clone(),
    };
    normalize_query(&joined, mode)
}

/// NNF below the top-level query skeleton (`<->`/`->` chains), which the
/// reductions handle without expansion.
pub fn normalize_query(phi: &Formula, mode: Mode) -> Result<Formula> {
    match phi.kind() {
        Kind::Iff(l, r) => Ok(Formula::iff(
            normalize_query(l, mode)?,
            normalize_query(r, mode)?,
        )),
        Kind::Implies(l, r) => Ok(Formula::implies(
            normalize_query(l, mode)?,
            normalize_query(r, mode)?,
        )),
        _ => to_nnf(phi, mode),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn shannon_prop() -> Formula {
        parse_formula(
            "c[p] <-> ((p & c[true]) | (!p & c[false]))",
            Logic::Prop,
        )
        .unwrap()
    }

    fn eq3_ltl() -> Formula {
        parse_formula(
            "c[G F p] <-> ((G F p & c[true]) | c[false])",
            Logic::Ltl,
        )
        .unwrap()
    }

    fn nested(n: usize) -> Formula {
        let mut phi = Formula::atom("q");
        for _ in 0..n {
            phi = Formula::apply("c", phi);
        }
        phi
    }

    #[test]
    fn consub_shannon() {
        let occs = context_subformulas(&shannon_prop());
        assert_eq!(occs.len(), 3);
        assert_eq!(occs[0].arg, Formula::atom("p"));
        assert_eq!(occs[1].arg, Formula::t());
        assert_eq!(occs[2].arg, Formula::f());
        assert!(occs.iter().all(|o| o.maximal));
        assert_eq!(occs[0].atom.as_str(), "_ctx_c_0");
        assert_eq!(occs[2].atom.as_str(), "_ctx_c_2");
    }

    #[test]
    fn consub_empty_and_nested() {
        assert!(context_subformulas(&Formula::and(Formula::atom("p"), Formula::t())).is_empty());
        // c^n[q] has n occurrences: c[q], c[c[q]], ..., innermost registered
        // while walking outside-in, so discovery order is outermost first.
        let occs = context_subformulas(&nested(4));
        assert_eq!(occs.len(), 4);
        assert_eq!(occs[0].arg, nested(3));
        assert_eq!(occs[3].arg, nested(0));
        assert!(occs[0].maximal);
        assert!(!occs[1].maximal);
    }

    #[test]
    fn decon_eq3() {
        let art = decontextualize(&eq3_ltl());
        let gfp = Formula::globally(Formula::finally(Formula::atom("p")));
        let want = Formula::iff(
            Formula::atom("_ctx_c_0"),
            Formula::or(
                Formula::and(gfp, Formula::atom("_ctx_c_1")),
                Formula::atom("_ctx_c_2"),
            ),
        );
        assert_eq!(art.decon, want);
        assert!(art.freevar_atoms.is_empty());
    }

    #[test]
    fn decon_without_contexts_is_identity() {
        let phi = parse_formula("p & (q | !p)", Logic::Prop).unwrap();
        let art = decontextualize(&phi);
        assert_eq!(art.decon, phi);
        assert!(art.consub.is_empty());
    }

    #[test]
    fn decon_unfolding_query() {
        // mu X. c[X] <-> c[mu X. c[X]]; after renaming apart the right-hand
        // binder becomes X1.
        let phi = parse_formula("(mu X. c[X]) <-> c[mu X. c[X]]", Logic::Mu).unwrap();
        let art = decontextualize(&phi);
        let names: Vec<&str> = art.consub.iter().map(|o| o.atom.as_str()).collect();
        assert_eq!(names, ["_ctx_c_0", "_ctx_c_1", "_ctx_c_2"]);
        assert_eq!(art.consub[0].arg, Formula::var("X"));
        let f: Vec<String> = art
            .freevar_atoms
            .keys()
            .map(|v| v.as_str().to_string())
            .collect();
        assert_eq!(f, ["X", "X1"]);
        // decon = (mu X. p_{c[X]}) <-> p_{c[mu X1. c[X1]]}
        let want = Formula::iff(
            Formula::mu("X", Formula::atom("_ctx_c_0")),
            Formula::atom("_ctx_c_1"),
        );
        assert_eq!(art.decon, want);
    }

    #[test]
    fn fixpoint_subst_examples() {
        // mu X. <.>X is already closed.
        let phi = parse_formula("mu X. <.>X", Logic::Mu).unwrap();
        let sub = fixpoint_substitution(&phi);
        assert_eq!(sub[&Var::new("X")], phi);

        // mu X1. mu X2. (X1 & X2)
        let phi = parse_formula("mu X1. mu X2. (X1 & X2)", Logic::Mu).unwrap();
        let sub = fixpoint_substitution(&phi);
        assert_eq!(sub[&Var::new("X1")], phi);
        let want_x2 = Formula::mu(
            "X2",
            Formula::and(phi.clone(), Formula::var("X2")),
        );
        assert_eq!(sub[&Var::new("X2")], want_x2);

        // nu Y. (p & mu X. (Y | X)): sigma(Y) is the whole formula and
        // sigma(X) = mu X. (sigma(Y) | X).
        let phi = parse_formula("nu Y. (p & mu X. (Y | X))", Logic::Mu).unwrap();
        let sub = fixpoint_substitution(&phi);
        assert_eq!(sub[&Var::new("Y")], phi);
        let want_x = Formula::mu("X", Formula::or(phi.clone(), Formula::var("X")));
        assert_eq!(sub[&Var::new("X")], want_x);
        for v in sub.values() {
            assert!(free_vars(v).is_empty(), "fixpoint substitution values are closed");
        }
    }

    #[test]
    fn canonical_shannon_prop() {
        let sigma = canonical_instantiation(&shannon_prop(), Logic::Prop, Mode::Monotonic);
        let hole = Formula::hole;
        let want = Formula::and(
            Formula::and(
                Formula::implies(
                    Formula::implies(hole(), Formula::atom("p")),
                    Formula::atom("_ctx_c_0"),
                ),
                Formula::implies(
                    Formula::implies(hole(), Formula::t()),
                    Formula::atom("_ctx_c_1"),
                ),
            ),
            Formula::implies(
                Formula::implies(hole(), Formula::f()),
                Formula::atom("_ctx_c_2"),
            ),
        );
        assert_eq!(sigma.get(&CtxVar::new("c")).unwrap(), &want);
    }

    #[test]
    fn canonical_no_contexts_is_empty() {
        let phi = parse_formula("p | !p", Logic::Prop).unwrap();
        let sigma = canonical_instantiation(&phi, Logic::Prop, Mode::Monotonic);
        assert!(sigma.is_empty());
        let reduced = canonical_reduction(&phi, Logic::Prop, Mode::Monotonic, 1000).unwrap();
        assert_eq!(reduced, phi);
    }

    #[test]
    fn canonical_ltl_guards_use_globally() {
        let sigma = canonical_instantiation(&eq3_ltl(), Logic::Ltl, Mode::Monotonic);
        let ctx = sigma.get(&CtxVar::new("c")).unwrap();
        // First conjunct: (G(hole -> G F p)) -> p1.
        let mut cur = ctx;
        while let Kind::And(l, _) = cur.kind() {
            cur = l;
        }
        match cur.kind() {
            Kind::Implies(guard, atom) => {
                assert!(matches!(guard.kind(), Kind::Globally(_)));
                assert_eq!(atom, &Formula::atom("_ctx_c_0"));
            }
            _ => panic!("unexpected guard shape"),
        }
    }

    #[test]
    fn canonical_blowup_budget() {
        // Sizes grow as k(n) = 29 + 6 k(n-1) for c^n[q]: c^7[q] is the
        // first level past the default 10^6 budget; smaller budgets trip
        // earlier.
        let err = canonical_reduction(&nested(7), Logic::Prop, Mode::Monotonic, 1_000_000)
            .unwrap_err();
        assert!(matches!(err, Error::BlowupLimit { .. }));
        let err = canonical_reduction(&nested(6), Logic::Prop, Mode::Monotonic, 200_000)
            .unwrap_err();
        assert!(matches!(err, Error::BlowupLimit { .. }));
        let ok = canonical_reduction(&nested(3), Logic::Prop, Mode::Monotonic, 1_000_000);
        assert!(ok.is_ok());
    }

    #[test]
    fn canonical_blowup_witness_factorial() {
        for n in 3..=5u64 {
            let reduced =
                canonical_reduction(&nested(n as usize), Logic::Prop, Mode::Monotonic, u64::MAX)
                    .unwrap();
            let factorial: u64 = (1..=n).product();
            assert!(
                reduced.size() >= factorial,
                "canonical blowup at n={n}: {} < {factorial}",
                reduced.size()
            );
        }
    }

    #[test]
    fn equivalid_no_contexts() {
        let phi = parse_formula("p | !p", Logic::Prop).unwrap();
        let e = equivalid_formula(&phi, Logic::Prop, Mode::Monotonic, ReductionTarget::Validity);
        assert_eq!(e, phi);
    }

    #[test]
    fn equivalid_prop_shannon_shape() {
        let e = equivalid_formula(
            &shannon_prop(),
            Logic::Prop,
            Mode::Monotonic,
            ReductionTarget::Validity,
        );
        // premise -> (p1 <-> ((p & p2) | (!p & p3)))
        match e.kind() {
            Kind::Implies(_, concl) => {
                let want = Formula::iff(
                    Formula::atom("_ctx_c_0"),
                    Formula::or(
                        Formula::and(Formula::atom("p"), Formula::atom("_ctx_c_1")),
                        Formula::and(Formula::neg_atom("p"), Formula::atom("_ctx_c_2")),
                    ),
                );
                assert_eq!(concl, &want);
            }
            _ => panic!("expected implication"),
        }
    }

    #[test]
    fn equivalid_size_polynomial() {
        let phi = eq3_ltl();
        let e = equivalid_formula(&phi, Logic::Ltl, Mode::Monotonic, ReductionTarget::Validity);
        let bound = 11 * phi.size().pow(4);
        assert!(e.size() <= bound, "{} > {bound}", e.size());
    }

    #[test]
    fn build_query_examples() {
        let lhs = parse_formula("c[G F p]", Logic::Ltl).unwrap();
        let rhs = parse_formula("(G F p & c[true]) | c[false]", Logic::Ltl).unwrap();
        let q = build_query(QueryKind::Equiv, &lhs, Some(&rhs), Mode::Monotonic).unwrap();
        assert_eq!(q, eq3_ltl());

        let phi = parse_formula("p | !p", Logic::Prop).unwrap();
        assert_eq!(
            build_query(QueryKind::Valid, &phi, None, Mode::Monotonic).unwrap(),
            phi
        );

        // The whole top-level `->`/`<->` region survives as the query
        // skeleton; only the formulas below it are brought into NNF.
        let lhs = parse_formula("p -> q", Logic::Prop).unwrap();
        let rhs = parse_formula("c[p] -> c[q]", Logic::Prop).unwrap();
        let q = build_query(QueryKind::Implies, &lhs, Some(&rhs), Mode::Monotonic).unwrap();
        match q.kind() {
            Kind::Implies(l, r) => {
                assert_eq!(l, &lhs);
                assert!(matches!(r.kind(), Kind::Implies(..)));
            }
            _ => panic!("expected implication"),
        }
        // A negation below the skeleton is expanded.
        let lhs = parse_formula("!(p & q)", Logic::Prop).unwrap();
        let q = build_query(QueryKind::Valid, &lhs, None, Mode::Monotonic).unwrap();
        assert_eq!(
            q,
            Formula::or(Formula::neg_atom("p"), Formula::neg_atom("q"))
        );
    }
}
