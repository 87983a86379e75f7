//! Deterministic random generators for formulas, contexts, instantiations,
//! Kripke structures and lassos. Used by the property-test suites and the
//! soundness-sampling checks; all generators are seeded.

use crate::formula::{Atom, CtxVar, Formula, Logic, Var};
use crate::kripke::{KripkeStructure, Lasso};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn default_atoms(n: usize) -> Vec<Atom> {
    ["p", "q", "r", "a", "b", "g", "h", "s"]
        .iter()
        .take(n)
        .map(Atom::new)
        .collect()
}

fn pick_atom(r: &mut StdRng, atoms: &[Atom]) -> Formula {
    let a = atoms[r.gen_range(0..atoms.len())].clone();
    if r.gen_bool(0.5) {
        Formula::atom(a)
    } else {
        Formula::neg_atom(a)
    }
}

/// Random ordinary NNF formula of the given logic.
pub fn random_formula(r: &mut StdRng, logic: Logic, atoms: &[Atom], depth: usize) -> Formula {
    random_formula_scoped(r, logic, atoms, depth, &mut Vec::new(), 0)
}

fn random_formula_scoped(
    r: &mut StdRng,
    logic: Logic,
    atoms: &[Atom],
    depth: usize,
    scope: &mut Vec<Var>,
    binder_count: u32,
) -> Formula {
    if depth == 0 {
        return match r.gen_range(0..10) {
            0 => Formula::t(),
            1 => Formula::f(),
            2 if logic == Logic::Mu && !scope.is_empty() => {
                Formula::var(scope[r.gen_range(0..scope.len())].clone())
            }
            _ => pick_atom(r, atoms),
        };
    }
    macro_rules! sub {
        ($r:expr, $bc:expr) => {
            random_formula_scoped($r, logic, atoms, depth - 1, scope, $bc)
        };
    }
    match logic {
        Logic::Prop => match r.gen_range(0..3) {
            0 => pick_atom(r, atoms),
            1 => Formula::and(sub!(r, binder_count), sub!(r, binder_count)),
            _ => Formula::or(sub!(r, binder_count), sub!(r, binder_count)),
        },
        Logic::Ltl => match r.gen_range(0..9) {
            0 => pick_atom(r, atoms),
            1 => Formula::and(sub!(r, binder_count), sub!(r, binder_count)),
            2 => Formula::or(sub!(r, binder_count), sub!(r, binder_count)),
            3 => Formula::next(sub!(r, binder_count)),
            4 => Formula::globally(sub!(r, binder_count)),
            5 => Formula::finally(sub!(r, binder_count)),
            6 | 7 => Formula::until(sub!(r, binder_count), sub!(r, binder_count)),
            _ => Formula::weak_until(sub!(r, binder_count), sub!(r, binder_count)),
        },
        Logic::Ctl => match r.gen_range(0..11) {
            0 => pick_atom(r, atoms),
            1 => Formula::and(sub!(r, binder_count), sub!(r, binder_count)),
            2 => Formula::or(sub!(r, binder_count), sub!(r, binder_count)),
            3 => Formula::ax(sub!(r, binder_count)),
            4 => Formula::ex(sub!(r, binder_count)),
            5 => Formula::ag(sub!(r, binder_count)),
            6 => Formula::af(sub!(r, binder_count)),
            7 => Formula::au(sub!(r, binder_count), sub!(r, binder_count)),
            8 => Formula::aw(sub!(r, binder_count), sub!(r, binder_count)),
            9 => Formula::eu(sub!(r, binder_count), sub!(r, binder_count)),
            _ => Formula::ew(sub!(r, binder_count), sub!(r, binder_count)),
        },
        Logic::Mu => match r.gen_range(0..9) {
            0 => pick_atom(r, atoms),
            1 if !scope.is_empty() => Formula::var(scope[r.gen_range(0..scope.len())].clone()),
            2 => Formula::and(sub!(r, binder_count), sub!(r, binder_count)),
            3 => Formula::or(sub!(r, binder_count), sub!(r, binder_count)),
            4 => Formula::diamond(sub!(r, binder_count)),
            5 => Formula::boxm(sub!(r, binder_count)),
            6 | 7 => {
                let v = Var::new(format!("V{binder_count}"));
                scope.push(v.clone());
                let body =
                    random_formula_scoped(r, logic, atoms, depth - 1, scope, binder_count + 1);
                scope.pop();
                if r.gen_bool(0.5) {
                    Formula::mu(v, body)
                } else {
                    Formula::nu(v, body)
                }
            }
            _ => pick_atom(r, atoms),
        },
    }
}

/// Random context: an NNF formula with holes in positive positions.
pub fn random_context(r: &mut StdRng, logic: Logic, atoms: &[Atom], depth: usize) -> Formula {
    // Start from a shape, then replace a random leaf (or several) by holes;
    // constant contexts stay possible.
    match r.gen_range(0..6) {
        0 => Formula::t(),
        1 => Formula::f(),
        2 => Formula::hole(),
        _ => {
            let base = random_formula(r, logic, atoms, depth);
            let holes = 1 + r.gen_range(0..2);
            let mut out = base;
            for _ in 0..holes {
                out = replace_random_positive_leaf(r, &out);
            }
            out
        }
    }
}

fn replace_random_positive_leaf(r: &mut StdRng, phi: &Formula) -> Formula {
    use crate::formula::Kind;
    match phi.kind() {
        Kind::True | Kind::False | Kind::Atom(_) | Kind::NegAtom(_) | Kind::Var(_)
        | Kind::Hole => {
            if r.gen_bool(0.6) {
                Formula::hole()
            } else {
                phi.clone()
            }
        }
        _ => {
            let children = phi.children();
            let pick = r.gen_range(0..children.len());
            let cs: Vec<Formula> = children
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == pick {
                        replace_random_positive_leaf(r, c)
                    } else {
                        (*c).clone()
                    }
                })
                .collect();
            phi.with_children(cs)
        }
    }
}

/// Random contextual formula with up to `max_vars` context variables and at
/// most `max_occurrences` applications, holes positive.
pub fn random_contextual(
    r: &mut StdRng,
    logic: Logic,
    atoms: &[Atom],
    depth: usize,
    max_vars: usize,
    max_occurrences: usize,
) -> Formula {
    let vars: Vec<CtxVar> = (0..max_vars.max(1))
        .map(|i| CtxVar::new(format!("c{i}")))
        .collect();
    let mut occ_left = max_occurrences.max(1) as i32;
    sprinkle(r, logic, atoms, depth, &vars, &mut occ_left)
}

fn sprinkle(
    r: &mut StdRng,
    logic: Logic,
    atoms: &[Atom],
    depth: usize,
    vars: &[CtxVar],
    occ_left: &mut i32,
) -> Formula {
    if *occ_left > 0 && r.gen_bool(0.35) && depth > 0 {
        *occ_left -= 1;
        let c = vars[r.gen_range(0..vars.len())].clone();
        let arg = sprinkle(r, logic, atoms, depth - 1, vars, occ_left);
        return Formula::apply(c, arg);
    }
    if depth == 0 {
        return pick_atom(r, atoms);
    }
    let left = sprinkle(r, logic, atoms, depth - 1, vars, occ_left);
    let right = sprinkle(r, logic, atoms, depth - 1, vars, occ_left);
    match logic {
        Logic::Prop => {
            if r.gen_bool(0.5) {
                Formula::and(left, right)
            } else {
                Formula::or(left, right)
            }
        }
        Logic::Ltl => match r.gen_range(0..6) {
            0 => Formula::and(left, right),
            1 => Formula::or(left, right),
            2 => Formula::next(left),
            3 => Formula::globally(left),
            4 => Formula::until(left, right),
            _ => Formula::weak_until(left, right),
        },
        Logic::Ctl => match r.gen_range(0..6) {
            0 => Formula::and(left, right),
            1 => Formula::or(left, right),
            2 => Formula::ax(left),
            3 => Formula::ag(left),
            4 => Formula::au(left, right),
            _ => Formula::ew(left, right),
        },
        Logic::Mu => match r.gen_range(0..5) {
            0 => Formula::and(left, right),
            1 => Formula::or(left, right),
            2 => Formula::diamond(left),
            3 => Formula::boxm(left),
            _ => {
                let v = Var::new(format!("W{depth}"));
                // A binder around a context argument exercises the
                // free-variable machinery.
                Formula::mu(v.clone(), Formula::or(left, Formula::var(v)))
            }
        },
    }
}

/// Random instantiation for the context variables of a formula.
pub fn random_instantiation(
    r: &mut StdRng,
    phi: &Formula,
    logic: Logic,
    atoms: &[Atom],
    depth: usize,
) -> crate::formula::Instantiation {
    let mut sigma = crate::formula::Instantiation::new();
    for c in phi.ctx_vars() {
        sigma.bind(c, random_context(r, logic, atoms, depth));
    }
    sigma
}

/// Random total Kripke structure with `1..=max_states` states, initial
/// state 0.
pub fn random_kripke(r: &mut StdRng, max_states: usize, atoms: &[Atom]) -> KripkeStructure {
    let n = r.gen_range(1..=max_states);
    let mut succs = Vec::with_capacity(n);
    for _ in 0..n {
        let mut out = Vec::new();
        for t in 0..n {
            if r.gen_bool(0.4) {
                out.push(t as u32);
            }
        }
        if out.is_empty() {
            out.push(r.gen_range(0..n) as u32);
        }
        succs.push(out);
    }
    let labels = (0..n)
        .map(|_| r.gen_range(0..(1u64 << atoms.len())))
        .collect();
    KripkeStructure { atoms: atoms.to_vec(), labels, succs, initial: vec![0] }
}

/// Random lasso with stem up to `max_stem` and cycle up to `max_cycle`.
pub fn random_lasso(r: &mut StdRng, max_stem: usize, max_cycle: usize, atoms: &[Atom]) -> Lasso {
    let stem_len = r.gen_range(0..=max_stem);
    let cycle_len = r.gen_range(1..=max_cycle);
    let mask = |r: &mut StdRng| r.gen_range(0..(1u64 << atoms.len()));
    Lasso {
        atoms: atoms.to_vec(),
        stem: (0..stem_len).map(|_| mask(r)).collect(),
        cycle: (0..cycle_len).map(|_| mask(r)).collect(),
    }
}
