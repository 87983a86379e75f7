//! Propositional backend: evaluation, Tseitin transform and a small CDCL
//! solver with two-watched-literal propagation. Decides the ordinary
//! formulas produced by the propositional reductions.

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, Instantiation, Kind};
use std::collections::{BTreeMap, HashMap};

pub type PropValuation = BTreeMap<Atom, bool>;

/// Standard truth-table semantics; query connectives allowed. Atoms missing
/// from the valuation count as false.
pub fn eval_prop(phi: &Formula, beta: &PropValuation) -> Result<bool> {
    Ok(match phi.kind() {
        Kind::True => true,
        Kind::False => false,
        Kind::Atom(a) => *beta.get(a).unwrap_or(&false),
        Kind::NegAtom(a) => !*beta.get(a).unwrap_or(&false),
        Kind::And(l, r) => eval_prop(l, beta)? && eval_prop(r, beta)?,
        Kind::Or(l, r) => eval_prop(l, beta)? || eval_prop(r, beta)?,
        Kind::Not(x) => !eval_prop(x, beta)?,
        Kind::Implies(l, r) => !eval_prop(l, beta)? || eval_prop(r, beta)?,
        Kind::Iff(l, r) => eval_prop(l, beta)? == eval_prop(r, beta)?,
        other => {
            return Err(Error::Unsupported(format!(
                "eval_prop: `{}` is not propositional",
                crate::formula::op_name(other)
            )))
        }
    })
}

/// CNF over signed 1-based literals with the atom-to-variable table.
#[derive(Debug, Clone)]
pub struct Cnf {
    pub n_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// Original atoms and their variable indices (Tseitin variables for
    /// inner nodes have no atom).
    pub atom_map: Vec<(Atom, usize)>,
}

/// Equisatisfiable CNF; at most 4 clauses per node. Negations become
/// negative literals rather than fresh variables.
pub fn tseitin(phi: &Formula) -> Result<Cnf> {
    let mut cnf = Cnf { n_vars: 0, clauses: Vec::new(), atom_map: Vec::new() };
    let mut atom_vars: HashMap<Atom, i32> = HashMap::new();
    let mut node_vars: HashMap<Formula, i32> = HashMap::new();

    fn fresh(cnf: &mut Cnf) -> i32 {
        cnf.n_vars += 1;
        cnf.n_vars as i32
    }

    fn lit_of(
        phi: &Formula,
        cnf: &mut Cnf,
        atom_vars: &mut HashMap<Atom, i32>,
        node_vars: &mut HashMap<Formula, i32>,
    ) -> Result<i32> {
        if let Some(v) = node_vars.get(phi) {
            return Ok(*v);
        }
        let lit = match phi.kind() {
            Kind::True => {
                let v = fresh(cnf);
                cnf.clauses.push(vec![v]);
                v
            }
            Kind::False => {
                let v = fresh(cnf);
                cnf.clauses.push(vec![-v]);
                v
            }
            Kind::Atom(a) => match atom_vars.get(a) {
                Some(v) => *v,
                None => {
                    let v = fresh(cnf);
                    atom_vars.insert(a.clone(), v);
                    cnf.atom_map.push((a.clone(), v as usize));
                    v
                }
            },
            Kind::NegAtom(a) => {
                -lit_of(&Formula::atom(a.clone()), cnf, atom_vars, node_vars)?
            }
            Kind::Not(x) => -lit_of(x, cnf, atom_vars, node_vars)?,
            Kind::And(l, r) => {
                let (a, b) = (
                    lit_of(l, cnf, atom_vars, node_vars)?,
                    lit_of(r, cnf, atom_vars, node_vars)?,
                );
                let v = fresh(cnf);
                cnf.clauses.push(vec![-v, a]);
                cnf.clauses.push(vec![-v, b]);
                cnf.clauses.push(vec![-a, -b, v]);
                v
            }
            Kind::Or(l, r) => {
                let (a, b) = (
                    lit_of(l, cnf, atom_vars, node_vars)?,
                    lit_of(r, cnf, atom_vars, node_vars)?,
                );
                let v = fresh(cnf);
                cnf.clauses.push(vec![-v, a, b]);
                cnf.clauses.push(vec![-a, v]);
                cnf.clauses.push(vec![-b, v]);
                v
            }
            Kind::Implies(l, r) => {
                let (a, b) = (
                    lit_of(l, cnf, atom_vars, node_vars)?,
                    lit_of(r, cnf, atom_vars, node_vars)?,
                );
                let v = fresh(cnf);
                cnf.clauses.push(vec![-v, -a, b]);
                cnf.clauses.push(vec![a, v]);
                cnf.clauses.push(vec![-b, v]);
                v
            }
            Kind::Iff(l, r) => {
                let (a, b) = (
                    lit_of(l, cnf, atom_vars, node_vars)?,
                    lit_of(r, cnf, atom_vars, node_vars)?,
                );
                let v = fresh(cnf);
                cnf.clauses.push(vec![-v, -a, b]);
                cnf.clauses.push(vec![-v, a, -b]);
                cnf.clauses.push(vec![v, a, b]);
                cnf.clauses.push(vec![v, -a, -b]);
                v
            }
            other => {
                return Err(Error::Unsupported(format!(
                    "tseitin: `{}` is not propositional",
                    crate::formula::op_name(other)
                )))
            }
        };
        node_vars.insert(phi.clone(), lit);
        Ok(lit)
    }

    let root = lit_of(phi, &mut cnf, &mut atom_vars, &mut node_vars)?;
    cnf.clauses.push(vec![root]);
    Ok(cnf)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(PropValuation),
    Unsat,
}

const DEFAULT_CONFLICT_BUDGET: u64 = 2_000_000;

/// CDCL with two watched literals, first-UIP learning and deterministic
/// branching (lowest unassigned variable, false first).
pub fn sat(cnf: &Cnf, conflict_budget: Option<u64>) -> Result<SatResult> {
    let budget = conflict_budget.unwrap_or(DEFAULT_CONFLICT_BUDGET);
    let mut solver = Solver::new(cnf.n_vars);
    for clause in &cnf.clauses {
        if !solver.add_clause(clause.clone()) {
            return Ok(SatResult::Unsat);
        }
    }
    match solver.solve(budget)? {
        true => {
            let mut model = PropValuation::new();
            for (atom, var) in &cnf.atom_map {
                model.insert(atom.clone(), solver.assign[*var] == 1);
            }
            Ok(SatResult::Sat(model))
        }
        false => Ok(SatResult::Unsat),
    }
}

struct Solver {
    n: usize,
    clauses: Vec<Vec<i32>>,
    // watches[encode(l)] lists the clauses currently watching literal l.
    watches: Vec<Vec<usize>>,
    assign: Vec<i8>, // indexed by var, 0 = unassigned
    level: Vec<u32>,
    reason: Vec<usize>, // usize::MAX = decision
    trail: Vec<i32>,
    trail_lim: Vec<usize>,
    qhead: usize,
}

fn encode(lit: i32) -> usize {
    let v = lit.unsigned_abs() as usize;
    if lit > 0 {
        2 * v
    } else {
        2 * v + 1
    }
}

impl Solver {
    fn new(n: usize) -> Self {
        Solver {
            n,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * (n + 1)],
            assign: vec![0; n + 1],
            level: vec![0; n + 1],
            reason: vec![usize::MAX; n + 1],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
        }
    }

    fn value(&self, lit: i32) -> i8 {
        let v = self.assign[lit.unsigned_abs() as usize];
        if lit > 0 {
            v
        } else {
            -v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Returns false on immediate top-level conflict.
    fn add_clause(&mut self, mut clause: Vec<i32>) -> bool {
        clause.sort_unstable();
        clause.dedup();
        if clause.windows(2).any(|w| w[0] == -w[1]) {
            return true; // tautology
        }
        match clause.len() {
            0 => false,
            1 => match self.value(clause[0]) {
                1 => true,
                -1 => false,
                _ => {
                    self.enqueue(clause[0], usize::MAX);
                    true
                }
            },
            _ => {
                let ci = self.clauses.len();
                self.watches[encode(clause[0])].push(ci);
                self.watches[encode(clause[1])].push(ci);
                self.clauses.push(clause);
                true
            }
        }
    }

    fn enqueue(&mut self, lit: i32, reason: usize) {
        let v = lit.unsigned_abs() as usize;
        self.assign[v] = if lit > 0 { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = -p;
            let mut ws = std::mem::take(&mut self.watches[encode(false_lit)]);
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i];
                // Normalize so the false literal sits at slot 1.
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                debug_assert_eq!(self.clauses[ci][1], false_lit);
                let first = self.clauses[ci][0];
                if self.value(first) == 1 {
                    i += 1;
                    continue;
                }
                // Look for a non-false replacement watch.
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    if self.value(self.clauses[ci][k]) != -1 {
                        self.clauses[ci].swap(1, k);
                        let new_watch = self.clauses[ci][1];
                        self.watches[encode(new_watch)].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value(first) == -1 {
                    // Conflict: restore remaining watches.
                    self.watches[encode(false_lit)] = ws;
                    return Some(ci);
                }
                self.enqueue(first, ci);
                i += 1;
            }
            self.watches[encode(false_lit)] = ws;
        }
        None
    }

    fn analyze(&mut self, conflict: usize) -> (Vec<i32>, u32) {
        let mut learned: Vec<i32> = vec![0]; // slot 0 for the asserting literal
        let mut seen = vec![false; self.n + 1];
        let mut counter = 0usize;
        let mut p: i32 = 0;
        let mut idx = self.trail.len();
        let mut clause = conflict;

        loop {
            let lits: Vec<i32> = self.clauses[clause]
                .iter()
                .copied()
                .filter(|l| *l != p)
                .collect();
            for q in lits {
                let v = q.unsigned_abs() as usize;
                if !seen[v] && self.level[v] > 0 {
                    seen[v] = true;
                    if self.level[v] == self.decision_level() {
                        counter += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            // Walk the trail backwards to the next marked literal.
            loop {
                idx -= 1;
                p = self.trail[idx];
                if seen[p.unsigned_abs() as usize] {
                    break;
                }
            }
            let v = p.unsigned_abs() as usize;
            seen[v] = false;
            counter -= 1;
            if counter == 0 {
                learned[0] = -p;
                break;
            }
            clause = self.reason[v];
        }

        let backjump = learned[1..]
            .iter()
            .map(|l| self.level[l.unsigned_abs() as usize])
            .max()
            .unwrap_or(0);
        // Put a literal of the backjump level into slot 1 as second watch.
        if learned.len() > 1 {
            let k = learned[1..]
                .iter()
                .position(|l| self.level[l.unsigned_abs() as usize] == backjump)
                .unwrap()
                + 1;
            learned.swap(1, k);
        }
        (learned, backjump)
    }

    fn cancel_until(&mut self, level: u32) {
        while self.decision_level() > level {
            let lim = self.trail_lim.pop().unwrap();
            while self.trail.len() > lim {
                let lit = self.trail.pop().unwrap();
                let v = lit.unsigned_abs() as usize;
                self.assign[v] = 0;
                self.reason[v] = usize::MAX;
            }
            self.qhead = self.trail.len().min(self.qhead);
        }
        self.qhead = self.trail.len().min(self.qhead);
    }

    fn pick_branch(&self) -> Option<i32> {
        (1..=self.n).find(|v| self.assign[*v] == 0).map(|v| -(v as i32))
    }

    fn solve(&mut self, budget: u64) -> Result<bool> {
        let mut conflicts = 0u64;
        if self.propagate().is_some() {
            return Ok(false);
        }
        loop {
            match self.propagate() {
                Some(conflict) => {
                    conflicts += 1;
                    if conflicts > budget {
                        return Err(Error::ResourceLimit(format!(
                            "SAT conflict budget of {budget} exhausted"
                        )));
                    }
                    if self.decision_level() == 0 {
                        return Ok(false);
                    }
                    let (learned, backjump) = self.analyze(conflict);
                    self.cancel_until(backjump);
                    if learned.len() == 1 {
                        self.enqueue(learned[0], usize::MAX);
                    } else {
                        let ci = self.clauses.len();
                        self.watches[encode(learned[0])].push(ci);
                        self.watches[encode(learned[1])].push(ci);
                        let asserting = learned[0];
                        self.clauses.push(learned);
                        self.enqueue(asserting, ci);
                    }
                }
                None => match self.pick_branch() {
                    None => return Ok(true),
                    Some(lit) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(lit, usize::MAX);
                    }
                },
            }
        }
    }
}

/// Outcome of a propositional validity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropOutcome {
    Valid,
    CounterExample(PropValuation),
}

/// Valid iff the negation is unsatisfiable; otherwise the falsifying
/// valuation, restricted to the formula's atoms.
pub fn prop_valid(phi: &Formula, conflict_budget: Option<u64>) -> Result<PropOutcome> {
    let cnf = tseitin(&Formula::not(phi.clone()))?;
    match sat(&cnf, conflict_budget)? {
        SatResult::Unsat => Ok(PropOutcome::Valid),
        SatResult::Sat(model) => {
            let mut beta = PropValuation::new();
            for a in phi.atoms() {
                beta.insert(a.clone(), *model.get(&a).unwrap_or(&false));
            }
            debug_assert_eq!(eval_prop(phi, &beta)?, false);
            Ok(PropOutcome::CounterExample(beta))
        }
    }
}

/// Satisfiability of an ordinary propositional formula.
pub fn prop_sat(phi: &Formula, conflict_budget: Option<u64>) -> Result<SatResult> {
    let cnf = tseitin(phi)?;
    match sat(&cnf, conflict_budget)? {
        SatResult::Unsat => Ok(SatResult::Unsat),
        SatResult::Sat(model) => {
            let mut beta = PropValuation::new();
            for a in phi.atoms() {
                beta.insert(a.clone(), *model.get(&a).unwrap_or(&false));
            }
            Ok(SatResult::Sat(beta))
        }
    }
}

/// Independent oracle for contextual propositional validity: every context
/// is equivalent to `true`, `false` or the hole, so validity holds iff all
/// 3^n instantiations over these three contexts are valid.
pub fn prop_valid_by_instantiation(
    query: &Formula,
    conflict_budget: Option<u64>,
) -> Result<std::result::Result<(), (Instantiation, PropValuation)>> {
    let vars = query.ctx_vars();
    let choices = [Formula::t(), Formula::f(), Formula::hole()];
    let n = vars.len();
    let mut counters = vec![0usize; n];
    loop {
        let mut sigma = Instantiation::new();
        for (i, c) in vars.iter().enumerate() {
            sigma.bind(c.clone(), choices[counters[i]].clone());
        }
        let inst = sigma.instantiate(query)?;
        if let PropOutcome::CounterExample(beta) = prop_valid(&inst, conflict_budget)? {
            return Ok(Err((sigma, beta)));
        }
        // Odometer over the 3^n instantiations.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(Ok(()));
            }
            counters[i] += 1;
            if counters[i] < 3 {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Logic, Mode};
    use crate::parser::parse_formula;
    use crate::reduction::{
        canonical_reduction, equivalid_formula, ReductionTarget,
    };

    #[test]
    fn eval_examples() {
        let beta = PropValuation::new();
        let phi = parse_formula("p | !p", Logic::Prop).unwrap();
        assert!(eval_prop(&phi, &beta).unwrap());
        assert!(eval_prop(&Formula::t(), &beta).unwrap());
    }

    #[test]
    fn tseitin_atoms() {
        let cnf = tseitin(&Formula::atom("p")).unwrap();
        assert_eq!(cnf.clauses, vec![vec![1]]);
        let cnf = tseitin(&Formula::and(Formula::atom("p"), Formula::neg_atom("p"))).unwrap();
        assert_eq!(sat(&cnf, None).unwrap(), SatResult::Unsat);
    }

    #[test]
    fn sat_simple() {
        let cnf = Cnf { n_vars: 1, clauses: vec![vec![1], vec![-1]], atom_map: vec![] };
        assert_eq!(sat(&cnf, None).unwrap(), SatResult::Unsat);
        let cnf = Cnf { n_vars: 2, clauses: vec![vec![1, 2]], atom_map: vec![] };
        assert!(matches!(sat(&cnf, None).unwrap(), SatResult::Sat(_)));
    }

    #[test]
    fn prop_valid_examples() {
        let phi = parse_formula("p | !p", Logic::Prop).unwrap();
        assert_eq!(prop_valid(&phi, None).unwrap(), PropOutcome::Valid);
        assert_eq!(prop_valid(&Formula::t(), None).unwrap(), PropOutcome::Valid);
        let phi = parse_formula("p -> q", Logic::Prop).unwrap();
        match prop_valid(&phi, None).unwrap() {
            PropOutcome::CounterExample(beta) => {
                assert!(!eval_prop(&phi, &beta).unwrap());
            }
            PropOutcome::Valid => panic!("p -> q is not valid"),
        }
    }

    fn shannon() -> Formula {
        parse_formula("c[p] <-> ((p & c[true]) | (!p & c[false]))", Logic::Prop).unwrap()
    }

    #[test]
    fn shannon_valid_via_both_reductions() {
        let phi = shannon();
        let canonical =
            canonical_reduction(&phi, Logic::Prop, Mode::Monotonic, 1_000_000).unwrap();
        assert_eq!(prop_valid(&canonical, None).unwrap(), PropOutcome::Valid);
        let equivalid =
            equivalid_formula(&phi, Logic::Prop, Mode::Monotonic, ReductionTarget::Validity);
        assert_eq!(prop_valid(&equivalid, None).unwrap(), PropOutcome::Valid);
    }

    #[test]
    fn shannon_decontextualization_alone_not_valid() {
        let art = crate::reduction::decontextualize(&shannon());
        match prop_valid(&art.decon, None).unwrap() {
            PropOutcome::CounterExample(_) => {}
            PropOutcome::Valid => panic!("the bare decontextualization must not be valid"),
        }
    }

    #[test]
    fn c_p_not_equivalent_to_p() {
        // c[p] <-> p is not contextually valid (sigma(c) = false refutes).
        let phi = parse_formula("c[p] <-> p", Logic::Prop).unwrap();
        let canonical =
            canonical_reduction(&phi, Logic::Prop, Mode::Monotonic, 1_000_000).unwrap();
        assert!(matches!(
            prop_valid(&canonical, None).unwrap(),
            PropOutcome::CounterExample(_)
        ));
        let equivalid =
            equivalid_formula(&phi, Logic::Prop, Mode::Monotonic, ReductionTarget::Validity);
        assert!(matches!(
            prop_valid(&equivalid, None).unwrap(),
            PropOutcome::CounterExample(_)
        ));
        // The 3^n oracle agrees and exhibits a constant-context witness.
        let res = prop_valid_by_instantiation(&phi, None).unwrap();
        assert!(res.is_err());
    }

    #[test]
    fn triple_oracle_on_shannon() {
        assert!(prop_valid_by_instantiation(&shannon(), None).unwrap().is_ok());
    }

    #[test]
    fn canonical_matches_example_34_evaluation() {
        // Example 3.4 valuation: p=1, p_{c[p]}=0, p_{c[true]}=1, p_{c[false]}=0.
        // Both sides of the biconditional evaluate to 0, so the canonical
        // reduction evaluates to 1 under this valuation.
        let phi = shannon();
        let reduced =
            canonical_reduction(&phi, Logic::Prop, Mode::Monotonic, 1_000_000).unwrap();
        let mut beta = PropValuation::new();
        beta.insert(Atom::new("p"), true);
        beta.insert(Atom::new("_ctx_c_0"), false);
        beta.insert(Atom::new("_ctx_c_1"), true);
        beta.insert(Atom::new("_ctx_c_2"), false);
        let (lhs, rhs) = match reduced.kind() {
            Kind::Iff(l, r) => (l.clone(), r.clone()),
            _ => panic!("expected a biconditional"),
        };
        assert_eq!(eval_prop(&lhs, &beta).unwrap(), eval_prop(&rhs, &beta).unwrap());
        assert!(eval_prop(&reduced, &beta).unwrap());
    }
}
