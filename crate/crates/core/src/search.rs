//! Bounded counterexample search for contextual claims: enumerate small
//! instantiations and small models, evaluate the instantiated claim with
//! the direct evaluator of the logic. Independent of both reductions, and
//! the only refutation path for mu-calculus claims.

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, Instantiation, Kind, Logic};
use crate::kripke::{eval_ctl_direct, eval_lasso_direct, mc_eval, KripkeStructure, Lasso, Valuation};
use crate::prop::{eval_prop, PropValuation};
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub max_context_depth: usize,
    pub max_model_states: usize,
    pub max_candidates: u64,
    pub time_budget: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_context_depth: 3,
            max_model_states: 4,
            max_candidates: 10_000,
            time_budget: None,
        }
    }
}

fn depth(phi: &Formula) -> usize {
    1 + phi.children().iter().map(|c| depth(c)).max().unwrap_or(0)
}

/// Deterministic stream of contexts, ordered by size then shape; the
/// degenerate contexts `true`, `false` and the bare hole come first.
pub struct ContextStream {
    logic: Logic,
    atoms: Vec<Atom>,
    max_depth: usize,
    by_size: Vec<Vec<Formula>>,
    size: usize,
    idx: usize,
}

impl ContextStream {
    pub fn new(logic: Logic, atoms: &[Atom], budget: &SearchBudget) -> Self {
        ContextStream {
            logic,
            atoms: atoms.to_vec(),
            max_depth: budget.max_context_depth,
            by_size: vec![Vec::new()],
            size: 1,
            idx: 0,
        }
    }

    fn of_size(&mut self, s: usize) -> &[Formula] {
        while self.by_size.len() <= s {
            let s = self.by_size.len();
            let mut out: Vec<Formula> = Vec::new();
            if s == 1 {
                out.push(Formula::t());
                out.push(Formula::f());
                out.push(Formula::hole());
                for a in &self.atoms {
                    out.push(Formula::atom(a.clone()));
                }
                for a in &self.atoms {
                    out.push(Formula::neg_atom(a.clone()));
                }
            } else {
                let unary: &[fn(Formula) -> Formula] = match self.logic {
                    Logic::Prop => &[],
                    Logic::Ltl => &[Formula::next, Formula::globally, Formula::finally],
                    Logic::Ctl => &[
                        Formula::ax,
                        Formula::ex,
                        Formula::ag,
                        Formula::eg,
                        Formula::af,
                        Formula::ef,
                    ],
                    Logic::Mu => &[Formula::diamond, Formula::boxm],
                };
                for op in unary {
                    for f in self.by_size[s - 1].clone() {
                        if depth(&f) + 1 <= self.max_depth {
                            out.push(op(f));
                        }
                    }
                }
                let binary: &[fn(Formula, Formula) -> Formula] = match self.logic {
                    Logic::Prop | Logic::Mu => &[Formula::and, Formula::or],
                    Logic::Ltl => {
                        &[Formula::and, Formula::or, Formula::until, Formula::weak_until]
                    }
                    Logic::Ctl => &[
                        Formula::and,
                        Formula::or,
                        Formula::au,
                        Formula::aw,
                        Formula::eu,
                        Formula::ew,
                    ],
                };
                for op in binary {
                    for ls in 1..s - 1 {
                        let rs = s - 1 - ls;
                        let lefts = self.by_size[ls].clone();
                        let rights = self.by_size[rs].clone();
                        for l in &lefts {
                            for r in &rights {
                                let f = op(l.clone(), r.clone());
                                if depth(&f) <= self.max_depth {
                                    out.push(f);
                                }
                            }
                        }
                    }
                }
            }
            self.by_size.push(out);
        }
        &self.by_size[s]
    }
}

impl Iterator for ContextStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        // Sizes are unbounded but each size may be empty once the depth
        // limit bites; stop after a window of empty sizes.
        let mut empty_run = 0;
        loop {
            let s = self.size;
            let len = self.of_size(s).len();
            if self.idx < len {
                let f = self.by_size[s][self.idx].clone();
                self.idx += 1;
                return Some(f);
            }
            if len == 0 {
                empty_run += 1;
                if empty_run > 4 && s > 2 * self.max_depth.max(1) * 8 {
                    return None;
                }
            } else {
                empty_run = 0;
            }
            self.size += 1;
            self.idx = 0;
        }
    }
}

/// All lassos over the given atoms with at most `max_positions` positions,
/// deterministic order: by (total positions, stem length, label counters).
pub fn enumerate_lassos(atoms: &[Atom], max_positions: usize) -> Vec<Lasso> {
    let letters = 1u64 << atoms.len();
    let mut out = Vec::new();
    for total in 1..=max_positions {
        for stem_len in 0..total {
            let cycle_len = total - stem_len;
            // Counter over letters^total.
            let mut labels = vec![0u64; total];
            loop {
                out.push(Lasso {
                    atoms: atoms.to_vec(),
                    stem: labels[..stem_len].to_vec(),
                    cycle: labels[stem_len..].to_vec(),
                });
                let mut i = 0;
                loop {
                    if i == total {
                        break;
                    }
                    labels[i] += 1;
                    if labels[i] < letters {
                        break;
                    }
                    labels[i] = 0;
                    i += 1;
                }
                if i == total {
                    break;
                }
                let _ = cycle_len;
            }
        }
    }
    out
}

/// All total Kripke structures with `1..=max_states` states over the atoms,
/// initial state 0. Deterministic order by (state count, successor masks,
/// label masks).
pub fn enumerate_kripke(atoms: &[Atom], max_states: usize) -> Vec<KripkeStructure> {
    let letters = 1u64 << atoms.len();
    let mut out = Vec::new();
    for n in 1..=max_states {
        let succ_choices = (1u32 << n) - 1; // nonempty subsets per state
        let mut succ_masks = vec![1u32; n];
        loop {
            let mut label_masks = vec![0u64; n];
            loop {
                let succs: Vec<Vec<u32>> = succ_masks
                    .iter()
                    .map(|m| (0..n as u32).filter(|t| m & (1 << t) != 0).collect())
                    .collect();
                out.push(KripkeStructure {
                    atoms: atoms.to_vec(),
                    labels: label_masks.clone(),
                    succs,
                    initial: vec![0],
                });
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    label_masks[i] += 1;
                    if label_masks[i] < letters {
                        break;
                    }
                    label_masks[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                succ_masks[i] += 1;
                if succ_masks[i] <= succ_choices {
                    break;
                }
                succ_masks[i] = 1;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    out
}

/// All valuations over the atoms, as label masks turned into maps.
fn enumerate_valuations(atoms: &[Atom]) -> Vec<PropValuation> {
    let n = atoms.len();
    (0..(1u64 << n))
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), mask & (1 << i) != 0))
                .collect()
        })
        .collect()
}

/// A countermodel together with the instantiation that produced it.
#[derive(Debug, Clone)]
pub enum CexModel {
    Valuation(PropValuation),
    Lasso(Lasso),
    Kripke(KripkeStructure),
}

#[derive(Debug, Clone)]
pub enum RefuteResult {
    CounterExample { sigma: Instantiation, model: CexModel },
    /// The budget ran out without finding a counterexample; this is NOT a
    /// validity proof.
    Exhausted { candidates: u64 },
}

/// Check whether the instantiated claim fails on the model.
fn violates(logic: Logic, inst: &Formula, model: &CexModel) -> Result<bool> {
    Ok(match (logic, model) {
        (Logic::Prop, CexModel::Valuation(beta)) => !eval_prop(inst, beta)?,
        (Logic::Ltl, CexModel::Lasso(lasso)) => !eval_lasso_direct(lasso, inst, 0)?,
        (Logic::Ctl, CexModel::Kripke(k)) => {
            !eval_ctl_direct(k, inst)?.contains(k.initial[0] as usize)
        }
        (Logic::Mu, CexModel::Kripke(k)) => {
            !mc_eval(k, &Valuation::new(), inst)?.contains(k.initial[0] as usize)
        }
        _ => return Err(Error::Unsupported("model kind does not match logic".into())),
    })
}

/// Instantiation tuples over the context stream, ordered by the sum of
/// component indices (so constant contexts are tried first).
struct SigmaStream {
    vars: Vec<crate::formula::CtxVar>,
    contexts: Vec<Formula>,
    stream: ContextStream,
    stream_done: bool,
    wave: usize,
    tuple: Vec<usize>,
    fresh_wave: bool,
}

impl SigmaStream {
    fn new(phi: &Formula, logic: Logic, atoms: &[Atom], budget: &SearchBudget) -> Self {
        SigmaStream {
            vars: phi.ctx_vars(),
            contexts: Vec::new(),
            stream: ContextStream::new(logic, atoms, budget),
            stream_done: false,
            wave: 0,
            tuple: Vec::new(),
            fresh_wave: true,
        }
    }

    fn ensure(&mut self, upto: usize) {
        while !self.stream_done && self.contexts.len() <= upto {
            match self.stream.next() {
                Some(c) => self.contexts.push(c),
                None => self.stream_done = true,
            }
        }
    }

    fn next(&mut self) -> Option<Instantiation> {
        if self.vars.is_empty() {
            if self.fresh_wave {
                self.fresh_wave = false;
                return Some(Instantiation::new());
            }
            return None;
        }
        loop {
            if self.fresh_wave {
                self.ensure(self.wave);
                if self.contexts.is_empty() || self.wave >= self.contexts.len() * self.vars.len() {
                    if self.stream_done && self.wave > self.contexts.len() * self.vars.len() {
                        return None;
                    }
                }
                // First tuple of the wave: indices summing to `wave`.
                match first_composition(self.wave, self.vars.len(), self.contexts.len()) {
                    Some(t) => {
                        self.tuple = t;
                        self.fresh_wave = false;
                    }
                    None => {
                        if self.stream_done {
                            return None;
                        }
                        self.wave += 1;
                        continue;
                    }
                }
            } else {
                match next_composition(&mut self.tuple, self.wave, self.contexts.len()) {
                    true => {}
                    false => {
                        self.wave += 1;
                        self.fresh_wave = true;
                        continue;
                    }
                }
            }
            let mut sigma = Instantiation::new();
            for (v, idx) in self.vars.iter().zip(&self.tuple) {
                sigma.bind(v.clone(), self.contexts[*idx].clone());
            }
            return Some(sigma);
        }
    }
}

/// Lexicographically first vector of `k` indices in `0..limit` summing to
/// `total`.
fn first_composition(total: usize, k: usize, limit: usize) -> Option<Vec<usize>> {
    if limit == 0 {
        return None;
    }
    let max = limit - 1;
    if total > k * max {
        return None;
    }
    let mut out = vec![0; k];
    let mut rest = total;
    for i in (0..k).rev() {
        let take = rest.min(max);
        out[i] = take;
        rest -= take;
    }
    Some(out)
}

/// Advance to the next composition with the same sum; false when done.
fn next_composition(tuple: &mut [usize], total: usize, limit: usize) -> bool {
    let k = tuple.len();
    let max = limit - 1;
    // Find the rightmost position (except the last) that can be increased
    // by taking from the suffix sum.
    for i in (0..k.saturating_sub(1)).rev() {
        let suffix: usize = tuple[i + 1..].iter().sum();
        if suffix > 0 && tuple[i] < max {
            tuple[i] += 1;
            let rest = suffix - 1;
            // Redistribute the remainder to the rightmost slots.
            for slot in tuple[i + 1..].iter_mut() {
                *slot = 0;
            }
            let mut rest = rest;
            for j in (i + 1..k).rev() {
                let take = rest.min(max);
                tuple[j] = take;
                rest -= take;
            }
            if rest > 0 {
                continue;
            }
            let _ = total;
            return true;
        }
    }
    false
}

/// Search for a counterexample to a contextual claim. The claim must hold
/// in every model under every instantiation; the first (by candidate rank)
/// violating pair is returned.
pub fn refute(claim: &Formula, logic: Logic, budget: &SearchBudget) -> Result<RefuteResult> {
    let atoms: Vec<Atom> = claim.atoms().into_iter().collect();
    let atoms = if atoms.is_empty() { vec![Atom::new("p")] } else { atoms };
    let started = Instant::now();

    let models: Vec<CexModel> = match logic {
        Logic::Prop => enumerate_valuations(&atoms)
            .into_iter()
            .map(CexModel::Valuation)
            .collect(),
        Logic::Ltl => enumerate_lassos(&atoms, budget.max_model_states)
            .into_iter()
            .map(CexModel::Lasso)
            .collect(),
        Logic::Ctl | Logic::Mu => enumerate_kripke(&atoms, budget.max_model_states)
            .into_iter()
            .map(CexModel::Kripke)
            .collect(),
    };

    let mut sigmas = SigmaStream::new(claim, logic, &atoms, budget);
    let mut sigma_list: Vec<(Instantiation, Formula)> = Vec::new();
    let mut sigmas_done = false;
    let mut candidates = 0u64;

    // Diagonal enumeration over (instantiation, model) pairs: pairs with a
    // smaller index sum rank first, ties broken by instantiation index.
    let mut wave = 0usize;
    loop {
        if !sigmas_done && sigma_list.len() <= wave {
            while sigma_list.len() <= wave {
                match sigmas.next() {
                    Some(sigma) => {
                        let inst = sigma.instantiate(claim)?;
                        sigma_list.push((sigma, inst));
                    }
                    None => {
                        sigmas_done = true;
                        break;
                    }
                }
            }
        }
        if sigma_list.is_empty() || (sigmas_done && wave >= sigma_list.len() + models.len()) {
            return Ok(RefuteResult::Exhausted { candidates });
        }
        for s_idx in 0..=wave.min(sigma_list.len().saturating_sub(1)) {
            let m_idx = wave - s_idx;
            if m_idx >= models.len() {
                continue;
            }
            candidates += 1;
            if candidates > budget.max_candidates {
                return Ok(RefuteResult::Exhausted { candidates: candidates - 1 });
            }
            if let Some(limit) = budget.time_budget {
                if started.elapsed() > limit {
                    return Err(Error::TimeBudget);
                }
            }
            let (sigma, inst) = &sigma_list[s_idx];
            if violates(logic, inst, &models[m_idx])? {
                return Ok(RefuteResult::CounterExample {
                    sigma: sigma.clone(),
                    model: models[m_idx].clone(),
                });
            }
        }
        wave += 1;
    }
}

/// True when `phi` is a contextual query the mu-calculus search can handle
/// (closed after instantiation).
pub fn is_closed_claim(phi: &Formula) -> bool {
    crate::formula::free_vars(phi).is_empty()
        || !matches!(phi.kind(), Kind::Var(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::reduction::{build_query, QueryKind};
    use crate::formula::Mode;

    #[test]
    fn context_stream_starts_with_degenerate() {
        let budget = SearchBudget::default();
        let atoms = [Atom::new("p")];
        let mut stream = ContextStream::new(Logic::Prop, &atoms, &budget);
        assert_eq!(stream.next().unwrap(), Formula::t());
        assert_eq!(stream.next().unwrap(), Formula::f());
        assert_eq!(stream.next().unwrap(), Formula::hole());
    }

    #[test]
    fn context_count_matches_independent_recursion() {
        // Independent count of PROP contexts of size <= 3 over {p}:
        // size 1: true, false, hole, p, !p -> 5
        // size 2: none (no unary PROP operators)
        // size 3: (and | or) x (5 x 5) = 50
        let budget = SearchBudget { max_context_depth: 10, ..Default::default() };
        let atoms = [Atom::new("p")];
        let mut stream = ContextStream::new(Logic::Prop, &atoms, &budget);
        let mut count = 0;
        while let Some(f) = stream.next() {
            if f.size() <= 3 {
                count += 1;
            } else {
                break;
            }
        }
        assert_eq!(count, 5 + 50);
    }

    #[test]
    fn ltl_depth1_stream_contains_modalities() {
        let budget = SearchBudget { max_context_depth: 2, ..Default::default() };
        let atoms = [Atom::new("p")];
        let stream = ContextStream::new(Logic::Ltl, &atoms, &budget);
        let all: Vec<Formula> = stream.take(200).collect();
        let hole = Formula::hole;
        assert!(all.contains(&Formula::globally(hole())));
        assert!(all.contains(&Formula::finally(hole())));
        assert!(all.contains(&Formula::next(hole())));
        assert!(all.contains(&Formula::and(hole(), Formula::atom("p"))));
    }

    #[test]
    fn refute_gf_mutation() {
        // Appendix C mutation 1a: c[GF p] == (FG p & c[true]) | c[false] is
        // refutable (already with the identity context).
        let lhs = parse_formula("c[G F p]", Logic::Ltl).unwrap();
        let rhs = parse_formula("(F G p & c[true]) | c[false]", Logic::Ltl).unwrap();
        let claim = build_query(QueryKind::Equiv, &lhs, Some(&rhs), Mode::Monotonic).unwrap();
        match refute(&claim, Logic::Ltl, &SearchBudget::default()).unwrap() {
            RefuteResult::CounterExample { sigma, model } => {
                let inst = sigma.instantiate(&claim).unwrap();
                assert!(violates(Logic::Ltl, &inst, &model).unwrap());
            }
            RefuteResult::Exhausted { .. } => panic!("mutation 1a must be refuted"),
        }
    }

    #[test]
    fn refute_entailment_direction() {
        // (p <-> q) |= (c[p] <-> c[q]) is valid: search is exhausted.
        let lhs = parse_formula("p <-> q", Logic::Prop).unwrap();
        let rhs = parse_formula("c[p] <-> c[q]", Logic::Prop).unwrap();
        let claim = build_query(QueryKind::Implies, &lhs, Some(&rhs), Mode::Monotonic).unwrap();
        let budget = SearchBudget { max_candidates: 2000, ..Default::default() };
        assert!(matches!(
            refute(&claim, Logic::Prop, &budget).unwrap(),
            RefuteResult::Exhausted { .. }
        ));
        // The reverse entailment is refuted, with sigma(c) = false.
        let claim = build_query(QueryKind::Implies, &rhs, Some(&lhs), Mode::Monotonic).unwrap();
        match refute(&claim, Logic::Prop, &budget).unwrap() {
            RefuteResult::CounterExample { sigma, .. } => {
                let ctx = sigma.get(&crate::formula::CtxVar::new("c")).unwrap();
                assert!(ctx.is_true() || ctx.is_false());
            }
            RefuteResult::Exhausted { .. } => panic!("reverse entailment must be refuted"),
        }
    }

    #[test]
    fn refute_mu_unfolding_mutation() {
        // mu X. c[X] <-> c[true] is not a valid identity; search refutes it.
        let lhs = parse_formula("mu X. c[X]", Logic::Mu).unwrap();
        let rhs = parse_formula("c[true]", Logic::Mu).unwrap();
        let claim = build_query(QueryKind::Equiv, &lhs, Some(&rhs), Mode::Monotonic).unwrap();
        let budget = SearchBudget { max_candidates: 5000, max_model_states: 2, ..Default::default() };
        assert!(matches!(
            refute(&claim, Logic::Mu, &budget).unwrap(),
            RefuteResult::CounterExample { .. }
        ));
    }
}
