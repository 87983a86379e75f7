//! CTL satisfiability by the classical closure-and-pruning tableau:
//! candidate states are saturated consistent subsets of the closure,
//! pruned until every EX demand has a surviving successor and every
//! eventuality has a fulfilling structure. Satisfiable formulas yield an
//! explicit model, extracted by round-robin eventuality scheduling and
//! replay-verified against the direct CTL evaluator.

use crate::error::{Error, Result};
use crate::formula::{to_nnf, Atom, Formula, Kind, Mode};
use crate::kripke::{eval_ctl_direct, KripkeStructure};
use std::collections::HashMap;

type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum CNode {
    True,
    False,
    Lit(u32, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Au(NodeId, NodeId),
    Aw(NodeId, NodeId),
    Eu(NodeId, NodeId),
    Ew(NodeId, NodeId),
    Ax(NodeId),
    Ex(NodeId),
}

struct Arena {
    atoms: Vec<Atom>,
    atom_idx: HashMap<Atom, u32>,
    nodes: Vec<CNode>,
    ids: HashMap<CNode, NodeId>,
}

const TRUE: NodeId = 0;
const FALSE: NodeId = 1;

impl Arena {
    fn new() -> Self {
        let mut a = Arena {
            atoms: Vec::new(),
            atom_idx: HashMap::new(),
            nodes: Vec::new(),
            ids: HashMap::new(),
        };
        a.mk(CNode::True);
        a.mk(CNode::False);
        a
    }

    fn node(&self, id: NodeId) -> &CNode {
        &self.nodes[id as usize]
    }

    fn mk(&mut self, node: CNode) -> NodeId {
        if let Some(id) = self.ids.get(&node) {
            return *id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        id
    }

    fn lit(&mut self, a: &Atom, positive: bool) -> Result<NodeId> {
        let i = match self.atom_idx.get(a) {
            Some(i) => *i,
            None => {
                let i = self.atoms.len() as u32;
                if i >= 64 {
                    return Err(Error::Unsupported(
                        "more than 64 atoms in a CTL formula".into(),
                    ));
                }
                self.atoms.push(a.clone());
                self.atom_idx.insert(a.clone(), i);
                i
            }
        };
        Ok(self.mk(CNode::Lit(i, positive)))
    }

    fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == FALSE || b == FALSE {
            return FALSE;
        }
        if a == TRUE {
            return b;
        }
        if b == TRUE {
            return a;
        }
        if a == b {
            return a;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.mk(CNode::And(a, b))
    }

    fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == TRUE || b == TRUE {
            return TRUE;
        }
        if a == FALSE {
            return b;
        }
        if b == FALSE {
            return a;
        }
        if a == b {
            return a;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.mk(CNode::Or(a, b))
    }

    fn intern(&mut self, phi: &Formula) -> Result<NodeId> {
        Ok(match phi.kind() {
            Kind::True => TRUE,
            Kind::False => FALSE,
            Kind::Atom(a) => self.lit(a, true)?,
            Kind::NegAtom(a) => self.lit(a, false)?,
            Kind::And(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                self.and(a, b)
            }
            Kind::Or(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                self.or(a, b)
            }
            Kind::Au(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                if b == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Au(a, b))
            }
            Kind::Aw(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                if b == TRUE || a == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Aw(a, b))
            }
            Kind::Eu(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                if b == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Eu(a, b))
            }
            Kind::Ew(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                if b == TRUE || a == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Ew(a, b))
            }
            Kind::Ax(x) => {
                let a = self.intern(x)?;
                if a == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Ax(a))
            }
            Kind::Ex(x) => {
                let a = self.intern(x)?;
                // EX false is false under totality? No: EX false demands a
                // successor satisfying false, which is unsatisfiable.
                if a == FALSE {
                    return Ok(FALSE);
                }
                self.mk(CNode::Ex(a))
            }
            Kind::Ag(x) => {
                let a = self.intern(x)?;
                if a == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Aw(a, FALSE))
            }
            Kind::Af(x) => {
                let a = self.intern(x)?;
                if a == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Au(TRUE, a))
            }
            Kind::Eg(x) => {
                let a = self.intern(x)?;
                if a == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Ew(a, FALSE))
            }
            Kind::Ef(x) => {
                let a = self.intern(x)?;
                if a == TRUE {
                    return Ok(TRUE);
                }
                self.mk(CNode::Eu(TRUE, a))
            }
            other => {
                return Err(Error::Unsupported(format!(
                    "CTL tableau: `{}` is not NNF CTL",
                    crate::formula::op_name(other)
                )))
            }
        })
    }
}

/// A saturated candidate state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct TabState {
    pos: u64,
    neg: u64,
    members: Box<[NodeId]>,
}

impl TabState {
    fn has(&self, id: NodeId) -> bool {
        self.members.binary_search(&id).is_ok()
    }
}

#[derive(Clone)]
struct Branch {
    pos: u64,
    neg: u64,
    seen: Vec<NodeId>,
    todo: Vec<NodeId>,
}

fn saturate(arena: &mut Arena, base: &[NodeId], cap: usize) -> Result<Vec<TabState>> {
    let mut out: Vec<TabState> = Vec::new();
    let mut stack = vec![Branch { pos: 0, neg: 0, seen: Vec::new(), todo: base.to_vec() }];
    while let Some(mut br) = stack.pop() {
        let mut dead = false;
        while let Some(id) = br.todo.pop() {
            if br.seen.contains(&id) {
                continue;
            }
            br.seen.push(id);
            match arena.node(id).clone() {
                CNode::True => {}
                CNode::False => {
                    dead = true;
                    break;
                }
                CNode::Lit(i, positive) => {
                    let bit = 1u64 << i;
                    if positive {
                        br.pos |= bit;
                    } else {
                        br.neg |= bit;
                    }
                    if br.pos & br.neg != 0 {
                        dead = true;
                        break;
                    }
                }
                CNode::And(a, b) => {
                    br.todo.push(a);
                    br.todo.push(b);
                }
                CNode::Or(a, b) => {
                    if br.seen.contains(&a) || br.seen.contains(&b) {
                        continue;
                    }
                    let mut other = br.clone();
                    other.todo.push(b);
                    stack.push(other);
                    br.todo.push(a);
                }
                CNode::Au(a, b) => {
                    if br.seen.contains(&b) {
                        continue;
                    }
                    let reg = arena.mk(CNode::Ax(id));
                    let mut postpone = br.clone();
                    postpone.todo.push(a);
                    postpone.todo.push(reg);
                    stack.push(postpone);
                    br.todo.push(b);
                }
                CNode::Aw(a, b) => {
                    if br.seen.contains(&b) {
                        continue;
                    }
                    let reg = arena.mk(CNode::Ax(id));
                    let mut postpone = br.clone();
                    postpone.todo.push(a);
                    postpone.todo.push(reg);
                    stack.push(postpone);
                    br.todo.push(b);
                }
                CNode::Eu(a, b) => {
                    if br.seen.contains(&b) {
                        continue;
                    }
                    let reg = arena.mk(CNode::Ex(id));
                    let mut postpone = br.clone();
                    postpone.todo.push(a);
                    postpone.todo.push(reg);
                    stack.push(postpone);
                    br.todo.push(b);
                }
                CNode::Ew(a, b) => {
                    if br.seen.contains(&b) {
                        continue;
                    }
                    let reg = arena.mk(CNode::Ex(id));
                    let mut postpone = br.clone();
                    postpone.todo.push(a);
                    postpone.todo.push(reg);
                    stack.push(postpone);
                    br.todo.push(b);
                }
                CNode::Ax(_) | CNode::Ex(_) => {}
            }
        }
        if !dead {
            let mut members = br.seen.clone();
            members.sort_unstable();
            members.dedup();
            let st = TabState { pos: br.pos, neg: br.neg, members: members.into() };
            if !out.contains(&st) {
                out.push(st);
            }
            if out.len() > cap {
                return Err(Error::ResourceLimit(format!(
                    "CTL cover exceeded {cap} branches"
                )));
            }
        }
    }
    Ok(out)
}

pub const DEFAULT_CTL_STATE_CAP: usize = 1 << 18;

/// One successor group: the EX demand it serves (`None` for the default
/// group of demand-free states) and the candidate successor states.
struct SuccGroup {
    demand: Option<NodeId>,
    states: Vec<u32>,
}

struct Tableau {
    arena: Arena,
    states: Vec<TabState>,
    succs: Vec<Vec<SuccGroup>>,
    initial: Vec<u32>,
    alive: Vec<bool>,
    eventualities: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub enum CtlSatOutcome {
    Satisfiable(KripkeStructure),
    Unsat,
}

/// Decide satisfiability of a CTL formula (query connectives allowed; they
/// are removed by NNF). Returns an explicit model when satisfiable.
pub fn ctl_sat(phi: &Formula, state_cap: usize) -> Result<(CtlSatOutcome, usize)> {
    let nnf = to_nnf(phi, Mode::Monotonic)?;
    let mut arena = Arena::new();
    let root = arena.intern(&nnf)?;
    let mut tab = build_tableau(arena, root, state_cap)?;
    let explored = tab.states.len();
    prune(&mut tab);
    let alive_initial: Vec<u32> = tab
        .initial
        .iter()
        .copied()
        .filter(|s| tab.alive[*s as usize])
        .collect();
    if alive_initial.is_empty() {
        return Ok((CtlSatOutcome::Unsat, explored));
    }
    let model = extract_model(&tab, alive_initial[0])?;
    // Replay against the direct evaluator, on the original formula (it
    // handles query connectives itself).
    let set = eval_ctl_direct(&model, phi)?;
    if !model.initial.iter().all(|s| set.contains(*s as usize)) {
        return Err(Error::ReplayFailure(
            "extracted CTL model does not satisfy the formula".into(),
        ));
    }
    Ok((CtlSatOutcome::Satisfiable(model), explored))
}

fn build_tableau(mut arena: Arena, root: NodeId, cap: usize) -> Result<Tableau> {
    let mut states: Vec<TabState> = Vec::new();
    let mut index: HashMap<TabState, u32> = HashMap::new();
    let mut succs: Vec<Vec<SuccGroup>> = Vec::new();
    let mut queue: Vec<u32> = Vec::new();

    fn intern_states(
        cands: Vec<TabState>,
        cap: usize,
        states: &mut Vec<TabState>,
        index: &mut HashMap<TabState, u32>,
        succs: &mut Vec<Vec<SuccGroup>>,
        queue: &mut Vec<u32>,
    ) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(cands.len());
        for st in cands {
            let id = match index.get(&st) {
                Some(id) => *id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::ResourceLimit(format!(
                            "CTL tableau cap of {cap} candidate states exceeded"
                        )));
                    }
                    let id = states.len() as u32;
                    states.push(st.clone());
                    index.insert(st, id);
                    succs.push(Vec::new());
                    queue.push(id);
                    id
                }
            };
            out.push(id);
        }
        Ok(out)
    }

    let initial = {
        let cands = saturate(&mut arena, &[root], cap)?;
        intern_states(cands, cap, &mut states, &mut index, &mut succs, &mut queue)?
    };

    let mut qpos = 0;
    while qpos < queue.len() {
        let sid = queue[qpos];
        qpos += 1;
        let (ax_set, ex_demands) = {
            let st = &states[sid as usize];
            let mut ax = Vec::new();
            let mut ex = Vec::new();
            for m in st.members.iter() {
                match arena.node(*m) {
                    CNode::Ax(a) => ax.push(*a),
                    CNode::Ex(a) => ex.push(*a),
                    _ => {}
                }
            }
            ax.sort_unstable();
            ax.dedup();
            ex.sort_unstable();
            ex.dedup();
            (ax, ex)
        };
        let mut groups = Vec::new();
        if ex_demands.is_empty() {
            let cands = saturate(&mut arena, &ax_set, cap)?;
            let ids =
                intern_states(cands, cap, &mut states, &mut index, &mut succs, &mut queue)?;
            groups.push(SuccGroup { demand: None, states: ids });
        } else {
            for d in ex_demands {
                let mut base = ax_set.clone();
                base.push(d);
                let cands = saturate(&mut arena, &base, cap)?;
                let ids =
                    intern_states(cands, cap, &mut states, &mut index, &mut succs, &mut queue)?;
                groups.push(SuccGroup { demand: Some(d), states: ids });
            }
        }
        succs[sid as usize] = groups;
    }

    let mut eventualities: Vec<NodeId> = Vec::new();
    for st in &states {
        for m in st.members.iter() {
            if matches!(arena.node(*m), CNode::Au(..) | CNode::Eu(..))
                && !eventualities.contains(m)
            {
                eventualities.push(*m);
            }
        }
    }
    eventualities.sort_unstable();

    let alive = vec![true; states.len()];
    Ok(Tableau { arena, states, succs, initial, alive, eventualities })
}

/// Rank per eventuality and state: the least-fixpoint stage at which the
/// eventuality is fulfillable from the state; `u32::MAX` when it is not.
fn fulfillment_ranks(tab: &Tableau, e: NodeId) -> Vec<u32> {
    let n = tab.states.len();
    let b = match tab.arena.node(e) {
        CNode::Au(_, b) | CNode::Eu(_, b) => *b,
        _ => unreachable!(),
    };
    let is_au = matches!(tab.arena.node(e), CNode::Au(..));
    let mut rank = vec![u32::MAX; n];
    for (s, st) in tab.states.iter().enumerate() {
        if tab.alive[s] && st.has(b) {
            rank[s] = 0;
        }
    }
    let mut stage = 0u32;
    loop {
        stage += 1;
        let mut changed = false;
        for s in 0..n {
            if !tab.alive[s] || rank[s] != u32::MAX || !tab.states[s].has(e) {
                continue;
            }
            let ok = if is_au {
                // Every successor group must offer a fulfilled choice.
                !tab.succs[s].is_empty()
                    && tab.succs[s].iter().all(|g| {
                        g.states
                            .iter()
                            .any(|q| tab.alive[*q as usize] && rank[*q as usize] < stage)
                    })
            } else {
                // Only the regenerating EX demand must reach fulfilment.
                tab.succs[s].iter().any(|g| {
                    g.demand == Some(e)
                        && g.states
                            .iter()
                            .any(|q| tab.alive[*q as usize] && rank[*q as usize] < stage)
                })
            };
            if ok {
                rank[s] = stage;
                changed = true;
            }
        }
        if !changed {
            return rank;
        }
    }
}

fn prune(tab: &mut Tableau) {
    loop {
        let mut changed = false;
        // Successor existence per group.
        for s in 0..tab.states.len() {
            if !tab.alive[s] {
                continue;
            }
            let ok = !tab.succs[s].is_empty()
                && tab.succs[s].iter().all(|g| {
                    g.states.iter().any(|q| tab.alive[*q as usize])
                });
            if !ok {
                tab.alive[s] = false;
                changed = true;
            }
        }
        // Eventuality fulfilment.
        for e in tab.eventualities.clone() {
            let rank = fulfillment_ranks(tab, e);
            for s in 0..tab.states.len() {
                if tab.alive[s] && tab.states[s].has(e) && rank[s] == u32::MAX {
                    tab.alive[s] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Build a model rooted at an alive initial state. Model states are pairs
/// (tableau state, eventuality phase); in each phase one eventuality is
/// driven to fulfilment along its rank-decreasing structure, then the phase
/// advances round-robin, so every eventuality of every state is eventually
/// fulfilled on every path.
fn extract_model(tab: &Tableau, root: u32) -> Result<KripkeStructure> {
    let phases = tab.eventualities.len().max(1);
    let ranks: Vec<Vec<u32>> = tab
        .eventualities
        .iter()
        .map(|e| fulfillment_ranks(tab, *e))
        .collect();

    let pick_plain = |g: &SuccGroup| -> u32 {
        g.states
            .iter()
            .copied()
            .find(|q| tab.alive[*q as usize])
            .expect("pruning keeps a live successor per group")
    };
    let pick_ranked = |g: &SuccGroup, rk: &Vec<u32>, bound: u32| -> Option<u32> {
        g.states
            .iter()
            .copied()
            .filter(|q| tab.alive[*q as usize] && rk[*q as usize] < bound)
            .min_by_key(|q| rk[*q as usize])
    };

    let mut index: HashMap<(u32, usize), u32> = HashMap::new();
    let mut order: Vec<(u32, usize)> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut queue: Vec<(u32, usize)> = vec![(root, 0)];
    index.insert((root, 0), 0);
    order.push((root, 0));

    let mut qpos = 0;
    while qpos < queue.len() {
        let (s, phase) = queue[qpos];
        qpos += 1;
        let sid = index[&(s, phase)];
        let su = s as usize;

        let mut targets: Vec<(u32, usize)> = Vec::new();
        let active = if tab.eventualities.is_empty() {
            None
        } else {
            Some(tab.eventualities[phase])
        };
        let pending = match active {
            Some(e) => {
                let b = match tab.arena.node(e) {
                    CNode::Au(_, b) | CNode::Eu(_, b) => *b,
                    _ => unreachable!(),
                };
                tab.states[su].has(e) && !tab.states[su].has(b)
            }
            None => false,
        };
        if !pending {
            let next_phase = if phases == 0 { 0 } else { (phase + 1) % phases };
            for g in &tab.succs[su] {
                targets.push((pick_plain(g), next_phase));
            }
        } else {
            let e = active.unwrap();
            let ei = tab.eventualities.iter().position(|x| *x == e).unwrap();
            let rk = &ranks[ei];
            let my_rank = rk[su];
            debug_assert_ne!(my_rank, u32::MAX, "pruning removed unfulfillable states");
            let is_au = matches!(tab.arena.node(e), CNode::Au(..));
            for g in &tab.succs[su] {
                let choice = if is_au {
                    pick_ranked(g, rk, my_rank)
                        .expect("AU rank decreases along every group")
                } else if g.demand == Some(e) {
                    pick_ranked(g, rk, my_rank)
                        .expect("EU rank decreases along its own demand group")
                } else {
                    pick_plain(g)
                };
                // Stay in the phase until the eventuality is fulfilled.
                targets.push((choice, phase));
            }
        }

        for (t, ph) in targets {
            let key = (t, ph);
            let tid = match index.get(&key) {
                Some(id) => *id,
                None => {
                    let id = order.len() as u32;
                    index.insert(key, id);
                    order.push(key);
                    queue.push(key);
                    id
                }
            };
            edges.push((sid, tid));
        }
    }

    let n = order.len();
    let mut succs = vec![Vec::new(); n];
    for (a, b) in edges {
        if !succs[a as usize].contains(&b) {
            succs[a as usize].push(b);
        }
    }
    let labels: Vec<u64> = order.iter().map(|(s, _)| tab.states[*s as usize].pos).collect();
    let k = KripkeStructure {
        atoms: tab.arena.atoms.clone(),
        labels,
        succs,
        initial: vec![0],
    };
    k.check_total()?;
    Ok(k)
}

#[derive(Debug, Clone)]
pub enum CtlOutcome {
    Valid,
    CounterExample(KripkeStructure),
}

/// Valid iff the negation is unsatisfiable; countermodels are replayed
/// against the direct evaluator before being returned.
pub fn ctl_valid(phi: &Formula, state_cap: usize) -> Result<(CtlOutcome, usize)> {
    let (out, explored) = ctl_sat(&Formula::not(phi.clone()), state_cap)?;
    match out {
        CtlSatOutcome::Unsat => Ok((CtlOutcome::Valid, explored)),
        CtlSatOutcome::Satisfiable(model) => {
            let set = eval_ctl_direct(&model, phi)?;
            if model.initial.iter().any(|s| set.contains(*s as usize)) {
                return Err(Error::ReplayFailure(
                    "countermodel does not falsify the formula".into(),
                ));
            }
            Ok((CtlOutcome::CounterExample(model), explored))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Logic, Mode};
    use crate::parser::parse_formula;
    use crate::reduction::{canonical_reduction, equivalid_formula, ReductionTarget};

    fn f(s: &str) -> Formula {
        parse_formula(s, Logic::Ctl).unwrap()
    }

    #[test]
    fn contradiction_unsat() {
        let phi = Formula::and(Formula::atom("p"), Formula::not(Formula::atom("p")));
        let (out, _) = ctl_sat(&phi, 1000).unwrap();
        assert!(matches!(out, CtlSatOutcome::Unsat));
    }

    #[test]
    fn ag_ef_contradiction_unsat() {
        let (out, _) = ctl_sat(&f("AG p & EF !p"), 10_000).unwrap();
        assert!(matches!(out, CtlSatOutcome::Unsat));
    }

    #[test]
    fn simple_models_replay() {
        for s in ["AG p", "E(p U q)", "A(p U q) & EX p", "AF q | EG p", "AG (p | q) & EF q"] {
            let (out, _) = ctl_sat(&f(s), 50_000).unwrap();
            match out {
                CtlSatOutcome::Satisfiable(model) => {
                    // replay is checked inside ctl_sat; sanity-check shape
                    assert!(!model.initial.is_empty());
                    model.check_total().unwrap();
                }
                CtlSatOutcome::Unsat => panic!("{s} should be satisfiable"),
            }
        }
    }

    #[test]
    fn valid_examples() {
        let (out, _) = ctl_valid(&Formula::t(), 1000).unwrap();
        assert!(matches!(out, CtlOutcome::Valid));
        let (out, _) = ctl_valid(&f("A(p U q) -> AF q"), 50_000).unwrap();
        assert!(matches!(out, CtlOutcome::Valid));
        let (out, _) = ctl_valid(&f("EF p"), 10_000).unwrap();
        assert!(matches!(out, CtlOutcome::CounterExample(_)));
    }

    #[test]
    fn ag_substitution_rule_valid() {
        // AG(a <-> b) entails AG(c[a] <-> c[b]); via the equivalid formula
        // in non-monotonic mode (the biconditional sits below AG).
        let lhs = f("AG (a <-> b)");
        let rhs = f("AG (c[a] <-> c[b])");
        let query = crate::reduction::build_query(
            crate::reduction::QueryKind::Implies,
            &lhs,
            Some(&rhs),
            Mode::NonMonotonic,
        )
        .unwrap();
        let e = equivalid_formula(&query, Logic::Ctl, Mode::NonMonotonic, ReductionTarget::Validity);
        let (out, _) = ctl_valid(&e, 200_000).unwrap();
        assert!(matches!(out, CtlOutcome::Valid));
    }

    #[test]
    fn ctl_shannon_not_valid() {
        let phi = f("c[p] <-> ((p & c[true]) | (!p & c[false]))");
        let reduced = canonical_reduction(&phi, Logic::Ctl, Mode::Monotonic, 1_000_000).unwrap();
        let (out, _) = ctl_valid(&reduced, 200_000).unwrap();
        assert!(matches!(out, CtlOutcome::CounterExample(_)));
        let e = equivalid_formula(&phi, Logic::Ctl, Mode::Monotonic, ReductionTarget::Validity);
        let (out, _) = ctl_valid(&e, 200_000).unwrap();
        assert!(matches!(out, CtlOutcome::CounterExample(_)));
    }
}
