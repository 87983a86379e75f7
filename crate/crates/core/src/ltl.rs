//! LTL validity and satisfiability via a tableau-style generalized Büchi
//! construction and SCC-based emptiness, producing lasso counterexamples.
//!
//! States are sets of closure subformulas: the literal constraints on the
//! letter read in the state, the obligations for the next position, and the
//! strong-until subformulas whose fulfilment was postponed. One acceptance
//! set per until subformula contains exactly the states where the until is
//! absent (it was either not required or fulfilled on the spot).

use crate::error::{Error, Result};
use crate::formula::{to_nnf, Atom, Formula, Kind, Mode};
use crate::kripke::Lasso;
use std::collections::HashMap;

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LNode {
    True,
    False,
    Lit(u32, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    Until(NodeId, NodeId),
    WUntil(NodeId, NodeId),
}

/// Hash-consed store of NNF LTL formulas with constant folding. `G` and `F`
/// are normalized to `W`/`U` internally.
pub struct Arena {
    pub atoms: Vec<Atom>,
    atom_idx: HashMap<Atom, u32>,
    nodes: Vec<LNode>,
    ids: HashMap<LNode, NodeId>,
}

impl Arena {
    pub fn new() -> Self {
        let mut a = Arena {
            atoms: Vec::new(),
            atom_idx: HashMap::new(),
            nodes: Vec::new(),
            ids: HashMap::new(),
        };
        a.mk(LNode::True);
        a.mk(LNode::False);
        a
    }

    pub fn node(&self, id: NodeId) -> &LNode {
        &self.nodes[id as usize]
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn mk(&mut self, node: LNode) -> NodeId {
        if let Some(id) = self.ids.get(&node) {
            return *id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        id
    }

    pub const TRUE: NodeId = 0;
    pub const FALSE: NodeId = 1;

    fn atom_id(&mut self, a: &Atom) -> Result<u32> {
        if let Some(i) = self.atom_idx.get(a) {
            return Ok(*i);
        }
        let i = self.atoms.len() as u32;
        if i >= 64 {
            return Err(Error::Unsupported(
                "more than 64 atoms in an LTL formula".into(),
            ));
        }
        self.atoms.push(a.clone());
        self.atom_idx.insert(a.clone(), i);
        Ok(i)
    }

    fn lit(&mut self, a: &Atom, positive: bool) -> Result<NodeId> {
        let i = self.atom_id(a)?;
        Ok(self.mk(LNode::Lit(i, positive)))
    }

    fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == Self::FALSE || b == Self::FALSE {
            return Self::FALSE;
        }
        if a == Self::TRUE {
            return b;
        }
        if b == Self::TRUE {
            return a;
        }
        if a == b {
            return a;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.mk(LNode::And(a, b))
    }

    fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == Self::TRUE || b == Self::TRUE {
            return Self::TRUE;
        }
        if a == Self::FALSE {
            return b;
        }
        if b == Self::FALSE {
            return a;
        }
        if a == b {
            return a;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.mk(LNode::Or(a, b))
    }

    fn next(&mut self, a: NodeId) -> NodeId {
        if a == Self::TRUE || a == Self::FALSE {
            return a;
        }
        self.mk(LNode::Next(a))
    }

    fn until(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if b == Self::TRUE || b == Self::FALSE {
            return b;
        }
        if a == Self::FALSE {
            return b;
        }
        self.mk(LNode::Until(a, b))
    }

    fn wuntil(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if b == Self::TRUE || a == Self::TRUE {
            return Self::TRUE;
        }
        if a == Self::FALSE {
            return b;
        }
        self.mk(LNode::WUntil(a, b))
    }

    /// Intern an NNF LTL formula.
    pub fn intern(&mut self, phi: &Formula) -> Result<NodeId> {
        Ok(match phi.kind() {
            Kind::True => Self::TRUE,
            Kind::False => Self::FALSE,
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
            Kind::Next(x) => {
                let a = self.intern(x)?;
                self.next(a)
            }
            Kind::Until(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                self.until(a, b)
            }
            Kind::WeakUntil(l, r) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                self.wuntil(a, b)
            }
            Kind::Globally(x) => {
                let a = self.intern(x)?;
                self.wuntil(a, Self::FALSE)
            }
            Kind::Finally(x) => {
                let a = self.intern(x)?;
                self.until(Self::TRUE, a)
            }
            other => {
                return Err(Error::Unsupported(format!(
                    "LTL automaton: `{}` is not NNF LTL",
                    crate::formula::op_name(other)
                )))
            }
        })
    }

    /// Reconstruct a formula from a node, for reporting.
    pub fn extern_formula(&self, id: NodeId) -> Formula {
        match self.node(id) {
            LNode::True => Formula::t(),
            LNode::False => Formula::f(),
            LNode::Lit(i, true) => Formula::atom(self.atoms[*i as usize].clone()),
            LNode::Lit(i, false) => Formula::neg_atom(self.atoms[*i as usize].clone()),
            LNode::And(a, b) => Formula::and(self.extern_formula(*a), self.extern_formula(*b)),
            LNode::Or(a, b) => Formula::or(self.extern_formula(*a), self.extern_formula(*b)),
            LNode::Next(a) => Formula::next(self.extern_formula(*a)),
            LNode::Until(a, b) => {
                Formula::until(self.extern_formula(*a), self.extern_formula(*b))
            }
            LNode::WUntil(a, b) => {
                Formula::weak_until(self.extern_formula(*a), self.extern_formula(*b))
            }
        }
    }
}

impl Default for Arena {
    fn default() -> Self {
        Arena::new()
    }
}

/// Subformula closure with the until expansions: the reachable interned
/// nodes plus `X(u)` for every until/weak-until `u`.
pub fn ltl_closure(phi: &Formula) -> Result<Vec<Formula>> {
    let nnf = to_nnf(phi, Mode::Monotonic)?;
    let mut arena = Arena::new();
    let root = arena.intern(&nnf)?;
    let mut seen = vec![false; arena.n_nodes()];
    let mut stack = vec![root];
    let mut ids = Vec::new();
    while let Some(id) = stack.pop() {
        if seen[id as usize] {
            continue;
        }
        seen[id as usize] = true;
        ids.push(id);
        match arena.node(id) {
            LNode::And(a, b) | LNode::Or(a, b) | LNode::Until(a, b) | LNode::WUntil(a, b) => {
                stack.push(*a);
                stack.push(*b);
            }
            LNode::Next(a) => stack.push(*a),
            _ => {}
        }
    }
    let mut out: Vec<Formula> = Vec::new();
    for id in &ids {
        out.push(arena.extern_formula(*id));
        if matches!(arena.node(*id), LNode::Until(..) | LNode::WUntil(..)) {
            out.push(Formula::next(arena.extern_formula(*id)));
        }
    }
    Ok(out)
}

/// One automaton state: letter constraints plus obligations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GbaState {
    pub pos: u64,
    pub neg: u64,
    /// Formulas that must hold from the next position.
    pub nexts: Box<[NodeId]>,
    /// Strong untils required now and postponed.
    pub owed: Box<[NodeId]>,
}

pub struct Gba {
    pub arena: Arena,
    pub states: Vec<GbaState>,
    pub transitions: Vec<Vec<u32>>,
    pub initial: Vec<u32>,
    /// Per strong until: the states where it is NOT owed.
    pub acceptance: Vec<(NodeId, Vec<bool>)>,
    pub states_explored: usize,
}

#[derive(Clone)]
struct Branch {
    pos: u64,
    neg: u64,
    nexts: Vec<NodeId>,
    owed: Vec<NodeId>,
    seen: Vec<NodeId>,
    todo: Vec<NodeId>,
}

impl Branch {
    fn content(mut self) -> GbaState {
        self.nexts.sort_unstable();
        self.nexts.dedup();
        self.owed.sort_unstable();
        self.owed.dedup();
        GbaState {
            pos: self.pos,
            neg: self.neg,
            nexts: self.nexts.into_boxed_slice(),
            owed: self.owed.into_boxed_slice(),
        }
    }
}

/// Expand a set of obligations into all saturated states compatible with it.
fn saturate(arena: &Arena, base: &[NodeId], cap: usize) -> Result<Vec<GbaState>> {
    let mut out: Vec<GbaState> = Vec::new();
    let mut stack: Vec<Branch> = vec![Branch {
        pos: 0,
        neg: 0,
        nexts: Vec::new(),
        owed: Vec::new(),
        seen: Vec::new(),
        todo: base.to_vec(),
    }];
    while let Some(mut br) = stack.pop() {
        let mut dead = false;
        while let Some(id) = br.todo.pop() {
            if br.seen.contains(&id) {
                continue;
            }
            br.seen.push(id);
            match arena.node(id) {
                LNode::True => {}
                LNode::False => {
                    dead = true;
                    break;
                }
                LNode::Lit(i, positive) => {
                    let bit = 1u64 << i;
                    if *positive {
                        br.pos |= bit;
                    } else {
                        br.neg |= bit;
                    }
                    if br.pos & br.neg != 0 {
                        dead = true;
                        break;
                    }
                }
                LNode::And(a, b) => {
                    br.todo.push(*a);
                    br.todo.push(*b);
                }
                LNode::Or(a, b) => {
                    if br.seen.contains(a) || br.seen.contains(b) {
                        continue;
                    }
                    let mut other = br.clone();
                    other.todo.push(*b);
                    stack.push(other);
                    br.todo.push(*a);
                }
                LNode::Next(a) => br.nexts.push(*a),
                LNode::Until(a, b) => {
                    if br.seen.contains(b) {
                        continue;
                    }
                    let mut postpone = br.clone();
                    postpone.todo.push(*a);
                    postpone.nexts.push(id);
                    postpone.owed.push(id);
                    stack.push(postpone);
                    br.todo.push(*b);
                }
                LNode::WUntil(a, b) => {
                    if br.seen.contains(b) {
                        continue;
                    }
                    let mut postpone = br.clone();
                    postpone.todo.push(*a);
                    postpone.nexts.push(id);
                    stack.push(postpone);
                    br.todo.push(*b);
                }
            }
        }
        if !dead {
            let state = br.content();
            if !out.contains(&state) {
                out.push(state);
            }
            if out.len() > cap {
                return Err(Error::ResourceLimit(format!(
                    "GBA cover exceeded {cap} branches"
                )));
            }
        }
    }
    Ok(out)
}

pub const DEFAULT_GBA_STATE_CAP: usize = 200_000;

/// Build the generalized Büchi automaton for an NNF LTL formula: its
/// language is exactly the set of models of the formula.
pub fn ltl_to_gba(phi: &Formula, state_cap: usize) -> Result<Gba> {
    let nnf = to_nnf(phi, Mode::Monotonic)?;
    let mut arena = Arena::new();
    let root = arena.intern(&nnf)?;
    build_gba(arena, root, state_cap)
}

fn build_gba(arena: Arena, root: NodeId, cap: usize) -> Result<Gba> {
    let mut states: Vec<GbaState> = Vec::new();
    let mut index: HashMap<GbaState, u32> = HashMap::new();
    let mut transitions: Vec<Vec<u32>> = Vec::new();
    let mut cover_memo: HashMap<Vec<NodeId>, Vec<u32>> = HashMap::new();
    let mut queue: Vec<u32> = Vec::new();

    fn add_states(
        cands: Vec<GbaState>,
        cap: usize,
        states: &mut Vec<GbaState>,
        index: &mut HashMap<GbaState, u32>,
        transitions: &mut Vec<Vec<u32>>,
        queue: &mut Vec<u32>,
    ) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(cands.len());
        for st in cands {
            let id = match index.get(&st) {
                Some(id) => *id,
                None => {
                    let id = states.len() as u32;
                    if states.len() >= cap {
                        return Err(Error::ResourceLimit(format!(
                            "GBA state cap of {cap} states exceeded"
                        )));
                    }
                    states.push(st.clone());
                    index.insert(st, id);
                    transitions.push(Vec::new());
                    queue.push(id);
                    id
                }
            };
            out.push(id);
        }
        Ok(out)
    }

    let initial = {
        let cands = saturate(&arena, &[root], cap)?;
        add_states(cands, cap, &mut states, &mut index, &mut transitions, &mut queue)?
    };

    let mut qpos = 0usize;
    while qpos < queue.len() {
        let sid = queue[qpos];
        qpos += 1;
        let base: Vec<NodeId> = states[sid as usize].nexts.to_vec();
        let succ_ids = match cover_memo.get(&base) {
            Some(ids) => ids.clone(),
            None => {
                let cands = saturate(&arena, &base, cap)?;
                let ids = add_states(
                    cands,
                    cap,
                    &mut states,
                    &mut index,
                    &mut transitions,
                    &mut queue,
                )?;
                cover_memo.insert(base, ids.clone());
                ids
            }
        };
        transitions[sid as usize] = succ_ids;
    }

    // Acceptance sets for the untils that are ever owed.
    let mut untils: Vec<NodeId> = Vec::new();
    for st in &states {
        for u in st.owed.iter() {
            if !untils.contains(u) {
                untils.push(*u);
            }
        }
    }
    untils.sort_unstable();
    let acceptance = untils
        .into_iter()
        .map(|u| {
            let set: Vec<bool> = states.iter().map(|st| !st.owed.contains(&u)).collect();
            (u, set)
        })
        .collect();

    let states_explored = states.len();
    Ok(Gba { arena, states, transitions, initial, acceptance, states_explored })
}

/// Emptiness: the language is nonempty iff some reachable nontrivial SCC
/// meets every acceptance set; returns an accepting lasso in that case.
pub fn gba_empty(gba: &Gba) -> Option<Lasso> {
    let n = gba.states.len();
    if n == 0 {
        return None;
    }
    // Iterative Tarjan.
    let mut idx = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut scc_of = vec![u32::MAX; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut sccs: Vec<Vec<u32>> = Vec::new();
    let mut counter = 0u32;

    enum Frame {
        Enter(u32),
        Resume(u32, usize),
    }
    let mut call: Vec<Frame> = Vec::new();
    for root in gba.initial.iter() {
        if idx[*root as usize] != u32::MAX {
            continue;
        }
        call.push(Frame::Enter(*root));
        while let Some(frame) = call.pop() {
            match frame {
                Frame::Enter(v) => {
                    let vu = v as usize;
                    if idx[vu] != u32::MAX {
                        // Already visited: propagate into the parent frame.
                        if on_stack[vu] {
                            if let Some(Frame::Resume(parent, _)) = call.last() {
                                let pu = *parent as usize;
                                low[pu] = low[pu].min(idx[vu]);
                            }
                        }
                        continue;
                    }
                    idx[vu] = counter;
                    low[vu] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[vu] = true;
                    call.push(Frame::Resume(v, 0));
                }
                Frame::Resume(v, mut i) => {
                    let vu = v as usize;
                    let mut descended = false;
                    while i < gba.transitions[vu].len() {
                        let w = gba.transitions[vu][i];
                        let wu = w as usize;
                        if idx[wu] == u32::MAX {
                            call.push(Frame::Resume(v, i + 1));
                            call.push(Frame::Enter(w));
                            descended = true;
                            break;
                        }
                        if on_stack[wu] {
                            low[vu] = low[vu].min(idx[wu]);
                        }
                        i += 1;
                    }
                    if descended {
                        continue;
                    }
                    if low[vu] == idx[vu] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w as usize] = false;
                            scc_of[w as usize] = sccs.len() as u32;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        sccs.push(comp);
                    }
                    if let Some(Frame::Resume(parent, _)) = call.last() {
                        let pu = *parent as usize;
                        low[pu] = low[pu].min(low[vu]);
                    }
                }
            }
        }
    }

    // Deterministic pick: the accepting SCC with the smallest member index.
    let mut best: Option<&Vec<u32>> = None;
    for comp in &sccs {
        let nontrivial =
            comp.len() > 1 || gba.transitions[comp[0] as usize].contains(&comp[0]);
        if !nontrivial {
            continue;
        }
        let accepting = gba
            .acceptance
            .iter()
            .all(|(_, set)| comp.iter().any(|s| set[*s as usize]));
        if !accepting {
            continue;
        }
        match best {
            None => best = Some(comp),
            Some(b) if comp[0] < b[0] => best = Some(comp),
            _ => {}
        }
    }
    let comp = best?;

    // Stem: BFS from the initial states to the smallest SCC member.
    let entry = comp[0];
    let stem_states = bfs_path(gba, &gba.initial, |s| s == entry, |_| true)?;
    // Cycle: inside the SCC, visit a representative of every acceptance set
    // and return to the entry.
    let in_comp = |s: u32| scc_of[s as usize] == scc_of[entry as usize];
    let mut cycle_states: Vec<u32> = vec![entry];
    let mut cur = entry;
    for (_, set) in &gba.acceptance {
        if cycle_states.iter().any(|s| set[*s as usize]) {
            continue;
        }
        let target = comp.iter().copied().find(|s| set[*s as usize])?;
        if cur != target {
            let seg = bfs_path(gba, &[cur], |s| s == target, in_comp)?;
            cycle_states.extend_from_slice(&seg[1..]);
            cur = target;
        }
    }
    // Close the loop back to the entry.
    let back = bfs_path_nonempty(gba, cur, entry, in_comp)?;
    cycle_states.extend_from_slice(&back[1..back.len() - 1]);

    let letter = |s: u32| gba.states[s as usize].pos;
    let stem: Vec<u64> = stem_states[..stem_states.len() - 1]
        .iter()
        .map(|s| letter(*s))
        .collect();
    let cycle: Vec<u64> = cycle_states.iter().map(|s| letter(*s)).collect();
    Some(Lasso { atoms: gba.arena.atoms.clone(), stem, cycle })
}

/// Shortest path from any source to a goal, restricted to allowed states.
fn bfs_path(
    gba: &Gba,
    sources: &[u32],
    goal: impl Fn(u32) -> bool,
    allowed: impl Fn(u32) -> bool,
) -> Option<Vec<u32>> {
    let n = gba.states.len();
    let mut parent = vec![u32::MAX; n];
    let mut seen = vec![false; n];
    let mut queue: std::collections::VecDeque<u32> = Default::default();
    for s in sources {
        if !seen[*s as usize] && allowed(*s) {
            seen[*s as usize] = true;
            queue.push_back(*s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut path = vec![v];
            let mut cur = v;
            while parent[cur as usize] != u32::MAX {
                cur = parent[cur as usize];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for w in &gba.transitions[v as usize] {
            if !seen[*w as usize] && allowed(*w) {
                seen[*w as usize] = true;
                parent[*w as usize] = v;
                queue.push_back(*w);
            }
        }
    }
    None
}

/// Path of length >= 1 from `from` back to `to` (used to close cycles; a
/// direct edge yields `[from, to]`).
fn bfs_path_nonempty(
    gba: &Gba,
    from: u32,
    to: u32,
    allowed: impl Fn(u32) -> bool,
) -> Option<Vec<u32>> {
    let firsts: Vec<u32> = gba.transitions[from as usize]
        .iter()
        .copied()
        .filter(|w| allowed(*w))
        .collect();
    if firsts.contains(&to) {
        return Some(vec![from, to]);
    }
    let tail = bfs_path(gba, &firsts, |s| s == to, allowed)?;
    let mut path = vec![from];
    path.extend_from_slice(&tail);
    Some(path)
}

/// Outcome of an LTL validity check.
#[derive(Debug, Clone)]
pub enum LtlOutcome {
    Valid,
    CounterExample(Lasso),
}

/// Valid iff the automaton of the negation has empty language. Returned
/// counterexamples are replay-verified against the direct lasso evaluator.
pub fn ltl_valid(phi: &Formula, state_cap: usize) -> Result<(LtlOutcome, usize)> {
    let gba = ltl_to_gba(&Formula::not(phi.clone()), state_cap)?;
    let explored = gba.states_explored;
    match gba_empty(&gba) {
        None => Ok((LtlOutcome::Valid, explored)),
        Some(lasso) => {
            if crate::kripke::eval_lasso_direct(&lasso, phi, 0)? {
                return Err(Error::ReplayFailure(format!(
                    "lasso {} does not falsify the formula",
                    lasso.render()
                )));
            }
            Ok((LtlOutcome::CounterExample(lasso), explored))
        }
    }
}

#[derive(Debug, Clone)]
pub enum LtlSatOutcome {
    Unsat,
    Model(Lasso),
}

/// Satisfiable iff the automaton of the formula has nonempty language.
pub fn ltl_sat(phi: &Formula, state_cap: usize) -> Result<(LtlSatOutcome, usize)> {
    let gba = ltl_to_gba(phi, state_cap)?;
    let explored = gba.states_explored;
    match gba_empty(&gba) {
        None => Ok((LtlSatOutcome::Unsat, explored)),
        Some(lasso) => {
            if !crate::kripke::eval_lasso_direct(&lasso, phi, 0)? {
                return Err(Error::ReplayFailure(format!(
                    "lasso {} does not satisfy the formula",
                    lasso.render()
                )));
            }
            Ok((LtlSatOutcome::Model(lasso), explored))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Logic, Mode};
    use crate::kripke::eval_lasso_all;
    use crate::parser::parse_formula;
    use crate::reduction::{equivalid_formula, ReductionTarget};

    fn f(s: &str) -> Formula {
        parse_formula(s, Logic::Ltl).unwrap()
    }

    #[test]
    fn closure_examples() {
        let c = ltl_closure(&f("p")).unwrap();
        assert_eq!(c, vec![Formula::atom("p")]);
        let c = ltl_closure(&f("p U q")).unwrap();
        assert!(c.contains(&f("p U q")));
        assert!(c.contains(&Formula::atom("p")));
        assert!(c.contains(&Formula::atom("q")));
        assert!(c.contains(&Formula::next(f("p U q"))));
        let phi = f("(p U q) | G (p & X q)");
        assert!(ltl_closure(&phi).unwrap().len() as u64 <= 2 * phi.size());
    }

    #[test]
    fn gba_false_empty() {
        let gba = ltl_to_gba(&Formula::f(), 1000).unwrap();
        assert!(gba_empty(&gba).is_none());
    }

    #[test]
    fn gba_gfp_examples() {
        // GF p is satisfiable; its models contain p infinitely often.
        let gba = ltl_to_gba(&f("G F p"), 1000).unwrap();
        let lasso = gba_empty(&gba).expect("GF p is satisfiable");
        assert!(eval_lasso_all(&lasso, &f("G F p")).unwrap()[0]);
        // GF p & FG !p is unsatisfiable.
        let gba = ltl_to_gba(&f("G F p & F G !p"), 1000).unwrap();
        assert!(gba_empty(&gba).is_none());
    }

    #[test]
    fn ltl_valid_examples() {
        let (out, _) = ltl_valid(&f("p | !p"), 1000).unwrap();
        assert!(matches!(out, LtlOutcome::Valid));
        let (out, _) = ltl_valid(&f("p U q <-> (q | (p & X (p U q)))"), 10_000).unwrap();
        assert!(matches!(out, LtlOutcome::Valid));
        // `p` is not valid; the witness starts with !p.
        let (out, _) = ltl_valid(&f("p"), 1000).unwrap();
        match out {
            LtlOutcome::CounterExample(lasso) => {
                assert!(!lasso.has_atom(0, &Atom::new("p")));
            }
            LtlOutcome::Valid => panic!("p is not valid"),
        }
    }

    #[test]
    fn equivalid_of_eq3_is_valid() {
        let phi = f("c[G F p] <-> ((G F p & c[true]) | c[false])");
        let e = equivalid_formula(&phi, Logic::Ltl, Mode::Monotonic, ReductionTarget::Validity);
        let (out, _) = ltl_valid(&e, 100_000).unwrap();
        assert!(matches!(out, LtlOutcome::Valid), "equivalid formula of the GF identity");
        // The bare decontextualization is NOT valid.
        let art = crate::reduction::decontextualize(&phi);
        let (out, _) = ltl_valid(&art.decon, 100_000).unwrap();
        assert!(matches!(out, LtlOutcome::CounterExample(_)));
    }

    #[test]
    fn shannon_not_valid_in_ltl() {
        let phi = f("c[p] <-> ((p & c[true]) | (!p & c[false]))");
        let e = equivalid_formula(&phi, Logic::Ltl, Mode::Monotonic, ReductionTarget::Validity);
        let (out, _) = ltl_valid(&e, 100_000).unwrap();
        assert!(matches!(out, LtlOutcome::CounterExample(_)));
    }

    #[test]
    fn weak_until_needs_no_acceptance() {
        // G p (= p W false) is satisfiable with the all-p loop.
        let (out, _) = ltl_sat(&f("G p"), 1000).unwrap();
        match out {
            LtlSatOutcome::Model(lasso) => {
                for pos in 0..lasso.positions() {
                    assert!(lasso.has_atom(pos, &Atom::new("p")));
                }
            }
            LtlSatOutcome::Unsat => panic!("G p is satisfiable"),
        }
    }

    #[test]
    fn state_cap_enforced() {
        let phi = f("(p1 U q1) & (p2 U q2) & (p3 U q3) & (p4 U q4)");
        assert!(matches!(ltl_to_gba(&phi, 2), Err(Error::ResourceLimit(_))));
    }
}
