//! The top-level checking pipeline: build the query formula, apply one of
//! the reductions (or the bounded search), dispatch to the right backend
//! and package the verdict with a replay-verified counterexample.

use crate::ctl::{ctl_sat, ctl_valid, CtlOutcome, CtlSatOutcome};
use crate::error::{Error, Result};
use crate::formula::{Formula, Instantiation, Logic, Mode};
use crate::kripke::{KripkeStructure, Lasso};
use crate::ltl::{ltl_sat, ltl_valid, LtlOutcome, LtlSatOutcome};
use crate::prop::{prop_sat, prop_valid, PropOutcome, PropValuation, SatResult};
use crate::reduction::{
    build_query, canonical_instantiation, canonical_reduction, equivalid_formula,
    ReductionTarget,
};
pub use crate::reduction::QueryKind;
use crate::search::{refute, CexModel, RefuteResult, SearchBudget};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Canonical,
    Equivalid,
    Search,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Canonical => "canonical",
            Method::Equivalid => "equivalid",
            Method::Search => "search",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub mode: Mode,
    pub canonical_node_budget: u64,
    pub gba_state_cap: usize,
    pub ctl_state_cap: usize,
    pub sat_conflict_budget: Option<u64>,
    pub search: SearchBudget,
    /// Check equivalences as a single biconditional instead of two
    /// directional implications.
    pub single_query: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mode: Mode::Monotonic,
            canonical_node_budget: 1_000_000,
            gba_state_cap: crate::ltl::DEFAULT_GBA_STATE_CAP,
            ctl_state_cap: crate::ctl::DEFAULT_CTL_STATE_CAP,
            sat_conflict_budget: None,
            search: SearchBudget::default(),
            single_query: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Query {
    pub kind: QueryKind,
    pub logic: Logic,
    pub lhs: Formula,
    pub rhs: Option<Formula>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Valid,
    NotValid,
    Satisfiable,
    Unsatisfiable,
    Equivalent,
    LhsImpliesRhs,
    RhsImpliesLhs,
    Incomparable,
    Refuted,
    Unknown,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Valid => "valid",
            Outcome::NotValid => "not_valid",
            Outcome::Satisfiable => "satisfiable",
            Outcome::Unsatisfiable => "unsatisfiable",
            Outcome::Equivalent => "equivalent",
            Outcome::LhsImpliesRhs => "lhs_implies_rhs",
            Outcome::RhsImpliesLhs => "rhs_implies_lhs",
            Outcome::Incomparable => "incomparable",
            Outcome::Refuted => "refuted",
            Outcome::Unknown => "unknown",
        }
    }

    /// Exit-code mapping: does the checked claim hold?
    pub fn claim_holds(self) -> Option<bool> {
        match self {
            Outcome::Valid | Outcome::Satisfiable | Outcome::Equivalent => Some(true),
            Outcome::NotValid
            | Outcome::Unsatisfiable
            | Outcome::LhsImpliesRhs
            | Outcome::RhsImpliesLhs
            | Outcome::Incomparable
            | Outcome::Refuted => Some(false),
            Outcome::Unknown => None,
        }
    }
}

/// A replay-verified countermodel (or witness model for satisfiability).
#[derive(Debug, Clone)]
pub enum Counterexample {
    Valuation(PropValuation),
    Lasso(Lasso),
    Kripke(KripkeStructure),
}

impl Counterexample {
    pub fn render(&self) -> String {
        match self {
            Counterexample::Valuation(beta) => {
                let items: Vec<String> = beta
                    .iter()
                    .map(|(a, v)| format!("{a}={}", if *v { 1 } else { 0 }))
                    .collect();
                format!("valuation {{{}}}", items.join(", "))
            }
            Counterexample::Lasso(l) => format!("lasso {}", l.render()),
            Counterexample::Kripke(k) => {
                let mut out = format!("kripke states {}", k.n_states());
                for s in 0..k.n_states() {
                    let atoms: Vec<&str> = k
                        .atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| k.labels[s] & (1 << i) != 0)
                        .map(|(_, a)| a.as_str())
                        .collect();
                    let succ: Vec<String> =
                        k.succs[s].iter().map(|t| t.to_string()).collect();
                    out.push_str(&format!(
                        "; {s}:{{{}}}->[{}]",
                        atoms.join(","),
                        succ.join(",")
                    ));
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Stats {
    pub nodes_built: u64,
    pub states_explored: u64,
    pub wall_ms: u128,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    pub method: Method,
    pub backend: String,
    /// Instantiation part of a counterexample, when one is known (the
    /// canonical instantiation for the canonical method, the enumerated one
    /// for search).
    pub instantiation: Option<Instantiation>,
    pub counterexample: Option<Counterexample>,
    pub stats: Stats,
}

struct ValidityAnswer {
    valid: bool,
    counterexample: Option<Counterexample>,
    instantiation: Option<Instantiation>,
    backend: String,
    nodes_built: u64,
    states_explored: u64,
}

fn backend_valid(
    phi: &Formula,
    logic: Logic,
    opts: &CheckOptions,
) -> Result<(bool, Option<Counterexample>, String, u64)> {
    match logic {
        Logic::Prop => match prop_valid(phi, opts.sat_conflict_budget)? {
            PropOutcome::Valid => Ok((true, None, "cdcl".into(), 0)),
            PropOutcome::CounterExample(beta) => {
                Ok((false, Some(Counterexample::Valuation(beta)), "cdcl".into(), 0))
            }
        },
        Logic::Ltl => match ltl_valid(phi, opts.gba_state_cap)? {
            (LtlOutcome::Valid, n) => Ok((true, None, "gba".into(), n as u64)),
            (LtlOutcome::CounterExample(lasso), n) => {
                Ok((false, Some(Counterexample::Lasso(lasso)), "gba".into(), n as u64))
            }
        },
        Logic::Ctl => match ctl_valid(phi, opts.ctl_state_cap)? {
            (CtlOutcome::Valid, n) => Ok((true, None, "ctl-tableau".into(), n as u64)),
            (CtlOutcome::CounterExample(k), n) => {
                Ok((false, Some(Counterexample::Kripke(k)), "ctl-tableau".into(), n as u64))
            }
        },
        Logic::Mu => Err(Error::Unsupported(
            "no validity backend for the mu-calculus; use --method search or `reduce`".into(),
        )),
    }
}

fn decide_validity(
    query: &Formula,
    logic: Logic,
    method: Method,
    opts: &CheckOptions,
) -> Result<ValidityAnswer> {
    match method {
        Method::Canonical => {
            let sigma = canonical_instantiation(query, logic, opts.mode);
            let reduced =
                canonical_reduction(query, logic, opts.mode, opts.canonical_node_budget)?;
            let nodes = reduced.size();
            let (valid, cex, backend, states) = backend_valid(&reduced, logic, opts)?;
            Ok(ValidityAnswer {
                valid,
                instantiation: if valid { None } else { Some(sigma) },
                counterexample: cex,
                backend,
                nodes_built: nodes,
                states_explored: states,
            })
        }
        Method::Equivalid => {
            let reduced = equivalid_formula(query, logic, opts.mode, ReductionTarget::Validity);
            let nodes = reduced.size();
            let (valid, cex, backend, states) = backend_valid(&reduced, logic, opts)?;
            Ok(ValidityAnswer {
                valid,
                instantiation: None,
                counterexample: cex,
                backend,
                nodes_built: nodes,
                states_explored: states,
            })
        }
        Method::Search => match refute(query, logic, &opts.search)? {
            RefuteResult::CounterExample { sigma, model } => Ok(ValidityAnswer {
                valid: false,
                instantiation: Some(sigma),
                counterexample: Some(match model {
                    CexModel::Valuation(b) => Counterexample::Valuation(b),
                    CexModel::Lasso(l) => Counterexample::Lasso(l),
                    CexModel::Kripke(k) => Counterexample::Kripke(k),
                }),
                backend: "search".into(),
                nodes_built: 0,
                states_explored: 0,
            }),
            RefuteResult::Exhausted { candidates } => Ok(ValidityAnswer {
                valid: true, // caller maps this to Unknown for search
                instantiation: None,
                counterexample: None,
                backend: "search".into(),
                nodes_built: 0,
                states_explored: candidates,
            }),
        },
    }
}

/// Run a check. Equivalences run as two directional implications by
/// default; `--single-query` uses one biconditional and reports
/// equivalent/refuted only.
pub fn check(query: &Query, method: Method, opts: &CheckOptions) -> Result<Verdict> {
    let start = Instant::now();
    let mut verdict = check_inner(query, method, opts)?;
    verdict.stats.wall_ms = start.elapsed().as_millis();
    Ok(verdict)
}

fn check_inner(query: &Query, method: Method, opts: &CheckOptions) -> Result<Verdict> {
    if query.logic == Logic::Mu && method != Method::Search {
        return Err(Error::Unsupported(
            "mu-calculus checks need --method search (reductions are available via `reduce`)"
                .into(),
        ));
    }
    match query.kind {
        QueryKind::Valid => {
            let q = build_query(QueryKind::Valid, &query.lhs, None, opts.mode)?;
            let ans = decide_validity(&q, query.logic, method, opts)?;
            Ok(answer_to_verdict(ans, method, Outcome::Valid, Outcome::NotValid))
        }
        QueryKind::Implies => {
            let q = build_query(
                QueryKind::Implies,
                &query.lhs,
                query.rhs.as_ref(),
                opts.mode,
            )?;
            let ans = decide_validity(&q, query.logic, method, opts)?;
            Ok(answer_to_verdict(ans, method, Outcome::Valid, Outcome::NotValid))
        }
        QueryKind::Equiv => {
            let rhs = query.rhs.as_ref().ok_or(Error::LogicMismatch)?;
            if opts.single_query || method == Method::Search {
                let q = build_query(QueryKind::Equiv, &query.lhs, Some(rhs), opts.mode)?;
                let ans = decide_validity(&q, query.logic, method, opts)?;
                return Ok(answer_to_verdict(
                    ans,
                    method,
                    Outcome::Equivalent,
                    Outcome::Refuted,
                ));
            }
            let fwd_q = build_query(QueryKind::Implies, &query.lhs, Some(rhs), opts.mode)?;
            let bwd_q = build_query(QueryKind::Implies, rhs, Some(&query.lhs), opts.mode)?;
            let fwd = decide_validity(&fwd_q, query.logic, method, opts)?;
            let bwd = decide_validity(&bwd_q, query.logic, method, opts)?;
            let outcome = match (fwd.valid, bwd.valid) {
                (true, true) => Outcome::Equivalent,
                (true, false) => Outcome::LhsImpliesRhs,
                (false, true) => Outcome::RhsImpliesLhs,
                (false, false) => Outcome::Incomparable,
            };
            let (cex, inst) = if !fwd.valid {
                (fwd.counterexample, fwd.instantiation)
            } else {
                (bwd.counterexample, bwd.instantiation)
            };
            Ok(Verdict {
                outcome,
                method,
                backend: fwd.backend,
                instantiation: inst,
                counterexample: cex,
                stats: Stats {
                    nodes_built: fwd.nodes_built + bwd.nodes_built,
                    states_explored: fwd.states_explored + bwd.states_explored,
                    wall_ms: 0,
                },
            })
        }
        QueryKind::Sat => {
            let q = build_query(QueryKind::Sat, &query.lhs, None, opts.mode)?;
            decide_sat(&q, query.logic, method, opts)
        }
    }
}

fn answer_to_verdict(
    ans: ValidityAnswer,
    method: Method,
    pos: Outcome,
    neg: Outcome,
) -> Verdict {
    let outcome = if ans.valid {
        if method == Method::Search {
            Outcome::Unknown // exhaustion is not a proof
        } else {
            pos
        }
    } else if method == Method::Search {
        Outcome::Refuted
    } else {
        neg
    };
    Verdict {
        outcome,
        method,
        backend: ans.backend,
        instantiation: ans.instantiation,
        counterexample: ans.counterexample,
        stats: Stats {
            nodes_built: ans.nodes_built,
            states_explored: ans.states_explored,
            wall_ms: 0,
        },
    }
}

fn decide_sat(
    query: &Formula,
    logic: Logic,
    method: Method,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let reduced = match method {
        Method::Canonical => {
            canonical_reduction(query, logic, opts.mode, opts.canonical_node_budget)?
        }
        Method::Equivalid => {
            equivalid_formula(query, logic, opts.mode, ReductionTarget::Satisfiability)
        }
        Method::Search => {
            return Err(Error::Unsupported(
                "satisfiability is decided via the reductions, not search".into(),
            ))
        }
    };
    let nodes = reduced.size();
    let (sat, witness, backend, states): (bool, Option<Counterexample>, String, u64) =
        match logic {
            Logic::Prop => match prop_sat(&reduced, opts.sat_conflict_budget)? {
                SatResult::Sat(beta) => {
                    (true, Some(Counterexample::Valuation(beta)), "cdcl".into(), 0)
                }
                SatResult::Unsat => (false, None, "cdcl".into(), 0),
            },
            Logic::Ltl => match ltl_sat(&reduced, opts.gba_state_cap)? {
                (LtlSatOutcome::Model(l), n) => {
                    (true, Some(Counterexample::Lasso(l)), "gba".into(), n as u64)
                }
                (LtlSatOutcome::Unsat, n) => (false, None, "gba".into(), n as u64),
            },
            Logic::Ctl => match ctl_sat(&reduced, opts.ctl_state_cap)? {
                (CtlSatOutcome::Satisfiable(k), n) => {
                    (true, Some(Counterexample::Kripke(k)), "ctl-tableau".into(), n as u64)
                }
                (CtlSatOutcome::Unsat, n) => (false, None, "ctl-tableau".into(), n as u64),
            },
            Logic::Mu => {
                return Err(Error::Unsupported(
                    "no satisfiability backend for the mu-calculus".into(),
                ))
            }
        };
    Ok(Verdict {
        outcome: if sat { Outcome::Satisfiable } else { Outcome::Unsatisfiable },
        method,
        backend,
        instantiation: None,
        counterexample: witness,
        stats: Stats { nodes_built: nodes, states_explored: states, wall_ms: 0 },
    })
}

/// Reduce a contextual query and return the ordinary formula (the CLI
/// `reduce` command).
pub fn reduce(
    phi: &Formula,
    logic: Logic,
    method: Method,
    opts: &CheckOptions,
    target: ReductionTarget,
) -> Result<Formula> {
    let q = build_query(QueryKind::Valid, phi, None, opts.mode)?;
    match method {
        Method::Canonical => {
            let reduced = canonical_reduction(&q, logic, opts.mode, opts.canonical_node_budget)?;
            match target {
                ReductionTarget::Validity => Ok(reduced),
                ReductionTarget::Satisfiability => Ok(reduced),
            }
        }
        Method::Equivalid => Ok(equivalid_formula(&q, logic, opts.mode, target)),
        Method::Search => Err(Error::Unsupported("search does not produce a reduction".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn q(kind: QueryKind, logic: Logic, lhs: &str, rhs: Option<&str>) -> Query {
        Query {
            kind,
            logic,
            lhs: parse_formula(lhs, logic).unwrap(),
            rhs: rhs.map(|s| parse_formula(s, logic).unwrap()),
        }
    }

    #[test]
    fn shannon_prop_equivalent() {
        let query = q(
            QueryKind::Equiv,
            Logic::Prop,
            "c[p]",
            Some("(p & c[true]) | (!p & c[false])"),
        );
        for method in [Method::Canonical, Method::Equivalid] {
            let v = check(&query, method, &CheckOptions::default()).unwrap();
            assert_eq!(v.outcome, Outcome::Equivalent, "method {method:?}");
        }
    }

    #[test]
    fn shannon_ltl_not_equivalent() {
        let query = Query {
            kind: QueryKind::Equiv,
            logic: Logic::Ltl,
            lhs: parse_formula("c[p]", Logic::Ltl).unwrap(),
            rhs: Some(parse_formula("(p & c[true]) | (!p & c[false])", Logic::Ltl).unwrap()),
        };
        let v = check(&query, Method::Equivalid, &CheckOptions::default()).unwrap();
        assert_ne!(v.outcome, Outcome::Equivalent);
        assert!(v.counterexample.is_some());
    }

    #[test]
    fn eq2_equivalent_both_methods_and_single_query() {
        let query = q(
            QueryKind::Equiv,
            Logic::Ltl,
            "c[G F p]",
            Some("(G F p & c[true]) | c[false]"),
        );
        for method in [Method::Canonical, Method::Equivalid] {
            let v = check(&query, method, &CheckOptions::default()).unwrap();
            assert_eq!(v.outcome, Outcome::Equivalent, "method {method:?}");
        }
        let opts = CheckOptions { single_query: true, ..Default::default() };
        let v = check(&query, Method::Equivalid, &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Equivalent);
    }

    #[test]
    fn valid_simple() {
        let query = q(QueryKind::Valid, Logic::Prop, "p | !p", None);
        let v = check(&query, Method::Equivalid, &CheckOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Valid);
    }

    #[test]
    fn entailments_directional() {
        // (p -> q) |= (c[p] -> c[q]) holds, the converse fails.
        let query = q(
            QueryKind::Implies,
            Logic::Prop,
            "p -> q",
            Some("c[p] -> c[q]"),
        );
        let v = check(&query, Method::Equivalid, &CheckOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Valid);
        let query = q(
            QueryKind::Implies,
            Logic::Prop,
            "c[p] -> c[q]",
            Some("p -> q"),
        );
        let v = check(&query, Method::Canonical, &CheckOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::NotValid);
        assert!(v.counterexample.is_some());
        assert!(v.instantiation.is_some());
    }

    #[test]
    fn mu_requires_search() {
        let query = q(QueryKind::Equiv, Logic::Mu, "mu X. c[X]", Some("c[mu X. c[X]]"));
        assert!(check(&query, Method::Equivalid, &CheckOptions::default()).is_err());
        let v = check(&query, Method::Search, &CheckOptions::default()).unwrap();
        // The unfolding rule is valid, so the bounded search is exhausted.
        assert_eq!(v.outcome, Outcome::Unknown);
    }

    #[test]
    fn sat_kind() {
        let query = q(QueryKind::Sat, Logic::Prop, "c[p] & !p", None);
        let v = check(&query, Method::Equivalid, &CheckOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Satisfiable);
        let query = q(QueryKind::Sat, Logic::Prop, "p & !p", None);
        let v = check(&query, Method::Canonical, &CheckOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Unsatisfiable);
    }
}
