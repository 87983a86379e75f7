//! End-to-end checks of the bundled corpus through both reductions and the
//! bounded search, with counterexample replay.

use ctxlogic_core::check::{check, CheckOptions, Method, Outcome, Query};
use ctxlogic_core::corpus;
use ctxlogic_core::formula::{Logic, Mode};
use ctxlogic_core::reduction::{build_query, QueryKind};
use ctxlogic_core::search::{refute, RefuteResult, SearchBudget};

fn run_entry(e: &corpus::CorpusEntry, method: Method) -> Outcome {
    let opts = CheckOptions { mode: e.mode, ..Default::default() };
    let query = Query { kind: e.kind, logic: e.logic, lhs: e.lhs.clone(), rhs: e.rhs.clone() };
    let v = check(&query, method, &opts)
        .unwrap_or_else(|err| panic!("{} via {:?}: {err}", e.id, method));
    v.outcome
}

fn holds(outcome: Outcome) -> bool {
    outcome.claim_holds().expect("decided outcome")
}

#[test]
fn rules_suite_both_methods() {
    for e in corpus::rules_suite() {
        for method in [Method::Canonical, Method::Equivalid] {
            let out = run_entry(&e, method);
            assert!(
                holds(out) == e.holds,
                "{} via {:?}: got {:?}, expected holds={}",
                e.id,
                method,
                out,
                e.holds
            );
        }
    }
}

#[test]
fn mutated_suite_both_methods() {
    for e in corpus::mutated_suite() {
        for method in [Method::Canonical, Method::Equivalid] {
            let out = run_entry(&e, method);
            assert!(
                holds(out) == e.holds,
                "{} via {:?}: got {:?}, expected holds={}",
                e.id,
                method,
                out,
                e.holds
            );
        }
    }
}

#[test]
fn remarks_suite_both_methods() {
    for e in corpus::remarks_suite() {
        for method in [Method::Canonical, Method::Equivalid] {
            let out = run_entry(&e, method);
            assert!(
                holds(out) == e.holds,
                "{} via {:?}: got {:?}, expected holds={}",
                e.id,
                method,
                out,
                e.holds
            );
        }
    }
}

#[test]
fn mutated_suite_search_marks() {
    // The search must refute all 24 failing entries at the default budget
    // and refute none of the 5 holding ones.
    for e in corpus::mutated_suite() {
        let claim =
            build_query(e.kind, &e.lhs, e.rhs.as_ref(), e.mode).unwrap();
        let res = refute(&claim, e.logic, &SearchBudget::default()).unwrap();
        match (e.holds, res) {
            (false, RefuteResult::CounterExample { .. }) => {}
            (true, RefuteResult::Exhausted { .. }) => {}
            (false, RefuteResult::Exhausted { candidates }) => {
                panic!("{}: search exhausted after {candidates} without refuting", e.id)
            }
            (true, RefuteResult::CounterExample { sigma, .. }) => {
                panic!("{}: refuted a holding identity with {sigma:?}", e.id)
            }
        }
    }
}

#[test]
fn soundness_sampling_on_valid_entries() {
    // For corpus entries that hold, 50 random instantiations evaluated on
    // random models must satisfy the claim (validity direction of the
    // contextual semantics).
    let mut r = ctxlogic_core::gen::rng(0xC0FFEE);
    let atoms = ctxlogic_core::gen::default_atoms(3);
    for e in corpus::rules_suite().iter().chain(corpus::mutated_suite().iter()) {
        if !e.holds {
            continue;
        }
        let claim = build_query(e.kind, &e.lhs, e.rhs.as_ref(), e.mode).unwrap();
        for _ in 0..50 {
            let sigma =
                ctxlogic_core::gen::random_instantiation(&mut r, &claim, e.logic, &atoms, 3);
            let inst = sigma.instantiate(&claim).unwrap();
            let lasso = ctxlogic_core::gen::random_lasso(&mut r, 2, 4, &atoms);
            assert!(
                ctxlogic_core::kripke::eval_lasso_direct(&lasso, &inst, 0).unwrap(),
                "{}: sigma(claim) failed on {}",
                e.id,
                lasso.render()
            );
        }
    }
}

#[test]
fn stress_small_instances() {
    // stress1 n=1 and stress2 n=1,2 complete with both methods.
    for e in [corpus::stress1_entry(1), corpus::stress2_entry(1), corpus::stress2_entry(2)] {
        for method in [Method::Canonical, Method::Equivalid] {
            let out = run_entry(&e, method);
            assert!(holds(out) == e.holds, "{} via {method:?}: {out:?}", e.id);
        }
    }
}

#[test]
fn method_agreement_random_contextual() {
    // Canonical, equivalid and search never conflict on random contextual
    // formulas (kept small here; the acceptance suite runs the full count).
    let mut r = ctxlogic_core::gen::rng(0xABCD);
    let atoms = ctxlogic_core::gen::default_atoms(3);
    for logic in [Logic::Prop, Logic::Ltl, Logic::Ctl] {
        for i in 0..40 {
            let phi = ctxlogic_core::gen::random_contextual(&mut r, logic, &atoms, 3, 2, 4);
            let claim = build_query(QueryKind::Valid, &phi, None, Mode::Monotonic).unwrap();
            let opts = CheckOptions::default();
            let query = Query { kind: QueryKind::Valid, logic, lhs: phi.clone(), rhs: None };
            let v1 = check(&query, Method::Canonical, &opts).unwrap();
            let v2 = check(&query, Method::Equivalid, &opts).unwrap();
            assert_eq!(
                v1.outcome, v2.outcome,
                "methods disagree on #{i} {logic}: {phi}"
            );
            let budget = SearchBudget { max_candidates: 500, max_model_states: 3, ..Default::default() };
            match refute(&claim, logic, &budget).unwrap() {
                RefuteResult::CounterExample { .. } => {
                    assert_eq!(
                        v1.outcome,
                        Outcome::NotValid,
                        "search refuted but methods said valid on {phi}"
                    );
                }
                RefuteResult::Exhausted { .. } => {}
            }
        }
    }
}
