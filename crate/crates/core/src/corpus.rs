//! Bundled benchmark corpus: the six LTL normalization identities and the
//! dual of the first one, the 29 mutated variants, a set of textbook
//! identities and entailments, and two generated stress families obtained
//! by nesting the rules and normalizing with them.

use crate::check::QueryKind;
use crate::formula::{Formula, Kind, Logic, Mode};
use crate::parser::parse_formula;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub logic: Logic,
    pub kind: QueryKind,
    pub mode: Mode,
    pub lhs: Formula,
    pub rhs: Option<Formula>,
    /// The documented expected verdict: does the claim hold?
    pub holds: bool,
}

fn entry(
    id: &str,
    logic: Logic,
    kind: QueryKind,
    mode: Mode,
    lhs: &str,
    rhs: Option<&str>,
    holds: bool,
) -> CorpusEntry {
    CorpusEntry {
        id: id.into(),
        logic,
        kind,
        mode,
        lhs: parse_formula(lhs, logic).unwrap_or_else(|e| panic!("corpus {id} lhs: {e}")),
        rhs: rhs.map(|s| {
            parse_formula(s, logic).unwrap_or_else(|e| panic!("corpus {id} rhs: {e}"))
        }),
        holds,
    }
}

fn ltl_equiv(id: &str, lhs: &str, rhs: &str, holds: bool) -> CorpusEntry {
    entry(id, Logic::Ltl, QueryKind::Equiv, Mode::Monotonic, lhs, Some(rhs), holds)
}

/// The six normalization rules plus the dual of the first one.
pub fn rules_suite() -> Vec<CorpusEntry> {
    vec![
        ltl_equiv(
            "rule1",
            "c[a U b] W g",
            "(G F b & (c[a W b] W g)) | (c[a U b] U (g | G c[false]))",
            true,
        ),
        ltl_equiv("rule2", "h W c[a U b]", "(h U c[a U b]) | G h", true),
        ltl_equiv("rule3", "c[G F p]", "(G F p & c[true]) | c[false]", true),
        ltl_equiv("rule4", "c[F G p]", "(F G p & c[true]) | c[false]", true),
        ltl_equiv(
            "rule5",
            "G F c[a W b]",
            "G F c[a U b] | (F G a & G F c[true])",
            true,
        ),
        ltl_equiv(
            "rule6",
            "F G c[a U b]",
            "(G F b & F G c[a W b]) | F G c[false]",
            true,
        ),
        ltl_equiv(
            "rule1-dual",
            "h U c[a W b]",
            "(h U c[a U b]) | (F G h & ((h & F c[true]) W c[a W b]))",
            true,
        ),
    ]
}

/// The 29 mutated identities; exactly 3a, 4c, 5b, 6b and 6g hold.
pub fn mutated_suite() -> Vec<CorpusEntry> {
    vec![
        // Mutations of c[G F p] == (G F p & c[true]) | c[false].
        ltl_equiv("1a", "c[G F p]", "(F G p & c[true]) | c[false]", false),
        ltl_equiv("1b", "c[G F p]", "(G F p & c[true]) | c[p]", false),
        ltl_equiv("1c", "c[G F p]", "(G F p | c[true]) & c[false]", false),
        ltl_equiv("1d", "c[G F p]", "(G F p & c[false]) | c[true]", false),
        // Mutations of c[F G p] == (F G p & c[true]) | c[false].
        ltl_equiv("2a", "c[F G p]", "(G F p & c[true]) | c[false]", false),
        ltl_equiv("2b", "c[F G p]", "(F G p & c[true]) | c[p]", false),
        ltl_equiv("2c", "c[F G p]", "(F G p | c[true]) & c[false]", false),
        ltl_equiv("2d", "c[F G p]", "(F G p & c[false]) | c[true]", false),
        // Mutations of G F c[a W b] == G F c[a U b] | (F G a & G F c[true]).
        ltl_equiv("3a", "G F c[a W b]", "G F c[a W b] | (F G a & G F c[true])", true),
        ltl_equiv("3b", "G F c[a W b]", "G F c[a U b] | (G F a & G F c[true])", false),
        ltl_equiv("3c", "G F c[a W b]", "G F c[a U b] | (F G a & c[true])", false),
        ltl_equiv("3d", "G F c[a W b]", "(G F c[a U b]) & (F G a | G F c[true])", false),
        // Mutations of F G c[a U b] == (G F b & F G c[a W b]) | F G c[false].
        ltl_equiv("4a", "F G c[a U b]", "(F G b & F G c[a W b]) | F G c[false]", false),
        ltl_equiv("4b", "F G c[a U b]", "(G F b & G F c[a W b]) | F G c[false]", false),
        ltl_equiv("4c", "F G c[a U b]", "(G F b & F G c[a U b]) | F G c[false]", true),
        ltl_equiv("4d", "F G c[a U b]", "(G F b & F G c[a W b]) | c[false]", false),
        ltl_equiv("4e", "F G c[a U b]", "(G F b | F G c[a W b]) & F G c[false]", false),
        // Mutations of h W c[a U b] == (h U c[a U b]) | G h.
        ltl_equiv("5a", "h W c[a U b]", "(h U c[a W b]) | G h", false),
        ltl_equiv("5b", "h W c[a U b]", "(h W c[a U b]) | G h", true),
        ltl_equiv("5c", "h W c[a U b]", "(h U c[a U b]) | F h", false),
        ltl_equiv("5d", "h W c[a U b]", "(h U c[a U b]) & G h", false),
        ltl_equiv("5e", "h W c[a U b]", "(h U c[a U h]) | G b", false),
        // Mutations of
        // c[a U b] W g == (G F b & (c[a W b] W g)) | (c[a U b] U (g | G c[false])).
        ltl_equiv(
            "6a",
            "c[a U b] W g",
            "(F G b & (c[a W b] W g)) | (c[a U b] U (g | G c[false]))",
            false,
        ),
        ltl_equiv(
            "6b",
            "c[a U b] W g",
            "(G F b & (c[a U b] W g)) | (c[a U b] U (g | G c[false]))",
            true,
        ),
        ltl_equiv(
            "6c",
            "c[a U b] W g",
            "(G F b & (c[a W b] U g)) | (c[a U b] U (g | G c[false]))",
            false,
        ),
        ltl_equiv(
            "6d",
            "c[a U b] W g",
            "(G F b & (c[a W b] W g)) | (c[a W b] U (g | G c[false]))",
            false,
        ),
        ltl_equiv(
            "6e",
            "c[a U b] W g",
            "(G F b & (c[a W b] W g)) | (c[a U b] U (g | c[false]))",
            false,
        ),
        ltl_equiv(
            "6f",
            "c[a U b] W g",
            "(G F b & (c[a W b] W g)) | (c[a U b] U (g | G c[true]))",
            false,
        ),
        ltl_equiv(
            "6g",
            "c[a U b] W g",
            "(G F b & (c[a W b] W g)) | (c[a U b] W (g | G c[false]))",
            true,
        ),
    ]
}

/// Textbook identities and entailments for the propositional case, plus
/// the substitution rules for LTL and CTL (which need non-monotonic mode:
/// their biconditional sits below a temporal operator).
pub fn remarks_suite() -> Vec<CorpusEntry> {
    use Mode::{Monotonic as M, NonMonotonic as N};
    use QueryKind::{Equiv, Implies};
    vec![
        entry("shannon-prop", Logic::Prop, Equiv, M, "c[p]",
              Some("(p & c[true]) | (!p & c[false])"), true),
        entry("dist-and", Logic::Prop, Equiv, M, "c[p & q]", Some("c[p] & c[q]"), true),
        entry("dist-or", Logic::Prop, Equiv, M, "c[p | q]", Some("c[p] | c[q]"), true),
        entry("idem", Logic::Prop, Equiv, M, "c[p]", Some("c[c[p]]"), true),
        entry("subst-iff", Logic::Prop, Implies, M, "p <-> q", Some("c[p] <-> c[q]"), true),
        entry("subst-imp", Logic::Prop, Implies, M, "p -> q", Some("c[p] -> c[q]"), true),
        entry("subst-iff-rev", Logic::Prop, Implies, M, "c[p] <-> c[q]", Some("p <-> q"), false),
        entry("subst-imp-rev", Logic::Prop, Implies, M, "c[p] -> c[q]", Some("p -> q"), false),
        entry("ctx-not-id", Logic::Prop, Equiv, M, "p", Some("c[p]"), false),
        entry("ltl-g-weaken", Logic::Ltl, Implies, M, "c[G p]", Some("c[p]"), true),
        entry("ltl-subst-iff", Logic::Ltl, Implies, N, "G (a <-> b)",
              Some("G (c[a] <-> c[b])"), true),
        entry("ltl-subst-imp", Logic::Ltl, Implies, N, "G (a -> b)",
              Some("G (c[a] -> c[b])"), true),
        entry("ctl-subst-iff", Logic::Ctl, Implies, N, "AG (a <-> b)",
              Some("AG (c[a] <-> c[b])"), true),
        entry("ctl-subst-imp", Logic::Ctl, Implies, N, "AG (a -> b)",
              Some("AG (c[a] -> c[b])"), true),
        entry("shannon-ctl", Logic::Ctl, Equiv, M, "c[p]",
              Some("(p & c[true]) | (!p & c[false])"), false),
        entry("shannon-ltl", Logic::Ltl, Equiv, M, "c[p]",
              Some("(p & c[true]) | (!p & c[false])"), false),
    ]
}

// ---------------------------------------------------------------------------
// Stress families: repetitive expansions of the rules, normalized by
// rewriting with them.

fn gf(x: Formula) -> Formula {
    Formula::globally(Formula::finally(x))
}
fn fg(x: Formula) -> Formula {
    Formula::finally(Formula::globally(x))
}

/// One rewrite step at the root: the first rule of the normalization system
/// (removes a `U` below a `W`), its dual (removes a `W` below a `U`), and
/// the `GF`/`FG` rules that the nesting exposes.
fn rewrite_root(phi: &Formula) -> Option<Formula> {
    // rule 1: c[x U y] W g
    if let Kind::WeakUntil(l, g) = phi.kind() {
        if let Kind::Apply(c, arg) = l.kind() {
            if let Kind::Until(x, y) = arg.kind() {
                let weak = Formula::apply(c.clone(), Formula::weak_until(x.clone(), y.clone()));
                return Some(Formula::or(
                    Formula::and(gf(y.clone()), Formula::weak_until(weak, g.clone())),
                    Formula::until(
                        l.clone(),
                        Formula::or(
                            g.clone(),
                            Formula::globally(Formula::apply(c.clone(), Formula::f())),
                        ),
                    ),
                ));
            }
        }
    }
    // dual rule: g U c[x W y]
    if let Kind::Until(g, r) = phi.kind() {
        if let Kind::Apply(c, arg) = r.kind() {
            if let Kind::WeakUntil(x, y) = arg.kind() {
                let strong = Formula::apply(c.clone(), Formula::until(x.clone(), y.clone()));
                return Some(Formula::or(
                    Formula::until(g.clone(), strong),
                    Formula::and(
                        fg(g.clone()),
                        Formula::weak_until(
                            Formula::and(
                                g.clone(),
                                Formula::finally(Formula::apply(c.clone(), Formula::t())),
                            ),
                            r.clone(),
                        ),
                    ),
                ));
            }
        }
    }
    // rule 5: G F c[x W y]
    if let Kind::Globally(inner) = phi.kind() {
        if let Kind::Finally(inner2) = inner.kind() {
            if let Kind::Apply(c, arg) = inner2.kind() {
                if let Kind::WeakUntil(x, y) = arg.kind() {
                    let strong =
                        Formula::apply(c.clone(), Formula::until(x.clone(), y.clone()));
                    return Some(Formula::or(
                        gf(strong),
                        Formula::and(
                            fg(x.clone()),
                            gf(Formula::apply(c.clone(), Formula::t())),
                        ),
                    ));
                }
            }
        }
    }
    // rule 6: F G c[x U y]
    if let Kind::Finally(inner) = phi.kind() {
        if let Kind::Globally(inner2) = inner.kind() {
            if let Kind::Apply(c, arg) = inner2.kind() {
                if let Kind::Until(x, y) = arg.kind() {
                    let weak =
                        Formula::apply(c.clone(), Formula::weak_until(x.clone(), y.clone()));
                    return Some(Formula::or(
                        Formula::and(gf(y.clone()), fg(weak)),
                        fg(Formula::apply(c.clone(), Formula::f())),
                    ));
                }
            }
        }
    }
    // rule 3: c[G F x]
    if let Kind::Apply(c, arg) = phi.kind() {
        if let Kind::Globally(inner) = arg.kind() {
            if let Kind::Finally(x) = inner.kind() {
                return Some(Formula::or(
                    Formula::and(gf(x.clone()), Formula::apply(c.clone(), Formula::t())),
                    Formula::apply(c.clone(), Formula::f()),
                ));
            }
        }
        // rule 4: c[F G x]
        if let Kind::Finally(inner) = arg.kind() {
            if let Kind::Globally(x) = inner.kind() {
                return Some(Formula::or(
                    Formula::and(fg(x.clone()), Formula::apply(c.clone(), Formula::t())),
                    Formula::apply(c.clone(), Formula::f()),
                ));
            }
        }
    }
    None
}

fn rewrite_once(phi: &Formula) -> Option<Formula> {
    if let Some(out) = rewrite_root(phi) {
        return Some(out);
    }
    let children = phi.children();
    for (i, c) in children.iter().enumerate() {
        if let Some(nc) = rewrite_once(c) {
            let cs: Vec<Formula> = children
                .iter()
                .enumerate()
                .map(|(j, x)| if j == i { nc.clone() } else { (*x).clone() })
                .collect();
            return Some(phi.with_children(cs));
        }
    }
    None
}

/// Leftmost-outermost normalization with the rules above.
pub fn normalize_with_rules(phi: &Formula) -> Formula {
    let mut cur = phi.clone();
    for _ in 0..10_000 {
        match rewrite_once(&cur) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
    panic!("rewrite system did not terminate");
}

/// Stress family (1): alternate strong and weak untils under nested
/// distinct context variables; the right-hand side is the normalized form.
pub fn stress1(n: usize) -> (Formula, Formula) {
    assert!(n >= 1);
    let mut cur = Formula::atom(format!("p{}", n + 1));
    for k in (1..=n).rev() {
        let pk = Formula::atom(format!("p{k}"));
        let op = if k % 2 == 1 {
            Formula::until(pk, cur)
        } else {
            Formula::weak_until(pk, cur)
        };
        cur = Formula::apply(format!("c{k}"), op);
    }
    let lhs = Formula::weak_until(cur, Formula::atom("q"));
    let rhs = normalize_with_rules(&lhs);
    (lhs, rhs)
}

/// Stress family (2): alternately nested `FG`/`GF` under a single repeated
/// context variable; the right-hand side is the normalized form.
pub fn stress2(n: usize) -> (Formula, Formula) {
    assert!(n >= 1);
    let mut cur = Formula::apply("c", Formula::atom("p"));
    for d in (0..n).rev() {
        let wrapped = if d % 2 == 0 { fg(cur) } else { gf(cur) };
        cur = Formula::apply("c", wrapped);
    }
    let rhs = normalize_with_rules(&cur);
    (cur, rhs)
}

pub fn stress1_entry(n: usize) -> CorpusEntry {
    let (lhs, rhs) = stress1(n);
    CorpusEntry {
        id: format!("stress1-n{n}"),
        logic: Logic::Ltl,
        kind: QueryKind::Equiv,
        mode: Mode::Monotonic,
        lhs,
        rhs: Some(rhs),
        holds: true,
    }
}

pub fn stress2_entry(n: usize) -> CorpusEntry {
    let (lhs, rhs) = stress2(n);
    CorpusEntry {
        id: format!("stress2-n{n}"),
        logic: Logic::Ltl,
        kind: QueryKind::Equiv,
        mode: Mode::Monotonic,
        lhs,
        rhs: Some(rhs),
        holds: true,
    }
}

pub fn suite_by_name(name: &str) -> Option<Vec<CorpusEntry>> {
    match name {
        "rules" => Some(rules_suite()),
        "mutated" => Some(mutated_suite()),
        "remarks" => Some(remarks_suite()),
        "stress1" => Some(vec![stress1_entry(1)]),
        "stress2" => Some(vec![stress2_entry(1), stress2_entry(2)]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_counts() {
        assert_eq!(rules_suite().len(), 7);
        let mutated = mutated_suite();
        assert_eq!(mutated.len(), 29);
        let holding: Vec<&str> = mutated
            .iter()
            .filter(|e| e.holds)
            .map(|e| e.id.as_str())
            .collect();
        assert_eq!(holding, ["3a", "4c", "5b", "6b", "6g"]);
        assert_eq!(mutated.iter().filter(|e| !e.holds).count(), 24);
    }

    #[test]
    fn stress1_n1_is_rule1() {
        // stress1 at n=1 is exactly the first rule (modulo atom names).
        let (lhs, rhs) = stress1(1);
        assert_eq!(crate::parser::print_formula(&lhs), "c1[p1 U p2] W q");
        assert_eq!(
            crate::parser::print_formula(&rhs),
            "(G F p2 & c1[p1 W p2] W q) | c1[p1 U p2] U (q | G c1[false])"
        );
    }

    #[test]
    fn stress2_n1_shape() {
        let (lhs, rhs) = stress2(1);
        assert_eq!(crate::parser::print_formula(&lhs), "c[F G c[p]]");
        assert_eq!(
            crate::parser::print_formula(&rhs),
            "(F G c[p] & c[true]) | c[false]"
        );
    }

    #[test]
    fn stress_normalization_terminates_up_to_4() {
        for n in 1..=4 {
            let (lhs1, rhs1) = stress1(n);
            assert!(rewrite_once(&rhs1).is_none(), "stress1 n={n} normalized");
            assert!(lhs1.size() < rhs1.size());
            let (_, rhs2) = stress2(n);
            assert!(rewrite_once(&rhs2).is_none(), "stress2 n={n} normalized");
        }
    }

    #[test]
    fn remarks_parse() {
        assert_eq!(remarks_suite().len(), 16);
    }
}
