//! Decision procedures for *contextual* formulas — formulas containing
//! context variables with holes — in propositional logic, LTL, CTL and the
//! modal mu-calculus.
//!
//! A contextual formula is valid when every instantiation of its context
//! variables yields a valid ordinary formula. Two reductions turn that
//! question into ordinary validity:
//!
//! * [`reduction::canonical_reduction`] instantiates the formula with a
//!   syntactically derived *canonical* context (exponential in the context
//!   nesting depth);
//! * [`reduction::equivalid_formula`] builds a polynomial-size ordinary
//!   formula that is valid iff the contextual one is.
//!
//! Self-contained backends decide the resulting ordinary formulas: a CDCL
//! SAT solver for propositional logic, a generalized-Büchi construction for
//! LTL, and a tableau procedure for CTL. [`search`] refutes contextual
//! claims directly by enumerating small instantiations and models, which is
//! also the only refutation path for the mu-calculus.

pub mod adapters;
pub mod check;
pub mod corpus;
pub mod ctl;
pub mod error;
pub mod formula;
pub mod gen;
pub mod kripke;
pub mod ltl;
pub mod parser;
pub mod prop;
pub mod reduction;
pub mod search;

pub use check::{check, CheckOptions, Method, Query, QueryKind, Verdict};
pub use error::{Error, Result, SourceSpan};
pub use formula::{Atom, CtxVar, Formula, Instantiation, Logic, Mode, Var};
