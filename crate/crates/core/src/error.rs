use thiserror::Error;

/// Byte-range location of a token in parser input, with line/column of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
}

impl SourceSpan {
    pub fn new(begin: usize, end: usize, line: u32, column: u32) -> Self {
        debug_assert!(begin <= end);
        SourceSpan { begin, end, line, column }
    }
}

impl std::fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at {span}: expected {expected}")]
    Syntax { span: SourceSpan, expected: String },
    #[error("operator `{op}` is not part of {logic} at {span}")]
    Logic { span: SourceSpan, op: String, logic: String },
    #[error("negation of a non-atomic formula in core position at {span}")]
    Nnf { span: SourceSpan },
    #[error("a hole or context application occurs under negation (monotonic mode)")]
    NonMonotonicHole,
    #[error("context variable `{0}` is not bound by the instantiation")]
    UnboundContextVariable(String),
    #[error("variable `{0}` is not bound in the formula")]
    NotBound(String),
    #[error("variable `{0}` has no value in the valuation")]
    UnboundVariable(String),
    #[error("formulas belong to different logics")]
    LogicMismatch,
    #[error("reserved atom name `{0}` (prefixes `_ctx_` and `_fv_` are generated internally)")]
    ReservedAtom(String),
    #[error("canonical reduction exceeds the node budget ({size} > {budget})")]
    BlowupLimit { size: u64, budget: u64 },
    #[error("resource limit exhausted: {0}")]
    ResourceLimit(String),
    #[error("search time budget exhausted")]
    TimeBudget,
    #[error("fixpoint variable `{0}` occurs under negation; evaluation would be unsound")]
    NonMonotonicFixpoint(String),
    #[error("operator `{0}` cannot be expressed in the target dialect")]
    UnsupportedOperator(String),
    #[error("model file error at line {line}: {msg}")]
    ModelFormat { line: usize, msg: String },
    #[error("external tool error: {0}")]
    ExternalTool(String),
    #[error("external tool timed out after {0} s")]
    ExternalTimeout(u64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("internal replay check failed: {0}")]
    ReplayFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
