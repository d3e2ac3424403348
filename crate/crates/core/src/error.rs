use thiserror::Error;

/// Errors raised by the parser, the evaluators and the normal-form engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("first-order construct `{0}` in a propositional formula")]
    FirstOrder(String),

    #[error("atom `{0}` is not assigned")]
    Unassigned(String),

    #[error("a truth scale needs at least 2 levels, got {0}")]
    InvalidScale(u32),

    #[error("level {level} out of range for atom `{atom}` (scale {levels}, restricted: {restricted})")]
    LevelOutOfRange {
        atom: String,
        level: u32,
        levels: u32,
        restricted: bool,
    },

    #[error("formula contains D(...), which needs restricted semantics here")]
    DeltaNotAllowed,

    #[error("D applied to variable `{0}` under a chain that is not restricted")]
    UnrestrictedDelta(String),

    #[error("`{0}` does not occur in the chain")]
    NotInChain(String),

    #[error("malformed chain: {0}")]
    InvalidChain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("variable `{0}` is unbound")]
    Unbound(String),

    #[error("predicate `{name}` used with arities {first} and {second}")]
    ArityMismatch {
        name: String,
        first: usize,
        second: usize,
    },

    #[error("missing table entry {0}")]
    MissingEntry(String),

    #[error("domain element {element} out of range for domain size {domain}")]
    ElementOutOfRange { element: usize, domain: usize },

    #[error("model space of {models} exceeds the budget of {budget} models")]
    Budget { models: u128, budget: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
