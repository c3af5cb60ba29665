use thiserror::Error;

use crate::combination::ZetaCombination;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed composition: {0}")]
    MalformedComposition(String),
    #[error("composition {0} is not admissible (leading part must be at least 2)")]
    NotAdmissible(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("interleaving pattern does not fit the inputs: {0}")]
    PatternShape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("divergent ζ(1…) terms could not be eliminated: {diagnostic}")]
    EliminationFailure {
        diagnostic: String,
        combination: ZetaCombination,
    },
    #[error("combination is regularized (contains ζ(1…)); eliminate divergent terms first")]
    Divergent,
    #[error("requested bound {requested:e} is below the working precision floor {floor:e}")]
    Precision { requested: f64, floor: f64 },
    #[error("unsupported propagator order {0}; only k ≥ 2 is evaluated numerically")]
    UnsupportedOrder(i64),
    #[error("rewrite rule not applicable: {0}")]
    RuleInapplicable(String),
    #[error("diagram is irreducible under the chosen strategy: {reason}")]
    Irreducible {
        reason: String,
        partial: ZetaCombination,
    },
    #[error("unknown identity family: {0}")]
    UnknownFamily(String),
    #[error("invalid JSON document: {0}")]
    Json(String),
    #[error("cannot read {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
