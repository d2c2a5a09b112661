use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("root degree must be at least 1")]
    ZeroDegree,
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("precision index must be positive")]
    ZeroPrecision,
    #[error("apartness witness does not re-check against the value")]
    InvalidWitness,
    #[error("square root of a negative value")]
    NegativeInput,
    #[error("undecided at fuel {fuel}")]
    UnknownAtFuel { fuel: u32 },
    #[error("polynomial of degree {degree} is not of odd degree")]
    DegreeNotOdd { degree: usize },
    #[error("no certified sign change found within fuel {fuel}")]
    FuelExhausted { fuel: u32 },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("disjunctive normal form would exceed {cap} conjuncts")]
    BlowupCap { cap: usize },
    #[error("box side {index} has its lower end above its upper end")]
    InvalidBox { index: usize },
    #[error("box has {got} sides but {expected} variables were given")]
    BoxArity { expected: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
