use crate::bits::PBitState;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("probability {0} is not rational")]
    IrrationalProbability(String),
    #[error("site {site} is in non-normal state {state}")]
    NonNormalState { site: String, state: PBitState },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
    #[error("no stage rule matches signal monomial {monomial}")]
    UnmatchedMonomial { monomial: String },
    #[error("not norm-preserving: {0}")]
    NonIsometric(String),
    #[error("wiring conflict: {0}")]
    Wiring(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
