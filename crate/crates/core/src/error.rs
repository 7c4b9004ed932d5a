use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Fock cutoff {cutoff} leaves tail mass {tail:e}, above tolerance {eps:e}")]
    Truncation { cutoff: usize, tail: f64, eps: f64 },

    #[error("Fock cutoffs differ: {0} vs {1}")]
    CutoffMismatch(usize, usize),

    #[error("quadrature on [{lo}, {hi}] did not reach tolerance (estimated error {estimate:e})")]
    Quadrature { lo: f64, hi: f64, estimate: f64 },

    #[error("rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: String, max: String },

    #[error("message needs rank {needed} but the code only holds {capacity} codewords")]
    MessageTooLarge { needed: String, capacity: String },

    #[error("codeword has length {len} and weight {weight}; code expects length {expected_len} and weight {expected_weight}")]
    WrongShape {
        len: usize,
        weight: usize,
        expected_len: usize,
        expected_weight: usize,
    },

    #[error("bit strings differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("{0} must not be empty")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
