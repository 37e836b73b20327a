use thiserror::Error;

/// Errors shared by every module in this crate.
///
/// Domain predicates that can legitimately be false (solution checks,
/// relation verification, ...) return `Ok(false)`; `Err` is reserved for
/// inputs that violate a constructor invariant or an operation's
/// preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet token may not be empty or contain whitespace: {0:?}")]
    BadToken(String),
    #[error("duplicate alphabet token {0:?}")]
    DuplicateToken(String),
    #[error("token {0:?} does not belong to the alphabet")]
    UnknownToken(String),
    #[error("cannot tokenize {0:?} over this alphabet")]
    Untokenizable(String),
    #[error("symbol index {index} out of range for alphabet of {size} symbols")]
    SymbolOutOfRange { index: u32, size: usize },
    #[error("words use different alphabets")]
    AlphabetMismatch,

    #[error("instance must contain at least one pair")]
    EmptyInstance,
    #[error("pair {index} has equal coordinates")]
    TrivialPair { index: usize },
    #[error("pairs {first} and {second} are identical")]
    DuplicatePair { first: usize, second: usize },
    #[error("pair index {index} out of range for {count} pairs")]
    PairIndexOutOfRange { index: usize, count: usize },
    #[error("a solution must use at least one pair")]
    EmptySolution,
    #[error("block coding requires an alphabet of at least two symbols")]
    AlphabetTooSmall,
    #[error("expected a word over an alphabet of at most {expected} symbols")]
    DigitsOutOfRange { expected: usize },
    #[error("expected a word over a four-symbol alphabet")]
    NotQuaternary,

    #[error("search limits must be positive")]
    InvalidLimits,

    #[error("presentation relations may not have an empty side")]
    EmptyRelationSide,
    #[error("letter {0:?} collides with a reserved token of the derived alphabet")]
    ReservedLetter(String),
    #[error("derivation must contain at least one word")]
    EmptyDerivation,
    #[error("derivation has {steps} words but {witnesses} step witnesses")]
    WitnessCountMismatch { steps: usize, witnesses: usize },
    #[error("witness {step} is malformed: {reason}")]
    MalformedWitness { step: usize, reason: String },
    #[error("derivation words must be non-empty")]
    EmptyDerivationWord,
    #[error("derivation does not rewrite correctly at step {step}")]
    InvalidDerivation { step: usize },
    #[error("index sequence is not a solution of the derived instance")]
    NotASolution,
    #[error("solution does not spell a derivation: {0}")]
    MalformedSolution(String),

    #[error("instance words must be over the two-symbol alphabet 0,1")]
    NotBinaryInstance,
    #[error("cannot parse {0:?} as an unsigned decimal number")]
    BadNumber(String),
    #[error("matrix is not in the image of the pair encoding: {0}")]
    NotInImage(String),

    #[error("generator {0:?} is not drawn from the given generator list")]
    ForeignGenerator(String),
    #[error("cannot parse generator tag {0:?}")]
    BadGeneratorTag(String),
    #[error("relation sides must be non-empty")]
    EmptyRelation,
    #[error("relation is not verified over the instance generators")]
    UnverifiedRelation,
    #[error("relation does not factor into blocks: {0}")]
    MalformedRelation(String),
    #[error("instance is not symmetric")]
    NotSymmetric,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
