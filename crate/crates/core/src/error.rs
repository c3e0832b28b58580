use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Validation failure while assembling a [`ReferenceGame`](crate::ReferenceGame).
///
/// Messages name the game-document field at fault so that front ends can report
/// them verbatim.
#[derive(Clone, Debug, PartialEq)]
pub enum GameError {
    NoWorlds,
    EmptyInventory,
    DuplicateWorld(String),
    DuplicateWord(String),
    /// Empty surface or one containing whitespace.
    MalformedWord(String),
    /// The reserved terminator was used as an ordinary word.
    ReservedStop {
        field: &'static str,
    },
    EmptyUtterance {
        index: usize,
    },
    UnknownWord {
        utterance: String,
        word: String,
    },
    DuplicateUtterance(String),
    UnknownTableUtterance(String),
    UnknownTableWorld(String),
    MissingLexiconEntry(String),
    UnknownLexiconWord(String),
    InvalidCost {
        field: String,
        value: f64,
    },
    UnknownCostWord(String),
    InvalidPrior {
        world: String,
        value: f64,
    },
    UnknownPriorWorld(String),
    PriorNotNormalized(f64),
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::NoWorlds => write!(f, "worlds: at least one world is required"),
            GameError::EmptyInventory => write!(f, "utterances: inventory is empty"),
            GameError::DuplicateWorld(id) => write!(f, "worlds: duplicate world id '{id}'"),
            GameError::DuplicateWord(w) => write!(f, "vocabulary: duplicate word '{w}'"),
            GameError::MalformedWord(w) => {
                write!(f, "vocabulary: word '{w}' is empty or contains whitespace")
            }
            GameError::ReservedStop { field } => {
                write!(f, "{field}: '{}' is reserved for the stop token", crate::STOP)
            }
            GameError::EmptyUtterance { index } => {
                write!(f, "utterances[{index}]: utterance has no words")
            }
            GameError::UnknownWord { utterance, word } => write!(
                f,
                "utterances: '{utterance}' uses word '{word}' which is not in the vocabulary"
            ),
            GameError::DuplicateUtterance(u) => write!(f, "utterances: duplicate utterance '{u}'"),
            GameError::UnknownTableUtterance(u) => {
                write!(f, "semantics.true_pairs: unknown utterance '{u}'")
            }
            GameError::UnknownTableWorld(w) => write!(f, "semantics.true_pairs: unknown world '{w}'"),
            GameError::MissingLexiconEntry(w) => {
                write!(f, "semantics.lexicon: no entry for vocabulary word '{w}'")
            }
            GameError::UnknownLexiconWord(w) => {
                write!(f, "semantics.lexicon: '{w}' is not in the vocabulary")
            }
            GameError::InvalidCost { field, value } => {
                write!(f, "costs.{field}: cost {value} must be finite and non-negative")
            }
            GameError::UnknownCostWord(w) => {
                write!(f, "costs.overrides: '{w}' is not in the vocabulary")
            }
            GameError::InvalidPrior { world, value } => {
                write!(f, "prior: mass {value} for '{world}' must be finite and non-negative")
            }
            GameError::UnknownPriorWorld(w) => write!(f, "prior: unknown world '{w}'"),
            GameError::PriorNotNormalized(total) => {
                write!(f, "prior: masses sum to {total}, expected 1")
            }
        }
    }
}

impl core::error::Error for GameError {}

/// A query that does not make sense for the game it was asked of.
#[derive(Clone, Debug, PartialEq)]
pub enum QueryError {
    UnknownWorld(String),
    UnknownUtterance(String),
    /// The word sequence does not begin any inventory utterance.
    UnknownPrefix {
        prefix: String,
    },
    /// `word` cannot follow `context`; `valid` lists what can.
    InvalidContinuation {
        context: String,
        word: String,
        valid: Vec<String>,
    },
    /// Weak informativity is only defined for zero-cost games.
    NonZeroCosts,
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::UnknownWorld(w) => write!(f, "unknown world '{w}'"),
            QueryError::UnknownUtterance(u) => write!(f, "'{u}' is not in the utterance inventory"),
            QueryError::UnknownPrefix { prefix } => {
                write!(f, "'{prefix}' does not begin any utterance in the inventory")
            }
            QueryError::InvalidContinuation { context, word, valid } => {
                write!(f, "'{word}' cannot follow [{context}]; valid continuations: ")?;
                for (i, v) in valid.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            QueryError::NonZeroCosts => {
                write!(f, "weak informativity is only defined when every cost is zero")
            }
        }
    }
}

impl core::error::Error for QueryError {}
