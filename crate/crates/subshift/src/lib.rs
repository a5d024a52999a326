//! Finite-type subshifts over {1..A}: forbidden-factor sets, the
//! deterministic shift presentation, transitivity certification, exact
//! extremal continued-fraction tails, and the finite-type approximation of
//! Markov-value sublevel sets.

pub mod approx;
pub mod extremal;
pub mod fset;
pub mod graph;

pub use approx::approx_sigma_t;
pub use extremal::{tail_value, Dir, ExtremalTail, TailOracle};
pub use fset::ForbiddenSet;
pub use graph::{connect_witnesses, is_transitive, BlockGraph, StateId, TransitivityReport};

use thiserror::Error;

#[derive(Error, Debug)]
pub enum SubshiftError {
    #[error("empty word in forbidden set")]
    EmptyWord,
    #[error("word {word} has a digit outside alphabet 1..={alphabet}")]
    DigitOutsideAlphabet { word: String, alphabet: u8 },
    #[error("constant sequence of {0}s is forbidden")]
    ConstantTailForbidden(u8),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Word(#[from] cf_core::CfError),
}
