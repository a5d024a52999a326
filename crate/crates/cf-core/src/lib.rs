//! Words, marked bi-infinite sequences, and rigorous continued-fraction
//! arithmetic over them.
//!
//! Values are kept exact wherever the digit stream is fully determined
//! (eventually periodic tails evaluate to quadratic irrationals); undetermined
//! tails produce certified two-sided bounds realized by extremal completions.
//! Nothing in this crate rounds: decimal output is produced on demand from a
//! rational enclosure of requested width.

pub mod dp;
pub mod error;
pub mod mobius;
pub mod quad;
pub mod seq;
pub mod value;
pub mod word;

pub use dp::{simplify_dp, DoublyPeriodicWord, Witness};
pub use error::CfError;
pub use mobius::{convergents, cylinder_size, Mobius};
pub use quad::{QuadExt, RatInterval};
pub use seq::{bound_all_extensions, parse_word, MarkedBiSeq, TailSpec};
pub use value::{Cmp, Precision, SpectrumValue, Val};
pub use word::{Digit, MarkedWord, Word};

/// Largest digit the word grammar admits.
pub const MAX_ALPHABET: u8 = 9;

pub type Result<T> = std::result::Result<T, CfError>;
