use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("expected exactly one mark, found {0}")]
    MarkCount(usize),
    #[error("digit {0} outside alphabet 1..={1}")]
    DigitRange(u8, u8),
    #[error("mark {mark} out of range for word of length {len}")]
    MarkRange { mark: usize, len: usize },
    #[error("empty word not allowed here")]
    EmptyWord,
    #[error("refinement cap reached (comparison undecided at {bits} bits)")]
    RefinementCap { bits: u32 },
    #[error("{0}")]
    Invalid(String),
}
