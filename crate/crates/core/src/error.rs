use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("q = {0} is not a supported prime power (2 <= q <= 256)")]
    InvalidField(u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("matrix shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate block at position {0}")]
    DuplicateBlock(usize),

    #[error("{what} has {count} entries, above the cap of {cap}")]
    SizeCap { what: &'static str, count: u128, cap: u128 },

    #[error("code is empty")]
    EmptyCode,

    #[error("inconsistent bounds for {params}: lower {lower} exceeds upper {upper}")]
    Inconsistent { params: String, lower: u128, upper: u128 },

    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
