use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a direction: the zero vector has no primitive generator")]
    NotADirection,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed fan: {0}")]
    MalformedFan(String),

    #[error("rays are not primitive: indices {0:?}")]
    NonPrimitiveRays(Vec<usize>),

    #[error("duplicate rays: index pairs {0:?}")]
    DuplicateRays(Vec<(usize, usize)>),

    #[error("invalid fan: {}", .0.join("; "))]
    InvalidFan(Vec<String>),

    #[error("not Q-Fano: {0}")]
    NotQFano(String),

    #[error("ray index {index} out of range for a fan with {count} rays")]
    RayIndex { index: usize, count: usize },

    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    DivisorLength { expected: usize, found: usize },

    #[error("unbounded")]
    Unbounded,

    #[error("degenerate polytope: volume is zero")]
    DegeneratePolytope,

    #[error("divisor must be effective with integer coefficients: {0}")]
    NotEffectiveIntegral(String),

    #[error("divisor has empty effective support")]
    EmptySupport,

    #[error("slice parameter must be nonnegative, got {0}")]
    NegativeSlice(String),

    #[error("divisor components must be distinct for this check (repeated: {0:?})")]
    RepeatedComponents(Vec<usize>),

    #[error("route THEOREM_B requires a reference ray")]
    MissingReference,

    #[error("lattice scan exceeds machine integer range")]
    Overflow,

    #[error("unknown catalog entry {name:?}; available: {}", .available.join(", "))]
    UnknownCatalogEntry {
        name: String,
        available: Vec<String>,
    },
}
