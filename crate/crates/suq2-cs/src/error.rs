use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid basis index (m={m}, i2={i2}, j2={j2})")]
    InvalidBasisIndex { m: u32, i2: i32, j2: i32 },

    #[error("invalid half-integer triple (n2={n2}, i2={i2}, j2={j2})")]
    InvalidTriple { n2: u32, i2: i32, j2: i32 },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("truncation guard too small: need reach {need}, have {have}")]
    GuardViolation { need: u32, have: u32 },

    #[error("ill-conditioned fit (condition estimate {cond:.3e})")]
    IllConditionedFit { cond: f64 },

    #[error("fit window too small: {have} shells for {need} coefficients")]
    WindowTooSmall { have: usize, need: usize },

    #[error("non-convergent sequence: {0}")]
    NonConvergent(String),

    #[error("divergent trace: leading fit coefficients do not vanish ({0})")]
    DivergentTrace(String),

    #[error("matrix is not unitary (relation residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("degenerate form: {0}")]
    Domain(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
