use thiserror::Error;

/// Errors produced by the toolkit's pure processing layers.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("invalid dimensions: {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    #[error("dimension mismatch: {a_width}x{a_height} vs {b_width}x{b_height}")]
    DimensionMismatch { a_width: usize, a_height: usize, b_width: usize, b_height: usize },

    #[error("frame count mismatch: reference has {reference}, distorted has {distorted}")]
    FrameCountMismatch { reference: usize, distorted: usize },

    #[error("invalid sample value {value} at index {index}")]
    InvalidSample { index: usize, value: f64 },

    #[error("malformed Radiance header: {0}")]
    MalformedHeader(String),

    #[error("truncated scanline {row}: {detail}")]
    TruncatedScanline { row: usize, detail: String },

    #[error("unsupported pixel ordering `{0}` (only `-Y h +X w` is supported)")]
    UnsupportedOrientation(String),

    #[error("short read: need {needed} bytes, have {available}")]
    ShortRead { needed: usize, available: usize },

    #[error("12-bit sample out of range: {value} at {plane} plane index {index}")]
    SampleOutOfRange { plane: &'static str, index: usize, value: u16 },

    #[error("cannot normalize an all-zero plane")]
    ZeroPlane,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("plane {width}x{height} is smaller than the required {required}x{required} window")]
    PlaneTooSmall { width: usize, height: usize, required: usize },

    #[error("VIF is undefined: reference carries no information (denominator is zero)")]
    VifUndefined,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("correlation undefined: {0} vector is constant")]
    ConstantVector(&'static str),

    #[error("score {value} out of range 1..=10 at subject {subject:?}, clip {clip:?}")]
    ScoreOutOfRange { subject: String, clip: String, value: i64 },

    #[error("unknown clip `{0}`")]
    UnknownClip(String),

    #[error("invalid PU table: {0}")]
    InvalidTransfer(String),

    #[error("invalid manifest: {0}")]
    InvalidManifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by numerically undefined results rather than
    /// bad input data.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::VifUndefined | Error::ConstantVector(_) | Error::ZeroPlane)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
