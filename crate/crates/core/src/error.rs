use thiserror::Error;

pub type Result<T, E = LaneError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaneError {
    #[error("degenerate lane: total length {length:.3e} m is below 1e-9 m")]
    DegenerateLane { length: f64 },

    #[error("invalid lane: {0}")]
    InvalidLane(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("insufficient points: need at least {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("parameter {0} is outside [0, 1]")]
    OutOfDomain(f64),

    #[error("shape mismatch: {left} vs {right} points")]
    ShapeMismatch { left: usize, right: usize },

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("class {class} is not in [0, {num_classes})")]
    InvalidClass { class: usize, num_classes: usize },

    #[error("{gts} ground-truth lanes exceed {slots} prediction slots")]
    TooManyGroundTruths { gts: usize, slots: usize },

    #[error("invalid cost matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("empty input")]
    EmptyInput,

    #[error("point is behind the camera (depth {depth:.3e} m)")]
    BehindCamera { depth: f64 },

    #[error("invalid camera rig: {0}")]
    InvalidRig(String),

    #[error("invalid class scores: {0}")]
    InvalidScores(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Attaches frame / lane identifiers to an error raised deeper down.
    #[error("frame `{frame}`{}: {source}", lane.map(|l| format!(", lane {l}")).unwrap_or_default())]
    Context {
        frame: String,
        lane: Option<usize>,
        source: Box<LaneError>,
    },
}

impl LaneError {
    pub fn in_frame(self, frame: &str, lane: Option<usize>) -> Self {
        LaneError::Context {
            frame: frame.to_string(),
            lane,
            source: Box::new(self),
        }
    }
}
