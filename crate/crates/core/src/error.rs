use std::path::PathBuf;

use thiserror::Error;

use crate::kinematics::LimitViolation;

/// Errors produced anywhere in the capture pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expected {expected} values, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("pose violates {} joint limit(s): {}", .0.len(), describe_violations(.0))]
    Limit(Vec<LimitViolation>),

    #[error("invalid skeleton: {0}")]
    Skeleton(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("image size mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    ImageSize {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("invalid camera: {0}")]
    Camera(String),

    #[error("point is behind the camera (z = {0})")]
    BehindCamera(f64),

    #[error("at least one camera weight is required")]
    NoCameras,

    #[error("insufficient gait events to compute {0}")]
    InsufficientEvents(&'static str),

    #[error("{0}")]
    Input(String),

    #[error("frame {frame}: {source}")]
    AtFrame {
        frame: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at_frame(self, frame: usize) -> Self {
        Error::AtFrame {
            frame,
            source: Box::new(self),
        }
    }
}

fn describe_violations(violations: &[LimitViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
