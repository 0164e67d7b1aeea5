//! Interval particle filtering.
//!
//! Each frame keeps the `M` heaviest distinct particles, replaces every one
//! of them by a deterministic grid of `I` neighbours over the interesting
//! DOFs (noise on the others), scores all `M * I` against the observed
//! silhouettes and reports the heaviest. There is no motion model and no
//! weight-proportional resampling. The first frame is an exhaustive search
//! over a configured lattice.

mod config;
mod filter;
mod particle;

pub use config::{
    InitGrid, IpfConfig, DEFAULT_ANGLE_SIGMA, DEFAULT_INTERESTING_DIMS, DEFAULT_TRANSLATION_SIGMA,
};
pub use filter::{
    initialize, measure, predict, score_pose, select, track, track_silhouettes, FrameLog,
    Observation, Scene, Tracker,
};
pub use particle::{Particle, ParticleSet};
