//! Markerless gait capture from silhouettes.
//!
//! A 19-joint, 31-DOF articulated body is fleshed with capsules, projected
//! through pinhole cameras and compared with background-subtracted
//! silhouettes. Interval particle filtering recovers the pose sequence, from
//! which gait parameters are derived. A synthetic walk generator provides
//! ground truth for evaluation.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod gait;
pub mod imaging;
pub mod ipf;
pub mod kinematics;
pub mod likelihood;
pub mod testbed;
pub mod trajectory;

pub use config::{parse_config, RunConfig};
pub use error::{Error, Result};
pub use imaging::{CameraModel, GrayFrame, SilhouetteImage};
pub use ipf::{IpfConfig, Particle, ParticleSet};
pub use kinematics::{FleshModel, JointPositions, PoseVector, Skeleton};
pub use likelihood::PixelCounts;
pub use trajectory::{Trajectory, TrajectoryEntry};
