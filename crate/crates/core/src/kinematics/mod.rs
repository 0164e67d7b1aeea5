//! Articulated skeleton, pose vectors, forward kinematics and the
//! deterministic neighbourhood grids used for prediction.

mod fk;
mod interval;
mod pose;
mod skeleton;

pub use fk::{forward_kinematics, forward_kinematics_unchecked, JointPositions};
pub use interval::{check_interval_spec, expand_interval};
pub(crate) use interval::expand_into;
pub use pose::{validate_pose, LimitViolation, PoseVector};
pub(crate) use pose::ensure_valid;
pub use skeleton::{
    default_body, dof, dof_index, joint, joint_index, BodyFile, Dof, DofEntry, DofKind,
    FleshModel, Joint, JointEntry, Segment, SegmentEntry, Skeleton, DOF_COUNT, DOF_NAMES,
    JOINT_COUNT, JOINT_NAMES, REFERENCE_HEIGHT, SEGMENT_COUNT,
};
