use nalgebra::{Matrix3, Point3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use super::pose::{ensure_valid, PoseVector};
use super::skeleton::{dof, Skeleton, JOINT_COUNT};
use crate::error::Result;

/// World-frame position of every joint, meters, ordered as the skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointPositions(pub [Point3<f64>; JOINT_COUNT]);

impl JointPositions {
    pub fn get(&self, joint: usize) -> Point3<f64> {
        self.0[joint]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point3<f64>> {
        self.0.iter()
    }

    pub fn translated(&self, t: Vector3<f64>) -> Self {
        let mut out = *self;
        for p in out.0.iter_mut() {
            *p += t;
        }
        out
    }
}

/// Positions the skeleton in the world. Fails if the pose is outside the
/// joint limits.
pub fn forward_kinematics(skeleton: &Skeleton, pose: &PoseVector) -> Result<JointPositions> {
    ensure_valid(skeleton, pose)?;
    Ok(forward_kinematics_unchecked(skeleton, pose))
}

/// Forward kinematics without the limit check.
pub fn forward_kinematics_unchecked(skeleton: &Skeleton, pose: &PoseVector) -> JointPositions {
    let mut positions = [Point3::origin(); JOINT_COUNT];
    let mut frames = [Matrix3::identity(); JOINT_COUNT];

    for (j, joint) in skeleton.joints().iter().enumerate() {
        let (origin, parent_frame) = match joint.parent {
            None => (
                Point3::new(pose[dof::ROOT_TX], pose[dof::ROOT_TY], pose[dof::ROOT_TZ]),
                Matrix3::identity(),
            ),
            Some(p) => (positions[p] + frames[p] * joint.offset, frames[p]),
        };
        positions[j] = origin;
        let mut frame = parent_frame;
        for &d in skeleton.joint_rotations(j) {
            let value = pose[d];
            if value != 0.0 {
                frame *= Rotation3::from_axis_angle(&skeleton.dof(d).axis, value).matrix();
            }
        }
        frames[j] = frame;
    }
    JointPositions(positions)
}
