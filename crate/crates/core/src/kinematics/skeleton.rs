//! The articulated body model: a 19-joint tree rooted at the sacrum with a
//! 31-entry degree-of-freedom table.
//!
//! Joint and DOF layouts are fixed; a skeleton file may change offsets, DOF
//! axes and limits, flesh radii and which links are rendered, but not the
//! names or their order. That keeps the index constants in [`dof`] and
//! [`joint`] valid for every skeleton.

use nalgebra::{Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const JOINT_COUNT: usize = 19;
pub const DOF_COUNT: usize = 31;
pub const SEGMENT_COUNT: usize = 17;

/// Reference stature the default proportions were laid out for, meters.
pub const REFERENCE_HEIGHT: f64 = 1.75;

/// Joint indices.
pub mod joint {
    pub const SACRUM: usize = 0;
    pub const THORAX: usize = 1;
    pub const NECK: usize = 2;
    pub const HEAD: usize = 3;
    pub const HEAD_TOP: usize = 4;
    pub const RIGHT_SHOULDER: usize = 5;
    pub const RIGHT_ELBOW: usize = 6;
    pub const RIGHT_WRIST: usize = 7;
    pub const LEFT_SHOULDER: usize = 8;
    pub const LEFT_ELBOW: usize = 9;
    pub const LEFT_WRIST: usize = 10;
    pub const RIGHT_HIP: usize = 11;
    pub const RIGHT_KNEE: usize = 12;
    pub const RIGHT_ANKLE: usize = 13;
    pub const RIGHT_TOE: usize = 14;
    pub const LEFT_HIP: usize = 15;
    pub const LEFT_KNEE: usize = 16;
    pub const LEFT_ANKLE: usize = 17;
    pub const LEFT_TOE: usize = 18;
}

/// DOF indices into a [`PoseVector`](super::PoseVector).
pub mod dof {
    pub const ROOT_TX: usize = 0;
    pub const ROOT_TY: usize = 1;
    pub const ROOT_TZ: usize = 2;
    pub const ROOT_YAW: usize = 3;
    pub const ROOT_PITCH: usize = 4;
    pub const ROOT_ROLL: usize = 5;
    pub const TRUNK_FLEXION: usize = 6;
    pub const TRUNK_LATERAL: usize = 7;
    pub const TRUNK_AXIAL: usize = 8;
    pub const NECK_FLEXION: usize = 9;
    pub const NECK_LATERAL: usize = 10;
    pub const RIGHT_SHOULDER_FLEXION: usize = 11;
    pub const RIGHT_SHOULDER_ABDUCTION: usize = 12;
    pub const RIGHT_SHOULDER_AXIAL: usize = 13;
    pub const RIGHT_ELBOW_FLEXION: usize = 14;
    pub const LEFT_SHOULDER_FLEXION: usize = 15;
    pub const LEFT_SHOULDER_ABDUCTION: usize = 16;
    pub const LEFT_SHOULDER_AXIAL: usize = 17;
    pub const LEFT_ELBOW_FLEXION: usize = 18;
    pub const RIGHT_HIP_FLEXION: usize = 19;
    pub const RIGHT_HIP_ABDUCTION: usize = 20;
    pub const RIGHT_HIP_AXIAL: usize = 21;
    pub const RIGHT_KNEE_FLEXION: usize = 22;
    pub const RIGHT_ANKLE_FLEXION: usize = 23;
    pub const RIGHT_ANKLE_INVERSION: usize = 24;
    pub const LEFT_HIP_FLEXION: usize = 25;
    pub const LEFT_HIP_ABDUCTION: usize = 26;
    pub const LEFT_HIP_AXIAL: usize = 27;
    pub const LEFT_KNEE_FLEXION: usize = 28;
    pub const LEFT_ANKLE_FLEXION: usize = 29;
    pub const LEFT_ANKLE_INVERSION: usize = 30;
}

pub const JOINT_NAMES: [&str; JOINT_COUNT] = [
    "sacrum",
    "thorax",
    "neck",
    "head",
    "head_top",
    "right_shoulder",
    "right_elbow",
    "right_wrist",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "right_hip",
    "right_knee",
    "right_ankle",
    "right_toe",
    "left_hip",
    "left_knee",
    "left_ankle",
    "left_toe",
];

const JOINT_PARENTS: [Option<usize>; JOINT_COUNT] = [
    None,
    Some(0),
    Some(1),
    Some(2),
    Some(3),
    Some(1),
    Some(5),
    Some(6),
    Some(1),
    Some(8),
    Some(9),
    Some(0),
    Some(11),
    Some(12),
    Some(13),
    Some(0),
    Some(15),
    Some(16),
    Some(17),
];

pub const DOF_NAMES: [&str; DOF_COUNT] = [
    "root_tx",
    "root_ty",
    "root_tz",
    "root_yaw",
    "root_pitch",
    "root_roll",
    "trunk_flexion",
    "trunk_lateral",
    "trunk_axial",
    "neck_flexion",
    "neck_lateral",
    "right_shoulder_flexion",
    "right_shoulder_abduction",
    "right_shoulder_axial",
    "right_elbow_flexion",
    "left_shoulder_flexion",
    "left_shoulder_abduction",
    "left_shoulder_axial",
    "left_elbow_flexion",
    "right_hip_flexion",
    "right_hip_abduction",
    "right_hip_axial",
    "right_knee_flexion",
    "right_ankle_flexion",
    "right_ankle_inversion",
    "left_hip_flexion",
    "left_hip_abduction",
    "left_hip_axial",
    "left_knee_flexion",
    "left_ankle_flexion",
    "left_ankle_inversion",
];

const DOF_OWNERS: [usize; DOF_COUNT] = [
    0, 0, 0, 0, 0, 0, // root
    1, 1, 1, // trunk
    2, 2, // neck
    5, 5, 5, 6, // right arm
    8, 8, 8, 9, // left arm
    11, 11, 11, 12, 13, 13, // right leg
    15, 15, 15, 16, 17, 17, // left leg
];

/// Index of a DOF by name.
pub fn dof_index(name: &str) -> Option<usize> {
    DOF_NAMES.iter().position(|n| *n == name)
}

/// Index of a joint by name.
pub fn joint_index(name: &str) -> Option<usize> {
    JOINT_NAMES.iter().position(|n| *n == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DofKind {
    /// Root translation along a world axis, meters.
    Translation,
    /// Rotation about a joint-local axis, radians.
    Rotation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub name: &'static str,
    pub parent: Option<usize>,
    /// Rest translation from the parent joint, expressed in the parent frame.
    pub offset: Vector3<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dof {
    pub name: &'static str,
    pub joint: usize,
    pub kind: DofKind,
    pub axis: Unit<Vector3<f64>>,
    pub min: f64,
    pub max: f64,
}

impl Dof {
    pub fn contains(&self, value: f64) -> bool {
        value >= self.min && value <= self.max
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.min, self.max)
    }
}

/// A rendered (fleshed) link between a joint and its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub parent: usize,
    pub child: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    joints: Vec<Joint>,
    segments: Vec<Segment>,
    dofs: Vec<Dof>,
    /// Rotation DOFs of each joint in composition order.
    joint_rotations: Vec<Vec<usize>>,
}

impl Skeleton {
    pub fn new(joints: Vec<Joint>, segments: Vec<Segment>, dofs: Vec<Dof>) -> Result<Self> {
        if joints.len() != JOINT_COUNT {
            return Err(Error::Skeleton(format!(
                "expected {JOINT_COUNT} joints, got {}",
                joints.len()
            )));
        }
        for (i, j) in joints.iter().enumerate() {
            if j.name != JOINT_NAMES[i] || j.parent != JOINT_PARENTS[i] {
                return Err(Error::Skeleton(format!(
                    "joint {i} must be '{}' with parent {:?}",
                    JOINT_NAMES[i], JOINT_PARENTS[i]
                )));
            }
            if !j.offset.iter().all(|c| c.is_finite()) {
                return Err(Error::Skeleton(format!("joint '{}' has a non-finite offset", j.name)));
            }
        }

        if segments.len() != SEGMENT_COUNT {
            return Err(Error::Skeleton(format!(
                "expected {SEGMENT_COUNT} rendered segments, got {}",
                segments.len()
            )));
        }
        for (i, s) in segments.iter().enumerate() {
            if s.child >= JOINT_COUNT || joints[s.child].parent != Some(s.parent) {
                return Err(Error::Skeleton(format!(
                    "segment {i} ({} -> {}) is not a parent link",
                    s.parent, s.child
                )));
            }
            if segments[..i].iter().any(|o| o.child == s.child) {
                return Err(Error::Skeleton(format!("segment {i} is listed twice")));
            }
        }

        if dofs.len() != DOF_COUNT {
            return Err(Error::Skeleton(format!(
                "expected {DOF_COUNT} DOFs, got {}",
                dofs.len()
            )));
        }
        for (i, d) in dofs.iter().enumerate() {
            if d.name != DOF_NAMES[i] || d.joint != DOF_OWNERS[i] {
                return Err(Error::Skeleton(format!(
                    "DOF {i} must be '{}' owned by joint '{}'",
                    DOF_NAMES[i], JOINT_NAMES[DOF_OWNERS[i]]
                )));
            }
            let expected_kind = if i < 3 { DofKind::Translation } else { DofKind::Rotation };
            if d.kind != expected_kind {
                return Err(Error::Skeleton(format!("DOF '{}' must be {expected_kind:?}", d.name)));
            }
            if !(d.min < d.max) || !d.min.is_finite() || !d.max.is_finite() {
                return Err(Error::Skeleton(format!(
                    "DOF '{}' needs finite min < max, got [{}, {}]",
                    d.name, d.min, d.max
                )));
            }
        }

        let mut joint_rotations = vec![Vec::new(); JOINT_COUNT];
        for (i, d) in dofs.iter().enumerate() {
            if d.kind == DofKind::Rotation {
                joint_rotations[d.joint].push(i);
            }
        }

        Ok(Skeleton {
            joints,
            segments,
            dofs,
            joint_rotations,
        })
    }

    /// Built-in skeleton scaled to the given stature.
    pub fn with_height(height: f64) -> Result<Self> {
        Ok(default_body(height)?.0)
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn dofs(&self) -> &[Dof] {
        &self.dofs
    }

    pub fn dof(&self, index: usize) -> &Dof {
        &self.dofs[index]
    }

    pub(crate) fn joint_rotations(&self, joint: usize) -> &[usize] {
        &self.joint_rotations[joint]
    }

    /// Rest length of the link ending at `child`.
    pub fn link_length(&self, child: usize) -> f64 {
        self.joints[child].offset.norm()
    }

    /// Root height that puts the toes of the neutral pose on the ground plane
    /// `y = 0`.
    pub fn standing_height(&self) -> f64 {
        let mut y = 0.0;
        let mut j = joint::RIGHT_TOE;
        while let Some(p) = self.joints[j].parent {
            y += self.joints[j].offset.y;
            j = p;
        }
        -y
    }

    /// Joint indices from the root to `leaf`, inclusive.
    pub fn chain_to(&self, leaf: usize) -> Vec<usize> {
        let mut chain = vec![leaf];
        let mut j = leaf;
        while let Some(p) = self.joints[j].parent {
            chain.push(p);
            j = p;
        }
        chain.reverse();
        chain
    }

    /// Joints without children.
    pub fn leaves(&self) -> Vec<usize> {
        (0..JOINT_COUNT)
            .filter(|&j| !self.joints.iter().any(|o| o.parent == Some(j)))
            .collect()
    }

    /// The four limb chains (both arms, both legs) as root-to-extremity paths.
    pub fn limb_chains(&self) -> [Vec<usize>; 4] {
        [
            self.chain_to(joint::RIGHT_WRIST),
            self.chain_to(joint::LEFT_WRIST),
            self.chain_to(joint::RIGHT_TOE),
            self.chain_to(joint::LEFT_TOE),
        ]
    }
}

impl Default for Skeleton {
    fn default() -> Self {
        Self::with_height(REFERENCE_HEIGHT).expect("built-in skeleton is valid")
    }
}

/// Capsule radius of each rendered segment, meters, aligned with
/// [`Skeleton::segments`].
#[derive(Debug, Clone, PartialEq)]
pub struct FleshModel {
    radii: Vec<f64>,
}

impl FleshModel {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.len() != SEGMENT_COUNT {
            return Err(Error::Skeleton(format!(
                "expected {SEGMENT_COUNT} flesh radii, got {}",
                radii.len()
            )));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return Err(Error::Skeleton(format!("flesh radius must be > 0, got {r}")));
        }
        Ok(FleshModel { radii })
    }

    pub fn with_height(height: f64) -> Result<Self> {
        Ok(default_body(height)?.1)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
}

impl Default for FleshModel {
    fn default() -> Self {
        Self::with_height(REFERENCE_HEIGHT).expect("built-in flesh model is valid")
    }
}

// Rest offsets at the reference height; x forward, y up, z toward the
// subject's right.
const DEFAULT_OFFSETS: [[f64; 3]; JOINT_COUNT] = [
    [0.0, 0.0, 0.0],
    [0.0, 0.05, 0.0],
    [0.0, 0.45, 0.0],
    [0.0, 0.10, 0.0],
    [0.0, 0.12, 0.0],
    [0.0, 0.38, 0.18],
    [0.0, -0.29, 0.0],
    [0.0, -0.26, 0.0],
    [0.0, 0.38, -0.18],
    [0.0, -0.29, 0.0],
    [0.0, -0.26, 0.0],
    [0.0, -0.07, 0.09],
    [0.0, -0.43, 0.0],
    [0.0, -0.42, 0.0],
    [0.15, -0.05, 0.0],
    [0.0, -0.07, -0.09],
    [0.0, -0.43, 0.0],
    [0.0, -0.42, 0.0],
    [0.15, -0.05, 0.0],
];

// (child joint, radius at reference height). The sacrum -> thorax link is
// structural only; the torso capsule's caps cover it.
const DEFAULT_SEGMENTS: [(usize, f64); SEGMENT_COUNT] = [
    (joint::NECK, 0.13),
    (joint::HEAD, 0.05),
    (joint::HEAD_TOP, 0.09),
    (joint::RIGHT_SHOULDER, 0.05),
    (joint::RIGHT_ELBOW, 0.045),
    (joint::RIGHT_WRIST, 0.04),
    (joint::LEFT_SHOULDER, 0.05),
    (joint::LEFT_ELBOW, 0.045),
    (joint::LEFT_WRIST, 0.04),
    (joint::RIGHT_HIP, 0.08),
    (joint::RIGHT_KNEE, 0.07),
    (joint::RIGHT_ANKLE, 0.05),
    (joint::RIGHT_TOE, 0.04),
    (joint::LEFT_HIP, 0.08),
    (joint::LEFT_KNEE, 0.07),
    (joint::LEFT_ANKLE, 0.05),
    (joint::LEFT_TOE, 0.04),
];

// (axis, min degrees, max degrees); translations in meters.
const DEFAULT_DOFS: [([f64; 3], f64, f64); DOF_COUNT] = [
    ([1.0, 0.0, 0.0], -20.0, 20.0),
    ([0.0, 1.0, 0.0], 0.0, 3.0),
    ([0.0, 0.0, 1.0], -20.0, 20.0),
    ([0.0, 1.0, 0.0], -180.0, 180.0),
    ([0.0, 0.0, 1.0], -45.0, 45.0),
    ([1.0, 0.0, 0.0], -45.0, 45.0),
    // trunk
    ([0.0, 0.0, -1.0], -30.0, 90.0),
    ([1.0, 0.0, 0.0], -40.0, 40.0),
    ([0.0, 1.0, 0.0], -45.0, 45.0),
    // neck
    ([0.0, 0.0, -1.0], -50.0, 60.0),
    ([1.0, 0.0, 0.0], -45.0, 45.0),
    // right arm
    ([0.0, 0.0, 1.0], -60.0, 180.0),
    ([-1.0, 0.0, 0.0], -20.0, 170.0),
    ([0.0, 1.0, 0.0], -90.0, 90.0),
    ([0.0, 0.0, 1.0], 0.0, 150.0),
    // left arm
    ([0.0, 0.0, 1.0], -60.0, 180.0),
    ([1.0, 0.0, 0.0], -20.0, 170.0),
    ([0.0, -1.0, 0.0], -90.0, 90.0),
    ([0.0, 0.0, 1.0], 0.0, 150.0),
    // right leg
    ([0.0, 0.0, 1.0], -30.0, 60.0),
    ([-1.0, 0.0, 0.0], -30.0, 45.0),
    ([0.0, 1.0, 0.0], -45.0, 45.0),
    ([0.0, 0.0, -1.0], 0.0, 140.0),
    ([0.0, 0.0, 1.0], -50.0, 30.0),
    ([1.0, 0.0, 0.0], -30.0, 30.0),
    // left leg
    ([0.0, 0.0, 1.0], -30.0, 60.0),
    ([1.0, 0.0, 0.0], -30.0, 45.0),
    ([0.0, -1.0, 0.0], -45.0, 45.0),
    ([0.0, 0.0, -1.0], 0.0, 140.0),
    ([0.0, 0.0, 1.0], -50.0, 30.0),
    ([-1.0, 0.0, 0.0], -30.0, 30.0),
];

/// Built-in skeleton and flesh, with lengths and radii proportional to
/// `height / 1.75`.
pub fn default_body(height: f64) -> Result<(Skeleton, FleshModel)> {
    if !(height > 0.0) || !height.is_finite() {
        return Err(Error::Skeleton(format!("body height must be > 0, got {height}")));
    }
    let scale = height / REFERENCE_HEIGHT;
    let joints = (0..JOINT_COUNT)
        .map(|i| Joint {
            name: JOINT_NAMES[i],
            parent: JOINT_PARENTS[i],
            offset: Vector3::from(DEFAULT_OFFSETS[i]) * scale,
        })
        .collect();
    let segments = DEFAULT_SEGMENTS
        .iter()
        .map(|&(child, _)| Segment {
            parent: JOINT_PARENTS[child].expect("segments end at non-root joints"),
            child,
        })
        .collect();
    let dofs = (0..DOF_COUNT)
        .map(|i| {
            let (axis, lo, hi) = DEFAULT_DOFS[i];
            let kind = if i < 3 { DofKind::Translation } else { DofKind::Rotation };
            let (min, max) = match kind {
                DofKind::Translation => (lo, hi),
                DofKind::Rotation => (lo.to_radians(), hi.to_radians()),
            };
            Dof {
                name: DOF_NAMES[i],
                joint: DOF_OWNERS[i],
                kind,
                axis: Unit::new_normalize(Vector3::from(axis)),
                min,
                max,
            }
        })
        .collect();
    let radii = DEFAULT_SEGMENTS.iter().map(|&(_, r)| r * scale).collect();
    Ok((Skeleton::new(joints, segments, dofs)?, FleshModel::new(radii)?))
}

/// On-disk body description. Angles are degrees, lengths meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyFile {
    pub joints: Vec<JointEntry>,
    pub segments: Vec<SegmentEntry>,
    pub dofs: Vec<DofEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    pub offset: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentEntry {
    pub parent: String,
    pub child: String,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DofEntry {
    pub name: String,
    pub joint: String,
    pub kind: DofKind,
    pub axis: [f64; 3],
    /// Degrees for rotations, meters for translations.
    pub min: f64,
    pub max: f64,
}

impl BodyFile {
    pub fn from_body(skeleton: &Skeleton, flesh: &FleshModel) -> Self {
        let joints = skeleton
            .joints()
            .iter()
            .map(|j| JointEntry {
                name: j.name.to_string(),
                parent: j.parent.map(|p| JOINT_NAMES[p].to_string()),
                offset: j.offset.into(),
            })
            .collect();
        let segments = skeleton
            .segments()
            .iter()
            .zip(flesh.radii())
            .map(|(s, &radius)| SegmentEntry {
                parent: JOINT_NAMES[s.parent].to_string(),
                child: JOINT_NAMES[s.child].to_string(),
                radius,
            })
            .collect();
        let dofs = skeleton
            .dofs()
            .iter()
            .map(|d| {
                let (min, max) = match d.kind {
                    DofKind::Translation => (d.min, d.max),
                    DofKind::Rotation => (d.min.to_degrees(), d.max.to_degrees()),
                };
                DofEntry {
                    name: d.name.to_string(),
                    joint: JOINT_NAMES[d.joint].to_string(),
                    kind: d.kind,
                    axis: d.axis.into_inner().into(),
                    min,
                    max,
                }
            })
            .collect();
        BodyFile {
            joints,
            segments,
            dofs,
        }
    }

    pub fn into_body(self) -> Result<(Skeleton, FleshModel)> {
        let lookup = |name: &str| {
            joint_index(name).ok_or_else(|| Error::Skeleton(format!("unknown joint '{name}'")))
        };
        if self.joints.len() != JOINT_COUNT {
            return Err(Error::Skeleton(format!(
                "expected {JOINT_COUNT} joints, got {}",
                self.joints.len()
            )));
        }
        let mut joints = Vec::with_capacity(JOINT_COUNT);
        for (i, entry) in self.joints.iter().enumerate() {
            let parent = entry.parent.as_deref().map(lookup).transpose()?;
            if entry.name != JOINT_NAMES[i] {
                return Err(Error::Skeleton(format!(
                    "joint {i} must be named '{}', got '{}'",
                    JOINT_NAMES[i], entry.name
                )));
            }
            joints.push(Joint {
                name: JOINT_NAMES[i],
                parent,
                offset: Vector3::from(entry.offset),
            });
        }

        let mut segments = Vec::with_capacity(self.segments.len());
        let mut radii = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            segments.push(Segment {
                parent: lookup(&s.parent)?,
                child: lookup(&s.child)?,
            });
            radii.push(s.radius);
        }

        if self.dofs.len() != DOF_COUNT {
            return Err(Error::Skeleton(format!(
                "expected {DOF_COUNT} DOFs, got {}",
                self.dofs.len()
            )));
        }
        let mut dofs = Vec::with_capacity(DOF_COUNT);
        for (i, d) in self.dofs.iter().enumerate() {
            if d.name != DOF_NAMES[i] {
                return Err(Error::Skeleton(format!(
                    "DOF {i} must be named '{}', got '{}'",
                    DOF_NAMES[i], d.name
                )));
            }
            let axis = Vector3::from(d.axis);
            if !(axis.norm() > 0.0) {
                return Err(Error::Skeleton(format!("DOF '{}' has a zero axis", d.name)));
            }
            let (min, max) = match d.kind {
                DofKind::Translation => (d.min, d.max),
                DofKind::Rotation => (d.min.to_radians(), d.max.to_radians()),
            };
            dofs.push(Dof {
                name: DOF_NAMES[i],
                joint: lookup(&d.joint)?,
                kind: d.kind,
                axis: Unit::new_normalize(axis),
                min,
                max,
            });
        }

        Ok((Skeleton::new(joints, segments, dofs)?, FleshModel::new(radii)?))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("body file serializes")
    }
}
