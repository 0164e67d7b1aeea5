use std::fmt;
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use super::skeleton::{dof, Skeleton, DOF_COUNT, DOF_NAMES};
use crate::error::{Error, Result};

/// Full body configuration: root translation (m), root orientation and
/// joint angles (rad), ordered as the skeleton's DOF table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PoseVector([f64; DOF_COUNT]);

impl PoseVector {
    pub fn zeros() -> Self {
        PoseVector([0.0; DOF_COUNT])
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        let arr: [f64; DOF_COUNT] = values.try_into().map_err(|_| Error::Dimension {
            expected: DOF_COUNT,
            actual: values.len(),
        })?;
        Ok(PoseVector(arr))
    }

    /// Upright pose with the feet on the ground plane and the root at
    /// `(x, z)`.
    pub fn standing(skeleton: &Skeleton, x: f64, z: f64) -> Self {
        let mut p = Self::zeros();
        p[dof::ROOT_TX] = x;
        p[dof::ROOT_TY] = skeleton.standing_height();
        p[dof::ROOT_TZ] = z;
        p
    }

    pub fn as_array(&self) -> &[f64; DOF_COUNT] {
        &self.0
    }

    /// Copy with every value clamped into its DOF range.
    pub fn clamped(mut self, skeleton: &Skeleton) -> Self {
        for (v, d) in self.0.iter_mut().zip(skeleton.dofs()) {
            *v = d.clamp(*v);
        }
        self
    }

    pub fn is_valid(&self, skeleton: &Skeleton) -> bool {
        self.0.iter().zip(skeleton.dofs()).all(|(v, d)| d.contains(*v))
    }

    /// Bit pattern used for exact-equality hashing; `-0.0` and `0.0` map to
    /// the same key.
    pub(crate) fn bit_key(&self) -> [u64; DOF_COUNT] {
        let mut key = [0u64; DOF_COUNT];
        for (k, v) in key.iter_mut().zip(self.0) {
            *k = if v == 0.0 { 0 } else { v.to_bits() };
        }
        key
    }
}

impl Default for PoseVector {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Deref for PoseVector {
    type Target = [f64; DOF_COUNT];
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for PoseVector {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl TryFrom<Vec<f64>> for PoseVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::from_slice(&v)
    }
}

impl From<PoseVector> for Vec<f64> {
    fn from(p: PoseVector) -> Self {
        p.0.to_vec()
    }
}

impl From<[f64; DOF_COUNT]> for PoseVector {
    fn from(a: [f64; DOF_COUNT]) -> Self {
        PoseVector(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitViolation {
    pub dof: usize,
    pub value: f64,
    /// The bound that was crossed.
    pub bound: f64,
}

impl fmt::Display for LimitViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = if self.value > self.bound { "above max" } else { "below min" };
        write!(
            f,
            "{} = {} {side} {}",
            DOF_NAMES[self.dof], self.value, self.bound
        )
    }
}

/// Lists every value outside its DOF's inclusive range.
pub fn validate_pose(skeleton: &Skeleton, values: &[f64]) -> Result<Vec<LimitViolation>> {
    if values.len() != DOF_COUNT {
        return Err(Error::Dimension {
            expected: DOF_COUNT,
            actual: values.len(),
        });
    }
    Ok(values
        .iter()
        .zip(skeleton.dofs())
        .enumerate()
        .filter_map(|(i, (&value, d))| {
            if value < d.min {
                Some(LimitViolation { dof: i, value, bound: d.min })
            } else if value > d.max {
                Some(LimitViolation { dof: i, value, bound: d.max })
            } else if value.is_nan() {
                Some(LimitViolation { dof: i, value, bound: d.min })
            } else {
                None
            }
        })
        .collect())
}

pub(crate) fn ensure_valid(skeleton: &Skeleton, pose: &PoseVector) -> Result<()> {
    let violations = validate_pose(skeleton, pose.as_slice())?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Limit(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_pose_is_valid() {
        let s = Skeleton::default();
        assert!(validate_pose(&s, &[0.0; DOF_COUNT]).unwrap().is_empty());
    }

    #[test]
    fn hip_flexion_over_limit() {
        let s = Skeleton::default();
        let mut p = PoseVector::zeros();
        p[dof::RIGHT_HIP_FLEXION] = 70f64.to_radians();
        let v = validate_pose(&s, p.as_slice()).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].dof, dof::RIGHT_HIP_FLEXION);
        assert_eq!(v[0].bound, s.dof(dof::RIGHT_HIP_FLEXION).max);
    }

    #[test]
    fn bounds_are_inclusive() {
        let s = Skeleton::default();
        let mut p = PoseVector::zeros();
        p[dof::RIGHT_HIP_FLEXION] = s.dof(dof::RIGHT_HIP_FLEXION).max;
        assert!(validate_pose(&s, p.as_slice()).unwrap().is_empty());
        p[dof::RIGHT_HIP_FLEXION] = 60f64.to_radians();
        assert!(validate_pose(&s, p.as_slice()).unwrap().is_empty());
    }

    #[test]
    fn wrong_length_is_dimension_error() {
        let s = Skeleton::default();
        assert!(matches!(
            validate_pose(&s, &[0.0; 30]),
            Err(Error::Dimension { expected: 31, actual: 30 })
        ));
        assert!(PoseVector::from_slice(&[0.0; 32]).is_err());
    }

    #[test]
    fn nan_is_a_violation() {
        let s = Skeleton::default();
        let mut p = PoseVector::zeros();
        p[dof::NECK_FLEXION] = f64::NAN;
        assert_eq!(validate_pose(&s, p.as_slice()).unwrap().len(), 1);
    }

    #[test]
    fn clamping_produces_valid_pose() {
        let s = Skeleton::default();
        let p = PoseVector::from([10.0; DOF_COUNT]).clamped(&s);
        assert!(p.is_valid(&s));
        assert_eq!(p[dof::RIGHT_KNEE_FLEXION], s.dof(dof::RIGHT_KNEE_FLEXION).max);
    }
}
