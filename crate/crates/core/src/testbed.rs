//! Synthetic walking sequences with ground truth, and trajectory
//! comparison.
//!
//! The walker follows a kinematic program: during stance the hip angle keeps
//! the straight leg's ankle fixed on the ground while the root advances at
//! constant speed; during swing the hip sweeps back to the front linearly and
//! the knee bends in a half-sine. Everything else stays neutral.

use std::f64::consts::PI;

use nalgebra::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{render_silhouette, CameraModel, GrayFrame, SilhouetteImage};
use crate::kinematics::{dof, joint, FleshModel, PoseVector, Skeleton, JOINT_COUNT};
use crate::trajectory::{Trajectory, TrajectoryEntry};

/// Fraction of the gait cycle each foot spends on the ground.
pub const STANCE_FRACTION: f64 = 0.58;
/// Peak knee flexion during swing, degrees.
pub const SWING_KNEE_PEAK_DEG: f64 = 15.0;
/// Gait-cycle phase of the right leg at t = 0 (mid stance).
pub const START_PHASE: f64 = 0.25;

pub const BACKGROUND_LEVEL: u8 = 60;
pub const FOREGROUND_LEVEL: u8 = 180;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkScenario {
    /// Subject stature, m. Used to build the default body for the scenario.
    pub body_height: f64,
    /// m
    pub step_length: f64,
    /// steps per minute
    pub cadence: f64,
    /// Direction of travel, degrees about the vertical; 0 walks along +x.
    pub heading_deg: f64,
    /// Hz
    pub frame_rate: f64,
    pub frame_count: usize,
    pub camera: CameraModel,
    /// Fraction of pixels flipped in each generated frame.
    pub noise_rate: f64,
    pub seed: u64,
}

impl WalkScenario {
    /// 40 frames at 20 Hz of a 1.75 m subject walking 0.6 m steps at 100
    /// steps/min, seen at 320x240 from 3.5 m to the side and 2.5 m up.
    pub fn standard() -> Self {
        WalkScenario {
            body_height: 1.75,
            step_length: 0.6,
            cadence: 100.0,
            heading_deg: 0.0,
            frame_rate: 20.0,
            frame_count: 40,
            camera: CameraModel::look_at(
                320,
                240,
                300.0,
                Point3::new(0.0, 2.5, 3.5),
                Point3::new(0.0, 0.85, 0.0),
            )
            .expect("standard camera is valid"),
            noise_rate: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.frame_count == 0 {
            return Err(Error::Input("scenario needs at least one frame".into()));
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::Input(format!("noise rate must be in [0, 1), got {}", self.noise_rate)));
        }
        if !(self.frame_rate > 0.0) {
            return Err(Error::Input(format!("frame rate must be > 0, got {}", self.frame_rate)));
        }
        if !(self.cadence >= 0.0) || !(self.step_length >= 0.0) || !(self.body_height > 0.0) {
            return Err(Error::Input("body height, step length and cadence must be non-negative".into()));
        }
        Ok(())
    }

    /// Body built for this scenario's stature.
    pub fn body(&self) -> Result<(Skeleton, FleshModel)> {
        crate::kinematics::default_body(self.body_height)
    }

    /// m/s
    pub fn speed(&self) -> f64 {
        self.step_length * self.cadence / 60.0
    }

    /// Duration of one gait cycle (two steps), s. Infinite at zero cadence.
    pub fn cycle_time(&self) -> f64 {
        120.0 / self.cadence
    }

    /// Duration of each double-support episode, s.
    pub fn double_support_time(&self) -> f64 {
        (STANCE_FRACTION - 0.5) * self.cycle_time()
    }

    fn heading(&self) -> f64 {
        self.heading_deg.to_radians()
    }

    /// Ground-truth pose at time `t`, seconds from the first frame.
    pub fn pose_at(&self, skeleton: &Skeleton, t: f64) -> PoseVector {
        let duration = (self.frame_count.saturating_sub(1)) as f64 / self.frame_rate;
        let v = self.speed();
        let h = self.heading();
        let (dx, dz) = (h.cos(), -h.sin());
        // centered on the world origin
        let travel = v * (t - duration / 2.0);
        let mut pose = PoseVector::standing(skeleton, travel * dx, travel * dz);
        pose[dof::ROOT_YAW] = h;
        if self.cadence > 0.0 && self.step_length > 0.0 {
            let cycle = self.cycle_time();
            let phase = (t / cycle + START_PHASE).rem_euclid(1.0);
            let leg = skeleton.link_length(joint::RIGHT_KNEE) + skeleton.link_length(joint::RIGHT_ANKLE);
            let reach = v * STANCE_FRACTION * cycle / 2.0;
            let (hip_r, knee_r) = leg_angles(phase, reach, leg);
            let (hip_l, knee_l) = leg_angles((phase + 0.5).rem_euclid(1.0), reach, leg);
            pose[dof::RIGHT_HIP_FLEXION] = hip_r;
            pose[dof::RIGHT_KNEE_FLEXION] = knee_r;
            pose[dof::LEFT_HIP_FLEXION] = hip_l;
            pose[dof::LEFT_KNEE_FLEXION] = knee_l;
        }
        pose.clamped(skeleton)
    }
}

/// Hip and knee flexion for a leg at gait phase `phase` (0 = foot strike).
/// `reach` is the horizontal ankle-to-hip distance at strike and toe-off.
fn leg_angles(phase: f64, reach: f64, leg: f64) -> (f64, f64) {
    let max_hip = (reach / leg).clamp(-1.0, 1.0).asin();
    if phase < STANCE_FRACTION {
        let progress = phase / STANCE_FRACTION;
        let ahead = reach * (1.0 - 2.0 * progress);
        ((ahead / leg).clamp(-1.0, 1.0).asin(), 0.0)
    } else {
        let progress = (phase - STANCE_FRACTION) / (1.0 - STANCE_FRACTION);
        let hip = -max_hip + 2.0 * max_hip * progress;
        let knee = SWING_KNEE_PEAK_DEG.to_radians() * (PI * progress).sin();
        (hip, knee)
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedWalk {
    /// Noise-free rendered masks.
    pub silhouettes: Vec<SilhouetteImage>,
    /// Camera frames: uniform background, flat foreground, flipped pixels.
    pub frames: Vec<GrayFrame>,
    pub background: GrayFrame,
    pub truth: Trajectory,
}

fn frame_seed(seed: u64, frame: usize) -> u64 {
    seed ^ (frame as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn generate_walk(scenario: &WalkScenario, skeleton: &Skeleton, flesh: &FleshModel) -> Result<GeneratedWalk> {
    scenario.validate()?;
    let cam = &scenario.camera;
    let (w, h) = (cam.width(), cam.height());
    let background = GrayFrame::filled(w, h, BACKGROUND_LEVEL)?;
    let mut truth = Trajectory::new(scenario.frame_rate)?;
    let mut silhouettes = Vec::with_capacity(scenario.frame_count);
    let mut frames = Vec::with_capacity(scenario.frame_count);

    for k in 0..scenario.frame_count {
        let pose = scenario.pose_at(skeleton, k as f64 / scenario.frame_rate);
        let mask = render_silhouette(skeleton, flesh, &pose, cam)?;
        let mut rng = ChaCha8Rng::seed_from_u64(frame_seed(scenario.seed, k));
        let data = mask
            .mask()
            .iter()
            .map(|&fg| {
                let flip = scenario.noise_rate > 0.0 && rng.random::<f64>() < scenario.noise_rate;
                if fg != flip {
                    FOREGROUND_LEVEL
                } else {
                    BACKGROUND_LEVEL
                }
            })
            .collect();
        frames.push(GrayFrame::new(w, h, data)?);
        silhouettes.push(mask);
        truth.push(TrajectoryEntry::new(skeleton, pose, 0.0));
    }

    if silhouettes.iter().all(|s| s.count() == 0) {
        return Err(Error::Input("the walk never enters the camera's view".into()));
    }
    Ok(GeneratedWalk {
        silhouettes,
        frames,
        background,
        truth,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Per-joint RMSE of 3D position, m.
    pub joint_rmse: Vec<f64>,
    /// Per-joint largest error, m.
    pub joint_max_error: Vec<f64>,
    /// Mean of the per-joint RMSEs, m.
    pub mean_rmse: f64,
}

impl EvalReport {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["joint", "rmse_m", "max_error_m"])?;
        for (j, name) in crate::kinematics::JOINT_NAMES.iter().enumerate() {
            w.write_record([name.to_string(), self.joint_rmse[j].to_string(), self.joint_max_error[j].to_string()])?;
        }
        w.write_record(["mean".to_string(), self.mean_rmse.to_string(), String::new()])?;
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Per-joint position error of an estimate against ground truth.
pub fn evaluate(estimated: &Trajectory, truth: &Trajectory) -> Result<EvalReport> {
    if estimated.len() != truth.len() {
        return Err(Error::Input(format!(
            "trajectory lengths differ: {} estimated vs {} truth frames",
            estimated.len(),
            truth.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::Input("cannot evaluate empty trajectories".into()));
    }
    let mut sq = [0.0f64; JOINT_COUNT];
    let mut max = [0.0f64; JOINT_COUNT];
    for (e, t) in estimated.entries().iter().zip(truth.entries()) {
        for j in 0..JOINT_COUNT {
            let d = (e.joints.get(j) - t.joints.get(j)).norm();
            sq[j] += d * d;
            max[j] = max[j].max(d);
        }
    }
    let n = truth.len() as f64;
    let joint_rmse: Vec<f64> = sq.iter().map(|s| (s / n).sqrt()).collect();
    let mean_rmse = joint_rmse.iter().sum::<f64>() / JOINT_COUNT as f64;
    Ok(EvalReport {
        joint_rmse,
        joint_max_error: max.to_vec(),
        mean_rmse,
    })
}
