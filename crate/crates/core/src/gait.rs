//! Gait parameters from an estimated trajectory.
//!
//! Stance is detected by thresholding the horizontal ankle speed. Stance
//! positions (mean ankle position over each stance interval) give step and
//! stride lengths along the direction of travel; overlaps between the two
//! feet's stance intervals give double support.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{dof, joint};
use crate::trajectory::Trajectory;

/// Ankle speed below which a foot counts as planted, m/s.
pub const DEFAULT_VELOCITY_THRESHOLD: f64 = 0.1;

/// Inclusive frame range during which a foot is planted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StanceInterval {
    pub start: usize,
    pub end: usize,
}

impl StanceInterval {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    /// Always false: an interval holds at least its start frame.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, frame: usize) -> bool {
        (self.start..=self.end).contains(&frame)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Foot {
    Left,
    Right,
}

impl Foot {
    pub fn ankle(self) -> usize {
        match self {
            Foot::Left => joint::LEFT_ANKLE,
            Foot::Right => joint::RIGHT_ANKLE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FootEvents {
    pub left: Vec<StanceInterval>,
    pub right: Vec<StanceInterval>,
}

impl FootEvents {
    pub fn foot(&self, foot: Foot) -> &[StanceInterval] {
        match foot {
            Foot::Left => &self.left,
            Foot::Right => &self.right,
        }
    }

    fn in_stance(&self, foot: Foot, frame: usize) -> bool {
        self.foot(foot).iter().any(|s| s.contains(frame))
    }
}

fn horizontal(p: &nalgebra::Point3<f64>) -> Vector2<f64> {
    Vector2::new(p.x, p.z)
}

/// Horizontal speed of a joint per frame, m/s: central differences inside,
/// one-sided at the ends.
pub fn horizontal_speeds(trajectory: &Trajectory, joint: usize) -> Vec<f64> {
    let track: Vec<Vector2<f64>> = trajectory.joint_track(joint).iter().map(horizontal).collect();
    let n = track.len();
    let rate = trajectory.frame_rate();
    (0..n)
        .map(|i| {
            if n < 2 {
                0.0
            } else if i == 0 {
                (track[1] - track[0]).norm() * rate
            } else if i == n - 1 {
                (track[n - 1] - track[n - 2]).norm() * rate
            } else {
                (track[i + 1] - track[i - 1]).norm() * rate / 2.0
            }
        })
        .collect()
}

fn stance_runs(speeds: &[f64], threshold: f64) -> Vec<StanceInterval> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &v) in speeds.iter().enumerate() {
        match (v < threshold, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push(StanceInterval { start: s, end: i - 1 });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push(StanceInterval { start: s, end: speeds.len() - 1 });
    }
    runs.retain(|r| r.len() >= 2);
    runs
}

/// Stance intervals of each foot.
pub fn detect_foot_events(trajectory: &Trajectory, velocity_threshold: f64) -> Result<FootEvents> {
    if trajectory.len() < 3 {
        return Err(Error::Input(format!(
            "gait event detection needs at least 3 frames, got {}",
            trajectory.len()
        )));
    }
    Ok(FootEvents {
        left: stance_runs(&horizontal_speeds(trajectory, joint::LEFT_ANKLE), velocity_threshold),
        right: stance_runs(&horizontal_speeds(trajectory, joint::RIGHT_ANKLE), velocity_threshold),
    })
}

/// Unit horizontal direction of travel (from the sacrum's net displacement)
/// and the lateral direction perpendicular to it, both as `(x, z)`.
pub fn progression_axes(trajectory: &Trajectory) -> (Vector2<f64>, Vector2<f64>) {
    let track = trajectory.joint_track(joint::SACRUM);
    let forward = match (track.first(), track.last()) {
        (Some(a), Some(b)) => horizontal(b) - horizontal(a),
        _ => Vector2::zeros(),
    };
    let forward = if forward.norm() > 1e-9 {
        forward.normalize()
    } else {
        Vector2::new(1.0, 0.0)
    };
    (forward, Vector2::new(-forward.y, forward.x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitReport {
    /// m/s
    pub walking_speed: f64,
    /// m
    pub step_length: f64,
    /// m
    pub stride_length: f64,
    /// m
    pub stride_width: f64,
    /// steps per minute
    pub cadence: f64,
    /// Mean double-support episode, s.
    pub double_support_time: f64,
    /// Each complete double-support episode, s.
    pub double_support_episodes: Vec<f64>,
    /// s
    pub single_support_left: f64,
    /// s
    pub single_support_right: f64,
    /// degrees
    pub hip_range_left: f64,
    pub hip_range_right: f64,
    pub knee_range_left: f64,
    pub knee_range_right: f64,
    pub step_count: usize,
    pub stride_count: usize,
}

impl GaitReport {
    /// Field names and values in a fixed order, for CSV output.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("walking_speed_m_s", self.walking_speed),
            ("step_length_m", self.step_length),
            ("stride_length_m", self.stride_length),
            ("stride_width_m", self.stride_width),
            ("cadence_steps_min", self.cadence),
            ("double_support_s", self.double_support_time),
            ("single_support_left_s", self.single_support_left),
            ("single_support_right_s", self.single_support_right),
            ("hip_range_left_deg", self.hip_range_left),
            ("hip_range_right_deg", self.hip_range_right),
            ("knee_range_left_deg", self.knee_range_left),
            ("knee_range_right_deg", self.knee_range_right),
            ("step_count", self.step_count as f64),
            ("stride_count", self.stride_count as f64),
        ]
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let rows = self.rows();
        w.write_record(rows.iter().map(|(k, _)| *k))?;
        w.write_record(rows.iter().map(|(_, v)| v.to_string()))?;
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn angle_range(trajectory: &Trajectory, dof: usize) -> f64 {
    let values = trajectory.entries().iter().map(|e| e.pose[dof]);
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo.is_finite() {
        (hi - lo).to_degrees()
    } else {
        0.0
    }
}

pub fn compute_gait_report(trajectory: &Trajectory, events: &FootEvents) -> Result<GaitReport> {
    let n = trajectory.len();
    if n < 2 {
        return Err(Error::InsufficientEvents("walking speed"));
    }
    let period = 1.0 / trajectory.frame_rate();
    let (forward, lateral) = progression_axes(trajectory);

    let stance_position = |foot: Foot, s: &StanceInterval| -> Vector2<f64> {
        let sum: Vector2<f64> = (s.start..=s.end)
            .map(|k| horizontal(&trajectory.entries()[k].joints.get(foot.ankle())))
            .sum();
        sum / s.len() as f64
    };

    let mut strides = Vec::new();
    for foot in [Foot::Left, Foot::Right] {
        for pair in events.foot(foot).windows(2) {
            let d = stance_position(foot, &pair[1]) - stance_position(foot, &pair[0]);
            strides.push(d.dot(&forward).abs());
        }
    }
    if strides.is_empty() {
        return Err(Error::InsufficientEvents("stride length"));
    }

    let mut placements: Vec<(Foot, StanceInterval)> = events
        .left
        .iter()
        .map(|s| (Foot::Left, *s))
        .chain(events.right.iter().map(|s| (Foot::Right, *s)))
        .collect();
    placements.sort_by_key(|(foot, s)| (s.start, *foot == Foot::Right));
    let (mut steps, mut widths) = (Vec::new(), Vec::new());
    // step timing from foot-strike to foot-strike; a stance already under
    // way at frame 0 has no observed strike
    let (mut step_times, mut clipped_step_times) = (Vec::new(), Vec::new());
    for pair in placements.windows(2) {
        let ((fa, sa), (fb, sb)) = (pair[0], pair[1]);
        if fa == fb {
            continue;
        }
        let d = stance_position(fb, &sb) - stance_position(fa, &sa);
        steps.push(d.dot(&forward).abs());
        widths.push(d.dot(&lateral).abs());
        let dt = (sb.start - sa.start) as f64 * period;
        if sa.start > 0 {
            step_times.push(dt);
        } else {
            clipped_step_times.push(dt);
        }
    }
    if steps.is_empty() {
        return Err(Error::InsufficientEvents("step length"));
    }
    if step_times.is_empty() {
        step_times = clipped_step_times;
    }
    let mean_step_time = mean(&step_times);
    let cadence = if mean_step_time > 0.0 { 60.0 / mean_step_time } else { 0.0 };

    // complete double-support episodes (not cut by the sequence ends)
    let both: Vec<bool> = (0..n)
        .map(|k| events.in_stance(Foot::Left, k) && events.in_stance(Foot::Right, k))
        .collect();
    let runs = stance_runs_bool(&both);
    let episodes: Vec<f64> = runs
        .iter()
        .filter(|r| r.start > 0 && r.end < n - 1)
        .map(|r| r.len() as f64 * period)
        .collect();
    let double_support_time = if episodes.is_empty() { 0.0 } else { mean(&episodes) };

    let single_support = |foot: Foot, other: Foot| -> f64 {
        let intervals = events.foot(foot);
        let complete: Vec<&StanceInterval> = intervals.iter().filter(|s| s.start > 0 && s.end < n - 1).collect();
        let chosen: Vec<&StanceInterval> = if complete.is_empty() { intervals.iter().collect() } else { complete };
        if chosen.is_empty() {
            return 0.0;
        }
        let times: Vec<f64> = chosen
            .iter()
            .map(|s| (s.start..=s.end).filter(|&k| !events.in_stance(other, k)).count() as f64 * period)
            .collect();
        mean(&times)
    };

    let sacrum = trajectory.joint_track(joint::SACRUM);
    let displacement = (horizontal(&sacrum[n - 1]) - horizontal(&sacrum[0])).norm();
    let walking_speed = displacement / ((n - 1) as f64 * period);

    Ok(GaitReport {
        walking_speed,
        step_length: mean(&steps),
        stride_length: mean(&strides),
        stride_width: mean(&widths),
        cadence,
        double_support_time,
        double_support_episodes: episodes,
        single_support_left: single_support(Foot::Left, Foot::Right),
        single_support_right: single_support(Foot::Right, Foot::Left),
        hip_range_left: angle_range(trajectory, dof::LEFT_HIP_FLEXION),
        hip_range_right: angle_range(trajectory, dof::RIGHT_HIP_FLEXION),
        knee_range_left: angle_range(trajectory, dof::LEFT_KNEE_FLEXION),
        knee_range_right: angle_range(trajectory, dof::RIGHT_KNEE_FLEXION),
        step_count: steps.len(),
        stride_count: strides.len(),
    })
}

fn stance_runs_bool(flags: &[bool]) -> Vec<StanceInterval> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &f) in flags.iter().enumerate() {
        match (f, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push(StanceInterval { start: s, end: i - 1 });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push(StanceInterval { start: s, end: flags.len() - 1 });
    }
    runs
}

/// One row per frame of longitudinal ankle displacement, the curves from
/// which steps and double support are read by eye.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnkleDisplacement {
    pub frame: usize,
    pub time: f64,
    pub right: f64,
    pub left: f64,
}

pub fn ankle_displacement(trajectory: &Trajectory) -> Vec<AnkleDisplacement> {
    let (forward, _) = progression_axes(trajectory);
    let Some(first) = trajectory.entries().first() else {
        return Vec::new();
    };
    let origin = horizontal(&first.joints.get(joint::SACRUM));
    trajectory
        .entries()
        .iter()
        .enumerate()
        .map(|(k, e)| AnkleDisplacement {
            frame: k,
            time: trajectory.time(k),
            right: (horizontal(&e.joints.get(joint::RIGHT_ANKLE)) - origin).dot(&forward),
            left: (horizontal(&e.joints.get(joint::LEFT_ANKLE)) - origin).dot(&forward),
        })
        .collect()
}

pub fn write_ankle_csv<W: std::io::Write>(rows: &[AnkleDisplacement], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["frame", "time", "right_ankle_m", "left_ankle_m"])?;
    for r in rows {
        w.write_record([r.frame.to_string(), r.time.to_string(), r.right.to_string(), r.left.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
