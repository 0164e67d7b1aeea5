//! Per-frame pose estimates with their joint positions, plus CSV and JSON
//! serialization.
//!
//! CSV layout: `frame,time,<31 DOF columns>,<19 x (x,y,z) joint columns>,weight`.
//! Root translations and joint positions are meters, angles degrees.

use std::io::{Read, Write};

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{
    forward_kinematics_unchecked, JointPositions, PoseVector, Skeleton, DOF_COUNT,
    DOF_NAMES, JOINT_COUNT, JOINT_NAMES,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEntry {
    pub pose: PoseVector,
    pub weight: f64,
    pub joints: JointPositions,
}

impl TrajectoryEntry {
    pub fn new(skeleton: &Skeleton, pose: PoseVector, weight: f64) -> Self {
        TrajectoryEntry {
            pose,
            weight,
            joints: forward_kinematics_unchecked(skeleton, &pose),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    frame_rate: f64,
    entries: Vec<TrajectoryEntry>,
}

// root translations lead the DOF table
fn is_translation(dof: usize) -> bool {
    dof < 3
}

impl Trajectory {
    pub fn new(frame_rate: f64) -> Result<Self> {
        if !(frame_rate > 0.0) || !frame_rate.is_finite() {
            return Err(Error::Input(format!("frame rate must be > 0, got {frame_rate}")));
        }
        Ok(Trajectory {
            frame_rate,
            entries: Vec::new(),
        })
    }

    pub fn from_entries(frame_rate: f64, entries: Vec<TrajectoryEntry>) -> Result<Self> {
        let mut t = Self::new(frame_rate)?;
        t.entries = entries;
        Ok(t)
    }

    pub fn push(&mut self, entry: TrajectoryEntry) {
        self.entries.push(entry);
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    /// Same poses relabelled with a different frame rate.
    pub fn with_frame_rate(&self, frame_rate: f64) -> Result<Self> {
        Self::from_entries(frame_rate, self.entries.clone())
    }

    pub fn entries(&self) -> &[TrajectoryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn time(&self, frame: usize) -> f64 {
        frame as f64 / self.frame_rate
    }

    /// Positions of one joint over time.
    pub fn joint_track(&self, joint: usize) -> Vec<Point3<f64>> {
        self.entries.iter().map(|e| e.joints.get(joint)).collect()
    }

    pub fn csv_header() -> Vec<String> {
        let mut h = vec!["frame".to_string(), "time".to_string()];
        h.extend(DOF_NAMES.iter().map(|n| n.to_string()));
        for j in JOINT_NAMES {
            for axis in ["x", "y", "z"] {
                h.push(format!("{j}_{axis}"));
            }
        }
        h.push("weight".into());
        h
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(Self::csv_header())?;
        let mut row: Vec<String> = Vec::with_capacity(3 + DOF_COUNT + 3 * JOINT_COUNT);
        for (k, e) in self.entries.iter().enumerate() {
            row.clear();
            row.push(k.to_string());
            row.push(self.time(k).to_string());
            for (i, v) in e.pose.iter().enumerate() {
                let v = if is_translation(i) { *v } else { v.to_degrees() };
                row.push(v.to_string());
            }
            for p in e.joints.iter() {
                row.extend([p.x.to_string(), p.y.to_string(), p.z.to_string()]);
            }
            row.push(e.weight.to_string());
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Reads the CSV layout written by [`Trajectory::write_csv`]. The frame
    /// rate comes from the time column; single-row files use
    /// `fallback_rate`.
    pub fn read_csv<R: Read>(reader: R, fallback_rate: f64) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        if header != Self::csv_header() {
            return Err(Error::Input("trajectory CSV header does not match the expected columns".into()));
        }
        let mut entries = Vec::new();
        let mut last_time = (0usize, 0.0f64);
        for (line, record) in r.records().enumerate() {
            let record = record?;
            let field = |i: usize| -> Result<f64> {
                record[i].parse::<f64>().map_err(|e| {
                    Error::Input(format!("trajectory CSV row {}: column '{}': {e}", line + 1, header[i]))
                })
            };
            let frame = field(0)? as usize;
            last_time = (frame, field(1)?);
            let mut pose = PoseVector::zeros();
            for i in 0..DOF_COUNT {
                let v = field(2 + i)?;
                pose[i] = if is_translation(i) { v } else { v.to_radians() };
            }
            let mut joints = [Point3::origin(); JOINT_COUNT];
            for (j, p) in joints.iter_mut().enumerate() {
                let c = 2 + DOF_COUNT + 3 * j;
                *p = Point3::new(field(c)?, field(c + 1)?, field(c + 2)?);
            }
            let weight = field(2 + DOF_COUNT + 3 * JOINT_COUNT)?;
            entries.push(TrajectoryEntry {
                pose,
                weight,
                joints: JointPositions(joints),
            });
        }
        let rate = if last_time.0 > 0 && last_time.1 > 0.0 {
            last_time.0 as f64 / last_time.1
        } else {
            fallback_rate
        };
        Self::from_entries(rate, entries)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&TrajectoryJson::from(self))?)
    }
}

/// JSON shape with angles in degrees, matching the CSV units.
#[derive(Serialize)]
struct TrajectoryJson<'a> {
    frame_rate: f64,
    dof_names: &'a [&'a str],
    joint_names: &'a [&'a str],
    frames: Vec<FrameJson>,
}

#[derive(Serialize)]
struct FrameJson {
    frame: usize,
    time: f64,
    pose: Vec<f64>,
    joints: Vec<[f64; 3]>,
    weight: f64,
}

impl<'a> From<&'a Trajectory> for TrajectoryJson<'a> {
    fn from(t: &'a Trajectory) -> Self {
        let frames = t
            .entries
            .iter()
            .enumerate()
            .map(|(k, e)| FrameJson {
                frame: k,
                time: t.time(k),
                pose: e
                    .pose
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if is_translation(i) { *v } else { v.to_degrees() })
                    .collect(),
                joints: e.joints.iter().map(|p| [p.x, p.y, p.z]).collect(),
                weight: e.weight,
            })
            .collect();
        TrajectoryJson {
            frame_rate: t.frame_rate,
            dof_names: &DOF_NAMES,
            joint_names: &JOINT_NAMES,
            frames,
        }
    }
}
