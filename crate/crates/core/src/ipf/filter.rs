use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::config::IpfConfig;
use super::particle::{Particle, ParticleSet};
use crate::error::{Error, Result};
use crate::imaging::{
    check_size, extract_silhouette, project_stadiums, rasterize_window, stadium_bounds,
    CameraModel, GrayFrame, SilhouetteImage, Stadium,
};
use crate::kinematics::{expand_into, forward_kinematics_unchecked, FleshModel, Skeleton};
use crate::likelihood::{combine_cameras, weight, PixelCounts};
use crate::trajectory::{Trajectory, TrajectoryEntry};

/// Body model and the cameras observing it.
#[derive(Debug, Clone, Copy)]
pub struct Scene<'a> {
    pub skeleton: &'a Skeleton,
    pub flesh: &'a FleshModel,
    pub cameras: &'a [CameraModel],
}

/// One observed silhouette per camera, with cached foreground counts.
#[derive(Debug, Clone)]
pub struct Observation {
    silhouettes: Vec<SilhouetteImage>,
    counts: Vec<u64>,
}

impl Observation {
    pub fn new(silhouettes: Vec<SilhouetteImage>, cameras: &[CameraModel]) -> Result<Self> {
        if silhouettes.len() != cameras.len() {
            return Err(Error::Input(format!(
                "{} silhouettes for {} cameras",
                silhouettes.len(),
                cameras.len()
            )));
        }
        if cameras.is_empty() {
            return Err(Error::NoCameras);
        }
        for (s, c) in silhouettes.iter().zip(cameras) {
            check_size((s.width(), s.height()), (c.width(), c.height()))?;
        }
        let counts = silhouettes.iter().map(|s| s.count() as u64).collect();
        Ok(Observation { silhouettes, counts })
    }

    pub fn silhouettes(&self) -> &[SilhouetteImage] {
        &self.silhouettes
    }
}

#[derive(Default)]
struct Scratch {
    stadiums: Vec<Stadium>,
    mask: Vec<bool>,
    weights: Vec<f64>,
}

fn score(pose: &crate::kinematics::PoseVector, obs: &Observation, scene: &Scene, scratch: &mut Scratch) -> f64 {
    let joints = forward_kinematics_unchecked(scene.skeleton, pose);
    scratch.weights.clear();
    for ((camera, sil), &observed) in scene.cameras.iter().zip(&obs.silhouettes).zip(&obs.counts) {
        let (w, h) = (camera.width(), camera.height());
        project_stadiums(scene.skeleton, scene.flesh, &joints, camera, &mut scratch.stadiums);
        let counts = match stadium_bounds(&scratch.stadiums, w, h) {
            None => PixelCounts::from_totals(0, observed, 0),
            Some(rect) => {
                rasterize_window(&scratch.stadiums, rect, w, h, &mut scratch.mask);
                let (mut common, mut model) = (0u64, 0u64);
                let observed_mask = sil.mask();
                for (row, y) in (rect.y0..rect.y1).enumerate() {
                    let window_row = &scratch.mask[row * rect.width()..(row + 1) * rect.width()];
                    let image_row = &observed_mask[y * w + rect.x0..y * w + rect.x1];
                    for (&m, &o) in window_row.iter().zip(image_row) {
                        model += m as u64;
                        common += (m && o) as u64;
                    }
                }
                PixelCounts::from_totals(common, observed, model)
            }
        };
        scratch.weights.push(weight(&counts));
    }
    combine_cameras(&scratch.weights).expect("observation has at least one camera")
}

/// Weight of a single pose against an observation.
pub fn score_pose(pose: &crate::kinematics::PoseVector, observation: &Observation, scene: &Scene) -> f64 {
    score(pose, observation, scene, &mut Scratch::default())
}

fn weigh_all(particles: &mut [Particle], obs: &Observation, scene: &Scene, parallel: bool) {
    if parallel {
        particles
            .par_iter_mut()
            .for_each_init(Scratch::default, |scratch, p| {
                p.weight = score(&p.pose, obs, scene, scratch);
            });
    } else {
        let mut scratch = Scratch::default();
        for p in particles.iter_mut() {
            p.weight = score(&p.pose, obs, scene, &mut scratch);
        }
    }
}

fn sort_by_weight(particles: &mut [Particle]) {
    // stable: equal weights keep their original order
    particles.sort_by(|a, b| b.weight.total_cmp(&a.weight));
}

/// Exhaustive search over the configured initial lattice. Returns every
/// lattice particle, weighted and sorted heaviest first.
pub fn initialize(observation: &Observation, config: &IpfConfig, scene: &Scene) -> Result<ParticleSet> {
    config.init_grid.validate()?;
    let mut particles: Vec<Particle> = config
        .init_grid
        .poses(scene.skeleton)
        .into_iter()
        .map(Particle::new)
        .collect();
    weigh_all(&mut particles, observation, scene, config.parallel);
    sort_by_weight(&mut particles);
    Ok(ParticleSet {
        particles,
        frame_index: 0,
    })
}

/// The `m` heaviest particles with pairwise distinct poses, heaviest first.
/// Pads by repeating the heaviest when fewer than `m` distinct poses exist.
pub fn select(set: &ParticleSet, m: usize) -> Vec<Particle> {
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| set.particles[b].weight.total_cmp(&set.particles[a].weight));
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    for i in order {
        if out.len() == m {
            break;
        }
        let p = set.particles[i];
        if seen.insert(p.pose.bit_key()) {
            out.push(p);
        }
    }
    if let Some(&heaviest) = out.first() {
        out.resize(m, heaviest);
    }
    out
}

/// Seed of the noise substream for one predicted particle.
fn substream_seed(seed: u64, frame: usize, ordinal: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(seed) ^ frame as u64) ^ ordinal as u64)
}

/// Replaces each selected particle by its interval grid over the interesting
/// DOFs and perturbs the remaining DOFs with Gaussian noise.
pub fn predict(selected: &[Particle], config: &IpfConfig, skeleton: &Skeleton, frame_index: usize) -> ParticleSet {
    let interval = config.interval_size();
    let mut poses = Vec::with_capacity(selected.len() * interval);
    for p in selected {
        expand_into(
            &p.pose,
            &config.interesting_dims,
            config.grid_step,
            config.grid_levels,
            skeleton,
            &mut poses,
        );
    }

    let noisy: Vec<usize> = (0..config.noise_sigma.len())
        .filter(|d| config.noise_sigma[*d] > 0.0 && !config.interesting_dims.contains(d))
        .collect();
    if !noisy.is_empty() {
        for (ordinal, pose) in poses.iter_mut().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(config.rng_seed, frame_index, ordinal));
            for &d in &noisy {
                let z: f64 = StandardNormal.sample(&mut rng);
                pose[d] = skeleton.dof(d).clamp(pose[d] + z * config.noise_sigma[d]);
            }
        }
    }

    ParticleSet {
        particles: poses.into_iter().map(Particle::new).collect(),
        frame_index,
    }
}

/// Weighs every particle against the observation and returns the set with
/// the heaviest particle (lowest index on ties).
pub fn measure(
    mut set: ParticleSet,
    observation: &Observation,
    scene: &Scene,
    parallel: bool,
) -> Result<(ParticleSet, Particle)> {
    if set.is_empty() {
        return Err(Error::Input("cannot measure an empty particle set".into()));
    }
    weigh_all(&mut set.particles, observation, scene, parallel);
    let best = set.particles[set.argmax().expect("non-empty")];
    Ok((set, best))
}

/// Per-frame progress record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameLog {
    pub frame: usize,
    pub best_weight: f64,
    pub population: usize,
    pub wall_time: std::time::Duration,
}

/// Frame-by-frame tracker state.
pub struct Tracker<'a> {
    config: &'a IpfConfig,
    scene: Scene<'a>,
    set: Option<ParticleSet>,
    frame: usize,
}

impl<'a> Tracker<'a> {
    pub fn new(config: &'a IpfConfig, scene: Scene<'a>) -> Result<Self> {
        config.validate()?;
        if scene.cameras.is_empty() {
            return Err(Error::NoCameras);
        }
        Ok(Tracker {
            config,
            scene,
            set: None,
            frame: 0,
        })
    }

    /// Current population, if any frame has been processed.
    pub fn particles(&self) -> Option<&ParticleSet> {
        self.set.as_ref()
    }

    pub fn frames_processed(&self) -> usize {
        self.frame
    }

    /// Processes the next frame: exhaustive initialization on the first,
    /// then one select / predict / measure cycle per frame.
    pub fn step(&mut self, observation: &Observation) -> Result<Particle> {
        let frame = self.frame;
        let result = match self.set.take() {
            None => initialize(observation, self.config, &self.scene).map(|set| {
                let best = set.particles[0];
                (set, best)
            }),
            Some(previous) => {
                let selected = select(&previous, self.config.m_selected);
                let predicted = predict(&selected, self.config, self.scene.skeleton, frame);
                measure(predicted, observation, &self.scene, self.config.parallel)
            }
        };
        let (set, best) = result.map_err(|e| e.at_frame(frame))?;
        self.set = Some(set);
        self.frame += 1;
        Ok(best)
    }
}

/// Tracks precomputed silhouette sequences, one per camera.
pub fn track_silhouettes(
    observations: &[Vec<SilhouetteImage>],
    frame_rate: f64,
    config: &IpfConfig,
    scene: Scene,
    mut on_frame: impl FnMut(&FrameLog),
) -> Result<Trajectory> {
    let frames = common_length(observations.iter().map(Vec::len), scene.cameras.len())?;
    let mut tracker = Tracker::new(config, scene)?;
    let mut trajectory = Trajectory::new(frame_rate)?;
    for k in 0..frames {
        let start = std::time::Instant::now();
        let obs = Observation::new(observations.iter().map(|s| s[k].clone()).collect(), scene.cameras)
            .map_err(|e| e.at_frame(k))?;
        let best = tracker.step(&obs)?;
        trajectory.push(TrajectoryEntry::new(scene.skeleton, best.pose, best.weight));
        on_frame(&FrameLog {
            frame: k,
            best_weight: best.weight,
            population: tracker.particles().map_or(0, ParticleSet::len),
            wall_time: start.elapsed(),
        });
    }
    Ok(trajectory)
}

/// Tracks raw grayscale sequences: background subtraction per frame, then
/// [`Tracker::step`].
#[allow(clippy::too_many_arguments)]
pub fn track(
    frames: &[Vec<GrayFrame>],
    backgrounds: &[GrayFrame],
    threshold: u8,
    frame_rate: f64,
    config: &IpfConfig,
    scene: Scene,
    mut on_frame: impl FnMut(&FrameLog),
) -> Result<Trajectory> {
    let count = common_length(frames.iter().map(Vec::len), scene.cameras.len())?;
    if backgrounds.len() != frames.len() {
        return Err(Error::Input(format!(
            "missing background: {} background image(s) for {} camera(s)",
            backgrounds.len(),
            frames.len()
        )));
    }
    let mut tracker = Tracker::new(config, scene)?;
    let mut trajectory = Trajectory::new(frame_rate)?;
    for k in 0..count {
        let start = std::time::Instant::now();
        let silhouettes = frames
            .iter()
            .zip(backgrounds)
            .map(|(seq, bg)| extract_silhouette(&seq[k], bg, threshold))
            .collect::<Result<Vec<_>>>()
            .and_then(|s| Observation::new(s, scene.cameras))
            .map_err(|e| e.at_frame(k))?;
        let best = tracker.step(&silhouettes)?;
        trajectory.push(TrajectoryEntry::new(scene.skeleton, best.pose, best.weight));
        on_frame(&FrameLog {
            frame: k,
            best_weight: best.weight,
            population: tracker.particles().map_or(0, ParticleSet::len),
            wall_time: start.elapsed(),
        });
    }
    Ok(trajectory)
}

fn common_length(mut lengths: impl Iterator<Item = usize>, cameras: usize) -> Result<usize> {
    let first = lengths.next().ok_or(Error::NoCameras)?;
    let mut n = 1;
    for len in lengths {
        n += 1;
        if len != first {
            return Err(Error::Input(format!(
                "camera frame sequences differ in length ({first} vs {len})"
            )));
        }
    }
    if n != cameras {
        return Err(Error::Input(format!("{n} frame sequence(s) for {cameras} camera(s)")));
    }
    if first == 0 {
        return Err(Error::Input("no frames to track".into()));
    }
    Ok(first)
}
