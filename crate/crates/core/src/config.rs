//! Run configuration read from TOML.
//!
//! Files use degrees for angles and meters for lengths. Every omitted field
//! takes its default, so a file naming only the output and frame directories
//! is complete.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gait::DEFAULT_VELOCITY_THRESHOLD;
use crate::imaging::{CameraModel, CameraSpec, DEFAULT_THRESHOLD};
use crate::ipf::{IpfConfig, DEFAULT_ANGLE_SIGMA, DEFAULT_TRANSLATION_SIGMA, DEFAULT_INTERESTING_DIMS};
use crate::kinematics::{dof_index, BodyFile, DofKind, FleshModel, Skeleton, DOF_NAMES, REFERENCE_HEIGHT};
use crate::testbed::WalkScenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub paths: Paths,
    #[serde(default)]
    pub capture: Capture,
    #[serde(default)]
    pub subject: Subject,
    #[serde(default)]
    pub ipf: IpfSection,
    #[serde(default)]
    pub imaging: Imaging,
    #[serde(default)]
    pub gait: GaitSection,
    #[serde(default)]
    pub synth: Synth,
    /// One per frame directory, in the same order.
    #[serde(default = "default_cameras")]
    pub cameras: Vec<CameraSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub output: PathBuf,
    /// One directory of numbered frames per camera.
    pub frames: Vec<PathBuf>,
    /// Empty background images, one per camera. Defaults to
    /// `background.pgm` inside each frame directory.
    #[serde(default)]
    pub backgrounds: Vec<PathBuf>,
    /// Body description; the built-in body scaled to the subject height
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Capture {
    /// Hz
    pub frame_rate: f64,
}

impl Default for Capture {
    fn default() -> Self {
        Capture { frame_rate: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Subject {
    /// m
    pub body_height: f64,
}

impl Default for Subject {
    fn default() -> Self {
        Subject {
            body_height: REFERENCE_HEIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IpfSection {
    /// DOF names explored by the grid.
    pub interesting_dims: Vec<String>,
    pub grid_step_deg: f64,
    pub grid_levels: usize,
    pub m_selected: usize,
    /// Noise on rotational DOFs outside the grid.
    pub noise_sigma_deg: f64,
    /// Noise on root translations.
    pub noise_sigma_m: f64,
    /// Per-DOF noise, degrees or meters by DOF kind.
    pub noise_overrides: BTreeMap<String, f64>,
    pub rng_seed: u64,
    pub parallel: bool,
    /// Per-DOF candidate values for the initial search, degrees or meters.
    /// DOFs not listed keep the built-in walkable-area lattice.
    pub init_grid: BTreeMap<String, Vec<f64>>,
}

impl Default for IpfSection {
    fn default() -> Self {
        IpfSection {
            interesting_dims: DEFAULT_INTERESTING_DIMS.iter().map(|&d| DOF_NAMES[d].to_string()).collect(),
            grid_step_deg: 5.0,
            grid_levels: 3,
            m_selected: 81,
            noise_sigma_deg: DEFAULT_ANGLE_SIGMA.to_degrees(),
            noise_sigma_m: DEFAULT_TRANSLATION_SIGMA,
            noise_overrides: BTreeMap::new(),
            rng_seed: 0,
            parallel: true,
            init_grid: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Imaging {
    /// Absolute gray-level difference above which a pixel is foreground.
    pub threshold: u8,
}

impl Default for Imaging {
    fn default() -> Self {
        Imaging {
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaitSection {
    /// m/s
    pub velocity_threshold: f64,
}

impl Default for GaitSection {
    fn default() -> Self {
        GaitSection {
            velocity_threshold: DEFAULT_VELOCITY_THRESHOLD,
        }
    }
}

/// Parameters of the generated walk; body height, frame rate and the first
/// camera come from their own sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Synth {
    pub step_length: f64,
    pub cadence: f64,
    pub heading_deg: f64,
    pub frame_count: usize,
    pub noise_rate: f64,
    pub seed: u64,
}

impl Default for Synth {
    fn default() -> Self {
        let s = WalkScenario::standard();
        Synth {
            step_length: s.step_length,
            cadence: s.cadence,
            heading_deg: s.heading_deg,
            frame_count: s.frame_count,
            noise_rate: s.noise_rate,
            seed: s.seed,
        }
    }
}

fn default_cameras() -> Vec<CameraSpec> {
    vec![CameraSpec::from_model(&WalkScenario::standard().camera)]
}

/// Parses and validates a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if config.paths.backgrounds.is_empty() {
        config.paths.backgrounds = config.paths.frames.iter().map(|f| f.join("background.pgm")).collect();
    }
    config.validate().map_err(|(key, e)| {
        let msg = match e {
            Error::Config(m) => m,
            other => other.to_string(),
        };
        match locate(text, key) {
            Some(line) => Error::Config(format!("line {line}, {key}: {msg}")),
            None => Error::Config(format!("{key}: {msg}")),
        }
    })?;
    Ok(config)
}

/// 1-based line of the first assignment to the last component of `key`.
fn locate(text: &str, key: &str) -> Option<usize> {
    let leaf = key.rsplit('.').next()?;
    let section = key.split('.').next()?;
    let mut current = String::new();
    let mut fallback = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('[') {
            current = line.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            if current == section && fallback.is_none() {
                fallback = Some(i + 1);
            }
            continue;
        }
        let Some((lhs, _)) = line.split_once('=') else { continue };
        if lhs.trim() == leaf && (current == section || key == leaf) {
            return Some(i + 1);
        }
    }
    fallback
}

impl RunConfig {
    /// Reads and parses a file. Referenced inputs are checked by
    /// [`RunConfig::check_inputs`], since `synth` creates them.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_config(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Config with only the required paths set.
    pub fn with_paths(output: impl Into<PathBuf>, frames: impl Into<PathBuf>) -> Self {
        let frames = frames.into();
        RunConfig {
            paths: Paths {
                output: output.into(),
                backgrounds: vec![frames.join("background.pgm")],
                frames: vec![frames],
                skeleton: None,
            },
            capture: Capture::default(),
            subject: Subject::default(),
            ipf: IpfSection::default(),
            imaging: Imaging::default(),
            gait: GaitSection::default(),
            synth: Synth::default(),
            cameras: default_cameras(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("run config serializes")
    }

    fn validate(&self) -> std::result::Result<(), (&'static str, Error)> {
        let cfg = |key, msg: String| Err((key, Error::Config(msg)));
        if self.paths.frames.is_empty() {
            return cfg("paths.frames", "at least one frame directory is required".into());
        }
        if self.cameras.len() != self.paths.frames.len() {
            return cfg(
                "cameras",
                format!(
                    "{} camera(s) configured for {} frame director(ies); counts must match",
                    self.cameras.len(),
                    self.paths.frames.len()
                ),
            );
        }
        if self.paths.backgrounds.len() != self.paths.frames.len() {
            return cfg(
                "paths.backgrounds",
                format!(
                    "{} background(s) for {} frame director(ies); counts must match",
                    self.paths.backgrounds.len(),
                    self.paths.frames.len()
                ),
            );
        }
        for c in &self.cameras {
            c.to_model().map_err(|e| ("cameras", e))?;
        }
        if !(self.capture.frame_rate > 0.0) || !self.capture.frame_rate.is_finite() {
            return cfg("capture.frame_rate", format!("must be > 0, got {}", self.capture.frame_rate));
        }
        if !(self.subject.body_height > 0.0) || !self.subject.body_height.is_finite() {
            return cfg("subject.body_height", format!("must be > 0, got {}", self.subject.body_height));
        }
        if !(self.gait.velocity_threshold > 0.0) {
            return cfg("gait.velocity_threshold", format!("must be > 0, got {}", self.gait.velocity_threshold));
        }
        let skeleton = Skeleton::with_height(self.subject.body_height).map_err(|e| ("subject.body_height", e))?;
        self.ipf_config(&skeleton)?;
        self.scenario().map_err(|e| ("synth", e))?.validate().map_err(|e| ("synth", e))?;
        Ok(())
    }

    /// Tracker parameters in internal units.
    pub fn ipf_config(&self, skeleton: &Skeleton) -> std::result::Result<IpfConfig, (&'static str, Error)> {
        let ipf = &self.ipf;
        let lookup = |key, name: &str| {
            dof_index(name).ok_or_else(|| (key, Error::Config(format!("unknown DOF '{name}'"))))
        };
        let mut config = IpfConfig::new(skeleton);
        config.interesting_dims = ipf
            .interesting_dims
            .iter()
            .map(|n| lookup("ipf.interesting_dims", n))
            .collect::<std::result::Result<_, _>>()?;
        if let Some(&d) = config.interesting_dims.iter().find(|&&d| skeleton.dof(d).kind == DofKind::Translation) {
            return Err((
                "ipf.interesting_dims",
                Error::Config(format!("'{}' is a translation; grid DOFs must be rotations", DOF_NAMES[d])),
            ));
        }
        if !(ipf.grid_step_deg >= 0.0) || !ipf.grid_step_deg.is_finite() {
            return Err(("ipf.grid_step_deg", Error::Config(format!("must be >= 0, got {}", ipf.grid_step_deg))));
        }
        config.grid_step = ipf.grid_step_deg.to_radians();
        config.grid_levels = ipf.grid_levels;
        config.m_selected = ipf.m_selected;
        config.rng_seed = ipf.rng_seed;
        config.parallel = ipf.parallel;
        for (i, d) in skeleton.dofs().iter().enumerate() {
            config.noise_sigma[i] = match d.kind {
                DofKind::Translation => ipf.noise_sigma_m,
                _ => ipf.noise_sigma_deg.to_radians(),
            };
        }
        for (name, &sigma) in &ipf.noise_overrides {
            let i = lookup("ipf.noise_overrides", name)?;
            config.noise_sigma[i] = to_internal(skeleton, i, sigma);
        }
        for (name, values) in &ipf.init_grid {
            let i = lookup("ipf.init_grid", name)?;
            config.init_grid.set(i, values.iter().map(|&v| to_internal(skeleton, i, v)).collect());
        }
        config.validate().map_err(|e| {
            let key = match &e {
                Error::Config(m) if m.contains("level") => "ipf.grid_levels",
                Error::Config(m) if m.contains("m_selected") => "ipf.m_selected",
                Error::Config(m) if m.contains("sigma") => "ipf.noise_sigma_deg",
                Error::Config(m) if m.contains("initial grid") => "ipf.init_grid",
                _ => "ipf.interesting_dims",
            };
            (key, e)
        })?;
        Ok(config)
    }

    /// Tracker parameters, with errors flattened.
    pub fn tracker_config(&self, skeleton: &Skeleton) -> Result<IpfConfig> {
        self.ipf_config(skeleton).map_err(|(key, e)| Error::Config(format!("{key}: {e}")))
    }

    pub fn camera_models(&self) -> Result<Vec<CameraModel>> {
        self.cameras.iter().map(CameraSpec::to_model).collect()
    }

    /// The body from the skeleton file, or the built-in one.
    pub fn body(&self) -> Result<(Skeleton, FleshModel)> {
        match &self.paths.skeleton {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                BodyFile::from_toml(&text)?.into_body()
            }
            None => crate::kinematics::default_body(self.subject.body_height),
        }
    }

    /// Walk generated by `synth`, seen by the first camera.
    pub fn scenario(&self) -> Result<WalkScenario> {
        let camera = self.cameras.first().ok_or(Error::NoCameras)?.to_model()?;
        Ok(WalkScenario {
            body_height: self.subject.body_height,
            step_length: self.synth.step_length,
            cadence: self.synth.cadence,
            heading_deg: self.synth.heading_deg,
            frame_rate: self.capture.frame_rate,
            frame_count: self.synth.frame_count,
            camera,
            noise_rate: self.synth.noise_rate,
            seed: self.synth.seed,
        })
    }

    /// Fails unless every frame directory, background and skeleton file
    /// exists.
    pub fn check_inputs(&self) -> Result<()> {
        let missing = |p: &Path| Error::Input(format!("{} does not exist", p.display()));
        for dir in &self.paths.frames {
            if !dir.is_dir() {
                return Err(missing(dir));
            }
        }
        for f in self.paths.backgrounds.iter().chain(&self.paths.skeleton) {
            if !f.is_file() {
                return Err(missing(f));
            }
        }
        Ok(())
    }
}

fn to_internal(skeleton: &Skeleton, dof: usize, value: f64) -> f64 {
    match skeleton.dof(dof).kind {
        DofKind::Translation => value,
        _ => value.to_radians(),
    }
}
