use crate::error::{Error, Result};
use crate::kinematics::{check_interval_spec, dof, DofKind, PoseVector, Skeleton, DOF_COUNT};

/// Default angular noise on the non-grid DOFs, radians (2 degrees).
pub const DEFAULT_ANGLE_SIGMA: f64 = 2.0 * std::f64::consts::PI / 180.0;
/// Default translational noise on the root, meters.
pub const DEFAULT_TRANSLATION_SIGMA: f64 = 0.02;

/// Hip and knee flexion of both legs.
pub const DEFAULT_INTERESTING_DIMS: [usize; 4] = [
    dof::LEFT_HIP_FLEXION,
    dof::RIGHT_HIP_FLEXION,
    dof::LEFT_KNEE_FLEXION,
    dof::RIGHT_KNEE_FLEXION,
];

/// Tracker parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct IpfConfig {
    /// DOFs explored by the deterministic grid (the rest get noise).
    pub interesting_dims: Vec<usize>,
    /// Grid spacing, radians (meters for a translational DOF).
    pub grid_step: f64,
    /// Grid values per interesting DOF; odd.
    pub grid_levels: usize,
    /// Distinct particles kept by selection.
    pub m_selected: usize,
    /// Per-DOF white-noise standard deviation, ignored for grid DOFs.
    pub noise_sigma: [f64; DOF_COUNT],
    pub rng_seed: u64,
    /// Candidate values per DOF for the exhaustive initial search.
    pub init_grid: InitGrid,
    /// Score particles on the rayon pool.
    pub parallel: bool,
}

impl IpfConfig {
    /// Defaults: 5 degree steps, 3 levels over both hips and knees (81 grid
    /// vectors), 81 selected particles, 2 degree / 2 cm noise.
    pub fn new(skeleton: &Skeleton) -> Self {
        let mut noise_sigma = [DEFAULT_ANGLE_SIGMA; DOF_COUNT];
        for (s, d) in noise_sigma.iter_mut().zip(skeleton.dofs()) {
            if d.kind == DofKind::Translation {
                *s = DEFAULT_TRANSLATION_SIGMA;
            }
        }
        IpfConfig {
            interesting_dims: DEFAULT_INTERESTING_DIMS.to_vec(),
            grid_step: 5f64.to_radians(),
            grid_levels: 3,
            m_selected: 81,
            noise_sigma,
            rng_seed: 0,
            init_grid: InitGrid::walkable_area(skeleton),
            parallel: true,
        }
    }

    /// Grid vectors per selected particle.
    pub fn interval_size(&self) -> usize {
        self.grid_levels.pow(self.interesting_dims.len() as u32)
    }

    /// Particles after each prediction.
    pub fn population(&self) -> usize {
        self.m_selected * self.interval_size()
    }

    /// Largest per-frame change of an interesting DOF.
    pub fn half_width(&self) -> f64 {
        (self.grid_levels / 2) as f64 * self.grid_step
    }

    pub fn validate(&self) -> Result<()> {
        if self.interesting_dims.is_empty() {
            return Err(Error::Config("at least one interesting DOF is required".into()));
        }
        check_interval_spec(&self.interesting_dims, self.grid_levels)?;
        if !(self.grid_step >= 0.0) || !self.grid_step.is_finite() {
            return Err(Error::Config(format!("grid step must be >= 0, got {}", self.grid_step)));
        }
        if self.m_selected == 0 {
            return Err(Error::Config("m_selected must be at least 1".into()));
        }
        if let Some(s) = self.noise_sigma.iter().find(|s| !(**s >= 0.0) || !s.is_finite()) {
            return Err(Error::Config(format!("noise sigma must be >= 0, got {s}")));
        }
        self.init_grid.validate()
    }
}

/// Per-DOF candidate lists; the initial lattice is their Cartesian product.
#[derive(Debug, Clone, PartialEq)]
pub struct InitGrid {
    values: Vec<Vec<f64>>,
}

impl InitGrid {
    /// A single lattice point.
    pub fn single(pose: &PoseVector) -> Self {
        InitGrid {
            values: pose.iter().map(|&v| vec![v]).collect(),
        }
    }

    pub fn from_values(values: Vec<Vec<f64>>) -> Result<Self> {
        let grid = InitGrid { values };
        grid.validate()?;
        Ok(grid)
    }

    /// Upright subject anywhere on a 3 m x 0.4 m strip around the origin,
    /// with coarse hip and knee flexion; other DOFs neutral.
    pub fn walkable_area(skeleton: &Skeleton) -> Self {
        let mut grid = Self::single(&PoseVector::standing(skeleton, 0.0, 0.0));
        grid.set(dof::ROOT_TX, (-15..=15).map(|i| i as f64 * 0.1).collect());
        grid.set(dof::ROOT_TZ, vec![-0.2, 0.0, 0.2]);
        let hips: Vec<f64> = [-20.0f64, 0.0, 20.0].iter().map(|d| d.to_radians()).collect();
        let knees: Vec<f64> = [0.0f64, 20.0].iter().map(|d| d.to_radians()).collect();
        grid.set(dof::LEFT_HIP_FLEXION, hips.clone());
        grid.set(dof::RIGHT_HIP_FLEXION, hips);
        grid.set(dof::LEFT_KNEE_FLEXION, knees.clone());
        grid.set(dof::RIGHT_KNEE_FLEXION, knees);
        grid
    }

    pub fn set(&mut self, dof: usize, values: Vec<f64>) {
        self.values[dof] = values;
    }

    pub fn values(&self, dof: usize) -> &[f64] {
        &self.values[dof]
    }

    pub fn lattice_size(&self) -> usize {
        self.values.iter().map(Vec::len).product()
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != DOF_COUNT {
            return Err(Error::Config(format!(
                "initial grid needs {DOF_COUNT} value lists, got {}",
                self.values.len()
            )));
        }
        if let Some(i) = self.values.iter().position(Vec::is_empty) {
            return Err(Error::Config(format!(
                "initial grid is empty: DOF {i} has no candidate values"
            )));
        }
        if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("initial grid values must be finite".into()));
        }
        Ok(())
    }

    /// Lattice poses in odometer order (last DOF fastest), clamped to limits.
    pub fn poses(&self, skeleton: &Skeleton) -> Vec<PoseVector> {
        let mut out = Vec::with_capacity(self.lattice_size());
        let mut counters = [0usize; DOF_COUNT];
        loop {
            let mut p = PoseVector::zeros();
            for (i, d) in skeleton.dofs().iter().enumerate() {
                p[i] = d.clamp(self.values[i][counters[i]]);
            }
            out.push(p);
            let mut pos = DOF_COUNT;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                counters[pos] += 1;
                if counters[pos] < self.values[pos].len() {
                    break;
                }
                counters[pos] = 0;
            }
        }
    }
}
