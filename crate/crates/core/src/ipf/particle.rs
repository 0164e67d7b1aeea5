use crate::kinematics::PoseVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub pose: PoseVector,
    pub weight: f64,
}

impl Particle {
    pub fn new(pose: PoseVector) -> Self {
        Particle { pose, weight: 0.0 }
    }
}

/// The filter population at one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    pub particles: Vec<Particle>,
    pub frame_index: usize,
}

impl ParticleSet {
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// Index of the heaviest particle, lowest index on ties.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, p) in self.particles.iter().enumerate() {
            match best {
                Some(b) if self.particles[b].weight >= p.weight => {}
                _ => best = Some(i),
            }
        }
        best
    }
}
