use gaitcap_core::imaging::{render_silhouette, CameraModel, GrayFrame, SilhouetteImage};
use gaitcap_core::ipf::{
    initialize, measure, predict, score_pose, select, track, track_silhouettes, InitGrid, IpfConfig, Observation,
    Particle, ParticleSet, Scene, Tracker,
};
use gaitcap_core::kinematics::{default_body, dof, FleshModel, PoseVector, Skeleton, DOF_COUNT};
use gaitcap_core::likelihood::{pixel_counts, weight};
use gaitcap_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Fixture {
    skeleton: Skeleton,
    flesh: FleshModel,
    cameras: Vec<CameraModel>,
}

impl Fixture {
    fn new() -> Self {
        let (skeleton, flesh) = default_body(1.75).unwrap();
        let cameras = vec![CameraModel::side_view(96, 72, 60.0, 0.0, 1.0, 4.0).unwrap()];
        Fixture { skeleton, flesh, cameras }
    }

    fn scene(&self) -> Scene<'_> {
        Scene { skeleton: &self.skeleton, flesh: &self.flesh, cameras: &self.cameras }
    }

    fn standing(&self) -> PoseVector {
        PoseVector::standing(&self.skeleton, 0.0, 0.0)
    }

    fn render(&self, pose: &PoseVector) -> SilhouetteImage {
        render_silhouette(&self.skeleton, &self.flesh, pose, &self.cameras[0]).unwrap()
    }

    fn observe(&self, pose: &PoseVector) -> Observation {
        Observation::new(vec![self.render(pose)], &self.cameras).unwrap()
    }

    /// Render-and-score without the tracker's windowed fast path.
    fn brute_weight(&self, pose: &PoseVector, observed: &SilhouetteImage) -> f64 {
        weight(&pixel_counts(observed, &self.render(pose)).unwrap())
    }

    fn quiet_config(&self) -> IpfConfig {
        let mut c = IpfConfig::new(&self.skeleton);
        c.noise_sigma = [0.0; DOF_COUNT];
        c
    }
}

fn set_of(weights: &[f64], skeleton: &Skeleton) -> ParticleSet {
    let particles = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| Particle { pose: PoseVector::standing(skeleton, i as f64 * 0.1, 0.0), weight: w })
        .collect();
    ParticleSet { particles, frame_index: 0 }
}

#[test]
fn initialize_singleton_lattice() {
    let f = Fixture::new();
    let mut config = f.quiet_config();
    let pose = PoseVector::standing(&f.skeleton, 5.0, 0.0);
    config.init_grid = InitGrid::single(&pose);
    let set = initialize(&f.observe(&f.standing()), &config, &f.scene()).unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set.particles[0].pose, pose);
}

#[test]
fn initialize_prefers_exact_match() {
    let f = Fixture::new();
    let mut config = f.quiet_config();
    let mut grid = InitGrid::single(&f.standing());
    grid.set(dof::ROOT_TX, vec![0.4, 0.0]);
    config.init_grid = grid;
    let obs = f.observe(&f.standing());
    let set = initialize(&obs, &config, &f.scene()).unwrap();
    assert_eq!(set.particles[0].pose, f.standing());
    let observed = obs.silhouettes()[0].count() as f64;
    assert_eq!(set.particles[0].weight, observed);
}

#[test]
fn initialize_matches_rescoring_oracle() {
    let f = Fixture::new();
    let mut config = f.quiet_config();
    let mut grid = InitGrid::single(&f.standing());
    grid.set(dof::ROOT_TX, vec![-0.3, 0.0, 0.3]);
    grid.set(dof::ROOT_TZ, vec![-0.3, 0.0, 0.3]);
    config.init_grid = grid;
    let truth = PoseVector::standing(&f.skeleton, 0.3, -0.3);
    let obs = f.observe(&truth);
    let set = initialize(&obs, &config, &f.scene()).unwrap();
    assert_eq!(set.len(), 9);

    let candidates = config.init_grid.poses(&f.skeleton);
    let scores: Vec<f64> = candidates.iter().map(|p| f.brute_weight(p, &obs.silhouettes()[0])).collect();
    let best = (0..9).fold(0, |b, i| if scores[i] > scores[b] { i } else { b });
    assert_eq!(candidates[best], truth);
    assert_eq!(set.particles[0].pose, truth);
    assert!(set.particles.windows(2).all(|w| w[0].weight >= w[1].weight));
    for p in &set.particles {
        assert_eq!(p.weight, f.brute_weight(&p.pose, &obs.silhouettes()[0]));
    }
}

#[test]
fn initialize_rejects_empty_lattice() {
    let mut values = vec![vec![0.0]; DOF_COUNT];
    values[dof::ROOT_TX].clear();
    assert!(matches!(InitGrid::from_values(values), Err(Error::Config(_))));
}

#[test]
fn select_examples() {
    let f = Fixture::new();
    let set = set_of(&[0.1, 0.9, 0.5], &f.skeleton);
    let picked = select(&set, 2);
    assert_eq!(picked, vec![set.particles[1], set.particles[2]]);

    let mut dup = set_of(&[0.9, 0.9, 0.1], &f.skeleton);
    dup.particles[1].pose = dup.particles[0].pose;
    let picked = select(&dup, 2);
    assert_eq!(picked, vec![dup.particles[0], dup.particles[2]]);

    // fewer distinct poses than requested: pad with the heaviest
    let padded = select(&dup, 4);
    assert_eq!(padded, vec![dup.particles[0], dup.particles[2], dup.particles[0], dup.particles[0]]);
}

#[test]
fn select_matches_sort_oracle() {
    let f = Fixture::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let weights: Vec<f64> = (0..5).map(|_| rng.random()).collect();
        let set = set_of(&weights, &f.skeleton);
        let mut expected = set.particles.clone();
        expected.sort_by(|a, b| b.weight.partial_cmp(&a.weight).unwrap());
        assert_eq!(select(&set, 5), expected);
    }
}

#[test]
fn predict_population_is_m_times_i() {
    let f = Fixture::new();
    let config = IpfConfig::new(&f.skeleton);
    let selected = vec![Particle::new(f.standing()); 81];
    let set = predict(&selected, &config, &f.skeleton, 1);
    assert_eq!(set.len(), 6561);
    assert!(set.particles.iter().all(|p| p.pose.is_valid(&f.skeleton)));
}

#[test]
fn predict_without_noise_gives_grid_neighbours() {
    let f = Fixture::new();
    let mut config = f.quiet_config();
    config.interesting_dims = vec![dof::RIGHT_KNEE_FLEXION];
    let mut pose = f.standing();
    pose[dof::RIGHT_KNEE_FLEXION] = 30f64.to_radians();
    let set = predict(&[Particle::new(pose)], &config, &f.skeleton, 3);
    let knees: Vec<f64> = set.particles.iter().map(|p| p.pose[dof::RIGHT_KNEE_FLEXION].to_degrees()).collect();
    assert_eq!(knees.len(), 3);
    for (k, e) in knees.iter().zip([25.0, 30.0, 35.0]) {
        assert!((k - e).abs() < 1e-9);
    }
    for p in &set.particles {
        for d in (0..DOF_COUNT).filter(|&d| d != dof::RIGHT_KNEE_FLEXION) {
            assert_eq!(p.pose[d], pose[d]);
        }
    }
}

#[test]
fn predict_two_parents_two_dims() {
    let f = Fixture::new();
    let mut config = f.quiet_config();
    let dims = [dof::LEFT_HIP_FLEXION, dof::RIGHT_HIP_FLEXION];
    config.interesting_dims = dims.to_vec();
    let step = config.grid_step;
    let mut a = f.standing();
    a[dims[0]] = 10f64.to_radians();
    let mut b = f.standing();
    b[dims[1]] = -10f64.to_radians();
    let set = predict(&[Particle::new(a), Particle::new(b)], &config, &f.skeleton, 1);
    assert_eq!(set.len(), 18);

    let mut expected = Vec::new();
    for parent in [a, b] {
        for i in -1..=1 {
            for j in -1..=1 {
                expected.push((parent[dims[0]] + i as f64 * step, parent[dims[1]] + j as f64 * step));
            }
        }
    }
    for (p, (x, y)) in set.particles.iter().zip(expected) {
        assert!((p.pose[dims[0]] - x).abs() < 1e-12 && (p.pose[dims[1]] - y).abs() < 1e-12);
    }
}

#[test]
fn predict_noise_is_keyed_not_sequential() {
    let f = Fixture::new();
    let config = IpfConfig::new(&f.skeleton);
    let mut other = f.standing();
    other[dof::ROOT_TX] = 0.5;
    let selected = vec![Particle::new(f.standing()), Particle::new(other)];
    let a = predict(&selected, &config, &f.skeleton, 7);
    let b = predict(&selected, &config, &f.skeleton, 7);
    assert_eq!(a, b);
    let c = predict(&selected, &config, &f.skeleton, 8);
    assert_ne!(a, c);
    // the first parent's children do not depend on what follows it
    let alone = predict(&selected[..1], &config, &f.skeleton, 7);
    assert_eq!(alone.particles[..], a.particles[..81]);
}

#[test]
fn measure_examples() {
    let f = Fixture::new();
    let obs = f.observe(&f.standing());
    let single = ParticleSet { particles: vec![Particle::new(PoseVector::standing(&f.skeleton, 9.0, 0.0))], frame_index: 1 };
    let (_, best) = measure(single.clone(), &obs, &f.scene(), false).unwrap();
    assert_eq!(best.pose, single.particles[0].pose);

    let pair = ParticleSet {
        particles: vec![Particle::new(f.standing()), Particle::new(PoseVector::standing(&f.skeleton, 15.0, 0.0))],
        frame_index: 1,
    };
    let (weighed, best) = measure(pair, &obs, &f.scene(), true).unwrap();
    assert_eq!(best.pose, f.standing());
    assert_eq!(weighed.particles[1].weight, 0.0);

    let empty = ParticleSet { particles: vec![], frame_index: 1 };
    assert!(measure(empty, &obs, &f.scene(), false).is_err());
}

#[test]
fn measure_matches_rescoring_oracle() {
    let f = Fixture::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut truth = f.standing();
    truth[dof::RIGHT_HIP_FLEXION] = 0.3;
    let obs = f.observe(&truth);
    let particles: Vec<Particle> = (0..10)
        .map(|_| {
            let mut p = f.standing();
            p[dof::ROOT_TX] = rng.random_range(-0.3..0.3);
            p[dof::RIGHT_HIP_FLEXION] = rng.random_range(-0.4..0.8);
            p[dof::LEFT_KNEE_FLEXION] = rng.random_range(0.0..1.0);
            Particle::new(p)
        })
        .collect();
    let (weighed, best) = measure(ParticleSet { particles: particles.clone(), frame_index: 1 }, &obs, &f.scene(), true).unwrap();
    let scores: Vec<f64> = particles.iter().map(|p| f.brute_weight(&p.pose, &obs.silhouettes()[0])).collect();
    let oracle = (0..10).fold(0, |b, i| if scores[i] > scores[b] { i } else { b });
    assert_eq!(best.pose, particles[oracle].pose);
    for (p, s) in weighed.particles.iter().zip(&scores) {
        assert_eq!(p.weight, *s);
        assert_eq!(score_pose(&p.pose, &obs, &f.scene()), *s);
        assert!(p.weight <= best.weight);
    }
}

#[test]
fn observation_size_mismatch() {
    let f = Fixture::new();
    let wrong = SilhouetteImage::empty(10, 10);
    assert!(Observation::new(vec![wrong], &f.cameras).is_err());
    assert!(Observation::new(vec![], &f.cameras).is_err());
}

#[test]
fn track_single_frame_is_initial_argmax() {
    let f = Fixture::new();
    let mut config = f.quiet_config();
    let mut grid = InitGrid::single(&f.standing());
    grid.set(dof::ROOT_TX, vec![-0.2, 0.0, 0.2]);
    config.init_grid = grid;
    let obs = f.observe(&f.standing());
    let init = initialize(&obs, &config, &f.scene()).unwrap();
    let traj = track_silhouettes(&[vec![obs.silhouettes()[0].clone()]], 20.0, &config, f.scene(), |_| {}).unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj.entries()[0].pose, init.particles[0].pose);
    assert_eq!(traj.entries()[0].weight, init.particles[0].weight);
}

#[test]
fn track_static_subject_is_a_fixed_point() {
    let f = Fixture::new();
    let mut config = f.quiet_config();
    config.init_grid = InitGrid::single(&f.standing());
    config.m_selected = 3;
    let masks = vec![f.render(&f.standing()); 10];
    let traj = track_silhouettes(&[masks], 20.0, &config, f.scene(), |_| {}).unwrap();
    assert_eq!(traj.len(), 10);
    assert!(traj.entries().iter().all(|e| e.pose == f.standing()));
}

#[test]
fn track_rejects_bad_inputs() {
    let f = Fixture::new();
    let config = f.quiet_config();
    let frame = GrayFrame::filled(96, 72, 0).unwrap();
    let two = [vec![frame.clone(); 2], vec![frame.clone(); 3]];
    let cams2 = vec![f.cameras[0].clone(); 2];
    let scene2 = Scene { skeleton: &f.skeleton, flesh: &f.flesh, cameras: &cams2 };
    assert!(track(&two, &[frame.clone(), frame.clone()], 30, 20.0, &config, scene2, |_| {}).is_err());
    let one = [vec![frame.clone(); 2]];
    assert!(track(&one, &[], 30, 20.0, &config, f.scene(), |_| {}).is_err());
    assert!(track(&[vec![]], &[frame], 30, 20.0, &config, f.scene(), |_| {}).is_err());
}

#[test]
fn estimates_stay_within_reach_of_previous_selection() {
    let f = Fixture::new();
    let mut config = IpfConfig::new(&f.skeleton);
    config.m_selected = 4;
    config.init_grid = InitGrid::single(&f.standing());
    let half = config.half_width();
    let mut tracker = Tracker::new(&config, f.scene()).unwrap();
    let mut previous: Option<ParticleSet> = None;
    for k in 0..6 {
        let mut truth = f.standing();
        truth[dof::RIGHT_HIP_FLEXION] = (4.0 * k as f64).to_radians();
        truth[dof::LEFT_KNEE_FLEXION] = (3.0 * k as f64).to_radians();
        let best = tracker.step(&f.observe(&truth)).unwrap();
        let set = tracker.particles().unwrap();
        assert!(set.particles.iter().all(|p| p.weight <= best.weight));
        assert!(set.particles.iter().all(|p| p.pose.is_valid(&f.skeleton)));
        if let Some(prev) = &previous {
            let parents = select(prev, config.m_selected);
            let near = |a: &PoseVector, b: &PoseVector| {
                config.interesting_dims.iter().all(|&d| (a[d] - b[d]).abs() <= half + 1e-12)
            };
            assert!(parents.iter().any(|p| near(&p.pose, &best.pose)));
        }
        previous = Some(set.clone());
    }
}

#[test]
fn single_parent_estimates_move_boundedly() {
    let f = Fixture::new();
    let mut config = IpfConfig::new(&f.skeleton);
    config.m_selected = 1;
    config.init_grid = InitGrid::single(&f.standing());
    let half = config.half_width();
    let masks: Vec<SilhouetteImage> = (0..6)
        .map(|k| {
            let mut truth = f.standing();
            truth[dof::RIGHT_HIP_FLEXION] = (9.0 * k as f64).to_radians();
            f.render(&truth)
        })
        .collect();
    let traj = track_silhouettes(&[masks], 20.0, &config, f.scene(), |_| {}).unwrap();
    for w in traj.entries().windows(2) {
        for &d in &config.interesting_dims {
            assert!((w[1].pose[d] - w[0].pose[d]).abs() <= half + 1e-12);
        }
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let f = Fixture::new();
    let mut config = IpfConfig::new(&f.skeleton);
    config.m_selected = 9;
    config.init_grid = InitGrid::single(&f.standing());
    let masks: Vec<SilhouetteImage> = (0..4)
        .map(|k| {
            let mut truth = PoseVector::standing(&f.skeleton, 0.04 * k as f64, 0.0);
            truth[dof::LEFT_HIP_FLEXION] = (4.0 * k as f64).to_radians();
            f.render(&truth)
        })
        .collect();
    let run = |parallel: bool| {
        let mut c = config.clone();
        c.parallel = parallel;
        let traj = track_silhouettes(std::slice::from_ref(&masks), 20.0, &c, f.scene(), |_| {}).unwrap();
        let mut csv = Vec::new();
        traj.write_csv(&mut csv).unwrap();
        csv
    };
    assert_eq!(run(true), run(false));
}
