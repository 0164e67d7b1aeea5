use super::pose::PoseVector;
use super::skeleton::{Skeleton, DOF_COUNT};
use crate::error::{Error, Result};

/// Checks interval parameters: odd level count and distinct, in-range
/// dimensions.
pub fn check_interval_spec(dims: &[usize], levels: usize) -> Result<()> {
    if levels == 0 || levels.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "grid levels must be odd so the current value is the grid center, got {levels}"
        )));
    }
    for (i, &d) in dims.iter().enumerate() {
        if d >= DOF_COUNT {
            return Err(Error::Config(format!("DOF index {d} out of range 0..{DOF_COUNT}")));
        }
        if dims[..i].contains(&d) {
            return Err(Error::Config(format!("DOF index {d} listed twice")));
        }
    }
    Ok(())
}

/// Deterministic neighbourhood grid around `pose`.
///
/// Each listed dimension takes the values `v + k * step` for
/// `k = -(levels-1)/2 ..= (levels-1)/2`, clamped to the DOF range; the
/// result is their Cartesian product in odometer order (the last listed
/// dimension varies fastest). Clamped duplicates are kept so the output
/// always holds `levels^dims.len()` poses.
pub fn expand_interval(
    pose: &PoseVector,
    dims: &[usize],
    step: f64,
    levels: usize,
    skeleton: &Skeleton,
) -> Result<Vec<PoseVector>> {
    check_interval_spec(dims, levels)?;
    let mut out = Vec::with_capacity(levels.pow(dims.len() as u32));
    expand_into(pose, dims, step, levels, skeleton, &mut out);
    Ok(out)
}

pub(crate) fn expand_into(
    pose: &PoseVector,
    dims: &[usize],
    step: f64,
    levels: usize,
    skeleton: &Skeleton,
    out: &mut Vec<PoseVector>,
) {
    let half = (levels / 2) as f64;
    // per-dimension candidate values
    let axes: Vec<Vec<f64>> = dims
        .iter()
        .map(|&d| {
            let dof = skeleton.dof(d);
            (0..levels)
                .map(|k| dof.clamp(pose[d] + (k as f64 - half) * step))
                .collect()
        })
        .collect();

    let mut counters = vec![0usize; dims.len()];
    loop {
        let mut p = *pose;
        for (slot, (&d, &k)) in dims.iter().zip(&counters).enumerate() {
            p[d] = axes[slot][k];
        }
        out.push(p);

        // advance the odometer
        let mut pos = dims.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < levels {
                break;
            }
            counters[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::dof;
    use proptest::prelude::*;

    fn deg(v: f64) -> f64 {
        v.to_radians()
    }

    #[test]
    fn single_dim_three_levels() {
        let s = Skeleton::default();
        let mut p = PoseVector::zeros();
        p[dof::RIGHT_HIP_FLEXION] = deg(20.0);
        let g = expand_interval(&p, &[dof::RIGHT_HIP_FLEXION], deg(5.0), 3, &s).unwrap();
        let vals: Vec<f64> = g.iter().map(|q| q[dof::RIGHT_HIP_FLEXION].to_degrees()).collect();
        for (v, e) in vals.iter().zip([15.0, 20.0, 25.0]) {
            assert!((v - e).abs() < 1e-9);
        }
        assert_eq!(g[1], p);
    }

    #[test]
    fn four_dims_give_81() {
        let s = Skeleton::default();
        let dims = [
            dof::LEFT_HIP_FLEXION,
            dof::RIGHT_HIP_FLEXION,
            dof::LEFT_KNEE_FLEXION,
            dof::RIGHT_KNEE_FLEXION,
        ];
        let mut p = PoseVector::zeros();
        p[dof::LEFT_KNEE_FLEXION] = deg(20.0);
        p[dof::RIGHT_KNEE_FLEXION] = deg(20.0);
        let g = expand_interval(&p, &dims, deg(5.0), 3, &s).unwrap();
        assert_eq!(g.len(), 81);
        assert_eq!(g[40], p);
    }

    #[test]
    fn clamped_duplicate_is_kept() {
        let s = Skeleton::default();
        let mut p = PoseVector::zeros();
        p[dof::RIGHT_HIP_FLEXION] = s.dof(dof::RIGHT_HIP_FLEXION).max;
        let g = expand_interval(&p, &[dof::RIGHT_HIP_FLEXION], deg(5.0), 3, &s).unwrap();
        let vals: Vec<f64> = g.iter().map(|q| q[dof::RIGHT_HIP_FLEXION].to_degrees()).collect();
        assert!((vals[0] - 55.0).abs() < 1e-9);
        assert!((vals[1] - 60.0).abs() < 1e-9);
        assert!((vals[2] - 60.0).abs() < 1e-9);
    }

    #[test]
    fn odometer_order() {
        let s = Skeleton::default();
        let p = PoseVector::from([0.0; DOF_COUNT]);
        let dims = [dof::TRUNK_LATERAL, dof::TRUNK_AXIAL];
        let g = expand_interval(&p, &dims, 0.1, 3, &s).unwrap();
        assert_eq!(g[0][dof::TRUNK_LATERAL], -0.1);
        assert_eq!(g[0][dof::TRUNK_AXIAL], -0.1);
        assert_eq!(g[1][dof::TRUNK_LATERAL], -0.1);
        assert_eq!(g[1][dof::TRUNK_AXIAL], 0.0);
        assert_eq!(g[3][dof::TRUNK_LATERAL], 0.0);
        assert_eq!(g[3][dof::TRUNK_AXIAL], -0.1);
    }

    #[test]
    fn spec_errors() {
        let s = Skeleton::default();
        let p = PoseVector::zeros();
        assert!(matches!(expand_interval(&p, &[3, 3], 0.1, 3, &s), Err(Error::Config(_))));
        assert!(matches!(expand_interval(&p, &[3], 0.1, 4, &s), Err(Error::Config(_))));
        assert!(matches!(expand_interval(&p, &[31], 0.1, 3, &s), Err(Error::Config(_))));
    }

    proptest! {
        #[test]
        fn grid_properties(
            dims in prop::sample::subsequence((3..DOF_COUNT).collect::<Vec<_>>(), 1..4),
            half_levels in 0usize..3,
            step in 0.0f64..0.3,
            u in prop::collection::vec(0.0f64..=1.0, DOF_COUNT),
        ) {
            let s = Skeleton::default();
            let mut p = PoseVector::zeros();
            for (i, d) in s.dofs().iter().enumerate() {
                p[i] = d.min + u[i] * (d.max - d.min);
            }
            let levels = 2 * half_levels + 1;
            let g = expand_interval(&p, &dims, step, levels, &s).unwrap();
            prop_assert_eq!(g.len(), levels.pow(dims.len() as u32));
            prop_assert!(g.iter().all(|q| q.is_valid(&s)));
            // untouched dims
            for q in &g {
                for i in 0..DOF_COUNT {
                    if !dims.contains(&i) {
                        prop_assert_eq!(q[i], p[i]);
                    }
                }
            }
            let unclamped = dims.iter().all(|&d| {
                let dof = s.dof(d);
                p[d] - half_levels as f64 * step >= dof.min && p[d] + half_levels as f64 * step <= dof.max
            });
            if unclamped {
                prop_assert_eq!(g[g.len() / 2], p);
            }
        }
    }
}
