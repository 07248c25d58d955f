mod common;

use common::*;
use distrecon::geometry::{
    apply_rigid_motion, congruent, distance_distribution, rescaled_distribution, same_distribution,
    squared_distance_matrix, RigidMotion,
};
use distrecon::PointConfig;
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #[test]
    fn distribution_survives_rigid_motion(pts in planar_ints(6, 40), mp in motion_params()) {
        let p = exact(&pts);
        let q = apply_rigid_motion(&p, &exact_motion(mp.0, mp.1, mp.2, mp.3)).unwrap();
        prop_assert_eq!(distance_distribution(&p).unwrap(), distance_distribution(&q).unwrap());
    }

    #[test]
    fn distribution_survives_relabeling(pts in planar_ints(7, 40), seed in any::<u64>()) {
        let p = exact(&pts);
        let q = p.relabeled(&Lcg(seed).perm(7)).unwrap();
        prop_assert_eq!(distance_distribution(&p).unwrap(), distance_distribution(&q).unwrap());
    }

    #[test]
    fn float_distribution_survives_rotation(pts in prop::collection::vec(prop::array::uniform2(0.0f64..1.0), 5), theta in 0.0f64..6.3) {
        let p = PointConfig::new(2, pts.iter().map(|q| q.to_vec()).collect()).unwrap();
        let q = apply_rigid_motion(&p, &RigidMotion::rotation_2d(theta).with_translation(vec![0.3, -0.7]).unwrap()).unwrap();
        let (dp, dq) = (squared_distance_matrix(&p), squared_distance_matrix(&q));
        let d_max = dp.max_value();
        let mut a = dp.pair_values();
        let mut b = dq.pair_values();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * d_max.max(1e-300) + 1e-15);
        }
    }

    #[test]
    fn rescaling_removes_scale(pts in planar_ints(5, 30), num in 1i64..40, den in 1i64..40, neg in any::<bool>()) {
        let p = exact(&pts);
        prop_assume!(distance_distribution(&p).unwrap().entries().iter().any(|(v, _)| !v.is_zero()));
        let lambda = rat(if neg { -num } else { num }, den);
        prop_assert_eq!(rescaled_distribution(&p).unwrap(), rescaled_distribution(&p.scaled(&lambda)).unwrap());
    }

    #[test]
    fn zero_distance_iff_coincident(pts in planar_ints(6, 3)) {
        let p = exact(&pts);
        let d = squared_distance_matrix(&p);
        for i in 0..6 {
            for j in 0..6 {
                prop_assert_eq!(d.get(i, j).is_zero(), pts[i] == pts[j]);
            }
        }
    }
}

#[test]
fn congruence_oracle_finds_shuffled_motions() {
    let mut rng = Lcg(2024);
    for trial in 0..100 {
        let n = 3 + trial % 4;
        let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.unit(), rng.unit()]).collect();
        let p = PointConfig::new(2, pts).unwrap();
        let mut motion = RigidMotion::rotation_2d(6.3 * rng.unit());
        if trial % 3 == 0 {
            motion = motion.compose(&RigidMotion::reflection(2, 0)).unwrap();
        }
        let motion = motion.with_translation(vec![rng.unit() - 0.5, rng.unit() - 0.5]).unwrap();
        let perm = rng.perm(n);
        let q = apply_rigid_motion(&p, &motion).unwrap().relabeled(&perm).unwrap();
        let found = congruent(&p, &q, 1e-9).unwrap_or_else(|| panic!("trial {trial}: no congruence"));
        assert!(found.max_residual <= 1e-9);
        for i in 0..n {
            let image = found.motion.apply_point(p.point(i));
            let target = q.point(found.relabeling[i]);
            assert!(image.iter().zip(target).all(|(a, b)| (a - b).abs() <= 1e-9));
        }
    }
}

#[test]
fn squares_and_triangles_differ() {
    let square = exact(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
    let rotated = apply_rigid_motion(&square, &exact_motion(2, 1, false, [(1, 3), (-2, 5)])).unwrap();
    let tri_center = PointConfig::new(
        2,
        vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(2, 1), rat(0, 1)],
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(1, 1), rat(2, 3)],
        ],
    )
    .unwrap();
    let ds = distance_distribution(&square).unwrap();
    assert!(same_distribution(&ds, &distance_distribution(&rotated).unwrap(), 0.0));
    assert!(same_distribution(&ds, &ds, 0.0));
    assert!(!same_distribution(&ds, &distance_distribution(&tri_center).unwrap(), 0.0));
}
