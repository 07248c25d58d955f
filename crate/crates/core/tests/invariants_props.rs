mod common;

use common::*;
use distrecon::geometry::{apply_rigid_motion, squared_distance_matrix, RigidMotion};
use distrecon::invariants::{
    eval_g, eval_g_det, eval_gm, eval_i, gm_pair_order, is_symmetric_distribution, orientation_distribution,
    signed_area, GArguments,
};
use distrecon::perms::Relabeling;
use distrecon::{PointConfig, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn args_of(points: &[[i64; 2]]) -> GArguments<Rational> {
    GArguments::from_points(&squared_distance_matrix(&exact(points)), 0, 1, 2, 3)
}

/// Ratio `det / g` on three fixed integer tuples; all three must agree.
fn calibrated_constant() -> Rational {
    let tuples: [[i64; 6]; 3] = [[3, 7, 1, 9, 4, 6], [12, -5, 8, 2, 11, 3], [1, 2, 3, 5, 8, 13]];
    let ratios: Vec<Rational> = tuples
        .iter()
        .map(|t| {
            let a = GArguments::new(t.map(|v| rat(v, 1)));
            let g = eval_g(&a);
            assert!(!g.is_zero());
            eval_g_det(&a) / g
        })
        .collect();
    assert!(ratios.iter().all(|r| *r == ratios[0]), "inconsistent ratios {ratios:?}");
    ratios[0].clone()
}

#[test]
fn determinant_constant_is_one() {
    assert_eq!(calibrated_constant(), rat(1, 1));
}

#[test]
fn g_vanishes_on_planar_quadruples() {
    let mut rng = Lcg(17);
    for _ in 0..10_000 {
        let pts: Vec<[i64; 2]> = (0..4).map(|_| [rng.int(-100, 100), rng.int(-100, 100)]).collect();
        let d = squared_distance_matrix(&exact(&pts));
        // i128 evaluation of the same polynomial as a cross-check
        let a = GArguments::from_points(&d, 0, 1, 2, 3);
        assert!(eval_g(&a).is_zero(), "{pts:?}");
        let ints = a.to_array().map(|v| v.to_integer().try_into().unwrap());
        assert_eq!(eval_g::<i128>(&GArguments::new(ints)), 0);
    }
}

#[test]
fn gm_vanishes_in_three_dimensions() {
    let mut rng = Lcg(5);
    for _ in 0..1000 {
        let pts: Vec<Vec<i64>> = (0..5).map(|_| (0..3).map(|_| rng.int(-50, 50)).collect()).collect();
        let sq = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<i64>();
        let d: Vec<i128> = gm_pair_order(3).iter().map(|&(a, b)| sq(&pts[a], &pts[b]) as i128).collect();
        assert_eq!(eval_gm(3, &d).unwrap(), 0, "{pts:?}");
    }
}

#[test]
fn gm_detects_a_genuine_simplex() {
    // five vertices of a regular 4-simplex do not fit in R^3
    assert_ne!(eval_gm(3, &[1i64; 10]).unwrap(), 0);
    assert!(eval_gm(3, &[1i64; 9]).is_err());
}

proptest! {
    #[test]
    fn g_is_homogeneous(vals in prop::array::uniform6(-60i64..60), num in -9i64..9, den in 1i64..9) {
        let a = GArguments::new(vals.map(|v| rat(v, 1)));
        let l = rat(num, den);
        let lhs = eval_g(&a.scaled(&l));
        prop_assert_eq!(lhs, eval_g(&a) * l.clone() * l.clone() * l);
    }

    #[test]
    fn determinant_form_is_proportional(vals in prop::array::uniform6(-200i64..200), den in 1i64..30) {
        let c = calibrated_constant();
        let a = GArguments::new(vals.map(|v| rat(v, den)));
        prop_assert_eq!(eval_g_det(&a), c * eval_g(&a));
    }

    #[test]
    fn gm_for_m2_is_g(vals in prop::array::uniform6(-200i64..200)) {
        let a = GArguments::new(vals.map(i128::from));
        // lexicographic order on four points equals the argument order of g
        prop_assert_eq!(eval_gm(2, &vals.map(i128::from)).unwrap(), eval_g(&a));
    }

    #[test]
    fn i_is_invariant_under_reordering(pts in planar_ints(4, 30)) {
        let p = exact(&pts);
        let base = eval_i(p.point(0), p.point(1), p.point(2), p.point(3)).unwrap();
        for pi in Relabeling::all(4) {
            let q: Vec<&[Rational]> = pi.images().iter().map(|&i| p.point(i)).collect();
            prop_assert_eq!(eval_i(q[0], q[1], q[2], q[3]).unwrap(), base.clone());
        }
    }

    #[test]
    fn i_changes_sign_under_reflection(pts in planar_ints(4, 30), mp in motion_params()) {
        let p = exact(&pts);
        let refl = exact_motion(mp.0, mp.1, true, mp.3);
        let q = apply_rigid_motion(&p, &refl).unwrap();
        let ip = eval_i(p.point(0), p.point(1), p.point(2), p.point(3)).unwrap();
        let iq = eval_i(q.point(0), q.point(1), q.point(2), q.point(3)).unwrap();
        prop_assert_eq!(iq, -ip);
    }

    #[test]
    fn signed_area_is_antisymmetric(pts in planar_ints(3, 50)) {
        let p = exact(&pts);
        let a = signed_area(p.point(0), p.point(1), p.point(2)).unwrap();
        prop_assert_eq!(signed_area(p.point(1), p.point(0), p.point(2)).unwrap(), -a);
    }
}

#[test]
fn i_is_invariant_under_float_rotation() {
    let mut rng = Lcg(99);
    for _ in 0..100 {
        let p = PointConfig::new(2, (0..4).map(|_| vec![rng.unit(), rng.unit()]).collect()).unwrap();
        let motion = RigidMotion::rotation_2d(6.3 * rng.unit()).with_translation(vec![rng.unit(), rng.unit()]).unwrap();
        let q = apply_rigid_motion(&p, &motion).unwrap();
        let ip = eval_i(p.point(0), p.point(1), p.point(2), p.point(3)).unwrap();
        let iq = eval_i(q.point(0), q.point(1), q.point(2), q.point(3)).unwrap();
        assert!((ip - iq).abs() <= 1e-9 * ip.abs().max(f64::MIN_POSITIVE), "{ip} vs {iq}");
    }
}

#[test]
fn generic_configurations_have_asymmetric_i() {
    let mut rng = Lcg(3);
    let asymmetric = (0..20).any(|_| {
        let pts: Vec<[i64; 2]> = (0..5).map(|_| [rng.int(-50, 50), rng.int(-50, 50)]).collect();
        !is_symmetric_distribution(&orientation_distribution(&exact(&pts)).unwrap(), 0.0)
    });
    assert!(asymmetric);
    let zero = orientation_distribution(&exact(&[[0, 0], [1, 0], [2, 0], [3, 0]])).unwrap();
    assert!(is_symmetric_distribution(&zero, 0.0));
    assert!(eval_g(&args_of(&[[0, 0], [1, 0], [1, 1], [0, 1]])).is_zero());
}
