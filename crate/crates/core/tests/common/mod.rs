#![allow(dead_code)]

use distrecon::geometry::{apply_rigid_motion, RigidMotion};
use distrecon::{PointConfig, Rational, Scalar};
use proptest::prelude::*;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn planar_ints(n: usize, bound: i64) -> impl Strategy<Value = Vec<[i64; 2]>> {
    prop::collection::vec(prop::array::uniform2(-bound..=bound), n)
}

pub fn exact(points: &[[i64; 2]]) -> PointConfig<Rational> {
    PointConfig::from_integers(points).unwrap()
}

/// Rotation from `(a, b)`, optional reflection, rational translation.
pub fn exact_motion(a: i64, b: i64, reflect: bool, t: [(i64, i64); 2]) -> RigidMotion<Rational> {
    let rot = RigidMotion::rational_rotation_2d(a, b).unwrap();
    let m = if reflect { rot.compose(&RigidMotion::reflection(2, 1)).unwrap() } else { rot };
    m.with_translation(vec![rat(t[0].0, t[0].1), rat(t[1].0, t[1].1)]).unwrap()
}

pub fn motion_params() -> impl Strategy<Value = (i64, i64, bool, [(i64, i64); 2])> {
    let nonzero = (1i64..12, 0i64..12);
    let frac = (-50i64..50, 1i64..9);
    (nonzero, any::<bool>(), [frac.clone(), frac]).prop_map(|((a, b), r, t)| (a, b, r, t))
}

pub fn transform(
    p: &PointConfig<Rational>,
    (a, b, r, t): (i64, i64, bool, [(i64, i64); 2]),
    perm: &[usize],
) -> PointConfig<Rational> {
    apply_rigid_motion(p, &exact_motion(a, b, r, t)).unwrap().relabeled(perm).unwrap()
}

/// Deterministic pseudo-random source for the fixed-count checks.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn perm(&mut self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            v.swap(i, (self.next_u64() % (i as u64 + 1)) as usize);
        }
        v
    }
}

pub fn float_scale(p: &PointConfig<f64>) -> f64 {
    p.points().iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0)
}

pub fn to_f64s<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}
