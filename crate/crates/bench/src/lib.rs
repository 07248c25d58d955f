//! Fixtures shared by the benchmarks.

use distrecon::{PointConfig, Rational};

/// Deterministic integer configuration of `n` planar points with
/// coordinates in `-500..500`.
pub fn integer_config(n: usize, seed: u64) -> PointConfig<Rational> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 1000) as i64 - 500
    };
    let points: Vec<[i64; 2]> = (0..n).map(|_| [next(), next()]).collect();
    PointConfig::from_integers(&points).expect("planar points")
}

/// The same configuration scaled into the unit square, in `f64`.
pub fn float_config(n: usize, seed: u64) -> PointConfig<f64> {
    let p = integer_config(n, seed).to_float();
    let points = p.points().iter().map(|q| q.iter().map(|x| (x + 500.0) / 1000.0).collect()).collect();
    PointConfig::new(2, points).expect("planar points")
}
