//! Lattice, random and counting experiments.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{has_repeated_distances, PointConfig};
use crate::recon::{count_combinations, test_reconstructible_2d, ReconOptions, Verdict};
use crate::scalar::Rational;

/// Name of the generator behind [`random_g_statistics`]. `seed` is passed to
/// `ChaCha8Rng::seed_from_u64`, which is stable across platforms.
pub const RNG_ALGORITHM: &str = "ChaCha8";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeReport {
    /// Coordinates range over `0..=box_size`.
    pub box_size: u32,
    pub total_configs: u64,
    pub repeated_distance_count: u64,
    /// Configurations with an exact zero of `g` on some admissible tuple.
    pub g_zero_count: u64,
    /// Repeated distances or a zero of `g`.
    pub fail_count: u64,
    pub nonrepeated_count: u64,
    pub nonrepeated_fail_count: u64,
    /// `"nonrepeated_fail_count/nonrepeated_count"`, not reduced.
    pub nonrepeated_fail_fraction: String,
    pub nonrepeated_fail_pct: f64,
}

impl LatticeReport {
    pub fn nonrepeated_fail_ratio(&self) -> Option<Rational> {
        (self.nonrepeated_count > 0)
            .then(|| Rational::new(self.nonrepeated_fail_count.into(), self.nonrepeated_count.into()))
    }
}

/// Lattice points of `[0, N]^2` ordered by `x`, then `y`.
fn lattice_points(box_size: u32) -> Vec<[i64; 2]> {
    let b = i64::from(box_size);
    (0..=b).flat_map(|x| (0..=b).map(move |y| [x, y])).collect()
}

/// Index 4-subsets `a < b < c < d` of `0..len`.
fn four_subsets(len: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..len {
        for b in a + 1..len {
            for c in b + 1..len {
                for d in c + 1..len {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Runs the four-point test on every 4-subset of the lattice `[0, N]^2`.
///
/// A configuration fails when it has repeated distances or when `g`
/// vanishes exactly on one of its 576 admissible tuples.
pub fn lattice_experiment(box_size: u32) -> Result<LatticeReport> {
    if box_size == 0 {
        return Err(Error::TooFewPoints { needed: 4, got: 1 });
    }
    let points = lattice_points(box_size);
    let subsets = four_subsets(points.len());
    let opts = ReconOptions { parallel: false, ..ReconOptions::default() };
    let outcomes = subsets
        .par_iter()
        .map(|idx| -> Result<(bool, bool)> {
            let config = PointConfig::<Rational>::from_integers(&idx.map(|i| points[i]))?;
            let repeated = has_repeated_distances(&config, 0.0)?;
            let report = test_reconstructible_2d(&config, &opts)?;
            Ok((repeated, report.verdict == Verdict::FailsTest))
        })
        .collect::<Result<Vec<_>>>()?;

    let count = |f: &dyn Fn(&(bool, bool)) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
    let total = outcomes.len() as u64;
    let repeated = count(&|o| o.0);
    let g_zero = count(&|o| o.1);
    let fail = count(&|o| o.0 || o.1);
    let nonrepeated_fail = count(&|o| !o.0 && o.1);
    let nonrepeated = total - repeated;
    let mut report = LatticeReport {
        box_size,
        total_configs: total,
        repeated_distance_count: repeated,
        g_zero_count: g_zero,
        fail_count: fail,
        nonrepeated_count: nonrepeated,
        nonrepeated_fail_count: nonrepeated_fail,
        nonrepeated_fail_fraction: String::new(),
        nonrepeated_fail_pct: 0.0,
    };
    if nonrepeated > 0 {
        report.nonrepeated_fail_fraction = format!("{nonrepeated_fail}/{nonrepeated}");
        report.nonrepeated_fail_pct = 100.0 * nonrepeated_fail as f64 / nonrepeated as f64;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomGReport {
    pub trials: u64,
    pub threshold: f64,
    pub below_threshold_count: u64,
    pub seed: u64,
    pub rng: &'static str,
}

/// `trials` random four-point configurations with coordinates drawn
/// uniformly from `(0, 1)`, in generation order.
pub fn random_configurations(trials: u64, seed: u64) -> Vec<PointConfig<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let points = (0..4).map(|_| (0..2).map(|_| rng.sample::<f64, _>(Open01)).collect()).collect();
            PointConfig::new(2, points).expect("well-formed")
        })
        .collect()
}

/// Minimum of `|g|` over the 576 admissible tuples of each configuration.
pub fn random_g_minima(trials: u64, seed: u64) -> Vec<f64> {
    let opts = ReconOptions { stop_at_first_failure: false, parallel: false, epsilon: 0.0, ..Default::default() };
    random_configurations(trials, seed)
        .par_iter()
        .map(|c| {
            let report = test_reconstructible_2d(c, &opts).expect("planar four-point configuration");
            report.min_abs_g.expect("576 tuples evaluated")
        })
        .collect()
}

/// Counts random configurations whose minimum `|g|` is below `threshold`.
pub fn random_g_statistics(trials: u64, threshold: f64, seed: u64) -> RandomGReport {
    let below = random_g_minima(trials, seed).into_iter().filter(|&g| g < threshold).count() as u64;
    RandomGReport { trials, threshold, below_threshold_count: below, seed, rng: RNG_ALGORITHM }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub combinations: u128,
}

pub fn count_table(ns: &[usize]) -> Result<Vec<CountRow>> {
    ns.iter().map(|&n| Ok(CountRow { n, combinations: count_combinations(n)? })).collect()
}
