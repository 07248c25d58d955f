//! The reconstructibility test.
//!
//! For a planar configuration the test evaluates `g` on every admissible
//! tuple of squared distances (see [`combos`]). If no value vanishes the
//! configuration is reconstructible from its distance distribution (for
//! `n >= 5`). A vanishing value is only a failure of the test, not a proof of
//! non-reconstructibility. The `R^m` variant does the same with `g_m`.

mod combos;
mod compare;
mod report;
mod scan;

use serde::{Deserialize, Serialize};

pub use combos::{
    count_by_iteration, count_combinations, count_combinations_md, enumerate_combinations, enumerate_combinations_md,
    Combinations, ComboTuple,
};
pub use compare::{compare_configs, CompareMode, CompareVerdict, OrientationVerdict};
pub use report::{ReportDocument, WitnessDocument};

use crate::error::{Error, Result};
use crate::geometry::{has_repeated_distances, squared_distance_matrix, PairKey, PointConfig};
use crate::invariants::{eval_g, GArguments};
use crate::scalar::{Lifted, Mode, Rational, Ring, Scalar, ScanInput};
use num_bigint::BigInt;
use scan::{scan_values, Relation, ScanParams};

/// Default `epsilon` for float mode on unit-scale data.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    PassesTest,
    FailsTest,
    NotApplicable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::PassesTest => "passes",
            Verdict::FailsTest => "fails",
            Verdict::NotApplicable => "not applicable",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReconOptions {
    /// Float mode: `|g| <= threshold` counts as zero. Ignored in exact mode.
    pub epsilon: f64,
    /// Multiply `epsilon` by `d_max^(m+1)` so the threshold follows the
    /// scale of the data (`g_m` is homogeneous of degree `m + 1`).
    pub scale_aware: bool,
    /// Report a failure straight away when two distances coincide.
    pub early_exit_repeated: bool,
    /// Stop at the first vanishing tuple. When false every tuple is
    /// evaluated, so `min_abs_g` covers the full set.
    pub stop_at_first_failure: bool,
    pub parallel: bool,
}

impl Default for ReconOptions {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            scale_aware: true,
            early_exit_repeated: false,
            stop_at_first_failure: true,
            parallel: true,
        }
    }
}

/// First tuple (canonical order) on which the relation vanished.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<T> {
    pub tuple: ComboTuple,
    pub g: T,
    /// One-based position in the canonical enumeration.
    pub position: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconReport<T> {
    pub verdict: Verdict,
    /// A pass proves reconstructibility only for `n >= 5`.
    pub certified: bool,
    pub n: usize,
    pub dim: usize,
    pub witness: Option<Witness<T>>,
    pub min_abs_g: Option<T>,
    pub combos_checked: u128,
    pub combos_total: u128,
    pub mode: Mode,
    pub epsilon: f64,
    /// Effective zero threshold (float mode).
    pub threshold: f64,
    pub repeated_distances: bool,
    /// True when the verdict came from the repeated-distance shortcut.
    pub early_exit: bool,
}

impl<T: Scalar> ReconReport<T> {
    fn not_applicable(n: usize, dim: usize, opts: &ReconOptions) -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            certified: false,
            n,
            dim,
            witness: None,
            min_abs_g: None,
            combos_checked: 0,
            combos_total: 0,
            mode: T::MODE,
            epsilon: opts.epsilon,
            threshold: 0.0,
            repeated_distances: false,
            early_exit: false,
        }
    }
}

/// Planar test. Runs over all tuples of [`enumerate_combinations`].
///
/// `n < 4` yields `NotApplicable` (such configurations are always
/// reconstructible); `n = 4` runs the test but a pass carries no certificate.
pub fn test_reconstructible_2d<T: Scalar>(config: &PointConfig<T>, opts: &ReconOptions) -> Result<ReconReport<T>> {
    if config.dim() != 2 {
        return Err(Error::UnsupportedDimension { required: 2, got: config.dim() });
    }
    run_test(config, Relation::Planar, opts)
}

/// Test in `R^m` with `m = config.dim()`, using the determinant relation
/// `g_m`. For `m = 2` it agrees with [`test_reconstructible_2d`].
pub fn test_reconstructible_md<T: Scalar>(config: &PointConfig<T>, opts: &ReconOptions) -> Result<ReconReport<T>> {
    run_test(config, Relation::General(config.dim()), opts)
}

fn run_test<T: Scalar>(config: &PointConfig<T>, relation: Relation, opts: &ReconOptions) -> Result<ReconReport<T>> {
    let (n, m) = (config.len(), relation.dim());
    if n < (m + 2).max(4) {
        return Ok(ReconReport::not_applicable(n, m, opts));
    }
    let d = squared_distance_matrix(config);
    let values = d.pair_values();
    let d_max = d.max_value().to_f64();
    let repeated = has_repeated_distances(config, crate::geometry::DEFAULT_MERGE_TOLERANCE * d_max)?;
    let threshold = match T::MODE {
        Mode::Exact => 0.0,
        Mode::Float if opts.scale_aware => opts.epsilon * d_max.powi(relation.degree() as i32),
        Mode::Float => opts.epsilon,
    };
    let total = count_combinations_md(n, m)?;
    let mut report = ReconReport {
        verdict: Verdict::PassesTest,
        certified: false,
        n,
        dim: m,
        witness: None,
        min_abs_g: None,
        combos_checked: 0,
        combos_total: total,
        mode: T::MODE,
        epsilon: opts.epsilon,
        threshold,
        repeated_distances: repeated,
        early_exit: false,
    };
    if repeated && opts.early_exit_repeated {
        report.verdict = Verdict::FailsTest;
        report.early_exit = true;
        return Ok(report);
    }

    let params = ScanParams { relation, threshold, stop_at_first: opts.stop_at_first_failure, parallel: opts.parallel };
    let outcome = scan_values(&values, n, params);
    let block = combos::block_size(n, m);
    report.combos_checked = outcome.checked;
    report.min_abs_g = outcome.min_abs;
    report.witness = outcome.first_hit.map(|hit| {
        let (i0, i1, i2) = combos::triples(n)[hit.block];
        let k = hit.pairs.len();
        let middle = hit.pairs[1..k - 1].iter().map(|&p| PairKey::from_index(p, n)).collect();
        Witness {
            tuple: ComboTuple { i0, i1, i2, middle },
            g: hit.g,
            position: hit.block as u128 * block + u128::from(hit.offset) + 1,
        }
    });
    report.verdict = if report.witness.is_some() { Verdict::FailsTest } else { Verdict::PassesTest };
    report.certified = report.verdict == Verdict::PassesTest && n >= 5;
    Ok(report)
}

/// `g` on every planar tuple in canonical order, evaluated term by term.
/// Exact inputs are brought to a common denominator and evaluated on integer
/// numerators. Intended for inspection and tests on small `n`.
pub fn g_values_2d<T: Scalar>(config: &PointConfig<T>) -> Result<Vec<T>> {
    if config.dim() != 2 {
        return Err(Error::UnsupportedDimension { required: 2, got: config.dim() });
    }
    let n = config.len();
    let values = squared_distance_matrix(config).pair_values();
    let tuples: Vec<[usize; 6]> = enumerate_combinations(n)?
        .map(|t| {
            let pairs: [PairKey; 6] = t.pairs().try_into().expect("six pairs");
            pairs.map(|p| p.index(n))
        })
        .collect();
    fn eval_all<K: Ring>(v: &[K], tuples: &[[usize; 6]]) -> Vec<K> {
        tuples.iter().map(|t| eval_g(&GArguments::new(t.map(|k| v[k].clone())))).collect()
    }
    Ok(match T::lower(&values) {
        ScanInput::Float(v) => eval_all(&v, &tuples).into_iter().map(|g| T::lift(Lifted::Float(g))).collect(),
        ScanInput::Exact { numerators, denominator } => {
            let scale = num_traits::pow(denominator, 3);
            let lift = |g: BigInt| T::lift(Lifted::Exact(Rational::new(g, scale.clone())));
            if numerators.iter().all(|v| v.bits() <= 38) {
                let small: Vec<i128> = numerators.iter().map(|v| i128::try_from(v).expect("38 bits")).collect();
                eval_all(&small, &tuples).into_iter().map(|g| lift(BigInt::from(g))).collect()
            } else {
                eval_all(&numerators, &tuples).into_iter().map(lift).collect()
            }
        }
    })
}
