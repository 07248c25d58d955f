use std::time::Duration;

use serde::Serialize;

use super::{ReconReport, Verdict, Witness};
use crate::scalar::{Mode, Scalar};

/// Serializable form of a [`ReconReport`]. Indices are one-based and values
/// are decimal strings so exact results survive the round trip.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub verdict: Verdict,
    pub certified: bool,
    pub n: usize,
    pub m: usize,
    pub mode: Mode,
    pub epsilon: f64,
    pub threshold: f64,
    pub repeated_distances: bool,
    pub early_exit: bool,
    pub combos_checked: u128,
    pub combos_total: u128,
    pub min_abs_g: Option<String>,
    pub witness: Option<WitnessDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessDocument {
    pub i0: usize,
    pub i1: usize,
    pub i2: usize,
    /// All pairs in argument order.
    pub pairs: Vec<[usize; 2]>,
    pub g: String,
    pub position: u128,
}

impl<T: Scalar> From<&Witness<T>> for WitnessDocument {
    fn from(w: &Witness<T>) -> Self {
        Self {
            i0: w.tuple.i0 + 1,
            i1: w.tuple.i1 + 1,
            i2: w.tuple.i2 + 1,
            pairs: w.tuple.pairs().iter().map(|p| [p.first() + 1, p.second() + 1]).collect(),
            g: w.g.to_decimal_string(),
            position: w.position,
        }
    }
}

impl<T: Scalar> ReconReport<T> {
    pub fn to_document(&self, wall_time: Option<Duration>) -> ReportDocument {
        ReportDocument {
            verdict: self.verdict,
            certified: self.certified,
            n: self.n,
            m: self.dim,
            mode: self.mode,
            epsilon: self.epsilon,
            threshold: self.threshold,
            repeated_distances: self.repeated_distances,
            early_exit: self.early_exit,
            combos_checked: self.combos_checked,
            combos_total: self.combos_total,
            min_abs_g: self.min_abs_g.as_ref().map(Scalar::to_decimal_string),
            witness: self.witness.as_ref().map(WitnessDocument::from),
            wall_time_seconds: wall_time.map(|d| d.as_secs_f64()),
        }
    }
}
