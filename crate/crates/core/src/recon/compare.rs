use serde::Serialize;

use super::{test_reconstructible_2d, ReconOptions, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{distance_distribution, rescaled_distribution, same_distribution, DistanceMultiset, PointConfig};
use crate::invariants::{is_symmetric_distribution, orientation_distribution};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareMode {
    Rigid,
    Orientation,
    Similarity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrientationVerdict {
    /// Related by a rotation and translation (up to relabeling).
    SameSe2,
    /// Related by a reflection (up to relabeling and SE(2)).
    MirrorPair,
    Inconclusive,
    NotRequested,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompareVerdict {
    pub distribution_match: bool,
    pub orientation: OrientationVerdict,
    /// `None` unless the similarity comparison was requested.
    pub similarity_match: Option<bool>,
}

impl CompareVerdict {
    /// The answer to the question the mode asked.
    pub fn is_match(&self, mode: CompareMode) -> bool {
        match mode {
            CompareMode::Rigid => self.distribution_match,
            CompareMode::Similarity => self.similarity_match == Some(true),
            CompareMode::Orientation => self.orientation == OrientationVerdict::SameSe2,
        }
    }
}

fn scale_of<T: Scalar>(d: &DistanceMultiset<T>) -> f64 {
    d.entries().last().map_or(0.0, |(v, _)| v.to_f64().abs())
}

/// Compares two configurations by their distance distributions.
///
/// `tol` is relative: float values are compared within `tol` times the
/// largest magnitude of the first configuration. Exact mode ignores it.
///
/// Orientation mode returns `SameSe2` or `MirrorPair` only when the first
/// configuration passes the test with a certificate and its `I` distribution
/// is not symmetric; then `I` separates the two SE(2) classes.
pub fn compare_configs<T: Scalar>(
    p: &PointConfig<T>,
    q: &PointConfig<T>,
    mode: CompareMode,
    tol: f64,
) -> Result<CompareVerdict> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    if p.len() != q.len() {
        return Err(Error::CountMismatch { left: p.len(), right: q.len() });
    }
    let (dp, dq) = (distance_distribution(p)?, distance_distribution(q)?);
    let distribution_match = same_distribution(&dp, &dq, tol * scale_of(&dp));
    let mut verdict =
        CompareVerdict { distribution_match, orientation: OrientationVerdict::NotRequested, similarity_match: None };
    match mode {
        CompareMode::Rigid => {}
        CompareMode::Similarity => {
            let (rp, rq) = (rescaled_distribution(p)?, rescaled_distribution(q)?);
            verdict.similarity_match = Some(same_distribution(&rp, &rq, tol));
        }
        CompareMode::Orientation => {
            let (ip, iq) = (orientation_distribution(p)?, orientation_distribution(q)?);
            let itol = tol * scale_of(ip.as_multiset());
            verdict.orientation = OrientationVerdict::Inconclusive;
            if distribution_match && !is_symmetric_distribution(&ip, itol) {
                let report = test_reconstructible_2d(p, &ReconOptions::default())?;
                if report.verdict == Verdict::PassesTest && report.certified {
                    if ip.matches(&iq, itol) {
                        verdict.orientation = OrientationVerdict::SameSe2;
                    } else if ip.matches(&iq.negated(), itol) {
                        verdict.orientation = OrientationVerdict::MirrorPair;
                    }
                }
            }
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{apply_rigid_motion, RigidMotion};
    use crate::scalar::Rational;

    fn base() -> PointConfig<Rational> {
        PointConfig::from_integers(&[[19, -4], [2, 13], [-19, 9], [-5, -17], [-10, -13]]).unwrap()
    }

    #[test]
    fn rotated_copy_is_same_orientation() {
        let rot = RigidMotion::rational_rotation_2d(3, 4)
            .unwrap()
            .with_translation(vec![Rational::from_i64(5), Rational::from_i64(-2)])
            .unwrap();
        let q = apply_rigid_motion(&base(), &rot).unwrap().relabeled(&[3, 0, 4, 2, 1]).unwrap();
        let v = compare_configs(&base(), &q, CompareMode::Orientation, 0.0).unwrap();
        assert!(v.distribution_match);
        assert_eq!(v.orientation, OrientationVerdict::SameSe2);
        assert!(v.is_match(CompareMode::Orientation));
    }

    #[test]
    fn reflected_copy_is_mirror_pair() {
        let q = apply_rigid_motion(&base(), &RigidMotion::reflection(2, 1)).unwrap();
        let v = compare_configs(&base(), &q, CompareMode::Orientation, 0.0).unwrap();
        assert!(v.distribution_match);
        assert_eq!(v.orientation, OrientationVerdict::MirrorPair);
    }

    #[test]
    fn similarity_ignores_scale() {
        let q = base().scaled(&Rational::new(5.into(), 2.into()));
        let v = compare_configs(&base(), &q, CompareMode::Similarity, 0.0).unwrap();
        assert!(!v.distribution_match);
        assert_eq!(v.similarity_match, Some(true));
        assert_eq!(v.orientation, OrientationVerdict::NotRequested);
    }

    #[test]
    fn mismatched_inputs_are_errors() {
        let tri = PointConfig::<Rational>::from_integers(&[[0, 0], [1, 0], [0, 1]]).unwrap();
        assert!(compare_configs(&base(), &tri, CompareMode::Rigid, 0.0).is_err());
        assert!(compare_configs(&tri, &tri, CompareMode::Orientation, 0.0).is_err());
    }
}
