//! Reconstructibility of point configurations from the distribution of their
//! pairwise distances.
//!
//! The central operation is [`recon::test_reconstructible_2d`]: a planar
//! configuration of `n >= 5` points on which the cubic relation `g` never
//! vanishes over the admissible index tuples is determined, up to rigid
//! motion and relabeling, by its multiset of distances. Everything runs
//! either in exact rational arithmetic or in `f64`, chosen by the scalar type.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod perms;
pub mod recon;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{DistanceMatrix, DistanceMultiset, PairKey, PointConfig, RigidMotion};
pub use invariants::{GArguments, OrientationDistribution};
pub use perms::{PairPermutation, Relabeling};
pub use recon::{ComboTuple, CompareMode, CompareVerdict, OrientationVerdict, ReconOptions, ReconReport, Verdict};
pub use scalar::{Mode, Rational, Scalar};
