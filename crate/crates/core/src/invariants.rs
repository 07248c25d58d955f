//! Polynomial relations among squared distances and the planar orientation
//! invariant.
//!
//! `g` is the cubic that vanishes on the six squared distances of any four
//! coplanar points. It equals the determinant of the 3x3 matrix built from
//! those distances with the fourth point as base ([`eval_g_det`]), and
//! [`eval_gm`] generalises that determinant to `m + 2` points in `R^m`.

use crate::error::{Error, Result};
use crate::geometry::{
    all_pairs, same_distribution, squared_distance_matrix, DistanceMatrix, DistanceMultiset, PointConfig,
    DEFAULT_MERGE_TOLERANCE,
};
use crate::linalg;
use crate::scalar::{Ring, Scalar};

/// Arguments of `g`: the squared distances
/// `(d_ij, d_ik, d_il, d_jk, d_jl, d_kl)` of four points `i, j, k, l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GArguments<T> {
    pub u: T,
    pub v: T,
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Ring> GArguments<T> {
    pub fn new(values: [T; 6]) -> Self {
        let [u, v, w, x, y, z] = values;
        Self { u, v, w, x, y, z }
    }

    pub fn to_array(&self) -> [T; 6] {
        [self.u.clone(), self.v.clone(), self.w.clone(), self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn scaled(&self, factor: &T) -> Self {
        Self::new(self.to_array().map(|a| a * factor.clone()))
    }
}

impl<T: Scalar> GArguments<T> {
    /// Distances of points `i, j, k, l` taken from a distance matrix.
    pub fn from_points(d: &DistanceMatrix<T>, i: usize, j: usize, k: usize, l: usize) -> Self {
        Self::new([
            d.get(i, j).clone(),
            d.get(i, k).clone(),
            d.get(i, l).clone(),
            d.get(j, k).clone(),
            d.get(j, l).clone(),
            d.get(k, l).clone(),
        ])
    }
}

/// The 22-term cubic, evaluated term by term.
pub fn eval_g<T: Ring>(a: &GArguments<T>) -> T {
    let (u, v, w, x, y, z) = (&a.u, &a.v, &a.w, &a.x, &a.y, &a.z);
    let t = |c: i32, f: [&T; 3]| -> T {
        let p = f[0].clone() * f[1].clone() * f[2].clone();
        if c > 0 {
            p.clone() + p
        } else {
            -(p.clone() + p)
        }
    };
    [
        t(1, [u, u, z]),
        t(1, [u, v, x]),
        t(-1, [u, v, y]),
        t(-1, [u, v, z]),
        t(-1, [u, x, w]),
        t(-1, [u, x, z]),
        t(1, [u, y, w]),
        t(-1, [u, y, z]),
        t(-1, [u, w, z]),
        t(1, [u, z, z]),
        t(1, [v, v, y]),
        t(-1, [v, x, y]),
        t(-1, [v, x, w]),
        t(1, [v, y, y]),
        t(-1, [v, y, w]),
        t(-1, [v, y, z]),
        t(1, [v, w, z]),
        t(1, [x, x, w]),
        t(-1, [x, y, w]),
        t(1, [x, y, z]),
        t(1, [x, w, w]),
        t(-1, [x, w, z]),
    ]
    .into_iter()
    .fold(T::zero(), |acc, term| acc + term)
}

/// The same relation written as the determinant of the symmetric matrix
///
/// ```text
/// | -2 d_il             d_ij - d_il - d_jl   d_ik - d_il - d_kl |
/// | d_ij - d_il - d_jl  -2 d_jl              d_jk - d_jl - d_kl |
/// | d_ik - d_il - d_kl  d_jk - d_jl - d_kl   -2 d_kl            |
/// ```
pub fn eval_g_det<T: Ring>(a: &GArguments<T>) -> T {
    let two = T::one() + T::one();
    let (dij, dik, dil, djk, djl, dkl) = (&a.u, &a.v, &a.w, &a.x, &a.y, &a.z);
    let m11 = -(two.clone() * dil.clone());
    let m22 = -(two.clone() * djl.clone());
    let m33 = -(two.clone() * dkl.clone());
    let m12 = dij.clone() - dil.clone() - djl.clone();
    let m13 = dik.clone() - dil.clone() - dkl.clone();
    let m23 = djk.clone() - djl.clone() - dkl.clone();
    m11.clone() * m22.clone() * m33.clone() + two * m12.clone() * m13.clone() * m23.clone()
        - m11 * m23.clone() * m23
        - m22 * m13.clone() * m13
        - m33 * m12.clone() * m12
}

/// Number of arguments of `g_m`: `C(m+2, 2)`.
pub fn gm_arity(m: usize) -> usize {
    (m + 2) * (m + 1) / 2
}

/// Argument layout of [`eval_gm`]: position `t` holds the squared distance of
/// abstract points `(a, b)`, `0 <= a < b <= m+1`, in lexicographic order.
pub fn gm_pair_order(m: usize) -> Vec<(usize, usize)> {
    all_pairs(m + 2).map(|p| (p.first(), p.second())).collect()
}

/// `det(d_{νμ} - d_{ν0} - d_{μ0})` for `ν, μ = 1..=m+1`, where the diagonal
/// reduces to `-2 d_{ν0}`. Vanishes on the squared distances of `m + 2`
/// points of `R^m`. Arguments follow [`gm_pair_order`].
pub fn eval_gm<T: Ring>(m: usize, d: &[T]) -> Result<T> {
    let k = gm_arity(m);
    if d.len() != k {
        return Err(Error::WrongArgumentCount { expected: k, got: d.len() });
    }
    Ok(linalg::det(gm_matrix(m, |a, b| d[abstract_pair_index(m + 2, a, b)].clone())))
}

pub(crate) fn gm_matrix<T: Ring>(m: usize, dist: impl Fn(usize, usize) -> T) -> Vec<Vec<T>> {
    let size = m + 1;
    (1..=size)
        .map(|nu| {
            (1..=size)
                .map(|mu| {
                    if nu == mu {
                        let d0 = dist(0, nu);
                        -(d0.clone() + d0)
                    } else {
                        dist(nu.min(mu), nu.max(mu)) - dist(0, nu) - dist(0, mu)
                    }
                })
                .collect()
        })
        .collect()
}

pub(crate) fn abstract_pair_index(points: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < points);
    a * (2 * points - a - 1) / 2 + (b - a - 1)
}

/// `det(a - c, b - c)`: twice the signed area of the triangle.
pub fn signed_area<T: Scalar>(a: &[T], b: &[T], c: &[T]) -> Result<T> {
    for p in [a, b, c] {
        if p.len() != 2 {
            return Err(Error::UnsupportedDimension { required: 2, got: p.len() });
        }
    }
    Ok(area(a, b, c))
}

fn area<T: Ring>(a: &[T], b: &[T], c: &[T]) -> T {
    let (ax, ay) = (a[0].clone() - c[0].clone(), a[1].clone() - c[1].clone());
    let (bx, by) = (b[0].clone() - c[0].clone(), b[1].clone() - c[1].clone());
    ax * by - ay * bx
}

/// Orientation invariant of four planar points: unchanged by rotations,
/// translations and reorderings of the arguments, negated by reflections.
pub fn eval_i<T: Scalar>(q1: &[T], q2: &[T], q3: &[T], q4: &[T]) -> Result<T> {
    for p in [q1, q2, q3, q4] {
        if p.len() != 2 {
            return Err(Error::UnsupportedDimension { required: 2, got: p.len() });
        }
    }
    let a123 = area(q1, q2, q3);
    let a124 = area(q1, q2, q4);
    let a134 = area(q1, q3, q4);
    let sq = |x: &T| x.clone() * x.clone();
    let two = T::one() + T::one();
    let factors = [
        sq(&a124) - sq(&a134),
        sq(&a123) - sq(&a134),
        sq(&a123) - sq(&a124),
        a123.clone() - a124.clone() + two.clone() * a134.clone(),
        a123.clone() - two.clone() * a124.clone() + a134.clone(),
        two * a123 - a124 + a134,
    ];
    Ok(factors.into_iter().fold(T::one(), |acc, f| acc * f))
}

/// Multiset of `I` over all 4-subsets `i1 < i2 < i3 < i4` of a planar
/// configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientationDistribution<T> {
    values: DistanceMultiset<T>,
}

impl<T: Scalar> OrientationDistribution<T> {
    pub fn from_values(values: Vec<T>, merge_tol: f64) -> Self {
        Self { values: DistanceMultiset::from_values(values, merge_tol) }
    }

    pub fn entries(&self) -> &[(T, usize)] {
        self.values.entries()
    }

    pub fn total(&self) -> usize {
        self.values.total()
    }

    pub fn as_multiset(&self) -> &DistanceMultiset<T> {
        &self.values
    }

    /// Distribution of `-I`.
    pub fn negated(&self) -> Self {
        let values = self.values.expanded().map(|v| -v.clone()).collect();
        Self { values: DistanceMultiset::from_values(values, 0.0) }
    }

    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        same_distribution(&self.values, &other.values, tol)
    }
}

pub fn orientation_distribution<T: Scalar>(config: &PointConfig<T>) -> Result<OrientationDistribution<T>> {
    if config.dim() != 2 {
        return Err(Error::UnsupportedDimension { required: 2, got: config.dim() });
    }
    let n = config.len();
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let mut values = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    values.push(eval_i(config.point(a), config.point(b), config.point(c), config.point(d))?);
                }
            }
        }
    }
    let scale = values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    Ok(OrientationDistribution::from_values(values, DEFAULT_MERGE_TOLERANCE * scale))
}

/// True iff the distribution of `I` equals that of `-I` (within `tol`).
pub fn is_symmetric_distribution<T: Scalar>(dist: &OrientationDistribution<T>, tol: f64) -> bool {
    dist.matches(&dist.negated(), tol)
}

/// `g` on the four points `i, j, k, l` of a configuration.
pub fn g_of_points<T: Scalar>(config: &PointConfig<T>, idx: [usize; 4]) -> T {
    let d = squared_distance_matrix(config);
    eval_g(&GArguments::from_points(&d, idx[0], idx[1], idx[2], idx[3]))
}
