//! Point configurations, squared-distance matrices and distance distributions.
//!
//! Squared distances are the stored quantity throughout: for integer or
//! rational coordinates they are exact, and every downstream polynomial is
//! written in terms of them. Display code may take square roots.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Rational, Scalar};

/// Default relative tolerance for merging near-equal float distances,
/// multiplied by the largest squared distance.
pub const DEFAULT_MERGE_TOLERANCE: f64 = 1e-9;

/// `n` labeled points in `R^m`. Labels are the positions `0..n` (shown as
/// `1..=n` to users).
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig<T> {
    m: usize,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> PointConfig<T> {
    pub fn new(m: usize, points: Vec<Vec<T>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if points.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        if let Some(bad) = points.iter().find(|p| p.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: bad.len() });
        }
        Ok(Self { m, points })
    }

    pub fn from_integers<P: AsRef<[i64]>>(points: &[P]) -> Result<Self> {
        let m = points.first().map_or(0, |p| p.as_ref().len());
        Self::new(m, points.iter().map(|p| p.as_ref().iter().map(|&c| T::from_i64(c)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    /// `q_{perm[i]} = p_i`: point `i` moves to position `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        let mut points = vec![Vec::new(); self.len()];
        for (i, &target) in perm.iter().enumerate() {
            points[target] = self.points[i].clone();
        }
        Ok(Self { m: self.m, points })
    }

    pub fn scaled(&self, factor: &T) -> Self {
        let points = self.points.iter().map(|p| p.iter().map(|c| c.clone() * factor.clone()).collect()).collect();
        Self { m: self.m, points }
    }

    pub fn translated(&self, offset: &[T]) -> Result<Self> {
        if offset.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: offset.len() });
        }
        let points =
            self.points.iter().map(|p| p.iter().zip(offset).map(|(a, b)| a.clone() + b.clone()).collect()).collect();
        Ok(Self { m: self.m, points })
    }

    pub fn to_float(&self) -> PointConfig<f64> {
        PointConfig { m: self.m, points: self.points.iter().map(|p| p.iter().map(Scalar::to_f64).collect()).collect() }
    }

    fn sq_dist(&self, i: usize, j: usize) -> T {
        self.points[i].iter().zip(&self.points[j]).fold(T::zero(), |acc, (a, b)| {
            let d = a.clone() - b.clone();
            acc + d.clone() * d
        })
    }
}

impl PointConfig<f64> {
    /// Exact copy of a float configuration (every finite double is a rational).
    pub fn to_exact(&self) -> Result<PointConfig<Rational>> {
        let points = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&c| {
                        crate::scalar::rational_from_f64(c)
                            .ok_or_else(|| Error::Parse(format!("non-finite coordinate {c}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointConfig { m: self.m, points })
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!("length {} for {n} labels", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
    }
    Ok(())
}

/// Unordered index pair `{i, j}` stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairKey {
    i: usize,
    j: usize,
}

impl PairKey {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            Ordering::Less => Ok(Self { i: a, j: b }),
            Ordering::Greater => Ok(Self { i: b, j: a }),
            Ordering::Equal => Err(Error::InvalidPair(a, b)),
        }
    }

    pub fn first(self) -> usize {
        self.i
    }

    pub fn second(self) -> usize {
        self.j
    }

    pub fn contains(self, k: usize) -> bool {
        self.i == k || self.j == k
    }

    pub fn meets(self, other: PairKey) -> bool {
        other.contains(self.i) || other.contains(self.j)
    }

    /// Position of the pair in the lexicographic list of all pairs of `0..n`.
    pub fn index(self, n: usize) -> usize {
        self.i * (2 * n - self.i - 1) / 2 + (self.j - self.i - 1)
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        assert!(index < pair_count(n), "pair index {index} out of range for n = {n}");
        let mut i = 0;
        let mut start = 0;
        while start + (n - i - 1) <= index {
            start += n - i - 1;
            i += 1;
        }
        Self { i, j: i + 1 + index - start }
    }
}

impl std::fmt::Display for PairKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{}}}", self.i + 1, self.j + 1)
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs of `0..n` in lexicographic order.
pub fn all_pairs(n: usize) -> impl Iterator<Item = PairKey> + Clone {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| PairKey { i, j }))
}

/// Symmetric `n x n` matrix of squared distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Builds a matrix from explicit rows. Rows must be square; symmetry and
    /// sign are checked by the consumers that need them.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDistanceMatrix("matrix is not square".into()));
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose pair `k` (lexicographic) has value `values[k]`.
    pub fn from_pair_values(n: usize, values: &[T]) -> Result<Self> {
        if values.len() != pair_count(n) {
            return Err(Error::WrongArgumentCount { expected: pair_count(n), got: values.len() });
        }
        let mut data = vec![T::zero(); n * n];
        for (pair, v) in all_pairs(n).zip(values) {
            data[pair.i * n + pair.j] = v.clone();
            data[pair.j * n + pair.i] = v.clone();
        }
        Ok(Self { n, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn pair(&self, p: PairKey) -> &T {
        self.get(p.i, p.j)
    }

    /// Upper-triangle values in lexicographic pair order.
    pub fn pair_values(&self) -> Vec<T> {
        all_pairs(self.n).map(|p| self.pair(p).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(<[T]>::to_vec).collect()
    }

    pub fn max_value(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| if *v > acc { v.clone() } else { acc })
    }
}

pub fn squared_distance_matrix<T: Scalar>(config: &PointConfig<T>) -> DistanceMatrix<T> {
    let n = config.len();
    let mut data = vec![T::zero(); n * n];
    for p in all_pairs(n) {
        let d = config.sq_dist(p.i, p.j);
        data[p.i * n + p.j] = d.clone();
        data[p.j * n + p.i] = d;
    }
    DistanceMatrix { n, data }
}

/// Sorted multiset of values with multiplicities: the "distribution" of a
/// list of distances (or of any other invariant values).
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMultiset<T> {
    entries: Vec<(T, usize)>,
    total: usize,
}

impl<T: Scalar> DistanceMultiset<T> {
    /// Sorts `values` and merges runs whose spread is within `merge_tol`
    /// (absolute; ignored in exact mode). A merged bin is represented by its
    /// largest member.
    pub fn from_values(mut values: Vec<T>, merge_tol: f64) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        let total = values.len();
        let mut entries: Vec<(T, usize)> = Vec::new();
        let mut bin_start: Option<T> = None;
        for v in values {
            match (entries.last_mut(), &bin_start) {
                (Some(last), Some(start)) if v.approx_eq(start, merge_tol) => {
                    last.0 = v;
                    last.1 += 1;
                }
                _ => {
                    bin_start = Some(v.clone());
                    entries.push((v, 1));
                }
            }
        }
        Self { entries, total }
    }

    pub fn entries(&self) -> &[(T, usize)] {
        &self.entries
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn has_repeats(&self) -> bool {
        self.entries.iter().any(|&(_, k)| k > 1)
    }

    /// Sorted values with multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries.iter().flat_map(|(v, k)| std::iter::repeat_n(v, *k))
    }
}

impl<T: Scalar> Serialize for DistanceMultiset<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            value: String,
            count: usize,
        }
        let entries: Vec<Entry> =
            self.entries.iter().map(|(v, k)| Entry { value: v.to_decimal_string(), count: *k }).collect();
        let mut s = serializer.serialize_struct("DistanceMultiset", 3)?;
        s.serialize_field("mode", &T::MODE)?;
        s.serialize_field("total", &self.total)?;
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

/// Distribution of the `C(n,2)` squared distances. Float values within
/// `DEFAULT_MERGE_TOLERANCE * d_max` share a bin.
pub fn distance_distribution<T: Scalar>(config: &PointConfig<T>) -> Result<DistanceMultiset<T>> {
    let values = pair_distances(config)?;
    let d_max = values.iter().map(Scalar::to_f64).fold(0.0, f64::max);
    Ok(DistanceMultiset::from_values(values, DEFAULT_MERGE_TOLERANCE * d_max))
}

/// As [`distance_distribution`] with an explicit absolute merge tolerance.
pub fn distance_distribution_with_tol<T: Scalar>(
    config: &PointConfig<T>,
    merge_tol: f64,
) -> Result<DistanceMultiset<T>> {
    Ok(DistanceMultiset::from_values(pair_distances(config)?, merge_tol))
}

fn pair_distances<T: Scalar>(config: &PointConfig<T>) -> Result<Vec<T>> {
    if config.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: config.len() });
    }
    Ok(squared_distance_matrix(config).pair_values())
}

/// Distribution of squared distances divided by the largest one. Invariant
/// under scaling; its largest value is exactly one.
pub fn rescaled_distribution<T: Scalar>(config: &PointConfig<T>) -> Result<DistanceMultiset<T>> {
    let values = pair_distances(config)?;
    let d_max = values.iter().fold(T::zero(), |acc, v| if *v > acc { v.clone() } else { acc });
    if d_max.is_zero() {
        return Err(Error::DegenerateScale);
    }
    let rescaled = values.into_iter().map(|v| v / d_max.clone()).collect();
    Ok(DistanceMultiset::from_values(rescaled, DEFAULT_MERGE_TOLERANCE))
}

/// Multiset equality: same total and sorted values pairwise within `tol`
/// (exact equality in exact mode).
pub fn same_distribution<T: Scalar>(a: &DistanceMultiset<T>, b: &DistanceMultiset<T>, tol: f64) -> bool {
    a.total == b.total && a.expanded().zip(b.expanded()).all(|(x, y)| x.approx_eq(y, tol))
}

/// True iff two of the pairwise squared distances coincide (within `tol`).
pub fn has_repeated_distances<T: Scalar>(config: &PointConfig<T>, tol: f64) -> Result<bool> {
    let mut values = pair_distances(config)?;
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(values.windows(2).any(|w| w[0].approx_eq(&w[1], tol)))
}

/// `p -> M p + T` with `M` orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidMotion<T> {
    matrix: Vec<Vec<T>>,
    translation: Vec<T>,
}

impl<T: Scalar> RigidMotion<T> {
    /// Validates `MᵀM = I`, exactly in exact mode and within `tol` per entry
    /// in float mode.
    pub fn new(matrix: Vec<Vec<T>>, translation: Vec<T>, tol: f64) -> Result<Self> {
        let m = matrix.len();
        if matrix.iter().any(|r| r.len() != m) || translation.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: translation.len() });
        }
        let gram = linalg::transpose_mul(&matrix);
        let orthogonal = gram.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| {
                let target = if i == j { T::one() } else { T::zero() };
                v.approx_eq(&target, tol)
            })
        });
        if !orthogonal {
            return Err(Error::NotOrthogonal);
        }
        Ok(Self { matrix, translation })
    }

    pub fn identity(m: usize) -> Self {
        Self { matrix: linalg::identity(m), translation: vec![T::zero(); m] }
    }

    /// Reflection negating coordinate `axis`.
    pub fn reflection(m: usize, axis: usize) -> Self {
        let mut matrix = linalg::identity::<T>(m);
        matrix[axis][axis] = -T::one();
        Self { matrix, translation: vec![T::zero(); m] }
    }

    pub fn with_translation(mut self, translation: Vec<T>) -> Result<Self> {
        if translation.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: translation.len() });
        }
        self.translation = translation;
        Ok(self)
    }

    /// Composition `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: inner.dim() });
        }
        let m = self.dim();
        let matrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..m).fold(T::zero(), |acc, k| acc + self.matrix[i][k].clone() * inner.matrix[k][j].clone())
                    })
                    .collect()
            })
            .collect();
        let translation = self.apply_point(&inner.translation);
        Ok(Self { matrix, translation })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[T] {
        &self.translation
    }

    /// Sign of `det(M)`: `+1` for proper motions, `-1` for improper ones.
    pub fn orientation(&self) -> i8 {
        if linalg::det(self.matrix.clone()).to_f64() < 0.0 {
            -1
        } else {
            1
        }
    }

    pub fn apply_point(&self, p: &[T]) -> Vec<T> {
        linalg::mat_vec(&self.matrix, p).into_iter().zip(&self.translation).map(|(a, b)| a + b.clone()).collect()
    }
}

impl RigidMotion<Rational> {
    /// Exact planar rotation from the Pythagorean parametrisation
    /// `cos = (a²-b²)/(a²+b²)`, `sin = 2ab/(a²+b²)`.
    pub fn rational_rotation_2d(a: i64, b: i64) -> Result<Self> {
        let (a, b) = (Rational::from_i64(a), Rational::from_i64(b));
        let norm = a.clone() * a.clone() + b.clone() * b.clone();
        if norm.is_zero() {
            return Err(Error::NotOrthogonal);
        }
        let c = (a.clone() * a.clone() - b.clone() * b.clone()) / norm.clone();
        let s = (Rational::from_i64(2) * a * b) / norm;
        Self::new(vec![vec![c.clone(), -s.clone()], vec![s, c]], vec![Rational::zero(), Rational::zero()], 0.0)
    }
}

impl RigidMotion<f64> {
    pub fn rotation_2d(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { matrix: vec![vec![c, -s], vec![s, c]], translation: vec![0.0, 0.0] }
    }
}

pub fn apply_rigid_motion<T: Scalar>(config: &PointConfig<T>, motion: &RigidMotion<T>) -> Result<PointConfig<T>> {
    if motion.dim() != config.dim() {
        return Err(Error::DimensionMismatch { expected: config.dim(), got: motion.dim() });
    }
    let points = config.points.iter().map(|p| motion.apply_point(p)).collect();
    Ok(PointConfig { m: config.m, points })
}

/// Witness of congruence: `M p_i + T = q_{relabeling[i]}`.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub relabeling: Vec<usize>,
    pub motion: RigidMotion<f64>,
    pub max_residual: f64,
}

/// Searches relabelings in lexicographic order for one under which a
/// least-squares orthogonal fit maps `p` onto `q` with every residual within
/// `tol`. Reflections are allowed. Partial relabelings are pruned by
/// comparing pairwise distances (a valid motion changes them by at most
/// `2 tol`), so the first hit is the lexicographically smallest answer.
///
/// Meant as a small-`n` oracle: the worst case visits all `n!` relabelings.
pub fn congruent<T: Scalar>(p: &PointConfig<T>, q: &PointConfig<T>, tol: f64) -> Option<Congruence> {
    if p.dim() != q.dim() || p.len() != q.len() {
        return None;
    }
    let p = p.to_float();
    let q = q.to_float();
    let n = p.len();
    let dist = |c: &PointConfig<f64>, i: usize, j: usize| c.sq_dist(i, j).sqrt();
    let slack = 2.0 * tol + 1e-12;

    let mut assignment: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn search(
        p: &PointConfig<f64>,
        q: &PointConfig<f64>,
        tol: f64,
        slack: f64,
        dist: &dyn Fn(&PointConfig<f64>, usize, usize) -> f64,
        assignment: &mut Vec<usize>,
        used: &mut [bool],
    ) -> Option<Congruence> {
        let n = p.len();
        let k = assignment.len();
        if k == n {
            return procrustes_fit(p, q, assignment, tol);
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let consistent =
                assignment.iter().enumerate().all(|(i, &qi)| (dist(p, i, k) - dist(q, qi, cand)).abs() <= slack);
            if !consistent {
                continue;
            }
            used[cand] = true;
            assignment.push(cand);
            if let Some(found) = search(p, q, tol, slack, dist, assignment, used) {
                return Some(found);
            }
            assignment.pop();
            used[cand] = false;
        }
        None
    }

    search(&p, &q, tol, slack, &dist, &mut assignment, &mut used)
}

fn procrustes_fit(p: &PointConfig<f64>, q: &PointConfig<f64>, relabeling: &[usize], tol: f64) -> Option<Congruence> {
    let (n, m) = (p.len(), p.dim());
    let centroid = |c: &PointConfig<f64>| {
        let mut s = DVector::<f64>::zeros(m);
        for pt in c.points() {
            s += DVector::from_column_slice(pt);
        }
        s / n as f64
    };
    let cp = centroid(p);
    let cq = centroid(q);
    let mut h = DMatrix::<f64>::zeros(m, m);
    for (i, &qi) in relabeling.iter().enumerate() {
        let a = DVector::from_column_slice(p.point(i)) - &cp;
        let b = DVector::from_column_slice(q.point(qi)) - &cq;
        h += a * b.transpose();
    }
    let svd = h.svd(true, true);
    let rot = svd.v_t?.transpose() * svd.u?.transpose();
    let t = &cq - &rot * &cp;
    let mut max_residual: f64 = 0.0;
    for (i, &qi) in relabeling.iter().enumerate() {
        let image = &rot * DVector::from_column_slice(p.point(i)) + &t;
        let r = (image - DVector::from_column_slice(q.point(qi))).norm();
        max_residual = max_residual.max(r);
    }
    if max_residual > tol {
        return None;
    }
    let matrix = (0..m).map(|i| (0..m).map(|j| rot[(i, j)]).collect()).collect();
    let motion = RigidMotion { matrix, translation: t.iter().copied().collect() };
    Some(Congruence { relabeling: relabeling.to_vec(), motion, max_residual })
}
