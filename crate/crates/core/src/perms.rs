//! Pair permutations and relabelings.
//!
//! A pair permutation is a bijection of the `C(n,2)` unordered index pairs.
//! Those induced by a permutation of the points are relabelings; for
//! `n != 4` they are exactly the pair permutations that map pairs sharing an
//! index to pairs sharing an index. At `n = 4` that adjacency condition
//! admits extra permutations, and a triple-intersection condition is needed
//! in addition.

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{
    all_pairs, check_permutation, pair_count, squared_distance_matrix, DistanceMatrix, PairKey, PointConfig,
};
use crate::linalg::psd_rank;
use crate::scalar::Scalar;

/// Largest `n` for which all `C(n,2)!` pair permutations are enumerated.
pub const MAX_ENUMERATION_N: usize = 5;

/// Permutation `π` of the point labels, stored zero-based: `i ↦ images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relabeling {
    images: Vec<usize>,
}

impl Relabeling {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        check_permutation(&images, images.len())?;
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Relabeling) -> Result<Relabeling> {
        if self.len() != inner.len() {
            return Err(Error::CountMismatch { left: self.len(), right: inner.len() });
        }
        Ok(Self { images: inner.images.iter().map(|&i| self.images[i]).collect() })
    }

    /// All `n!` relabelings in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Relabeling> {
        LexPermutations::new(n).map(|images| Relabeling { images })
    }
}

/// Bijection of the pairs of `0..n`, stored by lexicographic pair index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPermutation {
    n: usize,
    images: Vec<usize>,
}

impl PairPermutation {
    /// `images[k]` is the image of the `k`-th pair in lexicographic order.
    pub fn new(n: usize, images: Vec<PairKey>) -> Result<Self> {
        if images.iter().any(|p| p.second() >= n) {
            return Err(Error::InvalidPermutation(format!("pair outside 0..{n}")));
        }
        Self::from_indices(n, images.into_iter().map(|p| p.index(n)).collect())
    }

    pub fn from_indices(n: usize, images: Vec<usize>) -> Result<Self> {
        if images.len() != pair_count(n) {
            return Err(Error::InvalidPermutation(format!("{} images for {} pairs", images.len(), pair_count(n))));
        }
        check_permutation(&images, images.len())?;
        Ok(Self { n, images })
    }

    /// Builds a permutation from `(pair, image)` assignments given with
    /// one-based labels, e.g. `[([1,4],[2,3]), ...]`. Pairs not mentioned
    /// are fixed.
    pub fn from_assignments(n: usize, assignments: &[([usize; 2], [usize; 2])]) -> Result<Self> {
        let key = |[a, b]: [usize; 2]| -> Result<PairKey> {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidPair(a, b));
            }
            PairKey::new(a - 1, b - 1)
        };
        let mut images: Vec<usize> = (0..pair_count(n)).collect();
        for &(from, to) in assignments {
            images[key(from)?.index(n)] = key(to)?.index(n);
        }
        Self::from_indices(n, images)
    }

    pub fn identity(n: usize) -> Self {
        Self { n, images: (0..pair_count(n)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image(&self, p: PairKey) -> PairKey {
        PairKey::from_index(self.images[p.index(self.n)], self.n)
    }

    pub fn image_indices(&self) -> &[usize] {
        &self.images
    }

    /// `(pair, image)` for every pair, lexicographic.
    pub fn assignments(&self) -> Vec<(PairKey, PairKey)> {
        let keys: Vec<PairKey> = all_pairs(self.n).collect();
        keys.iter().map(|&p| (p, keys[self.images[p.index(self.n)]])).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PairPermutation) -> Result<PairPermutation> {
        if self.n != inner.n {
            return Err(Error::CountMismatch { left: self.n, right: inner.n });
        }
        Ok(Self { n: self.n, images: inner.images.iter().map(|&k| self.images[k]).collect() })
    }
}

/// One-based list of `[[i, j], [i', j']]` assignments.
impl Serialize for PairPermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let assignments = self.assignments();
        let mut seq = serializer.serialize_seq(Some(assignments.len()))?;
        for (p, q) in assignments {
            seq.serialize_element(&[[p.first() + 1, p.second() + 1], [q.first() + 1, q.second() + 1]])?;
        }
        seq.end()
    }
}

/// `φ·{i,j} = {π(i),π(j)}`.
pub fn induced_pair_permutation(pi: &Relabeling) -> PairPermutation {
    let n = pi.len();
    let images = all_pairs(n)
        .map(|p| PairKey::new(pi.apply(p.first()), pi.apply(p.second())).expect("bijection").index(n))
        .collect();
    PairPermutation { n, images }
}

/// Pairs of pair indices that share a point, each listed once.
fn adjacent_pairs(n: usize) -> Vec<(usize, usize)> {
    let keys: Vec<PairKey> = all_pairs(n).collect();
    let mut out = Vec::new();
    for (a, p) in keys.iter().enumerate() {
        for (b, q) in keys.iter().enumerate().skip(a + 1) {
            if p.meets(*q) {
                out.push((a, b));
            }
        }
    }
    out
}

fn meets_table(n: usize) -> Vec<Vec<bool>> {
    let keys: Vec<PairKey> = all_pairs(n).collect();
    keys.iter().map(|p| keys.iter().map(|q| p.meets(*q)).collect()).collect()
}

/// Adjacency test: `φ·{i,j} ∩ φ·{i,k} ≠ ∅` for all distinct `i, j, k`.
pub fn satisfies_adjacency(phi: &PairPermutation) -> bool {
    AdjacencyChecker::new(phi.n).check(phi)
}

/// Precomputed tables for running the adjacency test many times at one `n`.
#[derive(Clone, Debug)]
pub struct AdjacencyChecker {
    n: usize,
    adjacent: Vec<(usize, usize)>,
    meets: Vec<Vec<bool>>,
}

impl AdjacencyChecker {
    pub fn new(n: usize) -> Self {
        Self { n, adjacent: adjacent_pairs(n), meets: meets_table(n) }
    }

    pub fn check(&self, phi: &PairPermutation) -> bool {
        debug_assert_eq!(phi.n, self.n);
        self.adjacent.iter().all(|&(a, b)| self.meets[phi.images[a]][phi.images[b]])
    }
}

/// The additional condition at `n = 4`: for every index `i` with complement
/// `{a, b, c}`, the images of `{i,a}`, `{i,b}`, `{i,c}` share a point.
pub fn satisfies_n4_extra(phi: &PairPermutation) -> Result<bool> {
    if phi.n != 4 {
        return Err(Error::WrongPointCount { required: 4, got: phi.n });
    }
    Ok((0..4).all(|i| {
        let star: Vec<PairKey> =
            (0..4).filter(|&j| j != i).map(|j| phi.image(PairKey::new(i, j).expect("distinct"))).collect();
        (0..4).any(|x| star.iter().all(|p| p.contains(x)))
    }))
}

/// The relabeling inducing `φ`, if there is one.
///
/// Each label `i` is sent to the single point common to all images of pairs
/// containing `i`; the candidate is then checked against `φ`.
pub fn as_relabeling(phi: &PairPermutation) -> Option<Relabeling> {
    let n = phi.n;
    if n <= 2 {
        // the lone pair (if any) is fixed and the identity induces it
        return Some(Relabeling::identity(n));
    }
    let mut sigma = Vec::with_capacity(n);
    for i in 0..n {
        let star: Vec<PairKey> =
            (0..n).filter(|&j| j != i).map(|j| phi.image(PairKey::new(i, j).expect("distinct"))).collect();
        let mut common = (0..n).filter(|&x| star.iter().all(|p| p.contains(x)));
        let s = common.next()?;
        if common.next().is_some() {
            return None;
        }
        sigma.push(s);
    }
    let pi = Relabeling::new(sigma).ok()?;
    (induced_pair_permutation(&pi) == *phi).then_some(pi)
}

/// The `n = 4` pair permutation that satisfies adjacency without being a
/// relabeling: `{1,4} ↔ {2,3}`, all other pairs fixed.
pub fn counterexample_n4() -> PairPermutation {
    PairPermutation::from_assignments(4, &[([1, 4], [2, 3]), ([2, 3], [1, 4])]).expect("valid")
}

/// Lexicographic permutations of `0..len` (next-permutation algorithm).
#[derive(Clone, Debug)]
struct LexPermutations {
    current: Vec<usize>,
    done: bool,
}

impl LexPermutations {
    fn new(len: usize) -> Self {
        Self { current: (0..len).collect(), done: false }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Iterator for LexPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = !next_permutation(&mut self.current);
        Some(out)
    }
}

/// Every pair permutation of `n <= 5` points, in lexicographic order of the
/// image vectors.
pub fn enumerate_pair_permutations(n: usize) -> Result<impl Iterator<Item = PairPermutation>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge(format!(
            "{}! pair permutations for n = {n}; enumeration is limited to n <= {MAX_ENUMERATION_N}",
            pair_count(n)
        )));
    }
    Ok(LexPermutations::new(pair_count(n)).map(move |images| PairPermutation { n, images }))
}

/// Pair permutations `φ` with `d_Q{i,j} = d_P(φ·{i,j})` for every pair.
///
/// Built group by group: pairs of `Q` with a given distance are mapped onto
/// the pairs of `P` with the same distance in every possible way, so the
/// number of candidates is the product of the factorials of the
/// multiplicities. Float values match within `tol` (ignored in exact mode).
/// Different distributions give an empty result.
pub fn distribution_preserving_permutations<T: Scalar>(
    p: &PointConfig<T>,
    q: &PointConfig<T>,
    tol: f64,
) -> Result<DistributionPreserving> {
    if p.len() != q.len() {
        return Err(Error::CountMismatch { left: p.len(), right: q.len() });
    }
    let n = p.len();
    let (dp, dq) = (squared_distance_matrix(p).pair_values(), squared_distance_matrix(q).pair_values());
    let mut order: Vec<usize> = (0..dp.len()).collect();
    order.sort_by(|&a, &b| dp[a].partial_cmp(&dp[b]).unwrap_or(std::cmp::Ordering::Equal));

    // bins of P pairs with (nearly) equal distance
    let mut bins: Vec<Vec<usize>> = Vec::new();
    let mut start = None;
    for k in order {
        match start {
            Some(s) if dp[k].approx_eq(&dp[s], tol) => bins.last_mut().expect("open bin").push(k),
            _ => {
                start = Some(k);
                bins.push(vec![k]);
            }
        }
    }
    let mut sources: Vec<Vec<usize>> = vec![Vec::new(); bins.len()];
    let mut consistent = true;
    for (k, v) in dq.iter().enumerate() {
        match bins.iter().position(|b| v.approx_eq(&dp[b[0]], tol)) {
            Some(b) => sources[b].push(k),
            None => consistent = false,
        }
    }
    consistent &= bins.iter().zip(&sources).all(|(b, s)| b.len() == s.len());
    let groups: Vec<(Vec<usize>, Vec<usize>)> = sources.into_iter().zip(bins).collect();
    let states = groups.iter().map(|(s, _)| (0..s.len()).collect()).collect();
    Ok(DistributionPreserving { n, groups, states, done: !consistent })
}

/// Iterator returned by [`distribution_preserving_permutations`].
#[derive(Clone, Debug)]
pub struct DistributionPreserving {
    n: usize,
    /// `(Q pairs, P pairs)` per distance value.
    groups: Vec<(Vec<usize>, Vec<usize>)>,
    /// Current arrangement within each group.
    states: Vec<Vec<usize>>,
    done: bool,
}

impl Iterator for DistributionPreserving {
    type Item = PairPermutation;

    fn next(&mut self) -> Option<PairPermutation> {
        if self.done {
            return None;
        }
        let mut images = vec![0; pair_count(self.n)];
        for ((sources, targets), state) in self.groups.iter().zip(&self.states) {
            for (&s, &t) in sources.iter().zip(state) {
                images[s] = targets[t];
            }
        }
        // odometer over the groups, last group fastest
        self.done = true;
        for state in self.states.iter_mut().rev() {
            if next_permutation(state) {
                self.done = false;
                break;
            }
            state.sort_unstable();
        }
        Some(PairPermutation { n: self.n, images })
    }
}

/// Whether a matrix of squared distances is realized by points in `R^m`.
///
/// Uses the Gram matrix based at point 0,
/// `G(a,b) = (d(0,a) + d(0,b) - d(a,b)) / 2` for `a, b >= 1`, which must be
/// positive semidefinite of rank at most `m`. `tol` is relative to the
/// largest Gram diagonal entry (float mode only).
pub fn realizable_in_dim<T: Scalar>(d: &DistanceMatrix<T>, m: usize, tol: f64) -> Result<bool> {
    let n = d.len();
    let abs_tol = tol * d.max_value().to_f64().abs().max(1.0);
    for i in 0..n {
        if !d.get(i, i).is_negligible(abs_tol) {
            return Err(Error::InvalidDistanceMatrix(format!("non-zero diagonal entry at {}", i + 1)));
        }
        for j in 0..n {
            if d.get(i, j).is_negative() && !d.get(i, j).is_negligible(abs_tol) {
                return Err(Error::InvalidDistanceMatrix(format!("negative entry at ({}, {})", i + 1, j + 1)));
            }
            if !d.get(i, j).approx_eq(d.get(j, i), abs_tol) {
                return Err(Error::InvalidDistanceMatrix(format!("asymmetric at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    if n <= 1 {
        return Ok(true);
    }
    let two = T::from_i64(2);
    let gram = (1..n)
        .map(|a| {
            (1..n).map(|b| (d.get(0, a).clone() + d.get(0, b).clone() - d.get(a, b).clone()) / two.clone()).collect()
        })
        .collect();
    Ok(psd_rank(gram, tol).is_some_and(|r| r <= m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn pk(a: usize, b: usize) -> PairKey {
        PairKey::new(a - 1, b - 1).unwrap()
    }

    #[test]
    fn transposition_expands_as_expected() {
        let phi = induced_pair_permutation(&Relabeling::new(vec![1, 0, 2, 3]).unwrap());
        assert_eq!(phi.image(pk(1, 2)), pk(1, 2));
        assert_eq!(phi.image(pk(3, 4)), pk(3, 4));
        assert_eq!(phi.image(pk(1, 3)), pk(2, 3));
        assert_eq!(phi.image(pk(2, 4)), pk(1, 4));
    }

    #[test]
    fn induction_is_a_homomorphism() {
        let pis: Vec<Relabeling> = Relabeling::all(4).collect();
        for a in &pis {
            for b in pis.iter().step_by(5) {
                let lhs = induced_pair_permutation(&a.compose(b).unwrap());
                let rhs = induced_pair_permutation(a).compose(&induced_pair_permutation(b)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn counterexample_properties() {
        let phi = counterexample_n4();
        assert_eq!(phi.image(pk(1, 4)), pk(2, 3));
        assert_eq!(phi.image(pk(2, 3)), pk(1, 4));
        assert_eq!(phi.image(pk(2, 4)), pk(2, 4));
        assert!(satisfies_adjacency(&phi));
        assert!(!satisfies_n4_extra(&phi).unwrap());
        assert!(as_relabeling(&phi).is_none());
    }

    #[test]
    fn n4_extra_rejects_other_sizes() {
        assert!(satisfies_n4_extra(&PairPermutation::identity(5)).is_err());
        assert!(satisfies_n4_extra(&PairPermutation::identity(4)).unwrap());
    }

    #[test]
    fn swap_of_disjoint_pairs_breaks_adjacency() {
        let phi = PairPermutation::from_assignments(5, &[([1, 2], [3, 4]), ([3, 4], [1, 2])]).unwrap();
        assert!(!satisfies_adjacency(&phi));
        assert!(as_relabeling(&phi).is_none());
    }

    #[test]
    fn small_n_everything_is_a_relabeling() {
        let all: Vec<_> = enumerate_pair_permutations(3).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|phi| as_relabeling(phi).is_some() && satisfies_adjacency(phi)));
        assert_eq!(enumerate_pair_permutations(4).unwrap().count(), 720);
        assert!(enumerate_pair_permutations(6).is_err());
        assert_eq!(as_relabeling(&PairPermutation::identity(2)), Some(Relabeling::identity(2)));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<_> = enumerate_pair_permutations(3).unwrap().map(|p| p.images).collect();
        assert_eq!(all, vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
    }

    #[test]
    fn serializes_one_based() {
        let json = serde_json::to_value(counterexample_n4()).unwrap();
        assert_eq!(json[2], serde_json::json!([[1, 4], [2, 3]]));
        assert_eq!(json[0], serde_json::json!([[1, 2], [1, 2]]));
    }

    #[test]
    fn square_has_48_value_consistent_candidates() {
        let sq = PointConfig::<Rational>::from_integers(&[[0, 0], [1, 0], [1, 1], [0, 1]]).unwrap();
        let all: Vec<_> = distribution_preserving_permutations(&sq, &sq, 0.0).unwrap().collect();
        assert_eq!(all.len(), 48);
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), 48);
        // the dihedral group of the square
        assert_eq!(all.iter().filter(|phi| as_relabeling(phi).is_some()).count(), 8);
    }

    #[test]
    fn different_distributions_give_nothing() {
        let sq = PointConfig::<Rational>::from_integers(&[[0, 0], [1, 0], [1, 1], [0, 1]]).unwrap();
        let other = PointConfig::<Rational>::from_integers(&[[0, 0], [2, 0], [1, 1], [0, 1]]).unwrap();
        assert_eq!(distribution_preserving_permutations(&sq, &other, 0.0).unwrap().count(), 0);
    }

    #[test]
    fn realizability() {
        let sq = PointConfig::<Rational>::from_integers(&[[0, 0], [1, 0], [1, 1], [0, 1]]).unwrap();
        assert!(realizable_in_dim(&squared_distance_matrix(&sq), 2, 0.0).unwrap());
        assert!(!realizable_in_dim(&squared_distance_matrix(&sq), 1, 0.0).unwrap());
        let ones = DistanceMatrix::from_pair_values(4, &vec![Rational::from_i64(1); 6]).unwrap();
        assert!(!realizable_in_dim(&ones, 2, 0.0).unwrap());
        assert!(realizable_in_dim(&ones, 3, 0.0).unwrap());
        // violates the triangle inequality
        let bad = DistanceMatrix::from_pair_values(3, &[1.0, 1.0, 9.0]).unwrap();
        assert!(!realizable_in_dim(&bad, 2, 1e-12).unwrap());
        let neg = DistanceMatrix::from_pair_values(3, &[1.0, -1.0, 1.0]).unwrap();
        assert!(realizable_in_dim(&neg, 2, 1e-12).is_err());
        let asym = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(realizable_in_dim(&asym, 2, 1e-12).is_err());
    }
}
