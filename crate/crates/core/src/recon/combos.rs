//! Admissible index tuples of the reconstructibility test and their counts.
//!
//! A tuple fixes an ordered triple `(i0, i1, i2)` of distinct points and then
//! an ordered selection of further pairs, all distinct from each other and
//! from `{i0,i1}` and `{i0,i2}`. The planar test selects four middle pairs;
//! the `R^m` test selects `C(m+2,2) - 2`. Iteration order is canonical:
//! `i0`, `i1`, `i2` ascending, then each middle pair in lexicographic order,
//! outermost first.

use crate::error::{Error, Result};
use crate::geometry::{all_pairs, pair_count, PairKey};
use crate::invariants::gm_arity;

/// One admissible tuple. `pairs()` lists the `k` pairs in argument order,
/// starting with `{i0,i1}` and ending with `{i0,i2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComboTuple {
    pub i0: usize,
    pub i1: usize,
    pub i2: usize,
    pub middle: Vec<PairKey>,
}

impl ComboTuple {
    pub fn first_pair(&self) -> PairKey {
        PairKey::new(self.i0, self.i1).expect("distinct indices")
    }

    pub fn last_pair(&self) -> PairKey {
        PairKey::new(self.i0, self.i2).expect("distinct indices")
    }

    pub fn pairs(&self) -> Vec<PairKey> {
        let mut all = Vec::with_capacity(self.middle.len() + 2);
        all.push(self.first_pair());
        all.extend(self.middle.iter().copied());
        all.push(self.last_pair());
        all
    }
}

/// Ordered triples of distinct indices in canonical order.
pub(crate) fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) * n.saturating_sub(2));
    for i0 in 0..n {
        for i1 in (0..n).filter(|&i| i != i0) {
            for i2 in (0..n).filter(|&i| i != i0 && i != i1) {
                out.push((i0, i1, i2));
            }
        }
    }
    out
}

/// Pair indices other than `{i0,i1}` and `{i0,i2}`, ascending.
pub(crate) fn remaining_pairs(n: usize, (i0, i1, i2): (usize, usize, usize)) -> Vec<usize> {
    let a = PairKey::new(i0, i1).expect("distinct").index(n);
    let b = PairKey::new(i0, i2).expect("distinct").index(n);
    (0..pair_count(n)).filter(|&p| p != a && p != b).collect()
}

/// Number of middle pairs for dimension `m`.
pub(crate) fn middle_len(m: usize) -> usize {
    gm_arity(m) - 2
}

pub fn count_combinations(n: usize) -> Result<u128> {
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    count_combinations_md(n, 2)
}

/// `n(n-1)(n-2) · Π_{j=2}^{k-1} (C(n,2) - j)` with `k = C(m+2,2)`.
pub fn count_combinations_md(n: usize, m: usize) -> Result<u128> {
    if m == 0 {
        return Err(Error::UnsupportedDimension { required: 1, got: 0 });
    }
    if n < m + 2 {
        return Err(Error::TooFewPoints { needed: m + 2, got: n });
    }
    let c = pair_count(n) as u128;
    let n = n as u128;
    let k = gm_arity(m) as u128;
    Ok((2..k).fold(n * (n - 1) * (n - 2), |acc, j| acc * (c - j)))
}

/// Tuples sharing one `(i0, i1, i2)` prefix.
pub(crate) fn block_size(n: usize, m: usize) -> u128 {
    let c = pair_count(n) as u128;
    (2..gm_arity(m) as u128).fold(1, |acc, j| acc * (c - j))
}

/// Ordered selections of `r` distinct positions out of `len`, lexicographic.
#[derive(Clone, Debug)]
pub(crate) struct Arrangements {
    len: usize,
    idx: Vec<usize>,
    used: Vec<bool>,
    fresh: bool,
    done: bool,
}

impl Arrangements {
    pub(crate) fn new(len: usize, r: usize) -> Self {
        let mut used = vec![false; len];
        let done = r > len;
        let idx: Vec<usize> = if done { Vec::new() } else { (0..r).collect() };
        for &i in &idx {
            used[i] = true;
        }
        Self { len, idx, used, fresh: true, done }
    }

    /// Advances to the next selection; returns the current one.
    pub(crate) fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(&self.idx);
        }
        let r = self.idx.len();
        let mut pos = r;
        while pos > 0 {
            pos -= 1;
            let cur = self.idx[pos];
            self.used[cur] = false;
            if let Some(next) = (cur + 1..self.len).find(|&c| !self.used[c]) {
                self.idx[pos] = next;
                self.used[next] = true;
                // refill the tail with the smallest free positions
                let mut c = 0;
                for slot in pos + 1..r {
                    while self.used[c] {
                        c += 1;
                    }
                    self.idx[slot] = c;
                    self.used[c] = true;
                }
                return Some(&self.idx);
            }
        }
        self.done = true;
        None
    }
}

/// Current triple, its remaining pairs and the selection over them.
type Block = ((usize, usize, usize), Vec<usize>, Arrangements);

/// Canonical stream of admissible tuples for `n` points in `R^m`.
pub struct Combinations {
    n: usize,
    m: usize,
    keys: Vec<PairKey>,
    triples: std::vec::IntoIter<(usize, usize, usize)>,
    current: Option<Block>,
}

impl Iterator for Combinations {
    type Item = ComboTuple;

    fn next(&mut self) -> Option<ComboTuple> {
        loop {
            if let Some((triple, rest, arr)) = &mut self.current {
                if let Some(sel) = arr.advance() {
                    let middle = sel.iter().map(|&s| self.keys[rest[s]]).collect();
                    return Some(ComboTuple { i0: triple.0, i1: triple.1, i2: triple.2, middle });
                }
            }
            let triple = self.triples.next()?;
            let rest = remaining_pairs(self.n, triple);
            let arr = Arrangements::new(rest.len(), middle_len(self.m));
            self.current = Some((triple, rest, arr));
        }
    }
}

/// Planar tuples (four middle pairs).
pub fn enumerate_combinations(n: usize) -> Result<Combinations> {
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    enumerate_combinations_md(n, 2)
}

pub fn enumerate_combinations_md(n: usize, m: usize) -> Result<Combinations> {
    count_combinations_md(n, m)?;
    Ok(Combinations { n, m, keys: all_pairs(n).collect(), triples: triples(n).into_iter(), current: None })
}

/// Counts the planar tuples by running the selection odometer without
/// materialising pair keys. Used to check the closed form at larger `n`.
pub fn count_by_iteration(n: usize, m: usize) -> Result<u128> {
    count_combinations_md(n, m)?;
    let mut total = 0u128;
    for triple in triples(n) {
        let rest = remaining_pairs(n, triple);
        let mut arr = Arrangements::new(rest.len(), middle_len(m));
        while arr.advance().is_some() {
            total += 1;
        }
    }
    Ok(total)
}
