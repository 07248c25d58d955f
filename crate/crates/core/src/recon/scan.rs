//! Hot loops of the test.
//!
//! Work is split into blocks, one per ordered triple `(i0, i1, i2)`. Blocks
//! may run in parallel; results are merged in block order, so the reported
//! witness, minimum and count never depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::combos::{remaining_pairs, triples, Arrangements};
use crate::geometry::pair_count;
use crate::invariants::{abstract_pair_index, gm_arity, gm_matrix};
use crate::linalg;
use crate::scalar::{Lifted, Ring, Scalar, ScanInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    /// The planar cubic `g`, evaluated as a quadratic in its fifth argument.
    Planar,
    /// The `(m+1) x (m+1)` determinant `g_m`.
    General(usize),
}

impl Relation {
    pub(crate) fn dim(self) -> usize {
        match self {
            Relation::Planar => 2,
            Relation::General(m) => m,
        }
    }

    pub(crate) fn degree(self) -> u32 {
        self.dim() as u32 + 1
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Hit<K> {
    pub block: usize,
    /// Zero-based position inside the block.
    pub offset: u64,
    /// Pair indices in argument order.
    pub pairs: Vec<usize>,
    pub g: K,
}

#[derive(Clone, Debug)]
pub(crate) struct BlockResult<K> {
    pub hit: Option<Hit<K>>,
    pub min_abs: Option<K>,
    pub scanned: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct ScanOutcome<K> {
    pub first_hit: Option<Hit<K>>,
    pub min_abs: Option<K>,
    pub checked: u128,
}

impl<K> ScanOutcome<K> {
    fn map<L>(self, f: impl Fn(K) -> L) -> ScanOutcome<L> {
        ScanOutcome {
            first_hit: self.first_hit.map(|h| Hit { block: h.block, offset: h.offset, pairs: h.pairs, g: f(h.g) }),
            min_abs: self.min_abs.map(&f),
            checked: self.checked,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ScanParams {
    pub relation: Relation,
    pub threshold: f64,
    pub stop_at_first: bool,
    pub parallel: bool,
}

fn keep_min<K: Ring>(slot: &mut Option<K>, candidate: K) {
    if slot.as_ref().is_none_or(|m| candidate < *m) {
        *slot = Some(candidate);
    }
}

pub(crate) fn run_blocks<K, F>(blocks: usize, parallel: bool, stop_at_first: bool, scan: F) -> ScanOutcome<K>
where
    K: Ring,
    F: Fn(usize) -> BlockResult<K> + Sync,
{
    let best = AtomicUsize::new(usize::MAX);
    let run = |b: usize| -> Option<BlockResult<K>> {
        if stop_at_first && b > best.load(Ordering::Relaxed) {
            return None;
        }
        let r = scan(b);
        if stop_at_first && r.hit.is_some() {
            best.fetch_min(b, Ordering::Relaxed);
        }
        Some(r)
    };
    let results: Vec<Option<BlockResult<K>>> =
        if parallel { (0..blocks).into_par_iter().map(run).collect() } else { (0..blocks).map(run).collect() };

    let mut out = ScanOutcome { first_hit: None, min_abs: None, checked: 0 };
    for r in results {
        // skipped blocks only ever follow the first hit
        let Some(r) = r else { break };
        if let Some(m) = r.min_abs {
            keep_min(&mut out.min_abs, m);
        }
        out.checked += u128::from(r.scanned);
        if out.first_hit.is_none() {
            if let Some(hit) = r.hit {
                out.first_hit = Some(hit);
                if stop_at_first {
                    break;
                }
            }
        }
    }
    out
}

/// Coefficients of `g` as a quadratic in its fifth argument `Y`:
/// `g = (c2 Y + c1) Y + c0`.
#[inline]
pub(crate) fn g_coefficients<K: Ring>(u: &K, v: &K, w: &K, x: &K, z: &K) -> (K, K, K) {
    let two = K::one() + K::one();
    let (u, v, w, x, z) = (u.clone(), v.clone(), w.clone(), x.clone(), z.clone());
    let c2 = two.clone() * v.clone();
    let c1 = two.clone()
        * (u.clone() * (w.clone() - v.clone() - z.clone())
            + v.clone() * (v.clone() - x.clone() - w.clone() - z.clone())
            + x.clone() * (z.clone() - w.clone()));
    let c0 = two
        * (u.clone()
            * (u.clone() * z.clone() + v.clone() * x.clone()
                - v.clone() * z.clone()
                - x.clone() * w.clone()
                - x.clone() * z.clone()
                - w.clone() * z.clone()
                + z.clone() * z.clone())
            + v.clone() * w.clone() * (z.clone() - x.clone())
            + x.clone() * w.clone() * (x.clone() + w.clone() - z));
    (c2, c1, c0)
}

fn scan_block_planar<K: Ring>(
    vals: &[K],
    n: usize,
    triple: (usize, usize, usize),
    block: usize,
    stop_at_first: bool,
    is_hit: &(impl Fn(&K) -> bool + Sync),
) -> BlockResult<K> {
    let rest = remaining_pairs(n, triple);
    let a = crate::geometry::PairKey::new(triple.0, triple.1).expect("distinct").index(n);
    let b = crate::geometry::PairKey::new(triple.0, triple.2).expect("distinct").index(n);
    let (u, z) = (&vals[a], &vals[b]);
    let mut out = BlockResult { hit: None, min_abs: None, scanned: 0 };
    let mut offset = 0u64;
    for &pj in &rest {
        let v = &vals[pj];
        for &pk in rest.iter().filter(|&&p| p != pj) {
            let w = &vals[pk];
            for &pl in rest.iter().filter(|&&p| p != pj && p != pk) {
                let x = &vals[pl];
                let (c2, c1, c0) = g_coefficients(u, v, w, x, z);
                for &pm in rest.iter().filter(|&&p| p != pj && p != pk && p != pl) {
                    let y = vals[pm].clone();
                    let g = (c2.clone() * y.clone() + c1.clone()) * y + c0.clone();
                    keep_min(&mut out.min_abs, g.abs());
                    if out.hit.is_none() && is_hit(&g) {
                        out.hit = Some(Hit { block, offset, pairs: vec![a, pj, pk, pl, pm, b], g });
                        if stop_at_first {
                            out.scanned = offset + 1;
                            return out;
                        }
                    }
                    offset += 1;
                }
            }
        }
    }
    out.scanned = offset;
    out
}

fn scan_block_general<K: Ring>(
    vals: &[K],
    n: usize,
    m: usize,
    triple: (usize, usize, usize),
    block: usize,
    stop_at_first: bool,
    is_hit: &(impl Fn(&K) -> bool + Sync),
) -> BlockResult<K> {
    let k = gm_arity(m);
    let rest = remaining_pairs(n, triple);
    let a = crate::geometry::PairKey::new(triple.0, triple.1).expect("distinct").index(n);
    let b = crate::geometry::PairKey::new(triple.0, triple.2).expect("distinct").index(n);
    let mut arr = Arrangements::new(rest.len(), k - 2);
    let mut tuple = vec![0usize; k];
    tuple[0] = a;
    tuple[k - 1] = b;
    let mut out = BlockResult { hit: None, min_abs: None, scanned: 0 };
    let mut offset = 0u64;
    while let Some(sel) = arr.advance() {
        for (slot, &s) in tuple[1..k - 1].iter_mut().zip(sel) {
            *slot = rest[s];
        }
        let g = linalg::det(gm_matrix(m, |x, y| vals[tuple[abstract_pair_index(m + 2, x, y)]].clone()));
        keep_min(&mut out.min_abs, g.abs());
        if out.hit.is_none() && is_hit(&g) {
            out.hit = Some(Hit { block, offset, pairs: tuple.clone(), g });
            if stop_at_first {
                out.scanned = offset + 1;
                return out;
            }
        }
        offset += 1;
    }
    out.scanned = offset;
    out
}

pub(crate) fn scan_kernel<K: Ring>(
    vals: &[K],
    n: usize,
    params: ScanParams,
    is_hit: impl Fn(&K) -> bool + Sync,
) -> ScanOutcome<K> {
    debug_assert_eq!(vals.len(), pair_count(n));
    let triples = triples(n);
    run_blocks(triples.len(), params.parallel, params.stop_at_first, |blk| match params.relation {
        Relation::Planar => scan_block_planar(vals, n, triples[blk], blk, params.stop_at_first, &is_hit),
        Relation::General(m) => scan_block_general(vals, n, m, triples[blk], blk, params.stop_at_first, &is_hit),
    })
}

/// Whether the exact scan can run on `i128` without overflow.
fn fits_i128(max_bits: u64, relation: Relation) -> bool {
    match relation {
        // |g| <= 44 D^3 and every intermediate is smaller
        Relation::Planar => max_bits <= 38,
        // Bareiss products stay below the square of the Hadamard bound
        Relation::General(m) => {
            let size = (m + 1) as f64;
            let entry_bits = max_bits as f64 + 2.0;
            2.0 * size * (entry_bits + 0.5 * size.log2()) <= 124.0
        }
    }
}

/// Runs the scan on squared distances given in pair-index order and reports
/// `g` values in the caller's scalar type.
pub(crate) fn scan_values<T: Scalar>(values: &[T], n: usize, params: ScanParams) -> ScanOutcome<T> {
    match T::lower(values) {
        ScanInput::Float(v) => {
            let threshold = params.threshold;
            scan_kernel(&v, n, params, move |g: &f64| g.abs() <= threshold).map(|g| T::lift(Lifted::Float(g)))
        }
        ScanInput::Exact { numerators, denominator } => {
            let scale = num_traits::pow(denominator, params.relation.degree() as usize);
            let lift = |g: BigInt| T::lift(Lifted::Exact(crate::scalar::Rational::new(g, scale.clone())));
            let max_bits = numerators.iter().map(BigInt::bits).max().unwrap_or(0);
            if fits_i128(max_bits, params.relation) {
                let small: Vec<i128> =
                    numerators.iter().map(|v| i128::try_from(v).expect("bounded by bit check")).collect();
                scan_kernel(&small, n, params, |g: &i128| *g == 0).map(|g| lift(BigInt::from(g)))
            } else {
                scan_kernel(&numerators, n, params, |g: &BigInt| g.bits() == 0).map(lift)
            }
        }
    }
}
