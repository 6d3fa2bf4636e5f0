//! Counting, unranking and uniform sampling of secondary structures.
//!
//! With `T(m)` the number of structures on `m` positions, the last position
//! is either unpaired or paired with some `i <= m - 4`:
//!
//! ```text
//! T(m) = T(m-1) + sum_{i=1}^{m-4} T(i-1) * T(m-i-1),   T(m) = 1 for m <= 4
//! ```
//!
//! Ranks follow the same split, so unranking a uniform integer below `T(n)`
//! gives a uniform structure.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use super::{Arc, SecondaryStructure, MIN_ARC_SPAN};

/// Table of `T(0..=n)`.
#[derive(Clone, Debug)]
pub struct StructureCounts {
    counts: Vec<BigUint>,
}

impl StructureCounts {
    pub fn new(n: usize) -> Self {
        let mut counts: Vec<BigUint> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut t = if m == 0 {
                BigUint::one()
            } else {
                counts[m - 1].clone()
            };
            for i in 1..=m.saturating_sub(MIN_ARC_SPAN) {
                t += &counts[i - 1] * &counts[m - i - 1];
            }
            counts.push(t);
        }
        StructureCounts { counts }
    }

    pub fn get(&self, m: usize) -> &BigUint {
        &self.counts[m]
    }

    pub fn max_len(&self) -> usize {
        self.counts.len() - 1
    }

    /// The structure of length `n` with the given rank, `rank < T(n)`.
    pub fn unrank(&self, n: usize, rank: &BigUint) -> SecondaryStructure {
        assert!(n <= self.max_len(), "count table too short");
        assert!(rank < self.get(n), "rank out of range");
        let mut arcs = Vec::new();
        let mut work = vec![(0usize, n, rank.clone())];
        while let Some((offset, m, mut r)) = work.pop() {
            if m <= MIN_ARC_SPAN {
                continue;
            }
            if r < self.counts[m - 1] {
                work.push((offset, m - 1, r));
                continue;
            }
            r -= &self.counts[m - 1];
            for i in 1..=m - MIN_ARC_SPAN {
                let inside = m - i - 1;
                let block = &self.counts[i - 1] * &self.counts[inside];
                if r < block {
                    arcs.push(Arc::new(offset + i, offset + m));
                    let left = &r / &self.counts[inside];
                    let within = &r % &self.counts[inside];
                    work.push((offset, i - 1, left));
                    work.push((offset + i, inside, within));
                    break;
                }
                r -= block;
            }
        }
        SecondaryStructure::new(n, arcs).expect("unranking yields valid structures")
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> SecondaryStructure {
        let rank = uniform_below(self.get(n), rng);
        self.unrank(n, &rank)
    }
}

fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    if bound.is_one() {
        return BigUint::zero();
    }
    rng.gen_biguint_below(bound)
}

/// Number of secondary structures on `n` positions with arcs spanning more
/// than three positions.
pub fn count_structures(n: usize) -> BigUint {
    StructureCounts::new(n).get(n).clone()
}

/// Structure of length `n` with the given rank in `0..count_structures(n)`.
pub fn unrank_structure(n: usize, rank: &BigUint) -> SecondaryStructure {
    StructureCounts::new(n).unrank(n, rank)
}

/// Uniformly random structure on `n` positions.
pub fn sample_uniform_structure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SecondaryStructure {
    StructureCounts::new(n).sample(n, rng)
}

/// Every structure on `n` positions, by exhaustive search: the first
/// position of a segment is either unpaired or paired with a later one.
/// Only practical for small `n`; used as an oracle.
pub fn enumerate_structures(n: usize) -> Vec<SecondaryStructure> {
    fn segment(lo: usize, hi: usize) -> Vec<Vec<Arc>> {
        if lo + MIN_ARC_SPAN > hi {
            return vec![Vec::new()];
        }
        let mut out = segment(lo + 1, hi);
        for q in lo + MIN_ARC_SPAN..=hi {
            let inside = segment(lo + 1, q - 1);
            let after = segment(q + 1, hi);
            for a in &inside {
                for b in &after {
                    let mut arcs = Vec::with_capacity(a.len() + b.len() + 1);
                    arcs.push(Arc::new(lo, q));
                    arcs.extend_from_slice(a);
                    arcs.extend_from_slice(b);
                    out.push(arcs);
                }
            }
        }
        out
    }
    segment(1, n)
        .into_iter()
        .map(|arcs| SecondaryStructure::new(n, arcs).expect("enumerated structures are valid"))
        .collect()
}
