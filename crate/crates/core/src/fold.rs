//! Structure-side dual: minimum free energy folding and the partition
//! function over all structures of a fixed sequence.
//!
//! Both use the same loop energies as structure evaluation. The
//! decomposition (all 0-based, `j - i >= 4` for pairs):
//!
//! ```text
//! C[i][j]  pair (i,j) closes a hairpin, an interior loop on C[r][s], or a
//!          multi-loop M[i+1][u-1] + M1[u][j-1]
//! M1[i][j] exactly one branch starting at i, closed at l <= j, then j-l unpaired
//! M[i][j]  at least one branch in [i, j]
//! F[m]     best prefix of length m (exterior loop)
//! ```
//!
//! Interior loops are limited to `max_interior` unpaired bases in total.
//!
//! Ties in minimum energy are broken towards fewer arcs; remaining ties go
//! to the first candidate in the traceback order (unpaired before paired,
//! hairpin before interior before multi-loop, smaller split points first).

use serde::Serialize;

use crate::energy::{can_pair, hairpin_energy, interior_energy, Energy, EnergyParams};
use crate::error::Error;
use crate::logspace::{LogSum, LogWeight};
use crate::sequence::{Nucleotide, Sequence};
use crate::structure::{Arc, SecondaryStructure, MIN_ARC_SPAN};

/// Default limit on the unpaired bases of an interior loop or bulge.
pub const DEFAULT_MAX_INTERIOR: usize = 30;

const INF: i64 = i64::MAX / 4;
/// Energies are scaled so that the low bits of a key count arcs:
/// minimising `energy * ARC_SCALE + arcs` minimises energy, then arcs.
const ARC_SCALE: i64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldResult {
    pub structure: SecondaryStructure,
    pub energy: Energy,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeqPartition {
    /// `ln Q(sigma)`; at least 0 because the open chain has weight 1.
    pub log_q: LogWeight,
}

#[derive(Clone, Debug)]
pub struct Folder<'a> {
    params: &'a EnergyParams,
    max_interior: usize,
}

fn key(e: Energy) -> i64 {
    if e.is_finite() {
        i64::from(e.hundredths()) * ARC_SCALE
    } else {
        INF
    }
}

fn add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        a + b
    }
}

struct Tables {
    n: usize,
    c: Vec<i64>,
    m: Vec<i64>,
    m1: Vec<i64>,
    f: Vec<i64>,
}

impl Tables {
    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }
}

/// Visits the `(r, s)` inner pairs allowed inside `(i, j)`.
fn for_each_inner(n_i: usize, n_j: usize, max_interior: usize, mut f: impl FnMut(usize, usize)) {
    let (i, j) = (n_i, n_j);
    let mut r = i + 1;
    while r + MIN_ARC_SPAN < j && r - i - 1 <= max_interior {
        let left = r - i - 1;
        let s_min = (r + MIN_ARC_SPAN).max((j - 1).saturating_sub(max_interior - left));
        for s in (s_min..j).rev() {
            f(r, s);
        }
        r += 1;
    }
}

impl<'a> Folder<'a> {
    pub fn new(params: &'a EnergyParams) -> Self {
        Folder {
            params,
            max_interior: DEFAULT_MAX_INTERIOR,
        }
    }

    pub fn with_max_interior(mut self, max_interior: usize) -> Self {
        self.max_interior = max_interior;
        self
    }

    fn gamma(&self, unpaired: usize) -> Energy {
        Energy::from_hundredths(self.params.multi_gamma.hundredths() * unpaired as i32)
    }

    fn fill(&self, seq: &[Nucleotide]) -> Tables {
        let n = seq.len();
        let p = self.params;
        let mut t = Tables {
            n,
            c: vec![INF; n * n],
            m: vec![INF; n * n],
            m1: vec![INF; n * n],
            f: vec![0; n + 1],
        };
        let closing = key(p.multi_alpha + p.multi_beta);
        let beta = p.multi_beta;
        for span in MIN_ARC_SPAN..n {
            for i in 0..n - span {
                let j = i + span;
                let ij = t.at(i, j);
                if can_pair(seq[i], seq[j]) {
                    let mut best = add(key(hairpin_energy(p, seq, i, j)), 1);
                    for_each_inner(i, j, self.max_interior, |r, s| {
                        let inner = t.c[t.at(r, s)];
                        if inner < INF {
                            best = best
                                .min(add(add(key(interior_energy(p, seq, i, j, r, s)), 1), inner));
                        }
                    });
                    for u in i + 2 + MIN_ARC_SPAN..j.saturating_sub(MIN_ARC_SPAN) {
                        let left = t.m[t.at(i + 1, u - 1)];
                        let right = t.m1[t.at(u, j - 1)];
                        best = best.min(add(add(left, right), closing + 1));
                    }
                    t.c[ij] = best;
                }
                let mut m1 = INF;
                for l in i + MIN_ARC_SPAN..=j {
                    let c = t.c[t.at(i, l)];
                    if c < INF {
                        m1 = m1.min(c + key(beta + self.gamma(j - l)));
                    }
                }
                t.m1[ij] = m1;
                let mut m = INF;
                for u in i..=j - MIN_ARC_SPAN {
                    let right = t.m1[t.at(u, j)];
                    if right >= INF {
                        continue;
                    }
                    let mut left = key(self.gamma(u - i));
                    if u > i {
                        left = left.min(t.m[t.at(i, u - 1)]);
                    }
                    m = m.min(add(left, right));
                }
                t.m[ij] = m;
            }
        }
        for len in 1..=n {
            let end = len - 1;
            let mut best = t.f[len - 1];
            for i in 0..len.saturating_sub(MIN_ARC_SPAN) {
                best = best.min(add(t.f[i], t.c[t.at(i, end)]));
            }
            t.f[len] = best;
        }
        t
    }

    fn traceback(&self, seq: &[Nucleotide], t: &Tables) -> Vec<Arc> {
        enum Job {
            F(usize),
            C(usize, usize),
            M(usize, usize),
            M1(usize, usize),
        }
        let p = self.params;
        let closing = key(p.multi_alpha + p.multi_beta);
        let mut arcs = Vec::new();
        let mut jobs = vec![Job::F(t.n)];
        while let Some(job) = jobs.pop() {
            match job {
                Job::F(0) => {}
                Job::F(len) => {
                    let target = t.f[len];
                    if t.f[len - 1] == target {
                        jobs.push(Job::F(len - 1));
                        continue;
                    }
                    let i = (0..len.saturating_sub(MIN_ARC_SPAN))
                        .find(|&i| add(t.f[i], t.c[t.at(i, len - 1)]) == target)
                        .expect("exterior traceback");
                    jobs.push(Job::F(i));
                    jobs.push(Job::C(i, len - 1));
                }
                Job::C(i, j) => {
                    arcs.push(Arc::new(i + 1, j + 1));
                    let target = t.c[t.at(i, j)];
                    if add(key(hairpin_energy(p, seq, i, j)), 1) == target {
                        continue;
                    }
                    let mut inner = None;
                    for_each_inner(i, j, self.max_interior, |r, s| {
                        let c = t.c[t.at(r, s)];
                        if inner.is_none()
                            && c < INF
                            && add(add(key(interior_energy(p, seq, i, j, r, s)), 1), c) == target
                        {
                            inner = Some((r, s));
                        }
                    });
                    if let Some((r, s)) = inner {
                        jobs.push(Job::C(r, s));
                        continue;
                    }
                    let u = (i + 2 + MIN_ARC_SPAN..j.saturating_sub(MIN_ARC_SPAN))
                        .find(|&u| {
                            add(
                                add(t.m[t.at(i + 1, u - 1)], t.m1[t.at(u, j - 1)]),
                                closing + 1,
                            ) == target
                        })
                        .expect("pair traceback");
                    jobs.push(Job::M(i + 1, u - 1));
                    jobs.push(Job::M1(u, j - 1));
                }
                Job::M1(i, j) => {
                    let target = t.m1[t.at(i, j)];
                    let l = (i + MIN_ARC_SPAN..=j)
                        .find(|&l| {
                            let c = t.c[t.at(i, l)];
                            c < INF && c + key(p.multi_beta + self.gamma(j - l)) == target
                        })
                        .expect("branch traceback");
                    jobs.push(Job::C(i, l));
                }
                Job::M(i, j) => {
                    let target = t.m[t.at(i, j)];
                    let mut done = false;
                    for u in i..=j - MIN_ARC_SPAN {
                        let right = t.m1[t.at(u, j)];
                        if right >= INF {
                            continue;
                        }
                        if add(key(self.gamma(u - i)), right) == target {
                            jobs.push(Job::M1(u, j));
                            done = true;
                            break;
                        }
                        if u > i && add(t.m[t.at(i, u - 1)], right) == target {
                            jobs.push(Job::M(i, u - 1));
                            jobs.push(Job::M1(u, j));
                            done = true;
                            break;
                        }
                    }
                    assert!(done, "multi-loop traceback");
                }
            }
        }
        arcs
    }

    /// Minimum free energy structure of `seq`.
    pub fn mfe(&self, seq: &Sequence) -> FoldResult {
        let bases = seq.bases();
        let t = self.fill(bases);
        let arcs = self.traceback(bases, &t);
        let best = t.f[t.n];
        // Energies are whole multiples of ARC_SCALE plus the arc count.
        let energy = Energy::from_hundredths(best.div_euclid(ARC_SCALE) as i32);
        debug_assert_eq!(best.rem_euclid(ARC_SCALE) as usize, arcs.len());
        FoldResult {
            structure: SecondaryStructure::new(seq.len(), arcs)
                .expect("traceback yields a valid structure"),
            energy,
        }
    }

    /// `ln Q(sigma)` over all structures reachable within the interior cap.
    pub fn partition(&self, seq: &Sequence) -> SeqPartition {
        let bases = seq.bases();
        let n = bases.len();
        let p = self.params;
        let rt = p.rt();
        let at = |i: usize, j: usize| i * n + j;
        let ninf = f64::NEG_INFINITY;
        let mut qb = vec![ninf; n * n];
        let mut qm = vec![ninf; n * n];
        let mut qm1 = vec![ninf; n * n];
        let closing = (p.multi_alpha + p.multi_beta).log_boltzmann(rt);
        let branch = |unpaired: usize| (p.multi_beta + self.gamma(unpaired)).log_boltzmann(rt);
        for span in MIN_ARC_SPAN..n {
            for i in 0..n - span {
                let j = i + span;
                if can_pair(bases[i], bases[j]) {
                    let mut acc = LogSum::new();
                    acc.add(hairpin_energy(p, bases, i, j).log_boltzmann(rt));
                    for_each_inner(i, j, self.max_interior, |r, s| {
                        let inner = qb[at(r, s)];
                        if inner > ninf {
                            acc.add(
                                interior_energy(p, bases, i, j, r, s).log_boltzmann(rt) + inner,
                            );
                        }
                    });
                    let mut multi = LogSum::new();
                    for u in i + 2 + MIN_ARC_SPAN..j.saturating_sub(MIN_ARC_SPAN) {
                        multi.add(qm[at(i + 1, u - 1)] + qm1[at(u, j - 1)]);
                    }
                    let multi = multi.total();
                    if !multi.is_zero() {
                        acc.add(closing + multi.ln());
                    }
                    qb[at(i, j)] = acc.total().ln();
                }
                let mut m1 = LogSum::new();
                for l in i + MIN_ARC_SPAN..=j {
                    let c = qb[at(i, l)];
                    if c > ninf {
                        m1.add(c + branch(j - l));
                    }
                }
                qm1[at(i, j)] = m1.total().ln();
                let mut m = LogSum::new();
                for u in i..=j - MIN_ARC_SPAN {
                    let right = qm1[at(u, j)];
                    if right == ninf {
                        continue;
                    }
                    m.add(self.gamma(u - i).log_boltzmann(rt) + right);
                    if u > i {
                        m.add(qm[at(i, u - 1)] + right);
                    }
                }
                qm[at(i, j)] = m.total().ln();
            }
        }
        let mut z = vec![0.0f64; n + 1];
        for len in 1..=n {
            let mut acc = LogSum::new();
            acc.add(z[len - 1]);
            for i in 0..len.saturating_sub(MIN_ARC_SPAN) {
                acc.add(z[i] + qb[at(i, len - 1)]);
            }
            z[len] = acc.total().ln();
        }
        SeqPartition {
            log_q: LogWeight::from_ln(z[n]),
        }
    }
}

pub fn mfe_fold(params: &EnergyParams, seq: &Sequence) -> FoldResult {
    Folder::new(params).mfe(seq)
}

pub fn mccaskill_partition(params: &EnergyParams, seq: &Sequence) -> SeqPartition {
    Folder::new(params).partition(seq)
}

/// Whether the mfe structure of `seq` is exactly `s`.
pub fn refolds_to(
    params: &EnergyParams,
    seq: &Sequence,
    s: &SecondaryStructure,
) -> Result<bool, Error> {
    if seq.len() != s.len() {
        return Err(Error::LengthMismatch {
            sequence: seq.len(),
            structure: s.len(),
        });
    }
    Ok(mfe_fold(params, seq).structure == *s)
}
