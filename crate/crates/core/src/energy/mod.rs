//! Nearest-neighbour loop energies.
//!
//! A structure's energy on a sequence is the sum of its loop energies; the
//! exterior loop contributes nothing. A loop containing an arc whose two
//! bases cannot pair has infinite energy, so such sequences carry zero
//! Boltzmann weight.

mod params;

pub use params::{EnergyParams, FORMAT as PARAMS_FORMAT, GAS_CONSTANT, MAX_TABULATED_LOOP};

use std::fmt;
use std::ops::{Add, AddAssign, Sub};

use crate::error::Error;
use crate::sequence::{Nucleotide, Sequence};
use crate::structure::{decompose, Loop, LoopKind, SecondaryStructure};

/// Free energy in hundredths of a kcal/mol. Integer arithmetic keeps sums
/// exact and independent of evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Energy(i32);

impl Energy {
    pub const ZERO: Energy = Energy(0);
    pub const INFINITE: Energy = Energy(i32::MAX);

    pub const fn from_hundredths(h: i32) -> Energy {
        Energy(h)
    }

    /// Rounds to the nearest hundredth.
    pub fn from_kcal(kcal: f64) -> Energy {
        if kcal.is_infinite() && kcal > 0.0 {
            return Energy::INFINITE;
        }
        Energy((kcal * 100.0).round() as i32)
    }

    pub fn hundredths(self) -> i32 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self != Energy::INFINITE
    }

    /// kcal/mol, `f64::INFINITY` for an infinite energy.
    pub fn kcal(self) -> f64 {
        if self.is_finite() {
            f64::from(self.0) / 100.0
        } else {
            f64::INFINITY
        }
    }

    /// `-E / RT`, the natural log of the Boltzmann factor.
    pub fn log_boltzmann(self, rt: f64) -> f64 {
        if self.is_finite() {
            -self.kcal() / rt
        } else {
            f64::NEG_INFINITY
        }
    }
}

impl Add for Energy {
    type Output = Energy;

    fn add(self, rhs: Energy) -> Energy {
        if !self.is_finite() || !rhs.is_finite() {
            return Energy::INFINITE;
        }
        let sum = self.0.checked_add(rhs.0).expect("energy overflow");
        assert!(sum != i32::MAX, "energy overflow");
        Energy(sum)
    }
}

impl AddAssign for Energy {
    fn add_assign(&mut self, rhs: Energy) {
        *self = *self + rhs;
    }
}

impl Sub for Energy {
    type Output = Energy;

    /// Only defined for finite operands.
    fn sub(self, rhs: Energy) -> Energy {
        assert!(
            self.is_finite() && rhs.is_finite(),
            "subtracting infinite energies"
        );
        Energy(self.0 - rhs.0)
    }
}

impl std::iter::Sum for Energy {
    fn sum<I: Iterator<Item = Energy>>(iter: I) -> Energy {
        iter.fold(Energy::ZERO, Add::add)
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{:.2}", self.kcal())
        } else {
            f.write_str("inf")
        }
    }
}

/// Serialized as kcal/mol, `null` when infinite.
impl serde::Serialize for Energy {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.is_finite() {
            ser.serialize_f64(self.kcal())
        } else {
            ser.serialize_none()
        }
    }
}

/// Ordered base pair class. Watson-Crick and wobble pairs are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairType {
    AU,
    UA,
    CG,
    GC,
    GU,
    UG,
    Inadmissible,
}

impl PairType {
    pub const ADMISSIBLE: [PairType; 6] = [
        PairType::AU,
        PairType::UA,
        PairType::CG,
        PairType::GC,
        PairType::GU,
        PairType::UG,
    ];

    /// Row in the 6-wide parameter tables.
    pub fn index(self) -> Option<usize> {
        match self {
            PairType::AU => Some(0),
            PairType::UA => Some(1),
            PairType::CG => Some(2),
            PairType::GC => Some(3),
            PairType::GU => Some(4),
            PairType::UG => Some(5),
            PairType::Inadmissible => None,
        }
    }

    pub fn is_admissible(self) -> bool {
        self != PairType::Inadmissible
    }

    /// The two bases `(5', 3')` of an admissible pair.
    pub fn bases(self) -> Option<(Nucleotide, Nucleotide)> {
        use Nucleotide::*;
        match self {
            PairType::AU => Some((A, U)),
            PairType::UA => Some((U, A)),
            PairType::CG => Some((C, G)),
            PairType::GC => Some((G, C)),
            PairType::GU => Some((G, U)),
            PairType::UG => Some((U, G)),
            PairType::Inadmissible => None,
        }
    }
}

pub fn pair_type(a: Nucleotide, b: Nucleotide) -> PairType {
    use Nucleotide::*;
    match (a, b) {
        (A, U) => PairType::AU,
        (U, A) => PairType::UA,
        (C, G) => PairType::CG,
        (G, C) => PairType::GC,
        (G, U) => PairType::GU,
        (U, G) => PairType::UG,
        _ => PairType::Inadmissible,
    }
}

#[inline]
pub fn can_pair(a: Nucleotide, b: Nucleotide) -> bool {
    pair_type(a, b).is_admissible()
}

// The functions below take 0-based positions into a base slice. They are
// shared by structure evaluation, the sequence-side partition function and
// the folding engine, so every caller sees the same numbers.

/// Hairpin closed by `(i, j)`.
pub fn hairpin_energy(params: &EnergyParams, seq: &[Nucleotide], i: usize, j: usize) -> Energy {
    let pair = pair_type(seq[i], seq[j]);
    if !pair.is_admissible() {
        return Energy::INFINITE;
    }
    let k = j - i - 1;
    match k {
        3 => {
            params.hairpin_length(3)
                + params.terminal_penalty(pair)
                + params.special_hairpin(&seq[i..=j]).unwrap_or(Energy::ZERO)
        }
        4 => {
            params.hairpin_length(4)
                + params.hairpin_mismatch(pair, seq[i + 1], seq[j - 1])
                + params.special_hairpin(&seq[i..=j]).unwrap_or(Energy::ZERO)
        }
        _ => params.hairpin_length(k) + params.hairpin_mismatch(pair, seq[i + 1], seq[j - 1]),
    }
}

/// Helix, bulge or interior loop closed by `(i, j)` with inner pair `(r, s)`.
pub fn interior_energy(
    params: &EnergyParams,
    seq: &[Nucleotide],
    i: usize,
    j: usize,
    r: usize,
    s: usize,
) -> Energy {
    let outer = pair_type(seq[i], seq[j]);
    // The inner pair as seen from inside the loop.
    let inner = pair_type(seq[s], seq[r]);
    if !outer.is_admissible() || !inner.is_admissible() {
        return Energy::INFINITE;
    }
    let left = r - i - 1;
    let right = j - s - 1;
    match (left, right) {
        (0, 0) => params.stack(outer, inner),
        (0, k) | (k, 0) => {
            if k == 1 {
                params.bulge_length(1) + params.stack(outer, inner)
            } else {
                params.bulge_length(k)
                    + params.terminal_penalty(outer)
                    + params.terminal_penalty(inner)
            }
        }
        _ => {
            params.interior_length(left.max(right), left.min(right))
                + params.interior_mismatch(outer, seq[i + 1], seq[j - 1])
                + params.interior_mismatch(inner, seq[s + 1], seq[r - 1])
        }
    }
}

/// Multi-loop with `pairs` bounding arcs (closing arc included) and
/// `unpaired` free bases: `alpha + pairs * beta + unpaired * gamma`.
pub fn multi_energy(params: &EnergyParams, pairs: usize, unpaired: usize) -> Energy {
    params.multi_alpha
        + Energy(params.multi_beta.0 * pairs as i32)
        + Energy(params.multi_gamma.0 * unpaired as i32)
}

/// Loop energy on raw bases. `l` must come from a structure of length
/// `seq.len()`.
pub(crate) fn loop_energy_unchecked(params: &EnergyParams, seq: &[Nucleotide], l: &Loop) -> Energy {
    let pairs_ok = l
        .closing
        .iter()
        .chain(&l.branches)
        .all(|a| can_pair(seq[a.i - 1], seq[a.j - 1]));
    match l.kind {
        // The exterior loop is free; arcs in it are charged by the loops they close.
        LoopKind::Exterior => Energy::ZERO,
        _ if !pairs_ok => Energy::INFINITE,
        LoopKind::Hairpin => {
            let c = l.closing.expect("hairpin has a closing arc");
            hairpin_energy(params, seq, c.i - 1, c.j - 1)
        }
        LoopKind::Helix | LoopKind::Bulge | LoopKind::Interior => {
            let c = l.closing.expect("closing arc");
            let b = l.branches[0];
            interior_energy(params, seq, c.i - 1, c.j - 1, b.i - 1, b.j - 1)
        }
        LoopKind::Multi => multi_energy(params, l.pair_count(), l.unpaired),
    }
}

/// Free positions of `l` (1-based, not arc endpoints) whose bases enter its
/// energy. All other unpaired positions of the loop can be changed without
/// changing the value.
pub fn energy_relevant_unpaired(l: &Loop) -> Vec<usize> {
    let mut out = Vec::new();
    match l.kind {
        LoopKind::Hairpin => {
            let iv = l.intervals[0];
            if iv.len() <= 4 {
                out.extend(iv.positions());
            } else {
                out.push(iv.start);
                out.push(iv.end);
            }
        }
        LoopKind::Interior => {
            let c = l.closing.expect("closing arc");
            let b = l.branches[0];
            out.extend([c.i + 1, b.i - 1, b.j + 1, c.j - 1]);
            out.sort_unstable();
            out.dedup();
        }
        LoopKind::Helix | LoopKind::Bulge | LoopKind::Multi | LoopKind::Exterior => {}
    }
    out
}

fn check_len(seq: &Sequence, n: usize) -> Result<(), Error> {
    if seq.len() != n {
        return Err(Error::LengthMismatch {
            sequence: seq.len(),
            structure: n,
        });
    }
    Ok(())
}

/// Energy of one loop on `seq`.
pub fn loop_energy(params: &EnergyParams, seq: &Sequence, l: &Loop) -> Result<Energy, Error> {
    let max_pos = l.positions().last().copied().unwrap_or(0);
    let exterior_end =
        (l.kind == LoopKind::Exterior).then(|| l.intervals.last().map_or(0, |iv| iv.end));
    let fits = match exterior_end {
        Some(end) => end == seq.len(),
        None => max_pos <= seq.len(),
    };
    if !fits {
        return Err(Error::LengthMismatch {
            sequence: seq.len(),
            structure: exterior_end.unwrap_or(max_pos),
        });
    }
    Ok(loop_energy_unchecked(params, seq.bases(), l))
}

/// Energy of a structure on `seq`: the sum of its loop energies.
pub fn structure_energy(
    params: &EnergyParams,
    seq: &Sequence,
    s: &SecondaryStructure,
) -> Result<Energy, Error> {
    check_len(seq, s.len())?;
    Ok(decompose(s)
        .loops
        .iter()
        .map(|l| loop_energy_unchecked(params, seq.bases(), l))
        .sum())
}
