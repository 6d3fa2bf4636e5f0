//! Partition function over all sequences for a fixed structure.
//!
//! For every arc `(i, j)` the table `Q(a, b)` sums the Boltzmann weights of
//! all sequences on `[i, j]` with `a` at `i` and `b` at `j`, evaluated on the
//! substructure under the arc. A loop closed by `(i, j)` combines the tables
//! of its branches:
//!
//! ```text
//! Q_ij(a, b) = sum over branch endpoint bases x of e^{-E(L)/RT} * prod_t Q_t(x_pt, x_qt)
//! ```
//!
//! Bases inside a loop that do not enter its energy contribute a factor equal
//! to the number of bases they may take (4 without a constraint). Only the
//! few energy-relevant bases are enumerated, so each loop costs a bounded
//! amount of work and the whole computation is linear in `n`.

use serde::Serialize;

use crate::energy::{
    can_pair, energy_relevant_unpaired, loop_energy_unchecked, multi_energy, EnergyParams,
};
use crate::error::{ConstraintError, Error};
use crate::logspace::{LogSum, LogWeight};
use crate::sequence::Nucleotide;
use crate::structure::{decompose, Arc, Loop, LoopKind, SecondaryStructure};

/// `Q(a, b)` for one arc, indexed by the nucleotide codes of its endpoints.
pub type ArcTable = [[LogWeight; 4]; 4];

const ALL_BASES: u8 = 0b1111;

/// Allowed bases per position. A concrete pattern on `[i, j]` is the special
/// case of singleton sets on that interval and full sets elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternConstraint {
    masks: Vec<u8>,
}

impl PatternConstraint {
    /// No restriction on any of `n` positions.
    pub fn wildcard(n: usize) -> Self {
        PatternConstraint {
            masks: vec![ALL_BASES; n],
        }
    }

    /// Fix `pattern` on positions `start..start + pattern.len()` (1-based).
    pub fn pattern(
        n: usize,
        start: usize,
        pattern: &[Nucleotide],
    ) -> Result<Self, ConstraintError> {
        let end = start + pattern.len().max(1) - 1;
        if start == 0 || end > n || pattern.is_empty() {
            return Err(ConstraintError::OutOfRange { start, end, n });
        }
        let mut c = Self::wildcard(n);
        for (k, b) in pattern.iter().enumerate() {
            c.masks[start - 1 + k] = 1 << b.index();
        }
        Ok(c)
    }

    /// Fix the interval `[start, end]` to `pattern`, checking the width.
    pub fn interval(
        n: usize,
        start: usize,
        end: usize,
        pattern: &[Nucleotide],
    ) -> Result<Self, ConstraintError> {
        if start == 0 || end < start || end > n {
            return Err(ConstraintError::OutOfRange { start, end, n });
        }
        if pattern.len() != end - start + 1 {
            return Err(ConstraintError::WidthMismatch {
                expected: end - start + 1,
                found: pattern.len(),
            });
        }
        Self::pattern(n, start, pattern)
    }

    /// One allowed set per position.
    pub fn from_sets(sets: &[Vec<Nucleotide>]) -> Result<Self, ConstraintError> {
        let masks = sets
            .iter()
            .enumerate()
            .map(|(k, set)| {
                let m = set.iter().fold(0u8, |m, b| m | (1 << b.index()));
                if m == 0 {
                    Err(ConstraintError::EmptyMask { position: k + 1 })
                } else {
                    Ok(m)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(PatternConstraint { masks })
    }

    /// Intersect position `position` (1-based) with `allowed`.
    pub fn narrow(
        &mut self,
        position: usize,
        allowed: &[Nucleotide],
    ) -> Result<(), ConstraintError> {
        let n = self.len();
        if position == 0 || position > n {
            return Err(ConstraintError::OutOfRange {
                start: position,
                end: position,
                n,
            });
        }
        let m = allowed.iter().fold(0u8, |m, b| m | (1 << b.index())) & self.masks[position - 1];
        if m == 0 {
            return Err(ConstraintError::EmptyMask { position });
        }
        self.masks[position - 1] = m;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Bases allowed at a 1-based position.
    pub fn allowed(&self, position: usize) -> Vec<Nucleotide> {
        self.allowed0(position - 1).collect()
    }

    pub(crate) fn allowed0(&self, idx: usize) -> impl Iterator<Item = Nucleotide> + '_ {
        let m = self.masks[idx];
        Nucleotide::ALL
            .into_iter()
            .filter(move |b| m & (1 << b.index()) != 0)
    }

    #[inline]
    pub(crate) fn allows0(&self, idx: usize, b: Nucleotide) -> bool {
        self.masks[idx] & (1 << b.index()) != 0
    }

    pub(crate) fn count0(&self, idx: usize) -> usize {
        self.masks[idx].count_ones() as usize
    }

    pub(crate) fn is_free0(&self, idx: usize) -> bool {
        self.masks[idx] == ALL_BASES
    }

    pub fn is_wildcard(&self) -> bool {
        self.masks.iter().all(|&m| m == ALL_BASES)
    }
}

/// A loop prepared for evaluation. Positions are 0-based.
#[derive(Clone, Debug)]
pub(crate) struct LoopPlan {
    pub(crate) lp: Loop,
    /// Index of the closing arc in `SecondaryStructure::arcs`.
    pub(crate) closing: Option<usize>,
    pub(crate) branches: Vec<usize>,
    /// Free positions whose bases enter the loop energy.
    pub(crate) relevant: Vec<usize>,
    /// Free positions that do not.
    pub(crate) irrelevant: Vec<usize>,
}

/// Loops of a structure in top-down order plus arc lookups.
#[derive(Clone, Debug)]
pub(crate) struct Plan {
    pub(crate) n: usize,
    pub(crate) arcs: Vec<(usize, usize)>,
    pub(crate) loops: Vec<LoopPlan>,
}

impl Plan {
    pub(crate) fn new(s: &SecondaryStructure) -> Self {
        let d = decompose(s);
        let arc_index = |a: &Arc| s.arc_index(a).expect("arc of the structure");
        let loops = d
            .loops
            .into_iter()
            .map(|lp| {
                let relevant: Vec<usize> = energy_relevant_unpaired(&lp)
                    .into_iter()
                    .map(|p| p - 1)
                    .collect();
                let irrelevant = lp
                    .intervals
                    .iter()
                    .flat_map(|iv| iv.positions())
                    .map(|p| p - 1)
                    .filter(|p| !relevant.contains(p))
                    .collect();
                LoopPlan {
                    closing: lp.closing.as_ref().map(arc_index),
                    branches: lp.branches.iter().map(arc_index).collect(),
                    relevant,
                    irrelevant,
                    lp,
                }
            })
            .collect();
        Plan {
            n: s.len(),
            arcs: s.arcs().iter().map(|a| (a.i - 1, a.j - 1)).collect(),
            loops,
        }
    }
}

/// `ln` of the number of bases allowed on each of `positions`.
fn free_factor(mask: &PatternConstraint, positions: &[usize]) -> f64 {
    positions
        .iter()
        .filter(|&&p| !mask.is_free0(p))
        .map(|&p| (mask.count0(p) as f64).ln())
        .sum::<f64>()
        + positions.iter().filter(|&&p| mask.is_free0(p)).count() as f64 * 4f64.ln()
}

fn table_total(t: &ArcTable) -> LogWeight {
    t.iter().flatten().copied().sum()
}

/// Visits every assignment of the branch endpoints and relevant free bases of
/// a helix, bulge, interior or hairpin loop, with `(a, b)` already placed on
/// the closing arc in `scratch`. The callback receives the filled scratch
/// sequence and `-E(L)/RT + ln Q_branch(x_r, x_s)`.
pub(crate) fn enumerate_closed_loop(
    params: &EnergyParams,
    plan: &Plan,
    lp: &LoopPlan,
    mask: &PatternConstraint,
    tables: &[ArcTable],
    scratch: &mut [Nucleotide],
    visit: &mut dyn FnMut(&[Nucleotide], f64),
) {
    fn singles(
        params: &EnergyParams,
        lp: &LoopPlan,
        mask: &PatternConstraint,
        scratch: &mut [Nucleotide],
        slot: usize,
        branch_weight: f64,
        visit: &mut dyn FnMut(&[Nucleotide], f64),
    ) {
        if slot == lp.relevant.len() {
            let e = loop_energy_unchecked(params, scratch, &lp.lp);
            if e.is_finite() {
                visit(scratch, e.log_boltzmann(params.rt()) + branch_weight);
            }
            return;
        }
        let pos = lp.relevant[slot];
        for b in Nucleotide::ALL {
            if mask.allows0(pos, b) {
                scratch[pos] = b;
                singles(params, lp, mask, scratch, slot + 1, branch_weight, visit);
            }
        }
    }

    match lp.branches.as_slice() {
        [] => singles(params, lp, mask, scratch, 0, 0.0, visit),
        [t] => {
            let (r, s) = plan.arcs[*t];
            for c in Nucleotide::ALL {
                if !mask.allows0(r, c) {
                    continue;
                }
                for d in Nucleotide::ALL {
                    let q = tables[*t][c.index()][d.index()];
                    if !mask.allows0(s, d) || q.is_zero() {
                        continue;
                    }
                    scratch[r] = c;
                    scratch[s] = d;
                    singles(params, lp, mask, scratch, 0, q.ln(), visit);
                }
            }
        }
        _ => unreachable!("multi-loops are evaluated in closed form"),
    }
}

/// Fill the table of the arc closing `lp`.
fn closed_loop_table(
    params: &EnergyParams,
    plan: &Plan,
    lp: &LoopPlan,
    mask: &PatternConstraint,
    tables: &[ArcTable],
    scratch: &mut [Nucleotide],
) -> ArcTable {
    let (i, j) = plan.arcs[lp.closing.expect("closed loop")];
    let free = free_factor(mask, &lp.irrelevant);
    let mut table = [[LogWeight::ZERO; 4]; 4];

    if lp.lp.kind == LoopKind::Multi {
        let e = multi_energy(params, lp.lp.pair_count(), lp.lp.unpaired);
        let branches: LogWeight = lp
            .branches
            .iter()
            .map(|&t| table_total(&tables[t]))
            .product();
        let value = LogWeight::from_ln(e.log_boltzmann(params.rt()) + free) * branches;
        for a in mask.allowed0(i) {
            for b in mask.allowed0(j) {
                if can_pair(a, b) {
                    table[a.index()][b.index()] = value;
                }
            }
        }
        return table;
    }

    for a in Nucleotide::ALL {
        for b in Nucleotide::ALL {
            if !(mask.allows0(i, a) && mask.allows0(j, b) && can_pair(a, b)) {
                continue;
            }
            scratch[i] = a;
            scratch[j] = b;
            let mut acc = LogSum::new();
            enumerate_closed_loop(params, plan, lp, mask, tables, scratch, &mut |_, w| {
                acc.add(w)
            });
            let total = acc.total();
            table[a.index()][b.index()] = if total.is_zero() {
                LogWeight::ZERO
            } else {
                LogWeight::from_ln(total.ln() + free)
            };
        }
    }
    table
}

/// Result of the sequence-side partition function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructurePartition {
    log_q: LogWeight,
    tables: Vec<ArcTable>,
}

impl StructurePartition {
    /// `ln Q(S)`.
    pub fn log_q(&self) -> LogWeight {
        self.log_q
    }

    /// Tables aligned with `SecondaryStructure::arcs`.
    pub fn tables(&self) -> &[ArcTable] {
        &self.tables
    }

    pub fn table(&self, arc_index: usize) -> &ArcTable {
        &self.tables[arc_index]
    }
}

/// Reusable evaluator for one `(params, structure)` pair. Constrained
/// evaluations recompute only the arcs whose span meets a constrained
/// position; every other table is taken from the unconstrained run.
#[derive(Clone, Debug)]
pub struct PartitionEngine<'a> {
    params: &'a EnergyParams,
    structure: &'a SecondaryStructure,
    pub(crate) plan: Plan,
    base: StructurePartition,
}

impl<'a> PartitionEngine<'a> {
    pub fn new(params: &'a EnergyParams, structure: &'a SecondaryStructure) -> Self {
        let plan = Plan::new(structure);
        let base = evaluate(
            params,
            &plan,
            &PatternConstraint::wildcard(structure.len()),
            None,
        );
        PartitionEngine {
            params,
            structure,
            plan,
            base,
        }
    }

    pub fn params(&self) -> &'a EnergyParams {
        self.params
    }

    pub fn structure(&self) -> &SecondaryStructure {
        self.structure
    }

    pub fn unconstrained(&self) -> &StructurePartition {
        &self.base
    }

    pub fn constrained(&self, c: &PatternConstraint) -> Result<StructurePartition, Error> {
        if c.len() != self.plan.n {
            return Err(ConstraintError::LengthMismatch {
                expected: self.plan.n,
                found: c.len(),
            }
            .into());
        }
        Ok(evaluate(self.params, &self.plan, c, Some(&self.base)))
    }

    /// `P(c | S) = Q(S | c) / Q(S)`.
    pub fn probability(&self, c: &PatternConstraint) -> Result<f64, Error> {
        let q = self.constrained(c)?.log_q;
        Ok((q / self.base.log_q).linear().clamp(0.0, 1.0))
    }
}

fn evaluate(
    params: &EnergyParams,
    plan: &Plan,
    mask: &PatternConstraint,
    base: Option<&StructurePartition>,
) -> StructurePartition {
    let n = plan.n;
    // prefix[k] = number of constrained positions among 0..k
    let mut prefix = vec![0usize; n + 1];
    for p in 0..n {
        prefix[p + 1] = prefix[p] + usize::from(!mask.is_free0(p));
    }
    let untouched = |(i, j): (usize, usize)| prefix[j + 1] == prefix[i];

    let mut tables = vec![[[LogWeight::ZERO; 4]; 4]; plan.arcs.len()];
    let mut scratch = vec![Nucleotide::A; n];
    for lp in plan.loops.iter().skip(1).rev() {
        let c = lp.closing.expect("non-exterior loop");
        tables[c] = match base {
            Some(b) if untouched(plan.arcs[c]) => b.tables[c],
            _ => closed_loop_table(params, plan, lp, mask, &tables, &mut scratch),
        };
    }

    let ext = &plan.loops[0];
    let branches: LogWeight = ext
        .branches
        .iter()
        .map(|&t| table_total(&tables[t]))
        .product();
    let log_q = LogWeight::from_ln(free_factor(mask, &ext.irrelevant)) * branches;
    StructurePartition { log_q, tables }
}

/// `ln Q(S)` and all arc tables.
pub fn partition_function(params: &EnergyParams, s: &SecondaryStructure) -> StructurePartition {
    let plan = Plan::new(s);
    evaluate(params, &plan, &PatternConstraint::wildcard(s.len()), None)
}

/// `ln Q(S | c)`: the partition function restricted to sequences allowed by `c`.
pub fn pattern_partition(
    params: &EnergyParams,
    s: &SecondaryStructure,
    c: &PatternConstraint,
) -> Result<LogWeight, Error> {
    if c.len() != s.len() {
        return Err(ConstraintError::LengthMismatch {
            expected: s.len(),
            found: c.len(),
        }
        .into());
    }
    let plan = Plan::new(s);
    Ok(evaluate(params, &plan, c, None).log_q)
}

/// `P(c | S) = Q(S | c) / Q(S)`.
pub fn pattern_probability(
    params: &EnergyParams,
    s: &SecondaryStructure,
    c: &PatternConstraint,
) -> Result<f64, Error> {
    PartitionEngine::new(params, s).probability(c)
}
