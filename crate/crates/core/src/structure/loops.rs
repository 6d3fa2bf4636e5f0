//! Loop decomposition of a secondary structure.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Arc, SecondaryStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LoopKind {
    Hairpin,
    Helix,
    Bulge,
    Interior,
    Multi,
    Exterior,
}

/// A maximal run of unpaired positions `start..=end` (1-based).
/// Empty when `end + 1 == start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        (self.end + 1).saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn positions(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

/// One face of the structure diagram.
///
/// `intervals` has one entry more than `branches`: the unpaired stretch
/// before the first branch, between consecutive branches, and after the
/// last one (inside the closing arc, or up to `n` for the exterior loop).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Loop {
    pub kind: LoopKind,
    pub closing: Option<Arc>,
    pub branches: Vec<Arc>,
    pub intervals: Vec<Interval>,
    pub unpaired: usize,
}

impl Loop {
    /// Number of arcs bounding the loop, closing arc included.
    pub fn pair_count(&self) -> usize {
        self.branches.len() + usize::from(self.closing.is_some())
    }

    /// Every backbone position that belongs to the loop: unpaired bases plus
    /// the endpoints of the closing arc and of the branches.
    pub fn positions(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .intervals
            .iter()
            .flat_map(|iv| iv.positions())
            .collect();
        if let Some(c) = self.closing {
            out.push(c.i);
            out.push(c.j);
        }
        for b in &self.branches {
            out.push(b.i);
            out.push(b.j);
        }
        out.sort_unstable();
        out
    }
}

/// All loops of a structure, exterior first and every loop after the loop
/// holding its closing arc as a branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopDecomposition {
    pub loops: Vec<Loop>,
    closing_loop: BTreeMap<Arc, usize>,
    parent_loop: BTreeMap<Arc, usize>,
}

impl LoopDecomposition {
    pub fn exterior(&self) -> &Loop {
        &self.loops[0]
    }

    /// The loop in which `arc` is the closing (maximal) arc.
    pub fn closing_loop_of(&self, arc: &Arc) -> Option<&Loop> {
        self.closing_loop.get(arc).map(|&k| &self.loops[k])
    }

    /// The loop in which `arc` is a branch.
    pub fn parent_loop_of(&self, arc: &Arc) -> Option<&Loop> {
        self.parent_loop.get(arc).map(|&k| &self.loops[k])
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }
}

/// Direct children of the region `(lo, hi)` exclusive, walking the backbone
/// and jumping over each branch.
fn branches_between(s: &SecondaryStructure, lo: usize, hi: usize) -> (Vec<Arc>, Vec<Interval>) {
    let mut branches = Vec::new();
    let mut intervals = Vec::new();
    let mut start = lo + 1;
    let mut p = lo + 1;
    while p < hi {
        match s.partner(p) {
            Some(q) if q > p => {
                intervals.push(Interval { start, end: p - 1 });
                branches.push(Arc::new(p, q));
                p = q + 1;
                start = p;
            }
            _ => p += 1,
        }
    }
    intervals.push(Interval { start, end: hi - 1 });
    (branches, intervals)
}

fn classify(branches: &[Arc], intervals: &[Interval]) -> LoopKind {
    match branches.len() {
        0 => LoopKind::Hairpin,
        1 => match (intervals[0].is_empty(), intervals[1].is_empty()) {
            (true, true) => LoopKind::Helix,
            (false, false) => LoopKind::Interior,
            _ => LoopKind::Bulge,
        },
        _ => LoopKind::Multi,
    }
}

pub fn decompose(s: &SecondaryStructure) -> LoopDecomposition {
    let mut loops = Vec::with_capacity(s.arcs().len() + 1);
    let mut closing_loop = BTreeMap::new();
    let mut parent_loop = BTreeMap::new();

    let (branches, intervals) = branches_between(s, 0, s.len() + 1);
    for b in &branches {
        parent_loop.insert(*b, 0);
    }
    let unpaired = intervals.iter().map(Interval::len).sum();
    loops.push(Loop {
        kind: LoopKind::Exterior,
        closing: None,
        branches,
        intervals,
        unpaired,
    });

    // Arcs sorted by left endpoint are already in pre-order.
    for arc in s.arcs() {
        let (branches, intervals) = branches_between(s, arc.i, arc.j);
        let k = loops.len();
        closing_loop.insert(*arc, k);
        for b in &branches {
            parent_loop.insert(*b, k);
        }
        let unpaired = intervals.iter().map(Interval::len).sum();
        loops.push(Loop {
            kind: classify(&branches, &intervals),
            closing: Some(*arc),
            branches,
            intervals,
            unpaired,
        });
    }

    LoopDecomposition {
        loops,
        closing_loop,
        parent_loop,
    }
}
