//! Pseudoknot-free secondary structures.
//!
//! Positions are 1-based in every public interface. An arc `(i, j)` needs
//! `j - i > 3`, i.e. every hairpin encloses at least three unpaired bases.

mod loops;
mod random;

pub use loops::{decompose, Interval, Loop, LoopDecomposition, LoopKind};
pub use random::{
    count_structures, enumerate_structures, sample_uniform_structure, unrank_structure,
    StructureCounts,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::StructureError;

/// Smallest allowed `j - i` for an arc.
pub const MIN_ARC_SPAN: usize = 4;

/// A base pair between 1-based positions `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub i: usize,
    pub j: usize,
}

impl Arc {
    pub fn new(i: usize, j: usize) -> Self {
        Arc { i, j }
    }

    /// `r < s` nested strictly inside this arc.
    pub fn contains(&self, other: &Arc) -> bool {
        self.i < other.i && other.j < self.j
    }

    pub fn crosses(&self, other: &Arc) -> bool {
        (self.i < other.i && other.i < self.j && self.j < other.j)
            || (other.i < self.i && self.i < other.j && other.j < self.j)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// A non-crossing arc set on `n` backbone positions.
///
/// Arcs are kept sorted by their left endpoint, which for nested arcs is a
/// pre-order walk of the arc forest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SecondaryStructure {
    n: usize,
    arcs: Vec<Arc>,
    partner: Vec<Option<usize>>,
}

impl SecondaryStructure {
    /// Validates and builds a structure. Arcs may be given in any order.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self, StructureError> {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        arcs.sort();
        let mut partner = vec![None; n + 1];
        for a in &arcs {
            if a.i >= a.j {
                return Err(StructureError::Unordered { i: a.i, j: a.j });
            }
            if a.i == 0 || a.j > n {
                return Err(StructureError::OutOfRange { i: a.i, j: a.j, n });
            }
            if a.j - a.i < MIN_ARC_SPAN {
                return Err(StructureError::HairpinTooShort { i: a.i, j: a.j });
            }
            for p in [a.i, a.j] {
                if partner[p].is_some() {
                    return Err(StructureError::PositionReused { position: p });
                }
            }
            partner[a.i] = Some(a.j);
            partner[a.j] = Some(a.i);
        }
        // Sorted by i: a stack of open arcs detects crossings in one pass.
        let mut open: Vec<Arc> = Vec::new();
        for a in &arcs {
            while let Some(top) = open.last() {
                if top.j < a.i {
                    open.pop();
                } else {
                    break;
                }
            }
            if let Some(top) = open.last() {
                if a.j > top.j {
                    return Err(StructureError::Crossing {
                        i: top.i,
                        j: top.j,
                        r: a.i,
                        s: a.j,
                    });
                }
            }
            open.push(*a);
        }
        Ok(SecondaryStructure { n, arcs, partner })
    }

    /// The open chain with no arcs.
    pub fn empty(n: usize) -> Self {
        SecondaryStructure {
            n,
            arcs: Vec::new(),
            partner: vec![None; n + 1],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Partner of a 1-based position.
    pub fn partner(&self, position: usize) -> Option<usize> {
        self.partner.get(position).copied().flatten()
    }

    pub fn arc_index(&self, arc: &Arc) -> Option<usize> {
        self.arcs.binary_search(arc).ok()
    }

    pub fn dot_bracket(&self) -> String {
        (1..=self.n)
            .map(|p| match self.partner(p) {
                Some(q) if q > p => '(',
                Some(_) => ')',
                None => '.',
            })
            .collect()
    }

    /// Pair-list text: the length on the first line, then one `i j` per arc.
    pub fn pair_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for a in &self.arcs {
            out.push_str(&format!("{} {}\n", a.i, a.j));
        }
        out
    }
}

impl fmt::Display for SecondaryStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dot_bracket())
    }
}

/// Parse a dot-bracket string. Surrounding whitespace is ignored.
pub fn parse_dot_bracket(text: &str) -> Result<SecondaryStructure, StructureError> {
    let text = text.trim();
    let mut stack = Vec::new();
    let mut arcs = Vec::new();
    let mut n = 0;
    for (offset, c) in text.chars().enumerate() {
        let column = offset + 1;
        n = column;
        match c {
            '.' => {}
            '(' => stack.push(column),
            ')' => {
                let i = stack
                    .pop()
                    .ok_or(StructureError::UnmatchedClose { column })?;
                if column - i < MIN_ARC_SPAN {
                    return Err(StructureError::HairpinTooShort { i, j: column });
                }
                arcs.push(Arc::new(i, column));
            }
            found => return Err(StructureError::IllegalCharacter { column, found }),
        }
    }
    if let Some(&column) = stack.last() {
        return Err(StructureError::UnmatchedOpen { column });
    }
    SecondaryStructure::new(n, arcs)
}

/// Parse the pair-list format written by [`SecondaryStructure::pair_list`].
/// `#` starts a comment.
pub fn parse_pair_list(text: &str) -> Result<SecondaryStructure, StructureError> {
    let mut n = None;
    let mut arcs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let line_no = lineno + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| StructureError::Syntax {
                line: line_no,
                message: format!("not a position: {s:?}"),
            })
        };
        match (n, fields.as_slice()) {
            (None, [len]) => n = Some(parse(len)?),
            (Some(_), [i, j]) => arcs.push(Arc::new(parse(i)?, parse(j)?)),
            (None, _) => {
                return Err(StructureError::Syntax {
                    line: line_no,
                    message: "expected the structure length".into(),
                })
            }
            (Some(_), _) => {
                return Err(StructureError::Syntax {
                    line: line_no,
                    message: "expected two positions `i j`".into(),
                })
            }
        }
    }
    let n = n.ok_or(StructureError::Missing)?;
    SecondaryStructure::new(n, arcs)
}
