//! Nucleotides and RNA sequences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SequenceError;

/// One of the four RNA bases.
///
/// The numeric encoding (`A = 0, U = 1, C = 2, G = 3`) is used for every
/// 4-wide table in the crate and is stable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Nucleotide {
    A = 0,
    U = 1,
    C = 2,
    G = 3,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::U, Nucleotide::C, Nucleotide::G];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Nucleotide {
        Self::ALL[index & 3]
    }

    pub fn from_char(c: char) -> Option<Nucleotide> {
        match c.to_ascii_uppercase() {
            'A' => Some(Nucleotide::A),
            'U' | 'T' => Some(Nucleotide::U),
            'C' => Some(Nucleotide::C),
            'G' => Some(Nucleotide::G),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::U => 'U',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
        }
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An RNA sequence. `T` is read as `U`; case is ignored on input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(Vec<Nucleotide>);

impl Sequence {
    pub fn new(bases: Vec<Nucleotide>) -> Result<Self, SequenceError> {
        if bases.is_empty() {
            return Err(SequenceError::Empty);
        }
        Ok(Sequence(bases))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bases(&self) -> &[Nucleotide] {
        &self.0
    }

    /// Base at a 1-based position.
    pub fn at(&self, position: usize) -> Nucleotide {
        self.0[position - 1]
    }

    /// Fraction of positions carrying the same base.
    pub fn identity(&self, other: &Sequence) -> f64 {
        assert_eq!(self.len(), other.len(), "identity needs equal lengths");
        let same = self.0.iter().zip(&other.0).filter(|(a, b)| a == b).count();
        same as f64 / self.len() as f64
    }
}

impl From<Sequence> for Vec<Nucleotide> {
    fn from(s: Sequence) -> Self {
        s.0
    }
}

impl FromStr for Sequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let mut bases = Vec::with_capacity(trimmed.len());
        for (offset, c) in trimmed.chars().enumerate() {
            match Nucleotide::from_char(c) {
                Some(b) => bases.push(b),
                None => {
                    return Err(SequenceError::IllegalCharacter {
                        column: offset + 1,
                        found: c,
                    })
                }
            }
        }
        Sequence::new(bases)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

/// A named sequence read from FASTA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastaRecord {
    pub name: String,
    pub sequence: Sequence,
}

/// Parse FASTA text. Lines before the first header are accepted as a single
/// unnamed record so that a bare sequence line also works.
pub fn parse_fasta(text: &str) -> Result<Vec<FastaRecord>, SequenceError> {
    let mut records = Vec::new();
    let mut name: Option<String> = None;
    let mut body = String::new();
    let mut body_line = 0;

    let mut flush = |name: &mut Option<String>, body: &mut String, line: usize| {
        if name.is_none() && body.is_empty() {
            return Ok(());
        }
        let sequence = body.parse::<Sequence>().map_err(|e| e.at_line(line))?;
        records.push(FastaRecord {
            name: name.take().unwrap_or_default(),
            sequence,
        });
        body.clear();
        Ok(())
    };

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            flush(&mut name, &mut body, body_line)?;
            name = Some(header.trim().to_string());
            body_line = lineno + 2;
        } else {
            if body.is_empty() {
                body_line = lineno + 1;
            }
            body.push_str(line);
        }
    }
    flush(&mut name, &mut body, body_line)?;
    if records.is_empty() {
        return Err(SequenceError::Empty);
    }
    Ok(records)
}
