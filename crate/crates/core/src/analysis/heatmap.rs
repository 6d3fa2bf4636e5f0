//! Pattern-entropy heat maps over short intervals.

use serde::Serialize;

use super::{entropy, heat};
use crate::error::{AnalysisError, Error};
use crate::partition::{PartitionEngine, PatternConstraint};
use crate::sequence::{Nucleotide, Sequence};

/// Largest window the exact mode accepts by default.
pub const DEFAULT_EXACT_WINDOW: usize = 5;
pub const DEFAULT_SAMPLED_WINDOW: usize = 8;
/// Heat at and above which the grayscale rendering is black.
pub const BLACK_LEVEL: f64 = 0.59;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeatMapSource {
    Sampled { ensemble_size: usize },
    Exact,
}

/// `R[i][j]` for every interval `[i, j]` with `j - i + 1 <= window`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeatMap {
    pub n: usize,
    pub window: usize,
    pub source: HeatMapSource,
    /// Row `i - 1` holds widths `1..=window` starting at `i`; NaN past `n`.
    entries: Vec<f64>,
}

impl HeatMap {
    fn new(n: usize, window: usize, source: HeatMapSource) -> Self {
        HeatMap {
            n,
            window,
            source,
            entries: vec![f64::NAN; n * window],
        }
    }

    fn set(&mut self, i: usize, width: usize, value: f64) {
        self.entries[(i - 1) * self.window + width - 1] = value;
    }

    /// Heat of `[i, j]` (1-based), if the interval is inside the window.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        if i == 0 || j < i || j > self.n || j - i + 1 > self.window {
            return None;
        }
        Some(self.entries[(i - 1) * self.window + (j - i)])
    }

    /// All defined `(i, j, R)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..=self.n).flat_map(move |i| {
            (i..=(i + self.window - 1).min(self.n))
                .map(move |j| (i, j, self.get(i, j).expect("inside window")))
        })
    }

    /// Largest `|R - R'|` over the intervals both maps define.
    pub fn max_abs_diff(&self, other: &HeatMap) -> f64 {
        self.iter()
            .filter_map(|(i, j, r)| other.get(i, j).map(|s| (r - s).abs()))
            .fold(0.0, f64::max)
    }

    /// The widest interval with heat above `threshold`; among equally wide
    /// ones the hottest, then the leftmost.
    pub fn widest_above(&self, threshold: f64) -> Option<(usize, usize, f64)> {
        self.iter()
            .filter(|&(_, _, r)| r > threshold)
            .max_by(|a, b| {
                (a.1 - a.0)
                    .cmp(&(b.1 - b.0))
                    .then(a.2.total_cmp(&b.2))
                    .then(b.0.cmp(&a.0))
            })
    }

    /// `n x n` matrix, row `i` and column `j`; cells outside the window are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.n {
            let row: Vec<String> = (1..=self.n)
                .map(|j| {
                    self.get(i, j)
                        .map(crate::cli::format_sig)
                        .unwrap_or_default()
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Plain (P2) grayscale image, white for heat 0 and black from
    /// [`BLACK_LEVEL`] up; cells outside the window are white.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.n, self.n);
        for i in 1..=self.n {
            let row: Vec<String> = (1..=self.n)
                .map(|j| {
                    let r = self.get(i, j).unwrap_or(0.0);
                    let level = 255.0 * (1.0 - (r / BLACK_LEVEL).min(1.0));
                    format!("{}", level.round() as u8)
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn check_window(window: usize) -> Result<(), AnalysisError> {
    if window == 0 {
        return Err(AnalysisError::EmptyWindow);
    }
    Ok(())
}

/// Heat map from the pattern frequencies of a sample of equal-length sequences.
pub fn heat_map_sampled(sequences: &[Sequence], n: usize, window: usize) -> Result<HeatMap, Error> {
    check_window(window)?;
    if let Some(bad) = sequences.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch {
            sequence: bad.len(),
            structure: n,
        });
    }
    if sequences.is_empty() {
        return Err(AnalysisError::Mismatch("empty ensemble".into()).into());
    }
    let mut map = HeatMap::new(
        n,
        window,
        HeatMapSource::Sampled {
            ensemble_size: sequences.len(),
        },
    );
    let total = sequences.len() as f64;
    let mut codes = vec![0u32; sequences.len()];
    let mut sorted = Vec::with_capacity(sequences.len());
    for i in 1..=n {
        codes.iter_mut().for_each(|c| *c = 0);
        for width in 1..=window.min(n - i + 1) {
            let pos = i + width - 1;
            for (c, s) in codes.iter_mut().zip(sequences) {
                *c = *c * 4 + s.at(pos).index() as u32;
            }
            sorted.clear();
            sorted.extend_from_slice(&codes);
            sorted.sort_unstable();
            let mut freqs = Vec::new();
            let mut run = 1usize;
            for k in 1..=sorted.len() {
                if k < sorted.len() && sorted[k] == sorted[k - 1] {
                    run += 1;
                } else {
                    freqs.push(run as f64 / total);
                    run = 1;
                }
            }
            map.set(i, width, heat(entropy(&freqs)?, width));
        }
    }
    Ok(map)
}

/// Pattern with the given code, most significant base first.
pub(crate) fn decode_pattern(code: usize, width: usize) -> Vec<Nucleotide> {
    (0..width)
        .rev()
        .map(|k| Nucleotide::from_index((code >> (2 * k)) & 3))
        .collect()
}

/// Heat map from exact pattern probabilities: every one of the `4^w`
/// patterns of every interval is evaluated with the constrained partition
/// function. `limit` bounds the window.
pub fn heat_map_exact(
    engine: &PartitionEngine<'_>,
    window: usize,
    limit: usize,
) -> Result<HeatMap, Error> {
    check_window(window)?;
    if window > limit {
        return Err(AnalysisError::WindowTooLarge { window, limit }.into());
    }
    let n = engine.structure().len();
    let mut map = HeatMap::new(n, window, HeatMapSource::Exact);
    for i in 1..=n {
        for width in 1..=window.min(n - i + 1) {
            let probs = (0..1usize << (2 * width))
                .map(|code| {
                    let c = PatternConstraint::pattern(n, i, &decode_pattern(code, width))?;
                    engine.probability(&c)
                })
                .collect::<Result<Vec<f64>, Error>>()?;
            let total: f64 = probs.iter().sum();
            let normalized: Vec<f64> = probs.iter().map(|p| p / total).collect();
            map.set(i, width, heat(entropy(&normalized)?, width));
        }
    }
    Ok(map)
}
