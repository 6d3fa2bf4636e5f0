//! Most frequent patterns of an interval in a sample, with their exact
//! probabilities alongside.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{AnalysisError, Error};
use crate::partition::{PartitionEngine, PatternConstraint};
use crate::sequence::{Nucleotide, Sequence};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternReport {
    pub pattern: String,
    pub count: usize,
    pub frequency: f64,
    /// Exact `P(pattern | S)`.
    pub probability: f64,
    /// Binomial standard error of `frequency` around `probability`.
    pub standard_error: f64,
}

/// The `k` most frequent patterns on `[start, end]` in `sample`, by
/// frequency descending and then lexicographically.
pub fn top_patterns(
    engine: &PartitionEngine<'_>,
    sample: &[Sequence],
    start: usize,
    end: usize,
    k: usize,
) -> Result<Vec<PatternReport>, Error> {
    let n = engine.structure().len();
    if start == 0 || end < start || end > n {
        return Err(AnalysisError::BadInterval {
            start,
            end,
            n,
            max_width: n,
        }
        .into());
    }
    if sample.is_empty() {
        return Err(AnalysisError::Mismatch("empty sample".into()).into());
    }
    let mut counts: HashMap<Vec<Nucleotide>, usize> = HashMap::new();
    for seq in sample {
        if seq.len() != n {
            return Err(Error::LengthMismatch {
                sequence: seq.len(),
                structure: n,
            });
        }
        *counts
            .entry(seq.bases()[start - 1..end].to_vec())
            .or_default() += 1;
    }
    let mut ranked: Vec<(String, Vec<Nucleotide>, usize)> = counts
        .into_iter()
        .map(|(p, c)| (p.iter().map(|b| b.as_char()).collect(), p, c))
        .collect();
    ranked.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    let total = sample.len() as f64;
    ranked
        .into_iter()
        .map(|(pattern, bases, count)| {
            let probability = engine.probability(&PatternConstraint::pattern(n, start, &bases)?)?;
            Ok(PatternReport {
                pattern,
                count,
                frequency: count as f64 / total,
                probability,
                standard_error: (probability * (1.0 - probability) / total).sqrt(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::EnergyParams;
    use crate::structure::SecondaryStructure;

    #[test]
    fn ordering_and_probabilities() {
        let p = EnergyParams::default_set();
        let s = SecondaryStructure::empty(3);
        let engine = PartitionEngine::new(&p, &s);
        let sample: Vec<Sequence> = ["GAC", "UAC", "GAA", "CAU", "UAG"]
            .iter()
            .map(|x| x.parse().unwrap())
            .collect();
        let top = top_patterns(&engine, &sample, 1, 1, 2).unwrap();
        let names: Vec<&str> = top.iter().map(|r| r.pattern.as_str()).collect();
        assert_eq!(names, ["G", "U"]);
        assert!((top[0].probability - 0.25).abs() < 1e-12);
        assert_eq!(top[0].frequency, 0.4);
        assert!(top_patterns(&engine, &sample, 2, 4, 1).is_err());
    }
}
