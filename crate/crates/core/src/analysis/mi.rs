//! The per-sequence term of the sequence/structure mutual information,
//! `w * ln(w / (Q(S) * Q(sigma)))` with `w = exp(-eta / RT)`.

use serde::Serialize;

use crate::energy::{structure_energy, EnergyParams};
use crate::error::Error;
use crate::logspace::LogWeight;
use crate::sequence::Sequence;
use crate::structure::SecondaryStructure;

/// A signed quantity stored as `sign * exp(log_magnitude)`; the raw values
/// under- or overflow `f64` for realistic lengths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MIScore {
    pub log_magnitude: f64,
    /// -1, 0 or 1.
    pub sign: i8,
}

impl MIScore {
    pub const ZERO: MIScore = MIScore {
        log_magnitude: f64::NEG_INFINITY,
        sign: 0,
    };

    /// From `ln w`, `ln Q(S)` and `ln Q(sigma)`.
    pub fn from_logs(log_w: f64, log_q_s: f64, log_q_sigma: f64) -> MIScore {
        if log_w == f64::NEG_INFINITY {
            return MIScore::ZERO;
        }
        let ratio = log_w - log_q_s - log_q_sigma;
        if ratio == 0.0 {
            return MIScore::ZERO;
        }
        MIScore {
            log_magnitude: log_w + ratio.abs().ln(),
            sign: if ratio > 0.0 { 1 } else { -1 },
        }
    }

    /// The value as a plain float, possibly `0` or infinite.
    pub fn value(self) -> f64 {
        f64::from(self.sign) * self.log_magnitude.exp()
    }

    /// `|a - b| / max(|a|, |b|)`, computed in log space.
    pub fn relative_difference(self, other: MIScore) -> f64 {
        if self.sign == 0 && other.sign == 0 {
            return 0.0;
        }
        if self.sign != other.sign {
            return if self.sign == 0 || other.sign == 0 {
                1.0
            } else {
                2.0
            };
        }
        -(-(self.log_magnitude - other.log_magnitude).abs()).exp_m1()
    }
}

/// Score of `sigma` against `s` given both log partition functions.
pub fn mi_score(
    params: &EnergyParams,
    sigma: &Sequence,
    s: &SecondaryStructure,
    log_q_s: LogWeight,
    log_q_sigma: LogWeight,
) -> Result<MIScore, Error> {
    let eta = structure_energy(params, sigma, s)?;
    Ok(MIScore::from_logs(
        eta.log_boltzmann(params.rt()),
        log_q_s.ln(),
        log_q_sigma.ln(),
    ))
}

/// Three sequences whose scores agree pairwise within `tolerance`
/// (relative difference) while every pair has identity below `max_identity`.
/// Returns indices into `sequences`, ordered by score.
pub fn find_diverse_equal_scores(
    sequences: &[Sequence],
    scores: &[MIScore],
    tolerance: f64,
    max_identity: f64,
) -> Option<[usize; 3]> {
    assert_eq!(sequences.len(), scores.len());
    let mut order: Vec<usize> = (0..scores.len()).filter(|&k| scores[k].sign != 0).collect();
    order.sort_by(|&a, &b| {
        (scores[a].sign, scores[a].log_magnitude)
            .partial_cmp(&(scores[b].sign, scores[b].log_magnitude))
            .expect("finite scores")
    });
    let close = |a: usize, b: usize| scores[a].relative_difference(scores[b]) < tolerance;
    let diverse = |a: usize, b: usize| sequences[a].identity(&sequences[b]) < max_identity;
    // Sorted by magnitude, so a window of mutually close scores is contiguous.
    const SCAN: usize = 256;
    for (x, &a) in order.iter().enumerate() {
        let window: Vec<usize> = order[x + 1..]
            .iter()
            .copied()
            .take_while(|&b| close(a, b))
            .take(SCAN)
            .collect();
        for (y, &b) in window.iter().enumerate() {
            if !diverse(a, b) {
                continue;
            }
            if let Some(&c) = window[y + 1..]
                .iter()
                .find(|&&c| diverse(a, c) && diverse(b, c))
            {
                return Some([a, b, c]);
            }
        }
    }
    None
}
