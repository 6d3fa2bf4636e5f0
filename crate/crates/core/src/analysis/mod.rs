//! Ensemble analytics built on sampling, pattern probabilities and folding.

mod heatmap;
mod mi;
mod patterns;
mod signature;
mod spectrum;

pub use heatmap::{
    heat_map_exact, heat_map_sampled, HeatMap, HeatMapSource, BLACK_LEVEL, DEFAULT_EXACT_WINDOW,
    DEFAULT_SAMPLED_WINDOW,
};
pub use mi::{find_diverse_equal_scores, mi_score, MIScore};
pub use patterns::{top_patterns, PatternReport};
pub use signature::{
    ensemble_signature, signature, EnsembleSignature, SignatureReport, Summary, DEFAULT_BASELINES,
};
pub use spectrum::{energy_spectrum, EnergyHistogram, DEFAULT_BIN_WIDTH};

use crate::error::AnalysisError;

/// Shannon entropy in base 4 of a distribution given by its probabilities.
/// Zero probabilities contribute nothing.
pub fn entropy(probabilities: &[f64]) -> Result<f64, AnalysisError> {
    let mut total = 0.0;
    for &p in probabilities {
        if p < 0.0 || p.is_nan() {
            return Err(AnalysisError::NegativeFrequency(p));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-6 {
        return Err(AnalysisError::NotNormalized(total));
    }
    let ln4 = 4f64.ln();
    Ok(probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln() / ln4)
        .sum::<f64>()
        .max(0.0))
}

/// Heat of an interval of width `w` with pattern entropy `e`: `1 - e / w`,
/// clamped to `[0, 1]` against rounding.
pub fn heat(entropy: f64, width: usize) -> f64 {
    (1.0 - entropy / width as f64).clamp(0.0, 1.0)
}
