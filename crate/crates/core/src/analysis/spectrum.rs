//! Histograms of sampled energies, overall and for refolding sequences.

use serde::Serialize;

use crate::energy::Energy;
use crate::error::{AnalysisError, Error};

pub const DEFAULT_BIN_WIDTH: f64 = 0.5;

/// Bin `k` covers `[origin + k * bin_width, origin + (k + 1) * bin_width)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyHistogram {
    pub bin_width: f64,
    pub origin: f64,
    pub all: Vec<usize>,
    pub refolding: Vec<usize>,
}

impl EnergyHistogram {
    pub fn bin_start(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.bin_width
    }

    /// Index of the fullest bin of `counts`, the lowest on ties.
    pub fn mode(counts: &[usize]) -> Option<usize> {
        let max = *counts.iter().max()?;
        (max > 0).then(|| counts.iter().position(|&c| c == max).expect("max exists"))
    }
}

/// Histogram of the finite `energies`, with the subset flagged in `refolds`.
pub fn energy_spectrum(
    energies: &[Energy],
    refolds: &[bool],
    bin_width: f64,
) -> Result<EnergyHistogram, Error> {
    if energies.len() != refolds.len() {
        return Err(AnalysisError::Mismatch(format!(
            "{} energies but {} refolding flags",
            energies.len(),
            refolds.len()
        ))
        .into());
    }
    if !(bin_width > 0.0) {
        return Err(
            AnalysisError::Mismatch(format!("bin width {bin_width} is not positive")).into(),
        );
    }
    let finite: Vec<(f64, bool)> = energies
        .iter()
        .zip(refolds)
        .filter(|(e, _)| e.is_finite())
        .map(|(e, r)| (e.kcal(), *r))
        .collect();
    let lo = finite.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    if finite.is_empty() {
        return Ok(EnergyHistogram {
            bin_width,
            origin: 0.0,
            all: Vec::new(),
            refolding: Vec::new(),
        });
    }
    let origin = (lo / bin_width).floor() * bin_width;
    let bin = |e: f64| ((e - origin) / bin_width + 1e-9).floor() as usize;
    let bins = finite.iter().map(|x| bin(x.0)).max().expect("non-empty") + 1;
    let mut all = vec![0; bins];
    let mut refolding = vec![0; bins];
    for &(e, r) in &finite {
        all[bin(e)] += 1;
        if r {
            refolding[bin(e)] += 1;
        }
    }
    Ok(EnergyHistogram {
        bin_width,
        origin,
        all,
        refolding,
    })
}
