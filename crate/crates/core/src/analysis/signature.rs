//! Refolding frequency and energy-gap signature of an ensemble.

use rayon::prelude::*;
use serde::Serialize;

use super::spectrum::{energy_spectrum, EnergyHistogram, DEFAULT_BIN_WIDTH};
use crate::energy::{structure_energy, EnergyParams};
use crate::error::Error;
use crate::fold::Folder;
use crate::sampler::{draw_rng, sample_ensemble};
use crate::sequence::Sequence;
use crate::structure::{SecondaryStructure, StructureCounts};

pub const DEFAULT_BASELINES: usize = 5;

/// Order statistics of a sample, quartiles by linear interpolation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

impl Summary {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = p * (v.len() - 1) as f64;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            v[lo] + (h - lo as f64) * (v[hi] - v[lo])
        };
        Some(Summary {
            min: v[0],
            q1: q(0.25),
            median: q(0.5),
            q3: q(0.75),
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
        })
    }
}

/// How an ensemble of sequences designed for one structure folds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleSignature {
    pub structure: String,
    pub count: usize,
    /// Sequences whose mfe structure is the target.
    pub refolded: usize,
    /// `refolded / count`.
    pub ifr: f64,
    /// Sequences with `delta_eta == 0`; differs from `refolded` when the
    /// mfe is degenerate or the target lies outside the folding model.
    pub zero_gap: usize,
    /// `|eta(sigma, S) - eta(sigma, mfe(sigma))|` per sequence, kcal/mol.
    pub delta_eta: Vec<f64>,
    pub summary: Option<Summary>,
    /// `eta(sigma, S)` histogram, overall and for refolding sequences.
    pub spectrum: EnergyHistogram,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignatureReport {
    pub target: EnsembleSignature,
    pub baselines: Vec<EnsembleSignature>,
    pub baseline_mean_ifr: Option<f64>,
    pub baseline_mean_median_delta_eta: Option<f64>,
}

/// Fold every sequence and compare it against `s`.
pub fn ensemble_signature(
    folder: &Folder<'_>,
    params: &EnergyParams,
    s: &SecondaryStructure,
    sequences: &[Sequence],
) -> Result<EnsembleSignature, Error> {
    let rows = sequences
        .par_iter()
        .map(|seq| {
            let eta = structure_energy(params, seq, s)?;
            let folded = folder.mfe(seq);
            let gap = (eta.hundredths() as i64 - folded.energy.hundredths() as i64).abs();
            Ok((folded.structure == *s, gap, eta))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let refolded = rows.iter().filter(|r| r.0).count();
    let zero_gap = rows.iter().filter(|r| r.1 == 0).count();
    let delta_eta: Vec<f64> = rows.iter().map(|r| r.1 as f64 / 100.0).collect();
    let etas: Vec<_> = rows.iter().map(|r| r.2).collect();
    let flags: Vec<bool> = rows.iter().map(|r| r.0).collect();
    let spectrum = energy_spectrum(&etas, &flags, DEFAULT_BIN_WIDTH)?;
    Ok(EnsembleSignature {
        structure: s.dot_bracket(),
        count: sequences.len(),
        refolded,
        ifr: if sequences.is_empty() {
            0.0
        } else {
            refolded as f64 / sequences.len() as f64
        },
        zero_gap,
        summary: Summary::of(&delta_eta),
        delta_eta,
        spectrum,
    })
}

/// Seed of the ensemble for baseline `b`, decorrelated from the target's.
fn baseline_seed(seed: u64, b: usize) -> u64 {
    seed ^ (b as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Signature of an ensemble of `count` sequences sampled for `s` with `seed`,
/// next to `baselines` uniformly random structures of the same length, each
/// with its own ensemble of the same size.
pub fn signature(
    folder: &Folder<'_>,
    params: &EnergyParams,
    s: &SecondaryStructure,
    count: usize,
    baselines: usize,
    seed: u64,
) -> Result<SignatureReport, Error> {
    let seqs = |st: &SecondaryStructure, seed| -> Vec<Sequence> {
        sample_ensemble(params, st, count, seed)
            .into_iter()
            .map(|d| d.sequence)
            .collect()
    };
    let target = ensemble_signature(folder, params, s, &seqs(s, seed))?;
    let counts = StructureCounts::new(s.len());
    let baselines = (0..baselines)
        .map(|b| {
            let mut rng = draw_rng(seed, u64::MAX - b as u64);
            let random = counts.sample(s.len(), &mut rng);
            ensemble_signature(
                folder,
                params,
                &random,
                &seqs(&random, baseline_seed(seed, b)),
            )
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mean = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    Ok(SignatureReport {
        baseline_mean_ifr: mean(baselines.iter().map(|b| b.ifr).collect()),
        baseline_mean_median_delta_eta: mean(
            baselines
                .iter()
                .filter_map(|b| b.summary.map(|s| s.median))
                .collect(),
        ),
        target,
        baselines,
    })
}
