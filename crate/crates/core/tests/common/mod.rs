//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use seqsem::energy::{loop_energy, structure_energy};
use seqsem::logspace::LogSum;
use seqsem::structure::{decompose, enumerate_structures, parse_dot_bracket};
use seqsem::{Energy, EnergyParams, Nucleotide, SecondaryStructure, Sequence};

/// Structures with `n <= 10` covering every loop type that fits, plus one
/// multiloop, which needs at least 12 positions.
pub const CORPUS: &[&str] = &[
    ".",
    ".....",
    "..........",
    "(...)",
    "(....)",
    "((...))",
    "((....))",
    ".((...)).",
    "(((...)))",
    "(((....)))",
    "((.(...)))",
    "(.(...).)",
    "((...)..)",
    "(..(...)).",
    "(.(...)..)",
    "(...)(...)",
    ".(...)....",
    "((.....)).",
    "(......)",
    "(.......).",
    "(........)",
    "..(....)..",
    ".(.(...).)",
    "((...)(...))",
];

pub fn corpus() -> Vec<SecondaryStructure> {
    CORPUS
        .iter()
        .map(|s| parse_dot_bracket(s).unwrap())
        .collect()
}

/// Every sequence of length `n`, in base-4 counting order.
pub fn all_sequences(n: usize) -> impl Iterator<Item = Sequence> {
    (0..1usize << (2 * n)).map(move |code| {
        Sequence::new(
            (0..n)
                .map(|k| Nucleotide::from_index((code >> (2 * (n - 1 - k))) & 3))
                .collect(),
        )
        .unwrap()
    })
}

/// `eta(sigma, S)` as the plain sum of loop energies.
pub fn direct_energy(params: &EnergyParams, seq: &Sequence, s: &SecondaryStructure) -> Energy {
    decompose(s)
        .loops
        .iter()
        .map(|l| loop_energy(params, seq, l).unwrap())
        .sum()
}

/// `ln Q(S)` over all `4^n` sequences. Energies are counted exactly by value
/// first so the final sum has few terms.
pub fn brute_log_q(params: &EnergyParams, s: &SecondaryStructure) -> f64 {
    let d = decompose(s);
    let mut by_energy: HashMap<i32, u64> = HashMap::new();
    for seq in all_sequences(s.len()) {
        let e: Energy = d
            .loops
            .iter()
            .map(|l| loop_energy(params, &seq, l).unwrap())
            .sum();
        if e.is_finite() {
            *by_energy.entry(e.hundredths()).or_default() += 1;
        }
    }
    let mut sum = LogSum::new();
    for (h, count) in by_energy {
        sum.add((count as f64).ln() + Energy::from_hundredths(h).log_boltzmann(params.rt()));
    }
    sum.total().ln()
}

/// Exact `P(sigma | S)` for every sequence with nonzero weight.
pub fn brute_distribution(params: &EnergyParams, s: &SecondaryStructure) -> HashMap<String, f64> {
    let log_q = brute_log_q(params, s);
    all_sequences(s.len())
        .filter_map(|seq| {
            let e = direct_energy(params, &seq, s);
            e.is_finite().then(|| {
                (
                    seq.to_string(),
                    (e.log_boltzmann(params.rt()) - log_q).exp(),
                )
            })
        })
        .collect()
}

/// Minimum energy over all structures, and `ln Q(sigma)`, by enumeration.
pub fn brute_fold(params: &EnergyParams, seq: &Sequence) -> (Energy, f64) {
    let mut best = Energy::INFINITE;
    let mut sum = LogSum::new();
    for s in enumerate_structures(seq.len()) {
        let e = structure_energy(params, seq, &s).unwrap();
        if e.hundredths() < best.hundredths() {
            best = e;
        }
        sum.add(e.log_boltzmann(params.rt()));
    }
    (best, sum.total().ln())
}

/// Upper-tail p-value of Pearson's statistic with bins of expected count
/// below 5 pooled into one.
pub fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let mut stat = 0.0;
    let mut bins = 0usize;
    let (mut pooled_o, mut pooled_e) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 5.0 {
            pooled_o += o as f64;
            pooled_e += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            bins += 1;
        }
    }
    if pooled_e > 0.0 {
        stat += (pooled_o - pooled_e).powi(2) / pooled_e;
        bins += 1;
    }
    assert!(bins >= 2, "too few bins for a chi-square test");
    1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(stat)
}
