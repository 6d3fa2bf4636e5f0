mod common;

use std::collections::{BTreeMap, HashMap};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_distribution, chi_square_p, corpus};
use seqsem::analysis::{
    energy_spectrum, ensemble_signature, heat_map_exact, heat_map_sampled, top_patterns,
    EnergyHistogram,
};
use seqsem::logspace::LogWeight;
use seqsem::partition::pattern_partition;
use seqsem::structure::{sample_uniform_structure, StructureCounts};
use seqsem::{
    mccaskill_partition, mfe_fold, parse_dot_bracket, partition_function, refolds_to,
    sample_ensemble, structure_energy, Arc, EnergyParams, Folder, Nucleotide, PartitionEngine,
    PatternConstraint, SecondaryStructure, Sequence,
};

fn params() -> EnergyParams {
    EnergyParams::default_set()
}

fn arb_structure(max_n: usize) -> impl Strategy<Value = SecondaryStructure> {
    (1..=max_n, any::<u64>())
        .prop_map(|(n, seed)| sample_uniform_structure(n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// `s` restricted to `[a.i, a.j]`, plus the arcs of `other` that lie wholly
/// outside that span or enclose it.
fn replace_outside(
    s: &SecondaryStructure,
    a: Arc,
    other: &SecondaryStructure,
) -> SecondaryStructure {
    let inside = s
        .arcs()
        .iter()
        .filter(|b| a.i <= b.i && b.j <= a.j)
        .copied();
    let outside = other
        .arcs()
        .iter()
        .filter(|b| b.j < a.i || b.i > a.j || (b.i < a.i && b.j > a.j))
        .copied();
    SecondaryStructure::new(s.len(), inside.chain(outside)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arc_tables_depend_only_on_their_span(s in arb_structure(40), seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        prop_assume!(!s.arcs().is_empty());
        let p = params();
        let a = s.arcs()[pick.index(s.arcs().len())];
        let other = sample_uniform_structure(s.len(), &mut ChaCha8Rng::seed_from_u64(seed));
        let t = replace_outside(&s, a, &other);
        let q1 = partition_function(&p, &s);
        let q2 = partition_function(&p, &t);
        let t1 = q1.table(s.arc_index(&a).unwrap());
        let t2 = q2.table(t.arc_index(&a).unwrap());
        for x in 0..4 {
            for y in 0..4 {
                prop_assert_eq!(t1[x][y].ln().to_bits(), t2[x][y].ln().to_bits());
            }
        }
    }

    #[test]
    fn narrowing_never_increases(s in arb_structure(24), seed in any::<u64>()) {
        let p = params();
        let n = s.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = PatternConstraint::wildcard(n);
        let mut last = pattern_partition(&p, &s, &c).unwrap().ln();
        for _ in 0..6 {
            let pos = rand::Rng::gen_range(&mut rng, 1..=n);
            let keep: Vec<Nucleotide> = c
                .allowed(pos)
                .into_iter()
                .filter(|_| rand::Rng::gen_bool(&mut rng, 0.6))
                .collect();
            if keep.is_empty() {
                continue;
            }
            c.narrow(pos, &keep).unwrap();
            let now = pattern_partition(&p, &s, &c).unwrap().ln();
            prop_assert!(now <= last + 1e-12 * last.abs().max(1.0), "{} > {}", now, last);
            last = now;
        }
    }

    #[test]
    fn patterns_partition_the_ensemble(s in arb_structure(16), start in 1usize..16, width in 1usize..3) {
        let p = params();
        let n = s.len();
        prop_assume!(start + width - 1 <= n);
        let total = partition_function(&p, &s).log_q();
        let mut sum = LogWeight::ZERO;
        for code in 0..1usize << (2 * width) {
            let pat: Vec<Nucleotide> = (0..width).rev().map(|b| Nucleotide::from_index((code >> (2 * b)) & 3)).collect();
            let c = PatternConstraint::pattern(n, start, &pat).unwrap();
            sum = sum.plus(pattern_partition(&p, &s, &c).unwrap());
        }
        prop_assert!((sum.ln() - total.ln()).abs() < 1e-9);
    }

    #[test]
    fn sampled_energies_are_recomputable(s in arb_structure(60), seed in any::<u64>()) {
        let p = params();
        for d in sample_ensemble(&p, &s, 20, seed) {
            prop_assert_eq!(structure_energy(&p, &d.sequence, &s).unwrap(), d.energy);
            prop_assert!(d.energy.is_finite());
        }
    }

    #[test]
    fn fold_bounds_and_reflexivity(bases in prop::collection::vec(0usize..4, 1..40)) {
        let p = params();
        let seq = Sequence::new(bases.into_iter().map(Nucleotide::from_index).collect()).unwrap();
        let f = mfe_fold(&p, &seq);
        prop_assert!(f.energy.hundredths() <= 0);
        prop_assert_eq!(structure_energy(&p, &seq, &f.structure).unwrap(), f.energy);
        prop_assert!(refolds_to(&p, &seq, &f.structure).unwrap());
        prop_assert_eq!(&mfe_fold(&p, &seq), &f);
        let q = mccaskill_partition(&p, &seq).log_q.ln();
        prop_assert!(q >= 0.0);
        prop_assert!(q >= f.energy.log_boltzmann(p.rt()) - 1e-9);
    }
}

#[test]
fn sampler_matches_exact_law_on_small_corpus() {
    let p = params();
    for (k, s) in corpus().iter().enumerate().filter(|(_, s)| s.len() <= 9) {
        let exact = brute_distribution(&p, s);
        let mut keys: Vec<&String> = exact.keys().collect();
        keys.sort();
        let draws = 20_000;
        let mut counts: HashMap<String, u64> = HashMap::new();
        for d in sample_ensemble(&p, s, draws, 500 + k as u64) {
            *counts.entry(d.sequence.to_string()).or_default() += 1;
        }
        assert!(counts.keys().all(|k| exact.contains_key(k)), "{s}");
        // Supports too large for per-sequence bins are tested on the law of
        // the sequence's probability, i.e. sequences grouped by weight.
        let bin = |k: &str| {
            if exact.len() * 5 <= draws {
                k.to_string()
            } else {
                format!("{:.9e}", exact[k])
            }
        };
        let mut observed: BTreeMap<String, u64> = BTreeMap::new();
        let mut expected: BTreeMap<String, f64> = BTreeMap::new();
        for k in &keys {
            *observed.entry(bin(k)).or_default() += counts.get(*k).copied().unwrap_or(0);
            *expected.entry(bin(k)).or_default() += exact[*k] * draws as f64;
        }
        let observed: Vec<u64> = observed.into_values().collect();
        let expected: Vec<f64> = expected.into_values().collect();
        if expected.len() < 2 {
            continue;
        }
        let pv = chi_square_p(&observed, &expected);
        assert!(pv > 0.01, "{s}: p = {pv}");
    }
}

#[test]
fn open_chain_samples_are_uniform() {
    let p = params();
    let s = SecondaryStructure::empty(5);
    let draws = 1_000_000;
    let mut counts = vec![0u64; 1024];
    for d in sample_ensemble(&p, &s, draws, 77) {
        let code = d
            .sequence
            .bases()
            .iter()
            .fold(0usize, |c, b| c * 4 + b.index());
        counts[code] += 1;
    }
    let tv: f64 = counts
        .iter()
        .map(|&c| (c as f64 / draws as f64 - 1.0 / 1024.0).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 0.02, "TV {tv}");
    assert!(chi_square_p(&counts, &[draws as f64 / 1024.0; 1024]) > 0.01);

    let s = SecondaryStructure::empty(8);
    let ensemble = sample_ensemble(&p, &s, 10_000, 78);
    for pos in 1..=8 {
        for b in Nucleotide::ALL {
            let f = ensemble.iter().filter(|d| d.sequence.at(pos) == b).count() as f64 / 10_000.0;
            assert!((f - 0.25).abs() < 0.015, "position {pos} {b:?}: {f}");
        }
    }
}

#[test]
fn sampled_patterns_match_exact_probabilities() {
    let p = params();
    let s = parse_dot_bracket("((....))").unwrap();
    let engine = PartitionEngine::new(&p, &s);
    let seqs: Vec<Sequence> = sample_ensemble(&p, &s, 50_000, 5)
        .into_iter()
        .map(|d| d.sequence)
        .collect();
    let top = top_patterns(&engine, &seqs, 3, 6, 20).unwrap();
    assert_eq!(top.len(), 20);
    for r in &top {
        assert!(
            (r.frequency - r.probability).abs() < 3.0 * r.standard_error.max(1e-12) + 1e-12,
            "{}: {} vs {}",
            r.pattern,
            r.frequency,
            r.probability
        );
    }
    assert!(top
        .windows(2)
        .all(|w| w[0].count > w[1].count
            || (w[0].count == w[1].count && w[0].pattern < w[1].pattern)));

    let open = SecondaryStructure::empty(6);
    let engine = PartitionEngine::new(&p, &open);
    let seqs: Vec<Sequence> = sample_ensemble(&p, &open, 1000, 6)
        .into_iter()
        .map(|d| d.sequence)
        .collect();
    for r in top_patterns(&engine, &seqs, 2, 3, 3).unwrap() {
        assert!((r.probability - 0.0625).abs() < 1e-12);
    }
}

#[test]
fn heat_maps() {
    let p = params();
    let s = parse_dot_bracket("((....))").unwrap();
    let engine = PartitionEngine::new(&p, &s);
    let exact = heat_map_exact(&engine, 4, 5).unwrap();
    assert_eq!(
        exact.max_abs_diff(&heat_map_exact(&engine, 4, 5).unwrap()),
        0.0
    );
    let seqs: Vec<Sequence> = sample_ensemble(&p, &s, 100_000, 12)
        .into_iter()
        .map(|d| d.sequence)
        .collect();
    let big = heat_map_sampled(&seqs, 8, 4).unwrap();
    let small = heat_map_sampled(&seqs[..10_000], 8, 4).unwrap();
    let (d_big, d_small) = (exact.max_abs_diff(&big), exact.max_abs_diff(&small));
    assert!(d_big < 0.02, "{d_big}");
    assert!(d_big < d_small, "{d_big} vs {d_small}");
    assert!(big
        .iter()
        .chain(exact.iter())
        .all(|(_, _, r)| (0.0..=1.0).contains(&r)));

    // A column fixed by construction is fully determined.
    let fixed: Vec<Sequence> = seqs[..100]
        .iter()
        .map(|q| {
            let mut b = q.bases().to_vec();
            b[2] = Nucleotide::G;
            b[3] = Nucleotide::A;
            Sequence::new(b).unwrap()
        })
        .collect();
    let m = heat_map_sampled(&fixed, 8, 2).unwrap();
    assert_eq!(m.get(3, 4), Some(1.0));
}

#[test]
fn open_chain_signature_gap_is_the_mfe_depth() {
    let p = params();
    let folder = Folder::new(&p);
    let s = SecondaryStructure::empty(20);
    let seqs: Vec<Sequence> = sample_ensemble(&p, &s, 200, 13)
        .into_iter()
        .map(|d| d.sequence)
        .collect();
    let sig = ensemble_signature(&folder, &p, &s, &seqs).unwrap();
    for (q, gap) in seqs.iter().zip(&sig.delta_eta) {
        let mfe = folder.mfe(q);
        assert_eq!(*gap, -mfe.energy.kcal());
        assert_eq!(
            *gap == 0.0,
            mfe.structure.arcs().is_empty() || mfe.energy.hundredths() == 0
        );
    }
    assert!(sig.refolded <= sig.zero_gap);
}

#[test]
fn energy_spectra() {
    let p = params();
    let s = parse_dot_bracket("..((((((....))))))..").unwrap();
    let folder = Folder::new(&p);
    let draws = sample_ensemble(&p, &s, 5000, 14);
    let energies: Vec<_> = draws.iter().map(|d| d.energy).collect();
    let all = energy_spectrum(&energies, &vec![true; energies.len()], 0.5).unwrap();
    assert_eq!(all.all, all.refolding);
    let none = energy_spectrum(&energies, &vec![false; energies.len()], 0.5).unwrap();
    assert!(none.refolding.iter().all(|&c| c == 0));

    let flags: Vec<bool> = draws
        .iter()
        .map(|d| folder.mfe(&d.sequence).structure == s)
        .collect();
    let h = energy_spectrum(&energies, &flags, 0.5).unwrap();
    let refolding: usize = h.refolding.iter().sum();
    assert!(refolding > 0);
    // Refolding sequences are spread over the spectrum, not piled up at the
    // lowest-energy bin.
    assert!(h.refolding[0] * 2 < refolding, "{:?}", h.refolding);
    assert_ne!(EnergyHistogram::mode(&h.refolding), Some(0));
}

#[test]
fn uniform_structure_counts_are_consistent() {
    let counts = StructureCounts::new(30);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in [0usize, 1, 4, 5, 17, 30] {
        let s = counts.sample(n, &mut rng);
        assert_eq!(s.len(), n);
    }
}
