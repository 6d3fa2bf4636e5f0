//! Boltzmann sampling of sequences for a fixed structure.
//!
//! Sequences are built top-down. Exterior unpaired bases are uniform and each
//! exterior branch gets its endpoint bases with probability proportional to
//! its arc table entry. Every other loop, given the bases already placed on
//! its closing arc, draws its branch endpoints and energy-relevant bases
//! jointly with probability
//!
//! ```text
//! e^{-E(L)/RT} * prod_t Q_t(x_pt, x_qt) / Q_ij(a, b)
//! ```
//!
//! and fills the remaining unpaired positions uniformly. The product of the
//! per-loop probabilities telescopes to `e^{-E(S)/RT} / Q(S)`.
//!
//! Randomness: draw `k` of an ensemble with seed `s` uses ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(s)` on stream `k`, so draws are independent of
//! thread count and of each other.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{loop_energy_unchecked, Energy, EnergyParams};
use crate::logspace::LogWeight;
use crate::partition::{
    enumerate_closed_loop, ArcTable, PartitionEngine, PatternConstraint, Plan, StructurePartition,
};
use crate::sequence::{Nucleotide, Sequence};
use crate::structure::{LoopKind, SecondaryStructure};

/// Name of the generator behind `sample_ensemble`.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-draw";

/// One Boltzmann-sampled sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledSequence {
    #[serde(serialize_with = "serialize_display")]
    pub sequence: Sequence,
    pub energy: Energy,
    /// `ln P(sequence | S)`, the sum of `stepwise_logs`.
    pub log_prob: f64,
    /// Per-loop log-probabilities, exterior loop first.
    pub stepwise_logs: Vec<f64>,
}

fn serialize_display<S: serde::Serializer>(s: &Sequence, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(s)
}

#[derive(Clone, Debug)]
struct Categorical {
    cumulative: Vec<f64>,
}

impl Categorical {
    fn from_logs(logs: &[f64]) -> Option<Self> {
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return None;
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = logs
            .iter()
            .map(|&l| {
                acc += (l - max).exp();
                acc
            })
            .collect();
        for c in &mut cumulative {
            *c /= acc;
        }
        Some(Categorical { cumulative })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        // First outcome whose cumulative mass exceeds u; zero-mass outcomes
        // never satisfy that before their predecessor does.
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

/// Distribution of one arc's endpoint bases when the enclosing loop does not
/// depend on them (exterior and multi-loops).
#[derive(Clone, Debug)]
struct BranchLaw {
    arc: usize,
    law: Categorical,
}

impl BranchLaw {
    fn new(arc: usize, table: &ArcTable) -> Self {
        let logs: Vec<f64> = table.iter().flatten().map(|w| w.ln()).collect();
        BranchLaw {
            arc,
            law: Categorical::from_logs(&logs).expect("every arc admits a pairing"),
        }
    }
}

#[derive(Clone, Debug)]
struct ClosedLaw {
    /// Positions assigned jointly: branch endpoints first, then relevant bases.
    slots: Vec<usize>,
    /// Per closing-pair code `4a + b`: outcome law and the flattened values.
    by_pair: Vec<Option<(Categorical, Vec<Nucleotide>)>>,
}

#[derive(Clone, Debug)]
enum LoopLaw {
    Independent(Vec<BranchLaw>),
    Joint(ClosedLaw),
}

/// Sampler for one `(params, structure, constraint)` triple.
#[derive(Clone, Debug)]
pub struct BoltzmannSampler<'a> {
    params: &'a EnergyParams,
    plan: Plan,
    mask: PatternConstraint,
    partition: StructurePartition,
    laws: Vec<LoopLaw>,
}

impl<'a> BoltzmannSampler<'a> {
    pub fn new(
        params: &'a EnergyParams,
        structure: &SecondaryStructure,
        partition: &StructurePartition,
    ) -> Self {
        Self::build(
            params,
            Plan::new(structure),
            PatternConstraint::wildcard(structure.len()),
            partition.clone(),
        )
    }

    /// Sampler restricted to sequences allowed by `c`.
    pub fn with_constraint(
        engine: &PartitionEngine<'a>,
        c: &PatternConstraint,
    ) -> Result<Self, crate::error::Error> {
        let partition = engine.constrained(c)?;
        if partition.log_q().is_zero() {
            return Err(crate::error::AnalysisError::Mismatch(
                "constraint admits no sequence".into(),
            )
            .into());
        }
        Ok(Self::build(
            engine.params(),
            engine.plan.clone(),
            c.clone(),
            partition,
        ))
    }

    fn build(
        params: &'a EnergyParams,
        plan: Plan,
        mask: PatternConstraint,
        partition: StructurePartition,
    ) -> Self {
        assert!(!partition.log_q().is_zero(), "structure admits no sequence");
        let tables = partition.tables();
        let mut scratch = vec![Nucleotide::A; plan.n];
        let laws = plan
            .loops
            .iter()
            .map(|lp| {
                if matches!(lp.lp.kind, LoopKind::Exterior | LoopKind::Multi) {
                    return LoopLaw::Independent(
                        lp.branches
                            .iter()
                            .map(|&t| BranchLaw::new(t, &tables[t]))
                            .collect(),
                    );
                }
                let (i, j) = plan.arcs[lp.closing.expect("closed loop")];
                let mut slots = Vec::new();
                if let Some(&t) = lp.branches.first() {
                    slots.extend([plan.arcs[t].0, plan.arcs[t].1]);
                }
                slots.extend(lp.relevant.iter().copied());
                let mut by_pair = vec![None; 16];
                for a in Nucleotide::ALL {
                    for b in Nucleotide::ALL {
                        if tables[lp.closing.unwrap()][a.index()][b.index()].is_zero() {
                            continue;
                        }
                        scratch[i] = a;
                        scratch[j] = b;
                        let mut logs = Vec::new();
                        let mut values = Vec::new();
                        enumerate_closed_loop(
                            params,
                            &plan,
                            lp,
                            &mask,
                            tables,
                            &mut scratch,
                            &mut |seq, w| {
                                logs.push(w);
                                values.extend(slots.iter().map(|&p| seq[p]));
                            },
                        );
                        by_pair[a.index() * 4 + b.index()] =
                            Categorical::from_logs(&logs).map(|c| (c, values));
                    }
                }
                LoopLaw::Joint(ClosedLaw { slots, by_pair })
            })
            .collect();
        BoltzmannSampler {
            params,
            plan,
            mask,
            partition,
            laws,
        }
    }

    pub fn partition(&self) -> &StructurePartition {
        &self.partition
    }

    fn fill_uniform<R: Rng + ?Sized>(
        &self,
        positions: &[usize],
        seq: &mut [Nucleotide],
        rng: &mut R,
    ) {
        for &p in positions {
            let allowed: Vec<Nucleotide> = self.mask.allowed0(p).collect();
            seq[p] = allowed[rng.gen_range(0..allowed.len())];
        }
    }

    /// Draw one sequence.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledSequence {
        let mut seq = vec![Nucleotide::A; self.plan.n];
        for (lp, law) in self.plan.loops.iter().zip(&self.laws) {
            self.fill_uniform(&lp.irrelevant, &mut seq, rng);
            match law {
                LoopLaw::Independent(branches) => {
                    for b in branches {
                        let k = b.law.draw(rng);
                        let (p, q) = self.plan.arcs[b.arc];
                        seq[p] = Nucleotide::from_index(k / 4);
                        seq[q] = Nucleotide::from_index(k % 4);
                    }
                }
                LoopLaw::Joint(closed) => {
                    let (i, j) = self.plan.arcs[lp.closing.expect("closed loop")];
                    let code = seq[i].index() * 4 + seq[j].index();
                    let (law, values) = closed.by_pair[code]
                        .as_ref()
                        .expect("closing pair drawn with positive weight");
                    let k = law.draw(rng);
                    let stride = closed.slots.len();
                    for (slot, &p) in closed.slots.iter().enumerate() {
                        seq[p] = values[k * stride + slot];
                    }
                }
            }
        }
        self.score(seq)
    }

    /// Energy and per-loop log-probabilities of a complete sequence.
    fn score(&self, bases: Vec<Nucleotide>) -> SampledSequence {
        let rt = self.params.rt();
        let tables = self.partition.tables();
        let entry = |t: usize| {
            let (p, q) = self.plan.arcs[t];
            tables[t][bases[p].index()][bases[q].index()]
        };
        let mut energy = Energy::ZERO;
        let mut stepwise_logs = Vec::with_capacity(self.plan.loops.len());
        for lp in &self.plan.loops {
            let branches: LogWeight = lp.branches.iter().map(|&t| entry(t)).product();
            let (e, denominator) = match lp.closing {
                None => (Energy::ZERO, self.partition.log_q()),
                Some(c) => (loop_energy_unchecked(self.params, &bases, &lp.lp), entry(c)),
            };
            energy += e;
            stepwise_logs.push(e.log_boltzmann(rt) + branches.ln() - denominator.ln());
        }
        SampledSequence {
            sequence: Sequence::new(bases).expect("non-empty"),
            energy,
            log_prob: stepwise_logs.iter().sum(),
            stepwise_logs,
        }
    }

    /// `count` independent draws; draw `k` uses stream `k` of `seed`.
    pub fn ensemble(&self, count: usize, seed: u64) -> Vec<SampledSequence> {
        (0..count)
            .into_par_iter()
            .map(|k| self.sample(&mut draw_rng(seed, k as u64)))
            .collect()
    }
}

/// The generator used for draw `index` of an ensemble seeded with `seed`.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw one sequence from the Boltzmann distribution of `structure`.
pub fn sample<R: Rng + ?Sized>(
    params: &EnergyParams,
    structure: &SecondaryStructure,
    partition: &StructurePartition,
    rng: &mut R,
) -> SampledSequence {
    BoltzmannSampler::new(params, structure, partition).sample(rng)
}

/// `count` independent draws, reproducible from `seed` alone.
pub fn sample_ensemble(
    params: &EnergyParams,
    structure: &SecondaryStructure,
    count: usize,
    seed: u64,
) -> Vec<SampledSequence> {
    let partition = crate::partition::partition_function(params, structure);
    BoltzmannSampler::new(params, structure, &partition).ensemble(count, seed)
}
