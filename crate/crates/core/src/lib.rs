//! Sequence-side statistics of a fixed RNA secondary structure.
//!
//! For a pseudoknot-free structure `S` this crate computes the partition
//! function over all sequences `Q(S)`, draws sequences from the Boltzmann
//! distribution `e^{-E(sigma,S)/RT} / Q(S)` in time linear in `n`, evaluates
//! exact probabilities of sequence patterns, and builds ensemble analytics
//! (entropy heat-maps, inverse folding rate, energy-gap signatures, mutual
//! information terms) on top of an mfe folder and a structure-side partition
//! function that share the same energy model.

pub mod analysis;
pub mod cli;
pub mod energy;
pub mod error;
pub mod fold;
pub mod logspace;
pub mod partition;
pub mod sampler;
pub mod sequence;
pub mod structure;

pub use energy::{loop_energy, pair_type, structure_energy, Energy, EnergyParams, PairType};
pub use error::{Error, Result};
pub use fold::{mccaskill_partition, mfe_fold, refolds_to, FoldResult, Folder, SeqPartition};
pub use logspace::LogWeight;
pub use partition::{
    partition_function, pattern_partition, pattern_probability, ArcTable, PartitionEngine,
    PatternConstraint, StructurePartition,
};
pub use sampler::{sample, sample_ensemble, BoltzmannSampler, SampledSequence};
pub use sequence::{Nucleotide, Sequence};
pub use structure::{
    count_structures, decompose, parse_dot_bracket, sample_uniform_structure, Arc, Loop,
    LoopDecomposition, LoopKind, SecondaryStructure,
};
