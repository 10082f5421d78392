//! Seeded fixtures shared by the benchmarks.

use symspace_core::sample::{instance_rng, random_generators, random_step_function, SampleConfig};
use symspace_core::stone::Subset;
use symspace_core::StepFunction;

pub const SEED: u64 = 0x5eed;

/// `count` functions with up to `max_pieces` pieces each.
pub fn functions(count: u64, max_pieces: usize) -> Vec<StepFunction> {
    let cfg = SampleConfig {
        max_pieces,
        ..SampleConfig::default()
    };
    (0..count)
        .map(|i| random_step_function(&mut instance_rng(SEED, i), &cfg))
        .collect()
}

/// Functions with exactly `pieces` pieces, no tails.
pub fn functions_with_pieces(count: u64, pieces: usize) -> Vec<StepFunction> {
    let cfg = SampleConfig {
        max_pieces: pieces,
        ..SampleConfig::without_tails()
    };
    (0..)
        .map(|i| random_step_function(&mut instance_rng(SEED ^ pieces as u64, i), &cfg))
        .filter(|f| f.pieces().len() == pieces)
        .take(count as usize)
        .collect()
}

pub fn generator_sets(count: u64, n: usize, generators: usize) -> Vec<Vec<Subset>> {
    (0..count)
        .map(|i| random_generators(&mut instance_rng(SEED, i), n, generators))
        .collect()
}
