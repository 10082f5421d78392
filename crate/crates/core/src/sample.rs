//! Seeded random instances for property suites and benchmarks.
//!
//! Every instance draws from its own ChaCha stream, so instance `i` of a run
//! with seed `s` is the same whatever order instances are evaluated in.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ext::{int, Rational};
use crate::measure::{MeasureSpace, Piece, StepFunction};
use crate::stone::Subset;

/// Generator for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleConfig {
    pub max_pieces: usize,
    /// Bound on numerators and denominators.
    pub max_component: i64,
    /// Draw infinite-mass spaces (half the time).
    pub infinite_spaces: bool,
    /// Allow a positive tail on infinite spaces.
    pub tails: bool,
    pub nonnegative: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            max_pieces: 12,
            max_component: 100,
            infinite_spaces: true,
            tails: true,
            nonnegative: false,
        }
    }
}

impl SampleConfig {
    pub fn finite_nonnegative() -> Self {
        Self {
            infinite_spaces: false,
            tails: false,
            nonnegative: true,
            ..Self::default()
        }
    }

    pub fn without_tails() -> Self {
        Self {
            tails: false,
            ..Self::default()
        }
    }
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_positive(rng: &mut impl Rng, max: i64) -> Rational {
    ratio(rng.gen_range(1..=max), rng.gen_range(1..=max))
}

/// A value; half the time a small integer so that ties between pieces are common.
pub fn random_value(rng: &mut impl Rng, cfg: &SampleConfig) -> Rational {
    let lo = if cfg.nonnegative { 0 } else { -cfg.max_component };
    if rng.gen_bool(0.5) {
        let small = if cfg.nonnegative { 0..=3 } else { -3..=3 };
        int(rng.gen_range(small))
    } else {
        ratio(rng.gen_range(lo..=cfg.max_component), rng.gen_range(1..=cfg.max_component))
    }
}

fn random_pieces(rng: &mut impl Rng, cfg: &SampleConfig) -> Vec<Piece> {
    let k = rng.gen_range(1..=cfg.max_pieces);
    (0..k)
        .map(|_| Piece::new(random_value(rng, cfg), random_positive(rng, cfg.max_component)))
        .collect()
}

fn random_tail(rng: &mut impl Rng, cfg: &SampleConfig) -> Rational {
    if cfg.tails && rng.gen_bool(0.5) {
        let mut tail_cfg = cfg.clone();
        tail_cfg.nonnegative = true;
        random_value(rng, &tail_cfg)
    } else {
        int(0)
    }
}

pub fn random_step_function(rng: &mut impl Rng, cfg: &SampleConfig) -> StepFunction {
    let pieces = random_pieces(rng, cfg);
    if cfg.infinite_spaces && rng.gen_bool(0.5) {
        let tail = random_tail(rng, cfg);
        StepFunction::new(MeasureSpace::infinite(), pieces, tail).expect("valid sample")
    } else {
        let total: Rational = pieces.iter().map(|p| &p.mass).sum();
        StepFunction::new(MeasureSpace::finite(total).expect("positive"), pieces, int(0))
            .expect("valid sample")
    }
}

/// Random function on `space`; piece masses are rescaled to fill a finite space.
pub fn random_on_space(rng: &mut impl Rng, cfg: &SampleConfig, space: &MeasureSpace) -> StepFunction {
    let mut pieces = random_pieces(rng, cfg);
    let tail = match space.total_mass().finite() {
        Some(total) => {
            let sum: Rational = pieces.iter().map(|p| &p.mass).sum();
            let factor = total / sum;
            pieces.iter_mut().for_each(|p| p.mass *= &factor);
            int(0)
        }
        None => random_tail(rng, cfg),
    };
    StepFunction::new(space.clone(), pieces, tail).expect("valid sample")
}

/// Two functions on one space.
pub fn random_pair(rng: &mut impl Rng, cfg: &SampleConfig) -> (StepFunction, StepFunction) {
    let f = random_step_function(rng, cfg);
    let g = random_on_space(rng, cfg, f.space());
    (f, g)
}

/// Same pieces in a shuffled order: equimeasurable with `f`.
pub fn shuffled(rng: &mut impl Rng, f: &StepFunction) -> StepFunction {
    let mut pieces = f.pieces().to_vec();
    pieces.shuffle(rng);
    f.with_pieces(pieces, f.tail_value().clone()).expect("same masses")
}

/// `count` random subsets of `{0..n-1}`.
pub fn random_generators(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Subset> {
    let full: Subset = if n >= 32 { Subset::MAX } else { (1 << n) - 1 };
    (0..count).map(|_| rng.gen::<Subset>() & full).collect()
}
