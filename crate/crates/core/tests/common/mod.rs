#![allow(dead_code)]

use proptest::prelude::*;
use symspace_core::ext::{int, q};
use symspace_core::norms::NormSpec;
use symspace_core::{MeasureSpace, Piece, Rational, StepFunction};

pub fn rational(max: i64) -> impl Strategy<Value = Rational> {
    prop_oneof![
        (-3i64..=3).prop_map(int),
        (-max..=max, 1..=max).prop_map(|(n, d)| q(n, d)),
    ]
}

pub fn positive(max: i64) -> impl Strategy<Value = Rational> {
    (1..=max, 1..=max).prop_map(|(n, d)| q(n, d))
}

/// A value in `[-1, 1]`.
pub fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=20).prop_flat_map(|d| (-d..=d).prop_map(move |n| q(n, d)))
}

fn pieces(max_pieces: usize) -> impl Strategy<Value = Vec<Piece>> {
    prop::collection::vec((rational(100), positive(100)), 1..=max_pieces)
        .prop_map(|v| v.into_iter().map(|(value, mass)| Piece::new(value, mass)).collect())
}

fn assemble(pieces: Vec<Piece>, infinite: bool, tail: Rational) -> StepFunction {
    if infinite {
        StepFunction::new(MeasureSpace::infinite(), pieces, tail).unwrap()
    } else {
        let total: Rational = pieces.iter().map(|p| &p.mass).sum();
        StepFunction::new(MeasureSpace::finite(total).unwrap(), pieces, int(0)).unwrap()
    }
}

fn tail_value(tails: bool) -> BoxedStrategy<Rational> {
    if tails {
        prop_oneof![Just(int(0)), (0i64..=100, 1i64..=100).prop_map(|(n, d)| q(n, d))].boxed()
    } else {
        Just(int(0)).boxed()
    }
}

/// Functions on finite and infinite spaces, with `tails` allowing a positive tail.
pub fn step_function_with(max_pieces: usize, tails: bool) -> impl Strategy<Value = StepFunction> {
    (pieces(max_pieces), any::<bool>(), tail_value(tails)).prop_map(|(p, inf, t)| assemble(p, inf, t))
}

pub fn step_function() -> impl Strategy<Value = StepFunction> {
    step_function_with(12, true)
}

pub fn finite_step_function() -> impl Strategy<Value = StepFunction> {
    pieces(12).prop_map(|p| assemble(p, false, int(0)))
}

/// Rescales the masses of `pieces` to fill the space of `like`.
fn on_space_of(like: &StepFunction, mut pieces: Vec<Piece>, tail: Rational) -> StepFunction {
    match like.space().total_mass().finite() {
        Some(total) => {
            let sum: Rational = pieces.iter().map(|p| &p.mass).sum();
            let k = total / sum;
            pieces.iter_mut().for_each(|p| p.mass *= &k);
            StepFunction::new(like.space().clone(), pieces, int(0)).unwrap()
        }
        None => StepFunction::new(like.space().clone(), pieces, tail).unwrap(),
    }
}

/// Two functions on one space with independent piece layouts.
pub fn pair_with(max_pieces: usize, tails: bool) -> impl Strategy<Value = (StepFunction, StepFunction)> {
    (step_function_with(max_pieces, tails), pieces(max_pieces), tail_value(tails))
        .prop_map(|(f, p, t)| {
            let g = on_space_of(&f, p, t);
            (f, g)
        })
}

pub fn pair() -> impl Strategy<Value = (StepFunction, StepFunction)> {
    pair_with(12, true)
}

pub fn triple() -> impl Strategy<Value = (StepFunction, StepFunction, StepFunction)> {
    (pair(), pieces(12), tail_value(true)).prop_map(|((f, g), p, t)| {
        let h = on_space_of(&f, p, t);
        (f, g, h)
    })
}

/// `(f, g)` with `|f| ≤ |g|` pointwise: `f = g·h` for `h` valued in `[-1, 1]`.
pub fn dominated_pair() -> impl Strategy<Value = (StepFunction, StepFunction)> {
    (
        step_function(),
        prop::collection::vec((unit_rational(), positive(100)), 1..=12),
        (0i64..=10).prop_map(|n| q(n, 10)),
    )
        .prop_map(|(g, hp, ht)| {
            let pieces = hp.into_iter().map(|(v, m)| Piece::new(v, m)).collect();
            let h = on_space_of(&g, pieces, ht);
            let f = g.pointwise(&h, symspace_core::PointwiseOp::Multiply).unwrap();
            (f, g)
        })
}

pub fn all_specs() -> Vec<NormSpec> {
    let mut specs: Vec<NormSpec> = [q(1, 2), int(1), q(3, 2), int(2), int(3)]
        .into_iter()
        .map(NormSpec::Lp)
        .collect();
    specs.extend([
        NormSpec::LInf,
        NormSpec::L1CapLInf,
        NormSpec::L1PlusLInf,
        NormSpec::LInfPlusTail,
    ]);
    specs
}

pub fn banach_specs() -> Vec<NormSpec> {
    all_specs().into_iter().filter(NormSpec::is_banach).collect()
}

pub const TOL: f64 = 9.094947017729282e-13; // 2^-40
