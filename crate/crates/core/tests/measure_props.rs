mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use symspace_core::measure::{conditional_expectation, delta0_default, PartitionMap};
use symspace_core::norms::norm;
use symspace_core::rearrange::distribution;
use symspace_core::{Extended, Piece, PointwiseOp, Rational, StepFunction};

fn with_partition() -> impl Strategy<Value = (StepFunction, PartitionMap)> {
    step_function_with(12, false).prop_flat_map(|f| {
        let n = f.pieces().len();
        (Just(f), prop::collection::vec(0..n, n)).prop_map(|(f, blocks)| (f, PartitionMap::new(blocks)))
    })
}

/// A blocks-measurable function with the same layout as `f`.
fn measurable_like(f: &StepFunction, blocks: &PartitionMap, block_values: &[Rational]) -> StepFunction {
    let pieces = f
        .pieces()
        .iter()
        .zip(&blocks.block_assignment)
        .map(|(p, b)| Piece::new(block_values[*b].clone(), p.mass.clone()))
        .collect();
    f.with_pieces(pieces, Rational::zero()).unwrap()
}

fn integral(f: &StepFunction) -> Extended {
    f.integrate().unwrap()
}

proptest! {
    #[test]
    fn integrate_is_additive((f, g) in pair_with(12, false)) {
        let sum = f.pointwise(&g, PointwiseOp::Add).unwrap();
        prop_assert_eq!(integral(&sum), &integral(&f) + &integral(&g));
    }

    #[test]
    fn conditional_expectation_contracts_and_is_idempotent((f, blocks) in with_partition()) {
        let e = conditional_expectation(&f, &blocks).unwrap();
        prop_assert!(integral(&e.abs()) <= integral(&f.abs()));
        prop_assert!(blocks.is_measurable(&e));
        prop_assert_eq!(conditional_expectation(&e, &blocks).unwrap(), e.clone());
        prop_assert_eq!(integral(&e), integral(&f));
    }

    #[test]
    fn conditional_expectation_is_self_adjoint(
        (f, blocks) in with_partition(),
        values in prop::collection::vec(rational(50), 12),
    ) {
        let g = measurable_like(&f, &blocks, &values);
        prop_assert!(blocks.is_measurable(&g));
        let e = conditional_expectation(&f, &blocks).unwrap();
        let lhs = integral(&e.pointwise(&g, PointwiseOp::Multiply).unwrap());
        let rhs = integral(&f.pointwise(&g, PointwiseOp::Multiply).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta0_is_a_metric((f, g, h) in triple()) {
        let d = |a: &StepFunction, b: &StepFunction| delta0_default(a, b).unwrap();
        prop_assert_eq!(d(&f, &g), d(&g, &f));
        prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h));
        prop_assert!(d(&f, &f).is_zero());
        let same = f.pointwise(&g, PointwiseOp::AbsDiff).unwrap().canonicalize()
            == StepFunction::zero(f.space()).canonicalize();
        prop_assert_eq!(d(&f, &g).is_zero(), same);
    }

    #[test]
    fn canonicalize_preserves_observables(f in step_function()) {
        let c = f.canonicalize();
        prop_assert!(c.is_canonical());
        prop_assert!(c.ae_eq(&f));
        prop_assert_eq!(distribution(&c), distribution(&f));
        if f.tail_value().is_zero() {
            prop_assert_eq!(integral(&c), integral(&f));
        }
        for spec in all_specs() {
            let (a, b) = (norm(&c, &spec), norm(&f, &spec));
            prop_assert!(a.compare(&b, TOL).is_eq(), "{spec}: {a} vs {b}");
        }
    }

    #[test]
    fn refinement_by_splitting_changes_nothing(f in step_function(), k in 1usize..4) {
        let split = f.split_uniform(k);
        prop_assert!(split.ae_eq(&f));
        prop_assert_eq!(split.canonicalize(), f.canonicalize());
    }
}
