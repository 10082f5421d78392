mod common;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use symspace_core::ext::{int, q};
use symspace_core::norms::{
    decompose_l1_linf, embedding_check, norm, norm_of_profile, p_subadditivity_check, NormSpec, NormValue,
};
use symspace_core::rearrange::rearrangement;
use symspace_core::sample::{instance_rng, shuffled};
use symspace_core::{DecreasingProfile, Extended, PointwiseOp, Rational, StepFunction};

/// `∫_0^1 ξ`.
fn head_integral(xi: &DecreasingProfile) -> Rational {
    let mut left = int(1);
    let mut total = Rational::zero();
    for s in xi.segments() {
        let take = match &s.length {
            Extended::Finite(l) => l.clone().min(left.clone()),
            Extended::Infinite => left.clone(),
        };
        total += &take * &s.value;
        left -= take;
        if left.is_zero() {
            break;
        }
    }
    total
}

/// `‖(|f|−c)^+‖₁ + c`, or `None` when the first term is infinite.
fn clamp_cost(f: &StepFunction, c: &Rational) -> Option<Rational> {
    if f.space().is_infinite() && f.tail_value() > c {
        return None;
    }
    let excess: Rational = f
        .pieces()
        .iter()
        .map(|p| {
            let a = p.value.abs();
            if &a > c { (a - c) * &p.mass } else { Rational::zero() }
        })
        .sum();
    Some(excess + c)
}

fn assert_le(a: &NormValue, b: &NormValue, what: &str) -> Result<(), TestCaseError> {
    prop_assert!(a.le(b, TOL), "{what}: {a} > {b}");
    Ok(())
}

proptest! {
    #[test]
    fn norm_depends_only_on_rearrangement(f in step_function()) {
        let xi = rearrangement(&f);
        for spec in all_specs() {
            let (a, b) = (norm(&f, &spec), norm_of_profile(&xi, &spec));
            if !matches!(spec, NormSpec::Lp(ref p) if !p.is_integer()) {
                prop_assert_eq!(&a.exact, &b.exact, "{}", spec);
            }
            prop_assert!(a.compare(&b, TOL).is_eq(), "{spec}: {a} vs {b}");
        }
    }

    #[test]
    fn equimeasurable_functions_share_norms(f in step_function(), seed in any::<u64>(), k in 1usize..4) {
        let g = shuffled(&mut instance_rng(seed, 1), &f).split_uniform(k);
        for spec in all_specs() {
            let (a, b) = (norm(&f, &spec), norm(&g, &spec));
            prop_assert!(a.compare(&b, TOL).is_eq(), "{spec}: {a} vs {b}");
        }
    }

    #[test]
    fn norms_are_ideal((f, g) in dominated_pair()) {
        for spec in all_specs() {
            assert_le(&norm(&f, &spec), &norm(&g, &spec), &spec.label())?;
        }
    }

    #[test]
    fn dominated_rearrangement_bounds_norm((f, g) in dominated_pair(), seed in any::<u64>()) {
        // ξ_f ≤ ξ_g still holds after rearranging g, but |f| ≤ |g| need not
        let g = shuffled(&mut instance_rng(seed, 2), &g);
        for spec in all_specs() {
            assert_le(&norm(&f, &spec), &norm(&g, &spec), &spec.label())?;
        }
    }

    #[test]
    fn norms_are_homogeneous(f in step_function(), c in rational(20)) {
        for spec in all_specs() {
            let lhs = norm(&f.scale(&c), &spec);
            let rhs = NormValue::exact(c.abs()).mul(&norm(&f, &spec));
            prop_assert!(lhs.compare(&rhs, TOL).is_eq(), "{spec}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn zero_has_zero_norm(f in step_function()) {
        let z = StepFunction::zero(f.space());
        for spec in all_specs() {
            prop_assert_eq!(norm(&z, &spec).exact, Some(int(0)));
        }
    }

    #[test]
    fn decomposition_is_optimal(f in step_function()) {
        let d = decompose_l1_linf(&f).unwrap();
        let value = d.value.exact.clone().unwrap();
        prop_assert_eq!(d.g.pointwise(&d.h, PointwiseOp::Add).unwrap().canonicalize(), f.canonicalize());
        let split = norm(&d.g, &NormSpec::Lp(int(1))).exact.unwrap() + norm(&d.h, &NormSpec::LInf).exact.unwrap();
        prop_assert_eq!(&split, &value);
        let mut levels: Vec<Rational> = f.pieces().iter().map(|p| p.value.abs()).collect();
        levels.extend([int(0), f.tail_value().clone()]);
        for c in levels {
            if let Some(cost) = clamp_cost(&f, &c) {
                prop_assert!(value <= cost, "cut {} gives {} < {}", c, cost, value);
            }
        }
        prop_assert_eq!(value, head_integral(&rearrangement(&f)));
    }

    #[test]
    fn embedding_holds_for_banach_specs(f in step_function()) {
        for spec in banach_specs() {
            let c = embedding_check(&f, &spec).unwrap();
            prop_assert!(c.holds, "{spec}: {} >= {} >= {}", c.lhs, c.mid, c.rhs);
        }
    }

    #[test]
    fn lp_quasi_norms_are_p_subadditive((f, g) in pair_with(12, false)) {
        for p in [q(1, 3), q(1, 2), int(1)] {
            let c = p_subadditivity_check(&f, &g, &p).unwrap();
            prop_assert!(c.holds, "p = {}", p);
        }
    }
}
