//! Randomized invariant suites. Each instance is checked independently from
//! its own seeded stream; a failure carries the offending input.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::duality::{associate_norm, dual_norm_oracle, hl_pairing, second_associate_norm};
use crate::error::Error;
use crate::ext::{int, q, Rational};
use crate::measure::{PointwiseOp, StepFunction};
use crate::norms::{embedding_check, norm, norm_of_profile, p_subadditivity_check, NormSpec, NormValue};
use crate::rearrange::{
    distribution, distribution_of_profile, rearrangement, rearrangement_from_distribution, transport_map,
};
use crate::sample::{
    instance_rng, random_generators, random_pair, random_positive, random_step_function, random_value,
    SampleConfig,
};
use crate::stone::{
    factor_space, generate_algebra, is_ultrafilter, ultrafilters, verify_stone_isomorphism, zeta_partition,
    WeightedSpace,
};

/// `2^-40`, relative.
pub const TRANSFER_TOLERANCE: f64 = 9.094947017729282e-13;
/// `2^-20`, relative.
pub const DUAL_TOLERANCE: f64 = 9.5367431640625e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Rearrangement,
    Norms,
    Embedding,
    Subadditivity,
    Transport,
    Duality,
    Stone,
    Pairing,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Rearrangement,
        Suite::Norms,
        Suite::Embedding,
        Suite::Subadditivity,
        Suite::Transport,
        Suite::Duality,
        Suite::Stone,
        Suite::Pairing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Rearrangement => "rearrangement",
            Suite::Norms => "norms",
            Suite::Embedding => "embedding",
            Suite::Subadditivity => "subadditivity",
            Suite::Transport => "transport",
            Suite::Duality => "duality",
            Suite::Stone => "stone",
            Suite::Pairing => "pairing",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.as_str()).collect();
                Error::InvalidInput(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub input: Value,
    pub detail: String,
}

/// Whether two norm values agree: exactly when both carry exact data,
/// otherwise within `tol` relative.
pub fn same_norm(a: &NormValue, b: &NormValue, tol: f64) -> bool {
    a.compare(b, tol).is_eq()
}

fn fail(index: u64, input: Value, detail: impl Into<String>) -> Counterexample {
    Counterexample {
        index,
        input,
        detail: detail.into(),
    }
}

fn all_specs() -> Vec<NormSpec> {
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

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Checks instance `index` of `suite` for a run seeded with `seed`.
pub fn check(suite: Suite, seed: u64, index: u64) -> Result<(), Counterexample> {
    let rng = &mut instance_rng(seed, index);
    match suite {
        Suite::Rearrangement => {
            let f = random_step_function(rng, &SampleConfig::default());
            let input = json!({ "f": f });
            let xi = rearrangement(&f);
            if rearrangement_from_distribution(&distribution(&f)) != xi {
                return Err(fail(index, input, "rearrangement differs from inverse of distribution"));
            }
            if rearrangement(&xi.to_step_function()) != xi {
                return Err(fail(index, input, "rearrangement is not idempotent"));
            }
            if distribution_of_profile(&xi) != distribution(&f) {
                return Err(fail(index, input, "profile and function distributions differ"));
            }
            Ok(())
        }
        Suite::Norms => {
            let f = random_step_function(rng, &SampleConfig::default());
            let xi = rearrangement(&f);
            for spec in all_specs() {
                let (a, b) = (norm(&f, &spec), norm_of_profile(&xi, &spec));
                if !same_norm(&a, &b, TRANSFER_TOLERANCE) {
                    return Err(fail(index, json!({ "f": f, "spec": spec }), format!("norm {a} vs profile norm {b}")));
                }
            }
            Ok(())
        }
        Suite::Embedding => {
            let f = random_step_function(rng, &SampleConfig::default());
            let banach: Vec<NormSpec> = all_specs().into_iter().filter(NormSpec::is_banach).collect();
            let spec = banach.choose(rng).expect("nonempty").clone();
            let input = json!({ "f": f, "spec": spec });
            match embedding_check(&f, &spec) {
                Ok(c) if c.holds => Ok(()),
                Ok(c) => Err(fail(index, input, format!("{} >= {} >= {} fails", c.lhs, c.mid, c.rhs))),
                Err(e) => Err(fail(index, input, e.to_string())),
            }
        }
        Suite::Subadditivity => {
            let (f, g) = random_pair(rng, &SampleConfig::without_tails());
            let p = [q(1, 3), q(1, 2), int(1)][(index % 3) as usize].clone();
            let input = json!({ "f": f, "g": g, "p": p.to_string() });
            match p_subadditivity_check(&f, &g, &p) {
                Ok(c) if c.holds => Ok(()),
                Ok(c) => Err(fail(index, input, format!("{} > {}", c.lhs.approx, c.rhs.approx))),
                Err(e) => Err(fail(index, input, e.to_string())),
            }
        }
        Suite::Transport => {
            let f = random_step_function(rng, &SampleConfig::finite_nonnegative());
            let input = json!({ "f": f });
            let map = transport_map(&f).map_err(|e| fail(index, input.clone(), e.to_string()))?;
            map.verify(&f)
                .map_err(|d| fail(index, input, format!("{d:?}")))
        }
        Suite::Duality => {
            let cfg = SampleConfig {
                max_pieces: 6,
                ..SampleConfig::without_tails()
            };
            let g = random_step_function(rng, &cfg);
            let spec = [
                NormSpec::Lp(int(1)),
                NormSpec::Lp(q(3, 2)),
                NormSpec::Lp(int(2)),
                NormSpec::Lp(int(3)),
                NormSpec::LInf,
            ][(index % 5) as usize]
                .clone();
            let input = json!({ "g": g, "spec": spec });
            let err = |e: Error| fail(index, input.clone(), e.to_string());
            let analytic = associate_norm(&g, &spec).map_err(err)?;
            let oracle = dual_norm_oracle(&g, &spec, 1).map_err(err)?;
            if !rel_close(analytic.value.approx, oracle.value.approx, DUAL_TOLERANCE)
                && !(analytic.value.is_zero() && oracle.value.is_zero())
            {
                return Err(fail(
                    index,
                    input,
                    format!("analytic {} vs oracle {}", analytic.value.approx, oracle.value.approx),
                ));
            }
            let second = second_associate_norm(&g, &spec).map_err(err)?;
            let direct = norm(&g, &spec);
            if second.approx > direct.approx * (1.0 + DUAL_TOLERANCE) {
                return Err(fail(index, input, format!("second associate {} exceeds norm {}", second.approx, direct.approx)));
            }
            Ok(())
        }
        Suite::Stone => {
            let n = rng.gen_range(1..=12);
            let count = rng.gen_range(0..=4);
            let gens = random_generators(rng, n, count);
            let input = json!({ "n": n, "generators": gens });
            let alg = generate_algebra(n, &gens).map_err(|e| fail(index, input.clone(), e.to_string()))?;
            let ufs = ultrafilters(&alg);
            if ufs.len() != zeta_partition(&alg).blocks.len() {
                return Err(fail(index, input, "ultrafilter count differs from block count"));
            }
            if !ufs.iter().all(|u| is_ultrafilter(&alg, u)) {
                return Err(fail(index, input, "enumerated set is not an ultrafilter"));
            }
            if !verify_stone_isomorphism(&alg) {
                return Err(fail(index, input, "Stone map is not a Boolean isomorphism"));
            }
            let weights: Vec<Rational> = (0..n).map(|_| random_positive(rng, 100)).collect();
            let space = WeightedSpace::new(weights).expect("positive weights");
            let factor = factor_space(&space, &alg).map_err(|e| fail(index, input.clone(), e.to_string()))?;
            let values: Vec<Rational> = (0..alg.atoms().len())
                .map(|_| random_value(rng, &SampleConfig::default()))
                .collect();
            let before = space.integrate(&factor.pull_back(&values)).expect("lengths match");
            let after = factor.space.integrate(&values).expect("lengths match");
            if before != after {
                return Err(fail(index, input, format!("integral {before} became {after}")));
            }
            Ok(())
        }
        Suite::Pairing => {
            let k = rng.gen_range(1..=6);
            let cfg = SampleConfig::default();
            let mass = random_positive(rng, 10);
            let f_vals: Vec<Rational> = (0..k).map(|_| random_value(rng, &cfg)).collect();
            let mut g_vals: Vec<Rational> = (0..k).map(|_| random_value(rng, &cfg)).collect();
            g_vals.shuffle(rng);
            let build = |vals: &[Rational]| {
                StepFunction::on_finite(vals.iter().map(|v| (v.clone(), mass.clone()))).expect("valid")
            };
            let (f, g) = (build(&f_vals), build(&g_vals));
            let input = json!({ "f": f, "g": g });
            let aligned = f
                .abs()
                .pointwise(&g.abs(), PointwiseOp::Multiply)
                .and_then(|h| h.integrate())
                .map_err(|e| fail(index, input.clone(), e.to_string()))?;
            let bound = hl_pairing(&rearrangement(&f), &rearrangement(&g));
            if aligned > bound {
                return Err(fail(index, input, format!("aligned {aligned} exceeds pairing {bound}")));
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: u64,
    pub seed: u64,
    pub passes: u64,
    pub counterexample: Option<Counterexample>,
}

/// Runs instances `0..n` in order, stopping at the first failure.
pub fn run(suite: Suite, n: u64, seed: u64) -> SuiteReport {
    let mut passes = 0;
    let mut counterexample = None;
    for index in 0..n {
        match check(suite, seed, index) {
            Ok(()) => passes += 1,
            Err(c) => {
                counterexample = Some(c);
                break;
            }
        }
    }
    SuiteReport {
        suite: suite.as_str().into(),
        n,
        seed,
        passes,
        counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_short_run() {
        for suite in Suite::ALL {
            let report = run(suite, 40, 11);
            assert_eq!(report.passes, 40, "{suite}: {:?}", report.counterexample);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.as_str().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
