//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::Rng;
use symspace_core::duality::{
    associate_norm, dual_norm_oracle, hl_pairing, iterated_associate_norm, property_c_gap, second_associate_norm,
};
use symspace_core::ext::{int, q};
use symspace_core::norms::{
    aoki_rolewicz_exponent, embedding_check, norm, norm_of_profile, p_subadditivity_check, NormSpec, PthPower,
};
use symspace_core::rearrange::{
    cutoff_sequences, rearrangement, rearrangement_from_distribution, distribution, transport_map,
};
use symspace_core::sample::{instance_rng, random_pair, random_step_function, random_value, SampleConfig};
use symspace_core::suite::{check, Suite};
use symspace_core::{MeasureSpace, PointwiseOp, Rational, StepFunction};

const SEED: u64 = 7;
const TRANSFER_TOL: f64 = 9.094947017729282e-13; // 2^-40
const DUAL_TOL: f64 = 9.5367431640625e-7; // 2^-20
const TRIPLE_TOL: f64 = 3.0517578125e-5; // 2^-15

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn timed(limit: Option<Duration>, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    match (out, limit) {
        (Ok(msg), Some(limit)) if elapsed > limit => Err(format!("{msg}, but took {elapsed:.2?} (limit {limit:?})")),
        (Ok(msg), _) => Ok(format!("{msg} in {elapsed:.2?}")),
        (Err(e), _) => Err(e),
    }
}

fn f0() -> StepFunction {
    StepFunction::on_finite([(int(3), int(1)), (int(1), int(2)), (int(2), q(1, 2))]).unwrap()
}

fn sample(index: u64) -> StepFunction {
    random_step_function(&mut instance_rng(SEED, index), &SampleConfig::default())
}

fn rearrangement_oracle() -> Outcome {
    for i in 0..10_000 {
        let f = sample(i);
        let xi = rearrangement(&f);
        if rearrangement_from_distribution(&distribution(&f)) != xi {
            return Err(format!("instance {i}: oracle disagrees"));
        }
        if rearrangement(&xi.to_step_function()) != xi {
            return Err(format!("instance {i}: not idempotent"));
        }
    }
    Ok("10000 instances exact".into())
}

fn norm_transfer() -> Outcome {
    let exact_specs = [
        NormSpec::Lp(int(1)),
        NormSpec::LInf,
        NormSpec::L1CapLInf,
        NormSpec::L1PlusLInf,
        NormSpec::LInfPlusTail,
    ];
    let lp_specs: Vec<NormSpec> = [q(1, 2), q(3, 2), int(2), int(3)].into_iter().map(NormSpec::Lp).collect();
    let mut worst: f64 = 0.0;
    for i in 0..10_000 {
        let f = sample(i);
        let xi = rearrangement(&f);
        for spec in &exact_specs {
            let (a, b) = (norm(&f, spec), norm_of_profile(&xi, spec));
            let same = (a.is_infinite && b.is_infinite) || (a.exact.is_some() && a.exact == b.exact);
            if !same {
                return Err(format!("instance {i}, {spec}: {a} vs {b}"));
            }
        }
        for spec in &lp_specs {
            let (a, b) = (norm(&f, spec), norm_of_profile(&xi, spec));
            if a.is_infinite != b.is_infinite {
                return Err(format!("instance {i}, {spec}: {a} vs {b}"));
            }
            if a.is_infinite {
                continue;
            }
            if !rel_close(a.approx, b.approx, TRANSFER_TOL) {
                return Err(format!("instance {i}, {spec}: {} vs {}", a.approx, b.approx));
            }
            if a.approx > 0.0 {
                worst = worst.max((a.approx - b.approx).abs() / a.approx);
            }
        }
    }
    Ok(format!("10000 instances, exact specs equal, worst Lp relative gap {worst:.1e}"))
}

fn aoki_rolewicz() -> Outcome {
    let two = aoki_rolewicz_exponent(&int(2)).map_err(|e| e.to_string())?;
    let one = aoki_rolewicz_exponent(&int(1)).map_err(|e| e.to_string())?;
    if two.exact != Some(q(1, 2)) || one.exact != Some(int(1)) {
        return Err(format!("exponents {:?}, {:?}", two.exact, one.exact));
    }
    let cfg = SampleConfig::without_tails();
    for i in 0..10_000 {
        let (f, g) = random_pair(&mut instance_rng(SEED, i), &cfg);
        for p in [q(1, 3), q(1, 2), int(1)] {
            let c = p_subadditivity_check(&f, &g, &p).map_err(|e| format!("pair {i}, p = {p}: {e}"))?;
            if !c.holds {
                return Err(format!("pair {i}, p = {p}: fails"));
            }
        }
    }
    Ok("exponents 1/2 and 1 exact; 10000 pairs x 3 exponents hold".into())
}

fn embedding() -> Outcome {
    for i in 0..10_000 {
        if let Err(c) = check(Suite::Embedding, SEED, i) {
            return Err(format!("instance {i}: {}", c.detail));
        }
    }
    let c = embedding_check(&f0(), &NormSpec::Lp(int(2))).map_err(|e| e.to_string())?;
    let thirteen = Some(PthPower { p: int(2), value: int(13) });
    if c.lhs.exact != Some(int(6)) || c.mid.pth_power != thirteen || c.rhs.exact != Some(int(3)) || !c.holds {
        return Err(format!("worked instance gives ({}, {}, {})", c.lhs, c.mid, c.rhs));
    }
    Ok("10000 pairs hold; worked instance (6, sqrt 13, 3) with 13 exact".into())
}

fn duality() -> Outcome {
    let cfg = SampleConfig {
        max_pieces: 6,
        ..SampleConfig::without_tails()
    };
    let lp_family = [
        NormSpec::Lp(int(1)),
        NormSpec::Lp(q(3, 2)),
        NormSpec::Lp(int(2)),
        NormSpec::Lp(int(3)),
        NormSpec::LInf,
    ];
    let mut worst: f64 = 0.0;
    for i in 0..1_000u64 {
        let g = random_step_function(&mut instance_rng(SEED, i), &cfg);
        let spec = &lp_family[(i % 5) as usize];
        let err = |e: symspace_core::Error| format!("instance {i}, {spec}: {e}");
        let a = associate_norm(&g, spec).map_err(err)?.value;
        let o = dual_norm_oracle(&g, spec, 1).map_err(err)?.value;
        if !rel_close(a.approx, o.approx, DUAL_TOL) {
            return Err(format!("instance {i}, {spec}: analytic {} vs oracle {}", a.approx, o.approx));
        }
        if a.approx > 0.0 {
            worst = worst.max((a.approx - o.approx).abs() / a.approx);
        }
        let second = second_associate_norm(&g, spec).map_err(err)?;
        let direct = norm(&g, spec);
        if !second.le(&direct, DUAL_TOL) {
            return Err(format!("instance {i}, {spec}: second associate {second} exceeds {direct}"));
        }
    }
    let banach: Vec<NormSpec> = lp_family
        .iter()
        .cloned()
        .chain([NormSpec::L1CapLInf, NormSpec::L1PlusLInf, NormSpec::LInfPlusTail])
        .collect();
    let small = SampleConfig {
        max_pieces: 4,
        ..SampleConfig::default()
    };
    let mut worst_triple: f64 = 0.0;
    let mut infinite = 0;
    for i in 0..200u64 {
        let g = random_step_function(&mut instance_rng(SEED + 1, i), &small);
        let spec = &banach[(i as usize) % banach.len()];
        let err = |e: symspace_core::Error| format!("triple {i}, {spec}: {e}");
        let once = associate_norm(&g, spec).map_err(err)?.value;
        let thrice = iterated_associate_norm(&g, spec, 3).map_err(err)?.value;
        if once.is_infinite != thrice.is_infinite {
            return Err(format!("triple {i}, {spec}: {once} vs {thrice}"));
        }
        if once.is_infinite {
            infinite += 1;
            continue;
        }
        if !rel_close(once.approx, thrice.approx, TRIPLE_TOL) {
            return Err(format!("triple {i}, {spec}: {} vs {}", once.approx, thrice.approx));
        }
        if once.approx > 0.0 {
            worst_triple = worst_triple.max((once.approx - thrice.approx).abs() / once.approx);
        }
    }
    Ok(format!(
        "1000 closed-form checks (worst {worst:.1e}), contraction on all, 200 triple associates ({infinite} infinite on both sides, worst {worst_triple:.1e})"
    ))
}

fn tail_counterexample() -> Outcome {
    let f = StepFunction::with_tail([], int(1)).map_err(|e| e.to_string())?;
    let n = norm(&f, &NormSpec::LInfPlusTail);
    let sup = norm(&f, &NormSpec::LInf);
    if n.exact != Some(int(2)) || sup.exact.as_ref().map(|s| s * int(2)) != Some(int(2)) {
        return Err(format!("norm {n}, sup {sup}"));
    }
    let space = MeasureSpace::infinite();
    let chain: Vec<StepFunction> = (1..=16)
        .map(|k| StepFunction::indicator_prefix(&space, &int(k)).unwrap())
        .collect();
    let gap = property_c_gap(&chain, &f, &NormSpec::LInfPlusTail).map_err(|e| e.to_string())?;
    if gap.gap.exact != Some(int(1)) {
        return Err(format!("gap {}", gap.gap));
    }
    Ok("norm 2 = 2 * sup norm; indicator chain gap exactly 1".into())
}

fn minimality() -> Outcome {
    for spec in [NormSpec::Lp(q(1, 2)), NormSpec::Lp(int(1)), NormSpec::Lp(int(2))] {
        let rows = cutoff_sequences(&f0(), &spec, 4).map_err(|e| e.to_string())?;
        let last = rows.last().ok_or("no rows")?;
        if !(last.top_residual.exact == Some(int(0)) && last.support_residual.exact == Some(int(0))) {
            return Err(format!("{spec}: at n = 4 residuals {} and {}", last.top_residual, last.support_residual));
        }
    }
    let f = StepFunction::with_tail([(int(3), int(1)), (int(2), q(1, 2))], int(1)).map_err(|e| e.to_string())?;
    let rows = cutoff_sequences(&f, &NormSpec::LInf, 100).map_err(|e| e.to_string())?;
    if rows.len() != 100 {
        return Err(format!("{} rows", rows.len()));
    }
    if let Some(r) = rows.iter().find(|r| !r.support_residual.exact.as_ref().is_some_and(|v| v >= &int(1))) {
        return Err(format!("LInf support residual {} at n = {}", r.support_residual, r.n));
    }
    Ok("f0 residuals vanish by n = 4 for L1/2, L1, L2; LInf support residual >= 1 up to n = 100".into())
}

fn transport() -> Outcome {
    let cfg = SampleConfig::finite_nonnegative();
    for i in 0..10_000 {
        let f = random_step_function(&mut instance_rng(SEED, i), &cfg);
        let map = transport_map(&f).map_err(|e| format!("instance {i}: {e}"))?;
        map.verify(&f).map_err(|d| format!("instance {i}: {d:?}"))?;
    }
    Ok("10000 maps preserve mass and compose exactly".into())
}

fn stone() -> Outcome {
    for i in 0..500 {
        if let Err(c) = check(Suite::Stone, SEED, i) {
            return Err(format!("instance {i}: {}", c.detail));
        }
    }
    Ok("500 algebras".into())
}

fn hardy_littlewood() -> Outcome {
    let cfg = SampleConfig::default();
    let mut checked = 0u64;
    for i in 0..200 {
        let rng = &mut instance_rng(SEED, i);
        let mass: Rational = q(rng.gen_range(1..=10), rng.gen_range(1..=10));
        let f_vals: Vec<Rational> = (0..6).map(|_| random_value(rng, &cfg)).collect();
        let g_vals: Vec<Rational> = (0..6).map(|_| random_value(rng, &cfg)).collect();
        let build = |vals: Vec<Rational>| StepFunction::on_finite(vals.into_iter().map(|v| (v, mass.clone()))).unwrap();
        let f = build(f_vals);
        let bound = hl_pairing(&rearrangement(&f), &rearrangement(&build(g_vals.clone())));
        for perm in g_vals.iter().cloned().permutations(6) {
            let g = build(perm);
            let aligned = f
                .pointwise(&g, PointwiseOp::Multiply)
                .and_then(|h| h.abs().integrate())
                .map_err(|e| e.to_string())?;
            if aligned > bound {
                return Err(format!("instance {i}: {aligned} exceeds {bound}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} permutations"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("rearrangement oracle equivalence", Some(Duration::from_secs(10)), rearrangement_oracle),
        ("norm transfer", None, norm_transfer),
        ("Aoki-Rolewicz exponents and p-subadditivity", None, aoki_rolewicz),
        ("embedding inequality", None, embedding),
        ("associate norms", Some(Duration::from_secs(60)), duality),
        ("sup-plus-tail counterexample", None, tail_counterexample),
        ("cutoff minimality diagnostics", None, minimality),
        ("transport maps", None, transport),
        ("Stone suite", Some(Duration::from_secs(30)), stone),
        ("Hardy-Littlewood dominance", None, hardy_littlewood),
    ];
    let mut failures = 0;
    for (k, (name, limit, body)) in criteria.into_iter().enumerate() {
        match timed(limit, body) {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", k + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
