use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use symspace_core::duality::{
    associate_norm, dual_norm_oracle, fatou_check, property_c_gap, second_associate, DualNormResult,
};
use symspace_core::norms::{norm, NormSpec, NormValue};
use symspace_core::rearrange::{cutoff_sequences, distribution, equimeasurable, rearrangement, transport_map};
use symspace_core::stone::{
    generate_algebra_from_points, stone_map, subset_points, ultrafilters, verify_stone_isomorphism,
};
use symspace_core::suite::{check, Counterexample, Suite, SuiteReport};
use symspace_core::StepFunction;

use crate::error::CliError;
use crate::io::parse;

/// Result document of a command.
#[derive(Debug)]
pub enum Output {
    Json(Value),
    Csv(String),
}

#[derive(Debug)]
pub struct Outcome {
    pub output: Output,
    /// A checked property failed; the output carries the evidence.
    pub violation: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Self {
            output: Output::Json(value),
            violation: false,
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(x)?)
}

pub fn parse_spec(s: &str) -> Result<NormSpec, CliError> {
    if s.trim_start().starts_with('{') {
        parse(s)
    } else {
        Ok(s.parse::<NormSpec>()?)
    }
}

pub fn rearrange(input: &str) -> Result<Outcome, CliError> {
    let f: StepFunction = parse(input)?;
    Ok(Outcome::ok(to_json(&rearrangement(&f))?))
}

pub fn distribution_cmd(input: &str) -> Result<Outcome, CliError> {
    let f: StepFunction = parse(input)?;
    Ok(Outcome::ok(to_json(&distribution(&f))?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput {
    f: StepFunction,
    g: StepFunction,
}

pub fn equimeasurable_cmd(input: &str) -> Result<Outcome, CliError> {
    let PairInput { f, g } = parse(input)?;
    Ok(Outcome::ok(json!({
        "equimeasurable": equimeasurable(&f, &g),
        "rearrangement_f": rearrangement(&f),
        "rearrangement_g": rearrangement(&g),
    })))
}

pub fn transport(input: &str) -> Result<Outcome, CliError> {
    let f: StepFunction = parse(input)?;
    let map = transport_map(&f)?;
    let verdict = map.verify(&f);
    let defect = verdict.as_ref().err().map(|d| format!("{d:?}"));
    Ok(Outcome {
        output: Output::Json(json!({ "map": map, "verified": verdict.is_ok(), "defect": defect })),
        violation: verdict.is_err(),
    })
}

pub fn cutoff(input: &str, spec: &NormSpec, n_max: u64, csv_out: bool) -> Result<Outcome, CliError> {
    let f: StepFunction = parse(input)?;
    let rows = cutoff_sequences(&f, spec, n_max)?;
    if !csv_out {
        return Ok(Outcome::ok(to_json(&rows)?));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "top_residual", "support_residual"])?;
    for r in &rows {
        w.write_record([r.n.to_string(), r.top_residual.approx.to_string(), r.support_residual.approx.to_string()])?;
    }
    Ok(Outcome {
        output: Output::Csv(csv_string(w)?),
        violation: false,
    })
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn exact_field(v: &NormValue) -> String {
    if let Some(x) = &v.exact {
        return x.to_string();
    }
    match &v.pth_power {
        Some(pp) => format!("({})^(1/{})", pp.value, pp.p),
        None => String::new(),
    }
}

/// One function gives a JSON value per spec; an array of functions gives
/// a CSV table with one row per (function, spec).
pub fn norm_cmd(input: &str, specs: &[NormSpec]) -> Result<Outcome, CliError> {
    let doc: Value = parse(input)?;
    if !doc.is_array() {
        let f: StepFunction = parse(input)?;
        let values: Vec<NormValue> = specs.iter().map(|s| norm(&f, s)).collect();
        return Ok(Outcome::ok(match values.as_slice() {
            [one] => to_json(one)?,
            _ => Value::Array(
                specs
                    .iter()
                    .zip(&values)
                    .map(|(s, v)| json!({ "spec": s.label(), "value": v }))
                    .collect(),
            ),
        }));
    }
    let fs: Vec<StepFunction> = parse(input)?;
    let rows: Vec<Vec<String>> = fs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(id, f)| {
            specs.iter().map(move |s| {
                let v = norm(f, s);
                vec![
                    id.to_string(),
                    s.label(),
                    exact_field(&v),
                    if v.is_infinite { "inf".into() } else { v.approx.to_string() },
                    v.is_infinite.to_string(),
                ]
            })
        })
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "spec", "exact", "approx", "infinite"])?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(Outcome {
        output: Output::Csv(csv_string(w)?),
        violation: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Analytic,
    Oracle,
    Both,
}

fn discrepancy(a: &DualNormResult, b: &DualNormResult) -> Value {
    let (x, y) = (a.value.approx, b.value.approx);
    if a.value.is_infinite || b.value.is_infinite {
        let agree = a.value.is_infinite == b.value.is_infinite;
        return json!({ "absolute": if agree { Some(0.0) } else { None }, "relative": if agree { Some(0.0) } else { None } });
    }
    let abs = (x - y).abs();
    let scale = x.abs().max(y.abs());
    json!({ "absolute": abs, "relative": if scale > 0.0 { abs / scale } else { 0.0 } })
}

pub fn dual_norm(input: &str, spec: &NormSpec, method: MethodArg, refinement: usize) -> Result<Outcome, CliError> {
    let g: StepFunction = parse(input)?;
    if refinement == 0 {
        return Err(CliError::Input("--refinement must be at least 1".into()));
    }
    let value = match method {
        MethodArg::Analytic => to_json(&associate_norm(&g, spec)?)?,
        MethodArg::Oracle => to_json(&dual_norm_oracle(&g, spec, refinement)?)?,
        MethodArg::Both => {
            let a = associate_norm(&g, spec)?;
            let o = dual_norm_oracle(&g, spec, refinement)?;
            json!({ "analytic": a, "oracle": o, "discrepancy": discrepancy(&a, &o) })
        }
    };
    Ok(Outcome::ok(value))
}

pub fn second_dual(input: &str, spec: &NormSpec, tol: f64) -> Result<Outcome, CliError> {
    let f: StepFunction = parse(input)?;
    let second = second_associate(&f, spec)?;
    let direct = norm(&f, spec);
    let holds = second.value.le(&direct, tol);
    Ok(Outcome {
        output: Output::Json(json!({
            "second_associate": second,
            "norm": direct,
            "contraction_holds": holds,
            "equal": second.value.compare(&direct, tol).is_eq(),
        })),
        violation: !holds,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainInput {
    chain: Vec<StepFunction>,
    limit: StepFunction,
}

pub fn property_c(input: &str, spec: &NormSpec) -> Result<Outcome, CliError> {
    let ChainInput { chain, limit } = parse(input)?;
    Ok(Outcome::ok(to_json(&property_c_gap(&chain, &limit, spec)?)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceInput {
    sequence: Vec<StepFunction>,
    limit: StepFunction,
}

pub fn fatou(input: &str, spec: &NormSpec) -> Result<Outcome, CliError> {
    let SequenceInput { sequence, limit } = parse(input)?;
    Ok(Outcome::ok(to_json(&fatou_check(&sequence, &limit, spec)?)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StoneInput {
    n: usize,
    generators: Vec<Vec<usize>>,
}

pub fn stone(input: &str) -> Result<Outcome, CliError> {
    let StoneInput { n, generators } = parse(input)?;
    let alg = generate_algebra_from_points(n, &generators)?;
    let members: Vec<Vec<usize>> = alg.members().iter().map(|&m| subset_points(m)).collect();
    let atoms: Vec<Vec<usize>> = alg.atoms().iter().map(|&a| subset_points(a)).collect();
    let ufs: Vec<Value> = ultrafilters(&alg)
        .iter()
        .zip(&atoms)
        .map(|(u, atom)| json!({ "atom": atom, "members": u.selected }))
        .collect();
    let table = alg
        .members()
        .iter()
        .map(|&m| {
            let image = stone_map(&alg, m)?;
            Ok(json!({ "member": subset_points(m), "ultrafilters": subset_points(image) }))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    Ok(Outcome::ok(json!({
        "n": n,
        "members": members,
        "atoms": atoms,
        "ultrafilters": ufs,
        "stone_map": table,
        "isomorphism": verify_stone_isomorphism(&alg),
    })))
}

/// Runs instances `0..n` in parallel; the report matches a sequential run
/// that stops at the first failure.
pub fn verify(suite: Suite, n: u64, seed: u64) -> Result<Outcome, CliError> {
    let first: Option<Counterexample> = (0..n)
        .into_par_iter()
        .map(|i| check(suite, seed, i))
        .find_first(Result::is_err)
        .and_then(Result::err);
    let report = SuiteReport {
        suite: suite.as_str().into(),
        n,
        seed,
        passes: first.as_ref().map_or(n, |c| c.index),
        counterexample: first,
    };
    let violation = report.counterexample.is_some();
    Ok(Outcome {
        output: Output::Json(to_json(&report)?),
        violation,
    })
}
