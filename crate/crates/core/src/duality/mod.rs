//! Associate (Köthe dual) norms through the rearrangement pairing, iterated
//! associates, and order semi-continuity and Fatou diagnostics.

mod oracle;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ext::{to_f64, Extended, Rational};
use crate::measure::{refine, StepFunction};
use crate::norms::{norm, NormSpec, NormValue, DEFAULT_TOLERANCE};
use crate::rearrange::{rearrangement, DecreasingProfile};

use oracle::{fundamental, is_quasi, solve, Level};

/// `∫ ξ_f·ξ_g`; `+∞` when both profiles are positive on a common infinite segment.
pub fn hl_pairing(xi_f: &DecreasingProfile, xi_g: &DecreasingProfile) -> Extended {
    let (a, b) = (xi_f.segments(), xi_g.segments());
    let (mut i, mut j) = (0, 0);
    let mut left_a = a.first().map(|s| s.length.clone());
    let mut left_b = b.first().map(|s| s.length.clone());
    let mut total = Rational::zero();
    while let (Some(la), Some(lb)) = (left_a.clone(), left_b.clone()) {
        let product = &a[i].value * &b[j].value;
        let step = la.clone().min(lb.clone());
        match &step {
            Extended::Infinite => {
                return if product.is_positive() {
                    Extended::Infinite
                } else {
                    Extended::Finite(total)
                };
            }
            Extended::Finite(s) => total += s * product,
        }
        let s = step.finite().expect("finite step").clone();
        left_a = Some(la.sub_finite(&s));
        left_b = Some(lb.sub_finite(&s));
        if left_a.as_ref().is_some_and(|l| l.finite().is_some_and(Zero::is_zero)) {
            i += 1;
            left_a = a.get(i).map(|x| x.length.clone());
        }
        if left_b.as_ref().is_some_and(|l| l.finite().is_some_and(Zero::is_zero)) {
            j += 1;
            left_b = b.get(j).map(|x| x.length.clone());
        }
    }
    Extended::Finite(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Oracle => "oracle",
        }
    }
}

/// Value of a dual norm and a decreasing profile attaining it.
///
/// When the value is infinite the witness is one member of a family of
/// unit-norm profiles whose pairings diverge.
#[derive(Debug, Clone, PartialEq)]
pub struct DualNormResult {
    pub value: NormValue,
    pub witness: DecreasingProfile,
    pub method: Method,
}

const TRUNCATION_TOLERANCE: f64 = 2.842170943040401e-14; // 2^-45
const MAX_DOUBLINGS: u32 = 40;
const DIVERGENT_WITNESS_SCALE: f64 = 1024.0;

fn from_f64(x: f64) -> Rational {
    BigRational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Finite cells of a profile, each split into `refinement` equal parts.
/// Returns rational lengths, float lengths and float values.
fn cells(xi: &DecreasingProfile, refinement: usize) -> (Vec<Rational>, Vec<f64>, Vec<f64>) {
    let k = Rational::from_integer(refinement.max(1).into());
    let mut lens = Vec::new();
    let mut vals = Vec::new();
    for s in xi.segments() {
        if let Some(l) = s.length.finite() {
            if s.value.is_positive() {
                let part = l / &k;
                for _ in 0..refinement.max(1) {
                    lens.push(part.clone());
                    vals.push(to_f64(&s.value));
                }
            }
        }
    }
    let flens = lens.iter().map(to_f64).collect();
    (lens, flens, vals)
}

/// Witness profile from per-cell float values, padded with zero to `domain`.
fn witness_profile(lens: &[Rational], values: &[f64], domain: &Extended) -> DecreasingProfile {
    let mut running = f64::INFINITY;
    let mut raw: Vec<(Extended, Rational)> = Vec::with_capacity(lens.len() + 1);
    let mut covered = Rational::zero();
    for (l, &v) in lens.iter().zip(values) {
        running = running.min(v.max(0.0));
        raw.push((Extended::Finite(l.clone()), from_f64(running)));
        covered += l;
    }
    match domain {
        Extended::Infinite => raw.push((Extended::Infinite, Rational::zero())),
        Extended::Finite(total) if total > &covered => {
            raw.push((Extended::Finite(total - &covered), Rational::zero()))
        }
        Extended::Finite(_) => {}
    }
    DecreasingProfile::from_nonincreasing(raw).expect("witness is non-increasing")
}

fn zero_result(domain: &Extended, method: Method) -> DualNormResult {
    DualNormResult {
        value: NormValue::exact(Rational::zero()),
        witness: witness_profile(&[], &[], domain),
        method,
    }
}

/// `sup {∫ v·ξ : v decreasing, ‖v‖_level ≤ 1}` by the finite-partition oracle.
fn oracle_profile(xi: &DecreasingProfile, level: &Level, refinement: usize) -> Result<DualNormResult> {
    let domain = xi.total_length();
    let tail = xi
        .segments()
        .last()
        .filter(|s| s.length.is_infinite() && s.value.is_positive())
        .map(|s| s.value.clone());
    let (lens, flens, vals) = cells(xi, refinement);
    let Some(gamma) = tail else {
        if lens.is_empty() {
            return Ok(zero_result(&domain, Method::Oracle));
        }
        let sol = solve(&flens, &vals, level);
        return Ok(DualNormResult {
            value: NormValue::from_f64(sol.value),
            witness: witness_profile(&lens, &sol.witness, &domain),
            method: Method::Oracle,
        });
    };

    let start: Rational = lens.iter().sum();
    let base = start.clone().max(Rational::one());
    if level.indicator_ratio_unbounded() {
        let n = to_f64(&base) * DIVERGENT_WITNESS_SCALE;
        let height = 1.0 / fundamental(level, n);
        return Ok(DualNormResult {
            value: NormValue::infinite(),
            witness: witness_profile(&[from_f64(n)], &[height], &domain),
            method: Method::Oracle,
        });
    }

    let gamma = to_f64(&gamma);
    let mut previous: Option<f64> = None;
    for j in 0..=MAX_DOUBLINGS {
        let end = &base * Rational::from_integer((1u64 << j).into());
        let extra = &end - &start;
        let mut lens_t = lens.clone();
        let mut flens_t = flens.clone();
        let mut vals_t = vals.clone();
        if extra.is_positive() {
            flens_t.push(to_f64(&extra));
            lens_t.push(extra);
            vals_t.push(gamma);
        }
        let sol = solve(&flens_t, &vals_t, level);
        if let Some(prev) = previous {
            if (sol.value - prev).abs() <= TRUNCATION_TOLERANCE * sol.value.abs() {
                return Ok(DualNormResult {
                    value: NormValue::from_f64(sol.value),
                    witness: witness_profile(&lens_t, &sol.witness, &domain),
                    method: Method::Oracle,
                });
            }
        }
        previous = Some(sol.value);
    }
    Err(Error::NoConvergence)
}

fn check_banach(spec: &NormSpec) -> Result<()> {
    if is_quasi(spec) {
        Err(Error::QuasiNormSpec(spec.label()))
    } else {
        Ok(())
    }
}

/// `‖g‖_{E¹}` by the finite-partition oracle; `refinement` splits every
/// segment of `ξ_g` into that many equal cells.
pub fn dual_norm_oracle(g: &StepFunction, spec: &NormSpec, refinement: usize) -> Result<DualNormResult> {
    check_banach(spec)?;
    oracle_profile(&rearrangement(g), &Level::base(spec), refinement)
}

/// `‖g‖_{E¹}`, in closed form for `L_p` (`p ≥ 1`) and `L_∞`, otherwise by the oracle.
pub fn associate_norm(g: &StepFunction, spec: &NormSpec) -> Result<DualNormResult> {
    check_banach(spec)?;
    let xi = rearrangement(g);
    let domain = xi.total_length();
    if xi.sup().is_zero() {
        return Ok(zero_result(&domain, Method::Analytic));
    }
    match spec {
        NormSpec::Lp(p) if p.is_one() => {
            let first = &xi.segments()[0];
            let len = first.length.finite().cloned().unwrap_or_else(Rational::one);
            let witness = DecreasingProfile::indicator(len.clone(), len.recip(), &domain)?;
            Ok(DualNormResult {
                value: NormValue::exact(xi.sup().clone()),
                witness,
                method: Method::Analytic,
            })
        }
        NormSpec::Lp(p) => {
            let q = p / (p - Rational::one());
            let value = norm(g, &NormSpec::Lp(q.clone()));
            let witness = if value.is_infinite {
                let (lens, _, _) = cells(&xi, 1);
                let start: Rational = lens.iter().sum();
                let n = to_f64(&start.max(Rational::one())) * DIVERGENT_WITNESS_SCALE;
                witness_profile(&[from_f64(n)], &[n.powf(-1.0 / to_f64(p))], &domain)
            } else {
                let (lens, _, vals) = cells(&xi, 1);
                let qf = to_f64(&q);
                let w: Vec<f64> = vals
                    .iter()
                    .map(|v| (v / value.approx).powf(qf - 1.0))
                    .collect();
                witness_profile(&lens, &w, &domain)
            };
            Ok(DualNormResult {
                value,
                witness,
                method: Method::Analytic,
            })
        }
        NormSpec::LInf => {
            let witness = DecreasingProfile::from_nonincreasing([(domain.clone(), Rational::one())])?;
            Ok(DualNormResult {
                value: norm(g, &NormSpec::Lp(Rational::one())),
                witness,
                method: Method::Analytic,
            })
        }
        _ => oracle_profile(&xi, &Level::base(spec), 1),
    }
}

/// `‖g‖` in the `order`-th associate space: order 1 is [`associate_norm`];
/// higher orders run the oracle against the nested associate levels.
pub fn iterated_associate_norm(g: &StepFunction, spec: &NormSpec, order: usize) -> Result<DualNormResult> {
    check_banach(spec)?;
    match order {
        0 => Err(Error::InvalidInput("associate order must be at least 1".into())),
        1 => associate_norm(g, spec),
        _ => {
            let level = (1..order).fold(Level::base(spec), |l, _| l.associate());
            oracle_profile(&rearrangement(g), &level, 1)
        }
    }
}

/// `‖f‖_{E¹¹}` with its maximizing profile in the unit ball of `E¹`.
pub fn second_associate(f: &StepFunction, spec: &NormSpec) -> Result<DualNormResult> {
    iterated_associate_norm(f, spec, 2)
}

/// `‖f‖_{E¹¹} ≤ ‖f‖_E`, with equality exactly when `E` has property (C).
pub fn second_associate_norm(f: &StepFunction, spec: &NormSpec) -> Result<NormValue> {
    second_associate(f, spec).map(|r| r.value)
}

fn difference(hi: &NormValue, lo: &NormValue) -> NormValue {
    match (hi.is_infinite, lo.is_infinite) {
        (true, true) => NormValue::exact(Rational::zero()),
        (true, false) => NormValue::infinite(),
        _ => match (&hi.exact, &lo.exact) {
            (Some(a), Some(b)) => NormValue::exact(a - b),
            _ => NormValue::from_f64(hi.approx - lo.approx),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCGap {
    pub sup_chain_norm: NormValue,
    pub limit_norm: NormValue,
    /// `limit_norm − sup_chain_norm`; positive values certify a failure of (C).
    pub gap: NormValue,
}

/// Index of the first element breaking `0 ≤ f_1 ≤ f_2 ≤ … ≤ limit`
/// (the limit has index `chain.len()`).
fn chain_defect(chain: &[StepFunction], limit: &StepFunction) -> Result<Option<usize>> {
    let all: Vec<&StepFunction> = chain.iter().chain(std::iter::once(limit)).collect();
    let r = refine(&all)?;
    let rows: Vec<Vec<&Rational>> = r
        .cells
        .iter()
        .map(|c| c.values.iter().collect())
        .chain(r.tails.iter().map(|t| t.iter().collect()))
        .collect();
    for k in 0..all.len() {
        let bad = rows.iter().any(|row| {
            row[k].is_negative() || (k > 0 && row[k] < row[k - 1])
        });
        if bad {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Compares `sup_n ‖f_n‖` with `‖f‖` for a non-decreasing nonnegative chain
/// dominated by `limit`.
pub fn property_c_gap(chain: &[StepFunction], limit: &StepFunction, spec: &NormSpec) -> Result<PropertyCGap> {
    if chain.is_empty() {
        return Err(Error::InvalidInput("chain is empty".into()));
    }
    if let Some(k) = chain_defect(chain, limit)? {
        return Err(Error::NotAChain(k));
    }
    let sup_chain_norm = chain
        .iter()
        .map(|f| norm(f, spec))
        .reduce(|a, b| if b.compare(&a, DEFAULT_TOLERANCE).is_gt() { b } else { a })
        .expect("nonempty chain");
    let limit_norm = norm(limit, spec);
    let gap = difference(&limit_norm, &sup_chain_norm);
    Ok(PropertyCGap {
        sup_chain_norm,
        limit_norm,
        gap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FatouOutcome {
    Checked {
        /// Estimate of `liminf ‖f_n‖` over the tail window.
        liminf: NormValue,
        limit: NormValue,
        holds: bool,
    },
    NotApplicable {
        reason: String,
    },
}

/// `a + b`, or `(a^p + b^p)^{1/p}` for a quasi-norm exponent `p < 1`.
fn combine(a: &NormValue, b: &NormValue, spec: &NormSpec) -> NormValue {
    if a.is_infinite || b.is_infinite {
        return NormValue::infinite();
    }
    match spec {
        NormSpec::Lp(p) if is_quasi(spec) => {
            let p = to_f64(p);
            NormValue::from_f64((a.approx.powf(p) + b.approx.powf(p)).powf(1.0 / p))
        }
        _ => match (&a.exact, &b.exact) {
            (Some(x), Some(y)) => NormValue::exact(x + y),
            _ => NormValue::from_f64(a.approx + b.approx),
        },
    }
}

/// Checks `‖f‖ ≤ liminf ‖f_n‖` on finite data.
///
/// Convergence is judged on the cells of the common refinement over the last
/// half of the sequence (at least two terms): the sup distance to the limit
/// must be non-increasing and end at zero or below its starting value. The
/// liminf is estimated by `min ‖f_n‖ + ‖(f − f_n)·1_R‖` over that window,
/// where `R` is the region the refinement resolves, so that terms which have
/// not yet reached the limit on `R` are not penalized while mass outside `R`
/// is.
pub fn fatou_check(sequence: &[StepFunction], limit: &StepFunction, spec: &NormSpec) -> Result<FatouOutcome> {
    if sequence.len() < 2 {
        return Err(Error::InvalidInput("need at least two terms".into()));
    }
    let all: Vec<&StepFunction> = sequence.iter().chain(std::iter::once(limit)).collect();
    let r = refine(&all)?;
    let limit_norm = norm(limit, spec);
    if limit_norm.is_infinite {
        return Ok(FatouOutcome::NotApplicable {
            reason: "limit has infinite norm".into(),
        });
    }
    let norms: Vec<NormValue> = sequence.iter().map(|f| norm(f, spec)).collect();
    if norms.iter().any(|n| n.is_infinite) {
        return Ok(FatouOutcome::NotApplicable {
            reason: "sequence is not norm-bounded".into(),
        });
    }
    let n = sequence.len();
    let window = n.div_ceil(2).max(2);
    let start = n - window;
    let last = n;
    let distances: Vec<Rational> = (start..n)
        .map(|k| {
            r.cells
                .iter()
                .map(|c| (&c.values[k] - &c.values[last]).abs())
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    let monotone = distances.windows(2).all(|w| w[1] <= w[0]);
    let final_d = distances.last().expect("window");
    if !monotone || !(final_d.is_zero() || final_d < &distances[0]) {
        return Err(Error::NoConvergence);
    }

    let mut liminf: Option<NormValue> = None;
    for (k, norm_k) in norms.iter().enumerate().take(n).skip(start) {
        let pieces = r
            .cells
            .iter()
            .map(|c| (&c.values[last] - &c.values[k], c.len.clone()));
        let residual = StepFunction::on_finite(pieces)
            .map(|res| norm(&res, spec))
            .unwrap_or_else(|_| NormValue::exact(Rational::zero()));
        let estimate = combine(norm_k, &residual, spec);
        liminf = Some(match liminf {
            Some(cur) if cur.le(&estimate, DEFAULT_TOLERANCE) => cur,
            _ => estimate,
        });
    }
    let liminf = liminf.expect("window");
    let holds = limit_norm.le(&liminf, DEFAULT_TOLERANCE);
    Ok(FatouOutcome::Checked {
        liminf,
        limit: limit_norm,
        holds,
    })
}
