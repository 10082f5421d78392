//! Floating-point maximization of `∫ v·ξ_g` over decreasing `v` in a unit
//! ball, on a fixed partition into finite cells.
//!
//! A decreasing step profile on cells `0..m` is written `v = Σ_k a_k 1_{[0,L_k)}`
//! with `a_k ≥ 0`, where `L_k` is the right end of cell `k`. The pairing is
//! then linear, `Σ a_k C_k` with `C_k = ∫_0^{L_k} ξ_g`, so substituting
//! `b_k = a_k C_k` turns the problem into minimizing the convex function
//! `b ↦ N(v(b))` over the probability simplex. The optimum value is `1/min N`.

use num_traits::{One, Signed};

use crate::ext::{to_f64, Rational};
use crate::norms::NormSpec;

/// A norm evaluated on decreasing profiles: a built-in family or the
/// associate of another level.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Level {
    Base(NormSpec),
    Associate(Box<Level>),
}

fn lp_eval(p: f64, lens: &[f64], vals: &[f64]) -> f64 {
    let top = vals.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let s: f64 = lens
        .iter()
        .zip(vals)
        .map(|(l, v)| l * (v / top).powf(p))
        .sum();
    top * s.powf(1.0 / p)
}

fn sup(vals: &[f64]) -> f64 {
    vals.iter().copied().fold(0.0, f64::max)
}

fn l1(lens: &[f64], vals: &[f64]) -> f64 {
    lens.iter().zip(vals).map(|(l, v)| l * v).sum()
}

fn sum_norm(lens: &[f64], vals: &[f64]) -> f64 {
    std::iter::once(0.0)
        .chain(vals.iter().copied())
        .map(|c| {
            lens.iter()
                .zip(vals)
                .map(|(l, v)| l * (v - c).max(0.0))
                .sum::<f64>()
                + c
        })
        .fold(f64::INFINITY, f64::min)
}

impl Level {
    pub(crate) fn base(spec: &NormSpec) -> Self {
        Level::Base(spec.clone())
    }

    pub(crate) fn associate(self) -> Self {
        Level::Associate(Box::new(self))
    }

    /// Norm of the decreasing profile with values `vals` on consecutive cells
    /// of lengths `lens`, zero afterwards.
    pub(crate) fn eval(&self, lens: &[f64], vals: &[f64]) -> f64 {
        match self {
            Level::Base(spec) => match spec {
                NormSpec::Lp(p) => lp_eval(to_f64(p), lens, vals),
                NormSpec::LInf | NormSpec::LInfPlusTail => sup(vals),
                NormSpec::L1CapLInf => l1(lens, vals).max(sup(vals)),
                NormSpec::L1PlusLInf => sum_norm(lens, vals),
            },
            Level::Associate(inner) => match inner.as_ref() {
                Level::Base(NormSpec::Lp(p)) if p > &Rational::one() => {
                    let p = to_f64(p);
                    lp_eval(p / (p - 1.0), lens, vals)
                }
                Level::Base(NormSpec::Lp(_)) => sup(vals),
                Level::Base(NormSpec::LInf) => l1(lens, vals),
                other => solve(lens, vals, other).value,
            },
        }
    }

    fn smooth(&self) -> bool {
        match self {
            Level::Base(NormSpec::Lp(p)) => p > &Rational::one(),
            Level::Base(_) => false,
            Level::Associate(inner) => inner.smooth(),
        }
    }

    /// Exponent `r` for which the level is expected to behave like `L_r`;
    /// used only to seed the search.
    fn seed_exponent(&self) -> Option<f64> {
        match self {
            Level::Base(NormSpec::Lp(p)) if p > &Rational::one() => Some(to_f64(p)),
            Level::Base(_) => None,
            Level::Associate(inner) => inner.seed_exponent().map(|r| r / (r - 1.0)),
        }
    }

    /// `t / φ(t) → ∞`, i.e. a positive constant has infinite associate norm.
    pub(crate) fn indicator_ratio_unbounded(&self) -> bool {
        match self {
            Level::Base(spec) => match spec {
                NormSpec::Lp(p) => p > &Rational::one(),
                NormSpec::LInf | NormSpec::L1PlusLInf | NormSpec::LInfPlusTail => true,
                NormSpec::L1CapLInf => false,
            },
            Level::Associate(inner) => inner.fundamental_unbounded(),
        }
    }

    /// `φ(t) → ∞`.
    fn fundamental_unbounded(&self) -> bool {
        match self {
            Level::Base(spec) => matches!(spec, NormSpec::Lp(_) | NormSpec::L1CapLInf),
            Level::Associate(inner) => inner.indicator_ratio_unbounded(),
        }
    }
}


#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Solution {
    pub value: f64,
    /// Optimal decreasing profile, normalized to unit norm, one value per cell.
    pub witness: Vec<f64>,
}

struct Problem<'a> {
    lens: &'a [f64],
    c: Vec<f64>,
    level: &'a Level,
}

impl Problem<'_> {
    fn profile(&self, b: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; b.len()];
        let mut acc = 0.0;
        for k in (0..b.len()).rev() {
            acc += b[k] / self.c[k];
            v[k] = acc;
        }
        v
    }

    fn objective(&self, b: &[f64]) -> f64 {
        self.level.eval(self.lens, &self.profile(b))
    }

    fn vertex(&self, k: usize) -> Vec<f64> {
        let mut b = vec![0.0; self.c.len()];
        b[k] = 1.0;
        b
    }

    /// Moves mass `t` from coordinate `j` to `i`.
    fn shifted(b: &[f64], i: usize, j: usize, t: f64) -> Vec<f64> {
        let mut out = b.to_vec();
        out[i] += t;
        out[j] = (out[j] - t).max(0.0);
        out
    }

    /// Best mass transfer from `j` to `i`, if it improves on `current`.
    fn line_search(&self, b: &[f64], i: usize, j: usize, current: f64) -> Option<(Vec<f64>, f64)> {
        let (t, val) = golden_min(|t| self.objective(&Self::shifted(b, i, j, t)), 0.0, b[j]);
        (val < current * (1.0 - 1e-15)).then(|| (Self::shifted(b, i, j, t), val))
    }
}

const GOLDEN_ITERS: usize = 90;
const MAX_ASCENT_ITERS: usize = 400;
const FALLBACK_PAIRS: usize = 4;

/// Minimum of a convex function on `[lo, hi]`, endpoints included.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if b - a <= 1e-15 * hi.abs().max(1e-300) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    [(lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((lo, f64::INFINITY), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Decreasing profile proportional to `w^{1/(r-1)}`, as simplex weights.
fn lagrange_seed(p: &Problem, weights: &[f64], r: f64) -> Vec<f64> {
    let v: Vec<f64> = weights.iter().map(|w| w.powf(1.0 / (r - 1.0))).collect();
    let m = v.len();
    let mut b: Vec<f64> = (0..m)
        .map(|k| {
            let next = if k + 1 < m { v[k + 1] } else { 0.0 };
            ((v[k] - next).max(0.0)) * p.c[k]
        })
        .collect();
    let total: f64 = b.iter().sum();
    b.iter_mut().for_each(|x| *x /= total);
    b
}

/// Pairwise-exchange descent on the simplex, steered by one-sided
/// finite-difference slopes.
fn descend(p: &Problem, mut b: Vec<f64>, mut fb: f64) -> (Vec<f64>, f64) {
    let m = b.len();
    let h = 1e-7;
    for _ in 0..MAX_ASCENT_ITERS {
        let up: Vec<f64> = (0..m)
            .map(|i| {
                let mut t = b.clone();
                t[i] += h;
                (p.objective(&t) - fb) / h
            })
            .collect();
        let down: Vec<Option<f64>> = (0..m)
            .map(|j| {
                (b[j] > 0.0).then(|| {
                    let step = h.min(b[j]);
                    let mut t = b.clone();
                    t[j] -= step;
                    (fb - p.objective(&t)) / step
                })
            })
            .collect();
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (j, dj) in down.iter().enumerate() {
            let Some(dj) = dj else { continue };
            for (i, ui) in up.iter().enumerate() {
                if i != j && dj - ui > 1e-12 * fb {
                    pairs.push((dj - ui, i, j));
                }
            }
        }
        if pairs.is_empty() {
            break;
        }
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let step = pairs
            .iter()
            .take(FALLBACK_PAIRS)
            .find_map(|&(_, i, j)| p.line_search(&b, i, j, fb));
        match step {
            Some((nb, nf)) => {
                b = nb;
                fb = nf;
            }
            None => break,
        }
    }
    (b, fb)
}

/// Maximizes `Σ lens_j·weights_j·v_j` over decreasing `v ≥ 0` with
/// `level.eval(lens, v) ≤ 1`. `weights` must be non-increasing and nonnegative.
pub(crate) fn solve(lens: &[f64], weights: &[f64], level: &Level) -> Solution {
    let m = weights.iter().take_while(|w| **w > 0.0).count();
    if m == 0 {
        return Solution {
            value: 0.0,
            witness: vec![0.0; lens.len()],
        };
    }
    let mut c = Vec::with_capacity(m);
    let mut acc = 0.0;
    for k in 0..m {
        acc += lens[k] * weights[k];
        c.push(acc);
    }
    let p = Problem {
        lens: &lens[..m],
        c,
        level,
    };

    let mut best = (0..m)
        .map(|k| {
            let b = p.vertex(k);
            let f = p.objective(&b);
            (b, f)
        })
        .fold((Vec::new(), f64::INFINITY), |acc, cand| if cand.1 < acc.1 { cand } else { acc });
    if let Some(r) = level.seed_exponent() {
        let b = lagrange_seed(&p, &weights[..m], r);
        let f = p.objective(&b);
        if f < best.1 {
            best = (b, f);
        }
    }
    if !level.smooth() {
        for i in 0..m {
            for j in i + 1..m {
                let vi = p.vertex(i);
                if let Some(cand) = p.line_search(&vi, j, i, best.1) {
                    best = cand;
                }
            }
        }
    }
    let (b, fb) = descend(&p, best.0, best.1);
    let mut witness: Vec<f64> = p.profile(&b).into_iter().map(|v| v / fb).collect();
    witness.resize(lens.len(), 0.0);
    Solution {
        value: 1.0 / fb,
        witness,
    }
}

/// `φ(t)` of a level.
pub(crate) fn fundamental(level: &Level, t: f64) -> f64 {
    level.eval(&[t], &[1.0])
}

pub(crate) fn is_quasi(spec: &NormSpec) -> bool {
    matches!(spec, NormSpec::Lp(p) if !p.is_positive() || p < &Rational::one())
}
