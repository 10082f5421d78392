//! Symmetric norms and quasi-norms, fundamental functions, the
//! `L₁∩L_∞ ⊆ E ⊆ L₁+L_∞` embedding and `p`-subadditivity.
//!
//! Irrational values carry their exact `p`-th power (when rational) next to a
//! binary approximation; comparisons use the exact data whenever both sides
//! have it and fall back to a relative tolerance otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ext::{
    exponent_parts, parse_rational, pow_bracket, pow_f64, rational_pow, to_f64, Extended,
    Rational,
};
use crate::measure::{refine, Piece, StepFunction};
use crate::rearrange::{xi_infinity, DecreasingProfile};

/// Default relative tolerance for floating comparisons, `2^-40`.
pub const DEFAULT_TOLERANCE: f64 = 9.094947017729282e-13;

/// The built-in symmetric norm families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormSpec {
    /// `(∫|f|^p)^{1/p}`, a quasi-norm for `0 < p < 1`.
    Lp(Rational),
    LInf,
    /// `max(‖f‖₁, ‖f‖_∞)`
    L1CapLInf,
    /// `inf {‖g‖₁ + ‖h‖_∞ : f = g + h}`
    L1PlusLInf,
    /// `‖f‖_∞ + ξ_f(∞)`
    LInfPlusTail,
}

impl NormSpec {
    pub fn lp(p: Rational) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::InvalidExponent(p.to_string()));
        }
        Ok(NormSpec::Lp(p))
    }

    pub fn is_banach(&self) -> bool {
        match self {
            NormSpec::Lp(p) => p >= &Rational::one(),
            _ => true,
        }
    }

    /// Order semi-continuity (property (C)) of the built-in families.
    pub fn has_property_c(&self) -> bool {
        !matches!(self, NormSpec::LInfPlusTail)
    }

    pub fn label(&self) -> String {
        match self {
            NormSpec::Lp(p) => format!("Lp:{p}"),
            NormSpec::LInf => "LInf".into(),
            NormSpec::L1CapLInf => "L1CapLInf".into(),
            NormSpec::L1PlusLInf => "L1PlusLInf".into(),
            NormSpec::LInfPlusTail => "LInfPlusTail".into(),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// Shorthand: `Lp:3/2`, `L1`, `L2`, `LInf`, `L1CapLInf`, `L1PlusLInf`, `LInfPlusTail`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(p) = s.strip_prefix("Lp:").or_else(|| s.strip_prefix("lp:")) {
            return NormSpec::lp(parse_rational(p)?);
        }
        match s {
            "LInf" | "Linf" | "linf" => Ok(NormSpec::LInf),
            "L1CapLInf" => Ok(NormSpec::L1CapLInf),
            "L1PlusLInf" => Ok(NormSpec::L1PlusLInf),
            "LInfPlusTail" => Ok(NormSpec::LInfPlusTail),
            other => match other.strip_prefix('L').map(parse_rational) {
                Some(Ok(p)) => NormSpec::lp(p),
                _ => Err(Error::InvalidInput(format!("unknown norm spec {other:?}"))),
            },
        }
    }
}

/// Exact `p`-th power of an `L_p` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PthPower {
    pub p: Rational,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormValue {
    pub exact: Option<Rational>,
    pub approx: f64,
    pub is_infinite: bool,
    pub pth_power: Option<PthPower>,
}

impl NormValue {
    pub fn infinite() -> Self {
        Self {
            exact: None,
            approx: f64::INFINITY,
            is_infinite: true,
            pth_power: None,
        }
    }

    pub fn exact(x: Rational) -> Self {
        Self {
            approx: to_f64(&x),
            exact: Some(x),
            is_infinite: false,
            pth_power: None,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x.is_infinite() {
            return Self::infinite();
        }
        Self {
            exact: None,
            approx: x,
            is_infinite: false,
            pth_power: None,
        }
    }

    fn from_extended(x: Extended) -> Self {
        match x {
            Extended::Finite(v) => Self::exact(v),
            Extended::Infinite => Self::infinite(),
        }
    }

    /// Value from an exactly known `p`-th power `∫|f|^p`.
    fn from_power_sum(p: &Rational, sum: PowerSum) -> Self {
        let inv = p.recip();
        match sum.exact {
            Some(s) => match rational_pow(&s, &inv) {
                Some(root) => {
                    let mut v = Self::exact(root);
                    v.pth_power = Some(PthPower {
                        p: p.clone(),
                        value: s,
                    });
                    v
                }
                None => Self {
                    exact: None,
                    approx: to_f64(&s).powf(to_f64(&inv)),
                    is_infinite: false,
                    pth_power: Some(PthPower {
                        p: p.clone(),
                        value: s,
                    }),
                },
            },
            None => Self::from_f64(sum.approx.powf(to_f64(&inv))),
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.is_infinite && self.approx == 0.0
    }

    /// `p`-th power for an integer exponent, when it is exactly known.
    fn integer_power(&self, p: &Rational) -> Option<Rational> {
        if let Some(pp) = &self.pth_power {
            if &pp.p == p {
                return Some(pp.value.clone());
            }
        }
        let n = p.is_integer().then(|| p.to_integer().to_usize()).flatten()?;
        self.exact.as_ref().map(|x| num_traits::pow(x.clone(), n))
    }

    /// Exact comparison where the data allow it, else relative tolerance `tol`.
    pub fn compare(&self, other: &NormValue, tol: f64) -> Ordering {
        match (self.is_infinite, other.is_infinite) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            _ => {}
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a.cmp(b);
        }
        for p in [&self.pth_power, &other.pth_power].into_iter().flatten().map(|pp| &pp.p) {
            if let (Some(a), Some(b)) = (self.integer_power(p), other.integer_power(p)) {
                return a.cmp(&b);
            }
        }
        let (a, b) = (self.approx, other.approx);
        if (a - b).abs() <= tol * a.abs().max(b.abs()) {
            Ordering::Equal
        } else {
            a.partial_cmp(&b).unwrap_or(Ordering::Equal)
        }
    }

    pub fn le(&self, other: &NormValue, tol: f64) -> bool {
        self.compare(other, tol) != Ordering::Greater
    }

    /// Product of two nonnegative values.
    pub fn mul(&self, other: &NormValue) -> NormValue {
        if self.is_zero() || other.is_zero() {
            return NormValue::exact(Rational::zero());
        }
        if self.is_infinite || other.is_infinite {
            return NormValue::infinite();
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return NormValue::exact(a * b);
        }
        let mut out = NormValue::from_f64(self.approx * other.approx);
        let p = [&self.pth_power, &other.pth_power]
            .into_iter()
            .flatten()
            .map(|pp| pp.p.clone())
            .next();
        if let Some(p) = p {
            if let (Some(a), Some(b)) = (self.pth_value(&p), other.pth_value(&p)) {
                out.pth_power = Some(PthPower { p, value: a * b });
            }
        }
        out
    }

    fn pth_value(&self, p: &Rational) -> Option<Rational> {
        match &self.pth_power {
            Some(pp) if &pp.p == p => Some(pp.value.clone()),
            _ => self.exact.as_ref().and_then(|x| rational_pow(x, p)),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite {
            f.write_str("inf")
        } else if let Some(x) = &self.exact {
            write!(f, "{x}")
        } else {
            write!(f, "{}", self.approx)
        }
    }
}

/// `Σ mass · |value|^p`, exact when every term is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSum {
    pub exact: Option<Rational>,
    pub approx: f64,
}

impl PowerSum {
    fn of<'a>(terms: impl IntoIterator<Item = (&'a Rational, &'a Rational)>, p: &Rational) -> Self {
        let pf = to_f64(p);
        let mut exact = Some(Rational::zero());
        let mut approx = 0.0;
        for (mass, v) in terms {
            let a = v.abs();
            approx += to_f64(mass) * pow_f64(&a, pf);
            exact = exact.and_then(|acc| rational_pow(&a, p).map(|t| acc + mass * t));
        }
        if let Some(e) = &exact {
            approx = to_f64(e);
        }
        Self { exact, approx }
    }
}

fn abs_sup(f: &StepFunction) -> Rational {
    let pieces = f
        .pieces()
        .iter()
        .filter(|p| p.mass.is_positive())
        .map(|p| p.value.abs());
    let tail = f.space().is_infinite().then(|| f.tail_value().clone());
    pieces.chain(tail).max().unwrap_or_default()
}

fn has_infinite_tail(f: &StepFunction) -> bool {
    f.space().is_infinite() && f.tail_value().is_positive()
}

fn l1_of(f: &StepFunction) -> Extended {
    if has_infinite_tail(f) {
        return Extended::Infinite;
    }
    Extended::Finite(f.pieces().iter().map(|p| p.value.abs() * &p.mass).sum())
}

/// `‖f‖_spec`; an infinite norm is returned as a value.
pub fn norm(f: &StepFunction, spec: &NormSpec) -> NormValue {
    match spec {
        NormSpec::Lp(p) => {
            if has_infinite_tail(f) {
                return NormValue::infinite();
            }
            let sum = PowerSum::of(f.pieces().iter().map(|pc| (&pc.mass, &pc.value)), p);
            NormValue::from_power_sum(p, sum)
        }
        NormSpec::LInf => NormValue::exact(abs_sup(f)),
        NormSpec::L1CapLInf => {
            NormValue::from_extended(l1_of(f).max(Extended::Finite(abs_sup(f))))
        }
        NormSpec::L1PlusLInf => decompose_l1_linf(f)
            .map(|d| d.value)
            .unwrap_or_else(|_| NormValue::infinite()),
        NormSpec::LInfPlusTail => {
            let tail = if f.space().is_infinite() {
                f.tail_value().clone()
            } else {
                Rational::zero()
            };
            NormValue::exact(abs_sup(f) + tail)
        }
    }
}

/// `∫(ξ − c)₊` over a profile; infinite when an infinite segment exceeds `c`.
fn profile_excess(xi: &DecreasingProfile, c: &Rational) -> Extended {
    xi.segments()
        .iter()
        .filter(|s| &s.value > c)
        .fold(Extended::zero(), |acc, s| {
            &acc + &s.length.mul_nonneg(&(&s.value - c))
        })
}

/// The norm computed on `ξ` as a function on the standard space.
pub fn norm_of_profile(xi: &DecreasingProfile, spec: &NormSpec) -> NormValue {
    let top = xi.sup().clone();
    match spec {
        NormSpec::Lp(p) => {
            if xi
                .segments()
                .iter()
                .any(|s| s.length.is_infinite() && s.value.is_positive())
            {
                return NormValue::infinite();
            }
            let finite: Vec<(&Rational, &Rational)> = xi
                .segments()
                .iter()
                .filter_map(|s| s.length.finite().map(|l| (l, &s.value)))
                .collect();
            NormValue::from_power_sum(p, PowerSum::of(finite, p))
        }
        NormSpec::LInf => NormValue::exact(top),
        NormSpec::L1CapLInf => {
            let l1 = profile_excess(xi, &Rational::zero());
            NormValue::from_extended(l1.max(Extended::Finite(top)))
        }
        NormSpec::L1PlusLInf => {
            let best = std::iter::once(Rational::zero())
                .chain(xi.segments().iter().map(|s| s.value.clone()))
                .filter_map(|c| match profile_excess(xi, &c) {
                    Extended::Finite(e) => Some(e + c),
                    Extended::Infinite => None,
                })
                .min();
            best.map(NormValue::exact).unwrap_or_else(NormValue::infinite)
        }
        NormSpec::LInfPlusTail => NormValue::exact(top + xi_infinity(xi)),
    }
}

/// `f = g + h` minimizing `‖g‖₁ + ‖h‖_∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub g: StepFunction,
    pub h: StepFunction,
    /// Clamp level: `h = sign(f)·min(|f|, cut)`.
    pub cut: Rational,
    pub value: NormValue,
}

fn clamp_split(f: &StepFunction, c: &Rational) -> (StepFunction, StepFunction) {
    let mut gs = Vec::with_capacity(f.pieces().len());
    let mut hs = Vec::with_capacity(f.pieces().len());
    for p in f.pieces() {
        let a = p.value.abs();
        let sign = if p.value.is_negative() {
            -Rational::one()
        } else {
            Rational::one()
        };
        let excess = if &a > c { &a - c } else { Rational::zero() };
        hs.push(Piece::new(&sign * a.min(c.clone()), p.mass.clone()));
        gs.push(Piece::new(sign * excess, p.mass.clone()));
    }
    let t = f.tail_value();
    let gt = if t > c { t - c } else { Rational::zero() };
    let ht = t.min(c).clone();
    (
        f.with_pieces(gs, gt).expect("same layout"),
        f.with_pieces(hs, ht).expect("same layout"),
    )
}

/// Scans every breakpoint cut level of `|f|` for the optimal clamp.
pub fn decompose_l1_linf(f: &StepFunction) -> Result<Decomposition> {
    let tail = if f.space().is_infinite() {
        f.tail_value().clone()
    } else {
        Rational::zero()
    };
    let mut levels: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(
            f.pieces()
                .iter()
                .filter(|p| p.mass.is_positive())
                .map(|p| p.value.abs()),
        )
        .chain(std::iter::once(tail.clone()))
        .collect();
    levels.sort();
    levels.dedup();
    let sup = abs_sup(f);
    let mut best: Option<(Rational, Rational)> = None;
    for c in levels.into_iter().filter(|c| c >= &tail) {
        let excess: Rational = f
            .pieces()
            .iter()
            .filter(|p| p.value.abs() > c)
            .map(|p| (p.value.abs() - &c) * &p.mass)
            .sum();
        let value = excess + c.clone().min(sup.clone());
        if best.as_ref().is_none_or(|(_, v)| &value < v) {
            best = Some((c, value));
        }
    }
    let (cut, value) = best.ok_or(Error::NormInfinite)?;
    let (g, h) = clamp_split(f, &cut);
    Ok(Decomposition {
        g,
        h,
        cut,
        value: NormValue::exact(value),
    })
}

/// `φ_E(t) = ‖1_{[0,t)}‖_E`.
pub fn fundamental_function(spec: &NormSpec, t: &Rational) -> Result<NormValue> {
    if !t.is_positive() {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    let profile = DecreasingProfile::indicator(t.clone(), Rational::one(), &Extended::Finite(t.clone()))?;
    Ok(norm_of_profile(&profile, spec))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCheck {
    /// `φ_E(1)‖f‖_{L₁∩L_∞}`
    pub lhs: NormValue,
    /// `‖f‖_E`
    pub mid: NormValue,
    /// `φ_E(1)‖f‖_{L₁+L_∞}`
    pub rhs: NormValue,
    pub holds: bool,
}

/// `φ_E(1)‖f‖_{L₁∩L_∞} ≥ ‖f‖_E ≥ φ_E(1)‖f‖_{L₁+L_∞}`.
pub fn embedding_check(f: &StepFunction, spec: &NormSpec) -> Result<EmbeddingCheck> {
    if !spec.is_banach() {
        return Err(Error::QuasiNormSpec(spec.label()));
    }
    let phi1 = fundamental_function(spec, &Rational::one())?;
    let lhs = phi1.mul(&norm(f, &NormSpec::L1CapLInf));
    let mid = norm(f, spec);
    let rhs = phi1.mul(&norm(f, &NormSpec::L1PlusLInf));
    let holds = mid.le(&lhs, DEFAULT_TOLERANCE) && rhs.le(&mid, DEFAULT_TOLERANCE);
    Ok(EmbeddingCheck {
        lhs,
        mid,
        rhs,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AokiRolewicz {
    pub approx: f64,
    /// Present when `C` is an integer power of two.
    pub exact: Option<Rational>,
}

/// `p = ln 2 / (ln 2 + ln C)`.
pub fn aoki_rolewicz_exponent(c: &Rational) -> Result<AokiRolewicz> {
    if c < &Rational::one() {
        return Err(Error::InvalidConstant(c.to_string()));
    }
    let exact = c
        .is_integer()
        .then(|| c.to_integer())
        .filter(|n| (n & (n - 1u32)) == 0u32.into())
        .map(|n| {
            let k = n.bits() - 1;
            Rational::new(1.into(), (k + 1).into())
        });
    let approx = match &exact {
        Some(e) => to_f64(e),
        None => {
            let ln2 = std::f64::consts::LN_2;
            ln2 / (ln2 + to_f64(c).ln())
        }
    };
    Ok(AokiRolewicz { approx, exact })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubadditivityCheck {
    /// `‖f+g‖_p^p`
    pub lhs: PowerSum,
    /// `‖f‖_p^p + ‖g‖_p^p`
    pub rhs: PowerSum,
    /// Certified exactly, cell by cell or on rational brackets of the sums.
    pub holds: bool,
}

const BRACKET_BITS: [u32; 7] = [32, 64, 128, 256, 512, 1024, 2048];

/// `s^p <= a^p + b^p` for nonnegative rationals, decided exactly.
fn term_le(s: &Rational, a: &Rational, b: &Rational, p: &Rational) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Ok(s <= &(a + b));
    }
    if let (Some(x), Some(y), Some(z)) = (rational_pow(s, p), rational_pow(a, p), rational_pow(b, p)) {
        return Ok(x <= y + z);
    }
    let (r, k) = exponent_parts(p).ok_or_else(|| Error::InvalidExponent(p.to_string()))?;
    for bits in BRACKET_BITS {
        let (sl, sh) = pow_bracket(s, r, k, bits);
        let (al, ah) = pow_bracket(a, r, k, bits);
        let (bl, bh) = pow_bracket(b, r, k, bits);
        if sh <= &al + &bl {
            return Ok(true);
        }
        if sl > ah + bh {
            return Ok(false);
        }
    }
    Err(Error::Undecided)
}

/// Certified comparison of two weighted power sums by rational brackets.
fn sums_le(
    lhs: &[(Rational, Rational)],
    rhs: &[(Rational, Rational)],
    p: &Rational,
) -> Result<bool> {
    let (r, k) = exponent_parts(p).ok_or_else(|| Error::InvalidExponent(p.to_string()))?;
    let bracket = |terms: &[(Rational, Rational)], bits| {
        terms.iter().fold((Rational::zero(), Rational::zero()), |(lo, hi), (m, v)| {
            let (l, h) = pow_bracket(v, r, k, bits);
            (lo + m * l, hi + m * h)
        })
    };
    for bits in BRACKET_BITS {
        let (ll, lh) = bracket(lhs, bits);
        let (rl, rh) = bracket(rhs, bits);
        if lh <= rl {
            return Ok(true);
        }
        if ll > rh {
            return Ok(false);
        }
    }
    Err(Error::Undecided)
}

/// `‖f+g‖_p^p <= ‖f‖_p^p + ‖g‖_p^p` for `0 < p <= 1`.
pub fn p_subadditivity_check(
    f: &StepFunction,
    g: &StepFunction,
    p: &Rational,
) -> Result<SubadditivityCheck> {
    if !p.is_positive() || p > &Rational::one() || exponent_parts(p).is_none() {
        return Err(Error::InvalidExponent(p.to_string()));
    }
    let r = refine(&[f, g])?;
    if r.tails.as_ref().is_some_and(|t| t.iter().any(|v| v.is_positive())) {
        return Err(Error::NormInfinite);
    }
    let sums: Vec<(Rational, Rational)> = r
        .cells
        .iter()
        .map(|c| (c.len.clone(), (&c.values[0] + &c.values[1]).abs()))
        .collect();
    let parts: Vec<(Rational, Rational)> = r
        .cells
        .iter()
        .flat_map(|c| {
            [
                (c.len.clone(), c.values[0].abs()),
                (c.len.clone(), c.values[1].abs()),
            ]
        })
        .collect();
    let lhs = PowerSum::of(sums.iter().map(|(m, v)| (m, v)), p);
    let rhs = PowerSum::of(parts.iter().map(|(m, v)| (m, v)), p);

    let holds = match (&lhs.exact, &rhs.exact) {
        (Some(a), Some(b)) => a <= b,
        _ => {
            let mut cellwise = true;
            for c in &r.cells {
                let s = (&c.values[0] + &c.values[1]).abs();
                if !term_le(&s, &c.values[0].abs(), &c.values[1].abs(), p)? {
                    cellwise = false;
                    break;
                }
            }
            cellwise || sums_le(&sums, &parts, p)?
        }
    };
    Ok(SubadditivityCheck { lhs, rhs, holds })
}
