//! Distribution functions, decreasing rearrangements and transport maps.
//!
//! `ξ_f` is built two ways: directly by sorting the pieces of `|f|`
//! ([`rearrangement`]) and as the right-continuous generalized inverse of the
//! distribution function ([`rearrangement_from_distribution`]).

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ext::{Extended, Rational};
use crate::measure::{MeasureSpace, Piece, StepFunction};
use crate::norms::{norm, norm_of_profile, NormSpec, NormValue};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub length: Extended,
    pub value: Rational,
}

/// Decreasing right-continuous step function on `[0, a)` or `[0, ∞)`.
///
/// Canonical form: positive lengths, strictly decreasing nonnegative values,
/// only the last segment may be infinite (its value is `ξ(∞)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecreasingProfile {
    segments: Vec<Segment>,
}

impl DecreasingProfile {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput("segments: profile is empty".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            match &s.length {
                Extended::Infinite if i + 1 != segments.len() => {
                    return Err(Error::InvalidInput(
                        "segments: only the last segment may be infinite".into(),
                    ))
                }
                Extended::Finite(l) if !l.is_positive() => {
                    return Err(Error::InvalidInput(format!(
                        "segments: non-positive length {l}"
                    )))
                }
                _ => {}
            }
            if s.value.is_negative() {
                return Err(Error::InvalidInput(format!(
                    "segments: negative value {}",
                    s.value
                )));
            }
        }
        if segments.windows(2).any(|w| w[0].value <= w[1].value) {
            return Err(Error::InvalidInput(
                "segments: values must be strictly decreasing".into(),
            ));
        }
        Ok(Self { segments })
    }

    /// Builds a canonical profile from non-increasing segments, merging equal
    /// values and dropping empty ones.
    pub fn from_nonincreasing(raw: impl IntoIterator<Item = (Extended, Rational)>) -> Result<Self> {
        let mut segments: Vec<Segment> = Vec::new();
        for (length, value) in raw {
            if length == Extended::zero() {
                continue;
            }
            match segments.last_mut() {
                Some(last) if last.value == value => last.length = &last.length + &length,
                Some(last) if last.value < value => {
                    return Err(Error::InvalidInput(
                        "segments: values must be non-increasing".into(),
                    ))
                }
                _ => segments.push(Segment { length, value }),
            }
        }
        Self::new(segments)
    }

    /// `c · 1_{[0,t)}` followed by zeros up to `domain`.
    pub fn indicator(t: Rational, c: Rational, domain: &Extended) -> Result<Self> {
        let rest = domain.sub_finite(&t);
        Self::from_nonincreasing([
            (Extended::Finite(t), c),
            (rest, Rational::zero()),
        ])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_length(&self) -> Extended {
        self.segments
            .iter()
            .fold(Extended::zero(), |acc, s| &acc + &s.length)
    }

    pub fn is_infinite_domain(&self) -> bool {
        self.total_length().is_infinite()
    }

    /// `ξ(0) = sup ξ`.
    pub fn sup(&self) -> &Rational {
        &self.segments[0].value
    }

    pub fn value_at(&self, x: &Rational) -> Rational {
        let mut end = Extended::zero();
        for s in &self.segments {
            end = &end + &s.length;
            if Extended::Finite(x.clone()) < end {
                return s.value.clone();
            }
        }
        Rational::zero()
    }

    /// The profile as a function on the standard space `[0, a)` or `[0, ∞)`.
    pub fn to_step_function(&self) -> StepFunction {
        let (finite, tail): (Vec<&Segment>, Vec<&Segment>) =
            self.segments.iter().partition(|s| s.length.is_finite());
        let pieces: Vec<Piece> = finite
            .iter()
            .map(|s| Piece::new(s.value.clone(), s.length.finite().unwrap().clone()))
            .collect();
        let space = match self.total_length() {
            Extended::Finite(a) => MeasureSpace::finite(a),
            Extended::Infinite => Ok(MeasureSpace::infinite()),
        }
        .expect("canonical profiles have positive length");
        let tail_value = tail.first().map(|s| s.value.clone()).unwrap_or_default();
        StepFunction::new(space, pieces, tail_value).expect("profile pieces tile the domain")
    }

    /// `(ξ - min(ξ, n))`, itself decreasing.
    pub fn top_residual(&self, n: &Rational) -> DecreasingProfile {
        Self::from_nonincreasing(self.segments.iter().map(|s| {
            let v = if &s.value > n {
                &s.value - n
            } else {
                Rational::zero()
            };
            (s.length.clone(), v)
        }))
        .expect("residual of a canonical profile is non-increasing")
    }

    /// Rearrangement of `ξ · 1_{[n, ∞)}`: the profile with its first `n` units
    /// removed and the freed length appended as zeros.
    pub fn support_residual(&self, n: &Rational) -> DecreasingProfile {
        let mut skip = n.clone();
        let mut raw: Vec<(Extended, Rational)> = Vec::new();
        for s in &self.segments {
            match &s.length {
                Extended::Infinite => raw.push((Extended::Infinite, s.value.clone())),
                Extended::Finite(l) => {
                    if &skip >= l {
                        skip -= l;
                    } else {
                        raw.push((Extended::Finite(l - &skip), s.value.clone()));
                        skip = Rational::zero();
                    }
                }
            }
        }
        if let Extended::Finite(a) = self.total_length() {
            raw.push((Extended::Finite(n.min(&a).clone()), Rational::zero()));
        }
        Self::from_nonincreasing(raw).expect("residual is non-increasing")
    }
}

/// Right-continuous decreasing step function given by breakpoints: value
/// `values[k]` on `[thresholds[k], thresholds[k+1])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdProfile {
    breakpoints: Vec<(Rational, Extended)>,
    total_mass: Extended,
}

impl ThresholdProfile {
    pub fn new(breakpoints: Vec<(Rational, Extended)>, total_mass: Extended) -> Result<Self> {
        let Some(first) = breakpoints.first() else {
            return Err(Error::InvalidInput("breakpoints: empty".into()));
        };
        if !first.0.is_zero() {
            return Err(Error::InvalidInput(
                "breakpoints: first threshold must be 0".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidInput(
                "breakpoints: thresholds must be strictly increasing".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0].1 <= w[1].1) {
            return Err(Error::InvalidInput(
                "breakpoints: values must be strictly decreasing".into(),
            ));
        }
        if breakpoints.last().unwrap().1 != Extended::zero() {
            return Err(Error::InvalidInput(
                "breakpoints: final value must be 0".into(),
            ));
        }
        if first.1 > total_mass || first.1 < Extended::zero() {
            return Err(Error::InvalidInput(
                "breakpoints: values must lie in [0, total_mass]".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            total_mass,
        })
    }

    fn from_levels(mut raw: Vec<(Rational, Extended)>, total_mass: Extended) -> Self {
        raw.dedup_by(|next, prev| next.1 == prev.1);
        Self::new(raw, total_mass).expect("levels built in canonical order")
    }

    pub fn breakpoints(&self) -> &[(Rational, Extended)] {
        &self.breakpoints
    }

    pub fn total_mass(&self) -> &Extended {
        &self.total_mass
    }

    pub fn value_at(&self, y: &Rational) -> Extended {
        self.breakpoints
            .iter()
            .rev()
            .find(|(t, _)| t <= y)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| self.breakpoints[0].1.clone())
    }
}

fn positive_levels(f: &StepFunction) -> BTreeMap<Rational, Rational> {
    let mut levels: BTreeMap<Rational, Rational> = BTreeMap::new();
    for p in f.pieces() {
        if p.mass.is_positive() {
            *levels.entry(p.value.abs()).or_default() += &p.mass;
        }
    }
    levels
}

/// `η_f(y) = μ{|f| > y}`.
pub fn distribution(f: &StepFunction) -> ThresholdProfile {
    let levels = positive_levels(f);
    let tail = f
        .space()
        .is_infinite()
        .then(|| f.tail_value().clone())
        .filter(|t| t.is_positive());
    let mut thresholds: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(levels.keys().filter(|l| l.is_positive()).cloned())
        .chain(tail.clone())
        .collect();
    thresholds.sort();
    thresholds.dedup();
    let raw = thresholds
        .into_iter()
        .map(|y| {
            let finite: Rational = levels
                .iter()
                .filter(|(l, _)| *l > &y)
                .map(|(_, m)| m)
                .sum();
            let v = if tail.as_ref().is_some_and(|t| t > &y) {
                Extended::Infinite
            } else {
                Extended::Finite(finite)
            };
            (y, v)
        })
        .collect();
    ThresholdProfile::from_levels(raw, f.space().total_mass().clone())
}

/// `ξ_f` by sorting the pieces of `|f|` by value.
pub fn rearrangement(f: &StepFunction) -> DecreasingProfile {
    let levels = positive_levels(f);
    let mut raw: Vec<(Extended, Rational)> = Vec::new();
    match f.space().total_mass() {
        Extended::Finite(a) => {
            let mut used = Rational::zero();
            for (l, m) in levels.iter().rev().filter(|(l, _)| l.is_positive()) {
                used += m;
                raw.push((Extended::Finite(m.clone()), l.clone()));
            }
            raw.push((Extended::Finite(a - used), Rational::zero()));
        }
        Extended::Infinite => {
            let tail = f.tail_value();
            for (l, m) in levels.iter().rev().filter(|(l, _)| *l > tail) {
                raw.push((Extended::Finite(m.clone()), l.clone()));
            }
            raw.push((Extended::Infinite, tail.clone()));
        }
    }
    DecreasingProfile::from_nonincreasing(raw).expect("sorted levels are non-increasing")
}

/// `ξ(x) = inf{y >= 0 : η(y) <= x}`.
pub fn rearrangement_from_distribution(eta: &ThresholdProfile) -> DecreasingProfile {
    let bp = eta.breakpoints();
    let mut raw: Vec<(Extended, Rational)> = Vec::new();
    // on [η(t_k), η(t_{k-1})) the infimum is attained at t_k
    for k in (1..bp.len()).rev() {
        let len = match (&bp[k - 1].1, &bp[k].1) {
            (Extended::Infinite, _) => Extended::Infinite,
            (Extended::Finite(hi), Extended::Finite(lo)) => Extended::Finite(hi - lo),
            (Extended::Finite(_), Extended::Infinite) => unreachable!("η is decreasing"),
        };
        raw.push((len, bp[k].0.clone()));
    }
    if let Extended::Finite(top) = &bp[0].1 {
        let rest = eta.total_mass().sub_finite(top);
        raw.push((rest, Rational::zero()));
    }
    DecreasingProfile::from_nonincreasing(raw).expect("generalized inverse is non-increasing")
}

/// `η` of a profile viewed as a function on the standard space.
pub fn distribution_of_profile(xi: &DecreasingProfile) -> ThresholdProfile {
    let mut thresholds: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(xi.segments().iter().map(|s| s.value.clone()))
        .filter(|v| !v.is_negative())
        .collect();
    thresholds.sort();
    thresholds.dedup();
    let raw = thresholds
        .into_iter()
        .map(|y| {
            let v = xi
                .segments()
                .iter()
                .filter(|s| s.value > y)
                .fold(Extended::zero(), |acc, s| &acc + &s.length);
            (y, v)
        })
        .collect();
    ThresholdProfile::from_levels(raw, xi.total_length())
}

/// Same decreasing rearrangement (hence the same distribution on equal-mass spaces).
pub fn equimeasurable(f: &StepFunction, g: &StepFunction) -> bool {
    rearrangement(f) == rearrangement(g)
}

/// `ξ(∞)`: value of the infinite final segment, 0 on finite domains.
pub fn xi_infinity(xi: &DecreasingProfile) -> Rational {
    match xi.segments().last() {
        Some(s) if s.length.is_infinite() => s.value.clone(),
        _ => Rational::zero(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    pub source_start: Rational,
    pub length: Rational,
    pub destination_start: Rational,
}

/// Piecewise translation of intervals with `f = ξ_f ∘ φ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransportMap {
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransportDefect {
    SourcesDoNotTile { at: Rational },
    DestinationsOverlap { at: Rational },
    MassMismatch { source: Rational, destination: Rational },
    Composition { at: Rational, f: Rational, xi: Rational },
}

impl TransportMap {
    pub fn apply(&self, x: &Rational) -> Option<Rational> {
        self.moves
            .iter()
            .find(|m| x >= &m.source_start && x < &(&m.source_start + &m.length))
            .map(|m| &m.destination_start + (x - &m.source_start))
    }

    /// Checks mass preservation and `f = ξ_f ∘ φ` on every refined sub-interval.
    pub fn verify(&self, f: &StepFunction) -> std::result::Result<(), TransportDefect> {
        let extent = f.extent();

        let mut by_source: Vec<&Move> = self.moves.iter().collect();
        by_source.sort_by(|a, b| a.source_start.cmp(&b.source_start));
        let mut cursor = Rational::zero();
        for m in &by_source {
            if m.source_start != cursor {
                return Err(TransportDefect::SourcesDoNotTile { at: cursor });
            }
            cursor += &m.length;
        }
        if cursor != extent {
            return Err(TransportDefect::SourcesDoNotTile { at: cursor });
        }

        let mut by_dest: Vec<&Move> = self.moves.iter().collect();
        by_dest.sort_by(|a, b| a.destination_start.cmp(&b.destination_start));
        let mut covered = Rational::zero();
        let mut last_end: Option<Rational> = None;
        for m in &by_dest {
            if let Some(e) = &last_end {
                if &m.destination_start < e {
                    return Err(TransportDefect::DestinationsOverlap {
                        at: m.destination_start.clone(),
                    });
                }
            }
            covered += &m.length;
            last_end = Some(&m.destination_start + &m.length);
        }
        if covered != extent {
            return Err(TransportDefect::MassMismatch {
                source: extent,
                destination: covered,
            });
        }

        let xi = rearrangement(f);
        let mut xi_cuts = Vec::new();
        let mut end = Rational::zero();
        for s in xi.segments() {
            if let Extended::Finite(l) = &s.length {
                end += l;
                xi_cuts.push(end.clone());
            }
        }
        let f_cuts: Vec<Rational> = f.intervals().into_iter().map(|(_, e, _)| e).collect();
        for m in &self.moves {
            let src_end = &m.source_start + &m.length;
            let shift = &m.destination_start - &m.source_start;
            let mut cuts: Vec<Rational> = vec![m.source_start.clone()];
            cuts.extend(
                f_cuts
                    .iter()
                    .filter(|c| *c > &m.source_start && *c < &src_end)
                    .cloned(),
            );
            cuts.extend(
                xi_cuts
                    .iter()
                    .map(|c| c - &shift)
                    .filter(|c| c > &m.source_start && c < &src_end),
            );
            cuts.sort();
            cuts.dedup();
            for x in cuts {
                let fv = f.value_at(&x);
                let xv = xi.value_at(&(&x + &shift));
                if fv != xv {
                    return Err(TransportDefect::Composition { at: x, f: fv, xi: xv });
                }
            }
        }
        Ok(())
    }
}

/// Measure-preserving interval map `φ` with `f = ξ_f ∘ φ`, for `f >= 0` without tail.
pub fn transport_map(f: &StepFunction) -> Result<TransportMap> {
    if !f.is_nonnegative() {
        return Err(Error::NegativeValues);
    }
    if f.space().is_infinite() && f.tail_value().is_positive() {
        return Err(Error::TailPresent);
    }
    let mut intervals = f.intervals();
    // stable: original order breaks ties
    intervals.sort_by(|a, b| b.2.cmp(&a.2));
    let mut dest = Rational::zero();
    let mut moves: Vec<Move> = intervals
        .into_iter()
        .map(|(s, e, _)| {
            let length = &e - &s;
            let m = Move {
                source_start: s,
                length: length.clone(),
                destination_start: dest.clone(),
            };
            dest += length;
            m
        })
        .collect();
    moves.sort_by(|a, b| a.source_start.cmp(&b.source_start));
    Ok(TransportMap { moves })
}

/// One row of [`cutoff_sequences`].
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffRow {
    pub n: u64,
    /// `‖ξ − min(ξ, n)‖`
    pub top_residual: NormValue,
    /// `‖ξ − ξ·1_{[0,n]}‖`
    pub support_residual: NormValue,
}

/// Upper and right `n`-cutoff residual norms for `n = 1..=n_max`.
pub fn cutoff_sequences(f: &StepFunction, spec: &NormSpec, n_max: u64) -> Result<Vec<CutoffRow>> {
    if norm(f, spec).is_infinite {
        return Err(Error::NormInfinite);
    }
    let xi = rearrangement(f);
    Ok((1..=n_max)
        .map(|n| {
            let nq = Rational::from_integer(n.into());
            CutoffRow {
                n,
                top_residual: norm_of_profile(&xi.top_residual(&nq), spec),
                support_residual: norm_of_profile(&xi.support_residual(&nq), spec),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{int, q};

    fn fin(p: &[(i64, i64)]) -> StepFunction {
        StepFunction::on_finite(p.iter().map(|&(v, m)| (int(v), int(m)))).unwrap()
    }

    fn f0() -> StepFunction {
        StepFunction::on_finite([(int(3), int(1)), (int(1), int(2)), (int(2), q(1, 2))]).unwrap()
    }

    fn tailed() -> StepFunction {
        StepFunction::with_tail([(int(3), int(2))], int(1)).unwrap()
    }

    fn segs(p: &DecreasingProfile) -> Vec<(Extended, Rational)> {
        p.segments()
            .iter()
            .map(|s| (s.length.clone(), s.value.clone()))
            .collect()
    }

    fn fe(x: Rational) -> Extended {
        Extended::Finite(x)
    }

    /// `inf{y : η(y) <= x}` evaluated on breakpoints and midpoints.
    fn inverse_oracle(eta: &ThresholdProfile, x: &Rational) -> Rational {
        let bp = eta.breakpoints();
        let mut candidates: Vec<Rational> = bp.iter().map(|(t, _)| t.clone()).collect();
        for w in bp.windows(2) {
            candidates.push((&w[0].0 + &w[1].0) / int(2));
        }
        candidates.sort();
        candidates
            .into_iter()
            .find(|y| eta.value_at(y) <= fe(x.clone()))
            .unwrap()
    }

    #[test]
    fn distribution_examples() {
        let eta = distribution(&f0());
        assert_eq!(
            eta.breakpoints(),
            &[
                (int(0), fe(q(7, 2))),
                (int(1), fe(q(3, 2))),
                (int(2), fe(int(1))),
                (int(3), fe(int(0)))
            ]
        );
        let z = StepFunction::zero(&MeasureSpace::finite(int(2)).unwrap());
        assert_eq!(distribution(&z).breakpoints(), &[(int(0), fe(int(0)))]);
        let eta = distribution(&tailed());
        assert_eq!(
            eta.breakpoints(),
            &[
                (int(0), Extended::Infinite),
                (int(1), fe(int(2))),
                (int(3), fe(int(0)))
            ]
        );
    }

    #[test]
    fn distribution_is_right_continuous_at_breakpoints() {
        let eta = distribution(&f0());
        // strict inequality: at y = 1 the level {|f| = 1} is excluded
        assert_eq!(eta.value_at(&int(1)), fe(q(3, 2)));
        assert_eq!(eta.value_at(&q(999, 1000)), fe(q(7, 2)));
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(
            segs(&rearrangement(&f0())),
            vec![(fe(int(1)), int(3)), (fe(q(1, 2)), int(2)), (fe(int(2)), int(1))]
        );
        assert_eq!(
            segs(&rearrangement(&fin(&[(-2, 1), (1, 1)]))),
            vec![(fe(int(1)), int(2)), (fe(int(1)), int(1))]
        );
        let xi = rearrangement(&tailed());
        assert_eq!(
            segs(&xi),
            vec![(fe(int(2)), int(3)), (Extended::Infinite, int(1))]
        );
        assert_eq!(xi_infinity(&xi), int(1));
    }

    #[test]
    fn rearrangement_tail_absorbs_smaller_pieces() {
        let f = StepFunction::with_tail([(int(1), int(5)), (int(4), int(1))], int(2)).unwrap();
        assert_eq!(
            segs(&rearrangement(&f)),
            vec![(fe(int(1)), int(4)), (Extended::Infinite, int(2))]
        );
    }

    #[test]
    fn inverse_matches_generalized_inverse_oracle() {
        for f in [f0(), tailed(), fin(&[(0, 3), (5, 1), (5, 2), (-1, 1)])] {
            let eta = distribution(&f);
            let xi = rearrangement_from_distribution(&eta);
            assert_eq!(xi, rearrangement(&f));
            // pointwise: ξ(x) equals the inf-formula on a grid
            let mut x = Rational::zero();
            while x < int(8) {
                if fe(x.clone()) < xi.total_length() {
                    assert_eq!(xi.value_at(&x), inverse_oracle(&eta, &x), "x = {x}");
                }
                x += q(1, 4);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let z = ThresholdProfile::new(vec![(int(0), fe(int(0)))], fe(int(3))).unwrap();
        assert_eq!(segs(&rearrangement_from_distribution(&z)), vec![(fe(int(3)), int(0))]);
        // indicator round trip: height 5, length 2
        let eta = ThresholdProfile::new(
            vec![(int(0), fe(int(2))), (int(5), fe(int(0)))],
            Extended::Infinite,
        )
        .unwrap();
        assert_eq!(
            segs(&rearrangement_from_distribution(&eta)),
            vec![(fe(int(2)), int(5)), (Extended::Infinite, int(0))]
        );
    }

    #[test]
    fn distribution_of_profile_examples() {
        let xi = DecreasingProfile::new(vec![
            Segment { length: fe(int(1)), value: int(3) },
            Segment { length: fe(int(1)), value: int(1) },
        ])
        .unwrap();
        assert_eq!(
            distribution_of_profile(&xi).breakpoints(),
            &[(int(0), fe(int(2))), (int(1), fe(int(1))), (int(3), fe(int(0)))]
        );
        let z = DecreasingProfile::new(vec![Segment { length: Extended::Infinite, value: int(0) }])
            .unwrap();
        assert_eq!(distribution_of_profile(&z).breakpoints(), &[(int(0), fe(int(0)))]);
        assert_eq!(distribution_of_profile(&rearrangement(&f0())), distribution(&f0()));
    }

    #[test]
    fn equimeasurable_examples() {
        assert!(equimeasurable(&fin(&[(1, 1), (2, 1)]), &fin(&[(2, 1), (1, 1)])));
        assert!(!equimeasurable(&fin(&[(1, 2)]), &fin(&[(1, 1)])));
        assert!(equimeasurable(&f0(), &f0().split_uniform(3).canonicalize()));
        assert!(equimeasurable(&f0(), &f0().split_uniform(4)));
    }

    #[test]
    fn xi_infinity_finite_is_zero() {
        assert_eq!(xi_infinity(&rearrangement(&f0())), int(0));
        let z = StepFunction::zero(&MeasureSpace::infinite());
        assert_eq!(xi_infinity(&rearrangement(&z)), int(0));
    }

    #[test]
    fn profile_validation() {
        assert!(DecreasingProfile::new(vec![]).is_err());
        assert!(DecreasingProfile::new(vec![
            Segment { length: fe(int(1)), value: int(1) },
            Segment { length: fe(int(1)), value: int(2) },
        ])
        .is_err());
        assert!(DecreasingProfile::new(vec![
            Segment { length: Extended::Infinite, value: int(2) },
            Segment { length: fe(int(1)), value: int(1) },
        ])
        .is_err());
        assert!(ThresholdProfile::new(vec![(int(1), fe(int(0)))], fe(int(1))).is_err());
        assert!(ThresholdProfile::new(vec![(int(0), fe(int(2)))], fe(int(3))).is_err());
    }

    #[test]
    fn transport_examples() {
        let f = fin(&[(2, 1), (5, 1)]);
        let t = transport_map(&f).unwrap();
        assert_eq!(t.apply(&int(0)), Some(int(1)));
        assert_eq!(t.apply(&int(1)), Some(int(0)));
        t.verify(&f).unwrap();

        let f = fin(&[(5, 1), (3, 2), (1, 1)]);
        let t = transport_map(&f).unwrap();
        assert!(t.moves.iter().all(|m| m.source_start == m.destination_start));

        let f = fin(&[(1, 1), (3, 1), (2, 1)]);
        let t = transport_map(&f).unwrap();
        assert_eq!(t.apply(&int(1)), Some(int(0)));
        assert_eq!(t.apply(&int(2)), Some(int(1)));
        assert_eq!(t.apply(&int(0)), Some(int(2)));
        t.verify(&f).unwrap();
    }

    #[test]
    fn transport_ties_keep_original_order() {
        let f = fin(&[(1, 1), (2, 1), (2, 1)]);
        let t = transport_map(&f).unwrap();
        assert_eq!(t.apply(&int(1)), Some(int(0)));
        assert_eq!(t.apply(&int(2)), Some(int(1)));
    }

    #[test]
    fn transport_errors_and_defects() {
        assert_eq!(transport_map(&fin(&[(-1, 1)])), Err(Error::NegativeValues));
        assert_eq!(transport_map(&tailed()), Err(Error::TailPresent));

        let f = fin(&[(1, 1), (3, 1)]);
        let identity = TransportMap {
            moves: vec![
                Move { source_start: int(0), length: int(1), destination_start: int(0) },
                Move { source_start: int(1), length: int(1), destination_start: int(1) },
            ],
        };
        assert!(matches!(identity.verify(&f), Err(TransportDefect::Composition { .. })));
        let overlap = TransportMap {
            moves: vec![
                Move { source_start: int(0), length: int(1), destination_start: int(0) },
                Move { source_start: int(1), length: int(1), destination_start: q(1, 2) },
            ],
        };
        assert!(matches!(overlap.verify(&f), Err(TransportDefect::DestinationsOverlap { .. })));
    }

    #[test]
    fn cutoff_examples() {
        let rows = cutoff_sequences(&f0(), &NormSpec::lp(int(1)).unwrap(), 3).unwrap();
        assert_eq!(rows[1].top_residual.exact, Some(int(1)));
        assert_eq!(rows[2].top_residual.exact, Some(int(0)));

        let f = StepFunction::with_tail([(int(3), int(2))], int(1)).unwrap();
        let rows = cutoff_sequences(&f, &NormSpec::LInf, 5).unwrap();
        assert_eq!(rows[0].support_residual.exact, Some(int(3)));
        assert!(rows[1..].iter().all(|r| r.support_residual.exact == Some(int(1))));

        let rows = cutoff_sequences(&f0(), &NormSpec::LInf, 4).unwrap();
        assert_eq!(rows[3].top_residual.exact, Some(int(0)));
        assert_eq!(rows[3].support_residual.exact, Some(int(0)));
    }

    #[test]
    fn cutoff_rejects_infinite_norm() {
        let f = StepFunction::with_tail([], int(1)).unwrap();
        assert_eq!(
            cutoff_sequences(&f, &NormSpec::lp(int(1)).unwrap(), 2),
            Err(Error::NormInfinite)
        );
    }
}
