//! JSON wire format. Rationals travel as `"p/q"` strings and infinity as
//! `"inf"`; floating approximations are plain JSON numbers.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::duality::{DualNormResult, FatouOutcome, PropertyCGap};
use crate::ext::{parse_rational, Extended, Rational};
use crate::measure::{MeasureSpace, Piece, StepFunction};
use crate::norms::{
    AokiRolewicz, Decomposition, EmbeddingCheck, NormSpec, NormValue, PowerSum, PthPower,
    SubadditivityCheck,
};
use crate::rearrange::{CutoffRow, DecreasingProfile, Move, Segment, ThresholdProfile, TransportMap};

fn parse_field(field: &str, s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|_| format!("{field}: expected a rational \"p/q\", got {s:?}"))
}

fn parse_extended_field(field: &str, s: &str) -> Result<Extended, String> {
    s.parse::<Extended>()
        .map_err(|_| format!("{field}: expected a rational \"p/q\" or \"inf\", got {s:?}"))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceWire {
    total_mass: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFunctionWire {
    space: SpaceWire,
    pieces: Vec<(String, String)>,
    #[serde(default = "zero_string")]
    tail_value: String,
}

impl From<&StepFunction> for StepFunctionWire {
    fn from(f: &StepFunction) -> Self {
        Self {
            space: SpaceWire {
                total_mass: f.space().total_mass().to_string(),
            },
            pieces: f
                .pieces()
                .iter()
                .map(|p| (p.value.to_string(), p.mass.to_string()))
                .collect(),
            tail_value: f.tail_value().to_string(),
        }
    }
}

impl TryFrom<StepFunctionWire> for StepFunction {
    type Error = String;

    fn try_from(w: StepFunctionWire) -> Result<Self, String> {
        let total = parse_extended_field("space.total_mass", &w.space.total_mass)?;
        let space = MeasureSpace::new(total).map_err(|e| format!("space.total_mass: {e}"))?;
        let pieces = w
            .pieces
            .iter()
            .enumerate()
            .map(|(i, (v, m))| {
                Ok(Piece::new(
                    parse_field(&format!("pieces[{i}][0]"), v)?,
                    parse_field(&format!("pieces[{i}][1]"), m)?,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let tail = parse_field("tail_value", &w.tail_value)?;
        StepFunction::new(space, pieces, tail).map_err(|e| e.to_string())
    }
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StepFunctionWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        StepFunctionWire::deserialize(d)?
            .try_into()
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileWire {
    segments: Vec<(String, String)>,
}

impl Serialize for DecreasingProfile {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProfileWire {
            segments: self
                .segments()
                .iter()
                .map(|seg| (seg.length.to_string(), seg.value.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DecreasingProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ProfileWire::deserialize(d)?;
        let segments = w
            .segments
            .iter()
            .enumerate()
            .map(|(i, (l, v))| {
                Ok(Segment {
                    length: parse_extended_field(&format!("segments[{i}][0]"), l)?,
                    value: parse_field(&format!("segments[{i}][1]"), v)?,
                })
            })
            .collect::<Result<Vec<_>, String>>()
            .map_err(D::Error::custom)?;
        DecreasingProfile::new(segments).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdWire {
    breakpoints: Vec<(String, String)>,
    total_mass: String,
}

impl Serialize for ThresholdProfile {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ThresholdWire {
            breakpoints: self
                .breakpoints()
                .iter()
                .map(|(t, v)| (t.to_string(), v.to_string()))
                .collect(),
            total_mass: self.total_mass().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThresholdProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ThresholdWire::deserialize(d)?;
        let parsed = || -> Result<ThresholdProfile, String> {
            let breakpoints = w
                .breakpoints
                .iter()
                .enumerate()
                .map(|(i, (t, v))| {
                    Ok((
                        parse_field(&format!("breakpoints[{i}][0]"), t)?,
                        parse_extended_field(&format!("breakpoints[{i}][1]"), v)?,
                    ))
                })
                .collect::<Result<Vec<_>, String>>()?;
            let total = parse_extended_field("total_mass", &w.total_mass)?;
            ThresholdProfile::new(breakpoints, total).map_err(|e| e.to_string())
        };
        parsed().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransportWire {
    moves: Vec<(String, String, String)>,
}

impl Serialize for TransportMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TransportWire {
            moves: self
                .moves
                .iter()
                .map(|m| {
                    (
                        m.source_start.to_string(),
                        m.length.to_string(),
                        m.destination_start.to_string(),
                    )
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TransportMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = TransportWire::deserialize(d)?;
        let moves = w
            .moves
            .iter()
            .enumerate()
            .map(|(i, (src, len, dst))| {
                Ok(Move {
                    source_start: parse_field(&format!("moves[{i}][0]"), src)?,
                    length: parse_field(&format!("moves[{i}][1]"), len)?,
                    destination_start: parse_field(&format!("moves[{i}][2]"), dst)?,
                })
            })
            .collect::<Result<Vec<_>, String>>()
            .map_err(D::Error::custom)?;
        Ok(TransportMap { moves })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpecInput {
    Object(SpecWire),
    Shorthand(String),
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (variant, p) = match self {
            NormSpec::Lp(p) => ("Lp", Some(p.to_string())),
            NormSpec::LInf => ("LInf", None),
            NormSpec::L1CapLInf => ("L1CapLInf", None),
            NormSpec::L1PlusLInf => ("L1PlusLInf", None),
            NormSpec::LInfPlusTail => ("LInfPlusTail", None),
        };
        SpecWire {
            variant: variant.into(),
            p,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match SpecInput::deserialize(d)? {
            SpecInput::Shorthand(s) => s.parse().map_err(D::Error::custom),
            SpecInput::Object(w) => match (w.variant.as_str(), w.p) {
                ("Lp", Some(p)) => {
                    let p = parse_field("p", &p).map_err(D::Error::custom)?;
                    NormSpec::lp(p).map_err(D::Error::custom)
                }
                ("Lp", None) => Err(D::Error::custom("p: required for variant Lp")),
                (other, Some(_)) => {
                    Err(D::Error::custom(format!("p: not allowed for variant {other}")))
                }
                (other, _) => other.parse().map_err(D::Error::custom),
            },
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PthWire {
    p: String,
    value: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NormValueWire {
    exact: Option<String>,
    approx: Option<f64>,
    infinite: bool,
    #[serde(default)]
    pth_power: Option<PthWire>,
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NormValueWire {
            exact: self.exact.as_ref().map(ToString::to_string),
            approx: (!self.is_infinite).then_some(self.approx),
            infinite: self.is_infinite,
            pth_power: self.pth_power.as_ref().map(|pp| PthWire {
                p: pp.p.to_string(),
                value: pp.value.to_string(),
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = NormValueWire::deserialize(d)?;
        if w.infinite {
            return Ok(NormValue::infinite());
        }
        let exact = w
            .exact
            .map(|e| parse_field("exact", &e))
            .transpose()
            .map_err(D::Error::custom)?;
        let pth_power = w
            .pth_power
            .map(|pp| {
                Ok::<_, String>(PthPower {
                    p: parse_field("pth_power.p", &pp.p)?,
                    value: parse_field("pth_power.value", &pp.value)?,
                })
            })
            .transpose()
            .map_err(D::Error::custom)?;
        let approx = w
            .approx
            .ok_or_else(|| D::Error::custom("approx: required for finite values"))?;
        Ok(NormValue {
            exact,
            approx,
            is_infinite: false,
            pth_power,
        })
    }
}

#[derive(Serialize)]
struct CutoffRowWire<'a> {
    n: u64,
    top_residual: &'a NormValue,
    support_residual: &'a NormValue,
}

impl Serialize for CutoffRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CutoffRowWire {
            n: self.n,
            top_residual: &self.top_residual,
            support_residual: &self.support_residual,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct DecompositionWire<'a> {
    g: &'a StepFunction,
    h: &'a StepFunction,
    cut: String,
    value: &'a NormValue,
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DecompositionWire {
            g: &self.g,
            h: &self.h,
            cut: self.cut.to_string(),
            value: &self.value,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct EmbeddingWire<'a> {
    lhs: &'a NormValue,
    mid: &'a NormValue,
    rhs: &'a NormValue,
    holds: bool,
}

impl Serialize for EmbeddingCheck {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmbeddingWire {
            lhs: &self.lhs,
            mid: &self.mid,
            rhs: &self.rhs,
            holds: self.holds,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct AokiWire {
    approx: f64,
    exact: Option<String>,
}

impl Serialize for AokiRolewicz {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AokiWire {
            approx: self.approx,
            exact: self.exact.as_ref().map(ToString::to_string),
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct PowerSumWire {
    exact: Option<String>,
    approx: f64,
}

impl Serialize for PowerSum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PowerSumWire {
            exact: self.exact.as_ref().map(ToString::to_string),
            approx: self.approx,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct SubadditivityWire<'a> {
    lhs: &'a PowerSum,
    rhs: &'a PowerSum,
    holds: bool,
}

impl Serialize for SubadditivityCheck {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubadditivityWire {
            lhs: &self.lhs,
            rhs: &self.rhs,
            holds: self.holds,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct DualWire<'a> {
    value: &'a NormValue,
    witness: &'a DecreasingProfile,
    method: &'static str,
}

impl Serialize for DualNormResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DualWire {
            value: &self.value,
            witness: &self.witness,
            method: self.method.as_str(),
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct GapWire<'a> {
    sup_chain_norm: &'a NormValue,
    limit_norm: &'a NormValue,
    gap: &'a NormValue,
}

impl Serialize for PropertyCGap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GapWire {
            sup_chain_norm: &self.sup_chain_norm,
            limit_norm: &self.limit_norm,
            gap: &self.gap,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum FatouWire<'a> {
    Checked {
        liminf: &'a NormValue,
        limit: &'a NormValue,
        holds: bool,
    },
    NotApplicable {
        reason: &'a str,
    },
}

impl Serialize for FatouOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FatouOutcome::Checked {
                liminf,
                limit,
                holds,
            } => FatouWire::Checked {
                liminf,
                limit,
                holds: *holds,
            },
            FatouOutcome::NotApplicable { reason } => FatouWire::NotApplicable { reason },
        }
        .serialize(s)
    }
}
