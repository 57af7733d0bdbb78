//! File formats: signal and spectrum CSV, basis / schedule / decomposition
//! JSON. Every real number is written with 17 significant digits so files
//! round-trip bit-exactly.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::basis::{builtin_basis, BasisFunction, BasisKind, BasisPair, DEFAULT_DEPTH};
use crate::decompose::{BasisSource, Decomposition, Method, Pruning};
use crate::error::{GfdError, Result};
use crate::schedule::{BasisSchedule, Segment};
use crate::signal::{FourierSpectrum, PeriodicSignal};
use crate::spectrum::GeneralizedSpectrum;

/// Grid abscissae must match `j / n` this closely.
pub const GRID_TOLERANCE: f64 = 1e-12;

/// Fixed 17-significant-digit scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(format_real(x)).expect("formatted float is valid JSON")
}

fn ser_real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    raw(*x).serialize(s)
}

fn ser_real_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.map(raw).serialize(s)
}

fn ser_reals<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| raw(x)))
}

// ---------------------------------------------------------------- CSV

pub fn read_signal<R: Read>(reader: R) -> Result<PeriodicSignal> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "value"] {
        return Err(GfdError::Parse(format!(
            "signal CSV header must be `x,value`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(GfdError::Parse(format!("row {} has {} fields", i + 1, rec.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| GfdError::Parse(format!("row {}: `{s}`: {e}", i + 1)))
        };
        xs.push(parse(&rec[0])?);
        values.push(parse(&rec[1])?);
    }
    let n = xs.len();
    for (j, &x) in xs.iter().enumerate() {
        let expect = j as f64 / n as f64;
        if (x - expect).abs() > GRID_TOLERANCE {
            return Err(GfdError::Parse(format!(
                "row {}: x = {x} is off the uniform grid (expected {expect})",
                j + 1
            )));
        }
    }
    PeriodicSignal::new(values)
}

pub fn write_signal<W: Write>(signal: &PeriodicSignal, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "value"])?;
    for (j, &v) in signal.samples().iter().enumerate() {
        w.write_record([format_real(signal.x(j)), format_real(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// `k,energy`, ascending `k`.
pub fn write_generalized_spectrum<W: Write>(spec: &GeneralizedSpectrum, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["k", "energy"])?;
    for (k, e) in spec.entries() {
        w.write_record([k.to_string(), format_real(e)])?;
    }
    w.flush()?;
    Ok(())
}

/// `k,a,b`; row `k = 0` carries `c0` in the cosine column.
pub fn write_fourier_spectrum<W: Write>(spec: &FourierSpectrum, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["k", "a", "b"])?;
    w.write_record(["0".to_string(), format_real(0.0), format_real(spec.c0)])?;
    for (k, a, b) in spec.terms() {
        w.write_record([k.to_string(), format_real(a), format_real(b)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_fourier_spectrum<R: Read>(reader: R) -> Result<FourierSpectrum> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut spec = FourierSpectrum::zeros(0);
    for rec in rdr.records() {
        let rec = rec?;
        let field =
            |i: usize| -> Result<&str> { rec.get(i).ok_or_else(|| GfdError::Parse("short spectrum row".into())) };
        let k: usize = field(0)?.parse().map_err(|e| GfdError::Parse(format!("{e}")))?;
        let a: f64 = field(1)?.parse().map_err(|e| GfdError::Parse(format!("{e}")))?;
        let b: f64 = field(2)?.parse().map_err(|e| GfdError::Parse(format!("{e}")))?;
        if k == 0 {
            spec.c0 = b;
        } else {
            spec.add(k, a, b);
        }
    }
    Ok(spec)
}

// ---------------------------------------------------------------- JSON

#[derive(Debug, Serialize, Deserialize)]
pub struct FunctionJson {
    #[serde(serialize_with = "ser_reals")]
    pub cos: Vec<f64>,
    #[serde(serialize_with = "ser_reals")]
    pub sin: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BasisJson {
    pub label: String,
    #[serde(rename = "S")]
    pub s: FunctionJson,
    #[serde(rename = "R")]
    pub r: FunctionJson,
}

/// A builtin generator reference inside a schedule.
#[derive(Debug, Serialize, Deserialize)]
pub struct BuiltinJson {
    pub builtin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SegmentBasisJson {
    Builtin(BuiltinJson),
    Pair(BasisJson),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SegmentJson {
    pub start_k: usize,
    pub basis: SegmentBasisJson,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub segments: Vec<SegmentJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSourceJson {
    Schedule(ScheduleJson),
    /// Accepted on input only; written files always carry coefficients.
    Builtin(BuiltinJson),
    Pair(BasisJson),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub k: usize,
    #[serde(rename = "A", serialize_with = "ser_real")]
    pub a: f64,
    #[serde(rename = "B", serialize_with = "ser_real")]
    pub b: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub method: String,
    pub order: usize,
    #[serde(serialize_with = "ser_real")]
    pub c0: f64,
    pub coefficients: Vec<CoefficientJson>,
    pub basis: BasisSourceJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pruning: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "ser_real_opt")]
    pub condition_estimate: Option<f64>,
}

impl From<&BasisFunction> for FunctionJson {
    fn from(f: &BasisFunction) -> Self {
        Self {
            cos: f.cos_coeffs().to_vec(),
            sin: f.sin_coeffs().to_vec(),
        }
    }
}

impl TryFrom<FunctionJson> for BasisFunction {
    type Error = GfdError;

    fn try_from(j: FunctionJson) -> Result<Self> {
        BasisFunction::new(j.cos, j.sin)
    }
}

impl From<&BasisPair> for BasisJson {
    fn from(p: &BasisPair) -> Self {
        Self {
            label: p.label.clone(),
            s: (&p.s).into(),
            r: (&p.r).into(),
        }
    }
}

impl TryFrom<BasisJson> for BasisPair {
    type Error = GfdError;

    fn try_from(j: BasisJson) -> Result<Self> {
        Ok(BasisPair::new(j.label, j.s.try_into()?, j.r.try_into()?))
    }
}

impl TryFrom<BuiltinJson> for BasisPair {
    type Error = GfdError;

    fn try_from(j: BuiltinJson) -> Result<Self> {
        let kind: BasisKind = j.builtin.parse()?;
        let (ps, pr) = kind.default_phases();
        builtin_basis(
            kind,
            j.phase_s.unwrap_or(ps),
            j.phase_r.unwrap_or(pr),
            j.depth.unwrap_or(DEFAULT_DEPTH),
        )
    }
}

impl TryFrom<ScheduleJson> for BasisSchedule {
    type Error = GfdError;

    fn try_from(j: ScheduleJson) -> Result<Self> {
        let segments = j
            .segments
            .into_iter()
            .map(|s| {
                let pair = match s.basis {
                    SegmentBasisJson::Builtin(b) => b.try_into()?,
                    SegmentBasisJson::Pair(p) => p.try_into()?,
                };
                Ok(Segment {
                    start_k: s.start_k,
                    pair,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BasisSchedule::new(segments)
    }
}

impl From<&BasisSchedule> for ScheduleJson {
    fn from(s: &BasisSchedule) -> Self {
        Self {
            segments: s
                .segments()
                .iter()
                .map(|seg| SegmentJson {
                    start_k: seg.start_k,
                    basis: SegmentBasisJson::Pair((&seg.pair).into()),
                })
                .collect(),
        }
    }
}

impl From<&Decomposition> for DecompositionJson {
    fn from(d: &Decomposition) -> Self {
        Self {
            method: d.method.name().to_string(),
            order: d.order(),
            c0: d.c0,
            coefficients: d.terms().map(|(k, a, b)| CoefficientJson { k, a, b }).collect(),
            basis: match &d.basis {
                BasisSource::Pair(p) => BasisSourceJson::Pair(p.into()),
                BasisSource::Schedule(s) => BasisSourceJson::Schedule(s.into()),
            },
            pruning: d.pruning.map(|p| p.name().to_string()),
            condition_estimate: d.condition_estimate,
        }
    }
}

impl TryFrom<DecompositionJson> for Decomposition {
    type Error = GfdError;

    fn try_from(j: DecompositionJson) -> Result<Self> {
        if j.coefficients.len() != j.order {
            return Err(GfdError::Parse(format!(
                "order {} but {} coefficients",
                j.order,
                j.coefficients.len()
            )));
        }
        if let Some((i, c)) = j.coefficients.iter().enumerate().find(|(i, c)| c.k != i + 1) {
            return Err(GfdError::Parse(format!(
                "coefficient {i} has k = {}, expected {}",
                c.k,
                i + 1
            )));
        }
        let method: Method = j.method.parse()?;
        let basis = match j.basis {
            BasisSourceJson::Pair(p) => BasisSource::Pair(p.try_into()?),
            BasisSourceJson::Builtin(b) => BasisSource::Pair(b.try_into()?),
            BasisSourceJson::Schedule(s) => BasisSource::Schedule(s.try_into()?),
        };
        let coeffs = j.coefficients.iter().map(|c| (c.a, c.b)).collect();
        let mut d = Decomposition::new(j.c0, coeffs, basis, method)?;
        d.pruning = j.pruning.as_deref().map(str::parse::<Pruning>).transpose()?;
        d.condition_estimate = j.condition_estimate;
        Ok(d)
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn basis_to_json(pair: &BasisPair) -> Result<String> {
    to_json(&BasisJson::from(pair))
}

/// Accepts an explicit pair or a builtin reference.
pub fn basis_from_json(text: &str) -> Result<BasisPair> {
    match serde_json::from_str::<SegmentBasisJson>(text)? {
        SegmentBasisJson::Builtin(b) => b.try_into(),
        SegmentBasisJson::Pair(p) => p.try_into(),
    }
}

pub fn schedule_to_json(schedule: &BasisSchedule) -> Result<String> {
    to_json(&ScheduleJson::from(schedule))
}

pub fn schedule_from_json(text: &str) -> Result<BasisSchedule> {
    serde_json::from_str::<ScheduleJson>(text)?.try_into()
}

pub fn decomposition_to_json(d: &Decomposition) -> Result<String> {
    to_json(&DecompositionJson::from(d))
}

pub fn decomposition_from_json(text: &str) -> Result<Decomposition> {
    serde_json::from_str::<DecompositionJson>(text)?.try_into()
}
