use std::io::{Read, Write};

use csv::{ReaderBuilder, StringRecord, Writer, WriterBuilder};

use crate::curves::{tangent_at, ParamCurve};
use crate::error::{Error, Result};
use crate::induced::{DirMapSample, PTPoint};
use crate::projgeom::{Point2, ProjDir, ResolutionParams};
use crate::sequences::DirectionSequence;

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse(e.to_string())
}

fn num(field: &str, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: `{field}` is not a number")))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// One row of a curve CSV. `slope` is `None` where no tangent exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub p: Point2,
    pub slope: Option<f64>,
}

/// `n` evenly spaced samples with tangent slopes; vertical tangents have
/// infinite slope.
pub fn curve_samples(c: &ParamCurve, n: usize, r: &ResolutionParams) -> Vec<CurveSample> {
    c.sample(n)
        .into_iter()
        .map(|(t, p)| {
            let est = tangent_at(c, t, r);
            let slope = est.dir.filter(|_| est.exists).map(ProjDir::slope);
            CurveSample { t, p, slope }
        })
        .collect()
}

/// Writes `t,x,y,slope`; a missing slope is an empty field.
pub fn write_curve_csv<W: Write>(out: W, samples: &[CurveSample]) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["t", "x", "y", "slope"]).map_err(csv_err)?;
    for s in samples {
        let slope = s.slope.map(fmt).unwrap_or_default();
        w.write_record([fmt(s.t), fmt(s.p.x), fmt(s.p.y), slope]).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

/// Reads `t,x,y[,slope]`.
pub fn read_curve_csv<R: Read>(input: R) -> Result<Vec<CurveSample>> {
    let mut rd = ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names.len() < 3 || names[..3] != ["t", "x", "y"] || (names.len() == 4 && names[3] != "slope") || names.len() > 4 {
        return Err(Error::Parse(format!("unexpected curve header {names:?}")));
    }
    rd.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            let slope = match rec.get(3) {
                Some(s) if !s.is_empty() => Some(num(s, "slope")?),
                _ => None,
            };
            Ok(CurveSample {
                t: num(&rec[0], "t")?,
                p: Point2::new(num(&rec[1], "x")?, num(&rec[2], "y")?),
                slope,
            })
        })
        .collect()
}

/// One row of a direction-map profile CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub theta_in: f64,
    pub theta_out: Option<f64>,
    pub residual: f64,
    pub exists: bool,
}

impl From<&DirMapSample> for ProfileRow {
    fn from(s: &DirMapSample) -> Self {
        ProfileRow {
            theta_in: s.input_dir.theta(),
            theta_out: s.output.dir.map(ProjDir::theta),
            residual: s.output.residual,
            exists: s.output.exists,
        }
    }
}

pub fn write_profile_csv<W: Write>(out: W, rows: &[ProfileRow]) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["theta_in", "theta_out", "residual", "exists"]).map_err(csv_err)?;
    for r in rows {
        let out_field = r.theta_out.map(fmt).unwrap_or_default();
        w.write_record([fmt(r.theta_in), out_field, fmt(r.residual), r.exists.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_profile_csv<R: Read>(input: R) -> Result<Vec<ProfileRow>> {
    let mut rd = ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != ["theta_in", "theta_out", "residual", "exists"] {
        return Err(Error::Parse(format!("unexpected profile header {header:?}")));
    }
    rd.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            let theta_out = if rec[1].is_empty() { None } else { Some(num(&rec[1], "theta_out")?) };
            let exists = rec[3]
                .parse::<bool>()
                .map_err(|_| Error::Parse(format!("exists: `{}` is not a boolean", &rec[3])))?;
            Ok(ProfileRow { theta_in: num(&rec[0], "theta_in")?, theta_out, residual: num(&rec[2], "residual")?, exists })
        })
        .collect()
}

/// Writes `x,y,theta` rows followed by the trailer `limit,x,y,theta`.
pub fn write_sequence_csv<W: Write>(out: W, seq: &DirectionSequence) -> Result<()> {
    let mut w = WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(["x", "y", "theta"]).map_err(csv_err)?;
    for e in &seq.entries {
        w.write_record([fmt(e.p.x), fmt(e.p.y), fmt(e.dir.theta())]).map_err(csv_err)?;
    }
    let l = seq.limit();
    w.write_record(["limit".to_string(), fmt(l.p.x), fmt(l.p.y), fmt(l.dir.theta())])
        .map_err(csv_err)?;
    w.flush().map_err(io_err)
}

fn entry(rec: &StringRecord, at: usize) -> Result<PTPoint> {
    let x = num(&rec[at], "x")?;
    let y = num(&rec[at + 1], "y")?;
    let theta = num(&rec[at + 2], "theta")?;
    if !(x.is_finite() && y.is_finite() && theta.is_finite()) {
        return Err(Error::Parse("sequence values must be finite".into()));
    }
    Ok(PTPoint::new(Point2::new(x, y), ProjDir::new(theta)))
}

/// Reads a sequence CSV; the trailer row is required and must come last.
pub fn read_sequence_csv<R: Read>(input: R) -> Result<DirectionSequence> {
    let mut rd = ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "y", "theta"] {
        return Err(Error::Parse(format!("unexpected sequence header {header:?}")));
    }
    let mut entries = Vec::new();
    let mut limit = None;
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if limit.is_some() {
            return Err(Error::Parse(format!("row {} follows the limit trailer", line + 2)));
        }
        match rec.len() {
            3 => entries.push(entry(&rec, 0)?),
            4 if &rec[0] == "limit" => limit = Some(entry(&rec, 1)?),
            n => return Err(Error::Parse(format!("row {} has {n} fields", line + 2))),
        }
    }
    let limit = limit.ok_or_else(|| Error::Parse("missing `limit,x,y,theta` trailer".into()))?;
    DirectionSequence::new(entries, limit.p, limit.dir)
}
