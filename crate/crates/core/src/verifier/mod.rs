//! Membership harness: properties (a), (b), (c) of a plane map over a finite
//! battery, plus per-map probes of differentiability and of the induced
//! direction map.

mod battery;
mod checks;
mod probes;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::induced::{bundle_continuity_probe, induced_dir, PTPoint};
use crate::maps::PlaneMap;
use crate::projgeom::{proj_distance, Point2, ProjDir, ResolutionParams};
use crate::verdict::{Status, Verdict};

pub use battery::{
    figure1_sequence, Battery, BatteryCurve, BatterySpec, CurveEntry, CurveSpec, GraphFamily, SequenceEntry,
    SequenceSpec, DEFAULT_DIRECTIONS,
};
pub use checks::{check_property_a, check_property_b, check_property_c};
pub use probes::{differentiability_probe, pushforward_vector, unit_directions, PushforwardEstimate, ZERO_MAGNITUDE};

/// Agreement required between input and output directions for an identity
/// induced map.
const INDUCED_IDENTITY_TOL: f64 = 1e-6;
const MAX_NONDIFF_PROBES: usize = 6;

#[derive(Debug, Clone)]
pub struct Probe {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub map: String,
    pub resolution: ResolutionParams,
    pub a: Verdict,
    pub b: Verdict,
    pub c: Verdict,
    pub probes: Vec<Probe>,
}

impl ClassificationReport {
    /// PASS iff all three properties pass; otherwise the worst status.
    pub fn overall(&self) -> Status {
        self.a.status.combine(self.b.status).combine(self.c.status)
    }

    pub fn probe(&self, name: &str) -> Option<&Verdict> {
        self.probes.iter().find(|p| p.name == name).map(|p| &p.verdict)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "map": self.map,
            "resolution": resolution_json(&self.resolution),
            "properties": {
                "a": verdict_json(&self.a),
                "b": verdict_json(&self.b),
                "c": verdict_json(&self.c),
            },
            "probes": self.probes.iter().map(|p| {
                let mut v = verdict_json(&p.verdict);
                v.as_object_mut().expect("object").insert("name".into(), json!(p.name));
                v
            }).collect::<Vec<_>>(),
            "overall": self.overall().as_str(),
        })
    }

    /// Pretty JSON with sorted keys and numbers rounded to 12 significant
    /// digits; identical reports serialize to identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Rounds to 12 significant digits; non-finite values become strings.
pub fn number(v: f64) -> Value {
    if v.is_finite() {
        let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
        json!(rounded)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn resolution_json(r: &ResolutionParams) -> Value {
    json!({
        "tail_length": r.tail_length,
        "tail_ratio": number(r.tail_ratio),
        "dir_tolerance": number(r.dir_tolerance),
        "slope_tolerance": number(r.slope_tolerance),
        "h_grid": r.h_grid.iter().map(|&h| number(h)).collect::<Vec<_>>(),
    })
}

fn verdict_json(v: &Verdict) -> Value {
    let residuals: Map<String, Value> = v.residuals.iter().map(|(k, &x)| (k.clone(), number(x))).collect();
    let mut out = json!({
        "status": v.status.as_str(),
        "residuals": residuals,
        "flags": v.flags.iter().collect::<Vec<_>>(),
    });
    let obj = out.as_object_mut().expect("object");
    if let Some(w) = &v.witness {
        obj.insert("witness".into(), json!(w));
    }
    if let Some(reason) = &v.reason {
        obj.insert("reason".into(), json!(reason));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PropertySummary {
    pub status: Status,
    #[serde(default)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ProbeSummary {
    pub name: String,
    pub status: Status,
}

/// The decision-relevant part of a serialized report.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReportSummary {
    pub map: String,
    pub overall: Status,
    pub properties: BTreeMap<String, PropertySummary>,
    pub probes: Vec<ProbeSummary>,
}

pub fn parse_report(text: &str) -> Result<ReportSummary> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("report JSON: {e}")))
}

/// Induced direction map at `p` equals the identity on `n` directions.
pub fn induced_identity_probe(f: &PlaneMap, p: Point2, n: usize, r: &ResolutionParams) -> Verdict {
    let mut worst = 0.0f64;
    for i in 0..n {
        let d = ProjDir::new(std::f64::consts::PI * i as f64 / n as f64);
        let est = induced_dir(f, p, d, r);
        let Some(out) = est.dir.filter(|_| est.exists) else {
            return Verdict::inconclusive(r, format!("no induced direction for {d}"));
        };
        worst = worst.max(proj_distance(out, d));
    }
    let v = if worst <= INDUCED_IDENTITY_TOL {
        Verdict::pass(r)
    } else {
        Verdict::fail(r, format!("induced map moves a direction by {worst:.3e} rad"))
    };
    v.with_residual("max_error", worst)
}

/// Every probed pushforward at `p` collapses to zero (`collapse`) or
/// blows up (`!collapse`).
fn vector_probe(f: &PlaneMap, p: Point2, collapse: bool, r: &ResolutionParams) -> Verdict {
    let est: Vec<PushforwardEstimate> = unit_directions(16).into_iter().map(|v| pushforward_vector(f, p, v, r)).collect();
    let max_norm = est.iter().map(|e| e.value.norm()).fold(0.0, f64::max);
    let ok = est.iter().all(|e| if collapse { e.zero } else { e.infinite });
    let v = if ok {
        Verdict::pass(r)
    } else if collapse {
        Verdict::fail(r, format!("a pushforward has magnitude {max_norm:.3e}"))
    } else {
        Verdict::fail(r, "a pushforward stays bounded")
    };
    v.with_residual("max_magnitude", max_norm)
}

/// Approach along the y-axis with horizontal directions.
fn q_continuity_sequence() -> Vec<PTPoint> {
    (1..=40).map(|n| PTPoint::new(Point2::new(0.0, 1.0 / n as f64), ProjDir::HORIZONTAL)).collect()
}

fn map_probes(f: &PlaneMap, b: &Battery, r: &ResolutionParams) -> Vec<Probe> {
    let probe = |name: String, verdict: Verdict| Probe { name, verdict };
    let mut out = Vec::new();
    let name = f.name();
    match name {
        "G" => out.push(probe("induced_identity@origin".into(), induced_identity_probe(f, Point2::ORIGIN, b.directions, r))),
        "H" => out.push(probe("vector_collapse@origin".into(), vector_probe(f, Point2::ORIGIN, true, r))),
        "Hinv" => out.push(probe("vector_blowup@origin".into(), vector_probe(f, Point2::ORIGIN, false, r))),
        "Q" => {
            let limit = PTPoint::new(Point2::ORIGIN, ProjDir::HORIZONTAL);
            let v = bundle_continuity_probe(f, &q_continuity_sequence(), limit, r)
                .unwrap_or_else(|e| Verdict::inconclusive(r, e.to_string()));
            out.push(probe("bundle_continuity@y-axis".into(), v));
        }
        _ => {}
    }
    let mut points: Vec<Point2> = f.known_nondiff_points().iter().copied().take(MAX_NONDIFF_PROBES).collect();
    if points.is_empty() {
        points.push(Point2::ORIGIN);
    }
    if name.starts_with("P:") {
        points.push(Point2::new(0.3, 0.1));
    }
    for p in points {
        out.push(probe(format!("differentiability@{p}"), differentiability_probe(f, p, r)));
    }
    out
}

/// Runs the three property checks and the probes keyed to the map.
pub fn classify(f: &PlaneMap, b: &Battery, r: &ResolutionParams) -> ClassificationReport {
    let (a, (bv, c)) = rayon::join(
        || check_property_a(f, b, r),
        || {
            rayon::join(
                || check_property_b(f, b, r),
                || check_property_c(f, b, r).unwrap_or_else(|e| Verdict::inconclusive(r, e.to_string())),
            )
        },
    );
    ClassificationReport {
        map: f.name().to_string(),
        resolution: r.clone(),
        a,
        b: bv,
        c,
        probes: map_probes(f, b, r),
    }
}
