use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::curves::{circle, graph_curve, line_through, x3sin1x, ParamCurve};
use crate::error::{Error, Result};
use crate::induced::PTPoint;
use crate::projgeom::{Point2, ProjDir};
use crate::sequences::DirectionSequence;

pub const DEFAULT_DIRECTIONS: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFamily {
    Parabola,
    Cubic,
    X3Sin1x,
}

/// Serializable description of a battery curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    Line { through: [f64; 2], angle_deg: f64 },
    Circle { center: [f64; 2], radius: f64 },
    Graph { family: GraphFamily, #[serde(default)] shift: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub name: String,
    #[serde(flatten)]
    pub spec: CurveSpec,
    pub probes: Vec<f64>,
}

/// Serializable description of a battery sequence. `Figure1` places points
/// at distance `1/((2k+1)π)` along the line at `base_deg`, `k = 1..=count`,
/// with directions `offset_deg` away from that line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    Figure1 { base_deg: f64, offset_deg: f64, count: usize },
    Explicit { entries: Vec<[f64; 3]>, limit: [f64; 3] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub name: String,
    #[serde(flatten)]
    pub spec: SequenceSpec,
}

fn default_directions() -> usize {
    DEFAULT_DIRECTIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatterySpec {
    pub curves: Vec<CurveEntry>,
    pub sequences: Vec<SequenceEntry>,
    pub points: Vec<[f64; 2]>,
    #[serde(default = "default_directions")]
    pub directions: usize,
}

#[derive(Debug, Clone)]
pub struct BatteryCurve {
    pub name: String,
    pub curve: ParamCurve,
    pub probes: Vec<f64>,
}

/// Finite stand-in for "every C¹ curve", "every transverse sequence" and
/// "every point".
#[derive(Debug, Clone)]
pub struct Battery {
    pub curves: Vec<BatteryCurve>,
    pub sequences: Vec<(String, DirectionSequence)>,
    pub points: Vec<Point2>,
    pub directions: usize,
}

fn translated(c: ParamCurve, shift: Point2) -> ParamCurve {
    if shift == Point2::ORIGIN {
        return c;
    }
    let inner = c.clone();
    let moved = ParamCurve::new(c.domain(), move |t| inner.eval(t) + shift);
    if c.has_derivative() {
        moved.with_derivative(move |t| c.derivative(t).expect("derivative present"))
    } else {
        moved
    }
}

impl CurveSpec {
    pub fn build(&self) -> Result<ParamCurve> {
        Ok(match *self {
            CurveSpec::Line { through, angle_deg } => {
                line_through(Point2::new(through[0], through[1]), ProjDir::from_degrees(angle_deg))
            }
            CurveSpec::Circle { center, radius } => {
                if !(radius > 0.0) {
                    return Err(Error::InvalidArgument(format!("circle radius {radius} must be positive")));
                }
                circle(Point2::new(center[0], center[1]), radius)
            }
            CurveSpec::Graph { family, shift } => {
                let base = match family {
                    GraphFamily::Parabola => graph_curve((-1.0, 1.0), |x| x * x, Some(Box::new(|x| 2.0 * x))),
                    GraphFamily::Cubic => graph_curve((-1.0, 1.0), |x| x * x * x, Some(Box::new(|x| 3.0 * x * x))),
                    GraphFamily::X3Sin1x => x3sin1x(),
                };
                translated(base, Point2::new(shift[0], shift[1]))
            }
        })
    }
}

/// Points `1/((2k+1)π)` along the line at `base`, converging to the
/// origin, directions a fixed angle `offset` away from it.
pub fn figure1_sequence(base: f64, offset: f64, count: usize) -> Result<DirectionSequence> {
    let line = ProjDir::new(base);
    let entries = (1..=count)
        .map(|k| PTPoint::new(line.unit() * (1.0 / ((2 * k + 1) as f64 * PI)), line.rotate(offset)))
        .collect();
    DirectionSequence::new(entries, Point2::ORIGIN, line)
}

impl SequenceSpec {
    pub fn build(&self) -> Result<DirectionSequence> {
        match self {
            SequenceSpec::Figure1 { base_deg, offset_deg, count } => {
                figure1_sequence(base_deg.to_radians(), offset_deg.to_radians(), *count)
            }
            SequenceSpec::Explicit { entries, limit } => {
                let entries = entries
                    .iter()
                    .map(|e| PTPoint::new(Point2::new(e[0], e[1]), ProjDir::new(e[2])))
                    .collect();
                DirectionSequence::new(entries, Point2::new(limit[0], limit[1]), ProjDir::new(limit[2]))
            }
        }
    }
}

impl Default for BatterySpec {
    /// Twelve curves led by the x-axis, eight odd-multiple-of-π sequences led by the
    /// one on the x-axis with directions of slope 1, five points.
    fn default() -> Self {
        let origin = [0.0, 0.0];
        let mut curves = vec![CurveEntry {
            name: "x-axis".into(),
            spec: CurveSpec::Line { through: origin, angle_deg: 0.0 },
            probes: vec![0.0, 0.25, 0.5],
        }];
        for deg in [30.0, 60.0, 90.0, 120.0, 150.0] {
            curves.push(CurveEntry {
                name: format!("line-{deg}"),
                spec: CurveSpec::Line { through: origin, angle_deg: deg },
                probes: vec![0.0, 0.5],
            });
        }
        let graph = |name: &str, family, shift, probes: &[f64]| CurveEntry {
            name: name.into(),
            spec: CurveSpec::Graph { family, shift },
            probes: probes.to_vec(),
        };
        curves.push(CurveEntry {
            name: "circle".into(),
            spec: CurveSpec::Circle { center: [0.5, 0.0], radius: 0.5 },
            probes: vec![PI, 0.0, FRAC_PI_2],
        });
        curves.push(graph("parabola", GraphFamily::Parabola, origin, &[0.0, 0.5]));
        curves.push(graph("cubic", GraphFamily::Cubic, origin, &[0.0, -0.5]));
        curves.push(graph("x3sin1x", GraphFamily::X3Sin1x, origin, &[0.0]));
        curves.push(graph("parabola-shifted", GraphFamily::Parabola, [0.3, -0.2], &[0.0, -0.3]));
        curves.push(graph("x3sin1x-shifted", GraphFamily::X3Sin1x, [0.125, 0.0], &[0.0]));

        let mut sequences: Vec<SequenceEntry> = [0.0, 30.0, 60.0, 90.0, 120.0, 150.0]
            .into_iter()
            .map(|base| SequenceEntry {
                name: if base == 0.0 { "figure1".into() } else { format!("figure1-{base}") },
                spec: SequenceSpec::Figure1 { base_deg: base, offset_deg: 45.0, count: 40 },
            })
            .collect();
        for base in [0.0, 90.0] {
            sequences.push(SequenceEntry {
                name: format!("figure1-perp-{base}"),
                spec: SequenceSpec::Figure1 { base_deg: base, offset_deg: 90.0, count: 40 },
            });
        }

        BatterySpec {
            curves,
            sequences,
            points: vec![origin, [0.125, 0.0], [0.0, 0.1], [0.5, 0.25], [-0.3, 0.7]],
            directions: DEFAULT_DIRECTIONS,
        }
    }
}

impl BatterySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("battery JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("battery spec serializes")
    }

    pub fn build(&self) -> Result<Battery> {
        if self.directions < 3 {
            return Err(Error::InvalidArgument("a battery needs at least 3 directions per point".into()));
        }
        let curves = self
            .curves
            .iter()
            .map(|e| {
                let curve = e.spec.build()?;
                let (a, b) = curve.domain();
                if let Some(t) = e.probes.iter().find(|t| !(a..=b).contains(*t)) {
                    return Err(Error::InvalidArgument(format!("probe {t} lies outside the domain of `{}`", e.name)));
                }
                Ok(BatteryCurve { name: e.name.clone(), curve, probes: e.probes.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let sequences = self
            .sequences
            .iter()
            .map(|e| Ok((e.name.clone(), e.spec.build()?)))
            .collect::<Result<Vec<_>>>()?;
        let points = self.points.iter().map(|p| Point2::new(p[0], p[1])).collect();
        Ok(Battery { curves, sequences, points, directions: self.directions })
    }
}

impl Battery {
    pub fn default_battery() -> Self {
        BatterySpec::default().build().expect("default battery is well formed")
    }
}
