use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use super::{normalize_and_extract, Knot, NormalizedSequence};
use crate::curves::{golden_min, graph_curve, ParamCurve, Segment};
use crate::error::Result;
use crate::projgeom::{Point2, ResolutionParams};
use crate::sequences::DirectionSequence;

/// Samples per gamma segment when locating the top of `ξ`.
const HEIGHT_SAMPLES: usize = 4096;

/// One piece of `ξ`, interpolating from `upper` at `x = upper.x` down to
/// `lower` at `x = lower.x < upper.x`. Each half blends a sinusoid carrying
/// the end slope into the chord through the midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSegment {
    pub upper: Knot,
    pub lower: Knot,
}

impl GammaSegment {
    pub fn new(upper: Knot, lower: Knot) -> Self {
        assert!(lower.x < upper.x, "gamma segment needs lower.x < upper.x");
        GammaSegment { upper, lower }
    }

    fn width(&self) -> f64 {
        self.upper.x - self.lower.x
    }

    fn chord(&self) -> f64 {
        (self.upper.y - self.lower.y) / self.width()
    }

    fn on_upper_half(&self, t: f64) -> bool {
        2.0 * t >= self.upper.x + self.lower.x
    }

    pub fn value(&self, t: f64) -> f64 {
        let (a, b, w) = (self.upper, self.lower, self.width());
        let s = self.chord();
        let lever = (t - a.x) + (t - b.x);
        if self.on_upper_half(t) {
            let u = lever / w;
            let wave = w * a.slope / TAU * (TAU * (t - a.x) / w).sin() + a.y;
            u * wave + (1.0 - u) * (s * (t - a.x) + a.y)
        } else {
            let v = lever / (b.x - a.x);
            let wave = w * b.slope / TAU * (TAU * (t - b.x) / w).sin() + b.y;
            v * wave + (1.0 - v) * (s * (t - b.x) + b.y)
        }
    }

    pub fn slope(&self, t: f64) -> f64 {
        let (a, b, w) = (self.upper, self.lower, self.width());
        let s = self.chord();
        let lever = (t - a.x) + (t - b.x);
        if self.on_upper_half(t) {
            let u = lever / w;
            let phase = TAU * (t - a.x) / w;
            a.slope * (u * phase.cos() + phase.sin() / PI) + 2.0 * (1.0 - u) * s
        } else {
            let v = lever / (b.x - a.x);
            let phase = TAU * (t - b.x) / w;
            b.slope * (v * phase.cos() - phase.sin() / PI) + 2.0 * (1.0 - v) * s
        }
    }

    /// Largest value over the segment: dense samples, then a golden-section
    /// polish around the best one.
    fn height(&self) -> f64 {
        let (lo, w) = (self.lower.x, self.width());
        let ts: Vec<f64> = (0..HEIGHT_SAMPLES)
            .map(|i| lo + w * i as f64 / (HEIGHT_SAMPLES - 1) as f64)
            .collect();
        let (best_i, best) = ts
            .iter()
            .map(|&t| self.value(t))
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, y)| if y > acc.1 { (i, y) } else { acc });
        let left = ts[best_i.saturating_sub(1)];
        let right = ts[(best_i + 1).min(ts.len() - 1)];
        let t = golden_min(|t| -self.value(t), left, right);
        best.max(self.value(t))
    }
}

/// Graph of one gamma segment over `[lower.x, upper.x]`.
pub fn gamma_segment(upper: Knot, lower: Knot) -> ParamCurve {
    let g = GammaSegment::new(upper, lower);
    graph_curve((lower.x, upper.x), move |t| g.value(t), Some(Box::new(move |t| g.slope(t))))
}

/// Knots of `ξ`: the anchor `(x₁ + 1, y₁, 0)`, the extracted knots, and the
/// origin with slope 0 closing the truncated tail.
fn xi_knots(ns: &NormalizedSequence) -> Vec<Knot> {
    let first = ns.knots[0];
    let mut knots = Vec::with_capacity(ns.knots.len() + 2);
    knots.push(Knot::new(first.x + 1.0, first.y, 0.0));
    knots.extend_from_slice(&ns.knots);
    knots.push(Knot::new(0.0, 0.0, 0.0));
    knots
}

/// The pieces of `ξ` from the anchor down to the origin.
pub fn xi_segments(ns: &NormalizedSequence) -> Vec<GammaSegment> {
    xi_knots(ns).windows(2).map(|w| GammaSegment::new(w[0], w[1])).collect()
}

fn segment_for(segs: &[GammaSegment], t: f64) -> &GammaSegment {
    let idx = segs.partition_point(|g| g.lower.x > t);
    &segs[idx.min(segs.len() - 1)]
}

/// `ξ(t) = (t, γ_k(t))` on `[0, x₀]`, the graph through every knot.
pub fn build_xi(ns: &NormalizedSequence) -> ParamCurve {
    let segs: Arc<[GammaSegment]> = xi_segments(ns).into();
    let x0 = segs[0].upper.x;
    let eval_segs = Arc::clone(&segs);
    ParamCurve::new((0.0, x0), move |t| Point2::new(t, segment_for(&eval_segs, t).value(t)))
        .with_derivative(move |t| Point2::new(1.0, segment_for(&segs, t).slope(t)))
}

/// Closing arcs of the construction in the normalized frame, each on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Closure {
    pub y_max: f64,
    pub alpha: ParamCurve,
    pub beta: ParamCurve,
    pub delta: ParamCurve,
}

/// `y_max` is one more than the top of `ξ`; `α` is the left half circle
/// from the top band down to the origin, `β` the top band from right to
/// left, `δ` the right half circle from `ξ(x₀)` up to the band.
pub fn build_closure(ns: &NormalizedSequence) -> Closure {
    let segs = xi_segments(ns);
    let (x0, y0) = (segs[0].upper.x, segs[0].upper.y);
    let y_max = 1.0 + segs.iter().map(GammaSegment::height).fold(f64::NEG_INFINITY, f64::max);

    let ra = y_max - 0.5 * y0;
    let alpha = ParamCurve::new((0.0, 1.0), move |t| {
        let a = PI * (t + 0.5);
        Point2::new(ra * a.cos(), ra * (1.0 + a.sin()))
    })
    .with_derivative(move |t| {
        let a = PI * (t + 0.5);
        Point2::new(-PI * ra * a.sin(), PI * ra * a.cos())
    });

    let top = 2.0 * y_max - y0;
    let beta = ParamCurve::new((0.0, 1.0), move |t| Point2::new(x0 * (1.0 - t), top))
        .with_derivative(move |_| Point2::new(-x0, 0.0));

    let rd = y_max - y0;
    let delta = ParamCurve::new((0.0, 1.0), move |t| {
        let a = PI * (t - 0.5);
        Point2::new(rd * a.cos() + x0, rd * a.sin() + y_max)
    })
    .with_derivative(move |t| {
        let a = PI * (t - 0.5);
        Point2::new(-PI * rd * a.sin(), PI * rd * a.cos())
    });

    Closure { y_max, alpha, beta, delta }
}

/// Everything produced by the construction. The arcs live in the normalized
/// frame; [`ClosedConstruction::curve`] assembles them in world coordinates.
#[derive(Debug, Clone)]
pub struct ClosedConstruction {
    pub ns: NormalizedSequence,
    pub xi: ParamCurve,
    pub closure: Closure,
}

impl ClosedConstruction {
    pub fn from_normalized(ns: NormalizedSequence) -> Self {
        let xi = build_xi(&ns);
        let closure = build_closure(&ns);
        ClosedConstruction { ns, xi, closure }
    }

    pub fn x0(&self) -> f64 {
        self.xi.domain().1
    }

    /// Arcs in traversal order with their names.
    pub fn arcs(&self) -> [(&'static str, &ParamCurve); 4] {
        [
            ("xi", &self.xi),
            ("delta", &self.closure.delta),
            ("beta", &self.closure.beta),
            ("alpha", &self.closure.alpha),
        ]
    }

    /// Parameter ranges of the arcs on the assembled curve: `ξ` keeps its own
    /// parameter on `[0, x₀]`, the others follow with unit length each.
    pub fn arc_ranges(&self) -> [(f64, f64); 4] {
        let x0 = self.x0();
        [(0.0, x0), (x0, x0 + 1.0), (x0 + 1.0, x0 + 2.0), (x0 + 2.0, x0 + 3.0)]
    }

    /// Parameter of the `k`-th extracted knot on the assembled curve.
    pub fn knot_parameter(&self, k: usize) -> f64 {
        self.ns.knots[k].x
    }

    /// The closed curve `ξ ∪ δ ∪ β ∪ α` mapped back to world coordinates.
    pub fn curve(&self) -> Result<ParamCurve> {
        let x0 = self.x0();
        let arcs: Vec<ParamCurve> = self.arcs().iter().map(|(_, c)| (*c).clone()).collect();
        let frame = self.ns.frame;
        let locate = move |t: f64| -> (usize, f64) {
            if t <= x0 {
                (0, t)
            } else {
                let i = ((t - x0).floor() as usize).min(2);
                (i + 1, t - x0 - i as f64)
            }
        };
        let eval_arcs = arcs.clone();
        let segments = self
            .arcs()
            .iter()
            .zip(self.arc_ranges())
            .map(|((name, _), (start, end))| Segment { name: name.to_string(), start, end })
            .collect();
        ParamCurve::new((0.0, x0 + 3.0), move |t| {
            let (i, s) = locate(t);
            frame.to_world(eval_arcs[i].eval(s))
        })
        .with_derivative(move |t| {
            let (i, s) = locate(t);
            let d = arcs[i].derivative(s).expect("construction arcs carry derivatives");
            frame.vector_to_world(d)
        })
        .with_segments(segments)
        .into_closed()
    }
}

/// Extracts `want` entries from `seq` and builds the closed curve through
/// them.
pub fn construct_closed_c1(seq: &DirectionSequence, want: usize, r: &ResolutionParams) -> Result<ClosedConstruction> {
    let ns = normalize_and_extract(seq, want, r)?;
    Ok(ClosedConstruction::from_normalized(ns))
}

/// Slope `y'/x'` of an arc at `t` from its analytic derivative.
pub(super) fn arc_slope(c: &ParamCurve, t: f64) -> f64 {
    let d = c.derivative(t).expect("construction arcs carry derivatives");
    d.y / d.x
}
