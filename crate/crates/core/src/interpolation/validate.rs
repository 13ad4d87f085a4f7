use rayon::prelude::*;

use super::arcs::{arc_slope, xi_segments, ClosedConstruction};
use crate::curves::{c1_surrogate, tangent_at, ParamCurve};
use crate::projgeom::{proj_distance, Point2, ResolutionParams};
use crate::verdict::{Status, Verdict};

const POSITION_TOL: f64 = 1e-9;
const TANGENT_TOL: f64 = 1e-6;
const JUNCTION_TOL: f64 = 1e-12;
const CLOSURE_SLOPE_TOL: f64 = 1e-9;
const SWEEP_SAMPLES: usize = 2048;

fn polyline(c: &ParamCurve) -> Vec<Point2> {
    c.sample(SWEEP_SAMPLES).into_iter().map(|(_, p)| p).collect()
}

/// Proper crossing of the closed segments `ab` and `cd`; touching at an
/// endpoint does not count.
fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

fn count_crossings(p: &[Point2], q: &[Point2]) -> usize {
    p.par_windows(2)
        .map(|s| {
            let (lo_x, hi_x) = (s[0].x.min(s[1].x), s[0].x.max(s[1].x));
            let (lo_y, hi_y) = (s[0].y.min(s[1].y), s[0].y.max(s[1].y));
            q.windows(2)
                .filter(|t| {
                    t[0].x.max(t[1].x) >= lo_x
                        && t[0].x.min(t[1].x) <= hi_x
                        && t[0].y.max(t[1].y) >= lo_y
                        && t[0].y.min(t[1].y) <= hi_y
                        && segments_cross(s[0], s[1], t[0], t[1])
                })
                .count()
        })
        .sum()
}

/// Interior samples of each arc outside its region of the plane.
fn region_violations(cc: &ClosedConstruction) -> usize {
    let x0 = cc.x0();
    let y_max = cc.closure.y_max;
    let inside: [Box<dyn Fn(Point2) -> bool>; 4] = [
        Box::new(move |p| (0.0..=x0).contains(&p.x) && p.y <= y_max - 1.0),
        Box::new(move |p| p.x > x0),
        Box::new(move |p| p.x > 0.0 && p.x < x0 && p.y > y_max),
        Box::new(move |p| p.x < 0.0),
    ];
    cc.arcs()
        .iter()
        .zip(inside.iter())
        .map(|((_, c), ok)| {
            let pts = polyline(c);
            pts[1..pts.len() - 1].iter().filter(|p| !ok(**p)).count()
        })
        .sum()
}

/// Checks the construction against its specification: interpolation of the
/// source data, exact C¹ junctions, the C¹ surrogate at every junction, arcs
/// confined to disjoint regions, and no sampled crossings between arcs.
pub fn validate_construction(cc: &ClosedConstruction, r: &ResolutionParams) -> Verdict {
    let curve = match cc.curve() {
        Ok(c) => c,
        Err(e) => return Verdict::fail(r, "closure").with_reason(e.to_string()),
    };
    let scale = 1.0_f64.max(cc.x0()).max(cc.closure.y_max.abs());
    let mut failures: Vec<&str> = Vec::new();

    let mut position_error = 0.0f64;
    let mut tangent_error = 0.0f64;
    for (k, src) in cc.ns.sources.iter().enumerate() {
        let t = cc.knot_parameter(k);
        position_error = position_error.max(curve.eval(t).dist(src.p));
        let est = tangent_at(&curve, t, r);
        let err = est.dir.filter(|_| est.exists).map_or(f64::INFINITY, |d| proj_distance(d, src.dir));
        tangent_error = tangent_error.max(err);
    }
    if position_error > POSITION_TOL {
        failures.push("position");
    }
    if tangent_error > TANGENT_TOL {
        failures.push("tangent");
    }

    let regions = region_violations(cc);
    if regions > 0 {
        failures.push("region");
    }

    let lines: Vec<Vec<Point2>> = cc.arcs().iter().map(|(_, c)| polyline(c)).collect();
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let crossings: usize = pairs.par_iter().map(|&(i, j)| count_crossings(&lines[i], &lines[j])).sum();
    if crossings > 0 {
        failures.push("self_intersection");
    }

    let segs = xi_segments(&cc.ns);
    let mut junction = segs
        .windows(2)
        .map(|w| {
            let x = w[0].lower.x;
            (w[0].value(x) - w[1].value(x)).abs().max((w[0].slope(x) - w[1].slope(x)).abs())
        })
        .fold(0.0f64, f64::max);
    let arcs = cc.arcs();
    for i in 0..4 {
        let (_, a) = arcs[i];
        let (_, b) = arcs[(i + 1) % 4];
        let gap = a.eval(a.domain().1).dist(b.eval(b.domain().0));
        junction = junction.max(gap / scale);
    }
    if junction > JUNCTION_TOL {
        failures.push("junction");
    }

    let closure_slope = arcs
        .iter()
        .flat_map(|(_, c)| {
            let (a, b) = c.domain();
            [arc_slope(c, a), arc_slope(c, b)]
        })
        .map(f64::abs)
        .fold(0.0f64, f64::max);
    if !(closure_slope <= CLOSURE_SLOPE_TOL) {
        failures.push("closure_slope");
    }

    let mut junctions: Vec<f64> = cc.arc_ranges().iter().map(|r| r.0).collect();
    junctions.extend((0..cc.ns.knots.len()).map(|k| cc.knot_parameter(k)));
    let c1: Vec<(f64, Verdict)> = junctions.par_iter().map(|&t| (t, c1_surrogate(&curve, t, r))).collect();
    let c1_status = c1.iter().fold(Status::Pass, |s, (_, v)| s.combine(v.status));
    let c1_worst = c1
        .iter()
        .filter_map(|(_, v)| v.residual("tail_envelope"))
        .fold(0.0f64, f64::max);
    if c1_status == Status::Fail {
        failures.push("c1");
    }

    let base = match (failures.first(), c1_status) {
        (Some(first), _) => {
            let mut v = Verdict::fail(r, *first);
            for f in &failures {
                v = v.with_flag(&format!("failed:{f}"));
            }
            v
        }
        (None, Status::Inconclusive) => {
            let (t, v) = c1.iter().find(|(_, v)| v.status == Status::Inconclusive).expect("inconclusive entry");
            Verdict::inconclusive(r, format!("C1 surrogate at t = {t}: {}", v.reason.clone().unwrap_or_default()))
        }
        _ => Verdict::pass(r),
    };
    base.with_residual("position_error", position_error)
        .with_residual("tangent_error", tangent_error)
        .with_residual("junction_mismatch", junction)
        .with_residual("closure_slope", closure_slope)
        .with_residual("region_violations", regions as f64)
        .with_residual("crossings", crossings as f64)
        .with_residual("c1_tail_envelope", c1_worst)
        .with_residual("y_max", cc.closure.y_max)
}
