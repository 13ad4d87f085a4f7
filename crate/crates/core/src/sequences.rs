//! Point sequences converging along a line, transverse sequences of
//! point-direction pairs, and their pushforwards.

use rayon::prelude::*;

use crate::curves::{nearest_parameter, tangent_at, ParamCurve};
use crate::error::{Error, Result};
use crate::induced::induced_dir;
pub use crate::induced::PTPoint;
use crate::maps::PlaneMap;
use crate::projgeom::{proj_distance, signed_diff, Point2, ProjDir, ResolutionParams};
use crate::tail::{assess_convergence, decay_exponent, last_quarter_start, running_min, upper_envelope, MIN_DECAY_EXPONENT};
use crate::verdict::Verdict;

/// Radius ratio between the nested disks of the sandwich test.
const SANDWICH_SHRINK: f64 = 0.7;

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSequence {
    pub entries: Vec<PTPoint>,
    pub limit_point: Point2,
    pub limit_dir: ProjDir,
}

impl DirectionSequence {
    pub fn new(entries: Vec<PTPoint>, limit_point: Point2, limit_dir: ProjDir) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("a direction sequence needs entries".into()));
        }
        if let Some(i) = entries.iter().position(|e| e.p == limit_point) {
            return Err(Error::InvalidArgument(format!("entry {i} coincides with the limit point")));
        }
        Ok(DirectionSequence { entries, limit_point, limit_dir })
    }

    pub fn points(&self) -> Vec<Point2> {
        self.entries.iter().map(|e| e.p).collect()
    }

    pub fn limit(&self) -> PTPoint {
        PTPoint::new(self.limit_point, self.limit_dir)
    }

    /// Every `step`-th entry starting at `offset`.
    pub fn subsequence(&self, offset: usize, step: usize) -> Result<Self> {
        let entries = self.entries.iter().skip(offset).step_by(step.max(1)).copied().collect();
        DirectionSequence::new(entries, self.limit_point, self.limit_dir)
    }
}

/// Last `r.tail_length` points distinct from `p`, with their distances to `p`.
fn tail_of(points: &[Point2], p: Point2, r: &ResolutionParams) -> Result<(Vec<Point2>, Vec<f64>)> {
    let usable: Vec<Point2> = points.iter().copied().filter(|q| *q != p).collect();
    if usable.len() < r.tail_length {
        return Err(Error::DegenerateSequence { usable: usable.len(), required: r.tail_length });
    }
    let tail = usable[usable.len() - r.tail_length..].to_vec();
    let dist = tail.iter().map(|q| q.dist(p)).collect();
    Ok((tail, dist))
}

fn approaches(dist: &[f64]) -> bool {
    match (dist.first(), dist.last()) {
        (Some(&a), Some(&b)) => b < a,
        _ => false,
    }
}

/// Chord directions from `p` to the tail points must settle onto `l`.
pub fn converges_along_line(points: &[Point2], p: Point2, l: ProjDir, r: &ResolutionParams) -> Result<Verdict> {
    let (tail, dist) = tail_of(points, p, r)?;
    if !approaches(&dist) {
        return Ok(Verdict::fail(r, "tail points do not approach the limit point"));
    }
    let dev: Vec<f64> = tail
        .iter()
        .map(|q| proj_distance((*q - p).direction().expect("distinct from p"), l))
        .collect();
    let fit = assess_convergence(&dev, &dist, r.dir_tolerance);
    let v = if fit.converges {
        Verdict::pass(r)
    } else {
        let worst = last_quarter_start(dev.len())
            + dev[last_quarter_start(dev.len())..]
                .iter()
                .enumerate()
                .fold((0, -1.0), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc })
                .0;
        Verdict::fail(r, format!("chord to {} leaves the line by {:.6} rad", tail[worst], dev[worst]))
    };
    Ok(v.with_residual("tail_envelope", fit.tail_envelope)
        .with_residual("decay_exponent", fit.exponent.unwrap_or(f64::NAN)))
}

/// Signed angle of `v` measured from the unit vector `axis`.
fn angle_from(axis: Point2, v: Point2) -> f64 {
    axis.cross(v).atan2(axis.dot(v))
}

struct SandwichArm<'a> {
    curve: &'a ParamCurve,
    t_at_p: f64,
    tangent: Point2,
}

impl SandwichArm<'_> {
    /// Angle, seen from `p` relative to `axis`, where the branch heading
    /// along `axis` first reaches distance `radius` from `p`, if it does.
    fn crossing_angle(&self, p: Point2, axis: Point2, radius: f64) -> Option<f64> {
        let sign = if self.tangent.dot(axis) >= 0.0 { 1.0 } else { -1.0 };
        let (a, b) = self.curve.domain();
        let room = if sign > 0.0 { b - self.t_at_p } else { self.t_at_p - a };
        let at = |tau: f64| self.curve.eval(self.t_at_p + sign * tau);
        let mut hi = (radius * 1e-3).min(room);
        let mut lo = 0.0;
        while at(hi).dist(p) < radius {
            if hi >= room {
                return None;
            }
            lo = hi;
            hi = (hi / SANDWICH_SHRINK).min(room);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if at(mid).dist(p) < radius {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(angle_from(axis, at(hi) - p))
    }
}

fn arm<'a>(curve: &'a ParamCurve, p: Point2, l: ProjDir, r: &ResolutionParams) -> Result<(SandwichArm<'a>, f64)> {
    let (t, gap) = nearest_parameter(curve, p);
    if gap > 1e-9 {
        return Err(Error::BadSandwich(format!("curve misses {p} by {gap:e}")));
    }
    let est = tangent_at(curve, t, r);
    let Some(dir) = est.dir.filter(|_| est.exists) else {
        return Err(Error::BadSandwich("sandwich curve has no tangent at the limit point".into()));
    };
    let tangent = curve.derivative(t).unwrap_or_else(|| {
        let step = r.h_grid[r.h_grid.len() - 1];
        let u = dir.unit();
        if (curve.eval(t + step) - curve.eval(t)).dot(u) >= 0.0 { u } else { -u }
    });
    Ok((SandwichArm { curve, t_at_p: t, tangent }, signed_diff(dir, l)))
}

/// Independent oracle for [`converges_along_line`]: curves through `p`
/// whose tangents straddle `l` bound a sector around `l`, and the tail must
/// eventually stay inside it.
pub fn converges_along_line_sandwich(
    points: &[Point2],
    p: Point2,
    l: ProjDir,
    gamma_plus: &ParamCurve,
    gamma_minus: &ParamCurve,
    r: &ResolutionParams,
) -> Result<Verdict> {
    let (plus, side_plus) = arm(gamma_plus, p, l, r)?;
    let (minus, side_minus) = arm(gamma_minus, p, l, r)?;
    if !(side_plus * side_minus < 0.0) {
        return Err(Error::BadSandwich(format!(
            "tangent offsets {side_plus:.4} and {side_minus:.4} from the line are not of opposite sign"
        )));
    }
    let (tail, dist) = tail_of(points, p, r)?;
    if !approaches(&dist) {
        return Ok(Verdict::fail(r, "tail points do not approach the limit point"));
    }

    let inside: Vec<bool> = tail
        .iter()
        .zip(&dist)
        .map(|(q, &rho)| {
            let u = l.unit();
            let axis = if (*q - p).dot(u) >= 0.0 { u } else { -u };
            let (Some(a1), Some(a2)) = (plus.crossing_angle(p, axis, rho), minus.crossing_angle(p, axis, rho)) else {
                return false;
            };
            let phi = angle_from(axis, *q - p);
            a1.min(a2) < phi && phi < a1.max(a2) && a1.min(a2) < 0.0 && a1.max(a2) > 0.0
        })
        .collect();

    let quarter = tail.len().div_ceil(4);
    let mut radius = dist.iter().copied().fold(0.0, f64::max);
    let mut best_fraction: f64 = 0.0;
    loop {
        let members: Vec<bool> = dist.iter().zip(&inside).filter(|(d, _)| **d <= radius).map(|(_, &i)| i).collect();
        if members.len() < quarter {
            break;
        }
        let fraction = members.iter().filter(|&&i| i).count() as f64 / members.len() as f64;
        best_fraction = best_fraction.max(fraction);
        if fraction == 1.0 {
            return Ok(Verdict::pass(r)
                .with_residual("disk_radius", radius)
                .with_residual("points_in_disk", members.len() as f64));
        }
        radius *= SANDWICH_SHRINK;
    }
    let outside = tail.iter().zip(&inside).rev().find(|(_, &i)| !i).map(|(q, _)| *q);
    Ok(Verdict::fail(
        r,
        format!("tail point {} lies outside the sandwich sector", outside.unwrap_or(p)),
    )
    .with_residual("best_inside_fraction", best_fraction))
}

/// Finitary transversality: the points converge along the limit line while
/// the directions stay a uniform gap away from it.
pub fn is_transverse(seq: &DirectionSequence, r: &ResolutionParams) -> Result<Verdict> {
    let along = converges_along_line(&seq.points(), seq.limit_point, seq.limit_dir, r)?;
    if !along.is_pass() {
        let mut v = along;
        v.witness = Some(format!("points do not converge along the limit line: {}", v.witness.unwrap_or_default()));
        return Ok(v);
    }
    let tail: Vec<&PTPoint> = seq.entries.iter().filter(|e| e.p != seq.limit_point).collect();
    let tail = &tail[tail.len() - r.tail_length..];
    let gaps: Vec<f64> = tail.iter().map(|e| proj_distance(e.dir, seq.limit_dir)).collect();
    let scales: Vec<f64> = tail.iter().map(|e| e.p.dist(seq.limit_point)).collect();

    let lower = running_min(&gaps);
    let upper = upper_envelope(&gaps);
    let min_gap = lower[lower.len() - 1];
    let lower_exp = decay_exponent(&lower, &scales);
    let upper_fit = assess_convergence(&gaps, &scales, r.dir_tolerance);
    let lower_decays = lower_exp.is_some_and(|e| e >= MIN_DECAY_EXPONENT);

    let mut v = if min_gap >= r.dir_tolerance && !lower_decays {
        Verdict::pass(r)
    } else {
        let i = gaps.iter().enumerate().fold((0, f64::INFINITY), |a, (i, &g)| if g < a.1 { (i, g) } else { a }).0;
        let v = Verdict::fail(
            r,
            format!("direction at {} is within {:.3e} rad of the limit line", tail[i].p, gaps[i]),
        );
        if upper_fit.converges { v } else { v.with_flag("MIXED") }
    };
    v = v
        .with_residual("min_gap", min_gap)
        .with_residual("tail_gap", gaps[last_quarter_start(gaps.len())..].iter().copied().fold(f64::INFINITY, f64::min))
        .with_residual("lower_decay_exponent", lower_exp.unwrap_or(f64::NAN))
        .with_residual("upper_tail_envelope", upper[last_quarter_start(upper.len())]);
    Ok(v)
}

/// Image sequence `(f(p_n), d̄f(k_n))` with limit `(f(p), d̄f(ℓ))`. A missing
/// tangent at the limit is reported with index equal to the entry count.
pub fn pushforward_sequence(f: &PlaneMap, seq: &DirectionSequence, r: &ResolutionParams) -> Result<DirectionSequence> {
    let limit = seq.limit();
    let images: Vec<Result<PTPoint>> = seq
        .entries
        .par_iter()
        .chain(rayon::iter::once(&limit))
        .enumerate()
        .map(|(index, e)| {
            let est = induced_dir(f, e.p, e.dir, r);
            let dir = est.dir.filter(|_| est.exists).ok_or(Error::MissingTangent { index })?;
            Ok(PTPoint::new(f.forward(e.p), dir))
        })
        .collect();
    let mut images = images.into_iter().collect::<Result<Vec<_>>>()?;
    let limit = images.pop().expect("limit appended");
    DirectionSequence::new(images, limit.p, limit.dir)
}

/// `f` must carry every battery sequence to a transverse sequence.
pub fn property_c_check(
    f: &PlaneMap,
    batteries: &[(String, DirectionSequence)],
    r: &ResolutionParams,
) -> Result<Verdict> {
    for (name, seq) in batteries {
        if !is_transverse(seq, r)?.is_pass() {
            return Err(Error::InvalidArgument(format!("battery sequence `{name}` is not transverse")));
        }
    }
    let results: Vec<Result<Verdict>> = batteries
        .par_iter()
        .map(|(_, seq)| pushforward_sequence(f, seq, r).and_then(|img| is_transverse(&img, r)))
        .collect();
    let mut inconclusive = None;
    let mut min_gap = f64::INFINITY;
    for ((name, _), res) in batteries.iter().zip(results) {
        match res {
            Ok(v) if v.is_fail() => {
                let reason = v.witness.clone().unwrap_or_default();
                let mut out = Verdict::fail(r, name.clone()).with_reason(reason);
                out.residuals = v.residuals;
                out.flags = v.flags;
                return Ok(out);
            }
            Ok(v) if v.is_pass() => min_gap = min_gap.min(v.residual("min_gap").unwrap_or(f64::INFINITY)),
            Ok(v) => inconclusive = inconclusive.or(Some(format!("{name}: {}", v.reason.unwrap_or_default()))),
            Err(e @ Error::MissingTangent { .. }) => inconclusive = inconclusive.or(Some(format!("{name}: {e}"))),
            Err(e) => return Err(e),
        }
    }
    Ok(match inconclusive {
        Some(reason) => Verdict::inconclusive(r, reason),
        None => Verdict::pass(r).with_residual("min_image_gap", min_gap),
    })
}
