//! Simple closed C¹ curves through a convergent sequence of points with
//! prescribed tangent lines.
//!
//! The input is normalized so that the limit point is the origin and the
//! limit line is the x-axis, a well-behaved subsequence is extracted, and
//! the curve is assembled from an interpolating graph `ξ` closed up by two
//! half circles `δ`, `α` and a horizontal segment `β`.

mod arcs;
mod validate;

#[cfg(test)]
mod tests;

use crate::error::{Error, Result};
use crate::projgeom::{proj_distance, Point2, ProjDir, ResolutionParams};
use crate::sequences::{converges_along_line, DirectionSequence, PTPoint};
use crate::tail::assess_convergence;

pub use arcs::{build_closure, build_xi, construct_closed_c1, gamma_segment, ClosedConstruction, GammaSegment};
pub use validate::validate_construction;

/// Chord slopes `|y/x|` at or below this are treated as exactly zero.
const ZERO_CHORD: f64 = 1e-12;

/// A prescribed point and tangent slope in the normalized frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub x: f64,
    pub y: f64,
    pub slope: f64,
}

impl Knot {
    pub fn new(x: f64, y: f64, slope: f64) -> Self {
        Knot { x, y, slope }
    }

    fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    fn chord(&self) -> f64 {
        self.y / self.x
    }
}

/// Affine normalization: translate the limit point to the origin, rotate the
/// limit line onto the x-axis, then reflect as recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub origin: Point2,
    pub angle: f64,
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Frame {
    fn reflect(&self, v: Point2) -> Point2 {
        Point2::new(
            if self.flip_x { -v.x } else { v.x },
            if self.flip_y { -v.y } else { v.y },
        )
    }

    pub fn to_local(&self, p: Point2) -> Point2 {
        self.reflect((p - self.origin).rotate(-self.angle))
    }

    pub fn to_world(&self, q: Point2) -> Point2 {
        self.reflect(q).rotate(self.angle) + self.origin
    }

    pub fn vector_to_world(&self, v: Point2) -> Point2 {
        self.reflect(v).rotate(self.angle)
    }

    pub fn dir_to_local(&self, d: ProjDir) -> ProjDir {
        self.reflect(d.unit().rotate(-self.angle)).direction().expect("unit vector")
    }
}

/// The extracted subsequence in the normalized frame. `sources[k]` is the
/// original entry that produced `knots[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSequence {
    pub knots: Vec<Knot>,
    pub sources: Vec<PTPoint>,
    pub frame: Frame,
}

/// Points must converge to the limit along the limit line and directions must
/// converge to the limit line. Short inputs are judged on all their entries.
fn check_hypothesis(seq: &DirectionSequence, r: &ResolutionParams) -> Result<()> {
    let mut local = r.clone();
    local.tail_length = r.tail_length.min(seq.entries.len());
    let points = seq.points();
    let along = converges_along_line(&points, seq.limit_point, seq.limit_dir, &local)?;
    if !along.is_pass() {
        return Err(Error::NotConvergent(format!(
            "points do not converge along the limit line ({})",
            along.witness.unwrap_or_default()
        )));
    }
    let tail = &seq.entries[seq.entries.len() - local.tail_length..];
    let deviation: Vec<f64> = tail.iter().map(|e| proj_distance(e.dir, seq.limit_dir)).collect();
    let scale: Vec<f64> = tail.iter().map(|e| e.p.dist(seq.limit_point)).collect();
    let fit = assess_convergence(&deviation, &scale, r.dir_tolerance);
    if !fit.converges {
        return Err(Error::NotConvergent(format!(
            "directions stay {:.6} rad away from the limit line",
            fit.tail_envelope
        )));
    }
    Ok(())
}

/// Greedy pass keeping each candidate that preserves every monotonicity the
/// construction relies on. With `flat`, all chord slopes are zero.
fn greedy_filter(cands: &[(Knot, PTPoint)], flat: bool, want: usize) -> Vec<(Knot, PTPoint)> {
    let mut kept: Vec<(Knot, PTPoint)> = Vec::with_capacity(want);
    for &(k, src) in cands {
        if kept.len() == want {
            break;
        }
        if flat != (k.y == 0.0) {
            continue;
        }
        if let Some(&(last, _)) = kept.last() {
            if !(k.x < last.x && k.norm() < last.norm() && k.slope.abs() <= last.slope.abs()) {
                continue;
            }
            if !flat {
                if k.chord() >= last.chord() {
                    continue;
                }
                if kept.len() >= 2 {
                    let prev = kept[kept.len() - 2].0;
                    let old = (last.y - prev.y) / (last.x - prev.x);
                    let new = (k.y - last.y) / (k.x - last.x);
                    if new >= old {
                        continue;
                    }
                }
            }
        }
        kept.push((k, src));
    }
    kept
}

/// Normalizes `seq` and extracts `want` entries satisfying the ordering
/// conditions of the construction.
pub fn normalize_and_extract(seq: &DirectionSequence, want: usize, r: &ResolutionParams) -> Result<NormalizedSequence> {
    if want == 0 {
        return Err(Error::InvalidArgument("want must be positive".into()));
    }
    if seq.entries.len() < want {
        return Err(Error::InsufficientPoints { found: seq.entries.len(), want });
    }
    check_hypothesis(seq, r)?;

    let mut frame = Frame { origin: seq.limit_point, angle: seq.limit_dir.theta(), flip_x: false, flip_y: false };
    let rotated: Vec<(Point2, PTPoint)> = seq
        .entries
        .iter()
        .map(|e| (frame.to_local(e.p), *e))
        .filter(|(q, _)| q.x.abs() > ZERO_CHORD * q.norm())
        .map(|(q, e)| {
            let y = if q.y.abs() <= ZERO_CHORD * q.x.abs() { 0.0 } else { q.y };
            (Point2::new(q.x, y), e)
        })
        .collect();

    let positive = rotated.iter().filter(|(q, _)| q.x > 0.0).count();
    frame.flip_x = 2 * positive < rotated.len();
    let side: Vec<(Point2, PTPoint)> = rotated
        .into_iter()
        .filter(|(q, _)| (q.x > 0.0) != frame.flip_x)
        .collect();
    let up = side.iter().filter(|(q, _)| q.y >= 0.0).count();
    let down = side.iter().filter(|(q, _)| q.y <= 0.0).count();
    frame.flip_y = down > up;

    let cands: Vec<(Knot, PTPoint)> = side
        .into_iter()
        .filter_map(|(_, e)| {
            let q = frame.to_local(e.p);
            let y = if q.y.abs() <= ZERO_CHORD * q.x.abs() { 0.0 } else { q.y };
            let slope = frame.dir_to_local(e.dir).slope();
            (y >= 0.0 && slope.is_finite()).then_some((Knot::new(q.x, y, slope), e))
        })
        .collect();

    let flat_count = cands.iter().filter(|(k, _)| k.y == 0.0).count();
    let mut kept = Vec::new();
    if flat_count >= want {
        kept = greedy_filter(&cands, true, want);
    }
    if kept.len() < want {
        let sloped = greedy_filter(&cands, false, want);
        if sloped.len() > kept.len() {
            kept = sloped;
        }
    }
    if kept.len() < want {
        return Err(Error::InsufficientPoints { found: kept.len(), want });
    }
    let (knots, sources) = kept.into_iter().unzip();
    Ok(NormalizedSequence { knots, sources, frame })
}
