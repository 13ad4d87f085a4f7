//! Parameterized plane curves and secant-limit tangent estimation.

mod catalog;
mod locate;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::PlaneMap;
use crate::projgeom::{circular_mean, proj_distance, signed_diff, Point2, ProjDir, ResolutionParams};
use crate::tail::{last_quarter_start, upper_envelope};
use crate::verdict::Verdict;

pub use catalog::{circle, graph_curve, line_through, x2sin1x, x3sin1x};
pub use locate::nearest_parameter;
pub(crate) use locate::golden_min;

pub type CurveFn = Arc<dyn Fn(f64) -> Point2 + Send + Sync>;

/// When the secant spread on the step grid exceeds tolerance, the grid is
/// shrunk by this factor, at most `MAX_REFINEMENTS` times, keeping the
/// estimate with the smallest spread.
const REFINEMENT_FACTOR: f64 = 0.125;
const MAX_REFINEMENTS: usize = 8;

/// A named piece of a composite curve, occupying `[start, end]` in the
/// parameter domain of the whole.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub name: String,
    pub start: f64,
    pub end: f64,
}

#[derive(Clone)]
pub struct ParamCurve {
    domain: (f64, f64),
    eval: CurveFn,
    deriv: Option<CurveFn>,
    closed: bool,
    segments: Vec<Segment>,
}

impl fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamCurve")
            .field("domain", &self.domain)
            .field("closed", &self.closed)
            .field("analytic_derivative", &self.deriv.is_some())
            .field("segments", &self.segments)
            .finish()
    }
}

impl ParamCurve {
    pub fn new(domain: (f64, f64), eval: impl Fn(f64) -> Point2 + Send + Sync + 'static) -> Self {
        assert!(domain.0 < domain.1, "empty parameter domain");
        ParamCurve {
            domain,
            eval: Arc::new(eval),
            deriv: None,
            closed: false,
            segments: Vec::new(),
        }
    }

    pub fn with_derivative(mut self, deriv: impl Fn(f64) -> Point2 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    pub fn with_segments(mut self, segments: Vec<Segment>) -> Self {
        self.segments = segments;
        self
    }

    /// Marks the curve closed; its endpoints must agree within 1e-12.
    pub fn into_closed(mut self) -> Result<Self> {
        let (a, b) = self.domain;
        let gap = (self.eval)(a).dist((self.eval)(b));
        if gap > 1e-12 {
            return Err(Error::ConstraintViolation(format!(
                "closed curve endpoints differ by {gap:e}"
            )));
        }
        self.closed = true;
        Ok(self)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    fn wrap(&self, t: f64) -> f64 {
        let (a, b) = self.domain;
        if self.closed && (t < a || t > b) {
            a + (t - a).rem_euclid(b - a)
        } else {
            t
        }
    }

    pub fn eval(&self, t: f64) -> Point2 {
        (self.eval)(self.wrap(t))
    }

    pub fn derivative(&self, t: f64) -> Option<Point2> {
        self.deriv.as_ref().map(|d| d(self.wrap(t)))
    }

    /// `n` evenly spaced samples over the whole domain, endpoints included.
    pub fn sample(&self, n: usize) -> Vec<(f64, Point2)> {
        let (a, b) = self.domain;
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let t = if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 };
                (t, (self.eval)(t))
            })
            .collect()
    }

    /// Room available on each side of `t` for difference stencils.
    fn room(&self, t: f64) -> (f64, f64) {
        let (a, b) = self.domain;
        if self.closed {
            let half = 0.5 * (b - a);
            (half, half)
        } else {
            (t - a, b - t)
        }
    }
}

/// Tangent-line estimate at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub dir: Option<ProjDir>,
    /// Largest projective distance from an extrapolated secant direction to
    /// the mean direction; zero when an analytic derivative was used.
    pub residual: f64,
    pub exists: bool,
    /// Gap between the two one-sided limits when each side is individually
    /// consistent. A gap above tolerance marks a corner.
    pub side_gap: Option<f64>,
}

impl SlopeEstimate {
    fn exact(dir: ProjDir) -> Self {
        SlopeEstimate { dir: Some(dir), residual: 0.0, exists: true, side_gap: None }
    }

    fn none() -> Self {
        SlopeEstimate { dir: None, residual: f64::INFINITY, exists: false, side_gap: None }
    }

    pub fn is_corner(&self, tolerance: f64) -> bool {
        self.side_gap.is_some_and(|g| g > tolerance)
    }
}

/// Direction of the chord from `c(t0)` to `c(t0 + h)`.
pub fn secant_dir(c: &ParamCurve, t0: f64, h: f64) -> Result<ProjDir> {
    (c.eval(t0 + h) - c.eval(t0))
        .direction()
        .ok_or(Error::CoincidentPoints { t0, h })
}

/// Secant-limit tangent estimate. An analytic derivative, when present and
/// nonzero, short-circuits the numerical limit. Otherwise the step grid is
/// refined while the extrapolated secant directions disagree, unless the two
/// one-sided limits already disagree (a corner).
pub fn tangent_at(c: &ParamCurve, t0: f64, r: &ResolutionParams) -> SlopeEstimate {
    tangent_with_grid(c, t0, &r.h_grid, r.slope_tolerance)
}

fn tangent_with_grid(c: &ParamCurve, t0: f64, grid: &[f64], tolerance: f64) -> SlopeEstimate {
    if let Some(d) = c.derivative(t0) {
        if d.is_finite() {
            if let Some(dir) = d.direction() {
                return SlopeEstimate::exact(dir);
            }
        }
    }
    let mut best = secant_estimate(c, t0, grid, tolerance);
    let mut steps = grid.to_vec();
    for _ in 0..MAX_REFINEMENTS {
        if best.exists || best.is_corner(tolerance) {
            break;
        }
        steps.iter_mut().for_each(|h| *h *= REFINEMENT_FACTOR);
        let finer = secant_estimate(c, t0, &steps, tolerance);
        if finer.exists || finer.is_corner(tolerance) || finer.residual < best.residual {
            best = finer;
        }
    }
    best
}

fn secant_estimate(c: &ParamCurve, t0: f64, grid: &[f64], tolerance: f64) -> SlopeEstimate {
    let top = grid[0];
    let (back_room, fwd_room) = c.room(t0);
    let mut scale = 1.0;
    let mut sides: Vec<f64> = [(1.0, fwd_room), (-1.0, back_room)]
        .iter()
        .filter(|(_, room)| *room >= top)
        .map(|(s, _)| *s)
        .collect();
    if sides.is_empty() {
        let room = fwd_room.max(back_room);
        if room <= 0.0 {
            return SlopeEstimate::none();
        }
        scale = room / top;
        sides.push(if fwd_room >= back_room { 1.0 } else { -1.0 });
    }

    let p0 = c.eval(t0);
    let chords: Vec<Vec<Option<ProjDir>>> = sides
        .iter()
        .map(|s| {
            grid.iter()
                .map(|h| {
                    let q = c.eval(t0 + s * h * scale);
                    if q.is_finite() { (q - p0).direction() } else { None }
                })
                .collect()
        })
        .collect();
    if chords.iter().flatten().any(Option::is_none) {
        return SlopeEstimate::none();
    }
    let reference = chords[0].last().copied().flatten().expect("checked above");

    let mut side_values: Vec<Vec<f64>> = Vec::with_capacity(chords.len());
    for side in &chords {
        let unwrapped: Vec<f64> = side
            .iter()
            .map(|d| reference.theta() + signed_diff(d.expect("checked above"), reference))
            .collect();
        side_values.push(richardson(grid, &unwrapped));
    }

    let side_gap = if side_values.len() == 2 {
        let summaries: Vec<Option<(ProjDir, f64)>> = side_values
            .iter()
            .map(|vals| {
                let dirs: Vec<ProjDir> = vals.iter().map(|&v| ProjDir::new(v)).collect();
                circular_mean(dirs.iter().copied()).map(|m| {
                    (m, dirs.iter().map(|&d| proj_distance(d, m)).fold(0.0, f64::max))
                })
            })
            .collect();
        match (summaries[0], summaries[1]) {
            (Some((m0, s0)), Some((m1, s1))) if s0 <= tolerance && s1 <= tolerance => {
                Some(proj_distance(m0, m1))
            }
            _ => None,
        }
    } else {
        None
    };

    let all: Vec<ProjDir> = side_values.iter().flatten().map(|&v| ProjDir::new(v)).collect();
    let Some(mean) = circular_mean(all.iter().copied()) else {
        return SlopeEstimate { side_gap, ..SlopeEstimate::none() };
    };
    let residual = all.iter().map(|&d| proj_distance(d, mean)).fold(0.0, f64::max);
    let exists = residual <= tolerance;
    SlopeEstimate { dir: Some(mean), residual, exists, side_gap }
}

/// Two levels of Richardson extrapolation of chord angles, removing the
/// error terms linear and quadratic in the step.
fn richardson(grid: &[f64], values: &[f64]) -> Vec<f64> {
    let first: Vec<f64> = grid
        .windows(2)
        .zip(values.windows(2))
        .map(|(h, v)| {
            let ratio = h[1] / h[0];
            (v[1] - ratio * v[0]) / (1.0 - ratio)
        })
        .collect();
    grid.windows(3)
        .zip(first.windows(2))
        .map(|(h, e)| {
            let ratio = h[2] / h[0];
            (e[1] - ratio * e[0]) / (1.0 - ratio)
        })
        .collect()
}

/// Tangent estimates at each parameter, in input order.
pub fn slope_function(c: &ParamCurve, ts: &[f64], r: &ResolutionParams) -> Vec<SlopeEstimate> {
    ts.par_iter().map(|&t| tangent_at(c, t, r)).collect()
}

/// Step grid for a tangent estimate at distance `d` from the base point:
/// fine enough to resolve oscillation on the scale `d²`, coarse enough to
/// keep chord roundoff well below tolerance.
fn local_grid(c: &ParamCurve, t: f64, base: Point2, d: f64, r: &ResolutionParams) -> Vec<f64> {
    let h0 = r.h_grid[0];
    let p = c.eval(t);
    let speed = p.dist(base) / d;
    let roundoff_floor = if speed > 0.0 { 1e-7 * p.norm() / speed } else { 0.0 };
    let floor = (0.01 * d * d).max(roundoff_floor).max(1e-8 * t.abs());
    let top = h0.min(0.5 * d).min(floor);
    r.h_grid.iter().map(|h| h * top / h0).collect()
}

/// Finitary C¹ test at `t0`: tangents must exist along geometric parameter
/// tails on both sides and their directions must settle onto the tangent at
/// `t0`.
pub fn c1_surrogate(c: &ParamCurve, t0: f64, r: &ResolutionParams) -> Verdict {
    let base = tangent_at(c, t0, r);
    let Some(dir0) = base.dir.filter(|_| base.exists) else {
        let v = if base.is_corner(r.slope_tolerance) {
            Verdict::fail(r, format!("corner at t = {t0}"))
        } else {
            Verdict::inconclusive(r, format!("no tangent line at t = {t0}"))
        };
        return v
            .with_residual("base_residual", base.residual)
            .with_residual("side_gap", base.side_gap.unwrap_or(f64::NAN));
    };

    let (back_room, fwd_room) = c.room(t0);
    let sides: Vec<(f64, f64)> = [(1.0, fwd_room), (-1.0, back_room)]
        .into_iter()
        .filter(|(_, room)| *room > 0.0)
        .map(|(s, room)| (s, (0.99 * room).min(0.1)))
        .collect();
    if sides.is_empty() {
        return Verdict::inconclusive(r, "no parameter room around t0");
    }
    let p0 = c.eval(t0);
    let n = r.tail_length;

    let samples: Vec<(usize, f64, SlopeEstimate)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| {
            sides.iter().map(move |&(sign, start)| {
                let d = start * r.tail_ratio.powi(j as i32);
                let t = t0 + sign * d;
                let grid = local_grid(c, t, p0, d, r);
                (j, t, tangent_with_grid(c, t, &grid, r.slope_tolerance))
            })
        })
        .collect();

    let max_residual = samples.iter().map(|s| s.2.residual).fold(0.0, f64::max);
    if let Some((_, t, est)) = samples.iter().find(|s| !s.2.exists) {
        let v = if est.is_corner(r.slope_tolerance) {
            Verdict::fail(r, format!("corner at t = {t}"))
        } else {
            Verdict::inconclusive(r, format!("no tangent line at t = {t}"))
        };
        return v.with_residual("max_residual", max_residual);
    }

    let mut deviation = vec![0.0f64; n];
    let mut worst_t = vec![t0; n];
    for (j, t, est) in &samples {
        let dev = proj_distance(est.dir.expect("existing estimate has a direction"), dir0);
        if dev >= deviation[*j] {
            deviation[*j] = dev;
            worst_t[*j] = *t;
        }
    }
    let envelope = upper_envelope(&deviation);
    let q = last_quarter_start(n);
    let tail_envelope = envelope[q];
    let v = if tail_envelope < r.dir_tolerance {
        Verdict::pass(r)
    } else {
        let (jw, dev) = deviation[q..]
            .iter()
            .enumerate()
            .fold((q, 0.0), |acc, (i, &d)| if d > acc.1 { (q + i, d) } else { acc });
        Verdict::fail(
            r,
            format!("tangent at t = {} deviates by {dev:.6} rad from the tangent at t0 = {t0}", worst_t[jw]),
        )
    };
    v.with_residual("tail_envelope", tail_envelope)
        .with_residual("max_deviation", envelope[0])
        .with_residual("max_residual", max_residual)
}

/// Image of `c` under `f`. The analytic derivative is dropped.
pub fn image_curve(f: &PlaneMap, c: &ParamCurve) -> ParamCurve {
    let inner = c.clone();
    let map = f.clone();
    ParamCurve {
        domain: c.domain,
        eval: Arc::new(move |t| map.forward(inner.eval(t))),
        deriv: None,
        closed: c.closed,
        segments: c.segments.clone(),
    }
}

/// Two C¹ curves meeting at infinitely many points accumulating at `p`
/// share their tangent line at `p`. Checks the finite consequence.
pub fn accumulation_tangent_check(
    c1: &ParamCurve,
    c2: &ParamCurve,
    p: Point2,
    intersections: &[Point2],
    r: &ResolutionParams,
) -> Result<Verdict> {
    const ON_CURVE: f64 = 1e-9;
    if intersections.len() < 3 {
        return Err(Error::BadWitness(format!(
            "{} intersection points cannot witness accumulation",
            intersections.len()
        )));
    }
    let dists: Vec<f64> = intersections.iter().map(|q| q.dist(p)).collect();
    if dists.contains(&0.0) || dists.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::BadWitness(
            "intersections must be distinct from p and approach it monotonically".into(),
        ));
    }
    for (i, q) in intersections.iter().enumerate() {
        for (name, c) in [("first", c1), ("second", c2)] {
            let (_, gap) = nearest_parameter(c, *q);
            if gap > ON_CURVE {
                return Err(Error::BadWitness(format!(
                    "intersection {i} lies {gap:e} off the {name} curve"
                )));
            }
        }
    }
    let (t1, g1) = nearest_parameter(c1, p);
    let (t2, g2) = nearest_parameter(c2, p);
    if g1 > ON_CURVE || g2 > ON_CURVE {
        return Err(Error::BadWitness("accumulation point is not on both curves".into()));
    }
    let (e1, e2) = (tangent_at(c1, t1, r), tangent_at(c2, t2, r));
    let v = match (e1.dir.filter(|_| e1.exists), e2.dir.filter(|_| e2.exists)) {
        (Some(a), Some(b)) => {
            let gap = proj_distance(a, b);
            let v = if gap <= r.dir_tolerance {
                Verdict::pass(r)
            } else {
                Verdict::fail(r, format!("tangent lines at {p} differ by {gap:.6} rad"))
            };
            v.with_residual("tangent_gap", gap)
        }
        _ => Verdict::inconclusive(r, "a tangent line at the accumulation point is missing"),
    };
    Ok(v.with_residual("closest_approach", *dists.last().expect("nonempty")))
}
