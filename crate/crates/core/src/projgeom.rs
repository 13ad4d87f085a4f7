//! Points of the plane, undirected tangent directions (points of the
//! projective line ℝP¹ coordinatized by an angle in `[0, π)`), their metric,
//! and the cyclic order on the direction circle.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute angle tolerance under which two directions count as equal when
/// deciding cyclic order.
pub const DEGENERATE_ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Point at distance `r` from the origin in the direction of angle `theta`.
    pub fn polar(r: f64, theta: f64) -> Self {
        Point2::new(r * theta.cos(), r * theta.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Projective direction of the vector from the origin to `self`, or
    /// `None` for the zero vector.
    pub fn direction(self) -> Option<ProjDir> {
        if self.x == 0.0 && self.y == 0.0 {
            None
        } else {
            Some(ProjDir::new(self.y.atan2(self.x)))
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An undirected line direction, stored as an angle in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjDir {
    theta: f64,
}

impl ProjDir {
    pub const HORIZONTAL: ProjDir = ProjDir { theta: 0.0 };
    pub const VERTICAL: ProjDir = ProjDir { theta: FRAC_PI_2 };

    /// Normalizes any finite angle into `[0, π)`.
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        if t >= PI {
            t = 0.0;
        }
        ProjDir { theta: t }
    }

    pub fn from_degrees(deg: f64) -> Self {
        ProjDir::new(deg.to_radians())
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    /// Slope of the line; `f64::INFINITY` for the vertical direction.
    pub fn slope(self) -> f64 {
        if self.theta == FRAC_PI_2 {
            f64::INFINITY
        } else {
            self.theta.tan()
        }
    }

    /// Unit vector representative with angle in `[0, π)`.
    pub fn unit(self) -> Point2 {
        Point2::polar(1.0, self.theta)
    }

    pub fn rotate(self, angle: f64) -> Self {
        ProjDir::new(self.theta + angle)
    }
}

impl fmt::Display for ProjDir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.theta)
    }
}

/// Direction of the line with slope `m`; any infinite slope is vertical.
pub fn dir_from_slope(m: f64) -> ProjDir {
    if m.is_infinite() {
        ProjDir::VERTICAL
    } else {
        ProjDir::new(m.atan())
    }
}

/// Metric on ℝP¹: the smaller of the two angles between the lines.
pub fn proj_distance(a: ProjDir, b: ProjDir) -> f64 {
    let d = (a.theta - b.theta).abs();
    d.min(PI - d)
}

/// Signed angle from `b` to `a`, in `[-π/2, π/2)`.
pub fn signed_diff(a: ProjDir, b: ProjDir) -> f64 {
    (a.theta - b.theta + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CyclicOrder {
    Cw,
    Ccw,
    Degenerate,
}

impl CyclicOrder {
    pub fn reversed(self) -> Self {
        match self {
            CyclicOrder::Cw => CyclicOrder::Ccw,
            CyclicOrder::Ccw => CyclicOrder::Cw,
            CyclicOrder::Degenerate => CyclicOrder::Degenerate,
        }
    }
}

/// Cyclic order of three directions on the circle `[0, π)`.
pub fn cyclic_order(a: ProjDir, b: ProjDir, c: ProjDir) -> CyclicOrder {
    if proj_distance(a, b) < DEGENERATE_ANGLE_TOL
        || proj_distance(b, c) < DEGENERATE_ANGLE_TOL
        || proj_distance(a, c) < DEGENERATE_ANGLE_TOL
    {
        return CyclicOrder::Degenerate;
    }
    let ab = (b.theta - a.theta).rem_euclid(PI);
    let ac = (c.theta - a.theta).rem_euclid(PI);
    if ab < ac {
        CyclicOrder::Ccw
    } else {
        CyclicOrder::Cw
    }
}

/// Mean direction by doubled-angle averaging. `None` when the doubled-angle
/// vectors cancel (no preferred direction).
pub fn circular_mean<I: IntoIterator<Item = ProjDir>>(dirs: I) -> Option<ProjDir> {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for d in dirs {
        let (s, c) = (2.0 * d.theta).sin_cos();
        sx += c;
        sy += s;
        n += 1;
    }
    if n == 0 || sx.hypot(sy) <= 1e-12 * n as f64 {
        return None;
    }
    Some(ProjDir::new(0.5 * sy.atan2(sx)))
}

/// Finitary surrogates for the limits in the definitions: tail lengths,
/// tolerances and the step grid used for secant and difference quotients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionParams {
    pub tail_length: usize,
    /// Ratio of the geometric parameter tails used by the C¹ surrogate.
    pub tail_ratio: f64,
    pub dir_tolerance: f64,
    pub slope_tolerance: f64,
    pub h_grid: Vec<f64>,
}

impl Default for ResolutionParams {
    fn default() -> Self {
        ResolutionParams {
            tail_length: 40,
            tail_ratio: 0.7,
            dir_tolerance: 1e-3,
            slope_tolerance: 1e-3,
            h_grid: geometric_grid(1e-3, 12),
        }
    }
}

/// `levels` step sizes starting at `h_max`, halving each time.
pub fn geometric_grid(h_max: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|i| h_max * 0.5f64.powi(i as i32)).collect()
}

impl ResolutionParams {
    pub fn validate(&self) -> Result<()> {
        if self.tail_length == 0 {
            return Err(Error::InvalidArgument("tail_length must be positive".into()));
        }
        if !(self.tail_ratio > 0.0 && self.tail_ratio < 1.0) {
            return Err(Error::InvalidArgument("tail_ratio must lie in (0, 1)".into()));
        }
        if !(self.dir_tolerance > 0.0 && self.slope_tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.h_grid.len() < 2 {
            return Err(Error::InvalidArgument("h_grid needs at least two steps".into()));
        }
        let ok = self.h_grid.iter().all(|&h| h > 0.0 && h.is_finite())
            && self.h_grid.windows(2).all(|w| w[1] < w[0]);
        if !ok {
            return Err(Error::InvalidArgument(
                "h_grid must be positive and strictly decreasing".into(),
            ));
        }
        Ok(())
    }

    /// Copy with the step grid multiplied by `factor`.
    pub fn scaled_steps(&self, factor: f64) -> Self {
        ResolutionParams {
            h_grid: self.h_grid.iter().map(|h| h * factor).collect(),
            ..self.clone()
        }
    }

    /// Applies one `key=value` override. Recognized keys: `tail_length`,
    /// `tail_ratio`, `dir_tolerance`, `slope_tolerance`, `h_max`, `h_levels`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let real = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("{key}: `{value}` is not a number")))
        };
        match key {
            "tail_length" => {
                self.tail_length = value.parse().map_err(|_| {
                    Error::InvalidArgument(format!("tail_length: `{value}` is not an integer"))
                })?
            }
            "tail_ratio" => self.tail_ratio = real()?,
            "dir_tolerance" => self.dir_tolerance = real()?,
            "slope_tolerance" => self.slope_tolerance = real()?,
            "h_max" => self.h_grid = geometric_grid(real()?, self.h_grid.len()),
            "h_levels" => {
                let levels = value.parse().map_err(|_| {
                    Error::InvalidArgument(format!("h_levels: `{value}` is not an integer"))
                })?;
                self.h_grid = geometric_grid(self.h_grid[0], levels);
            }
            other => return Err(Error::InvalidArgument(format!("unknown resolution key `{other}`"))),
        }
        self.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn slopes_map_to_angles() {
        assert_eq!(dir_from_slope(0.0).theta(), 0.0);
        assert_eq!(dir_from_slope(f64::INFINITY).theta(), FRAC_PI_2);
        assert_eq!(dir_from_slope(f64::NEG_INFINITY).theta(), FRAC_PI_2);
        assert!((dir_from_slope(1.0).theta() - FRAC_PI_4).abs() < 1e-15);
        assert!((dir_from_slope(-1.0).theta() - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert_eq!(ProjDir::VERTICAL.slope(), f64::INFINITY);
    }

    #[test]
    fn distance_examples() {
        let d = |a: f64, b: f64| proj_distance(ProjDir::new(a), ProjDir::new(b));
        assert_eq!(d(0.0, 0.0), 0.0);
        assert!((d(0.0, FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
        assert!((d(0.1, PI - 0.1) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn normalization_wraps_into_half_open_interval() {
        assert_eq!(ProjDir::new(PI).theta(), 0.0);
        assert!((ProjDir::new(-0.25).theta() - (PI - 0.25)).abs() < 1e-15);
        assert!(ProjDir::new(7.0 * PI + 0.3).theta() < PI);
    }

    #[test]
    fn cyclic_examples() {
        let p = ProjDir::new;
        assert_eq!(cyclic_order(p(0.0), p(FRAC_PI_4), p(FRAC_PI_2)), CyclicOrder::Ccw);
        assert_eq!(cyclic_order(p(0.0), p(FRAC_PI_2), p(FRAC_PI_4)), CyclicOrder::Cw);
        assert_eq!(
            cyclic_order(p(FRAC_PI_4), p(FRAC_PI_4), p(FRAC_PI_2)),
            CyclicOrder::Degenerate
        );
    }

    #[test]
    fn mean_handles_wraparound() {
        let m = circular_mean([ProjDir::new(0.01), ProjDir::new(PI - 0.01)]).unwrap();
        assert!(proj_distance(m, ProjDir::HORIZONTAL) < 1e-12);
        assert!(circular_mean([ProjDir::new(0.0), ProjDir::new(FRAC_PI_2)]).is_none());
    }

    #[test]
    fn overrides_apply_and_validate() {
        let mut r = ResolutionParams::default();
        r.set("dir_tolerance", "2e-3").unwrap();
        r.set("h_levels", "8").unwrap();
        assert_eq!(r.dir_tolerance, 2e-3);
        assert_eq!(r.h_grid.len(), 8);
        assert!(r.set("tail_ratio", "1.5").is_err());
        assert!(r.set("nonsense", "1").is_err());
    }

    fn angle() -> impl Strategy<Value = f64> {
        0.0..PI
    }

    proptest! {
        #[test]
        fn triangle_inequality(a in angle(), b in angle(), c in angle()) {
            let (a, b, c) = (ProjDir::new(a), ProjDir::new(b), ProjDir::new(c));
            prop_assert!(proj_distance(a, c) <= proj_distance(a, b) + proj_distance(b, c) + 1e-12);
            prop_assert!(proj_distance(a, b) <= FRAC_PI_2 + 1e-15);
            prop_assert!((proj_distance(a, b) - proj_distance(b, a)).abs() < 1e-15);
        }

        #[test]
        fn cyclic_order_offset_invariant(a in angle(), b in angle(), c in angle(), off in -10.0..10.0f64) {
            let sep = |x: f64, y: f64| proj_distance(ProjDir::new(x), ProjDir::new(y)) > 1e-6;
            prop_assume!(sep(a, b) && sep(b, c) && sep(a, c));
            let o = cyclic_order(ProjDir::new(a), ProjDir::new(b), ProjDir::new(c));
            let s = cyclic_order(ProjDir::new(a + off), ProjDir::new(b + off), ProjDir::new(c + off));
            prop_assert_eq!(o, s);
        }

        #[test]
        fn swapping_reverses_order(a in angle(), b in angle(), c in angle()) {
            let sep = |x: f64, y: f64| proj_distance(ProjDir::new(x), ProjDir::new(y)) > 1e-9;
            prop_assume!(sep(a, b) && sep(b, c) && sep(a, c));
            let (a, b, c) = (ProjDir::new(a), ProjDir::new(b), ProjDir::new(c));
            prop_assert_eq!(cyclic_order(a, b, c), cyclic_order(a, c, b).reversed());
        }

        #[test]
        fn signed_diff_consistent(a in angle(), b in angle()) {
            let (a, b) = (ProjDir::new(a), ProjDir::new(b));
            let s = signed_diff(a, b);
            prop_assert!((s.abs() - proj_distance(a, b)).abs() < 1e-12);
            prop_assert!(proj_distance(b.rotate(s), a) < 1e-12);
        }
    }
}
