use std::f64::consts::TAU;

use super::ParamCurve;
use crate::projgeom::{Point2, ProjDir};

/// Graph `t ↦ (t, y(t))` over `domain`, with `dy` as analytic derivative
/// when supplied.
pub fn graph_curve(
    domain: (f64, f64),
    y: impl Fn(f64) -> f64 + Send + Sync + 'static,
    dy: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
) -> ParamCurve {
    let c = ParamCurve::new(domain, move |t| Point2::new(t, y(t)));
    match dy {
        Some(dy) => c.with_derivative(move |t| Point2::new(1.0, dy(t))),
        None => c,
    }
}

/// Straight line `t ↦ p + t·u` for `t ∈ [-1, 1]`, `u` the unit vector of `dir`.
pub fn line_through(p: Point2, dir: ProjDir) -> ParamCurve {
    let u = dir.unit();
    ParamCurve::new((-1.0, 1.0), move |t| p + u * t).with_derivative(move |_| u)
}

/// Closed circle parameterized by angle on `[0, 2π]`.
pub fn circle(center: Point2, radius: f64) -> ParamCurve {
    ParamCurve::new((0.0, TAU), move |t| center + Point2::polar(radius, t))
        .with_derivative(move |t| Point2::new(-radius * t.sin(), radius * t.cos()))
        .into_closed()
        .expect("circle endpoints coincide")
}

/// Graph of `x² sin(1/x)` on `[-1, 1]`, extended by 0 at the origin. Its
/// derivative exists everywhere but is discontinuous at 0.
pub fn x2sin1x() -> ParamCurve {
    graph_curve(
        (-1.0, 1.0),
        |x| if x == 0.0 { 0.0 } else { x * x * (1.0 / x).sin() },
        Some(Box::new(|x| {
            if x == 0.0 {
                0.0
            } else {
                2.0 * x * (1.0 / x).sin() - (1.0 / x).cos()
            }
        })),
    )
}

/// Graph of `x³ sin(1/x)` on `[-1, 1]`, extended by 0 at the origin; C¹.
pub fn x3sin1x() -> ParamCurve {
    graph_curve(
        (-1.0, 1.0),
        |x| if x == 0.0 { 0.0 } else { x.powi(3) * (1.0 / x).sin() },
        Some(Box::new(|x| {
            if x == 0.0 {
                0.0
            } else {
                3.0 * x * x * (1.0 / x).sin() - x * (1.0 / x).cos()
            }
        })),
    )
}
