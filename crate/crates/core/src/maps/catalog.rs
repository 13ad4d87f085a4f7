use std::f64::consts::PI;

use super::bumps::{bump_g, bump_k, bump_q, bump_w, BumpSpec};
use super::roots::solve_increasing;
use super::{invert, PlaneMap};
use crate::error::{Error, Result};
use crate::projgeom::Point2;

/// Largest bump count accepted by [`map_p`]; smaller support radii fall
/// below useful double precision around their centers.
pub const MAX_P_BUMPS: u32 = 40;

pub fn identity() -> PlaneMap {
    PlaneMap::new("identity", |p| p, |p| p)
}

pub fn rotation(degrees: f64) -> PlaneMap {
    let a = degrees.to_radians();
    PlaneMap::new(format!("rot:{degrees}"), move |p| p.rotate(a), move |p| p.rotate(-a))
}

/// `(x, y) ↦ (x, y + |x|)`: bends the x-axis into the graph of `|x|`.
pub fn corner_shear() -> PlaneMap {
    PlaneMap::new(
        "corner_shear",
        |p| Point2::new(p.x, p.y + p.x.abs()),
        |p| Point2::new(p.x, p.y - p.x.abs()),
    )
    .with_nondiff_points(vec![Point2::ORIGIN])
}

/// Radial rescaling by `g(y/x)` on each ray off the y-axis.
pub fn map_g() -> PlaneMap {
    let g = bump_g();
    PlaneMap::new(
        "G",
        move |p| if p.x == 0.0 { p } else { p * g.value(p.y / p.x) },
        move |p| if p.x == 0.0 { p } else { p * (1.0 / g.value(p.y / p.x)) },
    )
    .with_nondiff_points(vec![Point2::ORIGIN])
}

/// Squares the radius and keeps the polar angle.
pub fn map_h() -> PlaneMap {
    PlaneMap::new("H", |p| p * p.norm(), h_inverse).with_nondiff_points(vec![Point2::ORIGIN])
}

fn h_inverse(p: Point2) -> Point2 {
    let r = p.norm();
    if r == 0.0 {
        p
    } else {
        p * (1.0 / r.sqrt())
    }
}

pub fn map_hinv() -> PlaneMap {
    invert(&map_h()).renamed("Hinv")
}

fn q_image_height(q: &BumpSpec, x: f64, y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        y * q.value(x / y)
    }
}

/// Solves `Q(x, y) = p` for `(x, y)`. The height `y ↦ y q(x/y)` is strictly
/// increasing because `q(t) > t q'(t)`.
pub fn q_inverse(p: Point2) -> Result<Point2> {
    let q = bump_q()?;
    q_inverse_with(&q, q.range(), p)
}

fn q_inverse_with(q: &BumpSpec, (q_min, q_max): (f64, f64), p: Point2) -> Result<Point2> {
    if p.y == 0.0 {
        return Ok(p);
    }
    let (a, b) = (p.y / (1.01 * q_max), p.y / (0.99 * q_min));
    let y = solve_increasing(|y| q_image_height(q, p.x, y), p.y, a.min(b), a.max(b))?;
    Ok(Point2::new(p.x, y))
}

/// Vertical shear `(x, y) ↦ (x, y q(x/y))`, fixing the x-axis.
pub fn map_q() -> Result<PlaneMap> {
    let q = bump_q()?;
    let range = q.range();
    Ok(PlaneMap::new(
        "Q",
        move |p| Point2::new(p.x, q_image_height(&q, p.x, p.y)),
        move |p| q_inverse_with(&q, range, p).unwrap_or_else(|e| panic!("Q inverse at {p}: {e}")),
    )
    .with_nondiff_points(vec![Point2::ORIGIN]))
}

/// Signed-radius polar coordinates with `θ ∈ [0, π)`.
fn signed_polar(p: Point2) -> (f64, f64) {
    let r = p.norm();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let a = p.y.atan2(p.x);
    if (0.0..PI).contains(&a) {
        (r, a)
    } else if a < 0.0 && a + PI < PI {
        (-r, a + PI)
    } else if a < 0.0 {
        (r, 0.0)
    } else {
        (-r, 0.0)
    }
}

fn w_angle(w: &BumpSpec, r: f64, theta: f64) -> f64 {
    let s = w.value(r.abs());
    PI * w.value(theta / PI) * (1.0 - s) + theta * s
}

/// Bends the pencil of lines through the origin inside the unit disk: the
/// angle `θ` at radius `r` becomes `π w(θ/π)(1 - w(|r|)) + θ w(|r|)`.
pub fn map_w() -> PlaneMap {
    let w = bump_w();
    PlaneMap::new(
        "W",
        move |p| {
            let (r, theta) = signed_polar(p);
            if r == 0.0 || r.abs() >= 1.0 {
                return p;
            }
            Point2::polar(r, w_angle(&w, r, theta))
        },
        move |p| {
            let (r, theta) = signed_polar(p);
            if r == 0.0 || r.abs() >= 1.0 {
                return p;
            }
            let pre = solve_increasing(|t| w_angle(&w, r, t), theta, 0.0, PI)
                .expect("angle equation is bracketed by [0, π]");
            Point2::polar(r, pre)
        },
    )
    .with_nondiff_points(vec![Point2::ORIGIN])
}

fn p0(k: &BumpSpec, p: Point2) -> f64 {
    if p.y == 0.0 {
        1.0
    } else {
        k.value(p.x / p.y)
    }
}

fn blend(w: &BumpSpec, r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        1.0 - w.value(2.0 * r - 1.0)
    }
}

fn rho_forward(k: &BumpSpec, w: &BumpSpec, p: Point2) -> Point2 {
    let r = p.norm();
    if r >= 1.0 {
        return p;
    }
    p * (1.0 + blend(w, r) * (p0(k, p) - 1.0))
}

fn rho_inverse(k: &BumpSpec, w: &BumpSpec, p: Point2) -> Point2 {
    let big_r = p.norm();
    let kk = p0(k, p);
    if big_r >= 1.0 || kk == 1.0 {
        return p;
    }
    let r = solve_increasing(|r| r * (1.0 + blend(w, r) * (kk - 1.0)), big_r, big_r / kk, big_r)
        .expect("radial profile is increasing with the root in [R/k, R]");
    p * (r / big_r)
}

/// Base bump of `P`: inside radius 1/2 it rescales each ray by `k(x/y)`,
/// which is the identity for slopes in `[-2, 2]` and not on the y-axis;
/// it blends to the identity by radius 1.
pub fn rho() -> PlaneMap {
    let (k, w) = (bump_k(), bump_w());
    PlaneMap::new("rho", move |p| rho_forward(&k, &w, p), move |p| rho_inverse(&k, &w, p))
        .with_nondiff_points(vec![Point2::ORIGIN])
}

/// Centers `(2^-n, 0)` and radii `2^-(n+2)` of the support balls of `P`.
pub fn p_support_balls(n_max: u32) -> Vec<(Point2, f64)> {
    (1..=n_max)
        .map(|n| (Point2::new(0.5f64.powi(n as i32), 0.0), 0.5f64.powi(n as i32 + 2)))
        .collect()
}

fn apply_in_ball(balls: &[(Point2, f64)], p: Point2, f: impl Fn(Point2) -> Point2) -> Point2 {
    for &(c, radius) in balls {
        if p.dist(c) < radius {
            let s = 1.0 / radius;
            return c + f((p - c) * s) * radius;
        }
    }
    p
}

/// Rescaled copies of [`rho`] on disjoint balls accumulating at the origin,
/// truncated after `n_max` bumps.
pub fn map_p(n_max: u32) -> Result<PlaneMap> {
    if n_max == 0 || n_max > MAX_P_BUMPS {
        return Err(Error::InvalidArgument(format!(
            "P needs 1 ≤ n_max ≤ {MAX_P_BUMPS}, got {n_max}"
        )));
    }
    let balls = p_support_balls(n_max);
    let (k, w) = (bump_k(), bump_w());
    let fwd_balls = balls.clone();
    let inv_balls = balls.clone();
    let mut nondiff: Vec<Point2> = balls.iter().map(|b| b.0).collect();
    nondiff.push(Point2::ORIGIN);
    Ok(PlaneMap::new(
        format!("P:{n_max}"),
        move |p| apply_in_ball(&fwd_balls, p, |u| rho_forward(&k, &w, u)),
        move |p| apply_in_ball(&inv_balls, p, |u| rho_inverse(&k, &w, u)),
    )
    .with_nondiff_points(nondiff))
}
