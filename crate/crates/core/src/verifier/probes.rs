use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::maps::PlaneMap;
use crate::projgeom::{Point2, ResolutionParams};
use crate::tail::decay_exponent;
use crate::verdict::Verdict;

/// Difference quotients growing at least like `h^-INFINITE_GROWTH` as the
/// step shrinks are read as an infinite pushforward.
const INFINITE_GROWTH: f64 = 0.25;
/// Pushforwards of unit vectors shorter than this count as collapsed.
pub const ZERO_MAGNITUDE: f64 = 1e-6;
const PROBE_DIRECTIONS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushforwardEstimate {
    /// Extrapolated limit of the difference quotients.
    pub value: Point2,
    /// Spread of the extrapolated quotients over the finer half of the grid.
    pub residual: f64,
    /// Log-log slope of quotient magnitude against step.
    pub growth_exponent: f64,
    pub infinite: bool,
    pub zero: bool,
}

/// Limit of `(f(p + h v) − f(p)) / h` over the step grid, with one level of
/// Richardson extrapolation.
pub fn pushforward_vector(f: &PlaneMap, p: Point2, v: Point2, r: &ResolutionParams) -> PushforwardEstimate {
    let base = f.forward(p);
    let quotients: Vec<Point2> = r.h_grid.iter().map(|&h| (f.forward(p + v * h) - base) * (1.0 / h)).collect();
    let mags: Vec<f64> = quotients.iter().map(|q| q.norm()).collect();
    let exponent = decay_exponent(&mags, &r.h_grid).unwrap_or(0.0);
    let blows_up = mags.iter().any(|m| !m.is_finite())
        || (exponent <= -INFINITE_GROWTH && mags.windows(2).all(|w| w[1] >= w[0]));

    let extrapolated: Vec<Point2> = r
        .h_grid
        .windows(2)
        .zip(quotients.windows(2))
        .map(|(h, q)| {
            let ratio = h[1] / h[0];
            (q[1] - q[0] * ratio) * (1.0 / (1.0 - ratio))
        })
        .collect();
    let value = *extrapolated.last().expect("grid has at least two steps");
    let fine = &extrapolated[extrapolated.len() / 2..];
    let residual = fine.iter().map(|e| e.dist(value)).fold(0.0, f64::max);
    PushforwardEstimate {
        value,
        residual,
        growth_exponent: exponent,
        infinite: blows_up,
        zero: !blows_up && value.norm() <= ZERO_MAGNITUDE * v.norm(),
    }
}

/// Unit vectors at `k · 2π / n`.
pub fn unit_directions(n: usize) -> Vec<Point2> {
    (0..n).map(|k| Point2::polar(1.0, TAU * k as f64 / n as f64)).collect()
}

/// Least-squares 2×2 matrix `A` (row major) with `A v ≈ w`.
fn fit_linear(vs: &[Point2], ws: &[Point2]) -> Option<[f64; 4]> {
    let (mut m11, mut m12, mut m22) = (0.0, 0.0, 0.0);
    let (mut n11, mut n12, mut n21, mut n22) = (0.0, 0.0, 0.0, 0.0);
    for (v, w) in vs.iter().zip(ws) {
        m11 += v.x * v.x;
        m12 += v.x * v.y;
        m22 += v.y * v.y;
        n11 += w.x * v.x;
        n12 += w.x * v.y;
        n21 += w.y * v.x;
        n22 += w.y * v.y;
    }
    let det = m11 * m22 - m12 * m12;
    if det.abs() < 1e-300 {
        return None;
    }
    let (i11, i12, i22) = (m22 / det, -m12 / det, m11 / det);
    Some([n11 * i11 + n12 * i12, n11 * i12 + n12 * i22, n21 * i11 + n22 * i12, n21 * i12 + n22 * i22])
}

/// Differentiability at resolution: pushforwards of 16 unit vectors must be
/// finite, nonzero, individually stable and fit by one linear map.
pub fn differentiability_probe(f: &PlaneMap, p: Point2, r: &ResolutionParams) -> Verdict {
    let dirs = unit_directions(PROBE_DIRECTIONS);
    let est: Vec<PushforwardEstimate> = dirs.par_iter().map(|&v| pushforward_vector(f, p, v, r)).collect();
    let max_residual = est.iter().map(|e| e.residual).fold(0.0, f64::max);
    let angle = |k: usize| format!("direction {:.4} rad", TAU * k as f64 / PROBE_DIRECTIONS as f64);

    if let Some(k) = est.iter().position(|e| e.infinite) {
        return Verdict::fail(r, format!("{}: pushforward grows without bound", angle(k)))
            .with_flag("INFINITE")
            .with_residual("growth_exponent", est[k].growth_exponent);
    }
    if let Some(k) = est.iter().position(|e| e.zero) {
        return Verdict::fail(r, format!("{}: pushforward collapses to 0", angle(k)))
            .with_flag("ZERO_COLLAPSE")
            .with_residual("max_residual", max_residual);
    }
    let values: Vec<Point2> = est.iter().map(|e| e.value).collect();
    let Some(a) = fit_linear(&dirs, &values) else {
        return Verdict::inconclusive(r, "degenerate direction set");
    };
    let misfit: Vec<f64> = dirs
        .iter()
        .zip(&values)
        .map(|(v, w)| Point2::new(a[0] * v.x + a[1] * v.y, a[2] * v.x + a[3] * v.y).dist(*w))
        .collect();
    let (worst, fit_error) = misfit.iter().enumerate().fold((0, 0.0), |acc, (k, &m)| if m > acc.1 { (k, m) } else { acc });
    let verdict = if fit_error < r.slope_tolerance && max_residual < r.slope_tolerance {
        Verdict::pass(r)
    } else if fit_error >= r.slope_tolerance {
        Verdict::fail(r, format!("{}: no linear map fits (misfit {fit_error:.6})", angle(worst)))
    } else {
        let k = est.iter().enumerate().fold((0, 0.0), |acc, (k, e)| if e.residual > acc.1 { (k, e.residual) } else { acc }).0;
        Verdict::fail(r, format!("{}: difference quotients do not settle", angle(k)))
    };
    verdict
        .with_residual("fit_error", fit_error)
        .with_residual("max_residual", max_residual)
        .with_residual("a11", a[0])
        .with_residual("a12", a[1])
        .with_residual("a21", a[2])
        .with_residual("a22", a[3])
}
