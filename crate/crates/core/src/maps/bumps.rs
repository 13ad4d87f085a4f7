//! Pinned smooth auxiliary functions for the example maps.

use crate::error::{Error, Result};

/// Grid density used by construction-time certificates.
pub const CERTIFICATE_SAMPLES: usize = 4096;

/// A smooth real function with its derivative and the interval outside of
/// which it is constant.
#[derive(Debug, Clone, Copy)]
pub struct BumpSpec {
    pub name: &'static str,
    pub support: (f64, f64),
    value: fn(f64) -> f64,
    derivative: fn(f64) -> f64,
}

impl BumpSpec {
    pub fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        (self.derivative)(t)
    }

    /// `CERTIFICATE_SAMPLES` evenly spaced points of the open support,
    /// shrunk inward by `inset`.
    pub fn support_grid(&self, inset: f64) -> impl Iterator<Item = f64> {
        let (a, b) = (self.support.0 + inset, self.support.1 - inset);
        (0..CERTIFICATE_SAMPLES).map(move |i| a + (b - a) * i as f64 / (CERTIFICATE_SAMPLES - 1) as f64)
    }

    /// Extremes of the value over the support grid together with the
    /// constant value outside.
    pub fn range(&self) -> (f64, f64) {
        let outside = self.value(self.support.1 + 1.0);
        self.support_grid(0.0)
            .map(|t| self.value(t))
            .fold((outside, outside), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

/// The standard bump `exp(1 - 1/(1 - s²))` on `(-1, 1)`, equal to 1 at 0.
pub fn unit_bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

pub fn unit_bump_derivative(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let d = 1.0 - s * s;
        -2.0 * s / (d * d) * unit_bump(s)
    } else {
        0.0
    }
}

fn g_value(t: f64) -> f64 {
    1.0 + 0.5 * unit_bump((4.0 * t - 5.0) / 3.0)
}

fn g_derivative(t: f64) -> f64 {
    0.5 * unit_bump_derivative((4.0 * t - 5.0) / 3.0) * 4.0 / 3.0
}

fn q_value(t: f64) -> f64 {
    1.0 + t * unit_bump(2.0 * t)
}

fn q_derivative(t: f64) -> f64 {
    unit_bump(2.0 * t) + 2.0 * t * unit_bump_derivative(2.0 * t)
}

fn w_value(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

fn w_derivative(t: f64) -> f64 {
    if (0.0..=1.0).contains(&t) {
        6.0 * t * (1.0 - t)
    } else {
        0.0
    }
}

/// Amplitude of the angular bump in the base map of `P`.
pub const PENCIL_BUMP_AMPLITUDE: f64 = 0.25;

fn k_value(u: f64) -> f64 {
    1.0 + PENCIL_BUMP_AMPLITUDE * unit_bump(2.0 * u)
}

fn k_derivative(u: f64) -> f64 {
    2.0 * PENCIL_BUMP_AMPLITUDE * unit_bump_derivative(2.0 * u)
}

/// Radial scale profile of `G`: equal to 1 outside `[1/2, 2]`, `g(1) ≈ 1.4412`.
pub fn bump_g() -> BumpSpec {
    BumpSpec { name: "g", support: (0.5, 2.0), value: g_value, derivative: g_derivative }
}

/// Shear profile of `Q`: `q(0) = 1`, `q'(0) = 1`, `q ≡ 1` off `[-1/2, 1/2]`,
/// and `q(t) > t q'(t)` everywhere, certified on a grid.
pub fn bump_q() -> Result<BumpSpec> {
    let spec = BumpSpec { name: "q", support: (-0.5, 0.5), value: q_value, derivative: q_derivative };
    certify_ratio_monotone(&spec)?;
    Ok(spec)
}

/// Smoothstep `w(t) = t²(3 - 2t)` on `[0, 1]`, clamped outside.
pub fn bump_w() -> BumpSpec {
    BumpSpec { name: "w", support: (0.0, 1.0), value: w_value, derivative: w_derivative }
}

/// Angular profile of the base map of `P`, a bump in `x/y` around 0 so that
/// lines with `|slope| ≤ 2` are untouched.
pub fn bump_k() -> BumpSpec {
    BumpSpec { name: "k", support: (-0.5, 0.5), value: k_value, derivative: k_derivative }
}

/// Checks `q(t) - t q'(t) > 0` over the support grid and returns the
/// smallest value found. Outside the support the expression is 1.
pub fn certify_ratio_monotone(spec: &BumpSpec) -> Result<f64> {
    let margin = spec
        .support_grid(1e-6)
        .map(|t| spec.value(t) - t * spec.derivative(t))
        .fold(f64::INFINITY, f64::min);
    if margin > 0.0 {
        Ok(margin)
    } else {
        Err(Error::ConstraintViolation(format!(
            "{}(t) - t·{}'(t) reaches {margin:.6} on its support",
            spec.name, spec.name
        )))
    }
}
